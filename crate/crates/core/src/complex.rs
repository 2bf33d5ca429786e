//! The cube complex of enhanced states with the universal differential.
//!
//! A generator is an enhanced state; its label is the set of negative-marked crossings in
//! increasing order. Flipping the positive marker at `a` appends `a` to the label, and moving it
//! into sorted position costs `(−1)^{#negative crossings after a}`.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::diagram::LinkDiagram;
use crate::error::{Error, Result};
use crate::frobenius::{FrobeniusCalculus, Sign};
use crate::polyring::BivariatePoly;
use crate::resolution::{enhanced_states, gradings, marker_order, state_json, EnhancedState, Gradings, Smoothings};

pub type Generator = EnhancedState;

pub const DEFAULT_MAX_CROSSINGS: usize = 14;

/// Crossing cap, overridable through `KHOVEQ_MAX_CROSSINGS`.
pub fn max_crossings() -> usize {
    std::env::var("KHOVEQ_MAX_CROSSINGS").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_MAX_CROSSINGS)
}

/// Sparse ℤ[s,t]-combination of generators.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChainVector(BTreeMap<Generator, BivariatePoly>);

impl ChainVector {
    pub fn zero() -> Self {
        ChainVector(BTreeMap::new())
    }

    pub fn basis(g: Generator) -> Self {
        let mut v = Self::zero();
        v.add_term(g, &BivariatePoly::one());
        v
    }

    pub fn add_term(&mut self, g: Generator, c: &BivariatePoly) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(g).or_insert_with(BivariatePoly::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&g);
        }
    }

    pub fn add_scaled(&mut self, other: &ChainVector, k: &BivariatePoly) {
        for (g, c) in &other.0 {
            self.add_term(*g, &(c * k));
        }
    }

    pub fn add(&mut self, other: &ChainVector) {
        for (g, c) in &other.0 {
            self.add_term(*g, c);
        }
    }

    pub fn sub(&mut self, other: &ChainVector) {
        for (g, c) in &other.0 {
            self.add_term(*g, &-c);
        }
    }

    pub fn minus(&self, other: &ChainVector) -> ChainVector {
        let mut v = self.clone();
        v.sub(other);
        v
    }

    pub fn neg(&self) -> ChainVector {
        ChainVector(self.0.iter().map(|(g, c)| (*g, -c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, g: &Generator) -> BivariatePoly {
        self.0.get(g).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Generator, &BivariatePoly)> {
        self.0.iter()
    }

    /// Applies a linear map given on basis elements.
    pub fn map<F: FnMut(&Generator) -> ChainVector>(&self, mut f: F) -> ChainVector {
        let mut out = ChainVector::zero();
        for (g, c) in &self.0 {
            out.add_scaled(&f(g), c);
        }
        out
    }

    pub fn to_json(&self, cube: &Cube) -> Value {
        Value::Array(
            self.0
                .iter()
                .map(|(g, c)| json!({"state": state_json(&cube.d, g, cube.circles(g.markers)), "coeff": c.to_json()}))
                .collect(),
        )
    }
}

impl fmt::Display for ChainVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.0.iter().map(|(g, c)| format!("({c})[m={:b},s={:b}]", g.markers, g.signs)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// How the circles change when the positive marker at one crossing is flipped.
#[derive(Clone, Debug)]
pub struct Transition {
    /// Merge: the circles through slot 0 and slot 2. Split: the circle, twice.
    pub inputs: (usize, usize),
    /// Merge: the merged circle, twice. Split: the circles through slot 0 and slot 1.
    pub outputs: (usize, usize),
    pub merge: bool,
    /// New id of every old circle not in `inputs`.
    pub carry: Vec<usize>,
}

/// A diagram with its smoothings and a calculus: everything needed to apply the differential.
#[derive(Clone, Debug)]
pub struct Cube {
    pub d: LinkDiagram,
    pub calc: FrobeniusCalculus,
    pub sm: Smoothings,
}

impl Cube {
    pub fn new(d: &LinkDiagram, calc: &FrobeniusCalculus) -> Result<Self> {
        Self::with_cap(d, calc, max_crossings())
    }

    pub fn with_cap(d: &LinkDiagram, calc: &FrobeniusCalculus, cap: usize) -> Result<Self> {
        let n = d.n_crossings();
        if n > cap.min(63) {
            return Err(Error::TooLarge { crossings: n, cap });
        }
        Ok(Cube { d: d.clone(), calc: calc.clone(), sm: Smoothings::new(d) })
    }

    pub fn circles(&self, markers: u64) -> usize {
        self.sm.circle_count(markers)
    }

    pub fn gradings(&self, g: &Generator) -> Gradings {
        gradings(&self.d, g, self.circles(g.markers))
    }

    /// Circle through a slot of a crossing under the given markers.
    pub fn circle_at(&self, markers: u64, crossing: usize, pos: usize) -> usize {
        self.sm.get(markers).circle_of_slot(&self.d, crossing, pos)
    }

    pub fn transition(&self, markers: u64, a: usize) -> Transition {
        let old = self.sm.get(markers);
        let new = self.sm.get(markers | 1 << a);
        let d = &self.d;
        let (x0, x1, x2) = (d.arc_at(a, 0), d.arc_at(a, 1), d.arc_at(a, 2));
        let (c0, c2) = (old.arc_circle[x0], old.arc_circle[x2]);
        let merge = c0 != c2;
        let outputs =
            if merge { (new.arc_circle[x0], new.arc_circle[x0]) } else { (new.arc_circle[x0], new.arc_circle[x1]) };
        let mut carry = vec![usize::MAX; old.count];
        for (x, &k) in old.arc_circle.iter().enumerate() {
            carry[k] = new.arc_circle[x];
        }
        let free = d.free_circles();
        for f in 0..free {
            carry[old.count - free + f] = new.count - free + f;
        }
        Transition { inputs: (c0, c2), outputs, merge, carry }
    }

    /// Sign of moving `a` into sorted position within the label of `markers`.
    pub fn label_sign(markers: u64, a: usize) -> bool {
        (markers >> (a + 1)).count_ones() % 2 == 1
    }

    /// Component of the differential at crossing `a`, including the label sign.
    pub fn partial(&self, g: &Generator, a: usize) -> ChainVector {
        let mut out = ChainVector::zero();
        if g.is_negative(a) {
            return out;
        }
        let tr = self.transition(g.markers, a);
        let neg = Self::label_sign(g.markers, a);
        for (signs, c) in self.apply_transition(g, &tr) {
            out.add_term(Generator::new(g.markers | 1 << a, signs), &if neg { -c } else { c });
        }
        out
    }

    /// Sign masks and coefficients produced from `g` by a transition, without the label sign.
    pub fn apply_transition(&self, g: &Generator, tr: &Transition) -> Vec<(u64, BivariatePoly)> {
        let mut base = 0u64;
        for (k, &nk) in tr.carry.iter().enumerate() {
            if k != tr.inputs.0 && k != tr.inputs.1 && g.circle_negative(k) {
                base |= 1 << nk;
            }
        }
        let p = Sign::from_bit(g.circle_negative(tr.inputs.0));
        let q = Sign::from_bit(g.circle_negative(tr.inputs.1));
        let mut out = Vec::new();
        if tr.merge {
            for (r, c) in self.calc.multiply(p, q).terms() {
                let m = if r[0].is_minus() { base | 1 << tr.outputs.0 } else { base };
                out.push((m, c.clone()));
            }
        } else {
            for (r, c) in self.calc.comultiply(p).terms() {
                let mut m = base;
                if r[0].is_minus() {
                    m |= 1 << tr.outputs.0;
                }
                if r[1].is_minus() {
                    m |= 1 << tr.outputs.1;
                }
                out.push((m, c.clone()));
            }
        }
        out
    }

    pub fn differential(&self, g: &Generator) -> ChainVector {
        let mut out = ChainVector::zero();
        for a in 0..self.d.n_crossings() {
            out.add(&self.partial(g, a));
        }
        out
    }

    pub fn apply_differential(&self, v: &ChainVector) -> ChainVector {
        v.map(|g| self.differential(g))
    }
}

/// Generators of one homological degree with their matrix position.
#[derive(Clone, Debug)]
pub struct Degree {
    /// Number of negative markers.
    pub r: usize,
    pub i: i64,
    pub gens: Vec<Generator>,
    offsets: BTreeMap<u64, usize>,
}

impl Degree {
    pub fn index(&self, g: &Generator) -> Option<usize> {
        self.offsets.get(&g.markers).map(|o| o + g.signs as usize)
    }
}

/// Column-sparse matrix over ℤ[s,t].
#[derive(Clone, Debug, Default)]
pub struct SparsePolyMatrix {
    pub rows: usize,
    pub cols: Vec<Vec<(usize, BivariatePoly)>>,
}

impl SparsePolyMatrix {
    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BivariatePoly)> {
        self.cols.iter().enumerate().flat_map(|(c, col)| col.iter().map(move |(r, p)| (*r, c, p)))
    }
}

/// The whole complex: degrees `r = 0..=n` and differentials `d[r]: C_r → C_{r+1}`.
#[derive(Clone, Debug)]
pub struct ComplexRepr {
    pub cube: Cube,
    pub degrees: Vec<Degree>,
    pub d: Vec<SparsePolyMatrix>,
}

pub fn build_complex(d: &LinkDiagram, calc: &FrobeniusCalculus) -> Result<ComplexRepr> {
    build_complex_with_cap(d, calc, max_crossings())
}

pub fn build_complex_with_cap(d: &LinkDiagram, calc: &FrobeniusCalculus, cap: usize) -> Result<ComplexRepr> {
    let cube = Cube::with_cap(d, calc, cap)?;
    Ok(ComplexRepr::from_cube(cube))
}

impl ComplexRepr {
    pub fn from_cube(cube: Cube) -> Self {
        let n = cube.d.n_crossings();
        let nm = cube.d.n_minus() as i64;
        let states = enhanced_states(&cube.d, &cube.sm);
        let degrees: Vec<Degree> = marker_order(n)
            .into_iter()
            .zip(states)
            .enumerate()
            .map(|(r, (ms, gens))| {
                let mut offsets = BTreeMap::new();
                let mut o = 0;
                for m in ms {
                    offsets.insert(m, o);
                    o += 1usize << cube.circles(m);
                }
                Degree { r, i: r as i64 - nm, gens, offsets }
            })
            .collect();
        let d = (0..n)
            .map(|r| {
                let (src, dst) = (&degrees[r], &degrees[r + 1]);
                let cols = src
                    .gens
                    .par_iter()
                    .map(|g| {
                        cube.differential(g)
                            .iter()
                            .map(|(h, c)| (dst.index(h).expect("target in next degree"), c.clone()))
                            .collect()
                    })
                    .collect();
                SparsePolyMatrix { rows: dst.gens.len(), cols }
            })
            .collect();
        ComplexRepr { cube, degrees, d }
    }

    pub fn diagram(&self) -> &LinkDiagram {
        &self.cube.d
    }

    pub fn generator_count(&self) -> usize {
        self.degrees.iter().map(|g| g.gens.len()).sum()
    }

    /// Column of `d[r]` as a chain vector.
    pub fn column(&self, r: usize, col: usize) -> ChainVector {
        let mut v = ChainVector::zero();
        for (row, c) in &self.d[r].cols[col] {
            v.add_term(self.degrees[r + 1].gens[*row], c);
        }
        v
    }

    pub fn to_json(&self) -> Value {
        let dd = self.diagram();
        let gens: Vec<Value> = self
            .degrees
            .iter()
            .map(|deg| {
                json!({
                    "i": deg.i,
                    "generators": deg.gens.iter().map(|g| state_json(dd, g, self.cube.circles(g.markers))).collect::<Vec<_>>(),
                })
            })
            .collect();
        let mats: Vec<Value> = self
            .d
            .iter()
            .enumerate()
            .map(|(r, m)| {
                json!({
                    "from_i": self.degrees[r].i,
                    "entries": m.triplets().map(|(row, col, p)| json!([row, col, p.to_json()])).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({"diagram": dd.to_pd_string(), "degrees": gens, "differentials": mats})
    }
}

/// Outcome of an exhaustive check, with the first failure if any.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub ok: bool,
    pub checked: usize,
    pub witness: Option<Value>,
}

impl CheckReport {
    pub fn to_json(&self) -> Value {
        let mut v =
            json!({"identity": self.name, "status": if self.ok { "pass" } else { "fail" }, "checked": self.checked});
        if let Some(w) = &self.witness {
            v["witness"] = w.clone();
        }
        v
    }
}

/// Checks `d[r+1]·d[r] = 0` over ℤ[s,t] on every generator.
pub fn verify_delta_squared(cx: &ComplexRepr) -> CheckReport {
    let mut checked = 0;
    for r in 0..cx.d.len().saturating_sub(1) {
        let src = &cx.degrees[r];
        checked += src.gens.len();
        let bad = (0..src.gens.len()).into_par_iter().find_first(|&col| {
            let mut v = ChainVector::zero();
            for (row, c) in &cx.d[r].cols[col] {
                v.add_scaled(&cx.column(r + 1, *row), c);
            }
            !v.is_zero()
        });
        if let Some(col) = bad {
            let g = src.gens[col];
            let dd = cx.cube.apply_differential(&cx.cube.differential(&g));
            let w = json!({
                "generator": state_json(cx.diagram(), &g, cx.cube.circles(g.markers)),
                "delta_squared": dd.to_json(&cx.cube),
            });
            return CheckReport { name: "delta_squared".into(), ok: false, checked, witness: Some(w) };
        }
    }
    CheckReport { name: "delta_squared".into(), ok: true, checked, witness: None }
}

/// Checks that every entry at monomial `s^a t^b` joins generators with `Δi = 1` and
/// `Δj = 2a + 4b`.
pub fn verify_grading(cx: &ComplexRepr) -> CheckReport {
    let mut checked = 0;
    for (r, m) in cx.d.iter().enumerate() {
        for (row, col, p) in m.triplets() {
            let (g, h) = (cx.degrees[r].gens[col], cx.degrees[r + 1].gens[row]);
            let (gg, gh) = (cx.cube.gradings(&g), cx.cube.gradings(&h));
            for (mono, _) in p.terms() {
                checked += 1;
                let want = 2 * mono.s as i64 + 4 * mono.t as i64;
                if gh.i - gg.i != 1 || gh.j - gg.j != want {
                    let w = json!({
                        "source": state_json(cx.diagram(), &g, cx.cube.circles(g.markers)),
                        "target": state_json(cx.diagram(), &h, cx.cube.circles(h.markers)),
                        "monomial": [mono.s, mono.t],
                    });
                    return CheckReport { name: "grading".into(), ok: false, checked, witness: Some(w) };
                }
            }
        }
    }
    CheckReport { name: "grading".into(), ok: true, checked, witness: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;

    #[test]
    fn kink_differential() {
        let d = parse_pd("X(1,1,2,2)").unwrap();
        let cube = Cube::new(&d, &FrobeniusCalculus::universal()).unwrap();
        // markers + gives two circles; flipping merges them
        let tr = cube.transition(0, 0);
        assert!(tr.merge);
        let g = Generator::new(0, 0);
        let v = cube.differential(&g);
        assert_eq!(v.coeff(&Generator::new(1, 0)), BivariatePoly::s());
        assert_eq!(v.coeff(&Generator::new(1, 1)), BivariatePoly::t());
        assert!(cube.differential(&Generator::new(1, 0)).is_zero());
    }

    #[test]
    fn unknot_and_trefoil_sizes() {
        let u = parse_pd("O").unwrap();
        let cx = build_complex(&u, &FrobeniusCalculus::universal()).unwrap();
        assert_eq!(cx.generator_count(), 2);
        assert!(cx.d.is_empty());
        let t = parse_pd("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)").unwrap();
        let cx = build_complex(&t, &FrobeniusCalculus::universal()).unwrap();
        let total: usize = (0..8u64).map(|m| 1usize << cx.cube.circles(m)).sum();
        assert_eq!(cx.generator_count(), total);
        assert!(verify_delta_squared(&cx).ok);
        assert!(verify_grading(&cx).ok);
    }

    #[test]
    fn cap_is_enforced() {
        let t = parse_pd("X(1,5,2,4) X(3,1,4,6) X(5,3,6,2)").unwrap();
        assert!(matches!(build_complex_with_cap(&t, &FrobeniusCalculus::universal(), 2), Err(Error::TooLarge { .. })));
    }
}
