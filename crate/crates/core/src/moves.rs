//! Retractions `ρ` and homotopies `h` for the three Reidemeister moves, checked symbolically
//! over ℤ[s,t] on the full complex of the diagram containing the move.
//!
//! Maps are written on words: `S ⊗ [x a b]` means the state `S` with label `x` followed by the
//! tangle crossings. A stored generator carries its label in increasing order, so a word costs
//! the parity of the permutation that sorts it.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::complex::{ChainVector, CheckReport, ComplexRepr, Cube, Generator};
use crate::diagram::{
    apply_move, find_move_sites, ArcImage, Correspondence, Dart, Direction, LinkDiagram, MoveKind, MoveSite,
};
use crate::error::{Error, Result};
use crate::frobenius::{FrobeniusCalculus, Sign};
use crate::homology::homology_at;
use crate::polyring::Specialization;
use crate::resolution::{enhanced_states, state_json};

const NONE: usize = usize::MAX;

/// A move site resolved into roles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Local {
    pub kind: MoveKind,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    /// Arcs inside the tangle: the kink loop, the bigon sides or the triangle sides.
    pub internal: Vec<usize>,
    /// R1 only: the positive marker closes the kink into its own circle.
    pub split_on_plus: bool,
    pub variant: String,
}

/// Local generator patterns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    /// Kink closed off as its own circle carrying the given sign.
    Blue(Sign),
    Red,
    /// R2 markers at (a, b); for `+−` the sign of the small circle.
    R2 {
        a: Sign,
        b: Sign,
        small: Option<Sign>,
    },
    /// R3 markers at (a, b, c); for `+−+` the sign of the small circle.
    R3 {
        a: Sign,
        b: Sign,
        c: Sign,
        small: Option<Sign>,
    },
}

impl Pattern {
    pub fn name(&self) -> String {
        let s = |x: Sign| x.symbol();
        match *self {
            Pattern::Blue(k) => format!("blue(p,{})", s(k)),
            Pattern::Red => "red(p)".into(),
            Pattern::R2 { a, b, small } => match small {
                Some(Sign::Minus) => "S_{+-,-}".into(),
                _ => format!("S_{{{}{}}}", s(a), s(b)),
            },
            Pattern::R3 { a, b, c, small } => match small {
                Some(Sign::Minus) => "S_{+-+,-}".into(),
                _ => format!("S_{{{}{}{}}}", s(a), s(b), s(c)),
            },
        }
    }
}

fn arc_of(d: &LinkDiagram, x: Dart) -> usize {
    d.arc_at(x.crossing, x.pos)
}

impl Local {
    pub fn r1(d: &LinkDiagram, a: usize) -> Result<Local> {
        let lp = (0..d.arc_count()).find(|&x| {
            let (t, h) = (d.tail(x), d.head(x));
            t.crossing == a && h.crossing == a && (t.pos + 4 - h.pos) % 2 == 1
        });
        let lp = lp.ok_or_else(|| Error::Move(format!("crossing {} is not a kink", a + 1)))?;
        let lo = d.tail(lp).pos.min(d.head(lp).pos);
        let hi = d.tail(lp).pos.max(d.head(lp).pos);
        let split_on_plus = (lo, hi) == (0, 1) || (lo, hi) == (2, 3);
        let variant = if d.sign(a) > 0 { "positive kink" } else { "negative kink" };
        Ok(Local {
            kind: MoveKind::R1,
            a,
            b: NONE,
            c: NONE,
            internal: vec![lp],
            split_on_plus,
            variant: variant.into(),
        })
    }

    /// `face` is a bigon with one A-join (odd slot) and one B-join corner.
    pub fn r2(d: &LinkDiagram, face: &[Dart]) -> Result<Local> {
        if face.len() != 2 || face[0].crossing == face[1].crossing || face[0].pos % 2 == face[1].pos % 2 {
            return Err(Error::Move("not a removable bigon".into()));
        }
        let (a, b) = if face[0].pos % 2 == 1 { (face[0], face[1]) } else { (face[1], face[0]) };
        let e1 = arc_of(d, face[0]);
        let e2 = arc_of(d, face[1]);
        let parallel = d.tail(e1).crossing == d.head(e2).crossing;
        let variant = if parallel { "antiparallel" } else { "parallel" };
        Ok(Local {
            kind: MoveKind::R2,
            a: a.crossing,
            b: b.crossing,
            c: NONE,
            internal: vec![e1, e2],
            split_on_plus: false,
            variant: variant.into(),
        })
    }

    /// `face` is a triangle with two A-join corners. The strand over at both of its triangle
    /// crossings is the top, the one under at both is the bottom; `b` is where they meet and
    /// must be the B-join corner.
    pub fn r3(d: &LinkDiagram, face: &[Dart]) -> Result<Local> {
        if face.len() != 3 {
            return Err(Error::Move("not a triangle".into()));
        }
        let a_joins = face.iter().filter(|x| x.pos % 2 == 1).count();
        if a_joins != 2 {
            return Err(Error::Unsupported(format!("R3 triangle with {a_joins} A-join corners")));
        }
        // edge k runs from face[k] to the next corner
        let mut top = None;
        let mut bottom = None;
        for x in face {
            let y = d.other_end(*x);
            match (x.pos % 2 == 1, y.pos % 2 == 1) {
                (true, true) => top = Some((x.crossing, y.crossing)),
                (false, false) => bottom = Some((x.crossing, y.crossing)),
                _ => {}
            }
        }
        let (Some(t), Some(bo)) = (top, bottom) else {
            return Err(Error::Move("triangle is not a third-move configuration".into()));
        };
        let shared = |e: (usize, usize), f: (usize, usize)| if e.0 == f.0 || e.0 == f.1 { e.0 } else { e.1 };
        let b = shared(t, bo);
        let c = if t.0 == b { t.1 } else { t.0 };
        let a = if bo.0 == b { bo.1 } else { bo.0 };
        let b_corner = face.iter().find(|x| x.crossing == b).unwrap();
        if b_corner.pos % 2 == 1 {
            return Err(Error::Unsupported("R3 triangle whose top and bottom strands meet at an A-join".into()));
        }
        let internal = face.iter().map(|x| arc_of(d, *x)).collect();
        Ok(Local { kind: MoveKind::R3, a, b, c, internal, split_on_plus: false, variant: "AAB".into() })
    }

    /// Every resolution of a site; an R2 site on two crossings may bound several bigons.
    pub fn from_site(d: &LinkDiagram, site: &MoveSite) -> Result<Vec<Local>> {
        match site.kind {
            MoveKind::R1 => Ok(vec![Local::r1(d, site.crossings[0])?]),
            MoveKind::R2 => {
                let mut want = site.crossings.clone();
                want.sort();
                let out: Vec<Local> = d
                    .faces()
                    .iter()
                    .filter(|f| {
                        f.len() == 2 && {
                            let mut cs = vec![f[0].crossing, f[1].crossing];
                            cs.sort();
                            cs == want
                        }
                    })
                    .filter_map(|f| Local::r2(d, f).ok())
                    .collect();
                if out.is_empty() {
                    return Err(Error::Move("crossings do not bound a removable bigon".into()));
                }
                Ok(out)
            }
            MoveKind::R3 => {
                let face = d
                    .faces()
                    .into_iter()
                    .find(|f| f.len() == 3 && f.iter().map(|x| x.crossing).collect::<Vec<_>>() == site.crossings);
                let face = face.ok_or_else(|| Error::Move("crossings do not bound a triangle".into()))?;
                Ok(vec![Local::r3(d, &face)?])
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let c = |x: usize| if x == NONE { Value::Null } else { json!(x + 1) };
        json!({"kind": self.kind.to_string(), "a": c(self.a), "b": c(self.b), "c": c(self.c), "variant": self.variant})
    }
}

/// Parity of the permutation sorting a word; true when odd.
pub fn word_parity(word: &[usize]) -> bool {
    let mut inv = 0;
    for i in 0..word.len() {
        for j in i + 1..word.len() {
            if word[i] > word[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 1
}

/// Parity of the word `[x tail]`, where `x` lists the remaining negative crossings in order.
pub(crate) fn tail_parity(markers: u64, tail: &[usize]) -> bool {
    let mut odd = word_parity(tail);
    for &t in tail {
        let mut rest = markers >> (t + 1);
        for &u in tail {
            if u > t {
                rest &= !(1 << (u - t - 1));
            }
        }
        odd ^= rest.count_ones() % 2 == 1;
    }
    odd
}

fn signed(g: Generator, odd: bool) -> ChainVector {
    let mut v = ChainVector::basis(g);
    if odd {
        v = v.neg();
    }
    v
}

fn bit(m: u64, c: usize) -> bool {
    m >> c & 1 == 1
}

/// Maps for one move site inside one complex.
pub struct MoveMaps<'a> {
    pub cube: &'a Cube,
    pub loc: Local,
    /// Use `g − h(δ_a g)` for `ρ₃` on `S_{+−+}` instead of the expanded formula.
    pub r3_alternative: bool,
}

impl<'a> MoveMaps<'a> {
    pub fn new(cube: &'a Cube, loc: Local) -> Result<Self> {
        let mm = MoveMaps { cube, loc, r3_alternative: false };
        mm.check_small_circle()?;
        Ok(mm)
    }

    /// The state that should contain the small circle must actually contain it.
    fn check_small_circle(&self) -> Result<()> {
        let l = &self.loc;
        let markers = match l.kind {
            MoveKind::R1 => {
                if l.split_on_plus {
                    0
                } else {
                    1 << l.a
                }
            }
            MoveKind::R2 | MoveKind::R3 => 1 << l.b,
        };
        let cs = self.cube.sm.get(markers);
        let k = cs.arc_circle[l.internal[0]];
        let members: Vec<usize> = (0..cs.arc_circle.len()).filter(|&x| cs.arc_circle[x] == k).collect();
        if members.iter().all(|x| l.internal.contains(x)) {
            Ok(())
        } else {
            Err(Error::Move("tangle does not close into a small circle where expected".into()))
        }
    }

    fn small_sign(&self, g: &Generator) -> Sign {
        let k = self.cube.sm.get(g.markers).arc_circle[self.loc.internal[0]];
        Sign::from_bit(g.circle_negative(k))
    }

    pub fn classify(&self, g: &Generator) -> Pattern {
        let l = &self.loc;
        let s = |c: usize| Sign::from_bit(bit(g.markers, c));
        match l.kind {
            MoveKind::R1 => {
                if bit(g.markers, l.a) != l.split_on_plus {
                    Pattern::Blue(self.small_sign(g))
                } else {
                    Pattern::Red
                }
            }
            MoveKind::R2 => {
                let (a, b) = (s(l.a), s(l.b));
                let small = (a == Sign::Plus && b == Sign::Minus).then(|| self.small_sign(g));
                Pattern::R2 { a, b, small }
            }
            MoveKind::R3 => {
                let (a, b, c) = (s(l.a), s(l.b), s(l.c));
                let small = (a == Sign::Plus && b == Sign::Minus && c == Sign::Plus).then(|| self.small_sign(g));
                Pattern::R3 { a, b, c, small }
            }
        }
    }

    /// Moves the outside circle signs of `g` onto the state with `markers`, optionally adding
    /// the small circle with a sign. A small circle of `g` is dropped.
    pub fn transfer(&self, g: &Generator, markers: u64, small: Option<Sign>) -> Generator {
        let old = self.cube.sm.get(g.markers);
        let new = self.cube.sm.get(markers);
        let mut assigned: Vec<Option<bool>> = vec![None; new.count];
        for (x, &kn) in new.arc_circle.iter().enumerate() {
            if self.loc.internal.contains(&x) {
                continue;
            }
            let neg = g.circle_negative(old.arc_circle[x]);
            match assigned[kn] {
                Some(v) => assert_eq!(v, neg, "outside arcs disagree on a circle sign"),
                None => assigned[kn] = Some(neg),
            }
        }
        let free = self.cube.d.free_circles();
        for f in 0..free {
            assigned[new.count - free + f] = Some(g.circle_negative(old.count - free + f));
        }
        if let Some(sg) = small {
            let k = new.arc_circle[self.loc.internal[0]];
            assert!(assigned[k].is_none(), "small circle touches the outside");
            assigned[k] = Some(sg.is_minus());
        }
        let mut signs = 0u64;
        for (k, v) in assigned.iter().enumerate() {
            if v.expect("every circle receives a sign") {
                signs |= 1 << k;
            }
        }
        Generator::new(markers, signs)
    }

    fn partial(&self, v: &ChainVector, c: usize) -> ChainVector {
        v.map(|g| self.cube.partial(g, c))
    }

    /// `S_{+−}(p,q) ⊗ [xb] ↦ S_{++}(p,q) ⊗ [x]` (also for `S_{+−+}` in R3).
    fn umap(&self, g: &Generator) -> ChainVector {
        let b = self.loc.b;
        let t = self.transfer(g, g.markers & !(1 << b), None);
        signed(t, tail_parity(g.markers, &[b]))
    }

    /// `S_{−−}(p,q) ⊗ [xab] ↦ S_{+−,−}(p,q) ⊗ [xb]`.
    fn vmap(&self, g: &Generator) -> ChainVector {
        let (a, b) = (self.loc.a, self.loc.b);
        let m = g.markers & !(1 << a);
        let t = self.transfer(g, m, Some(Sign::Minus));
        signed(t, tail_parity(g.markers, &[a, b]) ^ tail_parity(m, &[b]))
    }

    /// `S_{−−+} ⊗ [xab] ↦ S_{+−−} ⊗ [xbc]`.
    fn tmap(&self, g: &Generator) -> ChainVector {
        let (a, b, c) = (self.loc.a, self.loc.b, self.loc.c);
        let m = (g.markers & !(1 << a)) | 1 << c;
        let t = self.transfer(g, m, None);
        signed(t, tail_parity(g.markers, &[a, b]) ^ tail_parity(m, &[b, c]))
    }

    /// Kink maps. Positive marker splitting: `red(u) ⊗ [xa] ↦ blue(u,−) ⊗ [x]`. Otherwise:
    /// `blue(p,+) ⊗ [xa] ↦ red(p) ⊗ [x]`.
    fn kink_map(&self, g: &Generator) -> ChainVector {
        let a = self.loc.a;
        let m = g.markers & !(1 << a);
        let small = self.loc.split_on_plus.then_some(Sign::Minus);
        signed(self.transfer(g, m, small), tail_parity(g.markers, &[a]))
    }

    pub fn h(&self, g: &Generator) -> ChainVector {
        let pat = self.classify(g);
        match pat {
            Pattern::Red if self.loc.split_on_plus => self.kink_map(g),
            Pattern::Blue(Sign::Plus) if !self.loc.split_on_plus => self.kink_map(g),
            Pattern::R2 { a: Sign::Plus, b: Sign::Minus, small: Some(Sign::Plus) }
            | Pattern::R3 { a: Sign::Plus, b: Sign::Minus, c: Sign::Plus, small: Some(Sign::Plus) } => self.umap(g),
            Pattern::R2 { a: Sign::Minus, b: Sign::Minus, .. }
            | Pattern::R3 { a: Sign::Minus, b: Sign::Minus, c: Sign::Plus, .. } => self.vmap(g).neg(),
            _ => ChainVector::zero(),
        }
    }

    pub fn rho(&self, g: &Generator) -> ChainVector {
        let l = &self.loc;
        let v = ChainVector::basis(*g);
        match self.classify(g) {
            Pattern::Blue(Sign::Plus) if l.split_on_plus => v.minus(&self.partial(&v, l.a).map(|k| self.kink_map(k))),
            Pattern::Blue(Sign::Plus) => v.minus(&self.partial(&self.kink_map(g), l.a)),
            Pattern::Blue(Sign::Minus) if !l.split_on_plus => v,
            Pattern::Blue(_) | Pattern::Red => ChainVector::zero(),
            Pattern::R2 { a: Sign::Minus, b: Sign::Plus, .. }
            | Pattern::R3 { a: Sign::Minus, b: Sign::Plus, c: Sign::Plus, .. } => {
                let mut out = v.clone();
                out.add(&self.partial(&v, l.b).map(|k| self.vmap(k)));
                out
            }
            Pattern::R2 { a: Sign::Plus, b: Sign::Minus, small: Some(Sign::Plus) } => {
                let w = self.partial(&self.umap(g), l.a);
                let mut out = w.neg();
                out.sub(&self.partial(&w, l.b).map(|k| self.vmap(k)));
                out
            }
            Pattern::R2 { .. } => ChainVector::zero(),
            Pattern::R3 { c: Sign::Minus, .. } => v,
            Pattern::R3 { a: Sign::Minus, b: Sign::Minus, .. } => self.tmap(g),
            Pattern::R3 { a: Sign::Plus, b: Sign::Minus, small: Some(Sign::Plus), .. } => {
                if self.r3_alternative {
                    let hd = self.partial(&v, l.a).map(|k| self.h(k));
                    return v.minus(&hd);
                }
                let u = self.umap(g);
                let ua = self.partial(&u, l.a);
                let mut out = ua.neg();
                out.sub(&self.partial(&ua, l.b).map(|k| self.vmap(k)));
                out.sub(&self.partial(&u, l.c));
                out
            }
            Pattern::R3 { .. } => ChainVector::zero(),
        }
    }
}

pub fn all_generators(cube: &Cube) -> Vec<Generator> {
    enhanced_states(&cube.d, &cube.sm).into_iter().flatten().collect()
}

fn first_failure<F>(name: &str, cube: &Cube, gens: &[Generator], test: F) -> CheckReport
where
    F: Fn(&Generator) -> ChainVector + Sync,
{
    let bad = gens.par_iter().find_first(|g| !test(g).is_zero());
    let witness = bad.map(|g| {
        json!({
            "generator": state_json(&cube.d, g, cube.circles(g.markers)),
            "difference": test(g).to_json(cube),
        })
    });
    CheckReport { name: name.into(), ok: witness.is_none(), checked: gens.len(), witness }
}

/// `δ∘f = f∘δ` on every generator of the source.
pub fn verify_chain_map<F>(src: &Cube, dst: &Cube, f: F) -> CheckReport
where
    F: Fn(&Generator) -> ChainVector + Sync,
{
    let gens = all_generators(src);
    let bad = gens.par_iter().find_first(|g| {
        let lhs = dst.apply_differential(&f(g));
        let rhs = src.differential(g).map(&f);
        lhs != rhs
    });
    let witness = bad.map(|g| {
        let lhs = dst.apply_differential(&f(g));
        let rhs = src.differential(g).map(&f);
        json!({
            "generator": state_json(&src.d, g, src.circles(g.markers)),
            "difference": lhs.minus(&rhs).to_json(dst),
        })
    });
    CheckReport { name: "chain_map".into(), ok: witness.is_none(), checked: gens.len(), witness }
}

/// `δh + hδ = id − ρ` on every generator.
pub fn verify_homotopy<H, R>(cube: &Cube, h: H, rho: R) -> CheckReport
where
    H: Fn(&Generator) -> ChainVector + Sync,
    R: Fn(&Generator) -> ChainVector + Sync,
{
    let gens = all_generators(cube);
    first_failure("homotopy", cube, &gens, |g| {
        let mut lhs = cube.apply_differential(&h(g));
        lhs.add(&cube.differential(g).map(&h));
        let rhs = ChainVector::basis(*g).minus(&rho(g));
        lhs.minus(&rhs)
    })
}

/// Every check for one site.
#[derive(Clone, Debug)]
pub struct MoveReport {
    pub local: Local,
    pub checks: Vec<CheckReport>,
    /// Checks of the alternative `ρ₃` form; reported but not part of the verdict.
    pub recorded: Vec<CheckReport>,
}

impl MoveReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| {
                let mut v = c.to_json();
                v["move"] = json!(self.local.kind.to_string());
                v["variant"] = json!(self.local.variant);
                v
            })
            .collect();
        let recorded: Vec<Value> = self.recorded.iter().map(CheckReport::to_json).collect();
        json!({
            "site": self.local.to_json(),
            "status": if self.ok() { "pass" } else { "fail" },
            "checks": checks,
            "recorded": recorded,
        })
    }
}

/// Chain map, homotopy, `ρ² = ρ`, `h² = 0` and `hρ = 0` for one site.
pub fn verify_maps(mm: &MoveMaps) -> Vec<CheckReport> {
    let cube = mm.cube;
    let gens = all_generators(cube);
    let rho = |g: &Generator| mm.rho(g);
    let h = |g: &Generator| mm.h(g);
    vec![
        verify_chain_map(cube, cube, rho),
        verify_homotopy(cube, h, rho),
        first_failure("idempotent", cube, &gens, |g| {
            let r = rho(g);
            r.map(rho).minus(&r)
        }),
        first_failure("h_squared", cube, &gens, |g| h(g).map(h)),
        first_failure("h_rho", cube, &gens, |g| rho(g).map(h)),
    ]
}

/// Verifies a site of `d` for a move that removes crossings (or slides, for R3).
pub fn verify_move(d: &LinkDiagram, site: &MoveSite, calc: &FrobeniusCalculus) -> Result<Vec<MoveReport>> {
    let cube = Cube::new(d, calc)?;
    let mut out = Vec::new();
    for loc in Local::from_site(d, site)? {
        let mut mm = MoveMaps::new(&cube, loc.clone())?;
        let mut checks = verify_maps(&mm);
        let mut recorded = Vec::new();
        if loc.kind == MoveKind::R3 {
            mm.r3_alternative = true;
            recorded = verify_maps(&mm);
            for c in &mut recorded {
                c.name = format!("alternative_{}", c.name);
            }
        }
        if loc.kind == MoveKind::R1 {
            checks.extend(verify_isom(d, site, &mm)?);
        }
        out.push(MoveReport { local: loc, checks, recorded });
    }
    Ok(out)
}

/// The diagram with the kink removed, and how circles of a kink state sit in it.
struct KinkRemoval {
    cube: Cube,
    corr: Correspondence,
    label_index: BTreeMap<u32, usize>,
}

impl KinkRemoval {
    /// Circle of the small diagram for every circle of `markers` in the big one.
    fn circle_images(&self, mm: &MoveMaps, markers: u64) -> Vec<Option<usize>> {
        let big = mm.cube.sm.get(markers);
        let small_markers = self.down_markers(markers);
        let small = self.cube.sm.get(small_markers);
        let mut img = vec![None; big.count];
        for (x, &k) in big.arc_circle.iter().enumerate() {
            if mm.loc.internal.contains(&x) {
                continue;
            }
            let target = match self.corr.arcs[&mm.cube.d.arc_label(x)] {
                ArcImage::Arc(l) => small.arc_circle[self.label_index[&l]],
                ArcImage::Circle(i) => small.count - self.cube.d.free_circles() + i,
            };
            img[k] = Some(target);
        }
        let (fb, fs) = (mm.cube.d.free_circles(), self.cube.d.free_circles());
        for (i, im) in self.corr.circles.iter().enumerate() {
            if let ArcImage::Circle(j) = im {
                img[big.count - fb + i] = Some(small.count - fs + j);
            }
        }
        img
    }

    fn down_markers(&self, markers: u64) -> u64 {
        let mut m = 0;
        for (c, t) in self.corr.crossings.iter().enumerate() {
            if let Some(t) = t {
                if bit(markers, c) {
                    m |= 1 << t;
                }
            }
        }
        m
    }

    fn up_markers(&self, small: u64) -> u64 {
        let mut m = 0;
        for (c, t) in self.corr.crossings.iter().enumerate() {
            if let Some(t) = t {
                if bit(small, *t) {
                    m |= 1 << c;
                }
            }
        }
        m
    }

    /// Big-diagram word order of a small-diagram label.
    fn label_word(&self, small: u64) -> Vec<usize> {
        let inv: BTreeMap<usize, usize> =
            self.corr.crossings.iter().enumerate().filter_map(|(c, t)| t.map(|t| (t, c))).collect();
        (0..64).filter(|&t| bit(small, t)).map(|t| inv[&t]).collect()
    }
}

/// `G: 𝒞(D) → 𝒞(D′)` and `F` back; checks `G` is a chain map, `F∘G = id`, `ρ∘G = G` and
/// `G∘F∘ρ = ρ`.
fn verify_isom(d: &LinkDiagram, site: &MoveSite, mm: &MoveMaps) -> Result<Vec<CheckReport>> {
    let (small, corr) = apply_move(d, site, Direction::Remove)?;
    let label_index = (0..small.arc_count()).map(|x| (small.arc_label(x), x)).collect();
    let kr = KinkRemoval { cube: Cube::new(&small, &mm.cube.calc)?, corr, label_index };
    let a = mm.loc.a;
    let blue_bit: u64 = if mm.loc.split_on_plus { 0 } else { 1 << a };

    // blue lift with the kink circle signed `kink`, as a word [x] or [a x]
    let lift = |g: &Generator, kink: Sign| -> ChainVector {
        let m = kr.up_markers(g.markers) | blue_bit;
        let img = kr.circle_images(mm, m);
        let mut signs = 0u64;
        for (k, im) in img.iter().enumerate() {
            match im {
                Some(t) => {
                    if g.circle_negative(*t) {
                        signs |= 1 << k;
                    }
                }
                None => {
                    if kink.is_minus() {
                        signs |= 1 << k;
                    }
                }
            }
        }
        let mut word = kr.label_word(g.markers);
        if !mm.loc.split_on_plus {
            word.insert(0, a);
        }
        signed(Generator::new(m, signs), word_parity(&word))
    };
    let g_map = |g: &Generator| -> ChainVector {
        if mm.loc.split_on_plus {
            lift(g, Sign::Plus).map(|k| mm.rho(k))
        } else {
            lift(g, Sign::Minus)
        }
    };
    let keep = if mm.loc.split_on_plus { Sign::Plus } else { Sign::Minus };
    let f_map = |g: &Generator| -> ChainVector {
        if mm.classify(g) != Pattern::Blue(keep) {
            return ChainVector::zero();
        }
        let img = kr.circle_images(mm, g.markers);
        let sm = kr.down_markers(g.markers);
        let mut signs = 0u64;
        for (k, im) in img.iter().enumerate() {
            if let Some(t) = im {
                if g.circle_negative(k) {
                    signs |= 1 << t;
                }
            }
        }
        let mut word = kr.label_word(sm);
        if !mm.loc.split_on_plus {
            word.insert(0, a);
        }
        signed(Generator::new(sm, signs), word_parity(&word))
    };

    let small_gens = all_generators(&kr.cube);
    let big_gens = all_generators(mm.cube);
    let mut chain = verify_chain_map(&kr.cube, mm.cube, g_map);
    chain.name = "isom_chain_map".into();
    Ok(vec![
        chain,
        first_failure("isom_inverse", &kr.cube, &small_gens, |g| g_map(g).map(f_map).minus(&ChainVector::basis(*g))),
        first_failure("isom_fixed", &kr.cube, &small_gens, |g| {
            let v = g_map(g);
            v.map(|k| mm.rho(k)).minus(&v)
        }),
        first_failure("isom_image", mm.cube, &big_gens, |g| {
            let r = mm.rho(g);
            r.map(f_map).map(g_map).minus(&r)
        }),
    ])
}

/// One step of an invariance run.
#[derive(Clone, Debug)]
pub struct InvarianceStep {
    pub site: MoveSite,
    pub direction: Direction,
    pub crossings: usize,
    pub homology: Vec<String>,
    pub equal: bool,
}

#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub initial: Vec<String>,
    pub steps: Vec<InvarianceStep>,
}

impl InvarianceReport {
    pub fn ok(&self) -> bool {
        self.steps.iter().all(|s| s.equal)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "identity": "invariance",
            "status": if self.ok() { "pass" } else { "fail" },
            "initial": self.initial,
            "steps": self.steps.iter().map(|s| json!({
                "move": s.site.kind.to_string(),
                "variant": s.site.variant,
                "direction": s.direction.to_string(),
                "crossings": s.crossings,
                "homology": s.homology,
                "equal": s.equal,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Homology at each specialization for one diagram; bigraded where s and t vanish and the
/// calculus respects the quantum grading.
pub fn homology_fingerprint(
    d: &LinkDiagram,
    calc: &FrobeniusCalculus,
    specs: &[Specialization],
) -> Result<Vec<String>> {
    let cx = ComplexRepr::from_cube(Cube::new(d, calc)?);
    let graded = calc.is_graded();
    specs.iter().map(|sp| Ok(homology_at(&cx, sp, graded && sp.kills_st())?.to_string())).collect()
}

/// Applies moves in sequence and compares homology before and after each one.
pub fn verify_invariance(
    d: &LinkDiagram,
    moves: &[(MoveSite, Direction)],
    calc: &FrobeniusCalculus,
    specs: &[Specialization],
) -> Result<InvarianceReport> {
    let initial = homology_fingerprint(d, calc, specs)?;
    let mut prev = initial.clone();
    let mut cur = d.clone();
    let mut steps = Vec::new();
    for (site, dir) in moves {
        let (next, _) = apply_move(&cur, site, *dir)?;
        let h = homology_fingerprint(&next, calc, specs)?;
        steps.push(InvarianceStep {
            site: site.clone(),
            direction: *dir,
            crossings: next.n_crossings(),
            equal: h == prev,
            homology: h.clone(),
        });
        prev = h;
        cur = next;
    }
    Ok(InvarianceReport { initial, steps })
}

/// All removal and slide sites of a diagram.
pub fn all_sites(d: &LinkDiagram) -> Vec<MoveSite> {
    [MoveKind::R1, MoveKind::R2, MoveKind::R3].into_iter().flat_map(|k| find_move_sites(d, k)).collect()
}
