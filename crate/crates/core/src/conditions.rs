//! Decides the sufficient conditions for Reidemeister invariance of a Frobenius calculus.
//!
//! The second and third move conditions are evaluated on concrete closures of the bigon
//! tangle: two crossingless circles pushed across each other (the outer arcs lie on one
//! circle of the cup-cap state) and one circle pushed across itself (two circles).

use std::fmt;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::complex::{verify_delta_squared, ChainVector, CheckReport, ComplexRepr, Cube, Generator};
use crate::corpus;
use crate::diagram::{apply_move, find_move_sites, insertion_sites, Direction, LinkDiagram, MoveKind, MoveSite};
use crate::error::Result;
use crate::frobenius::{FrobeniusCalculus, Sign, SignCombo};
use crate::moves::{homology_fingerprint, tail_parity, Local, MoveMaps};
use crate::polyring::Specialization;

/// Largest corpus diagram used for the δ² flag.
pub const DELTA_SQUARED_MAX_CROSSINGS: usize = 8;

/// One row of the merge table that the first move needs.
#[derive(Clone, Debug)]
pub struct RowCheck {
    pub row: &'static str,
    pub entry: &'static str,
    pub expected: SignCombo,
    pub actual: SignCombo,
}

impl RowCheck {
    pub fn ok(&self) -> bool {
        self.expected == self.actual
    }

    fn to_json(&self) -> Value {
        let mut v =
            json!({"row": self.row, "entry": self.entry, "status": status(self.ok()), "actual": self.actual.to_json()});
        if !self.ok() {
            v["expected"] = self.expected.to_json();
        }
        v
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

pub fn check_f2_f4(c: &FrobeniusCalculus) -> Vec<RowCheck> {
    use Sign::*;
    vec![
        RowCheck {
            row: "f2",
            entry: "m(+,-)",
            expected: SignCombo::single(&[Plus]),
            actual: c.multiply(Plus, Minus).clone(),
        },
        RowCheck {
            row: "f3",
            entry: "m(-,+)",
            expected: SignCombo::single(&[Plus]),
            actual: c.multiply(Minus, Plus).clone(),
        },
        RowCheck {
            row: "f4",
            entry: "m(-,-)",
            expected: SignCombo::single(&[Minus]),
            actual: c.multiply(Minus, Minus).clone(),
        },
    ]
}

/// Whether the two outer arcs of the bigon tangle lie on one circle of the cup-cap state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Connectivity {
    Same,
    Different,
}

impl fmt::Display for Connectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Connectivity::Same => "same-component",
            Connectivity::Different => "different-component",
        })
    }
}

/// A two-crossing diagram containing a removable bigon.
#[derive(Clone, Debug)]
pub struct Closure {
    pub name: String,
    pub diagram: LinkDiagram,
    pub local: Local,
    pub connectivity: Connectivity,
}

fn outer_slots(d: &LinkDiagram, loc: &Local, c: usize) -> Vec<usize> {
    (0..4).filter(|&p| !loc.internal.contains(&d.arc_at(c, p))).collect()
}

/// Circles through the outer slots at `a` and at `b` in the state with `markers`.
fn outer_circles(cube: &Cube, loc: &Local, markers: u64) -> (usize, usize) {
    let at = |c: usize| {
        let ks: Vec<usize> = outer_slots(&cube.d, loc, c).into_iter().map(|p| cube.circle_at(markers, c, p)).collect();
        assert!(ks.windows(2).all(|w| w[0] == w[1]), "outer slots of a crossing on different circles");
        ks[0]
    };
    (at(loc.a), at(loc.b))
}

/// R2 insertions into two circles (pair) and into one circle (self), every slot order and
/// every bigon of the result.
pub fn closures() -> Vec<Closure> {
    let mut out: Vec<Closure> = Vec::new();
    let universal = FrobeniusCalculus::universal();
    for (base, variant) in [("O O", "pair"), ("O", "self")] {
        let d = crate::diagram::parse_pd(base).expect("closure base");
        for site in insertion_sites(&d, MoveKind::R2).iter().filter(|s| s.variant == variant) {
            let Ok((nd, _)) = apply_move(&d, site, Direction::Insert) else { continue };
            let cube = Cube::new(&nd, &universal).expect("two crossings");
            for rs in find_move_sites(&nd, MoveKind::R2) {
                for loc in Local::from_site(&nd, &rs).unwrap_or_default() {
                    if MoveMaps::new(&cube, loc.clone()).is_err() {
                        continue;
                    }
                    let pd = nd.to_pd_string();
                    if out.iter().any(|c| c.diagram.to_pd_string() == pd && c.local == loc) {
                        continue;
                    }
                    let (p, q) = outer_circles(&cube, &loc, 0);
                    let connectivity = if p == q { Connectivity::Same } else { Connectivity::Different };
                    let name = format!("{variant} {}: {pd} a={} b={}", out.len(), loc.a + 1, loc.b + 1);
                    out.push(Closure { name, diagram: nd.clone(), local: loc, connectivity });
                }
            }
        }
    }
    out
}

/// Outcome of one `(p, q)` case on one closure.
#[derive(Clone, Debug)]
pub struct CaseCheck {
    pub closure: String,
    pub connectivity: Connectivity,
    pub p: Sign,
    pub q: Sign,
    pub lhs: SignCombo,
    pub rhs: SignCombo,
    pub witness: Option<Value>,
}

impl CaseCheck {
    pub fn ok(&self) -> bool {
        self.witness.is_none()
    }

    fn to_json(&self) -> Value {
        let mut v = json!({
            "closure": self.closure,
            "connectivity": self.connectivity.to_string(),
            "p": self.p.symbol().to_string(),
            "q": self.q.symbol().to_string(),
            "status": status(self.ok()),
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
        });
        if let Some(w) = &self.witness {
            v["witness"] = w.clone();
        }
        v
    }
}

/// Signed-word coefficients of the terms of `v` in the state with `markers`, keyed by the signs
/// of the circles through the outer slots at `a` and `b`.
fn as_combo(cube: &Cube, loc: &Local, v: &ChainVector, markers: u64) -> SignCombo {
    let (ka, kb) = outer_circles(cube, loc, markers);
    let mut out = SignCombo::zero();
    for (g, c) in v.iter().filter(|(g, _)| g.markers == markers) {
        let c = if tail_parity(g.markers, &[loc.b]) { -c.clone() } else { c.clone() };
        out.add(vec![Sign::from_bit(g.circle_negative(ka)), Sign::from_bit(g.circle_negative(kb))], &c);
    }
    out
}

struct Setup<'a> {
    cube: &'a Cube,
    mm: MoveMaps<'a>,
    connectivity: Connectivity,
    name: String,
}

impl Setup<'_> {
    /// `S_{++}(p,q) ⊗ []`.
    fn s_pp(&self, p: Sign, q: Sign) -> Option<Generator> {
        let (kp, kq) = outer_circles(self.cube, &self.mm.loc, 0);
        if kp == kq && p != q {
            return None;
        }
        let mut signs = 0u64;
        for (k, s) in [(kp, p), (kq, q)] {
            if s.is_minus() {
                signs |= 1 << k;
            }
        }
        Some(Generator::new(0, signs))
    }

    /// `S_{+−}(p,q) ⊗ [b]` as a stored vector.
    fn word_pm(&self, g: &Generator) -> ChainVector {
        let m = 1 << self.mm.loc.b;
        let mut v = ChainVector::basis(self.mm.transfer(g, m, Some(Sign::Plus)));
        if tail_parity(m, &[self.mm.loc.b]) {
            v = v.neg();
        }
        v
    }

    fn project(&self, v: &ChainVector, small: Sign) -> ChainVector {
        let mut out = ChainVector::zero();
        for (g, c) in v.iter() {
            let pat = self.mm.classify(g);
            if matches!(pat, crate::moves::Pattern::R2 { small: Some(x), .. } if x == small) {
                out.add_term(*g, c);
            }
        }
        out
    }

    fn case(&self, p: Sign, q: Sign, lhs: &ChainVector, rhs: &ChainVector) -> CaseCheck {
        let m = 1 << self.mm.loc.b;
        let diff = lhs.minus(rhs);
        let witness = (!diff.is_zero()).then(|| {
            json!({"lhs": lhs.to_json(self.cube), "rhs": rhs.to_json(self.cube), "difference": diff.to_json(self.cube)})
        });
        CaseCheck {
            closure: self.name.clone(),
            connectivity: self.connectivity,
            p,
            q,
            lhs: as_combo(self.cube, &self.mm.loc, lhs, m),
            rhs: as_combo(self.cube, &self.mm.loc, rhs, m),
            witness,
        }
    }

    fn pairs(&self) -> Vec<(Sign, Sign, Generator)> {
        let mut out = Vec::new();
        for p in Sign::BOTH {
            for q in Sign::BOTH {
                if let Some(g) = self.s_pp(p, q) {
                    out.push((p, q, g));
                }
            }
        }
        out
    }

    /// The `S_{+−}` part of `δ(S_{++}(p,q) ⊗ [x])` is exactly `S_{+−}(p,q) ⊗ [xb]`.
    fn one_to_one(&self) -> Vec<CaseCheck> {
        self.pairs()
            .into_iter()
            .map(|(p, q, g)| {
                let got = self.project(&self.cube.differential(&g), Sign::Plus);
                self.case(p, q, &got, &self.word_pm(&g))
            })
            .collect()
    }

    /// `h(δ_a(S_{+−}(p,q) ⊗ [xb])) + f_{+−,−}(δ(S_{++}(p,q) ⊗ [x]))` against
    /// `V(δ_b δ_a(S_{++}(p,q) ⊗ [x]))`, where `V = −h` carries `S_{−−}` to `S_{+−,−}`.
    fn lemma2(&self) -> Vec<CaseCheck> {
        let (a, b) = (self.mm.loc.a, self.mm.loc.b);
        self.pairs()
            .into_iter()
            .map(|(p, q, g)| {
                let h = |x: &Generator| self.mm.h(x);
                let mut lhs = self.word_pm(&g).map(|x| self.cube.partial(x, a)).map(h);
                lhs.add(&self.project(&self.cube.differential(&g), Sign::Minus));
                let ba = self.cube.partial(&g, a).map(|x| self.cube.partial(x, b));
                let rhs = ba.map(h).neg();
                self.case(p, q, &lhs, &rhs)
            })
            .collect()
    }
}

fn on_closures<F>(c: &FrobeniusCalculus, f: F) -> Result<Vec<CaseCheck>>
where
    F: Fn(&Setup) -> Vec<CaseCheck> + Sync,
{
    let cls = closures();
    let per: Result<Vec<Vec<CaseCheck>>> = cls
        .par_iter()
        .map(|cl| {
            let cube = Cube::new(&cl.diagram, c)?;
            let mm = MoveMaps::new(&cube, cl.local.clone())?;
            let setup = Setup { cube: &cube, mm, connectivity: cl.connectivity, name: cl.name.clone() };
            Ok(f(&setup))
        })
        .collect();
    Ok(per?.into_iter().flatten().collect())
}

pub fn check_one_to_one(c: &FrobeniusCalculus) -> Result<Vec<CaseCheck>> {
    on_closures(c, |s| s.one_to_one())
}

pub fn check_lemma2(c: &FrobeniusCalculus) -> Result<Vec<CaseCheck>> {
    on_closures(c, |s| s.lemma2())
}

/// `δ² = 0` for one diagram.
#[derive(Clone, Debug)]
pub struct DiagramCheck {
    pub diagram: String,
    pub check: CheckReport,
}

#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub delta_squared: Vec<DiagramCheck>,
    pub f2_f4: Vec<RowCheck>,
    pub one_to_one: Vec<CaseCheck>,
    pub lemma2: Vec<CaseCheck>,
    /// Reported only; no verdict depends on it.
    pub m_plus_plus: SignCombo,
    pub verdict_r1: bool,
    pub verdict_r23: bool,
}

fn by_connectivity(cases: &[CaseCheck]) -> Value {
    let flag = |k: Connectivity| cases.iter().filter(|c| c.connectivity == k).all(CaseCheck::ok);
    json!({
        "same-component": flag(Connectivity::Same),
        "different-component": flag(Connectivity::Different),
        "cases": cases.iter().map(CaseCheck::to_json).collect::<Vec<_>>(),
    })
}

impl ConditionReport {
    pub fn delta_squared_ok(&self) -> bool {
        self.delta_squared.iter().all(|d| d.check.ok)
    }

    pub fn f2_f4_ok(&self) -> bool {
        self.f2_f4.iter().all(RowCheck::ok)
    }

    pub fn one_to_one_ok(&self) -> bool {
        self.one_to_one.iter().all(CaseCheck::ok)
    }

    pub fn lemma2_ok(&self) -> bool {
        self.lemma2.iter().all(CaseCheck::ok)
    }

    /// Both verdicts and the δ² flag.
    pub fn ok(&self) -> bool {
        self.verdict_r1 && self.verdict_r23 && self.delta_squared_ok()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "status": status(self.ok()),
            "delta_squared": {
                "status": status(self.delta_squared_ok()),
                "diagrams": self.delta_squared.iter().map(|d| {
                    let mut v = d.check.to_json();
                    v["diagram"] = json!(d.diagram);
                    v
                }).collect::<Vec<_>>(),
            },
            "f2_f4": self.f2_f4.iter().map(RowCheck::to_json).collect::<Vec<_>>(),
            "one_to_one": by_connectivity(&self.one_to_one),
            "lemma2": by_connectivity(&self.lemma2),
            "m_plus_plus": self.m_plus_plus.to_json(),
            "verdict_r1": self.verdict_r1,
            "verdict_r23": self.verdict_r23,
        })
    }
}

/// Every condition, plus `δ² = 0` on the given diagrams.
pub fn full_report(c: &FrobeniusCalculus, diagrams: &[(String, LinkDiagram)]) -> Result<ConditionReport> {
    let delta_squared: Result<Vec<DiagramCheck>> = diagrams
        .par_iter()
        .filter(|(_, d)| d.n_crossings() <= DELTA_SQUARED_MAX_CROSSINGS)
        .map(|(name, d)| {
            let cx = ComplexRepr::from_cube(Cube::new(d, c)?);
            Ok(DiagramCheck { diagram: name.clone(), check: verify_delta_squared(&cx) })
        })
        .collect();
    let f2_f4 = check_f2_f4(c);
    let one_to_one = check_one_to_one(c)?;
    let lemma2 = check_lemma2(c)?;
    let verdict_r1 = f2_f4.iter().all(RowCheck::ok);
    let verdict_r23 = verdict_r1 && one_to_one.iter().all(CaseCheck::ok) && lemma2.iter().all(CaseCheck::ok);
    Ok(ConditionReport {
        delta_squared: delta_squared?,
        f2_f4,
        one_to_one,
        lemma2,
        m_plus_plus: c.multiply(Sign::Plus, Sign::Plus).clone(),
        verdict_r1,
        verdict_r23,
    })
}

/// [`full_report`] over the built-in corpus.
pub fn corpus_report(c: &FrobeniusCalculus) -> Result<ConditionReport> {
    let ds: Vec<(String, LinkDiagram)> = corpus::all().into_iter().map(|(n, d)| (n.to_string(), d)).collect();
    full_report(c, &ds)
}

/// Homology comparison across actual moves, used to cross-check the verdicts.
#[derive(Clone, Debug)]
pub struct BruteForce {
    /// `δ² = 0` held on every diagram that was built.
    pub complex_ok: bool,
    pub r1_invariant: bool,
    pub r23_invariant: bool,
    pub moves_tested: usize,
    /// First move whose homology changed, or the diagram where `δ² ≠ 0`.
    pub witness: Option<Value>,
}

impl BruteForce {
    pub fn r1(&self) -> bool {
        self.complex_ok && self.r1_invariant
    }

    pub fn r23(&self) -> bool {
        self.complex_ok && self.r23_invariant
    }

    pub fn to_json(&self) -> Value {
        json!({
            "complex_ok": self.complex_ok,
            "r1_invariant": self.r1_invariant,
            "r23_invariant": self.r23_invariant,
            "moves_tested": self.moves_tested,
            "witness": self.witness,
        })
    }
}

/// Integer points used by [`brute_force`].
pub fn brute_force_specs() -> Vec<Specialization> {
    [(0, 0), (0, 1), (1, 0), (1, 1)]
        .into_iter()
        .map(|(s, t)| Specialization::Integers { s: BigInt::from(s), t: BigInt::from(t) })
        .collect()
}

/// Applies first and second move insertions to small corpus diagrams, and third move slides
/// to the triangle diagram, comparing homology at [`brute_force_specs`]. Homology is only
/// meaningful when `δ² = 0`, so a failure there counts against both moves.
pub fn brute_force(c: &FrobeniusCalculus) -> Result<BruteForce> {
    let specs = brute_force_specs();
    let mut jobs: Vec<(LinkDiagram, MoveSite, Direction)> = Vec::new();
    for name in ["unknot", "unlink2", "kink+", "kink-", "hopf+", "trefoil-right"] {
        let d = corpus::get(name).expect("corpus");
        let r1 = insertion_sites(&d, MoveKind::R1);
        jobs.extend(r1.into_iter().take(4).map(|s| (d.clone(), s, Direction::Insert)));
        for variant in ["pair", "self"] {
            let r2 = insertion_sites(&d, MoveKind::R2).into_iter().filter(|s| s.variant == variant);
            jobs.extend(r2.step_by(3).take(4).map(|s| (d.clone(), s, Direction::Insert)));
        }
    }
    let tri = corpus::get("r3-ready").expect("corpus");
    jobs.extend(find_move_sites(&tri, MoveKind::R3).into_iter().map(|s| (tri.clone(), s, Direction::Insert)));

    struct Outcome {
        kind: MoveKind,
        complex_ok: bool,
        equal: bool,
        witness: Value,
    }
    let outcomes: Result<Vec<Outcome>> = jobs
        .par_iter()
        .map(|(d, site, dir)| {
            let (nd, _) = apply_move(d, site, *dir)?;
            let mut bad = None;
            for x in [d, &nd] {
                let cx = ComplexRepr::from_cube(Cube::new(x, c)?);
                if !verify_delta_squared(&cx).ok {
                    bad = Some(x.to_pd_string());
                }
            }
            let witness = json!({"before": d.to_pd_string(), "after": nd.to_pd_string(), "move": site.to_json()});
            if let Some(pd) = bad {
                return Ok(Outcome {
                    kind: site.kind,
                    complex_ok: false,
                    equal: false,
                    witness: json!({"delta_squared_fails": pd}),
                });
            }
            let (h0, h1) = (homology_fingerprint(d, c, &specs)?, homology_fingerprint(&nd, c, &specs)?);
            let mut w = witness;
            if h0 != h1 {
                w["before_homology"] = json!(h0);
                w["after_homology"] = json!(h1);
            }
            Ok(Outcome { kind: site.kind, complex_ok: true, equal: h0 == h1, witness: w })
        })
        .collect();
    let outcomes = outcomes?;
    let complex_ok = outcomes.iter().all(|o| o.complex_ok);
    let witness = outcomes.iter().find(|o| !o.complex_ok || !o.equal).map(|o| o.witness.clone());
    Ok(BruteForce {
        complex_ok,
        r1_invariant: outcomes.iter().filter(|o| o.kind == MoveKind::R1).all(|o| o.equal),
        r23_invariant: outcomes.iter().filter(|o| o.kind != MoveKind::R1).all(|o| o.equal),
        moves_tested: outcomes.len(),
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closures_cover_both_connectivities() {
        let cls = closures();
        assert!(cls.iter().any(|c| c.connectivity == Connectivity::Same));
        assert!(cls.iter().any(|c| c.connectivity == Connectivity::Different));
    }

    #[test]
    fn f4_violation() {
        let mut c = FrobeniusCalculus::universal();
        c.merge[1][1] = SignCombo::single(&[Sign::Plus]);
        let rows = check_f2_f4(&c);
        assert!(rows[0].ok() && rows[1].ok() && !rows[2].ok());
    }
}
