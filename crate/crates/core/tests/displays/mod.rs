//! The worked step-by-step computations for the three moves, replayed generator by generator
//! inside larger diagrams so that the label `x` is never empty.

use khoveq::complex::{ChainVector, Cube, Generator};
use khoveq::conditions::{check_lemma2, Connectivity};
use khoveq::corpus;
use khoveq::diagram::{apply_move, find_move_sites, insertion_sites, Direction, LinkDiagram, MoveKind};
use khoveq::frobenius::{FrobeniusCalculus, Sign, SignCombo};
use khoveq::moves::{all_generators, Local, MoveMaps, Pattern};
use khoveq::polyring::BivariatePoly;

use Sign::{Minus, Plus};

/// Stored vector of the word `S ⊗ [x tail]`, where `x` is the other negative crossings in
/// increasing order. Counts inversions directly.
fn word(g: Generator, tail: &[usize]) -> ChainVector {
    let mut w: Vec<usize> = (0..64).filter(|&c| g.markers >> c & 1 == 1 && !tail.contains(&c)).collect();
    w.extend_from_slice(tail);
    let mut inv = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            inv += (w[i] > w[j]) as usize;
        }
    }
    let v = ChainVector::basis(g);
    if inv % 2 == 1 {
        v.neg()
    } else {
        v
    }
}

fn hd_dh(mm: &MoveMaps, g: &Generator) -> ChainVector {
    let cube = mm.cube;
    let mut v = cube.apply_differential(&mm.h(g));
    v.add(&cube.differential(g).map(|x| mm.h(x)));
    v
}

fn project<F: Fn(Pattern) -> bool>(mm: &MoveMaps, v: &ChainVector, keep: F) -> ChainVector {
    let mut out = ChainVector::zero();
    for (g, c) in v.iter() {
        if keep(mm.classify(g)) {
            out.add_term(*g, c);
        }
    }
    out
}

fn id_minus_rho(mm: &MoveMaps, g: &Generator) -> ChainVector {
    ChainVector::basis(*g).minus(&mm.rho(g))
}

fn with_inserted(base: &str, kind: MoveKind, pick: impl Fn(&khoveq::diagram::MoveSite) -> bool) -> Vec<LinkDiagram> {
    let d = corpus::get(base).unwrap();
    insertion_sites(&d, kind)
        .iter()
        .filter(|s| pick(s))
        .take(3)
        .map(|s| apply_move(&d, s, Direction::Insert).unwrap().0)
        .collect()
}

fn locals(d: &LinkDiagram, kind: MoveKind) -> Vec<Local> {
    find_move_sites(d, kind).iter().flat_map(|s| Local::from_site(d, s).unwrap_or_default()).collect()
}

fn universal() -> FrobeniusCalculus {
    FrobeniusCalculus::universal()
}

pub fn first_move_displays() {
    let mut seen = 0;
    for d in with_inserted("trefoil-right", MoveKind::R1, |s| s.sign > 0) {
        let cube = Cube::new(&d, &universal()).unwrap();
        for loc in locals(&d, MoveKind::R1).into_iter().filter(|l| l.split_on_plus) {
            let mm = MoveMaps::new(&cube, loc.clone()).unwrap();
            let a = loc.a;
            let lp = loc.internal[0];
            for g in all_generators(&cube) {
                let cs = cube.sm.get(g.markers);
                match mm.classify(&g) {
                    Pattern::Blue(Plus) => {
                        // the loop closes off as a + circle; h(δ) sees only the merge at a
                        let small = cs.arc_circle[lp];
                        let outer = (0..4).map(|p| cube.circle_at(g.markers, a, p)).find(|&k| k != small).unwrap();
                        let p = Sign::from_bit(g.circle_negative(outer));
                        let mut want = ChainVector::zero();
                        for (r, c) in cube.calc.multiply(p, Plus).terms() {
                            let mut signs = g.signs | 1 << small;
                            signs &= !(1 << outer);
                            if r[0].is_minus() {
                                signs |= 1 << outer;
                            }
                            want.add_term(Generator::new(g.markers, signs), c);
                        }
                        assert!(mm.h(&g).is_zero());
                        assert_eq!(cube.differential(&g).map(|x| mm.h(x)), mm.cube.partial(&g, a).map(|x| mm.h(x)));
                        assert_eq!(hd_dh(&mm, &g), want);
                        assert_eq!(id_minus_rho(&mm, &g), want);
                        seen += 1;
                    }
                    Pattern::Blue(Minus) => {
                        assert!(mm.h(&g).is_zero());
                        assert_eq!(hd_dh(&mm, &g), ChainVector::basis(g));
                        assert!(mm.rho(&g).is_zero());
                    }
                    Pattern::Red => {
                        assert_eq!(hd_dh(&mm, &g), ChainVector::basis(g));
                        assert!(mm.rho(&g).is_zero());
                    }
                    _ => unreachable!(),
                }
            }
        }
    }
    assert!(seen > 0);
}

fn r2_cases() -> Vec<(LinkDiagram, Local)> {
    let mut out = Vec::new();
    for variant in ["pair", "self"] {
        for d in with_inserted("trefoil-right", MoveKind::R2, |s| s.variant == variant) {
            for l in locals(&d, MoveKind::R2) {
                out.push((d.clone(), l));
            }
        }
    }
    let tri = corpus::get("r3-ready").unwrap();
    for l in locals(&tri, MoveKind::R2) {
        out.push((tri.clone(), l));
    }
    assert!(out.iter().any(|(_, l)| l.variant == "parallel") && out.iter().any(|(_, l)| l.variant == "antiparallel"));
    out
}

fn r2(a: Sign, b: Sign, small: Option<Sign>) -> Pattern {
    Pattern::R2 { a, b, small }
}

pub fn second_move_displays() {
    for (d, loc) in r2_cases() {
        let cube = Cube::new(&d, &universal()).unwrap();
        let mm = MoveMaps::new(&cube, loc.clone()).unwrap();
        let (a, b) = (loc.a, loc.b);
        for g in all_generators(&cube) {
            let v = ChainVector::basis(g);
            let pat = mm.classify(&g);
            match pat {
                Pattern::R2 { a: Minus, b: Minus, .. } | Pattern::R2 { small: Some(Minus), .. } => {
                    assert_eq!(hd_dh(&mm, &g), v);
                    assert!(mm.rho(&g).is_zero());
                }
                Pattern::R2 { a: Minus, b: Plus, .. } => {
                    // h(S_{--}(p:q, q:p) ⊗ [xab]) = −S_{+-,-}(p:q, q:p) ⊗ [xb]
                    let lhs = hd_dh(&mm, &g);
                    assert_eq!(lhs, cube.partial(&g, b).map(|x| mm.h(x)));
                    assert!(lhs.iter().all(|(x, _)| mm.classify(x) == r2(Plus, Minus, Some(Minus))));
                    assert_eq!(lhs, id_minus_rho(&mm, &g));
                }
                Pattern::R2 { a: Plus, b: Plus, .. } => {
                    let dg = cube.differential(&g);
                    let pm = |p: Pattern| p == r2(Plus, Minus, Some(Plus));
                    // the small-circle-positive part of δ is the transferred word
                    let w = word(mm.transfer(&g, g.markers | 1 << b, Some(Plus)), &[b]);
                    assert_eq!(project(&mm, &dg, pm), w);
                    // the two contributions cancel under ρ
                    let rest = dg.minus(&project(&mm, &dg, pm));
                    assert_eq!(project(&mm, &dg, pm).map(|x| mm.rho(x)), w.map(|x| mm.rho(x)));
                    assert_eq!(rest.map(|x| mm.rho(x)), w.map(|x| mm.rho(x)).neg());
                    // h kills it and hδ returns it
                    assert!(mm.h(&g).is_zero());
                    assert_eq!(dg.map(|x| mm.h(x)), v);
                    assert_eq!(id_minus_rho(&mm, &g), v);
                }
                Pattern::R2 { a: Plus, b: Minus, small: Some(Plus) } => {
                    // with W = S_{+-}(p,q) ⊗ [xb] and U = S_{++}(p,q) ⊗ [x]
                    let w = word(g, &[b]);
                    let u = w.map(|x| mm.h(x));
                    let lhs = w.map(|x| hd_dh(&mm, x));
                    let part = |v: &ChainVector, c: usize| v.map(|x| cube.partial(x, c));
                    let h = |v: &ChainVector| v.map(|x| mm.h(x));
                    let pm = project(&mm, &lhs, |p| p == r2(Plus, Minus, Some(Plus)));
                    let mp = project(&mm, &lhs, |p| p == r2(Minus, Plus, None));
                    let pmm = project(&mm, &lhs, |p| p == r2(Plus, Minus, Some(Minus)));
                    assert_eq!(pm, w);
                    assert_eq!(mp, part(&u, a));
                    let mut first = h(&part(&w, a));
                    first.add(&project(&mm, &cube.apply_differential(&u), |p| p == r2(Plus, Minus, Some(Minus))));
                    assert_eq!(pmm, first);
                    assert_eq!(pmm, h(&part(&part(&u, a), b)).neg());
                    let mut sum = pm.clone();
                    sum.add(&mp);
                    sum.add(&pmm);
                    assert_eq!(lhs, sum);
                    assert_eq!(lhs, w.map(|x| id_minus_rho(&mm, x)));
                }
                _ => {}
            }
        }
    }
}

fn r3(a: Sign, b: Sign, c: Sign, small: Option<Sign>) -> Pattern {
    Pattern::R3 { a, b, c, small }
}

pub fn third_move_displays() {
    let d = corpus::get("r3-ready").unwrap();
    let cube = Cube::new(&d, &universal()).unwrap();
    let locs = locals(&d, MoveKind::R3);
    assert_eq!(locs.len(), 2);
    for loc in locs {
        let mm = MoveMaps::new(&cube, loc.clone()).unwrap();
        let (a, b, c) = (loc.a, loc.b, loc.c);
        let part = |v: &ChainVector, k: usize| v.map(|x| cube.partial(x, k));
        let h = |v: &ChainVector| v.map(|x| mm.h(x));
        for g in all_generators(&cube) {
            let v = ChainVector::basis(g);
            match mm.classify(&g) {
                Pattern::R3 { c: Minus, .. } => {
                    assert!(hd_dh(&mm, &g).is_zero());
                    assert_eq!(mm.rho(&g), v);
                }
                Pattern::R3 { a: Minus, b: Plus, .. } => {
                    let lhs = hd_dh(&mm, &g);
                    assert_eq!(lhs, h(&part(&v, b)));
                    assert!(lhs.iter().all(|(x, _)| mm.classify(x) == r3(Plus, Minus, Plus, Some(Minus))));
                    assert_eq!(lhs, id_minus_rho(&mm, &g));
                }
                Pattern::R3 { a: Minus, b: Minus, .. } => {
                    // S_{--+} ⊗ [xab] − S_{+--} ⊗ [xbc]
                    let w = word(g, &[a, b]);
                    let t = word(mm.transfer(&g, (g.markers & !(1 << a)) | 1 << c, None), &[b, c]);
                    let lhs = w.map(|x| hd_dh(&mm, x));
                    assert_eq!(lhs, w.minus(&t));
                    assert_eq!(lhs, w.map(|x| id_minus_rho(&mm, x)));
                }
                Pattern::R3 { small: Some(Minus), .. } => {
                    assert_eq!(hd_dh(&mm, &g), v);
                    assert!(mm.rho(&g).is_zero());
                }
                Pattern::R3 { a: Plus, b: Plus, .. } => {
                    // one-to-one: hδ is the identity here
                    assert!(mm.h(&g).is_zero());
                    assert_eq!(cube.differential(&g).map(|x| mm.h(x)), v);
                    assert!(mm.rho(&g).is_zero());
                }
                Pattern::R3 { a: Plus, b: Minus, small: Some(Plus), .. } => {
                    // the four components of hδ + δh, the last one in both of its forms
                    let w = word(g, &[b]);
                    let u = h(&w);
                    let lhs = w.map(|x| hd_dh(&mm, x));
                    let only = |want: Pattern| project(&mm, &lhs, move |p| p == want);
                    let pmm = only(r3(Plus, Minus, Plus, Some(Minus)));
                    assert_eq!(only(r3(Minus, Plus, Plus, None)), part(&u, a));
                    assert_eq!(only(r3(Plus, Minus, Plus, Some(Plus))), w);
                    assert_eq!(only(r3(Plus, Plus, Minus, None)), part(&u, c));
                    assert_eq!(pmm, h(&part(&part(&u, a), b)).neg());
                    let mut first = h(&part(&w, a));
                    first.add(&project(&mm, &cube.apply_differential(&u), |p| p == r3(Plus, Minus, Plus, Some(Minus))));
                    assert_eq!(pmm, first);
                    assert_eq!(lhs, w.map(|x| id_minus_rho(&mm, x)));
                }
                p => panic!("unclassified {}", p.name()),
            }
        }
    }
}

fn poly(terms: &[(i64, u32, u32)]) -> BivariatePoly {
    let mut p = BivariatePoly::zero();
    for &(c, s, t) in terms {
        p += &BivariatePoly::monomial(c, s, t);
    }
    p
}

pub fn lemma_two_expansions() {
    let one = poly(&[(1, 0, 0)]);
    let s = poly(&[(1, 1, 0)]);
    let t = poly(&[(1, 0, 1)]);
    let combo = |terms: Vec<(&str, &BivariatePoly, i64)>| {
        SignCombo::from_terms(terms.into_iter().map(|(k, p, m)| (k, p * &BivariatePoly::constant(m))).collect())
    };
    let printed = [
        (Connectivity::Same, Minus, Minus, combo(vec![("++", &one, 2), ("--", &s, -1)])),
        (Connectivity::Same, Plus, Plus, combo(vec![("++", &s, 1), ("--", &t, 2)])),
        (Connectivity::Different, Minus, Minus, combo(vec![("+-", &one, 1), ("-+", &one, 1), ("--", &s, -1)])),
        (Connectivity::Different, Plus, Plus, combo(vec![("++", &s, 1), ("-+", &t, 1), ("+-", &t, 1)])),
        (Connectivity::Different, Plus, Minus, combo(vec![("--", &t, 1), ("++", &one, 1)])),
        (Connectivity::Different, Minus, Plus, combo(vec![("++", &one, 1), ("--", &t, 1)])),
    ];
    let cases = check_lemma2(&universal()).unwrap();
    for (conn, p, q, want) in printed {
        let hits: Vec<_> = cases.iter().filter(|c| c.connectivity == conn && c.p == p && c.q == q).collect();
        assert!(!hits.is_empty(), "{conn} {p:?} {q:?}");
        for c in hits {
            assert!(c.ok());
            assert_eq!(c.lhs, want, "{} ({:?},{:?})", c.closure, p, q);
            assert_eq!(c.rhs, want);
        }
    }
    assert_eq!(
        cases
            .iter()
            .filter(|c| c.connectivity == Connectivity::Same)
            .map(|c| (c.p, c.q))
            .collect::<std::collections::BTreeSet<_>>()
            .len(),
        2
    );
}
