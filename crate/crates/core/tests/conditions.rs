use khoveq::conditions::{brute_force, corpus_report, Connectivity};
use khoveq::corpus;
use khoveq::diagram::{find_move_sites, MoveKind};
use khoveq::frobenius::{FrobeniusCalculus, Sign, SignCombo};
use khoveq::moves::verify_move;
use khoveq::polyring::BivariatePoly;
use khoveq::Error;

fn drop_split_term() -> FrobeniusCalculus {
    let mut c = FrobeniusCalculus::universal();
    c.split[1].add(vec![Sign::Plus, Sign::Minus], &-BivariatePoly::one());
    c
}

#[test]
fn standard_calculi_pass() {
    for c in [
        FrobeniusCalculus::universal(),
        FrobeniusCalculus::at(0, 1),
        FrobeniusCalculus::at(0, 0),
        FrobeniusCalculus::at(2, 3),
    ] {
        let r = corpus_report(&c).unwrap();
        assert!(r.ok() && r.verdict_r1 && r.verdict_r23);
        assert_eq!(r.m_plus_plus, c.merge[0][0]);
    }
}

#[test]
fn broken_multiplication_is_caught_with_a_row() {
    let mut c = FrobeniusCalculus::universal();
    c.merge[1][1] = SignCombo::single(&[Sign::Plus]);
    let r = corpus_report(&c).unwrap();
    assert!(!r.verdict_r1 && !r.verdict_r23);
    let bad: Vec<_> = r.f2_f4.iter().filter(|row| !row.ok()).collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0].actual, SignCombo::single(&[Sign::Plus]));
}

#[test]
fn deleted_split_term_is_caught_with_a_witness() {
    let r = corpus_report(&drop_split_term()).unwrap();
    assert!(r.verdict_r1);
    assert!(!r.verdict_r23);
    let bad: Vec<_> = r.one_to_one.iter().chain(&r.lemma2).filter(|c| !c.ok()).collect();
    assert!(!bad.is_empty());
    assert!(bad.iter().all(|c| c.witness.is_some()));
    assert!(bad.iter().any(|c| c.connectivity == Connectivity::Different));
    assert!(!brute_force(&drop_split_term()).unwrap().r23());
}

#[test]
fn accepted_calculi_pass_the_move_suite() {
    let d = corpus::get("r3-ready").unwrap();
    for c in [FrobeniusCalculus::at(0, 1), FrobeniusCalculus::at(2, 3), FrobeniusCalculus::at(-1, 2)] {
        assert!(corpus_report(&c).unwrap().ok());
        for kind in [MoveKind::R2, MoveKind::R3] {
            for site in find_move_sites(&d, kind) {
                match verify_move(&d, &site, &c) {
                    Ok(rs) => assert!(rs.iter().all(|r| r.ok()), "{kind} {}", site.variant),
                    Err(Error::Unsupported(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }
}

/// The conditions are sufficient, not necessary: negating Δ keeps `δ² = 0` and the homology
/// groups, but the sign-sensitive identities fail.
#[test]
fn negated_split_is_invariant_but_rejected() {
    let mut c = FrobeniusCalculus::universal();
    for k in 0..2 {
        c.split[k] = c.split[k].scale(&-BivariatePoly::one());
    }
    let r = corpus_report(&c).unwrap();
    assert!(r.delta_squared_ok());
    assert!(!r.verdict_r23);
    let b = brute_force(&c).unwrap();
    assert!(b.r1() && b.r23());
}
