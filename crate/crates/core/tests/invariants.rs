use proptest::prelude::*;

use khoveq::complex::build_complex;
use khoveq::corpus;
use khoveq::diagram::random_move_sequence;
use khoveq::frobenius::FrobeniusCalculus;
use khoveq::invariants::{bracket_side, euler_side, graded_euler, kauffman_bracket, LaurentPoly};

#[test]
fn euler_characteristic_examples() {
    let q = |terms: &[(i64, i64)]| LaurentPoly::from_terms(terms);
    let euler = |name: &str| {
        graded_euler(&build_complex(&corpus::get(name).unwrap(), &FrobeniusCalculus::universal()).unwrap())
    };
    assert_eq!(euler("unknot"), q(&[(-1, 1), (1, 1)]));
    assert_eq!(euler("unlink2"), q(&[(-1, 1), (1, 1)]).pow(2));
    assert_eq!(euler("trefoil-right"), q(&[(1, 1), (3, 1), (5, 1), (9, -1)]));
}

#[test]
fn mirror_images_have_mirrored_brackets() {
    for (a, b) in [("trefoil-right", "trefoil-left"), ("hopf+", "hopf-"), ("kink+", "kink-")] {
        let (x, y) = (kauffman_bracket(&corpus::get(a).unwrap()), kauffman_bracket(&corpus::get(b).unwrap()));
        assert_eq!(x.substitute(1, -1), y, "{a}");
    }
    let f = kauffman_bracket(&corpus::get("figure8").unwrap());
    assert_eq!(f.substitute(1, -1), f);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bracket_survives_random_moves(idx in 0usize..corpus::CORPUS.len(), seed in any::<u64>()) {
        let d = corpus::get(corpus::CORPUS[idx].name).unwrap();
        let plan = random_move_sequence(&d, 3, seed, d.n_crossings() + 3);
        let want = kauffman_bracket(&d);
        for step in &plan {
            prop_assert_eq!(kauffman_bracket(&step.result), want.clone());
            let cx = build_complex(&step.result, &FrobeniusCalculus::universal()).unwrap();
            prop_assert_eq!(euler_side(&cx), bracket_side(&step.result));
        }
    }

    #[test]
    fn laurent_ring_laws(a in prop::collection::vec((-4i64..5, -3i64..4), 0..4),
                         b in prop::collection::vec((-4i64..5, -3i64..4), 0..4)) {
        let (p, q) = (LaurentPoly::from_terms(&a), LaurentPoly::from_terms(&b));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert!((&p + &(-&p)).is_zero());
        prop_assert_eq!((&p * &q).substitute(-1, -2), &p.substitute(-1, -2) * &q.substitute(-1, -2));
    }
}
