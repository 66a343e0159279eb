use fuzzdec::region::{strong_member, strong_region, weak_member, weak_region};
use fuzzdec::{BinaryOp, Kind};
use proptest::prelude::*;

fn norms() -> Vec<BinaryOp> {
    vec![
        BinaryOp::min(),
        BinaryOp::product(),
        BinaryOp::lukasiewicz(Kind::Norm),
        BinaryOp::drastic(Kind::Norm),
        BinaryOp::ordinal_sum(Kind::Norm),
        BinaryOp::schweizer_sklar(Kind::Norm, -1.0),
        BinaryOp::schweizer_sklar(Kind::Norm, 2.0),
        BinaryOp::hamacher(Kind::Norm, 0.5).unwrap(),
        BinaryOp::hamacher(Kind::Norm, f64::INFINITY).unwrap(),
    ]
}

fn conorms() -> Vec<BinaryOp> {
    norms().iter().map(|t| t.dual().unwrap()).collect()
}

fn degree() -> impl Strategy<Value = f64> {
    prop_oneof![0.0..=1.0f64, (0..=40usize).prop_map(|k| k as f64 / 40.0)]
}

#[test]
fn strong_regions_lie_inside_weak_regions() {
    for s in conorms() {
        let weak = weak_region(&s, 40).unwrap();
        for t in norms() {
            let strong = strong_region(&t, &s, 40).unwrap();
            assert!(strong.is_subset_of(&weak), "{} / {}", t.spec(), s.spec());
        }
    }
}

#[test]
fn regions_are_symmetric() {
    for s in conorms() {
        let weak = weak_region(&s, 40).unwrap();
        let strong = strong_region(&BinaryOp::lukasiewicz(Kind::Norm), &s, 40).unwrap();
        for (a, b, m) in weak.cells() {
            assert_eq!(m, weak.contains(b, a), "{} at ({a}, {b})", s.spec());
        }
        for (a, b, m) in strong.cells() {
            assert_eq!(m, strong.contains(b, a), "{} at ({a}, {b})", s.spec());
        }
    }
}

proptest! {
    #[test]
    fn diagonal_is_always_weakly_decomposable(k in 0..conorms().len(), c in degree()) {
        prop_assert!(weak_member(&conorms()[k], c, c));
    }

    #[test]
    fn membership_is_symmetric(k in 0..conorms().len(), j in 0..norms().len(), a in degree(), b in degree()) {
        let (s, t) = (&conorms()[k], &norms()[j]);
        prop_assert_eq!(weak_member(s, a, b), weak_member(s, b, a));
        prop_assert_eq!(strong_member(t, s, a, b), strong_member(t, s, b, a));
    }

    #[test]
    fn strong_membership_implies_weak(k in 0..conorms().len(), j in 0..norms().len(), a in degree(), b in degree()) {
        let (s, t) = (&conorms()[k], &norms()[j]);
        if strong_member(t, s, a, b) {
            prop_assert!(weak_member(s, a, b));
        }
    }
}
