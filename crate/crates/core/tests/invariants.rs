use proptest::prelude::*;
use qdq::cones::{classify_pair, is_transversal, separating_functional, ConvexCone};
use qdq::geometry::{hausdorff_distance, LinearMap, OperatorSet};
use qdq::mapping::Mapping;
use qdq::nonsmooth::clarke_jacobian_estimate;
use qdq::qdq::{
    absvalue_qdq, falsify_curve_qdq, minimal_curve_qdq, verify_certificate, CurveData, CurveWitness, VerifyConfig,
};

fn vectors(n: usize, max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-3.0..3.0f64, n), 1..=max)
}

fn cone_pair() -> impl Strategy<Value = (usize, Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    (2usize..=4).prop_flat_map(|n| (Just(n), vectors(n, n + 2), vectors(n, n + 2)))
}

fn matrices(rows: usize, cols: usize) -> impl Strategy<Value = Vec<LinearMap>> {
    prop::collection::vec(prop::collection::vec(-2.0..2.0f64, rows * cols), 1..6)
        .prop_map(move |v| v.iter().map(|d| LinearMap::from_row_slice(rows, cols, d).unwrap()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transversal_xor_separable((n, g1, g2) in cone_pair()) {
        let k1 = ConvexCone::from_generators(n, g1).unwrap();
        let k2 = ConvexCone::from_generators(n, g2).unwrap();
        let t = is_transversal(&k1, &k2).unwrap();
        let s = separating_functional(&k1, &k2).unwrap();
        prop_assert!(t != s.is_some());
        if let Some(c) = s {
            prop_assert!(c.validate(&k1, &k2, 1e-7));
        }
        prop_assert_eq!(classify_pair(&k1, &k2).unwrap().class.is_transversal(), t);
    }

    #[test]
    fn polar_of_polar_contains_generators((n, g, _) in cone_pair()) {
        let k = ConvexCone::from_generators(n, g.clone()).unwrap();
        let pp = k.polar().polar();
        for v in &g {
            prop_assert!(pp.contains(v, 1e-7));
        }
    }

    #[test]
    fn hull_is_idempotent(ms in matrices(1, 2)) {
        let h = OperatorSet::hull(ms).unwrap();
        let again = OperatorSet::hull(h.vertices().unwrap()).unwrap();
        prop_assert!(hausdorff_distance(&h, &again).unwrap() < 1e-9);
        let c = h.canonicalized().unwrap();
        prop_assert_eq!(c.canonicalized().unwrap(), c);
    }

    #[test]
    fn hausdorff_triangle_inequality(a in matrices(2, 1), b in matrices(2, 1), c in matrices(2, 1)) {
        let (a, b, c) = (OperatorSet::hull(a).unwrap(), OperatorSet::hull(b).unwrap(), OperatorSet::hull(c).unwrap());
        let ab = hausdorff_distance(&a, &b).unwrap();
        let bc = hausdorff_distance(&b, &c).unwrap();
        let ac = hausdorff_distance(&a, &c).unwrap();
        prop_assert!(ac <= ab + bc + 1e-9);
        prop_assert!((ab - hausdorff_distance(&b, &a).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn seeded_estimates_are_reproducible(seed in any::<u64>()) {
        let f = Mapping::new("l1", 2, 1, |x| vec![x[0].abs() + x[1].abs()]);
        let a = clarke_jacobian_estimate(&f, &[0.0, 0.0], 1e-3, 64, seed).unwrap();
        let b = clarke_jacobian_estimate(&f, &[0.0, 0.0], 1e-3, 64, seed).unwrap();
        prop_assert_eq!(a.set, b.set);
        prop_assert_eq!(a.kept, b.kept);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Minimal sets and their convex enlargements are never falsified;
    /// the two-point set is, whenever the slopes differ.
    #[test]
    fn curve_falsifier_soundness(a in -2.0..2.0f64, b in -2.0..2.0f64, c in -1.0..1.0f64, grow in 0.0..1.0f64) {
        let f = Mapping::scalar("kinked", move |t| if t < 0.0 { a * t } else { b * t } + c * t * t);
        let data = CurveData::new(f.clone(), 0.0).unwrap();
        let minimal = minimal_curve_qdq(&f, 0.0).unwrap();
        prop_assert!(falsify_curve_qdq(&data, &minimal).unwrap().is_none());
        let (lo, hi) = (a.min(b), a.max(b));
        let big = OperatorSet::interval(lo - grow, hi + grow);
        prop_assert!(falsify_curve_qdq(&data, &big).unwrap().is_none());
        if (a - b).abs() > 1e-3 {
            let split = OperatorSet::finite(vec![LinearMap::scalar(a), LinearMap::scalar(b)]).unwrap();
            let w = falsify_curve_qdq(&data, &split).unwrap();
            prop_assert!(matches!(w, Some(CurveWitness::Disconnected { .. })), "{:?}", w);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn enlarging_lambda_keeps_acceptance(lo in 0.0..1.0f64, hi in 0.0..1.0f64, seed in any::<u64>()) {
        let cfg = VerifyConfig::new(vec![1e-1, 1e-2], 64, seed);
        let abs = Mapping::scalar("abs", f64::abs);
        let base = absvalue_qdq(OperatorSet::interval(-1.0, 1.0)).unwrap();
        let big = base.with_lambda(OperatorSet::interval(-1.0 - lo, 1.0 + hi)).unwrap();
        prop_assert!(verify_certificate(&abs.clone().into(), &base, &cfg).unwrap().accepted);
        prop_assert!(verify_certificate(&abs.into(), &big, &cfg).unwrap().accepted);
    }
}
