use super::*;
use crate::error::Error;
use crate::flows::field_from_key;
use crate::geometry::{hausdorff_distance, GammaSet, LinearMap, Modulus, OperatorSet};
use crate::mapping::Mapping;
use crate::nonsmooth::fd_jacobian;

const GRID: [f64; 3] = [1e-1, 1e-2, 1e-3];

fn cfg(seed: u64) -> VerifyConfig {
    VerifyConfig::new(GRID.to_vec(), 200, seed)
}

fn abs_map() -> Mapping {
    Mapping::scalar("abs", f64::abs)
}

fn accept(target: impl Into<Target>, cert: &QdqCertificate) -> VerificationReport {
    let r = verify_certificate(&target.into(), cert, &cfg(7)).unwrap();
    assert!(r.accepted, "{:#?}", r.worst_violations);
    r
}

fn square_cert() -> QdqCertificate {
    delta_independent_certificate(
        vec![0.0],
        vec![0.0],
        GammaSet::full(1),
        OperatorSet::singleton(LinearMap::scalar(0.0)),
        1.0,
        Modulus::linear(1.0),
        |x| LinearMap::scalar(x[0]),
        |_| vec![0.0],
        Some((1.0, 0.0)),
    )
    .unwrap()
}

/// `x ↦ a + c(x − x̄)` at `x̄ = 0`, exact with zero remainder.
fn affine_cert(a: f64, c: f64, rho: Modulus) -> QdqCertificate {
    delta_independent_certificate(
        vec![0.0],
        vec![a],
        GammaSet::full(1),
        OperatorSet::singleton(LinearMap::scalar(c)),
        1.0,
        rho,
        move |_| LinearMap::scalar(c),
        |_| vec![0.0],
        Some((0.0, 0.0)),
    )
    .unwrap()
}

fn sorted_vertices(s: &OperatorSet) -> Vec<Vec<f64>> {
    let mut v: Vec<Vec<f64>> = s.vertices().unwrap().iter().map(LinearMap::flatten).collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

#[test]
fn absvalue_family_printed_values() {
    for delta in [0.5, 0.1, 1e-3] {
        let p = absvalue_certificate(delta).unwrap();
        let d2 = delta * delta;
        assert_eq!(p.l(d2), 1.0);
        assert_eq!(p.l(-d2), -1.0);
        assert_eq!(p.offset_h(0.0), 0.0);
        assert_eq!(p.g(0.0), d2 / 2.0);
        for x in [2.0 * d2, -1.5 * d2, delta, -3.0] {
            assert_eq!(p.l(x), x.signum());
            assert_eq!(p.offset_h(x), d2 / 2.0);
            assert_eq!(p.h(x), 0.0);
        }
        let x = d2 / 2.0;
        assert!((x.abs() - p.l(x) * x - p.h(x)).abs() <= 1e-12);
        let mut lo: f64 = 0.0;
        let mut hi: f64 = 0.0;
        for i in 0..=2000 {
            let x = -delta + 2.0 * delta * i as f64 / 2000.0;
            lo = lo.min(p.l(x));
            hi = hi.max(p.l(x));
            assert!(p.h(x).abs() <= d2 / 4.0 + 1e-18);
            assert!(p.offset_h(x).abs() <= d2 + 1e-18);
            assert!((x.abs() - p.l(x) * x - p.h(x)).abs() <= 1e-15);
            let gap = p.l(x) * x + p.offset_h(x) - x.abs();
            let want = if x.abs() <= d2 { x * x / (2.0 * d2) } else { d2 / 2.0 };
            assert!((gap - want).abs() <= 1e-15);
        }
        assert_eq!((lo, hi), (-1.0, 1.0));
    }
    assert!(absvalue_certificate(0.0).is_err());
    assert!(absvalue_certificate(1.0).is_err());
}

#[test]
fn absvalue_certificate_accepted() {
    let cert = absvalue_qdq(OperatorSet::interval(-1.0, 1.0)).unwrap();
    let r = accept(abs_map(), &cert);
    assert_eq!(r.points_checked, 600);
    assert!(r.continuity_pairs > 0);
}

#[test]
fn perturbed_lambda_rejected_at_minus_delta() {
    let lambda = OperatorSet::hull(vec![LinearMap::scalar(-0.5), LinearMap::scalar(1.0)]).unwrap();
    let cert = absvalue_qdq(lambda).unwrap();
    let r = verify_certificate(&abs_map().into(), &cert, &cfg(7)).unwrap();
    assert!(!r.accepted);
    for delta in [1e-2, 1e-3] {
        let v = r
            .worst_violations
            .iter()
            .find(|v| v.delta == delta && v.x == vec![-delta] && v.check == Check::LambdaDistance)
            .expect("violation at x = -delta");
        assert!((v.value - 0.5).abs() < 1e-12);
    }
}

#[test]
fn enlarged_lambda_still_accepted() {
    for (lo, hi) in [(-1.0, 1.0), (-1.5, 1.0), (-3.0, 2.0)] {
        accept(abs_map(), &absvalue_qdq(OperatorSet::interval(lo, hi)).unwrap());
    }
    let cert = square_cert();
    let big = OperatorSet::interval(-0.1, 0.2);
    accept(Mapping::scalar("sq", |x| x * x), &cert.with_lambda(big).unwrap());
}

#[test]
fn square_delta_independent_accepted() {
    accept(Mapping::scalar("sq", |x| x * x), &square_cert());
}

#[test]
fn grid_outside_delta_star_is_an_argument_error() {
    let cert = absvalue_qdq(OperatorSet::interval(-1.0, 1.0)).unwrap();
    let c = VerifyConfig::new(vec![0.5, 1.0], 10, 0);
    assert!(matches!(verify_certificate(&abs_map().into(), &cert, &c), Err(Error::Argument(_))));
}

#[test]
fn verification_is_deterministic() {
    let lambda = OperatorSet::hull(vec![LinearMap::scalar(-0.5), LinearMap::scalar(1.0)]).unwrap();
    let cert = absvalue_qdq(lambda).unwrap();
    let a = verify_certificate(&abs_map().into(), &cert, &cfg(3)).unwrap();
    let b = verify_certificate(&abs_map().into(), &cert, &cfg(3)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn record_round_trips() {
    let cert = absvalue_qdq(OperatorSet::interval(-1.0, 1.0)).unwrap();
    let json = cert.to_json().unwrap();
    let back: CertificateRecord = serde_json::from_str(&json).unwrap();
    assert_eq!(back, cert.record());
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    for key in ["x_bar", "y_bar", "gamma", "lambda", "delta_star", "rho_samples"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn one_sided_derivative_examples() {
    let (l, r) = one_sided_derivatives(&abs_map(), 0.0).unwrap();
    assert!((l[0] + 1.0).abs() < 1e-12 && (r[0] - 1.0).abs() < 1e-12);

    let (l, r) = one_sided_derivatives(&Mapping::scalar("sin", f64::sin), 0.3).unwrap();
    assert!((l[0] - 0.3f64.cos()).abs() < 1e-6 && (r[0] - 0.3f64.cos()).abs() < 1e-6);

    let f = Mapping::new("t_abs", 1, 2, |t| vec![t[0], t[0].abs()]);
    let (l, r) = one_sided_derivatives(&f, 0.0).unwrap();
    for (got, want) in [(l, [1.0, -1.0]), (r, [1.0, 1.0])] {
        assert!(got.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12), "{got:?}");
    }

    let wiggle = Mapping::scalar("t_sin_inv", |t| if t == 0.0 { 0.0 } else { t * (1.0 / t).sin() });
    assert!(matches!(
        one_sided_derivatives(&wiggle, 0.0),
        Err(Error::NotOneSidedDifferentiable { .. })
    ));
}

#[test]
fn minimal_curve_examples() {
    let s = minimal_curve_qdq(&abs_map(), 0.0).unwrap();
    assert_eq!(sorted_vertices(&s), vec![vec![-1.0], vec![1.0]]);
    assert!(s.convex_closure());

    let s = minimal_curve_qdq(&Mapping::scalar("exp", f64::exp), 0.0).unwrap();
    assert_eq!(s.generators().len(), 1);
    assert!((s.generators()[0].get(0, 0) - 1.0).abs() < 1e-6);

    let s = minimal_curve_qdq(&Mapping::scalar("max", |t| t.max(2.0 * t)), 0.0).unwrap();
    let v = sorted_vertices(&s);
    assert!((v[0][0] - 1.0).abs() < 1e-12 && (v[1][0] - 2.0).abs() < 1e-12);
}

#[test]
fn curve_certificate_branches() {
    let f = Mapping::new("t_abs", 1, 2, |t| vec![t[0], t[0].abs()]);
    let data = CurveData::new(f, 0.0).unwrap();
    let delta = 0.1;
    let p = curve_certificate(&data, delta).unwrap();
    let d2 = delta * delta;
    for t in [d2, -d2, 0.05, -0.07, 0.0999] {
        let l = p.l_vec(t);
        let q = [t / t, t.abs() / t];
        assert!(l.iter().zip(q).all(|(a, b)| (a - b).abs() < 1e-15));
        assert!(p.h(t).iter().all(|v| v.abs() < 1e-15));
    }
    assert_eq!(p.l_vec(0.0), vec![1.0, 0.0]);
    assert_eq!(p.l_vec(d2 / 2.0), vec![1.0, 1.0]);
    assert_eq!(p.l_vec(-d2 / 2.0), vec![1.0, -1.0]);
    // L is continuous through the segment ends
    for t in [d2 / 2.0, d2, -d2 / 2.0, -d2] {
        let a = p.l_vec(t * (1.0 - 1e-9));
        let b = p.l_vec(t * (1.0 + 1e-9));
        assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-6));
    }
    assert!(curve_certificate(&data, 1.0).is_err());
}

#[test]
fn curve_certificates_accepted() {
    let data = CurveData::new(abs_map(), 0.0).unwrap();
    let cert = curve_qdq(&data, OperatorSet::interval(-1.0, 1.0), 1.0).unwrap();
    accept(abs_map(), &cert);

    let f = Mapping::new("t_abs", 1, 2, |t| vec![t[0], t[0].abs()]);
    let data = CurveData::new(f.clone(), 0.0).unwrap();
    let hull = OperatorSet::hull_of_vectors(&[vec![1.0, -1.0], vec![1.0, 1.0]]).unwrap();
    accept(f, &curve_qdq(&data, hull, 1.0).unwrap());

    // quotients approach the derivatives only linearly
    let g = Mapping::scalar("abs_plus_sq", |t| t.abs() + t * t);
    let data = CurveData::new(g.clone(), 0.0).unwrap();
    accept(g, &curve_qdq(&data, OperatorSet::interval(-1.0, 1.0), 0.5).unwrap());

    // based away from the origin
    let h = Mapping::scalar("shifted_kink", |t| (t - 1.0).abs() * 3.0 + 2.0);
    let data = CurveData::new(h.clone(), 1.0).unwrap();
    accept(h, &curve_qdq(&data, OperatorSet::interval(-3.0, 3.0), 1.0).unwrap());
}

#[test]
fn curve_certificate_with_bent_arc() {
    let f = Mapping::new("t_abs", 1, 2, |t| vec![t[0], t[0].abs()]);
    let data = CurveData::new(f.clone(), 0.0)
        .unwrap()
        .with_arc(|s| vec![1.0 + 0.5 * (1.0 - s.abs()), s])
        .unwrap();
    let tri = OperatorSet::hull_of_vectors(&[vec![1.0, -1.0], vec![1.0, 1.0], vec![1.5, 0.0]]).unwrap();
    accept(f.clone(), &curve_qdq(&data, tri, 1.0).unwrap());
    let seg = OperatorSet::hull_of_vectors(&[vec![1.0, -1.0], vec![1.0, 1.0]]).unwrap();
    let r = verify_certificate(&f.into(), &curve_qdq(&data, seg, 1.0).unwrap(), &cfg(7)).unwrap();
    assert!(!r.accepted);
    assert!(CurveData::new(abs_map(), 0.0).unwrap().with_arc(|s| vec![s + 0.1]).is_err());
}

#[test]
fn falsifier_examples() {
    let data = CurveData::new(abs_map(), 0.0).unwrap();
    let split = OperatorSet::finite(vec![LinearMap::scalar(-1.0), LinearMap::scalar(1.0)]).unwrap();
    match falsify_curve_qdq(&data, &split).unwrap() {
        Some(CurveWitness::Disconnected { gap, .. }) => assert!((gap - 2.0).abs() < 1e-12),
        other => panic!("{other:?}"),
    }
    let half = OperatorSet::interval(0.0, 1.0);
    match falsify_curve_qdq(&data, &half).unwrap() {
        Some(CurveWitness::MissingDerivative { side, distance, .. }) => {
            assert_eq!(side, "left");
            assert!((distance - 1.0).abs() < 1e-9);
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(falsify_curve_qdq(&data, &OperatorSet::interval(-1.0, 1.0)).unwrap(), None);
    // a chain of close points is connected at a coarse gap
    let chain: Vec<LinearMap> = (0..=20).map(|i| LinearMap::scalar(-1.0 + 0.1 * i as f64)).collect();
    let chain = OperatorSet::finite(chain).unwrap();
    assert_eq!(falsify_curve_qdq_with_gap(&data, &chain, 0.11).unwrap(), None);
    assert!(falsify_curve_qdq(&data, &chain).unwrap().is_some());
}

#[test]
fn linear_combination() {
    let abs = absvalue_qdq(OperatorSet::interval(-1.0, 1.0)).unwrap();
    let sq = square_cert();
    let c = combine_certificates(CombineKind::Linear { alpha: 2.0, beta: 0.0 }, &abs, &sq).unwrap();
    assert!(hausdorff_distance(&c.lambda, &OperatorSet::interval(-2.0, 2.0)).unwrap() < 1e-12);
    let sqm = Mapping::scalar("sq", |x| x * x);
    accept(linear_combination_map(2.0, &abs_map(), 0.0, &sqm).unwrap(), &c);
    let c = combine_certificates(CombineKind::Linear { alpha: -1.0, beta: 3.0 }, &abs, &sq).unwrap();
    accept(linear_combination_map(-1.0, &abs_map(), 3.0, &sqm).unwrap(), &c);
}

#[test]
fn set_product() {
    let abs = absvalue_qdq(OperatorSet::interval(-1.0, 1.0)).unwrap();
    let sq = square_cert();
    let c = combine_certificates(CombineKind::SetProduct, &abs, &sq).unwrap();
    assert_eq!(c.lambda.shape(), (2, 1));
    let want = OperatorSet::hull_of_vectors(&[vec![-1.0, 0.0], vec![1.0, 0.0]]).unwrap();
    assert!(hausdorff_distance(&c.lambda, &want).unwrap() < 1e-12);
    let sqm = Mapping::scalar("sq", |x| x * x);
    accept(stacked_map(&abs_map(), &sqm).unwrap(), &c);
}

#[test]
fn scalar_product() {
    let abs = absvalue_qdq(OperatorSet::interval(-1.0, 1.0)).unwrap();
    let one = affine_cert(1.0, 0.0, Modulus::zero());
    let c = combine_certificates(CombineKind::ScalarProduct, &abs, &one).unwrap();
    assert!(hausdorff_distance(&c.lambda, &OperatorSet::interval(-1.0, 1.0)).unwrap() < 1e-12);
    accept(product_map(&abs_map(), &Mapping::scalar("one", |_| 1.0)).unwrap(), &c);

    let lin = affine_cert(1.0, 1.0, Modulus::zero());
    let c = combine_certificates(CombineKind::ScalarProduct, &abs, &lin).unwrap();
    assert!(hausdorff_distance(&c.lambda, &OperatorSet::interval(-1.0, 1.0)).unwrap() < 1e-12);
    accept(product_map(&abs_map(), &Mapping::scalar("one_plus_x", |x| 1.0 + x)).unwrap(), &c);

    let pair = combine_certificates(CombineKind::SetProduct, &abs, &abs).unwrap();
    assert!(matches!(
        combine_certificates(CombineKind::ScalarProduct, &pair, &abs),
        Err(Error::Argument(_))
    ));
}

#[test]
fn combine_rejects_mismatched_bases() {
    let abs = absvalue_qdq(OperatorSet::interval(-1.0, 1.0)).unwrap();
    let mut moved = square_cert();
    moved.x_bar = vec![0.5];
    assert!(matches!(
        combine_certificates(CombineKind::SetProduct, &abs, &moved),
        Err(Error::Argument(_))
    ));
    let pair = combine_certificates(CombineKind::SetProduct, &abs, &abs).unwrap();
    assert!(combine_certificates(CombineKind::Linear { alpha: 1.0, beta: 1.0 }, &pair, &abs).is_err());
}

#[test]
fn combine_intersects_directions() {
    let fam = |x: &[f64]| (LinearMap::scalar(1.0), vec![0.0 * x[0]]);
    let a = delta_independent_certificate(
        vec![0.0],
        vec![0.0],
        GammaSet::half_line(&[1.0]).unwrap(),
        OperatorSet::singleton(LinearMap::scalar(1.0)),
        1.0,
        Modulus::zero(),
        move |x| fam(x).0,
        |_| vec![0.0],
        Some((0.0, 0.0)),
    )
    .unwrap();
    let abs = absvalue_qdq(OperatorSet::interval(-1.0, 1.0)).unwrap();
    let c = combine_certificates(CombineKind::Linear { alpha: 1.0, beta: 1.0 }, &a, &abs).unwrap();
    assert_eq!(c.gamma, GammaSet::half_line(&[1.0]).unwrap());
}

#[test]
fn compose_examples() {
    let abs = absvalue_qdq(OperatorSet::interval(-1.0, 1.0)).unwrap();
    let double = affine_cert(0.0, 2.0, Modulus::zero());
    let c = compose_certificates(&abs, &double).unwrap();
    let v = sorted_vertices(&c.lambda);
    assert!((v[0][0] + 2.0).abs() <= 1e-10 && (v[1][0] - 2.0).abs() <= 1e-10);
    let twice = composed_map(&abs_map(), &Mapping::scalar("2y", |y| 2.0 * y)).unwrap();
    accept(twice, &c);

    let c = compose_certificates(&abs, &square_cert()).unwrap();
    assert_eq!(sorted_vertices(&c.lambda), vec![vec![0.0]]);
    accept(composed_map(&abs_map(), &Mapping::scalar("sq", |y| y * y)).unwrap(), &c);

    let neg = affine_cert(0.0, -1.0, Modulus::zero());
    let c = compose_certificates(&neg, &abs).unwrap();
    assert!(hausdorff_distance(&c.lambda, &OperatorSet::interval(-1.0, 1.0)).unwrap() < 1e-12);
    accept(composed_map(&Mapping::scalar("neg", |x| -x), &abs_map()).unwrap(), &c);

    let moved = affine_cert(0.5, 1.0, Modulus::zero());
    assert!(matches!(compose_certificates(&moved, &abs), Err(Error::Argument(_))));
}

#[test]
fn compose_of_two_kinks() {
    // |(|x| − 0)| composed with a curve certificate
    let data = CurveData::new(Mapping::scalar("kink", |t| t.max(2.0 * t)), 0.0).unwrap();
    let f = curve_qdq(&data, OperatorSet::interval(1.0, 2.0), 1.0).unwrap();
    let abs = absvalue_qdq(OperatorSet::interval(-1.0, 1.0)).unwrap();
    let c = compose_certificates(&f, &abs).unwrap();
    assert!(hausdorff_distance(&c.lambda, &OperatorSet::interval(-2.0, 2.0)).unwrap() < 1e-9);
    let target = composed_map(&Mapping::scalar("kink", |t| t.max(2.0 * t)), &abs_map()).unwrap();
    accept(target, &c);
}

#[test]
fn abundant_examples() {
    let id = affine_cert(0.0, 1.0, Modulus::linear(1.0));
    let t = abundant_transfer(&id, &ThetaFamily::half_shift()).unwrap();
    assert_eq!(t.lambda, id.lambda);
    let target = AbundantTarget::new(Mapping::scalar("x", |x| x), ThetaFamily::half_shift());
    accept(Target::Set(std::sync::Arc::new(target)), &t);

    let same = abundant_transfer(&id, &ThetaFamily::identity()).unwrap();
    for d in GRID {
        assert_eq!(same.rho.eval(d), 2.0 * id.rho.eval(d));
        let (l1, h1) = same.family.eval(d, &[0.3 * d]);
        let (l2, h2) = id.family.eval(d, &[0.3 * d]);
        assert_eq!((l1, h1), (l2, h2));
    }

    let abs = absvalue_qdq(OperatorSet::interval(-1.0, 1.0)).unwrap();
    let t = abundant_transfer(&abs, &ThetaFamily::half_shift()).unwrap();
    let target = AbundantTarget::new(abs_map(), ThetaFamily::half_shift());
    accept(Target::Set(std::sync::Arc::new(target)), &t);
    // the shifted predictions are not values of F itself
    let r = verify_certificate(&abs_map().into(), &t, &cfg(7)).unwrap();
    assert!(!r.accepted);
}

#[test]
fn abundant_audit_and_zero_modulus() {
    let id = affine_cert(0.0, 1.0, Modulus::linear(1.0));
    let far = ThetaFamily::new("far", 0.0, |eta, y| y.iter().map(|v| v + 2.0 * eta).collect());
    match abundant_transfer(&id, &far) {
        Err(Error::Precondition(msg)) => assert!(msg.contains("far")),
        other => panic!("{other:?}"),
    }
    let exact = affine_cert(0.0, 1.0, Modulus::zero());
    assert!(matches!(
        abundant_transfer(&exact, &ThetaFamily::half_shift()),
        Err(Error::Precondition(_))
    ));
    assert!(ThetaFamily::from_key("half_shift").is_ok());
    assert!(matches!(ThetaFamily::from_key("nope"), Err(Error::UnknownCatalogKey(k)) if k == "nope"));
}

#[test]
fn abundant_target_distance() {
    let t = AbundantTarget::new(Mapping::scalar("x", |x| x), ThetaFamily::half_shift());
    assert!(t.distance(&[0.2], &[0.2 + 1e-3]) < 1e-12);
    assert!((t.distance(&[0.2], &[0.1]) - 0.1).abs() < 1e-9);
}

#[test]
fn singleton_examples() {
    let sq = Mapping::scalar("sq", |x| x * x);
    assert!(singleton_qdq_check(&sq, &[0.0], &LinearMap::scalar(0.0)));
    assert!(!singleton_qdq_check(&abs_map(), &[0.0], &LinearMap::scalar(0.0)));
    assert!(singleton_qdq_check(&abs_map(), &[1.0], &LinearMap::scalar(1.0)));
    assert!(!singleton_qdq_check(&sq, &[1.0], &LinearMap::scalar(1.0)));
    let f = Mapping::new("quad2", 2, 1, |x| vec![x[0] * x[1] + 3.0 * x[0]]);
    let l = LinearMap::row(&[4.0, 0.0]);
    assert!(singleton_qdq_check(&f, &[0.0, 1.0], &l));
}

#[test]
fn singleton_implies_fd_jacobian_convergence() {
    for (f, x, l) in [
        (Mapping::scalar("sq", |x| x * x), 0.0, 0.0),
        (abs_map(), 1.0, 1.0),
        (Mapping::scalar("sin", f64::sin), 0.5, 0.5f64.cos()),
    ] {
        assert!(singleton_qdq_check(&f, &[x], &LinearMap::scalar(l)));
        let errs: Vec<f64> = (2..12)
            .map(|k| (fd_jacobian(&f, &[x], 0.5f64.powi(k)).unwrap().get(0, 0) - l).abs())
            .collect();
        assert!(errs.last().unwrap() < &1e-6);
        assert!(errs.last().unwrap() <= errs.first().unwrap());
    }
}

#[test]
fn bracket_certificate_for_kinked_pair() {
    let f = field_from_key("unit_x").unwrap();
    let g = field_from_key("abs_x1_vertical").unwrap();
    let lambda = OperatorSet::hull_of_vectors(&[vec![0.0, -1.0], vec![0.0, 1.0]]).unwrap();
    let cert = lie_bracket_certificate(&f, &g, &[0.0, 0.0], lambda, 0.5).unwrap();
    let curve = bracket_curve(&f, &g, &[0.0, 0.0]).unwrap();
    let r = accept(curve, &cert);
    assert!(r.rho_samples.iter().all(|s| s.value < 1e-9));
    // the quotient is (0, 1): the segment {0} × [0.5, 1] is still a certificate,
    // {(1, 0)} is not
    let far = OperatorSet::singleton(LinearMap::column(&[1.0, 0.0]));
    let cert = lie_bracket_certificate(&f, &g, &[0.0, 0.0], far, 0.5).unwrap();
    let curve = bracket_curve(&f, &g, &[0.0, 0.0]).unwrap();
    let r = verify_certificate(&curve.into(), &cert, &cfg(1)).unwrap();
    assert!(!r.modulus_ok && !r.accepted);
}
