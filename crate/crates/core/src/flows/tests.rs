use super::*;
use crate::flows::catalog::{constant_field, linear_field};

fn rk4(step: f64) -> FlowSolverConfig {
    FlowSolverConfig {
        method: FlowMethod::Rk4,
        step,
        max_steps: 10_000_000,
    }
}

#[test]
fn exponential_growth() {
    let f = field_from_key("identity_1d").unwrap();
    let y = flow(&f, &[1.0], 1.0, &rk4(1e-3)).unwrap();
    assert!((y[0] - std::f64::consts::E).abs() <= 1e-8);
}

#[test]
fn constant_field_translates() {
    let f = constant_field(&[0.5, -2.0]);
    let y = flow(&f, &[1.0, 1.0], 0.7, &rk4(1e-2)).unwrap();
    assert!((y[0] - 1.35).abs() < 1e-13 && (y[1] + 0.4).abs() < 1e-13);
}

#[test]
fn abs_vertical_field_has_closed_form_flow() {
    let g = field_from_key("abs_x1_vertical").unwrap();
    for a in [-0.7, 0.0, 0.3] {
        let y = flow(&g, &[a, 0.0], 0.4, &rk4(1e-2)).unwrap();
        assert!((y[0] - a).abs() < 1e-14);
        assert!((y[1] - a.abs() * 0.4).abs() < 1e-13);
    }
}

#[test]
fn commutator_of_constants_is_identity() {
    let f = constant_field(&[1.0, 2.0]);
    let g = constant_field(&[-0.5, 0.25]);
    let q = [0.3, -0.1];
    let p = multiflow_commutator(&f, &g, &q, 0.2, &rk4(1e-3)).unwrap();
    assert!(distance(&p, &q) < 1e-12);
}

#[test]
fn commutator_of_unit_x_and_abs_field() {
    let f = field_from_key("unit_x").unwrap();
    let g = field_from_key("abs_x1_vertical").unwrap();
    for t in [0.1, 0.01] {
        let p = multiflow_commutator(&f, &g, &[0.0, 0.0], t, &FlowSolverConfig::for_horizon(t)).unwrap();
        assert!(p[0].abs() < 1e-14);
        assert!((p[1] - t * t).abs() < 1e-14);
    }
}

#[test]
fn commutator_of_linear_fields_matches_matrix_commutator() {
    let a = vec![vec![0.0, 1.0], vec![0.0, 0.0]];
    let b = vec![vec![0.0, 0.0], vec![1.0, 0.0]];
    let (f, g) = (linear_field(&a).unwrap(), linear_field(&b).unwrap());
    let q = [1.0, 0.5];
    // (BA - AB) = diag(-1, 1)
    let expected = [-q[0], q[1]];
    let t = 1e-2;
    let p = multiflow_commutator(&f, &g, &q, t, &rk4(1e-4)).unwrap();
    let d = [(p[0] - q[0]) / (t * t), (p[1] - q[1]) / (t * t)];
    assert!(distance(&d, &expected) < 5e-2, "{d:?}");
}

#[test]
fn theta_identities() {
    let f = field_from_key("pendulum").unwrap();
    let g = field_from_key("sine_shear").unwrap();
    let x = [0.2, -0.3];
    let cfg = rk4(1e-3);
    assert_eq!(theta_map(&f, &g, &x, 0.0, 0.0, 0.0, &cfg).unwrap(), x.to_vec());
    let z = field_from_key("zero_2d").unwrap();
    let y = theta_map(&z, &z, &x, 0.1, 0.3, 0.2, &cfg).unwrap();
    assert_eq!(y, x.to_vec());

    // independent re-composition
    let (t, tau) = (0.3, 0.1);
    let direct = flow(&f, &flow(&g, &flow(&f, &x, t, &cfg).unwrap(), tau, &cfg).unwrap(), tau - t, &cfg).unwrap();
    let th = theta_map(&f, &g, &x, 0.05, t, tau, &cfg).unwrap();
    assert!(distance(&direct, &th) < 1e-12);
}

#[test]
fn semigroup_and_reversibility() {
    let f = field_from_key("pendulum").unwrap();
    let q = [0.4, 0.1];
    let cfg = rk4(1e-3);
    let a = flow(&f, &flow(&f, &q, 0.3, &cfg).unwrap(), 0.5, &cfg).unwrap();
    let b = flow(&f, &q, 0.8, &cfg).unwrap();
    assert!(distance(&a, &b) < 10.0 * 1e-3 * 1e-6);
    let back = flow(&f, &flow(&f, &q, 0.8, &cfg).unwrap(), -0.8, &cfg).unwrap();
    assert!(distance(&back, &q) < 1e-10);
}

#[test]
fn rk4_is_fourth_order_on_smooth_fields() {
    let f = field_from_key("pendulum").unwrap();
    let q = [1.0, 0.0];
    let reference = flow(&f, &q, 1.0, &rk4(1e-4)).unwrap();
    let e1 = distance(&flow(&f, &q, 1.0, &rk4(0.1)).unwrap(), &reference);
    let e2 = distance(&flow(&f, &q, 1.0, &rk4(0.05)).unwrap(), &reference);
    let ratio = e1 / e2;
    assert!(ratio > 12.0 && ratio < 20.0, "ratio {ratio}");
}

#[test]
fn euler_is_first_order() {
    let f = field_from_key("identity_1d").unwrap();
    let cfg = |h| FlowSolverConfig {
        method: FlowMethod::Euler,
        step: h,
        max_steps: 1_000_000,
    };
    let e = |h| (flow(&f, &[1.0], 1.0, &cfg(h)).unwrap()[0] - std::f64::consts::E).abs();
    let ratio = e(1e-3) / e(5e-4);
    assert!((ratio - 2.0).abs() < 0.05);
}

#[test]
fn escape_blowup_and_horizon_errors() {
    let f = field_from_key("unit_x").unwrap().with_domain(BoxDomain::cube(2, 1.0)).unwrap();
    match flow(&f, &[0.0, 0.0], 2.0, &rk4(1e-2)) {
        Err(Error::DomainEscape { time, state }) => {
            assert!(time >= 1.0 - 1e-9 && time <= 1.01 + 1e-9, "{time}");
            assert!(state[0] > 1.0);
        }
        other => panic!("{other:?}"),
    }
    let blow = VectorField::new("cube", 1, 1.0, |x| vec![x[0] * x[0] * x[0]]);
    assert!(matches!(flow(&blow, &[10.0], 10.0, &rk4(1e-1)), Err(Error::BlowUp { .. })));
    let tight = FlowSolverConfig {
        method: FlowMethod::Rk4,
        step: 0.1,
        max_steps: 5,
    };
    assert!(matches!(flow(&f, &[0.0, 0.0], 0.9, &tight), Err(Error::HorizonExceeded { .. })));
    assert!(flow(&f, &[0.0, 0.0], 0.5, &tight).is_ok());
}
