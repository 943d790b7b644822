//! The set-valued bracket as a certificate for `ε ↦ Ψ_{√ε}(q)`.

use super::certificate::{Family, QdqCertificate};
use crate::error::{Error, Result};
use crate::flows::{multiflow_commutator, FlowSolverConfig, VectorField};
use crate::geometry::{dist_to_operator_set, GammaSet, LinearMap, Modulus, OperatorSet};
use crate::mapping::Mapping;

const EPS_FLOOR: f64 = 1e-10;

/// `ε ↦ Ψ_{√ε}(q)` on `[0, ∞)`, with the flow step tied to the horizon.
pub fn bracket_curve(f: &VectorField, g: &VectorField, q: &[f64]) -> Result<Mapping> {
    if f.dimension() != g.dimension() || q.len() != f.dimension() {
        return Err(Error::dim(f.dimension(), q.len()));
    }
    let (f, g, q0) = (f.clone(), g.clone(), q.to_vec());
    let n = q.len();
    Ok(Mapping::new(format!("psi_sqrt_eps[{}, {}]", f.label(), g.label()), 1, n, move |e| {
        let t = e[0].max(0.0).sqrt();
        if t == 0.0 {
            return q0.clone();
        }
        multiflow_commutator(&f, &g, &q0, t, &FlowSolverConfig::for_horizon(t)).unwrap_or_else(|_| vec![f64::NAN; n])
    }))
}

/// The `δ`-independent certificate at `(0, q)` along `R⁺` with
/// `L(ε) = (Ψ_{√ε}(q) − q)/ε` and `h = 0`, against `Λ` (normally a
/// sampled bracket estimate). `ρ` is the measured distance from `L(ε)` to
/// `Λ`, maximized over a log grid up to `δ`.
pub fn lie_bracket_certificate(
    f: &VectorField,
    g: &VectorField,
    q: &[f64],
    lambda: OperatorSet,
    delta_star: f64,
) -> Result<QdqCertificate> {
    let n = q.len();
    if lambda.shape() != (n, 1) {
        return Err(Error::dim(format!("({n}, 1)"), format!("{:?}", lambda.shape())));
    }
    let curve = bracket_curve(f, g, q)?;
    let q0 = q.to_vec();
    let quotient = {
        let (curve, q0) = (curve.clone(), q0.clone());
        move |e: f64| -> Vec<f64> {
            let e = e.max(EPS_FLOOR);
            curve.call(&[e]).iter().zip(&q0).map(|(a, b)| (a - b) / e).collect()
        }
    };
    let mut scan = Vec::new();
    let mut e = EPS_FLOOR;
    while e < delta_star * 1.1 {
        scan.push(e);
        e *= 1.1;
    }
    let mut deviations = Vec::with_capacity(scan.len());
    for &e in &scan {
        let d = dist_to_operator_set(&LinearMap::column(&quotient(e)), &lambda)?;
        if !d.is_finite() {
            return Err(Error::Argument(format!("bracket quotient is not finite at eps = {e:e}")));
        }
        deviations.push((e, d));
    }
    let rho = Modulus::new("measured bracket quotient gap", move |delta| {
        1.1 * deviations
            .iter()
            .take_while(|(e, _)| *e <= delta * 1.1)
            .map(|p| p.1)
            .fold(0.0, f64::max)
    });
    let family = Family::constant(
        move |x| {
            let l = quotient(x[0]);
            if x[0] >= EPS_FLOOR {
                return (LinearMap::column(&l), vec![0.0; n]);
            }
            let fx = curve.call(x);
            let h = fx.iter().zip(&q0).zip(&l).map(|((f, q), l)| f - q - l * x[0]).collect();
            (LinearMap::column(&l), h)
        },
        None,
    );
    QdqCertificate::new(
        vec![0.0],
        q.to_vec(),
        GammaSet::half_line(&[1.0])?,
        lambda,
        delta_star,
        rho,
        family,
    )
}
