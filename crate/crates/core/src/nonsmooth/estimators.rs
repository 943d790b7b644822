//! Finite-difference Jacobians and sampling estimators of Clarke Jacobians
//! and set-valued Lie brackets.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flows::VectorField;
use crate::geometry::sampling::{ball_point, stream_rng};
use crate::geometry::{LinearMap, OperatorSet};
use crate::mapping::Mapping;

/// Relative threshold on the two-scale Jacobian disagreement.
pub const DIFFERENTIABILITY_THRESHOLD: f64 = 1e-3;

/// Central-difference Jacobian with step `h`.
pub fn fd_jacobian(f: &Mapping, x: &[f64], h: f64) -> Result<LinearMap> {
    if !(h > 0.0) {
        return Err(Error::Argument("finite-difference step must be positive".into()));
    }
    let (n, m) = (f.input_dim(), f.output_dim());
    if x.len() != n {
        return Err(Error::dim(n, x.len()));
    }
    let mut cols = Vec::with_capacity(n);
    let mut p = x.to_vec();
    for i in 0..n {
        p[i] = x[i] + h;
        let fp = f.eval(&p)?;
        p[i] = x[i] - h;
        let fm = f.eval(&p)?;
        p[i] = x[i];
        cols.push(fp.iter().zip(&fm).map(|(a, b)| (a - b) / (2.0 * h)).collect::<Vec<f64>>());
    }
    let data: Vec<f64> = (0..m).flat_map(|r| cols.iter().map(move |c| c[r])).collect();
    LinearMap::from_row_slice(m, n, &data)
}

#[derive(Clone, Debug, Serialize)]
pub struct JacobianSample {
    pub base_point: Vec<f64>,
    pub jacobian: LinearMap,
    pub fd_step: f64,
    /// Largest entrywise gap between the steps `h` and `h/2`.
    pub differentiability_score: f64,
}

impl JacobianSample {
    pub fn new(f: &Mapping, x: &[f64], h: f64) -> Result<Self> {
        let j = fd_jacobian(f, x, h)?;
        let j2 = fd_jacobian(f, x, h / 2.0)?;
        let score = j
            .flatten()
            .iter()
            .zip(j2.flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        Ok(JacobianSample {
            base_point: x.to_vec(),
            jacobian: j2,
            fd_step: h,
            differentiability_score: score,
        })
    }

    pub fn accepted(&self) -> bool {
        self.differentiability_score <= DIFFERENTIABILITY_THRESHOLD * self.jacobian.norm().max(1.0)
    }
}

/// `Dg(x)·f(x) − Df(x)·g(x)` by central differences.
pub fn lie_bracket_pointwise(f: &VectorField, g: &VectorField, x: &[f64], h: f64) -> Result<Vec<f64>> {
    if f.dimension() != g.dimension() {
        return Err(Error::dim(f.dimension(), g.dimension()));
    }
    let dg = fd_jacobian(g.mapping(), x, h)?;
    let df = fd_jacobian(f.mapping(), x, h)?;
    let a = dg.apply(&f.eval(x)?);
    let b = df.apply(&g.eval(x)?);
    Ok(a.iter().zip(&b).map(|(p, q)| p - q).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimateReport {
    pub set: OperatorSet,
    pub samples: usize,
    pub kept: usize,
    pub rejected: usize,
    pub fd_step: f64,
    pub seed: u64,
}

/// Finite-difference step used by the estimators at a given radius.
pub fn default_fd_step(radius: f64) -> f64 {
    (radius * 1e-3).max(1e-9)
}

fn hull_report(values: Vec<Option<LinearMap>>, fd_step: f64, seed: u64) -> Result<EstimateReport> {
    let samples = values.len();
    let kept: Vec<LinearMap> = values.into_iter().flatten().collect();
    let rejected = samples - kept.len();
    if kept.is_empty() {
        return Err(Error::EstimatorFailed { rejected });
    }
    let kept_n = kept.len();
    Ok(EstimateReport {
        set: OperatorSet::hull(kept)?.canonicalized()?,
        samples,
        kept: kept_n,
        rejected,
        fd_step,
        seed,
    })
}

fn check_args(radius: f64, samples: usize) -> Result<()> {
    if !(radius > 0.0) || samples == 0 {
        return Err(Error::Argument("estimators need a positive radius and at least one sample".into()));
    }
    Ok(())
}

/// Hull of differentiability-scored Jacobians at seeded points of `x̄ + B_radius`.
pub fn clarke_jacobian_estimate(
    f: &Mapping,
    x_bar: &[f64],
    radius: f64,
    samples: usize,
    seed: u64,
) -> Result<EstimateReport> {
    check_args(radius, samples)?;
    let h = default_fd_step(radius);
    let values = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let x = ball_point(&mut rng, x_bar, radius);
            let s = JacobianSample::new(f, &x, h)?;
            Ok(s.accepted().then_some(s.jacobian))
        })
        .collect::<Result<Vec<_>>>()?;
    hull_report(values, h, seed)
}

/// Hull of pointwise brackets at differentiability-scored points of `q + B_radius`,
/// as `n × 1` maps.
pub fn set_lie_bracket_estimate(
    f: &VectorField,
    g: &VectorField,
    q: &[f64],
    radius: f64,
    samples: usize,
    seed: u64,
) -> Result<EstimateReport> {
    check_args(radius, samples)?;
    if f.dimension() != g.dimension() {
        return Err(Error::dim(f.dimension(), g.dimension()));
    }
    let h = default_fd_step(radius);
    let values = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let x = ball_point(&mut rng, q, radius);
            let sf = JacobianSample::new(f.mapping(), &x, h)?;
            let sg = JacobianSample::new(g.mapping(), &x, h)?;
            if !(sf.accepted() && sg.accepted()) {
                return Ok(None);
            }
            let a = sg.jacobian.apply(&f.eval(&x)?);
            let b = sf.jacobian.apply(&g.eval(&x)?);
            let v: Vec<f64> = a.iter().zip(&b).map(|(p, q)| p - q).collect();
            Ok(Some(LinearMap::column(&v)))
        })
        .collect::<Result<Vec<_>>>()?;
    hull_report(values, h, seed)
}
