//! Flows of Lipschitz vector fields and the commutator multi-flow.

mod catalog;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::sampling::{ball_point, distance, stream_rng};
use crate::mapping::{BoxDomain, Mapping};

pub use catalog::{constant_field, field_from_key, linear_field, FieldRef, FIELD_KEYS};

/// Legs per unit of `|t|` used by [`FlowSolverConfig::for_horizon`].
pub const DEFAULT_STEPS_PER_LEG: usize = 200;

/// A Lipschitz vector field on a box.
#[derive(Clone, Debug)]
pub struct VectorField {
    map: Mapping,
    lipschitz: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct LipschitzAudit {
    pub pairs: usize,
    pub max_ratio: f64,
    pub declared: f64,
    pub passed: bool,
}

impl VectorField {
    pub fn new(
        label: impl Into<String>,
        dimension: usize,
        lipschitz: f64,
        eval: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        VectorField {
            map: Mapping::new(label, dimension, dimension, eval),
            lipschitz,
        }
    }

    pub fn from_mapping(map: Mapping, lipschitz: f64) -> Result<Self> {
        if map.input_dim() != map.output_dim() {
            return Err(Error::dim(map.input_dim(), map.output_dim()));
        }
        Ok(VectorField { map, lipschitz })
    }

    pub fn with_domain(self, domain: BoxDomain) -> Result<Self> {
        Ok(VectorField {
            map: self.map.with_domain(domain)?,
            lipschitz: self.lipschitz,
        })
    }

    pub fn dimension(&self) -> usize {
        self.map.input_dim()
    }

    pub fn label(&self) -> &str {
        self.map.label()
    }

    pub fn domain(&self) -> &BoxDomain {
        self.map.domain()
    }

    pub fn lipschitz_estimate(&self) -> f64 {
        self.lipschitz
    }

    pub fn mapping(&self) -> &Mapping {
        &self.map
    }

    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.map.eval(x)
    }

    pub fn call(&self, x: &[f64]) -> Vec<f64> {
        self.map.call(x)
    }

    pub fn negated(&self) -> VectorField {
        VectorField {
            map: self
                .map
                .map_output(format!("-{}", self.label()), self.dimension(), |v| v.into_iter().map(|x| -x).collect()),
            lipschitz: self.lipschitz,
        }
    }

    /// Samples difference quotients on `center + B_radius` and compares them
    /// against `1.05 ×` the declared constant.
    pub fn audit_lipschitz(&self, center: &[f64], radius: f64, pairs: usize, seed: u64) -> Result<LipschitzAudit> {
        let mut rng = stream_rng(seed, 0);
        let mut max_ratio: f64 = 0.0;
        let mut used = 0;
        for _ in 0..pairs {
            let x = ball_point(&mut rng, center, radius);
            let y = if rng.random::<f64>() < 0.5 {
                ball_point(&mut rng, &x, radius * 1e-3)
            } else {
                ball_point(&mut rng, center, radius)
            };
            let d = distance(&x, &y);
            if d <= 1e-14 || !self.domain().contains(&x) || !self.domain().contains(&y) {
                continue;
            }
            let fx = self.eval(&x)?;
            let fy = self.eval(&y)?;
            max_ratio = max_ratio.max(distance(&fx, &fy) / d);
            used += 1;
        }
        Ok(LipschitzAudit {
            pairs: used,
            max_ratio,
            declared: self.lipschitz,
            passed: max_ratio <= 1.05 * self.lipschitz + 1e-12,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FlowMethod {
    #[default]
    Rk4,
    Euler,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowSolverConfig {
    pub method: FlowMethod,
    pub step: f64,
    pub max_steps: usize,
}

impl Default for FlowSolverConfig {
    fn default() -> Self {
        FlowSolverConfig {
            method: FlowMethod::Rk4,
            step: 1e-3,
            max_steps: 1_000_000,
        }
    }
}

impl FlowSolverConfig {
    /// RK4 with `|t| / 200` per leg.
    pub fn for_horizon(t: f64) -> Self {
        FlowSolverConfig {
            method: FlowMethod::Rk4,
            step: (t.abs() / DEFAULT_STEPS_PER_LEG as f64).max(f64::MIN_POSITIVE),
            max_steps: DEFAULT_STEPS_PER_LEG,
        }
    }

    pub fn horizon(&self) -> f64 {
        self.step * self.max_steps as f64
    }
}

fn axpy(y: &[f64], a: f64, k: &[f64]) -> Vec<f64> {
    y.iter().zip(k).map(|(yi, ki)| yi + a * ki).collect()
}

/// `Φ^f_t(q)`; negative `t` integrates backwards.
pub fn flow(f: &VectorField, q: &[f64], t: f64, cfg: &FlowSolverConfig) -> Result<Vec<f64>> {
    if q.len() != f.dimension() {
        return Err(Error::dim(f.dimension(), q.len()));
    }
    if !(cfg.step > 0.0) || !t.is_finite() {
        return Err(Error::Argument("flow needs a positive step and a finite time".into()));
    }
    if !f.domain().contains(q) {
        return Err(Error::DomainEscape {
            time: 0.0,
            state: q.to_vec(),
        });
    }
    if t == 0.0 {
        return Ok(q.to_vec());
    }
    let needed = ((t.abs() / cfg.step) * (1.0 - 1e-12)).ceil().max(1.0);
    if needed > cfg.max_steps as f64 {
        return Err(Error::HorizonExceeded {
            horizon: t.abs(),
            needed: needed.min(usize::MAX as f64) as usize,
            max_steps: cfg.max_steps,
        });
    }
    let steps = needed as usize;
    let h = t / steps as f64;
    let mut y = q.to_vec();
    for k in 0..steps {
        y = match cfg.method {
            FlowMethod::Euler => axpy(&y, h, &f.call(&y)),
            FlowMethod::Rk4 => {
                let k1 = f.call(&y);
                let k2 = f.call(&axpy(&y, h / 2.0, &k1));
                let k3 = f.call(&axpy(&y, h / 2.0, &k2));
                let k4 = f.call(&axpy(&y, h, &k3));
                y.iter()
                    .enumerate()
                    .map(|(i, yi)| yi + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
                    .collect()
            }
        };
        let time = h * (k + 1) as f64;
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::BlowUp { time });
        }
        if !f.domain().contains(&y) {
            return Err(Error::DomainEscape { time, state: y });
        }
    }
    Ok(y)
}

/// `Ψ_t(q) = Φ^{-g}_t ∘ Φ^{-f}_t ∘ Φ^g_t ∘ Φ^f_t (q)`.
pub fn multiflow_commutator(
    f: &VectorField,
    g: &VectorField,
    q: &[f64],
    t: f64,
    cfg: &FlowSolverConfig,
) -> Result<Vec<f64>> {
    let p = flow(f, q, t, cfg)?;
    let p = flow(g, &p, t, cfg)?;
    let p = flow(f, &p, -t, cfg)?;
    flow(g, &p, -t, cfg)
}

/// `θ(x, σ, t, τ) = Φ^{X₁}_{τ−t} ∘ Φ^{X₂}_τ ∘ Φ^{X₁}_t (x)`.
///
/// The formula does not depend on `σ`; it is accepted so call sites mirror
/// the double integral.
pub fn theta_map(
    x1: &VectorField,
    x2: &VectorField,
    x: &[f64],
    _sigma: f64,
    t: f64,
    tau: f64,
    cfg: &FlowSolverConfig,
) -> Result<Vec<f64>> {
    let p = flow(x1, x, t, cfg)?;
    let p = flow(x2, &p, tau, cfg)?;
    flow(x1, &p, tau - t, cfg)
}

#[cfg(test)]
mod tests;
