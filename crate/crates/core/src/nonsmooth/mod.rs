//! Mollification and sampling estimators for Clarke Jacobians and set-valued
//! Lie brackets, and the flow quotient whose limit they bound.

mod estimators;
mod mollifier;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flows::{multiflow_commutator, theta_map, FlowSolverConfig, VectorField};

pub use estimators::{
    clarke_jacobian_estimate, default_fd_step, fd_jacobian, lie_bracket_pointwise, set_lie_bracket_estimate,
    EstimateReport, JacobianSample, DIFFERENTIABILITY_THRESHOLD,
};
pub use mollifier::{bump, bump_mass, mollify, mollify_mapping, MollifierConfig, Quadrature};

/// `(Ψ_{√ε}(q) − q) / ε`.
pub fn bracket_flow_direction(
    f: &VectorField,
    g: &VectorField,
    q: &[f64],
    eps: f64,
    cfg: &FlowSolverConfig,
) -> Result<Vec<f64>> {
    if !(eps > 0.0) {
        return Err(Error::Argument("ε must be positive".into()));
    }
    let p = multiflow_commutator(f, g, q, eps.sqrt(), cfg)?;
    Ok(p.iter().zip(q).map(|(a, b)| (a - b) / eps).collect())
}

/// Mollification settings for the bracket quotients; `eta` defaults to `ε²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BracketMollification {
    pub quadrature_points: usize,
    pub seed: u64,
    pub eta: Option<f64>,
}

impl Default for BracketMollification {
    fn default() -> Self {
        BracketMollification {
            quadrature_points: 256,
            seed: 0,
            eta: None,
        }
    }
}

impl BracketMollification {
    pub fn config(&self, eps: f64) -> MollifierConfig {
        MollifierConfig {
            eta: self.eta.unwrap_or(eps * eps),
            quadrature_points: self.quadrature_points,
            seed: self.seed,
        }
    }
}

/// [`bracket_flow_direction`] for the mollified pair `f_η, g_η`.
pub fn mollified_bracket_flow_direction(
    f: &VectorField,
    g: &VectorField,
    q: &[f64],
    eps: f64,
    cfg: &FlowSolverConfig,
    moll: &BracketMollification,
) -> Result<Vec<f64>> {
    let mc = moll.config(eps);
    bracket_flow_direction(&mollify(f, &mc)?, &mollify(g, &mc)?, q, eps, cfg)
}

/// `(1/ε) ∫₀^{√ε} ∫₀^{√ε} [f_η, g_η](θ(q, σ, √ε, τ)) dτ dσ`, by the midpoint
/// rule in `τ` (the integrand does not depend on `σ`).
///
/// Without mollification the pointwise bracket of `f, g` is used directly.
pub fn integral_bracket_direction(
    f: &VectorField,
    g: &VectorField,
    q: &[f64],
    eps: f64,
    cfg: &FlowSolverConfig,
    nodes: usize,
    moll: Option<&BracketMollification>,
) -> Result<Vec<f64>> {
    if !(eps > 0.0) || nodes == 0 {
        return Err(Error::Argument("need ε > 0 and at least one node".into()));
    }
    let t = eps.sqrt();
    let (fe, ge, h) = match moll {
        Some(m) => {
            let mc = m.config(eps);
            (mollify(f, &mc)?, mollify(g, &mc)?, mc.eta * 1e-2)
        }
        None => (f.clone(), g.clone(), default_fd_step(t)),
    };
    let mut acc = vec![0.0; q.len()];
    for k in 0..nodes {
        let tau = t * (k as f64 + 0.5) / nodes as f64;
        let th = theta_map(&fe, &ge, q, 0.0, t, tau, cfg)?;
        let b = lie_bracket_pointwise(&fe, &ge, &th, h)?;
        for (a, v) in acc.iter_mut().zip(b) {
            *a += v / nodes as f64;
        }
    }
    Ok(acc)
}
