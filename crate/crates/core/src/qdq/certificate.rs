use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::sampling::{distance, norm};
use crate::geometry::{GammaSet, LinearMap, Modulus, ModulusSample, OperatorSet};
use crate::mapping::Mapping;

type FamilyEval = Arc<dyn Fn(f64, &[f64]) -> (LinearMap, Vec<f64>) + Send + Sync>;
type Budget = Arc<dyn Fn(f64) -> Option<(f64, f64)> + Send + Sync>;

/// `δ ↦ (L_δ, h_δ)` together with declared Lipschitz budgets of
/// `x ↦ L_δ(x)` and `x ↦ h_δ(x)` on the δ-ball, used by the continuity audit.
#[derive(Clone)]
pub struct Family {
    eval: FamilyEval,
    budget: Budget,
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Family")
    }
}

impl Family {
    pub fn new(
        eval: impl Fn(f64, &[f64]) -> (LinearMap, Vec<f64>) + Send + Sync + 'static,
        budget: impl Fn(f64) -> Option<(f64, f64)> + Send + Sync + 'static,
    ) -> Self {
        Family {
            eval: Arc::new(eval),
            budget: Arc::new(budget),
        }
    }

    /// A family that does not depend on `δ`.
    pub fn constant(
        eval: impl Fn(&[f64]) -> (LinearMap, Vec<f64>) + Send + Sync + 'static,
        budget: Option<(f64, f64)>,
    ) -> Self {
        Family::new(move |_, x| eval(x), move |_| budget)
    }

    pub fn eval(&self, delta: f64, x: &[f64]) -> (LinearMap, Vec<f64>) {
        (self.eval)(delta, x)
    }

    pub fn budget(&self, delta: f64) -> Option<(f64, f64)> {
        (self.budget)(delta)
    }
}

/// The data `(x̄, ȳ, Γ, Λ, δ*, ρ, δ ↦ (L_δ, h_δ))`.
#[derive(Clone, Debug)]
pub struct QdqCertificate {
    pub x_bar: Vec<f64>,
    pub y_bar: Vec<f64>,
    pub gamma: GammaSet,
    pub lambda: OperatorSet,
    pub delta_star: f64,
    pub rho: Modulus,
    pub family: Family,
}

/// The serializable part of a certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub x_bar: Vec<f64>,
    pub y_bar: Vec<f64>,
    pub gamma: GammaSet,
    pub lambda: OperatorSet,
    pub delta_star: f64,
    pub rho_samples: Vec<ModulusSample>,
}

/// Dyadic `{2^-k}` below `delta_star`, truncated below `1e-4`.
pub fn default_delta_grid(delta_star: f64) -> Vec<f64> {
    (1..64)
        .map(|k| 0.5f64.powi(k))
        .filter(|d| *d < delta_star && *d >= 1e-4)
        .collect()
}

impl QdqCertificate {
    pub fn new(
        x_bar: Vec<f64>,
        y_bar: Vec<f64>,
        gamma: GammaSet,
        lambda: OperatorSet,
        delta_star: f64,
        rho: Modulus,
        family: Family,
    ) -> Result<Self> {
        let (m, n) = lambda.shape();
        if x_bar.len() != n || gamma.dimension() != n {
            return Err(Error::dim(n, x_bar.len()));
        }
        if y_bar.len() != m {
            return Err(Error::dim(m, y_bar.len()));
        }
        if !(delta_star > 0.0) {
            return Err(Error::Argument("delta_star must be positive".into()));
        }
        Ok(QdqCertificate {
            x_bar,
            y_bar,
            gamma,
            lambda,
            delta_star,
            rho,
            family,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.x_bar.len()
    }

    pub fn output_dim(&self) -> usize {
        self.y_bar.len()
    }

    /// `ȳ + L_δ(x)·(x − x̄) + h_δ(x)`.
    pub fn predicted(&self, delta: f64, x: &[f64]) -> Vec<f64> {
        let (l, h) = self.family.eval(delta, x);
        let dx: Vec<f64> = x.iter().zip(&self.x_bar).map(|(a, b)| a - b).collect();
        let lx = l.apply(&dx);
        self.y_bar.iter().zip(lx).zip(h).map(|((y, a), b)| y + a + b).collect()
    }

    pub fn with_lambda(&self, lambda: OperatorSet) -> Result<Self> {
        if lambda.shape() != self.lambda.shape() {
            return Err(Error::dim(format!("{:?}", self.lambda.shape()), format!("{:?}", lambda.shape())));
        }
        Ok(QdqCertificate {
            lambda,
            ..self.clone()
        })
    }

    pub fn record(&self) -> CertificateRecord {
        CertificateRecord {
            x_bar: self.x_bar.clone(),
            y_bar: self.y_bar.clone(),
            gamma: self.gamma.clone(),
            lambda: self.lambda.clone(),
            delta_star: self.delta_star,
            rho_samples: self.rho.samples(&default_delta_grid(self.delta_star)),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.record())?)
    }
}

/// Membership oracle of a set-valued map: distance from `y` to `F(x)`.
pub trait SetValuedMap: Send + Sync {
    fn input_dim(&self) -> usize;
    fn output_dim(&self) -> usize;
    fn distance(&self, x: &[f64], y: &[f64]) -> f64;
}

/// What a certificate is checked against.
#[derive(Clone)]
pub enum Target {
    Map(Mapping),
    Set(Arc<dyn SetValuedMap>),
}

impl fmt::Debug for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Target::Map(m) => write!(f, "Target::Map({})", m.label()),
            Target::Set(_) => f.write_str("Target::Set"),
        }
    }
}

impl From<Mapping> for Target {
    fn from(m: Mapping) -> Self {
        Target::Map(m)
    }
}

impl Target {
    pub fn dims(&self) -> (usize, usize) {
        match self {
            Target::Map(m) => (m.input_dim(), m.output_dim()),
            Target::Set(s) => (s.input_dim(), s.output_dim()),
        }
    }

    pub fn residual(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            Target::Map(m) => {
                let fx = m.call(x);
                if fx.iter().any(|v| !v.is_finite()) {
                    return f64::INFINITY;
                }
                distance(&fx, y)
            }
            Target::Set(s) => s.distance(x, y),
        }
    }
}

pub(crate) fn vec_norm(v: &[f64]) -> f64 {
    norm(v)
}
