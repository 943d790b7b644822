//! Black-box maps `R^n → R^m` on box domains.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned box `Π [lower_i, upper_i]`; infinite bounds are allowed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl BoxDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::dim(lower.len(), upper.len()));
        }
        if lower.iter().zip(&upper).any(|(l, u)| !(l <= u)) {
            return Err(Error::Argument("box bounds must satisfy lower <= upper".into()));
        }
        Ok(BoxDomain { lower, upper })
    }

    pub fn unbounded(n: usize) -> Self {
        BoxDomain {
            lower: vec![f64::NEG_INFINITY; n],
            upper: vec![f64::INFINITY; n],
        }
    }

    /// The cube `[-r, r]^n`.
    pub fn cube(n: usize, r: f64) -> Self {
        BoxDomain {
            lower: vec![-r; n],
            upper: vec![r; n],
        }
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.lower.len()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| *v >= *l && *v <= *u)
    }
}

type Eval = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A labelled map `R^n → R^m` restricted to a box.
#[derive(Clone)]
pub struct Mapping {
    label: String,
    input_dim: usize,
    output_dim: usize,
    domain: BoxDomain,
    eval: Eval,
}

impl fmt::Debug for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Mapping")
            .field("label", &self.label)
            .field("input_dim", &self.input_dim)
            .field("output_dim", &self.output_dim)
            .field("domain", &self.domain)
            .finish()
    }
}

impl Mapping {
    pub fn new(
        label: impl Into<String>,
        input_dim: usize,
        output_dim: usize,
        eval: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Mapping {
            label: label.into(),
            input_dim,
            output_dim,
            domain: BoxDomain::unbounded(input_dim),
            eval: Arc::new(eval),
        }
    }

    /// A scalar function of one variable as a `1 → 1` map.
    pub fn scalar(label: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Mapping::new(label, 1, 1, move |x| vec![f(x[0])])
    }

    pub fn with_domain(mut self, domain: BoxDomain) -> Result<Self> {
        if domain.dimension() != self.input_dim {
            return Err(Error::dim(self.input_dim, domain.dimension()));
        }
        self.domain = domain;
        Ok(self)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn domain(&self) -> &BoxDomain {
        &self.domain
    }

    /// Evaluates with dimension and domain checks.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.input_dim {
            return Err(Error::dim(self.input_dim, x.len()));
        }
        if !self.domain.contains(x) {
            return Err(Error::DomainEscape {
                time: 0.0,
                state: x.to_vec(),
            });
        }
        Ok(self.call(x))
    }

    /// Evaluates without checks.
    pub fn call(&self, x: &[f64]) -> Vec<f64> {
        (self.eval)(x)
    }

    pub fn map_output(&self, label: impl Into<String>, output_dim: usize, post: impl Fn(Vec<f64>) -> Vec<f64> + Send + Sync + 'static) -> Mapping {
        let inner = self.eval.clone();
        Mapping {
            label: label.into(),
            input_dim: self.input_dim,
            output_dim,
            domain: self.domain.clone(),
            eval: Arc::new(move |x| post(inner(x))),
        }
    }
}
