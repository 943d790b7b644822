use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One `(δ, ρ(δ))` sample of a modulus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusSample {
    pub delta: f64,
    pub value: f64,
}

/// A nondecreasing nonnegative function with `ρ(δ) → 0` as `δ → 0⁺`.
///
/// Moduli are evaluable at any `δ`; [`Modulus::samples`] produces the
/// serializable trace and [`Modulus::from_samples`] interpolates one back.
#[derive(Clone)]
pub struct Modulus {
    label: String,
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Modulus({})", self.label)
    }
}

impl Modulus {
    pub fn new(label: impl Into<String>, eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Modulus {
            label: label.into(),
            eval: Arc::new(eval),
        }
    }

    /// `ρ(δ) = c·δ`.
    pub fn linear(c: f64) -> Self {
        Modulus::new(format!("{c}*delta"), move |d| c * d)
    }

    pub fn zero() -> Self {
        Modulus::new("0", |_| 0.0)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, delta: f64) -> f64 {
        (self.eval)(delta)
    }

    pub fn samples(&self, grid: &[f64]) -> Vec<ModulusSample> {
        let mut g = grid.to_vec();
        g.sort_by(f64::total_cmp);
        g.into_iter()
            .map(|delta| ModulusSample {
                delta,
                value: self.eval(delta),
            })
            .collect()
    }

    /// Piecewise-linear interpolation through `(0, 0)` and the samples,
    /// constant beyond the last sample.
    pub fn from_samples(samples: &[ModulusSample]) -> Result<Self> {
        let mut s = samples.to_vec();
        s.sort_by(|a, b| a.delta.total_cmp(&b.delta));
        check_samples(&s, 0.0)?;
        let label = format!("interpolated({} samples)", s.len());
        Ok(Modulus::new(label, move |d| {
            if d <= 0.0 {
                return 0.0;
            }
            let mut prev = ModulusSample { delta: 0.0, value: 0.0 };
            for p in &s {
                if d <= p.delta {
                    let t = (d - prev.delta) / (p.delta - prev.delta);
                    return prev.value + t * (p.value - prev.value);
                }
                prev = *p;
            }
            prev.value
        }))
    }

    pub fn scaled(&self, c: f64) -> Self {
        let inner = self.clone();
        Modulus::new(format!("{c}*({})", self.label), move |d| c * inner.eval(d))
    }
}

/// Checks positivity of `δ`, nonnegativity and monotonicity of the values.
pub fn check_samples(samples: &[ModulusSample], tol: f64) -> Result<()> {
    for s in samples {
        if !(s.delta > 0.0) || !s.delta.is_finite() {
            return Err(Error::Argument(format!("modulus sample at non-positive delta {}", s.delta)));
        }
        if !(s.value >= 0.0) || !s.value.is_finite() {
            return Err(Error::Argument(format!("modulus value {} at delta {}", s.value, s.delta)));
        }
    }
    for w in samples.windows(2) {
        if w[1].delta >= w[0].delta && w[1].value + tol < w[0].value {
            return Err(Error::Argument(format!(
                "modulus decreases between delta {} and {}",
                w[0].delta, w[1].delta
            )));
        }
    }
    Ok(())
}
