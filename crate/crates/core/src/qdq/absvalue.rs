//! The explicit `|x|` family, `δ`-independent certificates and the
//! singleton (differentiability) test.

use serde::Serialize;

use super::certificate::{default_delta_grid, Family, QdqCertificate};
use crate::error::{Error, Result};
use crate::geometry::sampling::{ball_point, distance, stream_rng};
use crate::geometry::{GammaSet, LinearMap, Modulus, OperatorSet};
use crate::mapping::Mapping;

/// `L_δ, h_δ` for `|x|` at the origin, for one `δ ∈ (0, 1)`.
///
/// `L_δ(x) = x/δ²` on `[−δ², δ²]` and `sgn(x)` elsewhere. The remainder is
/// `h_δ(x) = |x| − L_δ(x)·x`, so `|x| = L_δ(x)·x + h_δ(x)` holds exactly;
/// it is supported on `[−δ², δ²]` with `|h_δ| <= δ²/4`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AbsValuePair {
    pub delta: f64,
}

pub fn absvalue_certificate(delta: f64) -> Result<AbsValuePair> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Argument(format!("|x| family needs delta in (0, 1), got {delta}")));
    }
    Ok(AbsValuePair { delta })
}

impl AbsValuePair {
    pub fn l(&self, x: f64) -> f64 {
        let d2 = self.delta * self.delta;
        if x.abs() <= d2 {
            x / d2
        } else {
            x.signum()
        }
    }

    pub fn h(&self, x: f64) -> f64 {
        x.abs() - self.l(x) * x
    }

    /// `g_δ`, the `C¹` smoothing of `|x|` whose derivative is `L_δ`.
    pub fn g(&self, x: f64) -> f64 {
        let d2 = self.delta * self.delta;
        if x.abs() <= d2 {
            0.5 * (x / self.delta).powi(2) + d2 / 2.0
        } else {
            x.abs()
        }
    }

    /// The offset variant `δ²/2 + (|x| − g_δ(x))·1_{[−δ², δ²]}`. It keeps the
    /// bound `|·| <= δ²` but misses `|x| = L_δ(x)·x + h` by `x²/(2δ²)` on
    /// `[−δ², δ²]` and by `δ²/2` outside, so certificates use [`AbsValuePair::h`].
    pub fn offset_h(&self, x: f64) -> f64 {
        let d2 = self.delta * self.delta;
        d2 / 2.0 + if x.abs() <= d2 { x.abs() - self.g(x) } else { 0.0 }
    }
}

/// `|x|` at `(0, 0)` along `R` with the explicit family, `ρ(δ) = δ` and
/// `δ* = 1`, against a caller-chosen `Λ`.
pub fn absvalue_qdq(lambda: OperatorSet) -> Result<QdqCertificate> {
    let family = Family::new(
        |delta, x| {
            let p = AbsValuePair { delta };
            (LinearMap::scalar(p.l(x[0])), vec![p.h(x[0])])
        },
        |delta| Some((1.0 / (delta * delta), 1.0)),
    );
    QdqCertificate::new(
        vec![0.0],
        vec![0.0],
        GammaSet::full(1),
        lambda,
        1.0,
        Modulus::linear(1.0),
        family,
    )
}

/// A certificate whose `(L, h)` does not depend on `δ`.
#[allow(clippy::too_many_arguments)]
pub fn delta_independent_certificate(
    x_bar: Vec<f64>,
    y_bar: Vec<f64>,
    gamma: GammaSet,
    lambda: OperatorSet,
    delta_star: f64,
    rho: Modulus,
    l: impl Fn(&[f64]) -> LinearMap + Send + Sync + 'static,
    h: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    budget: Option<(f64, f64)>,
) -> Result<QdqCertificate> {
    let family = Family::constant(move |x| (l(x), h(x)), budget);
    QdqCertificate::new(x_bar, y_bar, gamma, lambda, delta_star, rho, family)
}

#[derive(Clone, Debug, Serialize)]
pub struct SingletonCheck {
    pub holds: bool,
    /// `(δ, sup_{B_δ} |F(x) − F(x̄) − L(x − x̄)| / δ)`, largest `δ` first.
    pub ratios: Vec<(f64, f64)>,
}

const SINGLETON_RATIO: f64 = 1e-3;

/// Whether `{L}` behaves as a certificate with `ρ = o(1)`, i.e. the
/// linearization error is `o(δ)` on a dyadic grid.
pub fn singleton_qdq_report(f: &Mapping, x_bar: &[f64], l: &LinearMap) -> Result<SingletonCheck> {
    if l.shape() != (f.output_dim(), f.input_dim()) || x_bar.len() != f.input_dim() {
        return Err(Error::dim(
            format!("{}x{}", f.output_dim(), f.input_dim()),
            format!("{}x{}", l.rows(), l.cols()),
        ));
    }
    let fx = f.eval(x_bar)?;
    let n = x_bar.len();
    let mut ratios = Vec::new();
    for (k, delta) in default_delta_grid(1.0).into_iter().enumerate() {
        let mut rng = stream_rng(0x5eed, k as u64);
        let mut pts: Vec<Vec<f64>> = Vec::new();
        for i in 0..n {
            for s in [delta, -delta] {
                let mut p = x_bar.to_vec();
                p[i] += s;
                pts.push(p);
            }
        }
        for _ in 0..32 {
            pts.push(ball_point(&mut rng, x_bar, delta));
        }
        let mut sup: f64 = 0.0;
        for p in &pts {
            let dx: Vec<f64> = p.iter().zip(x_bar).map(|(a, b)| a - b).collect();
            let lin: Vec<f64> = fx.iter().zip(l.apply(&dx)).map(|(a, b)| a + b).collect();
            sup = sup.max(distance(&f.eval(p)?, &lin));
        }
        ratios.push((delta, sup / delta));
    }
    let first = ratios.first().map(|r| r.1).unwrap_or(0.0);
    let last = ratios.last().map(|r| r.1).unwrap_or(0.0);
    Ok(SingletonCheck {
        holds: last <= SINGLETON_RATIO && last <= first + 1e-12,
        ratios,
    })
}

pub fn singleton_qdq_check(f: &Mapping, x_bar: &[f64], l: &LinearMap) -> bool {
    singleton_qdq_report(f, x_bar, l).map(|r| r.holds).unwrap_or(false)
}
