//! Transfer of a certificate of `F` to the set-valued `F̃(x) = ∪_η θ_η(F(x))`.

use std::fmt;
use std::sync::Arc;

use super::certificate::{default_delta_grid, Family, QdqCertificate, SetValuedMap};
use crate::error::{Error, Result};
use crate::geometry::sampling::{distance, stream_rng};
use crate::mapping::Mapping;

type ThetaEval = Arc<dyn Fn(f64, &[f64]) -> Vec<f64> + Send + Sync>;

/// `η ↦ θ_η`, maps `R^m → R^m` expected to move points by less than `η`.
#[derive(Clone)]
pub struct ThetaFamily {
    name: String,
    eval: ThetaEval,
    /// Lipschitz constant of `y ↦ θ_η(y) − y`, uniform in `η`.
    displacement_lipschitz: f64,
}

impl fmt::Debug for ThetaFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ThetaFamily({})", self.name)
    }
}

pub const THETA_KEYS: &[&str] = &["identity", "half_shift"];

impl ThetaFamily {
    pub fn new(
        name: impl Into<String>,
        displacement_lipschitz: f64,
        eval: impl Fn(f64, &[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        ThetaFamily {
            name: name.into(),
            eval: Arc::new(eval),
            displacement_lipschitz,
        }
    }

    pub fn identity() -> Self {
        ThetaFamily::new("identity", 0.0, |_, y| y.to_vec())
    }

    /// `θ_η(y) = y + (η/2)·u` with `u` the normalized all-ones vector.
    pub fn half_shift() -> Self {
        ThetaFamily::new("half_shift", 0.0, |eta, y| {
            let c = eta / 2.0 / (y.len() as f64).sqrt();
            y.iter().map(|v| v + c).collect()
        })
    }

    pub fn from_key(key: &str) -> Result<Self> {
        match key {
            "identity" => Ok(Self::identity()),
            "half_shift" => Ok(Self::half_shift()),
            other => Err(Error::UnknownCatalogKey(other.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn apply(&self, eta: f64, y: &[f64]) -> Vec<f64> {
        (self.eval)(eta, y)
    }
}

/// `F̃(x) = ∪_{η>0} θ_η(F(x))` as a membership oracle.
#[derive(Clone, Debug)]
pub struct AbundantTarget {
    pub f: Mapping,
    pub theta: ThetaFamily,
}

impl AbundantTarget {
    pub fn new(f: Mapping, theta: ThetaFamily) -> Self {
        AbundantTarget { f, theta }
    }
}

const ETA_MIN: f64 = 1e-14;
const ETA_MAX: f64 = 1e2;
const ETA_GRID: usize = 600;

impl SetValuedMap for AbundantTarget {
    fn input_dim(&self) -> usize {
        self.f.input_dim()
    }

    fn output_dim(&self) -> usize {
        self.f.output_dim()
    }

    /// Infimum over `η` of `|θ_η(F(x)) − y|`: a log grid, then golden
    /// section around the best grid point.
    fn distance(&self, x: &[f64], y: &[f64]) -> f64 {
        let fx = self.f.call(x);
        let at = |u: f64| distance(&self.theta.apply(u.exp(), &fx), y);
        let (lo, hi) = (ETA_MIN.ln(), ETA_MAX.ln());
        let step = (hi - lo) / (ETA_GRID - 1) as f64;
        let (mut best_i, mut best) = (0, f64::INFINITY);
        for i in 0..ETA_GRID {
            let v = at(lo + step * i as f64);
            if v < best {
                best = v;
                best_i = i;
            }
        }
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        let mut a = lo + step * best_i.saturating_sub(1) as f64;
        let mut b = lo + step * (best_i + 1).min(ETA_GRID - 1) as f64;
        let mut c = b - phi * (b - a);
        let mut d = a + phi * (b - a);
        let (mut fc, mut fd) = (at(c), at(d));
        for _ in 0..200 {
            if fc < fd {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = at(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = at(d);
            }
            if b - a < 1e-15 {
                break;
            }
        }
        best.min(fc).min(fd)
    }
}

/// Samples `|F(x) − θ_η(F(x))| < η` over the certificate's domain, with
/// `F` read off the certificate itself.
pub fn audit_abundance(cert: &QdqCertificate, theta: &ThetaFamily, samples: usize, seed: u64) -> Result<()> {
    let grid = default_delta_grid(cert.delta_star);
    let etas: Vec<f64> = (0..=16).map(|k| 10f64.powi(-k)).collect();
    let mut worst: Option<(f64, Vec<f64>, f64)> = None;
    for (k, &delta) in grid.iter().enumerate() {
        let mut rng = stream_rng(seed, k as u64);
        for _ in 0..samples.max(1) {
            let x = cert.gamma.sample_point(&mut rng, &cert.x_bar, delta);
            let fx = cert.predicted(delta, &x);
            for &eta in &etas {
                let ratio = distance(&theta.apply(eta, &fx), &fx) / eta;
                if ratio >= 1.0 && worst.as_ref().is_none_or(|w| ratio > w.2) {
                    worst = Some((eta, x.clone(), ratio));
                }
            }
        }
    }
    match worst {
        None => Ok(()),
        Some((eta, x, ratio)) => Err(Error::Precondition(format!(
            "theta family {} moves F({x:?}) by {ratio:.3}·eta at eta = {eta:e}",
            theta.name()
        ))),
    }
}

/// Keeps `Λ` and `L_δ`, shifts `h_δ` by `θ_{δρ(δ)}(F(x)) − F(x)` and doubles
/// the modulus. Check the result against [`AbundantTarget`].
pub fn abundant_transfer(cert: &QdqCertificate, theta: &ThetaFamily) -> Result<QdqCertificate> {
    audit_abundance(cert, theta, 16, 0xab)?;
    let grid = default_delta_grid(cert.delta_star);
    if let Some(d) = grid.iter().find(|d| !(cert.rho.eval(**d) > 0.0)) {
        return Err(Error::Precondition(format!(
            "transfer needs a positive modulus, rho({d}) = {}",
            cert.rho.eval(*d)
        )));
    }
    let rho = cert.rho.clone();
    let base = cert.clone();
    let th = theta.clone();
    let fam = cert.family.clone();
    let lip = theta.displacement_lipschitz;
    let rho_b = rho.clone();
    let lambda_norm = cert.lambda.max_norm();
    let family = Family::new(
        move |delta, x| {
            let (l, h) = base.family.eval(delta, x);
            let fx = base.predicted(delta, x);
            let eta = delta * rho.eval(delta);
            let shifted = th.apply(eta, &fx);
            let h2 = h.iter().zip(shifted.iter().zip(&fx)).map(|(h, (s, f))| h + s - f).collect();
            (l, h2)
        },
        move |delta| {
            let (bl, bh) = fam.budget(delta)?;
            if lip == 0.0 {
                return Some((bl, bh));
            }
            let lip_f = lambda_norm + rho_b.eval(delta) + bl * delta + bh;
            Some((bl, bh + lip * lip_f))
        },
    );
    QdqCertificate::new(
        cert.x_bar.clone(),
        cert.y_bar.clone(),
        cert.gamma.clone(),
        cert.lambda.clone(),
        cert.delta_star,
        cert.rho.scaled(2.0),
        family,
    )
}
