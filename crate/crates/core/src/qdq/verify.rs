//! Sampled falsification of certificates.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::certificate::{vec_norm, QdqCertificate, Target};
use crate::error::{Error, Result};
use crate::geometry::sampling::{distance, stream_rng};
use crate::geometry::{check_samples, dist_to_operator_set, ModulusSample};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub delta_grid: Vec<f64>,
    pub points_per_delta: usize,
    pub seed: u64,
    /// Absolute slack on all three inequalities.
    pub tol: f64,
    pub continuity_pairs: usize,
    pub max_violations_per_delta: usize,
}

impl VerifyConfig {
    pub fn new(delta_grid: Vec<f64>, points_per_delta: usize, seed: u64) -> Self {
        VerifyConfig {
            delta_grid,
            points_per_delta,
            seed,
            tol: 1e-9,
            continuity_pairs: 32,
            max_violations_per_delta: 64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    LambdaDistance,
    HBound,
    Membership,
    Continuity,
    Modulus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub delta: f64,
    pub x: Vec<f64>,
    pub check: Check,
    pub value: f64,
    pub bound: f64,
}

impl Violation {
    pub fn excess(&self) -> f64 {
        self.value - self.bound
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaSummary {
    pub delta: f64,
    pub rho: f64,
    pub points: usize,
    pub violations: usize,
    pub max_lambda_distance: f64,
    pub max_h_norm: f64,
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub accepted: bool,
    pub points_checked: usize,
    pub continuity_pairs: usize,
    pub total_violations: usize,
    pub modulus_ok: bool,
    pub rho_samples: Vec<ModulusSample>,
    pub per_delta: Vec<DeltaSummary>,
    pub worst_violations: Vec<Violation>,
}

struct DeltaOutcome {
    summary: DeltaSummary,
    violations: Vec<Violation>,
    pairs: usize,
}

fn check_delta(
    target: &Target,
    cert: &QdqCertificate,
    cfg: &VerifyConfig,
    k: usize,
    delta: f64,
) -> Result<DeltaOutcome> {
    let rho = cert.rho.eval(delta);
    let mut rng = stream_rng(cfg.seed, k as u64);
    let mut points = cert.gamma.boundary_points(&cert.x_bar, delta);
    points.truncate(cfg.points_per_delta.max(1));
    while points.len() < cfg.points_per_delta {
        points.push(cert.gamma.sample_point(&mut rng, &cert.x_bar, delta));
    }
    let mut violations = Vec::new();
    let mut total = 0;
    let mut s = DeltaSummary {
        delta,
        rho,
        points: points.len(),
        violations: 0,
        max_lambda_distance: 0.0,
        max_h_norm: 0.0,
        max_residual: 0.0,
    };
    let push = |v: Violation, total: &mut usize, violations: &mut Vec<Violation>| {
        *total += 1;
        violations.push(v);
        if violations.len() > 4 * cfg.max_violations_per_delta {
            violations.sort_by(|a, b| b.excess().total_cmp(&a.excess()));
            violations.truncate(cfg.max_violations_per_delta);
        }
    };
    for x in &points {
        let (l, h) = cert.family.eval(delta, x);
        if l.shape() != cert.lambda.shape() {
            return Err(Error::dim(format!("{:?}", cert.lambda.shape()), format!("{:?}", l.shape())));
        }
        let d = dist_to_operator_set(&l, &cert.lambda)?;
        let hn = vec_norm(&h);
        let r = target.residual(x, &cert.predicted(delta, x));
        s.max_lambda_distance = s.max_lambda_distance.max(d);
        s.max_h_norm = s.max_h_norm.max(hn);
        s.max_residual = s.max_residual.max(r);
        for (check, value, bound) in [
            (Check::LambdaDistance, d, rho + cfg.tol),
            (Check::HBound, hn, delta * rho + cfg.tol),
            (Check::Membership, r, cfg.tol),
        ] {
            if !(value <= bound) {
                push(
                    Violation {
                        delta,
                        x: x.clone(),
                        check,
                        value,
                        bound,
                    },
                    &mut total,
                    &mut violations,
                );
            }
        }
    }

    let mut pairs = 0;
    if let Some((bl, bh)) = cert.family.budget(delta) {
        let step = delta * 1e-4;
        for x in points.iter().rev().take(cfg.continuity_pairs) {
            let Some(y) = cert.gamma.nearby_point(&mut rng, &cert.x_bar, x, delta, step) else {
                continue;
            };
            pairs += 1;
            let dxy = distance(x, &y);
            let (lx, hx) = cert.family.eval(delta, x);
            let (ly, hy) = cert.family.eval(delta, &y);
            let dl = lx.distance(&ly)?;
            let dh = distance(&hx, &hy);
            for (value, b) in [(dl, bl), (dh, bh)] {
                let bound = b * dxy * (1.0 + 1e-6) + 1e-12;
                if !(value <= bound) {
                    push(
                        Violation {
                            delta,
                            x: x.clone(),
                            check: Check::Continuity,
                            value,
                            bound,
                        },
                        &mut total,
                        &mut violations,
                    );
                }
            }
        }
    }
    violations.sort_by(|a, b| b.excess().total_cmp(&a.excess()));
    violations.truncate(cfg.max_violations_per_delta);
    s.violations = total;
    Ok(DeltaOutcome {
        summary: s,
        violations,
        pairs,
    })
}

/// A positive modulus has to shrink across a grid spanning at least a decade.
fn vanishes(samples: &[crate::geometry::ModulusSample], tol: f64) -> bool {
    let (Some(lo), Some(hi)) = (samples.first(), samples.last()) else {
        return true;
    };
    if hi.delta < 10.0 * lo.delta || lo.value <= tol {
        return true;
    }
    lo.value < hi.value
}

/// Checks the three certificate inequalities on seeded samples of every
/// `(x̄ + B_δ) ∩ Γ`, the modulus shape over the grid, and continuity of the
/// family against its declared budget.
pub fn verify_certificate(target: &Target, cert: &QdqCertificate, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let (n, m) = target.dims();
    if n != cert.input_dim() || m != cert.output_dim() {
        return Err(Error::dim(
            format!("{}x{}", cert.output_dim(), cert.input_dim()),
            format!("{m}x{n}"),
        ));
    }
    if cfg.delta_grid.is_empty() {
        return Err(Error::Argument("empty delta grid".into()));
    }
    if let Some(d) = cfg.delta_grid.iter().find(|d| !(**d > 0.0 && **d < cert.delta_star)) {
        return Err(Error::Argument(format!(
            "delta {d} outside (0, delta_star = {})",
            cert.delta_star
        )));
    }
    let outcomes = cfg
        .delta_grid
        .par_iter()
        .enumerate()
        .map(|(k, &d)| check_delta(target, cert, cfg, k, d))
        .collect::<Result<Vec<_>>>()?;

    let rho_samples = cert.rho.samples(&cfg.delta_grid);
    let modulus_ok = check_samples(&rho_samples, cfg.tol).is_ok() && vanishes(&rho_samples, cfg.tol);
    let mut worst: Vec<Violation> = outcomes.iter().flat_map(|o| o.violations.iter().cloned()).collect();
    let mut total: usize = outcomes.iter().map(|o| o.summary.violations).sum();
    if !modulus_ok {
        total += 1;
        worst.push(Violation {
            delta: 0.0,
            x: Vec::new(),
            check: Check::Modulus,
            value: 1.0,
            bound: 0.0,
        });
    }
    worst.sort_by(|a, b| b.excess().total_cmp(&a.excess()).then(a.delta.total_cmp(&b.delta)));
    worst.truncate(cfg.max_violations_per_delta * (cfg.delta_grid.len() + 1));
    Ok(VerificationReport {
        accepted: total == 0,
        points_checked: outcomes.iter().map(|o| o.summary.points).sum(),
        continuity_pairs: outcomes.iter().map(|o| o.pairs).sum(),
        total_violations: total,
        modulus_ok,
        rho_samples,
        per_delta: outcomes.into_iter().map(|o| o.summary).collect(),
        worst_violations: worst,
    })
}
