//! Approximating multi-cones, the open-mapping probe and set-separation
//! verdicts.

mod fixtures;
mod sets;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cones::{classify_pair, image_cone, ConvexCone, PairClass};
use crate::error::{Error, Result};
use crate::geometry::sampling::{distance, norm, stream_rng};
use crate::geometry::{GammaSet, LinearMap, OperatorSet};
use crate::mapping::Mapping;

pub use fixtures::{curated_fixtures, run_fixture, FixtureOutcome, SeparationFixture};
pub use sets::{local_separation_probe, LocalSeparationReport, SetFixture, SetShape, MATCH_TOL};

/// `{L·Γ : L ∈ Λ}` with the `z`-ignoring flag of its generating triple.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultiCone {
    pub cones: Vec<ConvexCone>,
    pub lambda: OperatorSet,
    pub gamma: GammaSet,
    pub z_ignoring: bool,
}

impl MultiCone {
    pub fn dimension(&self) -> usize {
        self.lambda.shape().0
    }

    /// A single cone, generated by the identity on itself.
    pub fn from_cone(cone: ConvexCone, z_ignoring: bool) -> Result<Self> {
        let n = cone.dimension();
        let gamma = if cone.is_full_space() {
            GammaSet::full(n)
        } else {
            GammaSet::finite_cone(n, cone.generators().to_vec())?
        };
        Ok(MultiCone {
            cones: vec![cone],
            lambda: OperatorSet::singleton(LinearMap::identity(n)),
            gamma,
            z_ignoring,
        })
    }
}

impl From<ConvexCone> for MultiCone {
    fn from(cone: ConvexCone) -> Self {
        MultiCone::from_cone(cone, false).expect("cone generators are valid directions")
    }
}

/// Images of the generators of `Λ` (the vertices, for hulls) under `Γ`.
pub fn build_multicone(lambda: &OperatorSet, gamma: &GammaSet, z_ignoring: bool) -> Result<MultiCone> {
    if gamma.cone_generators().is_none() {
        return Err(Error::UnsupportedGamma {
            operation: "multi-cone",
            kind: gamma.kind_name().into(),
        });
    }
    let gens = if lambda.convex_closure() {
        lambda.vertices()?
    } else {
        lambda.generators().to_vec()
    };
    let cones = gens.iter().map(|l| image_cone(l, gamma)).collect::<Result<Vec<_>>>()?;
    Ok(MultiCone {
        cones,
        lambda: lambda.clone(),
        gamma: gamma.clone(),
        z_ignoring,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NotLocallySeparated,
    NoConclusion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictRule {
    /// Every pair strongly transversal.
    StrongTransversality,
    /// Every pair transversal, one side `z`-ignoring.
    ZIgnoringTransversality,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub verdict: Verdict,
    pub rule: Option<VerdictRule>,
    /// Class of each `(K₁[i], K₂[j])` pair, row-major.
    pub pair_classes: Vec<PairClass>,
    /// Hypotheses are required of all member pairs.
    pub lift: String,
}

/// Applies the two sufficient conditions for non-separation to every pair of
/// member cones. There is no converse: failing both gives `NoConclusion`.
pub fn separation_verdict(k1: &MultiCone, k2: &MultiCone) -> Result<VerdictReport> {
    if k1.dimension() != k2.dimension() {
        return Err(Error::dim(k1.dimension(), k2.dimension()));
    }
    let mut classes = Vec::with_capacity(k1.cones.len() * k2.cones.len());
    for a in &k1.cones {
        for b in &k2.cones {
            classes.push(classify_pair(a, b)?.class);
        }
    }
    let all_strong = !classes.is_empty() && classes.iter().all(|c| *c == PairClass::StronglyTransversal);
    let all_transversal = !classes.is_empty() && classes.iter().all(|c| c.is_transversal());
    let rule = if all_strong {
        Some(VerdictRule::StrongTransversality)
    } else if all_transversal && (k1.z_ignoring || k2.z_ignoring) {
        Some(VerdictRule::ZIgnoringTransversality)
    } else {
        None
    };
    Ok(VerdictReport {
        verdict: if rule.is_some() {
            Verdict::NotLocallySeparated
        } else {
            Verdict::NoConclusion
        },
        rule,
        pair_classes: classes,
        lift: "all_pairs".into(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZIgnoringAudit {
    pub holds: bool,
    pub min_distance: f64,
    pub closest_input: Vec<f64>,
    pub samples: usize,
}

/// Inner radius of the audited annulus, relative to `δ`.
const Z_AUDIT_HOLE: f64 = 1e-3;
/// Distance from `z` below which an audited value counts as hitting it.
const Z_AUDIT_TOL: f64 = 1e-9;

/// Looks for `x ∈ B_δ ∩ Γ` with `|x| >= δ·1e-3` and `G(x) = z`: seeded
/// samples, then compass search from the closest one.
pub fn audit_z_ignoring(
    g: &Mapping,
    gamma: &GammaSet,
    z: &[f64],
    delta: f64,
    samples: usize,
    seed: u64,
) -> Result<ZIgnoringAudit> {
    if g.output_dim() != z.len() || g.input_dim() != gamma.dimension() {
        return Err(Error::dim(z.len(), g.output_dim()));
    }
    let origin = vec![0.0; g.input_dim()];
    let hole = delta * Z_AUDIT_HOLE;
    let admissible = |p: &[f64]| {
        let r = norm(p);
        r >= hole && r <= delta && gamma.contains_displacement(p, 1e-12)
    };
    let mut rng = stream_rng(seed, 0);
    let mut pts = Vec::new();
    for k in 0..=10 {
        let s = 0.5f64.powi(k);
        pts.extend(gamma.boundary_points(&origin, delta * s).into_iter().filter(|p| admissible(p)));
    }
    let mut tries = 0;
    while pts.len() < samples && tries < 100 * samples {
        tries += 1;
        let p = gamma.sample_point(&mut rng, &origin, delta);
        if admissible(&p) {
            pts.push(p);
        }
    }
    let value = |p: &[f64]| g.eval(p).map(|y| distance(&y, z)).unwrap_or(f64::INFINITY);
    let mut scored: Vec<(f64, Vec<f64>)> = pts.iter().map(|p| (value(p), p.clone())).collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut best = scored.first().cloned().unwrap_or((f64::INFINITY, origin.clone()));
    for (v0, start) in scored.iter().take(4) {
        let (mut x, mut v) = (start.clone(), *v0);
        let mut step = delta / 8.0;
        while step > delta * 1e-12 && v > Z_AUDIT_TOL {
            let mut improved = false;
            for i in 0..x.len() {
                for s in [step, -step] {
                    let mut c = x.clone();
                    c[i] += s;
                    if admissible(&c) {
                        let vc = value(&c);
                        if vc < v {
                            (x, v, improved) = (c, vc, true);
                        }
                    }
                }
            }
            if !improved {
                step /= 2.0;
            }
        }
        if v < best.0 {
            best = (v, x);
        }
    }
    Ok(ZIgnoringAudit {
        holds: best.0 > Z_AUDIT_TOL,
        min_distance: best.0,
        closest_input: best.1,
        samples: pts.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    pub a: f64,
    pub beta: f64,
    /// Targets per axis of the cube around `ȳ`, clipped to the ball.
    pub target_grid: usize,
    pub domain_samples: usize,
    pub seed: u64,
    /// Defaults to `a / (2·target_grid)`.
    pub cover_tolerance: Option<f64>,
}

impl ProbeConfig {
    pub fn new(a: f64, beta: f64, target_grid: usize, domain_samples: usize, seed: u64) -> Self {
        ProbeConfig {
            a,
            beta,
            target_grid,
            domain_samples,
            seed,
            cover_tolerance: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub a: f64,
    pub beta: f64,
    pub covered_fraction: f64,
    pub misses: Vec<Vec<f64>>,
    pub samples_used: usize,
    pub targets: usize,
    pub center_covered: bool,
    pub cover_tolerance: f64,
    pub passed: bool,
}

fn target_points(y_bar: &[f64], a: f64, grid: usize) -> Vec<Vec<f64>> {
    let m = y_bar.len();
    let g = grid.max(2);
    let axis: Vec<f64> = (0..g).map(|i| -a + 2.0 * a * i as f64 / (g - 1) as f64).collect();
    let mut out = vec![y_bar.to_vec()];
    let total = g.pow(m as u32);
    for idx in 0..total {
        let mut r = idx;
        let mut off = Vec::with_capacity(m);
        for _ in 0..m {
            off.push(axis[r % g]);
            r /= g;
        }
        if norm(&off) <= a * (1.0 + 1e-12) && norm(&off) > 0.0 {
            out.push(y_bar.iter().zip(&off).map(|(y, o)| y + o).collect());
        }
    }
    out
}

/// Compass search on `|F(x) − target|` over `x̄ + (B_r ∩ Γ)`.
fn refine(f: &Mapping, gamma: &GammaSet, x_bar: &[f64], r: f64, start: &[f64], target: &[f64], tol: f64) -> f64 {
    let n = start.len();
    let inside = |x: &[f64]| {
        let d: Vec<f64> = x.iter().zip(x_bar).map(|(a, b)| a - b).collect();
        norm(&d) <= r && gamma.contains_displacement(&d, 1e-12)
    };
    let eval = |x: &[f64]| f.eval(x).map(|y| distance(&y, target)).unwrap_or(f64::INFINITY);
    let mut x = start.to_vec();
    let mut best = eval(&x);
    let mut step = r / 4.0;
    let mut evals = 0;
    while best > tol && step > r * 1e-9 && evals < 4000 {
        let mut improved = false;
        for i in 0..n {
            for s in [step, -step] {
                let mut c = x.clone();
                c[i] += s;
                if !inside(&c) {
                    continue;
                }
                evals += 1;
                let v = eval(&c);
                if v < best {
                    best = v;
                    x = c;
                    improved = true;
                }
            }
        }
        if !improved {
            step /= 2.0;
        }
    }
    best
}

/// Checks `ȳ + B_a ⊆ F(x̄ + B_{aβ} ∩ Γ)` on a target grid that always
/// includes `ȳ`. Every generator of `Λ` has to map `Γ` onto the whole space.
#[allow(clippy::too_many_arguments)]
pub fn open_mapping_probe(
    f: &Mapping,
    x_bar: &[f64],
    y_bar: &[f64],
    gamma: &GammaSet,
    lambda: &OperatorSet,
    cfg: &ProbeConfig,
) -> Result<ProbeReport> {
    if lambda.shape() != (y_bar.len(), x_bar.len()) || f.input_dim() != x_bar.len() || f.output_dim() != y_bar.len() {
        return Err(Error::dim(
            format!("{}x{}", y_bar.len(), x_bar.len()),
            format!("{:?}", lambda.shape()),
        ));
    }
    if !(cfg.a > 0.0 && cfg.beta > 0.0) {
        return Err(Error::Argument("probe needs positive a and beta".into()));
    }
    for (i, l) in lambda.generators().iter().enumerate() {
        if !image_cone(l, gamma)?.is_full_space() {
            return Err(Error::Precondition(format!(
                "generator {i} of lambda {:?} does not map gamma onto R^{}",
                l.to_rows(),
                y_bar.len()
            )));
        }
    }
    let r = cfg.a * cfg.beta;
    let mut xs = gamma.boundary_points(x_bar, r);
    for i in 0..cfg.domain_samples {
        let mut rng = stream_rng(cfg.seed, i as u64);
        xs.push(gamma.sample_point(&mut rng, x_bar, r));
    }
    let ys: Vec<Vec<f64>> = xs.iter().map(|x| f.eval(x)).collect::<Result<_>>()?;
    let tol = cfg.cover_tolerance.unwrap_or(cfg.a / (2.0 * cfg.target_grid.max(1) as f64));
    let targets = target_points(y_bar, cfg.a, cfg.target_grid);
    let covered: Vec<bool> = targets
        .par_iter()
        .map(|t| {
            let (k, d) = ys
                .iter()
                .enumerate()
                .map(|(k, y)| (k, distance(y, t)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("domain samples include the base point");
            d <= tol || refine(f, gamma, x_bar, r, &xs[k], t, tol) <= tol
        })
        .collect();
    let hits = covered.iter().filter(|c| **c).count();
    let misses: Vec<Vec<f64>> = targets
        .iter()
        .zip(&covered)
        .filter(|(_, c)| !**c)
        .map(|(t, _)| t.clone())
        .collect();
    let fraction = hits as f64 / targets.len() as f64;
    Ok(ProbeReport {
        a: cfg.a,
        beta: cfg.beta,
        covered_fraction: fraction,
        misses,
        samples_used: xs.len(),
        targets: targets.len(),
        center_covered: covered[0],
        cover_tolerance: tol,
        passed: hits == targets.len(),
    })
}
