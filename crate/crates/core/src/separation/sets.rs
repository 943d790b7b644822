//! Concrete closed sets with nearest-point projections, used to corroborate
//! separation verdicts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::sampling::{ball_point, dot, norm};

/// A set known through a projection and a membership test.
pub trait SetFixture: Send + Sync {
    fn dimension(&self) -> usize;
    /// A nearest point of the (closure of the) set.
    fn project(&self, x: &[f64]) -> Vec<f64>;
    fn contains(&self, x: &[f64], tol: f64) -> bool;
    /// A point of the set near `center`, by default the projection of a ball point.
    fn sample(&self, rng: &mut dyn rand::RngCore, center: &[f64], radius: f64) -> Vec<f64> {
        let p = ball_point(rng, center, radius);
        self.project(&p)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetShape {
    /// Union of the rays `{t·d : t >= 0}`; two opposite rays make a line.
    Rays { directions: Vec<Vec<f64>> },
    /// `{x : n·x >= 0}`, or `{n·x > 0} ∪ {0}` when `open`.
    HalfSpace { normal: Vec<f64>, open: bool },
    /// The planar cone between two rays (angle below π).
    Sector { first: Vec<f64>, second: Vec<f64> },
    /// The linear span of `basis`.
    Subspace { dimension: usize, basis: Vec<Vec<f64>> },
    /// `{(x, c·x²)}` in the plane.
    Parabola { c: f64 },
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = norm(v);
    v.iter().map(|x| x / n).collect()
}

fn ray_projection(x: &[f64], d: &[f64]) -> Vec<f64> {
    let u = unit(d);
    let t = dot(x, &u).max(0.0);
    u.iter().map(|v| t * v).collect()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    crate::geometry::sampling::distance(a, b)
}

fn cross2(a: &[f64], b: &[f64]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Real roots of `s³ + p·s + q = 0`.
fn depressed_cubic_roots(p: f64, q: f64) -> Vec<f64> {
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    if disc >= 0.0 {
        let r = disc.sqrt();
        vec![(-q / 2.0 + r).cbrt() + (-q / 2.0 - r).cbrt()]
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let theta = ((3.0 * q / (p * m)).clamp(-1.0, 1.0)).acos() / 3.0;
        (0..3)
            .map(|k| m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
            .collect()
    }
}

impl SetShape {
    pub fn line(direction: &[f64]) -> Self {
        SetShape::Rays {
            directions: vec![direction.to_vec(), direction.iter().map(|v| -v).collect()],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Argument(format!("set fixture: {m}")));
        match self {
            SetShape::Rays { directions } => {
                if directions.is_empty() || directions.iter().any(|d| norm(d) == 0.0 || d.len() != directions[0].len()) {
                    return bad("rays need nonzero directions of one dimension");
                }
            }
            SetShape::HalfSpace { normal, .. } => {
                if norm(normal) == 0.0 {
                    return bad("half-space normal is zero");
                }
            }
            SetShape::Sector { first, second } => {
                if first.len() != 2 || second.len() != 2 || cross2(first, second) <= 0.0 {
                    return bad("a sector needs two planar rays in counterclockwise order, less than π apart");
                }
            }
            SetShape::Subspace { dimension, basis } => {
                if basis.iter().any(|b| b.len() != *dimension) {
                    return bad("subspace basis has the wrong dimension");
                }
            }
            SetShape::Parabola { .. } => {}
        }
        Ok(())
    }

    fn orthonormal_basis(basis: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for b in basis {
            let mut v = b.clone();
            for e in &out {
                let c = dot(&v, e);
                v.iter_mut().zip(e).for_each(|(x, y)| *x -= c * y);
            }
            if norm(&v) > 1e-12 {
                out.push(unit(&v));
            }
        }
        out
    }
}

impl SetFixture for SetShape {
    fn dimension(&self) -> usize {
        match self {
            SetShape::Rays { directions } => directions[0].len(),
            SetShape::HalfSpace { normal, .. } => normal.len(),
            SetShape::Sector { .. } | SetShape::Parabola { .. } => 2,
            SetShape::Subspace { dimension, .. } => *dimension,
        }
    }

    fn project(&self, x: &[f64]) -> Vec<f64> {
        match self {
            SetShape::Rays { directions } => directions
                .iter()
                .map(|d| ray_projection(x, d))
                .min_by(|a, b| dist(a, x).total_cmp(&dist(b, x)))
                .expect("validated nonempty"),
            SetShape::HalfSpace { normal, .. } => {
                let u = unit(normal);
                let s = dot(x, &u).min(0.0);
                x.iter().zip(&u).map(|(a, b)| a - s * b).collect()
            }
            SetShape::Sector { first, second } => {
                if self.contains(x, 0.0) {
                    return x.to_vec();
                }
                let a = ray_projection(x, first);
                let b = ray_projection(x, second);
                if dist(&a, x) <= dist(&b, x) {
                    a
                } else {
                    b
                }
            }
            SetShape::Subspace { dimension, basis } => {
                let e = Self::orthonormal_basis(basis);
                let mut p = vec![0.0; *dimension];
                for v in &e {
                    let c = dot(x, v);
                    p.iter_mut().zip(v).for_each(|(a, b)| *a += c * b);
                }
                p
            }
            SetShape::Parabola { c } => {
                let (a, b) = (x[0], x[1]);
                if *c == 0.0 {
                    return vec![a, 0.0];
                }
                // stationary points of (s − a)² + (c s² − b)²
                let p = (1.0 - 2.0 * c * b) / (2.0 * c * c);
                let q = -a / (2.0 * c * c);
                depressed_cubic_roots(p, q)
                    .into_iter()
                    .map(|s| vec![s, c * s * s])
                    .min_by(|u, v| dist(u, x).total_cmp(&dist(v, x)))
                    .expect("a cubic has a real root")
            }
        }
    }

    fn contains(&self, x: &[f64], tol: f64) -> bool {
        match self {
            SetShape::HalfSpace { normal, open } => {
                let s = dot(x, &unit(normal));
                if *open {
                    s > tol || norm(x) <= tol
                } else {
                    s >= -tol
                }
            }
            SetShape::Sector { first, second } => {
                let (c1, c2) = (cross2(first, x), cross2(x, second));
                let scale = tol * norm(x).max(1.0);
                c1 >= -scale && c2 >= -scale
            }
            _ => dist(&self.project(x), x) <= tol,
        }
    }
}

/// Result of searching `E₁ ∩ E₂ ∩ (z + B_r)` for a point other than `z`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalSeparationReport {
    pub common_point: Option<Vec<f64>>,
    pub separated_at_resolution: bool,
    pub radius: f64,
    pub min_separation: f64,
    pub starts: usize,
}

pub const MATCH_TOL: f64 = 1e-6;

/// Alternating projections started from seeded samples of both sets. A
/// point within [`MATCH_TOL`] of both sets, inside the ball and at least
/// `radius·1e-2` from `z`, counts as common.
pub fn local_separation_probe(
    e1: &dyn SetFixture,
    e2: &dyn SetFixture,
    z: &[f64],
    radius: f64,
    samples: usize,
    seed: u64,
) -> Result<LocalSeparationReport> {
    if e1.dimension() != e2.dimension() || z.len() != e1.dimension() {
        return Err(Error::dim(e1.dimension(), e2.dimension()));
    }
    if !(radius > 0.0) {
        return Err(Error::Argument("probe radius must be positive".into()));
    }
    let min_sep = radius * 1e-2;
    let mut starts = 0;
    for i in 0..samples {
        let mut rng = crate::geometry::sampling::stream_rng(seed, i as u64);
        let (a, b): (&dyn SetFixture, &dyn SetFixture) = if i % 2 == 0 { (e1, e2) } else { (e2, e1) };
        let mut x = a.sample(&mut rng, z, radius);
        starts += 1;
        for _ in 0..200 {
            let y = b.project(&x);
            let next = a.project(&y);
            let moved = dist(&next, &x);
            x = next;
            if moved < 1e-14 {
                break;
            }
        }
        let d = dist(&x, z);
        if d >= min_sep && d <= radius && e1.contains(&x, MATCH_TOL) && e2.contains(&x, MATCH_TOL) {
            return Ok(LocalSeparationReport {
                common_point: Some(x),
                separated_at_resolution: false,
                radius,
                min_separation: min_sep,
                starts,
            });
        }
    }
    Ok(LocalSeparationReport {
        common_point: None,
        separated_at_resolution: true,
        radius,
        min_separation: min_sep,
        starts,
    })
}
