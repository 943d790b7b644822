use rand::Rng;
use serde::{Deserialize, Serialize};

use super::sampling::{ball_point, norm, unit_vector};
use crate::error::{Error, Result};

/// The direction set of a certificate.
///
/// Membership is tested on the displacement `x - x̄` from the base point, so
/// cone kinds are anchored there.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GammaSet {
    FullSpace { dimension: usize },
    HalfLine { direction: Vec<f64> },
    /// `span⁺(generators)`; an empty list is the trivial cone `{0}`.
    FiniteCone {
        dimension: usize,
        generators: Vec<Vec<f64>>,
    },
    Box { lower: Vec<f64>, upper: Vec<f64> },
}

impl GammaSet {
    pub fn full(dimension: usize) -> Self {
        GammaSet::FullSpace { dimension }
    }

    pub fn half_line(direction: &[f64]) -> Result<Self> {
        let n = norm(direction);
        if n <= 0.0 || !n.is_finite() {
            return Err(Error::Argument("half-line direction must be nonzero".into()));
        }
        Ok(GammaSet::HalfLine {
            direction: direction.iter().map(|d| d / n).collect(),
        })
    }

    pub fn finite_cone(dimension: usize, generators: Vec<Vec<f64>>) -> Result<Self> {
        if generators.iter().any(|g| g.len() != dimension) {
            return Err(Error::Argument("cone generator of wrong dimension".into()));
        }
        if generators.iter().any(|g| norm(g) == 0.0) {
            return Err(Error::Argument("cone generators must be nonzero".into()));
        }
        Ok(GammaSet::FiniteCone {
            dimension,
            generators,
        })
    }

    pub fn dimension(&self) -> usize {
        match self {
            GammaSet::FullSpace { dimension } | GammaSet::FiniteCone { dimension, .. } => *dimension,
            GammaSet::HalfLine { direction } => direction.len(),
            GammaSet::Box { lower, .. } => lower.len(),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            GammaSet::FullSpace { .. } => "full_space",
            GammaSet::HalfLine { .. } => "half_line",
            GammaSet::FiniteCone { .. } => "finite_cone",
            GammaSet::Box { .. } => "box",
        }
    }

    /// Conic generators for the cone kinds; `None` for [`GammaSet::Box`].
    pub fn cone_generators(&self) -> Option<Vec<Vec<f64>>> {
        match self {
            GammaSet::FullSpace { dimension } => {
                let mut out = Vec::with_capacity(2 * dimension);
                for i in 0..*dimension {
                    for s in [1.0, -1.0] {
                        let mut e = vec![0.0; *dimension];
                        e[i] = s;
                        out.push(e);
                    }
                }
                Some(out)
            }
            GammaSet::HalfLine { direction } => Some(vec![direction.clone()]),
            GammaSet::FiniteCone { generators, .. } => Some(generators.clone()),
            GammaSet::Box { .. } => None,
        }
    }

    /// Whether the displacement `d = x - x̄` lies in the set (within `tol`).
    pub fn contains_displacement(&self, d: &[f64], tol: f64) -> bool {
        match self {
            GammaSet::FullSpace { .. } => true,
            GammaSet::HalfLine { direction } => {
                let s: f64 = d.iter().zip(direction).map(|(a, b)| a * b).sum();
                let off: Vec<f64> = d.iter().zip(direction).map(|(a, b)| a - s * b).collect();
                s >= -tol && norm(&off) <= tol
            }
            GammaSet::FiniteCone { generators, .. } => {
                if generators.is_empty() {
                    return norm(d) <= tol;
                }
                crate::cones::ConvexCone::from_generators(d.len(), generators.clone())
                    .map(|c| c.contains(d, tol))
                    .unwrap_or(false)
            }
            GammaSet::Box { lower, upper } => d
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(v, (lo, hi))| *v >= lo - tol && *v <= hi + tol),
        }
    }

    /// A random point of `x̄ + (B_δ ∩ Γ)`.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R, x_bar: &[f64], delta: f64) -> Vec<f64> {
        let n = x_bar.len();
        let disp = match self {
            GammaSet::FullSpace { .. } => ball_point(rng, &vec![0.0; n], delta),
            GammaSet::HalfLine { direction } => {
                let s = delta * rng.random::<f64>();
                direction.iter().map(|d| s * d).collect()
            }
            GammaSet::FiniteCone { generators, .. } => {
                if generators.is_empty() {
                    vec![0.0; n]
                } else {
                    // random nonnegative combination, some mass on faces
                    let mut v = vec![0.0; n];
                    for g in generators {
                        let w: f64 = if rng.random::<f64>() < 0.25 { 0.0 } else { rng.random() };
                        let gn = norm(g);
                        for (vk, gk) in v.iter_mut().zip(g) {
                            *vk += w * gk / gn;
                        }
                    }
                    let vn = norm(&v);
                    if vn <= 1e-300 {
                        let g = &generators[rng.random_range(0..generators.len())];
                        v = g.iter().map(|x| x / norm(g)).collect();
                    } else {
                        v.iter_mut().for_each(|x| *x /= vn);
                    }
                    let r = delta * rng.random::<f64>().powf(1.0 / n as f64);
                    v.into_iter().map(|x| r * x).collect()
                }
            }
            GammaSet::Box { lower, upper } => {
                let mut attempt = 0;
                loop {
                    let p = ball_point(rng, &vec![0.0; n], delta);
                    if self.contains_displacement(&p, 0.0) || attempt > 1000 {
                        if attempt > 1000 {
                            // clamp into the box as a fallback for thin boxes
                            break p
                                .iter()
                                .zip(lower.iter().zip(upper))
                                .map(|(v, (lo, hi))| v.clamp(*lo, *hi))
                                .collect();
                        }
                        break p;
                    }
                    attempt += 1;
                }
            }
        };
        x_bar.iter().zip(disp).map(|(a, b)| a + b).collect()
    }

    /// Deterministic extreme points of `x̄ + (B_δ ∩ Γ)`: the base point and
    /// the boundary points in the coordinate or generator directions.
    pub fn boundary_points(&self, x_bar: &[f64], delta: f64) -> Vec<Vec<f64>> {
        let mut out = vec![x_bar.to_vec()];
        let dirs: Vec<Vec<f64>> = match self.cone_generators() {
            Some(g) => g,
            None => GammaSet::full(x_bar.len())
                .cone_generators()
                .unwrap()
                .into_iter()
                .filter(|d| self.contains_displacement(&d.iter().map(|v| v * delta).collect::<Vec<_>>(), 0.0))
                .collect(),
        };
        for d in dirs {
            let dn = norm(&d);
            if dn == 0.0 {
                continue;
            }
            out.push(x_bar.iter().zip(&d).map(|(a, b)| a + delta * b / dn).collect());
        }
        out
    }

    /// A point near `x` that stays in `x̄ + (B_δ ∩ Γ)`, for continuity audits.
    pub fn nearby_point<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        x_bar: &[f64],
        x: &[f64],
        delta: f64,
        step: f64,
    ) -> Option<Vec<f64>> {
        let n = x.len();
        for _ in 0..32 {
            let cand: Vec<f64> = match self {
                GammaSet::HalfLine { direction } => {
                    let s = if rng.random::<bool>() { step } else { -step };
                    x.iter().zip(direction).map(|(a, d)| a + s * d).collect()
                }
                GammaSet::FiniteCone { generators, .. } if !generators.is_empty() => {
                    let g = &generators[rng.random_range(0..generators.len())];
                    let s = if rng.random::<bool>() { step } else { -step };
                    let gn = norm(g);
                    x.iter().zip(g).map(|(a, d)| a + s * d / gn).collect()
                }
                _ => {
                    let u = unit_vector(rng, n);
                    x.iter().zip(u).map(|(a, d)| a + step * d).collect()
                }
            };
            let disp: Vec<f64> = cand.iter().zip(x_bar).map(|(a, b)| a - b).collect();
            if norm(&disp) <= delta && self.contains_displacement(&disp, 1e-12) {
                return Some(cand);
            }
        }
        None
    }

    /// `Γ_a ∩ Γ_b` for the kinds with a closed-form intersection.
    pub fn intersect(&self, other: &GammaSet) -> Result<GammaSet> {
        if self.dimension() != other.dimension() {
            return Err(Error::dim(self.dimension(), other.dimension()));
        }
        match (self, other) {
            (GammaSet::FullSpace { .. }, g) | (g, GammaSet::FullSpace { .. }) => Ok(g.clone()),
            (GammaSet::Box { .. }, _) | (_, GammaSet::Box { .. }) => Err(Error::UnsupportedGamma {
                operation: "gamma intersection",
                kind: "box".into(),
            }),
            (a, b) => {
                let n = a.dimension();
                let ka = crate::cones::ConvexCone::from_generators(n, a.cone_generators().unwrap())?;
                let kb = crate::cones::ConvexCone::from_generators(n, b.cone_generators().unwrap())?;
                let inter = ka.intersection(&kb)?;
                let gens = inter.generators().to_vec();
                if gens.len() == 1 {
                    GammaSet::half_line(&gens[0])
                } else {
                    GammaSet::finite_cone(n, gens)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sampling::stream_rng;

    #[test]
    fn half_line_membership_and_sampling() {
        let g = GammaSet::half_line(&[2.0]).unwrap();
        assert!(g.contains_displacement(&[0.3], 0.0));
        assert!(!g.contains_displacement(&[-0.3], 1e-12));
        let mut rng = stream_rng(1, 0);
        for _ in 0..100 {
            let p = g.sample_point(&mut rng, &[0.0], 0.1);
            assert!(p[0] >= 0.0 && p[0] <= 0.1);
        }
    }

    #[test]
    fn cone_samples_stay_in_cone_and_ball() {
        let g = GammaSet::finite_cone(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let mut rng = stream_rng(2, 0);
        for _ in 0..200 {
            let p = g.sample_point(&mut rng, &[1.0, 1.0], 0.5);
            assert!(p[0] >= 1.0 - 1e-15 && p[1] >= 1.0 - 1e-15);
            assert!(norm(&[p[0] - 1.0, p[1] - 1.0]) <= 0.5 + 1e-12);
        }
    }

    #[test]
    fn intersections() {
        let full = GammaSet::full(2);
        let q1 = GammaSet::finite_cone(2, vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(full.intersect(&q1).unwrap(), q1);
        let upper = GammaSet::finite_cone(2, vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let right = GammaSet::finite_cone(2, vec![vec![0.0, 1.0], vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let both = upper.intersect(&right).unwrap();
        assert!(both.contains_displacement(&[0.5, 0.5], 1e-9));
        assert!(!both.contains_displacement(&[-0.5, 0.5], 1e-9));
        let bx = GammaSet::Box { lower: vec![0.0, 0.0], upper: vec![1.0, 1.0] };
        assert!(matches!(bx.intersect(&q1), Err(Error::UnsupportedGamma { .. })));
    }
}
