use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::hull::{canonical_points, hull_vertices};
use super::linear_map::LinearMap;
use super::min_norm::distance_to_hull;
use crate::error::{Error, Result};

/// Distances at or below this are reported as exact zero.
pub const ZERO_DISTANCE: f64 = 1e-12;

/// A compact set of linear maps: a finite generator list, optionally
/// closed under convex combination.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorSet {
    generators: Vec<LinearMap>,
    convex_closure: bool,
}

impl OperatorSet {
    pub fn new(generators: Vec<LinearMap>, convex_closure: bool) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::Argument("operator set needs at least one generator".into()))?;
        let shape = first.shape();
        if let Some(bad) = generators.iter().find(|g| g.shape() != shape) {
            return Err(Error::dim(format!("{shape:?}"), format!("{:?}", bad.shape())));
        }
        Ok(OperatorSet {
            generators,
            convex_closure,
        })
    }

    pub fn finite(generators: Vec<LinearMap>) -> Result<Self> {
        Self::new(generators, false)
    }

    pub fn hull(generators: Vec<LinearMap>) -> Result<Self> {
        Self::new(generators, true)
    }

    pub fn singleton(l: LinearMap) -> Self {
        OperatorSet {
            generators: vec![l],
            convex_closure: false,
        }
    }

    /// The interval `[lo, hi]` of `1 x 1` maps.
    pub fn interval(lo: f64, hi: f64) -> Self {
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        if lo == hi {
            return Self::singleton(LinearMap::scalar(lo));
        }
        OperatorSet {
            generators: vec![LinearMap::scalar(lo), LinearMap::scalar(hi)],
            convex_closure: true,
        }
    }

    /// Convex hull of `n x 1` maps built from the given vectors.
    pub fn hull_of_vectors(vectors: &[Vec<f64>]) -> Result<Self> {
        Self::hull(vectors.iter().map(|v| LinearMap::column(v)).collect())?.canonicalized()
    }

    pub fn generators(&self) -> &[LinearMap] {
        &self.generators
    }

    pub fn convex_closure(&self) -> bool {
        self.convex_closure
    }

    pub fn shape(&self) -> (usize, usize) {
        self.generators[0].shape()
    }

    pub fn max_norm(&self) -> f64 {
        // attained at a generator also for the hull
        self.generators.iter().map(LinearMap::norm).fold(0.0, f64::max)
    }

    fn flat(&self) -> Vec<Vec<f64>> {
        self.generators.iter().map(LinearMap::flatten).collect()
    }

    fn from_flat(&self, pts: Vec<Vec<f64>>, convex_closure: bool) -> Result<Self> {
        let (m, n) = self.shape();
        let gens = pts
            .into_iter()
            .map(|p| LinearMap::from_row_slice(m, n, &p))
            .collect::<Result<Vec<_>>>()?;
        Self::new(gens, convex_closure)
    }

    /// Reduces hulls to their vertices and finite sets to distinct elements,
    /// in lexicographic order of the flattened entries.
    pub fn canonicalized(&self) -> Result<Self> {
        let pts = if self.convex_closure {
            hull_vertices(&self.flat())?
        } else {
            canonical_points(&self.flat())
        };
        self.from_flat(pts, self.convex_closure)
    }

    /// Vertices when hulled, all generators otherwise.
    pub fn vertices(&self) -> Result<Vec<LinearMap>> {
        Ok(self.canonicalized()?.generators)
    }

    pub fn contains(&self, l: &LinearMap, tol: f64) -> Result<bool> {
        Ok(dist_to_operator_set(l, self)? <= tol)
    }

    pub fn scale(&self, s: f64) -> Self {
        OperatorSet {
            generators: self.generators.iter().map(|g| g.scale(s)).collect(),
            convex_closure: self.convex_closure,
        }
    }

    /// Minkowski sum from pairwise generator sums.
    ///
    /// Exact when both sides are finite or both hulled. A mixed pair yields
    /// the hull, an outer approximation.
    pub fn minkowski_sum(&self, other: &OperatorSet) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::dim(format!("{:?}", self.shape()), format!("{:?}", other.shape())));
        }
        let mut gens = Vec::with_capacity(self.generators.len() * other.generators.len());
        for a in &self.generators {
            for b in &other.generators {
                gens.push(a.add(b)?);
            }
        }
        Self::new(gens, self.convex_closure || other.convex_closure)?.canonicalized()
    }

    /// All products `outer ∘ inner` of generators.
    pub fn compose(outer: &OperatorSet, inner: &OperatorSet) -> Result<Self> {
        let mut gens = Vec::with_capacity(outer.generators.len() * inner.generators.len());
        for a in &outer.generators {
            for b in &inner.generators {
                gens.push(a.compose(b)?);
            }
        }
        Self::new(gens, outer.convex_closure || inner.convex_closure)?.canonicalized()
    }

    /// Block-row product `{[a; b] : a in self, b in other}`.
    pub fn stacked(&self, other: &OperatorSet) -> Result<Self> {
        let mut gens = Vec::with_capacity(self.generators.len() * other.generators.len());
        for a in &self.generators {
            for b in &other.generators {
                gens.push(a.stack(b)?);
            }
        }
        Self::new(gens, self.convex_closure || other.convex_closure)?.canonicalized()
    }

    pub fn with_generator(&self, l: LinearMap) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens.push(l);
        Self::new(gens, self.convex_closure)
    }
}

/// Frobenius distance from `l` to the set.
pub fn dist_to_operator_set(l: &LinearMap, set: &OperatorSet) -> Result<f64> {
    if l.shape() != set.shape() {
        return Err(Error::dim(format!("{:?}", set.shape()), format!("{:?}", l.shape())));
    }
    let d = if set.convex_closure {
        distance_to_hull(&set.flat(), &l.flatten())
    } else {
        set.generators
            .iter()
            .map(|g| g.distance(l).expect("shape checked"))
            .fold(f64::INFINITY, f64::min)
    };
    Ok(if d <= ZERO_DISTANCE { 0.0 } else { d })
}

/// Points of `set` used to approximate `sup_{a in set} d(a, other)`.
///
/// For a convex target the supremum over a hull sits at a vertex; otherwise
/// edges and interior combinations are sampled as well.
fn probe_points(set: &OperatorSet, target_convex: bool) -> Vec<Vec<f64>> {
    let pts = set.flat();
    if !set.convex_closure || target_convex || pts.len() == 1 {
        return pts;
    }
    let mut out = pts.clone();
    const EDGE_SAMPLES: usize = 64;
    for i in 0..pts.len() {
        for j in (i + 1)..pts.len() {
            for s in 1..EDGE_SAMPLES {
                let t = s as f64 / EDGE_SAMPLES as f64;
                out.push(pts[i].iter().zip(&pts[j]).map(|(a, b)| (1.0 - t) * a + t * b).collect());
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..256 {
        let mut w: Vec<f64> = (0..pts.len()).map(|_| -rng.random::<f64>().ln()).collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|v| *v /= total);
        let mut p = vec![0.0; pts[0].len()];
        for (wi, q) in w.iter().zip(&pts) {
            for (pk, qk) in p.iter_mut().zip(q) {
                *pk += wi * qk;
            }
        }
        out.push(p);
    }
    out
}

fn directed(a: &OperatorSet, b: &OperatorSet) -> Result<f64> {
    let (m, n) = a.shape();
    let mut worst = 0.0_f64;
    for p in probe_points(a, b.convex_closure || b.generators.len() == 1) {
        let l = LinearMap::from_row_slice(m, n, &p)?;
        worst = worst.max(dist_to_operator_set(&l, b)?);
    }
    Ok(worst)
}

/// Hausdorff distance between two operator sets (Frobenius metric).
pub fn hausdorff_distance(a: &OperatorSet, b: &OperatorSet) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::dim(format!("{:?}", a.shape()), format!("{:?}", b.shape())));
    }
    Ok(directed(a, b)?.max(directed(b, a)?))
}
