//! Seeded random cone pairs for the duality and trichotomy checks.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::cones::ConvexCone;
use crate::error::Result;
use crate::geometry::sampling::stream_rng;

#[derive(Clone, Debug, Serialize)]
pub struct ConePair {
    pub index: usize,
    pub dimension: usize,
    pub first: Vec<Vec<f64>>,
    pub second: Vec<Vec<f64>>,
}

impl ConePair {
    pub fn cones(&self) -> Result<(ConvexCone, ConvexCone)> {
        Ok((
            ConvexCone::from_generators(self.dimension, self.first.clone())?,
            ConvexCone::from_generators(self.dimension, self.second.clone())?,
        ))
    }
}

fn gaussian<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

fn random_cone<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<f64>> {
    let k = rng.random_range(1..=n + 2);
    let mut gens: Vec<Vec<f64>> = (0..k).map(|_| gaussian(rng, n)).collect();
    // a lineality direction now and then
    if rng.random_bool(0.25) {
        let g = gens[0].iter().map(|v| -v).collect();
        gens.push(g);
    }
    gens
}

fn subspace<R: Rng>(rng: &mut R, n: usize, k: usize) -> Vec<Vec<f64>> {
    let mut gens = Vec::with_capacity(2 * k);
    for _ in 0..k {
        let v = gaussian(rng, n);
        gens.push(v.iter().map(|x| -x).collect());
        gens.push(v);
    }
    gens
}

/// `count` pairs in dimensions 2..=5. Most are random finitely generated
/// cones; about a fifth are pairs of subspaces whose dimensions add up to `n`
/// or fall one short.
pub fn cone_pair_corpus(count: usize, seed: u64) -> Vec<ConePair> {
    (0..count)
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            let n = rng.random_range(2..=5);
            let (first, second) = if rng.random_bool(0.2) {
                let k = rng.random_range(1..n);
                let rest = if rng.random_bool(0.75) { n - k } else { n - k - 1 };
                let second = if rest == 0 { vec![vec![0.0; n]] } else { subspace(&mut rng, n, rest) };
                (subspace(&mut rng, n, k), second)
            } else {
                (random_cone(&mut rng, n), random_cone(&mut rng, n))
            };
            ConePair {
                index: i,
                dimension: n,
                first,
                second,
            }
        })
        .collect()
}
