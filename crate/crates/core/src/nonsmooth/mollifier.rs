//! Convolution with the rescaled bump kernel, by seeded quasi-Monte-Carlo.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flows::VectorField;
use crate::geometry::sampling::stream_rng;
use crate::mapping::{BoxDomain, Mapping};

const PRIMES: [u32; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MollifierConfig {
    pub eta: f64,
    pub quadrature_points: usize,
    pub seed: u64,
}

impl MollifierConfig {
    pub fn new(eta: f64) -> Self {
        MollifierConfig {
            eta,
            quadrature_points: 1024,
            seed: 0,
        }
    }
}

/// `exp(-1 / (1 - |v|²))` on the open unit ball, zero elsewhere.
pub fn bump(v: &[f64]) -> f64 {
    let r2: f64 = v.iter().map(|x| x * x).sum();
    if r2 >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - r2)).exp()
    }
}

/// `∫_{B₁} bump` in `R^n`, by composite Simpson on the radial profile.
pub fn bump_mass(n: usize) -> f64 {
    let sphere = 2.0 * std::f64::consts::PI.powf(n as f64 / 2.0) / gamma_half(n);
    let k = 20_000;
    let h = 1.0 / k as f64;
    let prof = |r: f64| if r >= 1.0 { 0.0 } else { (-1.0 / (1.0 - r * r)).exp() * r.powi(n as i32 - 1) };
    let mut s = prof(0.0) + prof(1.0);
    for i in 1..k {
        s += prof(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sphere * s * h / 3.0
}

/// `Γ(n/2)` for positive integers `n`.
fn gamma_half(n: usize) -> f64 {
    if n % 2 == 0 {
        (1..n / 2).map(|k| k as f64).product()
    } else {
        // Γ(1/2) (1/2)(3/2)...
        let mut g = std::f64::consts::PI.sqrt();
        let mut x = 0.5;
        while x < n as f64 / 2.0 - 1e-12 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = base as f64;
    let mut inv = 1.0 / b;
    let mut out = 0.0;
    while i > 0 {
        out += (i % base as u64) as f64 * inv;
        i /= base as u64;
        inv /= b;
    }
    out
}

/// Quadrature nodes `v_i ∈ B₁` and weights `w_i ∝ bump(v_i)` with `Σ w_i = 1`.
///
/// Nodes come in antithetic pairs `±v`, so odd moments vanish exactly.
#[derive(Clone, Debug)]
pub struct Quadrature {
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

impl Quadrature {
    pub fn new(n: usize, points: usize, seed: u64) -> Result<Self> {
        if n == 0 || n > PRIMES.len() {
            return Err(Error::Argument(format!("mollifier dimension {n} out of range")));
        }
        if points < 2 {
            return Err(Error::Argument("mollifier needs at least two quadrature points".into()));
        }
        let mut rng = stream_rng(seed, u64::MAX);
        let shift: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let half = points / 2;
        let mut nodes = Vec::with_capacity(2 * half);
        let mut i = 1u64;
        while nodes.len() < 2 * half {
            let v: Vec<f64> = (0..n)
                .map(|k| {
                    let u = (radical_inverse(i, PRIMES[k]) + shift[k]).fract();
                    2.0 * u - 1.0
                })
                .collect();
            i += 1;
            if bump(&v) > 0.0 {
                nodes.push(v.iter().map(|x| -x).collect());
                nodes.push(v);
            }
        }
        let raw: Vec<f64> = nodes.iter().map(|v| bump(v)).collect();
        let total: f64 = raw.iter().sum();
        Ok(Quadrature {
            nodes,
            weights: raw.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn average(&self, f: impl Fn(&[f64]) -> Vec<f64>, x: &[f64], eta: f64, m: usize) -> Vec<f64> {
        let mut acc = vec![0.0; m];
        let mut p = vec![0.0; x.len()];
        for (v, w) in self.nodes.iter().zip(&self.weights) {
            for ((pk, xk), vk) in p.iter_mut().zip(x).zip(v) {
                *pk = xk + eta * vk;
            }
            for (a, y) in acc.iter_mut().zip(f(&p)) {
                *a += w * y;
            }
        }
        acc
    }
}

fn shrunk(domain: &BoxDomain, eta: f64) -> BoxDomain {
    BoxDomain {
        lower: domain.lower.iter().map(|l| l + eta).collect(),
        upper: domain.upper.iter().map(|u| u - eta).collect(),
    }
}

/// `f * φ_η` for a general map; the domain shrinks by `η` on each side.
pub fn mollify_mapping(f: &Mapping, cfg: &MollifierConfig) -> Result<Mapping> {
    if !(cfg.eta > 0.0) {
        return Err(Error::Argument("mollifier radius must be positive".into()));
    }
    let quad = Arc::new(Quadrature::new(f.input_dim(), cfg.quadrature_points, cfg.seed)?);
    let inner = f.clone();
    let (eta, m) = (cfg.eta, f.output_dim());
    let domain = shrunk(f.domain(), eta);
    if domain.lower.iter().zip(&domain.upper).any(|(l, u)| l > u) {
        return Err(Error::Argument("mollifier radius exceeds the domain".into()));
    }
    Mapping::new(format!("{}*phi[{eta:e}]", f.label()), f.input_dim(), m, move |x| {
        quad.average(|p| inner.call(p), x, eta, m)
    })
    .with_domain(domain)
}

pub fn mollify(f: &VectorField, cfg: &MollifierConfig) -> Result<VectorField> {
    VectorField::from_mapping(mollify_mapping(f.mapping(), cfg)?, f.lipschitz_estimate())
}
