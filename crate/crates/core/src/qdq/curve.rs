//! Certificates for curves `R → R^m` with one-sided derivatives, and the
//! matching necessary-condition falsifier.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::certificate::{Family, QdqCertificate};
use crate::error::{Error, Result};
use crate::geometry::sampling::{distance, norm};
use crate::geometry::{dist_to_operator_set, GammaSet, LinearMap, Modulus, OperatorSet};
use crate::mapping::Mapping;

/// Cauchy tolerance on the extrapolated one-sided quotients.
pub const CAUCHY_TOL: f64 = 1e-4;
/// Lower end of the quotient scan behind the measured modulus.
const QUOTIENT_FLOOR: f64 = 1e-8;

fn side_derivative(f: &Mapping, t: f64, ft: &[f64], sign: f64) -> Result<Vec<f64>> {
    let side = if sign > 0.0 { "right" } else { "left" };
    let levels = 15;
    let mut quotients = Vec::with_capacity(levels);
    for k in 0..levels {
        let h = 1e-2 * 0.5f64.powi(k as i32);
        let fh = f.eval(&[t + sign * h])?;
        quotients.push(fh.iter().zip(ft).map(|(a, b)| (a - b) / (sign * h)).collect::<Vec<f64>>());
    }
    let extrapolated: Vec<Vec<f64>> = quotients
        .windows(2)
        .map(|w| w[1].iter().zip(&w[0]).map(|(fine, coarse)| 2.0 * fine - coarse).collect())
        .collect();
    let tail = &extrapolated[extrapolated.len() - 4..];
    let last = tail[tail.len() - 1].clone();
    let spread = tail.iter().map(|r| distance(r, &last)).fold(0.0, f64::max);
    if !(spread <= CAUCHY_TOL * norm(&last).max(1.0)) {
        return Err(Error::NotOneSidedDifferentiable { point: t, side, spread });
    }
    Ok(last)
}

/// `(f'(t̄⁻), f'(t̄⁺))` by Richardson-extrapolated dyadic quotients.
pub fn one_sided_derivatives(f: &Mapping, t_bar: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if f.input_dim() != 1 {
        return Err(Error::dim(1, f.input_dim()));
    }
    let ft = f.eval(&[t_bar])?;
    Ok((side_derivative(f, t_bar, &ft, -1.0)?, side_derivative(f, t_bar, &ft, 1.0)?))
}

/// The segment between the one-sided derivatives of a scalar curve.
pub fn minimal_curve_qdq(f: &Mapping, t_bar: f64) -> Result<OperatorSet> {
    if f.output_dim() != 1 {
        return Err(Error::dim(1, f.output_dim()));
    }
    let (l, r) = one_sided_derivatives(f, t_bar)?;
    let (a, b) = (l[0], r[0]);
    if (a - b).abs() <= 1e-7 * a.abs().max(b.abs()).max(1.0) {
        return Ok(OperatorSet::singleton(LinearMap::scalar(0.5 * (a + b))));
    }
    Ok(OperatorSet::interval(a.min(b), a.max(b)))
}

type Arc1 = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// A curve with its one-sided derivatives at `t̄` and the arc `γ` on
/// `[−1, 1]` with `γ(−1) = f'(t̄⁻)`, `γ(1) = f'(t̄⁺)`.
#[derive(Clone)]
pub struct CurveData {
    pub f: Mapping,
    pub t_bar: f64,
    pub left_derivative: Vec<f64>,
    pub right_derivative: Vec<f64>,
    arc: Option<Arc1>,
}

impl fmt::Debug for CurveData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurveData")
            .field("f", &self.f.label())
            .field("t_bar", &self.t_bar)
            .field("left_derivative", &self.left_derivative)
            .field("right_derivative", &self.right_derivative)
            .field("custom_arc", &self.arc.is_some())
            .finish()
    }
}

impl CurveData {
    pub fn new(f: Mapping, t_bar: f64) -> Result<Self> {
        let (left_derivative, right_derivative) = one_sided_derivatives(&f, t_bar)?;
        Ok(CurveData {
            f,
            t_bar,
            left_derivative,
            right_derivative,
            arc: None,
        })
    }

    /// Replaces the default straight segment. The arc must start at the left
    /// derivative and end at the right one.
    pub fn with_arc(mut self, arc: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static) -> Result<Self> {
        let tol = 1e-6 * (1.0 + norm(&self.left_derivative) + norm(&self.right_derivative));
        if distance(&arc(-1.0), &self.left_derivative) > tol || distance(&arc(1.0), &self.right_derivative) > tol {
            return Err(Error::Argument("arc endpoints must be the one-sided derivatives".into()));
        }
        self.arc = Some(Arc::new(arc));
        Ok(self)
    }

    pub fn output_dim(&self) -> usize {
        self.f.output_dim()
    }

    pub fn arc(&self, s: f64) -> Vec<f64> {
        match &self.arc {
            Some(a) => a(s),
            None => {
                let w = (1.0 + s) / 2.0;
                self.left_derivative
                    .iter()
                    .zip(&self.right_derivative)
                    .map(|(l, r)| (1.0 - w) * l + w * r)
                    .collect()
            }
        }
    }

    /// `F(s) = f(t̄ + s) − f(t̄)`.
    fn shifted(&self, s: f64) -> Vec<f64> {
        let a = self.f.call(&[self.t_bar + s]);
        let b = self.f.call(&[self.t_bar]);
        a.iter().zip(&b).map(|(x, y)| x - y).collect()
    }

    fn quotient(&self, s: f64) -> Vec<f64> {
        self.shifted(s).into_iter().map(|v| v / s).collect()
    }
}

/// `L_δ, h_δ` for a curve at one `δ ∈ (0, 1)`.
///
/// With `s = t − t̄`: `L_δ = F(s)/s` for `|s| >= δ²`, `γ(2s/δ²)` for
/// `|s| <= δ²/2`, and on `±[δ²/2, δ²]` the segment from `γ(±1)` to
/// `F(±δ²)/(±δ²)`; `h_δ = F(s) − L_δ·s`.
#[derive(Clone, Debug)]
pub struct CurvePair {
    pub data: CurveData,
    pub delta: f64,
}

pub fn curve_certificate(data: &CurveData, delta: f64) -> Result<CurvePair> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Argument(format!("curve family needs delta in (0, 1), got {delta}")));
    }
    Ok(CurvePair {
        data: data.clone(),
        delta,
    })
}

impl CurvePair {
    pub fn l_vec(&self, t: f64) -> Vec<f64> {
        let s = t - self.data.t_bar;
        let d2 = self.delta * self.delta;
        let a = s.abs();
        if a >= d2 {
            self.data.quotient(s)
        } else if a <= d2 / 2.0 {
            self.data.arc(2.0 * s / d2)
        } else {
            let sign = s.signum();
            let w = (a - d2 / 2.0) / (d2 / 2.0);
            let start = self.data.arc(sign);
            let end = self.data.quotient(sign * d2);
            start.iter().zip(&end).map(|(p, q)| (1.0 - w) * p + w * q).collect()
        }
    }

    pub fn l(&self, t: f64) -> LinearMap {
        LinearMap::column(&self.l_vec(t))
    }

    pub fn h(&self, t: f64) -> Vec<f64> {
        let s = t - self.data.t_bar;
        let l = self.l_vec(t);
        self.data.shifted(s).iter().zip(&l).map(|(f, l)| f - l * s).collect()
    }
}

/// Constants measured from the curve near `t̄`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CurveConstants {
    /// Sampled Lipschitz constant of `f` on `[t̄ − 1, t̄ + 1]`, at least `|f'(t̄±)|`.
    pub lipschitz: f64,
    /// Sampled Lipschitz constant of the arc on `[−1, 1]`.
    pub arc_lipschitz: f64,
    /// Largest arc norm.
    pub arc_norm: f64,
}

fn measure_constants(data: &CurveData) -> CurveConstants {
    let k = 4000;
    let mut lip = norm(&data.left_derivative).max(norm(&data.right_derivative));
    let mut prev = data.shifted(-1.0);
    for i in 1..=k {
        let s = -1.0 + 2.0 * i as f64 / k as f64;
        let cur = data.shifted(s);
        lip = lip.max(distance(&cur, &prev) * k as f64 / 2.0);
        prev = cur;
    }
    let mut arc_lip: f64 = 0.0;
    let mut arc_norm: f64 = 0.0;
    let mut prev = data.arc(-1.0);
    for i in 1..=1000 {
        let s = -1.0 + 2.0 * i as f64 / 1000.0;
        let cur = data.arc(s);
        arc_lip = arc_lip.max(distance(&cur, &prev) * 500.0);
        arc_norm = arc_norm.max(norm(&cur));
        prev = cur;
    }
    CurveConstants {
        lipschitz: lip,
        arc_lipschitz: arc_lip,
        arc_norm: arc_norm.max(norm(&data.left_derivative)),
    }
}

/// The certificate for `f` at `(t̄, f(t̄))` along `R` with
/// `ρ(δ) = max{Mδ, ρ̂(δ)}`, both measured from the data.
///
/// `ρ̂(δ)` bounds the gap between one-sided quotients on `(0, δ]` and the
/// one-sided derivatives; `M` bounds `|h_δ|/δ²`.
pub fn curve_qdq(data: &CurveData, lambda: OperatorSet, delta_star: f64) -> Result<QdqCertificate> {
    let m = data.output_dim();
    if lambda.shape() != (m, 1) {
        return Err(Error::dim(format!("({m}, 1)"), format!("{:?}", lambda.shape())));
    }
    let c = measure_constants(data);
    let big_m = c.lipschitz + c.arc_norm.max(c.lipschitz);
    let mut scan = Vec::new();
    let mut s = QUOTIENT_FLOOR;
    while s < 2.0 {
        scan.push(s);
        s *= 1.05;
    }
    let deviations: Vec<(f64, f64)> = scan
        .iter()
        .map(|&s| {
            let r = distance(&data.quotient(s), &data.right_derivative);
            let l = distance(&data.quotient(-s), &data.left_derivative);
            (s, r.max(l))
        })
        .collect();
    let rho_hat = move |delta: f64| {
        deviations
            .iter()
            .take_while(|(s, _)| *s <= delta * 1.05)
            .map(|p| p.1)
            .fold(0.0, f64::max)
    };
    let rho = Modulus::new(format!("max({big_m:.3}*delta, rho_hat)"), move |d| (big_m * d).max(1.1 * rho_hat(d)));

    let lip_l = 1.5 * (4.0 * c.lipschitz).max(2.0 * c.arc_lipschitz);
    let lip_h = 1.5 * c.lipschitz + c.arc_norm.max(c.lipschitz);
    let d = data.clone();
    let family = Family::new(
        move |delta, x| {
            let p = CurvePair { data: d.clone(), delta };
            (p.l(x[0]), p.h(x[0]))
        },
        move |delta| Some((lip_l / (delta * delta), lip_h + lip_l / delta)),
    );
    let y_bar = data.f.eval(&[data.t_bar])?;
    QdqCertificate::new(
        vec![data.t_bar],
        y_bar,
        GammaSet::full(1),
        lambda,
        delta_star.min(1.0),
        rho,
        family,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveWitness {
    /// A one-sided derivative is not in `Λ`.
    MissingDerivative { side: String, derivative: Vec<f64>, distance: f64 },
    /// `Λ` splits into clusters at least `gap` apart, separating the derivatives.
    Disconnected {
        gap: f64,
        left_component: Vec<Vec<f64>>,
        right_component: Vec<Vec<f64>>,
    },
}

/// Default clustering gap for finite `Λ`.
pub const CLUSTER_GAP: f64 = 1e-6;
const MEMBERSHIP_TOL: f64 = 1e-6;

/// Checks the two necessary conditions: both one-sided derivatives lie in
/// `Λ`, and no split of `Λ` separates them. Absence of a witness does not
/// certify anything.
pub fn falsify_curve_qdq(data: &CurveData, lambda: &OperatorSet) -> Result<Option<CurveWitness>> {
    falsify_curve_qdq_with_gap(data, lambda, CLUSTER_GAP)
}

pub fn falsify_curve_qdq_with_gap(data: &CurveData, lambda: &OperatorSet, gap: f64) -> Result<Option<CurveWitness>> {
    for (side, d) in [("left", &data.left_derivative), ("right", &data.right_derivative)] {
        let dist = dist_to_operator_set(&LinearMap::column(d), lambda)?;
        if dist > MEMBERSHIP_TOL {
            return Ok(Some(CurveWitness::MissingDerivative {
                side: side.into(),
                derivative: d.clone(),
                distance: dist,
            }));
        }
    }
    if lambda.convex_closure() {
        return Ok(None);
    }
    let pts: Vec<Vec<f64>> = lambda.generators().iter().map(LinearMap::flatten).collect();
    let k = pts.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..k {
        for j in (i + 1)..k {
            if distance(&pts[i], &pts[j]) <= gap {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let nearest = |d: &[f64]| {
        (0..k)
            .min_by(|&a, &b| distance(&pts[a], d).total_cmp(&distance(&pts[b], d)))
            .expect("operator sets are nonempty")
    };
    let cl = find(&mut parent, nearest(&data.left_derivative));
    let cr = find(&mut parent, nearest(&data.right_derivative));
    if cl == cr {
        return Ok(None);
    }
    let comp = |c: usize, parent: &mut Vec<usize>| -> Vec<Vec<f64>> {
        (0..k).filter(|&i| find(parent, i) == c).map(|i| pts[i].clone()).collect()
    };
    let left = comp(cl, &mut parent);
    let right_comp = comp(cr, &mut parent);
    let rest: Vec<Vec<f64>> = (0..k)
        .filter(|&i| {
            let c = find(&mut parent, i);
            c != cl
        })
        .map(|i| pts[i].clone())
        .collect();
    let split = left
        .iter()
        .flat_map(|a| rest.iter().map(move |b| distance(a, b)))
        .fold(f64::INFINITY, f64::min);
    Ok(Some(CurveWitness::Disconnected {
        gap: split,
        left_component: left,
        right_component: right_comp,
    }))
}
