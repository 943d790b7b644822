//! Minimum-norm point of a polytope given by its generating points.
//!
//! Wolfe's active-set algorithm: the iterate is always a convex combination of
//! an affinely independent corral of points, and the corral grows by the point
//! most violating the optimality condition `x·p >= |x|^2`.

use nalgebra::{DMatrix, DVector};

/// Result of a projection onto `conv(points)`.
#[derive(Clone, Debug)]
pub struct Projection {
    pub point: Vec<f64>,
    /// Convex weights, one per input point.
    pub weights: Vec<f64>,
    pub distance: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Projects `target` onto the convex hull of `points` (Euclidean norm).
///
/// Panics if `points` is empty or lengths disagree; callers validate shapes.
pub fn project_onto_hull(points: &[Vec<f64>], target: &[f64]) -> Projection {
    assert!(!points.is_empty(), "projection onto an empty hull");
    let shifted: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            assert_eq!(p.len(), target.len());
            p.iter().zip(target).map(|(a, b)| a - b).collect()
        })
        .collect();
    let (x, weights) = min_norm_point(&shifted);
    let point: Vec<f64> = x.iter().zip(target).map(|(a, b)| a + b).collect();
    let distance = dot(&x, &x).sqrt();
    Projection {
        point,
        weights,
        distance,
    }
}

/// Distance from `target` to `conv(points)`.
pub fn distance_to_hull(points: &[Vec<f64>], target: &[f64]) -> f64 {
    project_onto_hull(points, target).distance
}

fn combine(points: &[Vec<f64>], corral: &[usize], w: &[f64]) -> Vec<f64> {
    let d = points[0].len();
    let mut x = vec![0.0; d];
    for (&i, &wi) in corral.iter().zip(w) {
        for k in 0..d {
            x[k] += wi * points[i][k];
        }
    }
    x
}

/// Affine minimizer of `|Σ v_i p_i|` subject to `Σ v_i = 1` over the corral.
fn affine_min(points: &[Vec<f64>], corral: &[usize]) -> Vec<f64> {
    let k = corral.len();
    let mut a = DMatrix::zeros(k + 1, k + 1);
    for (r, &i) in corral.iter().enumerate() {
        for (c, &j) in corral.iter().enumerate() {
            a[(r, c)] = dot(&points[i], &points[j]);
        }
        a[(r, k)] = 1.0;
        a[(k, r)] = 1.0;
    }
    let mut b = DVector::zeros(k + 1);
    b[k] = 1.0;
    let sol = a
        .clone()
        .lu()
        .solve(&b)
        .filter(|s| s.iter().all(|v| v.is_finite()))
        .unwrap_or_else(|| {
            a.svd(true, true)
                .solve(&b, 1e-14)
                .unwrap_or_else(|_| DVector::from_element(k + 1, 1.0 / k as f64))
        });
    sol.iter().take(k).copied().collect()
}

fn min_norm_point(points: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let n = points.len();
    let scale = points
        .iter()
        .map(|p| dot(p, p))
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let eps = 1e-30 * scale;

    let start = (0..n)
        .min_by(|&a, &b| dot(&points[a], &points[a]).total_cmp(&dot(&points[b], &points[b])))
        .unwrap();
    let mut corral = vec![start];
    let mut w = vec![1.0];

    for _major in 0..(50 * n + 100) {
        let x = combine(points, &corral, &w);
        let xx = dot(&x, &x);
        if xx <= eps {
            break;
        }
        let (j, xpj) = (0..n)
            .map(|j| (j, dot(&x, &points[j])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if xx - xpj <= 1e-12 * xx || corral.contains(&j) {
            break;
        }
        corral.push(j);
        w.push(0.0);

        for _minor in 0..(corral.len() + 10) {
            let v = affine_min(points, &corral);
            if v.iter().all(|&vi| vi > 1e-14) {
                w = v;
                break;
            }
            let mut theta = 1.0_f64;
            for (wi, vi) in w.iter().zip(&v) {
                if *vi <= 1e-14 {
                    let denom = wi - vi;
                    if denom > 0.0 {
                        theta = theta.min(wi / denom);
                    }
                }
            }
            for (wi, vi) in w.iter_mut().zip(&v) {
                *wi += theta * (vi - *wi);
            }
            let mut keep_c = Vec::with_capacity(corral.len());
            let mut keep_w = Vec::with_capacity(corral.len());
            for (&c, &wi) in corral.iter().zip(&w) {
                if wi > 1e-14 {
                    keep_c.push(c);
                    keep_w.push(wi);
                }
            }
            if keep_c.is_empty() {
                keep_c.push(corral[0]);
                keep_w.push(1.0);
            }
            let total: f64 = keep_w.iter().sum();
            corral = keep_c;
            w = keep_w.into_iter().map(|v| v / total).collect();
        }
    }

    let x = combine(points, &corral, &w);
    let mut weights = vec![0.0; n];
    for (&c, &wi) in corral.iter().zip(&w) {
        weights[c] += wi;
    }
    (x, weights)
}
