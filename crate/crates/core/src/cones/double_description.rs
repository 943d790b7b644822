//! Double description method: extreme rays and lineality of `{x : a_i·x <= 0}`.

use std::collections::BTreeSet;

use crate::geometry::sampling::{dot, norm};

const ZERO_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
struct Ray {
    v: Vec<f64>,
    /// Indices of processed constraints tight at this ray.
    tight: BTreeSet<usize>,
}

fn normalized(v: Vec<f64>) -> Vec<f64> {
    let n = norm(&v);
    v.into_iter().map(|x| x / n).collect()
}

/// Generators of the polyhedral cone `{x in R^n : a·x <= 0 for a in constraints}`.
///
/// Lineality directions are returned as `±` pairs after the extreme rays.
pub fn cone_generators(n: usize, constraints: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut lineality: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut rays: Vec<Ray> = Vec::new();
    let mut processed: Vec<usize> = Vec::new();

    for (k, a_raw) in constraints.iter().enumerate() {
        let an = norm(a_raw);
        if an <= 1e-300 {
            continue;
        }
        let a: Vec<f64> = a_raw.iter().map(|x| x / an).collect();

        let pick = lineality
            .iter()
            .enumerate()
            .map(|(i, l)| (i, dot(&a, l)))
            .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()));
        if let Some((li, al)) = pick.filter(|p| p.1.abs() > ZERO_TOL) {
            let lstar = lineality.remove(li);
            for l in lineality.iter_mut() {
                let c = dot(&a, l) / al;
                for (x, y) in l.iter_mut().zip(&lstar) {
                    *x -= c * y;
                }
            }
            for r in rays.iter_mut() {
                let c = dot(&a, &r.v) / al;
                for (x, y) in r.v.iter_mut().zip(&lstar) {
                    *x -= c * y;
                }
                r.v = normalized(std::mem::take(&mut r.v));
                r.tight.insert(k);
            }
            let sign = if al > 0.0 { -1.0 } else { 1.0 };
            rays.push(Ray {
                v: normalized(lstar.iter().map(|x| sign * x).collect()),
                tight: processed.iter().copied().collect(),
            });
            // keep the remaining lineality basis well conditioned
            lineality = orthonormalize(lineality);
        } else {
            let vals: Vec<f64> = rays.iter().map(|r| dot(&a, &r.v)).collect();
            let plus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > ZERO_TOL).collect();
            let minus: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < -ZERO_TOL).collect();
            let mut next: Vec<Ray> = Vec::new();
            for (i, r) in rays.iter().enumerate() {
                if vals[i] < -ZERO_TOL {
                    next.push(r.clone());
                } else if vals[i].abs() <= ZERO_TOL {
                    let mut r = r.clone();
                    r.tight.insert(k);
                    next.push(r);
                }
            }
            for &p in &plus {
                for &q in &minus {
                    let common: BTreeSet<usize> =
                        rays[p].tight.intersection(&rays[q].tight).copied().collect();
                    let adjacent = !rays.iter().enumerate().any(|(i, r)| {
                        i != p && i != q && common.is_subset(&r.tight)
                    });
                    if !adjacent {
                        continue;
                    }
                    let v: Vec<f64> = rays[q]
                        .v
                        .iter()
                        .zip(&rays[p].v)
                        .map(|(qv, pv)| vals[p] * qv - vals[q] * pv)
                        .collect();
                    if norm(&v) <= 1e-14 {
                        continue;
                    }
                    let mut tight = common;
                    tight.insert(k);
                    next.push(Ray {
                        v: normalized(v),
                        tight,
                    });
                }
            }
            rays = next;
        }
        processed.push(k);
    }

    let mut out: Vec<Vec<f64>> = Vec::new();
    for r in rays {
        if !out.iter().any(|o| o.iter().zip(&r.v).all(|(a, b)| (a - b).abs() < 1e-9)) {
            out.push(r.v);
        }
    }
    for l in lineality {
        out.push(l.iter().map(|x| -x).collect());
        out.push(l);
    }
    out
}

fn orthonormalize(vs: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(vs.len());
    for mut v in vs {
        for u in &out {
            let c = dot(&v, u);
            for (x, y) in v.iter_mut().zip(u) {
                *x -= c * y;
            }
        }
        let n = norm(&v);
        if n > 1e-12 {
            out.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
        for x in v.iter_mut() {
            for c in x.iter_mut() {
                *c = (*c * 1e9).round() / 1e9 + 0.0;
            }
        }
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn no_constraints_is_whole_space() {
        let g = cone_generators(2, &[]);
        assert_eq!(g.len(), 4);
    }

    #[test]
    fn nonpositive_orthant() {
        let g = cone_generators(2, &[vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(sorted(g), vec![vec![-1.0, 0.0], vec![0.0, -1.0]]);
    }

    #[test]
    fn half_plane_keeps_a_line() {
        let g = cone_generators(2, &[vec![0.0, 1.0]]);
        assert_eq!(sorted(g), vec![vec![-1.0, 0.0], vec![0.0, -1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn square_pyramid_has_four_rays() {
        // x3 >= |x1|, x3 >= |x2|
        let cons = vec![
            vec![1.0, 0.0, -1.0],
            vec![-1.0, 0.0, -1.0],
            vec![0.0, 1.0, -1.0],
            vec![0.0, -1.0, -1.0],
        ];
        let g = cone_generators(3, &cons);
        assert_eq!(g.len(), 4);
        for r in &g {
            assert!(cons.iter().all(|a| dot(a, r) <= 1e-9));
        }
    }

    #[test]
    fn pointed_to_trivial() {
        let g = cone_generators(1, &[vec![1.0], vec![-1.0]]);
        assert!(g.is_empty());
    }
}
