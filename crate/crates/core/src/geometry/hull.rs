//! Vertex sets of convex hulls of finite point clouds in low dimension.

use std::cmp::Ordering;

use super::min_norm::project_onto_hull;
use crate::error::{Error, Result};

/// Points closer than this (max-norm) are merged before hulling.
pub(crate) const MERGE_TOL: f64 = 1e-12;
/// A candidate is dropped when it lies within this distance of the hull of the others.
pub(crate) const VERTEX_TOL: f64 = 1e-10;

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Sorts lexicographically and merges near-duplicates.
pub(crate) fn canonical_points(points: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut pts: Vec<Vec<f64>> = points.to_vec();
    pts.sort_by(|a, b| lex_cmp(a, b));
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(pts.len());
    for p in pts {
        let dup = out.iter().any(|q| {
            q.iter()
                .zip(&p)
                .all(|(a, b)| (a - b).abs() <= MERGE_TOL * (1.0 + a.abs()))
        });
        if !dup {
            out.push(p);
        }
    }
    out
}

/// Minimal vertex set of `conv(points)`, for points of dimension at most 4.
///
/// The output is sorted lexicographically so that equal hulls compare equal.
pub fn convex_hull_points(points: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let d = points.first().map(Vec::len).ok_or_else(|| {
        Error::Argument("convex hull of an empty point set".into())
    })?;
    if d > 4 {
        return Err(Error::Argument(format!(
            "convex_hull_points supports dimension <= 4, got {d}"
        )));
    }
    hull_vertices(points)
}

/// Same as [`convex_hull_points`] without the dimension cap.
pub(crate) fn hull_vertices(points: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let d = points
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::Argument("convex hull of an empty point set".into()))?;
    if d == 0 {
        return Err(Error::Argument("points must have dimension >= 1".into()));
    }
    if points.iter().any(|p| p.len() != d) {
        return Err(Error::Argument("points of mixed dimension".into()));
    }
    if points.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Argument("non-finite point coordinate".into()));
    }
    let pts = canonical_points(points);
    let mut verts = match d {
        1 => {
            let lo = pts.first().unwrap().clone();
            let hi = pts.last().unwrap().clone();
            if lex_cmp(&lo, &hi) == Ordering::Equal {
                vec![lo]
            } else {
                vec![lo, hi]
            }
        }
        2 => monotone_chain(&pts),
        _ => incremental_vertices(&pts),
    };
    verts.sort_by(|a, b| lex_cmp(a, b));
    Ok(verts)
}

fn cross(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain on lexicographically sorted, deduplicated points.
fn monotone_chain(pts: &[Vec<f64>]) -> Vec<Vec<f64>> {
    if pts.len() <= 2 {
        return pts.to_vec();
    }
    let scale = pts
        .iter()
        .flatten()
        .fold(0.0_f64, |m, v| m.max(v.abs()))
        .max(1.0);
    let tol = 1e-12 * scale * scale;
    let mut lower: Vec<&Vec<f64>> = Vec::new();
    for p in pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= tol {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<&Vec<f64>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= tol {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    let mut out: Vec<Vec<f64>> = lower.into_iter().chain(upper).cloned().collect();
    if out.is_empty() {
        out.push(pts[0].clone());
    }
    // all points collinear: the chain returns both endpoints twice over
    let canon = canonical_points(&out);
    canon
}

/// Output-sensitive vertex discovery for `d >= 3`.
///
/// A point not yet covered by the known vertices yields a separating
/// direction; the lexicographically largest maximizer of that direction over
/// all points is a vertex of the full hull.
fn incremental_vertices(pts: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let d = pts[0].len();
    let mut verts: Vec<usize> = Vec::new();
    // seed with coordinate extremes
    for k in 0..d {
        for sign in [1.0, -1.0] {
            let dir: Vec<f64> = (0..d).map(|i| if i == k { sign } else { 0.0 }).collect();
            let best = argmax_dir(pts, &dir);
            if !verts.contains(&best) {
                verts.push(best);
            }
        }
    }
    for i in 0..pts.len() {
        loop {
            if verts.contains(&i) {
                break;
            }
            let vp: Vec<Vec<f64>> = verts.iter().map(|&v| pts[v].clone()).collect();
            let proj = project_onto_hull(&vp, &pts[i]);
            if proj.distance <= VERTEX_TOL {
                break;
            }
            let dir: Vec<f64> = pts[i].iter().zip(&proj.point).map(|(a, b)| a - b).collect();
            let best = argmax_dir(pts, &dir);
            if verts.contains(&best) {
                // numerical tie: the candidate itself is extreme for this direction
                verts.push(i);
                break;
            }
            verts.push(best);
        }
    }
    // prune vertices that became redundant up to tolerance
    let mut keep: Vec<usize> = verts.clone();
    let mut idx = 0;
    while idx < keep.len() && keep.len() > 1 {
        let others: Vec<Vec<f64>> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != idx)
            .map(|(_, &v)| pts[v].clone())
            .collect();
        if project_onto_hull(&others, &pts[keep[idx]]).distance <= VERTEX_TOL {
            keep.remove(idx);
        } else {
            idx += 1;
        }
    }
    keep.into_iter().map(|v| pts[v].clone()).collect()
}

fn argmax_dir(pts: &[Vec<f64>], dir: &[f64]) -> usize {
    let mut best = 0;
    let mut best_val = f64::NEG_INFINITY;
    for (i, p) in pts.iter().enumerate() {
        let v: f64 = p.iter().zip(dir).map(|(a, b)| a * b).sum();
        // ties resolve to the lexicographically largest point
        if v > best_val || (v == best_val && lex_cmp(p, &pts[best]) == Ordering::Greater) {
            best = i;
            best_val = v;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn drops_interior_point() {
        let pts = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, 0.25], vec![0.0, 1.0]];
        let h = convex_hull_points(&pts).unwrap();
        assert_eq!(h, vec![vec![0.0, 0.0], vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn one_dimensional_interval() {
        let h = convex_hull_points(&[vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        assert_eq!(h, vec![vec![0.0], vec![2.0]]);
    }

    #[test]
    fn collinear_in_plane_and_singletons() {
        let h = convex_hull_points(&[vec![0.0, 0.0], vec![1.0, 1.0], vec![2.0, 2.0]]).unwrap();
        assert_eq!(h, vec![vec![0.0, 0.0], vec![2.0, 2.0]]);
        let s = convex_hull_points(&[vec![3.0, 1.0], vec![3.0, 1.0]]).unwrap();
        assert_eq!(s, vec![vec![3.0, 1.0]]);
    }

    #[test]
    fn cube_in_three_dimensions() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(vec![(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64]);
        }
        pts.push(vec![0.5, 0.5, 0.5]);
        pts.push(vec![0.5, 0.0, 0.5]);
        let h = convex_hull_points(&pts).unwrap();
        assert_eq!(h.len(), 8);
    }

    #[test]
    fn errors() {
        assert!(convex_hull_points(&[]).is_err());
        assert!(convex_hull_points(&[vec![0.0; 5]]).is_err());
    }
}
