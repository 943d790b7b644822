//! End-to-end acceptance criteria, one PASS/FAIL line each.
//!
//! Oracles here avoid the code under test where practical: transversality is
//! rechecked with a nonnegative least-squares solve, ranks with an SVD, and
//! closed-form answers are written out by hand.

use nalgebra::{DMatrix, DVector};
use qdq::cones::{classify_pair, is_transversal, separating_functional, PairClass};
use qdq::flows::{field_from_key, linear_field, multiflow_commutator, FlowSolverConfig};
use qdq::geometry::{GammaSet, LinearMap, Modulus, OperatorSet};
use qdq::mapping::Mapping;
use qdq::nonsmooth::{bracket_flow_direction, clarke_jacobian_estimate, set_lie_bracket_estimate};
use qdq::qdq::{
    absvalue_certificate, absvalue_qdq, compose_certificates, delta_independent_certificate, falsify_curve_qdq,
    minimal_curve_qdq, verify_certificate, CurveData, CurveWitness, VerifyConfig,
};
use qdq::scenario::{certificate_from_key, cone_pair_corpus, run_config, RunOptions, ScenarioConfig, CALCULUS_KEYS};
use qdq::separation::{curated_fixtures, open_mapping_probe, run_fixture, ProbeConfig, SetFixture, Verdict};

const GRID: [f64; 3] = [1e-1, 1e-2, 1e-3];

/// Lawson–Hanson nonnegative least squares.
fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let k = a.ncols();
    let mut x = DVector::zeros(k);
    let mut passive = vec![false; k];
    for _ in 0..3 * k + 10 {
        let w = a.transpose() * (b - a * &x);
        let next = (0..k).filter(|j| !passive[*j]).max_by(|i, j| w[*i].total_cmp(&w[*j]));
        match next {
            Some(j) if w[j] > 1e-12 => passive[j] = true,
            _ => break,
        }
        loop {
            let idx: Vec<usize> = (0..k).filter(|j| passive[*j]).collect();
            let ap = DMatrix::from_fn(a.nrows(), idx.len(), |r, c| a[(r, idx[c])]);
            let sp = ap.svd(true, true).solve(b, 1e-12).unwrap();
            let mut s = DVector::zeros(k);
            for (c, &j) in idx.iter().enumerate() {
                s[j] = sp[c];
            }
            if idx.iter().all(|&j| s[j] > 0.0) {
                x = s;
                break;
            }
            let alpha = idx
                .iter()
                .filter(|&&j| s[j] <= 0.0)
                .map(|&j| x[j] / (x[j] - s[j]))
                .fold(f64::INFINITY, f64::min);
            x = &x + (&s - &x) * alpha;
            for &j in &idx {
                if x[j] <= 1e-14 {
                    passive[j] = false;
                    x[j] = 0.0;
                }
            }
        }
    }
    x
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter().map(|x| x / n).collect()
}

/// `K₁ − K₂ = ℝⁿ` iff every `±eᵢ` is a nonnegative combination of the generators of `K₁` and `−K₂`.
fn transversal_oracle(n: usize, g1: &[Vec<f64>], g2: &[Vec<f64>]) -> bool {
    let cols: Vec<Vec<f64>> = g1
        .iter()
        .filter(|g| g.iter().any(|v| *v != 0.0))
        .map(|g| unit(g))
        .chain(g2.iter().filter(|g| g.iter().any(|v| *v != 0.0)).map(|g| unit(g).iter().map(|v| -v).collect()))
        .collect();
    if cols.is_empty() {
        return false;
    }
    let a = DMatrix::from_fn(n, cols.len(), |i, j| cols[j][i]);
    (0..2 * n).all(|t| {
        let mut b = DVector::zeros(n);
        b[t / 2] = if t % 2 == 0 { 1.0 } else { -1.0 };
        let x = nnls(&a, &b);
        (&a * x - b).norm() < 1e-6
    })
}

fn rank(n: usize, g: &[Vec<f64>]) -> usize {
    if g.is_empty() {
        return 0;
    }
    DMatrix::from_fn(n, g.len(), |i, j| g[j][i]).rank(1e-9)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

fn point_segment(p: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let ab: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
    let ap: Vec<f64> = p.iter().zip(a).map(|(x, y)| x - y).collect();
    let len = dot(&ab, &ab);
    let s = if len == 0.0 { 0.0 } else { (dot(&ap, &ab) / len).clamp(0.0, 1.0) };
    let q: Vec<f64> = a.iter().zip(&ab).map(|(x, d)| x + s * d).collect();
    dist(p, &q)
}

/// Upper bound on the distance from `p` to the hull of `vs` (segments between vertices).
fn hull_distance_bound(p: &[f64], vs: &[Vec<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..vs.len() {
        for j in i..vs.len() {
            best = best.min(point_segment(p, &vs[i], &vs[j]));
        }
    }
    best
}

fn columns(set: &OperatorSet) -> Vec<Vec<f64>> {
    set.generators().iter().map(LinearMap::flatten).collect()
}

fn criterion_1_2() -> (bool, bool, String) {
    let corpus = cone_pair_corpus(1000, 2024);
    let mut xor = 0;
    let mut oracle = 0;
    let mut tri = 0;
    let mut complementary = 0;
    let mut failures = Vec::new();
    for p in &corpus {
        let (k1, k2) = p.cones().unwrap();
        let t = is_transversal(&k1, &k2).unwrap();
        let sep = separating_functional(&k1, &k2).unwrap();
        // the functional checked directly against the input generators
        let valid = sep.as_ref().is_none_or(|c| {
            let l = &c.lambda;
            let scale = l.iter().map(|v| v * v).sum::<f64>().sqrt();
            scale > 1e-9
                && p.first.iter().all(|g| dot(l, g) >= -1e-7 * scale * (1.0 + dot(g, g).sqrt()))
                && p.second.iter().all(|g| dot(l, g) <= 1e-7 * scale * (1.0 + dot(g, g).sqrt()))
        });
        let ok = (t != sep.is_some()) && valid;
        xor += ok as usize;
        let o = transversal_oracle(p.dimension, &p.first, &p.second) == t;
        oracle += o as usize;
        if !(ok && o) && failures.len() < 10 {
            failures.push(format!("pair {}: n = {}, {:?} | {:?}", p.index, p.dimension, p.first, p.second));
        }
        let c = classify_pair(&k1, &k2).unwrap();
        let n = p.dimension;
        let class_ok = c.class.is_transversal() == t
            && match c.class {
                PairClass::ComplementarySubspaces => {
                    complementary += 1;
                    let mut all = p.first.clone();
                    all.extend(p.second.iter().cloned());
                    let (r1, r2) = (rank(n, &p.first), rank(n, &p.second));
                    // r1 + r2 = n = rank(all) means the spans meet only at 0
                    k1.is_subspace() && k2.is_subspace() && r1 + r2 == n && rank(n, &all) == n
                }
                _ => true,
            };
        tri += class_ok as usize;
    }
    for f in &failures {
        println!("    logged failure: {f}");
    }
    let msg = format!("xor {xor}/1000, nnls oracle {oracle}/1000, trichotomy {tri}/1000, complementary {complementary}");
    (xor >= 999 && oracle >= 999, tri == 1000 && complementary > 0, msg)
}

fn criterion_3() -> (bool, String) {
    let abs = Mapping::scalar("abs", f64::abs);
    let r = clarke_jacobian_estimate(&abs, &[0.0], 1e-3, 10_000, 7).unwrap();
    let v: Vec<f64> = columns(&r.set).into_iter().map(|c| c[0]).collect();
    let (lo, hi) = (v.iter().copied().fold(f64::INFINITY, f64::min), v.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    // Hausdorff distance between intervals
    let d = (lo + 1.0).abs().max((hi - 1.0).abs());
    (r.set.convex_closure() && d <= 1e-2, format!("estimate [{lo}, {hi}], hausdorff {d:e}"))
}

fn criterion_4() -> (bool, String) {
    let a = [[0.0, 1.0], [0.0, 0.0]];
    let b = [[1.0, 0.0], [0.0, -1.0]];
    let f = linear_field(&a.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
    let g = linear_field(&b.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap();
    let q = [0.4, 1.0];
    let mul = |x: [[f64; 2]; 2], y: [[f64; 2]; 2]| {
        let mut m = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
            }
        }
        m
    };
    let (ba, ab) = (mul(b, a), mul(a, b));
    let c = [[ba[0][0] - ab[0][0], ba[0][1] - ab[0][1]], [ba[1][0] - ab[1][0], ba[1][1] - ab[1][1]]];
    let want = [c[0][0] * q[0] + c[0][1] * q[1], c[1][0] * q[0] + c[1][1] * q[1]];
    let errors: Vec<f64> = [1e-1, 5e-2, 2.5e-2]
        .iter()
        .map(|&t| {
            let p = multiflow_commutator(&f, &g, &q, t, &FlowSolverConfig::for_horizon(t)).unwrap();
            let d = [(p[0] - q[0]) / (t * t), (p[1] - q[1]) / (t * t)];
            dist(&d, &want)
        })
        .collect();
    let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
    let ok = want != [0.0, 0.0] && ratios.iter().all(|r| (1.6..=2.4).contains(r));
    (ok, format!("[A,B]q = {want:?}, errors {errors:?}, ratios {ratios:?}"))
}

fn criterion_5() -> (bool, String) {
    let f = field_from_key("unit_x").unwrap();
    let g = field_from_key("abs_x1_vertical").unwrap();
    let q = [0.0, 0.0];
    let eps = 1e-4;
    let d = bracket_flow_direction(&f, &g, &q, eps, &FlowSolverConfig::for_horizon(eps.sqrt())).unwrap();
    let est = set_lie_bracket_estimate(&f, &g, &q, 1e-3, 2000, 3).unwrap();
    let vs = columns(&est.set);
    let to_estimate = hull_distance_bound(&d, &vs);
    let (top, bottom) = (vec![0.0, 1.0], vec![0.0, -1.0]);
    let hausdorff = vs
        .iter()
        .map(|v| point_segment(v, &bottom, &top))
        .fold(0.0, f64::max)
        .max(hull_distance_bound(&top, &vs))
        .max(hull_distance_bound(&bottom, &vs));
    let closed = dist(&d, &[0.0, 1.0]);
    let ok = to_estimate <= 5e-2 && closed <= 1e-3 && hausdorff <= 1e-2;
    (ok, format!("direction {d:?}, dist to estimate ≤ {to_estimate:e}, hausdorff ≤ {hausdorff:e}"))
}

fn criterion_6() -> (bool, String) {
    let cfg = VerifyConfig::new(GRID.to_vec(), 200, 7);
    let abs: qdq::qdq::Target = Mapping::scalar("abs", f64::abs).into();
    let good = absvalue_qdq(OperatorSet::interval(-1.0, 1.0)).unwrap();
    let r = verify_certificate(&abs, &good, &cfg).unwrap();
    let rho_ok = GRID.iter().all(|d| good.rho.eval(*d) == *d);
    // the family itself at x = −δ: L = −1 exactly, at distance 1/2 from hull{−1/2, 1}
    let family_ok = [1e-2, 1e-3].iter().all(|&d| {
        let p = absvalue_certificate(d).unwrap();
        p.l(-d) == -1.0 && 0.5 > d
    });
    let bad = good.with_lambda(OperatorSet::hull(vec![LinearMap::scalar(-0.5), LinearMap::scalar(1.0)]).unwrap()).unwrap();
    let rb = verify_certificate(&abs, &bad, &cfg).unwrap();
    let flagged = [1e-2, 1e-3].iter().all(|&d| {
        rb.worst_violations
            .iter()
            .any(|v| v.delta == d && (v.x[0] + d).abs() <= 1e-15 && v.value > v.bound)
    });
    let ok = r.accepted && r.points_checked >= 600 && rho_ok && family_ok && !rb.accepted && flagged;
    (
        ok,
        format!(
            "accepted {} ({} points), perturbed rejected {} with {} violations, x = −δ flagged {flagged}",
            r.accepted, r.points_checked, !rb.accepted, rb.total_violations
        ),
    )
}

fn criterion_7() -> (bool, String) {
    let abs = Mapping::scalar("abs", f64::abs);
    let data = CurveData::new(abs.clone(), 0.0).unwrap();
    let split = OperatorSet::finite(vec![LinearMap::scalar(-1.0), LinearMap::scalar(1.0)]).unwrap();
    let w = falsify_curve_qdq(&data, &split).unwrap();
    let disconnected = matches!(w, Some(CurveWitness::Disconnected { .. }));
    let none = falsify_curve_qdq(&data, &OperatorSet::interval(-1.0, 1.0)).unwrap().is_none();
    let m = minimal_curve_qdq(&abs, 0.0).unwrap();
    let mut v: Vec<f64> = columns(&m).into_iter().map(|c| c[0]).collect();
    v.sort_by(f64::total_cmp);
    let exact = m.convex_closure() && v == [-1.0, 1.0];
    (disconnected && none && exact, format!("witness {w:?}, minimal set vertices {v:?}"))
}

fn criterion_8() -> (bool, String) {
    let cfg = VerifyConfig::new(GRID.to_vec(), 200, 7);
    let mut rejected = Vec::new();
    for k in CALCULUS_KEYS {
        let (target, cert) = certificate_from_key(k).unwrap();
        let r = verify_certificate(&target, &cert, &cfg).unwrap();
        if !r.accepted {
            rejected.push(*k);
        }
    }
    let abs = absvalue_qdq(OperatorSet::interval(-1.0, 1.0)).unwrap();
    let double = delta_independent_certificate(
        vec![0.0],
        vec![0.0],
        GammaSet::full(1),
        OperatorSet::singleton(LinearMap::scalar(2.0)),
        1.0,
        Modulus::zero(),
        |_| LinearMap::scalar(2.0),
        |_| vec![0.0],
        Some((0.0, 0.0)),
    )
    .unwrap();
    let c = compose_certificates(&abs, &double).unwrap();
    let mut v: Vec<f64> = c.lambda.vertices().unwrap().iter().map(|l| l.get(0, 0)).collect();
    v.sort_by(f64::total_cmp);
    let vertex_ok = v.len() == 2 && (v[0] + 2.0).abs() <= 1e-10 && (v[1] - 2.0).abs() <= 1e-10;
    (
        rejected.is_empty() && vertex_ok,
        format!("{} calculus certificates, rejected {rejected:?}, composite vertices {v:?}", CALCULUS_KEYS.len()),
    )
}

fn criterion_9() -> (bool, String) {
    let f = Mapping::new("x1_plus_abs_x2", 2, 1, |x| vec![x[0] + x[1].abs()]);
    let lambda = OperatorSet::hull(vec![LinearMap::row(&[1.0, -1.0]), LinearMap::row(&[1.0, 1.0])]).unwrap();
    let cfg = ProbeConfig::new(0.1, 2.0, 21, 4000, 11);
    let gamma = GammaSet::full(2);
    let r = open_mapping_probe(&f, &[0.0, 0.0], &[0.0], &gamma, &lambda, &cfg).unwrap();
    let with_zero = lambda.with_generator(LinearMap::zeros(1, 2)).unwrap();
    let e = open_mapping_probe(&f, &[0.0, 0.0], &[0.0], &gamma, &with_zero, &cfg);
    let precondition = matches!(&e, Err(qdq::Error::Precondition(m)) if m.contains("generator 2"));
    let ok = r.passed && r.covered_fraction == 1.0 && r.center_covered && precondition;
    (ok, format!("covered {} of {} targets, center {}, zero map: {e:?}", r.covered_fraction, r.targets, r.center_covered))
}

fn criterion_10() -> (bool, String) {
    let fixtures = curated_fixtures().unwrap();
    let mut fired = 0;
    let mut bad = Vec::new();
    for fx in &fixtures {
        let o = run_fixture(fx, 1.0, 400, 5).unwrap();
        if o.verdict.verdict != Verdict::NotLocallySeparated {
            continue;
        }
        fired += 1;
        // the probe's common point must lie on both sets and away from z
        let corroborated = o.probe.common_point.as_ref().is_some_and(|p| {
            fx.e1.contains(p, 1e-6) && fx.e2.contains(p, 1e-6) && dist(p, &fx.z) > 1e-9 && dist(p, &fx.z) <= 1.0 + 1e-9
        });
        if !corroborated {
            bad.push(fx.name);
        }
    }
    let ok = fixtures.len() == 10 && fired > 0 && bad.is_empty();
    (ok, format!("{} fixtures, {fired} verdicts fired, contradicted {bad:?}", fixtures.len()))
}

fn criterion_11() -> (bool, String) {
    let cfg = ScenarioConfig::load("paper_examples").unwrap();
    let serial = run_config(&cfg, &RunOptions::default()).unwrap();
    let parallel = run_config(
        &cfg,
        &RunOptions {
            parallel: true,
            ..Default::default()
        },
    )
    .unwrap();
    let (a, b) = (serial.csv(false).unwrap(), parallel.csv(false).unwrap());
    let ok = a.as_bytes() == b.as_bytes() && serial.reports == parallel.reports && serial.all_passed();
    (ok, format!("{} scenarios, all passed {}, identical {}", serial.reports.len(), serial.all_passed(), a == b))
}

fn main() {
    let (c1, c2, msg12) = criterion_1_2();
    let results: Vec<(usize, &str, bool, String)> = vec![
        (1, "cone duality", c1, msg12.clone()),
        (2, "trichotomy", c2, msg12),
        {
            let (ok, m) = criterion_3();
            (3, "clarke estimate of |x|", ok, m)
        },
        {
            let (ok, m) = criterion_4();
            (4, "smooth commutator expansion", ok, m)
        },
        {
            let (ok, m) = criterion_5();
            (5, "nonsmooth bracket direction", ok, m)
        },
        {
            let (ok, m) = criterion_6();
            (6, "certificate suite", ok, m)
        },
        {
            let (ok, m) = criterion_7();
            (7, "curve falsifier", ok, m)
        },
        {
            let (ok, m) = criterion_8();
            (8, "calculus soundness", ok, m)
        },
        {
            let (ok, m) = criterion_9();
            (9, "open mapping probe", ok, m)
        },
        {
            let (ok, m) = criterion_10();
            (10, "separation verdicts", ok, m)
        },
        {
            let (ok, m) = criterion_11();
            (11, "determinism", ok, m)
        },
    ];
    for (i, name, ok, msg) in &results {
        println!("criterion {i:>2} {}: {name} ({msg})", if *ok { "PASS" } else { "FAIL" });
    }
    let failed: Vec<usize> = results.iter().filter(|r| !r.2).map(|r| r.0).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
