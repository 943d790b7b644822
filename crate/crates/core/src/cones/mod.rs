//! Finitely generated convex cones: conic hulls, polars, transversality and
//! separation.

mod double_description;

use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::sampling::{dot, norm};
use crate::geometry::{GammaSet, LinearMap, VERDICT_TOL};
use crate::lp::{LinearProgram, LpStatus, Relation, LP_TOL};

pub use double_description::cone_generators;

/// Threshold on a coordinate of the normalized common point.
pub const COMMON_POINT_TOL: f64 = 1e-7;
const DROP_TOL: f64 = 1e-14;

/// A polyhedral cone kept in either or both representations.
///
/// `generators` span the cone positively; `normals` generate its polar, so
/// `x ∈ K ⟺ n·x <= 0` for every normal. The missing one is computed on
/// first use.
#[derive(Clone, Debug)]
pub struct ConvexCone {
    dimension: usize,
    generators: OnceLock<Vec<Vec<f64>>>,
    normals: OnceLock<Vec<Vec<f64>>>,
}

fn clean(dimension: usize, vs: Vec<Vec<f64>>) -> Result<Vec<Vec<f64>>> {
    if dimension == 0 {
        return Err(Error::Argument("cone dimension must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(vs.len());
    for v in vs {
        if v.len() != dimension {
            return Err(Error::dim(dimension, v.len()));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::Argument("cone vectors must be finite".into()));
        }
        if norm(&v) > DROP_TOL {
            out.push(v);
        }
    }
    Ok(out)
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = norm(v);
    v.iter().map(|x| x / n).collect()
}

impl ConvexCone {
    /// `span⁺(generators)`; zero vectors are dropped.
    pub fn from_generators(dimension: usize, generators: Vec<Vec<f64>>) -> Result<Self> {
        let g = clean(dimension, generators)?;
        let cone = ConvexCone {
            dimension,
            generators: OnceLock::new(),
            normals: OnceLock::new(),
        };
        cone.generators.set(g).ok();
        Ok(cone)
    }

    /// `{x : n·x <= 0 for all n in normals}`.
    pub fn from_normals(dimension: usize, normals: Vec<Vec<f64>>) -> Result<Self> {
        let n = clean(dimension, normals)?;
        let cone = ConvexCone {
            dimension,
            generators: OnceLock::new(),
            normals: OnceLock::new(),
        };
        cone.normals.set(n).ok();
        Ok(cone)
    }

    pub fn trivial(dimension: usize) -> Result<Self> {
        Self::from_generators(dimension, Vec::new())
    }

    pub fn full(dimension: usize) -> Result<Self> {
        Self::from_normals(dimension, Vec::new())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        self.generators.get_or_init(|| {
            cone_generators(self.dimension, self.normals.get().expect("one representation is always set"))
        })
    }

    pub fn normals(&self) -> &[Vec<f64>] {
        self.normals.get_or_init(|| {
            cone_generators(
                self.dimension,
                self.generators.get().expect("one representation is always set"),
            )
        })
    }

    /// Membership within `tol` (absolute, per coordinate of the residual).
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dimension {
            return false;
        }
        if let Some(normals) = self.normals.get() {
            return normals.iter().all(|n| dot(n, x) <= tol * norm(n));
        }
        let gens: Vec<Vec<f64>> = self.generators().iter().map(|g| unit(g)).collect();
        let slack = tol.max(LP_TOL * (1.0 + norm(x)));
        if gens.is_empty() {
            return x.iter().all(|v| v.abs() <= slack);
        }
        let mut lp = LinearProgram::new(gens.len());
        for k in 0..self.dimension {
            let row: Vec<f64> = gens.iter().map(|g| g[k]).collect();
            lp.add_constraint(row.clone(), Relation::Le, x[k] + slack);
            lp.add_constraint(row, Relation::Ge, x[k] - slack);
        }
        lp.is_feasible().unwrap_or(false)
    }

    pub fn is_trivial(&self) -> bool {
        self.generators().is_empty()
    }

    pub fn is_full_space(&self) -> bool {
        self.normals().is_empty()
    }

    /// Whether `-g` lies in the cone for every generator, i.e. the cone is a
    /// linear subspace.
    pub fn is_subspace(&self) -> bool {
        self.generators().iter().all(|g| {
            let neg: Vec<f64> = g.iter().map(|x| -x).collect();
            self.contains(&neg, 1e-9 * norm(g))
        })
    }

    pub fn negated(&self) -> ConvexCone {
        let neg = |vs: &[Vec<f64>]| vs.iter().map(|v| v.iter().map(|x| -x).collect()).collect();
        let cone = ConvexCone {
            dimension: self.dimension,
            generators: OnceLock::new(),
            normals: OnceLock::new(),
        };
        if let Some(g) = self.generators.get() {
            cone.generators.set(neg(g)).ok();
        }
        if let Some(n) = self.normals.get() {
            cone.normals.set(neg(n)).ok();
        }
        cone
    }

    pub fn polar(&self) -> ConvexCone {
        let cone = ConvexCone {
            dimension: self.dimension,
            generators: OnceLock::new(),
            normals: OnceLock::new(),
        };
        cone.normals.set(self.generators().to_vec()).ok();
        if let Some(n) = self.normals.get() {
            cone.generators.set(n.clone()).ok();
        }
        cone
    }

    pub fn intersection(&self, other: &ConvexCone) -> Result<ConvexCone> {
        if self.dimension != other.dimension {
            return Err(Error::dim(self.dimension, other.dimension));
        }
        let mut normals = self.normals().to_vec();
        normals.extend_from_slice(other.normals());
        ConvexCone::from_normals(self.dimension, normals)
    }
}

impl Serialize for ConvexCone {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            dimension: usize,
            generators: &'a [Vec<f64>],
        }
        Repr {
            dimension: self.dimension,
            generators: self.generators(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ConvexCone {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            dimension: usize,
            generators: Vec<Vec<f64>>,
        }
        let r = Repr::deserialize(d)?;
        ConvexCone::from_generators(r.dimension, r.generators).map_err(serde::de::Error::custom)
    }
}

/// The conic hull of `d` in `R^n`. An all-zero or empty `d` gives `{0}`.
pub fn conic_hull(n: usize, d: &[Vec<f64>]) -> Result<ConvexCone> {
    ConvexCone::from_generators(n, d.to_vec())
}

/// `{p : p·w <= 0 for all w in d}`, H-represented.
pub fn polar_cone(n: usize, d: &[Vec<f64>]) -> Result<ConvexCone> {
    ConvexCone::from_normals(n, d.to_vec())
}

/// A nonzero point of the polar of `w`, or `None` when the polar is `{0}`.
///
/// Runs the `2n` sweeps `max ±p_i` with `p·w <= 0` and `‖p‖∞ <= 1`.
fn polar_witness(n: usize, w: &[Vec<f64>]) -> Result<Option<Vec<f64>>> {
    let mut lp = LinearProgram::new(n);
    for i in 0..n {
        lp.set_bounds(i, Some(-1.0), Some(1.0));
    }
    for v in w {
        lp.add_constraint(unit(v), Relation::Le, 0.0);
    }
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut c = vec![0.0; n];
            c[i] = s;
            let sol = lp.maximize(&c)?;
            if sol.status != LpStatus::Optimal {
                return Err(Error::Lp(format!("polar sweep ended {:?}", sol.status)));
            }
            if sol.objective > VERDICT_TOL {
                return Ok(Some(sol.x));
            }
        }
    }
    Ok(None)
}

fn check_pair(k1: &ConvexCone, k2: &ConvexCone) -> Result<()> {
    if k1.dimension != k2.dimension {
        return Err(Error::dim(k1.dimension, k2.dimension));
    }
    Ok(())
}

/// Whether `K1 - K2 = R^n`.
pub fn is_transversal(k1: &ConvexCone, k2: &ConvexCone) -> Result<bool> {
    check_pair(k1, k2)?;
    let mut w = k1.generators().to_vec();
    w.extend(k2.generators().iter().map(|g| g.iter().map(|x| -x).collect::<Vec<_>>()));
    Ok(polar_witness(k1.dimension, &w)?.is_none())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginCheck {
    pub generator: Vec<f64>,
    /// `+1` for a `K1` generator (`λ·k >= 0`), `-1` for `K2` (`λ·k <= 0`).
    pub sign: i8,
    pub value: f64,
}

/// A nonzero λ with `λ >= 0` on `K1` and `λ <= 0` on `K2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationCertificate {
    pub lambda: Vec<f64>,
    pub margin_checks: Vec<MarginCheck>,
}

impl SeparationCertificate {
    pub fn new(lambda: Vec<f64>, k1: &ConvexCone, k2: &ConvexCone) -> Self {
        let mut checks = Vec::new();
        for g in k1.generators() {
            checks.push(MarginCheck {
                generator: g.clone(),
                sign: 1,
                value: dot(&lambda, g),
            });
        }
        for g in k2.generators() {
            checks.push(MarginCheck {
                generator: g.clone(),
                sign: -1,
                value: dot(&lambda, g),
            });
        }
        SeparationCertificate {
            lambda,
            margin_checks: checks,
        }
    }

    /// Re-evaluates every sign condition against the given cones.
    pub fn validate(&self, k1: &ConvexCone, k2: &ConvexCone, tol: f64) -> bool {
        if norm(&self.lambda) <= tol {
            return false;
        }
        let ok1 = k1.generators().iter().all(|g| dot(&self.lambda, g) >= -tol * norm(g));
        let ok2 = k2.generators().iter().all(|g| dot(&self.lambda, g) <= tol * norm(g));
        let recorded = self.margin_checks.iter().all(|m| {
            let v = dot(&self.lambda, &m.generator);
            (v - m.value).abs() <= tol.max(1e-12) && f64::from(m.sign) * v >= -tol * norm(&m.generator)
        });
        ok1 && ok2 && recorded
    }
}

/// A linear form separating `K1` from `K2`, when one exists.
pub fn separating_functional(k1: &ConvexCone, k2: &ConvexCone) -> Result<Option<SeparationCertificate>> {
    check_pair(k1, k2)?;
    let mut w: Vec<Vec<f64>> = k1.generators().iter().map(|g| g.iter().map(|x| -x).collect()).collect();
    w.extend(k2.generators().iter().cloned());
    let Some(witness) = polar_witness(k1.dimension, &w)? else {
        return Ok(None);
    };
    // prefer a relative-interior point of the separating cone
    let mut lambda = vec![0.0; k1.dimension];
    for g in cone_generators(k1.dimension, &w) {
        for (l, x) in lambda.iter_mut().zip(unit(&g)) {
            *l += x;
        }
    }
    let admissible = norm(&lambda) > 1e-9
        && w.iter().all(|v| dot(&lambda, v) <= 1e-9 * norm(v) * norm(&lambda));
    let lambda = if admissible { unit(&lambda) } else { unit(&witness) };
    Ok(Some(SeparationCertificate::new(lambda, k1, k2)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairClass {
    StronglyTransversal,
    ComplementarySubspaces,
    LinearlySeparable,
}

impl PairClass {
    pub fn is_transversal(self) -> bool {
        self != PairClass::LinearlySeparable
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairClassification {
    pub class: PairClass,
    pub certificate: Option<SeparationCertificate>,
    /// A nonzero point of `K1 ∩ K2` for strongly transversal pairs.
    pub common_point: Option<Vec<f64>>,
}

/// A nonzero point of `K1 ∩ K2`, normalized by `Σα + Σβ = 1` over unit generators.
pub fn common_point(k1: &ConvexCone, k2: &ConvexCone) -> Result<Option<Vec<f64>>> {
    check_pair(k1, k2)?;
    let n = k1.dimension;
    let g1: Vec<Vec<f64>> = k1.generators().iter().map(|g| unit(g)).collect();
    let g2: Vec<Vec<f64>> = k2.generators().iter().map(|g| unit(g)).collect();
    let (m1, m2) = (g1.len(), g2.len());
    if m1 == 0 || m2 == 0 {
        return Ok(None);
    }
    let mut lp = LinearProgram::new(m1 + m2);
    for k in 0..n {
        let row: Vec<f64> = g1.iter().map(|g| g[k]).chain(g2.iter().map(|g| -g[k])).collect();
        lp.add_constraint(row, Relation::Eq, 0.0);
    }
    lp.add_constraint(vec![1.0; m1 + m2], Relation::Eq, 1.0);
    for k in 0..n {
        for s in [1.0, -1.0] {
            let c: Vec<f64> = g1.iter().map(|g| s * g[k]).chain(std::iter::repeat_n(0.0, m2)).collect();
            let sol = lp.maximize(&c)?;
            match sol.status {
                LpStatus::Infeasible => return Ok(None),
                LpStatus::Unbounded => return Err(Error::Lp("bounded common-point program unbounded".into())),
                LpStatus::Optimal => {}
            }
            if sol.objective > COMMON_POINT_TOL {
                let mut x = vec![0.0; n];
                for (a, g) in sol.x[..m1].iter().zip(&g1) {
                    for (xk, gk) in x.iter_mut().zip(g) {
                        *xk += a * gk;
                    }
                }
                return Ok(Some(x));
            }
        }
    }
    Ok(None)
}

/// Labels a pair as strongly transversal, complementary subspaces, or
/// linearly separable.
pub fn classify_pair(k1: &ConvexCone, k2: &ConvexCone) -> Result<PairClassification> {
    check_pair(k1, k2)?;
    let transversal = is_transversal(k1, k2)?;
    let certificate = separating_functional(k1, k2)?;
    match (transversal, certificate) {
        (true, Some(_)) => Err(Error::InternalConsistency(
            "pair is transversal and yet linearly separable".into(),
        )),
        (false, None) => Err(Error::InternalConsistency(
            "pair is neither transversal nor linearly separable".into(),
        )),
        (false, Some(c)) => Ok(PairClassification {
            class: PairClass::LinearlySeparable,
            certificate: Some(c),
            common_point: None,
        }),
        (true, None) => {
            if let Some(p) = common_point(k1, k2)? {
                return Ok(PairClassification {
                    class: PairClass::StronglyTransversal,
                    certificate: None,
                    common_point: Some(p),
                });
            }
            if k1.is_subspace() && k2.is_subspace() {
                Ok(PairClassification {
                    class: PairClass::ComplementarySubspaces,
                    certificate: None,
                    common_point: None,
                })
            } else {
                Err(Error::InternalConsistency(
                    "transversal pair with trivial intersection is not a pair of subspaces".into(),
                ))
            }
        }
    }
}

/// `L·Γ`, for the cone kinds of [`GammaSet`].
pub fn image_cone(l: &LinearMap, gamma: &GammaSet) -> Result<ConvexCone> {
    if l.cols() != gamma.dimension() {
        return Err(Error::dim(gamma.dimension(), l.cols()));
    }
    let gens = gamma.cone_generators().ok_or_else(|| Error::UnsupportedGamma {
        operation: "image cone",
        kind: gamma.kind_name().into(),
    })?;
    ConvexCone::from_generators(l.rows(), gens.iter().map(|g| l.apply(g)).collect())
}
