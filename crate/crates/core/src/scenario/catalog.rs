//! Maps and certificates addressed by key from scenario files.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flows::field_from_key;
use crate::geometry::{GammaSet, LinearMap, Modulus, OperatorSet};
use crate::mapping::Mapping;
use crate::qdq::{
    absvalue_qdq, abundant_transfer, combine_certificates, compose_certificates, composed_map, curve_qdq,
    delta_independent_certificate, lie_bracket_certificate, linear_combination_map, product_map, stacked_map,
    bracket_curve, AbundantTarget, CombineKind, CurveData, QdqCertificate, Target, ThetaFamily,
};

pub const MAP_KEYS: &[&str] = &[
    "abs",
    "relu",
    "identity_1d",
    "square_1d",
    "abs_plus_square",
    "x1_plus_abs_x2",
    "l1_norm_2d",
    "max_x1_x2",
    "abs_components",
];

pub fn map_from_key(key: &str) -> Result<Mapping> {
    Ok(match key {
        "abs" => Mapping::scalar("abs", f64::abs),
        "relu" => Mapping::scalar("relu", |x| x.max(0.0)),
        "identity_1d" => Mapping::scalar("x", |x| x),
        "square_1d" => Mapping::scalar("sq", |x| x * x),
        "abs_plus_square" => Mapping::scalar("abs_plus_square", |x| x.abs() + x * x),
        "x1_plus_abs_x2" => Mapping::new("x1_plus_abs_x2", 2, 1, |x| vec![x[0] + x[1].abs()]),
        "l1_norm_2d" => Mapping::new("l1_norm_2d", 2, 1, |x| vec![x[0].abs() + x[1].abs()]),
        "max_x1_x2" => Mapping::new("max_x1_x2", 2, 1, |x| vec![x[0].max(x[1])]),
        "abs_components" => Mapping::new("abs_components", 2, 2, |x| vec![x[0].abs(), x[1].abs()]),
        other => return Err(Error::UnknownCatalogKey(other.to_string())),
    })
}

/// An operator set in a scenario file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaSpec {
    /// `[lo, hi]` as a set of `1 × 1` maps.
    Interval { interval: [f64; 2] },
    /// Convex hull of matrices given by rows.
    Hull { hull: Vec<Vec<Vec<f64>>> },
    /// A finite set of matrices given by rows.
    Finite { finite: Vec<Vec<Vec<f64>>> },
    /// Convex hull of column vectors.
    Columns { columns: Vec<Vec<f64>> },
}

impl LambdaSpec {
    pub fn resolve(&self) -> Result<OperatorSet> {
        let maps = |ms: &[Vec<Vec<f64>>]| ms.iter().map(|m| LinearMap::from_rows(m)).collect::<Result<Vec<_>>>();
        match self {
            LambdaSpec::Interval { interval: [lo, hi] } => {
                if !(lo <= hi) {
                    return Err(Error::Config(format!("empty interval [{lo}, {hi}]")));
                }
                Ok(OperatorSet::interval(*lo, *hi))
            }
            LambdaSpec::Hull { hull } => OperatorSet::hull(maps(hull)?),
            LambdaSpec::Finite { finite } => OperatorSet::finite(maps(finite)?),
            LambdaSpec::Columns { columns } => OperatorSet::hull_of_vectors(columns),
        }
    }
}

pub const CERTIFICATE_KEYS: &[&str] = &[
    "absvalue",
    "square",
    "curve_abs",
    "curve_t_abs",
    "linear_abs_2x",
    "linear_abs_square",
    "set_product_abs_square",
    "scalar_product_abs_one",
    "scalar_product_abs_one_plus_x",
    "compose_double_abs",
    "compose_square_abs",
    "compose_abs_neg",
    "compose_abs_kink",
    "abundant_identity_half_shift",
    "abundant_abs_half_shift",
    "abundant_abs_identity",
    "bracket_abs_pair",
];

/// The certificates produced by the calculus rules.
pub const CALCULUS_KEYS: &[&str] = &[
    "linear_abs_2x",
    "linear_abs_square",
    "set_product_abs_square",
    "scalar_product_abs_one",
    "scalar_product_abs_one_plus_x",
    "compose_double_abs",
    "compose_square_abs",
    "compose_abs_neg",
    "compose_abs_kink",
    "abundant_identity_half_shift",
    "abundant_abs_half_shift",
    "abundant_abs_identity",
];

fn abs_map() -> Mapping {
    Mapping::scalar("abs", f64::abs)
}

fn abs_cert() -> Result<QdqCertificate> {
    absvalue_qdq(OperatorSet::interval(-1.0, 1.0))
}

fn square_cert() -> Result<QdqCertificate> {
    delta_independent_certificate(
        vec![0.0],
        vec![0.0],
        GammaSet::full(1),
        OperatorSet::singleton(LinearMap::scalar(0.0)),
        1.0,
        Modulus::linear(1.0),
        |x| LinearMap::scalar(x[0]),
        |_| vec![0.0],
        Some((1.0, 0.0)),
    )
}

/// `x ↦ a + c·x` at the origin, exact.
fn affine_cert(a: f64, c: f64, rho: Modulus) -> Result<QdqCertificate> {
    delta_independent_certificate(
        vec![0.0],
        vec![a],
        GammaSet::full(1),
        OperatorSet::singleton(LinearMap::scalar(c)),
        1.0,
        rho,
        move |_| LinearMap::scalar(c),
        |_| vec![0.0],
        Some((0.0, 0.0)),
    )
}

fn kink_map() -> Mapping {
    Mapping::scalar("kink", |t| t.max(2.0 * t))
}

fn abundant(map: Mapping, cert: QdqCertificate, theta: ThetaFamily) -> Result<(Target, QdqCertificate)> {
    let t = abundant_transfer(&cert, &theta)?;
    Ok((Target::Set(Arc::new(AbundantTarget::new(map, theta))), t))
}

/// The map a certificate is about and the certificate itself.
pub fn certificate_from_key(key: &str) -> Result<(Target, QdqCertificate)> {
    let sq = || Mapping::scalar("sq", |x| x * x);
    Ok(match key {
        "absvalue" => (abs_map().into(), abs_cert()?),
        "square" => (sq().into(), square_cert()?),
        "curve_abs" => {
            let data = CurveData::new(abs_map(), 0.0)?;
            (abs_map().into(), curve_qdq(&data, OperatorSet::interval(-1.0, 1.0), 1.0)?)
        }
        "curve_t_abs" => {
            let f = Mapping::new("t_abs", 1, 2, |t| vec![t[0], t[0].abs()]);
            let data = CurveData::new(f.clone(), 0.0)?;
            let lambda = OperatorSet::hull_of_vectors(&[vec![1.0, -1.0], vec![1.0, 1.0]])?;
            (f.into(), curve_qdq(&data, lambda, 1.0)?)
        }
        "linear_abs_2x" => (
            linear_combination_map(2.0, &abs_map(), 0.0, &sq())?.into(),
            combine_certificates(CombineKind::Linear { alpha: 2.0, beta: 0.0 }, &abs_cert()?, &square_cert()?)?,
        ),
        "linear_abs_square" => (
            linear_combination_map(-1.0, &abs_map(), 3.0, &sq())?.into(),
            combine_certificates(CombineKind::Linear { alpha: -1.0, beta: 3.0 }, &abs_cert()?, &square_cert()?)?,
        ),
        "set_product_abs_square" => (
            stacked_map(&abs_map(), &sq())?.into(),
            combine_certificates(CombineKind::SetProduct, &abs_cert()?, &square_cert()?)?,
        ),
        "scalar_product_abs_one" => (
            product_map(&abs_map(), &Mapping::scalar("one", |_| 1.0))?.into(),
            combine_certificates(CombineKind::ScalarProduct, &abs_cert()?, &affine_cert(1.0, 0.0, Modulus::zero())?)?,
        ),
        "scalar_product_abs_one_plus_x" => (
            product_map(&abs_map(), &Mapping::scalar("one_plus_x", |x| 1.0 + x))?.into(),
            combine_certificates(CombineKind::ScalarProduct, &abs_cert()?, &affine_cert(1.0, 1.0, Modulus::zero())?)?,
        ),
        "compose_double_abs" => (
            composed_map(&abs_map(), &Mapping::scalar("2y", |y| 2.0 * y))?.into(),
            compose_certificates(&abs_cert()?, &affine_cert(0.0, 2.0, Modulus::zero())?)?,
        ),
        "compose_square_abs" => (
            composed_map(&abs_map(), &sq())?.into(),
            compose_certificates(&abs_cert()?, &square_cert()?)?,
        ),
        "compose_abs_neg" => (
            composed_map(&Mapping::scalar("neg", |x| -x), &abs_map())?.into(),
            compose_certificates(&affine_cert(0.0, -1.0, Modulus::zero())?, &abs_cert()?)?,
        ),
        "compose_abs_kink" => {
            let data = CurveData::new(kink_map(), 0.0)?;
            let f = curve_qdq(&data, OperatorSet::interval(1.0, 2.0), 1.0)?;
            (composed_map(&kink_map(), &abs_map())?.into(), compose_certificates(&f, &abs_cert()?)?)
        }
        "abundant_identity_half_shift" => abundant(
            Mapping::scalar("x", |x| x),
            affine_cert(0.0, 1.0, Modulus::linear(1.0))?,
            ThetaFamily::half_shift(),
        )?,
        "abundant_abs_half_shift" => abundant(abs_map(), abs_cert()?, ThetaFamily::half_shift())?,
        "abundant_abs_identity" => abundant(abs_map(), abs_cert()?, ThetaFamily::identity())?,
        "bracket_abs_pair" => {
            let f = field_from_key("unit_x")?;
            let g = field_from_key("abs_x1_vertical")?;
            let lambda = OperatorSet::hull_of_vectors(&[vec![0.0, -1.0], vec![0.0, 1.0]])?;
            let q = [0.0, 0.0];
            (bracket_curve(&f, &g, &q)?.into(), lie_bracket_certificate(&f, &g, &q, lambda, 0.5)?)
        }
        other => return Err(Error::UnknownCatalogKey(other.to_string())),
    })
}
