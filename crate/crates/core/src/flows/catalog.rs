//! Built-in vector fields, addressed by key from scenario files.

use serde::{Deserialize, Serialize};

use super::VectorField;
use crate::error::{Error, Result};
use crate::geometry::LinearMap;

pub const FIELD_KEYS: &[&str] = &[
    "unit_x",
    "unit_y",
    "abs_x1_vertical",
    "abs_x2_horizontal",
    "abs_1d",
    "identity_1d",
    "square_1d",
    "lin_a",
    "lin_b",
    "rotation",
    "pendulum",
    "sine_shear",
    "zero_2d",
];

/// A field in a scenario file: a catalog key, a matrix, or a constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldRef {
    Key(String),
    Linear { linear: Vec<Vec<f64>> },
    Constant { constant: Vec<f64> },
}

impl FieldRef {
    pub fn resolve(&self) -> Result<VectorField> {
        match self {
            FieldRef::Key(k) => field_from_key(k),
            FieldRef::Linear { linear } => linear_field(linear),
            FieldRef::Constant { constant } => Ok(constant_field(constant)),
        }
    }
}

pub fn constant_field(c: &[f64]) -> VectorField {
    let c = c.to_vec();
    VectorField::new(format!("constant{c:?}"), c.len(), 0.0, move |_| c.clone())
}

pub fn linear_field(rows: &[Vec<f64>]) -> Result<VectorField> {
    let a = LinearMap::from_rows(rows)?;
    if a.rows() != a.cols() {
        return Err(Error::Argument("a linear field needs a square matrix".into()));
    }
    let lip = a.matrix().clone().svd(false, false).singular_values.max();
    let n = a.rows();
    Ok(VectorField::new(format!("linear{:?}", a.to_rows()), n, lip, move |x| a.apply(x)))
}

pub fn field_from_key(key: &str) -> Result<VectorField> {
    let f = match key {
        "unit_x" => VectorField::new(key, 2, 0.0, |_| vec![1.0, 0.0]),
        "unit_y" => VectorField::new(key, 2, 0.0, |_| vec![0.0, 1.0]),
        "abs_x1_vertical" => VectorField::new(key, 2, 1.0, |x| vec![0.0, x[0].abs()]),
        "abs_x2_horizontal" => VectorField::new(key, 2, 1.0, |x| vec![x[1].abs(), 0.0]),
        "abs_1d" => VectorField::new(key, 1, 1.0, |x| vec![x[0].abs()]),
        "identity_1d" => VectorField::new(key, 1, 1.0, |x| vec![x[0]]),
        "square_1d" => VectorField::new(key, 1, 2.0, |x| vec![x[0] * x[0]])
            .with_domain(crate::mapping::BoxDomain::cube(1, 1.0))?,
        "lin_a" => linear_field(&[vec![0.0, 1.0], vec![0.0, 0.0]])?,
        "lin_b" => linear_field(&[vec![0.0, 0.0], vec![1.0, 0.0]])?,
        "rotation" => VectorField::new(key, 2, 1.0, |x| vec![-x[1], x[0]]),
        "pendulum" => VectorField::new(key, 2, 1.0, |x| vec![x[1], -x[0].sin()]),
        "sine_shear" => VectorField::new(key, 2, 1.0, |x| vec![0.0, x[0].sin()]),
        "zero_2d" => VectorField::new(key, 2, 0.0, |_| vec![0.0, 0.0]),
        _ => return Err(Error::UnknownCatalogKey(key.to_string())),
    };
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_key_resolves_and_passes_its_lipschitz_audit() {
        for key in FIELD_KEYS {
            let f = field_from_key(key).unwrap();
            let center = vec![0.1; f.dimension()];
            let audit = f.audit_lipschitz(&center, 0.5, 500, 3).unwrap();
            assert!(audit.passed, "{key}: {audit:?}");
        }
    }

    #[test]
    fn unknown_key_is_named() {
        match field_from_key("no_such_field") {
            Err(Error::UnknownCatalogKey(k)) => assert_eq!(k, "no_such_field"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn field_refs_parse_from_json() {
        let r: FieldRef = serde_json::from_str(r#""unit_x""#).unwrap();
        assert_eq!(r.resolve().unwrap().call(&[0.0, 0.0]), vec![1.0, 0.0]);
        let r: FieldRef = serde_json::from_str(r#"{"linear": [[0, 1], [-1, 0]]}"#).unwrap();
        assert_eq!(r.resolve().unwrap().call(&[1.0, 2.0]), vec![2.0, -1.0]);
        let r: FieldRef = serde_json::from_str(r#"{"constant": [3]}"#).unwrap();
        assert_eq!(r.resolve().unwrap().call(&[9.0]), vec![3.0]);
    }
}
