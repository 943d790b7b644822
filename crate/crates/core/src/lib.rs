//! Nonsmooth differential calculus: quasi differential quotients, convex-cone
//! separation, and mollified estimators for Clarke Jacobians and set-valued
//! Lie brackets.

pub mod cones;
pub mod error;
pub mod flows;
pub mod geometry;
pub mod lp;
pub mod mapping;
pub mod nonsmooth;
pub mod qdq;
pub mod scenario;
pub mod separation;

pub use error::{Error, Result};
pub use geometry::{
    convex_hull_points, dist_to_operator_set, hausdorff_distance, GammaSet, LinearMap, Modulus, ModulusSample,
    OperatorSet,
};
