//! Shared geometric primitives: linear maps, compact operator sets, direction
//! sets, moduli, hulls and seeded sampling.

mod gamma;
mod hull;
mod linear_map;
pub mod min_norm;
mod modulus;
mod operator_set;
pub mod sampling;

pub use gamma::GammaSet;
pub use hull::convex_hull_points;
pub use linear_map::LinearMap;
pub use modulus::{check_samples, Modulus, ModulusSample};
pub use operator_set::{dist_to_operator_set, hausdorff_distance, OperatorSet, ZERO_DISTANCE};

/// Default tolerances. Equality comparisons use [`EQ_TOL`], verdicts [`VERDICT_TOL`].
pub const EQ_TOL: f64 = 1e-10;
pub const VERDICT_TOL: f64 = 1e-8;
