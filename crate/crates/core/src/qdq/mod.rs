//! Certificates `(x̄, ȳ, Γ, Λ, δ*, ρ, δ ↦ (L_δ, h_δ))`, their sampled
//! verification, and the constructions that produce them.

mod absvalue;
mod abundant;
mod bracket;
mod calculus;
mod certificate;
mod curve;
mod verify;

pub use absvalue::{
    absvalue_certificate, absvalue_qdq, delta_independent_certificate, singleton_qdq_check, singleton_qdq_report,
    AbsValuePair, SingletonCheck,
};
pub use abundant::{abundant_transfer, audit_abundance, AbundantTarget, ThetaFamily, THETA_KEYS};
pub use bracket::{bracket_curve, lie_bracket_certificate};
pub use calculus::{
    combine_certificates, compose_certificates, composed_map, linear_combination_map, product_map, stacked_map,
    CombineKind,
};
pub use certificate::{default_delta_grid, CertificateRecord, Family, QdqCertificate, SetValuedMap, Target};
pub use curve::{
    curve_certificate, curve_qdq, falsify_curve_qdq, falsify_curve_qdq_with_gap, minimal_curve_qdq,
    one_sided_derivatives, CurveConstants, CurveData, CurvePair, CurveWitness, CAUCHY_TOL, CLUSTER_GAP,
};
pub use verify::{verify_certificate, Check, DeltaSummary, VerificationReport, VerifyConfig, Violation};

#[cfg(test)]
mod tests;
