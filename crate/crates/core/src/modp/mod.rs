//! Finite-field verification: reduction mod p, exhaustive enumeration in
//! Cox coordinates, Jacobian smoothness certificates and the
//! proper-intersection audit.

pub mod enumerate;
pub mod form;
pub mod intersection;
pub mod reduce;
pub mod smooth;
pub mod unipoly;

pub use enumerate::{enumerate_points, projective_points, AmbientPoints};
pub use form::FpForm;
pub use intersection::{
    line_certificate, proper_intersection_audit, BranchCurve, DiscriminantCurve, FormCurve, PlaneEvaluator,
    CERTIFICATE_PRIME,
};
pub use reduce::{rank_mod_p, reduce_space, ReducedDefining, ReducedSpace};
pub use smooth::{
    count_points, smoothness_certificate, smoothness_certificate_with_budget, CertificateStatus, CountReport,
    IntersectionVerdict, LineCertificate, LocusCount, SmoothnessCertificate, DEFAULT_BUDGET,
};

/// Default prime ladder.
pub const DEFAULT_PRIMES: [u64; 4] = [5, 7, 11, 13];
