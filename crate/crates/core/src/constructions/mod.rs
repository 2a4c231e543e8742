//! End-to-end drivers for the three constructions.

pub mod audit;
pub mod data;
pub mod enriques;
pub mod pencil;
pub mod tower;

pub use audit::{AuditReport, AuditStep, StepStatus};
pub use enriques::{
    audit_construction3, build_construction3, construction3_data, enriques_weierstrass_map, Construction3,
    Construction3Data, Construction3Options,
};
pub use pencil::{
    build_construction1, fiberwise_multiples, specialization_rank, verify_positive_mw_rank, Construction1Bundle,
    Construction1Spec, MwRankVerdict,
};
pub use tower::{audit_construction2, build_construction2, build_construction2_default, Construction2, Construction2Tower};
