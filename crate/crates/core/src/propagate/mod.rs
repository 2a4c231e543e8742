//! Rational points by translation along fibers.

pub mod datum;
pub mod density;
pub mod stream;

pub use datum::{
    bt_orbit, bt_translate, certify_nontorsion, pairwise_distinct, translation_datum, Backend, FiberPoint, Translation,
    TranslationDatum,
};
pub use density::{density_witness, vanishing_forms, DensityWitness};
pub use stream::{
    from_json_lines, generate_points, multisection_conjugate, naive_height, points_of, to_json_lines, PointRecord,
    PropagateConfig, SkipReport, StreamItem, TranslationSource, UnmappedRecord,
};
