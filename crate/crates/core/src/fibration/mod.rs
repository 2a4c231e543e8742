//! Fibered total spaces, their fibers as genus-one curves, discriminant
//! and branch loci, and the salient ramification test.

pub mod critical;
pub mod degeneracy;
pub mod space;

pub use critical::{
    discriminant_form, multisection_branch_form, projection_discriminant, salient_check, salient_check_multisection,
    Multisection, SalientVerdict,
};
pub use degeneracy::{fiber_quadric_pencil, DegeneracyData};
pub use space::{degeneracy_membership, fiber_model_at, minors_of, Defining, FiberCurve, FiberedSpace, SpaceJson};
