//! Genus-one curves: Weierstrass arithmetic, torsion certificates, plane
//! cubic group laws, alternative models and their reduction to Weierstrass form.

pub mod birational;
pub mod cubic;
pub mod models;
pub mod reduce;
pub mod torsion;
pub mod weierstrass;

pub use birational::{BirationalRecord, Curve, MapStep};
pub use cubic::{cubic_group_add, PlaneCubic};
pub use models::{
    biquadratic_branch_quartic, biquadratic_is_smooth, gram, qrt_step, quadric_pencil_quartic, vieta_involution, Biquadratic,
    GenusOneModel, QuadricIntersection, Quartic,
};
pub use reduce::{model_to_weierstrass, weierstrass_form};
pub use torsion::{certify_torsion, lutz_nagell_test, mazur_test, LutzNagellVerdict, TorsionVerdict};
pub use weierstrass::{ECPoint, WeierstrassCurve};
