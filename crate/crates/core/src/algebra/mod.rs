//! Exact arithmetic: rationals, prime fields, polynomials, resultants,
//! discriminants, power series and multigraded spaces.

pub mod binary;
pub mod field;
pub mod form;
pub mod linalg;
pub mod poly;
pub mod resultant;
pub mod series;
pub mod space;
pub mod unipoly;

pub use binary::{disc_binary_form, vieta_other_root, BinaryForm};
pub use field::{format_rational, int, is_prime, parse_rational, rat, Field, Fp, Rational, Ring};
pub use form::MultiForm;
pub use poly::Poly;
pub use resultant::{resultant, ternary_cubic_discriminant, ternary_quadrics_resultant};
pub use space::GradedSpace;
pub use unipoly::{is_separable, univariate_gcd, UniPoly};
