//! Certificates of non-torsion for rational points.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::weierstrass::{ECPoint, WeierstrassCurve};
use crate::algebra::field::Rational;
use crate::error::{Error, Result};

/// Largest order of a rational torsion point over Q.
pub const MAZUR_BOUND: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LutzNagellVerdict {
    NonTorsion,
    CannotConclude,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict", content = "order")]
pub enum TorsionVerdict {
    NonTorsion,
    TorsionOfOrder(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateMethod {
    LutzNagell,
    Mazur,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionCertificate {
    pub verdict: TorsionVerdict,
    pub method: CertificateMethod,
}

/// Lutz–Nagell on an integral model: a torsion point has integral
/// coordinates and `y = 0` or `y^2 | 4A^3 + 27B^2`.
pub fn lutz_nagell_test(e: &WeierstrassCurve, p: &ECPoint) -> Result<LutzNagellVerdict> {
    if !e.is_integral() {
        return Err(Error::InvalidModel("Lutz-Nagell needs integral A and B".into()));
    }
    if !e.contains(p) {
        return Err(Error::NotOnCurve);
    }
    let ECPoint::Affine(x, y) = p else {
        return Ok(LutzNagellVerdict::CannotConclude);
    };
    if !x.is_integer() || !y.is_integer() {
        return Ok(LutzNagellVerdict::NonTorsion);
    }
    if y.is_zero() {
        return Ok(LutzNagellVerdict::CannotConclude);
    }
    let d = e.discriminant().to_integer();
    let y2 = y.to_integer() * y.to_integer();
    if (d % y2).is_zero() {
        Ok(LutzNagellVerdict::CannotConclude)
    } else {
        Ok(LutzNagellVerdict::NonTorsion)
    }
}

/// Computes `kP` for `k = 1..=12`; the first `k` hitting infinity is the order.
pub fn mazur_test(e: &WeierstrassCurve, p: &ECPoint) -> Result<TorsionVerdict> {
    let mut q = p.clone();
    for k in 1..=MAZUR_BOUND {
        if q.is_infinity() {
            return Ok(TorsionVerdict::TorsionOfOrder(k));
        }
        q = e.add(&q, p)?;
    }
    Ok(TorsionVerdict::NonTorsion)
}

/// Lutz–Nagell on an integral model first, falling back to Mazur's bound.
pub fn certify_torsion(e: &WeierstrassCurve, p: &ECPoint) -> Result<TorsionCertificate> {
    if !e.contains(p) {
        return Err(Error::NotOnCurve);
    }
    let u = Rational::from_integer(e.integralizing_factor());
    let ei = e.rescale(&u)?;
    let pi = WeierstrassCurve::rescale_point(&u, p);
    if lutz_nagell_test(&ei, &pi)? == LutzNagellVerdict::NonTorsion {
        return Ok(TorsionCertificate { verdict: TorsionVerdict::NonTorsion, method: CertificateMethod::LutzNagell });
    }
    Ok(TorsionCertificate { verdict: mazur_test(e, p)?, method: CertificateMethod::Mazur })
}

/// Denominator of the x-coordinate; it grows without bound along a non-torsion orbit.
pub fn x_denominator(p: &ECPoint) -> BigInt {
    match p {
        ECPoint::Infinity => BigInt::zero(),
        ECPoint::Affine(x, _) => x.denom().abs(),
    }
}

pub fn is_integral_point(p: &ECPoint) -> bool {
    match p {
        ECPoint::Infinity => false,
        ECPoint::Affine(x, y) => x.denom().is_one() && y.denom().is_one(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{int, rat};

    #[test]
    fn lutz_nagell_detects_non_torsion() {
        let e = WeierstrassCurve::from_ints(-52, 144).unwrap();
        let p = ECPoint::from_ints(0, 12);
        // 144 does not divide 2560 in absolute value
        assert_eq!(lutz_nagell_test(&e, &p).unwrap(), LutzNagellVerdict::NonTorsion);
        let c = certify_torsion(&e, &p).unwrap();
        assert_eq!(c.verdict, TorsionVerdict::NonTorsion);
        assert_eq!(c.method, CertificateMethod::LutzNagell);
    }

    #[test]
    fn torsion_points_found_by_mazur() {
        let e = WeierstrassCurve::from_ints(0, 1).unwrap();
        assert_eq!(mazur_test(&e, &ECPoint::from_ints(0, 1)).unwrap(), TorsionVerdict::TorsionOfOrder(3));
        assert_eq!(mazur_test(&e, &ECPoint::from_ints(-1, 0)).unwrap(), TorsionVerdict::TorsionOfOrder(2));
        assert_eq!(mazur_test(&e, &ECPoint::from_ints(2, 3)).unwrap(), TorsionVerdict::TorsionOfOrder(6));
        assert_eq!(mazur_test(&e, &ECPoint::Infinity).unwrap(), TorsionVerdict::TorsionOfOrder(1));
        let c = certify_torsion(&e, &ECPoint::from_ints(2, 3)).unwrap();
        assert_eq!(c.verdict, TorsionVerdict::TorsionOfOrder(6));
    }

    #[test]
    fn non_integral_model_is_rejected_by_lutz_nagell_only() {
        let e = WeierstrassCurve::new(rat(-52, 16), rat(144, 64)).unwrap();
        let p = ECPoint::affine(int(0), rat(12, 8));
        assert!(lutz_nagell_test(&e, &p).is_err());
        assert_eq!(certify_torsion(&e, &p).unwrap().verdict, TorsionVerdict::NonTorsion);
    }

    #[test]
    fn rational_point_is_non_torsion() {
        let e = WeierstrassCurve::from_ints(-52, 144).unwrap();
        let q = ECPoint::affine(rat(169, 36), rat(-395, 216));
        assert_eq!(lutz_nagell_test(&e, &q).unwrap(), LutzNagellVerdict::NonTorsion);
        assert!(!is_integral_point(&q));
        assert_eq!(x_denominator(&q), BigInt::from(36));
    }
}
