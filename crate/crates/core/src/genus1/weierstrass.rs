//! Short Weierstrass curves `y^2 = x^3 + A x + B` over Q and their group law.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use crate::algebra::field::{format_rational, int, parse_rational, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeierstrassCurve {
    #[serde(with = "crate::algebra::field::rational_str")]
    a: Rational,
    #[serde(with = "crate::algebra::field::rational_str")]
    b: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ECPoint {
    Infinity,
    Affine(Rational, Rational),
}

impl ECPoint {
    pub fn affine(x: Rational, y: Rational) -> Self {
        ECPoint::Affine(x, y)
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        ECPoint::Affine(int(x), int(y))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ECPoint::Infinity)
    }

    /// Projective coordinates `(X : Y : Z)`.
    pub fn to_projective(&self) -> [Rational; 3] {
        match self {
            ECPoint::Infinity => [Rational::zero(), Rational::one(), Rational::zero()],
            ECPoint::Affine(x, y) => [x.clone(), y.clone(), Rational::one()],
        }
    }

    /// Naive height bound: the largest numerator or denominator size in bits.
    pub fn height_bits(&self) -> u64 {
        match self {
            ECPoint::Infinity => 0,
            ECPoint::Affine(x, y) => [x.numer(), x.denom(), y.numer(), y.denom()].iter().map(|v| v.bits()).max().unwrap_or(0),
        }
    }
}

impl fmt::Display for ECPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ECPoint::Infinity => write!(f, "infinity"),
            ECPoint::Affine(x, y) => write!(f, "({}, {})", format_rational(x), format_rational(y)),
        }
    }
}

impl Serialize for ECPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ECPoint::Infinity => s.serialize_str("infinity"),
            ECPoint::Affine(x, y) => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("x", &format_rational(x))?;
                m.serialize_entry("y", &format_rational(y))?;
                m.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for ECPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Tag(String),
            Pt { x: String, y: String },
        }
        match Repr::deserialize(d)? {
            Repr::Tag(t) if t == "infinity" => Ok(ECPoint::Infinity),
            Repr::Tag(t) => Err(de::Error::custom(format!("unexpected point tag {t:?}"))),
            Repr::Pt { x, y } => {
                let x = parse_rational(&x).map_err(de::Error::custom)?;
                let y = parse_rational(&y).map_err(de::Error::custom)?;
                Ok(ECPoint::Affine(x, y))
            }
        }
    }
}

impl WeierstrassCurve {
    /// Fails with `SingularModel` when `4A^3 + 27B^2 = 0`.
    pub fn new(a: Rational, b: Rational) -> Result<Self> {
        let c = WeierstrassCurve { a, b };
        if c.discriminant().is_zero() {
            return Err(Error::SingularModel("4A^3 + 27B^2 = 0".into()));
        }
        Ok(c)
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self> {
        Self::new(int(a), int(b))
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// `4A^3 + 27B^2`.
    pub fn discriminant(&self) -> Rational {
        int(4) * &self.a * &self.a * &self.a + int(27) * &self.b * &self.b
    }

    pub fn j_invariant(&self) -> Rational {
        int(1728) * int(4) * &self.a * &self.a * &self.a / self.discriminant()
    }

    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    pub fn contains(&self, p: &ECPoint) -> bool {
        match p {
            ECPoint::Infinity => true,
            ECPoint::Affine(x, y) => y * y == x * x * x + &self.a * x + &self.b,
        }
    }

    fn check(&self, p: &ECPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::NotOnCurve)
        }
    }

    pub fn neg(&self, p: &ECPoint) -> Result<ECPoint> {
        self.check(p)?;
        Ok(match p {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine(x, y) => ECPoint::Affine(x.clone(), -y),
        })
    }

    pub fn add(&self, p: &ECPoint, q: &ECPoint) -> Result<ECPoint> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    fn add_unchecked(&self, p: &ECPoint, q: &ECPoint) -> ECPoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (ECPoint::Infinity, _) => return q.clone(),
            (_, ECPoint::Infinity) => return p.clone(),
            (ECPoint::Affine(a, b), ECPoint::Affine(c, d)) => (a, b, c, d),
        };
        let lambda = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return ECPoint::Infinity;
            }
            (int(3) * x1 * x1 + &self.a) / (int(2) * y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &lambda * &lambda - x1 - x2;
        let y3 = &lambda * (x1 - &x3) - y1;
        ECPoint::Affine(x3, y3)
    }

    pub fn sub(&self, p: &ECPoint, q: &ECPoint) -> Result<ECPoint> {
        let nq = self.neg(q)?;
        self.add(p, &nq)
    }

    /// `n P` by double-and-add; negative `n` multiplies `-P`.
    pub fn mul(&self, n: i64, p: &ECPoint) -> Result<ECPoint> {
        self.check(p)?;
        let mut base = if n < 0 { self.neg(p)? } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = ECPoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.add_unchecked(&base, &base);
            }
        }
        Ok(acc)
    }

    /// `(u^4 A, u^6 B)` together with the point map `(x, y) -> (u^2 x, u^3 y)`.
    pub fn rescale(&self, u: &Rational) -> Result<WeierstrassCurve> {
        if u.is_zero() {
            return Err(Error::InvalidInput("zero scaling factor".into()));
        }
        WeierstrassCurve::new(&self.a * num_traits::pow(u.clone(), 4), &self.b * num_traits::pow(u.clone(), 6))
    }

    pub fn rescale_point(u: &Rational, p: &ECPoint) -> ECPoint {
        match p {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine(x, y) => ECPoint::Affine(x * u * u, y * u * u * u),
        }
    }

    /// Smallest positive integer `u` making `(u^4 A, u^6 B)` integral.
    pub fn integralizing_factor(&self) -> BigInt {
        let mut u = BigInt::one();
        loop {
            let a = &self.a * big_pow(&u, 4);
            let b = &self.b * big_pow(&u, 6);
            if a.is_integer() && b.is_integer() {
                return u;
            }
            // multiply by the first prime dividing an offending denominator
            let d = if a.is_integer() { b.denom().clone() } else { a.denom().clone() };
            u *= smallest_prime_factor(&d);
        }
    }

    /// Integral model with no prime `p` such that `p^4 | A` and `p^6 | B`,
    /// checked by trial division up to `bound`. Returns the model and the
    /// factor `u` with `A' = u^4 A`, `B' = u^6 B`.
    pub fn minimal_integral(&self, bound: u64) -> (WeierstrassCurve, Rational) {
        let u0 = Rational::from_integer(self.integralizing_factor());
        let c = self.rescale(&u0).expect("rescaling keeps the curve nonsingular");
        let (a, b) = (c.a.to_integer(), c.b.to_integer());
        let mut u = u0;
        let mut a = a;
        let mut b = b;
        let mut g = if a.is_zero() { b.abs() } else if b.is_zero() { a.abs() } else { a.gcd(&b) };
        let mut p = BigInt::from(2);
        while p <= BigInt::from(bound) && g > BigInt::one() {
            let p4 = big_pow(&p, 4);
            let p6 = big_pow(&p, 6);
            while (&a % &p4).is_zero() && (&b % &p6).is_zero() {
                a /= &p4;
                b /= &p6;
                u /= Rational::from_integer(p.clone());
            }
            while (&g % &p).is_zero() {
                g /= &p;
            }
            p += 1;
        }
        let c = WeierstrassCurve::new(Rational::from_integer(a), Rational::from_integer(b))
            .expect("minimizing keeps the curve nonsingular");
        (c, u)
    }

    /// True iff the curves are isomorphic over Q, i.e. `A' = u^4 A` and
    /// `B' = u^6 B` for some rational `u`.
    pub fn isomorphic_to(&self, other: &WeierstrassCurve) -> bool {
        if self.j_invariant() != other.j_invariant() {
            return false;
        }
        match (self.a.is_zero(), self.b.is_zero()) {
            (false, false) => {
                // u^2 = (B'/B) / (A'/A)
                let r = (&other.b / &self.b) / (&other.a / &self.a);
                rational_sqrt(&r).is_some_and(|u| num_traits::pow(u.clone() * u, 2) == &other.a / &self.a)
            }
            (true, false) => rational_root(&(&other.b / &self.b), 6).is_some(),
            (false, true) => rational_root(&(&other.a / &self.a), 4).is_some(),
            (true, true) => unreachable!("nonsingular curve"),
        }
    }
}

impl fmt::Display for WeierstrassCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + ({})x + ({})", format_rational(&self.a), format_rational(&self.b))
    }
}

fn big_pow(b: &BigInt, e: u32) -> BigInt {
    num_traits::pow(b.clone(), e as usize)
}

fn smallest_prime_factor(n: &BigInt) -> BigInt {
    let n = n.abs();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            return p;
        }
        p += 1;
    }
    n
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    rational_root(r, 2)
}

fn rational_root(r: &Rational, k: u32) -> Option<Rational> {
    if r.is_negative() && k % 2 == 0 {
        return None;
    }
    let n = r.numer().abs().nth_root(k);
    let d = r.denom().nth_root(k);
    let cand = Rational::new(if r.is_negative() { -n } else { n }, d);
    (num_traits::pow(cand.clone(), k as usize) == *r).then_some(cand)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::rat;

    fn e() -> WeierstrassCurve {
        WeierstrassCurve::from_ints(-52, 144).unwrap()
    }

    #[test]
    fn identity_and_inverse() {
        let p = ECPoint::from_ints(0, 12);
        assert_eq!(e().add(&p, &ECPoint::Infinity).unwrap(), p);
        assert_eq!(e().add(&p, &ECPoint::from_ints(0, -12)).unwrap(), ECPoint::Infinity);
    }

    #[test]
    fn duplication() {
        let p = ECPoint::from_ints(0, 12);
        let d = ECPoint::affine(rat(169, 36), rat(-395, 216));
        assert_eq!(e().add(&p, &p).unwrap(), d);
        assert_eq!(e().mul(2, &p).unwrap(), d);
        assert_eq!(e().mul(1, &p).unwrap(), p);
    }

    #[test]
    fn order_three_point() {
        let c = WeierstrassCurve::from_ints(0, 1).unwrap();
        assert_eq!(c.mul(3, &ECPoint::from_ints(0, 1)).unwrap(), ECPoint::Infinity);
    }

    #[test]
    fn off_curve_rejected() {
        assert_eq!(e().add(&ECPoint::from_ints(1, 1), &ECPoint::Infinity), Err(Error::NotOnCurve));
    }

    #[test]
    fn singular_curve_rejected() {
        assert!(WeierstrassCurve::from_ints(-3, 2).is_err());
    }

    #[test]
    fn discriminant_value() {
        assert_eq!(e().discriminant(), int(-2560));
    }

    #[test]
    fn serde_points() {
        let p = ECPoint::affine(rat(169, 36), rat(-395, 216));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"x":"169/36","y":"-395/216"}"#);
        assert_eq!(serde_json::from_str::<ECPoint>(&s).unwrap(), p);
        assert_eq!(serde_json::to_string(&ECPoint::Infinity).unwrap(), r#""infinity""#);
        assert_eq!(serde_json::from_str::<ECPoint>(r#""infinity""#).unwrap(), ECPoint::Infinity);
    }

    #[test]
    fn minimal_model_and_isomorphism() {
        let c = WeierstrassCurve::new(rat(-52, 16), rat(144, 64)).unwrap();
        let (m, _) = c.minimal_integral(1000);
        assert_eq!(m, e());
        assert!(c.isomorphic_to(&e()));
        // (A, -B) is the twist by -1, not isomorphic over Q
        assert!(!e().isomorphic_to(&WeierstrassCurve::from_ints(-52, -144).unwrap()));
        assert!(e().isomorphic_to(&e().rescale(&rat(2, 3)).unwrap()));
    }
}
