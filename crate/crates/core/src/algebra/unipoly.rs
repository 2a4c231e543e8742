//! Dense univariate polynomials over Q.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::{format_rational, int, Rational, Ring};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Coefficients are stored low degree first; the leading coefficient is
/// nonzero unless the polynomial is zero (empty vector).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| int(v)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|v| v * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * int(k as i64)).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading().recip())
    }

    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.coeffs.len() - 1;
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let mut q = vec![Rational::zero(); rem.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        rem.truncate(dd);
        (UniPoly::new(q), UniPoly::new(rem))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = UniPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `self(g(t))`.
    pub fn compose(&self, g: &UniPoly) -> UniPoly {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &UniPoly::constant(c.clone());
        }
        acc
    }

    /// Scaled to integer coefficients with content 1 and positive leading coefficient.
    pub fn primitive(&self) -> Self {
        UniPoly::from_poly(&self.to_poly().primitive(), 0).unwrap()
    }

    pub fn to_poly(&self) -> Poly {
        Poly::from_terms(1, self.coeffs.iter().enumerate().map(|(k, c)| (vec![k as u32], c.clone())))
    }

    /// Reads a polynomial in which only variable `var` occurs.
    pub fn from_poly(p: &Poly, var: usize) -> Result<Self> {
        let mut coeffs = vec![];
        for (e, c) in p.terms() {
            if e.iter().enumerate().any(|(i, &k)| i != var && k > 0) {
                return Err(Error::InvalidInput("polynomial is not univariate".into()));
            }
            let k = e[var] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::zero());
            }
            coeffs[k] = c.clone();
        }
        Ok(Self::new(coeffs))
    }

    /// Embeds as a polynomial in variable `var` of an `nvars`-variable ring.
    pub fn to_poly_in(&self, nvars: usize, var: usize) -> Poly {
        Poly::from_terms(
            nvars,
            self.coeffs.iter().enumerate().map(|(k, c)| {
                let mut e = vec![0; nvars];
                e[var] = k as u32;
                (e, c.clone())
            }),
        )
    }

    /// Rational roots, each listed once.
    pub fn rational_roots(&self) -> Vec<Rational> {
        let mut roots = vec![];
        if self.is_zero() {
            return roots;
        }
        let mut p = self.squarefree_part();
        while p.coeff(0).is_zero() && !p.is_zero() && p.degree() > Some(0) {
            roots.push(Rational::zero());
            p = p.div_rem(&UniPoly::x()).0;
        }
        if p.degree().unwrap_or(0) == 0 {
            return roots;
        }
        let prim = p.primitive();
        let a0 = prim.coeff(0).numer().abs();
        let an = prim.leading().numer().abs();
        let (Some(ds0), Some(dsn)) = (small_divisors(&a0), small_divisors(&an)) else {
            return roots;
        };
        for num in &ds0 {
            for den in &dsn {
                for sign in [1, -1] {
                    let r = Rational::new(num * sign, den.clone());
                    if prim.eval(&r).is_zero() && !roots.contains(&r) {
                        roots.push(r);
                    }
                }
            }
        }
        roots.sort();
        roots
    }

    pub fn squarefree_part(&self) -> UniPoly {
        if self.is_constant() {
            return self.clone();
        }
        let g = univariate_gcd(self, &self.derivative());
        self.div_rem(&g).0
    }

    pub fn display_var(&self, var: &str) -> String {
        self.to_poly().display_with(&[var.to_string()])
    }
}

fn small_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = u64::try_from(n).ok()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut out = vec![];
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
        if d > 1_000_000 {
            return None;
        }
    }
    Some(out)
}

/// Monic gcd; zero if both inputs are zero.
pub fn univariate_gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let r = a.div_rem(&b).1;
        // keep coefficient growth in check
        a = b;
        b = if r.is_zero() { r } else { r.primitive() };
    }
    a.monic()
}

/// True iff `gcd(p, p')` is constant.
pub fn is_separable(p: &UniPoly) -> Result<bool> {
    if p.is_zero() {
        return Err(Error::InvalidInput("zero polynomial".into()));
    }
    Ok(univariate_gcd(p, &p.derivative()).is_constant())
}

/// Lagrange interpolation through distinct nodes.
pub fn interpolate(nodes: &[Rational], values: &[Rational]) -> UniPoly {
    assert_eq!(nodes.len(), values.len());
    let mut acc = UniPoly::zero();
    for (i, (xi, yi)) in nodes.iter().zip(values).enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = UniPoly::one();
        let mut denom = Rational::one();
        for (j, xj) in nodes.iter().enumerate() {
            if i != j {
                basis = &basis * &UniPoly::new(vec![-xj.clone(), Rational::one()]);
                denom *= xi - xj;
            }
        }
        acc = &acc + &basis.scale(&(yi / denom));
    }
    acc
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format_rational(c),
                1 => format!("{}*t", format_rational(c)),
                _ => format!("{}*t^{}", format_rational(c), k),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<'a> Add<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn add(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn sub(self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a UniPoly> for &'a UniPoly {
    type Output = UniPoly;
    fn mul(self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        UniPoly::new(c)
    }
}

impl Add for UniPoly {
    type Output = UniPoly;
    fn add(self, o: UniPoly) -> UniPoly {
        &self + &o
    }
}

impl Sub for UniPoly {
    type Output = UniPoly;
    fn sub(self, o: UniPoly) -> UniPoly {
        &self - &o
    }
}

impl Mul for UniPoly {
    type Output = UniPoly;
    fn mul(self, o: UniPoly) -> UniPoly {
        &self * &o
    }
}

impl Neg for UniPoly {
    type Output = UniPoly;
    fn neg(self) -> UniPoly {
        self.scale(&-Rational::one())
    }
}

impl Ring for UniPoly {
    fn is_zero_elem(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn zero_like(&self) -> Self {
        UniPoly::zero()
    }
    fn one_like(&self) -> Self {
        UniPoly::one()
    }
    fn scale_i64(&self, n: i64) -> Self {
        self.scale(&int(n))
    }
}

/// Least common multiple of the denominators.
pub fn lcm_of_denominators(cs: &[Rational]) -> BigInt {
    cs.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()))
}
