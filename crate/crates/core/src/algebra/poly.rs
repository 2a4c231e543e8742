//! Sparse multivariate polynomials over Q.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vector, so the
//! representation is canonical: two polynomials are equal iff their maps are.
//! The map order is lexicographic with variable 0 most significant.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::field::{format_rational, int, Rational, Ring};

pub type Exps = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exps, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exps: Exps, c: Rational) -> Self {
        let nvars = exps.len();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Poly { nvars, terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Exps, Rational)>>(nvars: usize, it: I) -> Self {
        let mut p = Poly::zero(nvars);
        for (e, c) in it {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_int_terms(nvars: usize, terms: &[(&[u32], i64)]) -> Self {
        Self::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), int(*c))))
    }

    fn add_term(&mut self, e: Exps, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.nvars])
    }

    /// Leading term in lex order.
    pub fn leading(&self) -> Option<(&Exps, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * int(e[i] as i64));
            }
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    /// Coefficients with respect to variable `i`: entry `k` multiplies `x_i^k`.
    /// The returned polynomials keep `nvars` but no longer involve `x_i`.
    pub fn coefficients_in(&self, i: usize) -> Vec<Poly> {
        let d = self.degree_in(i).unwrap_or(0) as usize;
        let mut out = vec![Poly::zero(self.nvars); d + 1];
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            let mut f = e.clone();
            f[i] = 0;
            out[k].add_term(f, c.clone());
        }
        out
    }

    /// Variables that occur with positive exponent.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&i| self.terms.keys().any(|e| e[i] > 0)).collect()
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars, "point length");
        self.eval_with(point, |c| c.clone(), Rational::zero())
    }

    /// Evaluates with values in an arbitrary ring, lifting coefficients via `lift`.
    pub fn eval_with<R: Ring>(&self, vals: &[R], lift: impl Fn(&Rational) -> R, zero: R) -> R {
        let mut powers: Vec<Vec<R>> = Vec::with_capacity(self.nvars);
        for (i, v) in vals.iter().enumerate().take(self.nvars) {
            let d = self.degree_in(i).unwrap_or(0) as usize;
            let mut row = Vec::with_capacity(d + 1);
            row.push(v.one_like());
            for k in 1..=d {
                let next = row[k - 1].clone() * v.clone();
                row.push(next);
            }
            powers.push(row);
        }
        let mut acc = zero;
        for (e, c) in &self.terms {
            let mut t = lift(c);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t * powers[i][k as usize].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Substitutes polynomials (all in a common ring of `m` variables) for the variables.
    pub fn compose(&self, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.nvars);
        let m = images.first().map(|p| p.nvars).unwrap_or(0);
        self.eval_with(images, |c| Poly::constant(m, c.clone()), Poly::zero(m))
    }

    /// Substitutes `value` for variable `i`, keeping the variable count.
    pub fn substitute(&self, i: usize, value: &Poly) -> Poly {
        let images: Vec<Poly> =
            (0..self.nvars).map(|j| if j == i { value.clone() } else { Poly::var(self.nvars, j) }).collect();
        self.compose(&images)
    }

    /// Substitutes constants for some variables.
    pub fn partial_eval(&self, assignments: &[(usize, Rational)]) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let mut c = c.clone();
            for (i, v) in assignments {
                let k = f[*i];
                if k > 0 {
                    c *= num_traits::pow(v.clone(), k as usize);
                    f[*i] = 0;
                }
            }
            out.add_term(f, c);
        }
        out
    }

    /// Re-indexes into a ring with `nvars` variables; old variable `i` becomes `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                f[map[i]] += k;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Drops variables not listed in `keep` (which must not occur), re-indexing the rest.
    pub fn restrict_vars(&self, keep: &[usize]) -> Poly {
        let mut out = Poly::zero(keep.len());
        for (e, c) in &self.terms {
            out.add_term(keep.iter().map(|&i| e[i]).collect(), c.clone());
        }
        out
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (ld, lc) = d.leading()?;
        let mut rem = self.clone();
        let mut q = Poly::zero(self.nvars);
        while let Some((le, lcoef)) = rem.leading() {
            if le.iter().zip(ld).any(|(a, b)| a < b) {
                return None;
            }
            let e: Exps = le.iter().zip(ld).map(|(a, b)| a - b).collect();
            let c = lcoef / lc;
            let t = Poly::monomial(e, c);
            rem = &rem - &(&t * d);
            q = &q + &t;
        }
        Some(q)
    }

    /// Scales to integer coefficients with gcd 1 and positive leading coefficient.
    pub fn primitive(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut l = BigInt::one();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(&(c.numer() * (&l / c.denom())));
        }
        let mut s = Rational::new(l, g);
        if self.leading().unwrap().1.is_negative() {
            s = -s;
        }
        self.scale(&s)
    }

    /// Makes the leading coefficient 1.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            if mono.is_empty() {
                s.push_str(&format_rational(&a));
            } else {
                if !a.is_one() {
                    s.push_str(&format_rational(&a));
                    s.push('*');
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        write!(f, "{}", self.display_with(&names))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        assert_eq!(self.nvars, o.nvars);
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Exps = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Rational::one())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl Ring for Poly {
    fn is_zero_elem(&self) -> bool {
        self.terms.is_empty()
    }
    fn zero_like(&self) -> Self {
        Poly::zero(self.nvars)
    }
    fn one_like(&self) -> Self {
        Poly::one(self.nvars)
    }
    fn scale_i64(&self, n: i64) -> Self {
        self.scale(&int(n))
    }
}

/// Builds a polynomial from a compact integer description, e.g.
/// `poly!(2; [1,0] => 3, [0,2] => -1)` for `3x - y^2`.
#[macro_export]
macro_rules! poly {
    ($n:expr; $([$($e:expr),*] => $c:expr),* $(,)?) => {
        $crate::algebra::Poly::from_terms($n, vec![$((vec![$($e as u32),*], $crate::algebra::int($c as i64))),*])
    };
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::rat;

    #[test]
    fn arithmetic_is_canonical() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let a = &(&x + &y) * &(&x - &y);
        let b = &x.pow(2) - &y.pow(2);
        assert_eq!(a, b);
        assert!((&a - &b).is_zero());
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        assert!(Poly::constant(3, int(5)).derivative(1).is_zero());
    }

    #[test]
    fn exact_division() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let f = &(&x + &y) * &(&x.pow(2) - &y);
        assert_eq!(f.div_exact(&(&x + &y)).unwrap(), &x.pow(2) - &y);
        assert!(f.div_exact(&(&x - &y)).is_none());
    }

    #[test]
    fn compose_and_partial_eval() {
        let f = poly!(2; [2,0] => 1, [0,1] => -3);
        let g = f.compose(&[Poly::var(1, 0), Poly::constant(1, int(2))]);
        assert_eq!(g, poly!(1; [2] => 1, [0] => -6));
        let h = f.partial_eval(&[(1, rat(1, 3))]);
        assert_eq!(h, poly!(2; [2,0] => 1, [0,0] => -1));
    }

    #[test]
    fn primitive_normalizes() {
        let f = Poly::from_terms(1, vec![(vec![1], rat(-2, 3)), (vec![0], rat(4, 9))]);
        assert_eq!(f.primitive(), poly!(1; [1] => 3, [0] => -2));
    }
}
