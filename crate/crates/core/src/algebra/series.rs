//! Truncated power series in one variable over Q, and local branches of
//! affine curves at smooth points.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use super::field::{Field, Rational, Ring};
use super::linalg;
use super::poly::Poly;
use crate::error::{Error, Result};

/// `Σ c[k] s^k + O(s^prec)` where `prec = c.len()`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    c: Vec<Rational>,
}

impl Series {
    pub fn zero(prec: usize) -> Self {
        Series { c: vec![Rational::zero(); prec] }
    }

    pub fn constant(prec: usize, v: Rational) -> Self {
        let mut s = Self::zero(prec);
        if prec > 0 {
            s.c[0] = v;
        }
        s
    }

    /// `a + s`.
    pub fn linear(prec: usize, a: Rational) -> Self {
        let mut s = Self::constant(prec, a);
        if prec > 1 {
            s.c[1] = super::field::int(1);
        }
        s
    }

    pub fn prec(&self) -> usize {
        self.c.len()
    }

    pub fn coeff(&self, k: usize) -> &Rational {
        &self.c[k]
    }

    /// Index of the first nonzero coefficient, `None` if zero to this precision.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Series { c: self.c.iter().map(|x| x * k).collect() }
    }
}

impl Add for Series {
    type Output = Series;
    fn add(self, o: Series) -> Series {
        Series { c: self.c.into_iter().zip(o.c).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, o: Series) -> Series {
        Series { c: self.c.into_iter().zip(o.c).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series { c: self.c.into_iter().map(|a| -a).collect() }
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, o: Series) -> Series {
        let n = self.c.len().min(o.c.len());
        let mut c = vec![Rational::zero(); n];
        for (i, a) in self.c.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate().take(n - i) {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        Series { c }
    }
}

impl Ring for Series {
    fn is_zero_elem(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }
    fn zero_like(&self) -> Self {
        Series::zero(self.prec())
    }
    fn one_like(&self) -> Self {
        Series::constant(self.prec(), super::field::int(1))
    }
    fn scale_i64(&self, n: i64) -> Self {
        self.scale(&super::field::int(n))
    }
}

pub fn eval_series(p: &Poly, vals: &[Series]) -> Series {
    let prec = vals[0].prec();
    p.eval_with(vals, |c| Series::constant(prec, c.clone()), Series::zero(prec))
}

/// Power-series parametrization of the affine curve `eqs = 0` through
/// `point`, accurate to `O(s^prec)`.
///
/// The curve must be smooth of dimension one at `point`. One coordinate
/// serves as the parameter (`x_k = point_k + s`) and the others are solved
/// by a chord iteration, each round fixing one more coefficient.
pub fn local_branch(eqs: &[Poly], point: &[Rational], prec: usize) -> Result<Vec<Series>> {
    let n = point.len();
    if n == 0 || eqs.iter().any(|e| e.nvars() != n) {
        return Err(Error::InvalidInput("branch equations and point disagree in length".into()));
    }
    for e in eqs {
        if !e.eval(point).is_zero() {
            return Err(Error::NotOnCurve);
        }
    }
    if n == 1 {
        return Err(Error::InvalidInput("a curve needs at least two affine coordinates".into()));
    }
    let jac: Vec<Vec<Rational>> =
        eqs.iter().map(|e| (0..n).map(|j| e.derivative(j).eval(point)).collect()).collect();
    if linalg::rank(&jac) != n - 1 {
        return Err(Error::SingularPoint);
    }
    let (param, rows) = choose_parameter(&jac, n).ok_or(Error::SingularPoint)?;
    let others: Vec<usize> = (0..n).filter(|&j| j != param).collect();
    let a: Vec<Vec<Rational>> = rows.iter().map(|&r| others.iter().map(|&j| jac[r][j].clone()).collect()).collect();
    let ainv = invert(&a).ok_or(Error::SingularPoint)?;

    let mut x: Vec<Series> = (0..n)
        .map(|j| if j == param { Series::linear(prec, point[j].clone()) } else { Series::constant(prec, point[j].clone()) })
        .collect();
    for _ in 0..prec {
        let f: Vec<Series> = rows.iter().map(|&r| eval_series(&eqs[r], &x)).collect();
        if f.iter().all(|s| s.is_zero()) {
            break;
        }
        for (oi, &j) in others.iter().enumerate() {
            let mut delta = Series::zero(prec);
            for (ri, fr) in f.iter().enumerate() {
                if !ainv[oi][ri].is_zero() {
                    delta = delta + fr.scale(&ainv[oi][ri]);
                }
            }
            x[j] = x[j].clone() - delta;
        }
    }
    for e in eqs {
        if !eval_series(e, &x).is_zero() {
            return Err(Error::SingularPoint);
        }
    }
    Ok(x)
}

fn choose_parameter(jac: &[Vec<Rational>], n: usize) -> Option<(usize, Vec<usize>)> {
    for k in (0..n).rev() {
        let mut rows: Vec<usize> = vec![];
        let mut chosen: Vec<Vec<Rational>> = vec![];
        for (r, row) in jac.iter().enumerate() {
            let sub: Vec<Rational> = (0..n).filter(|&j| j != k).map(|j| row[j].clone()).collect();
            chosen.push(sub);
            if linalg::rank(&chosen) > rows.len() {
                rows.push(r);
            } else {
                chosen.pop();
            }
        }
        if rows.len() == n - 1 {
            return Some((k, rows));
        }
    }
    None
}

fn invert<K: Field>(a: &[Vec<K>]) -> Option<Vec<Vec<K>>> {
    let n = a.len();
    let one = a[0][0].one_like();
    let zero = one.zero_like();
    let mut aug: Vec<Vec<K>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut r = r.clone();
            r.extend((0..n).map(|j| if i == j { one.clone() } else { zero.clone() }));
            r
        })
        .collect();
    let piv = linalg::rref(&mut aug);
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}
