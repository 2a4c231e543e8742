//! Dense univariate polynomials over `F_p`, coefficients low to high.

use crate::algebra::field::{Field, Fp, Ring};

pub fn trim(mut a: Vec<Fp>) -> Vec<Fp> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

/// Degree, `None` for the zero polynomial.
pub fn degree(a: &[Fp]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn eval(a: &[Fp], x: Fp) -> Fp {
    a.iter().rev().fold(x.zero_like(), |acc, &c| acc * x + c)
}

/// Interpolating polynomial through `(x_i, y_i)` with distinct nodes (Newton form).
pub fn interpolate(xs: &[Fp], ys: &[Fp]) -> Vec<Fp> {
    let n = xs.len();
    if n == 0 {
        return vec![];
    }
    let zero = xs[0].zero_like();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
        }
    }
    let mut out = vec![zero; n];
    for k in (0..n).rev() {
        // out = out * (x - xs[k]) + dd[k]
        let mut next = vec![zero; n];
        for i in 0..n - 1 {
            next[i + 1] = next[i + 1] + out[i];
            next[i] = next[i] - out[i] * xs[k];
        }
        next[0] = next[0] + dd[k];
        out = next;
    }
    trim(out)
}

/// Quotient and remainder; `b` must be nonzero.
pub fn div_rem(a: &[Fp], b: &[Fp]) -> (Vec<Fp>, Vec<Fp>) {
    let db = degree(b).expect("nonzero divisor");
    let mut r = trim(a.to_vec());
    let Some(da) = degree(&r) else { return (vec![], vec![]) };
    if da < db {
        return (vec![], r);
    }
    let inv = b[db].inv().expect("nonzero leading coefficient");
    let mut q = vec![b[0].zero_like(); da - db + 1];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = r[dr] * inv;
        q[dr - db] = c;
        for i in 0..=db {
            r[dr - db + i] = r[dr - db + i] - c * b[i];
        }
        r = trim(r);
    }
    (trim(q), r)
}

/// Monic gcd; the zero polynomial when both inputs vanish.
pub fn gcd(a: &[Fp], b: &[Fp]) -> Vec<Fp> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = r;
    }
    match degree(&a) {
        None => a,
        Some(d) => {
            let inv = a[d].inv().expect("nonzero");
            a.into_iter().map(|c| c * inv).collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64], p: u64) -> Vec<Fp> {
        trim(c.iter().map(|&x| Fp::new(x, p)).collect())
    }

    #[test]
    fn interpolation_recovers_the_polynomial() {
        let p = 101;
        let f = v(&[3, -1, 0, 7], p);
        let xs: Vec<Fp> = (0..6).map(|i| Fp::new(i, p)).collect();
        let ys: Vec<Fp> = xs.iter().map(|&x| eval(&f, x)).collect();
        assert_eq!(interpolate(&xs, &ys), f);
    }

    #[test]
    fn gcd_and_division() {
        let p = 97;
        // (x - 1)(x + 2) and (x - 1)(x - 5)
        let a = v(&[-2, 1, 1], p);
        let b = v(&[5, -6, 1], p);
        assert_eq!(gcd(&a, &b), v(&[-1, 1], p));
        let (q, r) = div_rem(&a, &v(&[-1, 1], p));
        assert_eq!(q, v(&[2, 1], p));
        assert!(r.is_empty());
        assert_eq!(gcd(&v(&[1, 1], p), &v(&[2, 1], p)), v(&[1], p));
    }
}
