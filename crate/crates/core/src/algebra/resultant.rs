//! Sylvester resultants of multivariate polynomials with respect to one variable.

use super::field::Rational;
use super::linalg;
use super::poly::Poly;
use crate::error::{Error, Result};

/// Sylvester matrix of `a` and `b` regarded as polynomials in `var`.
/// Entries are polynomials free of `var`.
pub fn sylvester(a: &Poly, b: &Poly, var: usize) -> Vec<Vec<Poly>> {
    let n = a.nvars();
    let ca = a.coefficients_in(var);
    let cb = b.coefficients_in(var);
    let m = ca.len() - 1;
    let k = cb.len() - 1;
    let size = m + k;
    let mut rows = Vec::with_capacity(size);
    for i in 0..k {
        let mut r = vec![Poly::zero(n); size];
        for (j, c) in ca.iter().rev().enumerate() {
            r[i + j] = c.clone();
        }
        rows.push(r);
    }
    for i in 0..m {
        let mut r = vec![Poly::zero(n); size];
        for (j, c) in cb.iter().rev().enumerate() {
            r[i + j] = c.clone();
        }
        rows.push(r);
    }
    rows
}

/// Fraction-free (Bareiss) determinant over `Q[x_1..x_n]`.
pub fn det_bareiss(m: &[Vec<Poly>], nvars: usize) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(nvars);
    }
    let mut a = m.to_vec();
    let mut sign = false;
    let mut prev = Poly::one(nvars);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = !sign;
                }
                None => return Poly::zero(nvars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = Poly::zero(nvars);
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Resultant of `a` and `b` with respect to variable `var`.
///
/// The degrees used are the actual degrees in `var`; if both leading
/// coefficients vanish at a parameter value the specialization is not
/// meaningful there and callers must treat that case separately.
pub fn resultant(a: &Poly, b: &Poly, var: usize) -> Result<Poly> {
    if a.nvars() != b.nvars() {
        return Err(Error::InvalidInput("resultant of polynomials in different rings".into()));
    }
    if a.is_zero() && b.is_zero() {
        return Err(Error::InvalidInput("resultant of two zero polynomials".into()));
    }
    if a.is_zero() || b.is_zero() {
        return Ok(Poly::zero(a.nvars()));
    }
    let s = sylvester(a, b, var);
    Ok(det_bareiss(&s, a.nvars()))
}

const TERNARY_QUADRATIC_MONOMIALS: [[u32; 3]; 6] =
    [[2, 0, 0], [0, 2, 0], [0, 0, 2], [1, 1, 0], [1, 0, 1], [0, 1, 1]];

/// Resultant of three ternary quadrics, up to the constant `-512`: the 6x6
/// determinant of the coefficients of `q0, q1, q2` and the three partials of
/// their Jacobian determinant. Zero iff the quadrics share a projective zero.
pub fn ternary_quadrics_resultant(q: [&Poly; 3]) -> Result<Rational> {
    for f in q {
        if f.nvars() != 3 || f.terms().any(|(e, _)| e.iter().sum::<u32>() != 2) {
            return Err(Error::InvalidInput("expected ternary quadratic forms".into()));
        }
    }
    let jm: Vec<Vec<Poly>> = q.iter().map(|f| (0..3).map(|j| f.derivative(j)).collect()).collect();
    let jac = linalg::det_ring(&jm);
    let rows: Vec<Poly> = q.iter().map(|f| (*f).clone()).chain((0..3).map(|j| jac.derivative(j))).collect();
    let m: Vec<Vec<Rational>> =
        rows.iter().map(|f| TERNARY_QUADRATIC_MONOMIALS.iter().map(|e| f.coeff(e)).collect()).collect();
    Ok(linalg::det(&m))
}

/// Discriminant of a ternary cubic up to a nonzero constant: the resultant
/// of its three partials. Zero iff the plane cubic is singular.
pub fn ternary_cubic_discriminant(f: &Poly) -> Result<Rational> {
    if f.nvars() != 3 || f.terms().any(|(e, _)| e.iter().sum::<u32>() != 3) {
        return Err(Error::InvalidInput("expected a ternary cubic form".into()));
    }
    let d: Vec<Poly> = (0..3).map(|i| f.derivative(i)).collect();
    if d.iter().any(|x| x.is_zero()) {
        // a cubic missing a variable is a cone
        return Ok(Rational::from_integer(0.into()));
    }
    ternary_quadrics_resultant([&d[0], &d[1], &d[2]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::algebra::field::int;
    use crate::poly;

    #[test]
    fn linear_resultants() {
        let a = poly!(1; [1] => 1, [0] => -1);
        let b = poly!(1; [1] => 1, [0] => 1);
        assert_eq!(resultant(&a, &b, 0).unwrap(), Poly::constant(1, int(2)));
        // variables (t, a, b)
        let a = poly!(3; [1,0,0] => 1, [0,1,0] => -1);
        let b = poly!(3; [1,0,0] => 1, [0,0,1] => -1);
        assert_eq!(resultant(&a, &b, 0).unwrap(), poly!(3; [0,1,0] => 1, [0,0,1] => -1));
    }

    #[test]
    fn quadratic_against_linear() {
        // variables (x, s)
        let a = poly!(2; [2,0] => 1, [0,1] => -1);
        let b = poly!(2; [1,0] => 1, [0,0] => -1);
        assert_eq!(resultant(&a, &b, 0).unwrap(), poly!(2; [0,0] => 1, [0,1] => -1));
    }

    #[test]
    fn constant_and_zero_inputs() {
        let c = Poly::constant(1, int(3));
        let b = poly!(1; [2] => 1, [0] => 1);
        assert_eq!(resultant(&c, &b, 0).unwrap(), Poly::constant(1, int(9)));
        assert!(resultant(&Poly::zero(1), &Poly::zero(1), 0).is_err());
        assert!(resultant(&Poly::zero(1), &b, 0).unwrap().is_zero());
    }

    fn weierstrass(a: i64, b: i64) -> Poly {
        poly!(3; [0,2,1] => 1, [3,0,0] => -1, [1,0,2] => -a, [0,0,3] => -b)
    }

    #[test]
    fn cubic_discriminant_matches_weierstrass() {
        let mut ratio = None;
        for (a, b) in [(-52, 144), (0, 1), (2, -3), (-1, 0)] {
            let d = ternary_cubic_discriminant(&weierstrass(a, b)).unwrap();
            let r = d / int(4 * a * a * a + 27 * b * b);
            assert_eq!(*ratio.get_or_insert(r.clone()), r);
        }
        assert_eq!(ratio.unwrap(), int(-221184));
        assert!(ternary_cubic_discriminant(&weierstrass(-3, 2)).unwrap().is_zero());
        // Fermat cubic is smooth; xyz is a triangle of lines
        assert!(!ternary_cubic_discriminant(&poly!(3; [3,0,0] => 1, [0,3,0] => 1, [0,0,3] => 1)).unwrap().is_zero());
        assert!(ternary_cubic_discriminant(&poly!(3; [1,1,1] => 1)).unwrap().is_zero());
    }

    #[test]
    fn common_root_gives_zero() {
        let a = poly!(1; [2] => 1, [0] => -1);
        let b = poly!(1; [2] => 1, [1] => -2, [0] => 1);
        assert!(resultant(&a, &b, 0).unwrap().is_zero());
    }
}
