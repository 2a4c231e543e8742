//! Polynomials with coefficients reduced into `F_p`, stored as raw residues
//! for fast repeated evaluation.

use crate::algebra::field::Fp;
use crate::algebra::poly::Poly;
use crate::error::Result;

/// Sparse polynomial over `F_p`; coefficients lie in `[1, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpForm {
    p: u64,
    nvars: usize,
    terms: Vec<(Vec<u32>, u64)>,
}

impl FpForm {
    /// Coefficientwise reduction; fails with `BadPrime` when `p` divides a denominator.
    pub fn reduce(poly: &Poly, p: u64) -> Result<Self> {
        let mut terms = vec![];
        for (e, c) in poly.terms() {
            let v = Fp::from_rational(c, p)?.value();
            if v != 0 {
                terms.push((e.clone(), v));
            }
        }
        Ok(FpForm { p, nvars: poly.nvars(), terms })
    }

    pub fn modulus(&self) -> u64 {
        self.p
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

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, u64)> {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    /// Value at a point given by residues in `[0, p)`.
    pub fn eval(&self, x: &[u64]) -> u64 {
        let p = self.p;
        let mut acc = 0u64;
        for (e, c) in &self.terms {
            let mut t = *c;
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t = t * xi % p;
                }
                if t == 0 {
                    break;
                }
            }
            acc += t;
            if acc >= p {
                acc -= p;
            }
        }
        acc
    }

    pub fn eval_fp(&self, x: &[Fp]) -> Fp {
        let v: Vec<u64> = x.iter().map(|a| a.value()).collect();
        Fp::from_u64(self.eval(&v), self.p)
    }

    pub fn derivative(&self, i: usize) -> FpForm {
        let mut terms = vec![];
        for (e, c) in &self.terms {
            let k = e[i] as u64;
            let c = c * (k % self.p) % self.p;
            if c != 0 {
                let mut e = e.clone();
                e[i] -= 1;
                terms.push((e, c));
            }
        }
        FpForm { p: self.p, nvars: self.nvars, terms }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::rat;

    #[test]
    fn reduction_and_evaluation() {
        // 3 x^2 y + (1/2) y^3 mod 5
        let f = Poly::from_terms(2, [(vec![2, 1], rat(3, 1)), (vec![0, 3], rat(1, 2))]);
        let r = FpForm::reduce(&f, 5).unwrap();
        assert_eq!(r.num_terms(), 2);
        // at (1, 2): 3*2 + 3*8 = 30 = 0 mod 5
        assert_eq!(r.eval(&[1, 2]), 0);
        assert!(FpForm::reduce(&f, 2).is_err());
        // derivative in x: 6 x y = x y mod 5
        assert_eq!(r.derivative(0).eval(&[2, 3]), 1);
        // exponent multiple of p kills the term
        let g = Poly::from_terms(1, [(vec![5], rat(1, 1))]);
        assert!(FpForm::reduce(&g, 5).unwrap().derivative(0).is_zero());
    }
}
