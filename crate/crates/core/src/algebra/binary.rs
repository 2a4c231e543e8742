//! Binary forms: classical discriminants, Vieta conjugate roots, and
//! squarefree bookkeeping for forms on a projective line.

use num_traits::{One, Zero};

use super::field::{Field, Rational, Ring};
use super::unipoly::{univariate_gcd, UniPoly};
use crate::error::{Error, Result};

/// Discriminant of `c[0] u^d + c[1] u^{d-1} v + ... + c[d] v^d` for `d` in 2..=4.
///
/// Coefficients may live in any commutative ring, so the same formulas
/// serve scalar forms and forms whose coefficients are polynomials in
/// base parameters.
pub fn disc_binary_form<R: Ring>(c: &[R]) -> Result<R> {
    match c.len() {
        3 => {
            let (a, b, cc) = (&c[0], &c[1], &c[2]);
            Ok(b.clone() * b.clone() - (a.clone() * cc.clone()).scale_i64(4))
        }
        4 => {
            let (a, b, cc, d) = (&c[0], &c[1], &c[2], &c[3]);
            let t1 = b.clone() * b.clone() * cc.clone() * cc.clone();
            let t2 = (a.clone() * cc.pow_u32(3)).scale_i64(4);
            let t3 = (b.pow_u32(3) * d.clone()).scale_i64(4);
            let t4 = (a.clone() * a.clone() * d.clone() * d.clone()).scale_i64(27);
            let t5 = (a.clone() * b.clone() * cc.clone() * d.clone()).scale_i64(18);
            Ok(t1 - t2 - t3 - t4 + t5)
        }
        5 => Ok(quartic_disc(&c[0], &c[1], &c[2], &c[3], &c[4])),
        _ => Err(Error::InvalidInput(format!("binary form of degree {} unsupported", c.len() as i64 - 1))),
    }
}

fn quartic_disc<R: Ring>(a: &R, b: &R, c: &R, d: &R, e: &R) -> R {
    let m = |xs: &[&R], k: i64| -> R {
        let mut acc = xs[0].clone();
        for x in &xs[1..] {
            acc = acc * (*x).clone();
        }
        acc.scale_i64(k)
    };
    let terms = [
        m(&[a, a, a, e, e, e], 256),
        m(&[a, a, b, d, e, e], -192),
        m(&[a, a, c, c, e, e], -128),
        m(&[a, a, c, d, d, e], 144),
        m(&[a, a, d, d, d, d], -27),
        m(&[a, b, b, c, e, e], 144),
        m(&[a, b, b, d, d, e], -6),
        m(&[a, b, c, c, d, e], -80),
        m(&[a, b, c, d, d, d], 18),
        m(&[a, c, c, c, c, e], 16),
        m(&[a, c, c, c, d, d], -4),
        m(&[b, b, b, b, e, e], -27),
        m(&[b, b, b, c, d, e], 18),
        m(&[b, b, b, d, d, d], -4),
        m(&[b, b, c, c, c, e], -4),
        m(&[b, b, c, c, d, d], 1),
    ];
    let mut it = terms.into_iter();
    let first = it.next().unwrap();
    it.fold(first, |acc, t| acc + t)
}

/// The other root of `q = α u² + β u v + γ v²` given one projective root.
/// A double root is returned unchanged.
pub fn vieta_other_root<K: Field>(q: &[K; 3], root: &[K; 2]) -> Result<[K; 2]> {
    let [alpha, beta, gamma] = q;
    if alpha.is_zero_elem() && beta.is_zero_elem() && gamma.is_zero_elem() {
        return Err(Error::DegenerateForm);
    }
    let [u0, v0] = root;
    if u0.is_zero_elem() && v0.is_zero_elem() {
        return Err(Error::InvalidInput("root (0:0) is not a projective point".into()));
    }
    let val = alpha.clone() * u0.clone() * u0.clone()
        + beta.clone() * u0.clone() * v0.clone()
        + gamma.clone() * v0.clone() * v0.clone();
    if !val.is_zero_elem() {
        return Err(Error::NotARoot);
    }
    if !alpha.is_zero_elem() {
        // v0 != 0 here, otherwise q(1,0) = α would not vanish
        let u = -(beta.clone() * v0.clone()) - alpha.clone() * u0.clone();
        let v = alpha.clone() * v0.clone();
        return Ok([u, v]);
    }
    let one = u0.one_like();
    let zero = u0.zero_like();
    if v0.is_zero_elem() {
        Ok([-gamma.clone(), beta.clone()])
    } else {
        Ok([one, zero])
    }
}

/// Binary form `Σ c[i] u^i v^{d-i}` over Q with its degree remembered, so
/// roots at `(1:0)` survive dehomogenization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    coeffs: Vec<Rational>,
}

impl BinaryForm {
    /// `coeffs[i]` multiplies `u^i v^{d-i}`.
    pub fn new(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "binary form needs a degree");
        BinaryForm { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| super::field::int(x)).collect())
    }

    pub fn from_uni(p: &UniPoly, degree: usize) -> Self {
        let mut c = p.coeffs().to_vec();
        assert!(c.len() <= degree + 1, "degree too small");
        c.resize(degree + 1, Rational::zero());
        Self::new(c)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The polynomial `f(u, 1)`.
    pub fn dehomogenize(&self) -> UniPoly {
        UniPoly::new(self.coeffs.clone())
    }

    /// Multiplicity of the root `(1:0)`.
    pub fn infinite_multiplicity(&self) -> usize {
        match self.dehomogenize().degree() {
            Some(k) => self.degree() - k,
            None => 0,
        }
    }

    pub fn eval(&self, u: &Rational, v: &Rational) -> Rational {
        let d = self.degree();
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * num_traits::pow(u.clone(), i) * num_traits::pow(v.clone(), d - i))
            .sum()
    }

    pub fn squarefree_part(&self) -> BinaryForm {
        if self.is_zero() {
            return self.clone();
        }
        let sf = self.dehomogenize().squarefree_part();
        let deg = sf.degree().unwrap() + usize::from(self.infinite_multiplicity() > 0);
        BinaryForm::from_uni(&sf, deg)
    }

    pub fn is_squarefree(&self) -> bool {
        self.squarefree_part().degree() == self.degree()
    }

    /// Monic (in the affine part) gcd of two nonzero forms.
    pub fn gcd(&self, other: &BinaryForm) -> BinaryForm {
        let g = univariate_gcd(&self.dehomogenize(), &other.dehomogenize());
        let inf = self.infinite_multiplicity().min(other.infinite_multiplicity());
        let deg = g.degree().unwrap_or(0) + inf;
        BinaryForm::from_uni(&g, deg)
    }

    /// True iff the forms agree up to a nonzero scalar.
    pub fn proportional(&self, other: &BinaryForm) -> bool {
        if self.degree() != other.degree() {
            return false;
        }
        let Some(k) = self.coeffs.iter().position(|c| !c.is_zero()) else {
            return other.is_zero();
        };
        if other.coeffs[k].is_zero() {
            return false;
        }
        let r = &other.coeffs[k] / &self.coeffs[k];
        self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| &(a * &r) == b)
    }

    /// Exact quotient, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &BinaryForm) -> Option<BinaryForm> {
        if d.is_zero() || d.degree() > self.degree() {
            return None;
        }
        if self.is_zero() {
            return Some(BinaryForm::from_uni(&UniPoly::zero(), self.degree() - d.degree()));
        }
        let (q, r) = self.dehomogenize().div_rem(&d.dehomogenize());
        if !r.is_zero() || d.infinite_multiplicity() > self.infinite_multiplicity() {
            return None;
        }
        Some(BinaryForm::from_uni(&q, self.degree() - d.degree()))
    }

    /// Rational roots `(u : v)`, each listed once, the root `(1:0)` last.
    pub fn rational_roots(&self) -> Vec<[Rational; 2]> {
        if self.is_zero() {
            return vec![];
        }
        let mut out: Vec<[Rational; 2]> =
            self.dehomogenize().rational_roots().into_iter().map(|r| [r, Rational::one()]).collect();
        if self.infinite_multiplicity() > 0 {
            out.push([Rational::one(), Rational::zero()]);
        }
        out
    }

    pub fn scale_to_primitive(&self) -> BinaryForm {
        let p = self.dehomogenize().primitive();
        BinaryForm::from_uni(&p, self.degree())
    }

    pub fn is_constant_nonzero(&self) -> bool {
        self.degree() == 0 && !self.coeffs[0].is_zero()
    }

    pub fn display(&self, u: &str, v: &str) -> String {
        let d = self.degree();
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let mut m = vec![];
                if i > 0 {
                    m.push(if i == 1 { u.to_string() } else { format!("{u}^{i}") });
                }
                if d - i > 0 {
                    m.push(if d - i == 1 { v.to_string() } else { format!("{v}^{}", d - i) });
                }
                let cs = super::field::format_rational(c);
                if m.is_empty() {
                    cs
                } else if c.is_one() {
                    m.join("*")
                } else {
                    format!("{cs}*{}", m.join("*"))
                }
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}
