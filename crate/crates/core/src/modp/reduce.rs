//! Reduction of fibered spaces modulo a prime.

use super::form::FpForm;
use crate::algebra::field::is_prime;
use crate::algebra::poly::Poly;
use crate::algebra::space::GradedSpace;
use crate::error::{Error, Result};
use crate::fibration::{Defining, FiberedSpace};

/// Defining data over `F_p`: forms, or a 2x3 matrix whose minors cut the locus.
#[derive(Clone, Debug)]
pub enum ReducedDefining {
    Forms(Vec<FpForm>),
    Matrix(Vec<Vec<FpForm>>),
}

/// A space with every coefficient reduced mod `p`, together with the
/// partial derivatives needed by the Jacobian criterion.
#[derive(Clone, Debug)]
pub struct ReducedSpace {
    name: String,
    p: u64,
    ambient: GradedSpace,
    defining: ReducedDefining,
    /// `partials[k][i]`: derivative of form (or matrix entry) `k` in variable `i`.
    partials: Vec<Vec<FpForm>>,
}

fn reduce_nonvanishing(f: &Poly, p: u64) -> Result<FpForm> {
    let r = FpForm::reduce(f, p)?;
    if r.is_zero() && !f.is_zero() {
        return Err(Error::BadPrime(p, "a defining form vanishes identically mod p".into()));
    }
    Ok(r)
}

fn check_prime(p: u64) -> Result<()> {
    if !is_prime(p) || p >= 1 << 31 {
        return Err(Error::BadPrime(p, "modulus must be a prime below 2^31".into()));
    }
    Ok(())
}

impl ReducedSpace {
    /// The vanishing locus of `forms` in `ambient`, reduced mod `p`.
    pub fn from_forms(name: &str, ambient: &GradedSpace, forms: &[Poly], p: u64) -> Result<Self> {
        check_prime(p)?;
        if forms.iter().any(|f| f.nvars() != ambient.nvars()) {
            return Err(Error::InvalidInput("form ring differs from the ambient".into()));
        }
        let fs = forms.iter().map(|f| reduce_nonvanishing(f, p)).collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(name, ambient, ReducedDefining::Forms(fs), p))
    }

    pub fn from_matrix(name: &str, ambient: &GradedSpace, rows: &[Vec<Poly>], p: u64) -> Result<Self> {
        check_prime(p)?;
        if rows.len() != 2 || rows.iter().any(|r| r.len() != 3) {
            return Err(Error::InvalidInput("degeneracy matrix must be 2x3".into()));
        }
        let m = rows
            .iter()
            .map(|r| r.iter().map(|f| reduce_nonvanishing(f, p)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::assemble(name, ambient, ReducedDefining::Matrix(m), p))
    }

    fn assemble(name: &str, ambient: &GradedSpace, defining: ReducedDefining, p: u64) -> Self {
        let n = ambient.nvars();
        let entries: Vec<&FpForm> = match &defining {
            ReducedDefining::Forms(fs) => fs.iter().collect(),
            ReducedDefining::Matrix(m) => m.iter().flatten().collect(),
        };
        let partials = entries.iter().map(|f| (0..n).map(|i| f.derivative(i)).collect()).collect();
        ReducedSpace { name: name.to_string(), p, ambient: ambient.clone(), defining, partials }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn ambient(&self) -> &GradedSpace {
        &self.ambient
    }

    pub fn defining(&self) -> &ReducedDefining {
        &self.defining
    }

    pub fn expected_codimension(&self) -> usize {
        match &self.defining {
            ReducedDefining::Forms(fs) => fs.len(),
            ReducedDefining::Matrix(_) => 2,
        }
    }

    /// True iff every generator vanishes at `x`.
    pub fn vanishes_at(&self, x: &[u64]) -> bool {
        match &self.defining {
            ReducedDefining::Forms(fs) => fs.iter().all(|f| f.eval(x) == 0),
            ReducedDefining::Matrix(_) => self.minors_at(x).iter().all(|&v| v == 0),
        }
    }

    fn entries_at(&self, x: &[u64]) -> [[u64; 3]; 2] {
        let ReducedDefining::Matrix(m) = &self.defining else { unreachable!("matrix space") };
        let mut e = [[0u64; 3]; 2];
        for r in 0..2 {
            for c in 0..3 {
                e[r][c] = m[r][c].eval(x);
            }
        }
        e
    }

    fn minors_at(&self, x: &[u64]) -> [u64; 3] {
        let p = self.p;
        let e = self.entries_at(x);
        [(0, 1), (0, 2), (1, 2)].map(|(i, j)| (e[0][i] * e[1][j] % p + p - e[0][j] * e[1][i] % p) % p)
    }

    /// True iff every matrix entry vanishes at `x` (always false for forms).
    pub fn rank_zero_at(&self, x: &[u64]) -> bool {
        match &self.defining {
            ReducedDefining::Forms(_) => false,
            ReducedDefining::Matrix(_) => self.entries_at(x).iter().flatten().all(|&v| v == 0),
        }
    }

    /// Jacobian of the generators (forms, or the three minors) at `x`.
    pub fn jacobian_at(&self, x: &[u64]) -> Vec<Vec<u64>> {
        let p = self.p;
        let n = self.ambient.nvars();
        match &self.defining {
            ReducedDefining::Forms(_) => self.partials.iter().map(|row| row.iter().map(|d| d.eval(x)).collect()).collect(),
            ReducedDefining::Matrix(_) => {
                let e = self.entries_at(x);
                let d = |r: usize, c: usize, i: usize| self.partials[3 * r + c][i].eval(x);
                [(0, 1), (0, 2), (1, 2)]
                    .iter()
                    .map(|&(a, b)| {
                        (0..n)
                            .map(|i| {
                                let plus = (d(0, a, i) * e[1][b] + e[0][a] * d(1, b, i)) % p;
                                let minus = (d(0, b, i) * e[1][a] + e[0][b] * d(1, a, i)) % p;
                                (plus + p - minus) % p
                            })
                            .collect()
                    })
                    .collect()
            }
        }
    }
}

/// Coefficientwise reduction of a fibered space.
pub fn reduce_space(space: &FiberedSpace, p: u64) -> Result<ReducedSpace> {
    match space.defining() {
        Defining::Forms(_) => ReducedSpace::from_forms(space.name(), space.ambient(), &space.equations(), p),
        Defining::Degeneracy(_) => {
            ReducedSpace::from_matrix(space.name(), space.ambient(), &space.matrix().expect("matrix"), p)
        }
    }
}

/// Rank of a matrix over `F_p` with entries in `[0, p)`.
pub fn rank_mod_p(m: &[Vec<u64>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r][c] != 0) else { continue };
        a.swap(rank, piv);
        let inv = pow_mod(a[rank][c], p - 2, p);
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c] * inv % p;
                for k in c..cols {
                    a[r][k] = (a[r][k] + p - f * a[rank][k] % p) % p;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

pub fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::data::{enriques_space, k3_space, x1_form};

    fn x1_space() -> FiberedSpace {
        FiberedSpace::hypersurface("X1", GradedSpace::p1_power(2), x1_form(), vec![0]).unwrap()
    }

    #[test]
    fn reduction_keeps_small_coefficients() {
        let r = reduce_space(&x1_space(), 5).unwrap();
        let ReducedDefining::Forms(fs) = r.defining() else { panic!() };
        let mut cs: Vec<u64> = fs[0].terms().map(|(_, c)| c).collect();
        cs.sort();
        cs.dedup();
        assert_eq!(cs, vec![1, 2, 3]);
        // round trip for integer coefficients below p
        let f = x1_form();
        for (e, c) in f.terms() {
            let v = fs[0].terms().find(|(e2, _)| *e2 == e).unwrap().1;
            assert_eq!(crate::algebra::field::int(v as i64), *c);
        }
    }

    #[test]
    fn bad_primes_are_rejected() {
        assert!(matches!(reduce_space(&k3_space(), 2), Err(Error::BadPrime(2, _))));
        assert!(matches!(reduce_space(&x1_space(), 9), Err(Error::BadPrime(9, _))));
        assert!(reduce_space(&enriques_space(), 7).is_ok());
    }

    #[test]
    fn rank_over_small_fields() {
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 4]], 5), 1);
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![2, 4]], 3), 1);
        assert_eq!(rank_mod_p(&[vec![1, 2], vec![3, 4]], 5), 2);
        assert_eq!(rank_mod_p(&[vec![0, 0, 0], vec![0, 0, 0]], 7), 0);
    }
}
