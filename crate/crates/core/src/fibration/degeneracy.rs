//! Pointwise critical-locus evaluators for degeneracy loci over P2.
//!
//! The fiber over `b` is the base locus of the pencil `Σ α_j R_j(b)` with
//! `α ⊥ (β_0, β_1, β_2)`, `β` the row-one values. In the chart `i`
//! (`β_i ≠ 0`) the pencil is spanned by `β_i R_j - β_j R_i`, `j ≠ i`.
//! Vanishing of the evaluators does not depend on the chart.

use num_traits::Zero;

use super::critical::gram_poly;
use super::space::FiberedSpace;
use crate::algebra::binary::{disc_binary_form, BinaryForm};
use crate::algebra::field::{Field, Fp, Rational};
use crate::algebra::linalg;
use crate::algebra::poly::Poly;
use crate::error::{Error, Result};
use crate::genus1::{gram, quadric_pencil_quartic};

/// Row one and the Gram matrices of row two, as polynomials in the base variables.
#[derive(Clone, Debug)]
pub struct DegeneracyData {
    row1: Vec<Poly>,
    grams: Vec<Vec<Vec<Poly>>>,
    /// Fiber coordinate whose vanishing cuts the multisection.
    section_var: usize,
}

/// Coefficients of `det(λ A + B)`, entry `k` multiplying `λ^k`, by
/// interpolation at `λ = 0..=n`.
pub fn pencil_det<K: Field>(a: &[Vec<K>], b: &[Vec<K>]) -> Vec<K> {
    let n = a.len();
    let one = a[0][0].one_like();
    let mut rows = vec![];
    let mut vals = vec![];
    let mut lam = one.zero_like();
    for _ in 0..=n {
        let m: Vec<Vec<K>> =
            (0..n).map(|i| (0..n).map(|j| lam.clone() * a[i][j].clone() + b[i][j].clone()).collect()).collect();
        vals.push(linalg::det(&m));
        let mut row = vec![one.clone()];
        for k in 1..=n {
            row.push(row[k - 1].clone() * lam.clone());
        }
        rows.push(row);
        lam = lam + one.clone();
    }
    linalg::solve(&rows, &vals).expect("Vandermonde system at distinct nodes")
}

fn disc_of_coeffs<K: Field>(c: &[K]) -> K {
    let rev: Vec<K> = c.iter().rev().cloned().collect();
    disc_binary_form(&rev).expect("degree 3 or 4")
}

impl DegeneracyData {
    /// `section_var` indexes the fiber variables, e.g. the bundle coordinate `Z`.
    pub fn new(space: &FiberedSpace, section_var: usize) -> Result<Self> {
        let m = space.matrix().ok_or_else(|| Error::InvalidInput("not a degeneracy locus".into()))?;
        let bv = space.base_vars();
        let fv = space.fiber_vars();
        if section_var >= fv.len() {
            return Err(Error::InvalidInput("section variable out of range".into()));
        }
        let mut row1 = vec![];
        for f in &m[0] {
            if f.support_vars().iter().any(|v| !bv.contains(v)) {
                return Err(Error::NotAFibration("row one varies along the fiber".into()));
            }
            row1.push(f.restrict_vars(&bv));
        }
        let mut grams = vec![];
        for f in &m[1] {
            let g = gram_poly(f, &fv)?;
            grams.push(g.into_iter().map(|r| r.into_iter().map(|x| x.restrict_vars(&bv)).collect()).collect());
        }
        Ok(DegeneracyData { row1, grams, section_var })
    }

    /// Fails with `BadPrime` when `p` divides a coefficient denominator.
    pub fn check_prime(&self, p: u64) -> Result<()> {
        for f in self.row1.iter().chain(self.grams.iter().flatten().flatten()) {
            for (_, c) in f.terms() {
                Fp::from_rational(c, p)?;
            }
        }
        Ok(())
    }

    pub fn fiber_dim(&self) -> usize {
        self.grams[0].len()
    }

    pub fn row_one<K: Field>(&self, b: &[K], lift: &dyn Fn(&Rational) -> K) -> Vec<K> {
        let z = b[0].zero_like();
        self.row1.iter().map(|f| f.eval_with(b, lift, z.clone())).collect()
    }

    /// The two Gram matrices spanning the pencil in chart `i`, or `None` when `β_i = 0`.
    pub fn pencil_at<K: Field>(
        &self,
        b: &[K],
        chart: usize,
        lift: &dyn Fn(&Rational) -> K,
    ) -> Option<[Vec<Vec<K>>; 2]> {
        let beta = self.row_one(b, lift);
        if beta[chart].is_zero_elem() {
            return None;
        }
        let z = b[0].zero_like();
        let g: Vec<Vec<Vec<K>>> = self
            .grams
            .iter()
            .map(|m| m.iter().map(|r| r.iter().map(|x| x.eval_with(b, lift, z.clone())).collect()).collect())
            .collect();
        let n = self.fiber_dim();
        let mut out = vec![];
        for j in (0..3).filter(|&j| j != chart) {
            out.push(
                (0..n)
                    .map(|r| {
                        (0..n)
                            .map(|c| beta[chart].clone() * g[j][r][c].clone() - beta[j].clone() * g[chart][r][c].clone())
                            .collect()
                    })
                    .collect(),
            );
        }
        let b2 = out.pop().expect("two minors");
        let b1 = out.pop().expect("two minors");
        Some([b1, b2])
    }

    /// First chart with `β_i ≠ 0`.
    pub fn some_chart<K: Field>(&self, b: &[K], lift: &dyn Fn(&Rational) -> K) -> Option<usize> {
        self.row_one(b, lift).iter().position(|x| !x.is_zero_elem())
    }

    /// Discriminant of the pencil quartic: zero iff the fiber is singular.
    pub fn delta_at<K: Field>(&self, b: &[K], chart: usize, lift: &dyn Fn(&Rational) -> K) -> Option<K> {
        let [m1, m2] = self.pencil_at(b, chart, lift)?;
        Some(disc_of_coeffs(&pencil_det(&m1, &m2)))
    }

    /// Discriminant of the conic-pencil cubic on the section `{section_var = 0}`:
    /// zero iff the multisection is ramified over `b`.
    pub fn branch_at<K: Field>(&self, b: &[K], chart: usize, lift: &dyn Fn(&Rational) -> K) -> Option<K> {
        let [m1, m2] = self.pencil_at(b, chart, lift)?;
        let keep: Vec<usize> = (0..self.fiber_dim()).filter(|&i| i != self.section_var).collect();
        let cut = |m: &Vec<Vec<K>>| -> Vec<Vec<K>> {
            keep.iter().map(|&r| keep.iter().map(|&c| m[r][c].clone()).collect()).collect()
        };
        Some(disc_of_coeffs(&pencil_det(&cut(&m1), &cut(&m2))))
    }
}

/// The two fiber quadrics over `b` as Gram matrices, and `det(λ M1 + μ M2)`.
pub fn fiber_quadric_pencil(space: &FiberedSpace, b: &[Rational]) -> Result<(Vec<Vec<Rational>>, Vec<Vec<Rational>>, BinaryForm)> {
    let eqs = space.fiber_equations(b)?;
    match eqs.as_slice() {
        [q1, q2] if q1.nvars() == 4 && q1.total_degree() == Some(2) && q2.total_degree() == Some(2) => {
            Ok((gram(q1), gram(q2), quadric_pencil_quartic(q1, q2)))
        }
        _ => Err(Error::NotAFibration("fiber is not an intersection of two quadrics in P3".into())),
    }
}

/// Rational evaluator of the discriminant in the chart of largest row-one entry.
pub fn delta_rational(data: &DegeneracyData, b: &[Rational]) -> Result<Rational> {
    let lift = |c: &Rational| c.clone();
    let beta = data.row_one(b, &lift);
    let chart = (0..3)
        .filter(|&j| !beta[j].is_zero())
        .max_by(|&x, &y| num_traits::Signed::abs(&beta[x]).cmp(&num_traits::Signed::abs(&beta[y])).then(y.cmp(&x)))
        .ok_or(Error::RankZeroLocus)?;
    data.delta_at(b, chart, &lift).ok_or(Error::RankZeroLocus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::int;
    use crate::constructions::data::{threefold_space, FIBER_Z};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn evaluator_matches_fiber_smoothness() {
        let x = threefold_space();
        let data = DegeneracyData::new(&x, FIBER_Z).unwrap();
        for b in [[1, 1, 1], [1, 2, 3], [2, -1, 5], [0, 1, 1], [1, 0, 0]] {
            let b = ints(&b);
            let d = delta_rational(&data, &b).unwrap();
            let smooth = x.fiber_model_at(&b).is_ok();
            assert_eq!(!d.is_zero(), smooth, "b = {b:?}");
            assert!(matches!(x.fiber_model_at(&b), Ok(_) | Err(Error::SingularFiber)));
        }
    }

    #[test]
    fn vanishing_is_chart_independent_and_reduces_mod_p() {
        let data = DegeneracyData::new(&threefold_space(), FIBER_Z).unwrap();
        let lift = |c: &Rational| c.clone();
        let p = 13;
        let liftp = |c: &Rational| Fp::from_rational(c, p).unwrap();
        for b in [[1, 1, 1], [1, 2, 3], [3, -1, 2], [1, 1, 0]] {
            let bq = ints(&b);
            let bp: Vec<Fp> = b.iter().map(|&v| Fp::new(v, p)).collect();
            let zs: Vec<bool> = (0..3).filter_map(|i| data.delta_at(&bq, i, &lift)).map(|d| d.is_zero()).collect();
            assert!(zs.windows(2).all(|w| w[0] == w[1]));
            for i in 0..3 {
                if let Some(dq) = data.delta_at(&bq, i, &lift) {
                    assert_eq!(Fp::from_rational(&dq, p).unwrap(), data.delta_at(&bp, i, &liftp).unwrap());
                    let bq2 = data.branch_at(&bq, i, &lift).unwrap();
                    assert_eq!(Fp::from_rational(&bq2, p).unwrap(), data.branch_at(&bp, i, &liftp).unwrap());
                }
            }
        }
    }

    #[test]
    fn pencil_det_interpolates_exactly() {
        let a = vec![vec![int(1), int(0)], vec![int(0), int(2)]];
        let b = vec![vec![int(0), int(1)], vec![int(1), int(3)]];
        // det [[λ, 1], [1, 2λ + 3]] = 2λ^2 + 3λ - 1
        assert_eq!(pencil_det(&a, &b), ints(&[-1, 3, 2]));
    }
}
