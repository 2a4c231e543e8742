//! Finite density proxy: the forms of one multidegree vanishing on a point set.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::field::Rational;
use crate::algebra::linalg;
use crate::algebra::poly::Poly;
use crate::algebra::space::GradedSpace;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityWitness {
    pub multidegree: Vec<i64>,
    pub points_used: usize,
    pub kernel_dim: usize,
    /// Basis of the vanishing forms, rendered in the ambient variable names.
    pub kernel_basis: Vec<String>,
}

/// Kernel of `rows`, eliminating only rows that the current kernel does not
/// already annihilate. The result equals the kernel of the full matrix: each
/// skipped row vanishes on the final kernel by the exact check.
fn lazy_kernel(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut chosen: Vec<Vec<Rational>> = vec![];
    let mut ker = linalg::kernel(&chosen, ncols, &Rational::one());
    for r in rows {
        if ker.is_empty() {
            break;
        }
        let kills = ker.iter().all(|v| r.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b).is_zero());
        if !kills {
            chosen.push(r.clone());
            ker = linalg::kernel(&chosen, ncols, &Rational::one());
        }
    }
    ker
}

/// Monomial evaluation matrix and its kernel, returned as forms.
pub fn vanishing_forms(space: &GradedSpace, points: &[Vec<Rational>], multidegree: &[i64]) -> Result<Vec<Poly>> {
    let monos = space.monomials_of_degree(multidegree)?;
    let n = space.nvars();
    let mut rows = vec![];
    for p in points {
        let p = space.normalize(p)?;
        rows.push(monos.iter().map(|e| Poly::monomial(e.clone(), Rational::one()).eval(&p)).collect::<Vec<_>>());
    }
    let ker = lazy_kernel(&rows, monos.len());
    Ok(ker
        .into_iter()
        .map(|v| Poly::from_terms(n, monos.iter().cloned().zip(v)).primitive())
        .collect())
}

/// Kernel dimension of the evaluation matrix on `points`: small kernels on
/// growing point sets are the density proxy.
pub fn density_witness(space: &GradedSpace, points: &[Vec<Rational>], multidegree: &[i64]) -> Result<DensityWitness> {
    if points.is_empty() {
        return Err(Error::InvalidInput("density witness needs at least one point".into()));
    }
    let forms = vanishing_forms(space, points, multidegree)?;
    let names = space.var_names();
    Ok(DensityWitness {
        multidegree: multidegree.to_vec(),
        points_used: points.len(),
        kernel_dim: forms.len(),
        kernel_basis: forms.iter().map(|f| f.display_with(&names)).collect(),
    })
}
