//! Multigraded ambient spaces in Cox coordinates.
//!
//! Variables are grouped into blocks. A projective block owns one component
//! of the grading group: each of its variables has degree 1 in that
//! component and degree 0 in every later component. Earlier components are
//! unconstrained, which is what lets the bundle coordinate `Z` of
//! `P(O^3 + O(1))` over `P^2` carry degree `(-1, 1)`. An affine block is a
//! single variable of degree 0 and is never rescaled.
//!
//! The triangular shape makes normalization sequential: scaling block `k`
//! into canonical form only moves variables in later blocks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::field::{Field, Fp, Rational, Ring};
use super::poly::{Exps, Poly};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockKind {
    Projective,
    Affine,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarBlock {
    pub names: Vec<String>,
    pub degrees: Vec<Vec<i64>>,
    pub kind: BlockKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SpaceRepr", into = "SpaceRepr")]
pub struct GradedSpace {
    blocks: Vec<VarBlock>,
    rank: usize,
    /// Grading component of each projective block, `None` for affine blocks.
    component: Vec<Option<usize>>,
    offsets: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SpaceRepr {
    blocks: Vec<VarBlock>,
}

impl TryFrom<SpaceRepr> for GradedSpace {
    type Error = Error;
    fn try_from(r: SpaceRepr) -> Result<Self> {
        GradedSpace::new(r.blocks)
    }
}

impl From<GradedSpace> for SpaceRepr {
    fn from(s: GradedSpace) -> Self {
        SpaceRepr { blocks: s.blocks }
    }
}

fn names(prefix: &str, range: std::ops::Range<usize>) -> Vec<String> {
    range.map(|i| format!("{prefix}{i}")).collect()
}

impl GradedSpace {
    pub fn new(blocks: Vec<VarBlock>) -> Result<Self> {
        let rank = blocks.iter().filter(|b| b.kind == BlockKind::Projective).count();
        let mut component = vec![];
        let mut offsets = vec![];
        let mut next = 0;
        let mut off = 0;
        let mut seen = std::collections::HashSet::new();
        for b in &blocks {
            if b.names.is_empty() || b.names.len() != b.degrees.len() {
                return Err(Error::InvalidInput("block names and degrees disagree".into()));
            }
            for n in &b.names {
                if !seen.insert(n.clone()) {
                    return Err(Error::InvalidInput(format!("duplicate variable {n}")));
                }
            }
            if b.degrees.iter().any(|d| d.len() != rank) {
                return Err(Error::InvalidInput("degree vector length differs from grading rank".into()));
            }
            match b.kind {
                BlockKind::Projective => {
                    for d in &b.degrees {
                        if d[next] != 1 || d[next + 1..].iter().any(|&x| x != 0) {
                            return Err(Error::InvalidInput("grading is not block triangular".into()));
                        }
                    }
                    component.push(Some(next));
                    next += 1;
                }
                BlockKind::Affine => {
                    if b.names.len() != 1 || b.degrees[0].iter().any(|&x| x != 0) {
                        return Err(Error::InvalidInput("affine blocks hold one variable of degree 0".into()));
                    }
                    component.push(None);
                }
            }
            offsets.push(off);
            off += b.names.len();
        }
        Ok(GradedSpace { blocks, rank, component, offsets })
    }

    /// `P^{d_1} x ... x P^{d_k}` with variable names supplied per block.
    pub fn projective_product(blocks: &[Vec<String>]) -> Self {
        let k = blocks.len();
        let bl = blocks
            .iter()
            .enumerate()
            .map(|(i, names)| {
                let mut d = vec![0; k];
                d[i] = 1;
                VarBlock { names: names.clone(), degrees: vec![d; names.len()], kind: BlockKind::Projective }
            })
            .collect();
        Self::new(bl).expect("product grading is triangular")
    }

    /// `(P^1)^k` with coordinates `S_i, T_i` for `i = 1..=k`.
    pub fn p1_power(k: usize) -> Self {
        let blocks: Vec<Vec<String>> = (1..=k).map(|i| vec![format!("S{i}"), format!("T{i}")]).collect();
        Self::projective_product(&blocks)
    }

    /// `P^n` with coordinates `prefix0..prefixn`.
    pub fn projective(prefix: &str, n: usize) -> Self {
        Self::projective_product(&[names(prefix, 0..n + 1)])
    }

    /// `P(O^3 + O(1))` over `P^2`: `X0..X2` of degree `(1,0)`, `Y0..Y2` of
    /// degree `(0,1)` and `Z` of degree `(-1,1)`.
    pub fn bundle_p2() -> Self {
        let base = VarBlock { names: names("X", 0..3), degrees: vec![vec![1, 0]; 3], kind: BlockKind::Projective };
        let mut fnames = names("Y", 0..3);
        fnames.push("Z".into());
        let mut fdeg = vec![vec![0, 1]; 3];
        fdeg.push(vec![-1, 1]);
        let fiber = VarBlock { names: fnames, degrees: fdeg, kind: BlockKind::Projective };
        Self::new(vec![base, fiber]).expect("bundle grading is triangular")
    }

    /// Affine line with coordinate `t` followed by the given projective blocks.
    pub fn affine_times(t: &str, blocks: &[Vec<String>]) -> Self {
        let k = blocks.len();
        let mut bl = vec![VarBlock { names: vec![t.to_string()], degrees: vec![vec![0; k]], kind: BlockKind::Affine }];
        for (i, names) in blocks.iter().enumerate() {
            let mut d = vec![0; k];
            d[i] = 1;
            bl.push(VarBlock { names: names.clone(), degrees: vec![d; names.len()], kind: BlockKind::Projective });
        }
        Self::new(bl).expect("grading is triangular")
    }

    pub fn blocks(&self) -> &[VarBlock] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn nvars(&self) -> usize {
        self.blocks.iter().map(|b| b.names.len()).sum()
    }

    pub fn block_range(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k] + self.blocks[k].names.len()
    }

    pub fn block_kind(&self, k: usize) -> BlockKind {
        self.blocks[k].kind
    }

    pub fn block_component(&self, k: usize) -> Option<usize> {
        self.component[k]
    }

    pub fn var_names(&self) -> Vec<String> {
        self.blocks.iter().flat_map(|b| b.names.iter().cloned()).collect()
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.var_names()
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown variable {name}")))
    }

    pub fn block_of_var(&self, i: usize) -> usize {
        (0..self.blocks.len()).rev().find(|&k| self.offsets[k] <= i).expect("variable index in range")
    }

    pub fn var_degree(&self, i: usize) -> &[i64] {
        let k = self.block_of_var(i);
        &self.blocks[k].degrees[i - self.offsets[k]]
    }

    pub fn degree_of(&self, e: &[u32]) -> Vec<i64> {
        let mut d = vec![0i64; self.rank];
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                for (a, b) in d.iter_mut().zip(self.var_degree(i)) {
                    *a += b * k as i64;
                }
            }
        }
        d
    }

    /// Common multidegree of all terms, or `None` if mixed or zero.
    pub fn homogeneous_degree(&self, p: &Poly) -> Option<Vec<i64>> {
        let mut it = p.terms().map(|(e, _)| self.degree_of(e));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Canonical representative: each projective block in turn is scaled
    /// to a primitive integer vector whose first nonzero entry is positive.
    pub fn normalize(&self, point: &[Rational]) -> Result<Vec<Rational>> {
        self.check_len(point.len())?;
        let mut x = point.to_vec();
        for k in 0..self.blocks.len() {
            let Some(c) = self.component[k] else { continue };
            let r = self.block_range(k);
            let block = &x[r.clone()];
            let Some(first) = block.iter().find(|v| !v.is_zero()) else {
                return Err(Error::InvalidInput(format!("block {k} is identically zero")));
            };
            let mut l = BigInt::one();
            for v in block {
                l = l.lcm(v.denom());
            }
            let mut g = BigInt::zero();
            for v in block {
                g = g.gcd(&(v.numer() * (&l / v.denom())));
            }
            let mut lam = Rational::new(l, g);
            if first.is_negative() {
                lam = -lam;
            }
            self.apply_torus(&mut x, c, &lam);
        }
        Ok(x)
    }

    /// Representative with a chosen coordinate of each projective block equal to 1.
    pub fn dehomogenize(&self, point: &[Rational], chart: &[usize]) -> Result<Vec<Rational>> {
        self.check_len(point.len())?;
        let mut x = point.to_vec();
        for (k, &i) in chart.iter().enumerate() {
            let Some(c) = self.component[k] else { continue };
            if x[i].is_zero() {
                return Err(Error::InvalidInput("chart coordinate vanishes".into()));
            }
            let lam = x[i].recip();
            self.apply_torus(&mut x, c, &lam);
        }
        Ok(x)
    }

    /// A chart (one variable index per block; affine blocks use their only
    /// variable) in which `point` is finite, preferring the coordinate of
    /// largest absolute value.
    pub fn chart_for(&self, point: &[Rational]) -> Result<Vec<usize>> {
        self.check_len(point.len())?;
        let mut x = point.to_vec();
        let mut chart = vec![];
        for k in 0..self.blocks.len() {
            let r = self.block_range(k);
            let Some(c) = self.component[k] else {
                chart.push(r.start);
                continue;
            };
            let best = r.clone().filter(|&i| !x[i].is_zero()).max_by(|&a, &b| x[a].abs().cmp(&x[b].abs()));
            let Some(i) = best else {
                return Err(Error::InvalidInput(format!("block {k} is identically zero")));
            };
            let lam = x[i].recip();
            self.apply_torus(&mut x, c, &lam);
            chart.push(i);
        }
        Ok(chart)
    }

    fn apply_torus(&self, x: &mut [Rational], component: usize, lam: &Rational) {
        for (i, xi) in x.iter_mut().enumerate() {
            let e = self.var_degree(i)[component];
            if e != 0 && !xi.is_zero() {
                let f = if e > 0 {
                    num_traits::pow(lam.clone(), e as usize)
                } else {
                    num_traits::pow(lam.recip(), (-e) as usize)
                };
                *xi *= f;
            }
        }
    }

    /// Canonical representative over `F_p`: first nonzero entry of each
    /// projective block equal to 1.
    pub fn normalize_fp(&self, point: &[Fp]) -> Option<Vec<Fp>> {
        let mut x = point.to_vec();
        for k in 0..self.blocks.len() {
            let Some(c) = self.component[k] else { continue };
            let r = self.block_range(k);
            let first = x[r].iter().find(|v| !v.is_zero())?;
            let lam = first.inv()?;
            for i in 0..x.len() {
                let e = self.var_degree(i)[c];
                if e != 0 && !x[i].is_zero() {
                    let f = if e > 0 { lam.pow_u32(e as u32) } else { lam.inv()?.pow_u32((-e) as u32) };
                    x[i] = x[i] * f;
                }
            }
        }
        Some(x)
    }

    /// True iff the two points define the same point of the space.
    pub fn same_point(&self, a: &[Rational], b: &[Rational]) -> Result<bool> {
        Ok(self.normalize(a)? == self.normalize(b)?)
    }

    /// All exponent vectors of the given multidegree. Fails on spaces
    /// with affine blocks, where the set is infinite.
    pub fn monomials_of_degree(&self, degree: &[i64]) -> Result<Vec<Exps>> {
        if degree.len() != self.rank {
            return Err(Error::InvalidInput("multidegree length differs from grading rank".into()));
        }
        if self.component.iter().any(|c| c.is_none()) {
            return Err(Error::InvalidInput("monomial enumeration needs a space without affine blocks".into()));
        }
        let mut out = vec![];
        let mut e = vec![0u32; self.nvars()];
        self.monomials_rec(self.blocks.len(), degree.to_vec(), &mut e, &mut out);
        out.sort();
        Ok(out)
    }

    fn monomials_rec(&self, k: usize, residual: Vec<i64>, e: &mut Exps, out: &mut Vec<Exps>) {
        if k == 0 {
            if residual.iter().all(|&x| x == 0) {
                out.push(e.clone());
            }
            return;
        }
        let b = k - 1;
        let c = self.component[b].expect("projective block");
        let total = residual[c];
        if total < 0 {
            return;
        }
        let r = self.block_range(b);
        let mut comps = vec![];
        compositions(total as u32, r.len(), &mut vec![], &mut comps);
        for comp in comps {
            let mut res = residual.clone();
            for (j, &a) in comp.iter().enumerate() {
                let d = self.var_degree(r.start + j);
                for (x, y) in res.iter_mut().zip(d) {
                    *x -= y * a as i64;
                }
                e[r.start + j] = a;
            }
            self.monomials_rec(b, res, e, out);
            for j in r.clone() {
                e[j] = 0;
            }
        }
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n != self.nvars() {
            return Err(Error::InvalidInput(format!("point has {n} coordinates, space has {}", self.nvars())));
        }
        Ok(())
    }

    /// Number of `F_p`-points when every block is projective.
    pub fn point_count(&self, p: u64) -> Option<u128> {
        let mut n: u128 = 1;
        for b in &self.blocks {
            if b.kind == BlockKind::Affine {
                return None;
            }
            let d = b.names.len() as u32;
            n *= ((p as u128).pow(d) - 1) / (p as u128 - 1);
        }
        Some(n)
    }
}

fn compositions(total: u32, parts: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if parts == 1 {
        cur.push(total);
        out.push(cur.clone());
        cur.pop();
        return;
    }
    for a in 0..=total {
        cur.push(a);
        compositions(total - a, parts - 1, cur, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{int, rat};

    #[test]
    fn bundle_sections_of_h() {
        let s = GradedSpace::bundle_p2();
        let m = s.monomials_of_degree(&[0, 1]).unwrap();
        // Y0, Y1, Y2, X0 Z, X1 Z, X2 Z
        assert_eq!(m.len(), 6);
        assert_eq!(s.monomials_of_degree(&[0, 2]).unwrap().len(), 21);
        assert_eq!(s.monomials_of_degree(&[2, 0]).unwrap().len(), 6);
    }

    #[test]
    fn p1_power_monomials() {
        let s = GradedSpace::p1_power(2);
        assert_eq!(s.monomials_of_degree(&[2, 2]).unwrap().len(), 9);
        assert_eq!(s.monomials_of_degree(&[1, 0]).unwrap().len(), 2);
    }

    #[test]
    fn normalization_is_canonical() {
        let s = GradedSpace::p1_power(2);
        let a = s.normalize(&[rat(-1, 2), int(3), int(4), int(6)]).unwrap();
        assert_eq!(a, vec![int(1), int(-6), int(2), int(3)]);
        assert!(s.same_point(&[int(2), int(0), int(0), int(5)], &[int(1), int(0), int(0), int(1)]).unwrap());
        assert!(s.normalize(&[int(0), int(0), int(1), int(1)]).is_err());
    }

    #[test]
    fn bundle_normalization_moves_z() {
        let s = GradedSpace::bundle_p2();
        // scaling X by 2 divides Z by 2
        let a = s.normalize(&[int(2), int(0), int(0), int(0), int(0), int(0), int(1)]).unwrap();
        assert_eq!(a, vec![int(1), int(0), int(0), int(0), int(0), int(0), int(1)]);
        let b = s.normalize(&[int(2), int(0), int(0), int(1), int(0), int(0), int(1)]).unwrap();
        assert_eq!(b, vec![int(1), int(0), int(0), int(1), int(0), int(0), int(2)]);
    }

    #[test]
    fn point_counts() {
        assert_eq!(GradedSpace::bundle_p2().point_count(5), Some(31 * 156));
        assert_eq!(GradedSpace::p1_power(2).point_count(3), Some(16));
    }

    #[test]
    fn rejects_non_triangular_grading() {
        let b = VarBlock { names: vec!["a".into(), "b".into()], degrees: vec![vec![1], vec![2]], kind: BlockKind::Projective };
        assert!(GradedSpace::new(vec![b]).is_err());
    }
}
