//! Exhaustive enumeration of `F_p`-points of graded ambient spaces.
//!
//! Every block is enumerated independently: projective blocks by their
//! normalized representatives (first nonzero coordinate equal to 1), affine
//! blocks by all residues. Because the grading is triangular this is also
//! a complete set of orbit representatives for the bundle `P(O^3 + O(1))`:
//! once the `X` block is normalized, the residual torus only rescales the
//! `(Y, Z)` block.

use crate::algebra::field::Fp;
use crate::algebra::space::{BlockKind, GradedSpace};
use crate::error::{Error, Result};

/// Normalized points of `P^{n-1}(F_p)` in lexicographic order.
pub fn projective_points(n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut out = vec![];
    for lead in 0..n {
        let free = n - 1 - lead;
        let count = p.pow(free as u32);
        for mut idx in 0..count {
            let mut v = vec![0u64; n];
            v[lead] = 1;
            for j in (lead + 1..n).rev() {
                v[j] = idx % p;
                idx /= p;
            }
            out.push(v);
        }
    }
    out
}

/// Indexable product of per-block point lists.
#[derive(Clone, Debug)]
pub struct AmbientPoints {
    p: u64,
    nvars: usize,
    ranges: Vec<std::ops::Range<usize>>,
    lists: Vec<Vec<Vec<u64>>>,
    len: u128,
}

impl AmbientPoints {
    pub fn new(space: &GradedSpace, p: u64) -> Self {
        let mut ranges = vec![];
        let mut lists = vec![];
        let mut len: u128 = 1;
        for k in 0..space.num_blocks() {
            let r = space.block_range(k);
            let list = match space.block_kind(k) {
                BlockKind::Projective => projective_points(r.len(), p),
                BlockKind::Affine => (0..p).map(|v| vec![v]).collect(),
            };
            len *= list.len() as u128;
            ranges.push(r);
            lists.push(list);
        }
        AmbientPoints { p, nvars: space.nvars(), ranges, lists, len }
    }

    pub fn len(&self) -> u128 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// The point of index `idx`; the last block varies fastest.
    pub fn point_into(&self, mut idx: u128, out: &mut [u64]) {
        for k in (0..self.lists.len()).rev() {
            let n = self.lists[k].len() as u128;
            let v = &self.lists[k][(idx % n) as usize];
            idx /= n;
            out[self.ranges[k].clone()].copy_from_slice(v);
        }
    }

    pub fn point(&self, idx: u128) -> Vec<u64> {
        let mut out = vec![0; self.nvars];
        self.point_into(idx, &mut out);
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = Vec<u64>> + '_ {
        (0..self.len).map(move |i| self.point(i))
    }

    /// Splits the index range into at most `parts` contiguous chunks.
    pub fn chunks(&self, parts: usize) -> Vec<std::ops::Range<u128>> {
        let parts = parts.max(1) as u128;
        let step = self.len.div_ceil(parts).max(1);
        let mut out = vec![];
        let mut s = 0;
        while s < self.len {
            out.push(s..(s + step).min(self.len));
            s += step;
        }
        out
    }
}

/// All `F_p`-points of the ambient, one per torus orbit.
pub fn enumerate_points(ambient: &GradedSpace, p: u64) -> impl Iterator<Item = Vec<Fp>> {
    let pts = AmbientPoints::new(ambient, p);
    (0..pts.len()).map(move |i| pts.point(i).into_iter().map(|v| Fp::from_u64(v, p)).collect())
}

/// Fails with `TooLarge` when the ambient has more than `budget` points.
pub fn check_budget(pts: &AmbientPoints, budget: u128) -> Result<()> {
    if pts.len() > budget {
        return Err(Error::TooLarge(format!("{} ambient points exceed the budget {budget}", pts.len())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn closed_form_counts() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            assert_eq!(projective_points(3, p).len() as u64, p * p + p + 1);
            assert_eq!(projective_points(4, p).len() as u64, p * p * p + p * p + p + 1);
            let s = GradedSpace::p1_power(2);
            assert_eq!(enumerate_points(&s, p).count() as u64, (p + 1) * (p + 1));
            let b = GradedSpace::bundle_p2();
            assert_eq!(AmbientPoints::new(&b, p).len(), b.point_count(p).unwrap());
        }
        assert_eq!(enumerate_points(&GradedSpace::projective("X", 2), 5).count(), 31);
        assert_eq!(enumerate_points(&GradedSpace::projective("X", 3), 5).count(), 156);
        assert_eq!(enumerate_points(&GradedSpace::p1_power(2), 3).count(), 16);
    }

    #[test]
    fn representatives_are_distinct_orbits() {
        let b = GradedSpace::bundle_p2();
        let seen: HashSet<Vec<Fp>> = enumerate_points(&b, 3).collect();
        assert_eq!(seen.len() as u128, b.point_count(3).unwrap());
        for x in &seen {
            assert_eq!(b.normalize_fp(x).as_ref(), Some(x));
        }
    }

    #[test]
    fn chunks_cover_the_range() {
        let pts = AmbientPoints::new(&GradedSpace::p1_power(3), 5);
        let cs = pts.chunks(7);
        assert_eq!(cs.first().unwrap().start, 0);
        assert_eq!(cs.last().unwrap().end, pts.len());
        assert!(cs.windows(2).all(|w| w[0].end == w[1].start));
    }
}
