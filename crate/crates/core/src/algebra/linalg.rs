//! Exact dense linear algebra over a field (and determinants over rings).

use super::field::{Field, Ring};

/// Reduced row echelon form in place; returns pivot columns.
pub fn rref<K: Field>(m: &mut [Vec<K>]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return vec![];
    }
    let cols = m[0].len();
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero_elem()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for j in c..cols {
            m[r][j] = m[r][j].clone() * inv.clone();
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero_elem() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let t = m[r][j].clone() * f.clone();
                    m[i][j] = m[i][j].clone() - t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<K: Field>(m: &[Vec<K>]) -> usize {
    let mut m = m.to_vec();
    rref(&mut m).len()
}

/// Basis of `{v : M v = 0}`; `one` supplies the field's unit for empty inputs.
pub fn kernel<K: Field>(m: &[Vec<K>], ncols: usize, one: &K) -> Vec<Vec<K>> {
    let mut m = m.to_vec();
    let pivots = rref(&mut m);
    let zero = one.zero_like();
    let mut basis = vec![];
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![zero.clone(); ncols];
        v[free] = one.clone();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Determinant by Gaussian elimination.
pub fn det<K: Field>(m: &[Vec<K>]) -> K {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n), "square matrix required");
    let mut a = m.to_vec();
    let mut acc = a[0][0].one_like();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero_elem()) else {
            return acc.zero_like();
        };
        if p != c {
            a.swap(p, c);
            acc = -acc;
        }
        let piv = a[c][c].clone();
        acc = acc * piv.clone();
        let inv = piv.inv().unwrap();
        for i in c + 1..n {
            if a[i][c].is_zero_elem() {
                continue;
            }
            let f = a[i][c].clone() * inv.clone();
            for j in c..n {
                let t = a[c][j].clone() * f.clone();
                a[i][j] = a[i][j].clone() - t;
            }
        }
    }
    acc
}

/// Determinant over a commutative ring by Laplace expansion; for small matrices.
pub fn det_ring<R: Ring>(m: &[Vec<R>]) -> R {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n), "square matrix required");
    let cols: Vec<usize> = (0..n).collect();
    laplace(m, 0, &cols)
}

fn laplace<R: Ring>(m: &[Vec<R>], row: usize, cols: &[usize]) -> R {
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc = m[row][cols[0]].zero_like();
    for (k, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero_elem() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = laplace(m, row + 1, &rest);
        let t = m[row][c].clone() * minor;
        acc = if k % 2 == 0 { acc + t } else { acc - t };
    }
    acc
}

/// Solves `M x = b`; `None` if inconsistent. Returns one particular solution.
pub fn solve<K: Field>(m: &[Vec<K>], b: &[K]) -> Option<Vec<K>> {
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut aug: Vec<Vec<K>> = m
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&ncols) {
        return None;
    }
    let zero = b.first()?.zero_like();
    let mut x = vec![zero; ncols];
    for (row, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[row][ncols].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::{int, Fp, Rational};
    use crate::algebra::Poly;

    fn q(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn determinant_and_rank() {
        let m = q(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(det(&m), int(18));
        assert_eq!(det_ring(&m), int(18));
        assert_eq!(rank(&q(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = kernel(&m, 3, &int(1));
        assert_eq!(k.len(), 2);
        for v in k {
            for r in &m {
                let s: Rational = r.iter().zip(&v).map(|(a, b)| a * b).sum();
                assert_eq!(s, int(0));
            }
        }
    }

    #[test]
    fn mod_p_rank_drops() {
        let p = 5;
        let m: Vec<Vec<Fp>> = vec![vec![Fp::new(1, p), Fp::new(2, p)], vec![Fp::new(3, p), Fp::new(1, p)]];
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn polynomial_determinant() {
        let x = Poly::var(1, 0);
        let one = Poly::one(1);
        let m = vec![vec![x.clone(), one.clone()], vec![one.clone(), x.clone()]];
        assert_eq!(det_ring(&m), &x.pow(2) - &one);
    }

    #[test]
    fn solve_consistent_system() {
        let m = q(&[&[1, 1], &[1, -1]]);
        let x = solve(&m, &[int(3), int(1)]).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        assert!(solve(&q(&[&[1, 1], &[1, 1]]), &[int(1), int(2)]).is_none());
    }
}
