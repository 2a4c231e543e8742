//! Fixed input data of the three constructions.

use crate::algebra::field::{int, rat, Rational};
use crate::algebra::poly::Poly;
use crate::algebra::space::GradedSpace;
use crate::algebra::unipoly::UniPoly;
use crate::fibration::{FiberedSpace, Multisection};
use crate::poly;

/// `S1^2 S2 T2 + S1 T1 (2 S2^2 + 2 S2 T2 + 3 T2^2) + T1^2 T2 (S2 + T2)` on `(P1)^2`.
pub fn x1_form() -> Poly {
    poly!(4;
        [2,0,1,1] => 1,
        [1,1,2,0] => 2, [1,1,1,1] => 2, [1,1,0,2] => 3,
        [0,2,1,1] => 1, [0,2,0,2] => 1)
}

/// `c = -3t^2 - 2t + 8`.
pub fn c_poly() -> UniPoly {
    UniPoly::from_ints(&[8, -2, -3])
}

/// `d = (t^2 - 15t + 16)/2`.
pub fn d_poly() -> UniPoly {
    UniPoly::new(vec![int(8), rat(-15, 2), rat(1, 2)])
}

/// `f = (t^2 + 1)/2`.
pub fn f_poly() -> UniPoly {
    UniPoly::new(vec![rat(1, 2), int(0), rat(1, 2)])
}

/// `c · d · (c - d)`.
pub fn reduced_discriminant() -> UniPoly {
    let (c, d) = (c_poly(), d_poly());
    &(&c * &d) * &(&c - &d)
}

fn k3_ambient() -> GradedSpace {
    GradedSpace::affine_times("t", &[vec!["u1".into(), "v2".into(), "v3".into(), "w0".into()]])
}

/// The K3 double cover over the `t`-line: `u1^2 - v2^2 = c w0^2`, `u1^2 - v3^2 = d w0^2`.
/// Its fibers depend only on `t`, so the base `C: w^2 = f(t)` enters through `t`.
pub fn k3_space() -> FiberedSpace {
    let w2 = poly!(5; [0,0,0,0,2] => 1);
    let c = c_poly().to_poly_in(5, 0);
    let d = d_poly().to_poly_in(5, 0);
    let q1 = &poly!(5; [0,2,0,0,0] => 1, [0,0,2,0,0] => -1) - &(&c * &w2);
    let q2 = &poly!(5; [0,2,0,0,0] => 1, [0,0,0,2,0] => -1) - &(&d * &w2);
    FiberedSpace::complete_intersection("k3_double_cover", k3_ambient(), vec![q1, q2], vec![0]).expect("valid data")
}

/// `E: u1 = t - 3, v2 = 2t - 1` inside the K3 surface, covering the base by `v3`.
pub fn e_multisection() -> Multisection {
    let cs = GradedSpace::affine_times("t", &[vec!["v3".into(), "h".into()]]);
    let cover = Poly::from_terms(
        3,
        [(vec![0, 2, 0], int(1)), (vec![2, 0, 2], rat(-1, 2)), (vec![1, 0, 2], rat(-3, 2)), (vec![0, 0, 2], int(-1))],
    );
    let extra = vec![
        poly!(5; [0,1,0,0,0] => 1, [1,0,0,0,1] => -1, [0,0,0,0,1] => 3),
        poly!(5; [0,0,1,0,0] => 1, [1,0,0,0,1] => -2, [0,0,0,0,1] => 1),
    ];
    Multisection::new("E", k3_space(), extra, cs, cover, 2).expect("valid data")
}

/// Second-row quadrics `q0, q1, q2` of `v` in `Y0, Y1, Y2`, embedded by `map`.
fn v_row2(n: usize, map: &[usize]) -> Vec<Poly> {
    [
        poly!(3; [2,0,0] => 2, [0,2,0] => 6, [0,1,1] => 4, [0,0,2] => -16),
        poly!(3; [2,0,0] => 2, [0,2,0] => -1, [0,1,1] => 15, [0,0,2] => -16),
        poly!(3; [0,2,0] => 1, [0,0,2] => 1),
    ]
    .iter()
    .map(|q| q.embed(n, map))
    .collect()
}

fn x_squares(n: usize) -> Vec<Poly> {
    (0..3)
        .map(|i| {
            let mut e = vec![0; n];
            e[i] = 2;
            Poly::monomial(e, int(1))
        })
        .collect()
}

/// The rank one locus `S'` of `v` on `P2 x P2`, fibered over the `X` plane.
pub fn enriques_space() -> FiberedSpace {
    let amb = GradedSpace::projective_product(&[
        vec!["X0".into(), "X1".into(), "X2".into()],
        vec!["Y0".into(), "Y1".into(), "Y2".into()],
    ]);
    FiberedSpace::degeneracy("enriques_compactification", amb, vec![x_squares(6), v_row2(6, &[3, 4, 5])], vec![0])
        .expect("valid data")
}

/// Index of the bundle coordinate `Z` among the bundle variables.
pub const BUNDLE_Z: usize = 6;
/// Index of `Z` among the fiber variables `Y0, Y1, Y2, Z`.
pub const FIBER_Z: usize = 3;

/// The entries `P2, Q2, R2` of `u` on `P(O^3 + O(1))` over `P2`.
pub fn u_row2() -> Vec<Poly> {
    let n = 7;
    let v = v_row2(n, &[3, 4, 5]);
    let x = |i: usize| Poly::var(n, i);
    let y = |i: usize| Poly::var(n, 3 + i);
    let z = Poly::var(n, BUNDLE_Z);
    let z2 = &z * &z;
    let sq = |i: usize| &x(i) * &x(i);
    let xy = |i: usize| &x(i) * &y(i);
    let entry = |a: usize, b: usize, k: usize| {
        let quad = &(&sq(a) + &sq(b)) * &z2;
        let lin = &(&xy(a) + &xy(b)) * &z;
        &(&quad + &lin) + &v[k]
    };
    vec![entry(1, 2, 0), entry(0, 2, 1), entry(0, 1, 2)]
}

/// The threefold: rank one locus of `u`, fibered over the `X` plane.
pub fn threefold_space() -> FiberedSpace {
    FiberedSpace::degeneracy("threefold", GradedSpace::bundle_p2(), vec![x_squares(7), u_row2()], vec![0]).expect("valid data")
}

/// `y^2 z = x^3 - 52 x z^2 + 144 z^3`.
pub fn default_cubic() -> Poly {
    poly!(3; [0,2,1] => 1, [3,0,0] => -1, [1,0,2] => 52, [0,0,3] => -144)
}

pub fn default_origin() -> [Rational; 3] {
    [int(0), int(1), int(0)]
}

pub fn default_point() -> [Rational; 3] {
    [int(0), int(12), int(1)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fibration::degeneracy_membership;

    #[test]
    fn c_minus_d_matches_displayed_factor() {
        assert_eq!(&c_poly() - &d_poly(), UniPoly::new(vec![int(0), rat(11, 2), rat(-7, 2)]));
        assert_eq!(c_poly().eval(&int(7)), int(-153));
        assert_eq!(d_poly().eval(&int(7)), int(-20));
        assert_eq!(reduced_discriminant().eval(&int(-1)), int(-1008));
    }

    #[test]
    fn u_restricts_to_v() {
        let u = u_row2();
        let v = v_row2(7, &[3, 4, 5]);
        for (a, b) in u.iter().zip(&v) {
            assert_eq!(a.partial_eval(&[(BUNDLE_Z, int(0))]), *b);
        }
    }

    #[test]
    fn lifted_point_lies_on_both_loci() {
        let p: Vec<Rational> = [13, 6, 5, 4, 7, 1].iter().map(|&x| int(x)).collect();
        assert!(degeneracy_membership(&enriques_space(), &p).unwrap());
        let mut q = p.clone();
        q.push(int(0));
        assert!(threefold_space().contains(&q));
        assert!(e_multisection().contains(&[int(7), int(4), int(13), int(-6), int(1)]));
    }
}
