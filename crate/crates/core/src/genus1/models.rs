//! Genus-one models: plane cubics, (2,2) curves in P1 x P1, intersections of
//! two quadrics in P3 and double covers `y^2 = quartic(x)`.

use num_traits::Zero;

use super::cubic::PlaneCubic;
use crate::algebra::binary::vieta_other_root;
use crate::algebra::field::Rational;
use crate::algebra::linalg;
use crate::algebra::poly::Poly;
use crate::algebra::space::GradedSpace;
use crate::algebra::unipoly::UniPoly;
use crate::algebra::BinaryForm;
use crate::error::{Error, Result};

/// `F(S1, T1, S2, T2) = 0` of bidegree (2, 2) with a marked point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Biquadratic {
    form: Poly,
    marked: [Rational; 4],
}

impl Biquadratic {
    pub fn new(form: Poly, marked: [Rational; 4]) -> Result<Self> {
        let sp = GradedSpace::p1_power(2);
        if form.nvars() != 4 || sp.homogeneous_degree(&form) != Some(vec![2, 2]) {
            return Err(Error::InvalidModel("expected a nonzero form of bidegree (2,2)".into()));
        }
        let marked = sp.normalize(&marked)?;
        if !form.eval(&marked).is_zero() {
            return Err(Error::NotOnCurve);
        }
        let marked = [marked[0].clone(), marked[1].clone(), marked[2].clone(), marked[3].clone()];
        Ok(Biquadratic { form, marked })
    }

    pub fn form(&self) -> &Poly {
        &self.form
    }

    pub fn marked(&self) -> &[Rational; 4] {
        &self.marked
    }

    pub fn space() -> GradedSpace {
        GradedSpace::p1_power(2)
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        self.form.eval(p).is_zero()
    }

    /// Coefficients `[α, β, γ]` of the quadratic in block `axis` (1 or 2)
    /// with the other block fixed to its value in `point`.
    pub fn restricted_quadratic(&self, point: &[Rational], axis: usize) -> Result<[Rational; 3]> {
        let (free, fixed) = match axis {
            1 => ([0, 1], [2, 3]),
            2 => ([2, 3], [0, 1]),
            _ => return Err(Error::InvalidInput(format!("axis must be 1 or 2, got {axis}"))),
        };
        let r = self.form.partial_eval(&[(fixed[0], point[fixed[0]].clone()), (fixed[1], point[fixed[1]].clone())]);
        let c = |a: u32, b: u32| {
            let mut e = vec![0; 4];
            e[free[0]] = a;
            e[free[1]] = b;
            r.coeff(&e)
        };
        Ok([c(2, 0), c(1, 1), c(0, 2)])
    }

    /// Swaps `point` with the other intersection of its fiber over the
    /// other factor: block `axis` is replaced, the other block is fixed.
    pub fn vieta_involution(&self, point: &[Rational], axis: usize) -> Result<[Rational; 4]> {
        if point.len() != 4 {
            return Err(Error::InvalidInput("points of P1 x P1 have four coordinates".into()));
        }
        if !self.contains(point) {
            return Err(Error::NotOnCurve);
        }
        let q = self.restricted_quadratic(point, axis)?;
        if q.iter().all(|c| c.is_zero()) {
            return Err(Error::DegenerateFiber(format!("the fiber of axis {axis} through the point is contained in the curve")));
        }
        let (i, j) = if axis == 1 { (0, 1) } else { (2, 3) };
        let root = [point[i].clone(), point[j].clone()];
        let [u, v] = vieta_other_root(&q, &root)?;
        let mut out = point.to_vec();
        out[i] = u;
        out[j] = v;
        let out = Self::space().normalize(&out)?;
        Ok([out[0].clone(), out[1].clone(), out[2].clone(), out[3].clone()])
    }

    /// One QRT step: the axis-1 involution followed by the axis-2 involution.
    pub fn qrt_step(&self, point: &[Rational]) -> Result<[Rational; 4]> {
        let a = self.vieta_involution(point, 1)?;
        self.vieta_involution(&a, 2)
    }

    pub fn qrt_inverse(&self, point: &[Rational]) -> Result<[Rational; 4]> {
        let a = self.vieta_involution(point, 2)?;
        self.vieta_involution(&a, 1)
    }

    /// Branch quartic of the projection to block `axis`'s complement:
    /// discriminant of the quadratic in block `axis`, a binary quartic in the other block.
    pub fn branch_quartic(&self, axis: usize) -> Result<BinaryForm> {
        biquadratic_branch_quartic(&self.form, axis)
    }

    /// Smooth iff a branch quartic is squarefree of degree four.
    pub fn is_smooth(&self) -> Result<bool> {
        biquadratic_is_smooth(&self.form)
    }
}

/// `Q1 = Q2 = 0` in P3 with a marked point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadricIntersection {
    q1: Poly,
    q2: Poly,
    marked: [Rational; 4],
}

impl QuadricIntersection {
    pub fn new(q1: Poly, q2: Poly, marked: [Rational; 4]) -> Result<Self> {
        for q in [&q1, &q2] {
            if q.nvars() != 4 || q.is_zero() || q.terms().any(|(e, _)| e.iter().sum::<u32>() != 2) {
                return Err(Error::InvalidModel("expected two quaternary quadratic forms".into()));
            }
        }
        if !q1.eval(&marked).is_zero() || !q2.eval(&marked).is_zero() {
            return Err(Error::NotOnCurve);
        }
        let m = super::cubic::normalize_vec(&marked)?;
        Ok(QuadricIntersection { q1, q2, marked: [m[0].clone(), m[1].clone(), m[2].clone(), m[3].clone()] })
    }

    pub fn quadrics(&self) -> (&Poly, &Poly) {
        (&self.q1, &self.q2)
    }

    pub fn marked(&self) -> &[Rational; 4] {
        &self.marked
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        self.q1.eval(p).is_zero() && self.q2.eval(p).is_zero()
    }

    /// `det(λ A1 + μ A2)` as a binary quartic `Σ c_i λ^i μ^(4-i)`, where
    /// `A_i` is the Gram matrix of `Q_i`.
    pub fn pencil_quartic(&self) -> BinaryForm {
        quadric_pencil_quartic(&self.q1, &self.q2)
    }

    /// Smooth iff the pencil quartic has degree four and no repeated root.
    pub fn is_smooth(&self) -> bool {
        let q = self.pencil_quartic();
        !q.is_zero() && q.is_squarefree()
    }
}

/// Discriminant of a (2,2) form in block `axis` (1 or 2), as a binary
/// quartic in the other block.
pub fn biquadratic_branch_quartic(form: &Poly, axis: usize) -> Result<BinaryForm> {
    let (free, fixed) = match axis {
        1 => ([0usize, 1usize], [2usize, 3usize]),
        2 => ([2, 3], [0, 1]),
        _ => return Err(Error::InvalidInput(format!("axis must be 1 or 2, got {axis}"))),
    };
    let a = form.partial_eval(&[(free[1], crate::algebra::int(1))]).coefficients_in(free[0]);
    let get = |k: usize| a.get(k).cloned().unwrap_or_else(|| Poly::zero(4));
    let (alpha, beta, gamma) = (get(2), get(1), get(0));
    let d = &(&beta * &beta) - &(&(&alpha * &gamma) * &Poly::constant(4, crate::algebra::int(4)));
    // d is a quartic in the fixed block; coefficient of u^i v^(4-i) with u = fixed[0]
    let coeffs = (0..=4)
        .map(|i| {
            let mut e = vec![0; 4];
            e[fixed[0]] = i as u32;
            e[fixed[1]] = 4 - i as u32;
            d.coeff(&e)
        })
        .collect();
    Ok(BinaryForm::new(coeffs))
}

/// A (2,2) form defines a smooth curve iff its branch quartic is squarefree of degree four.
pub fn biquadratic_is_smooth(form: &Poly) -> Result<bool> {
    let b = biquadratic_branch_quartic(form, 1)?;
    Ok(!b.is_zero() && b.is_squarefree())
}

/// `det(λ A1 + μ A2)` for the Gram matrices of two quaternary quadrics,
/// interpolated at five values of `λ`.
pub fn quadric_pencil_quartic(q1: &Poly, q2: &Poly) -> BinaryForm {
    let a = gram(q1);
    let b = gram(q2);
    let nodes: Vec<Rational> = (0..5).map(crate::algebra::int).collect();
    let vals: Vec<Rational> = nodes
        .iter()
        .map(|l| {
            let m: Vec<Vec<Rational>> = (0..4).map(|i| (0..4).map(|j| l * &a[i][j] + &b[i][j]).collect()).collect();
            linalg::det(&m)
        })
        .collect();
    let p = crate::algebra::unipoly::interpolate(&nodes, &vals);
    BinaryForm::from_uni(&p, 4)
}

/// Symmetric Gram matrix with `Q(x) = x^T A x`.
pub fn gram(q: &Poly) -> Vec<Vec<Rational>> {
    let n = q.nvars();
    let mut a = vec![vec![Rational::zero(); n]; n];
    for (e, c) in q.terms() {
        let idx: Vec<usize> = e.iter().enumerate().flat_map(|(i, &k)| std::iter::repeat(i).take(k as usize)).collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            a[i][i] += c;
        } else {
            let h = c / crate::algebra::int(2);
            a[i][j] += &h;
            a[j][i] += &h;
        }
    }
    a
}

/// `y^2 = q(x)` with `deg q ≤ 4` and a marked affine point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quartic {
    q: UniPoly,
    marked: (Rational, Rational),
}

impl Quartic {
    pub fn new(q: UniPoly, marked: (Rational, Rational)) -> Result<Self> {
        match q.degree() {
            Some(3) | Some(4) => {}
            _ => return Err(Error::InvalidModel("quartic model needs degree 3 or 4".into())),
        }
        if &marked.1 * &marked.1 != q.eval(&marked.0) {
            return Err(Error::NotOnCurve);
        }
        if !crate::algebra::is_separable(&q)? {
            return Err(Error::SingularModel("the quartic has a repeated root".into()));
        }
        Ok(Quartic { q, marked })
    }

    pub fn quartic(&self) -> &UniPoly {
        &self.q
    }

    pub fn marked(&self) -> &(Rational, Rational) {
        &self.marked
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenusOneModel {
    PlaneCubic(PlaneCubic),
    Biquadratic(Biquadratic),
    QuadricIntersection(QuadricIntersection),
    Quartic(Quartic),
}

impl GenusOneModel {
    pub fn kind(&self) -> &'static str {
        match self {
            GenusOneModel::PlaneCubic(_) => "plane_cubic",
            GenusOneModel::Biquadratic(_) => "biquadratic",
            GenusOneModel::QuadricIntersection(_) => "quadric_intersection",
            GenusOneModel::Quartic(_) => "quartic",
        }
    }
}

/// Free function form of [`Biquadratic::vieta_involution`].
pub fn vieta_involution(m: &Biquadratic, point: &[Rational], axis: usize) -> Result<[Rational; 4]> {
    m.vieta_involution(point, axis)
}

pub fn qrt_step(m: &Biquadratic, point: &[Rational]) -> Result<[Rational; 4]> {
    m.qrt_step(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::int;
    use crate::poly;

    pub(crate) fn x1() -> Biquadratic {
        let p = poly!(4;
            [2,0,1,1] => 1,
            [1,1,2,0] => 2, [1,1,1,1] => 2, [1,1,0,2] => 3,
            [0,2,1,1] => 1, [0,2,0,2] => 1);
        Biquadratic::new(p, [int(1), int(0), int(0), int(1)]).unwrap()
    }

    fn pt(v: [i64; 4]) -> [Rational; 4] {
        v.map(int)
    }

    #[test]
    fn vieta_and_qrt_on_x1() {
        let m = x1();
        let p = pt([1, 0, 0, 1]);
        assert_eq!(m.vieta_involution(&p, 1).unwrap(), pt([1, -3, 0, 1]));
        assert_eq!(m.qrt_step(&p).unwrap(), pt([1, -3, 2, 3]));
        assert_eq!(m.qrt_inverse(&pt([1, -3, 2, 3])).unwrap(), p);
    }

    #[test]
    fn involutions_square_to_identity() {
        let m = x1();
        let mut p = pt([1, 0, 0, 1]);
        for _ in 0..4 {
            for axis in [1, 2] {
                let q = m.vieta_involution(&p, axis).unwrap();
                assert_eq!(m.vieta_involution(&q, axis).unwrap(), p);
            }
            p = m.qrt_step(&p).unwrap();
            assert!(m.contains(&p));
        }
    }

    #[test]
    fn branch_quartic_of_x1() {
        // discriminant in (S2:T2) as a quartic in (S1:T1), coefficients of S1^i T1^(4-i)
        assert_eq!(x1().branch_quartic(2).unwrap(), BinaryForm::from_ints(&[1, -4, -18, 4, 1]));
        assert_eq!(x1().branch_quartic(1).unwrap(), BinaryForm::from_ints(&[9, 8, 12, 8, 4]));
        assert!(x1().is_smooth().unwrap());
    }

    #[test]
    fn bad_axis_and_off_curve() {
        let m = x1();
        assert!(m.vieta_involution(&pt([1, 0, 0, 1]), 3).is_err());
        assert_eq!(m.vieta_involution(&pt([1, 1, 1, 1]), 1), Err(Error::NotOnCurve));
    }

    #[test]
    fn quadric_pencil_and_quartic_models() {
        // z0 z3 - z1 z2 and z0^2 - z1^2 + z2^2 - 2 z3^2 ... through (1:1:1:1)
        let q1 = poly!(4; [1,0,0,1] => 1, [0,1,1,0] => -1);
        let q2 = poly!(4; [2,0,0,0] => 1, [0,2,0,0] => 1, [0,0,2,0] => 1, [0,0,0,2] => -3);
        let m = QuadricIntersection::new(q1, q2, pt([1, 1, 1, 1])).unwrap();
        assert_eq!(m.pencil_quartic().degree(), 4);
        assert!(Quartic::new(UniPoly::from_ints(&[1, 0, 0, 0, 1]), (int(0), int(1))).is_ok());
        assert!(Quartic::new(UniPoly::from_ints(&[0, 0, 1, 0, 1]), (int(0), int(0))).is_err());
    }
}
