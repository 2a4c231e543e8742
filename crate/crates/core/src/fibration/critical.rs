//! Discriminants of fibrations over a line, branch forms of multisections,
//! and the salient ramification test.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::space::{Defining, FiberedSpace};
use crate::algebra::binary::{disc_binary_form, BinaryForm};
use crate::algebra::field::{format_rational, int, Rational};
use crate::algebra::linalg::det_ring;
use crate::algebra::poly::Poly;
use crate::algebra::resultant::ternary_cubic_discriminant;
use crate::algebra::space::{BlockKind, GradedSpace};
use crate::algebra::unipoly::{interpolate, UniPoly};
use crate::error::{Error, Result};

/// The single base block of a fibration over a line: its variables and whether it is affine.
fn line_base(space: &GradedSpace, base_blocks: &[usize]) -> Result<(Vec<usize>, bool)> {
    match base_blocks {
        [k] => {
            let vars: Vec<usize> = space.block_range(*k).collect();
            let affine = space.block_kind(*k) == BlockKind::Affine;
            if !affine && vars.len() != 2 {
                return Err(Error::InvalidInput("base must be P1 or an affine line".into()));
            }
            Ok((vars, affine))
        }
        _ => Err(Error::InvalidInput("closed-form discriminants need a one-block base".into())),
    }
}

/// A polynomial in the base variables (and no others) as a binary form.
fn base_poly_to_form(p: &Poly, base: &[usize], affine: bool) -> Result<BinaryForm> {
    if affine {
        let u = UniPoly::from_poly(p, base[0])?;
        let d = u.degree().unwrap_or(0);
        return Ok(BinaryForm::from_uni(&u, d));
    }
    let d = p.total_degree().unwrap_or(0) as usize;
    let n = p.nvars();
    let coeffs = (0..=d)
        .map(|i| {
            let mut e = vec![0; n];
            e[base[0]] = i as u32;
            e[base[1]] = (d - i) as u32;
            p.coeff(&e)
        })
        .collect();
    Ok(BinaryForm::new(coeffs))
}

/// Discriminant of a form of degree `d ≤ 4` in the pair `(x, y)`, with
/// coefficients polynomials in the remaining variables.
fn disc_in_pair(f: &Poly, x: usize, y: usize, d: usize) -> Result<Poly> {
    let c = f.partial_eval(&[(y, int(1))]).coefficients_in(x);
    let get = |k: usize| c.get(k).cloned().unwrap_or_else(|| Poly::zero(f.nvars()));
    let highest_first: Vec<Poly> = (0..=d).rev().map(get).collect();
    disc_binary_form(&highest_first)
}

/// Gram matrix over the fiber variables `fv`, entries polynomials in the rest.
pub fn gram_poly(q: &Poly, fv: &[usize]) -> Result<Vec<Vec<Poly>>> {
    let n = q.nvars();
    let mut a = vec![vec![Poly::zero(n); fv.len()]; fv.len()];
    for (e, c) in q.terms() {
        let idx: Vec<usize> =
            fv.iter().enumerate().flat_map(|(k, &i)| std::iter::repeat(k).take(e[i] as usize)).collect();
        if idx.len() != 2 {
            return Err(Error::InvalidInput("form is not quadratic in the fiber variables".into()));
        }
        let mut rest = e.clone();
        for &i in fv {
            rest[i] = 0;
        }
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            a[i][i] = &a[i][i] + &Poly::monomial(rest, c.clone());
        } else {
            let h = Poly::monomial(rest, c / int(2));
            a[i][j] = &a[i][j] + &h;
            a[j][i] = &a[j][i] + &h;
        }
    }
    Ok(a)
}

/// `det(λ A + B)` for square matrices of polynomials; coefficient `k` multiplies `λ^k`.
pub fn pencil_det_poly(a: &[Vec<Poly>], b: &[Vec<Poly>]) -> Vec<Poly> {
    let n = a[0][0].nvars();
    let lam = Poly::var(n + 1, n);
    let map: Vec<usize> = (0..n).collect();
    let m: Vec<Vec<Poly>> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| &(&lam * &x.embed(n + 1, &map)) + &y.embed(n + 1, &map)).collect())
        .collect();
    let keep: Vec<usize> = (0..n).collect();
    det_ring(&m).coefficients_in(n).into_iter().map(|c| c.restrict_vars(&keep)).collect()
}

/// Discriminant of the fibration over its base line, before taking the
/// squarefree part.
pub fn discriminant_form(space: &FiberedSpace) -> Result<BinaryForm> {
    let amb = space.ambient();
    let (base, affine) = line_base(amb, space.base_blocks())?;
    let Defining::Forms(forms) = space.defining() else {
        return Err(Error::InvalidInput("closed-form discriminants are not computed for degeneracy loci".into()));
    };
    let fb = space.fiber_blocks();
    let sizes: Vec<usize> = fb.iter().map(|&k| amb.block_range(k).len()).collect();
    let polys: Vec<&Poly> = forms.iter().map(|f| f.poly()).collect();
    let delta = match (sizes.as_slice(), polys.as_slice()) {
        ([2], [f]) => {
            let c: Vec<usize> = amb.block_range(fb[0]).collect();
            let d = c.iter().map(|&i| f.degree_in(i).unwrap_or(0)).max().unwrap_or(0) as usize;
            disc_in_pair(f, c[0], c[1], d)?
        }
        ([2, 2], [f]) => {
            let a: Vec<usize> = amb.block_range(fb[0]).collect();
            let c: Vec<usize> = amb.block_range(fb[1]).collect();
            let d = disc_in_pair(f, c[0], c[1], 2)?;
            disc_in_pair(&d, a[0], a[1], 4)?
        }
        ([4], [q1, q2]) => {
            let fv = space.fiber_vars();
            let coeffs = pencil_det_poly(&gram_poly(q1, &fv)?, &gram_poly(q2, &fv)?);
            let get = |k: usize| coeffs.get(k).cloned().unwrap_or_else(|| Poly::zero(amb.nvars()));
            disc_binary_form(&[get(4), get(3), get(2), get(1), get(0)])?
        }
        ([3], [f]) => return cubic_pencil_discriminant(space, f, &base, affine),
        _ => {
            return Err(Error::InvalidInput(format!(
                "no closed-form discriminant for fiber blocks {sizes:?} with {} forms",
                polys.len()
            )))
        }
    };
    base_poly_to_form(&delta, &base, affine)
}

/// Cubic pencils: the cubic discriminant at `12 e + 1` base values, interpolated.
fn cubic_pencil_discriminant(space: &FiberedSpace, f: &Poly, base: &[usize], affine: bool) -> Result<BinaryForm> {
    let e = base.iter().map(|&i| f.degree_in(i).unwrap_or(0)).max().unwrap_or(0) as usize;
    let fv = space.fiber_vars();
    let n = 12 * e + 1;
    let nodes: Vec<Rational> = (0..n as i64).map(int).collect();
    let mut vals = vec![];
    for x in &nodes {
        let assign: Vec<(usize, Rational)> =
            if affine { vec![(base[0], x.clone())] } else { vec![(base[0], x.clone()), (base[1], int(1))] };
        let g = f.partial_eval(&assign).restrict_vars(&fv);
        vals.push(if g.is_zero() { Rational::zero() } else { ternary_cubic_discriminant(&g)? });
    }
    let p = interpolate(&nodes, &vals);
    if affine {
        let d = p.degree().unwrap_or(0);
        Ok(BinaryForm::from_uni(&p, d))
    } else {
        Ok(BinaryForm::from_uni(&p, 12 * e))
    }
}

/// Squarefree discriminant of a fibration over a line.
pub fn projection_discriminant(space: &FiberedSpace) -> Result<BinaryForm> {
    let d = discriminant_form(space)?;
    if d.is_zero() {
        return Err(Error::NotAFibration("every fiber is singular".into()));
    }
    Ok(d.squarefree_part())
}

/// A multisection `M` of a fibration. Its map to the base is presented by
/// `cover`, a form of degree `degree` in one P1 block over the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multisection {
    pub name: String,
    pub parent: FiberedSpace,
    /// Extra equations on the parent ambient cutting `M`.
    pub extra: Vec<Poly>,
    /// Base blocks followed by one P1 block.
    pub cover_space: GradedSpace,
    pub cover: Poly,
    pub degree: usize,
}

impl Multisection {
    pub fn new(
        name: &str,
        parent: FiberedSpace,
        extra: Vec<Poly>,
        cover_space: GradedSpace,
        cover: Poly,
        degree: usize,
    ) -> Result<Self> {
        if degree == 0 {
            return Err(Error::NotAMultisection("degree must be positive".into()));
        }
        let last = cover_space.num_blocks().checked_sub(1).ok_or_else(|| Error::InvalidInput("empty cover space".into()))?;
        let r = cover_space.block_range(last);
        if r.len() != 2 || cover_space.block_kind(last) != BlockKind::Projective || cover.nvars() != cover_space.nvars() {
            return Err(Error::NotAMultisection("cover must end in a P1 block".into()));
        }
        let d = cover.terms().map(|(e, _)| r.clone().map(|i| e[i]).sum::<u32>()).max().unwrap_or(0);
        if d as usize != degree {
            return Err(Error::NotAMultisection(format!("cover has fiber degree {d}, expected {degree}")));
        }
        if extra.iter().any(|e| e.nvars() != parent.ambient().nvars()) {
            return Err(Error::InvalidInput("extra equations must live on the parent ambient".into()));
        }
        Ok(Multisection { name: name.to_string(), parent, extra, cover_space, cover, degree })
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        self.parent.contains(p) && self.extra.iter().all(|e| e.eval(p).is_zero())
    }
}

/// Squarefree form vanishing on the branch values of `M -> base`.
pub fn multisection_branch_form(m: &Multisection) -> Result<BinaryForm> {
    let cs = &m.cover_space;
    let last = cs.num_blocks() - 1;
    let r: Vec<usize> = cs.block_range(last).collect();
    if m.degree == 1 {
        return Ok(BinaryForm::from_ints(&[1]));
    }
    if m.degree > 4 {
        return Err(Error::InvalidInput("branch forms are computed for degree at most 4".into()));
    }
    let base_blocks: Vec<usize> = (0..last).collect();
    let (base, affine) = line_base(cs, &base_blocks)?;
    let d = disc_in_pair(&m.cover, r[0], r[1], m.degree)?;
    let f = base_poly_to_form(&d, &base, affine)?;
    if f.is_zero() {
        return Err(Error::NotAMultisection("cover is nowhere separable over the base".into()));
    }
    Ok(f.squarefree_part())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum SalientVerdict {
    Salient {
        /// Branch factor coprime to the discriminant, as a display string.
        factor: String,
        /// A rational branch value in that factor, when one exists.
        value: Option<[String; 2]>,
        /// The discriminant at `value`.
        discriminant_at_value: Option<String>,
    },
    NotSalient,
}

/// Salient iff the squarefree branch form has a factor coprime to `delta`.
pub fn salient_check(delta: &BinaryForm, branch: &BinaryForm) -> Result<SalientVerdict> {
    if branch.is_zero() {
        return Err(Error::NotAMultisection("zero branch form".into()));
    }
    let b = branch.squarefree_part();
    if delta.is_zero() {
        return Ok(SalientVerdict::NotSalient);
    }
    let g = b.gcd(&delta.squarefree_part());
    if g.degree() >= b.degree() {
        return Ok(SalientVerdict::NotSalient);
    }
    let h = b.div_exact(&g).ok_or_else(|| Error::EliminationFailure("gcd does not divide the branch form".into()))?;
    let root = h.rational_roots().into_iter().next();
    let dv = root.as_ref().map(|[u, v]| format_rational(&delta.eval(u, v)));
    Ok(SalientVerdict::Salient {
        factor: h.display("u", "v"),
        value: root.map(|[u, v]| [format_rational(&u), format_rational(&v)]),
        discriminant_at_value: dv,
    })
}

/// Runs [`salient_check`] with the closed-form discriminant of the parent.
pub fn salient_check_multisection(m: &Multisection) -> Result<SalientVerdict> {
    let delta = projection_discriminant(&m.parent)?;
    salient_check(&delta, &multisection_branch_form(m)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::rat;
    use crate::poly;

    fn x1() -> Poly {
        poly!(4;
            [2,0,1,1] => 1,
            [1,1,2,0] => 2, [1,1,1,1] => 2, [1,1,0,2] => 3,
            [0,2,1,1] => 1, [0,2,0,2] => 1)
    }

    /// `c, d` of the Enriques data as polynomials in `t` (variable 0 of 5).
    fn cd() -> (Poly, Poly) {
        let c = poly!(5; [2,0,0,0,0] => -3, [1,0,0,0,0] => -2, [0,0,0,0,0] => 8);
        let d = Poly::from_terms(5, [(vec![2, 0, 0, 0, 0], rat(1, 2)), (vec![1, 0, 0, 0, 0], rat(-15, 2)), (vec![0; 5], int(8))]);
        (c, d)
    }

    fn k3_family() -> FiberedSpace {
        let (c, d) = cd();
        let amb = GradedSpace::affine_times("t", &[vec!["u1".into(), "v2".into(), "v3".into(), "w0".into()]]);
        let w2 = poly!(5; [0,0,0,0,2] => 1);
        let q1 = &poly!(5; [0,2,0,0,0] => 1, [0,0,2,0,0] => -1) - &(&c * &w2);
        let q2 = &poly!(5; [0,2,0,0,0] => 1, [0,0,0,2,0] => -1) - &(&d * &w2);
        FiberedSpace::complete_intersection("k3", amb, vec![q1, q2], vec![0]).unwrap()
    }

    fn uni(p: &Poly) -> UniPoly {
        UniPoly::from_poly(p, 0).unwrap()
    }

    #[test]
    fn x1_discriminant_over_first_line() {
        let sp = FiberedSpace::hypersurface("x1", GradedSpace::p1_power(2), x1(), vec![0]).unwrap();
        let d = projection_discriminant(&sp).unwrap();
        assert!(d.proportional(&BinaryForm::from_ints(&[1, -4, -18, 4, 1])));
    }

    #[test]
    fn constant_family_has_no_critical_values() {
        let sp = FiberedSpace::hypersurface("split", GradedSpace::p1_power(2), poly!(4; [0,0,2,0] => 1, [0,0,0,2] => 1), vec![0])
            .unwrap();
        assert!(projection_discriminant(&sp).unwrap().is_constant_nonzero());
    }

    #[test]
    fn k3_discriminant_radical_is_cd_c_minus_d() {
        let (c, d) = cd();
        let expected = uni(&(&(&c * &d) * &(&c - &d)));
        let got = projection_discriminant(&k3_family()).unwrap();
        assert!(got.proportional(&BinaryForm::from_uni(&expected, 6)));
    }

    fn e_cover(k3: FiberedSpace) -> Multisection {
        let cs = GradedSpace::affine_times("t", &[vec!["v3".into(), "h".into()]]);
        // v3^2 - (t+1)(t+2)/2 h^2
        let cover = Poly::from_terms(
            3,
            [
                (vec![0, 2, 0], int(1)),
                (vec![2, 0, 2], rat(-1, 2)),
                (vec![1, 0, 2], rat(-3, 2)),
                (vec![0, 0, 2], int(-1)),
            ],
        );
        let extra = vec![poly!(5; [0,1,0,0,0] => 1, [1,0,0,0,1] => -1, [0,0,0,0,1] => 3), poly!(5; [0,0,1,0,0] => 1, [1,0,0,0,1] => -2, [0,0,0,0,1] => 1)];
        Multisection::new("E", k3, extra, cs, cover, 2).unwrap()
    }

    #[test]
    fn e_branches_at_minus_one_and_minus_two() {
        let m = e_cover(k3_family());
        let b = multisection_branch_form(&m).unwrap();
        assert!(b.proportional(&BinaryForm::from_ints(&[2, 3, 1])));
        assert!(m.contains(&[int(7), int(4), int(13), int(-6), int(1)]));
    }

    #[test]
    fn salient_at_minus_one() {
        let (c, d) = cd();
        let delta = BinaryForm::from_uni(&uni(&(&(&c * &d) * &(&c - &d))), 6);
        let m = e_cover(k3_family());
        let v = salient_check(&delta, &multisection_branch_form(&m).unwrap()).unwrap();
        match v {
            SalientVerdict::Salient { value, discriminant_at_value, .. } => {
                assert_eq!(value, Some(["-1".to_string(), "1".to_string()]));
                assert_eq!(discriminant_at_value.as_deref(), Some("-1008"));
            }
            SalientVerdict::NotSalient => panic!("expected salient"),
        }
        assert!(matches!(salient_check_multisection(&m).unwrap(), SalientVerdict::Salient { .. }));
        // a branch form inside the discriminant
        let inside = BinaryForm::from_uni(&uni(&c), 2);
        assert_eq!(salient_check(&delta, &inside).unwrap(), SalientVerdict::NotSalient);
        assert!(salient_check(&delta, &BinaryForm::from_ints(&[0, 0])).is_err());
    }

    #[test]
    fn x1_as_multisection_branch_quartic() {
        let sp = FiberedSpace::hypersurface("x1", GradedSpace::p1_power(2), x1(), vec![0]).unwrap();
        let m = Multisection::new("x1", sp, vec![], GradedSpace::p1_power(2), x1(), 2).unwrap();
        assert!(multisection_branch_form(&m).unwrap().proportional(&BinaryForm::from_ints(&[1, -4, -18, 4, 1])));
        // a square cover is nowhere separable
        let sq = poly!(4; [0,0,2,0] => 1);
        let m = Multisection::new("sq", m.parent.clone(), vec![], GradedSpace::p1_power(2), sq, 2).unwrap();
        assert!(matches!(multisection_branch_form(&m), Err(Error::NotAMultisection(_))));
    }

    #[test]
    fn cubic_pencil_discriminant_has_degree_twelve() {
        // s (Y^2 Z - X^3 + 52 X Z^2 - 144 Z^3) + t (X^3 + Y^3 + Z^3 - X Y Z) on P1 x P2
        let c = poly!(3; [0,2,1] => 1, [3,0,0] => -1, [1,0,2] => 52, [0,0,3] => -144);
        let d = poly!(3; [3,0,0] => 1, [0,3,0] => 1, [0,0,3] => 1, [1,1,1] => -1);
        let s = Poly::var(5, 0);
        let t = Poly::var(5, 1);
        let map = [2, 3, 4];
        let f = &(&s * &c.embed(5, &map)) + &(&t * &d.embed(5, &map));
        let amb = GradedSpace::projective_product(&[vec!["s".into(), "t".into()], vec!["x".into(), "y".into(), "z".into()]]);
        let sp = FiberedSpace::hypersurface("pencil", amb, f, vec![0]).unwrap();
        let raw = discriminant_form(&sp).unwrap();
        assert_eq!(raw.degree(), 12);
        assert_eq!(raw.eval(&int(1), &int(0)), ternary_cubic_discriminant(&c).unwrap());
        assert_eq!(raw.eval(&int(0), &int(1)), ternary_cubic_discriminant(&d).unwrap());
        assert_eq!(raw.eval(&int(2), &int(-3)), ternary_cubic_discriminant(&(&c.scale(&int(2)) - &d.scale(&int(3)))).unwrap());
    }
}
