//! Reduction of genus-one models with a rational point to short Weierstrass form.
//!
//! Every model is routed through a smooth plane cubic: (2,2) curves via the
//! Segre embedding, double covers via `(x, y) -> (1, x, x^2, y)`, and quadric
//! intersections by projection from the marked point. The cubic is then
//! brought to Weierstrass form with functions of pole order 2 and 3 at the
//! marked point.

use num_traits::{One, Signed, Zero};

use super::birational::{BirationalRecord, Curve, MapStep};
use super::cubic::{cross, dot, proportional, second_point_on_line, PlaneCubic, P2};
use super::models::{Biquadratic, GenusOneModel, QuadricIntersection, Quartic};
use super::weierstrass::WeierstrassCurve;
use crate::algebra::field::{int, Rational};
use crate::algebra::linalg;
use crate::algebra::poly::Poly;
use crate::algebra::space::GradedSpace;
use crate::error::{Error, Result};

/// Trial-division bound when minimizing the Weierstrass model.
const MINIMIZE_BOUND: u64 = 100_000;

/// Weierstrass model of `m` with `m`'s marked point sent to infinity, and
/// the birational map from the model's natural coordinates.
///
/// Natural coordinates: `(x0:x1:x2)` for plane cubics, `(S1:T1),(S2:T2)`
/// for (2,2) curves, `(z0:..:z3)` for quadric intersections and
/// `(x : y : 1)` for double covers.
pub fn model_to_weierstrass(m: &GenusOneModel) -> Result<(WeierstrassCurve, BirationalRecord)> {
    let mut steps = vec![];
    let cubic = match m {
        GenusOneModel::PlaneCubic(c) => c.clone(),
        GenusOneModel::Biquadratic(b) => {
            if !b.is_smooth()? {
                return Err(Error::SingularModel("the (2,2) curve has a singular point".into()));
            }
            let (seg, qi) = segre_step(b)?;
            steps.push(seg);
            let (proj, c) = projection_step(&qi)?;
            steps.push(proj);
            c
        }
        GenusOneModel::QuadricIntersection(q) => {
            if !q.is_smooth() {
                return Err(Error::SingularModel("the pencil of quadrics is degenerate".into()));
            }
            let (proj, c) = projection_step(q)?;
            steps.push(proj);
            c
        }
        GenusOneModel::Quartic(q) => {
            let (qs, qi) = quartic_step(q)?;
            steps.push(qs);
            let (proj, c) = projection_step(&qi)?;
            steps.push(proj);
            c
        }
    };
    let (step, curve) = cubic_to_weierstrass(&cubic)?;
    steps.push(step);
    Ok((curve, BirationalRecord::new(steps)?))
}

fn p3() -> GradedSpace {
    GradedSpace::projective("z", 3)
}

fn var(n: usize, i: usize) -> Poly {
    Poly::var(n, i)
}

fn c(n: usize, v: Rational) -> Poly {
    Poly::constant(n, v)
}

/// Linear form `Σ v_i x_i` in `n = v.len()` variables.
fn lin_form(v: &[Rational]) -> Poly {
    let n = v.len();
    v.iter().enumerate().fold(Poly::zero(n), |acc, (i, a)| acc + var(n, i).scale(a))
}

fn segre_step(b: &Biquadratic) -> Result<(MapStep, QuadricIntersection)> {
    let pair = |e: &[u32]| -> (usize, usize) {
        // z index of (f, g) is 2 [f = T1] + [g = T2]
        let firsts: Vec<usize> = std::iter::repeat(0).take(e[0] as usize).chain(std::iter::repeat(1).take(e[1] as usize)).collect();
        let seconds: Vec<usize> = std::iter::repeat(0).take(e[2] as usize).chain(std::iter::repeat(1).take(e[3] as usize)).collect();
        (2 * firsts[0] + seconds[0], 2 * firsts[1] + seconds[1])
    };
    let mut f2 = Poly::zero(4);
    for (e, coef) in b.form().terms() {
        let (i, j) = pair(e);
        f2 = f2 + (&var(4, i) * &var(4, j)).scale(coef);
    }
    let q1 = &(&var(4, 0) * &var(4, 3)) - &(&var(4, 1) * &var(4, 2));
    let s = |i, j| &var(4, i) * &var(4, j);
    let forward = vec![s(0, 2), s(0, 3), s(1, 2), s(1, 3)];
    let backward = vec![var(4, 0), var(4, 2), var(4, 0), var(4, 1)];
    let mk = b.marked();
    let marked = [&mk[0] * &mk[2], &mk[0] * &mk[3], &mk[1] * &mk[2], &mk[1] * &mk[3]];
    let qi = QuadricIntersection::new(q1.clone(), f2.clone(), marked)?;
    let step = MapStep {
        name: "segre".into(),
        source: Curve::new(Biquadratic::space(), vec![b.form().clone()]),
        target: Curve::new(p3(), vec![q1, f2]),
        forward,
        backward,
    };
    Ok((step, qi))
}

fn quartic_step(q: &Quartic) -> Result<(MapStep, QuadricIntersection)> {
    let a: Vec<Rational> = (0..=4).map(|k| q.quartic().coeff(k)).collect();
    // source (X : Y : Z) with Y^2 Z^2 = Σ a_k X^k Z^(4-k)
    let mut src = &(&var(3, 1) * &var(3, 1)) * &(&var(3, 2) * &var(3, 2));
    for (k, ak) in a.iter().enumerate() {
        src = src - (&var(3, 0).pow(k as u32) * &var(3, 2).pow(4 - k as u32)).scale(ak);
    }
    // z = (Z^2, XZ, X^2, YZ)
    let z = |i, j| &var(4, i) * &var(4, j);
    let q1 = z(0, 2) - z(1, 1);
    let q2 = z(3, 3)
        - z(2, 2).scale(&a[4])
        - z(1, 2).scale(&a[3])
        - z(0, 2).scale(&a[2])
        - z(0, 1).scale(&a[1])
        - z(0, 0).scale(&a[0]);
    let w = |i, j| &var(3, i) * &var(3, j);
    let forward = vec![w(2, 2), w(0, 2), w(0, 0), w(1, 2)];
    let backward = vec![var(4, 1), var(4, 3), var(4, 0)];
    let (x0, y0) = q.marked();
    let marked = [Rational::one(), x0.clone(), x0 * x0, y0.clone()];
    let qi = QuadricIntersection::new(q1.clone(), q2.clone(), marked)?;
    let step = MapStep {
        name: "quartic".into(),
        source: Curve::new(GradedSpace::projective("x", 2), vec![src]),
        target: Curve::new(p3(), vec![q1, q2]),
        forward,
        backward,
    };
    Ok((step, qi))
}

/// Projection of `Q1 = Q2 = 0` from its marked point onto a plane cubic.
fn projection_step(qi: &QuadricIntersection) -> Result<(MapStep, PlaneCubic)> {
    let p0 = qi.marked().clone();
    let j = (0..4).max_by(|&a, &b| p0[a].abs().cmp(&p0[b].abs())).expect("four coordinates");
    let idx: Vec<usize> = (0..4).filter(|&i| i != j).collect();
    // z = Σ u_a e_{idx[a]} + u3 p0
    let images: Vec<Poly> = (0..4)
        .map(|k| {
            let mut p = Poly::zero(4);
            if let Some(a) = idx.iter().position(|&i| i == k) {
                p = p + var(4, a);
            }
            p + var(4, 3).scale(&p0[k])
        })
        .collect();
    let (q1, q2) = qi.quadrics();
    let split = |q: &Poly| -> Result<(Poly, Poly)> {
        let cs = q.compose(&images).coefficients_in(3);
        if cs.len() > 2 && !cs[2].is_zero() {
            return Err(Error::NotOnCurve);
        }
        let k = cs[0].restrict_vars(&[0, 1, 2]);
        let l = cs.get(1).cloned().unwrap_or_else(|| Poly::zero(4)).restrict_vars(&[0, 1, 2]);
        Ok((l, k))
    };
    let (l1, k1) = split(q1)?;
    let (l2, k2) = split(q2)?;
    let lv = |l: &Poly| -> [Rational; 3] { [0, 1, 2].map(|i| l.coeff(&unit(3, i))) };
    let (v1, v2) = (lv(&l1), lv(&l2));
    let image = cross(&v1, &v2);
    if image.iter().all(|x| x.is_zero()) {
        return Err(Error::SingularPoint);
    }
    let g = &(&k1 * &l2) - &(&k2 * &l1);
    let cubic = PlaneCubic::new(g.clone(), image)?;
    // u_a = z_{idx[a]} - p0_{idx[a]} z_j / p0_j
    let forward: Vec<Poly> = idx
        .iter()
        .map(|&i| var(4, i) - var(4, j).scale(&(&p0[i] / &p0[j])))
        .collect();
    let backward: Vec<Poly> = (0..4)
        .map(|k| {
            let mut p = (-&k1).scale(&p0[k]);
            if let Some(a) = idx.iter().position(|&i| i == k) {
                p = p + &var(3, a) * &l1;
            }
            p
        })
        .collect();
    let step = MapStep {
        name: "projection".into(),
        source: Curve::new(p3(), vec![q1.clone(), q2.clone()]),
        target: Curve::new(GradedSpace::projective("u", 2), vec![g]),
        forward,
        backward,
    };
    Ok((step, cubic))
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

/// `F(v)` for a vector of polynomials `v`.
fn eval_at_polys(f: &Poly, v: &[Poly]) -> Poly {
    f.compose(v)
}

fn cross_polys(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    vec![
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

/// A line through `p` other than `avoid`.
fn line_through(p: &P2, avoid: &P2) -> P2 {
    for i in 0..3 {
        let mut e = [Rational::zero(), Rational::zero(), Rational::zero()];
        e[i] = Rational::one();
        let l = cross(p, &e);
        if l.iter().any(|x| !x.is_zero()) && !proportional(&l, avoid) {
            return l;
        }
    }
    unreachable!("three coordinate points cannot all lie on one line through p")
}

/// A coordinate line `x_i = 0` missing `p`.
fn line_missing(p: &P2) -> P2 {
    let i = (0..3).find(|&i| !p[i].is_zero()).expect("nonzero point");
    let mut e = [Rational::zero(), Rational::zero(), Rational::zero()];
    e[i] = Rational::one();
    e
}

/// Solves `Σ x_k B_k = 0` for a one-dimensional kernel, with `B_k` polynomials.
fn unique_relation(basis: &[Poly]) -> Result<Vec<Rational>> {
    let mut monos: Vec<Vec<u32>> = basis.iter().flat_map(|b| b.terms().map(|(e, _)| e.clone())).collect();
    monos.sort();
    monos.dedup();
    let rows: Vec<Vec<Rational>> = monos.iter().map(|e| basis.iter().map(|b| b.coeff(e)).collect()).collect();
    let ker = linalg::kernel(&rows, basis.len(), &Rational::one());
    if ker.len() != 1 {
        return Err(Error::EliminationFailure(format!("expected a unique Weierstrass relation, found {}", ker.len())));
    }
    Ok(ker.into_iter().next().expect("one kernel vector"))
}

/// Short Weierstrass model of a smooth plane cubic with its marked point at infinity.
pub fn cubic_to_weierstrass(cubic: &PlaneCubic) -> Result<(MapStep, WeierstrassCurve)> {
    let f = cubic.form().clone();
    let o = cubic.origin().clone();
    let n = 3;
    let t = cubic.gradient(&o);
    let o2 = cubic.third_point(&o, &o)?;
    let flex = proportional(&o2, &o);
    let tp = lin_form(&t);

    // x = M/T and y = N/T (flex) or y = Q/T^2 (otherwise)
    let (m, yq, hpoly, extra): (P2, Poly, Poly, Vec<Poly>) = if flex {
        let m = line_through(&o, &t);
        let nl = line_missing(&o);
        (m, lin_form(&nl), tp.clone(), vec![f.clone().scale(&int(-1))])
    } else {
        let m = line_through(&o2, &t);
        let q = conic_for_y(cubic, &o, &o2, &t, &m)?;
        let extra = (0..3).map(|i| -(&f * &var(n, i))).collect();
        (m, q, &tp * &tp, extra)
    };
    let mp = lin_form(&m);
    // Xh = x h, Yh = y h with h = T or T^2
    let (xh, yh) = if flex { (mp.clone(), yq.clone()) } else { (&mp * &tp, yq.clone()) };
    // α Y^2 + a1 X Y + a3 Y = β X^3 + a2 X^2 + a4 X + a6, each times h^2 / T^k
    let basis: Vec<Poly> = {
        let t1 = tp.clone();
        if flex {
            vec![
                &(&yq * &yq) * &t1,
                &(&mp * &yq) * &t1,
                &yq * &(&t1 * &t1),
                -mp.pow(3),
                -(&mp.pow(2) * &t1),
                -(&mp * &t1.pow(2)),
                -t1.pow(3),
            ]
        } else {
            vec![
                &yq * &yq,
                &(&mp * &yq) * &t1,
                &yq * &t1.pow(2),
                -(&mp.pow(3) * &t1),
                -(&mp.pow(2) * &t1.pow(2)),
                -(&mp * &t1.pow(3)),
                -t1.pow(4),
            ]
        }
    };
    let mut all = basis.clone();
    all.extend(extra);
    let rel = unique_relation(&all)?;
    let (alpha, a1, a3, beta, a2, a4, a6) =
        (&rel[0], &rel[1], &rel[2], &rel[3], &rel[4], &rel[5], &rel[6]);
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::EliminationFailure("Weierstrass relation lacks y^2 or x^3".into()));
    }
    let ab = alpha * beta;
    let ab2 = &ab * beta;
    let aa1 = a1 / &ab;
    let aa3 = a3 / (&ab * &ab);
    let aa2 = a2 / &ab2;
    let aa4 = a4 / (&ab * &ab2);
    let aa6 = a6 / (&ab * &ab * &ab2);
    let b2 = &aa1 * &aa1 + int(4) * &aa2;
    let b4 = int(2) * &aa4 + &aa1 * &aa3;
    let b6 = &aa3 * &aa3 + int(4) * &aa6;
    let c4 = &b2 * &b2 - int(24) * &b4;
    let c6 = -(&b2 * &b2 * &b2) + int(36) * &b2 * &b4 - int(216) * &b6;
    let raw = WeierstrassCurve::new(int(-27) * &c4, int(-54) * &c6)
        .map_err(|_| Error::SingularModel("the plane cubic is singular".into()))?;
    let (curve, u) = raw.minimal_integral(MINIMIZE_BOUND);
    let u2 = &u * &u;
    let u3 = &u2 * &u;

    // forward: X~ h = Xh / (αβ), Y~ h = Yh / (αβ^2)
    let xt = xh.scale(&ab.recip());
    let yt = yh.scale(&ab2.recip());
    let xo = (xt.scale(&int(36)) + hpoly.scale(&(int(3) * &b2))).scale(&u2);
    let yo = (yt.scale(&int(2)) + xt.scale(&aa1) + hpoly.scale(&aa3)).scale(&(int(108) * &u3));
    let forward = vec![xo, yo, hpoly];

    // backward, in Weierstrass coordinates (X, Y, Z)
    let (wx, wy, wz) = (var(3, 0), var(3, 1), var(3, 2));
    let xtz = (wx.scale(&u2.recip()) - wz.scale(&(int(3) * &b2))).scale(&Rational::new(1.into(), 36.into()));
    let ytz = (wy.scale(&(u3.recip() / int(108))) - xtz.scale(&aa1) - wz.scale(&aa3)).scale(&Rational::new(1.into(), 2.into()));
    let x_h = xtz.scale(&ab);
    let y_h = ytz.scale(&ab2);
    let l1: Vec<Poly> = (0..3).map(|i| wz.scale(&m[i]) - x_h.scale(&t[i])).collect();
    let backward = if flex {
        let nl = line_missing(&o);
        let l2: Vec<Poly> = (0..3).map(|i| wz.scale(&nl[i]) - y_h.scale(&t[i])).collect();
        cross_polys(&l1, &l2)
    } else {
        let v = line_missing(&o2);
        let vp: Vec<Poly> = v.iter().map(|a| c(3, a.clone())).collect();
        let d = cross_polys(&l1, &vp);
        let td = d.iter().zip(&t).fold(Poly::zero(3), |acc, (di, ti)| acc + di.scale(ti));
        let qd = eval_at_polys(&yq, &d);
        let gq: Vec<Rational> = (0..3).map(|i| yq.derivative(i).eval(&o2)).collect();
        let gd = d.iter().zip(&gq).fold(Poly::zero(3), |acc, (di, gi)| acc + di.scale(gi));
        let coef_o2 = &(&y_h * &(&td * &td)) - &(&wz * &qd);
        let coef_d = &wz * &gd;
        (0..3).map(|i| coef_o2.scale(&o2[i]) + &coef_d * &d[i]).collect()
    };
    let target = Curve::new(GradedSpace::projective("w", 2), vec![weierstrass_form(&curve)]);
    let step = MapStep {
        name: "weierstrass".into(),
        source: Curve::new(GradedSpace::projective("u", 2), vec![f]),
        target,
        forward,
        backward,
    };
    Ok((step, curve))
}

/// `Y^2 Z - X^3 - A X Z^2 - B Z^3`.
pub fn weierstrass_form(e: &WeierstrassCurve) -> Poly {
    let (x, y, z) = (var(3, 0), var(3, 1), var(3, 2));
    &(&(&y * &y) * &z) - &x.pow(3) - (&x * &z.pow(2)).scale(e.a()) - z.pow(3).scale(e.b())
}

/// A conic `Q` through `O`, tangent to the cubic at `O'`, outside `span(T^2, TM)`.
fn conic_for_y(cubic: &PlaneCubic, o: &P2, o2: &P2, t: &P2, m: &P2) -> Result<Poly> {
    let monos: Vec<Vec<u32>> = vec![vec![2, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![0, 2, 0], vec![0, 1, 1], vec![0, 0, 2]];
    let mono_polys: Vec<Poly> = monos.iter().map(|e| Poly::monomial(e.clone(), Rational::one())).collect();
    let t2 = cubic.gradient(o2);
    let w = second_point_on_line(&t2, o2);
    let rows: Vec<Vec<Rational>> = vec![
        mono_polys.iter().map(|p| p.eval(o)).collect(),
        mono_polys.iter().map(|p| p.eval(o2)).collect(),
        mono_polys
            .iter()
            .map(|p| dot(&[p.derivative(0).eval(o2), p.derivative(1).eval(o2), p.derivative(2).eval(o2)], &w))
            .collect(),
    ];
    let ker = linalg::kernel(&rows, 6, &Rational::one());
    let tp = lin_form(t);
    let mp = lin_form(m);
    let coeffs = |p: &Poly| -> Vec<Rational> { monos.iter().map(|e| p.coeff(e)).collect() };
    let fixed = vec![coeffs(&(&tp * &tp)), coeffs(&(&tp * &mp))];
    for v in ker {
        let mut mat = fixed.clone();
        mat.push(v.clone());
        if linalg::rank(&mat) == 3 {
            return Ok(mono_polys.iter().zip(&v).fold(Poly::zero(3), |acc, (p, a)| acc + p.scale(a)));
        }
    }
    Err(Error::EliminationFailure("no conic of pole order three at the marked point".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::unipoly::UniPoly;
    use crate::genus1::weierstrass::ECPoint;
    use crate::poly;

    fn pt3(v: [i64; 3]) -> P2 {
        v.map(int)
    }

    fn e52() -> WeierstrassCurve {
        WeierstrassCurve::from_ints(-52, 144).unwrap()
    }

    #[test]
    fn weierstrass_cubic_is_fixed_up_to_isomorphism() {
        let f = weierstrass_form(&e52());
        let c = PlaneCubic::new(f, pt3([0, 1, 0])).unwrap();
        let (curve, rec) = model_to_weierstrass(&GenusOneModel::PlaneCubic(c)).unwrap();
        assert!(curve.isomorphic_to(&e52()));
        assert_eq!(rec.apply_to_ec(&pt3([0, 1, 0])).unwrap(), ECPoint::Infinity);
        let p = rec.apply_to_ec(&pt3([0, 12, 1])).unwrap();
        assert!(curve.contains(&p) && !p.is_infinity());
    }

    #[test]
    fn non_flex_origin() {
        let f = weierstrass_form(&e52());
        let c = PlaneCubic::new(f.clone(), pt3([0, 12, 1])).unwrap();
        let (curve, rec) = model_to_weierstrass(&GenusOneModel::PlaneCubic(c.clone())).unwrap();
        assert!(curve.isomorphic_to(&e52()));
        assert_eq!(rec.apply_to_ec(&pt3([0, 12, 1])).unwrap(), ECPoint::Infinity);
        // the map is a group isomorphism: check additivity on a few points
        let a = pt3([0, 1, 0]);
        let b = c.add(&a, &a).unwrap();
        let wa = rec.apply_to_ec(&a).unwrap();
        let wb = rec.apply_to_ec(&b).unwrap();
        assert_eq!(curve.add(&wa, &wa).unwrap(), wb);
        let back = rec.apply_backward(&wb.to_projective()).unwrap();
        assert!(proportional(&back, &b));
    }

    #[test]
    fn biquadratic_qrt_is_translation() {
        let p = poly!(4;
            [2,0,1,1] => 1,
            [1,1,2,0] => 2, [1,1,1,1] => 2, [1,1,0,2] => 3,
            [0,2,1,1] => 1, [0,2,0,2] => 1);
        let p0 = [int(1), int(0), int(0), int(1)];
        let m = Biquadratic::new(p, p0.clone()).unwrap();
        let (curve, rec) = model_to_weierstrass(&GenusOneModel::Biquadratic(m.clone())).unwrap();
        assert_eq!(rec.apply_to_ec(&p0).unwrap(), ECPoint::Infinity);
        let mut pts = vec![p0.to_vec()];
        for _ in 0..4 {
            let nx = m.qrt_step(pts.last().unwrap()).unwrap();
            pts.push(nx.to_vec());
        }
        let w: Vec<ECPoint> = pts.iter().map(|p| rec.apply_to_ec(p).unwrap()).collect();
        let d0 = curve.sub(&w[1], &w[0]).unwrap();
        for k in 1..4 {
            assert_eq!(curve.sub(&w[k + 1], &w[k]).unwrap(), d0);
        }
        for p in &pts {
            let q = rec.apply_forward(p).unwrap();
            let back = rec.apply_backward(&q).unwrap();
            assert!(Biquadratic::space().same_point(&back, p).unwrap());
        }
    }

    #[test]
    fn quartic_model() {
        // y^2 = x^4 - 2x^2 + 4x + 1 ... through (0, 1)
        let q = UniPoly::from_ints(&[1, 4, -2, 0, 1]);
        let m = Quartic::new(q, (int(0), int(1))).unwrap();
        let (curve, rec) = model_to_weierstrass(&GenusOneModel::Quartic(m)).unwrap();
        assert_eq!(rec.apply_to_ec(&pt3([0, 1, 1])).unwrap(), ECPoint::Infinity);
        let img = rec.apply_to_ec(&pt3([0, -1, 1])).unwrap();
        assert!(curve.contains(&img));
        let back = rec.apply_backward(&img.to_projective()).unwrap();
        assert!(proportional(&back, &pt3([0, -1, 1])));
    }

    #[test]
    fn singular_models_rejected() {
        // (y^2 z - x^3 - x^2 z) is nodal
        let f = poly!(3; [0,2,1] => 1, [3,0,0] => -1, [2,0,1] => -1);
        let c = PlaneCubic::new(f, pt3([0, 1, 0])).unwrap();
        assert!(model_to_weierstrass(&GenusOneModel::PlaneCubic(c)).is_err());
    }
}
