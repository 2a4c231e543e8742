//! The Enriques surface, its K3 cover, the curve `E`, and the threefold
//! fibered over the `X` plane. [`build_construction3`] runs the ten-step audit.

use num_traits::Zero;
use serde_json::{json, Value};

use super::audit::AuditReport;
use super::data::{
    c_poly, d_poly, e_multisection, enriques_space, f_poly, k3_space, reduced_discriminant, threefold_space, FIBER_Z,
};
use crate::algebra::field::{format_rational, int, rat, Rational};
use crate::algebra::poly::Poly;
use crate::algebra::series::{eval_series, local_branch};
use crate::algebra::unipoly::{is_separable, UniPoly};
use crate::error::{Error, Result};
use crate::fibration::{degeneracy_membership, projection_discriminant, salient_check_multisection, FiberedSpace, Multisection, SalientVerdict};
use crate::genus1::{lutz_nagell_test, mazur_test, ECPoint, LutzNagellVerdict, TorsionVerdict, WeierstrassCurve};
use crate::modp::{
    proper_intersection_audit, reduce_space, smoothness_certificate, BranchCurve, DiscriminantCurve, IntersectionVerdict,
    DEFAULT_PRIMES,
};
use crate::propagate::{generate_points, points_of, PropagateConfig, TranslationSource};

/// Variables of the affine curve `E`: `(t, v3, w)`.
const T: usize = 0;
const V3: usize = 1;
const W: usize = 2;

/// Primes for the intersection audit; the two largest of the default ladder.
pub const INTERSECTION_PRIMES: [u64; 2] = [11, 13];

/// `O = (t, v3, w) = (-1, 0, -1)`.
pub fn e_origin() -> [Rational; 3] {
    [int(-1), int(0), int(-1)]
}

/// `P = (7, -6, 5)`.
pub fn e_point() -> [Rational; 3] {
    [int(7), int(-6), int(5)]
}

/// `y^2 = x^3 - 52 x + 144`.
pub fn enriques_weierstrass_curve() -> WeierstrassCurve {
    WeierstrassCurve::from_ints(-52, 144).expect("nonsingular")
}

/// `v3^2 - (t+1)(t+2)/2` and `w^2 - (t^2+1)/2` in `(t, v3, w)`.
pub fn e_equations() -> Vec<Poly> {
    let half = rat(1, 2);
    vec![
        Poly::from_terms(3, [(vec![0, 2, 0], int(1)), (vec![2, 0, 0], -&half), (vec![1, 0, 0], rat(-3, 2)), (vec![0, 0, 0], int(-1))]),
        Poly::from_terms(3, [(vec![0, 0, 2], int(1)), (vec![2, 0, 0], -&half), (vec![0, 0, 0], -half)]),
    ]
}

/// `(x : y : z) = (2(3t - 4w - 1) : 8 v3 : t - 2w - 1)`.
fn map_polys() -> [Poly; 3] {
    let lin = |c: [i64; 4]| Poly::from_terms(3, [(vec![1, 0, 0], int(c[0])), (vec![0, 1, 0], int(c[1])), (vec![0, 0, 1], int(c[2])), (vec![0, 0, 0], int(c[3]))]);
    [lin([6, 0, -8, -2]), lin([0, 8, 0, 0]), lin([1, 0, -2, -1])]
}

/// `(t, v3, w) -> (2(3t-4w-1)/(t-2w-1), 8 v3/(t-2w-1))`.
///
/// Where all three projective coordinates vanish the image is the limit
/// along the local branch of `E`.
pub fn enriques_weierstrass_map(pt: &[Rational]) -> Result<ECPoint> {
    let eqs = e_equations();
    if pt.len() != 3 || eqs.iter().any(|e| !e.eval(pt).is_zero()) {
        return Err(Error::NotOnCurve);
    }
    let polys = map_polys();
    let mut v: Vec<Rational> = polys.iter().map(|f| f.eval(pt)).collect();
    if v.iter().all(|x| x.is_zero()) {
        let mut prec = 4;
        loop {
            let br = local_branch(&eqs, pt, prec)?;
            let ser: Vec<_> = polys.iter().map(|f| eval_series(f, &br)).collect();
            if let Some(k) = ser.iter().filter_map(|s| s.valuation()).min() {
                v = ser.iter().map(|s| s.coeff(k).clone()).collect();
                break;
            }
            if prec >= 64 {
                return Err(Error::IndeterminatePoint);
            }
            prec *= 2;
        }
    }
    let q = if v[2].is_zero() { ECPoint::Infinity } else { ECPoint::affine(&v[0] / &v[2], &v[1] / &v[2]) };
    if !enriques_weierstrass_curve().contains(&q) {
        return Err(Error::EliminationFailure("image is off the Weierstrass curve".into()));
    }
    Ok(q)
}

/// Replaces `x_var^2` by `rep` until `x_var` has degree at most one.
fn reduce_square(p: &Poly, var: usize, rep: &Poly) -> Poly {
    let x = Poly::var(p.nvars(), var);
    let mut out = Poly::zero(p.nvars());
    for (k, c) in p.coefficients_in(var).into_iter().enumerate() {
        let mut term = &c * &rep.pow((k / 2) as u32);
        if k % 2 == 1 {
            term = &term * &x;
        }
        out = &out + &term;
    }
    out
}

/// `y^2 z - x^3 + 52 x z^2 - 144 z^3` at the map, reduced modulo the equations of `E`.
pub fn map_identity_remainder() -> Poly {
    let [x, y, z] = map_polys();
    let z2 = &z * &z;
    let lhs = &(&y * &y) * &z;
    let rhs = &(&(&(&x * &x) * &x) - &(&x * &z2).scale(&int(52))) + &(&z2 * &z).scale(&int(144));
    let f = &lhs - &rhs;
    let eqs = e_equations();
    let v3sq = &Poly::monomial(vec![0, 2, 0], int(1)) - &eqs[0];
    let wsq = &Poly::monomial(vec![0, 0, 2], int(1)) - &eqs[1];
    reduce_square(&reduce_square(&f, V3, &v3sq), W, &wsq)
}

/// `(t, u1, u2, u3)` on the affine Enriques surface to `((u2 : u3 : 1), (u1 : t : 1))`.
pub fn lift_to_compactification(s0: &[Rational; 4]) -> Vec<Rational> {
    let [t, u1, u2, u3] = s0.clone();
    vec![u2, u3, int(1), u1, t, int(1)]
}

/// A K3 point `(t; u1 : v2 : v3 : w0)` with `w^2 = f(t)` lifted to the
/// compactification: `((v2 : v3 : w w0), (u1 : t w0 : w0))`.
pub fn lift_k3_point(p: &[Rational], w: &Rational) -> Vec<Rational> {
    let (t, u1, v2, v3, w0) = (&p[0], &p[1], &p[2], &p[3], &p[4]);
    vec![v2.clone(), v3.clone(), w * w0, u1.clone(), t * w0, w0.clone()]
}

/// `E` inside the K3 cover: `(t; t - 3, 2t - 1, v3, 1)`.
pub fn e_to_k3(pt: &[Rational; 3]) -> Vec<Rational> {
    let t = &pt[T];
    vec![t.clone(), t - int(3), t * int(2) - int(1), pt[V3].clone(), int(1)]
}

#[derive(Clone, Debug)]
pub struct Construction3Data {
    pub c: UniPoly,
    pub d: UniPoly,
    pub f: UniPoly,
    pub k3: FiberedSpace,
    pub e: Multisection,
    /// Rank one locus of `v` on `P2 x P2`.
    pub enriques: FiberedSpace,
    /// Rank one locus of `u` on the projective bundle.
    pub threefold: FiberedSpace,
}

pub fn construction3_data() -> Construction3Data {
    Construction3Data {
        c: c_poly(),
        d: d_poly(),
        f: f_poly(),
        k3: k3_space(),
        e: e_multisection(),
        enriques: enriques_space(),
        threefold: threefold_space(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction3Options {
    /// Runs the finite-field step; otherwise it is recorded as skipped.
    pub full_audit: bool,
    pub primes: Vec<u64>,
    pub intersection_primes: Vec<u64>,
    /// Seed of the random line in the intersection certificate.
    pub seed: u64,
}

impl Default for Construction3Options {
    fn default() -> Self {
        Construction3Options {
            full_audit: true,
            primes: DEFAULT_PRIMES.to_vec(),
            intersection_primes: INTERSECTION_PRIMES.to_vec(),
            seed: 42,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Construction3 {
    pub data: Construction3Data,
    pub audit: AuditReport,
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn ec_json(p: &ECPoint) -> Value {
    match p {
        ECPoint::Infinity => json!("infinity"),
        ECPoint::Affine(x, y) => json!([format_rational(x), format_rational(y)]),
    }
}

/// Runs all ten steps and returns the report, failing steps included.
pub fn audit_construction3(data: &Construction3Data, opts: &Construction3Options) -> AuditReport {
    let mut r = AuditReport::new();
    let err = |e: Error| json!({ "error": e.to_string() });

    // 1: separability of c d (c - d) f
    let prod = &reduced_discriminant() * &data.f;
    match is_separable(&prod) {
        Ok(s) => r.push(1, "separable_discriminant", s, json!({ "polynomial": prod.display_var("t"), "c_minus_d": (&data.c - &data.d).display_var("t") })),
        Err(e) => r.push(1, "separable_discriminant", false, err(e)),
    }

    // 2: E lies on the K3 cover
    {
        let n = 5;
        let tv = Poly::var(n, 0);
        let images = vec![
            tv.clone(),
            &tv - &Poly::constant(n, int(3)),
            &tv.scale(&int(2)) - &Poly::constant(n, int(1)),
            Poly::var(n, 3),
            Poly::one(n),
        ];
        let eqs = data.k3.equations();
        let first = eqs[0].compose(&images);
        let second = eqs[1].compose(&images);
        let half_product = Poly::from_terms(n, [(vec![2, 0, 0, 0, 0], rat(1, 2)), (vec![1, 0, 0, 0, 0], rat(3, 2)), (vec![0; 5], int(1))]);
        let expected = &half_product - &Poly::monomial(vec![0, 0, 0, 2, 0], int(1));
        let ok = first.is_zero() && second == expected;
        r.push(2, "e_on_k3", ok, json!({ "first": first.to_string(), "second": second.to_string() }));
    }

    // 3: O and P on E
    {
        let eqs = e_equations();
        let on = |p: &[Rational; 3]| eqs.iter().all(|e| e.eval(p).is_zero()) && data.e.contains(&e_to_k3(p));
        let (o, p) = (e_origin(), e_point());
        r.push(3, "points_on_e", on(&o) && on(&p), json!({ "O": strs(&o), "P": strs(&p) }));
    }

    // 4: images under the Weierstrass map
    match (enriques_weierstrass_map(&e_origin()), enriques_weierstrass_map(&e_point())) {
        (Ok(a), Ok(b)) => {
            let rem = map_identity_remainder();
            let ok = a.is_infinity() && b == ECPoint::from_ints(0, 12) && rem.is_zero();
            r.push(4, "weierstrass_map", ok, json!({ "O": ec_json(&a), "P": ec_json(&b), "remainder": rem.to_string() }));
        }
        (Err(e), _) | (_, Err(e)) => r.push(4, "weierstrass_map", false, err(e)),
    }

    // 5: Lutz-Nagell at (0, 12), cross-checked by Mazur
    {
        let e = enriques_weierstrass_curve();
        let p = ECPoint::from_ints(0, 12);
        let disc = e.discriminant();
        let ln = lutz_nagell_test(&e, &p);
        let mz = mazur_test(&e, &p);
        let ok = ln == Ok(LutzNagellVerdict::NonTorsion) && mz == Ok(TorsionVerdict::NonTorsion);
        r.push(5, "lutz_nagell", ok, json!({
            "4a3_plus_27b2": format_rational(&disc),
            "y_squared": 144,
            "divides": (disc.to_integer() % 144u32) == 0.into(),
            "lutz_nagell": format!("{ln:?}"),
            "mazur": format!("{mz:?}"),
        }));
    }

    // 6: salient ramification of E at t = -1
    match salient_check_multisection(&data.e) {
        Ok(SalientVerdict::Salient { factor, value, discriminant_at_value }) => {
            let at = int(-1);
            let rd = reduced_discriminant().eval(&at);
            let fv = data.f.eval(&at);
            let t_val = value.as_ref().map(|[u, v]| format!("{u}/{v}"));
            let ok = value.as_ref().is_some_and(|v| v[0] == "-1" && v[1] == "1") && !rd.is_zero() && !fv.is_zero();
            r.push(6, "salient_ramification", ok, json!({
                "factor": factor,
                "value": t_val,
                "discriminant_at_value": discriminant_at_value,
                "reduced_discriminant_at_minus_1": format_rational(&rd),
                "f_at_minus_1": format_rational(&fv),
            }));
        }
        Ok(SalientVerdict::NotSalient) => r.push(6, "salient_ramification", false, json!("not salient")),
        Err(e) => r.push(6, "salient_ramification", false, err(e)),
    }

    // 7: radical of the fiber discriminant
    match projection_discriminant(&data.k3) {
        Ok(d) => {
            let got = d.dehomogenize().monic();
            let want = reduced_discriminant().monic();
            r.push(7, "discriminant_radical", got == want, json!({ "radical": got.display_var("t"), "expected": want.display_var("t") }));
        }
        Err(e) => r.push(7, "discriminant_radical", false, err(e)),
    }

    // 8: lifts of rational points land on the compactification
    r.push_result(8, "degeneracy_membership", membership_spot_checks(data));

    // 9: u restricts to v along Z = 0
    {
        let (u, v) = (data.threefold.matrix().expect("matrix"), data.enriques.matrix().expect("matrix"));
        let map: Vec<usize> = (0..6).collect();
        let z = data.threefold.ambient().nvars() - 1;
        let ok = u.iter().flatten().zip(v.iter().flatten()).all(|(a, b)| a.partial_eval(&[(z, int(0))]) == b.embed(7, &map));
        r.push(9, "u_restricts_to_v", ok, json!({ "entries_checked": 6 }));
    }

    // 10: finite-field audits
    if opts.full_audit {
        r.push_result(10, "modp_audit", modp_audit(data, opts));
    } else {
        r.skip(10, "modp_audit", "run with the full audit to certify smoothness and proper intersection");
    }
    r
}

/// Lifts `O`, `P` and a short orbit on the fiber `t = 7` to `S'`; also checks that a point off `S'` is rejected.
fn membership_spot_checks(data: &Construction3Data) -> Result<(bool, Value)> {
    let mut lifted = vec![];
    for p in [e_origin(), e_point()] {
        let k = e_to_k3(&p);
        lifted.push(lift_k3_point(&k, &p[W]));
    }
    let s0 = [int(7), int(4), rat(13, 5), rat(6, 5)];
    lifted.push(lift_to_compactification(&s0));
    let cfg = PropagateConfig { orbit: 4, fibers: 1, ..Default::default() };
    let seed = e_to_k3(&e_point());
    let items = generate_points(&data.k3, &TranslationSource::Multisection(&data.e), &[seed], &cfg);
    for q in points_of(&data.k3, &items) {
        lifted.push(lift_k3_point(&q, &e_point()[W]));
    }
    let mut ok = lifted.len() >= 6;
    for q in &lifted {
        ok &= degeneracy_membership(&data.enriques, q)?;
        let mut z = q.clone();
        z.push(Rational::zero());
        ok &= data.threefold.contains(&z);
    }
    let off: Vec<Rational> = [1, 0, 0, 1, 0, 0].iter().map(|&x| int(x)).collect();
    let rejected = !degeneracy_membership(&data.enriques, &off)?;
    let pts: Vec<Vec<String>> = lifted.iter().map(|q| strs(q)).collect();
    Ok((ok && rejected, json!({ "lifted": pts, "off_locus_rejected": rejected })))
}

fn modp_audit(data: &Construction3Data, opts: &Construction3Options) -> Result<(bool, Value)> {
    let mut certs = vec![];
    let mut certified = None;
    for &p in &opts.primes {
        let c = smoothness_certificate(&reduce_space(&data.threefold, p)?)?;
        let done = c.is_certified();
        certs.push(c);
        if done {
            certified = Some(p);
            break;
        }
    }
    let deg = crate::fibration::DegeneracyData::new(&data.threefold, FIBER_Z)?;
    let report = proper_intersection_audit(&DiscriminantCurve(&deg), &BranchCurve(&deg), &opts.intersection_primes, opts.seed)?;
    let proper = report.verdict == Some(IntersectionVerdict::ProperLikely);
    let w = json!({
        "smooth_at": certified,
        "smoothness": serde_json::to_value(&certs).expect("serializable"),
        "intersection": serde_json::to_value(&report).expect("serializable"),
    });
    Ok((certified.is_some() && proper, w))
}

/// Data plus a passing audit; `AuditFailure` names the first failing step.
pub fn build_construction3(opts: &Construction3Options) -> Result<Construction3> {
    let data = construction3_data();
    let audit = audit_construction3(&data, opts).into_result()?;
    Ok(Construction3 { data, audit })
}
