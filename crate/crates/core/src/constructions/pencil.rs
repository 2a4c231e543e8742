//! The fiber product of a cubic pencil with a second pencil of degree `n` hypersurfaces.
//!
//! `S = {s C + t D = 0}` in `P1 x P2`, `Y = {s A + t B = 0}` in `P1 x P^{n-1}`
//! and `X = S x_{P1} Y`. The base points `O`, `P` of the cubic pencil are
//! sections of `S -> P1`; `P` specializes on the member `C`.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::audit::AuditReport;
use super::data::{default_cubic, default_origin, default_point};
use crate::algebra::binary::BinaryForm;
use crate::algebra::field::{format_rational, int, Fp, Rational};
use crate::algebra::linalg;
use crate::algebra::poly::Poly;
use crate::algebra::resultant::resultant;
use crate::algebra::space::GradedSpace;
use crate::error::{Error, Result};
use crate::fibration::{projection_discriminant, FiberedSpace};
use crate::genus1::{certify_torsion, model_to_weierstrass, GenusOneModel, PlaneCubic, TorsionVerdict};
use crate::modp::{reduce_space, smoothness_certificate, AmbientPoints, ReducedSpace, DEFAULT_PRIMES};
use crate::propagate::{generate_points, points_of, Backend, PropagateConfig, StreamItem, TranslationSource};

/// Draws allowed for the transversal cubic and for the second pencil.
pub const MAX_DRAWS: usize = 5;
/// Number of base values and largest multiple in the fiberwise check.
pub const FIBER_CHECK_FIBERS: usize = 10;
pub const FIBER_CHECK_MULTIPLE: usize = 20;

type P2 = [Rational; 3];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction1Spec {
    pub cubic: Poly,
    pub origin: P2,
    pub point: P2,
    /// Second cubic of the pencil; drawn through `O` and `P` when absent.
    pub d: Option<Poly>,
    /// Dimension of the fiber product; `Y` lives in `P1 x P^{n-1}`.
    pub n: usize,
    pub seed: u64,
    pub primes: Vec<u64>,
}

impl Default for Construction1Spec {
    fn default() -> Self {
        Construction1Spec {
            cubic: default_cubic(),
            origin: default_origin(),
            point: default_point(),
            d: None,
            n: 3,
            seed: 42,
            primes: DEFAULT_PRIMES.to_vec(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Construction1Bundle {
    pub spec: Construction1Spec,
    pub d: Poly,
    pub s: FiberedSpace,
    pub y: FiberedSpace,
    pub x: FiberedSpace,
    pub audit: AuditReport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "verdict")]
pub enum MwRankVerdict {
    RankPositive,
    /// `P` is torsion of the given order on the specialized fiber.
    Inconclusive { torsion_order: u32 },
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn cubic_monomials() -> Vec<Vec<u32>> {
    let mut out = vec![];
    for a in (0..=3u32).rev() {
        for b in (0..=3 - a).rev() {
            out.push(vec![a, b, 3 - a - b]);
        }
    }
    out
}

/// Monomials of degree `d` in `n` variables, lexicographically descending.
fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = vec![];
    for a in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

fn small(rng: &mut ChaCha8Rng) -> Rational {
    int(rng.gen_range(-3..=3))
}

/// A random cubic through `O` and `P`: a small integer combination of a kernel basis.
fn draw_cubic_through(o: &P2, p: &P2, rng: &mut ChaCha8Rng) -> Poly {
    let monos = cubic_monomials();
    let row = |q: &P2| monos.iter().map(|e| Poly::monomial(e.clone(), Rational::one()).eval(q)).collect::<Vec<_>>();
    let ker = linalg::kernel(&[row(o), row(p)], monos.len(), &Rational::one());
    loop {
        let mut c = vec![Rational::zero(); monos.len()];
        for v in &ker {
            let r = small(rng);
            for (ci, vi) in c.iter_mut().zip(v) {
                *ci += &r * vi;
            }
        }
        let f = Poly::from_terms(3, monos.iter().cloned().zip(c));
        if !f.is_zero() {
            return f.primitive();
        }
    }
}

fn draw_form(nvars: usize, degree: u32, rng: &mut ChaCha8Rng) -> Poly {
    loop {
        let f = Poly::from_terms(nvars, monomials(nvars, degree).into_iter().map(|e| (e, small(rng))));
        if !f.is_zero() {
            return f;
        }
    }
}

/// `C ∩ D` is nine distinct points iff, after a random coordinate change,
/// the resultant in the last variable is a squarefree binary nonic.
pub fn transversality_witness(c: &Poly, d: &Poly, rng: &mut ChaCha8Rng) -> Result<Option<Value>> {
    for _ in 0..MAX_DRAWS {
        let m: Vec<Vec<Rational>> = (0..3).map(|_| (0..3).map(|_| small(rng)).collect()).collect();
        if linalg::det(&m).is_zero() {
            continue;
        }
        let images: Vec<Poly> = (0..3)
            .map(|i| Poly::from_terms(3, (0..3).map(|j| (unit(3, j), m[i][j].clone()))))
            .collect();
        let (c2, d2) = (c.compose(&images), d.compose(&images));
        let lead = |f: &Poly| f.coeff(&[0, 0, 3]);
        if lead(&c2).is_zero() || lead(&d2).is_zero() {
            continue;
        }
        let r = resultant(&c2, &d2, 2)?;
        if r.is_zero() {
            return Ok(None);
        }
        let form = BinaryForm::new((0..=9u32).map(|i| r.coeff(&[i, 9 - i, 0])).collect());
        if form.is_squarefree() {
            return Ok(Some(json!({
                "projection": m.iter().map(|r| strs(r)).collect::<Vec<_>>(),
                "resultant_degree": form.degree(),
                "squarefree": true,
            })));
        }
    }
    Ok(None)
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

fn p1_plane_space(n: usize) -> GradedSpace {
    GradedSpace::projective_product(&[
        vec!["s".into(), "t".into()],
        (0..n).map(|i| format!("Y{i}")).collect(),
    ])
}

fn s_space() -> GradedSpace {
    GradedSpace::projective_product(&[vec!["s".into(), "t".into()], vec!["X0".into(), "X1".into(), "X2".into()]])
}

fn x_space(n: usize) -> GradedSpace {
    GradedSpace::projective_product(&[
        vec!["s".into(), "t".into()],
        vec!["X0".into(), "X1".into(), "X2".into()],
        (0..n).map(|i| format!("Y{i}")).collect(),
    ])
}

/// `s f + t g` with `f, g` in the fiber variables placed after `s, t`.
fn pencil_form(f: &Poly, g: &Poly) -> Poly {
    let k = f.nvars();
    let map: Vec<usize> = (2..k + 2).collect();
    let (f, g) = (f.embed(k + 2, &map), g.embed(k + 2, &map));
    &(&Poly::var(k + 2, 0) * &f) + &(&Poly::var(k + 2, 1) * &g)
}

/// Specializes the section `P` to the member `C` (origin `O`) and certifies it.
pub fn specialization_rank(cubic: &Poly, origin: &P2, point: &P2) -> Result<MwRankVerdict> {
    let c = PlaneCubic::new(cubic.clone(), origin.clone())?;
    if !c.contains(point) {
        return Err(Error::NotOnCurve);
    }
    if crate::genus1::cubic::proportional(origin, point) {
        return Err(Error::InvalidInput("P coincides with the origin".into()));
    }
    let (e, rec) = model_to_weierstrass(&GenusOneModel::PlaneCubic(c))?;
    let q = rec.apply_to_ec(point)?;
    Ok(match certify_torsion(&e, &q)?.verdict {
        TorsionVerdict::NonTorsion => MwRankVerdict::RankPositive,
        TorsionVerdict::TorsionOfOrder(k) => MwRankVerdict::Inconclusive { torsion_order: k },
    })
}

pub fn verify_positive_mw_rank(bundle: &Construction1Bundle) -> Result<MwRankVerdict> {
    specialization_rank(&bundle.spec.cubic, &bundle.spec.origin, &bundle.spec.point)
}

/// Orbits `n ⊙ P`, `0 ≤ n ≤ max_n`, on the fibers over `(1 : k)`, `k = 1, 2, ...`,
/// until `fibers` smooth fibers with non-torsion `P` have been used.
pub fn fiberwise_multiples(bundle: &Construction1Bundle, fibers: usize, max_n: usize) -> Result<Vec<StreamItem>> {
    let cfg = PropagateConfig { orbit: max_n, fibers: 1, backend: Backend::Cubic, height_cap: u64::MAX };
    let src = TranslationSource::Section(bundle.spec.point.to_vec());
    let mut out = vec![];
    let mut used = 0;
    for k in 1..=(4 * fibers as i64 + 8) {
        if used == fibers {
            break;
        }
        let seed = bundle.s.join(&[int(1), int(k)], &bundle.spec.origin);
        let items = generate_points(&bundle.s, &src, &[seed], &cfg);
        if items.iter().any(|i| matches!(i, StreamItem::Point(_))) {
            used += 1;
            out.extend(items);
        }
    }
    if used < fibers {
        return Err(Error::GenericityFailure(format!("only {used} usable fibers among the base values tried")));
    }
    Ok(out)
}

/// Over each `F_p`-point of the base where `S` has a singular fiber, the fiber
/// of `Y` has no singular `F_p`-point. Passes if one prime shows no coincidence.
fn modp_fiber_condition(s_disc: &BinaryForm, y: &FiberedSpace, n: usize, primes: &[u64]) -> Result<(bool, Value)> {
    let fiber = GradedSpace::projective("Y", n - 1);
    let mut rows = vec![];
    let mut pass = false;
    for &p in primes {
        let lift: Option<Vec<Fp>> = s_disc.coeffs().iter().map(|c| Fp::from_rational(c, p).ok()).collect();
        let Some(dc) = lift else { continue };
        let mut coincidences = vec![];
        let mut singular_s = 0;
        for b in AmbientPoints::new(&GradedSpace::p1_power(1), p).iter() {
            let (u, v) = (Fp::from_u64(b[0], p), Fp::from_u64(b[1], p));
            let mut val = Fp::new(0, p);
            let mut pw = Fp::new(1, p);
            for (i, c) in dc.iter().enumerate() {
                let mut term = *c * pw;
                for _ in 0..dc.len() - 1 - i {
                    term = term * v;
                }
                val = val + term;
                pw = pw * u;
            }
            if !val.is_zero() {
                continue;
            }
            singular_s += 1;
            let base = [Rational::from_integer(b[0].into()), Rational::from_integer(b[1].into())];
            let g = y.equations()[0].partial_eval(&[(0, base[0].clone()), (1, base[1].clone())]).restrict_vars(&(2..n + 2).collect::<Vec<_>>());
            let smooth = match ReducedSpace::from_forms("Y_fiber", &fiber, &[g], p) {
                Ok(r) => smoothness_certificate(&r)?.is_certified(),
                Err(_) => false,
            };
            if !smooth {
                coincidences.push(b);
            }
        }
        pass |= coincidences.is_empty();
        rows.push(json!({ "p": p, "singular_s_fibers": singular_s, "coincidences": coincidences }));
    }
    Ok((pass, json!({ "method": "mod_p", "primes": rows })))
}

fn fiber_condition(s: &FiberedSpace, y: &FiberedSpace, n: usize, primes: &[u64]) -> Result<(bool, Value)> {
    let ds = projection_discriminant(s)?;
    if n == 3 {
        let dy = projection_discriminant(y)?;
        let g = ds.gcd(&dy);
        let ok = g.degree() == 0;
        return Ok((ok, json!({ "method": "exact_gcd", "deg_s": ds.degree(), "deg_y": dy.degree(), "gcd_degree": g.degree() })));
    }
    modp_fiber_condition(&ds, y, n, primes)
}

/// Group law of the member `C` against the Weierstrass law through the reduction record.
fn group_law_agreement(spec: &Construction1Spec) -> Result<(bool, Value)> {
    let c = PlaneCubic::new(spec.cubic.clone(), spec.origin.clone())?;
    let (e, rec) = model_to_weierstrass(&GenusOneModel::PlaneCubic(c.clone()))?;
    let pts: Vec<P2> = (-3..=4).map(|k| c.mul(k, &spec.point)).collect::<Result<_>>()?;
    let mut checked = 0;
    for a in &pts {
        for b in &pts {
            let sum = crate::genus1::cubic_group_add(&spec.cubic, &spec.origin, a, b)?;
            let lhs = rec.apply_to_ec(&sum)?;
            let rhs = e.add(&rec.apply_to_ec(a)?, &rec.apply_to_ec(b)?)?;
            if lhs != rhs {
                return Ok((false, json!({ "mismatch": [strs(a), strs(b)] })));
            }
            checked += 1;
        }
    }
    Ok((true, json!({ "pairs_checked": checked, "weierstrass": [format_rational(e.a()), format_rational(e.b())] })))
}

/// Builds `S`, `Y`, `X` and audits the bundle. Errors only when no
/// transversal pencil or generic second pencil is found within the draw budget.
pub fn build_construction1(spec: &Construction1Spec) -> Result<Construction1Bundle> {
    if spec.n < 3 {
        return Err(Error::InvalidInput("n must be at least 3".into()));
    }
    let cubic_ok = PlaneCubic::new(spec.cubic.clone(), spec.origin.clone()).map(|c| c.contains(&spec.point));
    if cubic_ok != Ok(true) {
        return Err(Error::InvalidInput("O and P must be smooth points of C".into()));
    }
    if let Some(d) = &spec.d {
        for (name, q) in [("O", &spec.origin), ("P", &spec.point)] {
            if !d.eval(q).is_zero() {
                return Err(Error::BadPencil(format!("MissingBasePoint: D does not pass through {name}")));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut found = None;
    for attempt in 0..MAX_DRAWS {
        let d = match &spec.d {
            Some(d) => d.clone(),
            None => draw_cubic_through(&spec.origin, &spec.point, &mut rng),
        };
        if let Some(w) = transversality_witness(&spec.cubic, &d, &mut rng)? {
            found = Some((d, w, attempt + 1));
            break;
        }
        if spec.d.is_some() {
            break;
        }
    }
    let (d, trans, draws) = found.ok_or_else(|| Error::BadPencil("C and D do not meet transversally".into()))?;
    let s = FiberedSpace::hypersurface("S", s_space(), pencil_form(&spec.cubic, &d), vec![0])?;

    let n = spec.n;
    let mut second = None;
    for attempt in 0..MAX_DRAWS {
        let (a, b) = (draw_form(n, n as u32, &mut rng), draw_form(n, n as u32, &mut rng));
        let y = FiberedSpace::hypersurface("Y", p1_plane_space(n), pencil_form(&a, &b), vec![0])?;
        match fiber_condition(&s, &y, n, &spec.primes) {
            Ok((true, w)) => {
                second = Some((y, w, attempt + 1));
                break;
            }
            Ok((false, _)) | Err(Error::NotAFibration(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    let (y, fiber_w, y_draws) =
        second.ok_or_else(|| Error::GenericityFailure("no second pencil keeps one fiber smooth over every base point".into()))?;

    let xs = x_space(n);
    let fs = s.equations()[0].embed(n + 5, &[0, 1, 2, 3, 4]);
    let ymap: Vec<usize> = [0, 1].into_iter().chain(5..n + 5).collect();
    let fy = y.equations()[0].embed(n + 5, &ymap);
    let x = FiberedSpace::complete_intersection("X", xs.clone(), vec![fs.clone(), fy.clone()], vec![0])?;

    let mut bundle = Construction1Bundle { spec: spec.clone(), d: d.clone(), s, y, x, audit: AuditReport::new() };
    let mut r = AuditReport::new();
    let on = |f: &Poly| f.eval(&spec.origin).is_zero() && f.eval(&spec.point).is_zero();
    r.push(1, "base_points", on(&spec.cubic) && on(&d), json!({ "O": strs(&spec.origin), "P": strs(&spec.point), "d": d.to_string() }));
    let mut trans = trans;
    trans["draws"] = json!(draws);
    r.push(2, "transversality", true, trans);
    {
        let keep_s: Vec<usize> = (0..5).collect();
        let keep_y: Vec<usize> = ymap.clone();
        let ok = fs.restrict_vars(&keep_s) == bundle.s.equations()[0]
            && fy.restrict_vars(&keep_y) == bundle.y.equations()[0]
            && xs.homogeneous_degree(&fs) == Some(vec![1, 3, 0])
            && xs.homogeneous_degree(&fy) == Some(vec![1, 0, n as i64]);
        r.push(3, "fiber_product", ok, json!({ "degrees": [[1, 3, 0], [1, 0, n]] }));
    }
    let mut fiber_w = fiber_w;
    fiber_w["draws"] = json!(y_draws);
    r.push(4, "one_smooth_fiber", true, fiber_w);
    r.push_result(
        5,
        "positive_rank",
        verify_positive_mw_rank(&bundle).map(|v| (v == MwRankVerdict::RankPositive, serde_json::to_value(v).expect("serializable"))),
    );
    r.push_result(6, "fiberwise_multiples", fiberwise_check(&bundle));
    r.push_result(7, "group_law_agreement", group_law_agreement(spec));
    bundle.audit = r;
    Ok(bundle)
}

fn fiberwise_check(bundle: &Construction1Bundle) -> Result<(bool, Value)> {
    let items = fiberwise_multiples(bundle, FIBER_CHECK_FIBERS, FIBER_CHECK_MULTIPLE)?;
    let pts = points_of(&bundle.s, &items);
    let all_on = pts.iter().all(|p| bundle.s.contains(p));
    let bases: Vec<String> = items
        .iter()
        .filter_map(|i| match i {
            StreamItem::Point(r) if r.n == 0 => Some(strs(&r.base).join(":")),
            _ => None,
        })
        .collect();
    let expected = FIBER_CHECK_FIBERS * (FIBER_CHECK_MULTIPLE + 1);
    Ok((all_on && pts.len() == expected, json!({ "points": pts.len(), "base_values": bases })))
}

/// Reduces `X` of a bundle and certifies smoothness at the first prime that allows it.
pub fn certify_bundle_smoothness(bundle: &Construction1Bundle) -> Result<Option<u64>> {
    for &p in &bundle.spec.primes {
        if smoothness_certificate(&reduce_space(&bundle.x, p)?)?.is_certified() {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly;

    fn pt(v: [i64; 3]) -> P2 {
        v.map(int)
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(cubic_monomials().len(), 10);
        assert_eq!(monomials(3, 3), cubic_monomials());
        assert_eq!(monomials(4, 4).len(), 35);
    }

    #[test]
    fn drawn_cubic_passes_through_both_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let d = draw_cubic_through(&default_origin(), &default_point(), &mut rng);
        assert!(d.eval(&default_origin()).is_zero() && d.eval(&default_point()).is_zero());
    }

    #[test]
    fn specialization_examples() {
        assert_eq!(specialization_rank(&default_cubic(), &default_origin(), &default_point()).unwrap(), MwRankVerdict::RankPositive);
        // y^2 z = x^3 + z^3
        let c = poly!(3; [0,2,1] => 1, [3,0,0] => -1, [0,0,3] => -1);
        let o = pt([0, 1, 0]);
        assert_eq!(specialization_rank(&c, &o, &pt([0, 1, 1])).unwrap(), MwRankVerdict::Inconclusive { torsion_order: 3 });
        assert_eq!(specialization_rank(&c, &o, &pt([-1, 0, 1])).unwrap(), MwRankVerdict::Inconclusive { torsion_order: 2 });
        assert!(matches!(specialization_rank(&c, &o, &o), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn missing_base_point_is_a_bad_pencil() {
        // X0^3 passes through O = (0:1:0) and P = (0:12:1), X1^3 through neither
        let spec = Construction1Spec { d: Some(poly!(3; [0,3,0] => 1)), ..Default::default() };
        assert!(matches!(build_construction1(&spec), Err(Error::BadPencil(m)) if m.starts_with("MissingBasePoint")));
    }

    #[test]
    fn default_bundle_audit_passes() {
        let b = build_construction1(&Construction1Spec::default()).unwrap();
        for s in &b.audit.steps {
            assert_eq!(s.status, super::super::audit::StepStatus::Pass, "step {} {}", s.id, s.witness);
        }
        let xs = b.x.ambient();
        let eqs = b.x.equations();
        assert_eq!(xs.homogeneous_degree(&eqs[0]), Some(vec![1, 3, 0]));
        assert_eq!(xs.homogeneous_degree(&eqs[1]), Some(vec![1, 0, 3]));
    }
}
