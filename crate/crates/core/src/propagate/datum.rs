//! Translation data on a single smooth fiber and the translated points.
//!
//! The seed `p` is the marked point of the fiber model, so it maps to the
//! origin of the Weierstrass model `W`. For a degree-two multisection with
//! conjugate `p̄` the translation is `p - p̄`, i.e. `τ = -W(p̄)`; for two
//! sections `O, P` it is `P - O`, i.e. `τ = W(P)` with `O` as seed.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::field::Rational;
use crate::algebra::space::GradedSpace;
use crate::error::{Error, Result};
use crate::genus1::cubic::normalize_vec;
use crate::genus1::{
    mazur_test, model_to_weierstrass, BirationalRecord, ECPoint, GenusOneModel, PlaneCubic, TorsionVerdict,
    WeierstrassCurve,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Weierstrass,
    Qrt,
    Cubic,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Weierstrass => "weierstrass",
            Backend::Qrt => "qrt",
            Backend::Cubic => "cubic",
        })
    }
}

/// Where the translation comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Translation {
    /// The other point of a degree-two multisection over the same base point.
    Conjugate(Vec<Rational>),
    /// A second section; the seed plays the role of the origin.
    Section(Vec<Rational>),
    /// The QRT map of a (2,2) curve, a translation independent of the seed.
    Qrt,
}

#[derive(Clone, Debug)]
pub struct TranslationDatum {
    model: GenusOneModel,
    seed: Vec<Rational>,
    translation: Translation,
    curve: WeierstrassCurve,
    record: BirationalRecord,
    tau: ECPoint,
}

/// A translated point: in model coordinates, or in Weierstrass coordinates
/// when the backward map is undefined there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FiberPoint {
    Model(Vec<Rational>),
    Weierstrass(ECPoint),
}

/// The marked point of a model in its natural coordinates.
pub fn marked_point(m: &GenusOneModel) -> Vec<Rational> {
    match m {
        GenusOneModel::PlaneCubic(c) => c.origin().to_vec(),
        GenusOneModel::Biquadratic(b) => b.marked().to_vec(),
        GenusOneModel::QuadricIntersection(q) => q.marked().to_vec(),
        GenusOneModel::Quartic(q) => vec![q.marked().0.clone(), q.marked().1.clone(), Rational::one()],
    }
}

fn contains(m: &GenusOneModel, p: &[Rational]) -> bool {
    match m {
        GenusOneModel::PlaneCubic(c) => p.len() == 3 && c.contains(p),
        GenusOneModel::Biquadratic(b) => p.len() == 4 && b.contains(p),
        GenusOneModel::QuadricIntersection(q) => p.len() == 4 && q.contains(p),
        GenusOneModel::Quartic(q) => {
            p.len() == 3 && !p[2].is_zero() && {
                let x = &p[0] / &p[2];
                let y = &p[1] / &p[2];
                &y * &y == q.quartic().eval(&x)
            }
        }
    }
}

/// Canonical representative of a point in the model's natural coordinates.
pub fn normalize_model_point(m: &GenusOneModel, p: &[Rational]) -> Result<Vec<Rational>> {
    match m {
        GenusOneModel::PlaneCubic(_) | GenusOneModel::QuadricIntersection(_) => normalize_vec(p),
        GenusOneModel::Biquadratic(_) => GradedSpace::p1_power(2).normalize(p),
        GenusOneModel::Quartic(_) => {
            if p[2].is_zero() {
                return Err(Error::InvalidInput("double-cover points are affine".into()));
            }
            Ok(vec![&p[0] / &p[2], &p[1] / &p[2], Rational::one()])
        }
    }
}

fn same(m: &GenusOneModel, a: &[Rational], b: &[Rational]) -> Result<bool> {
    Ok(normalize_model_point(m, a)? == normalize_model_point(m, b)?)
}

fn weierstrass_of(model: &GenusOneModel) -> Result<(WeierstrassCurve, BirationalRecord)> {
    if let GenusOneModel::PlaneCubic(c) = model {
        if crate::algebra::ternary_cubic_discriminant(c.form())?.is_zero() {
            return Err(Error::SingularFiber);
        }
    }
    model_to_weierstrass(model).map_err(|e| match e {
        Error::SingularModel(_) | Error::SingularPoint => Error::SingularFiber,
        e => e,
    })
}

impl TranslationDatum {
    /// Datum on `model`, whose marked point is the seed.
    pub fn new(model: GenusOneModel, translation: Translation) -> Result<Self> {
        let seed = marked_point(&model);
        let (curve, record) = weierstrass_of(&model)?;
        let tau = match &translation {
            Translation::Conjugate(q) => {
                if !contains(&model, q) {
                    return Err(Error::NotOnCurve);
                }
                if same(&model, q, &seed)? {
                    ECPoint::Infinity
                } else {
                    curve.neg(&record.apply_to_ec(q)?)?
                }
            }
            Translation::Section(q) => {
                if !contains(&model, q) {
                    return Err(Error::NotOnCurve);
                }
                record.apply_to_ec(q)?
            }
            Translation::Qrt => {
                let GenusOneModel::Biquadratic(b) = &model else {
                    return Err(Error::InvalidInput("the QRT translation needs a (2,2) curve".into()));
                };
                record.apply_to_ec(&b.qrt_step(&seed)?)?
            }
        };
        Ok(TranslationDatum { model, seed, translation, curve, record, tau })
    }

    pub fn model(&self) -> &GenusOneModel {
        &self.model
    }

    pub fn seed(&self) -> &[Rational] {
        &self.seed
    }

    pub fn translation(&self) -> &Translation {
        &self.translation
    }

    pub fn curve(&self) -> &WeierstrassCurve {
        &self.curve
    }

    pub fn record(&self) -> &BirationalRecord {
        &self.record
    }

    /// The translation as a point of the Weierstrass model.
    pub fn tau(&self) -> &ECPoint {
        &self.tau
    }

    /// The Weierstrass image of a model point.
    pub fn to_weierstrass(&self, p: &[Rational]) -> Result<ECPoint> {
        if same(&self.model, p, &self.seed)? {
            return Ok(ECPoint::Infinity);
        }
        self.record.apply_to_ec(p)
    }
}

/// Datum for a degree-two multisection: seed `fiber`'s marked point, conjugate `conjugate`.
pub fn translation_datum(fiber: &GenusOneModel, conjugate: &[Rational]) -> Result<TranslationDatum> {
    TranslationDatum::new(fiber.clone(), Translation::Conjugate(conjugate.to_vec()))
}

/// `seed ⊕ n⊙τ` by the requested backend.
pub fn bt_translate(datum: &TranslationDatum, n: i64, backend: Backend) -> Result<FiberPoint> {
    let model = &datum.model;
    match backend {
        Backend::Weierstrass => from_ec(datum, datum.curve.mul(n, &datum.tau)?),
        Backend::Qrt => {
            let GenusOneModel::Biquadratic(b) = model else {
                return Err(Error::InvalidInput("the qrt backend needs a (2,2) curve".into()));
            };
            let mut x: [Rational; 4] = b.marked().clone();
            for _ in 0..n.unsigned_abs() {
                x = if n > 0 { b.qrt_step(&x)? } else { b.qrt_inverse(&x)? };
            }
            Ok(FiberPoint::Model(normalize_model_point(model, &x)?))
        }
        Backend::Cubic => {
            let (c, t) = cubic_translation(datum)?;
            Ok(FiberPoint::Model(c.mul(n, &t)?.to_vec()))
        }
    }
}

fn from_ec(datum: &TranslationDatum, q: ECPoint) -> Result<FiberPoint> {
    let model = &datum.model;
    if q.is_infinity() {
        return Ok(FiberPoint::Model(normalize_model_point(model, &datum.seed)?));
    }
    match datum.record.apply_from_ec(&q) {
        Ok(x) => Ok(FiberPoint::Model(normalize_model_point(model, &x)?)),
        Err(Error::IndeterminatePoint) => Ok(FiberPoint::Weierstrass(q)),
        Err(e) => Err(e),
    }
}

fn cubic_translation(datum: &TranslationDatum) -> Result<(&PlaneCubic, [Rational; 3])> {
    let GenusOneModel::PlaneCubic(c) = &datum.model else {
        return Err(Error::InvalidInput("the cubic backend needs a plane cubic".into()));
    };
    let three = |q: &Vec<Rational>| -> Result<[Rational; 3]> {
        q.clone().try_into().map_err(|_| Error::InvalidInput("expected 3 coordinates".into()))
    };
    let t = match &datum.translation {
        Translation::Section(q) => three(q)?,
        Translation::Conjugate(q) => c.neg(&three(q)?)?,
        Translation::Qrt => return Err(Error::InvalidInput("plane cubics carry no QRT map".into())),
    };
    Ok((c, t))
}

/// `bt_translate(datum, n, backend)` for `n = 0..=len`, each step built from
/// the previous one. Once a step fails, every later entry carries that error.
pub fn bt_orbit(datum: &TranslationDatum, len: usize, backend: Backend) -> Vec<Result<FiberPoint>> {
    let mut out = Vec::with_capacity(len + 1);
    let fill = |out: &mut Vec<Result<FiberPoint>>, e: Error| {
        while out.len() <= len {
            out.push(Err(e.clone()));
        }
    };
    match backend {
        Backend::Weierstrass => {
            let mut q = ECPoint::Infinity;
            for n in 0..=len {
                if n > 0 {
                    match datum.curve.add(&q, &datum.tau) {
                        Ok(r) => q = r,
                        Err(e) => {
                            fill(&mut out, e);
                            break;
                        }
                    }
                }
                out.push(from_ec(datum, q.clone()));
            }
        }
        Backend::Qrt => {
            let GenusOneModel::Biquadratic(b) = &datum.model else {
                fill(&mut out, Error::InvalidInput("the qrt backend needs a (2,2) curve".into()));
                return out;
            };
            let mut x: [Rational; 4] = b.marked().clone();
            for n in 0..=len {
                if n > 0 {
                    match b.qrt_step(&x) {
                        Ok(y) => x = y,
                        Err(e) => {
                            fill(&mut out, e);
                            break;
                        }
                    }
                }
                match normalize_model_point(&datum.model, &x) {
                    Ok(v) => {
                        x = v.clone().try_into().expect("four coordinates");
                        out.push(Ok(FiberPoint::Model(v)));
                    }
                    Err(e) => {
                        fill(&mut out, e);
                        break;
                    }
                }
            }
        }
        Backend::Cubic => match cubic_translation(datum).and_then(|(c, t)| c.multiples(len, &t)) {
            Ok(pts) => out.extend(pts.into_iter().map(|p| Ok(FiberPoint::Model(p.to_vec())))),
            Err(e) => fill(&mut out, e),
        },
    }
    out
}

/// Mazur's bound applied to `τ`: rational torsion has order at most 12.
pub fn certify_nontorsion(datum: &TranslationDatum) -> Result<TorsionVerdict> {
    mazur_test(&datum.curve, &datum.tau)
}

/// True iff the first `k` points are pairwise distinct.
pub fn pairwise_distinct(points: &[Vec<Rational>], k: usize) -> bool {
    let mut seen = std::collections::HashSet::new();
    points.iter().take(k).all(|p| seen.insert(p.clone())) && points.len() >= k
}
