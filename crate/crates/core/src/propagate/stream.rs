//! Point streams: one translation orbit per seed, merged in seed order.

use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::datum::{bt_orbit, certify_nontorsion, Backend, FiberPoint, Translation, TranslationDatum};
use crate::algebra::binary::{vieta_other_root, BinaryForm};
use crate::algebra::field::{format_rational, rational_vec_str, Rational};
use crate::algebra::linalg;
use crate::algebra::poly::Poly;
use crate::error::{Error, Result};
use crate::fibration::{FiberedSpace, Multisection};
use crate::genus1::TorsionVerdict;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagateConfig {
    /// Orbit length `N` per fiber.
    pub orbit: usize,
    /// Number of seeds (fibers) consumed.
    pub fibers: usize,
    pub backend: Backend,
    /// Seeds whose naive height exceeds this bound are skipped.
    pub height_cap: u64,
}

impl Default for PropagateConfig {
    fn default() -> Self {
        PropagateConfig { orbit: 20, fibers: 10, backend: Backend::Weierstrass, height_cap: 10_000 }
    }
}

/// How the translation on each fiber is obtained from its seed.
#[derive(Clone, Debug)]
pub enum TranslationSource<'a> {
    /// Conjugate point of a degree-two multisection.
    Multisection(&'a Multisection),
    /// A constant second section, in fiber coordinates.
    Section(Vec<Rational>),
    /// The QRT map of (2,2) fibers.
    Qrt,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub seed: usize,
    pub n: i64,
    pub backend: Backend,
    #[serde(with = "rational_vec_str")]
    pub base: Vec<Rational>,
    #[serde(with = "rational_vec_str")]
    pub fiber: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkipReport {
    pub seed: usize,
    #[serde(with = "rational_vec_str")]
    pub base: Vec<Rational>,
    pub reason: String,
}

/// A translate whose model coordinates are undefined; kept on the Weierstrass model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnmappedRecord {
    pub seed: usize,
    pub n: i64,
    #[serde(with = "rational_vec_str")]
    pub base: Vec<Rational>,
    /// `[A, B]` of `y^2 = x^3 + A x + B`.
    pub curve: [String; 2],
    /// Projective `(x : y : z)`.
    pub point: [String; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StreamItem {
    Point(PointRecord),
    Skip(SkipReport),
    Unmapped(UnmappedRecord),
}

impl PointRecord {
    pub fn ambient_point(&self, space: &FiberedSpace) -> Vec<Rational> {
        space.join(&self.base, &self.fiber)
    }
}

/// Largest absolute numerator or denominator of the normalized point.
pub fn naive_height(space: &FiberedSpace, p: &[Rational]) -> Result<u64> {
    let q = space.ambient().normalize(p)?;
    let mut h = 0u64;
    for x in &q {
        for v in [x.numer().abs(), x.denom().abs()] {
            h = h.max(u64::try_from(&v).unwrap_or(u64::MAX));
        }
    }
    Ok(h)
}

/// The other point of a degree-two multisection over the same base point.
///
/// The extra equations must be linear on the fiber: one fiber block is cut
/// to a line, every other fiber block to a single point. The fiber
/// equations restricted to that line share a binary quadratic whose second
/// root is the conjugate.
pub fn multisection_conjugate(m: &Multisection, point: &[Rational]) -> Result<Vec<Rational>> {
    let space = &m.parent;
    if !m.contains(point) {
        return Err(Error::NotOnCurve);
    }
    let (b, _) = space.split(point);
    let assign: Vec<(usize, Rational)> = space.base_vars().into_iter().zip(b.iter().cloned()).collect();
    let n = space.ambient().nvars();
    let one = Rational::from_integer(1.into());
    let extras: Vec<Poly> = m.extra.iter().map(|e| e.partial_eval(&assign)).filter(|e| !e.is_zero()).collect();
    let mut free = None;
    let mut images: Vec<Poly> = (0..n).map(|i| Poly::constant(2, point[i].clone())).collect();
    for k in space.fiber_blocks() {
        let r: Vec<usize> = space.ambient().block_range(k).collect();
        let mut rows = vec![];
        for e in &extras {
            if e.support_vars().iter().all(|v| !r.contains(v)) {
                continue;
            }
            if e.total_degree() != Some(1) || e.support_vars().iter().any(|v| !r.contains(v)) {
                return Err(Error::NotAMultisection("extra equations must be linear in one fiber block".into()));
            }
            rows.push(r.iter().map(|&i| e.coeff(&unit(n, i))).collect::<Vec<_>>());
        }
        let ker = linalg::kernel(&rows, r.len(), &one);
        match ker.len() {
            1 => {}
            2 if free.is_none() => {
                for (j, &i) in r.iter().enumerate() {
                    images[i] = Poly::from_terms(2, [(vec![1, 0], ker[0][j].clone()), (vec![0, 1], ker[1][j].clone())]);
                }
                free = Some((r, ker));
            }
            _ => return Err(Error::NotAMultisection("extra equations do not cut a line in one fiber block".into())),
        }
    }
    let (r, ker) = free.ok_or_else(|| Error::NotAMultisection("no free fiber block".into()))?;
    let mut q: Option<BinaryForm> = None;
    for f in space.equations() {
        let g = f.compose(&images);
        if g.is_zero() {
            continue;
        }
        let d = g.total_degree().unwrap_or(0) as usize;
        let bf = BinaryForm::new((0..=d).map(|i| g.coeff(&[i as u32, (d - i) as u32])).collect());
        q = Some(match q {
            None => bf,
            Some(h) => h.gcd(&bf),
        });
    }
    let q = q.ok_or_else(|| Error::NotAMultisection("fiber contains the whole line".into()))?;
    if q.degree() != 2 {
        return Err(Error::NotAMultisection(format!("line meets the fiber in degree {}", q.degree())));
    }
    // (s : t) of the seed: s e0 + t e1 proportional to the seed block
    let cols: Vec<Vec<Rational>> =
        (0..r.len()).map(|j| vec![ker[0][j].clone(), ker[1][j].clone(), point[r[j]].clone()]).collect();
    let k = linalg::kernel(&cols, 3, &one);
    let root = [k[0][0].clone(), k[0][1].clone()];
    let c = q.coeffs();
    let other = vieta_other_root(&[c[2].clone(), c[1].clone(), c[0].clone()], &root)?;
    let mut out = point.to_vec();
    for (j, &i) in r.iter().enumerate() {
        out[i] = &other[0] * &ker[0][j] + &other[1] * &ker[1][j];
    }
    Ok(out)
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

fn orbit_for_seed(
    space: &FiberedSpace,
    source: &TranslationSource,
    index: usize,
    seed: &[Rational],
    cfg: &PropagateConfig,
) -> Vec<StreamItem> {
    let (b, q) = space.split(seed);
    let skip = |reason: String| vec![StreamItem::Skip(SkipReport { seed: index, base: b.clone(), reason })];
    match naive_height(space, seed) {
        Ok(h) if h > cfg.height_cap => return skip(format!("seed height {h} exceeds cap {}", cfg.height_cap)),
        Err(e) => return skip(e.to_string()),
        _ => {}
    }
    if !space.contains(seed) {
        return skip("seed is not on the space".into());
    }
    let datum = (|| -> Result<TranslationDatum> {
        let fiber = space.fiber_model_at(&b)?;
        let model = fiber.with_marked(&q)?;
        let t = match source {
            TranslationSource::Multisection(m) => {
                let other = multisection_conjugate(m, seed)?;
                Translation::Conjugate(space.split(&other).1)
            }
            TranslationSource::Section(p) => Translation::Section(p.clone()),
            TranslationSource::Qrt => Translation::Qrt,
        };
        TranslationDatum::new(model, t)
    })();
    let datum = match datum {
        Ok(d) => d,
        Err(e) => return skip(e.to_string()),
    };
    match certify_nontorsion(&datum) {
        Ok(TorsionVerdict::NonTorsion) => {}
        Ok(TorsionVerdict::TorsionOfOrder(k)) => return skip(format!("translation is torsion of order {k}")),
        Err(e) => return skip(e.to_string()),
    }
    let mut out = vec![];
    for (n, r) in bt_orbit(&datum, cfg.orbit, cfg.backend).into_iter().enumerate() {
        let n = n as i64;
        let item = match r {
            Ok(FiberPoint::Model(f)) => {
                if space.contains(&space.join(&b, &f)) {
                    StreamItem::Point(PointRecord { seed: index, n, backend: cfg.backend, base: b.clone(), fiber: f })
                } else {
                    StreamItem::Skip(SkipReport { seed: index, base: b.clone(), reason: format!("translate {n} failed verification") })
                }
            }
            Ok(FiberPoint::Weierstrass(w)) => {
                let [x, y, z] = w.to_projective();
                let c = datum.curve();
                StreamItem::Unmapped(UnmappedRecord {
                    seed: index,
                    n,
                    base: b.clone(),
                    curve: [format_rational(c.a()), format_rational(c.b())],
                    point: [format_rational(&x), format_rational(&y), format_rational(&z)],
                })
            }
            Err(e) => StreamItem::Skip(SkipReport { seed: index, base: b.clone(), reason: format!("translate {n}: {e}") }),
        };
        out.push(item);
    }
    out
}

/// For each of the first `cfg.fibers` seeds: certify the translation and
/// emit `seed ⊕ n⊙τ` for `n = 0..=cfg.orbit`. Fibers are processed in
/// parallel and merged by `(seed, n)`.
pub fn generate_points(
    space: &FiberedSpace,
    source: &TranslationSource,
    seeds: &[Vec<Rational>],
    cfg: &PropagateConfig,
) -> Vec<StreamItem> {
    let k = cfg.fibers.min(seeds.len());
    let per_seed: Vec<Vec<StreamItem>> =
        seeds[..k].par_iter().enumerate().map(|(i, s)| orbit_for_seed(space, source, i, s, cfg)).collect();
    per_seed.into_iter().flatten().collect()
}

/// The emitted points as ambient coordinates.
pub fn points_of(space: &FiberedSpace, items: &[StreamItem]) -> Vec<Vec<Rational>> {
    items
        .iter()
        .filter_map(|it| match it {
            StreamItem::Point(r) => Some(r.ambient_point(space)),
            _ => None,
        })
        .collect()
}

/// JSON-lines rendering, one item per line.
pub fn to_json_lines(items: &[StreamItem]) -> String {
    let mut s = String::new();
    for it in items {
        s.push_str(&serde_json::to_string(it).expect("stream items serialize"));
        s.push('\n');
    }
    s
}

pub fn from_json_lines(text: &str) -> Result<Vec<StreamItem>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| Error::InvalidInput(format!("bad stream line: {e}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::int;
    use crate::algebra::space::GradedSpace;
    use crate::constructions::data::{e_multisection, k3_space, x1_form};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    fn x1_alone() -> FiberedSpace {
        FiberedSpace::hypersurface("X1", GradedSpace::p1_power(2), x1_form(), vec![]).unwrap()
    }

    #[test]
    fn x1_orbit_is_distinct_and_on_the_curve() {
        let s = x1_alone();
        let cfg = PropagateConfig { orbit: 50, fibers: 1, backend: Backend::Qrt, height_cap: 10_000 };
        let items = generate_points(&s, &TranslationSource::Qrt, &[ints(&[1, 0, 0, 1])], &cfg);
        let pts = points_of(&s, &items);
        assert_eq!(pts.len(), 51);
        assert!(pts.iter().all(|p| s.contains(p)));
        let set: std::collections::HashSet<_> = pts.iter().collect();
        assert_eq!(set.len(), 51);
    }

    #[test]
    fn zero_budget_echoes_seeds() {
        let s = x1_alone();
        let cfg = PropagateConfig { orbit: 0, ..Default::default() };
        let items = generate_points(&s, &TranslationSource::Qrt, &[ints(&[1, 0, 0, 1])], &cfg);
        assert_eq!(points_of(&s, &items), vec![ints(&[1, 0, 0, 1])]);
    }

    #[test]
    fn sign_conjugate_on_the_k3_fiber() {
        let m = e_multisection();
        // (t; u1, v2, v3, w0) = (7; 4, 13, -6, 1)
        let p = ints(&[7, 4, 13, -6, 1]);
        assert_eq!(multisection_conjugate(&m, &p).unwrap(), ints(&[7, 4, 13, 6, 1]));
    }

    #[test]
    fn k3_stream_is_deterministic_and_sound() {
        let m = e_multisection();
        let s = k3_space();
        let cfg = PropagateConfig { orbit: 3, fibers: 1, ..Default::default() };
        let seeds = vec![ints(&[7, 4, 13, -6, 1])];
        let a = generate_points(&s, &TranslationSource::Multisection(&m), &seeds, &cfg);
        let b = generate_points(&s, &TranslationSource::Multisection(&m), &seeds, &cfg);
        assert_eq!(to_json_lines(&a), to_json_lines(&b));
        let pts = points_of(&s, &a);
        assert_eq!(pts.len(), 4);
        assert!(pts.iter().all(|p| s.contains(p)));
        assert_eq!(from_json_lines(&to_json_lines(&a)).unwrap(), a);
    }

    #[test]
    fn height_cap_skips_seeds() {
        let s = x1_alone();
        let cfg = PropagateConfig { height_cap: 1, ..Default::default() };
        let items = generate_points(&s, &TranslationSource::Qrt, &[ints(&[1, -3, 2, 3])], &cfg);
        assert!(matches!(&items[0], StreamItem::Skip(r) if r.reason.contains("height")));
    }
}
