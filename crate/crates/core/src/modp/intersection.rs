//! Proper-intersection audit for two plane curves given by pointwise evaluators.
//!
//! Two parts. Exhaustive counts of `|Δ(F_p)|`, `|B(F_p)|` and `|Δ∩B(F_p)|`
//! over `P^2(F_p)`, compared with the Bezout bound. And a line certificate:
//! both curves restricted to a random line over `F_P`, `P = 2^31 - 1`,
//! have coprime restrictions. A common component would meet every line, so
//! coprimality on one line rules it out over `F_P`, hence over `Q`.
//!
//! Evaluators may be chart-dependent: in chart `i` the value is the true
//! equation times a power of a chart factor. Chart factors are divided out
//! on the line before the gcd is taken; using two charts keeps components
//! along a single chart factor visible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::enumerate::projective_points;
use super::smooth::{CountReport, IntersectionVerdict, LineCertificate, LocusCount};
use super::unipoly;
use crate::algebra::field::{Fp, Rational, Ring};
use crate::algebra::poly::Poly;
use crate::error::{Error, Result};
use crate::fibration::DegeneracyData;

/// Large prime for the line certificate.
pub const CERTIFICATE_PRIME: u64 = 2_147_483_647;

/// A plane curve known through values at points of `P^2`.
pub trait PlaneEvaluator: Sync {
    fn name(&self) -> String;
    fn charts(&self) -> usize;
    fn check_prime(&self, p: u64) -> Result<()>;
    /// Vanishes exactly where chart `chart` is unavailable.
    fn chart_factor(&self, x: &[Fp], chart: usize) -> Fp;
    /// Value in chart `chart`, `None` where the chart factor vanishes.
    fn value(&self, x: &[Fp], chart: usize) -> Option<Fp>;

    /// Vanishing in the first available chart; points outside every chart count as on the curve.
    fn vanishes(&self, x: &[Fp]) -> bool {
        (0..self.charts()).find_map(|c| self.value(x, c)).is_none_or(|v| v.is_zero())
    }
}

fn lift(p: u64) -> impl Fn(&Rational) -> Fp {
    move |c| Fp::from_rational(c, p).expect("prime checked before evaluation")
}

/// A curve given by a single ternary form.
pub struct FormCurve {
    pub name: String,
    pub form: Poly,
}

impl PlaneEvaluator for FormCurve {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn charts(&self) -> usize {
        1
    }
    fn check_prime(&self, p: u64) -> Result<()> {
        self.form.terms().try_for_each(|(_, c)| Fp::from_rational(c, p).map(|_| ()))
    }
    fn chart_factor(&self, x: &[Fp], _: usize) -> Fp {
        x[0].one_like()
    }
    fn value(&self, x: &[Fp], _: usize) -> Option<Fp> {
        let p = x[0].modulus();
        Some(self.form.eval_with(x, lift(p), Fp::new(0, p)))
    }
}

/// Discriminant curve of a degeneracy-locus fibration over `P^2`.
pub struct DiscriminantCurve<'a>(pub &'a DegeneracyData);

/// Branch curve of the multisection cut by the section variable.
pub struct BranchCurve<'a>(pub &'a DegeneracyData);

macro_rules! degeneracy_evaluator {
    ($t:ident, $name:expr, $method:ident) => {
        impl PlaneEvaluator for $t<'_> {
            fn name(&self) -> String {
                $name.into()
            }
            fn charts(&self) -> usize {
                3
            }
            fn check_prime(&self, p: u64) -> Result<()> {
                self.0.check_prime(p)
            }
            fn chart_factor(&self, x: &[Fp], chart: usize) -> Fp {
                self.0.row_one(x, &lift(x[0].modulus()))[chart]
            }
            fn value(&self, x: &[Fp], chart: usize) -> Option<Fp> {
                self.0.$method(x, chart, &lift(x[0].modulus()))
            }
        }
    };
}

degeneracy_evaluator!(DiscriminantCurve, "discriminant", delta_at);
degeneracy_evaluator!(BranchCurve, "branch", branch_at);

/// Restriction of `f` to the parameter line, interpolated adaptively:
/// `m` nodes are accepted once they predict 8 further values.
fn restrict(f: &dyn Fn(Fp) -> Option<Fp>, p: u64) -> Result<Vec<Fp>> {
    let mut xs = vec![];
    let mut ys = vec![];
    let mut s = 0u64;
    let mut m = 16;
    while m <= 2048 {
        while xs.len() < m + 8 {
            let x = Fp::from_u64(s, p);
            s += 1;
            if let Some(y) = f(x) {
                xs.push(x);
                ys.push(y);
            }
            if s > 16 * (m as u64 + 8) {
                return Err(Error::InvalidInput("evaluator undefined along the line".into()));
            }
        }
        let g = unipoly::interpolate(&xs[..m], &ys[..m]);
        if (m..m + 8).all(|i| unipoly::eval(&g, xs[i]) == ys[i]) {
            return Ok(g);
        }
        m *= 2;
    }
    Err(Error::TooLarge("restriction degree exceeds 2047".into()))
}

fn strip(mut v: Vec<Fp>, factor: &[Fp]) -> Vec<Fp> {
    if v.is_empty() || factor.is_empty() {
        return v;
    }
    loop {
        let g = unipoly::gcd(&v, factor);
        if unipoly::degree(&g).unwrap_or(0) == 0 {
            return v;
        }
        v = unipoly::div_rem(&v, &g).0;
    }
}

fn line_point(a: &[Fp], b: &[Fp], s: Fp) -> Vec<Fp> {
    a.iter().zip(b).map(|(&x, &y)| x + s * y).collect()
}

/// Restricts both curves to one random line and tests coprimality chart by chart.
pub fn line_certificate(delta: &dyn PlaneEvaluator, branch: &dyn PlaneEvaluator, seed: u64) -> Result<LineCertificate> {
    let p = CERTIFICATE_PRIME;
    delta.check_prime(p)?;
    branch.check_prime(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a: Vec<u64> = (0..3).map(|_| rng.gen_range(1..p)).collect();
    let b: Vec<u64> = (0..3).map(|_| rng.gen_range(1..p)).collect();
    let af: Vec<Fp> = a.iter().map(|&v| Fp::from_u64(v, p)).collect();
    let bf: Vec<Fp> = b.iter().map(|&v| Fp::from_u64(v, p)).collect();
    let charts = delta.charts().max(branch.charts()).min(2);
    let mut coprime = true;
    let mut degrees = [0usize; 2];
    for chart in 0..charts {
        let mut stripped = vec![];
        for ev in [delta, branch] {
            let c = chart.min(ev.charts() - 1);
            let v = restrict(&|s| ev.value(&line_point(&af, &bf, s), c), p)?;
            let f = restrict(&|s| Some(ev.chart_factor(&line_point(&af, &bf, s), c)), p)?;
            stripped.push(strip(v, &f));
        }
        for (d, v) in degrees.iter_mut().zip(&stripped) {
            *d = (*d).max(unipoly::degree(v).unwrap_or(0));
        }
        let g = unipoly::gcd(&stripped[0], &stripped[1]);
        if unipoly::degree(&g) != Some(0) {
            coprime = false;
        }
    }
    Ok(LineCertificate { modulus: p, line: [a, b], degrees, charts_checked: charts, coprime })
}

/// Exhaustive counts over `P^2(F_p)` for each prime, plus the line certificate.
pub fn proper_intersection_audit(
    delta: &dyn PlaneEvaluator,
    branch: &dyn PlaneEvaluator,
    ps: &[u64],
    seed: u64,
) -> Result<CountReport> {
    let mut counts = vec![];
    for &p in ps {
        if !crate::algebra::field::is_prime(p) {
            return Err(Error::BadPrime(p, "not prime".into()));
        }
        delta.check_prime(p)?;
        branch.check_prime(p)?;
        let pts = projective_points(3, p);
        let (mut nd, mut nb, mut both) = (0u64, 0u64, 0u64);
        for x in &pts {
            let x: Vec<Fp> = x.iter().map(|&v| Fp::from_u64(v, p)).collect();
            let (d, b) = (delta.vanishes(&x), branch.vanishes(&x));
            nd += d as u64;
            nb += b as u64;
            both += (d && b) as u64;
        }
        let n = pts.len() as u64;
        let (dn, bn) = (delta.name(), branch.name());
        counts.push(LocusCount { p, locus: dn.clone(), count: nd, ambient: n });
        counts.push(LocusCount { p, locus: bn.clone(), count: nb, ambient: n });
        counts.push(LocusCount { p, locus: format!("{dn}∩{bn}"), count: both, ambient: n });
    }
    let cert = line_certificate(delta, branch, seed)?;
    let bound = (cert.degrees[0] * cert.degrees[1]) as u64;
    let bounded = counts.chunks(3).all(|c| c[2].count <= bound);
    let verdict = if cert.coprime && bounded { IntersectionVerdict::ProperLikely } else { IntersectionVerdict::NotProper };
    Ok(CountReport {
        space_id: format!("{}∩{}", delta.name(), branch.name()),
        counts,
        verdict: Some(verdict),
        certificate: Some(cert),
        constants: vec![],
    })
}
