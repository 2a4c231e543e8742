//! Construction II: the tower `X_1 ⊂ X_2 ⊂ ...` of (2,...,2) hypersurfaces in
//! `(P1)^{k+1}`, each containing the previous one as the fiber `T_{k+1} = 0`.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::audit::AuditReport;
use super::data::x1_form;
use crate::algebra::binary::disc_binary_form;
use crate::algebra::field::{int, Fp, Rational};
use crate::algebra::poly::Poly;
use crate::algebra::space::GradedSpace;
use crate::error::{Error, Result};
use crate::fibration::{salient_check_multisection, FiberedSpace, Multisection, SalientVerdict};
use crate::genus1::biquadratic_branch_quartic;
use crate::modp::{reduce_space, smoothness_certificate, AmbientPoints, DEFAULT_PRIMES};

/// Draws per level before giving up.
pub const MAX_ATTEMPTS: u64 = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction2Tower {
    pub seed: u64,
    /// `forms[k - 1]` is `F_k` on `(P1)^{k+1}`.
    pub forms: Vec<Poly>,
    /// Seed offset accepted at each level; zero for `F_1`.
    pub attempts: Vec<u64>,
}

impl Construction2Tower {
    pub fn height(&self) -> usize {
        self.forms.len()
    }

    /// `X_k` fibered over its first `k - 1` blocks; `X_1` has an empty base.
    pub fn level(&self, k: usize) -> Result<FiberedSpace> {
        let f = self
            .forms
            .get(k.wrapping_sub(1))
            .ok_or_else(|| Error::InvalidInput(format!("tower has no level {k}")))?;
        level_space(k, f.clone())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Construction2 {
    pub tower: Construction2Tower,
    pub audit: AuditReport,
}

fn level_space(k: usize, f: Poly) -> Result<FiberedSpace> {
    FiberedSpace::hypersurface(&format!("X{k}"), GradedSpace::p1_power(k + 1), f, (0..k - 1).collect())
}

/// Uniform coefficients in `[-3, 3]` on every monomial of multidegree `(2, ..., 2)`
/// on `(P1)^k`, embedded into `2k + 2` variables.
fn draw_multiform(k: usize, rng: &mut ChaCha8Rng) -> Result<Poly> {
    let monos = GradedSpace::p1_power(k).monomials_of_degree(&vec![2; k])?;
    let f = Poly::from_terms(2 * k, monos.into_iter().map(|e| (e, int(rng.gen_range(-3..=3)))));
    Ok(f.embed(2 * k + 2, &(0..2 * k).collect::<Vec<_>>()))
}

/// `F_k = S^2 F_{k-1} + S T G + T^2 H` with `(S, T)` the new last block.
pub fn tower_step(prev: &Poly, g: &Poly, h: &Poly) -> Poly {
    let n = prev.nvars() + 2;
    let s = Poly::var(n, n - 2);
    let t = Poly::var(n, n - 1);
    let prev = prev.embed(n, &(0..n - 2).collect::<Vec<_>>());
    &(&(&(&s * &s) * &prev) + &(&(&s * &t) * g)) + &(&(&t * &t) * h)
}

/// `F_k(..., S_{k+1} = 1, T_{k+1} = 0) = F_{k-1}`.
pub fn tower_identity(prev: &Poly, next: &Poly) -> bool {
    let n = next.nvars();
    if n != prev.nvars() + 2 {
        return false;
    }
    let r = next.partial_eval(&[(n - 2, Rational::one()), (n - 1, Rational::zero())]);
    r.restrict_vars(&(0..n - 2).collect::<Vec<_>>()) == *prev
}

fn smoothness_step(space: &FiberedSpace, primes: &[u64]) -> Result<(bool, Value)> {
    let mut tried = vec![];
    for &p in primes {
        let cert = smoothness_certificate(&reduce_space(space, p)?)?;
        if cert.is_certified() {
            return Ok((true, json!({ "certified_at": p, "tried": tried })));
        }
        tried.push(serde_json::to_value(&cert).unwrap_or(Value::Null));
    }
    Ok((false, json!({ "certified_at": null, "tried": tried })))
}

/// `X_1` inside `X_2` as the degree-two multisection `T_3 = 0` over the first block.
pub fn x1_in_x2(x2: &FiberedSpace, f1: &Poly) -> Result<Multisection> {
    let extra = vec![Poly::var(6, 5)];
    Multisection::new("X1", x2.clone(), extra, GradedSpace::p1_power(2), f1.clone(), 2)
}

fn exact_salient_step(x2: &FiberedSpace, f1: &Poly) -> Result<(bool, Value)> {
    let v = salient_check_multisection(&x1_in_x2(x2, f1)?)?;
    let pass = matches!(v, SalientVerdict::Salient { .. });
    Ok((pass, json!({ "method": "exact_gcd", "verdict": v })))
}

fn reduce_int(r: &Rational, p: u64) -> Result<Fp> {
    Fp::from_rational(r, p)
}

/// Mod-p salient witness for `X_{k-1} ⊂ X_k`, `k >= 3`: a base point `b` of
/// `(P1)^{k-1}` over `F_p` where the quadratic of `X_{k-1}` in block `k` has
/// a double root while the (2,2) fiber of `X_k` is smooth. One-sided: no
/// witness at any prime proves nothing.
pub fn modp_salient_witness(prev: &Poly, next: &Poly, p: u64) -> Result<Option<Vec<u64>>> {
    let k = next.nvars() / 2 - 1;
    let base = GradedSpace::p1_power(k - 1);
    let nb = 2 * (k - 1);
    for b in AmbientPoints::new(&base, p).iter() {
        let assign: Vec<(usize, Rational)> = b.iter().enumerate().map(|(i, &x)| (i, int(x as i64))).collect();
        // prev restricted to b: binary quadratic in block k
        let q = prev.partial_eval(&assign).restrict_vars(&[nb, nb + 1]);
        let qc: Vec<Rational> = (0..=2).rev().map(|i| q.coeff(&[i, 2 - i])).collect();
        if qc.iter().all(|c| reduce_int(c, p).map(|x| x.is_zero()).unwrap_or(false)) {
            continue;
        }
        if !reduce_int(&disc_binary_form(&qc)?, p)?.is_zero() {
            continue;
        }
        let fiber = next.partial_eval(&assign).restrict_vars(&[nb, nb + 1, nb + 2, nb + 3]);
        let quartic = biquadratic_branch_quartic(&fiber, 1)?;
        if quartic.coeffs().len() != 5 {
            continue;
        }
        if !reduce_int(&disc_binary_form(&quartic.coeffs())?, p)?.is_zero() {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

fn modp_salient_step(prev: &Poly, next: &Poly, primes: &[u64]) -> Result<(bool, Value)> {
    for &p in primes {
        if let Some(b) = modp_salient_witness(prev, next, p)? {
            return Ok((true, json!({ "method": "mod_p", "p": p, "base_point": b })));
        }
    }
    Ok((false, json!({ "method": "mod_p", "primes": primes, "base_point": null })))
}

fn level_steps(report: &mut AuditReport, k: usize, prev: Option<&Poly>, f: &Poly, primes: &[u64]) {
    let id = 3 * (k as u32 - 1);
    let identity = match prev {
        Some(prev) => tower_identity(prev, f),
        None => *f == x1_form(),
    };
    report.push(id + 1, &format!("tower_identity_{k}"), identity, json!({ "level": k }));
    let space = match level_space(k, f.clone()) {
        Ok(s) => s,
        Err(e) => {
            report.push(id + 2, &format!("smoothness_{k}"), false, json!({ "error": e.to_string() }));
            return;
        }
    };
    report.push_result(id + 2, &format!("smoothness_{k}"), smoothness_step(&space, primes));
    match prev {
        None => {}
        Some(prev) if k == 2 => report.push_result(id + 3, "salient_2", exact_salient_step(&space, prev)),
        Some(prev) => report.push_result(id + 3, &format!("salient_{k}"), modp_salient_step(prev, f, primes)),
    }
}

/// Audit of every level: identity with the level below, a mod-p smoothness
/// certificate, and salient ramification of the level below.
pub fn audit_construction2(tower: &Construction2Tower, primes: &[u64]) -> AuditReport {
    let mut report = AuditReport::new();
    for (i, f) in tower.forms.iter().enumerate() {
        let prev = i.checked_sub(1).map(|j| &tower.forms[j]);
        level_steps(&mut report, i + 1, prev, f, primes);
    }
    report
}

pub fn build_construction2(n: usize, seed: u64, primes: &[u64]) -> Result<Construction2> {
    if n == 0 {
        return Err(Error::InvalidInput("tower height must be at least 1".into()));
    }
    let mut forms = vec![x1_form()];
    let mut attempts = vec![0];
    for k in 2..=n {
        let prev = forms.last().expect("nonempty").clone();
        let mut accepted = None;
        for attempt in 0..MAX_ATTEMPTS {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
            rng.set_stream(k as u64);
            let g = draw_multiform(k, &mut rng)?;
            let h = draw_multiform(k, &mut rng)?;
            let f = tower_step(&prev, &g, &h);
            let mut r = AuditReport::new();
            level_steps(&mut r, k, Some(&prev), &f, primes);
            if r.all_pass() {
                accepted = Some((f, attempt));
                break;
            }
        }
        let (f, attempt) = accepted
            .ok_or_else(|| Error::GenericityFailure(format!("no audited level {k} in {MAX_ATTEMPTS} draws")))?;
        forms.push(f);
        attempts.push(attempt);
    }
    let tower = Construction2Tower { seed, forms, attempts };
    let audit = audit_construction2(&tower, primes).into_result()?;
    Ok(Construction2 { tower, audit })
}

/// Default ladder and seed 42.
pub fn build_construction2_default(n: usize) -> Result<Construction2> {
    build_construction2(n, 42, &DEFAULT_PRIMES)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_case_is_x1() {
        let c = build_construction2_default(1).unwrap();
        assert_eq!(c.tower.forms, vec![x1_form()]);
        assert!(c.audit.all_pass());
    }

    #[test]
    fn second_level_passes_and_restricts() {
        let c = build_construction2_default(2).unwrap();
        let f2 = &c.tower.forms[1];
        assert!(tower_identity(&x1_form(), f2));
        assert_eq!(c.audit.steps.len(), 5);
        let x2 = c.tower.level(2).unwrap();
        for (e, _) in x2.equations()[0].terms() {
            assert!((0..3).all(|b| e[2 * b] + e[2 * b + 1] == 2));
        }
    }

    #[test]
    fn fiber_restricts_to_lower_level() {
        use crate::fibration::FiberCurve;
        let c = build_construction2_default(2).unwrap();
        let x2 = c.tower.level(2).unwrap();
        let mut checked = 0;
        for j in 0..10 {
            let b = [int(1), int(j)];
            let Ok(FiberCurve::Biquadratic(f)) = x2.fiber_model_at(&b) else { continue };
            let low = f.partial_eval(&[(2, int(1)), (3, int(0))]).restrict_vars(&[0, 1]);
            let want = x1_form().partial_eval(&[(0, int(1)), (1, int(j))]).restrict_vars(&[2, 3]);
            assert_eq!(low, want);
            checked += 1;
        }
        assert!(checked >= 8);
    }

    #[test]
    fn third_level_uses_modp_salient_witness() {
        let c = build_construction2_default(3).unwrap();
        let w = &c.audit.step(9).unwrap().witness;
        assert_eq!(w["method"], "mod_p");
        assert!(tower_identity(&c.tower.forms[1], &c.tower.forms[2]));
    }

    #[test]
    fn trivial_extension_fails_audit() {
        let zero = Poly::zero(6);
        let f2 = tower_step(&x1_form(), &zero, &zero);
        let tower = Construction2Tower { seed: 0, forms: vec![x1_form(), f2], attempts: vec![0, 0] };
        let r = audit_construction2(&tower, &DEFAULT_PRIMES);
        assert!(r.step(4).unwrap().status == super::super::StepStatus::Pass);
        assert!(r.any_fail());
        assert_eq!(r.step(5).unwrap().status, super::super::StepStatus::Fail);
    }

    #[test]
    fn step_identity_detects_change() {
        let g = Poly::zero(6);
        let f2 = tower_step(&x1_form(), &g, &g);
        assert!(tower_identity(&x1_form(), &f2));
        let bumped = &f2 + &Poly::monomial(vec![2, 0, 2, 0, 2, 0], int(1));
        assert!(!tower_identity(&x1_form(), &bumped));
    }

    #[test]
    fn rejects_zero_height() {
        assert!(matches!(build_construction2_default(0), Err(Error::InvalidInput(_))));
    }
}
