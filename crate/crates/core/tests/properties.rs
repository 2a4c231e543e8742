//! Randomized invariants of the group laws, the QRT dynamics and the density proxy.

use cyrat::algebra::field::{int, Rational};
use cyrat::algebra::poly::Poly;
use cyrat::algebra::space::GradedSpace;
use cyrat::constructions::data::{default_cubic, default_origin, x1_form};
use cyrat::constructions::tower::{tower_identity, tower_step};
use cyrat::genus1::cubic::normalize_vec;
use cyrat::genus1::{Biquadratic, ECPoint, GenusOneModel, PlaneCubic, WeierstrassCurve};
use cyrat::propagate::{
    bt_orbit, bt_translate, from_json_lines, generate_points, to_json_lines, vanishing_forms, Backend, FiberPoint,
    PropagateConfig, Translation, TranslationDatum, TranslationSource,
};
use proptest::prelude::*;

/// `y^2 = x^3 - 52x + 144` with the non-torsion point `(0, 12)`, and
/// `y^2 = x^3 - 2` with `(3, 5)`.
fn curves() -> Vec<(WeierstrassCurve, ECPoint)> {
    vec![
        (WeierstrassCurve::from_ints(-52, 144).unwrap(), ECPoint::from_ints(0, 12)),
        (WeierstrassCurve::from_ints(0, -2).unwrap(), ECPoint::from_ints(3, 5)),
    ]
}

fn x1_curve() -> Biquadratic {
    Biquadratic::new(x1_form(), [int(1), int(0), int(0), int(1)]).unwrap()
}

fn x1_orbit(len: usize) -> Vec<[Rational; 4]> {
    let b = x1_curve();
    let mut x = b.marked().clone();
    let mut out = vec![x.clone()];
    for _ in 0..len {
        x = b.qrt_step(&x).unwrap();
        out.push(x.clone());
    }
    out
}

fn proj(p: &ECPoint) -> Vec<Rational> {
    normalize_vec(&p.to_projective()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn weierstrass_group_axioms(which in 0usize..2, a in -6i64..=6, b in -6i64..=6, c in -6i64..=6) {
        let (e, g) = &curves()[which];
        let (pa, pb, pc) = (e.mul(a, g).unwrap(), e.mul(b, g).unwrap(), e.mul(c, g).unwrap());
        let left = e.add(&e.add(&pa, &pb).unwrap(), &pc).unwrap();
        let right = e.add(&pa, &e.add(&pb, &pc).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(e.add(&pa, &ECPoint::Infinity).unwrap(), pa.clone());
        prop_assert!(e.add(&pa, &e.neg(&pa).unwrap()).unwrap().is_infinity());
        prop_assert!(e.contains(&left));
        prop_assert_eq!(e.add(&pa, &pb).unwrap(), e.mul(a + b, g).unwrap());
    }

    #[test]
    fn plane_cubic_law_matches_weierstrass(a in -5i64..=5, b in -5i64..=5) {
        let (e, g) = &curves()[0];
        let c = PlaneCubic::new(default_cubic(), default_origin()).unwrap();
        let (pa, pb) = (e.mul(a, g).unwrap(), e.mul(b, g).unwrap());
        let sum = c.add(&pa.to_projective(), &pb.to_projective()).unwrap();
        prop_assert_eq!(sum.to_vec(), proj(&e.add(&pa, &pb).unwrap()));
    }

    #[test]
    fn plane_cubic_associative_with_moved_origin(a in -3i64..=3, b in -3i64..=3, c in -3i64..=3) {
        // Origin (0:12:1) is not a flex, so the chord law needs its second chord.
        let (e, g) = &curves()[0];
        let cub = PlaneCubic::new(default_cubic(), g.to_projective()).unwrap();
        let pt = |k: i64| e.mul(k, g).unwrap().to_projective();
        let (pa, pb, pc) = (pt(a + 1), pt(b - 1), pt(c));
        let left = cub.add(&cub.add(&pa, &pb).unwrap(), &pc).unwrap();
        let right = cub.add(&pa, &cub.add(&pb, &pc).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(cub.add(&pa, cub.origin()).unwrap().to_vec(), normalize_vec(&pa).unwrap());
        let inv = cub.neg(&pa).unwrap();
        prop_assert_eq!(cub.add(&pa, &inv).unwrap(), cub.origin().clone());
    }

    #[test]
    fn vieta_involutions_are_involutions(k in 0usize..8, axis in 1usize..=2) {
        let b = x1_curve();
        let p = x1_orbit(k)[k].clone();
        let q = b.vieta_involution(&p, axis).unwrap();
        prop_assert!(b.contains(&q));
        let back = b.vieta_involution(&q, axis).unwrap();
        prop_assert_eq!(normalize_vec(&back).unwrap(), normalize_vec(&p).unwrap());
        let step_back = b.qrt_inverse(&b.qrt_step(&p).unwrap()).unwrap();
        prop_assert_eq!(normalize_vec(&step_back).unwrap(), normalize_vec(&p).unwrap());
    }

    #[test]
    fn qrt_orbit_is_an_arithmetic_progression(start in 0i64..6) {
        let datum = TranslationDatum::new(GenusOneModel::Biquadratic(x1_curve()), Translation::Qrt).unwrap();
        let e = datum.curve().clone();
        let w: Vec<ECPoint> = (start..start + 5)
            .map(|n| match bt_translate(&datum, n, Backend::Qrt).unwrap() {
                FiberPoint::Model(p) => datum.to_weierstrass(&p).unwrap(),
                FiberPoint::Weierstrass(q) => q,
            })
            .collect();
        for i in 0..4 {
            prop_assert_eq!(e.sub(&w[i + 1], &w[i]).unwrap(), datum.tau().clone());
        }
        prop_assert_eq!(w[0].clone(), e.mul(start, datum.tau()).unwrap());
    }

    #[test]
    fn density_kernel_is_monotone(cut in 1usize..14) {
        let pts: Vec<Vec<Rational>> = x1_orbit(14).into_iter().map(|p| p.to_vec()).collect();
        let amb = GradedSpace::p1_power(2);
        let small = vanishing_forms(&amb, &pts[..cut], &[2, 2]).unwrap().len();
        let large = vanishing_forms(&amb, &pts[..cut + 1], &[2, 2]).unwrap().len();
        prop_assert!(large <= small);
        prop_assert!(large >= 1);
    }

    #[test]
    fn tower_identity_holds_for_any_extension(coeffs in proptest::collection::vec(-3i64..=3, 18)) {
        let amb = GradedSpace::p1_power(2);
        let monos = amb.monomials_of_degree(&[2, 2]).unwrap();
        let form = |cs: &[i64]| Poly::from_terms(4, monos.iter().cloned().zip(cs.iter().map(|&c| int(c)))).embed(6, &[0, 1, 2, 3]);
        let f2 = tower_step(&x1_form(), &form(&coeffs[..9]), &form(&coeffs[9..]));
        prop_assert!(tower_identity(&x1_form(), &f2));
    }
}

#[test]
fn incremental_orbit_matches_single_translates() {
    let datum = TranslationDatum::new(GenusOneModel::Biquadratic(x1_curve()), Translation::Qrt).unwrap();
    for backend in [Backend::Qrt, Backend::Weierstrass] {
        let orbit = bt_orbit(&datum, 6, backend);
        for (n, r) in orbit.into_iter().enumerate() {
            assert_eq!(r.unwrap(), bt_translate(&datum, n as i64, backend).unwrap());
        }
    }
}

#[test]
fn qrt_and_weierstrass_backends_agree() {
    let s = cyrat::fibration::FiberedSpace::hypersurface("X1", GradedSpace::p1_power(2), x1_form(), vec![]).unwrap();
    let seeds = vec![vec![int(1), int(0), int(0), int(1)]];
    let run = |backend| {
        let cfg = PropagateConfig { orbit: 10, fibers: 1, backend, height_cap: 10_000 };
        cyrat::propagate::points_of(&s, &generate_points(&s, &TranslationSource::Qrt, &seeds, &cfg))
    };
    assert_eq!(run(Backend::Qrt), run(Backend::Weierstrass));
}

#[test]
fn stream_round_trips_and_is_deterministic() {
    let s = cyrat::fibration::FiberedSpace::hypersurface("X1", GradedSpace::p1_power(2), x1_form(), vec![]).unwrap();
    let seeds = vec![vec![int(1), int(0), int(0), int(1)]];
    let cfg = PropagateConfig { orbit: 12, fibers: 1, backend: Backend::Qrt, height_cap: 10_000 };
    let a = generate_points(&s, &TranslationSource::Qrt, &seeds, &cfg);
    let b = generate_points(&s, &TranslationSource::Qrt, &seeds, &cfg);
    assert_eq!(to_json_lines(&a), to_json_lines(&b));
    assert_eq!(from_json_lines(&to_json_lines(&a)).unwrap(), a);
}
