use proptest::prelude::*;

use td_casimir::anisotropic::{
    crossover_thickness, main_term_parallel, main_term_perp, orientation_forces, phi, psi,
};
use td_casimir::constants::DEFAULT_OMEGA_P;
use td_casimir::lifshitz::{lifshitz_force_local, nonlocal_isotropic_ratio, Validity};
use td_casimir::response::{fresnel_coefficients, IsotropicSlab, NanotubeArraySlab};
use td_casimir::special_math::{
    bose_integral, bose_weight, integrate_p_axis, integrate_x_axis, PTransform, QuadratureSpec,
};
use td_casimir::validity::{
    applicability_report, film_reflection_coeffs, halfspace_reflection_coeffs,
    DEFAULT_DEVIATION_THRESHOLD,
};

fn iso(d: f64) -> IsotropicSlab {
    IsotropicSlab::new(DEFAULT_OMEGA_P, 9.0, d).unwrap()
}

fn tubes(eps_b: f64, d: f64) -> NanotubeArraySlab {
    NanotubeArraySlab::new(2.0, 4.0, eps_b, d, DEFAULT_OMEGA_P).unwrap()
}

fn loose() -> QuadratureSpec {
    QuadratureSpec::new(1e-6, 1e-10).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bose_quadrature_matches_closed_form(s in 1.5f64..7.0) {
        let spec = QuadratureSpec::default();
        let numeric = integrate_x_axis(|x| bose_weight(x, s), &spec);
        let exact = bose_integral(s).unwrap();
        prop_assert!(numeric.converged);
        prop_assert!((numeric.value - exact).abs() <= 1e-7 * exact, "{} vs {}", numeric.value, exact);
    }

    #[test]
    fn p_transforms_agree(k in 2.0f64..6.0) {
        let f = |pt: td_casimir::special_math::PAxisPoint| pt.p.powf(-k) * (1.0 + 1.0 / (1.0 + pt.q));
        let a = integrate_p_axis(f, 0.0, &QuadratureSpec::default()).unwrap();
        let b = integrate_p_axis(
            f,
            0.0,
            &QuadratureSpec::default().with_transform(PTransform::ShiftedSquare),
        )
        .unwrap();
        prop_assert!((a.value - b.value).abs() <= a.error_estimate + b.error_estimate + 1e-12);
        // ∫₁^∞ p^{-k} dp is a lower bound, twice it an upper bound.
        let base = 1.0 / (k - 1.0);
        prop_assert!(a.value > base && a.value < 2.0 * base);
    }

    #[test]
    fn fresnel_bounded(eps in 1.0f64..1e6, p in 1.0f64..50.0) {
        let (rs, rp) = fresnel_coefficients(eps, p);
        prop_assert!((0.0..1.0).contains(&rs));
        prop_assert!(rp.abs() < 1.0);
    }

    #[test]
    fn film_never_exceeds_halfspace(
        x in 0.05f64..10.0,
        p in 1.0f64..20.0,
        l in 50.0f64..5000.0,
        d in 0.5f64..500.0,
    ) {
        let eps = |xi: f64| 1.0 + (DEFAULT_OMEGA_P / xi).powi(2) + 8.0;
        let (hs, hp) = halfspace_reflection_coeffs(x, p, l, eps);
        let (fs, fp) = film_reflection_coeffs(x, p, l, d, eps);
        prop_assert!(fs.abs() <= hs.abs() * (1.0 + 1e-12));
        prop_assert!(fp.abs() <= hp.abs() * (1.0 + 1e-12));
        prop_assert!(fs * hs >= 0.0);
    }

    #[test]
    fn background_factor_bounds(p in 1.0f64..100.0, eps_b in 1.01f64..1e3) {
        prop_assert!(phi(p, eps_b).unwrap() > 1.0);
        prop_assert!(psi(p, eps_b).unwrap() < -1.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn isotropic_ratio_orders_in_d(d1 in 3.0f64..300.0, factor in 1.5f64..5.0, l in 200.0f64..5000.0) {
        let spec = loose();
        let thin = nonlocal_isotropic_ratio(&iso(d1), l, &spec).unwrap();
        let thick = nonlocal_isotropic_ratio(&iso(d1 * factor), l, &spec).unwrap();
        let local = lifshitz_force_local(DEFAULT_OMEGA_P, l).unwrap();
        prop_assert!(thin.ratio_to_casimir < thick.ratio_to_casimir);
        prop_assert!(thick.ratio_to_casimir < local.ratio_to_casimir);
        prop_assert!(local.ratio_to_casimir < 1.0);
    }

    #[test]
    fn isotropic_ratio_grows_with_l(d in 5.0f64..200.0, l in 300.0f64..3000.0) {
        let spec = loose();
        let near = nonlocal_isotropic_ratio(&iso(d), l, &spec).unwrap();
        let far = nonlocal_isotropic_ratio(&iso(d), 1.5 * l, &spec).unwrap();
        prop_assert!(near.ratio_to_casimir < far.ratio_to_casimir);
        prop_assert!(far.pressure < near.pressure);
    }

    #[test]
    fn main_terms_bounded_and_ordered(eps_b in 1.2f64..20.0) {
        let spec = loose();
        let par = main_term_parallel(eps_b, &spec).unwrap();
        let perp = main_term_perp(eps_b, &spec).unwrap();
        prop_assert!(par.converged && perp.converged);
        prop_assert!(0.0 < perp.value && perp.value < par.value && par.value < 1.0);
    }

    #[test]
    fn halving_rel_tol_stays_within_error(d in 5.0f64..200.0, l in 200.0f64..5000.0) {
        let spec = QuadratureSpec::default();
        let a = nonlocal_isotropic_ratio(&iso(d), l, &spec).unwrap();
        let b = nonlocal_isotropic_ratio(&iso(d), l, &spec.with_rel_tol(spec.rel_tol / 2.0)).unwrap();
        prop_assert!((a.ratio_to_casimir - b.ratio_to_casimir).abs() <= a.error_estimate);
    }

    #[test]
    fn validity_deviation_shrinks_with_thickness(d in 5.0f64..100.0, l in 100.0f64..5000.0) {
        let a = applicability_report(&iso(d), l, DEFAULT_DEVIATION_THRESHOLD).unwrap();
        let b = applicability_report(&iso(2.0 * d), l, DEFAULT_DEVIATION_THRESHOLD).unwrap();
        prop_assert!(b.max_rel_deviation_s <= a.max_rel_deviation_s);
        prop_assert!(b.max_rel_deviation_p <= a.max_rel_deviation_p);
    }
}

#[test]
fn crossover_brackets_sign_change() {
    let spec = loose();
    for eps_b in [5.0, 10.0] {
        let c = crossover_thickness(&tubes(eps_b, 4.0), 1000.0, (4.0, 100.0), &spec).unwrap();
        let d = c.crossover_d.expect("crossover present");
        assert!(c.sign_low < 0 && c.sign_high > 0);
        let below = orientation_forces(&tubes(eps_b, d - 1.0), 1000.0, &spec).unwrap();
        let above = orientation_forces(&tubes(eps_b, d + 1.0), 1000.0, &spec).unwrap();
        assert!(below.f_parallel.ratio_to_casimir < below.f_perp.ratio_to_casimir);
        assert!(above.f_parallel.ratio_to_casimir > above.f_perp.ratio_to_casimir);
        let at = orientation_forces(&tubes(eps_b, d), 1000.0, &spec).unwrap();
        assert!(at.anisotropy.abs() < 1e-3, "{}", at.anisotropy);
    }
}

#[test]
fn correction_dominant_flag() {
    let spec = loose();
    let ok = nonlocal_isotropic_ratio(&iso(10.0), 1000.0, &spec).unwrap();
    assert_eq!(ok.validity, Validity::Valid);
    let dominant = nonlocal_isotropic_ratio(&iso(1.0), 30.0, &spec).unwrap();
    assert_eq!(dominant.validity, Validity::CorrectionDominant);
}
