//! When may a finite film be treated as a half-space?
//!
//! Compares the reflection coefficients of a film of thickness d with those
//! of a semi-infinite medium of the same permittivity, and checks the two
//! length-scale bounds 2dω_p/c > 1 and c/(2lω_p) < 1.

use serde::{Deserialize, Serialize};

use crate::constants::SPEED_OF_LIGHT_NM_PER_S;
use crate::error::Result;
use crate::response::{drude_eps_imaginary_axis, fresnel_coefficients, xi_from_xp, IsotropicSlab};

pub const DEFAULT_DEVIATION_THRESHOLD: f64 = 0.01;

/// x values probed by [`applicability_report`].
pub const SCAN_X: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
/// p values probed by [`applicability_report`].
pub const SCAN_P: [f64; 5] = [1.0, 1.5, 2.0, 4.0, 10.0];

/// Half-space Fresnel coefficients (r_s, r_p) at the imaginary frequency
/// ξ = xc/(2pl).
pub fn halfspace_reflection_coeffs<E: Fn(f64) -> f64>(
    x: f64,
    p: f64,
    l_nm: f64,
    eps_fn: E,
) -> (f64, f64) {
    fresnel_coefficients(eps_fn(xi_from_xp(x, p, l_nm)), p)
}

/// Film coefficients R = r(1 − e)/(1 − r²e), where e = exp(−2dξs/c) is the
/// round-trip attenuation across the film on the imaginary axis.
pub fn film_reflection_coeffs<E: Fn(f64) -> f64>(
    x: f64,
    p: f64,
    l_nm: f64,
    d_nm: f64,
    eps_fn: E,
) -> (f64, f64) {
    let eps = eps_fn(xi_from_xp(x, p, l_nm));
    let (r_s, r_p) = fresnel_coefficients(eps, p);
    let s = (eps - 1.0 + p * p).sqrt();
    // 2dξs/c with ξ = xc/(2pl)
    let e = (-d_nm * x * s / (p * l_nm)).exp();
    let film = |r: f64| r * (1.0 - e) / (1.0 - r * r * e);
    (film(r_s), film(r_p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApplicabilityReport {
    pub max_rel_deviation_s: f64,
    pub max_rel_deviation_p: f64,
    /// 2dω_p/c > 1
    pub d_ok: bool,
    /// c/(2lω_p) < 1
    pub l_ok: bool,
    pub threshold: f64,
    pub verdict: bool,
}

fn relative_deviation(film: f64, halfspace: f64) -> f64 {
    if halfspace == 0.0 {
        film.abs()
    } else {
        ((film - halfspace) / halfspace).abs()
    }
}

/// Scans the (x, p) grid for the largest relative deviation between film
/// and half-space coefficients of a Drude film.
pub fn applicability_report(
    slab: &IsotropicSlab,
    l_nm: f64,
    threshold: f64,
) -> Result<ApplicabilityReport> {
    slab.validate()?;
    if !(l_nm > 0.0 && l_nm.is_finite()) {
        return Err(crate::error::domain("l", l_nm, "l > 0"));
    }
    if !(threshold > 0.0) {
        return Err(crate::error::domain(
            "threshold",
            threshold,
            "threshold > 0",
        ));
    }
    let eps = |xi: f64| {
        drude_eps_imaginary_axis(xi, slab.omega_p3d, slab.eps_b, slab.damping_delta)
            .expect("scan frequencies are positive")
    };
    let (mut dev_s, mut dev_p) = (0.0f64, 0.0f64);
    for &x in &SCAN_X {
        for &p in &SCAN_P {
            let (r_s, r_p) = halfspace_reflection_coeffs(x, p, l_nm, eps);
            let (f_s, f_p) = film_reflection_coeffs(x, p, l_nm, slab.thickness_d, eps);
            dev_s = dev_s.max(relative_deviation(f_s, r_s));
            dev_p = dev_p.max(relative_deviation(f_p, r_p));
        }
    }
    let plasma_length = SPEED_OF_LIGHT_NM_PER_S / slab.omega_p3d;
    let d_ok = 2.0 * slab.thickness_d / plasma_length > 1.0;
    let l_ok = plasma_length / (2.0 * l_nm) < 1.0;
    Ok(ApplicabilityReport {
        max_rel_deviation_s: dev_s,
        max_rel_deviation_p: dev_p,
        d_ok,
        l_ok,
        threshold,
        verdict: d_ok && l_ok && dev_s <= threshold && dev_p <= threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::DEFAULT_OMEGA_P;

    fn drude(xi: f64) -> f64 {
        drude_eps_imaginary_axis(xi, DEFAULT_OMEGA_P, 9.0, 0.0).unwrap()
    }

    #[test]
    fn vacuum_has_no_reflection() {
        assert_eq!(
            halfspace_reflection_coeffs(1.0, 2.0, 100.0, |_| 1.0),
            (0.0, 0.0)
        );
        assert_eq!(
            film_reflection_coeffs(1.0, 2.0, 100.0, 10.0, |_| 1.0),
            (0.0, 0.0)
        );
    }

    #[test]
    fn thick_film_is_halfspace() {
        for &x in &SCAN_X {
            for &p in &SCAN_P {
                let r = halfspace_reflection_coeffs(x, p, 300.0, drude);
                let f = film_reflection_coeffs(x, p, 300.0, 1e7, drude);
                assert_eq!(r, f);
            }
        }
    }

    #[test]
    fn attenuation_matches_drude_closed_form() {
        // for Drude media 2dξs/c = 2d(ω_p/c)√(1 + x²(p² + ε_b − 1)/p² · (c/(2lω_p))²)
        let (d, l) = (10.0, 100.0);
        let lp = SPEED_OF_LIGHT_NM_PER_S / DEFAULT_OMEGA_P;
        for &x in &SCAN_X {
            for &p in &SCAN_P {
                let a = lp / (2.0 * l);
                let e =
                    (-2.0 * d / lp * (1.0 + x * x * (p * p + 8.0) / (p * p) * a * a).sqrt()).exp();
                let (r_s, r_p) = halfspace_reflection_coeffs(x, p, l, drude);
                let (f_s, f_p) = film_reflection_coeffs(x, p, l, d, drude);
                for (r, f) in [(r_s, f_s), (r_p, f_p)] {
                    let expected = r * (1.0 - e) / (1.0 - r * r * e);
                    assert!((f - expected).abs() < 1e-12, "x {x} p {p}");
                }
            }
        }
    }

    #[test]
    fn thin_film_deviates_more() {
        let dev = |d: f64| {
            let r = halfspace_reflection_coeffs(1.0, 1.0, 100.0, drude);
            let f = film_reflection_coeffs(1.0, 1.0, 100.0, d, drude);
            relative_deviation(f.0, r.0).max(relative_deviation(f.1, r.1))
        };
        assert!(dev(1.0) > 5.0 * dev(10.0));
    }

    #[test]
    fn report_flags() {
        let s = IsotropicSlab::new(DEFAULT_OMEGA_P, 9.0, 20.0).unwrap();
        let r = applicability_report(&s, 1000.0, DEFAULT_DEVIATION_THRESHOLD).unwrap();
        assert!(r.d_ok && r.l_ok && r.verdict, "{r:?}");
        let thin = s.with_thickness(2.0).unwrap();
        let r = applicability_report(&thin, 1000.0, DEFAULT_DEVIATION_THRESHOLD).unwrap();
        assert!(!r.d_ok && !r.verdict);
        let r = applicability_report(&s, 5.0, DEFAULT_DEVIATION_THRESHOLD).unwrap();
        assert!(!r.l_ok && !r.verdict);
    }
}
