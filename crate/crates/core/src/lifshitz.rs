//! Force evaluators for identical isotropic slabs.
//!
//! All forces are reported relative to the ideal-conductor Casimir pressure
//! F_C = ħcπ²/(240 l⁴) and as absolute attractive pressures in Pa.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::constants::{HBAR_C_J_M, NM_TO_M, SPEED_OF_LIGHT_NM_PER_S};
use crate::error::{domain, Error, Result};
use crate::response::{fresnel_coefficients, xi_from_xp, IsotropicSlab, Slab};
use crate::special_math::{
    bose_integral, bose_weight, integrate_p_axis, integrate_xp, IntegralResult, QuadratureSpec,
};

/// A first-order correction larger than this fraction of the leading term
/// marks the large-separation expansion as untrustworthy.
pub const CORRECTION_DOMINANT_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Validity {
    Valid,
    CorrectionDominant,
    QuadratureFailed,
}

impl Validity {
    pub fn as_str(self) -> &'static str {
        match self {
            Validity::Valid => "valid",
            Validity::CorrectionDominant => "correction_dominant",
            Validity::QuadratureFailed => "quadrature_failed",
        }
    }

    /// Classifies an expansion `leading − correction`.
    pub fn classify(converged: bool, leading: f64, correction: f64) -> Self {
        if !converged {
            Validity::QuadratureFailed
        } else if correction > CORRECTION_DOMINANT_THRESHOLD * leading {
            Validity::CorrectionDominant
        } else {
            Validity::Valid
        }
    }
}

impl std::fmt::Display for Validity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceResult {
    /// F / F_C.
    pub ratio_to_casimir: f64,
    /// Attractive pressure, Pa.
    pub pressure: f64,
    /// Absolute error estimate of `ratio_to_casimir`.
    pub error_estimate: f64,
    pub validity: Validity,
}

impl ForceResult {
    /// Builds a result at separation `l_nm`; the pressure is derived from
    /// the ratio.
    pub fn from_ratio(
        ratio: f64,
        error_estimate: f64,
        validity: Validity,
        l_nm: f64,
    ) -> Result<Self> {
        Ok(Self {
            ratio_to_casimir: ratio,
            pressure: ratio * casimir_pressure(l_nm)?,
            error_estimate,
            validity,
        })
    }
}

fn check_separation(l_nm: f64) -> Result<()> {
    if l_nm > 0.0 && l_nm.is_finite() {
        Ok(())
    } else {
        Err(domain("l", l_nm, "l > 0"))
    }
}

/// Casimir pressure between ideal conductors, ħcπ²/(240 l⁴), in Pa.
pub fn casimir_pressure(l_nm: f64) -> Result<f64> {
    check_separation(l_nm)?;
    let l = l_nm * NM_TO_M;
    Ok(HBAR_C_J_M * PI * PI / (240.0 * l.powi(4)))
}

/// Full Lifshitz force between two half-spaces whose permittivities on the
/// imaginary axis are given by `eps1` and `eps2` (functions of ξ in s⁻¹).
pub fn lifshitz_pressure_general<E1, E2>(
    eps1: E1,
    eps2: E2,
    l_nm: f64,
    spec: &QuadratureSpec,
) -> Result<ForceResult>
where
    E1: Fn(f64) -> f64,
    E2: Fn(f64) -> f64,
{
    check_separation(l_nm)?;
    spec.validate()?;
    let integral = integrate_xp(
        |x, pt| {
            let xi = xi_from_xp(x, pt.p, l_nm);
            let (r1s, r1p) = fresnel_coefficients(eps1(xi), pt.p);
            let (r2s, r2p) = fresnel_coefficients(eps2(xi), pt.p);
            let e = (-x).exp();
            let ts = r1s * r2s * e;
            let tp = r1p * r2p * e;
            x * x * x / (pt.p * pt.p) * (ts / (1.0 - ts) + tp / (1.0 - tp))
        },
        spec,
    );
    let r = integral.scale(15.0 / (2.0 * PI.powi(4)));
    let validity = if r.converged {
        Validity::Valid
    } else {
        Validity::QuadratureFailed
    };
    ForceResult::from_ratio(r.value, r.error_estimate, validity, l_nm)
}

/// Local Lifshitz force of two identical Drude slabs at large separation,
/// F_C (1 − 16c/(3ω_p l)).
pub fn lifshitz_force_local(omega_p: f64, l_nm: f64) -> Result<ForceResult> {
    check_separation(l_nm)?;
    if !(omega_p > 0.0 && omega_p.is_finite()) {
        return Err(domain("omega_p", omega_p, "omega_p > 0"));
    }
    let correction = 16.0 * SPEED_OF_LIGHT_NM_PER_S / (3.0 * omega_p * l_nm);
    ForceResult::from_ratio(
        1.0 - correction,
        0.0,
        Validity::classify(true, 1.0, correction),
        l_nm,
    )
}

/// (15/π⁴) Γ(5)ζ(4) ∫₁^∞ (p² + 1)/p⁴ dp, the d → ∞ coefficient of the
/// nonlocal correction, assembled from its two factors. Equals 16/3.
pub fn local_limit_coefficient(spec: &QuadratureSpec) -> Result<IntegralResult> {
    let p_part = integrate_p_axis(
        |pt| {
            let p2 = pt.p * pt.p;
            (p2 + 1.0) / (p2 * p2)
        },
        0.0,
        spec,
    )?;
    Ok(p_part.scale(15.0 / PI.powi(4) * bose_integral(4.0)?))
}

/// First-order nonlocal correction of the isotropic film, as a fraction of
/// F_C (before subtraction from 1).
pub fn nonlocal_isotropic_correction(
    slab: &IsotropicSlab,
    l_nm: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    check_separation(l_nm)?;
    slab.validate()?;
    spec.validate()?;
    let b = 2.0 * l_nm / (slab.eps_tilde() * slab.thickness_d);
    let integral = integrate_xp(
        |x, pt| {
            let p2 = pt.p * pt.p;
            let radicand = 1.0 + b * pt.p / (x * pt.q);
            bose_weight(x, 4.0) * (p2 + 1.0) / (p2 * p2) * radicand.sqrt()
        },
        spec,
    );
    let prefactor = 15.0 * SPEED_OF_LIGHT_NM_PER_S / (PI.powi(4) * slab.omega_p3d * l_nm);
    Ok(integral.scale(prefactor))
}

/// Attractive force of two identical free-standing isotropic
/// transdimensional films with confinement-induced nonlocal response.
pub fn nonlocal_isotropic_ratio(
    slab: &IsotropicSlab,
    l_nm: f64,
    spec: &QuadratureSpec,
) -> Result<ForceResult> {
    let c = nonlocal_isotropic_correction(slab, l_nm, spec)?;
    ForceResult::from_ratio(
        1.0 - c.value,
        c.error_estimate,
        Validity::classify(c.converged, 1.0, c.value),
        l_nm,
    )
}

#[derive(Debug, Clone, Copy)]
struct ThinCoefficient {
    value: f64,
    error: f64,
}

static THIN_COEFFICIENT: OnceLock<std::result::Result<ThinCoefficient, String>> = OnceLock::new();

fn thin_coefficient() -> Result<ThinCoefficient> {
    THIN_COEFFICIENT
        .get_or_init(|| {
            let spec = QuadratureSpec::new(1e-12, 1e-15).map_err(|e| e.to_string())?;
            let p_part = integrate_p_axis(
                |pt| (pt.p * pt.p + 1.0) / (pt.p.powf(3.5) * pt.q.sqrt()),
                0.25,
                &spec,
            )
            .map_err(|e| e.to_string())?;
            if !p_part.converged {
                return Err(format!(
                    "thin-film p-integral: error estimate {:e}",
                    p_part.error_estimate
                ));
            }
            let factor =
                15.0 * 2f64.sqrt() / PI.powi(4) * bose_integral(3.5).map_err(|e| e.to_string())?;
            Ok(ThinCoefficient {
                value: factor * p_part.value,
                error: factor * p_part.error_estimate,
            })
        })
        .clone()
        .map_err(Error::Quadrature)
}

/// Dimensionless coefficient C of the thin-film force
/// F_C (1 − C c/(ω_p √(ε̃ d l))), evaluated once and cached.
pub fn thin_limit_coefficient() -> Result<f64> {
    Ok(thin_coefficient()?.value)
}

/// Small-thickness asymptote of [`nonlocal_isotropic_ratio`].
pub fn thin_limit_ratio(slab: &IsotropicSlab, l_nm: f64) -> Result<ForceResult> {
    check_separation(l_nm)?;
    slab.validate()?;
    let coefficient = thin_coefficient()?;
    let scale = SPEED_OF_LIGHT_NM_PER_S
        / (slab.omega_p3d * (slab.eps_tilde() * slab.thickness_d * l_nm).sqrt());
    let correction = coefficient.value * scale;
    ForceResult::from_ratio(
        1.0 - correction,
        coefficient.error * scale,
        Validity::classify(true, 1.0, correction),
        l_nm,
    )
}

/// Nonlocal force and its thin-film asymptote side by side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThinLimitComparison {
    pub nonlocal: ForceResult,
    pub thin: ForceResult,
    /// |thin − nonlocal| / nonlocal, on the force ratios.
    pub relative_difference: f64,
}

pub fn compare_thin_limit(
    slab: &IsotropicSlab,
    l_nm: f64,
    spec: &QuadratureSpec,
) -> Result<ThinLimitComparison> {
    let nonlocal = nonlocal_isotropic_ratio(slab, l_nm, spec)?;
    let thin = thin_limit_ratio(slab, l_nm)?;
    Ok(ThinLimitComparison {
        nonlocal,
        thin,
        relative_difference: ((thin.ratio_to_casimir - nonlocal.ratio_to_casimir)
            / nonlocal.ratio_to_casimir)
            .abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::DEFAULT_OMEGA_P;

    #[test]
    fn casimir_values() {
        let p = casimir_pressure(1000.0).unwrap();
        assert!((p - 1.300_1e-3).abs() < 1e-7);
        assert!((casimir_pressure(2000.0).unwrap() * 16.0 / p - 1.0).abs() < 1e-14);
        assert!((casimir_pressure(100.0).unwrap() - 13.00).abs() < 0.01);
        assert!(casimir_pressure(0.0).is_err());
        assert!(casimir_pressure(-5.0).is_err());
    }

    #[test]
    fn local_force_and_threshold() {
        let r = lifshitz_force_local(DEFAULT_OMEGA_P, 1000.0).unwrap();
        let c_over_w = SPEED_OF_LIGHT_NM_PER_S / DEFAULT_OMEGA_P;
        assert!((r.ratio_to_casimir - (1.0 - 16.0 * c_over_w / 3000.0)).abs() < 1e-15);
        assert!((r.ratio_to_casimir - 0.92).abs() < 1e-4);
        assert_eq!(r.validity, Validity::Valid);
        // 16c/(3ω_p l) = 0.5 at l = 159.89 nm
        let threshold = 32.0 * c_over_w / 3.0;
        assert!((threshold - 159.89).abs() < 0.01);
        assert_eq!(
            lifshitz_force_local(DEFAULT_OMEGA_P, 159.0)
                .unwrap()
                .validity,
            Validity::CorrectionDominant
        );
        assert_eq!(
            lifshitz_force_local(DEFAULT_OMEGA_P, 161.0)
                .unwrap()
                .validity,
            Validity::Valid
        );
        assert!(
            lifshitz_force_local(DEFAULT_OMEGA_P, 1e12)
                .unwrap()
                .ratio_to_casimir
                > 1.0 - 1e-9
        );
    }

    #[test]
    fn pressure_is_ratio_times_casimir() {
        let r = lifshitz_force_local(DEFAULT_OMEGA_P, 700.0).unwrap();
        assert_eq!(
            r.pressure,
            r.ratio_to_casimir * casimir_pressure(700.0).unwrap()
        );
    }

    #[test]
    fn sixteen_thirds() {
        let c = local_limit_coefficient(&QuadratureSpec::default()).unwrap();
        assert!((c.value - 16.0 / 3.0).abs() < 1e-7);
    }

    #[test]
    fn vacuum_gives_no_force() {
        let r = lifshitz_pressure_general(|_| 1.0, |_| 1.0, 1000.0, &QuadratureSpec::default())
            .unwrap();
        assert_eq!(r.ratio_to_casimir, 0.0);
    }

    #[test]
    fn thin_coefficient_value() {
        let c = thin_limit_coefficient().unwrap();
        // 30-digit reference 4.78749193668439...
        assert!((c - 4.787_491_936_684_39).abs() < 1e-9);
    }

    #[test]
    fn thin_ratio_scaling() {
        let s = IsotropicSlab::new(DEFAULT_OMEGA_P, 9.0, 10.0).unwrap();
        let r1 = thin_limit_ratio(&s, 1000.0).unwrap();
        let r4 = thin_limit_ratio(&s, 4000.0).unwrap();
        let (c1, c4) = (1.0 - r1.ratio_to_casimir, 1.0 - r4.ratio_to_casimir);
        assert!((c4 / c1 - 0.5).abs() < 1e-12);
        assert!((r1.ratio_to_casimir - 0.661).abs() < 2e-3);
    }
}
