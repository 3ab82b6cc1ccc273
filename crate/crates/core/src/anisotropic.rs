//! Attractive forces between aligned nanotube-array slabs in the co-aligned
//! (parallel) and cross-aligned (perpendicular) orientations.
//!
//! Each force is a main term, which depends on ε_b alone and is the
//! ω_p → ∞ limit, minus a first-order nonlocal correction carrying the
//! array geometry through the Bessel-weighted radical.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::SPEED_OF_LIGHT_NM_PER_S;
use crate::error::{domain, Error, Result};
use crate::lifshitz::{ForceResult, Validity};
use crate::response::{NanotubeArraySlab, Slab};
use crate::special_math::{
    bessel_i0k0_product, bose_weight, integrate_xp, IntegralResult, PAxisPoint, QuadratureSpec,
};

/// Bisection stops once |F∥ − F⊥|/F_C falls below this.
pub const CROSSOVER_TOLERANCE: f64 = 1e-4;
const CROSSOVER_MAX_ITERATIONS: u32 = 200;

fn check_args(p: f64, eps_b: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(domain("p", p, "p >= 1"));
    }
    if !(eps_b > 1.0) {
        return Err(domain("eps_b", eps_b, "eps_b > 1"));
    }
    Ok(())
}

fn background_root(p: f64, eps_b: f64) -> f64 {
    (eps_b - 1.0 + p * p).sqrt()
}

/// φ = (s + p)/(s − p) with s = √(ε_b − 1 + p²); φ > 1.
pub fn phi(p: f64, eps_b: f64) -> Result<f64> {
    check_args(p, eps_b)?;
    Ok(1.0 / inv_phi(p, eps_b))
}

/// ψ = (s + ε_b p)/(s − ε_b p); ψ < −1.
pub fn psi(p: f64, eps_b: f64) -> Result<f64> {
    check_args(p, eps_b)?;
    Ok(-1.0 / inv_abs_psi(p, eps_b))
}

// 1/φ = (ε_b − 1)/(s + p)², free of the s − p cancellation
fn inv_phi(p: f64, eps_b: f64) -> f64 {
    let s = background_root(p, eps_b);
    (eps_b - 1.0) / ((s + p) * (s + p))
}

// 1/|ψ| = (ε_b − 1)(p²(ε_b + 1) − 1)/(s + ε_b p)²
fn inv_abs_psi(p: f64, eps_b: f64) -> f64 {
    let s = background_root(p, eps_b);
    let ep = eps_b * p;
    (eps_b - 1.0) * (p * p * (eps_b + 1.0) - 1.0) / ((s + ep) * (s + ep))
}

// t/(1 − t) = 1/(eˣ/t₀ − 1) with t = t₀e^{−x}
fn bose_ratio(t: f64) -> f64 {
    t / (1.0 - t)
}

// t/(1 − t)², the eˣ-weighted derivative form
fn bose_derivative(t: f64) -> f64 {
    let w = 1.0 - t;
    t / (w * w)
}

// ε_b = 1 is admitted as the closed limit (½ and 0) of the main terms
fn check_eps_b(eps_b: f64) -> Result<()> {
    if eps_b >= 1.0 && eps_b.is_finite() {
        Ok(())
    } else {
        Err(domain("eps_b", eps_b, "eps_b >= 1"))
    }
}

/// ω_p → ∞ limit of F∥/F_C: ½ + (15/2π⁴) ∬ x³/p² · 1/(φ²eˣ − 1).
pub fn main_term_parallel(eps_b: f64, spec: &QuadratureSpec) -> Result<IntegralResult> {
    check_eps_b(eps_b)?;
    spec.validate()?;
    let integral = integrate_xp(
        |x, pt| {
            let a = inv_phi(pt.p, eps_b);
            x * x * x / (pt.p * pt.p) * bose_ratio((-x).exp() * a * a)
        },
        spec,
    );
    let mut r = integral.scale(15.0 / (2.0 * PI.powi(4)));
    r.value += 0.5;
    Ok(r)
}

/// ω_p → ∞ limit of F⊥/F_C:
/// (15/2π⁴) ∬ x³/p² · [1/(φeˣ − 1) − 1/(ψeˣ + 1)].
pub fn main_term_perp(eps_b: f64, spec: &QuadratureSpec) -> Result<IntegralResult> {
    check_eps_b(eps_b)?;
    spec.validate()?;
    let integral = integrate_xp(
        |x, pt| {
            let e = (-x).exp();
            let s = bose_ratio(e * inv_phi(pt.p, eps_b));
            let p = bose_ratio(e * inv_abs_psi(pt.p, eps_b));
            x * x * x / (pt.p * pt.p) * (s + p)
        },
        spec,
    );
    Ok(integral.scale(15.0 / (2.0 * PI.powi(4))))
}

/// The array-structure radical
/// √(Δ/(4πR) · α(1 + Rα/(ε̃d)) / (I₀(1/α)K₀(1/α))), α = (2l/R) p/(x√(p²−1)).
fn array_radical(array: &NanotubeArraySlab, l_nm: f64, x: f64, pt: PAxisPoint) -> f64 {
    let r = array.radius_r;
    let inv_alpha = r * x * pt.q / (2.0 * l_nm * pt.p);
    if !(inv_alpha > 0.0) {
        // p = 1 or x = 0 exactly: a measure-zero point of an integrable singularity
        return 0.0;
    }
    let alpha = 1.0 / inv_alpha;
    let product = bessel_i0k0_product(inv_alpha).expect("1/alpha > 0");
    let geometry = array.period_delta / (4.0 * PI * r);
    let dressing = 1.0 + r * alpha / (array.eps_tilde() * array.thickness_d);
    (geometry * alpha * dressing / product).sqrt()
}

fn correction_prefactor(array: &NanotubeArraySlab, l_nm: f64) -> f64 {
    15.0 * SPEED_OF_LIGHT_NM_PER_S / (PI.powi(4) * array.omega_p3d * l_nm)
}

fn check_array(array: &NanotubeArraySlab, l_nm: f64, spec: &QuadratureSpec) -> Result<()> {
    if !(l_nm > 0.0 && l_nm.is_finite()) {
        return Err(domain("l", l_nm, "l > 0"));
    }
    array.validate()?;
    spec.validate()
}

/// Nonlocal correction subtracted from [`main_term_parallel`].
pub fn parallel_correction(
    array: &NanotubeArraySlab,
    l_nm: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    check_array(array, l_nm, spec)?;
    let integral = integrate_xp(
        |x, pt| {
            let p2 = pt.p * pt.p;
            bose_weight(x, 4.0) / (p2 * p2) * array_radical(array, l_nm, x, pt)
        },
        spec,
    );
    Ok(integral.scale(correction_prefactor(array, l_nm)))
}

/// Nonlocal correction subtracted from [`main_term_perp`].
pub fn perp_correction(
    array: &NanotubeArraySlab,
    l_nm: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    check_array(array, l_nm, spec)?;
    let eps_b = array.eps_b;
    let integral = integrate_xp(
        |x, pt| {
            let e = (-x).exp();
            let p = pt.p;
            // eˣ[φp/(φeˣ − 1)² − (ψ/p)/(ψeˣ + 1)²] rewritten with t = e^{−x}/φ, e^{−x}/|ψ|
            let bracket = p * bose_derivative(e * inv_phi(p, eps_b))
                + bose_derivative(e * inv_abs_psi(p, eps_b)) / p;
            x.powi(4) / (p * p * p) * bracket * array_radical(array, l_nm, x, pt)
        },
        spec,
    );
    Ok(integral.scale(0.5 * correction_prefactor(array, l_nm)))
}

fn assemble(main: IntegralResult, correction: IntegralResult, l_nm: f64) -> Result<ForceResult> {
    ForceResult::from_ratio(
        main.value - correction.value,
        main.error_estimate + correction.error_estimate,
        Validity::classify(
            main.converged && correction.converged,
            main.value,
            correction.value,
        ),
        l_nm,
    )
}

/// F∥/F_C for two identical co-aligned nanotube-array slabs.
pub fn f_parallel_ratio(
    array: &NanotubeArraySlab,
    l_nm: f64,
    spec: &QuadratureSpec,
) -> Result<ForceResult> {
    let correction = parallel_correction(array, l_nm, spec)?;
    let main = main_term_parallel(array.eps_b, spec)?;
    assemble(main, correction, l_nm)
}

/// F⊥/F_C for two identical cross-aligned nanotube-array slabs.
pub fn f_perp_ratio(
    array: &NanotubeArraySlab,
    l_nm: f64,
    spec: &QuadratureSpec,
) -> Result<ForceResult> {
    let correction = perp_correction(array, l_nm, spec)?;
    let main = main_term_perp(array.eps_b, spec)?;
    assemble(main, correction, l_nm)
}

/// Main terms of both orientations at one ε_b.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MainTerms {
    pub eps_b: f64,
    pub parallel: IntegralResult,
    pub perp: IntegralResult,
}

impl MainTerms {
    pub fn anisotropy(&self) -> f64 {
        self.parallel.value - self.perp.value
    }
}

pub fn main_terms(eps_b: f64, spec: &QuadratureSpec) -> Result<MainTerms> {
    let (parallel, perp) = rayon::join(
        || main_term_parallel(eps_b, spec),
        || main_term_perp(eps_b, spec),
    );
    Ok(MainTerms {
        eps_b,
        parallel: parallel?,
        perp: perp?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrientationForces {
    pub f_parallel: ForceResult,
    pub f_perp: ForceResult,
    /// f_parallel.ratio_to_casimir − f_perp.ratio_to_casimir
    pub anisotropy: f64,
}

impl OrientationForces {
    pub fn new(f_parallel: ForceResult, f_perp: ForceResult) -> Self {
        Self {
            f_parallel,
            f_perp,
            anisotropy: f_parallel.ratio_to_casimir - f_perp.ratio_to_casimir,
        }
    }

    pub fn converged(&self) -> bool {
        self.f_parallel.validity != Validity::QuadratureFailed
            && self.f_perp.validity != Validity::QuadratureFailed
    }
}

pub fn orientation_forces(
    array: &NanotubeArraySlab,
    l_nm: f64,
    spec: &QuadratureSpec,
) -> Result<OrientationForces> {
    let (parallel, perp) = rayon::join(
        || f_parallel_ratio(array, l_nm, spec),
        || f_perp_ratio(array, l_nm, spec),
    );
    Ok(OrientationForces::new(parallel?, perp?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossoverResult {
    /// Thickness at which F∥ = F⊥, nm; `None` when the range does not bracket
    /// a sign change.
    pub crossover_d: Option<f64>,
    /// Final bracketing interval (the input range when nothing was found), nm.
    pub bracket: (f64, f64),
    pub sign_low: i8,
    pub sign_high: i8,
    pub iterations: u32,
    /// F∥ − F⊥ at `crossover_d`.
    pub anisotropy_at_crossover: Option<f64>,
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

fn anisotropy_at(
    template: &NanotubeArraySlab,
    d: f64,
    l_nm: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let array = template.with_thickness(d)?;
    let forces = orientation_forces(&array, l_nm, spec)?;
    if !forces.converged() {
        return Err(Error::Quadrature(format!(
            "force evaluation at d = {d} nm, l = {l_nm} nm"
        )));
    }
    Ok(forces.anisotropy)
}

/// Finds the slab thickness at which the preferred orientation flips, by
/// bisection on d ∈ `d_range` with the other parameters taken from
/// `template`.
pub fn crossover_thickness(
    template: &NanotubeArraySlab,
    l_nm: f64,
    d_range: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<CrossoverResult> {
    let (mut lo, mut hi) = d_range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParameter(format!(
            "thickness range [{lo}, {hi}] must be finite and increasing"
        )));
    }
    if lo < 2.0 * template.radius_r {
        return Err(Error::InvalidParameter(format!(
            "thickness range starts at {lo} nm, below one monolayer (2R = {} nm)",
            2.0 * template.radius_r
        )));
    }
    let mut f_lo = anisotropy_at(template, lo, l_nm, spec)?;
    let mut f_hi = anisotropy_at(template, hi, l_nm, spec)?;
    let mut result = CrossoverResult {
        crossover_d: None,
        bracket: (lo, hi),
        sign_low: sign(f_lo),
        sign_high: sign(f_hi),
        iterations: 0,
        anisotropy_at_crossover: None,
    };
    for (d, f) in [(lo, f_lo), (hi, f_hi)] {
        if f.abs() < CROSSOVER_TOLERANCE && sign(f_lo) * sign(f_hi) <= 0 {
            result.crossover_d = Some(d);
            result.anisotropy_at_crossover = Some(f);
            return Ok(result);
        }
    }
    if sign(f_lo) * sign(f_hi) >= 0 {
        return Ok(result);
    }
    let mut iterations = 0;
    while iterations < CROSSOVER_MAX_ITERATIONS {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let f_mid = anisotropy_at(template, mid, l_nm, spec)?;
        if f_mid.abs() < CROSSOVER_TOLERANCE || mid == lo || mid == hi {
            result.crossover_d = Some(mid);
            result.anisotropy_at_crossover = Some(f_mid);
            break;
        }
        if sign(f_mid) == sign(f_lo) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    result.bracket = (lo, hi);
    result.sign_low = sign(f_lo);
    result.sign_high = sign(f_hi);
    result.iterations = iterations;
    Ok(result)
}

/// F∥, F⊥ and their difference over a list of thicknesses, in input order.
pub fn anisotropy_curve(
    template: &NanotubeArraySlab,
    l_nm: f64,
    thicknesses: &[f64],
    spec: &QuadratureSpec,
) -> Result<Vec<(f64, OrientationForces)>> {
    use rayon::prelude::*;
    thicknesses
        .par_iter()
        .map(|&d| {
            let array = template.with_thickness(d)?;
            Ok((d, orientation_forces(&array, l_nm, spec)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_psi_values() {
        assert!((phi(1.0, 9.0).unwrap() - 2.0).abs() < 1e-14);
        assert!((psi(1.0, 9.0).unwrap() + 2.0).abs() < 1e-14);
        assert!((phi(100.0, 9.0).unwrap() / (4e4 / 8.0) - 1.0).abs() < 1e-2);
        assert!((phi(3.0, 1e12).unwrap() - 1.0).abs() < 1e-5);
        assert!((psi(3.0, 1e12).unwrap() + 1.0).abs() < 1e-5);
        assert!(phi(2.0, 1.0).is_err());
        assert!(psi(0.5, 9.0).is_err());
    }

    #[test]
    fn phi_psi_against_defining_ratios() {
        for &eps in &[1.5f64, 4.0, 10.0, 300.0] {
            for &p in &[1.0, 1.3, 2.0, 7.0, 40.0] {
                let s = (eps - 1.0 + p * p).sqrt();
                let f = (s + p) / (s - p);
                let g = (s + eps * p) / (s - eps * p);
                assert!((phi(p, eps).unwrap() / f - 1.0).abs() < 1e-10);
                assert!((psi(p, eps).unwrap() / g - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn phi_psi_signs_on_grid() {
        for i in 0..40 {
            let eps = 1.0 + 10f64.powf(-3.0 + 9.0 * i as f64 / 39.0);
            for j in 0..40 {
                let p = 10f64.powf(4.0 * j as f64 / 39.0);
                let (f, g) = (phi(p, eps).unwrap(), psi(p, eps).unwrap());
                assert!(f >= 1.0 && g <= -1.0 && f * g < 0.0, "p {p} eps {eps}");
            }
        }
    }
}
