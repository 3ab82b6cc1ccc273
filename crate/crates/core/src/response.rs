//! Electromagnetic response on the imaginary frequency axis.
//!
//! Local Drude permittivity, the confinement-induced nonlocal plasma
//! frequencies of an isotropic film and of an aligned nanotube array, and
//! the mapping from the Lifshitz integration variables (x, p) to frequency
//! and in-plane momentum.

use serde::{Deserialize, Serialize};

use crate::constants::SPEED_OF_LIGHT_NM_PER_S;
use crate::error::{domain, Error, Result};
use crate::special_math::bessel_i0k0_product;

/// Background and environment permittivities shared by both slab kinds.
pub trait Slab {
    fn eps_b(&self) -> f64;
    fn eps_sub(&self) -> f64;
    fn eps_sup(&self) -> f64;
    fn thickness_nm(&self) -> f64;
    fn omega_p3d(&self) -> f64;

    /// ε̃ = ε_b / (ε_sub + ε_sup).
    fn eps_tilde(&self) -> f64 {
        self.eps_b() / (self.eps_sub() + self.eps_sup())
    }
}

/// ε̃ of any slab.
pub fn eps_tilde(slab: &impl Slab) -> f64 {
    slab.eps_tilde()
}

/// Uniform in-plane isotropic transdimensional film.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsotropicSlab {
    /// Bulk plasma angular frequency, s⁻¹.
    pub omega_p3d: f64,
    pub eps_b: f64,
    /// nm
    pub thickness_d: f64,
    pub eps_sub: f64,
    pub eps_sup: f64,
    /// s⁻¹
    pub damping_delta: f64,
}

impl IsotropicSlab {
    /// Free-standing film without damping.
    pub fn new(omega_p3d: f64, eps_b: f64, thickness_d: f64) -> Result<Self> {
        let slab = Self {
            omega_p3d,
            eps_b,
            thickness_d,
            eps_sub: 1.0,
            eps_sup: 1.0,
            damping_delta: 0.0,
        };
        slab.validate()?;
        Ok(slab)
    }

    pub fn with_environment(mut self, eps_sub: f64, eps_sup: f64) -> Result<Self> {
        self.eps_sub = eps_sub;
        self.eps_sup = eps_sup;
        self.validate()?;
        Ok(self)
    }

    pub fn with_damping(mut self, damping_delta: f64) -> Result<Self> {
        self.damping_delta = damping_delta;
        self.validate()?;
        Ok(self)
    }

    pub fn with_thickness(mut self, thickness_d: f64) -> Result<Self> {
        self.thickness_d = thickness_d;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        positive("omega_p3d", self.omega_p3d)?;
        positive("thickness_d", self.thickness_d)?;
        if !(self.eps_b >= 1.0 && self.eps_b.is_finite()) {
            return Err(domain("eps_b", self.eps_b, "eps_b >= 1"));
        }
        if !(self.damping_delta >= 0.0) {
            return Err(domain("damping_delta", self.damping_delta, "damping >= 0"));
        }
        check_environment(self.eps_b, self.eps_sub, self.eps_sup)
    }
}

impl Slab for IsotropicSlab {
    fn eps_b(&self) -> f64 {
        self.eps_b
    }
    fn eps_sub(&self) -> f64 {
        self.eps_sub
    }
    fn eps_sup(&self) -> f64 {
        self.eps_sup
    }
    fn thickness_nm(&self) -> f64 {
        self.thickness_d
    }
    fn omega_p3d(&self) -> f64 {
        self.omega_p3d
    }
}

/// Slab made of parallel-aligned single-wall nanotubes of radius R with
/// period Δ, embedded in a dielectric layer of thickness d.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NanotubeArraySlab {
    /// nm
    pub radius_r: f64,
    /// nm
    pub period_delta: f64,
    pub eps_b: f64,
    /// nm
    pub thickness_d: f64,
    /// s⁻¹
    pub omega_p3d: f64,
    pub eps_sub: f64,
    pub eps_sup: f64,
}

impl NanotubeArraySlab {
    /// Free-standing array with explicit geometry.
    pub fn new(
        radius_r: f64,
        period_delta: f64,
        eps_b: f64,
        thickness_d: f64,
        omega_p3d: f64,
    ) -> Result<Self> {
        let slab = Self {
            radius_r,
            period_delta,
            eps_b,
            thickness_d,
            omega_p3d,
            eps_sub: 1.0,
            eps_sup: 1.0,
        };
        slab.validate()?;
        Ok(slab)
    }

    /// Densely packed (Δ = 2R) free-standing slab of `layers` monolayers,
    /// d = layers · 2R.
    pub fn dense(radius_r: f64, layers: u32, eps_b: f64, omega_p3d: f64) -> Result<Self> {
        if layers == 0 {
            return Err(Error::InvalidParameter("layers must be at least 1".into()));
        }
        Self::new(
            radius_r,
            2.0 * radius_r,
            eps_b,
            2.0 * radius_r * layers as f64,
            omega_p3d,
        )
    }

    pub fn with_environment(mut self, eps_sub: f64, eps_sup: f64) -> Result<Self> {
        self.eps_sub = eps_sub;
        self.eps_sup = eps_sup;
        self.validate()?;
        Ok(self)
    }

    pub fn with_thickness(mut self, thickness_d: f64) -> Result<Self> {
        self.thickness_d = thickness_d;
        self.validate()?;
        Ok(self)
    }

    /// Number of monolayers implied by d = n · 2R (not necessarily integral).
    pub fn layers(&self) -> f64 {
        self.thickness_d / (2.0 * self.radius_r)
    }

    pub fn validate(&self) -> Result<()> {
        positive("radius_r", self.radius_r)?;
        positive("omega_p3d", self.omega_p3d)?;
        if !(self.period_delta >= 2.0 * self.radius_r) {
            return Err(domain(
                "period_delta",
                self.period_delta,
                "period_delta >= 2 radius_r (tubes cannot overlap)",
            ));
        }
        if !(self.thickness_d >= 2.0 * self.radius_r) {
            return Err(domain(
                "thickness_d",
                self.thickness_d,
                "thickness_d >= 2 radius_r (at least one monolayer)",
            ));
        }
        if !(self.eps_b > 1.0 && self.eps_b.is_finite()) {
            return Err(domain("eps_b", self.eps_b, "eps_b > 1"));
        }
        check_environment(self.eps_b, self.eps_sub, self.eps_sup)
    }
}

impl Slab for NanotubeArraySlab {
    fn eps_b(&self) -> f64 {
        self.eps_b
    }
    fn eps_sub(&self) -> f64 {
        self.eps_sub
    }
    fn eps_sup(&self) -> f64 {
        self.eps_sup
    }
    fn thickness_nm(&self) -> f64 {
        self.thickness_d
    }
    fn omega_p3d(&self) -> f64 {
        self.omega_p3d
    }
}

fn positive(what: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(domain(what, value, "must be positive and finite"))
    }
}

fn check_environment(eps_b: f64, eps_sub: f64, eps_sup: f64) -> Result<()> {
    positive("eps_sub", eps_sub)?;
    positive("eps_sup", eps_sup)?;
    if eps_sub + eps_sup >= eps_b {
        return Err(Error::InvalidParameter(format!(
            "eps_sub + eps_sup = {} must be below eps_b = {eps_b}",
            eps_sub + eps_sup
        )));
    }
    Ok(())
}

/// Imaginary frequency ξ and in-plane momentum k probed at one (x, p).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImaginaryFrequencyPoint {
    /// s⁻¹
    pub xi: f64,
    /// nm⁻¹
    pub momentum_k: f64,
}

impl ImaginaryFrequencyPoint {
    pub fn from_xp(x: f64, p: f64, l_nm: f64) -> Self {
        Self {
            xi: xi_from_xp(x, p, l_nm),
            momentum_k: momentum_from_xp(x, p, l_nm),
        }
    }
}

/// ξ = x c / (2 p l), s⁻¹.
pub fn xi_from_xp(x: f64, p: f64, l_nm: f64) -> f64 {
    x * SPEED_OF_LIGHT_NM_PER_S / (2.0 * p * l_nm)
}

/// k = x √(p² − 1) / (2 p l), nm⁻¹.
pub fn momentum_from_xp(x: f64, p: f64, l_nm: f64) -> f64 {
    let q = ((p - 1.0) * (p + 1.0)).max(0.0).sqrt();
    momentum_from_xq(x, p, q, l_nm)
}

/// Same as [`momentum_from_xp`] with q = √(p² − 1) supplied by the caller.
pub fn momentum_from_xq(x: f64, p: f64, q: f64, l_nm: f64) -> f64 {
    x * q / (2.0 * p * l_nm)
}

/// Nonlocal isotropic plasma frequency ω_p^{3D} / √(1 + 1/(ε̃ k d)).
/// Zero at k = 0 by continuity.
pub fn plasma_freq_isotropic(k: f64, slab: &IsotropicSlab) -> f64 {
    if k <= 0.0 {
        return 0.0;
    }
    let ked = slab.eps_tilde() * k * slab.thickness_d;
    // ω√(ked/(1+ked)) avoids the 1/ked overflow near k = 0
    slab.omega_p3d * (ked / (1.0 + ked)).sqrt()
}

/// Nanotube-array plasma frequency along the alignment axis,
/// ω_p^{3D} √(2qR I₀(qR)K₀(qR) / (1 + 1/(q ε̃ d))). Zero at q = 0.
pub fn plasma_freq_nanotube(q: f64, slab: &NanotubeArraySlab) -> f64 {
    if q <= 0.0 {
        return 0.0;
    }
    let qr = q * slab.radius_r;
    let ked = slab.eps_tilde() * q * slab.thickness_d;
    let product = bessel_i0k0_product(qr).expect("qR > 0");
    slab.omega_p3d * (2.0 * qr * product * ked / (1.0 + ked)).sqrt()
}

/// Drude permittivity on the imaginary axis, ε(iξ) = ε_b + ω_p² / (ξ(ξ + δ)).
pub fn drude_eps_imaginary_axis(xi: f64, omega_p: f64, eps_b: f64, delta: f64) -> Result<f64> {
    if !(xi > 0.0) {
        return Err(domain("xi", xi, "xi > 0 (static pole at xi = 0)"));
    }
    Ok(eps_b + omega_p * omega_p / (xi * (xi + delta)))
}

/// Imaginary-axis Fresnel coefficients of a half-space with permittivity
/// `eps` at normalized wave vector p, r_s = (s − p)/(s + p) and
/// r_p = (s − εp)/(s + εp) with s = √(ε − 1 + p²).
///
/// Both numerators are rewritten through s² − p² and s² − ε²p² so that
/// ε → 1 and ε → ∞ stay accurate.
pub fn fresnel_coefficients(eps: f64, p: f64) -> (f64, f64) {
    let em1 = eps - 1.0;
    let s = (em1 + p * p).sqrt();
    let r_s = em1 / ((s + p) * (s + p));
    let ep = eps * p;
    let r_p = if eps.is_finite() {
        em1 * (1.0 - p * p * (eps + 1.0)) / ((s + ep) * (s + ep))
    } else {
        -1.0
    };
    (r_s, r_p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::DEFAULT_OMEGA_P;

    fn film(d: f64) -> IsotropicSlab {
        IsotropicSlab::new(DEFAULT_OMEGA_P, 9.0, d).unwrap()
    }

    #[test]
    fn eps_tilde_values() {
        assert_eq!(film(10.0).eps_tilde(), 4.5);
        let s = IsotropicSlab::new(DEFAULT_OMEGA_P, 10.0, 10.0).unwrap();
        assert_eq!(eps_tilde(&s), 5.0);
        let a = NanotubeArraySlab::dense(2.0, 5, 10.0, DEFAULT_OMEGA_P).unwrap();
        assert_eq!(a.eps_tilde(), 5.0);
        assert_eq!(a.thickness_d, 20.0);
        assert_eq!(a.period_delta, 4.0);
        assert_eq!(a.layers(), 5.0);
    }

    #[test]
    fn eps_tilde_of_unity_needs_boundary() {
        // ε_b = ε_sub + ε_sup gives ε̃ = 1 but violates the strict regime bound
        assert!(film(10.0).with_environment(4.5, 4.5).is_err());
        let s = film(10.0).with_environment(4.4, 4.5).unwrap();
        assert!((s.eps_tilde() - 9.0 / 8.9).abs() < 1e-15);
        let mut raw = film(10.0);
        raw.eps_sub = 4.5;
        raw.eps_sup = 4.5;
        assert_eq!(raw.eps_tilde(), 1.0);
    }

    #[test]
    fn slab_invariants() {
        assert!(IsotropicSlab::new(0.0, 9.0, 10.0).is_err());
        assert!(IsotropicSlab::new(DEFAULT_OMEGA_P, 0.5, 10.0).is_err());
        assert!(IsotropicSlab::new(DEFAULT_OMEGA_P, 9.0, -1.0).is_err());
        assert!(film(10.0).with_damping(-1.0).is_err());
        assert!(NanotubeArraySlab::new(2.0, 3.9, 10.0, 20.0, DEFAULT_OMEGA_P).is_err());
        assert!(NanotubeArraySlab::new(2.0, 4.0, 10.0, 3.9, DEFAULT_OMEGA_P).is_err());
        assert!(NanotubeArraySlab::new(2.0, 4.0, 1.0, 4.0, DEFAULT_OMEGA_P).is_err());
        assert!(NanotubeArraySlab::dense(2.0, 0, 10.0, DEFAULT_OMEGA_P).is_err());
    }

    #[test]
    fn momentum_mapping() {
        assert_eq!(momentum_from_xp(3.0, 1.0, 500.0), 0.0);
        let k = momentum_from_xp(2.0, 2f64.sqrt(), 1000.0);
        assert!((k - 1.0 / (2f64.sqrt() * 1000.0)).abs() < 1e-18);
        // 1/(ε̃kd) reproduces (2l/(ε̃d)) · p/(x√(p²−1))
        let (x, p, l, d, et) = (1.7, 1.3, 800.0, 12.0, 4.5);
        let lhs = 1.0 / (et * momentum_from_xp(x, p, l) * d);
        let rhs = 2.0 * l / (et * d) * p / (x * (p * p - 1.0).sqrt());
        assert!((lhs - rhs).abs() < 1e-12 * rhs);
        let pt = ImaginaryFrequencyPoint::from_xp(1.0, 1.0, 1000.0);
        assert!((pt.xi - SPEED_OF_LIGHT_NM_PER_S / 2000.0).abs() < 1.0);
    }

    #[test]
    fn isotropic_plasma_frequency() {
        let s = film(10.0);
        let k = 1.0 / (s.eps_tilde() * s.thickness_d);
        let w = plasma_freq_isotropic(k, &s);
        assert!((w - DEFAULT_OMEGA_P / 2f64.sqrt()).abs() < 1e-12 * DEFAULT_OMEGA_P);
        assert_eq!(plasma_freq_isotropic(0.0, &s), 0.0);
        // bulk limit
        let thick = film(1e12);
        assert!((plasma_freq_isotropic(1e-3, &thick) / DEFAULT_OMEGA_P - 1.0).abs() < 1e-6);
        // √k dispersion at small k
        let k = 1e-9;
        let expected = DEFAULT_OMEGA_P * (s.eps_tilde() * k * s.thickness_d).sqrt();
        assert!((plasma_freq_isotropic(k, &s) / expected - 1.0).abs() < 1e-6);
    }

    #[test]
    fn isotropic_plasma_frequency_monotone_and_bounded() {
        let ds = [1.0, 3.0, 10.0, 30.0, 100.0, 1000.0];
        for j in 0..200 {
            let k = 10f64.powf(-6.0 + 6.0 * j as f64 / 199.0);
            let mut prev = 0.0;
            for &d in &ds {
                let w = plasma_freq_isotropic(k, &film(d));
                assert!(w > prev && w < DEFAULT_OMEGA_P);
                prev = w;
            }
        }
        let s = film(10.0);
        let mut prev = 0.0;
        for j in 0..200 {
            let w = plasma_freq_isotropic(10f64.powf(-6.0 + 6.0 * j as f64 / 199.0), &s);
            assert!(w > prev);
            prev = w;
        }
    }

    #[test]
    fn nanotube_plasma_frequency_large_radius_limit() {
        // qR = 10⁴: within 10⁻³ of the isotropic film with the same d and ε̃
        let q = 1e-2;
        let r = 1e4 / q;
        let d = 4.0 * r;
        let array = NanotubeArraySlab::new(r, 2.0 * r, 9.0, d, DEFAULT_OMEGA_P).unwrap();
        let iso = IsotropicSlab::new(DEFAULT_OMEGA_P, 9.0, d).unwrap();
        let a = plasma_freq_nanotube(q, &array);
        let b = plasma_freq_isotropic(q, &iso);
        assert!((a / b - 1.0).abs() < 1e-3);
    }

    #[test]
    fn nanotube_plasma_frequency_monotone() {
        let array = NanotubeArraySlab::dense(2.0, 5, 10.0, DEFAULT_OMEGA_P).unwrap();
        assert_eq!(plasma_freq_nanotube(0.0, &array), 0.0);
        // increasing up to qR = 1; the Lifshitz integrands only reach qR ≪ 1
        let mut prev = 0.0;
        for j in 0..400 {
            let q = 10f64.powf(-7.0 + (7.0 + 0.5f64.log10()) * j as f64 / 399.0);
            let w = plasma_freq_nanotube(q, &array);
            assert!(w > prev, "q = {q}");
            prev = w;
        }
        // 2zI₀(z)K₀(z) = 1 + 1/(8z²) + … overshoots its limit, so at large qR
        // the frequency briefly exceeds ω_p^{3D} and then creeps back down
        let w_mid = plasma_freq_nanotube(2.0, &array);
        let w_far = plasma_freq_nanotube(6.0, &array);
        assert!(w_far < w_mid && w_mid > DEFAULT_OMEGA_P);
    }

    #[test]
    fn drude_values() {
        let w = 3e15;
        assert!((drude_eps_imaginary_axis(w, w, 9.0, 0.0).unwrap() - 10.0).abs() < 1e-12);
        assert!((drude_eps_imaginary_axis(1e30, w, 9.0, 0.0).unwrap() - 9.0).abs() < 1e-12);
        let e = drude_eps_imaginary_axis(1e15, 2e16, 9.0, 0.0).unwrap();
        assert!((e - 409.0).abs() < 1e-10);
        assert!(drude_eps_imaginary_axis(0.0, w, 9.0, 0.0).is_err());
        assert!(drude_eps_imaginary_axis(-1.0, w, 9.0, 0.0).is_err());
    }

    #[test]
    fn drude_decreasing_in_xi() {
        let mut prev = f64::INFINITY;
        for j in 0..300 {
            let xi = 10f64.powf(12.0 + 8.0 * j as f64 / 299.0);
            let e = drude_eps_imaginary_axis(xi, 2e16, 9.0, 1e14).unwrap();
            assert!(e < prev && e >= 9.0);
            prev = e;
        }
    }

    #[test]
    fn fresnel_limits() {
        assert_eq!(fresnel_coefficients(1.0, 1.7), (0.0, 0.0));
        let (rs, rp) = fresnel_coefficients(409.0, 1.0);
        let s = 409f64.sqrt();
        assert!((rs - (s - 1.0) / (s + 1.0)).abs() < 1e-15);
        assert!((rs - 0.905_77).abs() < 1e-5);
        assert!((rp - (s - 409.0) / (s + 409.0)).abs() < 1e-14);
        let (rs, rp) = fresnel_coefficients(1e12, 1.0);
        assert!(rs < 1.0 && 1.0 - rs < 3e-6);
        assert!((rp + 1.0).abs() < 3e-6);
    }
}
