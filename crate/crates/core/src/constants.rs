//! Physical constants in the unit system used throughout the crate:
//! lengths in nm, angular frequencies in s⁻¹, pressures in Pa.

/// Speed of light in nm/s.
pub const SPEED_OF_LIGHT_NM_PER_S: f64 = 2.997_924_58e17;

/// Reduced Planck constant times the speed of light, J·m.
pub const HBAR_C_J_M: f64 = 1.054_571_817e-34 * 2.997_924_58e8;

pub const NM_TO_M: f64 = 1e-9;

/// Typical free-electron-gas bulk plasma frequency, s⁻¹.
pub const DEFAULT_OMEGA_P: f64 = 2e16;

/// Default in-plane background permittivity of an isotropic film.
pub const DEFAULT_EPS_B_ISOTROPIC: f64 = 9.0;

/// Default background permittivity of a nanotube-array slab.
pub const DEFAULT_EPS_B_ANISOTROPIC: f64 = 10.0;

/// Plasma penetration length c/ω_p in nm.
pub fn plasma_length_nm(omega_p: f64) -> f64 {
    SPEED_OF_LIGHT_NM_PER_S / omega_p
}
