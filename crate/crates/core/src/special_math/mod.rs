//! Special functions and quadrature primitives shared by every force integral.

mod bessel;
mod quadrature;
mod zeta;

pub use bessel::{bessel_i0k0_product, i0_scaled, k0_scaled};
pub use quadrature::{
    integrate_interval, integrate_p_axis, integrate_x_axis, integrate_xp, IntegralResult,
    PAxisPoint, PTransform, QuadratureSpec, DEFAULT_ABS_TOL, DEFAULT_MAX_SUBDIVISIONS,
    DEFAULT_REL_TOL,
};
pub use zeta::{bose_integral, bose_weight, gamma, zeta};
