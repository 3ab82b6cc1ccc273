//! Γ and ζ at real arguments, and the Bose-type integral they close.

use std::f64::consts::PI;

use crate::error::{domain, Result};

#[allow(clippy::excessive_precision)]
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for real x that is not a non-positive integer (Lanczos, g = 7).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = LANCZOS[0];
        let t = x + LANCZOS_G + 0.5;
        for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

// B_{2k} / (2k)! for k = 1..8
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
];

/// Riemann ζ(s) for real s > 1, by Euler–Maclaurin summation.
pub fn zeta(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(domain("s", s, "s > 1"));
    }
    const N: usize = 12;
    let n = N as f64;
    let mut sum: f64 = (1..N).map(|k| (k as f64).powf(-s)).sum();
    sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
    // Σ B_{2k}/(2k)! · s(s+1)…(s+2k−2) · N^{−s−2k+1}
    let mut rising = s;
    let mut power = n.powf(-s - 1.0);
    for (k, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if k > 0 {
            let j = 2.0 * k as f64;
            rising *= (s + j - 1.0) * (s + j);
            power /= n * n;
        }
        sum += b * rising * power;
    }
    Ok(sum)
}

/// ∫₀^∞ x^s eˣ/(eˣ − 1)² dx = Γ(s + 1) ζ(s), evaluated in closed form.
pub fn bose_integral(s: f64) -> Result<f64> {
    if !(s > 1.0) {
        return Err(domain("s", s, "s > 1 (the integral diverges otherwise)"));
    }
    Ok(gamma(s + 1.0) * zeta(s)?)
}

/// The Bose-weighted integrand x^s eˣ/(eˣ − 1)², written to stay finite
/// for large x and accurate for small x.
pub fn bose_weight(x: f64, s: f64) -> f64 {
    let em = (-x).exp();
    let denom = -(-x).exp_m1();
    x.powf(s) * em / (denom * denom)
}
