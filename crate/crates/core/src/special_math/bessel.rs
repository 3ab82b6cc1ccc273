//! Exponentially scaled modified Bessel functions of order zero.
//!
//! I₀ overflows past z ≈ 700 while I₀(z)K₀(z) ~ 1/(2z), so everything is
//! carried in the scaled forms e^{−z}I₀(z) and e^{z}K₀(z).

use std::f64::consts::PI;

use crate::error::{domain, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

// power series for I₀ is used below this argument, asymptotic series above
const I0_SERIES_LIMIT: f64 = 30.0;
// small-argument series for K₀ below this, Steed's continued fraction above
const K0_SERIES_LIMIT: f64 = 2.0;

/// e^{−z} I₀(z) for z ≥ 0.
pub fn i0_scaled(z: f64) -> f64 {
    let z = z.abs();
    if z < I0_SERIES_LIMIT {
        (-z).exp() * i0_series(z)
    } else {
        i0_scaled_asymptotic(z)
    }
}

/// e^{z} K₀(z) for z > 0.
pub fn k0_scaled(z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(domain("z", z, "z > 0"));
    }
    Ok(if z <= K0_SERIES_LIMIT {
        z.exp() * k0_series(z)
    } else {
        k0_scaled_continued_fraction(z)
    })
}

/// I₀(z)·K₀(z) for z > 0, evaluated without overflow up to z = 10⁶ and
/// beyond. Tends to 1/(2z) for large z and diverges like −ln z at 0⁺.
pub fn bessel_i0k0_product(z: f64) -> Result<f64> {
    let k = k0_scaled(z)?;
    Ok(i0_scaled(z) * k)
}

fn i0_series(z: f64) -> f64 {
    let t = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    loop {
        term *= t / (k * k);
        sum += term;
        if term < f64::EPSILON * 0.25 * sum {
            return sum;
        }
        k += 1.0;
    }
}

fn i0_scaled_asymptotic(z: f64) -> f64 {
    // e^{−z}I₀(z) ~ (2πz)^{−1/2} Σ [(2k−1)!!]² / (k! (8z)^k)
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let m = (2 * k - 1) as f64;
        let next = term * m * m / (8.0 * z * k as f64);
        if next > term {
            break;
        }
        term = next;
        sum += term;
        if term < f64::EPSILON * 0.25 * sum {
            break;
        }
    }
    sum / (2.0 * PI * z).sqrt()
}

fn k0_series(z: f64) -> f64 {
    // K₀(z) = −(ln(z/2) + γ) I₀(z) + Σ_{k≥1} H_k (z²/4)^k / (k!)²
    let t = 0.25 * z * z;
    let mut term = 1.0;
    let mut harmonic = 0.0;
    let mut i0 = 1.0;
    let mut tail = 0.0;
    let mut k = 1.0;
    loop {
        term *= t / (k * k);
        harmonic += 1.0 / k;
        i0 += term;
        tail += harmonic * term;
        if term * harmonic < f64::EPSILON * 0.25 * tail.max(1e-300) && term < f64::EPSILON * i0 {
            break;
        }
        k += 1.0;
    }
    -((0.5 * z).ln() + EULER_GAMMA) * i0 + tail
}

/// Steed's algorithm for the second continued fraction (Temme) at order 0.
fn k0_scaled_continued_fraction(z: f64) -> f64 {
    let mut b = 2.0 * (1.0 + z);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < f64::EPSILON {
            break;
        }
    }
    (PI / (2.0 * z)).sqrt() / s
}

#[cfg(test)]
mod tests {
    use super::*;

    // Oracle: integral representations evaluated by the trapezoid rule,
    // which converges geometrically for these periodic / doubly decaying
    // integrands.
    //   I₀(z) = (1/π) ∫₀^π e^{z cos θ} dθ
    //   K₀(z) = ∫₀^∞ e^{−z cosh t} dt
    fn i0_scaled_oracle(z: f64) -> f64 {
        let n = 4000;
        let h = PI / n as f64;
        let mut sum = 0.5 * ((0.0f64).exp() + (-2.0 * z).exp());
        for j in 1..n {
            sum += (z * ((j as f64 * h).cos() - 1.0)).exp();
        }
        sum * h / PI
    }

    fn k0_scaled_oracle(z: f64) -> f64 {
        let h = 1e-3;
        let mut sum = 0.5;
        let mut j = 1;
        loop {
            let t = j as f64 * h;
            let v = (-z * (t.cosh() - 1.0)).exp();
            sum += v;
            if v < 1e-18 {
                break;
            }
            j += 1;
        }
        sum * h
    }

    #[test]
    fn scaled_functions_match_integral_representations() {
        for &z in &[
            1e-3, 0.1, 0.5, 1.0, 1.9, 2.0, 2.1, 5.0, 10.0, 29.0, 31.0, 80.0,
        ] {
            let i = i0_scaled(z);
            let io = i0_scaled_oracle(z);
            assert!((i - io).abs() < 1e-13 * io, "I0 at {z}: {i} vs {io}");
            let k = k0_scaled(z).unwrap();
            let ko = k0_scaled_oracle(z);
            assert!((k - ko).abs() < 1e-12 * ko, "K0 at {z}: {k} vs {ko}");
        }
    }

    #[test]
    fn product_at_one() {
        // I₀(1)K₀(1), 30-digit reference 0.533044674956268620193...
        let v = bessel_i0k0_product(1.0).unwrap();
        assert!((v - 0.533_044_674_956_268_6).abs() < 1e-14);
        let oracle = i0_scaled_oracle(1.0) * k0_scaled_oracle(1.0);
        assert!((v - oracle).abs() < 1e-12);
    }

    #[test]
    fn large_argument_asymptote() {
        for &z in &[1e4, 1e5, 1e6, 1e9] {
            let v = bessel_i0k0_product(z).unwrap();
            assert!(v.is_finite());
            // z I₀K₀ = 1/2 + 1/(16 z²) + …
            assert!((z * v - 0.5).abs() < 1e-4, "{z}");
            assert!((z * v - 0.5 - 1.0 / (16.0 * z * z)).abs() < 1e-12);
        }
    }

    #[test]
    fn small_argument_log_divergence() {
        let tiny = bessel_i0k0_product(1e-6).unwrap();
        assert!(tiny.is_finite() && tiny > bessel_i0k0_product(1.0).unwrap());
        let expected = -(0.5e-6f64).ln() - EULER_GAMMA;
        assert!((tiny - expected).abs() < 1e-9);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(bessel_i0k0_product(0.0).is_err());
        assert!(bessel_i0k0_product(-1.0).is_err());
        assert!(bessel_i0k0_product(f64::NAN).is_err());
    }

    #[test]
    fn positive_and_decreasing_on_log_grid() {
        let mut prev = f64::INFINITY;
        for j in 0..=700 {
            let z = 10f64.powf(-3.0 + 7.0 * j as f64 / 700.0);
            let v = bessel_i0k0_product(z).unwrap();
            assert!(v > 0.0 && v < prev, "at z = {z}");
            prev = v;
        }
    }
}
