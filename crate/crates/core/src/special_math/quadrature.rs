//! Adaptive Gauss–Kronrod quadrature and the two semi-infinite axes used by
//! every force integral: the Bose-weighted x-axis on (0, ∞) and the
//! endpoint-singular p-axis on [1, ∞).

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Substitution applied to the p-axis before integrating.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PTransform {
    /// p = cosh u, u ∈ [0, ∞).
    #[default]
    Hyperbolic,
    /// p = 1 + t², t ∈ [0, ∞), compactified with t = s/(1 − s).
    ShiftedSquare,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper truncation of the x-axis (and of the hyperbolic p-axis variable).
    pub x_max: f64,
    pub p_transform: PTransform,
    pub max_subdivisions: usize,
}

pub const DEFAULT_REL_TOL: f64 = 1e-8;
pub const DEFAULT_ABS_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_SUBDIVISIONS: usize = 400;

impl QuadratureSpec {
    /// Builds a spec with the truncation point derived from `abs_tol`.
    pub fn new(rel_tol: f64, abs_tol: f64) -> Result<Self> {
        let spec = Self {
            rel_tol,
            abs_tol,
            x_max: Self::default_x_max(abs_tol),
            p_transform: PTransform::default(),
            max_subdivisions: DEFAULT_MAX_SUBDIVISIONS,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// x_max = max(40, −ln(abs_tol) + 10); integrands decay like e^{−x}.
    pub fn default_x_max(abs_tol: f64) -> f64 {
        if abs_tol > 0.0 {
            (10.0 - abs_tol.ln()).max(40.0)
        } else {
            // zero absolute tolerance: go as far as the exponent range allows
            700.0
        }
    }

    pub fn with_transform(mut self, transform: PTransform) -> Self {
        self.p_transform = transform;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(domain("rel_tol", self.rel_tol, "rel_tol > 0"));
        }
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite()) {
            return Err(domain("abs_tol", self.abs_tol, "abs_tol >= 0"));
        }
        if !(self.x_max > 0.0 && self.x_max.is_finite()) {
            return Err(domain("x_max", self.x_max, "x_max > 0"));
        }
        if self.max_subdivisions < 1 {
            return Err(domain(
                "max_subdivisions",
                self.max_subdivisions as f64,
                "max_subdivisions >= 1",
            ));
        }
        Ok(())
    }

    /// Acceptable absolute error for an integral of the given magnitude.
    pub fn tolerance_for(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }

    fn scaled(&self, factor: f64) -> Self {
        Self {
            rel_tol: self.rel_tol * factor,
            abs_tol: self.abs_tol * factor,
            ..*self
        }
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::new(DEFAULT_REL_TOL, DEFAULT_ABS_TOL).expect("default tolerances are valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
    pub evaluations: usize,
}

impl IntegralResult {
    /// Scales value and error by a constant prefactor.
    pub fn scale(self, factor: f64) -> Self {
        Self {
            value: self.value * factor,
            error_estimate: self.error_estimate * factor.abs(),
            ..self
        }
    }
}

/// A point on the p-axis together with √(p² − 1), which the substitutions
/// deliver without the cancellation of forming p² − 1 near p = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PAxisPoint {
    pub p: f64,
    pub q: f64,
}

impl PAxisPoint {
    pub fn from_p(p: f64) -> Self {
        Self {
            p,
            q: ((p - 1.0) * (p + 1.0)).max(0.0).sqrt(),
        }
    }
}

// 21-point Kronrod abscissae and weights with the embedded 10-point Gauss rule.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_349_904,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// One 21-point Kronrod pass with the QUADPACK error heuristic.
fn gauss_kronrod_21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut res_k = f_center * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        error = f64::INFINITY;
    }
    Segment { a, b, value, error }
}

/// Globally adaptive 21-point Gauss–Kronrod integration over [a, b].
///
/// The interval with the largest error estimate is bisected until the
/// summed error meets `spec` or `max_subdivisions` segments exist.
pub fn integrate_interval<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> IntegralResult {
    if a == b {
        return IntegralResult {
            value: 0.0,
            error_estimate: 0.0,
            converged: true,
            evaluations: 0,
        };
    }
    let mut heap = BinaryHeap::new();
    let first = gauss_kronrod_21(&f, a, b);
    let mut evaluations = 21;
    let mut total = first.value;
    let mut total_error = first.error;
    heap.push(first);

    let mut stalled = false;
    while total_error > spec.tolerance_for(total) && heap.len() < spec.max_subdivisions {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a.min(worst.b) && mid < worst.a.max(worst.b)) || !worst.error.is_finite() {
            heap.push(worst);
            stalled = true;
            break;
        }
        let left = gauss_kronrod_21(&f, worst.a, mid);
        let right = gauss_kronrod_21(&f, mid, worst.b);
        evaluations += 42;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // resum in interval order so the result does not depend on heap history
    let mut segments = heap.into_vec();
    segments.sort_by(|s, t| s.a.total_cmp(&t.a));
    let value: f64 = segments.iter().map(|s| s.value).sum();
    let error_estimate: f64 = segments.iter().map(|s| s.error).sum();
    IntegralResult {
        value,
        error_estimate,
        converged: !stalled && value.is_finite() && error_estimate <= spec.tolerance_for(value),
        evaluations,
    }
}

/// Integrates a function decaying like e^{−x} over (0, ∞).
///
/// The range (0, x_max] is integrated adaptively; the remainder is bounded
/// by 2|f(x_max)|, which holds whenever the local decay rate beyond x_max is
/// at least 1/2.
pub fn integrate_x_axis<F: Fn(f64) -> f64>(f: F, spec: &QuadratureSpec) -> IntegralResult {
    let tail = 2.0 * f(spec.x_max).abs();
    let head = integrate_interval(&f, 0.0, spec.x_max, &spec.scaled(0.5));
    let value = head.value;
    let error_estimate = head.error_estimate + tail;
    IntegralResult {
        value,
        error_estimate,
        converged: head.converged && error_estimate <= spec.tolerance_for(value),
        evaluations: head.evaluations + 1,
    }
}

/// Integrates over p ∈ [1, ∞) with an integrable endpoint singularity of
/// order `singularity_order` in (p² − 1) at p = 1.
pub fn integrate_p_axis<F: Fn(PAxisPoint) -> f64>(
    f: F,
    singularity_order: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    if !(0.0..1.0).contains(&singularity_order) {
        return Err(domain(
            "singularity_order",
            singularity_order,
            "0 <= singularity_order < 1",
        ));
    }
    Ok(p_axis(&f, spec))
}

fn p_axis<F: Fn(PAxisPoint) -> f64>(f: &F, spec: &QuadratureSpec) -> IntegralResult {
    match spec.p_transform {
        PTransform::Hyperbolic => {
            let g = |u: f64| {
                let (q, p) = (u.sinh(), u.cosh());
                let v = f(PAxisPoint { p, q });
                if v == 0.0 {
                    0.0
                } else {
                    v * q
                }
            };
            // g decays at least like 2e^{−u} since f = O(p^{−2})
            integrate_x_axis(g, spec)
        }
        PTransform::ShiftedSquare => {
            let g = |s: f64| {
                let w = 1.0 - s;
                let t = s / w;
                let p = 1.0 + t * t;
                let q = t * (2.0 + t * t).sqrt();
                let v = f(PAxisPoint { p, q });
                if v == 0.0 {
                    0.0
                } else {
                    v * 2.0 * t / (w * w)
                }
            };
            integrate_interval(g, 0.0, 1.0, spec)
        }
    }
}

/// Nested double integral ∫₀^∞ dx ∫₁^∞ dp f(x, p), x outer.
///
/// Inner integrals run at a tenth of the requested tolerance. Their
/// contribution to the error is the smaller of the integrated inner
/// tolerance and x_max times the largest inner estimate actually seen.
pub fn integrate_xp<F: Fn(f64, PAxisPoint) -> f64>(f: F, spec: &QuadratureSpec) -> IntegralResult {
    let inner_spec = spec.scaled(0.1);
    let inner_ok = Cell::new(true);
    let inner_evals = Cell::new(0usize);
    let inner_max_err = Cell::new(0.0f64);
    let outer = integrate_x_axis(
        |x| {
            let r = p_axis(&|pt| f(x, pt), &inner_spec);
            inner_evals.set(inner_evals.get() + r.evaluations);
            inner_max_err.set(inner_max_err.get().max(r.error_estimate));
            if !r.converged {
                inner_ok.set(false);
            }
            r.value
        },
        &spec.scaled(0.5),
    );
    let value = outer.value;
    let inner_bound = (inner_spec.rel_tol * value.abs() + inner_spec.abs_tol * spec.x_max)
        .min(inner_max_err.get() * spec.x_max);
    let error_estimate = outer.error_estimate + inner_bound;
    IntegralResult {
        value,
        error_estimate,
        converged: outer.converged && inner_ok.get() && error_estimate <= spec.tolerance_for(value),
        evaluations: outer.evaluations + inner_evals.get(),
    }
}
