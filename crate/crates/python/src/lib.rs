//! Python bindings: slab descriptors, quadrature settings and every force
//! evaluator of the core crate.

use std::cell::RefCell;

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use td_casimir::anisotropic;
use td_casimir::lifshitz::{self, Validity};
use td_casimir::response::{self, Slab};
use td_casimir::special_math::{self, PTransform};
use td_casimir::validity;
use td_casimir::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Domain { .. } | Error::InvalidParameter(_) => PyValueError::new_err(e.to_string()),
        Error::Quadrature(_) => PyRuntimeError::new_err(e.to_string()),
        Error::Io(_) | Error::Json(_) => PyOSError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for td_casimir::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

#[pyclass(name = "QuadratureSpec", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyQuadratureSpec {
    inner: special_math::QuadratureSpec,
}

#[pymethods]
impl PyQuadratureSpec {
    #[new]
    #[pyo3(signature = (rel_tol = 1e-8, abs_tol = 1e-12, p_transform = "hyperbolic", max_subdivisions = None))]
    fn new(
        rel_tol: f64,
        abs_tol: f64,
        p_transform: &str,
        max_subdivisions: Option<usize>,
    ) -> PyResult<Self> {
        let transform = match p_transform {
            "hyperbolic" => PTransform::Hyperbolic,
            "shifted-square" | "shifted_square" => PTransform::ShiftedSquare,
            other => {
                return Err(PyValueError::new_err(format!(
                    "unknown p_transform '{other}'"
                )))
            }
        };
        let mut inner = special_math::QuadratureSpec::new(rel_tol, abs_tol)
            .py()?
            .with_transform(transform);
        if let Some(n) = max_subdivisions {
            inner.max_subdivisions = n;
            inner.validate().py()?;
        }
        Ok(Self { inner })
    }

    #[getter]
    fn rel_tol(&self) -> f64 {
        self.inner.rel_tol
    }
    #[getter]
    fn abs_tol(&self) -> f64 {
        self.inner.abs_tol
    }
    #[getter]
    fn x_max(&self) -> f64 {
        self.inner.x_max
    }
    #[getter]
    fn max_subdivisions(&self) -> usize {
        self.inner.max_subdivisions
    }

    fn __repr__(&self) -> String {
        format!(
            "QuadratureSpec(rel_tol={}, abs_tol={}, x_max={}, p_transform={:?})",
            self.inner.rel_tol, self.inner.abs_tol, self.inner.x_max, self.inner.p_transform
        )
    }
}

fn spec_or_default(spec: Option<PyQuadratureSpec>) -> special_math::QuadratureSpec {
    spec.map(|s| s.inner).unwrap_or_default()
}

#[pyclass(name = "IsotropicSlab", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyIsotropicSlab {
    inner: response::IsotropicSlab,
}

#[pymethods]
impl PyIsotropicSlab {
    #[new]
    #[pyo3(signature = (thickness_d, eps_b = 9.0, omega_p3d = 2e16, eps_sub = 1.0, eps_sup = 1.0, damping_delta = 0.0))]
    fn new(
        thickness_d: f64,
        eps_b: f64,
        omega_p3d: f64,
        eps_sub: f64,
        eps_sup: f64,
        damping_delta: f64,
    ) -> PyResult<Self> {
        let inner = response::IsotropicSlab::new(omega_p3d, eps_b, thickness_d)
            .and_then(|s| s.with_environment(eps_sub, eps_sup))
            .and_then(|s| s.with_damping(damping_delta))
            .py()?;
        Ok(Self { inner })
    }

    #[getter]
    fn thickness_d(&self) -> f64 {
        self.inner.thickness_d
    }
    #[getter]
    fn eps_b(&self) -> f64 {
        self.inner.eps_b
    }
    #[getter]
    fn omega_p3d(&self) -> f64 {
        self.inner.omega_p3d
    }
    #[getter]
    fn eps_tilde(&self) -> f64 {
        self.inner.eps_tilde()
    }

    fn __repr__(&self) -> String {
        let s = &self.inner;
        format!(
            "IsotropicSlab(thickness_d={}, eps_b={}, omega_p3d={:e}, eps_sub={}, eps_sup={})",
            s.thickness_d, s.eps_b, s.omega_p3d, s.eps_sub, s.eps_sup
        )
    }
}

#[pyclass(name = "NanotubeArraySlab", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyNanotubeArraySlab {
    inner: response::NanotubeArraySlab,
}

#[pymethods]
impl PyNanotubeArraySlab {
    /// Omitting `period_delta` gives dense packing (Δ = 2R); omitting
    /// `thickness_d` requires `layers` and sets d = layers · 2R.
    #[new]
    #[pyo3(signature = (radius_r = 2.0, thickness_d = None, layers = None, period_delta = None, eps_b = 10.0, omega_p3d = 2e16, eps_sub = 1.0, eps_sup = 1.0))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        radius_r: f64,
        thickness_d: Option<f64>,
        layers: Option<f64>,
        period_delta: Option<f64>,
        eps_b: f64,
        omega_p3d: f64,
        eps_sub: f64,
        eps_sup: f64,
    ) -> PyResult<Self> {
        let d = match (thickness_d, layers) {
            (Some(d), _) => d,
            (None, Some(n)) => 2.0 * radius_r * n,
            (None, None) => {
                return Err(PyValueError::new_err("give thickness_d or layers"));
            }
        };
        let inner = response::NanotubeArraySlab::new(
            radius_r,
            period_delta.unwrap_or(2.0 * radius_r),
            eps_b,
            d,
            omega_p3d,
        )
        .and_then(|s| s.with_environment(eps_sub, eps_sup))
        .py()?;
        Ok(Self { inner })
    }

    #[getter]
    fn radius_r(&self) -> f64 {
        self.inner.radius_r
    }
    #[getter]
    fn period_delta(&self) -> f64 {
        self.inner.period_delta
    }
    #[getter]
    fn thickness_d(&self) -> f64 {
        self.inner.thickness_d
    }
    #[getter]
    fn eps_b(&self) -> f64 {
        self.inner.eps_b
    }
    #[getter]
    fn layers(&self) -> f64 {
        self.inner.layers()
    }

    fn with_thickness(&self, thickness_d: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.with_thickness(thickness_d).py()?,
        })
    }

    fn __repr__(&self) -> String {
        let s = &self.inner;
        format!(
            "NanotubeArraySlab(radius_r={}, period_delta={}, thickness_d={}, eps_b={}, omega_p3d={:e})",
            s.radius_r, s.period_delta, s.thickness_d, s.eps_b, s.omega_p3d
        )
    }
}

#[pyclass(name = "ForceResult", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyForceResult {
    inner: lifshitz::ForceResult,
}

#[pymethods]
impl PyForceResult {
    #[getter]
    fn ratio_to_casimir(&self) -> f64 {
        self.inner.ratio_to_casimir
    }
    #[getter]
    fn pressure(&self) -> f64 {
        self.inner.pressure
    }
    #[getter]
    fn error_estimate(&self) -> f64 {
        self.inner.error_estimate
    }
    /// "valid", "correction_dominant" or "quadrature_failed"
    #[getter]
    fn validity(&self) -> &'static str {
        self.inner.validity.as_str()
    }
    #[getter]
    fn is_valid(&self) -> bool {
        self.inner.validity == Validity::Valid
    }

    fn __repr__(&self) -> String {
        format!(
            "ForceResult(ratio_to_casimir={}, pressure={:e}, error_estimate={:e}, validity='{}')",
            self.inner.ratio_to_casimir,
            self.inner.pressure,
            self.inner.error_estimate,
            self.inner.validity
        )
    }
}

fn force(r: td_casimir::Result<lifshitz::ForceResult>) -> PyResult<PyForceResult> {
    Ok(PyForceResult { inner: r.py()? })
}

#[pyclass(name = "IntegralResult", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
struct PyIntegralResult {
    #[pyo3(get)]
    value: f64,
    #[pyo3(get)]
    error_estimate: f64,
    #[pyo3(get)]
    converged: bool,
    #[pyo3(get)]
    evaluations: usize,
}

impl From<special_math::IntegralResult> for PyIntegralResult {
    fn from(r: special_math::IntegralResult) -> Self {
        Self {
            value: r.value,
            error_estimate: r.error_estimate,
            converged: r.converged,
            evaluations: r.evaluations,
        }
    }
}

#[pymethods]
impl PyIntegralResult {
    fn __repr__(&self) -> String {
        format!(
            "IntegralResult(value={}, error_estimate={:e}, converged={})",
            self.value, self.error_estimate, self.converged
        )
    }
}

#[pyclass(name = "OrientationForces", frozen, skip_from_py_object)]
struct PyOrientationForces {
    #[pyo3(get)]
    f_parallel: Py<PyForceResult>,
    #[pyo3(get)]
    f_perp: Py<PyForceResult>,
    #[pyo3(get)]
    anisotropy: f64,
}

#[pyclass(name = "CrossoverResult", frozen, skip_from_py_object)]
struct PyCrossoverResult {
    #[pyo3(get)]
    crossover_d: Option<f64>,
    #[pyo3(get)]
    bracket: (f64, f64),
    #[pyo3(get)]
    sign_low: i8,
    #[pyo3(get)]
    sign_high: i8,
    #[pyo3(get)]
    iterations: u32,
}

#[pymethods]
impl PyCrossoverResult {
    fn __repr__(&self) -> String {
        let d = self
            .crossover_d
            .map_or_else(|| "None".to_string(), |d| d.to_string());
        format!(
            "CrossoverResult(crossover_d={d}, bracket={:?}, sign_low={}, sign_high={}, iterations={})",
            self.bracket, self.sign_low, self.sign_high, self.iterations
        )
    }
}

#[pyclass(name = "ApplicabilityReport", frozen, skip_from_py_object)]
struct PyApplicabilityReport {
    #[pyo3(get)]
    max_rel_deviation_s: f64,
    #[pyo3(get)]
    max_rel_deviation_p: f64,
    #[pyo3(get)]
    d_ok: bool,
    #[pyo3(get)]
    l_ok: bool,
    #[pyo3(get)]
    verdict: bool,
}

#[pyfunction]
fn bessel_i0k0_product(z: f64) -> PyResult<f64> {
    special_math::bessel_i0k0_product(z).py()
}

#[pyfunction]
fn bose_integral(s: f64) -> PyResult<f64> {
    special_math::bose_integral(s).py()
}

#[pyfunction]
fn drude_eps_imaginary_axis(xi: f64, omega_p: f64, eps_b: f64, delta: f64) -> PyResult<f64> {
    response::drude_eps_imaginary_axis(xi, omega_p, eps_b, delta).py()
}

#[pyfunction]
fn momentum_from_xp(x: f64, p: f64, l_nm: f64) -> f64 {
    response::momentum_from_xp(x, p, l_nm)
}

#[pyfunction]
fn plasma_freq_isotropic(k: f64, slab: PyIsotropicSlab) -> f64 {
    response::plasma_freq_isotropic(k, &slab.inner)
}

#[pyfunction]
fn plasma_freq_nanotube(q: f64, slab: PyNanotubeArraySlab) -> f64 {
    response::plasma_freq_nanotube(q, &slab.inner)
}

#[pyfunction]
fn casimir_pressure(l_nm: f64) -> PyResult<f64> {
    lifshitz::casimir_pressure(l_nm).py()
}

/// Full Lifshitz force for two half-spaces whose permittivities are given
/// as Python callables of the imaginary frequency ξ (s⁻¹).
#[pyfunction]
#[pyo3(signature = (eps1, eps2, l_nm, spec = None))]
fn lifshitz_pressure_general(
    eps1: Bound<'_, PyAny>,
    eps2: Bound<'_, PyAny>,
    l_nm: f64,
    spec: Option<PyQuadratureSpec>,
) -> PyResult<PyForceResult> {
    let error: RefCell<Option<PyErr>> = RefCell::new(None);
    let call = |f: &Bound<'_, PyAny>, xi: f64| -> f64 {
        if error.borrow().is_some() {
            return 1.0;
        }
        match f.call1((xi,)).and_then(|v| v.extract::<f64>()) {
            Ok(v) => v,
            Err(e) => {
                *error.borrow_mut() = Some(e);
                1.0
            }
        }
    };
    let result = lifshitz::lifshitz_pressure_general(
        |xi| call(&eps1, xi),
        |xi| call(&eps2, xi),
        l_nm,
        &spec_or_default(spec),
    );
    if let Some(e) = error.into_inner() {
        return Err(e);
    }
    force(result)
}

#[pyfunction]
fn lifshitz_force_local(omega_p: f64, l_nm: f64) -> PyResult<PyForceResult> {
    force(lifshitz::lifshitz_force_local(omega_p, l_nm))
}

#[pyfunction]
#[pyo3(signature = (slab, l_nm, spec = None))]
fn nonlocal_isotropic_ratio(
    slab: PyIsotropicSlab,
    l_nm: f64,
    spec: Option<PyQuadratureSpec>,
) -> PyResult<PyForceResult> {
    force(lifshitz::nonlocal_isotropic_ratio(
        &slab.inner,
        l_nm,
        &spec_or_default(spec),
    ))
}

#[pyfunction]
fn thin_limit_ratio(slab: PyIsotropicSlab, l_nm: f64) -> PyResult<PyForceResult> {
    force(lifshitz::thin_limit_ratio(&slab.inner, l_nm))
}

#[pyfunction]
fn thin_limit_coefficient() -> PyResult<f64> {
    lifshitz::thin_limit_coefficient().py()
}

#[pyfunction]
fn phi(p: f64, eps_b: f64) -> PyResult<f64> {
    anisotropic::phi(p, eps_b).py()
}

#[pyfunction]
fn psi(p: f64, eps_b: f64) -> PyResult<f64> {
    anisotropic::psi(p, eps_b).py()
}

#[pyfunction]
#[pyo3(signature = (eps_b, spec = None))]
fn main_term_parallel(eps_b: f64, spec: Option<PyQuadratureSpec>) -> PyResult<PyIntegralResult> {
    Ok(
        anisotropic::main_term_parallel(eps_b, &spec_or_default(spec))
            .py()?
            .into(),
    )
}

#[pyfunction]
#[pyo3(signature = (eps_b, spec = None))]
fn main_term_perp(eps_b: f64, spec: Option<PyQuadratureSpec>) -> PyResult<PyIntegralResult> {
    Ok(anisotropic::main_term_perp(eps_b, &spec_or_default(spec))
        .py()?
        .into())
}

#[pyfunction]
#[pyo3(signature = (array, l_nm, spec = None))]
fn f_parallel_ratio(
    array: PyNanotubeArraySlab,
    l_nm: f64,
    spec: Option<PyQuadratureSpec>,
) -> PyResult<PyForceResult> {
    force(anisotropic::f_parallel_ratio(
        &array.inner,
        l_nm,
        &spec_or_default(spec),
    ))
}

#[pyfunction]
#[pyo3(signature = (array, l_nm, spec = None))]
fn f_perp_ratio(
    array: PyNanotubeArraySlab,
    l_nm: f64,
    spec: Option<PyQuadratureSpec>,
) -> PyResult<PyForceResult> {
    force(anisotropic::f_perp_ratio(
        &array.inner,
        l_nm,
        &spec_or_default(spec),
    ))
}

#[pyfunction]
#[pyo3(signature = (array, l_nm, spec = None))]
fn orientation_forces(
    py: Python<'_>,
    array: PyNanotubeArraySlab,
    l_nm: f64,
    spec: Option<PyQuadratureSpec>,
) -> PyResult<PyOrientationForces> {
    let spec = spec_or_default(spec);
    let f = py
        .detach(|| anisotropic::orientation_forces(&array.inner, l_nm, &spec))
        .py()?;
    Ok(PyOrientationForces {
        f_parallel: Py::new(
            py,
            PyForceResult {
                inner: f.f_parallel,
            },
        )?,
        f_perp: Py::new(py, PyForceResult { inner: f.f_perp })?,
        anisotropy: f.anisotropy,
    })
}

#[pyfunction]
#[pyo3(signature = (template, l_nm, d_range, spec = None))]
fn crossover_thickness(
    py: Python<'_>,
    template: PyNanotubeArraySlab,
    l_nm: f64,
    d_range: (f64, f64),
    spec: Option<PyQuadratureSpec>,
) -> PyResult<PyCrossoverResult> {
    let spec = spec_or_default(spec);
    let c = py
        .detach(|| anisotropic::crossover_thickness(&template.inner, l_nm, d_range, &spec))
        .py()?;
    Ok(PyCrossoverResult {
        crossover_d: c.crossover_d,
        bracket: c.bracket,
        sign_low: c.sign_low,
        sign_high: c.sign_high,
        iterations: c.iterations,
    })
}

#[pyfunction]
#[pyo3(signature = (slab, l_nm, threshold = validity::DEFAULT_DEVIATION_THRESHOLD))]
fn applicability_report(
    slab: PyIsotropicSlab,
    l_nm: f64,
    threshold: f64,
) -> PyResult<PyApplicabilityReport> {
    let r = validity::applicability_report(&slab.inner, l_nm, threshold).py()?;
    Ok(PyApplicabilityReport {
        max_rel_deviation_s: r.max_rel_deviation_s,
        max_rel_deviation_p: r.max_rel_deviation_p,
        d_ok: r.d_ok,
        l_ok: r.l_ok,
        verdict: r.verdict,
    })
}

#[pymodule]
fn td_casimir_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQuadratureSpec>()?;
    m.add_class::<PyIsotropicSlab>()?;
    m.add_class::<PyNanotubeArraySlab>()?;
    m.add_class::<PyForceResult>()?;
    m.add_class::<PyIntegralResult>()?;
    m.add_class::<PyOrientationForces>()?;
    m.add_class::<PyCrossoverResult>()?;
    m.add_class::<PyApplicabilityReport>()?;
    m.add_function(wrap_pyfunction!(bessel_i0k0_product, m)?)?;
    m.add_function(wrap_pyfunction!(bose_integral, m)?)?;
    m.add_function(wrap_pyfunction!(drude_eps_imaginary_axis, m)?)?;
    m.add_function(wrap_pyfunction!(momentum_from_xp, m)?)?;
    m.add_function(wrap_pyfunction!(plasma_freq_isotropic, m)?)?;
    m.add_function(wrap_pyfunction!(plasma_freq_nanotube, m)?)?;
    m.add_function(wrap_pyfunction!(casimir_pressure, m)?)?;
    m.add_function(wrap_pyfunction!(lifshitz_pressure_general, m)?)?;
    m.add_function(wrap_pyfunction!(lifshitz_force_local, m)?)?;
    m.add_function(wrap_pyfunction!(nonlocal_isotropic_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(thin_limit_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(thin_limit_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(main_term_parallel, m)?)?;
    m.add_function(wrap_pyfunction!(main_term_perp, m)?)?;
    m.add_function(wrap_pyfunction!(f_parallel_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(f_perp_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(orientation_forces, m)?)?;
    m.add_function(wrap_pyfunction!(crossover_thickness, m)?)?;
    m.add_function(wrap_pyfunction!(applicability_report, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
