//! Parameter sweeps over one or two axes with deterministic CSV/JSON output
//! and a sibling JSON manifest.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::anisotropic::{self, CrossoverResult, MainTerms};
use crate::constants::{DEFAULT_EPS_B_ANISOTROPIC, DEFAULT_EPS_B_ISOTROPIC, DEFAULT_OMEGA_P};
use crate::error::{Error, Result};
use crate::lifshitz::{self, ForceResult, Validity};
use crate::response::{IsotropicSlab, NanotubeArraySlab};
use crate::special_math::QuadratureSpec;
use crate::validity::{applicability_report, ApplicabilityReport, DEFAULT_DEVIATION_THRESHOLD};

pub const TOOL_NAME: &str = "td-casimir";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Default nanotube radius when none is given, nm.
pub const DEFAULT_RADIUS_NM: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    Casimir,
    LifshitzLocal,
    IsoNonlocal,
    IsoThin,
    AnisoParallel,
    AnisoPerp,
    MainTerms,
    Crossover,
    Validity,
}

impl Quantity {
    pub const ALL: [Quantity; 9] = [
        Quantity::Casimir,
        Quantity::LifshitzLocal,
        Quantity::IsoNonlocal,
        Quantity::IsoThin,
        Quantity::AnisoParallel,
        Quantity::AnisoPerp,
        Quantity::MainTerms,
        Quantity::Crossover,
        Quantity::Validity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::Casimir => "casimir",
            Quantity::LifshitzLocal => "lifshitz_local",
            Quantity::IsoNonlocal => "iso_nonlocal",
            Quantity::IsoThin => "iso_thin",
            Quantity::AnisoParallel => "aniso_parallel",
            Quantity::AnisoPerp => "aniso_perp",
            Quantity::MainTerms => "main_terms",
            Quantity::Crossover => "crossover",
            Quantity::Validity => "validity",
        }
    }

    /// Output column names, after the axis columns.
    pub fn columns(self) -> &'static [&'static str] {
        const FORCE: &[&str] = &["ratio", "pressure_pa", "error_estimate", "validity"];
        match self {
            Quantity::Casimir | Quantity::LifshitzLocal | Quantity::IsoThin => FORCE,
            Quantity::IsoNonlocal => &[
                "ratio",
                "pressure_pa",
                "error_estimate",
                "validity",
                "lifshitz_local_ratio",
            ],
            Quantity::AnisoParallel | Quantity::AnisoPerp => &[
                "ratio",
                "pressure_pa",
                "error_estimate",
                "validity",
                "main_term",
            ],
            Quantity::MainTerms => &[
                "ratio_parallel",
                "ratio_perp",
                "anisotropy",
                "error_estimate",
                "validity",
            ],
            Quantity::Crossover => &[
                "crossover_d_nm",
                "sign_low",
                "sign_high",
                "iterations",
                "status",
            ],
            Quantity::Validity => &[
                "max_rel_deviation_s",
                "max_rel_deviation_p",
                "d_ok",
                "l_ok",
                "verdict",
            ],
        }
    }
}

impl std::str::FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let normalized = s.replace('-', "_");
        Quantity::ALL
            .into_iter()
            .find(|q| q.as_str() == normalized)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown quantity '{s}'")))
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Inputs for one evaluation. Lengths in nm, frequencies in s⁻¹. Unset
/// options fall back to the defaults documented on each accessor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub l_nm: Option<f64>,
    pub d_nm: Option<f64>,
    pub eps_b: Option<f64>,
    pub omega_p: f64,
    pub radius_nm: Option<f64>,
    pub delta_nm: Option<f64>,
    pub layers: Option<f64>,
    pub eps_sub: f64,
    pub eps_sup: f64,
    /// Thickness search range for the crossover, nm.
    pub d_range: Option<(f64, f64)>,
    pub threshold: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            l_nm: None,
            d_nm: None,
            eps_b: None,
            omega_p: DEFAULT_OMEGA_P,
            radius_nm: None,
            delta_nm: None,
            layers: None,
            eps_sub: 1.0,
            eps_sup: 1.0,
            d_range: None,
            threshold: DEFAULT_DEVIATION_THRESHOLD,
        }
    }
}

fn missing(name: &str) -> Error {
    Error::InvalidParameter(format!("missing parameter {name}"))
}

impl Params {
    pub fn l(&self) -> Result<f64> {
        self.l_nm.ok_or_else(|| missing("l_nm"))
    }

    /// Isotropic film; ε_b defaults to 9.
    pub fn isotropic_slab(&self) -> Result<IsotropicSlab> {
        let d = self.d_nm.ok_or_else(|| missing("d_nm"))?;
        IsotropicSlab::new(
            self.omega_p,
            self.eps_b.unwrap_or(DEFAULT_EPS_B_ISOTROPIC),
            d,
        )?
        .with_environment(self.eps_sub, self.eps_sup)
    }

    /// Nanotube array; R defaults to 2 nm, Δ to 2R, ε_b to 10. The thickness
    /// is d if given, otherwise layers · 2R.
    pub fn nanotube_array(&self) -> Result<NanotubeArraySlab> {
        let r = self.radius_nm.unwrap_or(DEFAULT_RADIUS_NM);
        let d = match (self.d_nm, self.layers) {
            (Some(d), _) => d,
            (None, Some(n)) => 2.0 * r * n,
            (None, None) => return Err(missing("d_nm or layers")),
        };
        NanotubeArraySlab::new(
            r,
            self.delta_nm.unwrap_or(2.0 * r),
            self.eps_b.unwrap_or(DEFAULT_EPS_B_ANISOTROPIC),
            d,
            self.omega_p,
        )?
        .with_environment(self.eps_sub, self.eps_sup)
    }

    /// Crossover template (thickness set to the lower range end) and range;
    /// the range defaults to [2R, 50R].
    pub fn crossover_setup(&self) -> Result<(NanotubeArraySlab, (f64, f64))> {
        let r = self.radius_nm.unwrap_or(DEFAULT_RADIUS_NM);
        let range = self.d_range.unwrap_or((2.0 * r, 50.0 * r));
        if !(range.0 < range.1) {
            return Err(Error::InvalidParameter(format!(
                "thickness range [{}, {}] must be increasing",
                range.0, range.1
            )));
        }
        let template = Params {
            d_nm: Some(range.0),
            ..*self
        }
        .nanotube_array()?;
        Ok((template, range))
    }

    fn eps_b_main_terms(&self) -> Result<f64> {
        let e = self.eps_b.unwrap_or(DEFAULT_EPS_B_ANISOTROPIC);
        if e >= 1.0 && e.is_finite() {
            Ok(e)
        } else {
            Err(crate::error::domain("eps_b", e, "eps_b >= 1"))
        }
    }

    /// Checks that every parameter the quantity needs is present and
    /// respects the slab invariants, without evaluating any integral.
    pub fn validate_for(&self, quantity: Quantity) -> Result<()> {
        if !(self.omega_p > 0.0 && self.omega_p.is_finite()) {
            return Err(crate::error::domain("omega_p", self.omega_p, "omega_p > 0"));
        }
        let check_l = || -> Result<()> {
            let l = self.l()?;
            if l > 0.0 && l.is_finite() {
                Ok(())
            } else {
                Err(crate::error::domain("l", l, "l > 0"))
            }
        };
        match quantity {
            Quantity::Casimir | Quantity::LifshitzLocal => check_l(),
            Quantity::IsoNonlocal | Quantity::IsoThin | Quantity::Validity => {
                check_l()?;
                self.isotropic_slab().map(|_| ())
            }
            Quantity::AnisoParallel | Quantity::AnisoPerp => {
                check_l()?;
                self.nanotube_array().map(|_| ())
            }
            Quantity::MainTerms => self.eps_b_main_terms().map(|_| ()),
            Quantity::Crossover => {
                check_l()?;
                let (template, range) = self.crossover_setup()?;
                template.with_thickness(range.1).map(|_| ())
            }
        }
    }
}

/// Result of one evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Force {
        result: ForceResult,
        /// Quantity-specific reference value (local Lifshitz ratio or main term).
        reference: Option<f64>,
    },
    MainTerms(MainTerms),
    Crossover(CrossoverResult),
    Validity(ApplicabilityReport),
}

/// A single CSV/JSON cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Number(f64),
    Integer(i64),
    Flag(bool),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Number(v) => format_number(*v),
            Cell::Integer(i) => i.to_string(),
            Cell::Flag(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

/// Ten significant digits in scientific notation, locale independent.
pub fn format_number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.9e}")
    } else {
        v.to_string().to_lowercase()
    }
}

impl Outcome {
    /// True when some integral failed to converge.
    pub fn failed(&self) -> bool {
        match self {
            Outcome::Force { result, .. } => result.validity == Validity::QuadratureFailed,
            Outcome::MainTerms(m) => !(m.parallel.converged && m.perp.converged),
            Outcome::Crossover(_) | Outcome::Validity(_) => false,
        }
    }

    pub fn cells(&self) -> Vec<Cell> {
        match self {
            Outcome::Force { result, reference } => {
                let mut cells = vec![
                    Cell::Number(result.ratio_to_casimir),
                    Cell::Number(result.pressure),
                    Cell::Number(result.error_estimate),
                    Cell::Text(result.validity.to_string()),
                ];
                if let Some(r) = reference {
                    cells.push(Cell::Number(*r));
                }
                cells
            }
            Outcome::MainTerms(m) => {
                let ok = m.parallel.converged && m.perp.converged;
                vec![
                    Cell::Number(m.parallel.value),
                    Cell::Number(m.perp.value),
                    Cell::Number(m.anisotropy()),
                    Cell::Number(m.parallel.error_estimate + m.perp.error_estimate),
                    Cell::Text(
                        if ok {
                            Validity::Valid
                        } else {
                            Validity::QuadratureFailed
                        }
                        .to_string(),
                    ),
                ]
            }
            Outcome::Crossover(c) => vec![
                Cell::Number(c.crossover_d.unwrap_or(f64::NAN)),
                Cell::Integer(c.sign_low.into()),
                Cell::Integer(c.sign_high.into()),
                Cell::Integer(c.iterations.into()),
                Cell::Text(
                    if c.crossover_d.is_some() {
                        "found"
                    } else {
                        "not_found"
                    }
                    .into(),
                ),
            ],
            Outcome::Validity(r) => vec![
                Cell::Number(r.max_rel_deviation_s),
                Cell::Number(r.max_rel_deviation_p),
                Cell::Flag(r.d_ok),
                Cell::Flag(r.l_ok),
                Cell::Flag(r.verdict),
            ],
        }
    }
}

/// Evaluates one quantity at one parameter point.
pub fn run_point(quantity: Quantity, params: &Params, spec: &QuadratureSpec) -> Result<Outcome> {
    params.validate_for(quantity)?;
    let force = |result, reference| Ok(Outcome::Force { result, reference });
    match quantity {
        Quantity::Casimir => {
            let l = params.l()?;
            force(ForceResult::from_ratio(1.0, 0.0, Validity::Valid, l)?, None)
        }
        Quantity::LifshitzLocal => force(
            lifshitz::lifshitz_force_local(params.omega_p, params.l()?)?,
            None,
        ),
        Quantity::IsoNonlocal => {
            let l = params.l()?;
            let r = lifshitz::nonlocal_isotropic_ratio(&params.isotropic_slab()?, l, spec)?;
            let local = lifshitz::lifshitz_force_local(params.omega_p, l)?;
            force(r, Some(local.ratio_to_casimir))
        }
        Quantity::IsoThin => force(
            lifshitz::thin_limit_ratio(&params.isotropic_slab()?, params.l()?)?,
            None,
        ),
        Quantity::AnisoParallel => {
            let a = params.nanotube_array()?;
            let r = anisotropic::f_parallel_ratio(&a, params.l()?, spec)?;
            let main = anisotropic::main_term_parallel(a.eps_b, spec)?;
            force(r, Some(main.value))
        }
        Quantity::AnisoPerp => {
            let a = params.nanotube_array()?;
            let r = anisotropic::f_perp_ratio(&a, params.l()?, spec)?;
            let main = anisotropic::main_term_perp(a.eps_b, spec)?;
            force(r, Some(main.value))
        }
        Quantity::MainTerms => Ok(Outcome::MainTerms(anisotropic::main_terms(
            params.eps_b_main_terms()?,
            spec,
        )?)),
        Quantity::Crossover => {
            let (template, range) = params.crossover_setup()?;
            Ok(Outcome::Crossover(anisotropic::crossover_thickness(
                &template,
                params.l()?,
                range,
                spec,
            )?))
        }
        Quantity::Validity => Ok(Outcome::Validity(applicability_report(
            &params.isotropic_slab()?,
            params.l()?,
            params.threshold,
        )?)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisName {
    D,
    L,
    EpsB,
    /// 1/ε_b, for plots against the inverse background permittivity.
    InvEpsB,
    R,
    Layers,
}

impl AxisName {
    pub const ALL: [AxisName; 6] = [
        AxisName::D,
        AxisName::L,
        AxisName::EpsB,
        AxisName::InvEpsB,
        AxisName::R,
        AxisName::Layers,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AxisName::D => "d",
            AxisName::L => "l",
            AxisName::EpsB => "eps_b",
            AxisName::InvEpsB => "inv_eps_b",
            AxisName::R => "r",
            AxisName::Layers => "layers",
        }
    }

    /// CSV header with unit suffix.
    pub fn column(self) -> &'static str {
        match self {
            AxisName::D => "d_nm",
            AxisName::L => "l_nm",
            AxisName::EpsB => "eps_b",
            AxisName::InvEpsB => "inv_eps_b",
            AxisName::R => "radius_nm",
            AxisName::Layers => "layers",
        }
    }

    fn apply(self, params: &mut Params, value: f64) {
        match self {
            AxisName::D => params.d_nm = Some(value),
            AxisName::L => params.l_nm = Some(value),
            AxisName::EpsB => params.eps_b = Some(value),
            AxisName::InvEpsB => params.eps_b = Some(1.0 / value),
            AxisName::R => params.radius_nm = Some(value),
            AxisName::Layers => {
                params.layers = Some(value);
                params.d_nm = None;
            }
        }
    }
}

impl std::str::FromStr for AxisName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase().replace('-', "_");
        let key = lower.trim_end_matches("_nm");
        let key = if key == "radius" { "r" } else { key };
        AxisName::ALL
            .into_iter()
            .find(|a| a.as_str() == key)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown sweep axis '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AxisValues {
    Range {
        from: f64,
        to: f64,
        points: usize,
        #[serde(default)]
        spacing: Spacing,
    },
    List {
        values: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: AxisName,
    #[serde(flatten)]
    pub values: AxisValues,
}

impl Axis {
    pub fn range(name: AxisName, from: f64, to: f64, points: usize, spacing: Spacing) -> Self {
        Self {
            name,
            values: AxisValues::Range {
                from,
                to,
                points,
                spacing,
            },
        }
    }

    pub fn list(name: AxisName, values: Vec<f64>) -> Self {
        Self {
            name,
            values: AxisValues::List { values },
        }
    }

    /// Grid points; log spacing is geometric between the end points.
    pub fn points(&self) -> Result<Vec<f64>> {
        let bad = |msg: String| {
            Err(Error::InvalidParameter(format!(
                "axis {}: {msg}",
                self.name.as_str()
            )))
        };
        match &self.values {
            AxisValues::List { values } => {
                if values.is_empty() {
                    return bad("empty value list".into());
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return bad("non-finite value".into());
                }
                Ok(values.clone())
            }
            &AxisValues::Range {
                from,
                to,
                points,
                spacing,
            } => {
                if points == 0 {
                    return bad("points must be at least 1".into());
                }
                if !(from.is_finite() && to.is_finite()) {
                    return bad("bounds must be finite".into());
                }
                if points == 1 {
                    return Ok(vec![from]);
                }
                let n = (points - 1) as f64;
                match spacing {
                    Spacing::Linear => Ok((0..points)
                        .map(|i| {
                            if i == points - 1 {
                                to
                            } else {
                                from + (to - from) * i as f64 / n
                            }
                        })
                        .collect()),
                    Spacing::Log => {
                        if !(from > 0.0 && to > 0.0) {
                            return bad("log spacing needs positive bounds".into());
                        }
                        let (a, b) = (from.ln(), to.ln());
                        Ok((0..points)
                            .map(|i| {
                                if i == 0 {
                                    from
                                } else if i == points - 1 {
                                    to
                                } else {
                                    (a + (b - a) * i as f64 / n).exp()
                                }
                            })
                            .collect())
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRequest {
    pub quantity: Quantity,
    pub fixed_params: Params,
    /// At most two axes; the first is the slow (outer) one.
    pub sweep_axes: Vec<Axis>,
    pub output_path: PathBuf,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default)]
    pub spec: QuadratureSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis_values: Vec<f64>,
    pub cells: Vec<Cell>,
    #[serde(skip)]
    pub failed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub output_path: PathBuf,
    pub manifest_path: PathBuf,
    pub rows: usize,
    pub failed_rows: usize,
    pub columns: Vec<String>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    quantity: Quantity,
    fixed_params: &'a Params,
    sweep_axes: &'a [Axis],
    quadrature: &'a QuadratureSpec,
    format: OutputFormat,
    output_file: String,
    columns: &'a [String],
    rows: usize,
    failed_rows: usize,
}

/// Path of the manifest written next to `output`: `<output>.manifest.json`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    output.with_file_name(name)
}

impl SweepRequest {
    pub fn columns(&self) -> Vec<String> {
        self.sweep_axes
            .iter()
            .map(|a| a.name.column().to_string())
            .chain(self.quantity.columns().iter().map(|c| c.to_string()))
            .collect()
    }

    /// Every grid point's parameters, axis-major (first axis slowest).
    pub fn grid(&self) -> Result<Vec<(Vec<f64>, Params)>> {
        if self.sweep_axes.is_empty() || self.sweep_axes.len() > 2 {
            return Err(Error::InvalidParameter(format!(
                "a sweep needs one or two axes, got {}",
                self.sweep_axes.len()
            )));
        }
        if self.sweep_axes.len() == 2 && self.sweep_axes[0].name == self.sweep_axes[1].name {
            return Err(Error::InvalidParameter(
                "the two sweep axes must differ".into(),
            ));
        }
        let mut grid = vec![(Vec::new(), self.fixed_params)];
        for axis in &self.sweep_axes {
            let values = axis.points()?;
            grid = grid
                .into_iter()
                .flat_map(|(coords, params)| {
                    values.iter().map(move |&v| {
                        let mut p = params;
                        axis.name.apply(&mut p, v);
                        let mut c = coords.clone();
                        c.push(v);
                        (c, p)
                    })
                })
                .collect();
        }
        Ok(grid)
    }

    /// Checks the whole grid against the slab invariants.
    pub fn validate(&self) -> Result<Vec<(Vec<f64>, Params)>> {
        self.spec.validate()?;
        let grid = self.grid()?;
        for (coords, params) in &grid {
            params
                .validate_for(self.quantity)
                .map_err(|e| Error::InvalidParameter(format!("grid point {coords:?}: {e}")))?;
        }
        Ok(grid)
    }
}

/// Evaluates every grid point (in parallel) and writes the rows in grid
/// order. Parameters are validated and the output files created before any
/// force is computed.
pub fn run_sweep(request: &SweepRequest) -> Result<SweepSummary> {
    let grid = request.validate()?;
    let manifest_file = manifest_path(&request.output_path);
    let out = File::create(&request.output_path)?;
    let manifest_out = File::create(&manifest_file)?;

    let rows: Vec<SweepRow> = grid
        .par_iter()
        .map(|(coords, params)| {
            let outcome = run_point(request.quantity, params, &request.spec)?;
            Ok(SweepRow {
                axis_values: coords.clone(),
                cells: outcome.cells(),
                failed: outcome.failed(),
            })
        })
        .collect::<Result<_>>()?;

    let columns = request.columns();
    let mut w = BufWriter::new(out);
    match request.format {
        OutputFormat::Csv => w.write_all(render_csv(&columns, &rows).as_bytes())?,
        OutputFormat::Json => {
            let body = serde_json::json!({
                "columns": columns,
                "rows": rows.iter().map(|r| {
                    r.axis_values.iter().map(|&v| serde_json::json!(v))
                        .chain(r.cells.iter().map(|c| serde_json::to_value(c).expect("cells serialize")))
                        .collect::<Vec<_>>()
                }).collect::<Vec<_>>(),
            });
            serde_json::to_writer_pretty(&mut w, &body)?;
            w.write_all(b"\n")?;
        }
    }
    w.flush()?;

    let failed_rows = rows.iter().filter(|r| r.failed).count();
    let manifest = Manifest {
        tool: TOOL_NAME,
        version: TOOL_VERSION,
        quantity: request.quantity,
        fixed_params: &request.fixed_params,
        sweep_axes: &request.sweep_axes,
        quadrature: &request.spec,
        format: request.format,
        output_file: request
            .output_path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default(),
        columns: &columns,
        rows: rows.len(),
        failed_rows,
    };
    let mut m = BufWriter::new(manifest_out);
    serde_json::to_writer_pretty(&mut m, &manifest)?;
    m.write_all(b"\n")?;
    m.flush()?;

    Ok(SweepSummary {
        output_path: request.output_path.clone(),
        manifest_path: manifest_file,
        rows: rows.len(),
        failed_rows,
        columns,
    })
}

fn render_csv(columns: &[String], rows: &[SweepRow]) -> String {
    let mut s = columns.join(",");
    s.push('\n');
    for row in rows {
        let fields: Vec<String> = row
            .axis_values
            .iter()
            .map(|&v| format_number(v))
            .chain(row.cells.iter().map(Cell::render))
            .collect();
        let _ = writeln!(s, "{}", fields.join(","));
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Fig2,
    Fig3,
    Fig4,
}

impl std::str::FromStr for Preset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fig2" => Ok(Preset::Fig2),
            "fig3" => Ok(Preset::Fig3),
            "fig4" => Ok(Preset::Fig4),
            _ => Err(Error::InvalidParameter(format!("unknown preset '{s}'"))),
        }
    }
}

/// The sweep requests that make up a preset, writing into `dir`.
pub fn preset_requests(
    preset: Preset,
    dir: &Path,
    format: OutputFormat,
    spec: QuadratureSpec,
) -> Vec<SweepRequest> {
    let ext = match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    let request = |name: &str, quantity, fixed_params, sweep_axes| SweepRequest {
        quantity,
        fixed_params,
        sweep_axes,
        output_path: dir.join(format!("{name}.{ext}")),
        format,
        spec,
    };
    let l_axis = |points| Axis::range(AxisName::L, 100.0, 5000.0, points, Spacing::Log);
    match preset {
        Preset::Fig2 => vec![request(
            "fig2_main_terms",
            Quantity::MainTerms,
            Params::default(),
            vec![Axis::range(AxisName::InvEpsB, 1e-6, 1.0, 50, Spacing::Log)],
        )],
        Preset::Fig3 => {
            let iso = Params {
                eps_b: Some(DEFAULT_EPS_B_ISOTROPIC),
                ..Params::default()
            };
            vec![
                request(
                    "fig3a_iso_nonlocal",
                    Quantity::IsoNonlocal,
                    iso,
                    vec![Axis::list(AxisName::D, vec![10.0, 20.0, 200.0]), l_axis(60)],
                ),
                request(
                    "fig3b_iso_nonlocal_surface",
                    Quantity::IsoNonlocal,
                    iso,
                    vec![
                        Axis::range(AxisName::D, 5.0, 200.0, 30, Spacing::Log),
                        l_axis(30),
                    ],
                ),
            ]
        }
        Preset::Fig4 => {
            let mut out = Vec::new();
            for eps_b in [10.0, 5.0] {
                let tag = format!("eps{eps_b}");
                // radius scan of 5-monolayer dense slabs
                let radius_scan = Params {
                    eps_b: Some(eps_b),
                    layers: Some(5.0),
                    ..Params::default()
                };
                // thickness scan of dense R = 2 nm slabs
                let thickness_scan = Params {
                    eps_b: Some(eps_b),
                    radius_nm: Some(DEFAULT_RADIUS_NM),
                    ..Params::default()
                };
                for (quantity, q) in [
                    (Quantity::AnisoParallel, "parallel"),
                    (Quantity::AnisoPerp, "perp"),
                ] {
                    out.push(request(
                        &format!("fig4_{tag}_{q}_radius"),
                        quantity,
                        radius_scan,
                        vec![
                            Axis::range(AxisName::R, 0.5, 5.0, 10, Spacing::Linear),
                            l_axis(16),
                        ],
                    ));
                    out.push(request(
                        &format!("fig4_{tag}_{q}_thickness"),
                        quantity,
                        thickness_scan,
                        vec![
                            Axis::range(AxisName::D, 4.0, 100.0, 13, Spacing::Linear),
                            l_axis(16),
                        ],
                    ));
                }
            }
            out
        }
    }
}

/// Runs every sweep of a preset, creating `dir` if needed.
pub fn run_preset(
    preset: Preset,
    dir: &Path,
    format: OutputFormat,
    spec: QuadratureSpec,
) -> Result<Vec<SweepSummary>> {
    std::fs::create_dir_all(dir)?;
    let requests = preset_requests(preset, dir, format, spec);
    for r in &requests {
        r.validate()?;
    }
    requests.iter().map(run_sweep).collect()
}
