mod config;

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{ConfigError, FileConfig};
use td_casimir::anisotropic::{anisotropy_curve, OrientationForces};
use td_casimir::special_math::{QuadratureSpec, DEFAULT_ABS_TOL, DEFAULT_REL_TOL};
use td_casimir::sweep::{
    format_number, run_point, run_preset, run_sweep, Axis, AxisName, Cell, Outcome, OutputFormat,
    Params, Preset, Quantity, Spacing, SweepRequest,
};
use td_casimir::Error;

const EXIT_NOT_FOUND: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_QUADRATURE: u8 = 3;
const EXIT_IO: u8 = 4;

/// Casimir/Lifshitz forces between transdimensional slabs.
///
/// Lengths are in nm, frequencies in s⁻¹. Forces are reported relative to
/// the ideal-conductor Casimir force and as pressures in Pa.
#[derive(Debug, Parser)]
#[command(name = "td-casimir", version)]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Default, Args)]
struct Opts {
    /// TOML file with default values for any of these flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Separation between the slabs, nm
    #[arg(long = "l-nm", global = true)]
    l_nm: Option<f64>,
    /// Slab thickness, nm
    #[arg(long = "d-nm", global = true)]
    d_nm: Option<f64>,
    /// Background permittivity (default 9 isotropic, 10 nanotube arrays)
    #[arg(long = "eps-b", global = true)]
    eps_b: Option<f64>,
    /// Bulk plasma frequency, s⁻¹ (default 2e16)
    #[arg(long = "omega-p", global = true)]
    omega_p: Option<f64>,
    /// Nanotube radius, nm (default 2)
    #[arg(long = "radius-nm", global = true)]
    radius_nm: Option<f64>,
    /// Nanotube array period, nm (default 2R, dense packing)
    #[arg(long = "delta-nm", global = true)]
    delta_nm: Option<f64>,
    /// Number of nanotube monolayers; sets d = layers · 2R when --d-nm is absent
    #[arg(long, global = true)]
    layers: Option<f64>,
    /// Substrate permittivity (default 1)
    #[arg(long = "eps-sub", global = true)]
    eps_sub: Option<f64>,
    /// Superstrate permittivity (default 1)
    #[arg(long = "eps-sup", global = true)]
    eps_sup: Option<f64>,
    /// Nanotube-array orientation (default: both)
    #[arg(long, global = true, value_enum)]
    orientation: Option<Orientation>,
    /// Output file (sweep, crossover curve, point result) or directory (preset)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for --out files, or JSON on stdout (default csv)
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Relative quadrature tolerance (default 1e-8)
    #[arg(long = "rel-tol", global = true)]
    rel_tol: Option<f64>,
    /// Absolute quadrature tolerance (default 1e-12)
    #[arg(long = "abs-tol", global = true)]
    abs_tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Orientation {
    Parallel,
    Perp,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PresetArg {
    Fig2,
    Fig3,
    Fig4,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ideal-conductor Casimir pressure
    Casimir,
    /// Local Drude (Lifshitz) force at large separation
    LifshitzLocal,
    /// Nonlocal force between isotropic transdimensional films
    IsoNonlocal,
    /// Thin-film asymptote of the nonlocal isotropic force
    IsoThin,
    /// Forces between nanotube-array slabs
    Aniso,
    /// ω_p → ∞ main terms of both nanotube-array orientations
    MainTerms,
    /// Thickness at which the preferred array orientation flips
    Crossover {
        /// Lower end of the thickness search range, nm (default 2R)
        #[arg(long = "d-from")]
        d_from: Option<f64>,
        /// Upper end of the thickness search range, nm (default 50R)
        #[arg(long = "d-to")]
        d_to: Option<f64>,
        /// Also write F∥, F⊥ on this many evenly spaced thicknesses to --out
        #[arg(long = "curve-points", default_value_t = 0)]
        curve_points: usize,
    },
    /// Film-versus-half-space applicability report
    Validity {
        /// Largest tolerated relative deviation (default 0.01)
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Sweep one quantity over one or two axes
    Sweep {
        /// casimir, lifshitz-local, iso-nonlocal, iso-thin, aniso-parallel,
        /// aniso-perp, main-terms, crossover or validity
        #[arg(long)]
        quantity: String,
        /// NAME=FROM:TO:POINTS[:linear|log] or NAME=V1,V2,...; NAME is one of
        /// d, l, eps_b, inv_eps_b, r, layers. Give at most twice.
        #[arg(long = "axis", required = true)]
        axes: Vec<String>,
        /// Crossover thickness range for --quantity crossover, nm
        #[arg(long = "d-from")]
        d_from: Option<f64>,
        /// Upper end of the crossover thickness range, nm
        #[arg(long = "d-to")]
        d_to: Option<f64>,
        /// Deviation threshold for --quantity validity (default 0.01)
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Write the standard figure data sets (fig2, fig3, fig4) into --out DIR
    Preset { name: PresetArg },
}

/// Why the program stops with a nonzero status.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Quadrature(String),
    Io(String),
    NotFound,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. } | Error::InvalidParameter(_) => Failure::Usage(e.to_string()),
            Error::Quadrature(_) => Failure::Quadrature(e.to_string()),
            Error::Io(_) | Error::Json(_) => Failure::Io(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

/// Command-line values layered over the configuration file.
struct Resolved {
    params: Params,
    orientation: Orientation,
    out: Option<PathBuf>,
    format: Option<FormatArg>,
    spec: QuadratureSpec,
    threshold: Option<f64>,
    d_from: Option<f64>,
    d_to: Option<f64>,
}

fn parse_enum<T: ValueEnum>(what: &str, s: &str) -> Result<T, Failure> {
    T::from_str(s, true).map_err(|_| Failure::Usage(format!("invalid {what} '{s}' in config file")))
}

fn resolve(opts: &Opts) -> Result<Resolved, Failure> {
    let file = match &opts.config {
        Some(path) => FileConfig::load(path).map_err(|e| match e {
            ConfigError::Read(e) => Failure::Io(format!("{}: {e}", path.display())),
            ConfigError::Parse(e) => Failure::Usage(format!("{}: {e}", path.display())),
        })?,
        None => FileConfig::default(),
    };
    let defaults = Params::default();
    let params = Params {
        l_nm: opts.l_nm.or(file.l_nm),
        d_nm: opts.d_nm.or(file.d_nm),
        eps_b: opts.eps_b.or(file.eps_b),
        omega_p: opts.omega_p.or(file.omega_p).unwrap_or(defaults.omega_p),
        radius_nm: opts.radius_nm.or(file.radius_nm),
        delta_nm: opts.delta_nm.or(file.delta_nm),
        layers: opts.layers.or(file.layers),
        eps_sub: opts.eps_sub.or(file.eps_sub).unwrap_or(defaults.eps_sub),
        eps_sup: opts.eps_sup.or(file.eps_sup).unwrap_or(defaults.eps_sup),
        d_range: None,
        threshold: defaults.threshold,
    };
    let orientation = match (opts.orientation, &file.orientation) {
        (Some(o), _) => o,
        (None, Some(s)) => parse_enum("orientation", s)?,
        (None, None) => Orientation::Both,
    };
    let format = match (opts.format, &file.format) {
        (Some(f), _) => Some(f),
        (None, Some(s)) => Some(parse_enum("format", s)?),
        (None, None) => None,
    };
    let spec = QuadratureSpec::new(
        opts.rel_tol.or(file.rel_tol).unwrap_or(DEFAULT_REL_TOL),
        opts.abs_tol.or(file.abs_tol).unwrap_or(DEFAULT_ABS_TOL),
    )?;
    Ok(Resolved {
        params,
        orientation,
        out: opts.out.clone().or(file.out),
        format,
        spec,
        threshold: file.threshold,
        d_from: file.d_from,
        d_to: file.d_to,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let code = match &failure {
                Failure::Usage(m) => {
                    eprintln!("error: {m}");
                    EXIT_USAGE
                }
                Failure::Quadrature(m) => {
                    eprintln!("error: {m}");
                    EXIT_QUADRATURE
                }
                Failure::Io(m) => {
                    eprintln!("error: {m}");
                    EXIT_IO
                }
                Failure::NotFound => EXIT_NOT_FOUND,
            };
            ExitCode::from(code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut r = resolve(&cli.opts)?;
    match cli.command {
        Command::Casimir => point(&r, Quantity::Casimir),
        Command::LifshitzLocal => point(&r, Quantity::LifshitzLocal),
        Command::IsoNonlocal => point(&r, Quantity::IsoNonlocal),
        Command::IsoThin => point(&r, Quantity::IsoThin),
        Command::MainTerms => point(&r, Quantity::MainTerms),
        Command::Aniso => match r.orientation {
            Orientation::Parallel => point(&r, Quantity::AnisoParallel),
            Orientation::Perp => point(&r, Quantity::AnisoPerp),
            Orientation::Both => aniso_both(&r),
        },
        Command::Validity { threshold } => {
            if let Some(t) = threshold.or(r.threshold) {
                r.params.threshold = t;
            }
            point(&r, Quantity::Validity)
        }
        Command::Crossover {
            d_from,
            d_to,
            curve_points,
        } => {
            r.params.d_range = thickness_range(d_from.or(r.d_from), d_to.or(r.d_to), &r.params);
            crossover(&r, curve_points)
        }
        Command::Sweep {
            quantity,
            axes,
            d_from,
            d_to,
            threshold,
        } => {
            r.params.d_range = thickness_range(d_from.or(r.d_from), d_to.or(r.d_to), &r.params);
            if let Some(t) = threshold.or(r.threshold) {
                r.params.threshold = t;
            }
            sweep(&r, &quantity, &axes)
        }
        Command::Preset { name } => preset(&r, name),
    }
}

fn thickness_range(from: Option<f64>, to: Option<f64>, params: &Params) -> Option<(f64, f64)> {
    if from.is_none() && to.is_none() {
        return None;
    }
    let radius = params
        .radius_nm
        .unwrap_or(td_casimir::sweep::DEFAULT_RADIUS_NM);
    Some((from.unwrap_or(2.0 * radius), to.unwrap_or(50.0 * radius)))
}

fn machine_line(quantity: &str, columns: &[&str], cells: &[Cell]) -> String {
    let fields: Vec<String> = columns
        .iter()
        .zip(cells)
        .map(|(c, v)| format!("{c}={}", render(v)))
        .collect();
    format!("RESULT quantity={quantity} {}", fields.join(" "))
}

fn render(cell: &Cell) -> String {
    match cell {
        Cell::Number(v) => format_number(*v),
        Cell::Integer(i) => i.to_string(),
        Cell::Flag(b) => b.to_string(),
        Cell::Text(s) => s.clone(),
    }
}

fn write_single(
    path: &PathBuf,
    format: OutputFormat,
    columns: &[&str],
    cells: &[Cell],
) -> Result<(), Failure> {
    let mut f = File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    match format {
        OutputFormat::Csv => {
            writeln!(f, "{}", columns.join(","))?;
            let row: Vec<String> = cells.iter().map(render).collect();
            writeln!(f, "{}", row.join(","))?;
        }
        OutputFormat::Json => {
            let object: serde_json::Map<String, serde_json::Value> = columns
                .iter()
                .zip(cells)
                .map(|(c, v)| {
                    (
                        c.to_string(),
                        serde_json::to_value(v).expect("cells serialize"),
                    )
                })
                .collect();
            serde_json::to_writer_pretty(&mut f, &object)
                .map_err(|e| Failure::Io(e.to_string()))?;
            writeln!(f)?;
        }
    }
    Ok(())
}

fn point(r: &Resolved, quantity: Quantity) -> Result<(), Failure> {
    if let Some(path) = &r.out {
        // fail on an unwritable destination before computing anything
        File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    let outcome = run_point(quantity, &r.params, &r.spec)?;
    let columns = quantity.columns();
    let cells = outcome.cells();
    if r.format == Some(FormatArg::Json) && r.out.is_none() {
        println!(
            "{}",
            serde_json::to_string_pretty(&outcome).map_err(|e| Failure::Io(e.to_string()))?
        );
    } else {
        println!("quantity: {quantity}");
        for (c, v) in columns.iter().zip(&cells) {
            println!("{c}: {}", render(v));
        }
        println!("{}", machine_line(quantity.as_str(), columns, &cells));
    }
    if let Some(path) = &r.out {
        write_single(
            path,
            r.format.unwrap_or(FormatArg::Csv).into(),
            columns,
            &cells,
        )?;
    }
    if outcome.failed() {
        return Err(Failure::Quadrature(format!(
            "{quantity}: integrals did not reach the requested tolerance"
        )));
    }
    Ok(())
}

fn aniso_both(r: &Resolved) -> Result<(), Failure> {
    let array = r.params.nanotube_array()?;
    let l = r.params.l()?;
    let forces = td_casimir::anisotropic::orientation_forces(&array, l, &r.spec)?;
    let columns = [
        "ratio_parallel",
        "ratio_perp",
        "anisotropy",
        "pressure_parallel_pa",
        "pressure_perp_pa",
        "error_estimate",
        "validity_parallel",
        "validity_perp",
    ];
    let cells = orientation_cells(&forces);
    if r.format == Some(FormatArg::Json) && r.out.is_none() {
        println!(
            "{}",
            serde_json::to_string_pretty(&forces).map_err(|e| Failure::Io(e.to_string()))?
        );
    } else {
        for (c, v) in columns.iter().zip(&cells) {
            println!("{c}: {}", render(v));
        }
        println!("{}", machine_line("aniso", &columns, &cells));
    }
    if let Some(path) = &r.out {
        write_single(
            path,
            r.format.unwrap_or(FormatArg::Csv).into(),
            &columns,
            &cells,
        )?;
    }
    if !forces.converged() {
        return Err(Failure::Quadrature("nanotube-array force integrals".into()));
    }
    Ok(())
}

fn orientation_cells(f: &OrientationForces) -> Vec<Cell> {
    vec![
        Cell::Number(f.f_parallel.ratio_to_casimir),
        Cell::Number(f.f_perp.ratio_to_casimir),
        Cell::Number(f.anisotropy),
        Cell::Number(f.f_parallel.pressure),
        Cell::Number(f.f_perp.pressure),
        Cell::Number(f.f_parallel.error_estimate + f.f_perp.error_estimate),
        Cell::Text(f.f_parallel.validity.to_string()),
        Cell::Text(f.f_perp.validity.to_string()),
    ]
}

fn crossover(r: &Resolved, curve_points: usize) -> Result<(), Failure> {
    if curve_points > 0 && r.out.is_none() {
        return Err(Failure::Usage("--curve-points needs --out".into()));
    }
    if curve_points == 1 {
        return Err(Failure::Usage(
            "--curve-points must be 0 or at least 2".into(),
        ));
    }
    r.params.validate_for(Quantity::Crossover)?;
    let (template, range) = r.params.crossover_setup()?;
    let l = r.params.l()?;
    let mut curve_file = match (&r.out, curve_points) {
        (Some(path), n) if n > 0 => {
            Some(File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?)
        }
        _ => None,
    };
    let outcome = run_point(Quantity::Crossover, &r.params, &r.spec)?;
    let Outcome::Crossover(result) = &outcome else {
        unreachable!("crossover quantity yields a crossover outcome")
    };
    if r.format == Some(FormatArg::Json) && curve_file.is_none() {
        println!(
            "{}",
            serde_json::to_string_pretty(result).map_err(|e| Failure::Io(e.to_string()))?
        );
    } else {
        match result.crossover_d {
            Some(d) => println!("crossover_d_nm: {}", format_number(d)),
            None => println!("crossover_d_nm: none"),
        }
        println!(
            "bracket_nm: [{}, {}]",
            format_number(result.bracket.0),
            format_number(result.bracket.1)
        );
        println!("sign_low: {}", result.sign_low);
        println!("sign_high: {}", result.sign_high);
        println!("iterations: {}", result.iterations);
        println!(
            "{}",
            machine_line("crossover", Quantity::Crossover.columns(), &outcome.cells())
        );
    }
    if let Some(f) = curve_file.as_mut() {
        let ds: Vec<f64> = (0..curve_points)
            .map(|i| range.0 + (range.1 - range.0) * i as f64 / (curve_points - 1) as f64)
            .collect();
        let curve = anisotropy_curve(&template, l, &ds, &r.spec)?;
        writeln!(
            f,
            "d_nm,ratio_parallel,ratio_perp,anisotropy,pressure_parallel_pa,pressure_perp_pa,error_estimate,validity_parallel,validity_perp"
        )?;
        for (d, forces) in &curve {
            let row: Vec<String> = std::iter::once(format_number(*d))
                .chain(orientation_cells(forces).iter().map(render))
                .collect();
            writeln!(f, "{}", row.join(","))?;
        }
    } else if let Some(path) = &r.out {
        write_single(
            path,
            r.format.unwrap_or(FormatArg::Csv).into(),
            Quantity::Crossover.columns(),
            &outcome.cells(),
        )?;
    }
    if result.crossover_d.is_none() {
        eprintln!(
            "no sign change of F_par - F_perp on [{}, {}] nm",
            range.0, range.1
        );
        return Err(Failure::NotFound);
    }
    Ok(())
}

/// NAME=FROM:TO:POINTS[:SPACING] or NAME=V1,V2,...
fn parse_axis(text: &str) -> Result<Axis, Failure> {
    let usage = |msg: &str| Failure::Usage(format!("--axis '{text}': {msg}"));
    let (name, spec) = text
        .split_once('=')
        .ok_or_else(|| usage("expected NAME=FROM:TO:POINTS[:linear|log] or NAME=V1,V2,..."))?;
    let name: AxisName = name
        .trim()
        .parse()
        .map_err(|e: Error| usage(&e.to_string()))?;
    let number = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| usage(&format!("'{s}' is not a number")))
    };
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(usage("range form is FROM:TO:POINTS[:linear|log]"));
        }
        let points = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|_| usage("POINTS must be a positive integer"))?;
        let spacing = match parts.get(3).map(|s| s.trim().to_ascii_lowercase()) {
            None => Spacing::Linear,
            Some(s) if s == "linear" || s == "lin" => Spacing::Linear,
            Some(s) if s == "log" => Spacing::Log,
            Some(s) => return Err(usage(&format!("unknown spacing '{s}'"))),
        };
        Ok(Axis::range(
            name,
            number(parts[0])?,
            number(parts[1])?,
            points,
            spacing,
        ))
    } else {
        let values = spec.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
        Ok(Axis::list(name, values))
    }
}

fn sweep(r: &Resolved, quantity: &str, axes: &[String]) -> Result<(), Failure> {
    let quantity: Quantity = quantity.parse()?;
    if axes.len() > 2 {
        return Err(Failure::Usage("at most two --axis options".into()));
    }
    let output_path = r
        .out
        .clone()
        .ok_or_else(|| Failure::Usage("sweep needs --out".into()))?;
    let request = SweepRequest {
        quantity,
        fixed_params: r.params,
        sweep_axes: axes
            .iter()
            .map(|a| parse_axis(a))
            .collect::<Result<_, _>>()?,
        output_path,
        format: r.format.unwrap_or(FormatArg::Csv).into(),
        spec: r.spec,
    };
    let summary = run_sweep(&request).map_err(|e| match e {
        Error::Io(io) => Failure::Io(format!("{}: {io}", request.output_path.display())),
        other => other.into(),
    })?;
    println!(
        "wrote {} rows to {} (manifest {})",
        summary.rows,
        summary.output_path.display(),
        summary.manifest_path.display()
    );
    if summary.failed_rows > 0 {
        return Err(Failure::Quadrature(format!(
            "{} of {} rows did not converge",
            summary.failed_rows, summary.rows
        )));
    }
    Ok(())
}

fn preset(r: &Resolved, name: PresetArg) -> Result<(), Failure> {
    let preset = match name {
        PresetArg::Fig2 => Preset::Fig2,
        PresetArg::Fig3 => Preset::Fig3,
        PresetArg::Fig4 => Preset::Fig4,
    };
    let dir = r
        .out
        .clone()
        .ok_or_else(|| Failure::Usage("preset needs --out DIR".into()))?;
    let summaries = run_preset(
        preset,
        &dir,
        r.format.unwrap_or(FormatArg::Csv).into(),
        r.spec,
    )?;
    let mut failed = 0;
    for s in &summaries {
        println!("wrote {} rows to {}", s.rows, s.output_path.display());
        failed += s.failed_rows;
    }
    if failed > 0 {
        return Err(Failure::Quadrature(format!(
            "{failed} rows did not converge"
        )));
    }
    Ok(())
}
