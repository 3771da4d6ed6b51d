//! Command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 bad arguments or config,
//! 3 domain error (validity window, geometry, unreachable bound).
//! Numbers on stdout carry 6 significant digits; files carry full precision.

pub mod config;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::bounds::{self, BDReference, BoundResult, EffectKind, EffectSetup, PrecisionSpec};
use crate::deflection::{self, DEFAULT_BEAM_KEV, DEFAULT_DETECTOR_DISTANCE, DEFAULT_SLIT_SEPARATION};
use crate::error::Error;
use crate::field::{self, OracleOptions, SolenoidSpec};
use crate::numerics::logspace;
use crate::phases::{self, PathSpec, ProbeSpec};
use crate::units::{self, InverseRange, MassGrams, YEAR_SECONDS};

pub use config::{parse_config, ConfigError, ExperimentConfig};
pub use report::{parse_report, Report, SCHEMA_VERSION};

#[derive(Debug, Parser)]
#[command(name = "proca-ab", version, about = "Massive-photon solenoid fields, AB-type phase corrections and photon-mass bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Convert between inverse range, grams and the time-uncertainty mass.
    Convert(ConvertArgs),
    /// Radial profile of B_z, A_phi and Pi.
    Field(FieldArgs),
    /// Phase and mass correction for a configured experiment.
    Phase(PhaseArgs),
    /// Photon-mass bound for a configured experiment.
    Bound(BoundArgs),
    /// Leakage-field deflection of an electron beam.
    Deflect(DeflectArgs),
    /// Bound over a range of one configured parameter.
    Sweep(SweepArgs),
    /// Published reference bounds.
    Refs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input").required(true).args(["inv_cm", "grams", "delta_t_years", "delta_t_s"])))]
struct ConvertArgs {
    /// Inverse range 1/m_gamma in cm.
    #[arg(long, value_name = "CM")]
    inv_cm: Option<f64>,
    /// Photon mass in grams.
    #[arg(long, value_name = "G")]
    grams: Option<f64>,
    /// Observation time for the h/(Δt c^2) estimate, in years.
    #[arg(long, value_name = "YEARS")]
    delta_t_years: Option<f64>,
    /// Observation time in seconds.
    #[arg(long, value_name = "S")]
    delta_t_s: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    ClosedForm,
    Quadrature,
    OdeOracle,
}

#[derive(Debug, Args)]
struct FieldArgs {
    /// Solenoid radius, cm.
    #[arg(long)]
    a: f64,
    /// Massless interior field, gauss.
    #[arg(long, allow_hyphen_values = true)]
    j: f64,
    /// Photon mass as m_gamma, cm^-1.
    #[arg(long)]
    m: f64,
    /// First radius, cm [default: 0.01 a].
    #[arg(long)]
    rho_min: Option<f64>,
    /// Last radius, cm [default: max(10 a, 30/m)].
    #[arg(long)]
    rho_max: Option<f64>,
    #[arg(long, default_value_t = 50)]
    points: usize,
    #[arg(long, value_enum, default_value = "closed-form")]
    method: MethodArg,
    /// CSV destination; without it the table goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PhaseArgs {
    #[arg(long)]
    config: PathBuf,
    /// m_gamma in cm^-1; overrides `m_gamma_per_cm` from the config.
    #[arg(long)]
    m: Option<f64>,
    /// Write a JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DeflectArgs {
    #[arg(long)]
    a: f64,
    #[arg(long, allow_hyphen_values = true)]
    j: f64,
    #[arg(long)]
    m: f64,
    /// Half-length of the straight path, cm.
    #[arg(long)]
    x: f64,
    /// Offset of the path from the solenoid axis, cm.
    #[arg(long)]
    y: f64,
    /// Electron kinetic energy, keV.
    #[arg(long, default_value_t = DEFAULT_BEAM_KEV)]
    kev: f64,
    /// Slit-to-screen distance, cm.
    #[arg(long, default_value_t = DEFAULT_DETECTOR_DISTANCE)]
    distance: f64,
    /// Slit separation, cm.
    #[arg(long, default_value_t = DEFAULT_SLIT_SEPARATION)]
    slit: f64,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Config(ConfigError),
    Domain(Error),
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Config(e) => write!(f, "config error: {e}"),
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn g6(x: f64) -> String {
    format!("{x:.5e}")
}

/// Runs the CLI against the process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the CLI with explicit output streams; returns the exit code.
pub fn run_with<I, T, O, E>(argv: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    O: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            };
        }
    };
    let result = match cli.command {
        Command::Convert(a) => convert(a, out),
        Command::Field(a) => field_cmd(a, out),
        Command::Phase(a) => phase_cmd(a, out),
        Command::Bound(a) => bound_cmd(a, out, err),
        Command::Deflect(a) => deflect_cmd(a, out),
        Command::Sweep(a) => sweep_cmd(a, out),
        Command::Refs => refs(out),
    };
    match result.and_then(|()| out.flush().map_err(CliError::from)) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

fn load_config(path: &Path) -> CliResult<ExperimentConfig> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_config(&text)?)
}

fn write_file(path: &Path, contents: &[u8]) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn convert<O: Write>(a: ConvertArgs, out: &mut O) -> CliResult<()> {
    if let Some(range) = a.inv_cm {
        let m = InverseRange::from_range_cm(range)?;
        writeln!(out, "m_gamma_per_cm = {}", g6(m.value()))?;
        writeln!(out, "m_gamma_inv_cm = {}", g6(range))?;
        writeln!(out, "m_ph_g = {}", g6(units::to_grams(m).value()))?;
    } else if let Some(g) = a.grams {
        let m = units::to_inverse_cm(MassGrams::new(g)?);
        writeln!(out, "m_ph_g = {}", g6(g))?;
        writeln!(out, "m_gamma_per_cm = {}", g6(m.value()))?;
        writeln!(out, "m_gamma_inv_cm = {}", g6(m.range_cm()))?;
    } else {
        let seconds = match (a.delta_t_years, a.delta_t_s) {
            (Some(y), _) => y * YEAR_SECONDS,
            (_, Some(s)) => s,
            _ => unreachable!("clap enforces the group"),
        };
        let mass = units::uncertainty_mass(seconds)?;
        writeln!(out, "delta_t_s = {}", g6(seconds))?;
        writeln!(out, "m_ph_g = {}", g6(mass.value()))?;
        writeln!(out, "m_gamma_inv_cm = {}", g6(units::to_inverse_cm(mass).range_cm()))?;
    }
    Ok(())
}

fn field_cmd<O: Write>(a: FieldArgs, out: &mut O) -> CliResult<()> {
    let s = SolenoidSpec::new(a.a, a.j)?;
    let m = InverseRange::new(a.m)?;
    let rho_min = a.rho_min.unwrap_or(0.01 * a.a);
    let rho_max = a.rho_max.unwrap_or_else(|| {
        if m.is_massless() {
            10.0 * a.a
        } else {
            (10.0 * a.a).max(30.0 / m.value())
        }
    });
    if a.points < 2 || !(rho_min > 0.0 && rho_max > rho_min) {
        return Err(CliError::Usage(format!(
            "need points >= 2 and 0 < rho_min < rho_max, got {} points on [{rho_min}, {rho_max}]",
            a.points
        )));
    }
    let grid = logspace(rho_min, rho_max, a.points);
    let profile = match a.method {
        MethodArg::ClosedForm => field::closed_form_profile(&s, m, &grid)?,
        MethodArg::Quadrature => field::quadrature_profile(&s, m, &grid)?,
        MethodArg::OdeOracle => field::ode_oracle(&s, m, &grid, OracleOptions::default())?.profile,
    };
    let profile = profile.with_stokes_residual(&s, m)?;
    let residual = profile
        .stokes_residual
        .as_ref()
        .map(|r| r.iter().cloned().fold(0.0, f64::max))
        .unwrap_or(0.0);
    match &a.out {
        Some(path) => {
            let mut buf = Vec::new();
            profile.write_csv(&mut buf)?;
            write_file(path, &buf)?;
            writeln!(out, "rows = {}", profile.len())?;
            writeln!(out, "method = {}", profile.method)?;
            writeln!(out, "max_stokes_residual = {}", g6(residual))?;
            writeln!(out, "out = {}", path.display())?;
        }
        None => {
            writeln!(out, "rho_cm,b_gauss,a_phi_gauss_cm,pi_kernel,method,stokes_residual")?;
            let res = profile.stokes_residual.as_ref().expect("filled above");
            for i in 0..profile.len() {
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    g6(profile.grid[i]),
                    g6(profile.b_z[i]),
                    g6(profile.a_phi[i]),
                    g6(profile.pi_kernel[i]),
                    profile.method,
                    g6(res[i])
                )?;
            }
        }
    }
    Ok(())
}

fn phase_row<O: Write>(out: &mut O, p: &phases::PhaseResult) -> CliResult<()> {
    writeln!(
        out,
        "{},{},{},{},{}",
        p.method,
        g6(p.phi0),
        g6(p.delta_phi),
        g6(p.ratio),
        p.validity_flags.join(";")
    )?;
    Ok(())
}

fn phase_cmd<O: Write>(a: PhaseArgs, out: &mut O) -> CliResult<()> {
    let cfg = load_config(&a.config)?;
    let m = match a.m {
        Some(v) => InverseRange::new(v)?,
        None => cfg
            .mass()?
            .ok_or_else(|| CliError::Usage("no photon mass: pass --m or set m_gamma_per_cm".into()))?,
    };
    let setup = cfg.setup()?;
    let result = setup.phases(m)?;
    writeln!(out, "effect = {}", cfg.effect)?;
    writeln!(out, "m_gamma_per_cm = {}", g6(m.value()))?;
    writeln!(out, "method,phi0_rad,delta_phi_rad,ratio,validity_flags")?;
    phase_row(out, &result.exact)?;
    if let Some(asym) = &result.asymptotic {
        phase_row(out, asym)?;
    }
    if let Some(sup) = result.superposed_delta_phi {
        writeln!(out, "superposed_delta_phi_rad = {}", g6(sup))?;
    }

    if let Some(path) = &a.json {
        let mut diagnostics = json!({});
        if let Some(asym) = &result.asymptotic {
            diagnostics["exact_over_asymptotic_magnitude"] =
                report::finite_or_null(result.exact.ratio.abs() / asym.ratio.abs());
        }
        if let EffectSetup::PmQ { solenoid, .. } = &setup {
            let li = phases::line_integral_oracle(&setup.path()?, solenoid, m)?;
            diagnostics["line_integral"] = serde_json::to_value(li).expect("serializable");
        }
        let rep = Report::new(
            json!({ "config": cfg, "m_gamma_per_cm": m.value() }),
            serde_json::to_value(&result).expect("serializable"),
            diagnostics,
        );
        write_file(path, rep.to_json().as_bytes())?;
    }
    Ok(())
}

/// Inversion rows plus the reference-scaling row where one exists.
fn bound_rows(cfg: &ExperimentConfig) -> CliResult<(Vec<BoundResult>, Vec<String>)> {
    let setup = cfg.setup()?;
    let prec = PrecisionSpec::new(cfg.epsilon)?;
    let rep = bounds::invert_bound(&setup, &prec)?;
    let mut rows = rep.rows();
    let bd = BDReference::default();
    match cfg.effect {
        EffectKind::AbClosed => {}
        EffectKind::Tkachuk => rows.push(bounds::tkachuk_comparison_row(
            cfg.dipole(),
            cfg.l_cm.expect("validated"),
            &bd,
        )?),
        EffectKind::PmQ => rows.push(bounds::compare_pm_q(
            setup.solenoid(),
            &setup.path()?,
            cfg.j_ratio(),
            &bd,
        )?),
    }
    Ok((rows, rep.notes))
}

fn bound_cmd<O: Write, E: Write>(a: BoundArgs, out: &mut O, err: &mut E) -> CliResult<()> {
    let cfg = load_config(&a.config)?;
    if cfg.m_gamma_per_cm.is_some() {
        writeln!(err, "note: m_gamma_per_cm is not used by `bound`")?;
    }
    let (rows, notes) = bound_rows(&cfg)?;
    for n in &notes {
        writeln!(err, "note: {n}")?;
    }
    writeln!(out, "{}", bounds::CSV_HEADER)?;
    for r in &rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.effect,
            g6(r.epsilon),
            g6(r.inverse_range),
            g6(r.mass.value()),
            g6(r.ratio_vs_bd),
            r.method,
            g6(r.neglected_log_correction)
        )?;
    }
    if let Some(path) = &a.csv {
        let mut buf = Vec::new();
        bounds::write_csv(&rows, &mut buf)?;
        write_file(path, &buf)?;
    }
    if let Some(path) = &a.json {
        let bd = BDReference::default();
        let rep = Report::new(
            json!({ "config": cfg }),
            json!({ "rows": rows }),
            json!({
                "notes": notes,
                "reference": {
                    "phi0_ab_rad": bd.phi0_ab(),
                    "interior_field_gauss": bd.interior_field(),
                    "inv_range_cm": bd.inv_range_bd,
                },
            }),
        );
        write_file(path, rep.to_json().as_bytes())?;
    }
    Ok(())
}

fn deflect_cmd<O: Write>(a: DeflectArgs, out: &mut O) -> CliResult<()> {
    let s = SolenoidSpec::new(a.a, a.j)?;
    let m = InverseRange::new(a.m)?;
    let path = PathSpec::open_segment(a.x, a.y)?;
    let probe = ProbeSpec::electron_beam(a.kev)?;
    let r = deflection::deflect(&probe, &s, &path, m, a.distance, a.slit)?;
    writeln!(out, "delta_p_perp = {}", g6(r.delta_p_perp))?;
    writeln!(out, "alpha_rad = {}", g6(r.alpha))?;
    writeln!(out, "delta_s_perp_cm = {}", g6(r.delta_s_perp))?;
    writeln!(out, "fringe_spacing_cm = {}", g6(r.fringe_spacing))?;
    writeln!(out, "equivalent_phase_rad = {}", g6(r.equivalent_phase))?;
    writeln!(out, "heisenberg_product = {}", g6(r.heisenberg_product))?;
    writeln!(out, "heisenberg_ok = {}", r.heisenberg_ok)?;
    if let Some(p) = &a.json {
        let rep = Report::new(
            json!({
                "a_cm": a.a, "j_gauss": a.j, "m_gamma_per_cm": a.m, "x_cm": a.x, "y_cm": a.y,
                "beam_kev": a.kev, "detector_distance_cm": a.distance, "slit_separation_cm": a.slit,
            }),
            serde_json::to_value(r).expect("serializable"),
            json!({ "momentum": probe.momentum, "wavelength_cm": probe.wavelength }),
        );
        write_file(p, rep.to_json().as_bytes())?;
    }
    Ok(())
}

fn sweep_cmd<O: Write>(a: SweepArgs, out: &mut O) -> CliResult<()> {
    let cfg = load_config(&a.config)?;
    let sweep = cfg
        .sweep
        .clone()
        .ok_or_else(|| CliError::Usage("config has no sweep_* keys".into()))?;
    let values = sweep.values();
    let rows: Vec<CliResult<BoundResult>> = values
        .par_iter()
        .map(|&v| {
            let point = cfg.with_param(&sweep.param, v)?;
            let setup = point.setup()?;
            let rep = bounds::invert_bound(&setup, &PrecisionSpec::new(point.epsilon)?)?;
            Ok(rep.primary().clone())
        })
        .collect();
    let mut buf = Vec::new();
    writeln!(buf, "{},{}", sweep.param, bounds::CSV_HEADER)?;
    for (v, row) in values.iter().zip(rows) {
        let row = row.map_err(|e| match e {
            CliError::Domain(inner) => CliError::Domain(Error::InvalidInput(format!(
                "sweep point {} = {v}: {inner}",
                sweep.param
            ))),
            other => other,
        })?;
        writeln!(buf, "{v:e},{}", row.csv_row())?;
    }
    write_file(&a.out, &buf)?;
    writeln!(out, "rows = {}", values.len())?;
    writeln!(out, "param = {}", sweep.param)?;
    writeln!(out, "out = {}", a.out.display())?;
    Ok(())
}

fn refs<O: Write>(out: &mut O) -> CliResult<()> {
    writeln!(out, "label,m_gamma_inv_cm,m_ph_g,source")?;
    for r in units::reference_bounds() {
        writeln!(out, "{},{},{},\"{}\"", r.label, g6(r.range_cm()), g6(r.mass.value()), r.source)?;
    }
    Ok(())
}
