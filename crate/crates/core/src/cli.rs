//! Scenario runner behind the `diracosc` binary.
//!
//! ```text
//! diracosc <scenario> [flags] [--config <file>] [--out <dir>]
//! ```
//!
//! Every run writes `series.csv` and `summary.json` into the output directory.
//! A config file holds flat `key = value` lines (`#` starts a comment) whose
//! keys are the long flag names; flags given on the command line win over the
//! file, and the file wins over the built-in defaults.
//!
//! Exit codes: 0 success, 2 configuration error, 3 tolerance failure (outputs
//! are still written), 4 I/O failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{CommandFactory, Parser, ValueEnum};
use nalgebra::Matrix2;
use serde::Serialize;

use crate::analytic::{self, RamseyParams};
use crate::dynamics::{
    dense_ajc_propagator, observable_series, ramsey_run, HamiltonianKind, ObservableRecord,
    RamseyInput, SpectralPropagator, TimeGrid,
};
use crate::fockspace::{BasisLabel, Spin, C64};
use crate::interferometer::{mz_factorize, perturbative_u};
use crate::linalg::spectral_norm2;
use crate::model::{block_for, exact_spectrum, level_energy, ModelParams};

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;
pub const EXIT_IO: i32 = 4;

const SPECTRUM_TOL: f64 = 1e-12;
const DYNAMICS_TOL: f64 = 1e-10;
const MZ_TOL: f64 = 1e-12;
const SLOPE_TOL: f64 = 0.2;
const SERIES_XI_N: (f64, f64) = (1e-4, 1e-2);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    Spectrum,
    Zitterbewegung,
    Ramsey,
    Orbit,
    MzCheck,
    SeriesConvergence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HamiltonianArg {
    Exact,
    Effective,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "diracosc", version, about = "2+1 Dirac oscillator scenario runner", args_override_self = true)]
pub struct Cli {
    #[arg(value_enum)]
    pub scenario: Scenario,
    /// Relativistic parameter ħω/mc².
    #[arg(long, default_value_t = 0.1)]
    pub xi: f64,
    /// Left-chiral quantum number of the initial subspace.
    #[arg(long, default_value_t = 2)]
    pub n_l: usize,
    /// Highest n_l for spectrum and mz-check.
    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
    /// |z| of the coherent state.
    #[arg(long, default_value_t = 1.0)]
    pub z_mag: f64,
    /// arg z (radians).
    #[arg(long, default_value_t = 0.0)]
    pub z_phase: f64,
    /// |α|²; |β|² = 1 − |α|².
    #[arg(long, default_value_t = 0.5)]
    pub alpha_sq: f64,
    #[arg(long, default_value_t = 0.0)]
    pub alpha_phase: f64,
    #[arg(long, default_value_t = 0.0)]
    pub beta_phase: f64,
    #[arg(long, default_value_t = 0.0)]
    pub t0: f64,
    #[arg(long, default_value_t = 50.0)]
    pub t1: f64,
    /// Time points (series-convergence: ξn_l points).
    #[arg(long, default_value_t = 1001)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub cutoff_r: usize,
    #[arg(long, default_value_t = 64)]
    pub cutoff_l: usize,
    /// [default: exact for zitterbewegung, effective for ramsey and orbit]
    #[arg(long, value_enum)]
    pub hamiltonian: Option<HamiltonianArg>,
    /// Truncation order of the perturbative series.
    #[arg(long, default_value_t = 1)]
    pub order: u32,
    /// Flat `key = value` file with defaults for any flag.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

/// Fully resolved configuration, echoed into `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub xi: f64,
    pub n_l: usize,
    pub n_max: usize,
    pub z_mag: f64,
    pub z_phase: f64,
    pub alpha_sq: f64,
    pub alpha_phase: f64,
    pub beta_phase: f64,
    pub t0: f64,
    pub t1: f64,
    pub samples: usize,
    pub cutoff_r: usize,
    pub cutoff_l: usize,
    pub hamiltonian: HamiltonianKind,
    pub order: u32,
}

impl ScenarioConfig {
    pub fn z(&self) -> C64 {
        C64::from_polar(self.z_mag, self.z_phase)
    }

    pub fn alpha(&self) -> C64 {
        C64::from_polar(self.alpha_sq.sqrt(), self.alpha_phase)
    }

    pub fn beta(&self) -> C64 {
        C64::from_polar((1.0 - self.alpha_sq).max(0.0).sqrt(), self.beta_phase)
    }

    fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if !self.xi.is_finite() || self.xi < 0.0 {
            return bad(format!("--xi must be a non-negative number, got {}", self.xi));
        }
        if !(0.0..=1.0).contains(&self.alpha_sq) {
            return bad(format!("--alpha-sq must lie in [0, 1] so that |α|² + |β|² = 1, got {}", self.alpha_sq));
        }
        if !self.z_mag.is_finite() || self.z_mag < 0.0 {
            return bad(format!("--z-mag must be non-negative, got {}", self.z_mag));
        }
        if self.samples < 2 {
            return bad(format!("--samples must be at least 2, got {}", self.samples));
        }
        if !(self.t1 > self.t0) {
            return bad(format!("--t1 ({}) must exceed --t0 ({})", self.t1, self.t0));
        }
        match self.scenario {
            Scenario::Spectrum if self.n_max > self.cutoff_l => {
                bad(format!("--n-max {} exceeds --cutoff-l {}", self.n_max, self.cutoff_l))
            }
            Scenario::MzCheck if self.n_max == 0 => bad("--n-max must be at least 1 for mz-check".into()),
            Scenario::Zitterbewegung | Scenario::SeriesConvergence if self.n_l == 0 => {
                bad("--n-l must be at least 1 (n_l = 0 is the uncoupled singlet)".into())
            }
            Scenario::Zitterbewegung if self.n_l > self.cutoff_l => {
                bad(format!("--n-l {} exceeds --cutoff-l {}", self.n_l, self.cutoff_l))
            }
            Scenario::SeriesConvergence if self.order > 3 => {
                bad(format!("--order must be at most 3 for series-convergence, got {}", self.order))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

/// Reads a flat `key = value` file into `--key value` argument pairs.
fn config_file_args(path: &Path) -> Result<Vec<OsString>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read config file {}: {e}", path.display())))?;
    let cmd = Cli::command();
    let known: Vec<&str> = cmd.get_arguments().filter_map(|a| a.get_long()).collect();
    let mut args = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!("{}:{}: expected `key = value`", path.display(), lineno + 1))
        })?;
        let key = key.trim().replace('_', "-");
        let value = value.trim().trim_matches('"');
        if key == "config" || !known.contains(&key.as_str()) {
            return Err(CliError::Config(format!(
                "{}:{}: unknown key `{key}`",
                path.display(),
                lineno + 1
            )));
        }
        args.push(OsString::from(format!("--{key}")));
        args.push(OsString::from(value));
    }
    Ok(args)
}

fn try_parse(args: &[OsString]) -> Result<Cli, i32> {
    Cli::try_parse_from(args).map_err(|e| {
        let _ = e.print();
        e.exit_code()
    })
}

/// Parses flags and the optional config file (flags > file > defaults).
pub fn parse_config(args: &[OsString]) -> Result<(ScenarioConfig, PathBuf), CliError> {
    let first = Cli::try_parse_from(args).map_err(|e| CliError::Config(e.to_string()))?;
    let cli = match &first.config {
        Some(path) => {
            let mut merged = vec![args.first().cloned().unwrap_or_else(|| "diracosc".into())];
            merged.extend(config_file_args(path)?);
            merged.extend(args.iter().skip(1).cloned());
            Cli::try_parse_from(&merged).map_err(|e| CliError::Config(e.to_string()))?
        }
        None => first,
    };
    Ok((resolve(&cli)?, cli.out))
}

fn resolve(cli: &Cli) -> Result<ScenarioConfig, CliError> {
    let hamiltonian = match (cli.hamiltonian, cli.scenario) {
        (Some(HamiltonianArg::Exact), _) => HamiltonianKind::Exact,
        (Some(HamiltonianArg::Effective), _) => HamiltonianKind::Effective,
        (None, Scenario::Ramsey | Scenario::Orbit) => HamiltonianKind::Effective,
        (None, _) => HamiltonianKind::Exact,
    };
    let config = ScenarioConfig {
        scenario: cli.scenario,
        xi: cli.xi,
        n_l: cli.n_l,
        n_max: cli.n_max,
        z_mag: cli.z_mag,
        z_phase: cli.z_phase,
        alpha_sq: cli.alpha_sq,
        alpha_phase: cli.alpha_phase,
        beta_phase: cli.beta_phase,
        t0: cli.t0,
        t1: cli.t1,
        samples: cli.samples,
        cutoff_r: cli.cutoff_r,
        cutoff_l: cli.cutoff_l,
        hamiltonian,
        order: cli.order,
    };
    config.validate()?;
    Ok(config)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub gap: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: &str, gap: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            gap,
            tolerance,
            pass: gap <= tolerance,
        }
    }
}

/// Constants of the `n_l` subspace.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Derived {
    pub eta: f64,
    pub theta: f64,
    pub energy: f64,
    pub omega0: f64,
    pub omega1: f64,
    pub visibility: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub config: ScenarioConfig,
    pub derived: Option<Derived>,
    pub checks: Vec<Check>,
    pub extra: serde_json::Value,
    pub pass: bool,
    pub wall_time_s: f64,
}

/// CSV body with a header row; floats in 17-significant-digit notation.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Cell {
    Int(usize),
    Real(f64),
}

impl Table {
    fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn observables(records: &[ObservableRecord]) -> Self {
        let mut table = Self::new(vec!["t", "Lz", "Sz", "Jz", "Sx", "x", "y", "norm"]);
        for r in records {
            table.push(
                [r.t, r.lz, r.sz, r.jz, r.sx, r.x, r.y, r.norm]
                    .into_iter()
                    .map(Cell::Real)
                    .collect(),
            );
        }
        table
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                match cell {
                    Cell::Int(v) => write!(out, "{v}"),
                    Cell::Real(v) => write!(out, "{v:.16e}"),
                }
                .expect("writing to a String cannot fail");
            }
            out.push('\n');
        }
        out
    }
}

/// Result of a scenario before it is written to disk.
pub struct Outcome {
    pub table: Table,
    pub checks: Vec<Check>,
    pub extra: serde_json::Value,
}

fn derived(config: &ScenarioConfig) -> Option<Derived> {
    let block = block_for(config.xi, config.n_l).ok()?;
    Some(Derived {
        eta: block.eta,
        theta: 0.5 * block.eta.atan(),
        energy: block.energy(),
        omega0: 1.0,
        omega1: 1.0 + 2.0 * config.xi,
        visibility: analytic::zb_visibility_first_order(config.xi, config.n_l),
    })
}

fn max_gap(pairs: impl Iterator<Item = (f64, f64)>) -> f64 {
    pairs.map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

fn spectrum(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    let params = ModelParams::new(config.xi, config.cutoff_r, config.cutoff_l)?;
    let lines = exact_spectrum(&params, config.n_max)?;
    let mut table = Table::new(vec!["n_l", "E_analytic", "E_numeric_pos", "E_numeric_neg", "rel_gap"]);
    for l in &lines {
        table.push(vec![
            Cell::Int(l.n_l),
            Cell::Real(l.analytic),
            Cell::Real(l.numeric_pos),
            Cell::Real(l.numeric_neg),
            Cell::Real(l.rel_gap),
        ]);
    }
    let gap = lines.iter().map(|l| l.rel_gap).fold(0.0, f64::max);
    Ok(Outcome {
        table,
        checks: vec![Check::new("spectrum_rel_gap", gap, SPECTRUM_TOL)],
        extra: serde_json::Value::Null,
    })
}

fn zitterbewegung(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    let params = ModelParams::new(config.xi, config.cutoff_r, config.cutoff_l)?;
    let grid = TimeGrid::new(config.t0, config.t1, config.samples)?;
    let psi0 = params.space().basis_state(BasisLabel::new(0, config.n_l - 1, Spin::Down))?;
    let records = match config.hamiltonian {
        HamiltonianKind::Exact => observable_series(&psi0, &dense_ajc_propagator(&params)?, &grid)?,
        HamiltonianKind::Effective => {
            let h = crate::model::effective_nr_hamiltonian(&params);
            observable_series(&psi0, &SpectralPropagator::new(&h)?, &grid)?
        }
    };
    let mut checks = Vec::new();
    match config.hamiltonian {
        HamiltonianKind::Exact => {
            let reference: Vec<_> = records
                .iter()
                .map(|r| analytic::zb_exact(config.xi, config.n_l, r.t))
                .collect::<crate::Result<_>>()?;
            let pairs = || records.iter().zip(&reference);
            checks.push(Check::new("sz_vs_closed_form", max_gap(pairs().map(|(r, a)| (r.sz, a.sz))), DYNAMICS_TOL));
            checks.push(Check::new("lz_vs_closed_form", max_gap(pairs().map(|(r, a)| (r.lz, a.lz))), DYNAMICS_TOL));
        }
        HamiltonianKind::Effective => {
            let statics = analytic::mixed_state_statics(config.n_l, C64::ZERO, C64::ONE)?;
            checks.push(Check::new("sz_static", max_gap(records.iter().map(|r| (r.sz, statics.sz))), DYNAMICS_TOL));
            checks.push(Check::new("lz_static", max_gap(records.iter().map(|r| (r.lz, statics.lz))), DYNAMICS_TOL));
        }
    }
    let jz = 0.5 - config.n_l as f64;
    checks.push(Check::new("jz_conservation", max_gap(records.iter().map(|r| (r.jz, jz))), DYNAMICS_TOL));
    Ok(Outcome {
        table: Table::observables(&records),
        checks,
        extra: serde_json::Value::Null,
    })
}

fn coherent_run(config: &ScenarioConfig) -> Result<(Vec<ObservableRecord>, Vec<Check>, serde_json::Value), CliError> {
    let params = ModelParams::new(config.xi, config.cutoff_r, config.cutoff_l)?;
    let grid = TimeGrid::new(config.t0, config.t1, config.samples)?;
    let input = RamseyInput {
        z: config.z(),
        alpha: config.alpha(),
        beta: config.beta(),
    };
    let run = ramsey_run(&input, &params, &grid, config.hamiltonian)?;
    let mut checks = Vec::new();
    if let Some(fid) = run.min_reference_fidelity {
        checks.push(Check::new("reference_state_infidelity", 1.0 - fid, DYNAMICS_TOL));
    }
    let extra = serde_json::json!({ "min_reference_fidelity": run.min_reference_fidelity });
    Ok((run.records, checks, extra))
}

fn ramsey_params(config: &ScenarioConfig) -> Result<RamseyParams, CliError> {
    Ok(RamseyParams::new(config.z(), config.alpha(), config.beta(), config.xi)?)
}

fn ramsey(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    let (records, mut checks, extra) = coherent_run(config)?;
    if config.hamiltonian == HamiltonianKind::Effective {
        let rp = ramsey_params(config)?;
        let gap = max_gap(records.iter().map(|r| (r.sx, analytic::ramsey_sx(&rp, r.t))));
        checks.push(Check::new("sx_vs_closed_form", gap, DYNAMICS_TOL));
    }
    Ok(Outcome {
        table: Table::observables(&records),
        checks,
        extra,
    })
}

fn orbit(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    let (records, mut checks, extra) = coherent_run(config)?;
    if config.hamiltonian == HamiltonianKind::Effective {
        let rp = ramsey_params(config)?;
        let reference: Vec<(f64, f64)> = records.iter().map(|r| analytic::orbit(&rp, r.t)).collect();
        let pairs = || records.iter().zip(&reference);
        checks.push(Check::new("x_vs_closed_form", max_gap(pairs().map(|(r, a)| (r.x, a.0))), DYNAMICS_TOL));
        checks.push(Check::new("y_vs_closed_form", max_gap(pairs().map(|(r, a)| (r.y, a.1))), DYNAMICS_TOL));
    }
    Ok(Outcome {
        table: Table::observables(&records),
        checks,
        extra,
    })
}

/// `cos(Et) − i sin(Et) h/E`.
fn block_exponential(h: &Matrix2<C64>, energy: f64, t: f64) -> Matrix2<C64> {
    let (s, c) = (energy * t).sin_cos();
    Matrix2::identity() * C64::from(c) - h * C64::new(0.0, s / energy)
}

fn mz_check(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    let grid = TimeGrid::new(config.t0, config.t1, config.samples)?;
    let mut table = Table::new(vec!["n_l", "t", "theta", "phi", "gap"]);
    let mut worst = 0.0f64;
    for n in 1..=config.n_max {
        let f = mz_factorize(config.xi, n)?;
        let block = block_for(config.xi, n)?;
        for t in grid.points() {
            let gap = spectral_norm2(&(f.product(t) - block_exponential(&block.h, level_energy(config.xi, n), t)));
            worst = worst.max(gap);
            table.push(vec![Cell::Int(n), Cell::Real(t), Cell::Real(f.theta), Cell::Real(f.phi(t)), Cell::Real(gap)]);
        }
    }
    Ok(Outcome {
        table,
        checks: vec![Check::new("factorization_gap", worst, MZ_TOL)],
        extra: serde_json::Value::Null,
    })
}

/// Residual `‖U_pert − U_exact‖₂` at the quarter period `φ = π/2`, where
/// `|sin φ| = 1`.
pub fn series_residual(xi_n: f64, n_l: usize, order: u32) -> crate::Result<f64> {
    let xi = xi_n / n_l as f64;
    let t = std::f64::consts::FRAC_PI_2 / level_energy(xi, n_l);
    let exact = mz_factorize(xi, n_l)?.product(t);
    Ok(spectral_norm2(&(perturbative_u(xi, n_l, t, order)? - exact)))
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x.ln(), b + y.ln()));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = points.iter().fold((0.0, 0.0), |(num, den), &(x, y)| {
        let dx = x.ln() - mx;
        (num + dx * (y.ln() - my), den + dx * dx)
    });
    num / den
}

fn series_convergence(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    let (lo, hi) = SERIES_XI_N;
    let step = (hi / lo).ln() / (config.samples - 1) as f64;
    let points: Vec<(f64, f64)> = (0..config.samples)
        .map(|i| {
            let x = lo * (step * i as f64).exp();
            Ok((x, series_residual(x, config.n_l, config.order)?))
        })
        .collect::<crate::Result<_>>()?;
    let mut table = Table::new(vec!["xi_n", "gap"]);
    for &(x, g) in &points {
        table.push(vec![Cell::Real(x), Cell::Real(g)]);
    }
    let slope = log_log_slope(&points);
    let expected = 0.5 * (config.order + 1) as f64;
    Ok(Outcome {
        table,
        checks: vec![Check::new("slope_deviation", (slope - expected).abs(), SLOPE_TOL)],
        extra: serde_json::json!({ "slope": slope, "expected_slope": expected }),
    })
}

/// Runs one scenario without touching the file system.
pub fn execute(config: &ScenarioConfig) -> Result<Outcome, CliError> {
    match config.scenario {
        Scenario::Spectrum => spectrum(config),
        Scenario::Zitterbewegung => zitterbewegung(config),
        Scenario::Ramsey => ramsey(config),
        Scenario::Orbit => orbit(config),
        Scenario::MzCheck => mz_check(config),
        Scenario::SeriesConvergence => series_convergence(config),
    }
}

/// Runs a scenario and writes `series.csv` and `summary.json` into `out_dir`.
pub fn run(config: &ScenarioConfig, out_dir: &Path) -> Result<RunSummary, CliError> {
    let start = Instant::now();
    let outcome = execute(config)?;
    let pass = outcome.checks.iter().all(|c| c.pass);
    let summary = RunSummary {
        config: config.clone(),
        derived: derived(config),
        checks: outcome.checks,
        extra: outcome.extra,
        pass,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let io = |what: &str, e: std::io::Error| CliError::Io(format!("{what}: {e}"));
    fs::create_dir_all(out_dir).map_err(|e| io(&format!("cannot create {}", out_dir.display()), e))?;
    fs::write(out_dir.join("series.csv"), outcome.table.to_csv()).map_err(|e| io("cannot write series.csv", e))?;
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    fs::write(out_dir.join("summary.json"), json + "\n").map_err(|e| io("cannot write summary.json", e))?;
    Ok(summary)
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    // help, version and malformed flags are reported by clap itself
    if let Err(code) = try_parse(&args) {
        return code;
    }
    let (config, out) = match parse_config(&args) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    match run(&config, &out) {
        Ok(summary) => {
            for c in &summary.checks {
                let verdict = if c.pass { "ok" } else { "FAIL" };
                println!("{verdict:4} {:28} gap {:.3e} (tol {:.1e})", c.name, c.gap, c.tolerance);
            }
            if summary.pass {
                0
            } else {
                EXIT_TOLERANCE
            }
        }
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
