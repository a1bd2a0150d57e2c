//! The `reduction-lab` command-line tool.
//!
//! Exit codes: 0 success, 1 a mandatory check failed, 2 parse/IO or invalid
//! input, 3 numerical failure.

mod battery;
mod scenario;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;

pub use battery::{
    growth_bound_check, karlin_checks, kingman_checks, linear_checks, oracle_agreement_check, suite_checks,
    ReportLine,
};
pub use scenario::{
    parse_scenario, parse_scenario_str, Family, FamilyKind, FamilySpec, GridSpec, GrowthSpec, LossSpec, Scenario,
    ToleranceOverrides,
};

use crate::error::Error;
use crate::gallery::LinearFamily;
use crate::lab::{find_threshold, linspace, perron_derivative, sweep_karlin_in_alpha, sweep_kingman_rho, Parameter};
use crate::lab::{sweep_spb_in_beta, sweep_spb_in_m};
use crate::matrix::{format_f64, SquareMatrix};
use crate::perron::{is_irreducible, perron_vectors, spectral_bound};

pub const THREADS_ENV: &str = "REDUCTION_LAB_THREADS";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    /// `line` is 0 when the problem is a missing key.
    #[error("ParseError{}: {message}", if *line > 0 { format!(" (line {line})") } else { String::new() })]
    Parse { line: usize, message: String },
    #[error("InvariantViolation: {0}")]
    Invariant(String),
    #[error("IoError: {0}")]
    Io(String),
    #[error("{name}: {0}", name = .0.name())]
    Numerical(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Numerical(e) if !battery::is_input_error(e) => 3,
            _ => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "ParseError",
            CliError::Invariant(_) => "InvariantViolation",
            CliError::Io(_) => "IoError",
            CliError::Numerical(e) => e.name(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numerical(e)
    }
}

#[derive(Debug, Parser)]
#[command(name = "reduction-lab", version, about = "Spectral bounds of essentially nonnegative matrix families")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectral bound of a matrix file, with Perron vectors when irreducible.
    Spb { file: PathBuf },
    /// Sample the spectral bound over the scenario grid and write a CSV.
    Curve {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every check that applies to the scenario family.
    Check {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Mixing rate at which the spectral bound crosses zero.
    Threshold { scenario: PathBuf },
    /// Randomized battery over seeds 0..k.
    Suite {
        #[arg(long, default_value_t = 20)]
        seed_count: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Runs the tool on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Spb { file } => spb(&file, out),
        Command::Curve { scenario, out: path } => curve(&scenario, &path),
        Command::Check { scenario, out: path } => check(&scenario, &path, out),
        Command::Threshold { scenario } => threshold(&scenario, out),
        Command::Suite { seed_count, out: path } => suite(seed_count, &path, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn io(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format_f64(*x)).collect::<Vec<_>>().join(" ")
}

fn spb(file: &Path, out: &mut dyn Write) -> Result<u8, CliError> {
    let text = fs::read_to_string(file).map_err(io(file))?;
    let m = SquareMatrix::parse(&text).map_err(|e| CliError::Parse {
        line: 0,
        message: format!("{}: {e}", file.display()),
    })?;
    let data = spectral_bound(&m)?;
    let w = |e| CliError::Io(format!("stdout: {e}"));
    writeln!(out, "spb = {}", format_f64(data.spb)).map_err(w)?;
    match (&data.u, &data.v) {
        (Some(u), Some(v)) => {
            writeln!(out, "u = {}", join(u)).map_err(w)?;
            writeln!(out, "v = {}", join(v)).map_err(w)?;
        }
        _ => writeln!(out, "reducible: no Perron vectors").map_err(w)?,
    }
    Ok(0)
}

fn first_instance(s: &Scenario) -> Result<Family, CliError> {
    s.instantiate(s.seeds[0])
}

/// `param,spb[,analytic_derivative]` rows over the scenario grid.
pub fn curve_csv(s: &Scenario) -> Result<String, CliError> {
    let grid = s.grid.points();
    let family = first_instance(s)?;
    let (sweep, derivative) = match (&family, s.grid.param) {
        (Family::Linear(f), Parameter::M) => {
            let d = derivative_column(f, &grid, |f, m| perron_derivative(f, m))?;
            (sweep_spb_in_m(f, &grid)?, d)
        }
        (Family::Linear(f), Parameter::Beta) => {
            let d = derivative_column(f, &grid, beta_derivative)?;
            (sweep_spb_in_beta(f, &grid)?, d)
        }
        (Family::Karlin(f), _) => (sweep_karlin_in_alpha(f, &grid)?, None),
        (Family::Kingman(f), _) => (sweep_kingman_rho(f, &grid)?, None),
        (Family::Linear(_), p) => {
            return Err(CliError::Invariant(format!("grid parameter {p} does not apply to linear families")))
        }
    };
    let mut csv = String::from(if derivative.is_some() { "param,spb,analytic_derivative\n" } else { "param,spb\n" });
    for (k, (x, y)) in sweep.grid.iter().zip(&sweep.values).enumerate() {
        csv.push_str(&format_f64(*x));
        csv.push(',');
        csv.push_str(&format_f64(*y));
        if let Some(d) = &derivative {
            csv.push(',');
            csv.push_str(&format_f64(d[k]));
        }
        csv.push('\n');
    }
    Ok(csv)
}

fn derivative_column(
    f: &LinearFamily,
    grid: &[f64],
    eval: impl Fn(&LinearFamily, f64) -> crate::Result<f64> + Sync,
) -> Result<Option<Vec<f64>>, CliError> {
    if !is_irreducible(f.a()) {
        return Ok(None);
    }
    let values = grid.par_iter().map(|&x| eval(f, x)).collect::<crate::Result<Vec<_>>>()?;
    Ok(Some(values))
}

/// `uᵀ·V·v` at `A + β·V`.
fn beta_derivative(f: &LinearFamily, beta: f64) -> crate::Result<f64> {
    let (u, v) = perron_vectors(&f.at_beta(beta))?;
    let vv = f.v().mul_vec(&v);
    Ok(u.iter().zip(&vv).map(|(a, b)| a * b).sum())
}

fn curve(scenario: &Path, path: &Path) -> Result<u8, CliError> {
    let s = parse_scenario(scenario)?;
    fs::write(path, curve_csv(&s)?).map_err(io(path))?;
    Ok(0)
}

/// Every applicable check, once per seed when the scenario is randomized.
pub fn check_lines(s: &Scenario) -> Result<Vec<ReportLine>, CliError> {
    let seeds: &[u64] = if s.is_randomized() { &s.seeds } else { &s.seeds[..1] };
    let grid = s.grid.points();
    let mut lines = Vec::new();
    for &seed in seeds {
        let batch = match s.instantiate(seed)? {
            Family::Linear(f) => {
                let (m_grid, beta_grid) = match s.grid.param {
                    Parameter::Beta => (linspace(0.1, 5.0, 21), grid.clone()),
                    _ => (grid.clone(), linspace(-3.0, 3.0, 21)),
                };
                linear_checks(&f, &m_grid, &beta_grid)?
            }
            Family::Karlin(f) => karlin_checks(&f, &grid)?,
            Family::Kingman(f) => kingman_checks(&f, &grid)?,
        };
        for mut line in batch {
            if let Some(factor) = s.tolerances.factor_for(&line.outcome.check) {
                let o = &mut line.outcome;
                o.tolerance *= factor;
                o.passed = o.margin >= -o.tolerance;
            }
            lines.push(if s.is_randomized() { line.with_seed(seed) } else { line });
        }
    }
    Ok(lines)
}

fn render(lines: &[ReportLine]) -> String {
    lines.iter().map(|l| format!("{l}\n")).collect()
}

fn summarize(lines: &[ReportLine], out: &mut dyn Write) -> u8 {
    let failed: Vec<&ReportLine> = lines.iter().filter(|l| l.fails_run()).collect();
    let _ = writeln!(out, "{} checks, {} failed", lines.len(), failed.len());
    for l in &failed {
        let _ = writeln!(out, "FAIL {l} {}", l.outcome.detail);
    }
    u8::from(!failed.is_empty())
}

fn check(scenario: &Path, path: &Path, out: &mut dyn Write) -> Result<u8, CliError> {
    let s = parse_scenario(scenario)?;
    let lines = check_lines(&s)?;
    fs::write(path, render(&lines)).map_err(io(path))?;
    Ok(summarize(&lines, out))
}

fn threshold(scenario: &Path, out: &mut dyn Write) -> Result<u8, CliError> {
    let s = parse_scenario(scenario)?;
    let Family::Linear(f) = first_instance(&s)? else {
        return Err(CliError::Invariant(format!("threshold needs a linear family, got {}", s.kind.name())));
    };
    let (lo, hi) = s.threshold.unwrap_or((0.1, 10.0));
    match find_threshold(&f, lo, hi) {
        Ok(m) => {
            let _ = writeln!(out, "{}", format_f64(m));
            Ok(0)
        }
        Err(e) => {
            let _ = writeln!(out, "{}", e.name());
            Err(CliError::Numerical(e))
        }
    }
}

fn thread_cap() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Parse {
                line: 0,
                message: format!("{THREADS_ENV} must be a positive integer, got {v:?}"),
            }),
        },
    }
}

/// Report text for seeds `0..seed_count`, ordered by seed.
pub fn suite_report(seed_count: u64) -> Result<(String, Vec<ReportLine>), CliError> {
    let run = || {
        (0..seed_count)
            .into_par_iter()
            .map(suite_checks)
            .collect::<crate::Result<Vec<_>>>()
    };
    let batches = match thread_cap()? {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Io(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    let lines: Vec<ReportLine> = batches.into_iter().flatten().collect();
    Ok((render(&lines), lines))
}

fn suite(seed_count: u64, path: &Path, out: &mut dyn Write) -> Result<u8, CliError> {
    let (text, lines) = suite_report(seed_count)?;
    fs::write(path, text).map_err(io(path))?;
    Ok(summarize(&lines, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (u8, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(args.iter().copied(), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_str(&["reduction-lab"]).0, 2);
        assert_eq!(run_str(&["reduction-lab", "bogus"]).0, 2);
        assert_eq!(run_str(&["reduction-lab", "--help"]).0, 0);
        assert_eq!(run_str(&["reduction-lab", "spb", "/nonexistent/file"]).0, 2);
    }

    #[test]
    fn karlin_curve_values() {
        let s = parse_scenario_str(
            "family = karlin\nP = 0 1; 1 0\nD = diag: 2 0.5\n[grid]\nparam = alpha\nstart = 0\nstop = 1\ncount = 3\n",
            Path::new("."),
        )
        .unwrap();
        let csv = curve_csv(&s).unwrap();
        let rows: Vec<Vec<f64>> = csv
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
            .collect();
        assert!(csv.starts_with("param,spb\n"));
        for (row, want) in rows.iter().zip([2.0, 1.25, 1.0]) {
            assert!((row[1] - want).abs() < 1e-10, "{row:?}");
        }
    }

    #[test]
    fn linear_curve_has_derivative_column() {
        let s = parse_scenario_str(
            "family = linear\nA = -1 1; 1 -1\nV = diag: 1 -1\n[grid]\nstart = 0.5\nstop = 2\ncount = 4\n",
            Path::new("."),
        )
        .unwrap();
        let csv = curve_csv(&s).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("param,spb,analytic_derivative"));
        for line in lines {
            let r: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
            let m = r[0];
            assert!((r[1] - (-m + (m * m + 1.0).sqrt())).abs() < 1e-10);
            assert!((r[2] - (-1.0 + m / (m * m + 1.0).sqrt())).abs() < 1e-9);
        }
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn tolerance_override_can_flip_a_verdict() {
        let text = "family = linear\nA = -1 1; 1 -1\nV = diag: 1 -1\n[tolerances]\nhomogeneity = 1e-300\n";
        let s = parse_scenario_str(text, Path::new(".")).unwrap();
        let lines = check_lines(&s).unwrap();
        let h = lines.iter().find(|l| l.outcome.check == "homogeneity").unwrap();
        assert!(h.outcome.tolerance < 1e-290);
    }
}
