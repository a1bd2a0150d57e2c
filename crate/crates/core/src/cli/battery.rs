//! The lists of checks run by `check` and `suite`.

use std::fmt;

use crate::error::{Error, Result};
use crate::gallery::{
    karlin_to_linear, random_diagonal, random_ess_nonneg, random_kingman, random_signed, random_stochastic,
    sub_seed, KarlinFamily, KingmanFamily, LinearFamily,
};
use crate::lab::{
    check_midpoint_convexity, check_monotone_reduction, derivative_agreement_check, derivative_bound_check,
    homogeneity_check, karlin_monotonicity_check, kingman_superconvexity_check, kirkland_check, lindqvist_check,
    linspace, strict_convexity_probe, sweep_karlin_in_alpha, sweep_spb_in_beta, sweep_spb_in_m, Branch,
    CheckOutcome, ConvexityReport, SweepResult,
};
use crate::matrix::{format_f64, SquareMatrix};
use crate::perron::{is_irreducible, max_real_part, spectral_bound, ORACLE_MAX_DIM};
use crate::semigroup::{
    growth_bound_estimate, growth_horizon, positivity_of_semigroup_check, spectral_gap, DEFAULT_T_GRID,
};
use crate::tolerances::{CONVEXITY_TOL, GROWTH_BOUND_TOL, ORACLE_AGREEMENT};

const GROWTH_SAMPLES: usize = 64;

/// One line of a check report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportLine {
    pub outcome: CheckOutcome,
    /// Advisory lines are reported but never fail a run.
    pub advisory: bool,
}

impl ReportLine {
    fn mandatory(outcome: CheckOutcome) -> Self {
        Self {
            outcome,
            advisory: false,
        }
    }

    pub fn fails_run(&self) -> bool {
        !self.advisory && !self.outcome.passed
    }

    pub(crate) fn with_seed(mut self, seed: u64) -> Self {
        self.outcome.witness.push(("seed".into(), seed as f64));
        self
    }
}

impl fmt::Display for ReportLine {
    /// `<check_name>,<pass|fail>,<margin>,<witness>`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = &self.outcome;
        write!(
            f,
            "{},{},{},{}",
            o.check,
            if o.passed { "pass" } else { "fail" },
            format_f64(o.margin),
            o.witness_string()
        )
    }
}

pub(crate) fn convexity_outcome(name: &str, report: &ConvexityReport, sweep: &SweepResult) -> CheckOutcome {
    let outcome = CheckOutcome::new(name, report.strictness_margin, CONVEXITY_TOL * report.scale)
        .witness(sweep.parameter.name(), sweep.grid[report.witness_index]);
    outcome.branch(if report.is_strict() { Branch::Strict } else { Branch::Equality })
}

/// Keeps the outcome with the smallest margin.
fn worst(outcomes: impl IntoIterator<Item = CheckOutcome>) -> Option<CheckOutcome> {
    outcomes.into_iter().reduce(|a, b| if b.margin < a.margin { b } else { a })
}

fn interior(grid: &[f64]) -> &[f64] {
    &grid[1..grid.len() - 1]
}

/// Checks on `m·A + V` over an m-grid and a β-grid.
pub fn linear_checks(f: &LinearFamily, m_grid: &[f64], beta_grid: &[f64]) -> Result<Vec<ReportLine>> {
    let mut lines = Vec::new();
    let irreducible = is_irreducible(f.a());
    let spb_a = spectral_bound(f.a())?.spb;

    let m_sweep = sweep_spb_in_m(f, m_grid)?;
    let report = check_midpoint_convexity(&m_sweep)?;
    lines.push(ReportLine::mandatory(convexity_outcome("convexity_m", &report, &m_sweep)));
    lines.push(ReportLine::mandatory(check_monotone_reduction(&m_sweep, spb_a)));

    if irreducible {
        let bound = interior(m_grid)
            .iter()
            .map(|&m| derivative_bound_check(f, m))
            .collect::<Result<Vec<_>>>()?;
        lines.extend(worst(bound).map(ReportLine::mandatory));
        let agreement = interior(m_grid)
            .iter()
            .map(|&m| derivative_agreement_check(f, m))
            .collect::<Result<Vec<_>>>()?;
        lines.extend(worst(agreement).map(ReportLine::mandatory));
    }

    let beta_sweep = sweep_spb_in_beta(f, beta_grid)?;
    let report = check_midpoint_convexity(&beta_sweep)?;
    lines.push(ReportLine::mandatory(convexity_outcome("convexity_beta", &report, &beta_sweep)));
    if irreducible {
        let probe = strict_convexity_probe(f, beta_grid)?;
        let outcome = CheckOutcome::new(
            "strict_convexity_probe",
            probe.report.strictness_margin,
            CONVEXITY_TOL * probe.report.scale,
        )
        .witness("scalar_v", if probe.scalar_v { 1.0 } else { 0.0 })
        .witness("strict", if probe.strict { 1.0 } else { 0.0 });
        let mut outcome = outcome.detail("advisory: strict iff V is not scalar");
        outcome.passed = probe.matches_conjecture();
        lines.push(ReportLine {
            outcome,
            advisory: true,
        });
    }

    let m_mid = m_grid[m_grid.len() / 2];
    lines.push(ReportLine::mandatory(homogeneity_check(f, m_mid, 1.0, &[0.5, 2.0, 10.0])?));

    if irreducible {
        lines.push(ReportLine::mandatory(lindqvist_check(f.a(), f.v())?));
        lines.push(ReportLine::mandatory(kirkland_check(f.a())?));
    }

    let generator = f.at_m(m_mid);
    lines.push(ReportLine::mandatory(
        positivity_of_semigroup_check(&generator, &DEFAULT_T_GRID).witness("m", m_mid),
    ));
    if irreducible && generator.n() <= ORACLE_MAX_DIM {
        lines.push(ReportLine::mandatory(growth_bound_check(&generator)?.witness("m", m_mid)));
    }
    Ok(lines)
}

/// `|ω − spb| ≤ 1e−3·max(1, |spb|)`, with the horizon set from the spectral
/// gap.
pub fn growth_bound_check(m: &SquareMatrix) -> Result<CheckOutcome> {
    let spb = spectral_bound(m)?.spb;
    let t_max = growth_horizon(spectral_gap(m)?);
    let estimate = growth_bound_estimate(m, t_max, GROWTH_SAMPLES)?;
    let tol = GROWTH_BOUND_TOL * spb.abs().max(1.0);
    Ok(CheckOutcome::new("growth_bound", -(estimate.omega - spb).abs(), tol)
        .witness("omega", estimate.omega)
        .witness("spb", spb)
        .witness("t_max", t_max))
}

pub fn karlin_checks(f: &KarlinFamily, alpha_grid: &[f64]) -> Result<Vec<ReportLine>> {
    let mut lines = Vec::new();
    let sweep = sweep_karlin_in_alpha(f, alpha_grid)?;
    let report = check_midpoint_convexity(&sweep)?;
    lines.push(ReportLine::mandatory(convexity_outcome("convexity_alpha", &report, &sweep)));
    if is_irreducible(f.p()) {
        lines.push(ReportLine::mandatory(karlin_monotonicity_check(f, alpha_grid)?));
        let linear = karlin_to_linear(f);
        lines.push(ReportLine::mandatory(kirkland_check(linear.a())?));
    }
    Ok(lines)
}

pub fn kingman_checks(f: &KingmanFamily, theta_grid: &[f64]) -> Result<Vec<ReportLine>> {
    let report = kingman_superconvexity_check(f, theta_grid)?;
    let sweep = crate::lab::sweep_kingman_log_rho(f, theta_grid)?;
    Ok(vec![ReportLine::mandatory(convexity_outcome("kingman_superconvexity", &report, &sweep))])
}

pub fn oracle_agreement_check(m: &SquareMatrix) -> Result<CheckOutcome> {
    let spb = spectral_bound(m)?.spb;
    let oracle = max_real_part(m)?;
    Ok(CheckOutcome::new("oracle_agreement", -(spb - oracle).abs(), ORACLE_AGREEMENT)
        .witness("spb", spb)
        .witness("oracle", oracle))
}

/// The randomized battery for one seed, with dimension `2 + seed mod 5`.
pub fn suite_checks(seed: u64) -> Result<Vec<ReportLine>> {
    let n = 2 + (seed % 5) as usize;
    let stream = |k: u64| sub_seed(seed, k);
    let a = random_ess_nonneg(n, stream(0));
    let v = random_diagonal(n, -1.0, 1.0, stream(1));
    let f = LinearFamily::new(a.clone(), v).map_err(|e| e.at("seed", seed as f64))?;

    let mut lines = vec![ReportLine::mandatory(oracle_agreement_check(&a)?)];
    lines.extend(linear_checks(&f, &linspace(0.1, 5.0, 21), &linspace(-3.0, 3.0, 21))?);

    let d = random_diagonal(n, -2.0, 2.0, stream(2));
    let mut lindqvist = lindqvist_check(&a, &d)?;
    lindqvist.check = "lindqvist_random_d".into();
    lines.push(ReportLine::mandatory(lindqvist));

    let p = random_stochastic(n, stream(3));
    let growth = random_diagonal(n, 0.5, 2.0, stream(4)).diagonal();
    let karlin = KarlinFamily::with_growth(p.clone(), &growth)?;
    lines.extend(karlin_checks(&karlin, &linspace(0.0, 1.0, 11))?);
    let scalar = KarlinFamily::with_growth(p, &vec![growth[0]; n])?;
    let mut constant = karlin_monotonicity_check(&scalar, &linspace(0.0, 1.0, 11))?;
    constant.check = "karlin_constant".into();
    lines.push(ReportLine::mandatory(constant));

    lines.extend(kingman_checks(&random_kingman(n, stream(5)), &linspace(-2.0, 2.0, 21))?);

    let signed = random_signed(n, stream(6));
    let mut positivity = positivity_of_semigroup_check(&signed, &DEFAULT_T_GRID);
    positivity.check = "semigroup_positivity_signed".into();
    lines.push(ReportLine::mandatory(positivity));

    Ok(lines.into_iter().map(|l| l.with_seed(seed)).collect())
}

/// Errors that mean the input was invalid rather than that a computation
/// broke down.
pub(crate) fn is_input_error(e: &Error) -> bool {
    matches!(
        e.root(),
        Error::InvalidMatrix(_)
            | Error::DimensionMismatch { .. }
            | Error::NotEssentiallyNonnegative { .. }
            | Error::InvalidAlpha(_)
            | Error::NonPositiveDiffusion { .. }
            | Error::NegativeKernel { .. }
            | Error::NonUniformGrid
            | Error::InvalidGrid(_)
            | Error::InvalidFamily(_)
            | Error::DimensionTooLarge { .. }
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_line_format() {
        let line = ReportLine::mandatory(
            CheckOutcome::new("convexity_m", 0.5, 1e-9).witness("m", 1.5),
        )
        .with_seed(3);
        assert_eq!(line.to_string(), "convexity_m,pass,5.0000000000000000e-1,m=1.5;seed=3");
    }

    #[test]
    fn suite_seed_passes() {
        for seed in 0..3 {
            let lines = suite_checks(seed).unwrap();
            for l in &lines {
                assert!(!l.fails_run(), "{l} ({})", l.outcome.detail);
            }
            assert!(lines.iter().any(|l| l.outcome.check == "growth_bound"));
        }
    }

    #[test]
    fn linear_checks_on_reducible_family_skip_vector_checks() {
        let f = LinearFamily::with_growth(SquareMatrix::zeros(2), &[1.0, -1.0]).unwrap();
        let lines = linear_checks(&f, &linspace(0.1, 5.0, 5), &linspace(-1.0, 1.0, 5)).unwrap();
        assert!(lines.iter().all(|l| !l.fails_run()));
        assert!(!lines.iter().any(|l| l.outcome.check == "lindqvist"));
    }
}
