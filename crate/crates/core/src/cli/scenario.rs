//! Scenario files: flat `key = value` lines, `#` comments, `[section]`
//! headers.
//!
//! ```text
//! family = linear
//! A = -1 1; 1 -1
//! V = diag: 1 -1
//!
//! [grid]
//! param = m
//! start = 0.1
//! stop = 5
//! count = 21
//!
//! [threshold]
//! lo = 0.1
//! hi = 10
//! ```
//!
//! Matrices are given inline (rows separated by `;`), as a diagonal
//! (`diag: 1 -1`), or as `@path` to a file in the matrix text format, relative
//! to the scenario file. Growth terms may also be `random:<lo>,<hi>`, drawn
//! once per seed.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use crate::cli::CliError;
use crate::error::Error;
use crate::gallery::{
    balancing_loss, elliptic_1d, laplacian_1d, nonlocal_operator, random_diagonal, Boundary, Grid1D,
    KarlinFamily, KingmanFamily, LinearFamily, Profile,
};
use crate::lab::{linspace, Parameter};
use crate::matrix::SquareMatrix;
use crate::perron::is_essentially_nonnegative;
use crate::tolerances::{CONVEXITY_TOL, DERIVATIVE_SLACK, HOMOGENEITY_TOL, INEQUALITY_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Linear,
    Karlin,
    Kingman,
    Laplacian,
    Elliptic,
    Nonlocal,
}

impl FamilyKind {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "linear" => FamilyKind::Linear,
            "karlin" => FamilyKind::Karlin,
            "kingman" => FamilyKind::Kingman,
            "laplacian" => FamilyKind::Laplacian,
            "elliptic" => FamilyKind::Elliptic,
            "nonlocal" => FamilyKind::Nonlocal,
            _ => return None,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilyKind::Linear => "linear",
            FamilyKind::Karlin => "karlin",
            FamilyKind::Kingman => "kingman",
            FamilyKind::Laplacian => "laplacian",
            FamilyKind::Elliptic => "elliptic",
            FamilyKind::Nonlocal => "nonlocal",
        }
    }

    /// Families that reduce to `m·A + V`.
    pub fn is_linear(&self) -> bool {
        !matches!(self, FamilyKind::Karlin | FamilyKind::Kingman)
    }

    fn default_grid(&self) -> GridSpec {
        let (param, start, stop, count) = match self {
            FamilyKind::Karlin => (Parameter::Alpha, 0.0, 1.0, 11),
            FamilyKind::Kingman => (Parameter::Theta, -2.0, 2.0, 21),
            _ => (Parameter::M, 0.1, 5.0, 21),
        };
        GridSpec {
            param,
            start,
            stop,
            count,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub param: Parameter,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.count)
    }
}

/// Per-scenario tolerance overrides. Each replaces the default relative
/// tolerance of the matching checks.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ToleranceOverrides {
    pub convexity: Option<f64>,
    pub inequality: Option<f64>,
    pub derivative: Option<f64>,
    pub homogeneity: Option<f64>,
}

impl ToleranceOverrides {
    /// Factor by which a check's tolerance is multiplied, or `None` to keep it.
    pub fn factor_for(&self, check: &str) -> Option<f64> {
        let (value, default) = if check.starts_with("convexity") || check == "kingman_superconvexity" {
            (self.convexity, CONVEXITY_TOL)
        } else if check.starts_with("derivative") {
            (self.derivative, DERIVATIVE_SLACK)
        } else if check == "homogeneity" {
            (self.homogeneity, HOMOGENEITY_TOL)
        } else if matches!(check, "monotone_reduction" | "lindqvist" | "kirkland" | "karlin_monotonicity") {
            (self.inequality, INEQUALITY_TOL)
        } else {
            (None, 1.0)
        };
        value.map(|v| v / default)
    }
}

/// Growth term `V` of a linear family.
#[derive(Debug, Clone, PartialEq)]
pub enum GrowthSpec {
    Fixed(SquareMatrix),
    Profile(Profile),
    Random { lo: f64, hi: f64 },
}

impl GrowthSpec {
    fn is_random(&self) -> bool {
        matches!(self, GrowthSpec::Random { .. })
    }

    fn build(&self, n: usize, grid: Option<&Grid1D>, seed: u64) -> Result<SquareMatrix, CliError> {
        let m = match (self, grid) {
            (GrowthSpec::Fixed(m), _) => m.clone(),
            (GrowthSpec::Random { lo, hi }, _) => random_diagonal(n, *lo, *hi, seed),
            (GrowthSpec::Profile(p), Some(g)) => {
                SquareMatrix::from_diagonal(&p.sample_coefficient(g)).map_err(invariant_from)?
            }
            (GrowthSpec::Profile(_), None) => {
                return Err(CliError::Invariant("growth profile needs a [domain]".into()))
            }
        };
        if m.n() != n {
            return Err(CliError::Invariant(format!("dimension: V is {}x{}, expected {n}", m.n(), m.n())));
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LossSpec {
    Balance,
    Profile(Profile),
}

#[derive(Debug, Clone, PartialEq)]
pub enum FamilySpec {
    Linear { a: SquareMatrix, v: GrowthSpec },
    Karlin(KarlinFamily),
    Kingman(KingmanFamily),
    Laplacian { grid: Grid1D, v: GrowthSpec },
    Elliptic { grid: Grid1D, a: Profile, b: Profile, c: Profile, v: GrowthSpec },
    Nonlocal { grid: Grid1D, kernel: Profile, loss: LossSpec, v: GrowthSpec },
}

/// A concrete family for one seed.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Linear(LinearFamily),
    Karlin(KarlinFamily),
    Kingman(KingmanFamily),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub kind: FamilyKind,
    pub family: FamilySpec,
    pub grid: GridSpec,
    pub threshold: Option<(f64, f64)>,
    pub seeds: Vec<u64>,
    pub tolerances: ToleranceOverrides,
}

impl Scenario {
    /// True when the family draws random terms, so results depend on the seed.
    pub fn is_randomized(&self) -> bool {
        match &self.family {
            FamilySpec::Linear { v, .. }
            | FamilySpec::Laplacian { v, .. }
            | FamilySpec::Elliptic { v, .. }
            | FamilySpec::Nonlocal { v, .. } => v.is_random(),
            _ => false,
        }
    }

    pub fn instantiate(&self, seed: u64) -> Result<Family, CliError> {
        let linear = |a: SquareMatrix, grid: Option<&Grid1D>, v: &GrowthSpec| {
            let v = v.build(a.n(), grid, seed)?;
            LinearFamily::new(a, v).map(Family::Linear).map_err(invariant_from)
        };
        match &self.family {
            FamilySpec::Linear { a, v } => linear(a.clone(), None, v),
            FamilySpec::Karlin(f) => Ok(Family::Karlin(f.clone())),
            FamilySpec::Kingman(f) => Ok(Family::Kingman(f.clone())),
            FamilySpec::Laplacian { grid, v } => linear(laplacian_1d(grid), Some(grid), v),
            FamilySpec::Elliptic { grid, a, b, c, v } => {
                let op = elliptic_1d(
                    |x| a.coefficient(x, grid),
                    |x| b.coefficient(x, grid),
                    |x| c.coefficient(x, grid),
                    grid,
                )
                .map_err(invariant_from)?;
                linear(op, Some(grid), v)
            }
            FamilySpec::Nonlocal { grid, kernel, loss, v } => {
                let k = kernel.sample_kernel(grid);
                let b = match loss {
                    LossSpec::Balance => balancing_loss(&k, grid),
                    LossSpec::Profile(p) => p.sample_coefficient(grid),
                };
                let op = nonlocal_operator(&k, &b, grid).map_err(invariant_from)?;
                linear(op, Some(grid), v)
            }
        }
    }
}

fn invariant_from(e: Error) -> CliError {
    let name = match e.root() {
        Error::NotEssentiallyNonnegative { .. } => "essentially nonnegative",
        Error::NonPositiveDiffusion { .. } => "positive diffusion",
        Error::NegativeKernel { .. } => "nonnegative kernel",
        Error::DimensionMismatch { .. } => "dimension",
        Error::InvalidFamily(msg) if msg.contains("row-stochastic") => "row-stochastic",
        Error::InvalidFamily(msg) if msg.contains("essentially nonnegative") => "essentially nonnegative",
        Error::InvalidFamily(msg) if msg.contains("positive diagonal") => "positive diagonal",
        Error::InvalidFamily(msg) if msg.contains("diagonal") => "diagonal",
        Error::InvalidFamily(msg) if msg.contains("nonnegative") => "nonnegative",
        _ => return CliError::Invariant(e.to_string()),
    };
    CliError::Invariant(format!("{name}: {e}"))
}

struct Entry {
    line: usize,
    value: String,
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("", &["family", "seeds", "A", "V", "P", "D", "C", "G"]),
    ("domain", &["n", "length", "boundary"]),
    ("coefficients", &["a", "b", "c", "v", "kernel", "loss"]),
    ("grid", &["param", "start", "stop", "count", "spacing"]),
    ("threshold", &["lo", "hi"]),
    ("tolerances", &["convexity", "inequality", "derivative", "homogeneity"]),
];

struct Entries {
    map: HashMap<(String, String), Entry>,
    base: PathBuf,
}

fn parse_error(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

impl Entries {
    fn read(text: &str, base: PathBuf) -> Result<Self, CliError> {
        let mut map = HashMap::new();
        let mut section = String::new();
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| parse_error(line, "unterminated section header"))?
                    .trim();
                if !SECTIONS.iter().any(|(s, _)| *s == name) || name.is_empty() {
                    return Err(parse_error(line, format!("unknown section [{name}]")));
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| parse_error(line, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            let allowed = SECTIONS.iter().find(|(s, _)| *s == section).map(|(_, keys)| *keys).unwrap_or(&[]);
            if !allowed.contains(&key) {
                return Err(parse_error(line, format!("unknown key `{key}` in [{section}]")));
            }
            if value.is_empty() {
                return Err(parse_error(line, format!("empty value for `{key}`")));
            }
            let slot = (section.clone(), key.to_string());
            if let Some(prev) = map.get(&slot) {
                let prev: &Entry = prev;
                return Err(parse_error(line, format!("duplicate key `{key}` (first on line {})", prev.line)));
            }
            map.insert(slot, Entry { line, value: value.to_string() });
        }
        Ok(Self { map, base })
    }

    fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.map.get(&(section.to_string(), key.to_string()))
    }

    fn has_section(&self, section: &str) -> bool {
        self.map.keys().any(|(s, _)| s == section)
    }

    fn require(&self, section: &str, key: &str, family: FamilyKind) -> Result<&Entry, CliError> {
        self.get(section, key).ok_or_else(|| {
            parse_error(0, format!("{} family needs `{key}`", family.name()))
        })
    }

    fn real(&self, section: &str, key: &str) -> Result<Option<f64>, CliError> {
        self.get(section, key)
            .map(|e| {
                e.value
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| parse_error(e.line, format!("`{key}` must be a finite number")))
            })
            .transpose()
    }

    fn matrix(&self, e: &Entry) -> Result<SquareMatrix, CliError> {
        let bad = |msg: String| parse_error(e.line, msg);
        if let Some(path) = e.value.strip_prefix('@') {
            let path = self.base.join(path.trim());
            let text = fs::read_to_string(&path)
                .map_err(|err| CliError::Io(format!("{}: {err}", path.display())))?;
            return SquareMatrix::parse(&text).map_err(|err| bad(format!("{}: {err}", path.display())));
        }
        if let Some(diag) = e.value.strip_prefix("diag:") {
            let values = numbers(diag).ok_or_else(|| bad("bad diagonal".into()))?;
            return SquareMatrix::from_diagonal(&values).map_err(|err| bad(err.to_string()));
        }
        let rows = e
            .value
            .split(';')
            .map(numbers)
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| bad("bad matrix entry".into()))?;
        SquareMatrix::from_rows(&rows).map_err(|err| bad(err.to_string()))
    }

    fn growth(&self, e: &Entry, allow_profile: bool) -> Result<GrowthSpec, CliError> {
        if let Some(range) = e.value.strip_prefix("random:") {
            return match numbers(&range.replace(',', " ")).as_deref() {
                Some(&[lo, hi]) if lo <= hi => Ok(GrowthSpec::Random { lo, hi }),
                _ => Err(parse_error(e.line, "expected random:<lo>,<hi> with lo <= hi")),
            };
        }
        if allow_profile {
            return self.profile(e).map(GrowthSpec::Profile);
        }
        self.matrix(e).map(GrowthSpec::Fixed)
    }

    fn profile(&self, e: &Entry) -> Result<Profile, CliError> {
        e.value.parse::<Profile>().map_err(|err| parse_error(e.line, err.to_string()))
    }

    fn profile_or(&self, key: &str, default: Profile) -> Result<Profile, CliError> {
        self.get("coefficients", key).map_or(Ok(default), |e| self.profile(e))
    }

    fn domain(&self) -> Result<Grid1D, CliError> {
        let n = match self.get("domain", "n") {
            Some(e) => e
                .value
                .parse::<usize>()
                .map_err(|_| parse_error(e.line, "`n` must be a positive integer"))?,
            None => 50,
        };
        let length = self.real("domain", "length")?.unwrap_or(1.0);
        let boundary = match self.get("domain", "boundary") {
            Some(e) => e
                .value
                .parse::<Boundary>()
                .map_err(|err| parse_error(e.line, err.to_string()))?,
            None => Boundary::Neumann,
        };
        Grid1D::new(n, length, boundary).map_err(|err| {
            let line = self.get("domain", "n").map_or(0, |e| e.line);
            parse_error(line, err.to_string())
        })
    }
}

fn numbers(s: &str) -> Option<Vec<f64>> {
    let v: Vec<f64> = s
        .split_whitespace()
        .map(|t| t.parse::<f64>().ok().filter(|x| x.is_finite()))
        .collect::<Option<_>>()?;
    (!v.is_empty()).then_some(v)
}

pub fn parse_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_scenario_str(&text, &base)
}

/// Parses scenario text; `@file` references resolve against `base`.
pub fn parse_scenario_str(text: &str, base: &Path) -> Result<Scenario, CliError> {
    let entries = Entries::read(text, base.to_path_buf())?;
    let family_entry = entries
        .get("", "family")
        .ok_or_else(|| parse_error(0, "missing `family`"))?;
    let kind = FamilyKind::parse(&family_entry.value)
        .ok_or_else(|| parse_error(family_entry.line, format!("unknown family `{}`", family_entry.value)))?;

    let family = family_spec(&entries, kind)?;
    let grid = grid_spec(&entries, kind)?;
    let threshold = threshold_spec(&entries, kind)?;
    let seeds = match entries.get("", "seeds") {
        Some(e) => e
            .value
            .replace(',', " ")
            .split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .ok()
            .filter(|s| !s.is_empty())
            .ok_or_else(|| parse_error(e.line, "seeds must be nonnegative integers"))?,
        None => vec![0],
    };
    let mut tolerances = ToleranceOverrides::default();
    for (key, slot) in [
        ("convexity", &mut tolerances.convexity),
        ("inequality", &mut tolerances.inequality),
        ("derivative", &mut tolerances.derivative),
        ("homogeneity", &mut tolerances.homogeneity),
    ] {
        if let Some(v) = entries.real("tolerances", key)? {
            if !(v > 0.0) {
                let line = entries.get("tolerances", key).map_or(0, |e| e.line);
                return Err(parse_error(line, format!("tolerance `{key}` must be positive")));
            }
            *slot = Some(v);
        }
    }

    let scenario = Scenario {
        kind,
        family,
        grid,
        threshold,
        seeds,
        tolerances,
    };
    // Builds once so that invariant violations surface at parse time.
    scenario.instantiate(scenario.seeds[0])?;
    Ok(scenario)
}

fn family_spec(entries: &Entries, kind: FamilyKind) -> Result<FamilySpec, CliError> {
    let coefficient_growth = || match entries.get("coefficients", "v") {
        Some(e) => entries.growth(e, true),
        None => Ok(GrowthSpec::Profile(Profile::Constant(0.0))),
    };
    Ok(match kind {
        FamilyKind::Linear => {
            let a = entries.matrix(entries.require("", "A", kind)?)?;
            if !is_essentially_nonnegative(&a) {
                return Err(CliError::Invariant("essentially nonnegative: A has a negative off-diagonal entry".into()));
            }
            let v = match entries.get("", "V") {
                Some(e) => entries.growth(e, false)?,
                None => GrowthSpec::Fixed(SquareMatrix::zeros(a.n())),
            };
            if let GrowthSpec::Fixed(m) = &v {
                if !m.is_diagonal() {
                    return Err(CliError::Invariant("diagonal: V must be diagonal".into()));
                }
            }
            FamilySpec::Linear { a, v }
        }
        FamilyKind::Karlin => {
            let p = entries.matrix(entries.require("", "P", kind)?)?;
            let d = entries.matrix(entries.require("", "D", kind)?)?;
            if p.min_entry() < 0.0 {
                return Err(CliError::Invariant("nonnegative: P has a negative entry".into()));
            }
            if let Some((i, s)) = p.row_sums().iter().enumerate().find(|(_, s)| (*s - 1.0).abs() > 1e-12) {
                return Err(CliError::Invariant(format!("row-stochastic: row {i} of P sums to {s}")));
            }
            FamilySpec::Karlin(KarlinFamily::new(p, d).map_err(invariant_from)?)
        }
        FamilyKind::Kingman => {
            let c = entries.matrix(entries.require("", "C", kind)?)?;
            let g = entries.matrix(entries.require("", "G", kind)?)?;
            FamilySpec::Kingman(KingmanFamily::new(c, g).map_err(invariant_from)?)
        }
        FamilyKind::Laplacian => FamilySpec::Laplacian {
            grid: entries.domain()?,
            v: coefficient_growth()?,
        },
        FamilyKind::Elliptic => FamilySpec::Elliptic {
            grid: entries.domain()?,
            a: entries.profile_or("a", Profile::Constant(1.0))?,
            b: entries.profile_or("b", Profile::Constant(0.0))?,
            c: entries.profile_or("c", Profile::Constant(0.0))?,
            v: coefficient_growth()?,
        },
        FamilyKind::Nonlocal => FamilySpec::Nonlocal {
            grid: entries.domain()?,
            kernel: entries.profile_or("kernel", Profile::Gaussian(0.1))?,
            loss: match entries.get("coefficients", "loss") {
                None => LossSpec::Balance,
                Some(e) if e.value == "balance" => LossSpec::Balance,
                Some(e) => LossSpec::Profile(entries.profile(e)?),
            },
            v: coefficient_growth()?,
        },
    })
}

fn grid_spec(entries: &Entries, kind: FamilyKind) -> Result<GridSpec, CliError> {
    let mut grid = kind.default_grid();
    let line_of = |key: &str| entries.get("grid", key).map_or(0, |e| e.line);
    if let Some(e) = entries.get("grid", "param") {
        grid.param = match (e.value.as_str(), kind) {
            ("m", k) if k.is_linear() => Parameter::M,
            ("beta", k) if k.is_linear() => Parameter::Beta,
            ("alpha", FamilyKind::Karlin) => Parameter::Alpha,
            ("theta", FamilyKind::Kingman) => Parameter::Theta,
            (other, k) => {
                return Err(parse_error(e.line, format!("grid parameter `{other}` does not apply to {} families", k.name())))
            }
        };
        if grid.param == Parameter::Beta {
            (grid.start, grid.stop) = (-3.0, 3.0);
        }
    }
    if let Some(e) = entries.get("grid", "spacing") {
        if e.value != "linear" {
            return Err(parse_error(e.line, "only `spacing = linear` is supported"));
        }
    }
    if let Some(e) = entries.get("grid", "count") {
        let count = e
            .value
            .parse::<usize>()
            .map_err(|_| parse_error(e.line, "grid count must be an integer"))?;
        if count < 3 {
            return Err(parse_error(e.line, "grid count >= 3"));
        }
        grid.count = count;
    }
    grid.start = entries.real("grid", "start")?.unwrap_or(grid.start);
    grid.stop = entries.real("grid", "stop")?.unwrap_or(grid.stop);
    if !(grid.start < grid.stop) {
        return Err(parse_error(line_of("stop").max(line_of("start")), "grid start < stop"));
    }
    match grid.param {
        Parameter::M if grid.start <= 0.0 => return Err(parse_error(line_of("start"), "m grid start > 0")),
        Parameter::Alpha if grid.start < 0.0 || grid.stop > 1.0 => {
            return Err(parse_error(line_of("stop").max(line_of("start")), "alpha grid within [0, 1]"))
        }
        _ => {}
    }
    Ok(grid)
}

fn threshold_spec(entries: &Entries, kind: FamilyKind) -> Result<Option<(f64, f64)>, CliError> {
    if !entries.has_section("threshold") {
        return Ok(None);
    }
    let line = entries.get("threshold", "lo").or(entries.get("threshold", "hi")).map_or(0, |e| e.line);
    if !kind.is_linear() {
        return Err(parse_error(line, "threshold needs a linear family"));
    }
    match (entries.real("threshold", "lo")?, entries.real("threshold", "hi")?) {
        (Some(lo), Some(hi)) if 0.0 < lo && lo < hi => Ok(Some((lo, hi))),
        (Some(_), Some(_)) => Err(parse_error(line, "threshold bracket needs 0 < lo < hi")),
        _ => Err(parse_error(line, "threshold needs both `lo` and `hi`")),
    }
}
