//! Acceptance battery. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero if any fails.

use std::f64::consts::PI;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use reduction_lab::gallery::{
    kingman_family_eval, laplacian_1d, random_diagonal, random_ess_nonneg, random_kingman, random_signed,
    random_stochastic, sub_seed, Boundary, Grid1D, KarlinFamily, KingmanFamily, LinearFamily,
};
use reduction_lab::lab::{
    check_midpoint_convexity, check_monotone_reduction, derivative_agreement_check, derivative_bound_check,
    find_threshold, karlin_monotonicity_check, kingman_superconvexity_check, kirkland_check, lindqvist_check,
    linspace, sweep_karlin_in_alpha, sweep_spb_in_beta, sweep_spb_in_m, Branch,
};
use reduction_lab::perron::{max_real_part, spectral_bound};
use reduction_lab::semigroup::{
    growth_bound_estimate, growth_horizon, positivity_of_semigroup_check, spectral_gap, DEFAULT_T_GRID,
};
use reduction_lab::SquareMatrix;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn dim(seed: u64) -> usize {
    2 + (seed % 5) as usize
}

fn random_family(seed: u64) -> LinearFamily {
    let n = dim(seed);
    LinearFamily::new(
        random_ess_nonneg(n, sub_seed(seed, 0)),
        random_diagonal(n, -1.0, 1.0, sub_seed(seed, 1)),
    )
    .unwrap()
}

fn oracle_agreement() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for seed in 0..500 {
        let m = random_ess_nonneg(dim(seed), seed);
        let spb = spectral_bound(&m).map_err(|e| format!("seed {seed}: {e}"))?.spb;
        let oracle = max_real_part(&m).map_err(|e| format!("seed {seed}: {e}"))?;
        let err = (spb - oracle).abs();
        worst = worst.max(err);
        ensure(err <= 1e-8, || format!("seed {seed}: |{spb} - {oracle}| = {err:e}"))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(10), || format!("took {elapsed:?}"))?;
    Ok(format!("500 matrices, max error {worst:.1e}, {:.2}s", elapsed.as_secs_f64()))
}

fn convexity_in_beta() -> Outcome {
    let grid = linspace(-3.0, 3.0, 21);
    let mut margin = f64::INFINITY;
    for seed in 0..200 {
        let s = sweep_spb_in_beta(&random_family(seed), &grid).map_err(|e| format!("seed {seed}: {e}"))?;
        let r = check_midpoint_convexity(&s).unwrap();
        ensure(r.worst_violation >= -1e-9 * r.scale, || {
            format!("seed {seed}: violation {:e}", r.worst_violation)
        })?;
        margin = margin.min(r.strictness_margin / r.scale);
    }
    Ok(format!("200 families, min relative second difference {margin:.2e}"))
}

fn mixing_rate_properties() -> Outcome {
    let grid = linspace(0.1, 5.0, 21);
    let (mut bound_margin, mut agreement) = (f64::INFINITY, 0.0f64);
    for seed in 0..200 {
        let f = random_family(seed);
        let s = sweep_spb_in_m(&f, &grid).map_err(|e| format!("seed {seed}: {e}"))?;
        let r = check_midpoint_convexity(&s).unwrap();
        ensure(r.worst_violation >= -1e-9 * r.scale, || {
            format!("seed {seed}: convexity violation {:e}", r.worst_violation)
        })?;
        let spb_a = spectral_bound(f.a()).unwrap().spb;
        for &m in &grid[1..grid.len() - 1] {
            let b = derivative_bound_check(&f, m).map_err(|e| format!("seed {seed}: {e}"))?;
            ensure(b.margin >= -1e-6 * spb_a.abs().max(1.0), || {
                format!("seed {seed}, m = {m}: derivative exceeds spb(A) by {:e}", -b.margin)
            })?;
            bound_margin = bound_margin.min(b.margin);
            let a = derivative_agreement_check(&f, m).map_err(|e| format!("seed {seed}: {e}"))?;
            ensure(a.passed, || format!("seed {seed}, m = {m}: relative mismatch {:e}", -a.margin))?;
            agreement = agreement.max(-a.margin);
        }
    }
    Ok(format!(
        "200 families convex in m; min derivative-bound margin {bound_margin:.2e}; max derivative mismatch {agreement:.1e}"
    ))
}

fn closed_form_fixture() -> Outcome {
    let a = SquareMatrix::from_rows(&[[-1.0, 1.0], [1.0, -1.0]]).unwrap();
    let f = LinearFamily::with_growth(a.clone(), &[1.0, -1.0]).unwrap();
    let mut worst: f64 = 0.0;
    for m in [0.5, 1.0, 2.0] {
        let spb = spectral_bound(&f.at_m(m)).unwrap().spb;
        let err = (spb - (-m + (m * m + 1.0f64).sqrt())).abs();
        ensure(err <= 1e-10, || format!("m = {m}: error {err:e}"))?;
        worst = worst.max(err);
    }
    let g = LinearFamily::with_growth(a, &[1.0, -2.0]).unwrap();
    let root = find_threshold(&g, 0.1, 10.0).map_err(|e| e.to_string())?;
    ensure((root - 2.0).abs() <= 1e-8, || format!("threshold {root}"))?;
    Ok(format!("max curve error {worst:.1e}; threshold {root:.12}"))
}

fn karlin_reduction() -> Outcome {
    let swap = SquareMatrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
    let fixture = KarlinFamily::with_growth(swap, &[2.0, 0.5]).unwrap();
    let s = sweep_karlin_in_alpha(&fixture, &[0.0, 0.5, 1.0]).unwrap();
    for (got, want) in s.values.iter().zip([2.0, 1.25, 1.0]) {
        ensure((got - want).abs() <= 1e-10, || format!("fixture {got} vs {want}"))?;
    }
    let grid = linspace(0.0, 1.0, 11);
    let mut drift: f64 = 0.0;
    for seed in 0..100 {
        let n = dim(seed);
        let p = random_stochastic(n, sub_seed(seed, 3));
        let growth = random_diagonal(n, 0.5, 2.0, sub_seed(seed, 4)).diagonal();
        let f = KarlinFamily::with_growth(p.clone(), &growth).unwrap();
        ensure(!f.is_scalar_growth(), || format!("seed {seed}: scalar D"))?;
        let c = karlin_monotonicity_check(&f, &grid).map_err(|e| format!("seed {seed}: {e}"))?;
        let values = sweep_karlin_in_alpha(&f, &grid).unwrap().values;
        ensure(c.passed && values.windows(2).all(|w| w[1] < w[0]), || {
            format!("seed {seed}: not strictly decreasing ({:e})", c.margin)
        })?;

        let scalar = KarlinFamily::with_growth(p, &vec![growth[0]; n]).unwrap();
        let values = sweep_karlin_in_alpha(&scalar, &grid).unwrap().values;
        let d = values.iter().map(|v| (v - values[0]).abs()).fold(0.0, f64::max);
        ensure(d <= 1e-10, || format!("seed {seed}: D = cI drifts by {d:e}"))?;
        drift = drift.max(d);
    }
    Ok(format!("fixture exact; 100 strictly decreasing; D = cI max drift {drift:.1e}"))
}

fn discretized_operators() -> Outcome {
    let start = Instant::now();
    for n in [10, 100] {
        let lap = laplacian_1d(&Grid1D::new(n, 1.0, Boundary::Neumann).unwrap());
        let spb = spectral_bound(&lap).map_err(|e| e.to_string())?.spb;
        ensure(spb.abs() <= 1e-10, || format!("Neumann n = {n}: spb = {spb:e}"))?;
    }
    let grid = Grid1D::new(99, 1.0, Boundary::Dirichlet).unwrap();
    let h = grid.spacing();
    let spb = spectral_bound(&laplacian_1d(&grid)).map_err(|e| e.to_string())?.spb;
    let exact = -(4.0 / (h * h)) * (PI * h / 2.0).sin().powi(2);
    ensure((spb - exact).abs() <= 1e-6, || format!("Dirichlet {spb} vs {exact}"))?;

    let neumann = laplacian_1d(&Grid1D::new(100, 1.0, Boundary::Neumann).unwrap());
    let f = LinearFamily::new(neumann, random_diagonal(100, -1.0, 1.0, 2024)).unwrap();
    let s = sweep_spb_in_m(&f, &linspace(0.01, 1.0, 12)).map_err(|e| e.to_string())?;
    let reduction = check_monotone_reduction(&s, 0.0);
    ensure(reduction.passed, || format!("reduction sweep margin {:e}", reduction.margin))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(20), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "Dirichlet spb {spb:.6} (exact {exact:.6}); reduction sweep non-increasing; {:.2}s",
        elapsed.as_secs_f64()
    ))
}

/// Essentially nonnegative matrix with every column summing to `c`.
fn equal_column_sums(n: usize, c: f64, seed: u64) -> SquareMatrix {
    let mut a = random_ess_nonneg(n, seed);
    for j in 0..n {
        let off: f64 = (0..n).filter(|&i| i != j).map(|i| a[(i, j)]).sum();
        a[(j, j)] = c - off;
    }
    a
}

fn lindqvist_and_kirkland() -> Outcome {
    let (mut lindqvist, mut kirkland) = (f64::INFINITY, f64::INFINITY);
    for seed in 0..500 {
        let n = dim(seed);
        let a = random_ess_nonneg(n, sub_seed(seed, 0));
        let d = random_diagonal(n, -2.0, 2.0, sub_seed(seed, 2));
        let l = lindqvist_check(&a, &d).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(l.passed, || format!("Lindqvist seed {seed}: margin {:e}", l.margin))?;
        lindqvist = lindqvist.min(l.margin);
        let k = kirkland_check(&a).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(k.passed, || format!("Kirkland seed {seed}: margin {:e}", k.margin))?;
        kirkland = kirkland.min(k.margin);
    }
    for seed in 0..20 {
        let c = -1.0 + 0.1 * seed as f64;
        let a = equal_column_sums(dim(seed), c, sub_seed(seed, 9));
        let k = kirkland_check(&a).map_err(|e| format!("equality seed {seed}: {e}"))?;
        ensure(k.passed && k.branch == Some(Branch::Equality), || {
            format!("equality seed {seed}: {:?}, margin {:e}", k.branch, k.margin)
        })?;
    }
    Ok(format!(
        "500 each; min margins {lindqvist:.2e} / {kirkland:.2e}; equality branch on 20 constructions"
    ))
}

fn kingman_superconvexity() -> Outcome {
    let fixture = KingmanFamily::new(
        SquareMatrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap(),
        SquareMatrix::from_rows(&[[1.0, 0.0], [0.0, -1.0]]).unwrap(),
    )
    .unwrap();
    let grid = linspace(-2.0, 2.0, 21);
    for &theta in &grid {
        let rho = spectral_bound(&kingman_family_eval(&fixture, theta)).unwrap().spb;
        let want = 2.0 * theta.cosh();
        ensure((rho - want).abs() <= 1e-9, || format!("theta = {theta}: {rho} vs {want}"))?;
    }
    let r = kingman_superconvexity_check(&fixture, &grid).map_err(|e| e.to_string())?;
    ensure(r.convex, || "fixture not log-convex".into())?;
    for seed in 0..100 {
        let r = kingman_superconvexity_check(&random_kingman(dim(seed), sub_seed(seed, 5)), &grid)
            .map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(r.convex, || format!("seed {seed}: violation {:e}", r.worst_violation))?;
    }
    Ok("fixture matches 2 cosh; 100 random families log-convex".into())
}

fn semigroup() -> Outcome {
    let mut worst: f64 = 0.0;
    for seed in 0..50 {
        let m = random_ess_nonneg(5, sub_seed(seed, 11));
        let spb = spectral_bound(&m).unwrap().spb;
        let gap = spectral_gap(&m).map_err(|e| format!("seed {seed}: {e}"))?;
        let g = growth_bound_estimate(&m, growth_horizon(gap), 64).map_err(|e| format!("seed {seed}: {e}"))?;
        let err = (g.omega - spb).abs() / spb.abs().max(1.0);
        ensure(err <= 1e-3, || format!("seed {seed}: omega {} vs spb {spb}", g.omega))?;
        worst = worst.max(err);

        let pos = positivity_of_semigroup_check(&m, &DEFAULT_T_GRID);
        ensure(pos.passed, || format!("seed {seed}: Metzler semigroup not positive ({})", pos.detail))?;
        let neg = positivity_of_semigroup_check(&random_signed(5, sub_seed(seed, 12)), &DEFAULT_T_GRID);
        ensure(neg.passed, || format!("seed {seed}: signed semigroup stayed positive"))?;
    }
    Ok(format!("50 matrices, max relative omega error {worst:.1e}; positivity equivalence both ways"))
}

fn cli_determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("acceptance-suite-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut reports = Vec::new();
    let mut slowest = Duration::ZERO;
    for k in 0..2 {
        let start = Instant::now();
        let path = dir.join(format!("suite{k}.report"));
        let status = Command::new(env!("CARGO_BIN_EXE_reduction-lab"))
            .args(["suite", "--seed-count", "20", "--out"])
            .arg(&path)
            .output()
            .map_err(|e| e.to_string())?
            .status;
        ensure(status.code() == Some(0), || format!("run {k} exited with {status}"))?;
        slowest = slowest.max(start.elapsed());
        reports.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    let _ = std::fs::remove_dir_all(&dir);
    ensure(reports[0] == reports[1], || "reports differ".into())?;
    ensure(slowest < Duration::from_secs(60), || format!("a run took {slowest:?}"))?;
    let lines = reports[0].iter().filter(|&&b| b == b'\n').count();
    Ok(format!("byte-identical {lines}-line reports, exit 0, slowest run {:.2}s", slowest.as_secs_f64()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("oracle agreement", oracle_agreement),
        ("convexity in the growth coefficient", convexity_in_beta),
        ("convexity, slope bound and derivative in the mixing rate", mixing_rate_properties),
        ("closed-form two-patch fixture and threshold", closed_form_fixture),
        ("Karlin reduction", karlin_reduction),
        ("discretized operators", discretized_operators),
        ("Lindqvist and Kirkland inequalities", lindqvist_and_kirkland),
        ("Kingman superconvexity", kingman_superconvexity),
        ("semigroup growth bound and positivity", semigroup),
        ("CLI determinism", cli_determinism),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("acceptance {:>2} PASS {name}: {detail}", k + 1),
            Err(detail) => {
                failures += 1;
                println!("acceptance {:>2} FAIL {name}: {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
