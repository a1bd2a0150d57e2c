use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_reduction-lab");

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios")
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

#[test]
fn spb_prints_bound_and_vectors() {
    let o = run(&["spb", scenarios().join("matrix_2x2.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let spb: f64 = text.lines().next().unwrap().trim_start_matches("spb = ").parse().unwrap();
    assert!(spb.abs() <= 1e-10);
    assert!(text.contains("\nu = ") && text.contains("\nv = "));
}

#[test]
fn spb_rejects_bad_input() {
    let dir = tmp();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "2\n1 2\n3\n").unwrap();
    assert_eq!(run(&["spb", bad.to_str().unwrap()]).status.code(), Some(2));

    let signed = dir.path().join("signed.txt");
    fs::write(&signed, "2\n0 -1\n-1 0\n").unwrap();
    let o = run(&["spb", signed.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("NotEssentiallyNonnegative"));

    assert_eq!(run(&["spb", "/definitely/not/here"]).status.code(), Some(2));
}

#[test]
fn threshold_prints_root() {
    let o = run(&["threshold", scenarios().join("two_patch_threshold.scn").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let m: f64 = stdout(&o).trim().parse().unwrap();
    assert!((m - 2.0).abs() <= 1e-8);
}

#[test]
fn threshold_without_root_is_numerical_failure() {
    let o = run(&["threshold", scenarios().join("two_patch.scn").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o).trim(), "NoSignChange");
}

#[test]
fn curve_writes_csv() {
    let dir = tmp();
    let out = dir.path().join("karlin.csv");
    let o = run(&[
        "curve",
        scenarios().join("karlin_swap.scn").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(&out).unwrap();
    assert!(!csv.contains('\r'));
    let rows: Vec<Vec<f64>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 11);
    for (alpha, want) in [(0, 2.0), (5, 1.25), (10, 1.0)] {
        assert!((rows[alpha][1] - want).abs() <= 1e-10);
    }

    let out = dir.path().join("linear.csv");
    run(&["curve", scenarios().join("two_patch.scn").to_str().unwrap(), "--out", out.to_str().unwrap()]);
    let csv = fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("param,spb,analytic_derivative\n"));
    assert_eq!(csv.lines().count(), 22);
}

#[test]
fn check_reports_every_scenario() {
    let dir = tmp();
    for name in ["two_patch", "karlin_swap", "kingman_cosh", "neumann_laplacian", "nonlocal_dispersal"] {
        let out = dir.path().join(format!("{name}.report"));
        let o = run(&[
            "check",
            scenarios().join(format!("{name}.scn")).to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        let report = fs::read_to_string(&out).unwrap();
        for line in report.lines() {
            let fields: Vec<&str> = line.splitn(4, ',').collect();
            assert_eq!(fields.len(), 4, "{line}");
            assert!(fields[1] == "pass" || fields[1] == "fail");
            fields[2].parse::<f64>().unwrap();
        }
    }
}

#[test]
fn failing_check_exits_1() {
    let dir = tmp();
    let scenario = dir.path().join("strict.scn");
    let base = fs::read_to_string(scenarios().join("two_patch.scn")).unwrap();
    fs::write(&scenario, format!("{base}\n[tolerances]\nderivative = 1e-20\n")).unwrap();
    let out = dir.path().join("strict.report");
    let o = run(&["check", scenario.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let report = fs::read_to_string(&out).unwrap();
    assert!(report.lines().any(|l| l.starts_with("derivative_agreement,fail,")));
}

#[test]
fn scenario_errors_exit_2() {
    let dir = tmp();
    let cases = [
        ("family = karlin\nP = 0.1 0.8; 1 0\nD = diag: 2 0.5\n", "row-stochastic"),
        ("family = linear\nA = -1 1; 1 -1\n[grid]\ncount = 2\n", "grid count >= 3"),
        ("family = nonsense\n", "unknown family"),
    ];
    for (k, (text, needle)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("bad{k}.scn"));
        fs::write(&path, text).unwrap();
        let o = run(&["check", path.to_str().unwrap(), "--out", dir.path().join("r").to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&o.stderr).contains(needle));
    }
}

#[test]
fn suite_is_deterministic_across_thread_counts() {
    let dir = tmp();
    let a = dir.path().join("a.report");
    let b = dir.path().join("b.report");
    let o = run(&["suite", "--seed-count", "6", "--out", a.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = Command::new(BIN)
        .args(["suite", "--seed-count", "6", "--out", b.to_str().unwrap()])
        .env("REDUCTION_LAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    let o = Command::new(BIN)
        .args(["suite", "--seed-count", "1", "--out", b.to_str().unwrap()])
        .env("REDUCTION_LAB_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
