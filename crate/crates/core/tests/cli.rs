use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_qwalk");

fn qwalk(args: &[&str], dir: &Path) -> Output {
    Command::new(BIN).args(args).env("QWALK_OUTPUT_DIR", dir).output().expect("qwalk runs")
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn classical_scaling_small() {
    let dir = tempfile::tempdir().unwrap();
    let out = qwalk(&["classical-scaling", "--n-max", "2"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("s=(0, 3, 4)"), "{stdout}");
    let csv = fs::read_to_string(dir.path().join("classical-scaling.csv")).unwrap();
    assert!(csv.starts_with("# qwalk classical-scaling"));
    assert!(csv.lines().any(|l| l == "n,i,s_exact,s_mc,stderr,trials,seed"));
    let exact: Vec<(String, String, f64)> = data_rows(&csv)
        .into_iter()
        .map(|r| (r[0].clone(), r[1].clone(), r[2].parse().unwrap()))
        .filter(|(n, _, _)| n == "2")
        .collect();
    let s: Vec<f64> = exact.iter().map(|r| r.2).collect();
    assert_eq!(s, vec![0.0, 3.0, 4.0]);
}

#[test]
fn line_rm_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let out =
        qwalk(&["line-rm", "--p", "0.5", "--m-max", "1", "--t-max", "20000", "-o", path.to_str().unwrap()], dir.path());
    assert!(out.status.success());
    let rows = data_rows(&fs::read_to_string(&path).unwrap());
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "1");
    let r1: f64 = rows[0][2].parse().unwrap();
    assert!((r1 - 2.0 / std::f64::consts::PI).abs() < 1e-4, "{r1}");
}

#[test]
fn hypercube_table_has_a_row_per_distance() {
    let dir = tempfile::tempdir().unwrap();
    let out = qwalk(&["hypercube-table", "--n", "8"], dir.path());
    assert!(out.status.success());
    let rows = data_rows(&fs::read_to_string(dir.path().join("hypercube-table.csv")).unwrap());
    assert_eq!(rows.len(), 9);
    let real: f64 = rows[1][4].parse().unwrap();
    assert!((real - 29.0).abs() < 0.01, "{real}");
}

#[test]
fn identical_configs_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, jobs: &str| {
        let path = dir.path().join(name);
        let args = [
            "classical-scaling",
            "--n-max",
            "6",
            "--trials",
            "5000",
            "--seed",
            "9",
            "--jobs",
            jobs,
            "-o",
            path.to_str().unwrap(),
        ];
        assert!(qwalk(&args, dir.path()).status.success());
        fs::read(path).unwrap()
    };
    let a = run("a.csv", "1");
    assert_eq!(a, run("b.csv", "1"));
    // the job count is recorded in the header but does not change any row
    let strip = |bytes: Vec<u8>| String::from_utf8(bytes).unwrap().lines().skip(1).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(a), strip(run("c.csv", "4")));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| qwalk(args, dir.path()).status.code().unwrap();
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["no-such-command"]), 2);
    assert_eq!(code(&["line-rm", "--bogus-flag"]), 2);
    assert_eq!(code(&["line-rm", "--m-max", "many"]), 6);
    assert_eq!(code(&["line-rm", "--p", "2"]), 6);
    assert_eq!(code(&["hypercube-scaling", "--n-min", "5", "--n-max", "3"]), 6);
    assert_eq!(code(&["solver-crosscheck", "--stein-max-iterations", "0"]), 6);
    assert_eq!(code(&["classical-scaling", "--n-max", "2", "-o", "/nonexistent-dir/x/y.csv"]), 5);
    assert_eq!(code(&["solver-crosscheck", "--n-min", "31", "--n-max", "31", "--stein", "direct"]), 3);
    assert_eq!(code(&["line-rm", "--m-max", "2", "--t-max", "100000000000"]), 3);
    assert_eq!(
        code(&["solver-crosscheck", "--n-min", "3", "--n-max", "3", "--stein", "fixed-point", "--t-max", "100"]),
        0
    );
}

#[test]
fn convergence_failure_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    // 1 − ρ is about 1e-9 at n = 30, far beyond any practical fixed-point iteration cap
    let args = [
        "solver-crosscheck",
        "--n-min",
        "30",
        "--n-max",
        "30",
        "--stein",
        "fixed-point",
        "--stein-max-iterations",
        "1000",
        "--t-max",
        "10",
    ];
    let out = qwalk(&args, dir.path());
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}
