use std::path::Path;
use std::process::{Command, Output};

use qploc::format;
use qploc_core::instance::{generate_dense, VariantKind};
use qploc_core::oracle::enumerate_optimal;

fn qploc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qploc"))
        .args(args)
        .env_clear()
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        let out = qploc(&[
            "gen",
            "-n",
            "15",
            "--seed",
            "9",
            "--variant",
            "cphmpsa",
            "--p",
            "3",
            "-o",
            p.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let inst = format::load(&a).unwrap();
    assert_eq!((inst.n(), inst.p()), (15, 3));
    let other = qploc(&["gen", "-n", "15", "--seed", "10"]);
    assert_ne!(
        stdout(&other).as_bytes(),
        std::fs::read(&a).unwrap().as_slice()
    );
}

fn write_case(dir: &Path, kind: VariantKind, seed: u64) -> (String, f64) {
    let inst = generate_dense(6, 2, kind, seed).unwrap();
    let path = dir.join(format!("{}-{seed}.txt", kind.name()));
    format::save(&inst, &path).unwrap();
    (
        path.to_str().unwrap().to_owned(),
        enumerate_optimal(&inst).unwrap().value,
    )
}

#[test]
fn solve_prints_report_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (path, opt) = write_case(dir.path(), VariantKind::Cphmpsa, 4);
    let csv = dir.path().join("out.csv");
    let log = dir.path().join("log.csv");
    let out = qploc(&[
        "solve",
        &path,
        "--csv",
        csv.to_str().unwrap(),
        "--log",
        log.to_str().unwrap(),
        "--show-assignment",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    assert!(text.contains("optimal"), "{text}");
    let rows = std::fs::read_to_string(&csv).unwrap();
    let mut lines = rows.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("instance,variant,p,status,objective,LB"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[3], "optimal");
    let value: f64 = row[4].parse().unwrap();
    assert!(
        (value - opt).abs() <= 0.005 + 1e-9 * opt.abs(),
        "{value} vs {opt}"
    );
    assert!(std::fs::read_to_string(&log).unwrap().lines().count() >= 2);

    // a second run appends without repeating the header
    let again = qploc(&[
        "solve",
        &path,
        "--csv",
        csv.to_str().unwrap(),
        "--no-reduce",
        "--no-heuristic",
    ]);
    assert!(again.status.success());
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 3);
    assert_eq!(
        rows.lines().filter(|l| l.starts_with("instance,")).count(),
        1
    );
}

#[test]
fn variant_override_changes_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let (path, _) = write_case(dir.path(), VariantKind::Chlpsa, 6);
    let inst = format::load(Path::new(&path)).unwrap();
    let want = enumerate_optimal(&inst.with_variant(VariantKind::Uphmpsa, 1).unwrap())
        .unwrap()
        .value;
    let out = qploc(&["solve", &path, "--variant", "uphmpsa", "--p", "1"]);
    assert!(out.status.success());
    let line = stdout(&out)
        .lines()
        .find(|l| l.starts_with("objective"))
        .unwrap()
        .to_owned();
    let got: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((got - want).abs() <= 0.005 + 1e-9 * want, "{got} vs {want}");
}

#[test]
fn environment_overrides_flags() {
    let dir = tempfile::tempdir().unwrap();
    let (path, _) = write_case(dir.path(), VariantKind::Uhlpsa, 2);
    let out = Command::new(env!("CARGO_BIN_EXE_qploc"))
        .args(["solve", &path])
        .env("QPLOC_NODE_LIMIT", "not-a-number")
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn rlt_bound_csv() {
    let dir = tempfile::tempdir().unwrap();
    let (path, opt) = write_case(dir.path(), VariantKind::Cphmpsa, 11);
    let out = qploc(&["rlt-bound", &path, "--configs", "rl2,rl1"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("instance,config,bound,%gap"));
    let bounds: Vec<f64> = lines
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert_eq!(bounds.len(), 2);
    assert!(bounds[0] <= bounds[1] + 1e-6 && bounds[1] <= opt + 1e-6);
    let bad = qploc(&["rlt-bound", &path, "--configs", "rl42"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn selftest_exit_code() {
    let out = qploc(&["selftest", "--count", "6", "--seed", "3"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("6 of 6 cases match"));
}

#[test]
fn missing_file_is_an_error() {
    let out = qploc(&["solve", "/nonexistent/instance.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}
