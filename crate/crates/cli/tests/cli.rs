use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn moldsched(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moldsched"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = moldsched(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn gen(dir: &Path, name: &str, n: &str, m: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    ok(&["gen", "--n", n, "--m", m, "--seq", "mixed", "--par", "mixed", "--seed", "5", "--out", p(&path)]);
    path
}

#[test]
fn gen_writes_a_readable_instance() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "i.txt", "12", "9");
    let inst = moldsched::io::read_instance(&path).unwrap();
    assert_eq!((inst.n(), inst.m()), (12, 9));
    assert!(inst.is_monotonic());
}

#[test]
fn sched_prints_objectives_and_writes_valid_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen(dir.path(), "i.txt", "20", "8");
    for algo in ["bicriteria", "gang", "seq-lptf", "list-shelf", "list-wlptf", "list-saf"] {
        let line = ok(&["sched", "--algo", algo, "--instance", p(&inst), "--shuffles", "3", "--seed", "1"]);
        let fields: Vec<f64> = line.split_whitespace().map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields.len(), 3, "{line}");
        let sched = dir.path().join(format!("i.txt.{algo}.sched"));
        let check = ok(&["validate", "--instance", p(&inst), "--schedule", p(&sched)]);
        let objs: Vec<f64> = check.split_whitespace().map(|f| f.parse().unwrap()).collect();
        assert_eq!(objs, fields[..2]);
    }
}

#[test]
fn sched_honours_out_and_cmax_scale() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen(dir.path(), "i.txt", "15", "6");
    let out = dir.path().join("s.txt");
    ok(&["sched", "--algo", "bicriteria", "--instance", p(&inst), "--shuffles", "0", "--seed", "0",
        "--cmax-scale", "1.5", "--out", p(&out)]);
    assert!(out.exists());
    let bad = moldsched(&["sched", "--algo", "bicriteria", "--instance", p(&inst), "--shuffles", "0",
        "--seed", "0", "--cmax-scale", "0"]);
    assert!(!bad.status.success());
}

#[test]
fn bounds_are_below_objectives() {
    let dir = tempfile::tempdir().unwrap();
    let inst = gen(dir.path(), "i.txt", "10", "5");
    let cmax: f64 = ok(&["bound", "--criterion", "makespan", "--instance", p(&inst)]).trim().parse().unwrap();
    let lp = dir.path().join("lp.txt");
    let minsum: f64 = ok(&["bound", "--criterion", "minsum", "--instance", p(&inst), "--dump-lp", p(&lp)])
        .trim()
        .parse()
        .unwrap();
    let text = fs::read_to_string(&lp).unwrap();
    assert!(text.lines().any(|l| l.starts_with("columns x_")));
    let line = ok(&["sched", "--algo", "list-saf", "--instance", p(&inst), "--shuffles", "0", "--seed", "0"]);
    let f: Vec<f64> = line.split_whitespace().map(|f| f.parse().unwrap()).collect();
    assert!(cmax <= f[0] * (1.0 + 1e-9));
    assert!(minsum <= f[1] * (1.0 + 1e-9));

    let bad = moldsched(&["bound", "--criterion", "makespan", "--instance", p(&inst), "--dump-lp", p(&lp)]);
    assert!(!bad.status.success());
}

#[test]
fn validate_rejects_overlapping_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("i.txt");
    fs::write(&inst, "2 2\n0 1 2 1\n1 1 2 1\n").unwrap();
    let sched = dir.path().join("s.txt");
    fs::write(&sched, "2\n0 0 2\n1 0 1\n").unwrap();
    let out = moldsched(&["validate", "--instance", p(&inst), "--schedule", p(&sched)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
}

#[test]
fn bench_writes_all_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.toml");
    fs::write(&config, "m = 8\ntask_counts = [4, 8]\nruns_per_point = 2\nbase_seed = 3\n").unwrap();
    let out = dir.path().join("out");
    ok(&["bench", "--config", p(&config), "--out-dir", p(&out), "--jobs", "1", "--gnuplot"]);
    for f in ["results.csv", "timings.csv", "summary.csv", "plots/plots.gp"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let dats = fs::read_dir(out.join("plots"))
        .unwrap()
        .filter(|e| e.as_ref().unwrap().path().extension().is_some_and(|x| x == "dat"))
        .count();
    assert_eq!(dats, 8);
    let results = fs::read_to_string(out.join("results.csv")).unwrap();
    assert_eq!(results.lines().count(), 1 + 4 * 2 * 2 * 6);
}

#[test]
fn errors_exit_nonzero_with_message() {
    let out = moldsched(&["sched", "--algo", "gang", "--instance", "/nonexistent/i.txt", "--shuffles", "1", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/i.txt"));

    let out = moldsched(&["gen", "--n", "3", "--m", "2", "--seq", "normal", "--par", "high", "--seed", "1", "--out", "x"]);
    assert!(!out.status.success());
}
