use std::collections::BTreeSet;
use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permajones"))
        .args(args)
        .env_remove("PERMAJONES_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn field(out: &str, label: &str) -> f64 {
    let line = out
        .lines()
        .find(|l| l.starts_with(label))
        .unwrap_or_else(|| panic!("no '{label}' in {out}"));
    line[label.len()..].split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn unknot_text() {
    let o = run(&["jones", "1:"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "q^-1 + q\n");
}

#[test]
fn trefoil_routes_print_the_same_polynomial() {
    let per = stdout(&run(&["jones", "2: 1 1 1", "--route", "permanent"]));
    let skein = stdout(&run(&["jones", "2: 1 1 1", "--route", "skein"]));
    let sum = stdout(&run(&["jones", "2: 1 1 1", "--route", "statesum"]));
    assert_eq!(per, "-q^-9 + q^-5 + q^-3 + q^-1\n");
    assert_eq!(per, skein);
    assert_eq!(per, sum);
}

#[test]
fn verify_succeeds() {
    for b in ["2: 1 1 1", "3: 1 -2 1 -2", "2: -1 -1"] {
        assert_eq!(code(&run(&["jones", b, "--verify"])), 0, "{b}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["jones", "2: 1 q"])), 2);
    assert_eq!(code(&run(&["jones", "2: 3"])), 2);
    assert_eq!(
        code(&run(&[
            "jones",
            "2: 1 1 1 1",
            "--route",
            "skein",
            "--skein-budget",
            "3"
        ])),
        3
    );
    assert_eq!(
        code(&run(&["jones", "2: 1 1 1 1", "--verify", "--skein-budget", "3"])),
        3
    );
    assert_eq!(code(&run(&["jones", "2: 1", "--verify", "--route", "skein"])), 2);
}

#[test]
fn json_keys_are_stable() {
    let o = run(&["jones", "2: 1 1 1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let keys: BTreeSet<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let expected: BTreeSet<&str> = [
        "braid",
        "crossings",
        "writhe",
        "rot_total",
        "route",
        "jones",
        "wall_time_ms",
    ]
    .into();
    assert_eq!(keys, expected);
    assert_eq!(v["route"], "permanent");
    assert_eq!(v["crossings"], 3);

    let o = run(&["jones", "1:", "--verify", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for rec in v.as_array().unwrap() {
        assert_eq!(rec.as_object().unwrap().len(), 7);
        assert_eq!(rec["jones"], "q^-1 + q");
    }
}

#[test]
fn matrix_headers() {
    let first = |b: &str| stdout(&run(&["matrix", b])).lines().next().unwrap().to_string();
    assert_eq!(first("2: 1 1 1"), "# n=3 dim=21 writhe=3 rot=-2");
    assert!(first("2: 1").contains("dim=7"));
    assert!(first("2: 1 1").contains("dim=14"));
    let numeric = stdout(&run(&["matrix", "2: 1", "--numeric", "exp:pi/5"]));
    assert!(numeric.lines().skip(1).all(|l| l.split_whitespace().count() == 4));
}

#[test]
fn braid_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trefoil.txt");
    fs::write(&path, "# right-handed trefoil\n2: 1 1 1\n").unwrap();
    let o = run(&["jones", "--file", path.to_str().unwrap()]);
    assert_eq!(stdout(&o), "-q^-9 + q^-5 + q^-3 + q^-1\n");
}

#[test]
fn trefoil_estimate_is_close() {
    let o = run(&[
        "estimate",
        "2: 1 1 1",
        "--q0",
        "exp:2pi/5",
        "--samples",
        "100000",
        "--seed",
        "42",
    ]);
    assert_eq!(code(&o), 0);
    assert!(field(&stdout(&o), "deviation") < 4.0);
}

#[test]
fn estimate_is_deterministic() {
    let args = ["estimate", "2: 1 -1 1", "--samples", "20000", "--seed", "9"];
    let a = run(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_permajones"))
        .args(args)
        .env("PERMAJONES_WORKERS", "3")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn identity_matrix_file_has_no_variance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("id.txt");
    fs::write(&path, "# n=0 dim=3 writhe=0 rot=0\n0 0 1\n1 1 1\n2 2 1\n").unwrap();
    let o = run(&["estimate", "--matrix-file", path.to_str().unwrap(), "--samples", "500"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert_eq!(field(&out, "variance"), 0.0);
    assert_eq!(field(&out, "deviation"), 0.0);
}

#[test]
fn trace_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    let o = run(&[
        "estimate",
        "2: 1 1 1",
        "--samples",
        "3000",
        "--trace",
        path.to_str().unwrap(),
        "--trace-every",
        "1000",
    ]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "sample_index,running_mean_re,running_mean_im,std_error");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("2999,"));
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("ok   routes agree on \"3: 1 -2 1 -2\""));
}

#[test]
fn corrupted_gadget_fails_selftest() {
    let shipped = include_str!("../../core/data/gadget_positive.txt");
    // drop the edge carrying weight a
    let corrupted: String = shipped
        .lines()
        .filter(|l| !l.ends_with(" a"))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_ne!(corrupted.lines().count(), shipped.lines().count());
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, corrupted).unwrap();
    let o = run(&["selftest", "--positive-gadget", path.to_str().unwrap()]);
    assert_eq!(code(&o), 4);
    let out = stdout(&o);
    assert!(out.contains("FAIL + gadget contract"));
    assert!(out.contains("in 01 -> out 01"), "{out}");
}
