use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn certhom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_certhom")).args(args).output().expect("binary runs")
}

fn rows(text: &str) -> Vec<Vec<String>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    let mut out = vec![header];
    out.extend(reader.records().map(|r| r.unwrap().iter().map(String::from).collect()));
    out
}

fn column(table: &[Vec<String>], name: &str) -> usize {
    table[0].iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn solve_finds_the_four_affine_roots() {
    let out = certhom(&["solve", data("circle_hyperbola.json").to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(table.len(), 5);
    let (status, certified) = (column(&table, "status"), column(&table, "certified"));
    let (x1, x2) = (column(&table, "x1_re"), column(&table, "x2_re"));
    let mut roots: Vec<(i64, i64)> = table[1..]
        .iter()
        .map(|r| {
            assert_eq!(r[status], "success");
            assert_eq!(r[certified], "true");
            let a: f64 = r[x1].parse().unwrap();
            let b: f64 = r[x2].parse().unwrap();
            assert!((a * a + b * b - 1.0).abs() < 1e-8 && (a * b).abs() < 1e-8);
            ((a * 1e6).round() as i64, (b * 1e6).round() as i64)
        })
        .collect();
    roots.sort();
    assert_eq!(roots, vec![(-1_000_000, 0), (0, -1_000_000), (0, 1_000_000), (1_000_000, 0)]);
}

#[test]
fn same_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let system = data("circle_hyperbola.json");
    let run = |name: &str, seed: &str, threads: &str| {
        let path = dir.path().join(name);
        let out = certhom(&[
            "--seed",
            seed,
            "--threads",
            threads,
            "--out",
            path.to_str().unwrap(),
            "solve",
            system.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        std::fs::read(path).unwrap()
    };
    let a = run("a.csv", "7", "1");
    let b = run("b.csv", "7", "4");
    let c = run("c.csv", "8", "4");
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn target_equal_to_start_takes_no_steps() {
    let out = certhom(&["solve", data("good_12.json").to_str().unwrap(), "--start", "good"]);
    assert!(out.status.success());
    let table = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(table.len(), 2);
    assert_eq!(table[1][column(&table, "start")], "good");
    assert_eq!(table[1][column(&table, "steps")], "0");
    assert_eq!(table[1][column(&table, "certified")], "true");
}

#[test]
fn singular_roots_fail_with_nonzero_exit() {
    let out = certhom(&["solve", data("double_roots.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let table = rows(&String::from_utf8(out.stdout).unwrap());
    let status = column(&table, "status");
    assert!(table[1..].iter().all(|r| r[status] != "success"));
}

#[test]
fn bad_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"degrees":[2],"terms":[]}"#).unwrap();
    let out = certhom(&["solve", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    assert!(!certhom(&["solve", "/nonexistent.json"]).status.success());
}

#[test]
fn certified_trace_matches_step_count() {
    let out = certhom(&["track", data("circle_hyperbola.json").to_str().unwrap(), "--root", "2"]);
    assert!(out.status.success());
    let table = rows(&String::from_utf8(out.stdout).unwrap());
    let (s, t, phi) = (column(&table, "s"), column(&table, "t"), column(&table, "phi"));
    let mut previous = -1.0;
    for r in &table[1..] {
        let s: f64 = r[s].parse().unwrap();
        let t: f64 = r[t].parse().unwrap();
        let phi: f64 = r[phi].parse().unwrap();
        assert!(s > previous && t > 0.0 && phi > 0.0);
        assert_eq!(r[column(&table, "accepted")], "true");
        assert!(!r[column(&table, "z0_re")].is_empty());
        previous = s;
    }
    assert!(table.len() > 10);
}

#[test]
fn heuristic_trace_marks_rejections() {
    let out =
        certhom(&["track", data("circle_hyperbola.json").to_str().unwrap(), "--root", "0", "--tracker", "heuristic"]);
    assert!(out.status.success());
    let table = rows(&String::from_utf8(out.stdout).unwrap());
    let (accepted, z0) = (column(&table, "accepted"), column(&table, "z0_re"));
    for r in &table[1..] {
        assert_eq!(r[accepted] == "true", !r[z0].is_empty());
    }
}

#[test]
fn bench_summary_and_detail() {
    let dir = tempfile::tempdir().unwrap();
    let detail = dir.path().join("paths.csv");
    let out = certhom(&["bench", "--degrees", "2,2", "--trials", "2", "--detail", detail.to_str().unwrap()]);
    assert!(out.status.success());
    let table = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(table.len(), 3);
    let paths = column(&table, "paths");
    assert!(table[1..].iter().all(|r| r[paths] == "8"));
    let detail = rows(&std::fs::read_to_string(detail).unwrap());
    assert_eq!(detail.len(), 1 + 16);
}

#[test]
fn conjecture_reports_three_kinds() {
    let out = certhom(&["conjecture", "--n", "2", "--trials", "2"]);
    assert!(out.status.success());
    let table = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(table.len(), 4);
    let mean = column(&table, "mean_steps");
    assert!(table[1..].iter().all(|r| r[mean].parse::<f64>().unwrap() > 0.0));
}

#[test]
fn entropy_summary_and_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let detail = dir.path().join("hist.csv");
    let out = certhom(&[
        "entropy",
        "--degrees",
        "2,2",
        "--runs",
        "40",
        "--variant",
        "unitary",
        "--detail",
        detail.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(table[1][column(&table, "variant")], "unitary");
    assert_eq!(table[1][column(&table, "roots")], "4");
    let hist = rows(&std::fs::read_to_string(detail).unwrap());
    assert_eq!(hist.len(), 5);
    let hits: usize = hist[1..].iter().map(|r| r[1].parse::<usize>().unwrap()).sum();
    let failures: usize = table[1][column(&table, "failures")].parse().unwrap();
    assert_eq!(hits + failures, 40);
}
