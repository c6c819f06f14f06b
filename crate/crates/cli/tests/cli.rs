use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn farey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_farey")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows (comment lines and the header dropped), split into cells.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn header(csv: &str) -> &str {
    csv.lines().find(|l| !l.starts_with('#')).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let i = header(csv).split(',').position(|c| c == name).unwrap();
    rows(csv).into_iter().map(|r| r[i].clone()).collect()
}

#[test]
fn expand_golden_is_all_ones() {
    let csv = stdout(&farey(&["expand", "--constant", "golden", "--count", "5"]));
    assert_eq!(header(&csv), "k,a_k,S_k,S_flat_k,geometric_mean");
    assert_eq!(column(&csv, "a_k"), vec!["1"; 5]);
    assert_eq!(column(&csv, "S_k"), vec!["1", "2", "3", "4", "5"]);
}

#[test]
fn expand_rational_terminates() {
    let csv = stdout(&farey(&["expand", "--rational", "3/7", "--count", "10"]));
    assert_eq!(column(&csv, "a_k"), vec!["2", "3"]);
    assert!(csv.trim_end().ends_with("# end-of-stream after 2 digits"));
    let json = stdout(&farey(&["expand", "--rational", "3/7", "--count", "10", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["end_of_stream"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn expand_seed_is_reproducible() {
    let a = stdout(&farey(&["expand", "--seed", "42", "--count", "100"]));
    let b = stdout(&farey(&["expand", "--seed", "42", "--count", "100"]));
    assert_eq!(a, b);
    assert_eq!(rows(&a).len(), 100);
    assert!(a.starts_with("# farey-renewal version="));
    assert!(a.contains("master_seed=42"));
}

#[test]
fn expand_argument_errors() {
    assert_eq!(farey(&["expand", "--count", "5"]).status.code(), Some(2));
    assert_eq!(farey(&["expand", "--seed", "1", "--constant", "golden"]).status.code(), Some(2));
    assert_eq!(farey(&["expand", "--rational", "7/3"]).status.code(), Some(2));
    assert_eq!(farey(&["expand", "--rational", "1/2", "--count", "0"]).status.code(), Some(2));
    assert_eq!(farey(&["expand", "--constant", "pi"]).status.code(), Some(2));
    assert_eq!(farey(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn pathological_point_exits_3() {
    let out = farey(&["expand", "--seed", "1", "--engine", "mobius", "--refine-cap", "1", "--count", "3"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn simulate_single_trial() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let o = farey(&["simulate", "--seed", "5", "--trials", "1", "--n", "10", "--out", out.to_str().unwrap()]);
    stdout(&o);
    let csv = fs::read_to_string(out.join("trials.csv")).unwrap();
    assert_eq!(header(&csv), "trial,n,X_n,gap,scaled");
    let r = rows(&csv);
    assert_eq!(r.len(), 1);
    let (x, gap): (u64, u64) = (r[0][2].parse().unwrap(), r[0][3].parse().unwrap());
    assert_eq!(x + gap, 10);
    let again = dir.path().join("again");
    stdout(&farey(&["simulate", "--seed", "5", "--trials", "1", "--n", "10", "--out", again.to_str().unwrap()]));
    assert_eq!(csv, fs::read_to_string(again.join("trials.csv")).unwrap());
}

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn simulate_is_worker_independent() {
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for workers in ["1", "4"] {
        let out = dir.path().join(workers);
        let args = ["simulate", "--seed", "3", "--trials", "300", "--n", "1000,10000", "--workers", workers];
        stdout(&farey(&[&args[..], &["--out", out.to_str().unwrap()]].concat()));
        outputs.push(read_all(&out));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0].len(), 2);
    let summary: serde_json::Value = serde_json::from_slice(&outputs[0][0].1).unwrap();
    let h = summary["horizons"].as_array().unwrap();
    assert_eq!(h.len(), 2);
    // Pilot slack for the KS trend at 300 trials is generous: the statistical
    // scale alone is about 1/sqrt(300).
    let ks: Vec<f64> = h.iter().map(|e| e["ks"].as_f64().unwrap()).collect();
    assert!(ks[1] <= ks[0] + 0.08, "{ks:?}");
    for key in ["schema_version", "artifact_version", "master_seed", "config_hash", "config"] {
        assert!(summary.get(key).is_some(), "{key}");
    }
}

#[test]
fn simulate_failure_leaves_no_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bad");
    let o = farey(&["simulate", "--trials", "2", "--n", "100", "--engine", "mobius", "--refine-cap", "1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(read_all(&out).is_empty());
    assert_eq!(farey(&["simulate", "--n", "1", "--out", out.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(farey(&["simulate", "--trials", "2"]).status.code(), Some(2));
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# pilot\nseed = 9\ntrials=5\nn=100\n").unwrap();
    let out = dir.path().join("run");
    let o = farey(&["simulate", "--config", cfg.to_str().unwrap(), "--trials", "3", "--out", out.to_str().unwrap()]);
    stdout(&o);
    let csv = fs::read_to_string(out.join("trials.csv")).unwrap();
    assert_eq!(rows(&csv).len(), 3);
    assert!(csv.contains("master_seed=9"));
    let missing = dir.path().join("missing.cfg");
    assert_eq!(farey(&["tail", "--config", missing.to_str().unwrap()]).status.code(), Some(4));
    fs::write(&cfg, "colour=red\n").unwrap();
    assert_eq!(farey(&["tail", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn tail_columns() {
    let csv = stdout(&farey(&["tail", "--trials", "200", "--n", "1000000", "--epsilon", "0.5", "--epsilon", "0.1,0.3"]));
    assert_eq!(header(&csv), "epsilon,n,frequency,theoretical,ratio,stderr");
    assert_eq!(column(&csv, "epsilon"), vec!["0.1", "0.3", "0.5"]);
    let theo: f64 = column(&csv, "theoretical")[2].parse().unwrap();
    assert!((theo - 0.050171).abs() < 1e-6);
    let freq: Vec<f64> = column(&csv, "frequency").iter().map(|s| s.parse().unwrap()).collect();
    assert!(freq.windows(2).all(|w| w[0] >= w[1]), "{freq:?}");
    assert_eq!(farey(&["tail", "--epsilon", "1.5"]).status.code(), Some(2));
}

#[test]
fn operator_density_one_gives_wandering_rate() {
    let csv = stdout(&farey(&["operator", "--density", "one", "--n", "0,1,10,100"]));
    assert_eq!(
        header(&csv),
        "n,W_n,probe_x,value,product,min_slope,max_second_diff,mu_integral,oracle"
    );
    for r in rows(&csv) {
        let n: f64 = r[0].parse().unwrap();
        let product: f64 = r[4].parse().unwrap();
        assert!((product - (n + 2.0).ln()).abs() < 1e-12, "{r:?}");
    }
}

#[test]
fn operator_oracle_column() {
    let csv = stdout(&farey(&["operator", "--density", "id", "--n", "1,5,20,21"]));
    for r in rows(&csv) {
        let n: u64 = r[0].parse().unwrap();
        if n <= 20 {
            let (value, oracle): (f64, f64) = (r[3].parse().unwrap(), r[8].parse().unwrap());
            assert!((value / oracle - 1.0).abs() < 1e-4, "{r:?}");
        } else {
            assert_eq!(r[8], "");
        }
    }
}

#[test]
fn operator_rejects_bad_input() {
    assert_eq!(farey(&["operator", "--probe", "0.3"]).status.code(), Some(2));
    assert_eq!(farey(&["operator", "--probe", "1.5"]).status.code(), Some(2));
    assert_eq!(farey(&["operator", "--density", "power:2"]).status.code(), Some(2));
    assert_eq!(farey(&["operator", "--density", "exp"]).status.code(), Some(2));
    assert!(farey(&["operator", "--density", "power:0.5", "--n", "3"]).status.success());
}

#[test]
fn classic_targets() {
    let k: serde_json::Value =
        serde_json::from_str(&stdout(&farey(&["classic", "--which", "khinchin", "--n", "1000"]))).unwrap();
    assert!((k["target"].as_f64().unwrap() - 2.685).abs() < 1e-3);
    assert_eq!(k["experiment"], "khinchin");
    let dv: serde_json::Value =
        serde_json::from_str(&stdout(&farey(&["classic", "--which", "diamond-vaaler", "--n", "1000"]))).unwrap();
    assert!((dv["target"].as_f64().unwrap() - 1.442695).abs() < 1e-6);
    assert_eq!(farey(&["classic", "--which", "levy"]).status.code(), Some(2));
}

#[test]
fn classic_stable_same_horizon_has_zero_ks() {
    let args = ["classic", "--which", "stable", "--n", "1000", "--n", "1000", "--trials", "50", "--seed", "8"];
    let v: serde_json::Value = serde_json::from_str(&stdout(&farey(&args))).unwrap();
    assert_eq!(v["ks"].as_f64().unwrap(), 0.0);
}

#[test]
fn classic_weak_law_and_ly_run() {
    let w: serde_json::Value = serde_json::from_str(&stdout(&farey(&[
        "classic", "--which", "weak-law", "--n", "1000", "--trials", "50",
    ])))
    .unwrap();
    assert_eq!(w["horizons"].as_array().unwrap().len(), 1);
    let ly: serde_json::Value =
        serde_json::from_str(&stdout(&farey(&["classic", "--which", "ly", "--n", "100,1000", "--trials", "50"])))
            .unwrap();
    assert_eq!(ly["horizons"].as_array().unwrap().len(), 2);
}
