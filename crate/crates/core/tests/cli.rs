use std::path::PathBuf;
use std::process::{Command, Output};

fn qrbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qrbound")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn profile(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/profiles").join(name).to_string_lossy().into_owned()
}

#[test]
fn rho_of_origin_and_half() {
    let o = qrbound(&["metrics", "--rho", "0", "0", "0.5", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 1.0986123).abs() < 1e-7);
}

#[test]
fn several_metrics_make_a_csv_row() {
    let o = qrbound(&["metrics", "--rho", "0", "0", "0.5", "0", "--j", "0", "0", "0.5", "0", "--k", "0", "0", "0.5", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("rho,j,k"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert!((row[1] - 2f64.ln()).abs() < 1e-12);
    assert!((row[2] - 2f64.ln()).abs() < 1e-3);
}

#[test]
fn negative_coordinates_parse() {
    let o = qrbound(&["metrics", "--rho", "-0.5", "0", "0.5", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    assert!((v - 2.0 * 3f64.ln()).abs() < 1e-12);
}

#[test]
fn half_space_k_matches_closed_form() {
    let o = qrbound(&["metrics", "--half-space", "--k", "0", "1", "1", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v: f64 = stdout(&o).trim().parse().unwrap();
    let want = (1.0f64 + 2.0 / 4.0).acosh();
    assert!(v >= want - 1e-3 && v <= want + 1e-2, "{v} vs {want}");
}

#[test]
fn point_outside_the_ball_exits_one() {
    let o = qrbound(&["metrics", "--rho", "0", "0", "1.5", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn bad_flags_exit_two() {
    assert_eq!(qrbound(&["metrics", "--rho", "0", "0", "0.5"]).status.code(), Some(2));
    assert_eq!(qrbound(&["metrics", "--bogus"]).status.code(), Some(2));
    assert_eq!(qrbound(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qrbound(&["metrics"]).status.code(), Some(2));
}

#[test]
fn chain_output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for d in [&a, &b] {
        let o = qrbound(&["metrics", "--chain", "--samples", "100", "--seed", "7", "--out", d.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let x = std::fs::read(a.join("chain.csv")).unwrap();
    let y = std::fs::read(b.join("chain.csv")).unwrap();
    assert_eq!(x, y);
    let text = String::from_utf8(x).unwrap();
    assert!(text.starts_with("# n=2 samples=100 seed=7"));
    assert_eq!(text.lines().nth(1), Some("j,k,rho,two_j"));
    for line in text.lines().skip(2) {
        let v: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!(v[0] <= v[1] + 1e-3 && v[1] <= v[2] + 1e-3 && v[2] <= v[3] + 1e-9, "{line}");
    }
    assert_eq!(text.lines().count(), 102);
}

#[test]
fn bundled_profiles_scan_to_their_verdicts() {
    for (kind, file, want) in [
        ("lindelof", "lindelof_diverges.csv", "diverges"),
        ("lindelof", "lindelof_fails.csv", "fails"),
        ("tangential", "tangential_diverges.csv", "diverges"),
        ("tangential", "tangential_fails.csv", "fails"),
        ("koebe", "koebe_diverges.csv", "diverges"),
        ("koebe", "koebe_fails.csv", "fails"),
    ] {
        let o = qrbound(&["scan", "--kind", kind, "--profile", &profile(file)]);
        assert_eq!(o.status.code(), Some(0), "{file}");
        let text = stdout(&o);
        assert_eq!(text.lines().next(), Some("r,T,case"));
        assert_eq!(text.lines().last(), Some(format!("verdict={want}").as_str()), "{file}");
    }
}

#[test]
fn malformed_profiles_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let up = dir.path().join("up.csv");
    std::fs::write(&up, "r,delta,epsilon\n0.1,0.5,0.1\n0.2,0.5,0.1\n0.3,0.5,0.1\n").unwrap();
    let o = qrbound(&["scan", "--kind", "lindelof", "--profile", up.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let junk = dir.path().join("junk.csv");
    std::fs::write(&junk, "r,delta,epsilon\n0.5,0.5,0.1\n0.25,oops,0.1\n").unwrap();
    let o = qrbound(&["scan", "--kind", "lindelof", "--profile", junk.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    let o = qrbound(&["scan", "--kind", "lindelof", "--profile", "/nonexistent/p.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_outside_admissible_range_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "lambda_K = 0.6\n").unwrap();
    let o = qrbound(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = qrbound(&["constants", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn constants_ledger_flags_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "n = 3\nc0 = 2.5\n").unwrap();
    let o = qrbound(&["constants", "--config", cfg.to_str().unwrap(), "--theorem", "koebe", "--r", "0.3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("n,3,configured\n"));
    assert!(text.contains("c0,2.5,configured\n"));
    assert!(text.contains("lambda_K,0.25,configured-default\n"));
    assert!(text.contains("b_n,"));
    assert!(text.contains("alpha3,") && text.contains("gamma4,"));
    let o = qrbound(&["constants", "--n", "2", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reduced_verify_passes_and_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = qrbound(&[
        "verify",
        "--chain-samples",
        "200",
        "--triples",
        "5",
        "--cone-samples",
        "100",
        "--sphere-pairs",
        "4",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("verify.json")).unwrap()).unwrap();
    let checks = report.as_array().unwrap();
    assert!(checks.len() > 25);
    for c in checks {
        for key in ["name", "pass", "observed", "bound", "tolerance"] {
            assert!(c.get(key).is_some(), "{c}");
        }
        assert_eq!(c["pass"], serde_json::Value::Bool(true), "{c}");
    }
}

#[test]
fn capacity_and_boundary_commands() {
    let o = qrbound(&["capacity", "--ring", "1", "2.718281828459045", "--cell-size", "0.0425"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|c| c.parse().unwrap()).collect();
    assert!(row[3].abs() < 0.05, "{text}");

    let o = qrbound(&["boundary", "--curve", "parabola", "--kappa", "1.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("# map=singular_inner"));
    let last: f64 = text.lines().last().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((last - (-2f64).exp()).abs() < 1e-3);

    let o = qrbound(&["boundary", "--map", "stretch", "--alpha", "2", "--dilatation-at", "0.3", "0.4"]);
    assert_eq!(o.status.code(), Some(0));
    let k: f64 = stdout(&o).trim().parse().unwrap();
    assert!((k - 2.0).abs() < 1e-3);

    assert_eq!(qrbound(&["boundary", "--map", "mobius"]).status.code(), Some(2));
    assert_eq!(qrbound(&["capacity"]).status.code(), Some(2));
}

#[test]
fn fixtures_command_reproduces_bundled_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = qrbound(&["fixtures", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    for name in ["lindelof_diverges", "lindelof_fails", "tangential_diverges", "tangential_fails", "koebe_diverges", "koebe_fails"] {
        let file = format!("{name}.csv");
        assert_eq!(std::fs::read(dir.path().join(&file)).unwrap(), std::fs::read(profile(&file)).unwrap(), "{file}");
    }
}
