use std::path::Path;
use std::process::{Command, Output};

use ncdirac::config::RunConfig;

// Coarse oracle grid and a single state keep each invocation well under a second.
const FAST: &str = r#"
[potential]
V0 = 1.0
a = -4.0
b = 1.0
g = 0.0
alpha = 1.0
r_c = 0.5
M = 1.0

[nc]
theta = 1e-3

[field]
e = 1.0
k = 1.0
q = 0.1

[[states]]
n = 0
l = 0
m_l = 0

[oracle]
n_points = 600
richardson = false
"#;

fn run(dir: &Path, config: &str, args: &[&str]) -> Output {
    let cfg = dir.join("config.toml");
    std::fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_ncdirac"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn unknown_axis_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), FAST, &["scan", "--axis", "beta", "--values", "1,2"]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn empty_range_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), FAST, &["scan", "--axis", "theta", "--range", "1e-3:1e-4", "--steps", "3"]);
    assert_eq!(code(&out), 2);
    let out = run(dir.path(), FAST, &["scan", "--axis", "theta", "--range", "0:1e-3", "--steps", "0"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn unknown_config_key_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = FAST.replace("[nc]\ntheta = 1e-3", "[nc]\ntheta = 1e-3\nphi = 2.0");
    let out = run(dir.path(), &bad, &["solve"]);
    assert_eq!(code(&out), 2);
    assert!(!dir.path().join("out/spectrum.csv").exists());
}

#[test]
fn solve_writes_spectrum_and_round_trippable_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), FAST, &["solve"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out/spectrum.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap().split(',').count(), 18);
    assert_eq!(lines.count(), 1);

    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/run.json")).unwrap()).unwrap();
    let text = sidecar["effective_config"].as_str().unwrap();
    let parsed = RunConfig::from_toml(text).unwrap();
    assert_eq!(parsed.to_toml(), text);
    assert_eq!(parsed.oracle.n_points, 600);
}

#[test]
fn zero_depth_reports_no_bound_state() {
    let dir = tempfile::tempdir().unwrap();
    let flat = FAST.replace("V0 = 1.0", "V0 = 0.0");
    let out = run(dir.path(), &flat, &["solve"]);
    let csv = std::fs::read_to_string(dir.path().join("out/spectrum.csv")).unwrap();
    let row = csv.lines().nth(1).unwrap();
    assert!(row.contains("NoRoot") || row.contains("NoBoundState"), "{row}");
    assert_ne!(code(&out), 2);
}

#[test]
fn theta_scan_is_proportional() {
    let dir = tempfile::tempdir().unwrap();
    let with_l1 = FAST.replace("[oracle]", "[[states]]\nn = 0\nl = 1\nm_l = 1\n\n[oracle]");
    let out = run(dir.path(), &with_l1, &["scan", "--axis", "theta", "--range", "0:4e-3", "--steps", "5"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_path(dir.path().join("out/scan.csv")).unwrap();
    let headers = reader.headers().unwrap().clone();
    assert_eq!(headers.len(), 11);
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let (value, l, e0, de) = (col("value"), col("l"), col("E0"), col("dE_theta_quad"));
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 10);
    for ell in ["0", "1"] {
        let series: Vec<(f64, &str, f64)> = rows
            .iter()
            .filter(|r| &r[l] == ell)
            .map(|r| (r[value].parse().unwrap(), &r[e0], r[de].parse().unwrap()))
            .collect();
        assert_eq!(series.len(), 5);
        assert!(series.windows(2).all(|w| w[0].1 == w[1].1));
        let slope = series[4].2 / series[4].0;
        for (theta, _, d) in &series {
            assert!((d - slope * theta).abs() <= 1e-12 * series[4].2.abs(), "l={ell} theta={theta} dE={d}");
        }
        if ell == "0" {
            assert_eq!(slope, 0.0);
        } else {
            assert_ne!(slope, 0.0);
        }
    }
}

#[test]
fn clap_errors_exit_two() {
    let out = Command::new(env!("CARGO_BIN_EXE_ncdirac")).arg("frobnicate").output().unwrap();
    assert_eq!(code(&out), 2);
    let out = Command::new(env!("CARGO_BIN_EXE_ncdirac"))
        .args(["scan", "--axis", "theta", "--steps", "3"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}
