use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffnorm")).args(args).env_remove("DIFFNORM_OUT_DIR").output().expect("spawn diffnorm")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn norm_value(args: &[&str]) -> f64 {
    let mut full = vec!["norm", "--format", "json", "--n", "256", "--period", "16"];
    full.extend_from_slice(args);
    json_of(&run(&full))["records"][0]["value"].as_f64().unwrap()
}

fn error_kind(out: &Output) -> String {
    let line = String::from_utf8_lossy(&out.stderr);
    let v: Value = serde_json::from_str(line.lines().last().unwrap()).expect("error record");
    v["error"].as_str().unwrap().to_string()
}

#[test]
fn invalid_exponent_exits_with_two() {
    let out = run(&["norm", "--p", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "invalid_parameter");
}

#[test]
fn unknown_symbol_exits_with_two() {
    let out = run(&["conditions", "--symbol", "wobble"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn nyquist_violation_exits_with_three() {
    // Nyquist π·16/32 lies below the generator radius B = 2
    let out = run(&["norm", "--norm", "triebel", "--n", "16", "--period", "32", "--phi-b", "2"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_kind(&out), "nyquist");
}

#[test]
fn bessel_at_zero_smoothness_is_lp() {
    for p in ["1.5", "3"] {
        let lp = norm_value(&["--norm", "lp", "--f", "bump:2,1", "--p", p, "--w", "power:0.5"]);
        let b = norm_value(&["--norm", "bessel", "--s", "0", "--f", "bump:2,1", "--p", p, "--w", "power:0.5"]);
        assert_eq!(lp, b);
    }
}

#[test]
fn lp_norm_of_gaussian() {
    // ‖e^{−x²}‖_2 = (π/2)^{1/4}
    let v = norm_value(&["--norm", "lp", "--f", "gauss:1", "--p", "2"]);
    assert!((v - (std::f64::consts::PI / 2.0).powf(0.25)).abs() < 1e-12);
}

#[test]
fn empty_corpus_gives_header_only() {
    let out = run(&["equiv-sweep", "--corpus", "", "--s", "0.5", "--p", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body.len(), 1, "{text}");
    assert!(text.starts_with("# command: equiv-sweep\n# config: "));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "n = 256\nperiod = 16.0\nformat = \"json\"\n[norm]\nnorm = \"lp\"\np = 3.0\nf = \"gauss:1\"\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file = json_of(&run(&["--config", cfg, "norm"]));
    assert_eq!(from_file["config"]["resolved"]["p"], 3.0);
    let direct = norm_value(&["--norm", "lp", "--p", "3", "--f", "gauss:1"]);
    assert_eq!(from_file["records"][0]["value"].as_f64().unwrap(), direct);
    // flags override the file
    let flagged = json_of(&run(&["--config", cfg, "norm", "--p", "4"]));
    assert_eq!(flagged["config"]["resolved"]["p"], 4.0);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[norm]\nwobble = 1\n").unwrap();
    let out = run(&["--config", cfg.to_str().unwrap(), "norm"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_kind(&out), "config");
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_diffnorm"))
        .args(["norm", "--norm", "lp", "--n", "64", "--period", "8"])
        .env("DIFFNORM_OUT_DIR", dir.path().join("reports"))
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("reports/norm.csv")).unwrap();
    assert!(text.contains("norm,value,estimator,std_error,excluded_levels"));
}

#[test]
fn function_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.csv");
    let g = diffnorm::make_grid(1, 256, 16.0).unwrap();
    let f = diffnorm::sample(&g, &"modgauss:1,2".parse().unwrap(), diffnorm::TargetSpace::Scalar).unwrap();
    f.write_csv(std::fs::File::create(&path).unwrap()).unwrap();
    let from_file = norm_value(&["--norm", "bessel", "--f-file", path.to_str().unwrap(), "--s", "0.5", "--p", "3"]);
    let direct = norm_value(&["--norm", "bessel", "--f", "modgauss:1,2", "--s", "0.5", "--p", "3"]);
    assert!((from_file - direct).abs() < 1e-12 * direct);
}

#[test]
fn conditions_report_for_sinc() {
    let v = json_of(&run(&["conditions", "--symbol", "sinc", "--gamma", "0.9"]));
    assert_eq!(v["command"], "conditions");
    let records = v["records"].as_array().unwrap();
    assert!(records.iter().any(|r| r["quantity"] == "C_0"));
}
