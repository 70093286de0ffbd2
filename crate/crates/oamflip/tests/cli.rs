//! End-to-end checks of the `oamflip` binary: subcommand behavior, output
//! formats, and the exit-code contract (0 ok, 1 validation failure, 2 config
//! or data error, 3 physics error).

use std::path::PathBuf;
use std::process::{Command, Output};

fn exe() -> &'static str {
    env!("CARGO_BIN_EXE_oamflip")
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let mut path = std::env::temp_dir();
    path.push(format!("oamflip-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).expect("write temp file");
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(exe())
        .args(args)
        .output()
        .expect("spawn oamflip")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

const FLIP_CONFIG: &str = r#"{
  "beam": {"p": 0, "ell": 1, "wavelength_au": 10.0, "rayleigh_range_au": 3141.5926535897932},
  "atom_in": {"n": 2, "l": 1, "m": -1},
  "atom_out": {"n": 2, "l": 1, "m": 1},
  "scattering": {"mode": "forward_flip", "theta_deg": 0.0, "elastic": true, "polarization_overlap": 1.0}
}"#;

const GAUSSIAN_CONFIG: &str = r#"{
  "beam": {"p": 0, "ell": 0, "wavelength_au": 100.0, "rayleigh_range_au": 3.141592653589793e6},
  "atom_in": {"n": 1, "l": 0, "m": 0},
  "atom_out": {"n": 1, "l": 0, "m": 0},
  "scattering": {"mode": "forward_flip", "theta_deg": 0.0, "elastic": true, "polarization_overlap": 1.0}
}"#;

#[test]
fn element_evaluates_a_gaussian_channel() {
    let cfg = write_temp("gauss.json", GAUSSIAN_CONFIG);
    let out = run(&["element", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let abs = record["abs_value"].as_f64().unwrap();
    let want = 2.0 / (std::f64::consts::PI * 1e8);
    assert!((abs - want).abs() / want < 1e-5, "abs_value = {abs}");
    assert_eq!(record["method"], "forward_quadrature");
    assert_eq!(record["rescale_power"], 0);
    std::fs::remove_file(cfg).ok();
}

#[test]
fn element_reports_forbidden_channels_as_zero() {
    let forbidden = FLIP_CONFIG.replace(r#""m": -1"#, r#""m": 0"#).replace(
        r#""atom_out": {"n": 2, "l": 1, "m": 1}"#,
        r#""atom_out": {"n": 2, "l": 1, "m": 0}"#,
    );
    let cfg = write_temp("forbidden.json", &forbidden);
    let out = run(&["element", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let record: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(record["value_re"].as_f64().unwrap(), 0.0);
    assert_eq!(record["value_im"].as_f64().unwrap(), 0.0);
    assert_eq!(record["method"], "forward_quadrature");
    std::fs::remove_file(cfg).ok();
}

#[test]
fn element_exit_codes_follow_the_error_class() {
    // L = N is a physics violation: exit 3.
    let bad_physics = FLIP_CONFIG.replace(
        r#""atom_in": {"n": 2, "l": 1, "m": -1}"#,
        r#""atom_in": {"n": 2, "l": 2, "m": -1}"#,
    );
    let cfg = write_temp("badphys.json", &bad_physics);
    let out = run(&["element", cfg.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    std::fs::remove_file(cfg).ok();

    // Malformed JSON and unknown fields are config errors: exit 2.
    let cfg = write_temp("badjson.json", "{ not json");
    let out = run(&["element", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(cfg).ok();

    let with_unknown = FLIP_CONFIG.replace(r#""p": 0"#, r#""p": 0, "px": 1"#);
    let cfg = write_temp("unknown.json", &with_unknown);
    let out = run(&["element", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(cfg).ok();
}

#[test]
fn element_output_is_deterministic() {
    let cfg = write_temp("det.json", FLIP_CONFIG);
    let a = run(&["element", cfg.to_str().unwrap()]);
    let b = run(&["element", cfg.to_str().unwrap()]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    std::fs::remove_file(cfg).ok();
}

#[test]
fn sweep_emits_grid_ordered_csv() {
    let template = FLIP_CONFIG.replace(
        r#""wavelength_au": 10.0, "rayleigh_range_au": 3141.5926535897932"#,
        r#""wavelength_au": 10.0"#,
    );
    let cfg = write_temp("sweep.json", &template);
    let out = run(&[
        "sweep",
        cfg.to_str().unwrap(),
        "--axis",
        "waist",
        "--grid",
        "100,200,400",
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "axis_name,axis_value,re_M,im_M,abs_M,err_est,closed_form_abs_M,rel_diff,error"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r[0] == "waist"));
    let cf: Vec<f64> = rows.iter().map(|r| r[6].parse().unwrap()).collect();
    assert!((cf[1] / cf[0] - 0.0625).abs() < 1e-12);

    // Feeding the CSV back through `fit` recovers the waist exponent.
    let csv_path = write_temp("sweep.csv", &text);
    let fit_out = run(&["fit", csv_path.to_str().unwrap()]);
    assert!(fit_out.status.success());
    let fit: serde_json::Value = serde_json::from_str(&stdout(&fit_out)).unwrap();
    let slope = fit["slope"].as_f64().unwrap();
    assert!((slope + 4.0).abs() < 1e-2, "slope = {slope}");
    std::fs::remove_file(cfg).ok();
    std::fs::remove_file(csv_path).ok();
}

#[test]
fn sweep_rejects_bad_grids() {
    let template = FLIP_CONFIG.replace(
        r#""wavelength_au": 10.0, "rayleigh_range_au": 3141.5926535897932"#,
        r#""wavelength_au": 10.0"#,
    );
    let cfg = write_temp("badgrid.json", &template);
    for grid in ["", "100", "100,100", "100,300,200"] {
        let out = run(&[
            "sweep",
            cfg.to_str().unwrap(),
            "--axis",
            "waist",
            "--grid",
            grid,
        ]);
        assert_eq!(out.status.code(), Some(2), "grid {grid:?}");
    }
    std::fs::remove_file(cfg).ok();
}

#[test]
fn fit_rejects_non_positive_data() {
    let csv = "axis_name,axis_value,re_M,im_M,abs_M,err_est,closed_form_abs_M,rel_diff,error\n\
               waist,1.0e0,,,0.0e0,,,,\n\
               waist,2.0e0,,,1.0e0,,,,\n";
    let path = write_temp("zero.csv", csv);
    let out = run(&["fit", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(path).ok();
}

#[test]
fn validate_mutation_flag_fails_the_falsifier() {
    let out = run(&["validate", "--mutate-gouy"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("gouy parity falsifier"));
    assert!(text.contains("FAIL"));
    assert!(text.contains("signed (mutated)"));
}

#[test]
fn validate_tight_profile_keeps_the_pass_set() {
    let out = run(&["validate", "--profile", "tight"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("profile: tight"));
    assert!(!text.contains("FAIL"));

    let bad = run(&["validate", "--profile", "sloppy"]);
    assert_eq!(bad.status.code(), Some(2));
}
