//! End-to-end checks of the command-line binary: output contracts, exit
//! codes, and byte-level determinism.

use std::process::{Command, Output};

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rosetta-sim"))
}

fn run(args: &[&str]) -> Output {
    binary().args(args).output().expect("binary launches")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 output")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 output")
}

/// Data rows of a CSV body, trailing comment lines excluded.
fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .filter(|line| !line.is_empty() && !line.starts_with('#'))
        .map(|line| {
            line.split(',')
                .map(|cell| cell.parse::<f64>().expect("numeric cell"))
                .collect()
        })
        .collect()
}

fn round12(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap()
}

#[test]
fn peel_off_json_matches_the_closed_form() {
    let output = run(&["peel-off", "--photons", "2", "--reflectivity", "0.5"]);
    assert!(output.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(json["schema_version"], "1");
    assert_eq!(json["success_probability"].as_f64(), Some(0.0625));
    assert_eq!(json["amplitude_a"].as_f64(), Some(0.25));
    assert_eq!(json["conditional_fidelity"].as_f64(), Some(1.0));
}

#[test]
fn peel_off_optimize_reports_the_inverse_n_law() {
    let output = run(&["peel-off", "--photons", "10", "--optimize"]);
    assert!(output.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(json["analytic_reflectivity"].as_f64(), Some(0.1));
    let found = json["optimized_reflectivity"].as_f64().unwrap();
    assert!((found - 0.1).abs() < 1e-6, "{found}");
}

#[test]
fn lithography_csv_is_the_n_fold_fringe() {
    let output = run(&["lithography", "--photons", "4", "--phase-points", "181"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert_eq!(text.lines().next(), Some("phi,rate"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 181);
    for row in rows {
        let expected = (1.0 + (4.0 * row[0]).cos()) / 2.0;
        assert!((row[1] - expected).abs() < 1e-9, "phi={}", row[0]);
    }
}

#[test]
fn rosetta_fringes_align_after_the_offset() {
    let output = run(&["rosetta"]);
    assert!(output.status.success());
    let text = stdout(&output);
    assert_eq!(text.lines().next(), Some("phi,circuit,interferometer,difference"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 101);
    for row in rows {
        let fringe = (1.0 - row[0].cos()) / 2.0;
        assert!((row[1] - fringe).abs() < 1e-11, "phi={}", row[0]);
        assert!(row[3].abs() < 1e-10, "difference {} at phi={}", row[3], row[0]);
    }
}

#[test]
fn variance_catalog_keeps_its_key_contract() {
    let output = run(&["variance-catalog", "--photons", "12"]);
    assert!(output.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(json["uniform"].as_f64(), Some(14.0));
    assert_eq!(json["extreme"].as_f64(), Some(36.0));
    assert_eq!(json["binomial"].as_f64(), Some(3.0));
}

#[test]
fn ghz_json_numbers_survive_a_round_trip() {
    let output = run(&["ghz", "--photons", "8"]);
    assert!(output.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    let object = json.as_object().unwrap();
    assert!(object.len() >= 8);
    for (key, value) in object {
        if let Some(x) = value.as_f64() {
            assert_eq!(x.to_bits(), round12(x).to_bits(), "field {key} not 12-digit clean");
        }
    }
    let delta = json["delta_phi"].as_f64().unwrap();
    assert!((delta - 0.125).abs() < 1e-9);
}

#[test]
fn scaling_csv_carries_the_exponent_trailer() {
    let args = [
        "scaling",
        "--scheme",
        "noon",
        "--photons-list",
        "2,4,8,32",
        "--trials",
        "100",
        "--repetitions",
        "200",
        "--seed",
        "5",
    ];
    let first = run(&args);
    assert!(first.status.success());
    let text = stdout(&first);
    assert_eq!(text.lines().next(), Some("N,delta_phi"));
    let trailer = text.lines().last().unwrap();
    assert!(trailer.starts_with("# exponent="), "{trailer}");
    let exponent: f64 = trailer.trim_start_matches("# exponent=").parse().unwrap();
    assert!((exponent - -1.0).abs() < 0.2, "{exponent}");

    // Identical argv must reproduce identical bytes.
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn scaling_json_mirrors_the_table() {
    let output = run(&[
        "scaling",
        "--scheme",
        "separable",
        "--photons-list",
        "1,2,5,10",
        "--trials",
        "100",
        "--repetitions",
        "200",
        "--seed",
        "7",
        "--format",
        "json",
    ]);
    assert!(output.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&output)).unwrap();
    assert_eq!(json["scheme"], "separable");
    assert_eq!(json["N"].as_array().unwrap().len(), 4);
    assert_eq!(json["delta_phi"].as_array().unwrap().len(), 4);
    let exponent = json["fitted_exponent"].as_f64().unwrap();
    assert!((exponent - -0.5).abs() < 0.15, "{exponent}");
}

#[test]
fn unknown_flags_exit_two_with_usage() {
    let output = run(&["peel-off", "--bogus"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("Usage"));
    assert!(stdout(&output).is_empty());

    let bare = run(&[]);
    assert_eq!(bare.status.code(), Some(2));
}

#[test]
fn help_exits_zero_on_stdout() {
    let output = run(&["--help"]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).contains("Usage"));
}

#[test]
fn semantic_argument_errors_exit_two() {
    let output = run(&["sensitivity", "--scheme", "yurke", "--photons", "4"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("odd"));

    let output = run(&["peel-off", "--photons", "1"]);
    assert_eq!(output.status.code(), Some(2));

    let output = run(&[
        "scaling",
        "--scheme",
        "noon",
        "--photons-list",
        "2,4,8,16",
        "--trials",
        "100",
        "--repetitions",
        "200",
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unwritable_output_path_exits_one() {
    let output = run(&["hom", "--output", "/nonexistent-dir-for-test/report.json"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("cannot write"));
}

#[test]
fn basis_cap_guard_exits_one() {
    let output = binary()
        .args(["sensitivity", "--scheme", "dual-fock", "--photons", "3", "--phase-points", "3"])
        .env("ROSETTA_SIM_BASIS_CAP", "5")
        .output()
        .expect("binary launches");
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("cap"));
}

#[test]
fn output_file_matches_stdout_bytes() {
    let dir = std::env::temp_dir().join("rosetta-sim-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("hom.json");
    let to_file = binary().args(["hom", "--output", path.to_str().unwrap()]).output().unwrap();
    assert!(to_file.status.success());
    assert!(to_file.stdout.is_empty());
    let direct = run(&["hom"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
