//! End-to-end tests of the `sdcircle` binary: exit codes, file outputs,
//! numeric formatting, and byte-level determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sdcircle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdcircle"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn small_config(dir: &Path) -> String {
    let path = dir.join("config.toml");
    fs::write(
        &path,
        r#"
seed = 11
n = 151
update = true

[signal]
bandwidth = 5
constant = 0.15
harmonics = [ { k = 5, sin = 0.05 }, { k = 2, cos = 0.04 } ]

[[schemes]]
order = 1

[[schemes]]
order = 2
tap_count = 4

[sweep]
lambdas = [4, 8, 16, 32, 64, 128]
"#,
    )
    .expect("write config");
    path.to_string_lossy().into_owned()
}

/// Every float cell uses C-style %.12e formatting.
fn assert_e12_cells(csv: &str, float_columns: &[usize]) {
    for line in csv.lines().skip(1).take(50) {
        let cells: Vec<&str> = line.split(',').collect();
        for &col in float_columns {
            let cell = cells[col];
            let ok = cell
                .strip_prefix('-')
                .unwrap_or(cell)
                .split_once('e')
                .is_some_and(|(mantissa, exp)| {
                    mantissa.len() == 14
                        && mantissa.as_bytes()[1] == b'.'
                        && (exp.starts_with('+') || exp.starts_with('-'))
                        && exp.len() >= 3
                });
            assert!(ok, "cell {cell:?} in column {col} is not %.12e formatted");
        }
    }
}

#[test]
fn figure1_emits_panels_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let out = dir.path().join("out");
    let result = sdcircle(&[
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
        "figure1",
    ]);
    assert!(result.status.success(), "{result:?}");

    let panel_b = fs::read_to_string(out.join("figure1_panel_b.csv")).unwrap();
    assert!(panel_b.starts_with("t,f,f_r,f_r_updated,err_classical,err_updated,e_tilde\n"));
    assert_e12_cells(&panel_b, &[0, 1, 2, 3, 4, 5, 6]);
    assert_eq!(panel_b.lines().count(), 1511); // header + 10*N rows

    let panel_a = fs::read_to_string(out.join("figure1_panel_a.csv")).unwrap();
    assert!(panel_a.starts_with("t,e_tilde_order1,e_tilde_order2_k4\n"));
    assert!(out.join("figure1_panel_c.csv").exists());
    for panel in ["a", "b", "c"] {
        let svg = fs::read_to_string(out.join(format!("figure1_panel_{panel}.svg"))).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("polyline"));
    }

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("figure1_summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["n"], 151);
    let schemes = summary["schemes"].as_array().unwrap();
    assert_eq!(schemes.len(), 2);
    for scheme in schemes {
        assert!(scheme["remainder_after"].as_f64().unwrap().abs() < 1e-9);
    }
}

#[test]
fn identical_config_and_seed_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let out1 = dir.path().join("one");
    let out2 = dir.path().join("two");
    for out in [&out1, &out2] {
        let result = sdcircle(&[
            "--config",
            &config,
            "--out",
            out.to_str().unwrap(),
            "figure1",
        ]);
        assert!(result.status.success());
    }
    for name in [
        "figure1_panel_a.csv",
        "figure1_panel_b.csv",
        "figure1_panel_c.csv",
        "figure1_summary.json",
        "figure1_panel_a.svg",
    ] {
        let a = fs::read(out1.join(name)).unwrap();
        let b = fs::read(out2.join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identical runs");
    }
}

#[test]
fn quantize_dumps_trace() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let out = dir.path().join("out");
    let result = sdcircle(&[
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
        "quantize",
    ]);
    assert!(result.status.success());
    let trace = fs::read_to_string(out.join("quantize_trace.csv")).unwrap();
    assert!(trace.starts_with("n,y,q,v,u\n"));
    assert_eq!(trace.lines().count(), 152);
    for line in trace.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        assert!(cells[2] == "1" || cells[2] == "-1", "bit cell {:?}", cells[2]);
    }
    assert_e12_cells(&trace, &[1, 3, 4]);
}

#[test]
fn verify_passes_on_a_valid_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let result = sdcircle(&["--config", &config, "verify"]);
    assert!(result.status.success(), "{result:?}");
    let stdout = String::from_utf8(result.stdout).unwrap();
    assert!(stdout.contains("PASS interpolation-exactness"));
    assert!(stdout.contains("PASS update-parity-order1"));
    assert!(!stdout.contains("FAIL"));
}

#[test]
fn sweep_writes_series_and_slopes() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let out = dir.path().join("out");
    let result = sdcircle(&[
        "--config",
        &config,
        "--out",
        out.to_str().unwrap(),
        "--order",
        "1",
        "--no-update",
        "sweep",
    ]);
    assert!(result.status.success(), "{result:?}");
    let csv = fs::read_to_string(out.join("sweep_order1_classical.csv")).unwrap();
    assert!(csv.starts_with("n,sup_error,bound\n"));
    assert_eq!(csv.lines().count(), 7);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("sweep_summary.json")).unwrap())
            .unwrap();
    assert!(summary["all_thresholds_met"].as_bool().unwrap());
    assert!(out.join("sweep.svg").exists());
}

#[test]
fn sweep_exits_two_when_thresholds_missed() {
    // a pre-asymptotic oversampling range misses the second-order slope
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let result = sdcircle(&[
        "--sweep",
        "1,1.3,1.7,2.2,3,4",
        "--order",
        "2",
        "--tabs",
        "4",
        "--out",
        out.to_str().unwrap(),
        "sweep",
    ]);
    assert_eq!(result.status.code(), Some(2), "{result:?}");
    let stdout = String::from_utf8(result.stdout).unwrap();
    assert!(stdout.contains("MISSED"));
}

#[test]
fn config_errors_exit_one() {
    // unknown preset
    let result = sdcircle(&["--preset", "not-a-preset", "figure1"]);
    assert_eq!(result.status.code(), Some(1));

    // undersampled n
    let result = sdcircle(&["--n", "12", "figure1"]);
    assert_eq!(result.status.code(), Some(1));

    // malformed config file
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    fs::write(&bad, "schemes = 3").unwrap();
    let result = sdcircle(&["--config", bad.to_str().unwrap(), "verify"]);
    assert_eq!(result.status.code(), Some(1));

    // unknown flag
    let result = sdcircle(&["--frequency", "3", "figure1"]);
    assert_eq!(result.status.code(), Some(1));
}

#[test]
fn help_and_version_exit_zero() {
    let result = sdcircle(&["--help"]);
    assert!(result.status.success());
    let stdout = String::from_utf8(result.stdout).unwrap();
    assert!(stdout.contains("figure1"));
    assert!(stdout.contains("sweep"));
    assert!(stdout.contains("quantize"));
    assert!(stdout.contains("verify"));

    let result = sdcircle(&["--version"]);
    assert!(result.status.success());
}
