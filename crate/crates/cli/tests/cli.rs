use std::path::PathBuf;
use std::process::{Command, Output};

use spintensor::{DerivativeMode, Orientation};
use spintensor_cli::{run_scene, run_verify_canonical, run_verify_scene, CorruptSpec, CorruptSpecError, SceneConfig};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spintensor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scene_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenes").join(format!("{name}.json"))
}

fn scene(name: &str) -> SceneConfig {
    SceneConfig::load(&scene_path(name)).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn canonical_json_report_has_headline_fields() {
    let out = bin(&["verify-canonical", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["overall_pass"], true);
    assert_eq!(v["cubic_total_cases"], 256);
    assert_eq!(v["identities"].as_array().unwrap().len(), 12);
    assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn json_keys_are_sorted() {
    let text = run_verify_canonical(Orientation::Right, None).unwrap().to_json();
    let top: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \"") && !l.starts_with("   "))
        .map(|l| l.trim().split('"').nth(1).unwrap())
        .collect();
    let mut sorted = top.clone();
    sorted.sort();
    assert_eq!(top, sorted);
}

#[test]
fn left_orientation_passes() {
    let out = bin(&["verify-canonical", "--orientation", "left", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["orientation"], "left");
}

#[test]
fn corrupted_entry_fails_and_lists_tuples() {
    let out = bin(&["verify-canonical", "--corrupt", "0,1,1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["overall_pass"], false);
    let cubic = v["identities"].as_array().unwrap().iter().find(|r| r["identity_id"] == "cubic").unwrap();
    assert_eq!(cubic["passed"], false);
    let failures = cubic["failures"].as_array().unwrap();
    assert!(!failures.is_empty());
    assert_eq!(failures[0]["index"].as_array().unwrap().len(), 5);
}

#[test]
fn corrupting_a_zero_entry_is_a_usage_error() {
    assert_eq!(
        run_verify_canonical(Orientation::Right, Some(CorruptSpec { p: 3, r: 1, rbar: 2 })).unwrap_err(),
        CorruptSpecError::ZeroEntry { p: 3, r: 1, rbar: 2 }
    );
    let out = bin(&["verify-canonical", "--corrupt", "3,1,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("is zero"));
    assert_eq!(bin(&["verify-canonical", "--corrupt", "9,9"]).status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        vec!["verify-canonical", "--format", "json"],
        vec!["verify-canonical", "--format", "text"],
    ] {
        assert_eq!(bin(&args).stdout, bin(&args).stdout);
    }
    let path = scene_path("spin-rescaled");
    let args = ["verify-scene", "--config", path.to_str().unwrap(), "--format", "json"];
    assert_eq!(bin(&args).stdout, bin(&args).stdout);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("report.json");
    let out = bin(&["verify-canonical", "--format", "json", "--out", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&file).unwrap();
    assert_eq!(written, bin(&["verify-canonical", "--format", "json"]).stdout);
}

#[test]
fn bundled_scenes_pass() {
    for name in ["flat", "conformal", "spin-rescaled"] {
        let path = scene_path(name);
        let out = bin(&["verify-scene", "--config", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stdout));
        assert!(String::from_utf8_lossy(&out.stdout).ends_with("overall: PASS\n"));
    }
}

#[test]
fn flat_scene_residuals_are_exactly_zero() {
    let report = run_scene(&scene("flat")).unwrap();
    for p in &report.points {
        assert_eq!(p.residuals().len(), 13);
        for r in p.residuals() {
            assert_eq!(r.max_residual, 0.0, "{}", r.check);
        }
    }
}

#[test]
fn conformal_scene_has_five_points_within_tolerance() {
    let report = run_scene(&scene("conformal")).unwrap();
    assert_eq!(report.points.len(), 5);
    assert!(report.points.iter().flat_map(|p| p.residuals()).all(|r| r.max_residual <= 1e-9));
}

#[test]
fn finite_difference_with_tiny_tolerance_fails() {
    let mut config = scene("spin-rescaled");
    config.derivative_mode = DerivativeMode::FiniteDifference;
    config.tolerance = Some(1e-15);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tight.json");
    std::fs::write(&path, config.to_json()).unwrap();
    let out = bin(&["verify-scene", "--config", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["overall_pass"], false);

    config.tolerance = None;
    assert!(run_verify_scene(&config).unwrap().overall_pass);
}

#[test]
fn config_round_trip_gives_same_residuals() {
    let original = scene("spin-rescaled");
    let reparsed = SceneConfig::from_json(&original.to_json()).unwrap();
    assert_eq!(reparsed, original);
    let a = run_verify_scene(&original).unwrap().to_json();
    let b = run_verify_scene(&reparsed).unwrap().to_json();
    assert_eq!(a, b);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let mut v: serde_json::Value = serde_json::from_str(&scene("flat").to_json()).unwrap();
    v["metric"][1][1] = "-1 +".into();
    std::fs::write(&path, v.to_string()).unwrap();
    let out = bin(&["verify-scene", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("metric[1][1]") && err.contains("position 4"), "{err}");

    let missing = dir.path().join("missing.json");
    assert_eq!(bin(&["verify-scene", "--config", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn degenerate_points_are_reported_per_point() {
    let mut config = scene("flat");
    config.frame[0][0] = "x1".into();
    config.sample_points = vec![[0.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]];
    let report = run_scene(&config).unwrap();
    assert!(!report.passed);
    assert!(report.points[0].error.as_deref().unwrap().contains("degenerate"));
    assert!(report.points[1].error.is_none());
}

#[test]
fn singular_spin_transform_fails_the_scene() {
    let mut config = scene("flat");
    config.equipment = spintensor_cli::EquipmentSpec::SpinTransform([
        ["x1".into(), "0".into()],
        ["0".into(), "1".into()],
    ]);
    let report = run_scene(&config).unwrap();
    assert!(!report.passed);
    assert!(report.error.is_some());
}
