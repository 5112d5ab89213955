//! End-to-end pipeline behaviors: output files, exit codes, hypothesis-flag
//! semantics, corruption detection, and the installed binary itself.

use std::path::{Path, PathBuf};
use std::process::Command;

use spinchem::cli::{self, EdgeValues, RunConfig};
use spinchem::Error;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spinchem-pipeline-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_single_edge(dir: &Path) -> PathBuf {
    let path = dir.join("single_edge.json");
    std::fs::write(
        &path,
        r#"{"n": 2, "d": 1, "edges": [[1, 2, 1.0]], "kind": "heisenberg", "p": 1.0, "q": 0.5}"#,
    )
    .unwrap();
    path
}

fn write_triangle(dir: &Path) -> PathBuf {
    let path = dir.join("triangle.json");
    std::fs::write(
        &path,
        r#"{"n": 3, "d": 2, "edges": [[1, 2, 1.0], [1, 3, 2.0], [2, 3, 0.5]],
            "kind": "heisenberg", "p": 1.0, "q": 0.5}"#,
    )
    .unwrap();
    path
}

#[test]
fn reduce_writes_expected_files() {
    let dir = scratch("reduce-files");
    let instance = write_single_edge(&dir);
    let config = RunConfig::new(&instance, dir.join("out"));
    let artifacts = cli::cmd_reduce(&config).unwrap();
    assert_eq!(artifacts.files.len(), 5);
    for name in ["hubbard.json", "layout.json", "tensors.json", "tensors.fcidump", "manifest.json"] {
        assert!(dir.join("out").join(name).exists(), "{name} missing");
    }
    // manifest lists the solved omega per edge
    assert!(artifacts.manifest.omegas_solved_from_hoppings);
    assert_eq!(artifacts.manifest.omega.len(), 1);
    assert!(artifacts.manifest.omega[0].2 >= 2.0);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn reduce_triangle_with_overrides() {
    let dir = scratch("reduce-triangle");
    let instance = write_triangle(&dir);
    let mut config = RunConfig::new(&instance, dir.join("out"));
    config.u0 = Some(200.0);
    config.beta = Some(2e4);
    let artifacts = cli::cmd_reduce(&config).unwrap();
    assert_eq!(artifacts.manifest.omega.len(), 3);
    assert!(!artifacts.manifest.u0_hypothesis, "desk-scale u0 cannot clear the threshold");
    let outcome = cli::cmd_verify(&config).unwrap();
    assert_eq!(outcome.exit_code, cli::EXIT_OK);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn missing_input_is_an_input_error() {
    let config = RunConfig::new("/nonexistent/input.json", "/tmp/unused-out");
    let err = cli::cmd_reduce(&config).unwrap_err();
    assert_eq!(cli::exit_code_for(&err), cli::EXIT_INPUT_ERROR);
}

#[test]
fn hypothesis_false_entries_do_not_fail_verify() {
    let dir = scratch("hypothesis-flags");
    let instance = write_single_edge(&dir);
    let mut config = RunConfig::new(&instance, dir.join("out"));
    config.u0 = Some(100.0);
    config.beta = Some(1e4);
    // omega_min = 3 < 4 violates the rounding-lemma hypothesis
    config.omega = Some(EdgeValues::Uniform(3.0));
    cli::cmd_reduce(&config).unwrap();
    let outcome = cli::cmd_verify(&config).unwrap();
    let rounding = outcome.reports.iter().find(|r| r.id == "rounding-error").unwrap();
    assert!(!rounding.hypotheses_hold());
    assert!(!rounding.is_failure());
    // the proportionality report is also hypothesis-gated: omegas were not solved
    let prop = outcome.reports.iter().find(|r| r.id == "proportionality").unwrap();
    assert!(!prop.hypotheses_hold());
    assert_eq!(outcome.exit_code, cli::EXIT_OK);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn per_edge_omega_map_applies() {
    let dir = scratch("per-edge");
    let instance = write_triangle(&dir);
    let mut config = RunConfig::new(&instance, dir.join("out"));
    config.u0 = Some(200.0);
    config.omega = Some("{\"1-2\": 4.0, \"1-3\": 5.0, \"2-3\": 6.0}".parse().unwrap());
    let artifacts = cli::cmd_reduce(&config).unwrap();
    let omegas: std::collections::BTreeMap<(usize, usize), f64> = artifacts
        .manifest
        .omega
        .iter()
        .map(|&(i, j, w)| ((i, j), w))
        .collect();
    assert_eq!(omegas[&(1, 2)], 4.0);
    assert_eq!(omegas[&(1, 3)], 5.0);
    assert_eq!(omegas[&(2, 3)], 6.0);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn corrupted_tensor_file_detected() {
    let dir = scratch("corrupt");
    let instance = write_single_edge(&dir);
    let mut config = RunConfig::new(&instance, dir.join("out"));
    config.u0 = Some(100.0);
    config.beta = Some(1e4);
    cli::cmd_reduce(&config).unwrap();
    // flip a tensor entry
    let tensors_path = dir.join("out").join("tensors.json");
    let text = std::fs::read_to_string(&tensors_path).unwrap();
    let mut parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
    parsed["t"][0][0] = serde_json::json!(42.0);
    std::fs::write(&tensors_path, serde_json::to_string_pretty(&parsed).unwrap()).unwrap();
    let err = cli::cmd_verify(&config).unwrap_err();
    assert!(matches!(err, Error::Validation(_)));
    assert_eq!(cli::exit_code_for(&err), cli::EXIT_INPUT_ERROR);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn zero_weight_edge_dropped_from_layout() {
    let dir = scratch("zero-edge");
    let path = dir.join("inst.json");
    std::fs::write(
        &path,
        r#"{"n": 3, "d": 2, "edges": [[1, 2, 1.0], [2, 3, 0.0]],
            "kind": "heisenberg", "p": 1.0, "q": 0.5}"#,
    )
    .unwrap();
    let mut config = RunConfig::new(&path, dir.join("out"));
    config.u0 = Some(100.0);
    let artifacts = cli::cmd_reduce(&config).unwrap();
    assert_eq!(artifacts.manifest.dropped_edges, vec![(2, 3)]);
    assert_eq!(artifacts.manifest.omega.len(), 1);
    assert!(!artifacts.layout.pair_map.contains_key(&(2, 3)));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_passes_on_four_vertex_instance() {
    let dir = scratch("n4");
    let path = dir.join("inst.json");
    std::fs::write(
        &path,
        r#"{"n": 4, "d": 3,
            "edges": [[1, 2, 1.0], [2, 3, 2.0], [3, 4, 0.5], [1, 4, 1.5], [1, 3, 0.25]],
            "kind": "heisenberg", "p": 1.0, "q": 0.5}"#,
    )
    .unwrap();
    let config = RunConfig::new(&path, dir.join("out"));
    let artifacts = cli::cmd_reduce(&config).unwrap();
    assert_eq!(artifacts.layout.num_primitives(), 16);
    let outcome = cli::cmd_verify(&config).unwrap();
    assert_eq!(outcome.exit_code, cli::EXIT_OK, "{:?}", outcome.reports);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_passes_with_dropped_edge() {
    let dir = scratch("verify-dropped");
    let path = dir.join("inst.json");
    std::fs::write(
        &path,
        r#"{"n": 3, "d": 2, "edges": [[1, 2, 1.0], [2, 3, 0.0]],
            "kind": "heisenberg", "p": 1.0, "q": 0.5}"#,
    )
    .unwrap();
    let mut config = RunConfig::new(&path, dir.join("out"));
    config.u0 = Some(150.0);
    cli::cmd_reduce(&config).unwrap();
    let outcome = cli::cmd_verify(&config).unwrap();
    assert_eq!(outcome.exit_code, cli::EXIT_OK);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn uniform_gamma_override_sets_omega() {
    let dir = scratch("uniform-gamma");
    let instance = write_single_edge(&dir);
    let mut config = RunConfig::new(&instance, dir.join("out"));
    config.u0 = Some(100.0);
    config.alpha = Some(2.0);
    config.gamma = Some(EdgeValues::Uniform(1.5));
    let artifacts = cli::cmd_reduce(&config).unwrap();
    // omega = alpha gamma^2
    assert!((artifacts.manifest.omega[0].2 - 4.5).abs() < 1e-12);
    assert!(!artifacts.manifest.omegas_solved_from_hoppings);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn np_gadget_command_writes_result() {
    let dir = scratch("gadget");
    let path = dir.join("c5.json");
    std::fs::write(
        &path,
        r#"{"n": 5, "d": 2,
            "edges": [[1, 2, 1.0], [2, 3, 1.0], [3, 4, 1.0], [4, 5, 1.0], [1, 5, 1.0]],
            "kind": "heisenberg", "p": 1.0, "q": 0.5}"#,
    )
    .unwrap();
    let mut config = RunConfig::new(&path, dir.join("out"));
    config.k = Some(2);
    let result = cli::cmd_np_gadget(&config).unwrap();
    assert!(result.is_independent_set);
    assert_eq!(result.energy, 0.0);
    assert!(dir.join("out").join("np_result.json").exists());

    // k = 3 exceeds the cycle's independence number
    config.k = Some(3);
    let result = cli::cmd_np_gadget(&config).unwrap();
    assert!(!result.is_independent_set);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn dimension_cap_exit_code() {
    let dir = scratch("cap");
    let instance = write_triangle(&dir);
    let mut config = RunConfig::new(&instance, dir.join("out"));
    config.u0 = Some(200.0);
    cli::cmd_reduce(&config).unwrap();
    // 3-electron sector over 6 modes has dimension 20 > 4
    config.cap = 4;
    let err = cli::cmd_verify(&config).unwrap_err();
    assert_eq!(cli::exit_code_for(&err), cli::EXIT_RESOURCE_CAP);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn binary_roundtrip_and_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_spinchem");
    let dir = scratch("binary");
    let instance = write_single_edge(&dir);
    let out = dir.join("out");

    let status = Command::new(exe)
        .args(["reduce", "--instance"])
        .arg(&instance)
        .arg("--out")
        .arg(&out)
        .args(["--u0", "100", "--beta", "10000"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));

    let output = Command::new(exe)
        .args(["verify", "--instance"])
        .arg(&instance)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("rounding-error"));
    assert!(stdout.contains("PASS"));

    // missing input: exit 2
    let status = Command::new(exe)
        .args(["reduce", "--instance", "/nonexistent.json", "--out"])
        .arg(dir.join("out2"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));

    // np-gadget through the binary
    let status = Command::new(exe)
        .args(["np-gadget", "--instance"])
        .arg(&instance)
        .arg("--out")
        .arg(&out)
        .args(["--k", "1"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    std::fs::remove_dir_all(&dir).ok();
}
