//! End-to-end CLI tests: exit codes, determinism and record pipelines.

use std::path::PathBuf;
use std::process::Command;

fn homalg() -> Command {
    Command::new(env!("CARGO_BIN_EXE_homalg"))
}

fn tmpdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("homalg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn model_command_prints_tables() {
    let out = homalg()
        .args(["model", "sphere", "3", "--max-degree", "8"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("model S3"));
    assert!(text.contains("degree   3: 1"), "{text}");
    assert!(text.contains("degree   2: 1"), "{text}");
}

#[test]
fn cotor_of_s3_is_loop_space() {
    let dir = tmpdir();
    let model_path = dir.join("s3.model");
    let status = homalg()
        .args(["model", "s3", "--format", "record"])
        .arg("--output")
        .arg(&model_path)
        .status()
        .unwrap();
    assert!(status.success());
    // the record feeds back as an input file
    let out = homalg()
        .args(["cotor", "--left", "triv", "--right", "triv", "--max-degree", "9", "--coalgebra"])
        .arg(&model_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in ["degree   0: 1", "degree   2: 1", "degree   4: 1", "degree   6: 1", "degree   8: 1", "degree   1: 0"] {
        assert!(text.contains(line), "missing \"{line}\" in:\n{text}");
    }
}

#[test]
fn record_pipeline_cobar_to_homology() {
    let dir = tmpdir();
    let omega_path = dir.join("omega.rec");
    let status = homalg()
        .args(["cobar", "--coalgebra", "s2", "--max-degree", "6", "--format", "record"])
        .arg("--output")
        .arg(&omega_path)
        .status()
        .unwrap();
    assert!(status.success());
    let out = homalg()
        .args(["homology", "--max-degree", "5", "--input"])
        .arg(&omega_path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for n in 0..=5 {
        assert!(text.contains(&format!("degree   {n}: 1")), "{text}");
    }
}

#[test]
fn deterministic_output() {
    let run = || {
        homalg()
            .args(["ext", "--algebra", "s2xs2", "--max-degree", "6"])
            .output()
            .unwrap()
            .stdout
    };
    let a = run();
    let b = run();
    assert_eq!(a, b, "output must be byte-identical across runs");
    let text = String::from_utf8(a).unwrap();
    // Ext table of S²×S² read cohomologically: 1, 0, 2, 0, 1
    assert!(text.contains("degree   0: 1"));
    assert!(text.contains("degree   2: 2"));
    assert!(text.contains("degree   4: 1"));
}

#[test]
fn usage_error_exits_2() {
    let out = homalg().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn domain_error_exits_1_with_module_message() {
    let out = homalg().args(["model", "sphere", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("hypothesis-violated"), "{err}");
}

#[test]
fn missing_input_file_is_a_domain_error() {
    let out = homalg()
        .args(["homology", "--input", "/nonexistent/never.rec"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
