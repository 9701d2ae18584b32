#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use privacy_funnel::ingest::write_joint;
use privacy_funnel::{EmpiricalJoint, Joint};

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn pfunnel(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_pfunnel"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

pub fn save_joint(dir: &Path, name: &str, joint: Joint<f64>) -> PathBuf {
    let path = dir.join(name);
    write_joint(&path, &EmpiricalJoint::from_joint(joint)).unwrap();
    path
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Rows of a CSV with a header, split on commas.
pub fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

pub fn float(v: &str) -> f64 {
    v.parse().unwrap()
}

pub fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn census_fixture() -> PathBuf {
    workspace_root().join("crates/core/tests/fixtures/census_synthetic.data")
}
