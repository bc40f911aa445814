#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use segre::graded::RingSpec;

pub fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    root.to_string_lossy().into_owned()
}

pub fn ring(name: &str) -> RingSpec {
    segre::cli::load_ring(&data(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// Every ring file shipped in `data/`.
pub fn ring_corpus() -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data");
    let mut names: Vec<String> = std::fs::read_dir(dir)
        .expect("data directory")
        .filter_map(|e| e.ok())
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".ring"))
        .collect();
    names.sort();
    names
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the real binary.
pub fn segre(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_segre"))
        .args(args)
        .output()
        .expect("spawn segre");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).trim_end().to_string(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

/// Runs the CLI in-process.
pub fn run_in_process(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("segre").chain(args.iter().copied());
    let code = segre::cli::run(argv, &mut out, &mut err);
    Run {
        code,
        stdout: String::from_utf8_lossy(&out).trim_end().to_string(),
        stderr: String::from_utf8_lossy(&err).into_owned(),
    }
}

pub fn json(run: &Run) -> serde_json::Value {
    serde_json::from_str(&run.stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {}", run.stdout))
}
