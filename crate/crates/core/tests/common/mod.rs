//! Shared fixtures for the integration tests.

#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;

use projcalc::expr::{self, Environment, Program};
use projcalc::infer::AxiomMode;

pub struct CorpusProgram {
    pub name: String,
    pub text: String,
    pub program: Program,
    pub env: Environment,
    pub mode: AxiomMode,
}

/// Programs under `tests/corpus`, sorted by name. Each file declares its
/// axiom mode on a `# mode: zfc|pd` line.
pub fn corpus() -> Vec<CorpusProgram> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut paths: Vec<PathBuf> = fs::read_dir(&dir)
        .expect("corpus directory exists")
        .map(|e| e.expect("readable entry").path())
        .filter(|p| p.extension().is_some_and(|e| e == "pjc"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let name = path.file_stem().unwrap().to_string_lossy().into_owned();
            let text = fs::read_to_string(&path).unwrap();
            let mode = match text.lines().find_map(|l| l.strip_prefix("# mode: ")) {
                Some("pd") => AxiomMode::ZfcPd,
                Some("zfc") => AxiomMode::Zfc,
                other => panic!("{name}: bad mode line {other:?}"),
            };
            let program = expr::parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            let env = Environment::from_program(&program).unwrap_or_else(|e| panic!("{name}: {e}"));
            CorpusProgram { name, text, program, env, mode }
        })
        .collect()
}
