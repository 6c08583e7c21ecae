//! Validation fixtures: N-Triples files whose first line is
//! `# expect: CODE CODE ...`.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

pub struct Fixture {
    pub name: String,
    pub text: String,
    pub expected: Vec<String>,
}

pub fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures/validation")
}

pub fn load_corpus() -> Vec<Fixture> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus_dir())
        .expect("fixture directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "nt"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|path| {
            let text = std::fs::read_to_string(&path).unwrap();
            let header = text.lines().next().unwrap_or_default();
            let codes = header
                .strip_prefix("# expect:")
                .unwrap_or_else(|| panic!("{}: missing expect header", path.display()));
            let mut expected: Vec<String> = codes.split_whitespace().map(str::to_string).collect();
            expected.sort();
            Fixture {
                name: path.file_stem().unwrap().to_string_lossy().into_owned(),
                text,
                expected,
            }
        })
        .collect()
}

pub const REGISTERED_CODES: [&str; 12] = [
    "E001", "E002", "E003", "E101", "E102", "E201", "W001", "W002", "W101", "W102", "W103", "W104",
];
