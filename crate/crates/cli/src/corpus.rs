//! The bundled example corpus with golden reports, compiled into the binary.

use crate::report::{emit_json, run};
use crate::spec::RunSpec;

pub struct CorpusEntry {
    pub name: &'static str,
    pub spec: &'static str,
    pub golden: &'static str,
}

macro_rules! corpus_entry {
    ($name:literal) => {
        CorpusEntry {
            name: $name,
            spec: include_str!(concat!("../corpus/", $name, ".spec.json")),
            golden: include_str!(concat!("../corpus/", $name, ".golden.json")),
        }
    };
}

pub const CORPUS: &[CorpusEntry] = &[
    corpus_entry!("p3_multiplicative"),
    corpus_entry!("p3_additive"),
    corpus_entry!("p3_lubin_tate_1"),
    corpus_entry!("p3_lubin_tate_2"),
    corpus_entry!("p3_supersingular"),
    corpus_entry!("p3_ordinary"),
    corpus_entry!("p3_product_equal_height"),
    corpus_entry!("p3_product_mixed_height"),
    corpus_entry!("p5_multiplicative"),
    corpus_entry!("p5_additive"),
    corpus_entry!("p5_lubin_tate_1"),
    corpus_entry!("p5_lubin_tate_2"),
    corpus_entry!("p5_supersingular"),
    corpus_entry!("p5_ordinary"),
    corpus_entry!("p5_product_equal_height"),
];

pub struct CorpusOutcome {
    pub name: &'static str,
    pub matches: bool,
}

/// Runs one corpus entry and returns its current JSON report.
pub fn run_entry(entry: &CorpusEntry) -> anyhow::Result<String> {
    let spec = RunSpec::parse(entry.spec)?;
    Ok(emit_json(&run(&spec, false)))
}

/// Compares every entry against its golden, byte for byte.
pub fn check_all() -> anyhow::Result<Vec<CorpusOutcome>> {
    let mut out = Vec::new();
    for entry in CORPUS {
        let current = run_entry(entry)?;
        out.push(CorpusOutcome {
            name: entry.name,
            matches: current == entry.golden,
        });
    }
    Ok(out)
}

/// Regenerates the golden files into a directory (maintenance only).
pub fn write_goldens(dir: &std::path::Path) -> anyhow::Result<()> {
    for entry in CORPUS {
        let current = run_entry(entry)?;
        std::fs::write(dir.join(format!("{}.golden.json", entry.name)), current)?;
    }
    Ok(())
}
