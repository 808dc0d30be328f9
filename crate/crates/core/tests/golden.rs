//! Frozen end-to-end outputs for the planted-cycle corpus (n = 5, three
//! disciplines, 50 fillers). The classification is checked against the
//! test-local β1 oracle before the files are compared, so a golden file can
//! only be refreshed (`GAPMINER_BLESS=1`) from an oracle-consistent run.

mod common;

use std::collections::BTreeSet;

use gapminer_core::classify::read_categories;
use gapminer_core::classify::Category;
use gapminer_core::pipeline::{self, PipelineConfig, CLASSIFICATION_FILE, METRICS_FILE, SHARES_FILE};
use gapminer_core::synth::{make_synthetic, write_synthetic, Generator};

const FIXTURE: Generator = Generator::PlantedCycle {
    n: 5,
    disciplines: 3,
    fillers: 50,
};

#[test]
fn planted_cycle_end_to_end() {
    let tmp = tempfile::tempdir().unwrap();
    let corpus = tmp.path().join("corpus.jsonl");
    write_synthetic(&corpus, FIXTURE, 1).unwrap();
    let config = PipelineConfig {
        corpus_path: Some(corpus),
        output_dir: tmp.path().join("out"),
        seed: 1,
        ..PipelineConfig::default()
    };
    let report = pipeline::run(&config, None).unwrap();
    for f in [CLASSIFICATION_FILE, SHARES_FILE, METRICS_FILE] {
        assert!(report.manifest.stages.values().any(|s| s.outputs.contains_key(f)), "{f} not in manifest");
    }

    let out = tmp.path().join("out");
    let classes = read_categories(std::fs::File::open(out.join(CLASSIFICATION_FILE)).unwrap()).unwrap();
    let flagged: BTreeSet<String> = classes
        .iter()
        .filter(|(_, c)| *c == Category::GapOpener)
        .map(|(id, _)| id.clone())
        .collect();
    let oracle = common::oracle_gap_openers(&make_synthetic(FIXTURE, 1).unwrap());
    assert_eq!(flagged, oracle);
    assert_eq!(flagged, BTreeSet::from(["D00-s004".into(), "D01-s004".into(), "D02-s004".into()]));

    for f in [CLASSIFICATION_FILE, SHARES_FILE, METRICS_FILE] {
        let bytes = std::fs::read(out.join(f)).unwrap();
        common::check_golden("planted_cycle", f, &bytes).unwrap();
    }
}
