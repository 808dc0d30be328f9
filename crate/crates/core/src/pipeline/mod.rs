//! End-to-end stage runner with content-addressed caching.
//!
//! Each stage reads its inputs from the output directory, writes its
//! artifacts there, and records their SHA-256 digests in `manifest.json`
//! together with a key over the stage parameters and input digests. A stage
//! whose key and outputs are unchanged is skipped.

mod config;
mod manifest;

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::json;

pub use config::{PipelineConfig, Seeds, StageFlags};
pub use manifest::{file_digest, key_digest, Manifest, StageEntry, Status, MANIFEST_FILE};

use crate::classify::{
    analyze_network, classify_all, null_comparison, read_categories, real_shares, write_classifications,
    write_shares, Category, DisciplineAnalysis, NullConfig,
};
use crate::concept_net::{build_all_networks, read_networks, write_networks, TemporalConceptNetwork};
use crate::corpus::{load_corpus, write_corpus, write_rejections, CorpusStore, IngestConfig};
use crate::error::{Error, Result};
use crate::metrics::{compute_metrics, verb_ratio, write_metrics, DEFAULT_LEXICON, TOP_K};
use crate::topology::{gap_pairs_from_rows, read_diagrams, write_diagrams, DiagramRow};

pub const CORPUS_FILE: &str = "corpus.canonical.jsonl";
pub const REJECTIONS_FILE: &str = "rejections.csv";
pub const NETWORKS_FILE: &str = "networks.csv";
pub const DIAGRAMS_FILE: &str = "diagrams.csv";
pub const CLASSIFICATION_FILE: &str = "classification.csv";
pub const SHARES_FILE: &str = "shares.csv";
pub const METRICS_FILE: &str = "metrics.csv";
pub const VERB_RATIOS_FILE: &str = "verb_ratios.csv";
pub const SUMMARY_FILE: &str = "category_summary.csv";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Ingest,
    Network,
    Persist,
    Classify,
    Metrics,
    Report,
}

impl Stage {
    pub const ALL: [Stage; 6] = [
        Stage::Ingest,
        Stage::Network,
        Stage::Persist,
        Stage::Classify,
        Stage::Metrics,
        Stage::Report,
    ];

    /// Subcommand name.
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Network => "network",
            Stage::Persist => "persist",
            Stage::Classify => "classify",
            Stage::Metrics => "metrics",
            Stage::Report => "report",
        }
    }

    /// Name used in the manifest and in error messages.
    pub fn label(self) -> &'static str {
        match self {
            Stage::Persist => "topology",
            s => s.as_str(),
        }
    }

    pub fn outputs(self) -> &'static [&'static str] {
        match self {
            Stage::Ingest => &[CORPUS_FILE, REJECTIONS_FILE],
            Stage::Network => &[NETWORKS_FILE],
            Stage::Persist => &[DIAGRAMS_FILE],
            Stage::Classify => &[CLASSIFICATION_FILE, SHARES_FILE],
            Stage::Metrics => &[METRICS_FILE],
            Stage::Report => &[VERB_RATIOS_FILE, SUMMARY_FILE],
        }
    }

    pub fn dependencies(self) -> &'static [Stage] {
        match self {
            Stage::Ingest => &[],
            Stage::Network => &[Stage::Ingest],
            Stage::Persist => &[Stage::Network],
            Stage::Classify => &[Stage::Ingest, Stage::Network, Stage::Persist],
            Stage::Metrics => &[Stage::Ingest, Stage::Network, Stage::Persist, Stage::Classify],
            Stage::Report => &[Stage::Ingest, Stage::Classify, Stage::Metrics],
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "topology" => Ok(Stage::Persist),
            _ => Stage::ALL
                .into_iter()
                .find(|st| st.as_str() == s)
                .ok_or_else(|| Error::Config(format!("unknown stage `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ran,
    Skipped,
    Disabled,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunReport {
    pub stages: Vec<(Stage, Outcome)>,
    pub manifest: Manifest,
}

type Notes = BTreeMap<String, String>;

/// Runs every enabled stage in order, or only `only` when given.
pub fn run(config: &PipelineConfig, only: Option<Stage>) -> Result<RunReport> {
    config.validate()?;
    let dir = config.output_dir.as_path();
    std::fs::create_dir_all(dir).map_err(|e| Error::Config(format!("cannot create {}: {e}", dir.display())))?;
    let mut manifest = Manifest::load(dir);
    let mut outcomes = Vec::new();

    for stage in Stage::ALL {
        let selected = match only {
            Some(s) => s == stage,
            None => config.stages.enabled(stage),
        };
        if !selected {
            if only.is_none() {
                outcomes.push((stage, Outcome::Disabled));
            }
            continue;
        }

        for dep in stage.dependencies() {
            if let Err(detail) = manifest.verify(dep.label(), dir) {
                return Err(Error::MissingDependency {
                    stage: stage.label().into(),
                    dependency: dep.label().into(),
                    detail,
                });
            }
        }

        let key = stage_key(stage, config, &manifest)?;
        if manifest.stages.get(stage.label()).is_some_and(|e| e.key == key) && manifest.verify(stage.label(), dir).is_ok()
        {
            log::info!("{}: unchanged, skipping", stage.label());
            outcomes.push((stage, Outcome::Skipped));
            continue;
        }

        log::info!("{}: running", stage.label());
        let mut entry = StageEntry {
            key,
            status: Status::Invalid,
            outputs: BTreeMap::new(),
            notes: BTreeMap::new(),
        };
        manifest.stages.insert(stage.label().into(), entry.clone());
        manifest.save(dir)?;

        let result = execute(stage, config, dir);
        for name in stage.outputs() {
            if let Ok(d) = file_digest(&dir.join(name)) {
                entry.outputs.insert(name.to_string(), d);
            }
        }
        match result {
            Ok(notes) => {
                entry.status = Status::Ok;
                entry.notes = notes;
                manifest.stages.insert(stage.label().into(), entry);
                manifest.save(dir)?;
                outcomes.push((stage, Outcome::Ran));
            }
            Err(e) => {
                manifest.stages.insert(stage.label().into(), entry);
                manifest.save(dir)?;
                return Err(Error::Stage {
                    stage: stage.label().into(),
                    source: Box::new(e),
                });
            }
        }
    }
    Ok(RunReport {
        stages: outcomes,
        manifest,
    })
}

fn stage_key(stage: Stage, config: &PipelineConfig, manifest: &Manifest) -> Result<String> {
    let params = match stage {
        Stage::Ingest => {
            let path = corpus_path(config)?;
            let digest = file_digest(path).map_err(|e| Error::io(path, e))?;
            json!({"year_min": config.year_min, "year_max": config.year_max, "corpus": digest})
        }
        Stage::Network => json!({}),
        Stage::Persist => json!({"max_dim": config.max_dim}),
        Stage::Classify => json!({
            "max_dim": config.max_dim,
            "min_persistence": config.min_persistence,
            "null_replicates": config.null_replicates,
            "null_seed": config.null_seed(),
        }),
        Stage::Metrics => {
            let m = config.metrics();
            json!({
                "min_persistence": config.min_persistence,
                "cd_window": m.cd_window,
                "sb_horizon": m.sb_horizon,
                "n_rand": m.novelty.n_rand,
                "swaps_per_edge": m.novelty.swaps_per_edge,
                "epsilon": m.novelty.epsilon,
                "novelty_seed": m.novelty.seed,
            })
        }
        Stage::Report => match &config.verb_lexicon_path {
            Some(p) => json!({"lexicon": file_digest(p).map_err(|e| Error::io(p, e))?}),
            None => json!({"lexicon": "default"}),
        },
    };
    let params = params.to_string();
    let mut parts = vec![env!("CARGO_PKG_VERSION"), stage.label(), params.as_str()];
    for dep in stage.dependencies() {
        if let Some(e) = manifest.stages.get(dep.label()) {
            parts.extend(e.outputs.values().map(String::as_str));
        }
    }
    Ok(key_digest(parts))
}

fn corpus_path(config: &PipelineConfig) -> Result<&Path> {
    let path = config
        .corpus_path
        .as_deref()
        .ok_or_else(|| Error::Config("corpus_path is not set".into()))?;
    if !path.is_file() {
        return Err(Error::Config(format!("corpus {} does not exist", path.display())));
    }
    Ok(path)
}

fn execute(stage: Stage, config: &PipelineConfig, dir: &Path) -> Result<Notes> {
    match stage {
        Stage::Ingest => ingest(config, dir),
        Stage::Network => network(dir),
        Stage::Persist => persist(config, dir),
        Stage::Classify => classify(config, dir),
        Stage::Metrics => metrics(config, dir),
        Stage::Report => report(config, dir),
    }
}

fn create(dir: &Path, name: &str) -> Result<(PathBuf, BufWriter<File>)> {
    let path = dir.join(name);
    let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
    Ok((path, BufWriter::new(file)))
}

fn finish(path: &Path, mut w: BufWriter<File>) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| Error::Artifact {
        path: path.to_path_buf(),
        detail: e.to_string(),
    }
}

fn open(dir: &Path, name: &str) -> Result<(PathBuf, BufReader<File>)> {
    let path = dir.join(name);
    let file = File::open(&path).map_err(|e| Error::io(&path, e))?;
    Ok((path, BufReader::new(file)))
}

fn load_store(dir: &Path) -> Result<CorpusStore> {
    let path = dir.join(CORPUS_FILE);
    // the canonical file is already filtered
    let all_years = IngestConfig {
        year_min: i32::MIN,
        year_max: i32::MAX,
    };
    Ok(load_corpus(&path, &all_years)?.0)
}

fn load_networks(dir: &Path) -> Result<Vec<TemporalConceptNetwork>> {
    let (path, r) = open(dir, NETWORKS_FILE)?;
    read_networks(r).map_err(|detail| Error::Artifact { path, detail })
}

fn load_diagrams(dir: &Path) -> Result<Vec<DiagramRow>> {
    let (path, r) = open(dir, DIAGRAMS_FILE)?;
    read_diagrams(r).map_err(|detail| Error::Artifact { path, detail })
}

/// Networks paired with the gap edges recorded in the diagram dump. A
/// network without any diagram rows is left out, which `classify_all`
/// reports as a missing diagram.
fn load_analyses(dir: &Path, min_persistence: i32) -> Result<Vec<DisciplineAnalysis>> {
    let mut by_disc: BTreeMap<String, Vec<DiagramRow>> = BTreeMap::new();
    for row in load_diagrams(dir)? {
        by_disc.entry(row.discipline.clone()).or_default().push(row);
    }
    Ok(load_networks(dir)?
        .into_iter()
        .filter_map(|net| {
            let rows = by_disc.get(net.discipline())?;
            let pairs = gap_pairs_from_rows(rows, min_persistence);
            Some(DisciplineAnalysis::from_pairs(net, &pairs))
        })
        .collect())
}

fn ingest(config: &PipelineConfig, dir: &Path) -> Result<Notes> {
    let (store, report) = load_corpus(corpus_path(config)?, &config.ingest())?;
    let (path, mut w) = create(dir, CORPUS_FILE)?;
    write_corpus(&store, &mut w).map_err(|e| Error::io(&path, e))?;
    finish(&path, w)?;
    let (path, mut w) = create(dir, REJECTIONS_FILE)?;
    write_rejections(&report, &mut w).map_err(csv_err(&path))?;
    finish(&path, w)?;
    let citations = crate::corpus::CitationIndex::build(&store).report();
    Ok(Notes::from([
        ("lines".into(), report.lines.to_string()),
        ("accepted".into(), report.accepted.to_string()),
        ("malformed".into(), report.malformed.to_string()),
        ("rejected".into(), report.rejections.len().to_string()),
        ("external_references".into(), citations.external.to_string()),
        ("citation_anomalies".into(), citations.anomalies.to_string()),
    ]))
}

fn network(dir: &Path) -> Result<Notes> {
    let store = load_store(dir)?;
    let nets = build_all_networks(&store)?;
    let (path, mut w) = create(dir, NETWORKS_FILE)?;
    write_networks(&nets, &mut w).map_err(csv_err(&path))?;
    finish(&path, w)?;
    Ok(Notes::from([
        ("disciplines".into(), nets.len().to_string()),
        ("edges".into(), nets.iter().map(|n| n.edges().len()).sum::<usize>().to_string()),
    ]))
}

fn persist(config: &PipelineConfig, dir: &Path) -> Result<Notes> {
    let params = config.topology();
    let rows: Vec<DiagramRow> = load_networks(dir)?
        .into_par_iter()
        .map(|n| analyze_network(n, params).1)
        .collect::<Vec<_>>()
        .concat();
    let (path, mut w) = create(dir, DIAGRAMS_FILE)?;
    write_diagrams(&rows, &mut w).map_err(csv_err(&path))?;
    finish(&path, w)?;
    Ok(Notes::from([("features".into(), rows.len().to_string())]))
}

fn classify(config: &PipelineConfig, dir: &Path) -> Result<Notes> {
    let store = load_store(dir)?;
    let analyses = load_analyses(dir, config.min_persistence)?;
    let classes = classify_all(&store, &analyses)?;
    let (path, mut w) = create(dir, CLASSIFICATION_FILE)?;
    write_classifications(&classes, &mut w).map_err(csv_err(&path))?;
    finish(&path, w)?;

    let mut shares = real_shares(&classes, &store);
    shares.extend(null_comparison(
        &store,
        &NullConfig {
            seed: config.null_seed(),
            replicates: config.null_replicates,
            topology: config.topology(),
        },
    )?);
    let (path, mut w) = create(dir, SHARES_FILE)?;
    write_shares(&shares, &mut w).map_err(csv_err(&path))?;
    finish(&path, w)?;

    Ok(Category::ALL
        .into_iter()
        .map(|c| {
            let n = classes.iter().filter(|p| p.category == c).count();
            (c.as_str().to_string(), n.to_string())
        })
        .collect())
}

fn metrics(config: &PipelineConfig, dir: &Path) -> Result<Notes> {
    let store = load_store(dir)?;
    let classes = classify_all(&store, &load_analyses(dir, config.min_persistence)?)?;
    let (path, r) = open(dir, CLASSIFICATION_FILE)?;
    let recorded = read_categories(r).map_err(|detail| Error::Artifact { path, detail })?;
    let agrees = recorded.len() == classes.len()
        && recorded
            .iter()
            .zip(&classes)
            .all(|((id, cat), c)| *id == c.paper_id && *cat == c.category);
    if !agrees {
        return Err(Error::Invariant(format!("{CLASSIFICATION_FILE} disagrees with the diagrams it was derived from")));
    }

    let mc = config.metrics();
    let (rows, report) = compute_metrics(&store, &classes, &mc)?;
    let (path, mut w) = create(dir, METRICS_FILE)?;
    write_metrics(&rows, &mut w).map_err(csv_err(&path))?;
    finish(&path, w)?;

    let mut notes = Notes::from([
        ("novelty_replicates".into(), mc.novelty.n_rand.to_string()),
        ("novelty_swaps_per_edge".into(), mc.novelty.swaps_per_edge.to_string()),
    ]);
    for (k, ties) in TOP_K.iter().zip(report.top_ties) {
        notes.insert(format!("top{k}_tied_extra"), ties.to_string());
    }
    Ok(notes)
}

fn read_lexicon(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_string)
        .collect())
}

/// Per category: paper count, summed references, then (sum, n) per summary column.
type Tally = (usize, usize, Vec<(f64, usize)>);

/// Per-category means of the numeric metrics columns.
const SUMMARY_COLUMNS: [&str; 7] = ["cd", "sb", "novelty_pct", "concept_age", "concept_pop", "team_size", "freshness"];

fn report(config: &PipelineConfig, dir: &Path) -> Result<Notes> {
    let store = load_store(dir)?;
    let (path, r) = open(dir, CLASSIFICATION_FILE)?;
    let categories = read_categories(r).map_err(|detail| Error::Artifact { path, detail })?;
    let mut notes = Notes::new();

    let lexicon: Vec<String> = match &config.verb_lexicon_path {
        Some(p) => read_lexicon(p)?,
        None => DEFAULT_LEXICON.iter().map(|s| s.to_string()).collect(),
    };
    let (mut gap_titles, mut other_titles) = (Vec::new(), Vec::new());
    for (id, cat) in &categories {
        if let Some(t) = store.get(id).and_then(|p| p.title.as_deref()) {
            if *cat == Category::GapOpener {
                gap_titles.push(t);
            } else {
                other_titles.push(t);
            }
        }
    }
    let (path, mut w) = create(dir, VERB_RATIOS_FILE)?;
    {
        let mut cw = csv::Writer::from_writer(&mut w);
        cw.write_record(["verb", "ratio"]).map_err(csv_err(&path))?;
        match verb_ratio(gap_titles.iter().copied(), other_titles.iter().copied(), &lexicon) {
            Ok(ratios) => {
                for (verb, r) in ratios {
                    cw.write_record([verb, r.to_string()]).map_err(csv_err(&path))?;
                }
            }
            Err(Error::EmptyCollection(which)) => {
                log::warn!("verb ratios not computed: empty {which}");
                notes.insert("verb_ratios".into(), format!("not computed: empty {which}"));
            }
            Err(e) => return Err(e),
        }
        cw.flush().map_err(|e| Error::io(&path, e))?;
    }
    finish(&path, w)?;

    let (path, r) = open(dir, METRICS_FILE)?;
    let mut reader = csv::Reader::from_reader(r);
    let header = reader.headers().map_err(csv_err(&path))?.clone();
    let col = |name: &str| header.iter().position(|h| h == name);
    let cat_col = col("category").ok_or_else(|| Error::Artifact {
        path: path.clone(),
        detail: "no category column".into(),
    })?;
    let cols: Vec<usize> = SUMMARY_COLUMNS
        .iter()
        .map(|c| {
            col(c).ok_or_else(|| Error::Artifact {
                path: path.clone(),
                detail: format!("no {c} column"),
            })
        })
        .collect::<Result<_>>()?;
    let mut acc: BTreeMap<Category, Tally> = Category::ALL
        .into_iter()
        .map(|c| (c, (0, 0, vec![(0.0, 0); cols.len()])))
        .collect();
    for rec in reader.records() {
        let rec = rec.map_err(csv_err(&path))?;
        let cat: Category = rec[cat_col].parse().map_err(|detail| Error::Artifact {
            path: path.clone(),
            detail,
        })?;
        let a = acc.get_mut(&cat).expect("all categories present");
        a.0 += 1;
        a.1 += store.get(&rec[0]).map_or(0, |p| p.references.len());
        for (slot, &c) in a.2.iter_mut().zip(&cols) {
            if let Ok(v) = rec[c].parse::<f64>() {
                slot.0 += v;
                slot.1 += 1;
            }
        }
    }
    let (path, mut w) = create(dir, SUMMARY_FILE)?;
    {
        let mut cw = csv::Writer::from_writer(&mut w);
        let mut head = vec!["category".to_string(), "papers".into(), "mean_refs".into()];
        head.extend(SUMMARY_COLUMNS.iter().map(|c| format!("mean_{c}")));
        cw.write_record(&head).map_err(csv_err(&path))?;
        for (cat, (n, r, sums)) in &acc {
            let mean = |s: f64, k: usize| if k == 0 { String::new() } else { (s / k as f64).to_string() };
            let mut rec = vec![cat.to_string(), n.to_string(), mean(*r as f64, *n)];
            rec.extend(sums.iter().map(|&(s, k)| mean(s, k)));
            cw.write_record(&rec).map_err(csv_err(&path))?;
        }
        cw.flush().map_err(|e| Error::io(&path, e))?;
    }
    finish(&path, w)?;
    Ok(notes)
}
