//! Per-paper scientometric indicators.

mod concepts;
mod disruption;
mod novelty;
mod sleeping_beauty;
mod team;
mod verbs;
mod windows;

use std::io::Write;

use rayon::prelude::*;

pub use concepts::{concept_pair_stats, ConceptOccurrences, ConceptPairStats};
pub use disruption::{cd_index, disruption_counts, percentile_rank, DisruptionCounts};
pub use novelty::{citation_switch, novelty, novelty_all, quantile, NoveltyConfig, NoveltyProfile, RefEdge};
pub use sleeping_beauty::{sleeping_beauty, CitationTrajectory};
pub use team::{great_circle_km, team_stats, CollaborationHistory, TeamStats, EARTH_RADIUS_KM, FRESHNESS_TEAM_SIZES};
pub use verbs::{tokenize, verb_ratio, DEFAULT_LEXICON};
pub use windows::{citation_windows, top_k_flags, TieReport, MAX_WINDOW};

use crate::classify::{Category, PaperClassification};
use crate::corpus::{CitationIndex, CorpusStore};
use crate::error::{Error, Result};

pub const TOP_K: [u32; 5] = [1, 5, 10, 15, 20];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricsConfig {
    /// Citation window in years for the disruption index; unbounded when `None`.
    pub cd_window: Option<u32>,
    /// Years after publication considered by the beauty coefficient.
    pub sb_horizon: usize,
    pub novelty: NoveltyConfig,
}

impl Default for MetricsConfig {
    fn default() -> Self {
        Self {
            cd_window: None,
            sb_horizon: 20,
            novelty: NoveltyConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricsRow {
    pub paper_id: String,
    pub category: Category,
    pub cd: Option<f64>,
    pub cd_pct: Option<f64>,
    pub sb: f64,
    pub novelty_pct: Option<f64>,
    pub windows: [Option<u64>; MAX_WINDOW],
    pub top: [bool; TOP_K.len()],
    pub concepts: Option<ConceptPairStats>,
    pub team: TeamStats,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MetricsReport {
    /// Extra papers flagged by ties, per entry of [`TOP_K`].
    pub top_ties: [usize; TOP_K.len()],
}

/// Computes every indicator for every paper, in store order.
///
/// `classes` must be aligned with the store, as returned by
/// [`crate::classify::classify_all`].
pub fn compute_metrics(
    store: &CorpusStore,
    classes: &[PaperClassification],
    config: &MetricsConfig,
) -> Result<(Vec<MetricsRow>, MetricsReport)> {
    if classes.len() != store.len() || classes.iter().zip(store.papers()).any(|(c, p)| c.paper_id != p.id) {
        return Err(Error::Invariant("classification is not aligned with the corpus".into()));
    }
    let index = CitationIndex::build(store);
    let last_year = store.last_year().unwrap_or(0);
    let occurrences = ConceptOccurrences::build(store);
    let history = CollaborationHistory::build(store);

    let cd: Vec<Option<f64>> = (0..store.len())
        .into_par_iter()
        .map(|p| cd_index(p, store, &index, config.cd_window))
        .collect();
    let years: Vec<i32> = store.papers().iter().map(|p| p.year).collect();
    let cd_pct = percentile_rank(&cd, &years);
    let novelty = novelty_all(store, &index, &config.novelty);

    let totals: Vec<u64> = (0..store.len()).map(|p| index.citers(p).len() as u64).collect();
    let cohorts: Vec<(i32, &str)> = store
        .papers()
        .iter()
        .map(|p| (p.year, p.primary_discipline().unwrap_or("")))
        .collect();
    let mut report = MetricsReport::default();
    let mut top = vec![[false; TOP_K.len()]; store.len()];
    for (j, &k) in TOP_K.iter().enumerate() {
        let (flags, ties) = top_k_flags(&totals, &cohorts, k as f64);
        report.top_ties[j] = ties.tied_extra;
        for (row, f) in top.iter_mut().zip(flags) {
            row[j] = f;
        }
    }

    let rows = (0..store.len())
        .into_par_iter()
        .map(|p| {
            let paper = store.paper(p);
            let class = &classes[p];
            MetricsRow {
                paper_id: paper.id.clone(),
                category: class.category,
                cd: cd[p],
                cd_pct: cd_pct[p],
                sb: sleeping_beauty(&CitationTrajectory::of(p, store, &index, config.sb_horizon, last_year)),
                novelty_pct: novelty[p].as_ref().map(|n| n.yearly_percentile),
                windows: citation_windows(p, store, &index, last_year),
                top: top[p],
                concepts: concept_pair_stats(paper, &class.novel_pairs(), store, &occurrences),
                team: team_stats(paper, &history),
            }
        })
        .collect();
    Ok((rows, report))
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes `metrics.csv`; missing values are empty fields.
pub fn write_metrics<W: Write>(rows: &[MetricsRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["paper_id", "category", "cd", "cd_pct", "sb", "novelty_pct"]
        .map(String::from)
        .to_vec();
    header.extend((1..=MAX_WINDOW).map(|k| format!("c{k}")));
    header.extend(TOP_K.iter().map(|k| format!("top{k}")));
    header.extend(
        ["concept_age", "concept_pop", "team_size", "career_age", "freshness", "geo_km"].map(String::from),
    );
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.paper_id.clone(),
            r.category.to_string(),
            opt(r.cd),
            opt(r.cd_pct),
            r.sb.to_string(),
            opt(r.novelty_pct),
        ];
        rec.extend(r.windows.iter().map(|c| opt(*c)));
        rec.extend(r.top.iter().map(|&f| u8::from(f).to_string()));
        rec.push(opt(r.concepts.map(|c| c.age)));
        rec.push(opt(r.concepts.map(|c| c.popularity)));
        rec.push(r.team.team_size.to_string());
        rec.push(opt(r.team.mean_career_age));
        rec.push(opt(r.team.freshness));
        rec.push(opt(r.team.mean_geo_distance_km));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}
