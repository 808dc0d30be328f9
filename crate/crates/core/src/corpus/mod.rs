//! Bibliographic records: ingestion, validation, and the indices every
//! downstream stage reads from.
//!
//! A [`CorpusStore`] is immutable once built. Papers are kept in a single
//! vector sorted by `(year, id)`; a paper's position in that vector is its
//! [`PaperIdx`], which all indices use in place of string ids.

mod citations;
mod io;
mod record;

use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

pub use citations::{Citation, CitationIndex, CitationReport};
pub use io::{load_corpus, read_corpus, write_corpus, write_rejections, LoadReport, SCHEMA_VERSION};
pub(crate) use io::write_records;
pub use record::{
    validate_record, Affiliation, ConceptScore, IngestConfig, PaperRecord, RejectReason,
};

#[cfg(test)]
pub(crate) use record::test_paper;

/// Position of a paper in [`CorpusStore::papers`].
pub type PaperIdx = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConceptInfo {
    /// Taxonomy level the concept was seen at (0 or 3 in the input format).
    pub level: u8,
    pub first_year_seen: i32,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CorpusStore {
    papers: Vec<PaperRecord>,
    index: HashMap<String, PaperIdx>,
    by_year: BTreeMap<i32, Range<PaperIdx>>,
    concepts: BTreeMap<String, ConceptInfo>,
}

impl CorpusStore {
    /// Builds a store from already-validated records. When two records share
    /// an id, the one sorting first by `(year, id)` is kept.
    pub fn from_records(mut records: Vec<PaperRecord>) -> Self {
        records.sort_by(|a, b| {
            a.year
                .cmp(&b.year)
                .then_with(|| a.id.as_bytes().cmp(b.id.as_bytes()))
        });
        let mut index = HashMap::with_capacity(records.len());
        let mut papers = Vec::with_capacity(records.len());
        for record in records {
            if index.contains_key(&record.id) {
                continue;
            }
            index.insert(record.id.clone(), papers.len());
            papers.push(record);
        }

        let mut by_year: BTreeMap<i32, Range<PaperIdx>> = BTreeMap::new();
        let mut concepts: BTreeMap<String, ConceptInfo> = BTreeMap::new();
        for (idx, paper) in papers.iter().enumerate() {
            by_year
                .entry(paper.year)
                .and_modify(|r| r.end = idx + 1)
                .or_insert(idx..idx + 1);
            let labelled = paper
                .level0
                .iter()
                .map(|s| (s, 0u8))
                .chain(paper.level3.iter().map(|s| (s, 3u8)));
            for (score, level) in labelled {
                // papers arrive in year order, so the first sighting is the earliest
                concepts
                    .entry(score.concept.clone())
                    .and_modify(|info| info.level = info.level.min(level))
                    .or_insert(ConceptInfo {
                        level,
                        first_year_seen: paper.year,
                    });
            }
        }

        Self {
            papers,
            index,
            by_year,
            concepts,
        }
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    pub fn papers(&self) -> &[PaperRecord] {
        &self.papers
    }

    pub fn paper(&self, idx: PaperIdx) -> &PaperRecord {
        &self.papers[idx]
    }

    pub fn get(&self, id: &str) -> Option<&PaperRecord> {
        self.index.get(id).map(|&i| &self.papers[i])
    }

    pub fn idx_of(&self, id: &str) -> Option<PaperIdx> {
        self.index.get(id).copied()
    }

    pub fn by_year(&self) -> &BTreeMap<i32, Range<PaperIdx>> {
        &self.by_year
    }

    /// Papers of one year in canonical order.
    pub fn year_range(&self, year: i32) -> Range<PaperIdx> {
        self.by_year.get(&year).cloned().unwrap_or(0..0)
    }

    pub fn concept_registry(&self) -> &BTreeMap<String, ConceptInfo> {
        &self.concepts
    }

    pub fn concept(&self, id: &str) -> Option<&ConceptInfo> {
        self.concepts.get(id)
    }

    pub fn first_year(&self) -> Option<i32> {
        self.by_year.keys().next().copied()
    }

    pub fn last_year(&self) -> Option<i32> {
        self.by_year.keys().next_back().copied()
    }

    /// All level-0 concepts with at least one positive-confidence paper, sorted.
    pub fn disciplines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .papers
            .iter()
            .flat_map(|p| p.disciplines())
            .map(str::to_string)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
