use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A concept label with its classifier confidence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "(String, f64)", into = "(String, f64)")]
pub struct ConceptScore {
    pub concept: String,
    pub confidence: f64,
}

impl From<(String, f64)> for ConceptScore {
    fn from((concept, confidence): (String, f64)) -> Self {
        Self {
            concept,
            confidence,
        }
    }
}

impl From<ConceptScore> for (String, f64) {
    fn from(score: ConceptScore) -> Self {
        (score.concept, score.confidence)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "(String, f64, f64)", into = "(String, f64, f64)")]
pub struct Affiliation {
    pub author: String,
    pub latitude: f64,
    pub longitude: f64,
}

impl From<(String, f64, f64)> for Affiliation {
    fn from((author, latitude, longitude): (String, f64, f64)) -> Self {
        Self {
            author,
            latitude,
            longitude,
        }
    }
}

impl From<Affiliation> for (String, f64, f64) {
    fn from(a: Affiliation) -> Self {
        (a.author, a.latitude, a.longitude)
    }
}

/// One publication, in the on-disk line format.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PaperRecord {
    pub id: String,
    pub year: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub venue: Option<String>,
    #[serde(rename = "l0")]
    pub level0: Vec<ConceptScore>,
    #[serde(rename = "l3")]
    pub level3: Vec<ConceptScore>,
    #[serde(rename = "refs")]
    pub references: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub authors: Vec<String>,
    #[serde(default, rename = "affil", skip_serializing_if = "Vec::is_empty")]
    pub affiliations: Vec<Affiliation>,
}

impl PaperRecord {
    /// Distinct level-0 concepts with positive confidence, sorted.
    pub fn disciplines(&self) -> Vec<&str> {
        positive_sorted(&self.level0)
    }

    /// Distinct level-3 concepts with positive confidence, sorted.
    pub fn topics(&self) -> Vec<&str> {
        positive_sorted(&self.level3)
    }

    pub fn in_discipline(&self, discipline: &str) -> bool {
        self.level0
            .iter()
            .any(|s| s.confidence > 0.0 && s.concept == discipline)
    }

    /// The positive level-0 concept with the highest confidence; ties go to the smaller id.
    pub fn primary_discipline(&self) -> Option<&str> {
        self.level0
            .iter()
            .filter(|s| s.confidence > 0.0)
            .max_by(|a, b| {
                a.confidence
                    .total_cmp(&b.confidence)
                    .then_with(|| b.concept.cmp(&a.concept))
            })
            .map(|s| s.concept.as_str())
    }
}

fn positive_sorted(scores: &[ConceptScore]) -> Vec<&str> {
    let mut out: Vec<&str> = scores
        .iter()
        .filter(|s| s.confidence > 0.0)
        .map(|s| s.concept.as_str())
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IngestConfig {
    pub year_min: i32,
    pub year_max: i32,
}

impl Default for IngestConfig {
    fn default() -> Self {
        Self {
            year_min: 1900,
            year_max: 2020,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RejectReason {
    OutOfRangeYear,
    InvalidConfidence,
    NoPositiveLevel0,
    TooFewPositiveLevel3,
    DuplicateId,
}

impl RejectReason {
    pub fn as_str(self) -> &'static str {
        match self {
            RejectReason::OutOfRangeYear => "out-of-range-year",
            RejectReason::InvalidConfidence => "invalid-confidence",
            RejectReason::NoPositiveLevel0 => "no-positive-level0",
            RejectReason::TooFewPositiveLevel3 => "too-few-positive-level3",
            RejectReason::DuplicateId => "duplicate-id",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Applies the ingestion filters to a parsed record.
///
/// Accepted records have self-citations removed and duplicate references
/// collapsed (first occurrence kept); nothing else is touched.
pub fn validate_record(
    mut raw: PaperRecord,
    config: &IngestConfig,
) -> Result<PaperRecord, RejectReason> {
    if raw.year < config.year_min || raw.year > config.year_max {
        return Err(RejectReason::OutOfRangeYear);
    }
    let valid = |s: &ConceptScore| s.confidence.is_finite() && (0.0..=1.0).contains(&s.confidence);
    if !raw.level0.iter().all(valid) || !raw.level3.iter().all(valid) {
        return Err(RejectReason::InvalidConfidence);
    }
    if raw.disciplines().is_empty() {
        return Err(RejectReason::NoPositiveLevel0);
    }
    if raw.topics().len() < 2 {
        return Err(RejectReason::TooFewPositiveLevel3);
    }

    let mut seen = HashSet::with_capacity(raw.references.len());
    let id = raw.id.clone();
    raw.references
        .retain(|r| *r != id && seen.insert(r.clone()));
    Ok(raw)
}

#[cfg(test)]
pub(crate) fn test_paper(id: &str, year: i32, disciplines: &[&str], topics: &[&str]) -> PaperRecord {
    PaperRecord {
        id: id.to_string(),
        year,
        title: None,
        venue: None,
        level0: disciplines
            .iter()
            .map(|d| ConceptScore::from((d.to_string(), 0.9)))
            .collect(),
        level3: topics
            .iter()
            .map(|t| ConceptScore::from((t.to_string(), 0.5)))
            .collect(),
        references: Vec::new(),
        authors: Vec::new(),
        affiliations: Vec::new(),
    }
}
