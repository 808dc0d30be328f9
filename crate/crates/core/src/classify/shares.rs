use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use rayon::prelude::*;

use super::{analyze_store, classify_all, Category, PaperClassification, TopologyParams};
use crate::concept_net::randomize_labels;
use crate::corpus::CorpusStore;
use crate::error::{Error, Result};
use crate::rng::derive_seed;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Grouping {
    Overall,
    Discipline,
    Year,
}

impl Grouping {
    pub const ALL: [Grouping; 3] = [Grouping::Overall, Grouping::Discipline, Grouping::Year];

    pub fn as_str(self) -> &'static str {
        match self {
            Grouping::Overall => "overall",
            Grouping::Discipline => "discipline",
            Grouping::Year => "year",
        }
    }
}

impl fmt::Display for Grouping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Real,
    Random,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::Real => "real",
            Source::Random => "random",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShareRow {
    pub source: Source,
    pub grouping: Grouping,
    /// `all` for the overall grouping, else the discipline id or year.
    pub group: String,
    pub category: Category,
    /// Paper count; the replicate mean for random rows.
    pub count: f64,
    pub fraction: f64,
    /// Standard error of the mean fraction over replicates (random rows, ≥ 2 replicates).
    pub std_error: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ShareTable {
    pub rows: Vec<ShareRow>,
}

impl ShareTable {
    pub fn get(&self, source: Source, grouping: Grouping, group: &str, category: Category) -> Option<&ShareRow> {
        self.rows
            .iter()
            .find(|r| r.source == source && r.grouping == grouping && r.group == group && r.category == category)
    }

    pub fn extend(&mut self, other: ShareTable) {
        self.rows.extend(other.rows);
    }
}

/// Category counts and fractions per group.
///
/// In the discipline grouping a paper counts once for each discipline it
/// belongs to, so discipline counts can sum to more than the corpus size.
pub fn share_table(classes: &[PaperClassification], store: &CorpusStore, grouping: Grouping, source: Source) -> ShareTable {
    let mut groups: Vec<(String, [usize; 3])> = match grouping {
        Grouping::Overall => {
            let mut counts = [0; 3];
            for c in classes {
                counts[c.category as usize] += 1;
            }
            if classes.is_empty() {
                Vec::new()
            } else {
                vec![("all".to_string(), counts)]
            }
        }
        Grouping::Year => {
            let mut by: BTreeMap<i32, [usize; 3]> = BTreeMap::new();
            for c in classes {
                let year = store.get(&c.paper_id).map(|p| p.year).unwrap_or_default();
                by.entry(year).or_default()[c.category as usize] += 1;
            }
            by.into_iter().map(|(y, c)| (y.to_string(), c)).collect()
        }
        Grouping::Discipline => {
            let mut by: BTreeMap<String, [usize; 3]> = BTreeMap::new();
            for c in classes {
                let Some(p) = store.get(&c.paper_id) else { continue };
                for d in p.disciplines() {
                    by.entry(d.to_string()).or_default()[c.category as usize] += 1;
                }
            }
            by.into_iter().collect()
        }
    };

    let mut rows = Vec::with_capacity(groups.len() * 3);
    for (group, counts) in groups.drain(..) {
        let total: usize = counts.iter().sum();
        for cat in Category::ALL {
            let n = counts[cat as usize];
            rows.push(ShareRow {
                source,
                grouping,
                group: group.clone(),
                category: cat,
                count: n as f64,
                fraction: n as f64 / total as f64,
                std_error: None,
            });
        }
    }
    ShareTable { rows }
}

/// Share tables for every grouping.
pub fn real_shares(classes: &[PaperClassification], store: &CorpusStore) -> ShareTable {
    let mut t = ShareTable::default();
    for g in Grouping::ALL {
        t.extend(share_table(classes, store, g, Source::Real));
    }
    t
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NullConfig {
    pub seed: u64,
    pub replicates: usize,
    pub topology: TopologyParams,
}

impl Default for NullConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            replicates: 10,
            topology: TopologyParams::default(),
        }
    }
}

/// Mean shares (with standard errors) over label-shuffled replicates.
///
/// Replicate `r` uses a sub-seed derived from `(seed, r)`, so results do not
/// depend on thread scheduling.
pub fn null_comparison(store: &CorpusStore, config: &NullConfig) -> Result<ShareTable> {
    if config.replicates == 0 {
        return Err(Error::Config("null replicates must be at least 1".into()));
    }
    let tables: Vec<ShareTable> = (0..config.replicates)
        .into_par_iter()
        .map(|r| {
            let shuffled = randomize_labels(store, derive_seed(config.seed, &[r as u64]))?;
            let analyses: Vec<_> = analyze_store(&shuffled, config.topology)?
                .into_iter()
                .map(|(a, _)| a)
                .collect();
            let classes = classify_all(&shuffled, &analyses)?;
            let mut t = ShareTable::default();
            for g in Grouping::ALL {
                t.extend(share_table(&classes, &shuffled, g, Source::Random));
            }
            Ok(t)
        })
        .collect::<Result<_>>()?;

    let reps = tables.len() as f64;
    let first = &tables[0];
    let mut rows = Vec::with_capacity(first.rows.len());
    for (i, proto) in first.rows.iter().enumerate() {
        let mut fracs = Vec::with_capacity(tables.len());
        let mut count = 0.0;
        for t in &tables {
            let row = t
                .rows
                .get(i)
                .filter(|r| r.grouping == proto.grouping && r.group == proto.group && r.category == proto.category)
                .ok_or_else(|| Error::Invariant("null replicates disagree on group layout".into()))?;
            fracs.push(row.fraction);
            count += row.count;
        }
        let mean = fracs.iter().sum::<f64>() / reps;
        let std_error = (tables.len() > 1).then(|| {
            let var = fracs.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (reps - 1.0);
            (var / reps).sqrt()
        });
        rows.push(ShareRow {
            count: count / reps,
            fraction: mean,
            std_error,
            ..proto.clone()
        });
    }
    Ok(ShareTable { rows })
}

pub fn write_shares<W: Write>(table: &ShareTable, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["source", "grouping", "group", "category", "count", "fraction", "std_error"])?;
    for r in &table.rows {
        w.write_record([
            r.source.as_str(),
            r.grouping.as_str(),
            &r.group,
            r.category.as_str(),
            &r.count.to_string(),
            &r.fraction.to_string(),
            &r.std_error.map(|e| e.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
