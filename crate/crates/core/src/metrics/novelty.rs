//! Atypicality of a paper's referenced journal combinations.
//!
//! For one publication year, every paper's reference list is reduced to the
//! venues it cites. A journal pair's observed count is the number of papers
//! that year citing both journals. The expected count comes from copies of
//! the year's reference network rewired by citation switching: the cited
//! endpoints of two reference edges are exchanged, which keeps every paper's
//! reference count and every cited paper's citation count intact.

use std::collections::{HashMap, HashSet};

use rand::Rng;
use rayon::prelude::*;

use super::disruption::percentile_rank;
use crate::corpus::{CitationIndex, CorpusStore, PaperIdx};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoveltyConfig {
    pub n_rand: usize,
    /// Floor applied to the baseline standard deviation.
    pub epsilon: f64,
    /// Swap attempts per reference edge in each rewired copy.
    pub swaps_per_edge: usize,
    pub seed: u64,
}

impl Default for NoveltyConfig {
    fn default() -> Self {
        Self {
            n_rand: 10,
            epsilon: 1e-6,
            swaps_per_edge: 10,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NoveltyProfile {
    pub paper: PaperIdx,
    /// One z-score per pair of venue-resolved references.
    pub z_scores: Vec<f64>,
    /// Linear-interpolated 10th percentile of `z_scores`; lower is more novel.
    pub tenth_percentile: f64,
    /// Mid-rank percentile of `tenth_percentile` among same-year papers.
    pub yearly_percentile: f64,
}

/// A reference edge: citing paper and the venue of the cited paper.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RefEdge {
    pub citer: PaperIdx,
    pub cited: PaperIdx,
}

/// Performs up to `attempts` citation switches in place and returns how many
/// succeeded. A switch is skipped when both edges share a citer or when it
/// would give a paper the same reference twice.
pub fn citation_switch<R: Rng>(edges: &mut [RefEdge], attempts: usize, rng: &mut R) -> usize {
    if edges.len() < 2 {
        return 0;
    }
    let mut present: HashSet<RefEdge> = edges.iter().copied().collect();
    let mut done = 0;
    for _ in 0..attempts {
        let i = rng.gen_range(0..edges.len());
        let j = rng.gen_range(0..edges.len());
        let (a, b) = (edges[i], edges[j]);
        if a.citer == b.citer || a.cited == b.cited {
            continue;
        }
        let na = RefEdge { citer: a.citer, cited: b.cited };
        let nb = RefEdge { citer: b.citer, cited: a.cited };
        if present.contains(&na) || present.contains(&nb) {
            continue;
        }
        present.remove(&a);
        present.remove(&b);
        present.insert(na);
        present.insert(nb);
        edges[i] = na;
        edges[j] = nb;
        done += 1;
    }
    done
}

type JournalPair = (u32, u32);

/// Distinct journal pairs cited together by each paper.
fn pairs_per_citer(edges: &[RefEdge], venue: &[u32]) -> HashMap<PaperIdx, Vec<JournalPair>> {
    let mut journals: HashMap<PaperIdx, Vec<u32>> = HashMap::new();
    for e in edges {
        journals.entry(e.citer).or_default().push(venue[e.cited]);
    }
    journals
        .into_iter()
        .map(|(p, mut js)| {
            js.sort_unstable();
            let mut pairs = Vec::new();
            for i in 0..js.len() {
                for j in i + 1..js.len() {
                    pairs.push((js[i], js[j]));
                }
            }
            pairs.sort_unstable();
            pairs.dedup();
            (p, pairs)
        })
        .collect()
}

fn pair_counts(edges: &[RefEdge], venue: &[u32]) -> HashMap<JournalPair, u32> {
    let mut counts = HashMap::new();
    for pairs in pairs_per_citer(edges, venue).into_values() {
        for p in pairs {
            *counts.entry(p).or_insert(0) += 1;
        }
    }
    counts
}

/// Venue ids interned per store; papers without a venue map to `u32::MAX`.
fn intern_venues(store: &CorpusStore) -> Vec<u32> {
    let mut ids: HashMap<&str, u32> = HashMap::new();
    store
        .papers()
        .iter()
        .map(|p| match &p.venue {
            Some(v) => {
                let next = ids.len() as u32;
                *ids.entry(v.as_str()).or_insert(next)
            }
            None => u32::MAX,
        })
        .collect()
}

/// Raw profiles (yearly percentile unset) for the papers of one year.
fn year_profiles(
    store: &CorpusStore,
    index: &CitationIndex,
    venue: &[u32],
    year: i32,
    config: &NoveltyConfig,
) -> Vec<(PaperIdx, Vec<f64>)> {
    let papers = store.year_range(year);
    let edges: Vec<RefEdge> = papers
        .clone()
        .flat_map(|citer| {
            index
                .references(citer)
                .iter()
                .filter(|&&cited| venue[cited] != u32::MAX)
                .map(move |&cited| RefEdge { citer, cited })
        })
        .collect();
    let observed = pair_counts(&edges, venue);

    let mut sum: HashMap<JournalPair, f64> = HashMap::new();
    let mut sum_sq: HashMap<JournalPair, f64> = HashMap::new();
    for r in 0..config.n_rand {
        let mut rng = rng::stream(config.seed, &[year as u64, r as u64]);
        let mut rewired = edges.clone();
        let attempts = config.swaps_per_edge * rewired.len();
        citation_switch(&mut rewired, attempts, &mut rng);
        for (pair, c) in pair_counts(&rewired, venue) {
            if observed.contains_key(&pair) {
                *sum.entry(pair).or_default() += c as f64;
                *sum_sq.entry(pair).or_default() += (c as f64).powi(2);
            }
        }
    }
    let n = config.n_rand.max(1) as f64;
    let z = |pair: &JournalPair| {
        let o = observed[pair] as f64;
        let mean = sum.get(pair).copied().unwrap_or(0.0) / n;
        let var = (sum_sq.get(pair).copied().unwrap_or(0.0) / n - mean * mean).max(0.0);
        (o - mean) / var.sqrt().max(config.epsilon)
    };

    let mut out = Vec::new();
    for p in papers {
        if store.paper(p).venue.is_none() {
            continue;
        }
        let mut js: Vec<u32> = index
            .references(p)
            .iter()
            .map(|&c| venue[c])
            .filter(|&v| v != u32::MAX)
            .collect();
        js.sort_unstable();
        if js.windows(2).all(|w| w[0] == w[1]) {
            // fewer than two distinct venues
            continue;
        }
        let mut zs = Vec::with_capacity(js.len() * (js.len() - 1) / 2);
        for i in 0..js.len() {
            for j in i + 1..js.len() {
                zs.push(z(&(js[i], js[j])));
            }
        }
        out.push((p, zs));
    }
    out
}

/// Linear-interpolation percentile (`q` in `[0, 1]`) of a non-empty sample.
pub fn quantile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_unstable_by(f64::total_cmp);
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

/// Novelty profiles for every eligible paper, indexed by [`PaperIdx`].
///
/// A paper is eligible when it has a venue and its in-corpus references
/// resolve to at least two distinct venues. Years run in parallel, each
/// rewiring replicate on its own stream derived from `(seed, year, replicate)`.
pub fn novelty_all(store: &CorpusStore, index: &CitationIndex, config: &NoveltyConfig) -> Vec<Option<NoveltyProfile>> {
    let venue = intern_venues(store);
    let years: Vec<i32> = store.by_year().keys().copied().collect();
    let raw: Vec<(PaperIdx, Vec<f64>)> = years
        .par_iter()
        .flat_map_iter(|&y| year_profiles(store, index, &venue, y, config))
        .collect();

    let tenth: Vec<Option<f64>> = raw.iter().map(|(_, zs)| Some(quantile(zs, 0.1))).collect();
    let cohorts: Vec<i32> = raw.iter().map(|(p, _)| store.paper(*p).year).collect();
    let pct = percentile_rank(&tenth, &cohorts);

    let mut out = vec![None; store.len()];
    for (((p, zs), t), pc) in raw.into_iter().zip(tenth).zip(pct) {
        out[p] = Some(NoveltyProfile {
            paper: p,
            z_scores: zs,
            tenth_percentile: t.expect("set above"),
            yearly_percentile: pc.expect("set above"),
        });
    }
    out
}

/// Profile of a single paper, computed against its publication-year cohort.
pub fn novelty(paper: PaperIdx, store: &CorpusStore, index: &CitationIndex, config: &NoveltyConfig) -> Option<NoveltyProfile> {
    let venue = intern_venues(store);
    let year = store.paper(paper).year;
    let raw = year_profiles(store, index, &venue, year, config);
    let tenth: Vec<Option<f64>> = raw.iter().map(|(_, zs)| Some(quantile(zs, 0.1))).collect();
    let pct = percentile_rank(&tenth, &vec![year; raw.len()]);
    raw.into_iter()
        .zip(tenth)
        .zip(pct)
        .find(|(((p, _), _), _)| *p == paper)
        .map(|(((p, zs), t), pc)| NoveltyProfile {
            paper: p,
            z_scores: zs,
            tenth_percentile: t.expect("set above"),
            yearly_percentile: pc.expect("set above"),
        })
}
