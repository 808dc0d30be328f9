use std::collections::BTreeMap;

use crate::corpus::{CitationIndex, CorpusStore, PaperIdx};

pub const MAX_WINDOW: usize = 20;

/// `C1..C20`: citations dated within `[year, year + k]`. A window reaching
/// past `horizon_year` is censored and reported as missing.
pub fn citation_windows(
    paper: PaperIdx,
    store: &CorpusStore,
    index: &CitationIndex,
    horizon_year: i32,
) -> [Option<u64>; MAX_WINDOW] {
    let year = store.paper(paper).year;
    let mut by_age = [0u64; MAX_WINDOW + 1];
    for c in index.citers(paper) {
        let age = c.year - year;
        if (0..=MAX_WINDOW as i32).contains(&age) {
            by_age[age as usize] += 1;
        }
    }
    let mut out = [None; MAX_WINDOW];
    let mut running = by_age[0];
    for k in 1..=MAX_WINDOW {
        running += by_age[k];
        if year + k as i32 <= horizon_year {
            out[k - 1] = Some(running);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TieReport {
    /// Papers flagged only because they tie the cutoff count.
    pub tied_extra: usize,
}

/// Flags the top `k` percent of each cohort by citation count.
///
/// A cohort of `n` papers admits `m = max(1, floor(k * n / 100))` papers by
/// rank; the count of the m-th ranked paper is the cutoff and every paper at
/// or above it is flagged, so ties at the cutoff are all included.
pub fn top_k_flags<K: Ord>(counts: &[u64], cohorts: &[K], k: f64) -> (Vec<bool>, TieReport) {
    assert_eq!(counts.len(), cohorts.len());
    let mut groups: BTreeMap<&K, Vec<u64>> = BTreeMap::new();
    for (c, g) in counts.iter().zip(cohorts) {
        groups.entry(g).or_default().push(*c);
    }
    let mut cutoff: BTreeMap<&K, u64> = BTreeMap::new();
    let mut report = TieReport::default();
    for (g, mut vals) in groups {
        vals.sort_unstable_by(|a, b| b.cmp(a));
        let m = ((k * vals.len() as f64 / 100.0).floor() as usize).clamp(1, vals.len());
        let t = vals[m - 1];
        report.tied_extra += vals.iter().filter(|&&v| v >= t).count() - m;
        cutoff.insert(g, t);
    }
    let flags = counts
        .iter()
        .zip(cohorts)
        .map(|(c, g)| *c >= cutoff[g])
        .collect();
    (flags, report)
}
