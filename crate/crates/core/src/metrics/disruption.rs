use std::collections::{BTreeMap, HashSet};

use crate::corpus::{CitationIndex, CorpusStore, PaperIdx};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DisruptionCounts {
    /// Citers of the focal paper that cite none of its references.
    pub n_i: usize,
    /// Citers of the focal paper that also cite at least one of its references.
    pub n_j: usize,
    /// Papers citing a reference of the focal paper but not the focal paper.
    pub n_k: usize,
}

impl DisruptionCounts {
    /// `(n_i - n_j) / (n_i + n_j + n_k)`, undefined when nobody cites anything.
    pub fn index(&self) -> Option<f64> {
        let denom = self.n_i + self.n_j + self.n_k;
        (denom > 0).then(|| (self.n_i as f64 - self.n_j as f64) / denom as f64)
    }
}

/// Counts for the focal paper, or `None` when it has no in-corpus references.
///
/// `window` limits every citer to `focal.year + window`. `n_k` only counts
/// papers published no earlier than the focal paper.
pub fn disruption_counts(
    focal: PaperIdx,
    store: &CorpusStore,
    index: &CitationIndex,
    window: Option<u32>,
) -> Option<DisruptionCounts> {
    let refs = index.references(focal);
    if refs.is_empty() {
        return None;
    }
    let year = store.paper(focal).year;
    let last = window.map_or(i32::MAX, |w| year.saturating_add(w as i32));

    let mut counts = DisruptionCounts::default();
    let mut focal_citers = HashSet::new();
    for c in index.citers(focal).iter().filter(|c| c.year <= last) {
        focal_citers.insert(c.citer);
        if refs.iter().any(|&r| index.cites(c.citer, r)) {
            counts.n_j += 1;
        } else {
            counts.n_i += 1;
        }
    }

    let mut others = HashSet::new();
    for &r in refs {
        for c in index.citers(r) {
            if c.citer != focal && c.year >= year && c.year <= last && !focal_citers.contains(&c.citer) {
                others.insert(c.citer);
            }
        }
    }
    counts.n_k = others.len();
    Some(counts)
}

pub fn cd_index(focal: PaperIdx, store: &CorpusStore, index: &CitationIndex, window: Option<u32>) -> Option<f64> {
    disruption_counts(focal, store, index, window)?.index()
}

/// Mid-rank percentile of each value within its cohort:
/// `100 * (below + 0.5 * equal) / cohort_size`. Missing values stay missing
/// and do not count toward cohort sizes.
pub fn percentile_rank<K: Ord>(values: &[Option<f64>], cohorts: &[K]) -> Vec<Option<f64>> {
    assert_eq!(values.len(), cohorts.len());
    let mut groups: BTreeMap<&K, Vec<f64>> = BTreeMap::new();
    for (v, k) in values.iter().zip(cohorts) {
        if let Some(v) = v {
            groups.entry(k).or_default().push(*v);
        }
    }
    for g in groups.values_mut() {
        g.sort_unstable_by(f64::total_cmp);
    }
    values
        .iter()
        .zip(cohorts)
        .map(|(v, k)| {
            let v = (*v)?;
            let sorted = &groups[k];
            let below = sorted.partition_point(|x| x.total_cmp(&v).is_lt());
            let upto = sorted.partition_point(|x| x.total_cmp(&v).is_le());
            Some(100.0 * (below as f64 + 0.5 * (upto - below) as f64) / sorted.len() as f64)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::test_paper;
    use proptest::prelude::*;

    fn counts(n_i: usize, n_j: usize, n_k: usize) -> DisruptionCounts {
        DisruptionCounts { n_i, n_j, n_k }
    }

    #[test]
    fn formula_values() {
        assert_eq!(counts(3, 1, 1).index(), Some(0.4));
        assert_eq!(counts(5, 0, 0).index(), Some(1.0));
        assert_eq!(counts(0, 4, 0).index(), Some(-1.0));
        assert_eq!(counts(0, 0, 0).index(), None);
    }

    /// R is cited by F; A cites F only, B cites F and R, C cites R only.
    fn tiny() -> (CorpusStore, CitationIndex) {
        let mk = |id: &str, year: i32, refs: &[&str]| {
            let mut p = test_paper(id, year, &["D"], &["a", "b"]);
            p.references = refs.iter().map(|s| s.to_string()).collect();
            p
        };
        let store = CorpusStore::from_records(vec![
            mk("R", 1990, &[]),
            mk("F", 2000, &["R"]),
            mk("A", 2001, &["F"]),
            mk("B", 2002, &["F", "R"]),
            mk("C", 2003, &["R"]),
            mk("Old", 1995, &["R"]),
            mk("Late", 2030, &["F"]),
        ]);
        let idx = CitationIndex::build(&store);
        (store, idx)
    }

    #[test]
    fn counts_from_citation_graph() {
        let (s, idx) = tiny();
        let f = s.idx_of("F").unwrap();
        assert_eq!(disruption_counts(f, &s, &idx, None), Some(counts(2, 1, 1)));
        assert_eq!(cd_index(f, &s, &idx, None), Some(0.25));
        assert_eq!(disruption_counts(f, &s, &idx, Some(2)), Some(counts(1, 1, 0)));
        // no in-corpus references
        assert_eq!(cd_index(s.idx_of("R").unwrap(), &s, &idx, None), None);
    }

    #[test]
    fn percentile_examples() {
        let cohort = [0, 0, 0];
        let p = percentile_rank(&[Some(1.0), Some(2.0), Some(3.0)], &cohort);
        assert_eq!(p[1], Some(50.0));
        let p = percentile_rank(&[Some(7.0); 4], &[1; 4]);
        assert!(p.iter().all(|&x| x == Some(50.0)));
        assert_eq!(percentile_rank(&[Some(-3.0)], &[9]), vec![Some(50.0)]);
        let p = percentile_rank(&[Some(1.0), None, Some(5.0)], &[0, 0, 1]);
        assert_eq!(p, vec![Some(50.0), None, Some(50.0)]);
    }

    proptest! {
        #[test]
        fn cd_stays_in_range(n_i in 0usize..50, n_j in 0usize..50, n_k in 0usize..50) {
            let c = counts(n_i, n_j, n_k);
            if let Some(v) = c.index() {
                prop_assert!((-1.0..=1.0).contains(&v));
                prop_assert_eq!(v == 1.0, n_j == 0 && n_k == 0 && n_i > 0);
                prop_assert_eq!(v == -1.0, n_i == 0 && n_k == 0 && n_j > 0);
            } else {
                prop_assert_eq!(n_i + n_j + n_k, 0);
            }
        }

        #[test]
        fn percentile_is_monotone(vals in prop::collection::vec(-100i32..100, 1..40)) {
            let values: Vec<Option<f64>> = vals.iter().map(|&v| Some(v as f64)).collect();
            let ranks = percentile_rank(&values, &vec![0; vals.len()]);
            for i in 0..vals.len() {
                for j in 0..vals.len() {
                    if vals[i] < vals[j] {
                        prop_assert!(ranks[i] <= ranks[j]);
                    }
                }
                let r = ranks[i].unwrap();
                prop_assert!((0.0..=100.0).contains(&r));
            }
        }
    }
}
