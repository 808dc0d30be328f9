use std::collections::HashMap;

use crate::concept_net::ConceptPair;
use crate::corpus::{CorpusStore, PaperRecord};

/// Publication years of the papers carrying each level-3 concept, ascending.
#[derive(Clone, Debug, Default)]
pub struct ConceptOccurrences {
    years: HashMap<String, Vec<i32>>,
}

impl ConceptOccurrences {
    pub fn build(store: &CorpusStore) -> Self {
        let mut years: HashMap<String, Vec<i32>> = HashMap::new();
        // store order is by year, so every list comes out sorted
        for p in store.papers() {
            for t in p.topics() {
                years.entry(t.to_string()).or_default().push(p.year);
            }
        }
        Self { years }
    }

    /// Papers carrying `concept` published strictly before `year`.
    pub fn count_before(&self, concept: &str, year: i32) -> usize {
        self.years
            .get(concept)
            .map_or(0, |ys| ys.partition_point(|&y| y < year))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConceptPairStats {
    /// Mean over novel pairs of the mean endpoint age in years.
    pub age: f64,
    /// Mean over novel pairs of the mean prior occurrence count.
    pub popularity: f64,
    /// Same, counting occurrences up to five years after publication.
    pub popularity_5: f64,
    /// Same, counting occurrences up to ten years after publication.
    pub popularity_10: f64,
}

/// Age and popularity of the concepts a paper newly linked; `None` without novel pairs.
pub fn concept_pair_stats(
    paper: &PaperRecord,
    novel_pairs: &[&ConceptPair],
    store: &CorpusStore,
    occurrences: &ConceptOccurrences,
) -> Option<ConceptPairStats> {
    if novel_pairs.is_empty() {
        return None;
    }
    let n = novel_pairs.len() as f64;
    let age_of = |c: &str| {
        let first = store.concept(c).map_or(paper.year, |i| i.first_year_seen);
        (paper.year - first) as f64
    };
    let pop = |shift: i32| {
        novel_pairs
            .iter()
            .map(|(a, b)| {
                let y = paper.year + shift;
                (occurrences.count_before(a, y) + occurrences.count_before(b, y)) as f64 / 2.0
            })
            .sum::<f64>()
            / n
    };
    Some(ConceptPairStats {
        age: novel_pairs.iter().map(|(a, b)| (age_of(a) + age_of(b)) / 2.0).sum::<f64>() / n,
        popularity: pop(0),
        popularity_5: pop(5),
        popularity_10: pop(10),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::test_paper;

    fn pair(a: &str, b: &str) -> ConceptPair {
        (a.to_string(), b.to_string())
    }

    #[test]
    fn fresh_concepts_have_age_zero() {
        let store = CorpusStore::from_records(vec![test_paper("P", 2000, &["D"], &["a", "b"])]);
        let occ = ConceptOccurrences::build(&store);
        let p = pair("a", "b");
        let s = concept_pair_stats(store.get("P").unwrap(), &[&p], &store, &occ).unwrap();
        assert_eq!(s.age, 0.0);
        assert_eq!(s.popularity, 0.0);
    }

    #[test]
    fn mean_endpoint_age() {
        let store = CorpusStore::from_records(vec![
            test_paper("A", 1998, &["D"], &["a", "x"]),
            test_paper("B", 1996, &["D"], &["b", "y"]),
            test_paper("P", 2000, &["D"], &["a", "b"]),
        ]);
        let occ = ConceptOccurrences::build(&store);
        let p = pair("a", "b");
        let s = concept_pair_stats(store.get("P").unwrap(), &[&p], &store, &occ).unwrap();
        assert_eq!(s.age, 3.0);
        assert_eq!(s.popularity, 1.0);
    }

    #[test]
    fn popularity_counts_prior_papers() {
        let mut papers: Vec<_> = (0..10)
            .map(|i| test_paper(&format!("A{i}"), 1990 + i, &["D"], &["a", "b"]))
            .collect();
        papers.push(test_paper("P", 2000, &["D"], &["a", "b"]));
        papers.push(test_paper("Q", 2000, &["D"], &["a", "c"]));
        papers.push(test_paper("L1", 2003, &["D"], &["a", "b"]));
        papers.push(test_paper("L2", 2009, &["D"], &["a", "z"]));
        let store = CorpusStore::from_records(papers);
        let occ = ConceptOccurrences::build(&store);
        let p = pair("a", "b");
        let s = concept_pair_stats(store.get("P").unwrap(), &[&p], &store, &occ).unwrap();
        assert_eq!(s.popularity, 10.0);
        // a: +P, Q, L1 by 2004; b: +P, L1
        assert_eq!(s.popularity_5, (13.0 + 12.0) / 2.0);
        assert_eq!(s.popularity_10, (14.0 + 12.0) / 2.0);
    }

    #[test]
    fn no_novel_pairs() {
        let store = CorpusStore::from_records(vec![test_paper("P", 2000, &["D"], &["a", "b"])]);
        let occ = ConceptOccurrences::build(&store);
        assert!(concept_pair_stats(store.get("P").unwrap(), &[], &store, &occ).is_none());
    }
}
