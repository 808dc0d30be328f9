//! Per-paper recombination categories and their shares by discipline and
//! year, for the real corpus and for label-shuffled null replicates.

mod shares;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;

pub use shares::{null_comparison, real_shares, share_table, write_shares, Grouping, NullConfig, ShareRow, ShareTable, Source};

use crate::concept_net::{build_all_networks, ConceptPair, NodeId, TemporalConceptNetwork};
use crate::corpus::CorpusStore;
use crate::error::{Error, Result};
use crate::topology::{build_flag_filtration, compute_persistence, diagram_rows, gap_edges, DiagramRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    GapOpener,
    NovelPairNonGap,
    NoNovelPair,
}

impl Category {
    pub const ALL: [Category; 3] = [Category::GapOpener, Category::NovelPairNonGap, Category::NoNovelPair];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::GapOpener => "gap_opener",
            Category::NovelPairNonGap => "novel_pair_non_gap",
            Category::NoNovelPair => "no_novel_pair",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown category `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EvidenceKind {
    Gap,
    Novel,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Evidence {
    pub discipline: String,
    pub pair: ConceptPair,
    pub kind: EvidenceKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaperClassification {
    pub paper_id: String,
    pub category: Category,
    /// Every pair the paper introduced, per discipline, sorted.
    pub evidence: Vec<Evidence>,
}

impl PaperClassification {
    pub fn from_evidence(paper_id: String, mut evidence: Vec<Evidence>) -> Self {
        evidence.sort_unstable();
        let category = if evidence.iter().any(|e| e.kind == EvidenceKind::Gap) {
            Category::GapOpener
        } else if evidence.is_empty() {
            Category::NoNovelPair
        } else {
            Category::NovelPairNonGap
        };
        Self {
            paper_id,
            category,
            evidence,
        }
    }

    pub fn n_gap_edges(&self) -> usize {
        self.evidence.iter().filter(|e| e.kind == EvidenceKind::Gap).count()
    }

    /// All introduced pairs, gap edges included.
    pub fn n_novel_pairs(&self) -> usize {
        self.evidence.len()
    }

    /// Distinct introduced concept pairs across disciplines.
    pub fn novel_pairs(&self) -> Vec<&ConceptPair> {
        let mut out: Vec<&ConceptPair> = self.evidence.iter().map(|e| &e.pair).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// A discipline's network together with its gap edges.
#[derive(Clone, Debug)]
pub struct DisciplineAnalysis {
    pub network: TemporalConceptNetwork,
    pub gaps: HashSet<(NodeId, NodeId)>,
}

impl DisciplineAnalysis {
    /// Resolves gap pairs by name; pairs absent from the network are ignored.
    pub fn from_pairs(network: TemporalConceptNetwork, pairs: &[ConceptPair]) -> Self {
        let gaps = pairs
            .iter()
            .filter_map(|(a, b)| {
                let e = network.edge_between(a, b)?;
                Some((e.u, e.v))
            })
            .collect();
        Self { network, gaps }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TopologyParams {
    pub max_dim: usize,
    pub min_persistence: i32,
}

impl Default for TopologyParams {
    fn default() -> Self {
        Self {
            max_dim: 2,
            min_persistence: 1,
        }
    }
}

/// Filtration, persistence, and gap extraction for one network.
pub fn analyze_network(network: TemporalConceptNetwork, params: TopologyParams) -> (DisciplineAnalysis, Vec<DiagramRow>) {
    let filtration = build_flag_filtration(&network, params.max_dim);
    let diagram = compute_persistence(&filtration);
    let rows = diagram_rows(&network, &filtration, &diagram);
    let gaps = gap_edges(&diagram, &filtration, params.min_persistence)
        .into_iter()
        .collect();
    (DisciplineAnalysis { network, gaps }, rows)
}

/// Builds and analyzes every discipline of `store`, disciplines in parallel.
pub fn analyze_store(store: &CorpusStore, params: TopologyParams) -> Result<Vec<(DisciplineAnalysis, Vec<DiagramRow>)>> {
    Ok(build_all_networks(store)?
        .into_par_iter()
        .map(|n| analyze_network(n, params))
        .collect())
}

/// Classifies every paper of `store`, in store order.
///
/// A paper is a gap opener if it introduced a gap edge in any of its
/// disciplines; co-introducers of the same edge in the same year all count.
pub fn classify_all(store: &CorpusStore, analyses: &[DisciplineAnalysis]) -> Result<Vec<PaperClassification>> {
    let covered: HashSet<&str> = analyses.iter().map(|a| a.network.discipline()).collect();
    if let Some(missing) = store.disciplines().into_iter().find(|d| !covered.contains(d.as_str())) {
        return Err(Error::MissingDiagram(missing));
    }

    let mut evidence: HashMap<usize, Vec<Evidence>> = HashMap::new();
    for a in analyses {
        let net = &a.network;
        for edge in net.edges() {
            let kind = if a.gaps.contains(&(edge.u, edge.v)) {
                EvidenceKind::Gap
            } else {
                EvidenceKind::Novel
            };
            for id in &edge.birth.introducers {
                let Some(idx) = store.idx_of(id) else {
                    return Err(Error::Invariant(format!(
                        "introducer `{id}` of discipline `{}` is not in the corpus",
                        net.discipline()
                    )));
                };
                evidence.entry(idx).or_default().push(Evidence {
                    discipline: net.discipline().to_string(),
                    pair: net.pair_names(edge),
                    kind,
                });
            }
        }
    }

    Ok(store
        .papers()
        .iter()
        .enumerate()
        .map(|(idx, p)| PaperClassification::from_evidence(p.id.clone(), evidence.remove(&idx).unwrap_or_default()))
        .collect())
}

pub fn write_classifications<W: Write>(classes: &[PaperClassification], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["paper_id", "category", "n_gap_edges", "n_novel_pairs"])?;
    for c in classes {
        w.write_record([
            c.paper_id.as_str(),
            c.category.as_str(),
            &c.n_gap_edges().to_string(),
            &c.n_novel_pairs().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads `paper_id,category` pairs back from a classification file.
pub fn read_categories<R: std::io::Read>(input: R) -> Result<Vec<(String, Category)>, String> {
    let mut r = csv::Reader::from_reader(input);
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        if rec.len() < 2 {
            return Err("short classification row".into());
        }
        out.push((rec[0].to_string(), rec[1].parse()?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::test_paper;
    use proptest::prelude::*;

    fn store(papers: &[(&str, i32, &[&str], &[&str])]) -> CorpusStore {
        CorpusStore::from_records(papers.iter().map(|(id, y, d, t)| test_paper(id, *y, d, t)).collect())
    }

    fn classify(s: &CorpusStore) -> HashMap<String, Category> {
        let analyses: Vec<_> = analyze_store(s, TopologyParams::default())
            .unwrap()
            .into_iter()
            .map(|(a, _)| a)
            .collect();
        classify_all(s, &analyses)
            .unwrap()
            .into_iter()
            .map(|c| (c.paper_id, c.category))
            .collect()
    }

    #[test]
    fn square_closer_is_the_gap_opener() {
        let s = store(&[
            ("P1", 2001, &["D"], &["a", "b"]),
            ("P2", 2002, &["D"], &["b", "c"]),
            ("P3", 2003, &["D"], &["c", "d"]),
            ("P4", 2004, &["D"], &["a", "d"]),
            ("P5", 2005, &["D"], &["a", "b"]),
            ("P6", 2006, &["D"], &["d", "e"]),
        ]);
        let c = classify(&s);
        assert_eq!(c["P4"], Category::GapOpener);
        for p in ["P1", "P2", "P3", "P6"] {
            assert_eq!(c[p], Category::NovelPairNonGap, "{p}");
        }
        assert_eq!(c["P5"], Category::NoNovelPair);
    }

    #[test]
    fn gap_in_any_discipline_wins() {
        let s = store(&[
            ("P1", 2001, &["D", "E"], &["a", "b"]),
            ("Q", 2000, &["E"], &["b", "c"]),
            ("R", 2000, &["E"], &["c", "d"]),
            ("S", 2000, &["E"], &["d", "e"]),
            // closes a-b-c-d-e in E only; in D it is a tree edge
            ("P3", 2003, &["D", "E"], &["a", "e"]),
        ]);
        let classes = {
            let analyses: Vec<_> = analyze_store(&s, TopologyParams::default()).unwrap().into_iter().map(|(a, _)| a).collect();
            classify_all(&s, &analyses).unwrap()
        };
        let p3 = classes.iter().find(|c| c.paper_id == "P3").unwrap();
        assert_eq!(p3.category, Category::GapOpener);
        assert_eq!(p3.evidence.len(), 2);
        assert_eq!(p3.n_gap_edges(), 1);
        assert_eq!(p3.novel_pairs().len(), 1);
    }

    #[test]
    fn same_year_coopeners_all_flagged() {
        let s = store(&[
            ("P1", 2001, &["D"], &["a", "b"]),
            ("P2", 2002, &["D"], &["b", "c"]),
            ("P3", 2003, &["D"], &["c", "d"]),
            ("P4", 2004, &["D"], &["a", "d"]),
            ("P4b", 2004, &["D"], &["d", "a"]),
        ]);
        let c = classify(&s);
        assert_eq!(c["P4"], Category::GapOpener);
        assert_eq!(c["P4b"], Category::GapOpener);
    }

    #[test]
    fn missing_analysis_is_an_error() {
        let s = store(&[("P1", 2001, &["D"], &["a", "b"]), ("P2", 2001, &["E"], &["a", "b"])]);
        let (a, _) = analyze_network(crate::concept_net::build_network(&s, "D").unwrap(), TopologyParams::default());
        assert!(matches!(classify_all(&s, &[a]), Err(Error::MissingDiagram(d)) if d == "E"));
    }

    #[test]
    fn category_round_trips_through_text() {
        for c in Category::ALL {
            assert_eq!(c.as_str().parse::<Category>().unwrap(), c);
        }
        assert!("other".parse::<Category>().is_err());
    }

    fn evidence_strategy() -> impl Strategy<Value = Vec<(u8, bool)>> {
        prop::collection::vec((0u8..4, any::<bool>()), 0..6)
    }

    fn to_evidence(raw: &[(u8, bool)]) -> Vec<Evidence> {
        raw.iter()
            .map(|&(p, gap)| Evidence {
                discipline: "D".into(),
                pair: (format!("a{p}"), format!("b{p}")),
                kind: if gap { EvidenceKind::Gap } else { EvidenceKind::Novel },
            })
            .collect()
    }

    proptest! {
        #[test]
        fn adding_gap_evidence_never_demotes(raw in evidence_strategy()) {
            let before = PaperClassification::from_evidence("p".into(), to_evidence(&raw));
            let mut more = to_evidence(&raw);
            more.push(Evidence { discipline: "E".into(), pair: ("x".into(), "y".into()), kind: EvidenceKind::Gap });
            let after = PaperClassification::from_evidence("p".into(), more);
            prop_assert!(after.category <= before.category);
            prop_assert_eq!(after.category, Category::GapOpener);
        }

        #[test]
        fn category_matches_evidence(raw in evidence_strategy()) {
            let c = PaperClassification::from_evidence("p".into(), to_evidence(&raw));
            let gaps = raw.iter().filter(|r| r.1).count();
            match c.category {
                Category::GapOpener => prop_assert!(gaps > 0),
                Category::NovelPairNonGap => prop_assert!(gaps == 0 && !raw.is_empty()),
                Category::NoNovelPair => prop_assert!(raw.is_empty()),
            }
        }
    }
}
