//! Cumulative per-discipline co-occurrence networks of level-3 concepts.
//!
//! An edge is born the first year any paper of the discipline co-assigns its
//! two endpoints, and is never removed. Every paper of that first year that
//! carries the pair is recorded as an introducer.

mod null_model;

use std::collections::HashMap;
use std::io::{Read, Write};

use rayon::prelude::*;

pub use null_model::randomize_labels;

use crate::corpus::{CorpusStore, PaperRecord};
use crate::error::{Error, Result};

pub type NodeId = u32;

/// A canonical concept pair, smaller id first.
pub type ConceptPair = (String, String);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeBirth {
    pub time: i32,
    /// Papers of year `time` carrying the pair, sorted by id bytes.
    pub introducers: Vec<String>,
    /// Position among all edges ordered by (time, first introducer, pair).
    pub tie_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub birth: EdgeBirth,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemporalConceptNetwork {
    discipline: String,
    nodes: Vec<String>,
    node_index: HashMap<String, NodeId>,
    /// Sorted by tie rank, so `edges[i].birth.tie_rank == i`.
    edges: Vec<Edge>,
    edge_index: HashMap<(NodeId, NodeId), usize>,
}

/// One edge in string form, as read from or written to a network dump.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRecord {
    pub u: String,
    pub v: String,
    pub time: i32,
    pub introducers: Vec<String>,
}

impl TemporalConceptNetwork {
    /// Assembles a network from edge records. Pairs are canonicalized and
    /// records for the same pair are merged by first-occurrence semantics.
    pub fn from_edges(discipline: impl Into<String>, records: Vec<EdgeRecord>) -> Self {
        let mut merged: HashMap<(String, String), (i32, Vec<String>)> = HashMap::new();
        for rec in records {
            if rec.u == rec.v {
                continue;
            }
            let key = if rec.u < rec.v { (rec.u, rec.v) } else { (rec.v, rec.u) };
            match merged.get_mut(&key) {
                Some((time, intro)) if *time == rec.time => intro.extend(rec.introducers),
                Some((time, intro)) if rec.time < *time => {
                    *time = rec.time;
                    *intro = rec.introducers;
                }
                Some(_) => {}
                None => {
                    merged.insert(key, (rec.time, rec.introducers));
                }
            }
        }

        let mut nodes: Vec<String> = merged
            .keys()
            .flat_map(|(u, v)| [u.clone(), v.clone()])
            .collect();
        nodes.sort_unstable();
        nodes.dedup();
        let node_index: HashMap<String, NodeId> = nodes
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i as NodeId))
            .collect();

        let mut edges: Vec<Edge> = merged
            .into_iter()
            .map(|((u, v), (time, mut introducers))| {
                introducers.sort_unstable_by(|a, b| a.as_bytes().cmp(b.as_bytes()));
                introducers.dedup();
                Edge {
                    u: node_index[&u],
                    v: node_index[&v],
                    birth: EdgeBirth {
                        time,
                        introducers,
                        tie_rank: 0,
                    },
                }
            })
            .collect();
        edges.sort_unstable_by(|a, b| {
            a.birth
                .time
                .cmp(&b.birth.time)
                .then_with(|| first_bytes(&a.birth).cmp(first_bytes(&b.birth)))
                .then_with(|| (a.u, a.v).cmp(&(b.u, b.v)))
        });
        let mut edge_index = HashMap::with_capacity(edges.len());
        for (rank, e) in edges.iter_mut().enumerate() {
            e.birth.tie_rank = rank;
            edge_index.insert((e.u, e.v), rank);
        }

        Self {
            discipline: discipline.into(),
            nodes,
            node_index,
            edges,
            edge_index,
        }
    }

    pub fn discipline(&self) -> &str {
        &self.discipline
    }

    /// Concept ids, sorted; a node's [`NodeId`] is its position here.
    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn node_id(&self, concept: &str) -> Option<NodeId> {
        self.node_index.get(concept).copied()
    }

    pub fn node_name(&self, id: NodeId) -> &str {
        &self.nodes[id as usize]
    }

    /// Edges in tie-rank order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_rank(&self, u: NodeId, v: NodeId) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edge_index.get(&key).copied()
    }

    pub fn edge_between(&self, a: &str, b: &str) -> Option<&Edge> {
        let (u, v) = (self.node_id(a)?, self.node_id(b)?);
        self.edge_rank(u, v).map(|r| &self.edges[r])
    }

    pub fn pair_names(&self, edge: &Edge) -> ConceptPair {
        (
            self.node_name(edge.u).to_string(),
            self.node_name(edge.v).to_string(),
        )
    }

    /// Latest edge birth time.
    pub fn tau_max(&self) -> Option<i32> {
        self.edges.last().map(|e| e.birth.time)
    }

    /// Edges present in the snapshot at `year`.
    pub fn edges_until(&self, year: i32) -> impl Iterator<Item = &Edge> {
        let end = self.edges.partition_point(|e| e.birth.time <= year);
        self.edges[..end].iter()
    }

    pub fn to_records(&self) -> Vec<EdgeRecord> {
        self.edges
            .iter()
            .map(|e| EdgeRecord {
                u: self.node_name(e.u).to_string(),
                v: self.node_name(e.v).to_string(),
                time: e.birth.time,
                introducers: e.birth.introducers.clone(),
            })
            .collect()
    }
}

fn first_bytes(birth: &EdgeBirth) -> &[u8] {
    birth.introducers.first().map(|s| s.as_bytes()).unwrap_or(&[])
}

/// Builds the temporal network of one discipline.
pub fn build_network(store: &CorpusStore, discipline: &str) -> Result<TemporalConceptNetwork> {
    match store.concept(discipline) {
        Some(info) if info.level == 0 => {}
        _ => return Err(Error::UnknownDiscipline(discipline.to_string())),
    }

    let mut first: HashMap<(&str, &str), (i32, Vec<&str>)> = HashMap::new();
    for paper in store.papers().iter().filter(|p| p.in_discipline(discipline)) {
        let topics = paper.topics();
        for (i, a) in topics.iter().enumerate() {
            for b in &topics[i + 1..] {
                let entry = first.entry((a, b)).or_insert((paper.year, Vec::new()));
                // store order is by year, so a later year never beats the first
                if entry.0 == paper.year {
                    entry.1.push(&paper.id);
                }
            }
        }
    }

    let records = first
        .into_iter()
        .map(|((u, v), (time, intro))| EdgeRecord {
            u: u.to_string(),
            v: v.to_string(),
            time,
            introducers: intro.into_iter().map(str::to_string).collect(),
        })
        .collect();
    Ok(TemporalConceptNetwork::from_edges(discipline, records))
}

/// Builds every discipline's network in parallel, keyed and ordered by discipline id.
pub fn build_all_networks(store: &CorpusStore) -> Result<Vec<TemporalConceptNetwork>> {
    store
        .disciplines()
        .par_iter()
        .map(|d| build_network(store, d))
        .collect()
}

/// Pairs of `paper`'s concepts that `paper` itself introduced in `network`.
pub fn novel_pairs(paper: &PaperRecord, network: &TemporalConceptNetwork) -> Result<Vec<ConceptPair>> {
    if !paper.in_discipline(network.discipline()) {
        return Err(Error::NotInDiscipline {
            paper: paper.id.clone(),
            discipline: network.discipline().to_string(),
        });
    }
    let topics = paper.topics();
    let mut out = Vec::new();
    for (i, a) in topics.iter().enumerate() {
        for b in &topics[i + 1..] {
            let Some(edge) = network.edge_between(a, b) else {
                continue;
            };
            if edge
                .birth
                .introducers
                .binary_search_by(|x| x.as_bytes().cmp(paper.id.as_bytes()))
                .is_ok()
            {
                out.push((a.to_string(), b.to_string()));
            }
        }
    }
    Ok(out)
}

/// Writes `discipline,u,v,time,introducer...` rows, one per edge.
pub fn write_networks<W: Write>(networks: &[TemporalConceptNetwork], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
    w.write_record(["discipline", "u", "v", "time", "introducers"])?;
    for net in networks {
        for rec in net.to_records() {
            let time = rec.time.to_string();
            let mut row = vec![net.discipline(), rec.u.as_str(), rec.v.as_str(), time.as_str()];
            row.extend(rec.introducers.iter().map(String::as_str));
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads a dump produced by [`write_networks`]; no corpus is needed.
pub fn read_networks<R: Read>(input: R) -> std::result::Result<Vec<TemporalConceptNetwork>, String> {
    let mut r = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let mut by_disc: std::collections::BTreeMap<String, Vec<EdgeRecord>> = Default::default();
    for (i, row) in r.records().enumerate() {
        let row = row.map_err(|e| e.to_string())?;
        if row.len() < 5 {
            return Err(format!("row {}: expected at least 5 fields", i + 2));
        }
        let time = row[3]
            .parse()
            .map_err(|e| format!("row {}: bad time: {e}", i + 2))?;
        by_disc.entry(row[0].to_string()).or_default().push(EdgeRecord {
            u: row[1].to_string(),
            v: row[2].to_string(),
            time,
            introducers: row.iter().skip(4).map(str::to_string).collect(),
        });
    }
    Ok(by_disc
        .into_iter()
        .map(|(d, recs)| TemporalConceptNetwork::from_edges(d, recs))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::test_paper;

    fn store(papers: &[(&str, i32, &[&str])]) -> CorpusStore {
        CorpusStore::from_records(
            papers
                .iter()
                .map(|(id, y, t)| test_paper(id, *y, &["D"], t))
                .collect(),
        )
    }

    fn pair(a: &str, b: &str) -> ConceptPair {
        (a.to_string(), b.to_string())
    }

    #[test]
    fn first_occurrence_wins() {
        let s = store(&[("P1", 2000, &["a", "b"]), ("P2", 2001, &["b", "a"])]);
        let net = build_network(&s, "D").unwrap();
        assert_eq!(net.edges().len(), 1);
        let e = net.edge_between("a", "b").unwrap();
        assert_eq!(e.birth.time, 2000);
        assert_eq!(e.birth.introducers, ["P1"]);
    }

    #[test]
    fn same_year_papers_all_introduce() {
        let s = store(&[("P2", 2000, &["a", "b"]), ("P1", 2000, &["a", "b"])]);
        let net = build_network(&s, "D").unwrap();
        assert_eq!(net.edge_between("a", "b").unwrap().birth.introducers, ["P1", "P2"]);
    }

    #[test]
    fn pairwise_expansion() {
        let s = store(&[("P1", 2000, &["c", "a", "b"])]);
        let net = build_network(&s, "D").unwrap();
        let recs = net.to_records();
        assert_eq!(recs.len(), 3);
        for r in recs {
            assert_eq!(r.time, 2000);
            assert_eq!(r.introducers, ["P1"]);
        }
        assert_eq!(net.tau_max(), Some(2000));
    }

    #[test]
    fn unknown_discipline() {
        let s = store(&[("P1", 2000, &["a", "b"])]);
        assert!(matches!(build_network(&s, "E"), Err(Error::UnknownDiscipline(_))));
        // level-3 ids are not disciplines
        assert!(matches!(build_network(&s, "a"), Err(Error::UnknownDiscipline(_))));
    }

    #[test]
    fn novel_pair_cases() {
        let s = store(&[
            ("P0", 1999, &["a", "b"]),
            ("P1", 2000, &["x", "y", "z"]),
            ("P2", 2001, &["x", "y"]),
            ("P3", 2002, &["a", "b", "c"]),
        ]);
        let net = build_network(&s, "D").unwrap();
        assert!(novel_pairs(s.get("P2").unwrap(), &net).unwrap().is_empty());
        assert_eq!(novel_pairs(s.get("P1").unwrap(), &net).unwrap().len(), 3);
        assert_eq!(
            novel_pairs(s.get("P3").unwrap(), &net).unwrap(),
            vec![pair("a", "c"), pair("b", "c")]
        );
        let outsider = test_paper("Q", 2000, &["E"], &["a", "b"]);
        assert!(matches!(
            novel_pairs(&outsider, &net),
            Err(Error::NotInDiscipline { .. })
        ));
    }

    #[test]
    fn tie_rank_orders_time_then_introducer_then_pair() {
        let s = store(&[
            ("B", 2000, &["a", "b"]),
            ("A", 2000, &["c", "d"]),
            ("C", 1999, &["y", "z"]),
            ("A2", 2000, &["e", "f", "g"]),
        ]);
        let net = build_network(&s, "D").unwrap();
        let order: Vec<ConceptPair> = net.edges().iter().map(|e| net.pair_names(e)).collect();
        assert_eq!(
            order,
            vec![
                pair("y", "z"),
                pair("c", "d"),
                pair("e", "f"),
                pair("e", "g"),
                pair("f", "g"),
                pair("a", "b")
            ]
        );
        for (i, e) in net.edges().iter().enumerate() {
            assert_eq!(e.birth.tie_rank, i);
        }
    }

    #[test]
    fn snapshots_are_cumulative() {
        let s = store(&[
            ("P1", 2000, &["a", "b"]),
            ("P2", 2002, &["b", "c"]),
            ("P3", 2005, &["a", "c"]),
        ]);
        let net = build_network(&s, "D").unwrap();
        assert_eq!(net.edges_until(1999).count(), 0);
        assert_eq!(net.edges_until(2001).count(), 1);
        assert_eq!(net.edges_until(2004).count(), 2);
        assert_eq!(net.edges_until(2020).count(), 3);
    }

    #[test]
    fn multi_discipline_paper_feeds_each_network() {
        let s = CorpusStore::from_records(vec![
            test_paper("P1", 2000, &["D", "E"], &["a", "b"]),
            test_paper("P2", 1999, &["E"], &["a", "b"]),
        ]);
        let nets = build_all_networks(&s).unwrap();
        assert_eq!(nets[0].edge_between("a", "b").unwrap().birth.introducers, ["P1"]);
        assert_eq!(nets[1].edge_between("a", "b").unwrap().birth.introducers, ["P2"]);
    }

    #[test]
    fn dump_round_trip() {
        let s = CorpusStore::from_records(vec![
            test_paper("P1", 2000, &["D", "E"], &["a", "b", "c"]),
            test_paper("P2", 2000, &["D"], &["a", "b"]),
            test_paper("P3", 2003, &["E"], &["c", "d"]),
        ]);
        let nets = build_all_networks(&s).unwrap();
        let mut buf = Vec::new();
        write_networks(&nets, &mut buf).unwrap();
        assert_eq!(read_networks(&buf[..]).unwrap(), nets);
    }
}
