//! Test-local oracles, written from the definitions and sharing no code with
//! the library's topology module.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use gapminer_core::concept_net::{EdgeRecord, TemporalConceptNetwork};
use gapminer_core::corpus::PaperRecord;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Plain union-find with path halving.
pub struct Dsu(Vec<usize>);

impl Dsu {
    pub fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already connected.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// Rank over GF(2) of vectors packed into `u128` bit masks.
fn gf2_rank(mut rows: Vec<u128>) -> usize {
    let mut rank = 0;
    for bit in 0..128 {
        let Some(pos) = rows[rank..].iter().position(|r| r >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank, rank + pos);
        let pivot = rows[rank];
        for r in rows.iter_mut().skip(rank + 1) {
            if *r >> bit & 1 == 1 {
                *r ^= pivot;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// First-appearance year of each undirected pair.
pub fn first_times(edges: &[(String, String, i32)]) -> BTreeMap<(String, String), i32> {
    let mut out: BTreeMap<(String, String), i32> = BTreeMap::new();
    for (a, b, t) in edges {
        let key = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        let e = out.entry(key).or_insert(*t);
        *e = (*e).min(*t);
    }
    out
}

/// β1 of the flag complex (triangles filled) of the graph formed by the
/// edges present at `year`: |E| − rank ∂1 − rank ∂2 over GF(2).
pub fn beta1_at(edges: &BTreeMap<(String, String), i32>, year: i32) -> usize {
    let present: Vec<&(String, String)> = edges.iter().filter(|(_, &t)| t <= year).map(|(k, _)| k).collect();
    assert!(present.len() <= 128, "oracle handles at most 128 edges");
    let mut names: BTreeSet<&str> = BTreeSet::new();
    for (a, b) in &present {
        names.insert(a);
        names.insert(b);
    }
    let id: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let mut dsu = Dsu::new(id.len());
    let mut merges = 0;
    for (a, b) in &present {
        if dsu.union(id[a.as_str()], id[b.as_str()]) {
            merges += 1;
        }
    }
    // rank ∂1 = |V| − components = number of successful merges
    let edge_bit: BTreeMap<(usize, usize), u32> = present
        .iter()
        .enumerate()
        .map(|(i, (a, b))| {
            let (x, y) = (id[a.as_str()], id[b.as_str()]);
            ((x.min(y), x.max(y)), i as u32)
        })
        .collect();
    let n = id.len();
    let mut tri_rows = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            let Some(&ab) = edge_bit.get(&(a, b)) else { continue };
            for c in b + 1..n {
                if let (Some(&ac), Some(&bc)) = (edge_bit.get(&(a, c)), edge_bit.get(&(b, c))) {
                    tri_rows.push((1u128 << ab) | (1u128 << ac) | (1u128 << bc));
                }
            }
        }
    }
    present.len() - merges - gf2_rank(tri_rows)
}

/// Random temporal graph: ≤ `max_nodes` nodes, ≤ `max_edges` edge records
/// (possibly repeating a pair in a later year), years in a short window so
/// that ties are common.
pub fn random_temporal_graph(rng: &mut ChaCha8Rng, max_nodes: usize, max_edges: usize) -> Vec<(String, String, i32)> {
    let n = rng.gen_range(2..=max_nodes);
    let m = rng.gen_range(1..=max_edges);
    let span = rng.gen_range(1..=8);
    (0..m)
        .map(|_| {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            (format!("n{a:02}"), format!("n{b:02}"), 2000 + rng.gen_range(0..span))
        })
        .collect()
}

pub fn network(edges: &[(String, String, i32)]) -> TemporalConceptNetwork {
    let records = edges
        .iter()
        .enumerate()
        .map(|(i, (u, v, t))| EdgeRecord {
            u: u.clone(),
            v: v.clone(),
            time: *t,
            introducers: vec![format!("p{i:03}")],
        })
        .collect();
    TemporalConceptNetwork::from_edges("D", records)
}

/// A record with the given disciplines and positive-confidence topics.
pub fn paper(id: &str, year: i32, disciplines: &[&str], topics: &[&str], refs: &[&str]) -> PaperRecord {
    let value = serde_json::json!({
        "id": id,
        "year": year,
        "l0": disciplines.iter().map(|d| (d, 1.0)).collect::<Vec<_>>(),
        "l3": topics.iter().map(|t| (t, 0.7)).collect::<Vec<_>>(),
        "refs": refs,
    });
    serde_json::from_value(value).expect("valid record")
}

/// Per-discipline edge lists (with first-introduction years) of a corpus.
pub fn discipline_edges(records: &[PaperRecord]) -> BTreeMap<String, Vec<(String, String, i32)>> {
    let mut out: BTreeMap<String, Vec<(String, String, i32)>> = BTreeMap::new();
    for p in records {
        let topics = p.topics();
        for d in p.disciplines() {
            for (i, a) in topics.iter().enumerate() {
                for b in &topics[i + 1..] {
                    out.entry(d.to_string()).or_default().push((a.to_string(), b.to_string(), p.year));
                }
            }
        }
    }
    out
}

/// Papers that introduce an edge in a year where β1 of their discipline's
/// network rises. With at most one new edge per discipline and year (asserted)
/// and a one-year persistence threshold, these are exactly the gap openers.
pub fn oracle_gap_openers(records: &[PaperRecord]) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for (d, edges) in discipline_edges(records) {
        let times = first_times(&edges);
        let mut per_year: BTreeMap<i32, usize> = BTreeMap::new();
        for &t in times.values() {
            *per_year.entry(t).or_default() += 1;
        }
        assert!(per_year.values().all(|&c| c == 1), "one new edge per year in {d}");
        for &y in per_year.keys() {
            if beta1_at(&times, y) <= beta1_at(&times, y - 1) {
                continue;
            }
            for p in records.iter().filter(|p| p.year == y && p.in_discipline(&d)) {
                let topics = p.topics();
                let introduces = topics.iter().enumerate().any(|(i, a)| {
                    topics[i + 1..].iter().any(|b| {
                        let key = if a < b { (a.to_string(), b.to_string()) } else { (b.to_string(), a.to_string()) };
                        times[&key] == y
                    })
                });
                if introduces {
                    out.insert(p.id.clone());
                }
            }
        }
    }
    out
}

pub fn golden_dir(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares `actual` against the frozen golden file, or freezes it when
/// `GAPMINER_BLESS` is set.
pub fn check_golden(name: &str, file: &str, actual: &[u8]) -> Result<(), String> {
    let dir = golden_dir(name);
    let path = dir.join(file);
    if std::env::var_os("GAPMINER_BLESS").is_some() {
        std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
        std::fs::write(&path, actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected != actual {
        return Err(format!("{} differs from golden copy", path.display()));
    }
    Ok(())
}
