//! Deterministic synthetic corpora for tests and benchmarks.
//!
//! * `planted-cycle`: each discipline grows one `n`-cycle of concepts, one
//!   edge per year; the paper adding the last edge is its only gap opener.
//! * `planted-clique`: each discipline grows a `k`-clique so that every cycle
//!   is filled by a triangle the year it appears; no paper opens a gap.
//! * `random-pairs`: papers with random concept sets, references, authors,
//!   and affiliations, for scale tests.
//!
//! Filler papers (planted generators only) come after the planted structure
//! and either repeat an existing concept pair or attach a fresh concept to
//! an existing one, so they never create a cycle.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{Affiliation, ConceptScore, PaperRecord, SCHEMA_VERSION};
use crate::error::{Error, Result};
use crate::rng;

pub const GENERATORS: [&str; 3] = ["planted-cycle", "planted-clique", "random-pairs"];

const START_YEAR: i32 = 1990;
const RANDOM_SPAN_YEARS: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    PlantedCycle { n: usize, disciplines: usize, fillers: usize },
    PlantedClique { k: usize, disciplines: usize, fillers: usize },
    RandomPairs { papers: usize, concepts: usize, disciplines: usize },
}

/// Loose parameters as they arrive from the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SynthParams {
    /// Cycle length, clique size, or paper count, depending on the generator.
    pub size: usize,
    pub disciplines: usize,
    pub fillers: usize,
    pub concepts: usize,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            size: 5,
            disciplines: 1,
            fillers: 0,
            concepts: 100,
        }
    }
}

impl Generator {
    pub fn from_name(name: &str, p: SynthParams) -> Result<Self> {
        let g = match name {
            "planted-cycle" => Generator::PlantedCycle {
                n: p.size,
                disciplines: p.disciplines,
                fillers: p.fillers,
            },
            "planted-clique" => Generator::PlantedClique {
                k: p.size,
                disciplines: p.disciplines,
                fillers: p.fillers,
            },
            "random-pairs" => Generator::RandomPairs {
                papers: p.size,
                concepts: p.concepts,
                disciplines: p.disciplines,
            },
            other => return Err(Error::UnknownGenerator(other.to_string())),
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        match *self {
            Generator::PlantedCycle { n, disciplines, .. } => {
                // a 3-cycle is filled by its triangle the moment it closes
                if n < 4 {
                    return bad("planted-cycle needs a cycle length of at least 4");
                }
                if disciplines == 0 {
                    return bad("planted-cycle needs at least one discipline");
                }
            }
            Generator::PlantedClique { k, disciplines, .. } => {
                if k < 2 {
                    return bad("planted-clique needs a clique size of at least 2");
                }
                if disciplines == 0 {
                    return bad("planted-clique needs at least one discipline");
                }
            }
            Generator::RandomPairs { concepts, disciplines, .. } => {
                if concepts < 4 {
                    return bad("random-pairs needs at least 4 concepts");
                }
                if disciplines == 0 {
                    return bad("random-pairs needs at least one discipline");
                }
            }
        }
        Ok(())
    }
}

/// Generates the records of a synthetic corpus, in file order.
pub fn make_synthetic(generator: Generator, seed: u64) -> Result<Vec<PaperRecord>> {
    generator.validate()?;
    Ok(match generator {
        Generator::PlantedCycle { n, disciplines, fillers } => planted(disciplines, fillers, seed, |c| {
            (0..n).map(|i| vec![c(i), c((i + 1) % n)]).collect()
        }),
        Generator::PlantedClique { k, disciplines, fillers } => planted(disciplines, fillers, seed, |c| {
            (1..k).map(|j| (0..=j).map(&c).collect()).collect()
        }),
        Generator::RandomPairs {
            papers,
            concepts,
            disciplines,
        } => random_pairs(papers, concepts, disciplines, seed),
    })
}

/// Writes a synthetic corpus file with its schema header.
pub fn write_synthetic(path: &Path, generator: Generator, seed: u64) -> Result<usize> {
    let records = make_synthetic(generator, seed)?;
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    let write = |out: &mut BufWriter<File>| -> std::io::Result<()> {
        writeln!(out, "{{\"schema_version\":{SCHEMA_VERSION}}}")?;
        crate::corpus::write_records(&records, &mut *out)?;
        out.flush()
    };
    write(&mut out).map_err(|e| Error::io(path, e))?;
    Ok(records.len())
}

const TITLE_WORDS: &[&str] = &[
    "network", "model", "analysis", "theory", "structure", "dynamics", "method", "system", "evidence",
    "learning", "protein", "quantum", "market", "signal", "field", "cell", "data", "flow",
];
const TITLE_VERBS: &[&str] = &[
    "develop", "improve", "demonstrate", "enhance", "exploit", "generate", "support", "launch",
    "modify", "confirm", "pioneer", "leverage", "extract",
];

fn title(rng: &mut ChaCha8Rng) -> String {
    let mut t = String::from("We ");
    t.push_str(TITLE_VERBS.choose(rng).expect("nonempty"));
    for _ in 0..rng.gen_range(2..6) {
        t.push(' ');
        t.push_str(TITLE_WORDS.choose(rng).expect("nonempty"));
    }
    t
}

fn paper(id: String, year: i32, disciplines: &[String], topics: &[String], rng: &mut ChaCha8Rng) -> PaperRecord {
    PaperRecord {
        id,
        year,
        title: Some(title(rng)),
        venue: None,
        level0: disciplines.iter().map(|d| ConceptScore::from((d.clone(), 1.0))).collect(),
        level3: topics
            .iter()
            .map(|t| ConceptScore::from((t.clone(), rng.gen_range(1..=1000) as f64 / 1000.0)))
            .collect(),
        references: Vec::new(),
        authors: Vec::new(),
        affiliations: Vec::new(),
    }
}

fn add_team(p: &mut PaperRecord, pool: usize, max_team: usize, rng: &mut ChaCha8Rng) {
    let size = rng.gen_range(1..=max_team.min(pool));
    let mut ids: Vec<usize> = rand::seq::index::sample(rng, pool, size).into_vec();
    ids.sort_unstable();
    for a in ids {
        let name = format!("A{a:06}");
        if rng.gen_bool(0.8) {
            let lat = rng.gen_range(-600_000..=700_000) as f64 / 10_000.0;
            let lon = rng.gen_range(-1_800_000..=1_800_000) as f64 / 10_000.0;
            p.affiliations.push(Affiliation::from((name.clone(), lat, lon)));
        }
        p.authors.push(name);
    }
}

fn planted<F>(disciplines: usize, fillers: usize, seed: u64, structure: F) -> Vec<PaperRecord>
where
    F: Fn(&dyn Fn(usize) -> String) -> Vec<Vec<String>>,
{
    let mut out = Vec::new();
    let mut disc_papers: Vec<Vec<String>> = Vec::new();
    let mut disc_edges: Vec<Vec<(String, String)>> = Vec::new();
    let mut disc_nodes: Vec<Vec<String>> = Vec::new();
    let mut last_year = START_YEAR;

    for k in 0..disciplines {
        let d = format!("D{k:02}");
        let mut r = rng::stream(seed, &[1, k as u64]);
        let concept = |i: usize| format!("{d}-c{i:03}");
        let steps = structure(&concept);
        let mut ids = Vec::new();
        let mut edges = Vec::new();
        let mut nodes: Vec<String> = Vec::new();
        for (i, topics) in steps.iter().enumerate() {
            let year = START_YEAR + i as i32;
            last_year = last_year.max(year);
            let mut p = paper(format!("{d}-s{i:03}"), year, std::slice::from_ref(&d), topics, &mut r);
            p.venue = Some(format!("J-{d}-{}", r.gen_range(0..3)));
            if let Some(prev) = ids.last() {
                p.references.push(String::clone(prev));
            }
            add_team(&mut p, 12, 4, &mut r);
            for (a, t) in topics.iter().enumerate() {
                if !nodes.contains(t) {
                    nodes.push(t.clone());
                }
                for u in &topics[a + 1..] {
                    edges.push((t.clone(), u.clone()));
                }
            }
            ids.push(p.id.clone());
            out.push(p);
        }
        disc_papers.push(ids);
        disc_edges.push(edges);
        disc_nodes.push(nodes);
    }

    let mut r = rng::stream(seed, &[2]);
    for j in 0..fillers {
        let k = j % disciplines;
        let d = format!("D{k:02}");
        let year = last_year + 1 + (j / disciplines) as i32;
        let topics = if r.gen_bool(0.5) {
            let (a, b) = disc_edges[k].choose(&mut r).expect("planted structure has edges").clone();
            vec![a, b]
        } else {
            let anchor = disc_nodes[k].choose(&mut r).expect("planted structure has nodes").clone();
            let fresh = format!("{d}-f{j:04}");
            disc_nodes[k].push(fresh.clone());
            disc_edges[k].push((anchor.clone(), fresh.clone()));
            vec![anchor, fresh]
        };
        let mut p = paper(format!("{d}-x{j:04}"), year, std::slice::from_ref(&d), &topics, &mut r);
        p.venue = Some(format!("J-{d}-{}", r.gen_range(0..3)));
        let prior = &disc_papers[k];
        for _ in 0..r.gen_range(0..=3) {
            let cited = prior.choose(&mut r).expect("planted structure has papers").clone();
            if !p.references.contains(&cited) {
                p.references.push(cited);
            }
        }
        add_team(&mut p, 12, 4, &mut r);
        disc_papers[k].push(p.id.clone());
        out.push(p);
    }
    out
}

fn random_pairs(papers: usize, concepts: usize, disciplines: usize, seed: u64) -> Vec<PaperRecord> {
    let mut r = rng::stream(seed, &[3]);
    let discs: Vec<String> = (0..disciplines).map(|k| format!("D{k:02}")).collect();
    let width = papers.max(1).to_string().len();
    let authors = (papers / 3).max(10);
    let mut out = Vec::with_capacity(papers);
    let mut id = String::new();
    for i in 0..papers {
        let year = START_YEAR + (i * RANDOM_SPAN_YEARS / papers) as i32;
        let mut ds = vec![discs[r.gen_range(0..disciplines)].clone()];
        if disciplines > 1 && r.gen_bool(0.2) {
            let other = discs[r.gen_range(0..disciplines)].clone();
            if other != ds[0] {
                ds.push(other);
            }
        }
        // popularity skewed towards low concept indices
        let n_topics = r.gen_range(2..=4);
        let mut topics: Vec<String> = Vec::with_capacity(n_topics);
        while topics.len() < n_topics {
            let u: f64 = r.gen();
            let c = format!("c{:05}", ((u * u) * concepts as f64) as usize);
            if !topics.contains(&c) {
                topics.push(c);
            }
        }
        id.clear();
        write!(id, "P{i:0width$}").expect("write to string");
        let mut p = paper(id.clone(), year, &ds, &topics, &mut r);
        p.venue = Some(format!("J{:02}", r.gen_range(0..40)));
        if i > 0 {
            for _ in 0..r.gen_range(0..=5) {
                let cited = format!("P{:0width$}", r.gen_range(0..i));
                if !p.references.contains(&cited) {
                    p.references.push(cited);
                }
            }
        }
        add_team(&mut p, authors, 6, &mut r);
        out.push(p);
    }
    out
}
