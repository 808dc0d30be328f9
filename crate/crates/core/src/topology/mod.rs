//! Flag-complex filtrations of temporal concept networks and their ℤ₂
//! persistent homology.
//!
//! Dimension-1 birth simplices are edges that close a cycle not yet filled
//! by triangles; those surviving at least `min_persistence` years are the
//! gap edges.

mod filtration;
mod oracle;
mod reduction;
mod union_find;

use std::io::{Read, Write};

pub use filtration::{build_flag_filtration, FlagFiltration, Simplex};
pub use oracle::{betti_oracle, boundary_chain, ORACLE_LIMIT};
pub use reduction::{
    compute_persistence, compute_persistence_standard, cycle_closing_edges, EssentialClass,
    PersistenceDiagram, PersistencePair,
};
pub use union_find::UnionFind;

use crate::concept_net::{ConceptPair, NodeId, TemporalConceptNetwork};

/// Dimension-1 birth edges that are essential or persist at least `min_persistence`.
pub fn gap_edges(
    diagram: &PersistenceDiagram,
    filtration: &FlagFiltration,
    min_persistence: i32,
) -> Vec<(NodeId, NodeId)> {
    let mut births: Vec<usize> = diagram
        .pairs
        .iter()
        .filter(|p| p.dim == 1 && p.persistence() >= min_persistence)
        .map(|p| p.birth)
        .chain(diagram.essentials.iter().filter(|e| e.dim == 1).map(|e| e.birth))
        .collect();
    births.sort_unstable();
    births
        .into_iter()
        .map(|b| {
            let v = &filtration.simplex(b).vertices;
            (v[0], v[1])
        })
        .collect()
}

/// One feature of a diagram in string form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramRow {
    pub discipline: String,
    pub dim: usize,
    /// Concept ids of the birth simplex.
    pub birth: Vec<String>,
    pub birth_year: i32,
    /// `None` for essential classes.
    pub death_year: Option<i32>,
}

impl DiagramRow {
    pub fn is_gap(&self, min_persistence: i32) -> bool {
        self.dim == 1
            && self
                .death_year
                .is_none_or(|d| d - self.birth_year >= min_persistence)
    }
}

pub fn diagram_rows(
    network: &TemporalConceptNetwork,
    filtration: &FlagFiltration,
    diagram: &PersistenceDiagram,
) -> Vec<DiagramRow> {
    let names = |idx: usize| -> Vec<String> {
        filtration
            .simplex(idx)
            .vertices
            .iter()
            .map(|&v| network.node_name(v).to_string())
            .collect()
    };
    let mut rows: Vec<(usize, DiagramRow)> = diagram
        .pairs
        .iter()
        .map(|p| (p.birth, p.dim, p.birth_value, Some(p.death_value)))
        .chain(
            diagram
                .essentials
                .iter()
                .map(|e| (e.birth, e.dim, e.birth_value, None)),
        )
        .map(|(birth, dim, birth_year, death_year)| {
            (
                birth,
                DiagramRow {
                    discipline: network.discipline().to_string(),
                    dim,
                    birth: names(birth),
                    birth_year,
                    death_year,
                },
            )
        })
        .collect();
    rows.sort_by_key(|(b, _)| *b);
    rows.into_iter().map(|(_, r)| r).collect()
}

/// Writes `discipline,dim,birth_u,birth_v,birth_year,death_year` rows.
///
/// `birth_v` is empty for vertices; for simplices above dimension 1 it holds
/// the remaining vertices joined by `;`. Essential classes die at `inf`.
pub fn write_diagrams<W: Write>(rows: &[DiagramRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["discipline", "dim", "birth_u", "birth_v", "birth_year", "death_year"])?;
    for r in rows {
        let death = r.death_year.map_or("inf".to_string(), |d| d.to_string());
        w.write_record([
            r.discipline.as_str(),
            &r.dim.to_string(),
            &r.birth[0],
            &r.birth[1..].join(";"),
            &r.birth_year.to_string(),
            &death,
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_diagrams<R: Read>(input: R) -> Result<Vec<DiagramRow>, String> {
    let mut r = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| e.to_string())?;
        let line = i + 2;
        if rec.len() != 6 {
            return Err(format!("row {line}: expected 6 fields"));
        }
        let dim: usize = rec[1].parse().map_err(|e| format!("row {line}: dim: {e}"))?;
        let mut birth = vec![rec[2].to_string()];
        if !rec[3].is_empty() {
            birth.extend(rec[3].split(';').map(str::to_string));
        }
        if birth.len() != dim + 1 {
            return Err(format!("row {line}: {} vertices for dimension {dim}", birth.len()));
        }
        let birth_year = rec[4].parse().map_err(|e| format!("row {line}: birth_year: {e}"))?;
        let death_year = match &rec[5] {
            "inf" => None,
            d => Some(d.parse().map_err(|e| format!("row {line}: death_year: {e}"))?),
        };
        rows.push(DiagramRow {
            discipline: rec[0].to_string(),
            dim,
            birth,
            birth_year,
            death_year,
        });
    }
    Ok(rows)
}

/// Gap edges of one discipline from dumped rows.
pub fn gap_pairs_from_rows<'a>(
    rows: impl IntoIterator<Item = &'a DiagramRow>,
    min_persistence: i32,
) -> Vec<ConceptPair> {
    rows.into_iter()
        .filter(|r| r.is_gap(min_persistence))
        .map(|r| (r.birth[0].clone(), r.birth[1].clone()))
        .collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::concept_net::EdgeRecord;

    /// Network from `(u, v, year)` triples; each edge gets its own introducer.
    pub(crate) fn net(edges: &[(&str, &str, i32)]) -> TemporalConceptNetwork {
        TemporalConceptNetwork::from_edges(
            "D",
            edges
                .iter()
                .enumerate()
                .map(|(i, (u, v, t))| EdgeRecord {
                    u: u.to_string(),
                    v: v.to_string(),
                    time: *t,
                    introducers: vec![format!("P{i:04}")],
                })
                .collect(),
        )
    }

    fn square_filled_at(fill: i32) -> TemporalConceptNetwork {
        net(&[
            ("a", "b", 1),
            ("b", "c", 2),
            ("c", "d", 3),
            ("a", "d", 4),
            ("a", "c", fill),
        ])
    }

    fn gaps(n: &TemporalConceptNetwork, min: i32) -> Vec<ConceptPair> {
        let f = build_flag_filtration(n, 2);
        let d = compute_persistence(&f);
        gap_edges(&d, &f, min)
            .into_iter()
            .map(|(u, v)| (n.node_name(u).to_string(), n.node_name(v).to_string()))
            .collect()
    }

    #[test]
    fn filled_triangle_has_no_gap() {
        let n = net(&[("a", "b", 1), ("b", "c", 2), ("a", "c", 3)]);
        assert!(gaps(&n, 1).is_empty());
        assert_eq!(gaps(&n, 0).len(), 1);
    }

    #[test]
    fn square_closing_edge_is_the_gap() {
        let n = net(&[("a", "b", 1), ("b", "c", 2), ("c", "d", 3), ("a", "d", 4)]);
        for min in [0, 1, 5, 100] {
            assert_eq!(gaps(&n, min), [("a".to_string(), "d".to_string())]);
        }
    }

    #[test]
    fn square_filled_two_years_later() {
        let n = square_filled_at(6);
        assert!(gaps(&n, 3).is_empty());
        assert_eq!(gaps(&n, 2), [("a".to_string(), "d".to_string())]);
    }

    #[test]
    fn dump_round_trip_and_gap_recovery() {
        let n = square_filled_at(6);
        let f = build_flag_filtration(&n, 2);
        let d = compute_persistence(&f);
        let rows = diagram_rows(&n, &f, &d);
        let mut buf = Vec::new();
        write_diagrams(&rows, &mut buf).unwrap();
        let back = read_diagrams(&buf[..]).unwrap();
        assert_eq!(back, rows);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("D,1,a,d,4,6"), "{text}");
        assert!(text.contains("D,0,a,,1,inf"), "{text}");
        for min in 0..4 {
            let expect = gaps(&n, min);
            assert_eq!(gap_pairs_from_rows(&back, min), expect);
        }
    }
}
