use std::collections::{BTreeMap, HashMap};
use std::ops::Range;

use crate::concept_net::{NodeId, TemporalConceptNetwork};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simplex {
    /// Strictly increasing node ids.
    pub vertices: Vec<NodeId>,
    pub value: i32,
}

impl Simplex {
    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }
}

/// The clique complex of a temporal network, with simplices in filtration order.
///
/// Order is ascending `(value, dim, tie key)`. A vertex's tie key is its node
/// id, an edge's is its tie rank, and a clique's is the tie ranks of its
/// edges sorted descending. Every face therefore precedes its cofaces, and
/// within a year all edges precede all triangles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlagFiltration {
    simplices: Vec<Simplex>,
    boundaries: Vec<Vec<usize>>,
    max_dim: usize,
    steps: BTreeMap<i32, Range<usize>>,
}

impl FlagFiltration {
    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn simplex(&self, idx: usize) -> &Simplex {
        &self.simplices[idx]
    }

    /// Order indices of the codimension-one faces of simplex `idx`, ascending.
    pub fn boundary(&self, idx: usize) -> &[usize] {
        &self.boundaries[idx]
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Index range of the simplices entering at each distinct filtration value.
    pub fn step_boundaries(&self) -> &BTreeMap<i32, Range<usize>> {
        &self.steps
    }

    /// Number of simplices in the subcomplex at `year`.
    pub fn prefix_len(&self, year: i32) -> usize {
        self.simplices.partition_point(|s| s.value <= year)
    }
}

/// Expands `network` into its flag complex up to dimension `max_dim`.
///
/// Isolated concepts never appear: a network only contains concepts with at
/// least one edge.
pub fn build_flag_filtration(network: &TemporalConceptNetwork, max_dim: usize) -> FlagFiltration {
    assert!(max_dim >= 1, "max_dim must be at least 1");
    let n_nodes = network.nodes().len();
    let edges = network.edges();

    let mut vertex_time = vec![i32::MAX; n_nodes];
    let mut upper: Vec<Vec<NodeId>> = vec![Vec::new(); n_nodes];
    for e in edges {
        vertex_time[e.u as usize] = vertex_time[e.u as usize].min(e.birth.time);
        vertex_time[e.v as usize] = vertex_time[e.v as usize].min(e.birth.time);
        upper[e.u as usize].push(e.v);
    }
    for nbrs in &mut upper {
        nbrs.sort_unstable();
    }

    // (value, dim, key, vertices)
    let mut entries: Vec<(i32, usize, Vec<usize>, Vec<NodeId>)> = Vec::new();
    for (v, &t) in vertex_time.iter().enumerate() {
        if t != i32::MAX {
            entries.push((t, 0, vec![v], vec![v as NodeId]));
        }
    }
    for e in edges {
        entries.push((e.birth.time, 1, vec![e.birth.tie_rank], vec![e.u, e.v]));
    }
    if max_dim >= 2 {
        let mut clique = Vec::with_capacity(max_dim + 1);
        for u in 0..n_nodes {
            clique.push(u as NodeId);
            extend_cliques(network, &upper, &mut clique, &upper[u], max_dim + 1, &mut entries);
            clique.pop();
        }
    }
    entries.sort_unstable_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));

    let mut vertex_pos = vec![usize::MAX; n_nodes];
    let mut edge_pos = vec![usize::MAX; edges.len()];
    let mut higher_pos: HashMap<Vec<NodeId>, usize> = HashMap::new();
    let mut simplices = Vec::with_capacity(entries.len());
    let mut boundaries = Vec::with_capacity(entries.len());
    let mut steps: BTreeMap<i32, Range<usize>> = BTreeMap::new();

    for (idx, (value, dim, key, vertices)) in entries.into_iter().enumerate() {
        let boundary = match dim {
            0 => {
                vertex_pos[vertices[0] as usize] = idx;
                Vec::new()
            }
            1 => {
                edge_pos[key[0]] = idx;
                let mut b = vec![vertex_pos[vertices[0] as usize], vertex_pos[vertices[1] as usize]];
                b.sort_unstable();
                b
            }
            _ => {
                let mut b: Vec<usize> = (0..vertices.len())
                    .map(|skip| {
                        let face: Vec<NodeId> = vertices
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != skip)
                            .map(|(_, &v)| v)
                            .collect();
                        if face.len() == 2 {
                            edge_pos[network.edge_rank(face[0], face[1]).expect("face edge")]
                        } else {
                            higher_pos[&face]
                        }
                    })
                    .collect();
                b.sort_unstable();
                if dim < max_dim {
                    higher_pos.insert(vertices.clone(), idx);
                }
                b
            }
        };
        steps
            .entry(value)
            .and_modify(|r| r.end = idx + 1)
            .or_insert(idx..idx + 1);
        simplices.push(Simplex { vertices, value });
        boundaries.push(boundary);
    }

    FlagFiltration {
        simplices,
        boundaries,
        max_dim,
        steps,
    }
}

/// Depth-first clique enumeration over forward neighbours; each clique is
/// reached exactly once, through its sorted vertex sequence.
fn extend_cliques(
    network: &TemporalConceptNetwork,
    upper: &[Vec<NodeId>],
    clique: &mut Vec<NodeId>,
    candidates: &[NodeId],
    max_size: usize,
    out: &mut Vec<(i32, usize, Vec<usize>, Vec<NodeId>)>,
) {
    for (i, &w) in candidates.iter().enumerate() {
        clique.push(w);
        if clique.len() >= 3 {
            let mut ranks: Vec<usize> = Vec::with_capacity(clique.len() * (clique.len() - 1) / 2);
            for (a, &x) in clique.iter().enumerate() {
                for &y in &clique[a + 1..] {
                    ranks.push(network.edge_rank(x, y).expect("clique edge"));
                }
            }
            ranks.sort_unstable_by(|a, b| b.cmp(a));
            // tie rank is ordered by time first, so the top-ranked edge is the latest
            let value = network.edges()[ranks[0]].birth.time;
            out.push((value, clique.len() - 1, ranks, clique.clone()));
        }
        if clique.len() < max_size {
            let next: Vec<NodeId> = intersect(&candidates[i + 1..], &upper[w as usize]);
            if !next.is_empty() {
                extend_cliques(network, upper, clique, &next, max_size, out);
            }
        }
        clique.pop();
    }
}

fn intersect(a: &[NodeId], b: &[NodeId]) -> Vec<NodeId> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
