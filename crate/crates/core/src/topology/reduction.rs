use super::filtration::FlagFiltration;
use super::union_find::UnionFind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PersistencePair {
    pub dim: usize,
    /// Order index of the birth simplex.
    pub birth: usize,
    /// Order index of the death simplex, of dimension `dim + 1`.
    pub death: usize,
    pub birth_value: i32,
    pub death_value: i32,
}

impl PersistencePair {
    pub fn persistence(&self) -> i32 {
        self.death_value - self.birth_value
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EssentialClass {
    pub dim: usize,
    pub birth: usize,
    pub birth_value: i32,
}

/// Persistence pairs and essential classes, each sorted by birth index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PersistenceDiagram {
    pub pairs: Vec<PersistencePair>,
    pub essentials: Vec<EssentialClass>,
}

impl PersistenceDiagram {
    fn assemble(f: &FlagFiltration, raw_pairs: Vec<(usize, usize)>) -> Self {
        let mut role = vec![false; f.len()];
        let mut pairs: Vec<PersistencePair> = raw_pairs
            .into_iter()
            .map(|(birth, death)| {
                role[birth] = true;
                role[death] = true;
                PersistencePair {
                    dim: f.simplex(birth).dim(),
                    birth,
                    death,
                    birth_value: f.simplex(birth).value,
                    death_value: f.simplex(death).value,
                }
            })
            .collect();
        pairs.sort_unstable_by_key(|p| p.birth);
        let essentials = (0..f.len())
            .filter(|&i| !role[i])
            .map(|i| EssentialClass {
                dim: f.simplex(i).dim(),
                birth: i,
                birth_value: f.simplex(i).value,
            })
            .collect();
        Self { pairs, essentials }
    }

    /// `(dim, birth_value, death_value)` for every feature, essentials with `None`, sorted.
    pub fn value_multiset(&self) -> Vec<(usize, i32, Option<i32>)> {
        let mut out: Vec<_> = self
            .pairs
            .iter()
            .map(|p| (p.dim, p.birth_value, Some(p.death_value)))
            .chain(self.essentials.iter().map(|e| (e.dim, e.birth_value, None)))
            .collect();
        out.sort_unstable();
        out
    }
}

/// ℤ₂ persistence of a flag filtration.
///
/// Columns of dimension ≥ 2 are reduced from the top dimension down with
/// clearing: a simplex that appears as the pivot of a reduced column is a
/// paired birth and its own column is never touched. Edge columns are then
/// settled by union-find: an edge joining two components kills the younger
/// one, and an edge inside one component opens a cycle.
pub fn compute_persistence(f: &FlagFiltration) -> PersistenceDiagram {
    let n = f.len();
    let mut pivot_owner: Vec<usize> = vec![usize::MAX; n];
    let mut reduced: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut cleared = vec![false; n];
    let mut pairs = Vec::new();

    for dim in (2..=f.max_dim()).rev() {
        for j in (0..n).filter(|&j| f.simplex(j).dim() == dim) {
            if cleared[j] {
                continue;
            }
            let col = reduce_column(f.boundary(j).to_vec(), &pivot_owner, &reduced);
            if let Some(&low) = col.last() {
                pivot_owner[low] = j;
                cleared[low] = true;
                pairs.push((low, j));
                reduced[j] = col;
            }
        }
    }

    let mut uf = UnionFind::new(n);
    for j in 0..n {
        let s = f.simplex(j);
        if s.dim() != 1 {
            continue;
        }
        let [a, b] = [f.boundary(j)[0], f.boundary(j)[1]];
        let (oa, ob) = (uf.oldest(a), uf.oldest(b));
        if oa != ob {
            pairs.push((oa.max(ob), j));
            uf.union(a, b);
        }
    }

    PersistenceDiagram::assemble(f, pairs)
}

/// Textbook left-to-right reduction of the full boundary matrix, no
/// shortcuts. Slower; kept as a second route for cross-checking.
pub fn compute_persistence_standard(f: &FlagFiltration) -> PersistenceDiagram {
    let n = f.len();
    let mut pivot_owner: Vec<usize> = vec![usize::MAX; n];
    let mut reduced: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut pairs = Vec::new();
    for j in 0..n {
        let col = reduce_column(f.boundary(j).to_vec(), &pivot_owner, &reduced);
        if let Some(&low) = col.last() {
            pivot_owner[low] = j;
            pairs.push((low, j));
            reduced[j] = col;
        }
    }
    PersistenceDiagram::assemble(f, pairs)
}

fn reduce_column(mut col: Vec<usize>, pivot_owner: &[usize], reduced: &[Vec<usize>]) -> Vec<usize> {
    while let Some(&low) = col.last() {
        let owner = pivot_owner[low];
        if owner == usize::MAX {
            break;
        }
        col = symmetric_difference(&col, &reduced[owner]);
    }
    col
}

fn symmetric_difference(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Edges whose endpoints are already connected when they enter the filtration.
pub fn cycle_closing_edges(f: &FlagFiltration) -> Vec<usize> {
    let mut uf = UnionFind::new(f.len());
    (0..f.len())
        .filter(|&j| f.simplex(j).dim() == 1)
        .filter(|&j| !uf.union(f.boundary(j)[0], f.boundary(j)[1]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::build_flag_filtration;
    use crate::topology::tests::net;

    #[test]
    fn symmetric_difference_cancels() {
        assert_eq!(symmetric_difference(&[1, 3, 5], &[3, 4]), [1, 4, 5]);
        assert!(symmetric_difference(&[2, 7], &[2, 7]).is_empty());
    }

    #[test]
    fn square_leaves_one_essential_cycle() {
        let f = build_flag_filtration(
            &net(&[("a", "b", 1), ("b", "c", 2), ("c", "d", 3), ("a", "d", 4)]),
            2,
        );
        let d = compute_persistence(&f);
        let cycles: Vec<_> = d.essentials.iter().filter(|e| e.dim == 1).collect();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].birth_value, 4);
        assert_eq!(f.simplex(cycles[0].birth).dim(), 1);
        assert_eq!(d, compute_persistence_standard(&f));
    }

    #[test]
    fn filled_triangle_pairs_at_zero_persistence() {
        let f = build_flag_filtration(&net(&[("a", "b", 1), ("b", "c", 2), ("a", "c", 3)]), 2);
        let d = compute_persistence(&f);
        let p: Vec<_> = d.pairs.iter().filter(|p| p.dim == 1).collect();
        assert_eq!(p.len(), 1);
        assert_eq!((p[0].birth_value, p[0].death_value), (3, 3));
        assert_eq!(f.simplex(p[0].death).dim(), 2);
        assert!(d.essentials.iter().all(|e| e.dim == 0));
    }

    #[test]
    fn forest_has_no_cycles() {
        let f = build_flag_filtration(&net(&[("a", "b", 1), ("c", "d", 2)]), 2);
        let d = compute_persistence(&f);
        let zero: Vec<_> = d.essentials.iter().filter(|e| e.dim == 0).collect();
        assert_eq!(zero.len(), 2);
        assert!(d.pairs.iter().all(|p| p.dim == 0));
        assert!(d.essentials.iter().all(|e| e.dim == 0));
    }

    #[test]
    fn every_simplex_has_exactly_one_role() {
        let f = build_flag_filtration(
            &net(&[
                ("a", "b", 1),
                ("b", "c", 1),
                ("a", "c", 2),
                ("c", "d", 2),
                ("d", "e", 3),
                ("c", "e", 4),
                ("a", "d", 4),
            ]),
            2,
        );
        let d = compute_persistence(&f);
        let mut seen = vec![0; f.len()];
        for p in &d.pairs {
            seen[p.birth] += 1;
            seen[p.death] += 1;
            assert_eq!(f.simplex(p.death).dim(), p.dim + 1);
            assert!(p.death > p.birth);
        }
        for e in &d.essentials {
            seen[e.birth] += 1;
        }
        assert!(seen.iter().all(|&c| c == 1));
        assert_eq!(d, compute_persistence_standard(&f));
    }
}
