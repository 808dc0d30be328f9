//! Dense ℤ₂ Betti numbers, computed straight from the boundary operator.
//!
//! This is a check on the persistence engine, not a production path: it
//! rebuilds each boundary matrix from vertex lists (ignoring the boundary
//! indices stored in the filtration) and ranks it by Gaussian elimination.

use std::collections::HashMap;

use super::filtration::FlagFiltration;
use crate::concept_net::NodeId;
use crate::error::{Error, Result};

pub const ORACLE_LIMIT: usize = 2000;

/// `β_k` for `k = 0..=max_dim` of the subcomplex at `year`.
///
/// The top entry counts cycles in the truncated complex, which has no
/// simplices above `max_dim` to bound them.
pub fn betti_oracle(f: &FlagFiltration, year: i32) -> Result<Vec<usize>> {
    let live: Vec<&[NodeId]> = f
        .simplices()
        .iter()
        .filter(|s| s.value <= year)
        .map(|s| s.vertices.as_slice())
        .collect();
    if live.len() > ORACLE_LIMIT {
        return Err(Error::OracleLimit {
            size: live.len(),
            limit: ORACLE_LIMIT,
        });
    }

    let top = f.max_dim();
    let mut by_dim: Vec<Vec<&[NodeId]>> = vec![Vec::new(); top + 1];
    for s in live {
        by_dim[s.len() - 1].push(s);
    }

    // rank of ∂_k for k = 1..=top; ∂_0 is zero
    let mut rank = vec![0usize; top + 2];
    for k in 1..=top {
        let rows: HashMap<&[NodeId], usize> = by_dim[k - 1]
            .iter()
            .enumerate()
            .map(|(i, s)| (*s, i))
            .collect();
        let matrix: Vec<BitRow> = by_dim[k]
            .iter()
            .map(|s| {
                let mut row = BitRow::zeros(rows.len());
                for face in boundary_chain(s) {
                    row.toggle(rows[face.as_slice()]);
                }
                row
            })
            .collect();
        rank[k] = gf2_rank(matrix);
    }

    Ok((0..=top)
        .map(|k| by_dim[k].len() - rank[k] - rank[k + 1])
        .collect())
}

/// Faces of a simplex with ℤ₂ coefficients; the alternating signs all become 1.
pub fn boundary_chain(simplex: &[NodeId]) -> Vec<Vec<NodeId>> {
    if simplex.len() < 2 {
        return Vec::new();
    }
    (0..simplex.len())
        .map(|skip| {
            simplex
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &v)| v)
                .collect()
        })
        .collect()
}

#[derive(Clone, Debug)]
struct BitRow(Vec<u64>);

impl BitRow {
    fn zeros(n: usize) -> Self {
        BitRow(vec![0; n.div_ceil(64)])
    }

    fn toggle(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn xor_assign(&mut self, other: &BitRow) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }
}

fn gf2_rank(mut rows: Vec<BitRow>) -> usize {
    let Some(width) = rows.first().map(|r| r.0.len() * 64) else {
        return 0;
    };
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&pivot);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}
