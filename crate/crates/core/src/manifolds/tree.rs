//! Path metric on weighted trees.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::manifolds::graph::WeightedGraph;

/// A tree has `n − 1` edges and is connected.
pub fn check_tree(g: &WeightedGraph) -> Result<()> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(Error::NotATree {
            reason: "no vertices",
        });
    }
    if g.edge_count() != n - 1 {
        return Err(Error::NotATree {
            reason: if g.edge_count() > n - 1 {
                "contains a cycle"
            } else {
                "disconnected"
            },
        });
    }
    if path_lengths_from(g, 0).iter().any(|d| !d.is_finite()) {
        return Err(Error::NotATree {
            reason: "disconnected",
        });
    }
    Ok(())
}

/// Depth-first accumulation of edge weights from `root`.
fn path_lengths_from(g: &WeightedGraph, root: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.vertex_count()];
    dist[root] = 0.0;
    let mut stack = vec![root];
    while let Some(u) = stack.pop() {
        for &(v, w) in g.neighbors(u) {
            if !dist[v].is_finite() {
                dist[v] = dist[u] + w;
                stack.push(v);
            }
        }
    }
    dist
}

/// Weight of the unique path between `a` and `b`.
pub fn tree_distance(g: &WeightedGraph, a: usize, b: usize) -> Result<f64> {
    check_tree(g)?;
    for x in [a, b] {
        if x >= g.vertex_count() {
            return Err(Error::IndexOutOfRange {
                index: x,
                len: g.vertex_count(),
            });
        }
    }
    Ok(path_lengths_from(g, a)[b])
}

/// All pairwise path weights; symmetric by taking the smaller rounding.
pub fn tree_distances(g: &WeightedGraph) -> Result<Matrix> {
    check_tree(g)?;
    let n = g.vertex_count();
    let mut d = Matrix::zeros(n, n);
    for s in 0..n {
        for (t, v) in path_lengths_from(g, s).into_iter().enumerate() {
            d[(s, t)] = v;
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let v = d[(i, j)].min(d[(j, i)]);
            d[(i, j)] = v;
            d[(j, i)] = v;
        }
    }
    Ok(d)
}
