//! Undirected weighted graphs and their shortest-path metric.

use alloc::collections::BinaryHeap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize, f64)>,
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl WeightedGraph {
    pub fn new(vertex_count: usize) -> Self {
        Self {
            vertex_count,
            edges: Vec::new(),
            adjacency: vec![Vec::new(); vertex_count],
        }
    }

    /// Builds a graph from an edge list, validating every edge.
    pub fn from_edges(vertex_count: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut g = Self::new(vertex_count);
        for &(u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    /// Adds the undirected edge `{u, v}`. Self-loops, non-positive weights
    /// and repeated edges are rejected.
    pub fn add_edge(&mut self, u: usize, v: usize, weight: f64) -> Result<()> {
        for x in [u, v] {
            if x >= self.vertex_count {
                return Err(Error::IndexOutOfRange {
                    index: x,
                    len: self.vertex_count,
                });
            }
        }
        if u == v {
            return Err(Error::InvalidGraph {
                reason: format!("self-loop at vertex {u}"),
            });
        }
        if !(weight > 0.0) || !weight.is_finite() {
            return Err(Error::InvalidGraph {
                reason: format!("edge {{{u}, {v}}} has non-positive weight {weight}"),
            });
        }
        if self.adjacency[u].iter().any(|&(x, _)| x == v) {
            return Err(Error::InvalidGraph {
                reason: format!("repeated edge {{{u}, {v}}}"),
            });
        }
        self.edges.push((u, v, weight));
        self.adjacency[u].push((v, weight));
        self.adjacency[v].push((u, weight));
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.vertex_count && self.adjacency[u].iter().any(|&(x, _)| x == v)
    }

    pub fn neighbors(&self, u: usize) -> &[(usize, f64)] {
        &self.adjacency[u]
    }
}

#[derive(Copy, Clone, PartialEq)]
struct Frontier {
    dist: f64,
    vertex: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on distance, ties broken by vertex id
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source Dijkstra. Unreachable vertices stay at `+∞`.
pub fn dijkstra(g: &WeightedGraph, source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.vertex_count];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(Frontier {
        dist: 0.0,
        vertex: source,
    });
    while let Some(Frontier { dist: d, vertex: u }) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &g.adjacency[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Frontier {
                    dist: nd,
                    vertex: v,
                });
            }
        }
    }
    dist
}

/// All-pairs shortest-path lengths. The result is exactly symmetric: the
/// two directions of a path can round differently, and the smaller is kept.
pub fn graph_shortest_paths(g: &WeightedGraph) -> Result<Matrix> {
    let n = g.vertex_count;
    let mut d = Matrix::zeros(n, n);
    for s in 0..n {
        let row = dijkstra(g, s);
        if let Some(t) = row.iter().position(|x| !x.is_finite()) {
            return Err(Error::Disconnected { from: s, to: t });
        }
        for (t, v) in row.into_iter().enumerate() {
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_distances() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let d = graph_shortest_paths(&g).unwrap();
        assert_eq!(d[(0, 2)], 2.0);
        assert_eq!(d[(2, 0)], 2.0);
    }

    #[test]
    fn single_vertex() {
        let d = graph_shortest_paths(&WeightedGraph::new(1)).unwrap();
        assert_eq!(d, Matrix::zeros(1, 1));
    }

    #[test]
    fn disconnected_names_two_vertices() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(
            graph_shortest_paths(&g).unwrap_err(),
            Error::Disconnected { from: 0, to: 2 }
        );
    }

    #[test]
    fn invalid_edges() {
        let mut g = WeightedGraph::new(3);
        assert!(g.add_edge(1, 1, 1.0).is_err());
        assert!(g.add_edge(0, 1, 0.0).is_err());
        assert!(g.add_edge(0, 1, -2.0).is_err());
        assert!(g.add_edge(0, 5, 1.0).is_err());
        g.add_edge(0, 1, 1.0).unwrap();
        assert!(g.add_edge(1, 0, 1.0).is_err());
    }
}
