//! The graphs `Σⁿ` and `Γⁿ`.

use std::collections::BTreeSet;
use std::fmt;

/// Finite directed graph on vertices `0..vertices` with edges `(i, j)`,
/// `i ≤ j`, read as `e_ij : v_i → v_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    pub name: String,
    vertices: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl Graph {
    pub fn new(name: impl Into<String>, vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let edges: BTreeSet<_> = edges.into_iter().collect();
        debug_assert!(edges.iter().all(|&(i, j)| i <= j && j < vertices));
        Graph { name: name.into(), vertices, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        0..self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, e: (usize, usize)) -> bool {
        self.edges.contains(&e)
    }

    pub fn source(e: (usize, usize)) -> usize {
        e.0
    }

    pub fn range(e: (usize, usize)) -> usize {
        e.1
    }

    /// Edges emitted by `v`, ordered by range.
    pub fn out_edges(&self, v: usize) -> Vec<(usize, usize)> {
        self.edges.iter().copied().filter(|e| e.0 == v).collect()
    }

    pub fn in_edges(&self, v: usize) -> Vec<(usize, usize)> {
        self.edges.iter().copied().filter(|e| e.1 == v).collect()
    }

    pub fn sinks(&self) -> Vec<usize> {
        self.vertices().filter(|&v| self.out_edges(v).is_empty()).collect()
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.out_edges(v).is_empty()
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// `Σⁿ`: vertices `v_0..v_n`, an edge `e_ij` for every `i ≤ j ≤ n`.
pub fn graph_sigma(n: usize) -> Graph {
    let edges = (0..=n).flat_map(|i| (i..=n).map(move |j| (i, j)));
    Graph::new(format!("Sigma^{n}"), n + 1, edges)
}

/// `Γⁿ`: `Σⁿ` without the loop `e_nn`.
pub fn graph_gamma(n: usize) -> Graph {
    let edges = (0..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).filter(|&e| e != (n, n));
    Graph::new(format!("Gamma^{n}"), n + 1, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_graphs() {
        let s0 = graph_sigma(0);
        assert_eq!(s0.vertex_count(), 1);
        assert_eq!(s0.edges().collect::<Vec<_>>(), vec![(0, 0)]);
        let g1 = graph_gamma(1);
        assert_eq!(g1.vertex_count(), 2);
        assert_eq!(g1.edges().collect::<Vec<_>>(), vec![(0, 0), (0, 1)]);
        assert_eq!(graph_gamma(2).sinks(), vec![2]);
        assert!(graph_sigma(3).sinks().is_empty());
        assert_eq!(graph_sigma(3).edges().count(), 10);
    }
}
