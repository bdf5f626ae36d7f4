//! Hypergraph representation, incidence view and clique-expansion
//! projection.
//!
//! Vertices are dense integer ids `0..n`. Edges are sets of distinct
//! vertex ids, stored sorted ascending (the canonical edge key);
//! parallel edges are permitted, so the edge collection is a multiset.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::seq::IntSequence;
use crate::Error;

/// A loopless hypergraph with parallel edges allowed.
#[derive(Debug, Clone)]
pub struct Hypergraph {
    n_vertices: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Builds a hypergraph, sorting each edge into canonical ascending
    /// order. Errors on out-of-range ids or a vertex repeated within an
    /// edge (looplessness).
    pub fn new(n_vertices: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        let mut canonical = Vec::with_capacity(edges.len());
        for (i, mut edge) in edges.into_iter().enumerate() {
            edge.sort_unstable();
            if let Some(&v) = edge.iter().find(|&&v| v >= n_vertices) {
                return Err(Error::invalid(format!(
                    "edge {i} references vertex {v} but only {n_vertices} vertices exist"
                )));
            }
            if edge.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!(
                    "edge {i} repeats a vertex (loops are not allowed)"
                )));
            }
            canonical.push(edge);
        }
        Ok(Hypergraph { n_vertices, edges: canonical })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges in insertion order, each sorted ascending.
    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Per-vertex degrees in vertex-id order.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n_vertices];
        for edge in &self.edges {
            for &v in edge {
                deg[v] += 1;
            }
        }
        deg
    }

    /// Degree sequence sorted non-increasing, together with the
    /// permutation mapping sorted positions to vertex ids. Ties are
    /// broken by ascending vertex id.
    pub fn degree_sequence(&self) -> (IntSequence, Vec<usize>) {
        let deg = self.degrees();
        let mut perm: Vec<usize> = (0..self.n_vertices).collect();
        perm.sort_unstable_by_key(|&v| (std::cmp::Reverse(deg[v]), v));
        let values = perm.iter().map(|&v| deg[v]).collect();
        (IntSequence::new(values), perm)
    }

    /// Edge cardinalities sorted non-increasing.
    pub fn dimension_sequence(&self) -> IntSequence {
        IntSequence::sorted(self.edges.iter().map(Vec::len).collect())
    }

    /// Canonical edge keys with multiplicities; counts sum to the edge
    /// count.
    pub fn edge_multiset_multiplicities(&self) -> BTreeMap<Vec<usize>, usize> {
        let mut mult = BTreeMap::new();
        for edge in &self.edges {
            *mult.entry(edge.clone()).or_insert(0) += 1;
        }
        mult
    }

    /// The edge multiset in a canonical order, for equality testing and
    /// map keys.
    pub fn canonical_edges(&self) -> Vec<Vec<usize>> {
        let mut edges = self.edges.clone();
        edges.sort_unstable();
        edges
    }

    /// Clique expansion: the simple graph joining every pair of
    /// vertices that share at least one edge. Parallel edges and
    /// multiplicities collapse.
    pub fn project_to_simple_graph(&self) -> SimpleGraph {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.n_vertices];
        for edge in &self.edges {
            for (i, &u) in edge.iter().enumerate() {
                for &v in &edge[i + 1..] {
                    adj[u].push(v);
                    adj[v].push(u);
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        SimpleGraph { adj }
    }

    pub fn incidence(&self) -> IncidenceView<'_> {
        IncidenceView { h: self }
    }
}

/// Hypergraphs compare equal when they have the same vertex count and
/// the same edge multiset, regardless of edge insertion order.
impl PartialEq for Hypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.n_vertices == other.n_vertices && self.canonical_edges() == other.canonical_edges()
    }
}

impl Eq for Hypergraph {}

/// Read-only incidence-matrix view: rows are edges, columns vertices.
#[derive(Debug, Clone, Copy)]
pub struct IncidenceView<'a> {
    h: &'a Hypergraph,
}

impl IncidenceView<'_> {
    pub fn rows(&self) -> usize {
        self.h.n_edges()
    }

    pub fn cols(&self) -> usize {
        self.h.n_vertices()
    }

    /// Entry m_ij: 1 iff vertex `j` belongs to edge `i`.
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.h.edges[i].binary_search(&j).is_ok()
    }

    /// Row sum = dimension of edge `i`.
    pub fn row_sum(&self, i: usize) -> usize {
        self.h.edges[i].len()
    }

    /// Column sum = degree of vertex `j`.
    pub fn col_sum(&self, j: usize) -> usize {
        self.h.edges.iter().filter(|e| e.binary_search(&j).is_ok()).count()
    }
}

/// Simple undirected graph as sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn n_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn n_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }
}
