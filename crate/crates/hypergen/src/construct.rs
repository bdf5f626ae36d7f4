//! Deterministic greedy construction of one hypergraph realisation.
//!
//! Edges are built in non-increasing dimension order; each edge takes
//! the vertices of currently largest residual degree, ties broken by
//! ascending vertex id. The output doubles as the initial state for
//! the MCMC sampler.

use crate::error::Result;
use crate::hypergraph::Hypergraph;
use crate::seq::{self, IntSequence};
use crate::Error;

/// Builds a hypergraph with exactly the given degree and dimension
/// sequences (both sorted non-increasing). Vertex `i` carries the
/// `i`-th component of the sorted degree sequence.
pub fn construct_initial(a: &IntSequence, b: &IntSequence) -> Result<Hypergraph> {
    seq::check_realisability(a, b).map_err(Error::NotRealisable)?;
    let n = a.len();

    // (residual degree, vertex id), kept sorted by degree desc, id asc.
    let mut residual: Vec<(usize, usize)> =
        a.values().iter().copied().zip(0..n).collect();

    let mut edges = Vec::with_capacity(b.len());
    for (j, &b1) in b.values().iter().enumerate() {
        if residual.iter().take(b1).any(|&(d, _)| d == 0) {
            // Unreachable for realisable inputs by the inductive
            // realisability argument; firing means a bug.
            return Err(Error::internal(format!(
                "construction step {j}: fewer than {b1} vertices have residual degree > 0"
            )));
        }
        let mut edge: Vec<usize> = residual[..b1].iter().map(|&(_, v)| v).collect();
        edge.sort_unstable();
        edges.push(edge);
        for slot in &mut residual[..b1] {
            slot.0 -= 1;
        }
        residual.sort_unstable_by_key(|&(d, v)| (std::cmp::Reverse(d), v));

        debug_assert!(
            {
                let degs: Vec<usize> = residual.iter().map(|&(d, _)| d).collect();
                let tail = IntSequence::new(b.values()[j + 1..].to_vec());
                seq::prefix_dominates(&degs, seq::conjugate(&tail, n).values())
            },
            "residual pair lost realisability at step {j}"
        );
    }

    Hypergraph::new(n, edges)
}
