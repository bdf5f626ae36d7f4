//! Construction and random generation of loopless hypergraphs with
//! prescribed degree and dimension sequences.
//!
//! A hypergraph here is a vertex set together with a *multiset* of edges
//! (parallel edges allowed, no vertex repeated inside an edge). Every
//! incidence matrix of such a hypergraph is a (0,1)-matrix whose column
//! sums are the vertex degrees and whose row sums are the edge
//! dimensions, so realisability of a degree/dimension sequence pair
//! reduces to the Gale-Ryser characterisation of (0,1)-matrices.
//!
//! The crate provides:
//!
//! * [`seq`] — integer-sequence primitives: conjugation, dominance and
//!   the Gale-Ryser realisability test;
//! * [`hypergraph`] — the hypergraph representation, incidence view and
//!   clique-expansion projection;
//! * [`construct`] — deterministic greedy construction of one
//!   realisation, usable as an MCMC starting point;
//! * [`generate`] — random generation with exact per-edge-sequence
//!   log-probability tracking;
//! * [`estimate`] — self-normalised importance sampling (SNIS) of
//!   hypergraph properties such as the average clustering coefficient,
//!   with effective-sample-size diagnostics;
//! * [`mcmc`] — a pairwise edge-shuffle Markov chain baseline with
//!   autocorrelation-based lag selection;
//! * [`oracle`] — brute-force enumeration of all realisations of small
//!   instances, for verification;
//! * [`io`] — edge-list/sequence-file parsing, synthetic benchmark
//!   sequences and JSON/CSV sample reports.
//!
//! ```
//! use hypergen::seq::IntSequence;
//!
//! let degrees = IntSequence::sorted(vec![2, 2, 1, 1]);
//! let dimensions = IntSequence::sorted(vec![3, 2, 1]);
//! assert!(hypergen::seq::is_realisable(&degrees, &dimensions));
//!
//! let trace = hypergen::generate::generate(&degrees, &dimensions, 7).unwrap();
//! let h = trace.to_hypergraph(degrees.len()).unwrap();
//! assert_eq!(h.degree_sequence().0, degrees);
//! assert!(trace.log_prob() <= 0.0);
//! ```

pub mod construct;
pub mod error;
pub mod estimate;
pub mod generate;
pub mod hypergraph;
pub mod io;
pub mod mcmc;
pub mod oracle;
pub mod seq;

pub use error::{Error, Result};
pub use hypergraph::Hypergraph;
pub use seq::IntSequence;
