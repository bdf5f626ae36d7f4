//! Baseline MCMC sampler over hypergraphs with fixed degree and
//! dimension sequences, plus autocorrelation diagnostics for choosing
//! the sampling lag.
//!
//! The move re-partitions the pooled vertices of two random edges into
//! two edges of the original sizes, uniformly at random, rejecting
//! partitions that would repeat a vertex inside an edge. Both
//! sequences are preserved by construction.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::hypergraph::Hypergraph;
use crate::Error;

/// Autocorrelation threshold used for lag selection and ESS
/// truncation.
pub const DEFAULT_ACF_THRESHOLD: f64 = 0.001;

/// Loopless re-partition attempts before a move is abandoned as a
/// no-op.
const SHUFFLE_RETRY_CAP: usize = 100;

/// A running pairwise-shuffle chain.
#[derive(Debug, Clone)]
pub struct ChainState {
    current: Hypergraph,
    steps_taken: u64,
    no_op_moves: u64,
    rng: ChaCha8Rng,
    #[cfg(debug_assertions)]
    invariants: (crate::seq::IntSequence, crate::seq::IntSequence),
}

impl ChainState {
    pub fn new(initial: Hypergraph, seed: u64) -> Self {
        #[cfg(debug_assertions)]
        let invariants = (initial.degree_sequence().0, initial.dimension_sequence());
        ChainState {
            current: initial,
            steps_taken: 0,
            no_op_moves: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            #[cfg(debug_assertions)]
            invariants,
        }
    }

    pub fn current(&self) -> &Hypergraph {
        &self.current
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps_taken
    }

    /// Moves abandoned after the retry cap (the chain stayed put).
    pub fn no_op_moves(&self) -> u64 {
        self.no_op_moves
    }

    /// One chain step: pick two distinct edges uniformly, re-partition
    /// their pooled vertices uniformly into two edges of the original
    /// sizes, rejecting within-edge repeats up to the retry cap.
    pub fn pairwise_shuffle_step(&mut self) -> Result<()> {
        let m = self.current.n_edges();
        if m < 2 {
            return Err(Error::invalid(
                "pairwise shuffle requires at least 2 edges".to_string(),
            ));
        }
        let i = self.rng.gen_range(0..m);
        let mut j = self.rng.gen_range(0..m - 1);
        if j >= i {
            j += 1;
        }

        let edges = self.current.edges();
        let mut pool: Vec<usize> = edges[i].iter().chain(edges[j].iter()).copied().collect();
        let di = edges[i].len();

        for _ in 0..SHUFFLE_RETRY_CAP {
            pool.shuffle(&mut self.rng);
            if has_repeat(&pool[..di]) || has_repeat(&pool[di..]) {
                continue;
            }
            let mut new_edges = edges.to_vec();
            let mut ei = pool[..di].to_vec();
            let mut ej = pool[di..].to_vec();
            ei.sort_unstable();
            ej.sort_unstable();
            new_edges[i] = ei;
            new_edges[j] = ej;
            self.current = Hypergraph::new(self.current.n_vertices(), new_edges)?;
            self.steps_taken += 1;
            self.assert_invariants();
            return Ok(());
        }
        self.no_op_moves += 1;
        self.steps_taken += 1;
        Ok(())
    }

    #[cfg(debug_assertions)]
    fn assert_invariants(&self) {
        debug_assert_eq!(self.current.degree_sequence().0, self.invariants.0);
        debug_assert_eq!(self.current.dimension_sequence(), self.invariants.1);
    }

    #[cfg(not(debug_assertions))]
    fn assert_invariants(&self) {}
}

fn has_repeat(slice: &[usize]) -> bool {
    let mut sorted = slice.to_vec();
    sorted.sort_unstable();
    sorted.windows(2).any(|w| w[0] == w[1])
}

/// Runs a chain from `initial`, discarding `burn_in` steps and then
/// emitting a sample every `lag` steps until `n_samples` are
/// collected. A chain with fewer than two edges cannot move and emits
/// copies of the initial state.
pub fn run_chain(
    initial: &Hypergraph,
    n_samples: usize,
    lag: usize,
    burn_in: usize,
    seed: u64,
) -> Result<Vec<Hypergraph>> {
    if lag == 0 {
        return Err(Error::invalid("lag must be at least 1".to_string()));
    }
    if initial.n_edges() < 2 {
        return Ok(vec![initial.clone(); n_samples]);
    }
    let mut state = ChainState::new(initial.clone(), seed);
    for _ in 0..burn_in {
        state.pairwise_shuffle_step()?;
    }
    let mut samples = Vec::with_capacity(n_samples);
    while samples.len() < n_samples {
        for _ in 0..lag {
            state.pairwise_shuffle_step()?;
        }
        samples.push(state.current().clone());
    }
    Ok(samples)
}

fn centre(series: &[f64]) -> Result<(Vec<f64>, f64)> {
    if series.len() < 2 {
        return Err(Error::invalid(
            "autocorrelation needs a series of length >= 2".to_string(),
        ));
    }
    if series.windows(2).all(|w| w[0] == w[1]) {
        return Err(Error::ZeroVariance);
    }
    let mean = series.iter().sum::<f64>() / series.len() as f64;
    let centred: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let denom: f64 = centred.iter().map(|c| c * c).sum();
    if denom == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((centred, denom))
}

fn rho_at(centred: &[f64], denom: f64, lag: usize) -> f64 {
    let n = centred.len();
    let num: f64 = (0..n - lag).map(|t| centred[t] * centred[t + lag]).sum();
    num / denom
}

/// Sample autocorrelation function, `rho(l)` for `l = 0..=max_lag`
/// (capped at the series length minus one). `rho(0) = 1`.
pub fn autocorrelation(series: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let (centred, denom) = centre(series)?;
    let max_lag = max_lag.min(series.len() - 1);
    Ok((0..=max_lag).map(|l| rho_at(&centred, denom, l)).collect())
}

/// Result of autocorrelation-based lag selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LagSelection {
    pub lag: usize,
    /// Set when no lag within the series length dropped below the
    /// threshold, in which case `lag` is the largest lag examined.
    pub saturated: bool,
}

/// Smallest lag `l >= 1` at which the autocorrelation of the series
/// drops below `threshold`.
pub fn select_lag(series: &[f64], threshold: f64) -> Result<LagSelection> {
    let (centred, denom) = centre(series)?;
    let max_lag = series.len() - 1;
    for l in 1..=max_lag {
        if rho_at(&centred, denom, l) < threshold {
            return Ok(LagSelection { lag: l, saturated: false });
        }
    }
    Ok(LagSelection { lag: max_lag, saturated: true })
}

/// Autocorrelation-adjusted effective sample size of an MCMC estimate:
/// `N / (1 + 2 * sum rho(l))`, summing lags until the autocorrelation
/// first drops below the 0.001 threshold.
pub fn mcmc_ess(series: &[f64]) -> Result<f64> {
    let (centred, denom) = centre(series)?;
    let n = series.len();
    let mut acc = 0.0;
    for l in 1..n {
        let rho = rho_at(&centred, denom, l);
        if rho < DEFAULT_ACF_THRESHOLD {
            break;
        }
        acc += rho;
    }
    Ok(n as f64 / (1.0 + 2.0 * acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn h(n: usize, edges: &[&[usize]]) -> Hypergraph {
        Hypergraph::new(n, edges.iter().map(|e| e.to_vec()).collect()).unwrap()
    }

    #[test]
    fn shuffle_reaches_all_pair_partitions() {
        let initial = h(4, &[&[0, 1], &[2, 3]]);
        let mut state = ChainState::new(initial, 3);
        let mut seen: BTreeSet<Vec<Vec<usize>>> = BTreeSet::new();
        for _ in 0..500 {
            state.pairwise_shuffle_step().unwrap();
            seen.insert(state.current().canonical_edges());
        }
        let expected: BTreeSet<Vec<Vec<usize>>> = [
            vec![vec![0, 1], vec![2, 3]],
            vec![vec![0, 2], vec![1, 3]],
            vec![vec![0, 3], vec![1, 2]],
        ]
        .into_iter()
        .collect();
        assert_eq!(seen, expected);
    }

    #[test]
    fn singleton_edges_shuffle_to_same_hypergraph() {
        let initial = h(2, &[&[0], &[1]]);
        let mut state = ChainState::new(initial.clone(), 1);
        for _ in 0..50 {
            state.pairwise_shuffle_step().unwrap();
            assert_eq!(state.current(), &initial);
        }
    }

    #[test]
    fn single_edge_is_a_precondition_violation() {
        let mut state = ChainState::new(h(2, &[&[0, 1]]), 0);
        assert!(state.pairwise_shuffle_step().is_err());
    }

    #[test]
    fn run_chain_emits_consecutive_states_at_lag_one() {
        let initial = h(4, &[&[0, 1], &[2, 3], &[0, 2]]);
        let samples = run_chain(&initial, 3, 1, 0, 9).unwrap();
        assert_eq!(samples.len(), 3);
        for s in &samples {
            assert_eq!(s.degree_sequence().0, initial.degree_sequence().0);
            assert_eq!(s.dimension_sequence(), initial.dimension_sequence());
        }
    }

    #[test]
    fn run_chain_rejects_zero_lag() {
        let initial = h(2, &[&[0], &[1]]);
        assert!(run_chain(&initial, 1, 0, 0, 0).is_err());
    }

    #[test]
    fn acf_is_one_at_lag_zero() {
        let series: Vec<f64> = (0..64).map(|i| (i as f64 * 0.7).sin()).collect();
        let rho = autocorrelation(&series, 5).unwrap();
        assert_eq!(rho[0], 1.0);
    }

    #[test]
    fn alternating_series_is_anticorrelated() {
        let series: Vec<f64> = (0..100).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let rho = autocorrelation(&series, 1).unwrap();
        assert!((rho[1] + 1.0).abs() < 0.02, "rho(1) = {}", rho[1]);
    }

    #[test]
    fn constant_series_has_zero_variance() {
        let series = vec![0.25; 32];
        assert!(matches!(autocorrelation(&series, 3), Err(Error::ZeroVariance)));
        assert!(matches!(mcmc_ess(&series), Err(Error::ZeroVariance)));
        assert!(matches!(select_lag(&series, 0.001), Err(Error::ZeroVariance)));
    }

    fn iid_series(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.gen::<f64>()).collect()
    }

    fn ar1_series(n: usize, phi: f64, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x = 0.0;
        (0..n)
            .map(|_| {
                x = phi * x + (rng.gen::<f64>() - 0.5);
                x
            })
            .collect()
    }

    #[test]
    fn iid_autocorrelations_are_near_zero() {
        let n = 4000;
        let series = iid_series(n, 11);
        let rho = autocorrelation(&series, 10).unwrap();
        let bound = 3.0 / (n as f64).sqrt();
        for (l, r) in rho.iter().enumerate().skip(1) {
            assert!(r.abs() <= bound, "rho({l}) = {r} exceeds {bound}");
        }
    }

    #[test]
    fn iid_series_selects_lag_one() {
        let series = iid_series(4000, 11);
        let sel = select_lag(&series, DEFAULT_ACF_THRESHOLD).unwrap();
        assert!(!sel.saturated);
        // i.i.d. autocorrelations hover near zero; the first lag below
        // the threshold comes almost immediately.
        assert!(sel.lag <= 3, "lag {}", sel.lag);
    }

    #[test]
    fn too_short_series_is_rejected() {
        assert!(autocorrelation(&[1.0], 1).is_err());
        assert!(mcmc_ess(&[0.5]).is_err());
    }

    #[test]
    fn permissive_threshold_selects_lag_one() {
        let series = iid_series(100, 2);
        let sel = select_lag(&series, 1.1).unwrap();
        assert_eq!(sel.lag, 1);
    }

    #[test]
    fn autocorrelated_series_needs_longer_lag() {
        let weak = select_lag(&ar1_series(20_000, 0.5, 7), DEFAULT_ACF_THRESHOLD).unwrap();
        let strong = select_lag(&ar1_series(20_000, 0.9, 7), DEFAULT_ACF_THRESHOLD).unwrap();
        assert!(strong.lag > weak.lag, "{} <= {}", strong.lag, weak.lag);
    }

    #[test]
    fn ess_of_iid_series_is_near_n() {
        let series = iid_series(4000, 13);
        let ess = mcmc_ess(&series).unwrap();
        assert!((ess - 4000.0).abs() < 0.2 * 4000.0, "ess {ess}");
    }

    #[test]
    fn ess_of_ar1_half_is_near_a_third() {
        // sum of rho(l) = phi/(1-phi) = 1, so ESS ~ N/3
        let n = 60_000;
        let series = ar1_series(n, 0.5, 17);
        let ess = mcmc_ess(&series).unwrap();
        let expected = n as f64 / 3.0;
        assert!((ess - expected).abs() < 0.2 * expected, "ess {ess} vs {expected}");
    }
}
