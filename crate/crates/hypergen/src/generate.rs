//! Random generation of hypergraphs with exact per-edge-sequence
//! probability tracking.
//!
//! Edges are generated largest dimension first. For each edge the
//! residual degree sequence is compared against the reduced conjugate
//! of the remaining dimensions; the prefix positions where dominance
//! would break ("critical indices", each with a margin of violation)
//! partition the vertex positions into intervals, and a batch of
//! vertices is drawn from every interval: first a batch size uniform
//! within the feasibility bounds, then a uniform subset of the
//! interval's eligible (nonzero residual degree) positions. The exact
//! log-probability of every uniform choice is accumulated, which is
//! what makes the traces usable as importance-sampling proposals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::hypergraph::Hypergraph;
use crate::seq::{self, ConjugateSequence, IntSequence};
use crate::Error;

/// A prefix position where dominance would be violated, with the
/// minimum number of selections required at or before it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CriticalIndex {
    /// Prefix length `k` (1-based) into the sorted residual degrees.
    pub index: usize,
    /// Minimum number of vertices to pick at positions `<= k`.
    pub margin: usize,
}

/// All critical indices for one edge step, in ascending order. The
/// final entry is always the terminal index `k = n` with margin equal
/// to the edge dimension, which forces the edge to reach full size.
#[derive(Debug, Clone)]
pub struct CriticalIndexSet {
    entries: Vec<CriticalIndex>,
}

impl CriticalIndexSet {
    pub fn entries(&self) -> &[CriticalIndex] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Critical indices of the residual degrees against the reduced
/// conjugate, per the margin-of-violation rule, plus the terminal
/// index.
pub fn critical_indices(
    a_resid: &IntSequence,
    bbar_next: &ConjugateSequence,
    b1: usize,
) -> CriticalIndexSet {
    debug_assert!(a_resid.is_sorted_desc());
    critical_indices_raw(a_resid.values(), bbar_next.values(), b1)
}

fn critical_indices_raw(degs: &[usize], bbar: &[usize], b1: usize) -> CriticalIndexSet {
    let n = degs.len();
    let mut entries = Vec::new();
    let mut pa: u128 = 0;
    let mut pb: u128 = 0;
    for k in 1..n {
        pa += degs[k - 1] as u128;
        pb += bbar[k - 1] as u128;
        if pa > pb {
            entries.push(CriticalIndex { index: k, margin: (pa - pb) as usize });
        }
    }
    // Terminal index: the full-prefix margin is exactly the edge
    // dimension, which closes the while-loop with |e| = b1.
    entries.push(CriticalIndex { index: n, margin: b1 });
    CriticalIndexSet { entries }
}

/// One interval's recorded choice: which batch size was drawn and
/// which positions (0-based, into the sorted residual degree sequence)
/// were taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalChoice {
    /// Half-open 0-based position range covered by the interval.
    pub interval: std::ops::Range<usize>,
    pub batch_size: usize,
    pub positions: Vec<usize>,
}

/// Audit record of all interval choices for one edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeChoices {
    pub intervals: Vec<IntervalChoice>,
}

impl EdgeChoices {
    /// All chosen positions of the edge, ascending.
    pub fn positions(&self) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.intervals.iter().flat_map(|c| c.positions.iter().copied()).collect();
        out.sort_unstable();
        out
    }
}

/// Outcome of sampling one edge: chosen positions, the log-probability
/// of exactly this outcome, and the per-interval audit record.
#[derive(Debug, Clone)]
pub struct EdgeSample {
    pub positions: Vec<usize>,
    pub log_prob: f64,
    pub choices: EdgeChoices,
}

/// Draws one edge of dimension `b1` as positions into the sorted
/// residual degree sequence, honouring every critical margin.
pub fn sample_edge<R: Rng>(
    a_resid: &IntSequence,
    crit: &CriticalIndexSet,
    b1: usize,
    rng: &mut R,
) -> Result<EdgeSample> {
    sample_edge_raw(a_resid.values(), crit, b1, rng)
}

/// Per-edge batching plan: the critical intervals, their eligible
/// positions, and the minimum cumulative pick count required by the
/// end of each interval.
///
/// The raw margin of a critical index only accounts for dominance up
/// to that index; a later margin can exceed what the intervening
/// intervals are able to supply, in which case the deficit has to be
/// covered earlier. `required` back-propagates every margin through
/// the downstream eligible capacities, which is exactly the condition
/// for the batch windows to stay non-empty on realisable inputs (and
/// any realisation's own choice path satisfies it, so support is
/// unaffected).
struct EdgePlan {
    ranges: Vec<std::ops::Range<usize>>,
    eligible: Vec<Vec<usize>>,
    required: Vec<usize>,
}

fn build_edge_plan(degs: &[usize], crit: &CriticalIndexSet) -> EdgePlan {
    let k = crit.entries.len();
    let mut ranges = Vec::with_capacity(k);
    let mut eligible = Vec::with_capacity(k);
    let mut prev_k = 0usize;
    for entry in &crit.entries {
        debug_assert!(entry.index <= degs.len());
        let range = prev_k..entry.index;
        eligible.push(range.clone().filter(|&p| degs[p] > 0).collect::<Vec<_>>());
        ranges.push(range);
        prev_k = entry.index;
    }
    let mut required = vec![0usize; k];
    for (i, entry) in crit.entries.iter().enumerate().rev() {
        let from_later = if i + 1 < k {
            required[i + 1].saturating_sub(eligible[i + 1].len())
        } else {
            0
        };
        required[i] = entry.margin.max(from_later);
    }
    EdgePlan { ranges, eligible, required }
}

fn sample_edge_raw<R: Rng>(
    degs: &[usize],
    crit: &CriticalIndexSet,
    b1: usize,
    rng: &mut R,
) -> Result<EdgeSample> {
    let plan = build_edge_plan(degs, crit);
    let mut chosen = 0usize;
    let mut log_prob = 0.0f64;
    let mut positions = Vec::with_capacity(b1);
    let mut intervals = Vec::with_capacity(plan.ranges.len());

    for i in 0..plan.ranges.len() {
        let eligible = &plan.eligible[i];
        let lower = plan.required[i].saturating_sub(chosen);
        let upper = (b1 - chosen).min(eligible.len());
        if lower > upper {
            return Err(Error::internal(format!(
                "empty batch window [{lower},{upper}] in interval {:?} (required {}, chosen {chosen})",
                plan.ranges[i], plan.required[i]
            )));
        }
        let o = if lower == upper { lower } else { rng.gen_range(lower..=upper) };
        log_prob -= ((upper - lower + 1) as f64).ln();
        log_prob -= ln_binomial(eligible.len(), o);

        let mut picked: Vec<usize> = if o == eligible.len() {
            eligible.clone()
        } else {
            rand::seq::index::sample(rng, eligible.len(), o)
                .into_iter()
                .map(|i| eligible[i])
                .collect()
        };
        picked.sort_unstable();

        chosen += o;
        positions.extend(picked.iter().copied());
        intervals.push(IntervalChoice {
            interval: plan.ranges[i].clone(),
            batch_size: o,
            positions: picked,
        });
    }

    if chosen != b1 {
        return Err(Error::internal(format!(
            "edge ended with {chosen} vertices instead of {b1}"
        )));
    }
    Ok(EdgeSample { positions, log_prob, choices: EdgeChoices { intervals } })
}

/// An edge sequence produced by the sampler together with its exact
/// log-probability and the per-edge choice record.
#[derive(Debug, Clone)]
pub struct GenTrace {
    edges: Vec<Vec<usize>>,
    log_prob: f64,
    per_edge_choices: Vec<EdgeChoices>,
}

impl GenTrace {
    /// Edges in generation order (non-increasing dimension), each a
    /// sorted vertex-id list.
    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// log P(E): the joint log-probability with which the sampler
    /// constructed exactly this edge sequence. Always <= 0.
    pub fn log_prob(&self) -> f64 {
        self.log_prob
    }

    pub fn per_edge_choices(&self) -> &[EdgeChoices] {
        &self.per_edge_choices
    }

    pub fn to_hypergraph(&self, n_vertices: usize) -> Result<Hypergraph> {
        Hypergraph::new(n_vertices, self.edges.clone())
    }
}

/// Accumulated log P(E) of a generated trace.
pub fn edge_sequence_probability(trace: &GenTrace) -> f64 {
    trace.log_prob()
}

/// Generates one random hypergraph realisation of `(a, b)` from the
/// given seed, tracking the exact log-probability of the produced edge
/// sequence. Vertex `i` carries the `i`-th component of the sorted
/// degree sequence.
pub fn generate(a: &IntSequence, b: &IntSequence, seed: u64) -> Result<GenTrace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate_with_rng(a, b, &mut rng)
}

/// As [`generate`], drawing from a caller-supplied random source.
pub fn generate_with_rng<R: Rng>(a: &IntSequence, b: &IntSequence, rng: &mut R) -> Result<GenTrace> {
    seq::check_realisability(a, b).map_err(Error::NotRealisable)?;
    let n = a.len();

    // (residual degree, vertex id), sorted by degree desc, id asc.
    let mut residual: Vec<(usize, usize)> = a.values().iter().copied().zip(0..n).collect();
    let mut degs: Vec<usize> = a.values().to_vec();
    let mut bbar: Vec<usize> = seq::conjugate(b, n).values().to_vec();

    let mut edges = Vec::with_capacity(b.len());
    let mut per_edge_choices = Vec::with_capacity(b.len());
    let mut log_prob = 0.0f64;

    for (j, &b1) in b.values().iter().enumerate() {
        // Conjugate update: dropping the head of the remaining
        // dimensions decrements the first b1 conjugate components.
        for slot in bbar.iter_mut().take(b1) {
            if *slot == 0 {
                return Err(Error::internal(format!(
                    "conjugate component hit zero while reducing head at edge {j}"
                )));
            }
            *slot -= 1;
        }
        #[cfg(debug_assertions)]
        {
            let tail = IntSequence::new(b.values()[j + 1..].to_vec());
            debug_assert_eq!(
                &bbar,
                seq::conjugate(&tail, n).values(),
                "incremental conjugate diverged at edge {j}"
            );
        }

        let crit = critical_indices_raw(&degs, &bbar, b1);
        let sample = sample_edge_raw(&degs, &crit, b1, rng)?;

        let mut edge: Vec<usize> = sample.positions.iter().map(|&p| residual[p].1).collect();
        edge.sort_unstable();
        for &p in &sample.positions {
            residual[p].0 -= 1;
        }
        residual.sort_unstable_by_key(|&(d, v)| (std::cmp::Reverse(d), v));
        degs.clear();
        degs.extend(residual.iter().map(|&(d, _)| d));

        debug_assert!(
            seq::prefix_dominates(&degs, &bbar),
            "residual dominance lost after edge {j}"
        );

        log_prob += sample.log_prob;
        edges.push(edge);
        per_edge_choices.push(sample.choices);
    }

    debug_assert!(log_prob <= 1e-12);
    Ok(GenTrace { edges, log_prob: log_prob.min(0.0), per_edge_choices })
}

/// Deterministically re-applies a recorded choice sequence, returning
/// the reconstructed edges. Used to audit traces.
pub fn replay_choices(
    a: &IntSequence,
    b: &IntSequence,
    choices: &[EdgeChoices],
) -> Result<Vec<Vec<usize>>> {
    if choices.len() != b.len() {
        return Err(Error::invalid(format!(
            "expected {} edge choice records, got {}",
            b.len(),
            choices.len()
        )));
    }
    let n = a.len();
    let mut residual: Vec<(usize, usize)> = a.values().iter().copied().zip(0..n).collect();
    let mut edges = Vec::with_capacity(b.len());
    for record in choices {
        let positions = record.positions();
        let mut edge: Vec<usize> = positions.iter().map(|&p| residual[p].1).collect();
        edge.sort_unstable();
        for &p in &positions {
            if residual[p].0 == 0 {
                return Err(Error::invalid(
                    "choice record selects a zero-degree position".to_string(),
                ));
            }
            residual[p].0 -= 1;
        }
        residual.sort_unstable_by_key(|&(d, v)| (std::cmp::Reverse(d), v));
        edges.push(edge);
    }
    Ok(edges)
}

/// log c(E) = log( m! / prod_e mult(e)! ): the number of edge
/// orderings that yield this hypergraph.
pub fn hypergraph_multiplicity(h: &Hypergraph) -> f64 {
    let mut log = ln_factorial(h.n_edges());
    for count in h.edge_multiset_multiplicities().values() {
        log -= ln_factorial(*count);
    }
    log
}

/// Derives the per-sample seed for `sample_index` from a master seed
/// (SplitMix64-style mixing), so batches can fan out across workers
/// while staying reproducible.
pub fn derive_seed(master: u64, sample_index: u64) -> u64 {
    let mut z = master ^ sample_index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Exhaustively walks the sampler's choice tree, returning every edge
/// sequence it can produce together with its exact log-probability.
/// The per-sequence probabilities sum to 1. Errors with `CapExceeded`
/// once more than `max_sequences` sequences are found.
pub fn enumerate_edge_sequences(
    a: &IntSequence,
    b: &IntSequence,
    max_sequences: usize,
) -> Result<Vec<(Vec<Vec<usize>>, f64)>> {
    seq::check_realisability(a, b).map_err(Error::NotRealisable)?;
    let n = a.len();
    let residual: Vec<(usize, usize)> = a.values().iter().copied().zip(0..n).collect();
    let bbar: Vec<usize> = seq::conjugate(b, n).values().to_vec();
    let mut out = Vec::new();
    walk_edges(
        &residual,
        &bbar,
        b.values(),
        0,
        &mut Vec::new(),
        0.0,
        max_sequences,
        &mut out,
    )?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn walk_edges(
    residual: &[(usize, usize)],
    bbar: &[usize],
    b: &[usize],
    j: usize,
    edges_acc: &mut Vec<Vec<usize>>,
    log_prob: f64,
    cap: usize,
    out: &mut Vec<(Vec<Vec<usize>>, f64)>,
) -> Result<()> {
    if j == b.len() {
        if out.len() >= cap {
            return Err(Error::CapExceeded { actual: out.len() + 1, cap });
        }
        out.push((edges_acc.clone(), log_prob));
        return Ok(());
    }
    let b1 = b[j];
    let mut bbar_next = bbar.to_vec();
    for slot in bbar_next.iter_mut().take(b1) {
        debug_assert!(*slot > 0);
        *slot -= 1;
    }
    let degs: Vec<usize> = residual.iter().map(|&(d, _)| d).collect();
    let crit = critical_indices_raw(&degs, &bbar_next, b1);
    let plan = build_edge_plan(&degs, &crit);

    let mut options = Vec::new();
    edge_options(&plan, 0, 0, &mut Vec::new(), 0.0, b1, &mut options)?;

    for (positions, edge_logp) in options {
        let mut next_residual = residual.to_vec();
        let mut edge: Vec<usize> = positions.iter().map(|&p| next_residual[p].1).collect();
        edge.sort_unstable();
        for &p in &positions {
            next_residual[p].0 -= 1;
        }
        next_residual.sort_unstable_by_key(|&(d, v)| (std::cmp::Reverse(d), v));
        edges_acc.push(edge);
        walk_edges(&next_residual, &bbar_next, b, j + 1, edges_acc, log_prob + edge_logp, cap, out)?;
        edges_acc.pop();
    }
    Ok(())
}

fn edge_options(
    plan: &EdgePlan,
    interval_idx: usize,
    chosen: usize,
    positions: &mut Vec<usize>,
    log_prob: f64,
    b1: usize,
    out: &mut Vec<(Vec<usize>, f64)>,
) -> Result<()> {
    if interval_idx == plan.ranges.len() {
        if chosen != b1 {
            return Err(Error::internal(format!(
                "choice tree ended an edge with {chosen} of {b1} vertices"
            )));
        }
        out.push((positions.clone(), log_prob));
        return Ok(());
    }
    let eligible = &plan.eligible[interval_idx];
    let lower = plan.required[interval_idx].saturating_sub(chosen);
    let upper = (b1 - chosen).min(eligible.len());
    if lower > upper {
        return Err(Error::internal(format!(
            "empty batch window [{lower},{upper}] while enumerating interval {:?}",
            plan.ranges[interval_idx]
        )));
    }
    let range_log = ((upper - lower + 1) as f64).ln();
    for o in lower..=upper {
        let subset_log = ln_binomial(eligible.len(), o);
        for_each_combination(eligible, o, &mut |subset| {
            positions.extend(subset.iter().copied());
            let res = edge_options(
                plan,
                interval_idx + 1,
                chosen + o,
                positions,
                log_prob - range_log - subset_log,
                b1,
                out,
            );
            positions.truncate(positions.len() - subset.len());
            res
        })?;
    }
    Ok(())
}

/// Calls `f` on every k-subset of `items`, in lexicographic order.
fn for_each_combination<F>(items: &[usize], k: usize, f: &mut F) -> Result<()>
where
    F: FnMut(&[usize]) -> Result<()>,
{
    fn rec<F>(items: &[usize], k: usize, start: usize, scratch: &mut Vec<usize>, f: &mut F) -> Result<()>
    where
        F: FnMut(&[usize]) -> Result<()>,
    {
        if scratch.len() == k {
            return f(scratch);
        }
        let remaining = k - scratch.len();
        for i in start..=items.len().saturating_sub(remaining) {
            scratch.push(items[i]);
            rec(items, k, i + 1, scratch, f)?;
            scratch.pop();
        }
        Ok(())
    }
    if k > items.len() {
        return Ok(());
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), f)
}

pub(crate) fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|i| (i as f64).ln()).sum()
}

pub(crate) fn ln_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    (1..=k).map(|i| ((n - k + i) as f64).ln() - (i as f64).ln()).sum()
}
