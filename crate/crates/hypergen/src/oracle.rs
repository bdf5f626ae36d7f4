//! Brute-force ground truth for small instances.
//!
//! Enumerates every (0,1)-matrix with the given column sums (degrees)
//! and row sums (dimensions) by row-wise backtracking, groups the
//! matrices into hypergraph realisations, and computes exact population
//! statistics. Deliberately avoids the Gale-Ryser characterisation so
//! it can serve as an independent check of it; the only pruning is
//! elementary counting (a column's residual demand can never exceed
//! the number of rows left).
//!
//! Enumeration is exponential, so instances are capped at
//! `n * m <= 30` and rejected loudly beyond that.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::hypergraph::Hypergraph;
use crate::seq::{self, IntSequence};
use crate::Error;

/// Maximum `n * m` accepted by the enumeration routines.
pub const WORK_CAP: usize = 30;

fn check_cap(a: &IntSequence, b: &IntSequence) -> Result<()> {
    let work = a.len() * b.len();
    if work > WORK_CAP {
        return Err(Error::CapExceeded { actual: work, cap: WORK_CAP });
    }
    Ok(())
}

/// All m x n (0,1)-matrices with column sums `a` and row sums `b`, as
/// ordered row lists (each row the sorted set of its 1-columns).
/// Returns an empty list when none exist (including unequal totals).
pub fn enumerate_matrices(a: &IntSequence, b: &IntSequence) -> Result<Vec<Vec<Vec<usize>>>> {
    check_cap(a, b)?;
    let mut out = Vec::new();
    let mut colres: Vec<usize> = a.values().to_vec();
    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(b.len());
    backtrack_rows(b.values(), 0, &mut colres, &mut rows, &mut |rows| {
        out.push(rows.to_vec());
        true
    });
    Ok(out)
}

/// Whether at least one matrix with the given margins exists.
pub fn matrix_exists(a: &IntSequence, b: &IntSequence) -> Result<bool> {
    check_cap(a, b)?;
    let mut found = false;
    let mut colres: Vec<usize> = a.values().to_vec();
    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(b.len());
    backtrack_rows(b.values(), 0, &mut colres, &mut rows, &mut |_| {
        found = true;
        false // stop the search
    });
    Ok(found)
}

/// Row-wise backtracking. `emit` returns false to abort the search.
fn backtrack_rows(
    b: &[usize],
    row: usize,
    colres: &mut Vec<usize>,
    rows: &mut Vec<Vec<usize>>,
    emit: &mut dyn FnMut(&[Vec<usize>]) -> bool,
) -> bool {
    let rows_left = b.len() - row;
    // Elementary prune: each remaining row can serve a column at most once.
    if colres.iter().any(|&c| c > rows_left) {
        return true;
    }
    if row == b.len() {
        if colres.iter().all(|&c| c == 0) {
            return emit(rows);
        }
        return true;
    }
    let want = b[row];
    let available: Vec<usize> =
        (0..colres.len()).filter(|&j| colres[j] > 0).collect();
    if available.len() < want {
        return true;
    }
    let mut keep_going = true;
    let mut scratch: Vec<usize> = Vec::with_capacity(want);
    #[allow(clippy::too_many_arguments)]
    fn combos(
        available: &[usize],
        want: usize,
        start: usize,
        scratch: &mut Vec<usize>,
        b: &[usize],
        row: usize,
        colres: &mut Vec<usize>,
        rows: &mut Vec<Vec<usize>>,
        emit: &mut dyn FnMut(&[Vec<usize>]) -> bool,
        keep_going: &mut bool,
    ) {
        if !*keep_going {
            return;
        }
        if scratch.len() == want {
            for &j in scratch.iter() {
                colres[j] -= 1;
            }
            rows.push(scratch.clone());
            *keep_going = backtrack_rows(b, row + 1, colres, rows, emit);
            rows.pop();
            for &j in scratch.iter() {
                colres[j] += 1;
            }
            return;
        }
        let remaining = want - scratch.len();
        for i in start..=available.len().saturating_sub(remaining) {
            scratch.push(available[i]);
            combos(available, want, i + 1, scratch, b, row, colres, rows, emit, keep_going);
            scratch.pop();
            if !*keep_going {
                return;
            }
        }
    }
    combos(
        &available,
        want,
        0,
        &mut scratch,
        b,
        row,
        colres,
        rows,
        emit,
        &mut keep_going,
    );
    keep_going
}

/// All distinct hypergraph realisations of `(a, b)`, each with the
/// number of edge orderings realising the sorted dimension sequence
/// (i.e. the number of enumerated matrices mapping to it). The counts
/// are verified against the closed-form multinomial and sum to the
/// total matrix count.
pub fn enumerate_hypergraphs(a: &IntSequence, b: &IntSequence) -> Result<Vec<(Hypergraph, u128)>> {
    let matrices = enumerate_matrices(a, b)?;
    let mut groups: BTreeMap<Vec<Vec<usize>>, u128> = BTreeMap::new();
    for rows in matrices {
        let mut key = rows;
        key.sort_unstable();
        *groups.entry(key).or_insert(0) += 1;
    }

    // Multiplicity of each dimension value in b.
    let mut dim_counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &d in b.values() {
        *dim_counts.entry(d).or_insert(0) += 1;
    }

    let mut out = Vec::with_capacity(groups.len());
    for (edges, count) in groups {
        let h = Hypergraph::new(a.len(), edges)?;
        let mut expected: u128 = dim_counts.values().map(|&c| factorial_u128(c)).product();
        for mult in h.edge_multiset_multiplicities().values() {
            expected /= factorial_u128(*mult);
        }
        if expected != count {
            return Err(Error::internal(format!(
                "ordering count {count} does not match multinomial {expected}"
            )));
        }
        out.push((h, count));
    }
    Ok(out)
}

/// Exact unweighted mean of `f` over all distinct hypergraph
/// realisations (the uniform population mean).
pub fn exact_population_mean<F>(a: &IntSequence, b: &IntSequence, f: F) -> Result<f64>
where
    F: Fn(&Hypergraph) -> f64,
{
    seq::check_realisability(a, b).map_err(Error::NotRealisable)?;
    let hs = enumerate_hypergraphs(a, b)?;
    if hs.is_empty() {
        // Realisable pairs always enumerate to at least one matrix.
        return Err(Error::internal(
            "realisable pair enumerated to zero hypergraphs".to_string(),
        ));
    }
    Ok(hs.iter().map(|(h, _)| f(h)).sum::<f64>() / hs.len() as f64)
}

fn factorial_u128(k: usize) -> u128 {
    (2..=k as u128).product()
}
