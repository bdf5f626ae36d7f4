//! Integer-sequence primitives: conjugation, dominance and the
//! Gale-Ryser realisability test.
//!
//! Degree and dimension sequences are non-negative integer sequences,
//! conventionally sorted in non-increasing order. Dominance compares
//! prefix sums after zero-padding both sequences to a common length;
//! a pair (degrees, dimensions) is realisable by a (0,1) incidence
//! matrix exactly when the degrees are dominated by the conjugate of
//! the dimensions.

use crate::error::{RealisabilityViolation, Result};
use crate::Error;

/// A non-negative integer sequence with sort-order bookkeeping.
///
/// Most operations in this crate require the values in non-increasing
/// order; constructors record whether that holds so the requirement can
/// be asserted cheaply.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntSequence {
    values: Vec<usize>,
    sorted_desc: bool,
}

impl IntSequence {
    /// Wraps the values as given, detecting whether they are already
    /// non-increasing.
    pub fn new(values: Vec<usize>) -> Self {
        let sorted_desc = values.windows(2).all(|w| w[0] >= w[1]);
        IntSequence { values, sorted_desc }
    }

    /// Sorts the values in non-increasing order.
    pub fn sorted(mut values: Vec<usize>) -> Self {
        values.sort_unstable_by(|x, y| y.cmp(x));
        IntSequence { values, sorted_desc: true }
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_sorted_desc(&self) -> bool {
        self.sorted_desc
    }

    /// Largest component, or 0 for the empty sequence. Meaningful as
    /// "the maximum" only when sorted.
    pub fn head(&self) -> usize {
        self.values.first().copied().unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.values.iter().map(|&v| v as u128).sum()
    }

    pub fn into_values(self) -> Vec<usize> {
        self.values
    }
}

impl std::fmt::Display for IntSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Conjugate of a dimension sequence, zero-padded to a fixed length
/// (the vertex count). Component `i` (0-based) counts the source
/// entries that are `>= i + 1`, so the values are non-increasing, and
/// their sum equals the source total whenever no source entry exceeds
/// the padded length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugateSequence {
    values: Vec<usize>,
}

impl ConjugateSequence {
    /// Wraps explicit conjugate values; they must be non-increasing.
    pub fn from_values(values: Vec<usize>) -> Result<Self> {
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid(
                "conjugate sequence values must be non-increasing".to_string(),
            ));
        }
        Ok(ConjugateSequence { values })
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> u128 {
        self.values.iter().map(|&v| v as u128).sum()
    }
}

/// Conjugate sequence of `b`, truncated/zero-padded to length `n`:
/// `result[i] = #{ j : b[j] >= i + 1 }`.
pub fn conjugate(b: &IntSequence, n: usize) -> ConjugateSequence {
    debug_assert!(b.is_sorted_desc());
    let bv = b.values();
    let mut values = vec![0usize; n];
    // b sorted non-increasing: entries >= threshold form a prefix.
    let mut count = bv.len();
    for (i, slot) in values.iter_mut().enumerate() {
        let threshold = i + 1;
        while count > 0 && bv[count - 1] < threshold {
            count -= 1;
        }
        *slot = count;
    }
    ConjugateSequence { values }
}

/// Decrements the first `b1` components of a conjugate sequence.
///
/// When `b1` is the largest component of the source sequence this
/// yields the conjugate of the source with that component removed;
/// more generally it is the conjugate of the source with one component
/// of value `b1` removed.
pub fn reduce_conjugate_head(bbar: &ConjugateSequence, b1: usize) -> Result<ConjugateSequence> {
    if b1 > bbar.len() {
        return Err(Error::invalid(format!(
            "reduce_conjugate_head: b1 = {b1} exceeds conjugate length {}",
            bbar.len()
        )));
    }
    let mut values = bbar.values.clone();
    for (i, v) in values.iter_mut().take(b1).enumerate() {
        if *v == 0 {
            return Err(Error::invalid(format!(
                "reduce_conjugate_head: component {} is 0 but b1 = {b1} requires it nonzero",
                i + 1
            )));
        }
        *v -= 1;
    }
    Ok(ConjugateSequence { values })
}

/// Dominance on raw value slices: zero-pads both to the common length
/// and requires every prefix sum of `a` to be at most the matching
/// prefix sum of `c`, with equal totals. The sequences need not be
/// sorted; prefix sums are taken over the values as given.
pub fn prefix_dominates(a: &[usize], c: &[usize]) -> bool {
    let l = a.len().max(c.len());
    let mut pa: u128 = 0;
    let mut pc: u128 = 0;
    for k in 0..l {
        pa += a.get(k).copied().unwrap_or(0) as u128;
        pc += c.get(k).copied().unwrap_or(0) as u128;
        if pa > pc {
            return false;
        }
    }
    pa == pc
}

/// First (1-based) prefix length at which a prefix sum of `a` exceeds
/// that of `c`, if any, ignoring the total-equality condition.
fn first_prefix_violation(a: &[usize], c: &[usize]) -> Option<usize> {
    let l = a.len().max(c.len());
    let mut pa: u128 = 0;
    let mut pc: u128 = 0;
    for k in 0..l {
        pa += a.get(k).copied().unwrap_or(0) as u128;
        pc += c.get(k).copied().unwrap_or(0) as u128;
        if pa > pc {
            return Some(k + 1);
        }
    }
    None
}

/// `a` is dominated by `c` (written `a ≺ c`): prefix-sum majorisation
/// with equal totals, after zero-padding to the common length.
pub fn dominates(a: &IntSequence, c: &IntSequence) -> bool {
    debug_assert!(a.is_sorted_desc() && c.is_sorted_desc());
    prefix_dominates(a.values(), c.values())
}

/// Gale-Ryser test with the implied side conditions: equal totals and
/// no dimension exceeding the vertex count (dominance against the
/// length-`n` conjugate alone does not police either).
pub fn check_realisability(
    a: &IntSequence,
    b: &IntSequence,
) -> std::result::Result<(), RealisabilityViolation> {
    debug_assert!(a.is_sorted_desc() && b.is_sorted_desc());
    let n = a.len();
    if b.head() > n {
        return Err(RealisabilityViolation::DimensionTooLarge {
            max_dimension: b.head(),
            n_vertices: n,
        });
    }
    let (sa, sb) = (a.total(), b.total());
    if sa != sb {
        return Err(RealisabilityViolation::TotalMismatch {
            degree_total: sa,
            dimension_total: sb,
        });
    }
    let bbar = conjugate(b, n);
    match first_prefix_violation(a.values(), bbar.values()) {
        Some(index) => Err(RealisabilityViolation::PrefixViolation { index }),
        None => Ok(()),
    }
}

/// True iff the pair (degrees, dimensions) is realisable by some
/// loopless hypergraph (equivalently, by a (0,1) incidence matrix).
pub fn is_realisable(a: &IntSequence, b: &IntSequence) -> bool {
    check_realisability(a, b).is_ok()
}
