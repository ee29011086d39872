//! Integer partitions and the combinatorics behind Wronskian-built
//! polynomial families.
//!
//! Provides:
//! * [`Partition`] - a non-decreasing sequence of parts (leading zeros are
//!   meaningful and preserved).
//! * gap sequences `k_i = lambda_i + i - 1`, which list the classical degrees
//!   entering a Wronskian construction,
//! * partition doubling, which produces the even-codimension families whose
//!   weights stay sign-definite on the whole real line,
//! * the block admissibility test for gap sequences (an optional initial
//!   block starting at 0, then blocks of even length separated by gaps of at
//!   least two),
//! * degree bookkeeping for the resulting exceptional polynomials, including
//!   the excluded degrees where the construction degenerates.

use std::collections::BTreeSet;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("partition parts must be non-decreasing (part {1} at position {0} breaks the order)")]
    NotSorted(usize, u64),
    #[error("degree {0} is excluded for this family")]
    ExcludedDegree(u64),
}

/// A partition of an integer: parts in non-decreasing order.
///
/// Zero parts are allowed and kept; `(0, 2)` and `(2,)` are different
/// partitions with different gap sequences.
///
/// # Examples
///
/// ```
/// use xherm_core::partitions::Partition;
///
/// let lambda = Partition::new(vec![1]).unwrap();
/// assert_eq!(lambda.gap_sequence(), vec![1]);
/// assert_eq!(lambda.double().gap_sequence(), vec![1, 2]);
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    /// Build a partition, rejecting out-of-order parts.
    pub fn new(parts: Vec<u64>) -> Result<Self, PartitionError> {
        for i in 1..parts.len() {
            if parts[i] < parts[i - 1] {
                return Err(PartitionError::NotSorted(i, parts[i]));
            }
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    /// Number of parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The integer this partition represents (sum of parts).
    pub fn total(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// Gap sequence `k_i = lambda_i + i - 1` with `i` starting at 1.
    ///
    /// Strictly increasing for any valid partition.
    pub fn gap_sequence(&self) -> Vec<u64> {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, p)| p + i as u64)
            .collect()
    }

    /// Duplicate every part: `(1, 2)` becomes `(1, 1, 2, 2)`.
    ///
    /// Doubled partitions generate the even-codimension families whose
    /// Wronskian weights have no real zeros.
    pub fn double(&self) -> Partition {
        let mut parts = Vec::with_capacity(self.parts.len() * 2);
        for p in &self.parts {
            parts.push(*p);
            parts.push(*p);
        }
        Partition { parts }
    }

    /// Codimension of the family built on the doubled partition: the number
    /// of degrees missing from the polynomial sequence, `2 * total()`.
    pub fn codimension(&self) -> u64 {
        2 * self.total()
    }

    /// Degrees for which the doubled-partition construction degenerates:
    /// exactly the gap sequence of the doubled partition, as a set.
    pub fn excluded_indices(&self) -> BTreeSet<u64> {
        self.double().gap_sequence().into_iter().collect()
    }

    /// Degree of the exceptional polynomial with index `n` for the family
    /// built on the doubled version of this partition.
    ///
    /// Equals `2 * total() - 2 * len() + n`; rejects indices in
    /// [`Partition::excluded_indices`].
    pub fn xop_degree(&self, n: u64) -> Result<u64, PartitionError> {
        if self.excluded_indices().contains(&n) {
            return Err(PartitionError::ExcludedDegree(n));
        }
        Ok(2 * self.total() - 2 * self.len() as u64 + n)
    }
}

/// Block admissibility of a gap sequence.
///
/// Splits the (strictly increasing) sequence into maximal runs of consecutive
/// integers. The sequence is admissible when every run has even length,
/// except that a run starting at 0 may have any length. Admissible sequences
/// are exactly those whose Wronskian of classical Hermite polynomials has no
/// real zeros, so the induced weight is integrable.
///
/// Sequences that are not strictly increasing describe degenerate (identically
/// zero) Wronskians and are reported as not admissible.
pub fn is_adler(gaps: &[u64]) -> bool {
    if gaps.windows(2).any(|w| w[1] <= w[0]) {
        return false;
    }
    let mut i = 0;
    while i < gaps.len() {
        let start = i;
        while i + 1 < gaps.len() && gaps[i + 1] == gaps[i] + 1 {
            i += 1;
        }
        let run_len = i - start + 1;
        let starts_at_zero = gaps[start] == 0;
        if !starts_at_zero && run_len % 2 != 0 {
            return false;
        }
        i += 1;
    }
    true
}
