//! Exact combinatorics of boson normal ordering.
//!
//! The crate ties together four independent ways of producing the same
//! integer sequences:
//!
//! * [`boson`] normal-orders words in `a`, `a†` by rewriting under
//!   `a a† = q a† a + 1` and reads Stirling / Bell numbers off the result;
//! * [`egf`] does exact arithmetic on truncated exponential generating
//!   functions (exp/log, composition, the pointwise "diamond" product);
//! * [`graph_enum`] enumerates set partitions and weighted line graphs by
//!   brute force;
//! * [`sequences`] holds the textbook recurrences, Hermite special values and
//!   rigorously bounded numeric evaluations of Dobiński-type sums.
//!
//! [`verify`] runs all of them against each other.

pub mod bigfloat;
pub mod boson;
pub mod egf;
mod error;
pub mod graph_enum;
pub mod qpoly;
pub mod sequences;
mod util;
pub mod verify;

pub use error::{Error, Result};

/// Exact rational coefficient type used by every series in the crate.
pub type Rational = num_rational::BigRational;

/// Resource limits shared by the rewriting engine and the enumerators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Longest boson word that will be normal-ordered.
    pub max_word_len: usize,
    /// Largest `n` for exhaustive set-partition enumeration.
    pub max_partition_n: usize,
}

impl Limits {
    pub const DEFAULT_WORD_LEN: usize = 24;
    pub const DEFAULT_PARTITION_N: usize = 14;

    /// Limits with every cap lifted.
    pub fn unbounded() -> Self {
        Limits {
            max_word_len: usize::MAX,
            max_partition_n: usize::MAX,
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_word_len: Self::DEFAULT_WORD_LEN,
            max_partition_n: Self::DEFAULT_PARTITION_N,
        }
    }
}
