//! Abelian complexity of Parry words via abelian co-decomposition.
//!
//! A Parry word is the fixed point `u = lim φ^k(0)` of a simple or
//! non-simple Parry substitution `φ`. The abelian complexity `AC(n)`
//! counts the distinct Parikh vectors among the length-`n` factors of
//! `u`. This crate computes `AC(n)` two ways:
//!
//! * the co-decomposition path ([`codecomp`]), which drives a recursion
//!   over the digits of the greedy normal F-representation of `n` and
//!   scales with the digit length of `n`, and
//! * a brute-force oracle ([`oracle`]) that enumerates factors of a
//!   covering prefix and scales with `n` itself.
//!
//! The co-decomposition state (the Z-set) also detects stabilization
//! along digit patterns `(block^i, tail)`, which certifies that the
//! corresponding `AC` value is attained infinitely often.

pub mod cli;
pub mod codecomp;
pub mod error;
pub mod numeration;
pub mod oracle;
pub mod parry;
pub mod words;

pub use error::{Error, Result};

/// Budget for operations that materialize words.
///
/// Fixed-point prefixes grow exponentially with the iterate count, so
/// everything that writes letters into memory checks against this cap
/// first and fails with [`Error::ResourceExceeded`] instead of thrashing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of letters a single operation may materialize.
    pub max_letters: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_letters: 100_000_000,
        }
    }
}

impl Limits {
    pub fn with_max_letters(max_letters: u64) -> Self {
        Limits { max_letters }
    }
}
