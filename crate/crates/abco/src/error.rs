//! Error type shared across the crate.

use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("`{prefix}` is not a prefix of `{of}`; cancellation undefined")]
    NotAPrefix { prefix: String, of: String },

    #[error("`{suffix}` is not a suffix of `{of}`; cancellation undefined")]
    NotASuffix { suffix: String, of: String },

    #[error("letter {letter} is outside the alphabet of size {alphabet}")]
    LetterOutOfAlphabet { letter: u8, alphabet: usize },

    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),

    #[error("invalid digits: {0}")]
    InvalidDigits(String),

    #[error("resource cap exceeded: {needed} letters needed, cap is {cap}")]
    ResourceExceeded { needed: BigUint, cap: u64 },

    /// The two rows handed to `co_decompose` are not abelian-equivalent.
    #[error("Parikh vectors of the two rows differ; no co-decomposition exists")]
    ParikhMismatch,

    /// A Z-set recursion step could not be applied because the image of
    /// some block does not start with the required run of zeros. Callers
    /// fall back to the brute-force oracle.
    #[error("recursion step inapplicable: image of `{z_tilde}` does not begin with 0^{digit}")]
    StepInapplicable { z_tilde: String, digit: u32 },

    #[error("method disagreement at n = {n}: codec gives {codec}, oracle gives {oracle}")]
    MethodDisagreement { n: String, codec: u64, oracle: u64 },

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
