//! Greedy normal F-representations of integers in the base sequence
//! `F_k = |φ^k(0)|`, and reconstruction of fixed-point prefixes from
//! digits: `u_[n] = (φ^N(0))^{d_N} (φ^{N-1}(0))^{d_{N-1}} … 0^{d_0}`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::parry::{fixed_point_prefix, LengthTable, ParrySubstitution};
use crate::words::Word;
use crate::Limits;

/// Digit sequence `(d_N, …, d_1, d_0)`, most significant first.
///
/// The canonical form has no leading zeros; the empty sequence denotes 0.
/// Padded input is normalized on construction, so equal values compare
/// equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FDigits(Vec<u32>);

impl FDigits {
    /// Build from raw digits, stripping leading zeros.
    pub fn new(digits: impl Into<Vec<u32>>) -> Self {
        let mut digits: Vec<u32> = digits.into();
        let lead = digits.iter().take_while(|&&d| d == 0).count();
        digits.drain(..lead);
        FDigits(digits)
    }

    pub fn zero() -> Self {
        FDigits(Vec::new())
    }

    /// `(block^reps, tail)`, the shape used by stabilization patterns.
    pub fn from_pattern(block: &[u32], reps: usize, tail: &[u32]) -> Self {
        let mut digits = Vec::with_capacity(block.len() * reps + tail.len());
        for _ in 0..reps {
            digits.extend_from_slice(block);
        }
        digits.extend_from_slice(tail);
        FDigits::new(digits)
    }

    /// Parse `1,0,1` or `(1,0,1)`.
    pub fn parse(text: &str) -> Result<Self> {
        let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
        if inner.trim().is_empty() {
            return Ok(FDigits::zero());
        }
        let digits: Vec<u32> = inner
            .split(',')
            .map(|d| {
                d.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidDigits(format!("invalid digit `{}`", d.trim())))
            })
            .collect::<Result<_>>()?;
        Ok(FDigits::new(digits))
    }

    pub fn digits(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for FDigits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Greedy normal F-representation of `n`: pick the minimal `N` with
/// `F_N ≤ n < F_{N+1}`, then peel digits `d_i = ⌊x_i / F_i⌋` downward.
pub fn to_normal_frep(n: &BigUint, subst: &ParrySubstitution) -> FDigits {
    let mut table = LengthTable::new(subst);
    to_normal_frep_with(n, subst, &mut table)
}

/// As [`to_normal_frep`], reusing a caller-held length table across calls.
pub fn to_normal_frep_with(
    n: &BigUint,
    subst: &ParrySubstitution,
    table: &mut LengthTable,
) -> FDigits {
    if n == &BigUint::ZERO {
        return FDigits::zero();
    }
    // Minimal N with F_N ≤ n < F_{N+1}.
    let mut top = 0;
    while table.f(top + 1) <= n {
        top += 1;
    }
    let mut digits = Vec::with_capacity(top + 1);
    let mut x = n.clone();
    for i in (0..=top).rev() {
        // Digits are at most α_0, so repeated subtraction beats division.
        let mut d = 0u32;
        while x >= *table.f(i) {
            x -= table.f(i).clone();
            d += 1;
        }
        debug_assert!(d <= subst.alpha0());
        digits.push(d);
    }
    debug_assert_eq!(x, BigUint::ZERO);
    FDigits(digits)
}

/// The value `Σ d_i F_i`. Accepts padded input; rejects digits above `α_0`.
pub fn frep_value(digits: &FDigits, subst: &ParrySubstitution) -> Result<BigUint> {
    let mut table = LengthTable::new(subst);
    frep_value_with(digits, subst, &mut table)
}

/// As [`frep_value`], reusing a caller-held length table across calls.
pub fn frep_value_with(
    digits: &FDigits,
    subst: &ParrySubstitution,
    table: &mut LengthTable,
) -> Result<BigUint> {
    let alpha0 = subst.alpha0();
    if let Some(&bad) = digits.digits().iter().find(|&&d| d > alpha0) {
        return Err(Error::InvalidDigits(format!(
            "digit {bad} exceeds alpha_0 = {alpha0}"
        )));
    }
    let top = digits.len();
    let mut value = BigUint::ZERO;
    for (idx, &d) in digits.digits().iter().enumerate() {
        if d > 0 {
            let i = top - 1 - idx;
            value += table.f(i) * d;
        }
    }
    Ok(value)
}

/// Check that `digits` is the greedy normal representation of its own
/// value, via a round trip.
pub fn check_normal(digits: &FDigits, subst: &ParrySubstitution) -> Result<()> {
    let mut table = LengthTable::new(subst);
    let value = frep_value_with(digits, subst, &mut table)?;
    let normal = to_normal_frep_with(&value, subst, &mut table);
    if normal != *digits {
        return Err(Error::InvalidDigits(format!(
            "{digits} is not a normal representation; the value {value} expands to {normal}"
        )));
    }
    Ok(())
}

/// Materialize `u_[n]` from its digits, per the block concatenation
/// `(φ^N(0))^{d_N} … 0^{d_0}`. Equals `fixed_point_prefix(value)`.
pub fn prefix_from_frep(
    digits: &FDigits,
    subst: &ParrySubstitution,
    limits: &Limits,
) -> Result<Word> {
    if digits.is_zero() {
        return Ok(Word::empty());
    }
    let mut table = LengthTable::new(subst);
    let value = frep_value_with(digits, subst, &mut table)?;
    if value > BigUint::from(limits.max_letters) {
        return Err(Error::ResourceExceeded {
            needed: value,
            cap: limits.max_letters,
        });
    }
    let n = value.to_usize().expect("under cap");
    let top = digits.len() - 1;
    // φ^i(0) is the length-F_i prefix of the fixed point, so one base
    // prefix of length F_top serves every block.
    let f_top = table.f(top).to_usize().expect("F_top <= n");
    let base = fixed_point_prefix(subst, f_top);
    let mut out = Vec::with_capacity(n);
    for (idx, &d) in digits.digits().iter().enumerate() {
        let i = top - idx;
        let f_i = table.f(i).to_usize().expect("F_i <= F_top");
        for _ in 0..d {
            out.extend_from_slice(&base.letters()[..f_i]);
        }
    }
    Ok(Word::from_letters(out))
}
