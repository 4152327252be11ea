//! Finite words over an integer alphabet and their Parikh-vector algebra.
//!
//! Letters are small non-negative integers `0..alphabet`. Words are
//! immutable values; every operation returns a new word, so the algebraic
//! identities (concatenation/cancellation round trips, Parikh additivity)
//! can be tested directly.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A letter, i.e. a small non-negative integer below the alphabet size.
pub type Letter = u8;

/// An immutable finite sequence of letters.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl Into<Vec<Letter>>) -> Self {
        Word(letters.into())
    }

    /// The one-letter word `ℓ`.
    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// `0^k`.
    pub fn zeros(k: usize) -> Self {
        Word(vec![0; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn repeat(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.0.starts_with(&prefix.0)
    }

    pub fn ends_with(&self, suffix: &Word) -> bool {
        self.0.ends_with(&suffix.0)
    }

    /// The factor spanning positions `start..end`.
    pub fn sub(&self, start: usize, end: usize) -> Word {
        Word(self.0[start..end].to_vec())
    }

    /// Canonical text form: concatenated digits for alphabets of size at
    /// most 10, comma-separated integers otherwise.
    pub fn render(&self, alphabet: usize) -> String {
        if alphabet <= 10 {
            self.0.iter().map(|c| char::from(b'0' + c)).collect()
        } else {
            let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
            parts.join(",")
        }
    }

    /// Parse the canonical text form (inverse of [`Word::render`]).
    pub fn parse(text: &str, alphabet: usize) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Word::empty());
        }
        let letters: Vec<Letter> = if alphabet <= 10 {
            text.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as Letter)
                        .ok_or_else(|| Error::InvalidArgument(format!("invalid letter `{c}`")))
                })
                .collect::<Result<_>>()?
        } else {
            text.split(',')
                .map(|part| {
                    part.trim()
                        .parse::<Letter>()
                        .map_err(|_| Error::InvalidArgument(format!("invalid letter `{part}`")))
                })
                .collect::<Result<_>>()?
        };
        for &l in &letters {
            if (l as usize) >= alphabet {
                return Err(Error::LetterOutOfAlphabet {
                    letter: l,
                    alphabet,
                });
            }
        }
        Ok(Word(letters))
    }
}

impl From<&[Letter]> for Word {
    fn from(letters: &[Letter]) -> Self {
        Word(letters.to_vec())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Best-effort rendering for diagnostics; assumes digit letters
        // unless some letter needs more than one digit.
        let alphabet = if self.0.iter().all(|&c| c < 10) { 10 } else { 256 };
        write!(f, "\"{}\"", self.render(alphabet))
    }
}

/// Per-letter occurrence counts of a word; component `ℓ` counts the
/// letter `ℓ`. Components sum to the word length.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParikhVector(Vec<u64>);

impl ParikhVector {
    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    /// Sum of the components, i.e. the length of the originating word.
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    /// Componentwise signed difference `self − other`.
    pub fn minus(&self, other: &ParikhVector) -> RelativeParikhVector {
        debug_assert_eq!(self.0.len(), other.0.len());
        RelativeParikhVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| a as i64 - b as i64)
                .collect(),
        )
    }
}

impl fmt::Display for ParikhVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Signed per-letter difference between two Parikh vectors of words of
/// equal length; components sum to 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelativeParikhVector(Vec<i64>);

impl RelativeParikhVector {
    pub fn new(deltas: Vec<i64>) -> Self {
        RelativeParikhVector(deltas)
    }

    pub fn zero(alphabet: usize) -> Self {
        RelativeParikhVector(vec![0; alphabet])
    }

    pub fn deltas(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }
}

impl fmt::Display for RelativeParikhVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

// Lets set lookups compare a running delta slice against stored vectors
// without allocating; slice order agrees with the derived vector order.
impl std::borrow::Borrow<[i64]> for RelativeParikhVector {
    fn borrow(&self) -> &[i64] {
        &self.0
    }
}

/// Parikh vector `Ψ(w)` of a word over the given alphabet.
pub fn parikh(w: &Word, alphabet: usize) -> ParikhVector {
    let mut counts = vec![0u64; alphabet];
    for &c in w.letters() {
        counts[c as usize] += 1;
    }
    ParikhVector(counts)
}

/// Relative Parikh vector `Ψ(w) − Ψ(reference)` for equally long words.
pub fn relative_parikh(w: &Word, reference: &Word, alphabet: usize) -> Result<RelativeParikhVector> {
    if w.len() != reference.len() {
        return Err(Error::LengthMismatch {
            left: w.len(),
            right: reference.len(),
        });
    }
    Ok(parikh(w, alphabet).minus(&parikh(reference, alphabet)))
}

/// The unique `y` with `x·y = v`; errors when `x` is not a prefix of `v`.
pub fn left_cancel(x: &Word, v: &Word) -> Result<Word> {
    if !v.starts_with(x) {
        return Err(Error::NotAPrefix {
            prefix: render_lossy(x),
            of: render_lossy(v),
        });
    }
    Ok(v.sub(x.len(), v.len()))
}

/// The unique `x` with `x·y = v`; errors when `y` is not a suffix of `v`.
pub fn right_cancel(v: &Word, y: &Word) -> Result<Word> {
    if !v.ends_with(y) {
        return Err(Error::NotASuffix {
            suffix: render_lossy(y),
            of: render_lossy(v),
        });
    }
    Ok(v.sub(0, v.len() - y.len()))
}

/// All distinct contiguous factors of `w` of length `n`. Empty for
/// `n > |w|`; the singleton `{ε}` for `n = 0`.
pub fn factors_of_length(w: &Word, n: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    if n == 0 {
        out.insert(Word::empty());
        return out;
    }
    if n > w.len() {
        return out;
    }
    for i in 0..=w.len() - n {
        out.insert(Word::from(&w.letters()[i..i + n]));
    }
    out
}

fn render_lossy(w: &Word) -> String {
    let alphabet = if w.letters().iter().all(|&c| c < 10) {
        10
    } else {
        256
    };
    w.render(alphabet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(text: &str) -> Word {
        Word::parse(text, 10).unwrap()
    }

    #[test]
    fn parikh_empty_word() {
        assert_eq!(parikh(&Word::empty(), 3).counts(), &[0, 0, 0]);
    }

    #[test]
    fn parikh_counts_occurrences() {
        // φ³(0) for the Tribonacci substitution.
        assert_eq!(parikh(&w("0102010"), 3).counts(), &[4, 2, 1]);
    }

    #[test]
    fn parikh_is_order_blind() {
        assert_eq!(parikh(&w("01"), 3), parikh(&w("10"), 3));
        assert_eq!(parikh(&w("01"), 3).counts(), &[1, 1, 0]);
    }

    #[test]
    fn relative_parikh_of_reference_is_zero() {
        let v = relative_parikh(&w("0102"), &w("0102"), 3).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn relative_parikh_examples() {
        let v = relative_parikh(&w("10201"), &w("01020"), 3).unwrap();
        assert_eq!(v.deltas(), &[-1, 1, 0]);
        let v = relative_parikh(&w("00"), &w("01"), 3).unwrap();
        assert_eq!(v.deltas(), &[1, -1, 0]);
    }

    #[test]
    fn relative_parikh_length_mismatch() {
        assert!(relative_parikh(&w("0"), &w("01"), 3).is_err());
    }

    #[test]
    fn left_cancel_examples() {
        assert_eq!(left_cancel(&Word::empty(), &w("0102")).unwrap(), w("0102"));
        assert_eq!(
            left_cancel(&w("0"), &w("01020100")).unwrap(),
            w("1020100")
        );
        assert!(left_cancel(&w("1"), &w("0102")).is_err());
    }

    #[test]
    fn right_cancel_examples() {
        assert_eq!(right_cancel(&w("0102"), &w("02")).unwrap(), w("01"));
        assert!(right_cancel(&w("0102"), &w("01")).is_err());
    }

    #[test]
    fn factors_of_length_zero_is_epsilon() {
        let f = factors_of_length(&w("0102"), 0);
        assert_eq!(f.len(), 1);
        assert!(f.contains(&Word::empty()));
    }

    #[test]
    fn factors_of_length_two() {
        let f = factors_of_length(&w("0102010"), 2);
        let expected: BTreeSet<Word> = ["01", "10", "02", "20"].iter().map(|s| w(s)).collect();
        assert_eq!(f, expected);
    }

    #[test]
    fn factors_longer_than_word() {
        assert!(factors_of_length(&w("01"), 3).is_empty());
    }

    #[test]
    fn render_small_and_large_alphabets() {
        assert_eq!(w("0102010").render(3), "0102010");
        let big = Word::from_letters(vec![0u8, 11, 3]);
        assert_eq!(big.render(12), "0,11,3");
        assert_eq!(Word::parse("0,11,3", 12).unwrap(), big);
    }

    proptest! {
        #[test]
        fn parikh_additive_under_concat(a in proptest::collection::vec(0u8..4, 0..40),
                                        b in proptest::collection::vec(0u8..4, 0..40)) {
            let (a, b) = (Word::from_letters(a), Word::from_letters(b));
            let joint = parikh(&a.concat(&b), 4);
            let split: Vec<u64> = parikh(&a, 4)
                .counts()
                .iter()
                .zip(parikh(&b, 4).counts())
                .map(|(x, y)| x + y)
                .collect();
            prop_assert_eq!(joint.counts(), &split[..]);
        }

        #[test]
        fn cancel_round_trips(x in proptest::collection::vec(0u8..4, 0..20),
                              y in proptest::collection::vec(0u8..4, 0..20)) {
            let (x, y) = (Word::from_letters(x), Word::from_letters(y));
            let v = x.concat(&y);
            prop_assert_eq!(left_cancel(&x, &v).unwrap(), y.clone());
            prop_assert_eq!(x.concat(&left_cancel(&x, &v).unwrap()), v.clone());
            prop_assert_eq!(right_cancel(&v, &y).unwrap(), x);
        }

        #[test]
        fn factors_have_length_and_occur(letters in proptest::collection::vec(0u8..3, 1..60),
                                         n in 0usize..12) {
            let word = Word::from_letters(letters);
            for factor in factors_of_length(&word, n) {
                prop_assert_eq!(factor.len(), n);
                let occurs = (0..=word.len().saturating_sub(n))
                    .any(|i| &word.letters()[i..i + n] == factor.letters());
                prop_assert!(n > word.len() || occurs);
            }
        }

        #[test]
        fn relative_deltas_sum_to_zero(a in proptest::collection::vec(0u8..4, 0..30),
                                       b in proptest::collection::vec(0u8..4, 0..30)) {
            let n = a.len().min(b.len());
            let (a, b) = (Word::from_letters(&a[..n]), Word::from_letters(&b[..n]));
            let v = relative_parikh(&a, &b, 4).unwrap();
            prop_assert_eq!(v.deltas().iter().sum::<i64>(), 0);
        }
    }
}
