//! The abelian co-decomposition engine.
//!
//! For a Parry word `u` and `n ≥ 1`, the covering prefix
//! `u_[B(n)] = φ^{k+R}(0) u_[n]` contains every length-`n` factor and
//! begins and ends with `u_[n]`. Splitting the abelian-equivalent pair
//! `(u_[B(n)] u_[n]^{-1}, u_[n]^{-1} u_[B(n)])` into aligned block pairs
//! with equal Parikh vectors gives a Z-set whose block prefixes generate
//! the whole set of relative Parikh vectors, hence `AC(n)`.
//!
//! The Z-set is never computed from materialized rows for large `n`.
//! Instead it is driven digit by digit through the normal
//! F-representation of `n`: a base decomposition for the leading digit,
//! then one rewrite step per remaining digit. Each step maps a pair
//! `(z, z̃)` to the decomposition of `(φ(z), 0^{-d} φ(z̃) 0^d)`, which is
//! sound only when `φ(z̃)` begins with `0^d`; that hypothesis is checked
//! explicitly for every pair, and a failing step is reported as
//! inapplicable rather than silently accepted, so callers can fall back
//! to the brute-force oracle.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::numeration::{check_normal, to_normal_frep_with, FDigits};
use crate::oracle::Oracle;
use crate::parry::{
    apply_power, fixed_point_prefix, image_begins_with_zeros, LengthTable, ParrySubstitution,
    SubstitutionClass,
};
use crate::words::{left_cancel, parikh, RelativeParikhVector, Word};
use crate::Limits;

/// An aligned pair of non-empty blocks with equal Parikh vectors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockPair {
    z: Word,
    z_tilde: Word,
}

impl BlockPair {
    /// Build a pair, checking non-emptiness and Parikh equality.
    pub fn new(z: Word, z_tilde: Word, alphabet: usize) -> Result<Self> {
        if z.is_empty() || z_tilde.is_empty() {
            return Err(Error::InvalidArgument("blocks must be non-empty".into()));
        }
        if parikh(&z, alphabet) != parikh(&z_tilde, alphabet) {
            return Err(Error::ParikhMismatch);
        }
        Ok(BlockPair { z, z_tilde })
    }

    pub fn z(&self) -> &Word {
        &self.z
    }

    pub fn z_tilde(&self) -> &Word {
        &self.z_tilde
    }
}

/// An ordered abelian co-decomposition of a pair of rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoDecomposition {
    pairs: Vec<BlockPair>,
}

impl CoDecomposition {
    /// The aligned blocks, in row order.
    pub fn ordered_pairs(&self) -> &[BlockPair] {
        &self.pairs
    }

    /// Deduplicated set form, ordered by the letter sequences of (z, z̃).
    pub fn canonical_set(&self) -> BTreeSet<BlockPair> {
        self.pairs.iter().cloned().collect()
    }

    pub fn into_pairs(self) -> Vec<BlockPair> {
        self.pairs
    }

    /// Reconstruct the two input rows by concatenation.
    pub fn rows(&self) -> (Word, Word) {
        let mut top = Word::empty();
        let mut bottom = Word::empty();
        for pair in &self.pairs {
            top = top.concat(&pair.z);
            bottom = bottom.concat(&pair.z_tilde);
        }
        (top, bottom)
    }
}

/// A canonical Z-set together with the digit sequence it was computed for.
#[derive(Clone, Debug)]
pub struct ZSet {
    pairs: BTreeSet<BlockPair>,
    provenance: Vec<u32>,
}

impl ZSet {
    pub fn pairs(&self) -> &BTreeSet<BlockPair> {
        &self.pairs
    }

    /// The digit sequence (most significant first) this set was derived from.
    pub fn provenance(&self) -> &[u32] {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Set equality, ignoring provenance. This is the equality that
    /// stabilization detection needs.
    pub fn same_pairs(&self, other: &ZSet) -> bool {
        self.pairs == other.pairs
    }
}

/// The exponent `R` such that `φ^R(0)0` is a prefix of `u` containing
/// every factor `0t0` with `|t|_0 = 0`.
pub fn covering_exponent(subst: &ParrySubstitution) -> usize {
    let alpha = subst.exponents();
    match subst.class() {
        SubstitutionClass::Simple { m } => {
            if alpha[0] >= 2 {
                m - 1
            } else {
                let first = (1..m)
                    .find(|&l| alpha[l] >= 1)
                    .expect("validated simple substitution has a positive exponent past 0");
                m + first - 1
            }
        }
        SubstitutionClass::NonSimple { m, p } => {
            let first = (m..m + p)
                .find(|&l| alpha[l] >= 1)
                .expect("validated non-simple substitution has a positive cycle exponent");
            if alpha[0] >= 2 {
                first + p
            } else {
                first + m + p - 1
            }
        }
    }
}

/// Length `B(n) = F_{k+R} + n` of the covering prefix, `k` minimal with
/// `n ≤ F_k`, checked against the cap.
pub(crate) fn covering_len(
    n: usize,
    subst: &ParrySubstitution,
    table: &mut LengthTable,
    limits: &Limits,
) -> Result<usize> {
    let k = table.level_covering(&BigUint::from(n));
    let r = covering_exponent(subst);
    let needed = table.f(k + r) + BigUint::from(n);
    if needed > BigUint::from(limits.max_letters) {
        return Err(Error::ResourceExceeded {
            needed,
            cap: limits.max_letters,
        });
    }
    Ok(needed.to_usize().expect("under cap"))
}

/// The covering prefix `u_[B(n)] = φ^{k+R}(0) u_[n]`, materialized.
pub fn covering_prefix(n: usize, subst: &ParrySubstitution, limits: &Limits) -> Result<Word> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut table = LengthTable::new(subst);
    let len = covering_len(n, subst, &mut table, limits)?;
    // φ^{k+R}(0) u_[n] is itself a prefix of the fixed point.
    Ok(fixed_point_prefix(subst, len))
}

/// Greedy finest abelian co-decomposition of two abelian-equivalent rows.
///
/// Cuts at the earliest position where the running Parikh vectors agree
/// and the finished bottom block satisfies `admissible`; this maximizes
/// the block count among admissible decompositions. If the forced final
/// block is inadmissible it is merged into its (admissible) left
/// neighbour; a single inadmissible block covering both rows is the last
/// resort, since every abelian-equivalent pair decomposes trivially.
pub fn co_decompose<F>(
    v: &Word,
    w: &Word,
    alphabet: usize,
    admissible: F,
) -> Result<CoDecomposition>
where
    F: Fn(&Word) -> bool,
{
    if v.len() != w.len() || parikh(v, alphabet) != parikh(w, alphabet) {
        return Err(Error::ParikhMismatch);
    }
    let n = v.len();
    let mut pairs: Vec<BlockPair> = Vec::new();
    let top = v.letters();
    let bottom = w.letters();
    let mut delta = vec![0i64; alphabet];
    let mut nonzero = 0usize;
    let mut start = 0usize;
    for i in 0..n {
        for (letter, sign) in [(top[i], 1i64), (bottom[i], -1i64)] {
            let slot = &mut delta[letter as usize];
            if *slot == 0 {
                nonzero += 1;
            }
            *slot += sign;
            if *slot == 0 {
                nonzero -= 1;
            }
        }
        if nonzero != 0 {
            continue;
        }
        let end = i + 1;
        let block_bottom = Word::from(&bottom[start..end]);
        if end == n {
            let block_top = Word::from(&top[start..end]);
            if admissible(&block_bottom) || pairs.is_empty() {
                pairs.push(BlockPair {
                    z: block_top,
                    z_tilde: block_bottom,
                });
            } else {
                // The previous block passed the prefix predicate, so the
                // merged block does too.
                let prev = pairs.pop().expect("checked non-empty");
                pairs.push(BlockPair {
                    z: prev.z.concat(&block_top),
                    z_tilde: prev.z_tilde.concat(&block_bottom),
                });
            }
        } else if admissible(&block_bottom) {
            pairs.push(BlockPair {
                z: Word::from(&top[start..end]),
                z_tilde: block_bottom,
            });
            start = end;
        }
    }
    Ok(CoDecomposition { pairs })
}

/// The block-choice predicate of the digit recursion: cut only where
/// `φ(z̃)` begins with `0^{α_0}`, so that any later digit step applies.
fn step_admissible<'a>(subst: &'a ParrySubstitution) -> impl Fn(&Word) -> bool + 'a {
    let zeros = subst.alpha0();
    move |block: &Word| image_begins_with_zeros(subst, block.letters(), zeros)
}

fn check_digit(d: u32, subst: &ParrySubstitution) -> Result<()> {
    if d > subst.alpha0() {
        return Err(Error::InvalidDigits(format!(
            "digit {d} exceeds alpha_0 = {}",
            subst.alpha0()
        )));
    }
    Ok(())
}

/// Base of the digit recursion: the Z-set for a single digit `d`, i.e.
/// the decomposition of `(φ^{1+R}(0), 0^{-d} φ^{1+R}(0) 0^d)`.
pub fn z_base(d: u32, subst: &ParrySubstitution, limits: &Limits) -> Result<ZSet> {
    check_digit(d, subst)?;
    let r = covering_exponent(subst);
    let row_top = apply_power(subst, r + 1, &Word::letter(0), limits)?;
    // φ^{1+R}(0) begins with 0^{α_0} ⊒ 0^d, so the conjugation is defined.
    let zeros = Word::zeros(d as usize);
    let row_bottom = left_cancel(&zeros, &row_top)?.concat(&zeros);
    let dec = co_decompose(&row_top, &row_bottom, subst.alphabet_size(), step_admissible(subst))?;
    Ok(ZSet {
        pairs: dec.canonical_set(),
        provenance: vec![d],
    })
}

/// One digit step: map every pair `(z, z̃)` to the decomposition of
/// `(φ(z), 0^{-d} φ(z̃) 0^d)` and take the union.
///
/// The hypothesis that `φ(z̃)` begins with `0^d` is verified for every
/// pair; if it fails even for the whole-pair block the step is
/// inapplicable and the caller must fall back to the oracle.
pub fn z_step(prev: &ZSet, d: u32, subst: &ParrySubstitution, limits: &Limits) -> Result<ZSet> {
    check_digit(d, subst)?;
    let alphabet = subst.alphabet_size();
    let admissible = step_admissible(subst);
    let zeros = Word::zeros(d as usize);
    let mut pairs = BTreeSet::new();
    // One step is one operation against the cap: block growth compounds
    // across steps when a substitution resists cutting, and the budget is
    // what turns that into a clean resource error instead of a crawl.
    let mut step_letters = 0u64;
    for pair in &prev.pairs {
        let image_top = apply_power(subst, 1, pair.z(), limits)?;
        let image_bottom = apply_power(subst, 1, pair.z_tilde(), limits)?;
        step_letters += (image_top.len() + image_bottom.len()) as u64;
        if step_letters > limits.max_letters {
            return Err(Error::ResourceExceeded {
                needed: BigUint::from(step_letters),
                cap: limits.max_letters,
            });
        }
        if !image_bottom.starts_with(&zeros) {
            return Err(Error::StepInapplicable {
                z_tilde: pair.z_tilde().render(alphabet),
                digit: d,
            });
        }
        let row_bottom = left_cancel(&zeros, &image_bottom)?.concat(&zeros);
        let dec = co_decompose(&image_top, &row_bottom, alphabet, &admissible)?;
        pairs.extend(dec.into_pairs());
    }
    let mut provenance = prev.provenance.clone();
    provenance.push(d);
    Ok(ZSet { pairs, provenance })
}

/// The Z-set of `n`, driven by the digits of `⟨n⟩_F`.
pub fn z_set(n: &BigUint, subst: &ParrySubstitution, limits: &Limits) -> Result<ZSet> {
    if *n == BigUint::ZERO {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut table = LengthTable::new(subst);
    let digits = to_normal_frep_with(n, subst, &mut table);
    fold_digits(&digits, subst, limits)
}

/// The Z-set for an explicit digit sequence, which must be a normal
/// F-representation (checked by round trip).
pub fn z_set_from_digits(
    digits: &FDigits,
    subst: &ParrySubstitution,
    limits: &Limits,
) -> Result<ZSet> {
    if digits.is_zero() {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    check_normal(digits, subst)?;
    fold_digits(digits, subst, limits)
}

fn fold_digits(digits: &FDigits, subst: &ParrySubstitution, limits: &Limits) -> Result<ZSet> {
    let all = digits.digits();
    let mut z = z_base(all[0], subst, limits)?;
    for &d in &all[1..] {
        z = z_step(&z, d, subst, limits)?;
    }
    Ok(z)
}

/// All relative Parikh vectors generated by a Z-set: for each pair,
/// `Ψ(s) − Ψ(r)` over equal-length prefixes `r` of `z` and `s` of `z̃`,
/// the empty and full prefixes included.
pub fn rel_parikh_set(zset: &ZSet, subst: &ParrySubstitution) -> BTreeSet<RelativeParikhVector> {
    let alphabet = subst.alphabet_size();
    let mut out = BTreeSet::new();
    out.insert(RelativeParikhVector::zero(alphabet));
    for pair in &zset.pairs {
        let top = pair.z().letters();
        let bottom = pair.z_tilde().letters();
        let mut delta = vec![0i64; alphabet];
        for j in 0..top.len() {
            delta[bottom[j] as usize] += 1;
            delta[top[j] as usize] -= 1;
            let v = RelativeParikhVector::new(delta.clone());
            out.insert(v);
        }
    }
    out
}

/// Which computation path `abelian_complexity` should take.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Codec,
    Oracle,
    Both,
}

/// Result of an abelian-complexity query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcOutcome {
    pub value: u64,
    pub method: Method,
    /// True when the codec path hit an inapplicable step and the value
    /// was produced by the oracle instead.
    pub oracle_fallback: bool,
}

/// `AC(n)` for the fixed point of `subst`.
///
/// `Codec` counts the relative Parikh vectors generated by the Z-set of
/// `n`; on an inapplicable step it falls back to the oracle and flags
/// that. `Oracle` enumerates factors of the covering prefix. `Both` runs
/// the two and errors on disagreement.
pub fn abelian_complexity(
    n: &BigUint,
    subst: &ParrySubstitution,
    method: Method,
    limits: &Limits,
) -> Result<AcOutcome> {
    if *n == BigUint::ZERO {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let run_oracle = |limits: &Limits| -> Result<u64> {
        let n = n.to_usize().ok_or_else(|| Error::ResourceExceeded {
            needed: n.clone(),
            cap: limits.max_letters,
        })?;
        Oracle::new(subst, *limits).ac(n)
    };
    match method {
        Method::Oracle => Ok(AcOutcome {
            value: run_oracle(limits)?,
            method,
            oracle_fallback: false,
        }),
        Method::Codec => match z_set(n, subst, limits) {
            Ok(z) => Ok(AcOutcome {
                value: rel_parikh_set(&z, subst).len() as u64,
                method,
                oracle_fallback: false,
            }),
            Err(Error::StepInapplicable { .. }) => Ok(AcOutcome {
                value: run_oracle(limits)?,
                method,
                oracle_fallback: true,
            }),
            Err(e) => Err(e),
        },
        Method::Both => {
            let codec = abelian_complexity(n, subst, Method::Codec, limits)?;
            let oracle = run_oracle(limits)?;
            if codec.value != oracle {
                return Err(Error::MethodDisagreement {
                    n: n.to_string(),
                    codec: codec.value,
                    oracle,
                });
            }
            Ok(AcOutcome {
                value: oracle,
                method,
                oracle_fallback: codec.oracle_fallback,
            })
        }
    }
}

/// Outcome of a stabilization probe along the pattern `(block^i, tail)`.
#[derive(Clone, Debug)]
pub struct StabilizationReport {
    pub block: Vec<u32>,
    pub tail: Vec<u32>,
    pub i_max: u32,
    /// First `i₀` with equal Z-sets after `i₀` and `i₀ + 1` block copies,
    /// if one was found within the bound.
    pub stabilized_at: Option<u32>,
    /// The constant `AC(n_i)` for `i ≥ i₀`.
    pub stable_ac: Option<u64>,
    /// The constant relative-Parikh set for `i ≥ i₀`.
    pub stable_rel_set: Option<BTreeSet<RelativeParikhVector>>,
    /// False when some digit step was inapplicable; the Z-recursion then
    /// proves nothing and only the oracle can answer per-`n` queries.
    pub codec_applicable: bool,
    pub note: Option<String>,
}

impl StabilizationReport {
    /// True when the probe certifies that the stable AC value is attained
    /// infinitely often.
    pub fn certified(&self) -> bool {
        self.codec_applicable && self.stabilized_at.is_some()
    }
}

/// Iterate the Z-recursion over successive copies of `block`, looking for
/// a fixed point of the canonical Z-set, then apply the `tail` digits.
///
/// A detected fixed point means the full digit runs for consecutive `i`
/// coincide (the recursion is deterministic and every step verified its
/// hypothesis), so the relative-Parikh set of `(block^i, tail)` is the
/// same for all `i ≥ i₀`: the reported AC value is attained infinitely
/// often. An inapplicable step yields a report with
/// `codec_applicable = false` and no such conclusion.
pub fn detect_stabilization(
    block: &[u32],
    tail: &[u32],
    i_max: u32,
    subst: &ParrySubstitution,
    limits: &Limits,
) -> Result<StabilizationReport> {
    if block.is_empty() || block.iter().all(|&d| d == 0) {
        return Err(Error::InvalidDigits(
            "block must contain a nonzero digit".into(),
        ));
    }
    if i_max == 0 {
        return Err(Error::InvalidArgument("i_max must be at least 1".into()));
    }
    for &d in block.iter().chain(tail) {
        check_digit(d, subst)?;
    }

    let report_inapplicable = |err: Error| StabilizationReport {
        block: block.to_vec(),
        tail: tail.to_vec(),
        i_max,
        stabilized_at: None,
        stable_ac: None,
        stable_rel_set: None,
        codec_applicable: false,
        note: Some(err.to_string()),
    };

    // The pattern must stay a normal representation as copies accumulate.
    let check_pattern = |i: usize| -> Result<()> {
        let digits = FDigits::from_pattern(block, i, tail);
        check_normal(&digits, subst).map_err(|e| {
            Error::InvalidDigits(format!("pattern (block^{i}, tail) is not normal: {e}"))
        })
    };

    check_pattern(1)?;
    let mut current = match fold_digits(&FDigits::new(block.to_vec()), subst, limits) {
        Ok(z) => z,
        Err(e @ Error::StepInapplicable { .. }) => return Ok(report_inapplicable(e)),
        Err(e) => return Err(e),
    };
    let mut stabilized_at = None;
    for i in 1..i_max {
        check_pattern(i as usize + 1)?;
        let mut next = current.clone();
        for &d in block {
            next = match z_step(&next, d, subst, limits) {
                Ok(z) => z,
                Err(e @ Error::StepInapplicable { .. }) => return Ok(report_inapplicable(e)),
                Err(e) => return Err(e),
            };
        }
        if next.same_pairs(&current) {
            stabilized_at = Some(i);
            break;
        }
        current = next;
    }

    let (stable_ac, stable_rel_set) = if stabilized_at.is_some() {
        let mut stable = current;
        for &d in tail {
            stable = match z_step(&stable, d, subst, limits) {
                Ok(z) => z,
                Err(e @ Error::StepInapplicable { .. }) => return Ok(report_inapplicable(e)),
                Err(e) => return Err(e),
            };
        }
        let rel = rel_parikh_set(&stable, subst);
        (Some(rel.len() as u64), Some(rel))
    } else {
        (None, None)
    };

    Ok(StabilizationReport {
        block: block.to_vec(),
        tail: tail.to_vec(),
        i_max,
        stabilized_at,
        stable_ac,
        stable_rel_set,
        codec_applicable: true,
        note: None,
    })
}
