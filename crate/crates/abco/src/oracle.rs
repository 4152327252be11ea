//! Ground-truth brute force: relative Parikh sets and `AC(n)` by sliding
//! a length-`n` window over the covering prefix, plus balance profiling.
//!
//! The oracle implements the definitions directly and is the arbiter in
//! every cross-check: a codec/oracle disagreement is always a bug in the
//! codec path.

use std::collections::BTreeSet;

use crate::codecomp::covering_len;
use crate::error::{Error, Result};
use crate::parry::{LengthTable, ParrySubstitution, PrefixStream};
use crate::words::RelativeParikhVector;
use crate::Limits;

/// Per-letter maxima of `|count_ℓ(w) − count_ℓ(u_[n])|` over all scanned
/// `n` and all factors `w` of length `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceProfile {
    pub per_letter_max: Vec<u64>,
    pub n_max: usize,
}

impl BalanceProfile {
    /// The balance constant witnessed so far: the largest entry.
    pub fn max_imbalance(&self) -> u64 {
        self.per_letter_max.iter().copied().max().unwrap_or(0)
    }
}

/// Brute-force evaluator holding a growable fixed-point prefix, so that
/// range scans share the generated letters.
pub struct Oracle<'a> {
    subst: &'a ParrySubstitution,
    limits: Limits,
    stream: PrefixStream,
    table: LengthTable,
}

impl<'a> Oracle<'a> {
    pub fn new(subst: &'a ParrySubstitution, limits: Limits) -> Self {
        Oracle {
            subst,
            limits,
            stream: PrefixStream::new(subst.clone()),
            table: LengthTable::new(subst),
        }
    }

    /// Length of the covering prefix `u_[B(n)]`, capped.
    pub fn covering_len(&mut self, n: usize) -> Result<usize> {
        covering_len(n, self.subst, &mut self.table, &self.limits)
    }

    /// All relative Parikh vectors of length-`n` factors.
    pub fn rel_parikh_set(&mut self, n: usize) -> Result<BTreeSet<RelativeParikhVector>> {
        let scan = match n {
            0 => 0,
            _ => self.covering_len(n)?,
        };
        self.rel_parikh_set_over(n, scan)
    }

    /// Same, scanning a prefix of the given length instead of `B(n)`.
    /// Scanning beyond `B(n)` must never add vectors; tests rely on that.
    pub fn rel_parikh_set_over(
        &mut self,
        n: usize,
        scan_len: usize,
    ) -> Result<BTreeSet<RelativeParikhVector>> {
        let alphabet = self.subst.alphabet_size();
        let mut out = BTreeSet::new();
        out.insert(RelativeParikhVector::zero(alphabet));
        if n == 0 {
            return Ok(out);
        }
        if scan_len > self.limits.max_letters as usize {
            return Err(Error::ResourceExceeded {
                needed: scan_len.into(),
                cap: self.limits.max_letters,
            });
        }
        self.stream.extend_to(scan_len);
        let prefix = &self.stream.letters()[..scan_len];
        // The first window is u_[n] itself, so the running delta starts
        // at zero and two updates per slide keep it exact.
        let mut delta = vec![0i64; alphabet];
        for i in n..scan_len {
            delta[prefix[i] as usize] += 1;
            delta[prefix[i - n] as usize] -= 1;
            if !out.contains(delta.as_slice()) {
                out.insert(RelativeParikhVector::new(delta.clone()));
            }
        }
        Ok(out)
    }

    /// `AC(n)` as the cardinality of the relative Parikh set.
    pub fn ac(&mut self, n: usize) -> Result<u64> {
        Ok(self.rel_parikh_set(n)?.len() as u64)
    }

    /// Per-letter maxima of `|delta|` over all `n ≤ n_max`.
    pub fn balance_profile(&mut self, n_max: usize) -> Result<BalanceProfile> {
        let alphabet = self.subst.alphabet_size();
        let mut maxima = vec![0u64; alphabet];
        for n in 1..=n_max {
            let scan = self.covering_len(n)?;
            self.stream.extend_to(scan);
            let prefix = &self.stream.letters()[..scan];
            let mut delta = vec![0i64; alphabet];
            for i in n..scan {
                delta[prefix[i] as usize] += 1;
                delta[prefix[i - n] as usize] -= 1;
                for (slot, &d) in maxima.iter_mut().zip(&delta) {
                    *slot = (*slot).max(d.unsigned_abs());
                }
            }
        }
        Ok(BalanceProfile {
            per_letter_max: maxima,
            n_max,
        })
    }
}

/// One-shot variant of [`Oracle::rel_parikh_set`].
pub fn brute_rel_parikh_set(
    n: usize,
    subst: &ParrySubstitution,
    limits: &Limits,
) -> Result<BTreeSet<RelativeParikhVector>> {
    Oracle::new(subst, *limits).rel_parikh_set(n)
}

/// One-shot variant of [`Oracle::ac`].
pub fn brute_ac(n: usize, subst: &ParrySubstitution, limits: &Limits) -> Result<u64> {
    Oracle::new(subst, *limits).ac(n)
}

/// One-shot variant of [`Oracle::balance_profile`].
pub fn balance_profile(
    subst: &ParrySubstitution,
    n_max: usize,
    limits: &Limits,
) -> Result<BalanceProfile> {
    Oracle::new(subst, *limits).balance_profile(n_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trib() -> ParrySubstitution {
        ParrySubstitution::tribonacci()
    }

    fn limits() -> Limits {
        Limits::default()
    }

    fn rel(v: [i64; 3]) -> RelativeParikhVector {
        RelativeParikhVector::new(v.to_vec())
    }

    #[test]
    fn n_zero_gives_only_the_zero_vector() {
        let set = brute_rel_parikh_set(0, &trib(), &limits()).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.contains(&RelativeParikhVector::zero(3)));
    }

    #[test]
    fn tribonacci_n5_set() {
        let set = brute_rel_parikh_set(5, &trib(), &limits()).unwrap();
        let expected: BTreeSet<_> = [[-1, 1, 0], [0, 0, 0], [0, 1, -1], [-1, 0, 1]]
            .into_iter()
            .map(rel)
            .collect();
        assert_eq!(set, expected);
    }

    #[test]
    fn small_tribonacci_ac_values() {
        let subst = trib();
        let mut oracle = Oracle::new(&subst, limits());
        assert_eq!(oracle.ac(1).unwrap(), 3);
        assert_eq!(oracle.ac(2).unwrap(), 3);
        assert_eq!(oracle.ac(5).unwrap(), 4);
    }

    #[test]
    fn resource_cap_is_enforced() {
        let tight = Limits::with_max_letters(10_000);
        let err = brute_ac(9_000, &trib(), &tight);
        assert!(matches!(err, Err(Error::ResourceExceeded { .. })));
    }

    #[test]
    fn scanning_longer_prefixes_adds_nothing() {
        let subst = trib();
        let mut oracle = Oracle::new(&subst, limits());
        for n in 1..=200usize {
            let b = oracle.covering_len(n).unwrap();
            let base = oracle.rel_parikh_set(n).unwrap();
            assert_eq!(oracle.rel_parikh_set_over(n, 2 * b).unwrap(), base);
            assert_eq!(oracle.rel_parikh_set_over(n, 3 * b).unwrap(), base);
        }
    }

    #[test]
    fn balance_profile_tribonacci() {
        // The Tribonacci word is known to be 2-balanced; the profile over
        // a healthy scan range must witness nothing larger.
        let profile = balance_profile(&trib(), 500, &limits()).unwrap();
        assert_eq!(profile.n_max, 500);
        assert!(profile.max_imbalance() <= 2);
        // Single letters differ from u_[1] = 0 by at most one per component.
        let short = balance_profile(&trib(), 1, &limits()).unwrap();
        assert!(short.per_letter_max.iter().all(|&m| m <= 1));
    }

    #[test]
    fn profile_bounds_every_emitted_delta() {
        let subst = trib();
        let mut oracle = Oracle::new(&subst, limits());
        let profile = oracle.balance_profile(60).unwrap();
        for n in 1..=60 {
            for v in oracle.rel_parikh_set(n).unwrap() {
                for (d, &m) in v.deltas().iter().zip(&profile.per_letter_max) {
                    assert!(d.unsigned_abs() <= m);
                }
            }
        }
    }
}
