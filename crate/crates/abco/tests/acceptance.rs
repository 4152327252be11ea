//! Acceptance suite: one test per criterion. Each prints a
//! `ACCEPTANCE <id>: PASS` line with its runtime and fails loudly if an
//! expected value or a runtime budget is missed.
//!
//! Run with `cargo test -p abco --test acceptance -- --nocapture`.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use abco::codecomp::{
    abelian_complexity, co_decompose, covering_exponent, covering_prefix, rel_parikh_set, z_base,
    z_set, z_step, AcOutcome, BlockPair, Method, ZSet,
};
use abco::numeration::{
    frep_value_with, prefix_from_frep, to_normal_frep_with, FDigits,
};
use abco::oracle::Oracle;
use abco::parry::{
    apply_morphism, apply_power, fixed_point_prefix, LengthTable,
    ParrySubstitution,
};
use abco::words::{factors_of_length, left_cancel, parikh, right_cancel, RelativeParikhVector, Word};
use abco::Limits;

fn trib() -> ParrySubstitution {
    ParrySubstitution::tribonacci()
}

/// The four test substitutions: Tribonacci, a simple one with α_0 ≥ 2,
/// a simple one with α_0 = 1 and gaps, and the non-simple u^(2).
fn test_substitutions() -> Vec<(&'static str, ParrySubstitution)> {
    vec![
        ("tribonacci", trib()),
        ("simple(2,1,1)", ParrySubstitution::simple(&[2, 1, 1]).unwrap()),
        (
            "simple(1,0,0,1)",
            ParrySubstitution::simple(&[1, 0, 0, 1]).unwrap(),
        ),
        (
            "nonsimple(2,0,1)",
            ParrySubstitution::non_simple(1, 2, &[2, 0, 1]).unwrap(),
        ),
    ]
}

fn limits() -> Limits {
    Limits::default()
}

fn w(text: &str) -> Word {
    Word::parse(text, 10).unwrap()
}

fn pair_set(pairs: &[(&str, &str)]) -> BTreeSet<BlockPair> {
    pairs
        .iter()
        .map(|(z, zt)| BlockPair::new(w(z), w(zt), 3).unwrap())
        .collect()
}

fn rel_set(vectors: &[[i64; 3]]) -> BTreeSet<RelativeParikhVector> {
    vectors
        .iter()
        .map(|v| RelativeParikhVector::new(v.to_vec()))
        .collect()
}

fn family_n(block: &[u32], reps: usize, tail: &[u32], subst: &ParrySubstitution) -> BigUint {
    let mut table = LengthTable::new(subst);
    frep_value_with(&FDigits::from_pattern(block, reps, tail), subst, &mut table).unwrap()
}

fn codec_ac(n: &BigUint, subst: &ParrySubstitution) -> AcOutcome {
    abelian_complexity(n, subst, Method::Codec, &limits()).unwrap()
}

fn finish(id: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    println!("ACCEPTANCE {id}: PASS ({elapsed:.2?})");
    assert!(
        elapsed < budget,
        "{id} exceeded its runtime budget: {elapsed:.2?} >= {budget:.2?}"
    );
}

#[test]
fn criterion_01_golden_z_sets() {
    let start = Instant::now();
    let t = trib();
    let lim = limits();

    let z1 = z_set(&BigUint::from(1u8), &t, &lim).unwrap();
    assert_eq!(
        *z1.pairs(),
        pair_set(&[("01", "10"), ("02", "20"), ("0", "0")])
    );

    let z5 = z_set(&BigUint::from(5u8), &t, &lim).unwrap();
    assert_eq!(
        *z5.pairs(),
        pair_set(&[
            ("01", "10"),
            ("0", "0"),
            ("201", "102"),
            ("0201", "1020"),
            ("02", "20"),
        ])
    );

    let z18 = z_set(&BigUint::from(18u8), &t, &lim).unwrap();
    assert_eq!(
        *z18.pairs(),
        pair_set(&[
            ("01", "10"),
            ("0", "0"),
            ("201", "102"),
            ("0201", "1020"),
            ("02", "20"),
            ("1", "1"),
            ("2", "2"),
        ])
    );

    finish("01 golden-z-sets", start, Duration::from_secs(1));
}

#[test]
fn criterion_02_value_four_family() {
    let start = Instant::now();
    let t = trib();
    let lim = limits();
    let mut oracle = Oracle::new(&t, lim);
    for i in 1..=12 {
        let n = family_n(&[1, 0], i, &[1], &t);
        let outcome = codec_ac(&n, &t);
        assert_eq!(outcome.value, 4, "AC(n_{i}) with n = {n}");
        assert!(!outcome.oracle_fallback);
        if i <= 5 {
            let n_small = usize::try_from(&n).unwrap();
            assert_eq!(oracle.ac(n_small).unwrap(), 4, "oracle at n_{i} = {n}");
        }
    }
    assert_eq!(family_n(&[1, 0], 5, &[1], &t), BigUint::from(715u32));
    finish("02 value-4-family", start, Duration::from_secs(10));
}

#[test]
fn criterion_03_value_five_family() {
    let start = Instant::now();
    let t = trib();
    let lim = limits();
    let mut oracle = Oracle::new(&t, lim);
    for i in 2..=8 {
        let n = family_n(&[1, 0, 0, 0], i, &[1], &t);
        let outcome = codec_ac(&n, &t);
        assert_eq!(outcome.value, 5, "AC(N_{i}) with N = {n}");
        assert!(!outcome.oracle_fallback);
    }
    assert_eq!(family_n(&[1, 0, 0, 0], 2, &[1], &t), BigUint::from(163u32));
    assert_eq!(family_n(&[1, 0, 0, 0], 3, &[1], &t), BigUint::from(1868u32));
    assert_eq!(oracle.ac(163).unwrap(), 5);
    assert_eq!(oracle.ac(1868).unwrap(), 5);
    finish("03 value-5-family", start, Duration::from_secs(30));
}

#[test]
fn criterion_04_value_six_family() {
    let start = Instant::now();
    let t = trib();
    let lim = limits();
    for i in 3..=8 {
        let n = family_n(&[1, 0, 0, 0], i, &[0], &t);
        let outcome = codec_ac(&n, &t);
        assert_eq!(outcome.value, 6, "AC(M_{i}) with M = {n}");
        assert!(!outcome.oracle_fallback);
    }
    let m3 = family_n(&[1, 0, 0, 0], 3, &[0], &t);
    assert_eq!(m3, BigUint::from(1867u32));
    assert_eq!(Oracle::new(&t, lim).ac(1867).unwrap(), 6);

    let z = z_set(&m3, &t, &lim).unwrap();
    assert_eq!(
        rel_parikh_set(&z, &t),
        rel_set(&[
            [0, 0, 0],
            [0, -1, 1],
            [1, -1, 0],
            [1, 0, -1],
            [0, 1, -1],
            [-1, 0, 1],
        ])
    );
    finish("04 value-6-family", start, Duration::from_secs(30));
}

#[test]
fn criterion_05_tribonacci_range_bound() {
    let start = Instant::now();
    let t = trib();
    let mut oracle = Oracle::new(&t, limits());
    for n in 1..=2000usize {
        let ac = oracle.ac(n).unwrap();
        assert!((3..=7).contains(&ac), "AC({n}) = {ac} out of range");
    }
    finish("05 range-bound", start, Duration::from_secs(60));
}

#[test]
fn criterion_06_oracle_equivalence_sweep() {
    let start = Instant::now();
    let lim = limits();
    for (label, subst) in test_substitutions() {
        let mut oracle = Oracle::new(&subst, lim);
        let mut fallbacks = 0usize;
        for n in 1..=300usize {
            let codec = codec_ac(&BigUint::from(n), &subst);
            if codec.oracle_fallback {
                fallbacks += 1;
            }
            let brute = oracle.ac(n).unwrap();
            assert_eq!(codec.value, brute, "{label}: AC({n})");
        }
        println!("  {label}: {fallbacks} fallbacks in n = 1..=300");
        if label == "tribonacci" {
            assert_eq!(fallbacks, 0, "tribonacci must not fall back");
        }
    }
    finish("06 oracle-equivalence", start, Duration::from_secs(120));
}

#[test]
fn criterion_07_numeration_round_trips() {
    let start = Instant::now();
    let lim = limits();
    for (label, subst) in test_substitutions() {
        let mut table = LengthTable::new(&subst);
        for n in 0..=100_000u64 {
            let n = BigUint::from(n);
            let digits = to_normal_frep_with(&n, &subst, &mut table);
            assert_eq!(
                frep_value_with(&digits, &subst, &mut table).unwrap(),
                n,
                "{label}: round trip"
            );
        }
        let prefix = fixed_point_prefix(&subst, 10_000);
        for n in 0..=10_000usize {
            let digits = to_normal_frep_with(&BigUint::from(n), &subst, &mut table);
            let built = prefix_from_frep(&digits, &subst, &lim).unwrap();
            assert_eq!(
                built.letters(),
                &prefix.letters()[..n],
                "{label}: prefix from digits at n = {n}"
            );
        }
    }
    finish("07 numeration-round-trips", start, Duration::from_secs(30));
}

#[test]
fn criterion_08_covering_prefix_soundness() {
    let start = Instant::now();
    let lim = limits();
    for (label, subst) in test_substitutions() {
        for n in 1..=200usize {
            let cover = covering_prefix(n, &subst, &lim).unwrap();
            let longer = fixed_point_prefix(&subst, 3 * cover.len());
            assert_eq!(
                factors_of_length(&cover, n),
                factors_of_length(&longer, n),
                "{label}: missed factors at n = {n}"
            );
        }
    }
    finish("08 covering-soundness", start, Duration::from_secs(60));
}

#[test]
fn criterion_09_non_simple_smoke() {
    let start = Instant::now();
    let u2 = ParrySubstitution::non_simple(1, 2, &[2, 0, 1]).unwrap();
    let mut oracle = Oracle::new(&u2, limits());
    for n in 1..=1000usize {
        let ac = oracle.ac(n).unwrap();
        assert!((3..=7).contains(&ac), "AC({n}) = {ac} out of range");
    }
    finish("09 non-simple-smoke", start, Duration::from_secs(60));
}

/// One Prop-5.1 application with k = 2 and ⟨q⟩_F = (d1, d0): maps every
/// pair to the decomposition of (φ²(z), u_[q]^{-1} φ²(z̃) u_[q]).
fn two_digit_stroke(
    zset: &ZSet,
    d1: u32,
    d0: u32,
    subst: &ParrySubstitution,
) -> BTreeSet<BlockPair> {
    let lim = limits();
    let mut table = LengthTable::new(subst);
    let q = frep_value_with(&FDigits::new(vec![d1, d0]), subst, &mut table).unwrap();
    let u_q = fixed_point_prefix(subst, usize::try_from(&q).unwrap());
    let alpha0 = subst.alpha0() as usize;
    let admissible = |block: &Word| {
        let image = apply_morphism(subst, block).unwrap();
        image.len() >= alpha0 && image.letters()[..alpha0].iter().all(|&c| c == 0)
    };
    let mut out = BTreeSet::new();
    for pair in zset.pairs() {
        let top = apply_power(subst, 2, pair.z(), &lim).unwrap();
        let bottom_image = apply_power(subst, 2, pair.z_tilde(), &lim).unwrap();
        assert!(
            bottom_image.starts_with(&u_q),
            "hypothesis: φ²(z̃) must begin with u_[q]"
        );
        let bottom = left_cancel(&u_q, &bottom_image).unwrap().concat(&u_q);
        let dec = co_decompose(&top, &bottom, subst.alphabet_size(), admissible).unwrap();
        out.extend(dec.into_pairs());
    }
    out
}

#[test]
fn criterion_10_property_suite() {
    let start = Instant::now();
    let lim = limits();

    // Deterministic part: digit-composition coherence on the Tribonacci
    // value-4 family, where ⟨n_i⟩_F = (⟨n_{i-1}⟩_F, 0, 1).
    let t = trib();
    let mut z = z_base(1, &t, &lim).unwrap();
    for _ in 0..4 {
        let stepped = z_step(&z_step(&z, 0, &t, &lim).unwrap(), 1, &t, &lim).unwrap();
        let stroked = two_digit_stroke(&z, 0, 1, &t);
        assert_eq!(*stepped.pairs(), stroked, "two steps = one k=2 stroke");
        z = stepped;
    }

    // R soundness: φ^R(0)0 is a prefix of the fixed point.
    for (label, subst) in test_substitutions() {
        let r = covering_exponent(&subst);
        let head = apply_power(&subst, r, &Word::letter(0), &lim).unwrap();
        let probe = head.concat(&Word::letter(0));
        assert_eq!(
            fixed_point_prefix(&subst, probe.len()),
            probe,
            "{label}: φ^R(0)0 prefix"
        );
    }

    // Randomized part across the four substitutions.
    let mut runner = TestRunner::new(Config {
        cases: 96,
        ..Config::default()
    });
    runner
        .run(&(0usize..4, 1usize..400), |(which, n)| {
            let (label, subst) = &test_substitutions()[which];
            let alphabet = subst.alphabet_size();
            let cover = covering_prefix(n, subst, &lim).unwrap();
            let head = fixed_point_prefix(subst, n);

            // The covering prefix begins and ends with u_[n], and the two
            // conjugated rows are abelian-equivalent.
            prop_assert!(cover.starts_with(&head), "{label}");
            prop_assert!(cover.ends_with(&head), "{label}");
            let row_top = right_cancel(&cover, &head).unwrap();
            let row_bottom = left_cancel(&head, &cover).unwrap();
            prop_assert_eq!(parikh(&row_top, alphabet), parikh(&row_bottom, alphabet));

            // Row reconstruction and blockwise Parikh equality, with and
            // without an admissibility predicate.
            for finest in [true, false] {
                let dec = co_decompose(&row_top, &row_bottom, alphabet, |block: &Word| {
                    finest || block.len() % 2 == 1
                })
                .unwrap();
                let (top, bottom) = dec.rows();
                prop_assert_eq!(&top, &row_top);
                prop_assert_eq!(&bottom, &row_bottom);
                for pair in dec.ordered_pairs() {
                    prop_assert!(!pair.z().is_empty());
                    prop_assert_eq!(
                        parikh(pair.z(), alphabet),
                        parikh(pair.z_tilde(), alphabet)
                    );
                }
            }

            // Z-set pairs are Parikh-equal; the generated relative set
            // contains the zero vector, is zero-sum, and matches the
            // brute-force oracle whenever the codec path applies.
            match z_set(&BigUint::from(n), subst, &lim) {
                Ok(zset) => {
                    for pair in zset.pairs() {
                        prop_assert_eq!(
                            parikh(pair.z(), alphabet),
                            parikh(pair.z_tilde(), alphabet)
                        );
                    }
                    let rel = rel_parikh_set(&zset, subst);
                    prop_assert!(rel.contains(&RelativeParikhVector::zero(alphabet)));
                    for v in &rel {
                        prop_assert_eq!(v.deltas().iter().sum::<i64>(), 0);
                    }
                    let brute = Oracle::new(subst, lim).rel_parikh_set(n).unwrap();
                    prop_assert_eq!(rel, brute, "{} at n = {}", label, n);
                }
                Err(abco::Error::StepInapplicable { .. }) => {
                    // Surfaced, not hidden; oracle agreement for these n
                    // is covered by criterion 6.
                }
                Err(e) => return Err(TestCaseError::fail(format!("{label}: {e}"))),
            }
            Ok(())
        })
        .unwrap();

    finish("10 property-suite", start, Duration::from_secs(120));
}

#[test]
fn stabilization_certificates() {
    // Criteria 2-4 operationalize the infinite-attainment claims through
    // the stabilization criterion; assert the three certificates here so
    // the acceptance run exercises the reporting path end to end.
    let start = Instant::now();
    let t = trib();
    let lim = limits();
    let cases: [(&[u32], &[u32], u64); 3] = [
        (&[1, 0], &[1], 4),
        (&[1, 0, 0, 0], &[1], 5),
        (&[1, 0, 0, 0], &[0], 6),
    ];
    for (block, tail, expected) in cases {
        let report = abco::codecomp::detect_stabilization(block, tail, 20, &t, &lim).unwrap();
        assert!(report.certified());
        assert_eq!(report.stable_ac, Some(expected));
        assert!(report.stabilized_at.unwrap() <= 3);
    }
    finish("2-4 stabilization-certificates", start, Duration::from_secs(10));
}
