//! Parry substitutions: validation, morphism application, block lengths,
//! and fixed-point prefixes.
//!
//! A substitution is specified by its class and exponent sequence; the
//! per-letter images are derived from the templates
//!
//! ```text
//! simple, alphabet {0..m-1}:      ℓ ↦ 0^{α_ℓ} (ℓ+1)   for ℓ < m-1
//!                                 m-1 ↦ 0^{α_{m-1}}
//! non-simple, alphabet {0..m+p-1}: ℓ ↦ 0^{α_ℓ} (ℓ+1)  for ℓ < m+p-1
//!                                 m+p-1 ↦ 0^{α_{m+p-1}} m
//! ```
//!
//! so a validated value is template-shaped by construction. Raw images
//! are accepted only through [`ParrySubstitution::from_images`], which
//! pattern-matches the templates and rejects anything else.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::words::{Letter, Word};
use crate::Limits;

/// Letters are `u8`, so this is the largest representable alphabet.
const MAX_ALPHABET: usize = 256;

/// Which of the two Parry templates a substitution instantiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubstitutionClass {
    /// Alphabet `{0..m-1}`; the last letter maps into pure zeros.
    Simple { m: usize },
    /// Alphabet `{0..m+p-1}`; letters `m..m+p-1` form a cycle back to `m`.
    NonSimple { m: usize, p: usize },
}

/// A validated Parry substitution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParrySubstitution {
    class: SubstitutionClass,
    exponents: Vec<u32>,
    images: Vec<Word>,
}

impl ParrySubstitution {
    /// Validate and build a simple Parry substitution on `m = exponents.len()`
    /// letters.
    pub fn simple(exponents: &[u32]) -> Result<Self> {
        let m = exponents.len();
        if m == 0 {
            return Err(Error::InvalidSubstitution("empty exponent sequence".into()));
        }
        Self::validated(SubstitutionClass::Simple { m }, exponents)
    }

    /// Validate and build a non-simple Parry substitution on `m + p` letters.
    pub fn non_simple(m: usize, p: usize, exponents: &[u32]) -> Result<Self> {
        if m == 0 || p == 0 {
            return Err(Error::InvalidSubstitution(
                "m and p must be positive".into(),
            ));
        }
        if exponents.len() != m + p {
            return Err(Error::InvalidSubstitution(format!(
                "expected {} exponents for m={m}, p={p}, got {}",
                m + p,
                exponents.len()
            )));
        }
        Self::validated(SubstitutionClass::NonSimple { m, p }, exponents)
    }

    /// The Tribonacci substitution `0 ↦ 01, 1 ↦ 02, 2 ↦ 0`.
    pub fn tribonacci() -> Self {
        Self::simple(&[1, 1, 1]).expect("tribonacci exponents are valid")
    }

    fn validated(class: SubstitutionClass, exponents: &[u32]) -> Result<Self> {
        let alphabet = match class {
            SubstitutionClass::Simple { m } => m,
            SubstitutionClass::NonSimple { m, p } => m + p,
        };
        if alphabet > MAX_ALPHABET {
            return Err(Error::InvalidSubstitution(format!(
                "alphabet size {alphabet} exceeds the supported maximum {MAX_ALPHABET}"
            )));
        }
        let alpha0 = exponents[0];
        if alpha0 == 0 {
            return Err(Error::InvalidSubstitution("alpha_0 must be at least 1".into()));
        }
        if let Some((l, &a)) = exponents.iter().enumerate().find(|(_, &a)| a > alpha0) {
            return Err(Error::InvalidSubstitution(format!(
                "alpha_{l} = {a} exceeds alpha_0 = {alpha0}"
            )));
        }
        match class {
            SubstitutionClass::Simple { m } => {
                // Non-erasing: the image of the last letter is 0^{α_{m-1}},
                // and a one-letter alphabet needs an expanding image.
                if m >= 2 && exponents[m - 1] == 0 {
                    return Err(Error::InvalidSubstitution(
                        "the image of the last letter would be empty (alpha_{m-1} = 0)".into(),
                    ));
                }
                if m == 1 && alpha0 < 2 {
                    return Err(Error::InvalidSubstitution(
                        "a single-letter substitution must expand 0 (alpha_0 >= 2)".into(),
                    ));
                }
            }
            SubstitutionClass::NonSimple { m, p } => {
                if exponents[m..m + p].iter().all(|&a| a == 0) {
                    return Err(Error::InvalidSubstitution(
                        "all cycle exponents alpha_m..alpha_{m+p-1} are zero".into(),
                    ));
                }
            }
        }
        let images = build_images(class, exponents);
        Ok(ParrySubstitution {
            class,
            exponents: exponents.to_vec(),
            images,
        })
    }

    /// Recognize a substitution given by raw per-letter images. The rules
    /// must match one of the two templates exactly.
    pub fn from_images(images: &[Word]) -> Result<Self> {
        let a = images.len();
        if a == 0 {
            return Err(Error::InvalidSubstitution("no rules given".into()));
        }
        let mut exponents = Vec::with_capacity(a);
        let mut class = None;
        for (l, image) in images.iter().enumerate() {
            let zeros = image.letters().iter().take_while(|&&c| c == 0).count();
            let rest = &image.letters()[zeros..];
            exponents.push(zeros as u32);
            let is_last = l == a - 1;
            match (is_last, rest) {
                (false, [next]) if *next as usize == l + 1 => {}
                (true, []) => class = Some(SubstitutionClass::Simple { m: a }),
                (true, [back]) if (1..a).contains(&(*back as usize)) => {
                    let m = *back as usize;
                    class = Some(SubstitutionClass::NonSimple { m, p: a - m });
                }
                _ => {
                    return Err(Error::InvalidSubstitution(format!(
                        "rule for letter {l} does not match the Parry templates"
                    )));
                }
            }
        }
        let class = class.expect("last rule classifies the substitution");
        let subst = Self::validated(class, &exponents)?;
        debug_assert_eq!(subst.images, images);
        Ok(subst)
    }

    /// Parse a substitution spec: `simple m=3 alpha=1,1,1`,
    /// `nonsimple m=1 p=2 alpha=2,0,1`, raw rules `0->01;1->02;2->0`,
    /// or a key-value document with fields `kind`, `m`, `p`, `alpha`.
    pub fn parse_spec(text: &str) -> Result<Self> {
        let meaningful: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect();
        if meaningful.is_empty() {
            return Err(Error::InvalidSubstitution("empty substitution spec".into()));
        }
        let joined = meaningful.join(" ");
        if joined.contains("->") {
            return Self::parse_rules(&joined);
        }
        Self::parse_fields(&joined)
    }

    fn parse_rules(text: &str) -> Result<Self> {
        let mut rules: Vec<(usize, &str)> = Vec::new();
        for part in text.split(';') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            let (lhs, rhs) = part.split_once("->").ok_or_else(|| {
                Error::InvalidSubstitution(format!("rule `{part}` is missing `->`"))
            })?;
            let letter: usize = lhs.trim().parse().map_err(|_| {
                Error::InvalidSubstitution(format!("invalid letter `{}`", lhs.trim()))
            })?;
            rules.push((letter, rhs.trim()));
        }
        let a = rules.len();
        let mut images = vec![None; a];
        for (letter, rhs) in rules {
            if letter >= a {
                return Err(Error::InvalidSubstitution(format!(
                    "rule letter {letter} out of range for {a} rules"
                )));
            }
            if images[letter].is_some() {
                return Err(Error::InvalidSubstitution(format!(
                    "duplicate rule for letter {letter}"
                )));
            }
            let word = Word::parse(rhs, a.max(2))
                .map_err(|e| Error::InvalidSubstitution(format!("image `{rhs}`: {e}")))?;
            images[letter] = Some(word);
        }
        let images: Vec<Word> = images
            .into_iter()
            .collect::<Option<_>>()
            .expect("every index filled exactly once");
        Self::from_images(&images)
    }

    fn parse_fields(text: &str) -> Result<Self> {
        let mut kind = None;
        let mut m = None;
        let mut p = None;
        let mut alpha: Option<Vec<u32>> = None;
        for token in text.split_whitespace() {
            let token = token.trim_end_matches(',');
            match token {
                "simple" | "nonsimple" | "non-simple" => kind = Some(token != "simple"),
                _ => {
                    let (key, value) = token
                        .split_once(['=', ':'])
                        .ok_or_else(|| {
                            Error::InvalidSubstitution(format!("unexpected token `{token}`"))
                        })?;
                    let value = value.trim();
                    match key.trim() {
                        "kind" => kind = Some(value != "simple"),
                        "m" => m = Some(parse_usize(value)?),
                        "p" => p = Some(parse_usize(value)?),
                        "alpha" => {
                            alpha = Some(
                                value
                                    .split(',')
                                    .map(|d| {
                                        d.trim().parse::<u32>().map_err(|_| {
                                            Error::InvalidSubstitution(format!(
                                                "invalid exponent `{d}`"
                                            ))
                                        })
                                    })
                                    .collect::<Result<_>>()?,
                            )
                        }
                        other => {
                            return Err(Error::InvalidSubstitution(format!(
                                "unknown field `{other}`"
                            )))
                        }
                    }
                }
            }
        }
        let kind =
            kind.ok_or_else(|| Error::InvalidSubstitution("missing `simple`/`nonsimple`".into()))?;
        let alpha =
            alpha.ok_or_else(|| Error::InvalidSubstitution("missing `alpha=` field".into()))?;
        if kind {
            let m = m.ok_or_else(|| Error::InvalidSubstitution("missing `m=` field".into()))?;
            let p = p.ok_or_else(|| Error::InvalidSubstitution("missing `p=` field".into()))?;
            Self::non_simple(m, p, &alpha)
        } else {
            if let Some(m) = m {
                if m != alpha.len() {
                    return Err(Error::InvalidSubstitution(format!(
                        "m={m} disagrees with {} exponents",
                        alpha.len()
                    )));
                }
            }
            Self::simple(&alpha)
        }
    }

    pub fn class(&self) -> SubstitutionClass {
        self.class
    }

    pub fn alphabet_size(&self) -> usize {
        self.images.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn alpha0(&self) -> u32 {
        self.exponents[0]
    }

    pub fn image(&self, letter: Letter) -> &Word {
        &self.images[letter as usize]
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// A short human-readable description, e.g. `simple m=3 alpha=1,1,1`.
    pub fn describe(&self) -> String {
        let alpha: Vec<String> = self.exponents.iter().map(|a| a.to_string()).collect();
        match self.class {
            SubstitutionClass::Simple { m } => format!("simple m={m} alpha={}", alpha.join(",")),
            SubstitutionClass::NonSimple { m, p } => {
                format!("nonsimple m={m} p={p} alpha={}", alpha.join(","))
            }
        }
    }
}

fn parse_usize(value: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| Error::InvalidSubstitution(format!("invalid integer `{value}`")))
}

fn build_images(class: SubstitutionClass, exponents: &[u32]) -> Vec<Word> {
    let a = exponents.len();
    let mut images = Vec::with_capacity(a);
    for (l, &alpha) in exponents.iter().enumerate() {
        let mut letters = vec![0u8; alpha as usize];
        if l < a - 1 {
            letters.push((l + 1) as Letter);
        } else if let SubstitutionClass::NonSimple { m, .. } = class {
            letters.push(m as Letter);
        }
        images.push(Word::from_letters(letters));
    }
    images
}

/// Apply the morphism once: the concatenation of per-letter images.
pub fn apply_morphism(subst: &ParrySubstitution, w: &Word) -> Result<Word> {
    let alphabet = subst.alphabet_size();
    let mut total = 0usize;
    for &c in w.letters() {
        if (c as usize) >= alphabet {
            return Err(Error::LetterOutOfAlphabet {
                letter: c,
                alphabet,
            });
        }
        total += subst.image(c).len();
    }
    let mut out = Vec::with_capacity(total);
    for &c in w.letters() {
        out.extend_from_slice(subst.image(c).letters());
    }
    Ok(Word::from_letters(out))
}

/// `φ^k(w)` by repeated application, with an up-front cap check on the
/// final length (intermediate iterates are never longer).
pub fn apply_power(
    subst: &ParrySubstitution,
    k: usize,
    w: &Word,
    limits: &Limits,
) -> Result<Word> {
    let mut table = LengthTable::new(subst);
    let mut needed = BigUint::ZERO;
    for &c in w.letters() {
        if (c as usize) >= subst.alphabet_size() {
            return Err(Error::LetterOutOfAlphabet {
                letter: c,
                alphabet: subst.alphabet_size(),
            });
        }
        needed += table.letter_len(k, c);
    }
    if needed > BigUint::from(limits.max_letters) {
        return Err(Error::ResourceExceeded {
            needed,
            cap: limits.max_letters,
        });
    }
    let mut current = w.clone();
    for _ in 0..k {
        current = apply_morphism(subst, &current)?;
    }
    Ok(current)
}

/// The first `len` letters of the fixed point `u = lim φ^k(0)`.
///
/// Consecutive iterates `φ^k(0)` are prefixes of one another because
/// `φ(0)` begins with `0`, so the prefix is well defined for every `len`.
pub fn fixed_point_prefix(subst: &ParrySubstitution, len: usize) -> Word {
    let mut stream = PrefixStream::new(subst.clone());
    stream.extend_to(len);
    Word::from_letters(&stream.letters()[..len.min(stream.letters().len())])
}

/// Incremental generator of the fixed point: reads already-produced
/// letters and appends their images, which is valid because `u = φ(u)`.
pub(crate) struct PrefixStream {
    subst: ParrySubstitution,
    letters: Vec<Letter>,
    read_pos: usize,
}

impl PrefixStream {
    pub(crate) fn new(subst: ParrySubstitution) -> Self {
        let letters = subst.image(0).letters().to_vec();
        PrefixStream {
            subst,
            letters,
            read_pos: 1,
        }
    }

    pub(crate) fn extend_to(&mut self, len: usize) {
        while self.letters.len() < len {
            let next = self.letters[self.read_pos];
            self.read_pos += 1;
            let image = self.subst.image(next).letters();
            self.letters.extend_from_slice(image);
        }
    }

    pub(crate) fn letters(&self) -> &[Letter] {
        &self.letters
    }
}

/// Exact lengths `|φ^k(ℓ)|` by the per-letter length recurrence, in
/// arbitrary precision; `F_k = |φ^k(0)|`.
#[derive(Clone, Debug)]
pub struct LengthTable {
    /// `counts[ℓ][a] = |φ(ℓ)|_a`
    counts: Vec<Vec<u64>>,
    /// `rows[k][ℓ] = |φ^k(ℓ)|`
    rows: Vec<Vec<BigUint>>,
}

impl LengthTable {
    pub fn new(subst: &ParrySubstitution) -> Self {
        let a = subst.alphabet_size();
        let counts = subst
            .images()
            .iter()
            .map(|image| {
                let mut row = vec![0u64; a];
                for &c in image.letters() {
                    row[c as usize] += 1;
                }
                row
            })
            .collect();
        LengthTable {
            counts,
            rows: vec![vec![BigUint::one(); a]],
        }
    }

    /// Extend the table so `F_0..F_k` are all available.
    pub fn ensure(&mut self, k: usize) {
        while self.rows.len() <= k {
            let prev = self.rows.last().expect("row 0 present");
            let next: Vec<BigUint> = self
                .counts
                .iter()
                .map(|row| {
                    let mut sum = BigUint::ZERO;
                    for (a, &count) in row.iter().enumerate() {
                        if count > 0 {
                            sum += &prev[a] * count;
                        }
                    }
                    sum
                })
                .collect();
            self.rows.push(next);
        }
    }

    /// `F_k = |φ^k(0)|`.
    pub fn f(&mut self, k: usize) -> &BigUint {
        self.ensure(k);
        &self.rows[k][0]
    }

    /// `F_k` as `usize`, or a resource error against the given cap.
    pub fn f_usize(&mut self, k: usize, limits: &Limits) -> Result<usize> {
        self.ensure(k);
        let f = &self.rows[k][0];
        if *f > BigUint::from(limits.max_letters) {
            return Err(Error::ResourceExceeded {
                needed: f.clone(),
                cap: limits.max_letters,
            });
        }
        Ok(f.to_usize().expect("under cap"))
    }

    /// `|φ^k(ℓ)|`.
    pub fn letter_len(&mut self, k: usize, letter: Letter) -> &BigUint {
        self.ensure(k);
        &self.rows[k][letter as usize]
    }

    /// Number of computed levels (indices `0..len`).
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Smallest `k` with `n ≤ F_k`.
    pub fn level_covering(&mut self, n: &BigUint) -> usize {
        let mut k = 0;
        while *self.f(k) < *n {
            k += 1;
        }
        k
    }
}

/// The table `F_0..F_k`.
pub fn block_lengths(subst: &ParrySubstitution, k: usize) -> LengthTable {
    let mut table = LengthTable::new(subst);
    table.ensure(k);
    table
}

/// Does `φ(w)` begin with `0^zeros`? Evaluated lazily, without
/// materializing the image.
pub(crate) fn image_begins_with_zeros(
    subst: &ParrySubstitution,
    w: &[Letter],
    zeros: u32,
) -> bool {
    let mut need = zeros as usize;
    for &c in w {
        for &x in subst.image(c).letters() {
            if need == 0 {
                return true;
            }
            if x != 0 {
                return false;
            }
            need -= 1;
        }
    }
    need == 0
}
