//! Command-line front end: parse substitution specs, run queries and
//! scans, render text/CSV/JSON.
//!
//! Exit codes: 0 ok, 2 usage, 3 invalid substitution, 4 resource cap
//! exceeded, 5 verification mismatch.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use crate::codecomp::{
    abelian_complexity, detect_stabilization, z_set, z_set_from_digits, AcOutcome, Method,
    StabilizationReport, ZSet,
};
use crate::error::Error;
use crate::numeration::{frep_value, prefix_from_frep, to_normal_frep, FDigits};
use crate::oracle::Oracle;
use crate::parry::ParrySubstitution;
use crate::Limits;

const MIN_CAP: u64 = 10_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INVALID_SUBSTITUTION: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;
pub const EXIT_MISMATCH: i32 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "abco",
    version,
    about = "Abelian complexity of Parry words via abelian co-decomposition",
    disable_help_subcommand = true
)]
struct Cli {
    /// Substitution spec: `simple m=3 alpha=1,1,1`,
    /// `nonsimple m=1 p=2 alpha=2,0,1`, or raw rules `0->01;1->02;2->0`.
    #[arg(long, global = true)]
    sub: Option<String>,

    /// Read the substitution spec from a file (inline grammar or a
    /// key-value document with fields kind/m/p/alpha).
    #[arg(long, global = true, conflicts_with = "sub")]
    sub_file: Option<std::path::PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Cap on materialized letters (minimum 10000).
    #[arg(long, global = true, default_value_t = 100_000_000)]
    cap: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Codec,
    Oracle,
    Both,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Codec => Method::Codec,
            MethodArg::Oracle => Method::Oracle,
            MethodArg::Both => Method::Both,
        }
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Codec => "codec",
        Method::Oracle => "oracle",
        Method::Both => "both",
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Abelian complexity AC(n).
    Ac {
        /// The length n (decimal, arbitrary precision).
        n: Option<String>,
        /// Give n by its normal F-representation digits instead, most
        /// significant first, e.g. `1,0,1`.
        #[arg(long, conflicts_with = "n")]
        digits: Option<String>,
        #[arg(long, value_enum, default_value_t = MethodArg::Codec)]
        method: MethodArg,
    },
    /// Normal F-representation of n.
    Frep { n: String },
    /// The prefix u_[n], reconstructed from the digits of n.
    Prefix { n: String },
    /// The Z-set of n, one `z | z~` pair per line.
    Zset {
        n: Option<String>,
        #[arg(long, conflicts_with = "n")]
        digits: Option<String>,
    },
    /// AC(n) for every n in an inclusive range `a..b`.
    Scan {
        range: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Codec)]
        method: MethodArg,
    },
    /// Iterate the Z-recursion along (block^i, tail) and report the
    /// stabilization point and the stable AC value.
    Stabilize {
        /// Repeated digit block, e.g. `1,0,0,0`.
        #[arg(long)]
        block: String,
        /// Trailing digits, e.g. `1` (may be empty: ``).
        #[arg(long, default_value = "")]
        tail: String,
        /// Maximum number of block copies to examine.
        #[arg(long, default_value_t = 20)]
        max_i: u32,
    },
    /// Cross-check codec against oracle for every n in 1..=N.
    Verify {
        #[arg(long)]
        max_n: usize,
    },
    /// Per-letter balance profile over n in 1..=N.
    Balance {
        #[arg(long)]
        max_n: usize,
    },
}

/// Run the CLI against the given argument list, writing rendered output
/// and diagnostics to the given sinks. Returns the process exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own help/version through the error path.
            let rendered = e.render();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{rendered}");
            return EXIT_OK;
        }
    };
    match execute(&cli, err) {
        Ok(rendered) => {
            let _ = writeln!(out, "{rendered}");
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidSubstitution(_) => EXIT_INVALID_SUBSTITUTION,
        Error::ResourceExceeded { .. } => EXIT_RESOURCE,
        Error::MethodDisagreement { .. } => EXIT_MISMATCH,
        _ => EXIT_USAGE,
    }
}

fn execute(cli: &Cli, diag: &mut dyn Write) -> Result<String, Error> {
    if cli.cap < MIN_CAP {
        return Err(Error::InvalidArgument(format!(
            "--cap must be at least {MIN_CAP}"
        )));
    }
    let limits = Limits::with_max_letters(cli.cap);
    let subst = load_substitution(cli)?;
    match &cli.command {
        Command::Ac { n, digits, method } => {
            let n = resolve_n(n.as_deref(), digits.as_deref(), &subst)?;
            let outcome = abelian_complexity(&n, &subst, (*method).into(), &limits)?;
            if outcome.oracle_fallback {
                let _ = writeln!(
                    diag,
                    "warning: co-decomposition step inapplicable; oracle fallback used"
                );
            }
            Ok(render_ac(cli.format, &n, &outcome))
        }
        Command::Frep { n } => {
            let n = parse_biguint(n)?;
            let digits = to_normal_frep(&n, &subst);
            match cli.format {
                Format::Json => Ok(json(&FrepJson {
                    n: n.to_string(),
                    digits: digits.to_string(),
                })),
                _ => Ok(digits.to_string()),
            }
        }
        Command::Prefix { n } => {
            let n = parse_biguint(n)?;
            let digits = to_normal_frep(&n, &subst);
            let word = prefix_from_frep(&digits, &subst, &limits)?;
            let rendered = word.render(subst.alphabet_size());
            match cli.format {
                Format::Json => Ok(json(&PrefixJson {
                    n: n.to_string(),
                    digits: digits.to_string(),
                    prefix: rendered,
                })),
                _ => Ok(rendered),
            }
        }
        Command::Zset { n, digits } => {
            let (n, zset) = match (n, digits) {
                (_, Some(digits)) => {
                    let digits = FDigits::parse(digits)?;
                    let value = frep_value(&digits, &subst)?;
                    (value, z_set_from_digits(&digits, &subst, &limits)?)
                }
                (Some(n), None) => {
                    let n = parse_biguint(n)?;
                    (n.clone(), z_set(&n, &subst, &limits)?)
                }
                (None, None) => {
                    return Err(Error::InvalidArgument(
                        "zset needs either <n> or --digits".into(),
                    ))
                }
            };
            Ok(render_zset(cli.format, &n, &zset, &subst))
        }
        Command::Scan { range, method } => {
            let (a, b) = parse_range(range)?;
            let mut rows = Vec::with_capacity(b - a + 1);
            for n in a..=b {
                let outcome =
                    abelian_complexity(&BigUint::from(n), &subst, (*method).into(), &limits)?;
                if outcome.oracle_fallback {
                    let _ = writeln!(diag, "warning: oracle fallback at n = {n}");
                }
                rows.push((n, outcome.value));
            }
            Ok(render_scan(cli.format, &rows, (*method).into()))
        }
        Command::Stabilize { block, tail, max_i } => {
            let block = parse_digit_list(block)?;
            let tail = parse_digit_list(tail)?;
            let report = detect_stabilization(&block, &tail, *max_i, &subst, &limits)?;
            Ok(render_stabilization(cli.format, &report))
        }
        Command::Verify { max_n } => {
            let mut oracle = Oracle::new(&subst, limits);
            let mut fallbacks = 0usize;
            let mut rows = Vec::with_capacity(*max_n);
            for n in 1..=*max_n {
                let codec = abelian_complexity(&BigUint::from(n), &subst, Method::Codec, &limits)?;
                let brute = oracle.ac(n)?;
                if codec.oracle_fallback {
                    fallbacks += 1;
                    let _ = writeln!(diag, "note: oracle fallback at n = {n}");
                }
                if codec.value != brute {
                    return Err(Error::MethodDisagreement {
                        n: n.to_string(),
                        codec: codec.value,
                        oracle: brute,
                    });
                }
                rows.push((n as u64, brute));
            }
            Ok(render_verify(cli.format, &rows, fallbacks))
        }
        Command::Balance { max_n } => {
            let profile = Oracle::new(&subst, limits).balance_profile(*max_n)?;
            Ok(render_balance(cli.format, &profile))
        }
    }
}

fn load_substitution(cli: &Cli) -> Result<ParrySubstitution, Error> {
    let text = match (&cli.sub, &cli.sub_file) {
        (Some(inline), None) => inline.clone(),
        (None, Some(path)) => std::fs::read_to_string(path).map_err(|e| {
            Error::InvalidSubstitution(format!("cannot read {}: {e}", path.display()))
        })?,
        (None, None) => {
            return Err(Error::InvalidArgument(
                "a substitution is required: pass --sub or --sub-file".into(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap rejects conflicting flags"),
    };
    ParrySubstitution::parse_spec(&text)
}

fn resolve_n(
    n: Option<&str>,
    digits: Option<&str>,
    subst: &ParrySubstitution,
) -> Result<BigUint, Error> {
    match (n, digits) {
        (_, Some(digits)) => {
            let digits = FDigits::parse(digits)?;
            frep_value(&digits, subst)
        }
        (Some(n), None) => parse_biguint(n),
        (None, None) => Err(Error::InvalidArgument(
            "ac needs either <n> or --digits".into(),
        )),
    }
}

fn parse_biguint(text: &str) -> Result<BigUint, Error> {
    BigUint::parse_bytes(text.trim().as_bytes(), 10)
        .ok_or_else(|| Error::InvalidArgument(format!("invalid number `{text}`")))
}

fn parse_range(text: &str) -> Result<(usize, usize), Error> {
    let (a, b) = text
        .split_once("..")
        .ok_or_else(|| Error::InvalidArgument(format!("invalid range `{text}`, expected a..b")))?;
    let a: usize = a
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("invalid range bound `{a}`")))?;
    let b: usize = b
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("invalid range bound `{b}`")))?;
    if a == 0 || b < a {
        return Err(Error::InvalidArgument(
            "range must satisfy 1 <= a <= b".into(),
        ));
    }
    Ok((a, b))
}

fn parse_digit_list(text: &str) -> Result<Vec<u32>, Error> {
    let text = text.trim().trim_start_matches('(').trim_end_matches(')');
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|d| {
            d.trim()
                .parse::<u32>()
                .map_err(|_| Error::InvalidDigits(format!("invalid digit `{}`", d.trim())))
        })
        .collect()
}

fn digit_list_string(digits: &[u32]) -> String {
    let parts: Vec<String> = digits.iter().map(|d| d.to_string()).collect();
    format!("({})", parts.join(","))
}

// ---------------------------------------------------------------------
// Rendering

#[derive(Serialize)]
struct AcJson {
    n: String,
    ac: u64,
    method: &'static str,
    fallback: bool,
}

#[derive(Serialize)]
struct FrepJson {
    n: String,
    digits: String,
}

#[derive(Serialize)]
struct PrefixJson {
    n: String,
    digits: String,
    prefix: String,
}

#[derive(Serialize)]
struct ZSetJson {
    n: String,
    digits: String,
    pairs: Vec<PairJson>,
}

#[derive(Serialize)]
struct PairJson {
    z: String,
    z_tilde: String,
}

#[derive(Serialize)]
struct ScanJson {
    method: &'static str,
    results: Vec<ScanRowJson>,
}

#[derive(Serialize)]
struct ScanRowJson {
    n: u64,
    ac: u64,
}

#[derive(Serialize)]
struct StabilizationJson {
    block: String,
    tail: String,
    max_i: u32,
    stabilized_at: Option<u32>,
    stable_ac: Option<u64>,
    stable_rel_set: Option<Vec<String>>,
    codec_applicable: bool,
    note: Option<String>,
}

#[derive(Serialize)]
struct VerifyJson {
    checked: usize,
    mismatches: usize,
    fallbacks: usize,
    results: Vec<ScanRowJson>,
}

#[derive(Serialize)]
struct BalanceJson {
    n_max: usize,
    per_letter_max: Vec<u64>,
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("report types serialize")
}

fn render_ac(format: Format, n: &BigUint, outcome: &AcOutcome) -> String {
    match format {
        Format::Text => {
            let mut s = format!("AC({n}) = {}", outcome.value);
            if outcome.method == Method::Both {
                s.push_str("\ncodec and oracle agree");
            }
            s
        }
        Format::Csv => format!(
            "n,ac,method\n{n},{},{}",
            outcome.value,
            method_name(outcome.method)
        ),
        Format::Json => json(&AcJson {
            n: n.to_string(),
            ac: outcome.value,
            method: method_name(outcome.method),
            fallback: outcome.oracle_fallback,
        }),
    }
}

fn render_zset(format: Format, n: &BigUint, zset: &ZSet, subst: &ParrySubstitution) -> String {
    let alphabet = subst.alphabet_size();
    match format {
        Format::Json => json(&ZSetJson {
            n: n.to_string(),
            digits: digit_list_string(zset.provenance()),
            pairs: zset
                .pairs()
                .iter()
                .map(|p| PairJson {
                    z: p.z().render(alphabet),
                    z_tilde: p.z_tilde().render(alphabet),
                })
                .collect(),
        }),
        _ => {
            let lines: Vec<String> = zset
                .pairs()
                .iter()
                .map(|p| format!("{} | {}", p.z().render(alphabet), p.z_tilde().render(alphabet)))
                .collect();
            lines.join("\n")
        }
    }
}

fn render_scan(format: Format, rows: &[(usize, u64)], method: Method) -> String {
    match format {
        Format::Text => {
            let lines: Vec<String> = rows.iter().map(|(n, ac)| format!("AC({n}) = {ac}")).collect();
            lines.join("\n")
        }
        Format::Csv => {
            let mut s = String::from("n,ac,method");
            for (n, ac) in rows {
                let _ = write!(s, "\n{n},{ac},{}", method_name(method));
            }
            s
        }
        Format::Json => json(&ScanJson {
            method: method_name(method),
            results: rows
                .iter()
                .map(|&(n, ac)| ScanRowJson { n: n as u64, ac })
                .collect(),
        }),
    }
}

fn render_rel_set(set: &BTreeSet<crate::words::RelativeParikhVector>) -> Vec<String> {
    set.iter().map(|v| v.to_string()).collect()
}

fn render_stabilization(format: Format, report: &StabilizationReport) -> String {
    match format {
        Format::Json => json(&StabilizationJson {
            block: digit_list_string(&report.block),
            tail: digit_list_string(&report.tail),
            max_i: report.i_max,
            stabilized_at: report.stabilized_at,
            stable_ac: report.stable_ac,
            stable_rel_set: report.stable_rel_set.as_ref().map(render_rel_set),
            codec_applicable: report.codec_applicable,
            note: report.note.clone(),
        }),
        _ => {
            let mut s = String::new();
            let _ = writeln!(s, "block: {}", digit_list_string(&report.block));
            let _ = writeln!(s, "tail: {}", digit_list_string(&report.tail));
            match report.stabilized_at {
                Some(i) => {
                    let _ = writeln!(s, "stabilized_at: {i}");
                }
                None => {
                    let _ = writeln!(s, "stabilized_at: not within bound");
                }
            }
            if let Some(ac) = report.stable_ac {
                let _ = writeln!(s, "stable_ac: {ac}");
            }
            if let Some(set) = &report.stable_rel_set {
                let _ = writeln!(s, "stable_rel_set: {}", render_rel_set(set).join(" "));
            }
            let _ = write!(s, "codec_applicable: {}", report.codec_applicable);
            if let Some(note) = &report.note {
                let _ = write!(s, "\nnote: {note}");
            }
            s
        }
    }
}

fn render_verify(format: Format, rows: &[(u64, u64)], fallbacks: usize) -> String {
    match format {
        Format::Text => format!(
            "verified n=1..{}: ok ({} checked, 0 mismatches, {} fallbacks)",
            rows.len(),
            rows.len(),
            fallbacks
        ),
        Format::Csv => {
            let mut s = String::from("n,ac,method");
            for (n, ac) in rows {
                let _ = write!(s, "\n{n},{ac},both");
            }
            s
        }
        Format::Json => json(&VerifyJson {
            checked: rows.len(),
            mismatches: 0,
            fallbacks,
            results: rows.iter().map(|&(n, ac)| ScanRowJson { n, ac }).collect(),
        }),
    }
}

fn render_balance(format: Format, profile: &crate::oracle::BalanceProfile) -> String {
    match format {
        Format::Text => {
            let mut lines: Vec<String> = profile
                .per_letter_max
                .iter()
                .enumerate()
                .map(|(l, m)| format!("letter {l}: max |delta| = {m}"))
                .collect();
            lines.push(format!("scanned n <= {}", profile.n_max));
            lines.join("\n")
        }
        Format::Csv => {
            let mut s = String::from("letter,max_delta");
            for (l, m) in profile.per_letter_max.iter().enumerate() {
                let _ = write!(s, "\n{l},{m}");
            }
            s
        }
        Format::Json => json(&BalanceJson {
            n_max: profile.n_max,
            per_letter_max: profile.per_letter_max.clone(),
        }),
    }
}

/// JSON rendering of a stabilization report; shared with the C ABI layer.
pub fn stabilization_report_json(report: &StabilizationReport) -> String {
    render_stabilization(Format::Json, report)
}

/// JSON rendering of the Z-set of `n`; shared with the C ABI layer.
pub fn zset_json(n: &BigUint, zset: &ZSet, subst: &ParrySubstitution) -> String {
    render_zset(Format::Json, n, zset, subst)
}
