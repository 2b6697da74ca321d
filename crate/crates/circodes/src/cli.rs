//! Command-line front end. [`run`] does all the work and returns the exit code
//! with the captured output, so tests can drive it without a process.
//!
//! Exit codes: 0 on success, 1 when the answer is negative (no code, no tiling,
//! formula and oracle disagree), 2 on invalid input.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use serde::Serialize;

use crate::codes::{build_code, lower_bound, CodeRecipe, RecipeSpace};
use crate::counting::{count_enumerate, count_formula, CountParams};
use crate::error::Error;
use crate::lifts::{
    enumerate_lifts, family_union, g_lift, generate_family, multiplier_closure, FamilySpec,
};
use crate::pyramidal::{admissible_series, decide_existence, AdmissibleSeries};
use crate::tiling::{
    enumerate_perfect_codes_limited, find_perfect_code, is_direct_sum, validate_connection_set,
};
use crate::zmod::{exact_log, project, ResidueSet, Subgroup};

/// Records printed before the truncation marker when `--stream` is off.
pub const RECORD_CAP: usize = 10_000;

#[derive(Debug, Parser)]
#[command(name = "circodes", version, about = "Perfect codes in circulant graphs")]
struct Cli {
    /// Worker threads for parallel searches.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SetArgs {
    /// Connection set `n:e1,e2,...`; 0 may be included or left out.
    #[arg(long = "set")]
    sets: Vec<String>,
    /// Read further sets from a file, one per line.
    #[arg(long)]
    file: Option<PathBuf>,
    #[arg(long)]
    p: u64,
    /// Inferred from `|S| + 1 = p^l` when omitted.
    #[arg(long)]
    l: Option<u32>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a perfect code exists.
    Check(SetArgs),
    /// Longest admissible series and all alternatives.
    Series(SetArgs),
    /// One perfect code containing 0.
    FindCode {
        #[command(flatten)]
        set: SetArgs,
        /// Use the exact-cover search instead of the construction.
        #[arg(long)]
        oracle: bool,
    },
    /// All constructed codes, or all codes.
    EnumerateCodes {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, conflicts_with = "all")]
        constructed: bool,
        #[arg(long)]
        all: bool,
        /// One set per line, without the record cap.
        #[arg(long)]
        stream: bool,
    },
    /// Lifts of an extended set `S_0` by a factor.
    Lift {
        #[arg(long)]
        set: String,
        #[arg(long)]
        by: u64,
        /// `f` (default) or `g`.
        #[arg(long, default_value = "f")]
        kind: String,
        /// Keep only lifts that generate the group.
        #[arg(long)]
        connected: bool,
        #[arg(long)]
        stream: bool,
    },
    /// Quotient `X mod d`.
    Project {
        #[arg(long)]
        set: String,
        #[arg(long)]
        by: u64,
    },
    /// Members of one family, or of all families for `n = p^l m`.
    Family {
        #[arg(long)]
        p: u64,
        #[arg(long, value_delimiter = ',')]
        l_seq: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        m_seq: Vec<u64>,
        #[arg(long)]
        n: Option<u64>,
        #[arg(long)]
        l: Option<u32>,
        /// Also apply every multiplier `x -> ux`.
        #[arg(long)]
        closed: bool,
        #[arg(long, default_value_t = 1_000_000)]
        budget: usize,
        #[arg(long)]
        stream: bool,
    },
    /// Closed-form count, optionally checked by enumeration.
    Count {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 200_000_000)]
        budget: usize,
    },
    /// Lower bound on the number of codes containing 0.
    LowerBound {
        #[arg(long = "set")]
        sets: Vec<String>,
        #[arg(long)]
        series: Option<String>,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        l: Option<u32>,
    },
    /// Whether `Z_n = A ⊕ B`.
    VerifyTiling {
        #[arg(long = "set", num_args = 1)]
        sets: Vec<String>,
    },
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type Res = std::result::Result<(i32, String), Failure>;

#[derive(Serialize)]
struct SeriesDoc {
    modulus: u64,
    periods: u64,
    subgroups: Vec<u64>,
    h: Vec<u32>,
    k: Vec<u64>,
    l: Vec<u32>,
    m: Vec<u64>,
    t: usize,
}

impl From<&AdmissibleSeries> for SeriesDoc {
    fn from(s: &AdmissibleSeries) -> Self {
        Self {
            modulus: s.modulus(),
            periods: s.generators()[0],
            subgroups: s.generators()[1..].to_vec(),
            h: s.h_seq().to_vec(),
            k: s.k_seq().to_vec(),
            l: s.l_seq().to_vec(),
            m: s.m_seq().to_vec(),
            t: s.t(),
        }
    }
}

#[derive(Serialize)]
struct CheckDoc {
    set: String,
    p: u64,
    l: u32,
    exists: bool,
    divides: bool,
    pyramidal: bool,
    aperiodic: bool,
    subgroup_code: bool,
    non_subgroup_codes: bool,
    series: Option<SeriesDoc>,
}

#[derive(Serialize)]
struct SeriesListDoc {
    set: String,
    pyramidal: bool,
    series: Option<SeriesDoc>,
    admissible: Vec<SeriesDoc>,
}

#[derive(Serialize)]
struct CodesDoc {
    set: String,
    method: &'static str,
    count: Option<String>,
    truncated: bool,
    codes: Vec<String>,
}

#[derive(Serialize)]
struct BoundDoc {
    set: Option<String>,
    pyramidal: bool,
    series: Option<SeriesDoc>,
    lower_bound: Option<String>,
}

#[derive(Serialize)]
struct CountDoc {
    n: u64,
    p: u64,
    l: u32,
    formula: Option<String>,
    oracle: Option<String>,
    #[serde(rename = "match")]
    matches: Option<bool>,
}

#[derive(Serialize)]
struct TilingDoc {
    left: String,
    right: String,
    tiling: bool,
}

#[derive(Serialize)]
struct Many<T> {
    results: Vec<T>,
}

fn json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

/// One document for one set, `{"results": [...]}` for several.
fn emit<T: Serialize>(mut docs: Vec<T>) -> String {
    if docs.len() == 1 {
        json(&docs.pop().expect("one document"))
    } else {
        json(&Many { results: docs })
    }
}

fn parse_set(text: &str, origin: &str) -> std::result::Result<ResidueSet, Failure> {
    text.trim().parse().map_err(|e: Error| Failure(format!("{origin}: {e}")))
}

fn collect_sets(args: &SetArgs) -> std::result::Result<Vec<ResidueSet>, Failure> {
    let mut out = Vec::new();
    for s in &args.sets {
        out.push(parse_set(s, "--set")?);
    }
    if let Some(path) = &args.file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            out.push(parse_set(line, &format!("{} line {}", path.display(), i + 1))?);
        }
    }
    if out.is_empty() {
        return Err(Failure("no set given; use --set or --file".into()));
    }
    Ok(out)
}

/// `S` without 0 and the exponent `l`.
fn connection(s: &ResidueSet, p: u64, l: Option<u32>) -> std::result::Result<(ResidueSet, u32), Failure> {
    let s = s.without_zero();
    validate_connection_set(&s)?;
    let ell = match l {
        Some(l) => l,
        None => exact_log(p, s.len() as u64 + 1)
            .filter(|&l| l > 0)
            .ok_or_else(|| Failure(format!("|S| + 1 = {} is not a power of {p}", s.len() + 1)))?,
    };
    Ok((s, ell))
}

fn check(args: &SetArgs) -> Res {
    let mut docs = Vec::new();
    let mut all = true;
    for s in collect_sets(args)? {
        let (s, ell) = connection(&s, args.p, args.l)?;
        let e = decide_existence(&s, args.p, ell)?;
        all &= e.exists;
        docs.push(CheckDoc {
            set: s.to_string(),
            p: args.p,
            l: ell,
            exists: e.exists,
            divides: e.divides,
            pyramidal: e.pyramidal,
            aperiodic: e.aperiodic,
            subgroup_code: e.subgroup_code,
            non_subgroup_codes: e.non_subgroup_codes,
            series: e.series.as_ref().map(SeriesDoc::from),
        });
    }
    Ok((if all { 0 } else { 1 }, emit(docs)))
}

fn series(args: &SetArgs) -> Res {
    let mut docs = Vec::new();
    let mut all = true;
    for s in collect_sets(args)? {
        let (s, ell) = connection(&s, args.p, args.l)?;
        let s0 = s.with_zero();
        let found = admissible_series(&s0, args.p, ell)?;
        let best = found.iter().map(AdmissibleSeries::t).max();
        let longest = best.and_then(|t| found.iter().find(|x| x.t() == t));
        all &= longest.is_some();
        docs.push(SeriesListDoc {
            set: s0.to_string(),
            pyramidal: longest.is_some(),
            series: longest.map(SeriesDoc::from),
            admissible: found.iter().map(SeriesDoc::from).collect(),
        });
    }
    Ok((if all { 0 } else { 1 }, emit(docs)))
}

fn recipe_space(s: &ResidueSet, p: u64, ell: u32) -> std::result::Result<Option<RecipeSpace>, Failure> {
    let e = decide_existence(s, p, ell)?;
    Ok(e.series.map(RecipeSpace::new))
}

fn find_code(args: &SetArgs, oracle: bool) -> Res {
    let mut docs = Vec::new();
    let mut all = true;
    for s in collect_sets(args)? {
        let (s, ell) = connection(&s, args.p, args.l)?;
        let code = if oracle {
            find_perfect_code(&s)?
        } else {
            match recipe_space(&s, args.p, ell)? {
                Some(space) => Some(build_code(&s.with_zero(), &CodeRecipe::zero(space.series().clone()))?),
                None => None,
            }
        };
        all &= code.is_some();
        docs.push(CodesDoc {
            set: s.to_string(),
            method: if oracle { "oracle" } else { "constructed" },
            count: None,
            truncated: false,
            codes: code.iter().map(ToString::to_string).collect(),
        });
    }
    Ok((if all { 0 } else { 1 }, emit(docs)))
}

fn enumerate_codes(args: &SetArgs, all_codes: bool, stream: bool) -> Res {
    let limit = if stream { usize::MAX } else { RECORD_CAP };
    let mut docs = Vec::new();
    let mut lines = String::new();
    let mut any = true;
    for s in collect_sets(args)? {
        let (s, ell) = connection(&s, args.p, args.l)?;
        let (codes, count, truncated) = if all_codes {
            let (codes, truncated) = enumerate_perfect_codes_limited(&s, limit)?;
            let count = (!truncated).then(|| codes.len().to_string());
            (codes, count, truncated)
        } else {
            match recipe_space(&s, args.p, ell)? {
                Some(space) => {
                    let total = space.len();
                    let codes: Vec<_> = space.iter().take(limit).map(|r| space.code(&r)).collect();
                    let truncated = BigUint::from(codes.len()) < total;
                    (codes, Some(total.to_string()), truncated)
                }
                None => (Vec::new(), Some("0".into()), false),
            }
        };
        any &= !codes.is_empty();
        if stream {
            for c in &codes {
                let _ = writeln!(lines, "{c}");
            }
        }
        docs.push(CodesDoc {
            set: s.to_string(),
            method: if all_codes { "oracle" } else { "constructed" },
            count,
            truncated,
            codes: codes.iter().map(ToString::to_string).collect(),
        });
    }
    let out = if stream { lines } else { emit(docs) };
    Ok((if any { 0 } else { 1 }, out))
}

fn set_lines<I: IntoIterator<Item = ResidueSet>>(sets: I, stream: bool) -> String {
    let mut out = String::new();
    for (i, s) in sets.into_iter().enumerate() {
        if !stream && i == RECORD_CAP {
            out.push_str("# truncated\n");
            break;
        }
        let _ = writeln!(out, "{s}");
    }
    out
}

fn lift(set: &str, by: u64, kind: &str, connected: bool, stream: bool) -> Res {
    let s0 = parse_set(set, "--set")?;
    match kind {
        "g" => Ok((0, set_lines([g_lift(&s0, by)?], stream))),
        "f" => {
            let lifts = enumerate_lifts(&s0, by, connected)?.map(|l| l.lifted());
            let out = set_lines(lifts, stream);
            Ok((if out.is_empty() { 1 } else { 0 }, out))
        }
        other => Err(Failure(format!("--kind must be f or g, got {other:?}"))),
    }
}

fn project_cmd(set: &str, by: u64) -> Res {
    let x = parse_set(set, "--set")?;
    let n = x.modulus();
    if by == 0 || n % by != 0 {
        return Err(Failure(format!("--by {by} does not divide {n}")));
    }
    let q = project(&x, &Subgroup::new(n, by)?)?;
    Ok((0, format!("{q}\n")))
}

#[allow(clippy::too_many_arguments)]
fn family(
    p: u64,
    l_seq: Vec<u32>,
    m_seq: Vec<u64>,
    n: Option<u64>,
    l: Option<u32>,
    closed: bool,
    budget: usize,
    stream: bool,
) -> Res {
    let members: Vec<ResidueSet> = match (n, l) {
        (Some(n), Some(l)) if l_seq.is_empty() && m_seq.is_empty() => {
            family_union(n, p, l, budget)?.into_iter().collect()
        }
        (None, None) => generate_family(&FamilySpec::new(p, l_seq, m_seq)?, budget)?,
        _ => {
            return Err(Failure(
                "give either --l-seq and --m-seq, or --n and --l".into(),
            ))
        }
    };
    let members = if closed { multiplier_closure(&members).into_iter().collect() } else { members };
    let out = set_lines(members, stream);
    Ok((if out.is_empty() { 1 } else { 0 }, out))
}

fn count(n: u64, p: u64, l: u32, oracle: bool, budget: usize) -> Res {
    let params = CountParams::new(n, p, l)?;
    let formula = match count_formula(&params) {
        Ok(v) => Some(v),
        Err(e @ Error::OutOfHypothesis(_)) if !oracle => return Err(e.into()),
        Err(Error::OutOfHypothesis(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let counted = if oracle { Some(count_enumerate(&params, budget)?) } else { None };
    let matches = match (&formula, &counted) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    let doc = CountDoc {
        n,
        p,
        l,
        formula: formula.map(|v| v.to_string()),
        oracle: counted.map(|v| v.to_string()),
        matches,
    };
    Ok((if matches == Some(false) { 1 } else { 0 }, json(&doc)))
}

fn lower_bound_cmd(sets: &[String], series: Option<&str>, p: Option<u64>, l: Option<u32>) -> Res {
    if let Some(text) = series {
        let s: AdmissibleSeries = text.trim().parse().map_err(|e: Error| Failure(format!("--series: {e}")))?;
        let doc = BoundDoc {
            set: None,
            pyramidal: true,
            series: Some((&s).into()),
            lower_bound: Some(lower_bound(&s).to_string()),
        };
        return Ok((0, json(&doc)));
    }
    let p = p.ok_or_else(|| Failure("--p is required with --set".into()))?;
    if sets.is_empty() {
        return Err(Failure("give --set or --series".into()));
    }
    let mut docs = Vec::new();
    let mut all = true;
    for text in sets {
        let (s, ell) = connection(&parse_set(text, "--set")?, p, l)?;
        let series = recipe_space(&s, p, ell)?.map(|space| space.series().clone());
        all &= series.is_some();
        docs.push(BoundDoc {
            set: Some(s.to_string()),
            pyramidal: series.is_some(),
            lower_bound: series.as_ref().map(|x| lower_bound(x).to_string()),
            series: series.as_ref().map(SeriesDoc::from),
        });
    }
    Ok((if all { 0 } else { 1 }, emit(docs)))
}

fn verify_tiling(sets: &[String]) -> Res {
    let [a, b] = sets else {
        return Err(Failure(format!("verify-tiling needs exactly two --set, got {}", sets.len())));
    };
    let a = parse_set(a, "--set")?;
    let b = parse_set(b, "--set")?;
    let ok = is_direct_sum(&a, &b)?;
    let doc = TilingDoc { left: a.to_string(), right: b.to_string(), tiling: ok };
    Ok((if ok { 0 } else { 1 }, json(&doc)))
}

fn dispatch(cmd: Command) -> Res {
    match cmd {
        Command::Check(a) => check(&a),
        Command::Series(a) => series(&a),
        Command::FindCode { set, oracle } => find_code(&set, oracle),
        Command::EnumerateCodes { set, constructed: _, all, stream } => enumerate_codes(&set, all, stream),
        Command::Lift { set, by, kind, connected, stream } => lift(&set, by, &kind, connected, stream),
        Command::Project { set, by } => project_cmd(&set, by),
        Command::Family { p, l_seq, m_seq, n, l, closed, budget, stream } => {
            family(p, l_seq, m_seq, n, l, closed, budget, stream)
        }
        Command::Count { n, p, l, oracle, budget } => count(n, p, l, oracle, budget),
        Command::LowerBound { sets, series, p, l } => lower_bound_cmd(&sets, series.as_deref(), p, l),
        Command::VerifyTiling { sets } => verify_tiling(&sets),
    }
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let result = match cli.threads {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command)),
            Err(e) => Err(Failure(format!("--threads: {e}"))),
        },
        None => dispatch(cli.command),
    };
    match result {
        Ok((code, stdout)) => Outcome { code, stdout, stderr: String::new() },
        Err(Failure(msg)) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") },
    }
}
