//! Command-line front end.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bounds::{bound_set, BoundMode};
use crate::certificate::{flatten, Certificate, DecisionOptions, LevelSchedule, SearchBounds};
use crate::decision::{
    common_power_check, d0l_equivalence, hd0l_equivalence, hd0l_periodicity, verify_certificate,
};
use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::normalize::normalize_morphic;
use crate::returns::{build_return_structure, derived_prefix, lambda_morphism, ReturnStructure};
use crate::stream::{FixedPointStream, DEFAULT_BUDGET};
use crate::text::{format_morphism, parse_morphisms};
use crate::words::{Letter, Word};

#[derive(Parser, Debug)]
#[command(
    name = "morphic",
    version,
    about = "Return words, derived sequences and decision procedures for primitive substitutions",
    args_conflicts_with_subcommands = true
)]
pub struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    /// Re-verify a certificate (JSON or text form).
    #[arg(long, value_name = "FILE")]
    replay: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Maximum number of materialized symbols per stream.
    #[arg(long, default_value_t = DEFAULT_BUDGET, global = true)]
    budget: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Certificate,
    Practical,
}

impl From<ModeArg> for BoundMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Certificate => BoundMode::Certificate,
            ModeArg::Practical => BoundMode::Practical,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScheduleArg {
    Derivation,
    Doubling,
    Theorem,
}

impl From<ScheduleArg> for LevelSchedule {
    fn from(s: ScheduleArg) -> Self {
        match s {
            ScheduleArg::Derivation => LevelSchedule::Derivation,
            ScheduleArg::Doubling => LevelSchedule::Doubling,
            ScheduleArg::Theorem => LevelSchedule::Theorem,
        }
    }
}

/// A morphism file, optionally `FILE#NAME` to pick one of several.
#[derive(Args, Debug)]
struct Source {
    /// Morphism file (`FILE` or `FILE#NAME`).
    #[arg(long)]
    morphism: String,
    /// Seed letter the substitution is iterated on.
    #[arg(long)]
    seed: String,
}

#[derive(Args, Debug)]
struct PrefixArgs {
    /// Length of the prefix `u` of the fixed point.
    #[arg(long, default_value_t = 1, conflicts_with = "prefix")]
    prefix_letter_count: usize,
    /// The prefix `u` itself, as letters (spaces optional for one-character
    /// labels).
    #[arg(long)]
    prefix: Option<String>,
}

#[derive(Args, Debug)]
struct DecisionArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Certificate)]
    bound_mode: ModeArg,
    #[arg(long, value_enum, default_value_t = ScheduleArg::Derivation)]
    schedule: ScheduleArg,
    /// Maximum number of levels explored.
    #[arg(long, default_value_t = 64)]
    max_levels: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Return words to a prefix and the derived sequence, iterated.
    Derive {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        prefix: PrefixArgs,
        /// Number of derived symbols to print.
        #[arg(long, default_value_t = 32)]
        length: usize,
        /// Number of successive derivations (later ones on the first letter).
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// The return substitution and its coding.
    ReturnSub {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        prefix: PrefixArgs,
    },
    /// The morphism carrying return words of `x` to those of `φ(x)`.
    Lambda {
        #[command(flatten)]
        source: Source,
        /// Letter-to-letter morphism file applied to the fixed point.
        #[arg(long)]
        coding: String,
        #[command(flatten)]
        prefix: PrefixArgs,
    },
    /// Constants of a primitive substitution.
    Bounds {
        /// Morphism file (`FILE` or `FILE#NAME`).
        #[arg(long)]
        morphism: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Certificate)]
        bound_mode: ModeArg,
    },
    /// Decide whether two D0L fixed points are equal.
    D0lEq {
        #[arg(long)]
        left: String,
        #[arg(long)]
        left_seed: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        right_seed: String,
        #[command(flatten)]
        decision: DecisionArgs,
    },
    /// Decide whether two morphic images of fixed points are equal.
    Hd0lEq {
        #[arg(long)]
        left: String,
        #[arg(long)]
        left_seed: String,
        #[arg(long)]
        left_coding: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        right_seed: String,
        #[arg(long)]
        right_coding: String,
        #[command(flatten)]
        decision: DecisionArgs,
    },
    /// Decide whether `φ(σ^ω(a))` is periodic (identity `φ` by default).
    Periodicity {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        coding: Option<String>,
        #[command(flatten)]
        decision: DecisionArgs,
    },
    /// Bounded search for `σ^p = τ^q` given a shared fixed point.
    CommonPower {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long)]
        seed: String,
        #[arg(long, default_value_t = 10)]
        max_prefix_levels: usize,
        #[arg(long, default_value_t = 8)]
        max_exponent: u32,
        /// Length of the common prefix re-checked before searching.
        #[arg(long, default_value_t = 1 << 16)]
        verify_prefix: usize,
        #[arg(long, default_value_t = 64)]
        max_levels: usize,
    },
    /// Rewrite `ρ(σ^ω(a))` as a coding of a primitive fixed point.
    Normalize {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        coding: String,
        /// Number of symbols checked against the direct expansion.
        #[arg(long, default_value_t = 1000)]
        check: usize,
    },
}

/// Loads the morphism named by `arg` (`FILE` or `FILE#NAME`).
pub fn load_morphism(arg: &str) -> Result<Morphism> {
    let (path, name) = match arg.rsplit_once('#') {
        Some((p, n)) => (p, Some(n)),
        None => (arg, None),
    };
    let text = std::fs::read_to_string(Path::new(path))
        .map_err(|e| Error::domain(format!("cannot read {path}: {e}")))?;
    let defs = parse_morphisms(&text)?;
    match name {
        Some(n) => defs
            .into_iter()
            .find(|d| d.name == n)
            .map(|d| d.morphism)
            .ok_or_else(|| Error::domain(format!("{path} defines no morphism named {n}"))),
        None if defs.len() == 1 => Ok(defs.into_iter().next().unwrap().morphism),
        None => Err(Error::domain(format!(
            "{path} defines {} morphisms ({}); pick one with {path}#NAME",
            defs.len(),
            defs.iter()
                .map(|d| d.name.as_str())
                .collect::<Vec<_>>()
                .join(", ")
        ))),
    }
}

fn seed_of(m: &Morphism, label: &str) -> Result<Letter> {
    m.source().letter(label).ok_or_else(|| {
        Error::domain(format!(
            "seed {label} is not a letter of the substitution (letters: {})",
            m.source().labels().join(" ")
        ))
    })
}

fn substitution(arg: &str) -> Result<Morphism> {
    let m = load_morphism(arg)?;
    if !m.is_endomorphism() {
        return Err(Error::domain(format!(
            "{arg} is not a substitution (its target differs from its source)"
        )));
    }
    Ok(m)
}

/// Reorders the source of `coding` onto the alphabet of `sigma`.
fn coding_for(sigma: &Morphism, arg: &str) -> Result<Morphism> {
    load_morphism(arg)?.with_source(sigma.source())
}

fn prefix_word(x: &mut FixedPointStream, p: &PrefixArgs) -> Result<Word> {
    match &p.prefix {
        Some(text) => x.substitution().source().clone().parse_word_loose(text),
        None => {
            if p.prefix_letter_count == 0 {
                return Err(Error::domain("prefix must be non-empty"));
            }
            Ok(Word::from(x.prefix(p.prefix_letter_count)?))
        }
    }
}

fn level_json(rs: &mut ReturnStructure, length: usize) -> Result<Value> {
    let alpha = rs.theta().target().clone();
    let words: Vec<String> = rs.return_words().iter().map(|w| alpha.render(w)).collect();
    let derived = derived_prefix(rs, length)?;
    Ok(json!({
        "prefix": alpha.render(rs.prefix()),
        "return_words": words,
        "derived": rs.derived_alphabet().render(&derived),
        "theta": format_morphism("theta", rs.theta()),
        "return_substitution": format_morphism("sigma_u", rs.return_substitution().expect("fixed point")),
    }))
}

fn options(d: &DecisionArgs, budget: usize) -> DecisionOptions {
    DecisionOptions {
        budget,
        schedule: d.schedule.into(),
        max_levels: d.max_levels,
        bound_mode: d.bound_mode.into(),
    }
}

enum Output {
    Value(Value),
    Certificate(Box<Certificate>),
}

fn execute(cli: &Cli) -> Result<Output> {
    let budget = cli.budget;
    if let Some(path) = &cli.replay {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::domain(format!("cannot read {}: {e}", path.display())))?;
        let cert = Certificate::parse(&text)?;
        verify_certificate(&cert)?;
        return Ok(Output::Value(json!({
            "replay": "ok",
            "problem": serde_json::to_value(&cert.problem).expect("serializable")["kind"].clone(),
            "verdict": serde_json::to_value(cert.verdict).expect("serializable"),
        })));
    }
    let Some(command) = &cli.command else {
        return Err(Error::domain("no subcommand given (see --help)"));
    };
    Ok(match command {
        Command::Derive {
            source,
            prefix,
            length,
            depth,
        } => {
            let sigma = substitution(&source.morphism)?;
            let a = seed_of(&sigma, &source.seed)?;
            let mut x = FixedPointStream::with_budget(sigma, a, budget)?;
            let u = prefix_word(&mut x, prefix)?;
            let mut rs = build_return_structure(&mut x, &u)?;
            let mut levels = vec![level_json(&mut rs, *length)?];
            for _ in 1..*depth {
                let inner = rs.return_substitution().expect("fixed point").clone();
                let mut y = FixedPointStream::with_budget(inner, 0, budget)?;
                rs = build_return_structure(&mut y, &[0])?;
                levels.push(level_json(&mut rs, *length)?);
            }
            Output::Value(json!({ "levels": levels }))
        }
        Command::ReturnSub { source, prefix } => {
            let sigma = substitution(&source.morphism)?;
            let a = seed_of(&sigma, &source.seed)?;
            let mut x = FixedPointStream::with_budget(sigma, a, budget)?;
            let u = prefix_word(&mut x, prefix)?;
            let rs = build_return_structure(&mut x, &u)?;
            Output::Value(json!({
                "prefix": x.substitution().source().render(&u),
                "theta": format_morphism("theta", rs.theta()),
                "return_substitution": format_morphism("sigma_u", rs.return_substitution().expect("fixed point")),
            }))
        }
        Command::Lambda {
            source,
            coding,
            prefix,
        } => {
            let sigma = substitution(&source.morphism)?;
            let a = seed_of(&sigma, &source.seed)?;
            let phi = coding_for(&sigma, coding)?;
            let mut x = FixedPointStream::with_budget(sigma, a, budget)?;
            let u = prefix_word(&mut x, prefix)?;
            let rs = build_return_structure(&mut x, &u)?;
            let lr = lambda_morphism(&rs, &phi)?;
            let target = lr.image.theta().target().clone();
            Output::Value(json!({
                "prefix": x.substitution().source().render(&u),
                "image_prefix": target.render(lr.image.prefix()),
                "image_return_words": lr.image.return_words().iter().map(|w| target.render(w)).collect::<Vec<_>>(),
                "lambda": format_morphism("lambda", &lr.lambda),
            }))
        }
        Command::Bounds {
            morphism,
            bound_mode,
        } => {
            let sigma = substitution(morphism)?;
            let bs = bound_set(&sigma, (*bound_mode).into())?;
            Output::Value(json!({
                "mode": bs.mode.to_string(),
                "alphabet_size": bs.d,
                "norm": bs.norm,
                "positivity_exponent": bs.positivity_exponent,
                "r": bs.r_bound.value(),
                "q": bs.q.to_string(),
                "q_range": bs.q_range,
                "practical_horizon": bs.horizon,
                "k_sigma": bs.k_sigma.value(),
                "return_count_bound": bs.return_count_bound().value(),
                "return_norm_bound": bs.return_norm_bound().value(),
                "return_substitution_count_bound": bs.return_substitution_count_bound().value(),
                "lambda_count_bound": bs.lambda_count_bound().value(),
                "periodicity_bound": bs.periodicity_bound().value(),
            }))
        }
        Command::D0lEq {
            left,
            left_seed,
            right,
            right_seed,
            decision,
        } => {
            let s = substitution(left)?;
            let t = substitution(right)?;
            let a = seed_of(&s, left_seed)?;
            let b = seed_of(&t, right_seed)?;
            Output::Certificate(Box::new(d0l_equivalence(
                &s,
                a,
                &t,
                b,
                &options(decision, budget),
            )?))
        }
        Command::Hd0lEq {
            left,
            left_seed,
            left_coding,
            right,
            right_seed,
            right_coding,
            decision,
        } => {
            let s = substitution(left)?;
            let t = substitution(right)?;
            let a = seed_of(&s, left_seed)?;
            let b = seed_of(&t, right_seed)?;
            let phi = coding_for(&s, left_coding)?;
            let psi = coding_for(&t, right_coding)?;
            Output::Certificate(Box::new(hd0l_equivalence(
                &s,
                a,
                &phi,
                &t,
                b,
                &psi,
                &options(decision, budget),
            )?))
        }
        Command::Periodicity {
            source,
            coding,
            decision,
        } => {
            let sigma = substitution(&source.morphism)?;
            let a = seed_of(&sigma, &source.seed)?;
            let phi = match coding {
                Some(c) => coding_for(&sigma, c)?,
                None => Morphism::identity(sigma.source()),
            };
            Output::Certificate(Box::new(hd0l_periodicity(
                &sigma,
                a,
                &phi,
                &options(decision, budget),
            )?))
        }
        Command::CommonPower {
            left,
            right,
            seed,
            max_prefix_levels,
            max_exponent,
            verify_prefix,
            max_levels,
        } => {
            let s = substitution(left)?;
            let t = substitution(right)?;
            let a = seed_of(&s, seed)?;
            let search = SearchBounds {
                max_prefix_levels: *max_prefix_levels,
                max_exponent: *max_exponent,
                verify_prefix: *verify_prefix,
            };
            let opts = DecisionOptions {
                budget,
                max_levels: *max_levels,
                ..DecisionOptions::default()
            };
            Output::Certificate(Box::new(common_power_check(&s, &t, a, &search, &opts)?))
        }
        Command::Normalize {
            source,
            coding,
            check,
        } => {
            let sigma = substitution(&source.morphism)?;
            let a = seed_of(&sigma, &source.seed)?;
            let rho = coding_for(&sigma, coding)?;
            let norm = normalize_morphic(&sigma, a, &rho)?;
            norm.verify(&sigma, &rho)?;
            let direct = {
                let mut x = FixedPointStream::with_budget(sigma.clone(), a, budget)?;
                let mut out = Vec::new();
                let mut i = 0;
                while out.len() < *check {
                    out.extend_from_slice(rho.image(x.at(i)?).as_slice());
                    i += 1;
                    if i > budget {
                        return Err(Error::budget("direct expansion of the image", i, budget));
                    }
                }
                out.truncate(*check);
                out
            };
            let mut stream = norm.stream(budget)?;
            if stream.prefix(*check)? != direct.as_slice() {
                return Err(Error::invariant(
                    "normalized sequence differs from the direct expansion",
                ));
            }
            Output::Value(json!({
                "k": norm.k,
                "n": norm.n,
                "seed": norm.tau.source().label(norm.seed),
                "tau": format_morphism("tau", &norm.tau),
                "chi": format_morphism("chi", &norm.chi),
                "psi": format_morphism("psi", &norm.psi),
                "phi": format_morphism("phi", &norm.phi),
                "checked_symbols": check,
            }))
        }
    })
}

fn render(out: &Output, format: Format) -> String {
    match (out, format) {
        (Output::Certificate(c), Format::Json) => c.to_json() + "\n",
        (Output::Certificate(c), Format::Text) => c.to_text(),
        (Output::Value(v), Format::Json) => {
            serde_json::to_string_pretty(v).expect("serializable") + "\n"
        }
        (Output::Value(v), Format::Text) => flatten(v),
    }
}

/// Exit status for an error: 2 for budget exhaustion, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Budget { .. } => 2,
        _ => 1,
    }
}

/// Runs one invocation, writing the document to stdout and diagnostics to
/// stderr. Returns the exit status.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(out) => {
            use std::io::Write;
            let text = render(&out, cli.format);
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return 1;
            }
            0
        }
        Err(e) => {
            eprintln!("morphic: {e}");
            exit_code(&e)
        }
    }
}
