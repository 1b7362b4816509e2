//! Certificates: the problem, the verdict, and a witness that can be
//! replayed against the problem.
//!
//! Certificates serialize to JSON. The text form lists every JSON leaf as
//! `path: value` with the value written as a JSON literal, so it converts
//! back to the same document.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::bounds::{BoundMode, BoundValue};
use crate::error::{Error, Result};
use crate::lattice::ParikhVector;

pub const FORMAT: &str = "morphic-certificate/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub format: String,
    pub problem: Problem,
    pub verdict: Verdict,
    pub witness: Witness,
    pub bounds: Option<BoundProvenance>,
    pub replay: String,
}

/// A morphism in the text format together with the seed label, when the
/// morphism is iterated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeededMorphism {
    pub morphism: String,
    pub seed: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Problem {
    D0lEquivalence {
        left: SeededMorphism,
        right: SeededMorphism,
        options: DecisionOptions,
    },
    Hd0lEquivalence {
        left: SeededMorphism,
        left_coding: String,
        right: SeededMorphism,
        right_coding: String,
        options: DecisionOptions,
    },
    Periodicity {
        substitution: SeededMorphism,
        coding: String,
        options: DecisionOptions,
    },
    CommonPower {
        left: String,
        right: String,
        seed: String,
        search: SearchBounds,
        options: DecisionOptions,
    },
}

/// How prefix lengths are chosen for successive levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelSchedule {
    /// Iterated derivation on the first letter: `w₁` is the first letter,
    /// `w_{i+1} = Θ_{x,w_i}(0) · w_i`.
    Derivation,
    /// `|w_n| = 2^n`.
    Doubling,
    /// `|w_n| = (K+1)^n + 1` with `K` the larger of the two `K_σ`.
    Theorem,
}

impl std::fmt::Display for LevelSchedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LevelSchedule::Derivation => "derivation",
            LevelSchedule::Doubling => "doubling",
            LevelSchedule::Theorem => "theorem",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionOptions {
    /// Cap on materialized symbols per stream.
    pub budget: usize,
    pub schedule: LevelSchedule,
    /// Cap on the number of levels explored.
    pub max_levels: usize,
    pub bound_mode: BoundMode,
}

impl Default for DecisionOptions {
    fn default() -> Self {
        DecisionOptions {
            budget: crate::stream::DEFAULT_BUDGET,
            schedule: LevelSchedule::Derivation,
            max_levels: 64,
            bound_mode: BoundMode::Certificate,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_prefix_levels: usize,
    pub max_exponent: u32,
    /// Length of the common prefix re-verified before searching.
    pub verify_prefix: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_prefix_levels: 10,
            max_exponent: 8,
            verify_prefix: 1 << 16,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equal,
    NotEqual,
    Periodic,
    Aperiodic,
    CommonPower,
    NoConclusion,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Equal => "Equal",
            Verdict::NotEqual => "NotEqual",
            Verdict::Periodic => "Periodic",
            Verdict::Aperiodic => "Aperiodic",
            Verdict::CommonPower => "CommonPower",
            Verdict::NoConclusion => "NoConclusion",
        })
    }
}

/// The matched data at one level of an equivalence run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelState {
    pub level: usize,
    pub prefix_length: usize,
    /// Return words of both sequences to the common prefix, in order.
    pub return_words: Vec<String>,
    /// `(σ_u, τ_v)` or `(λ_u, σ_u, λ_v, τ_v)`, in the text format.
    pub tuple: Vec<String>,
}

/// One level of a periodicity run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationLevel {
    pub level: usize,
    pub prefix_length: usize,
    pub return_word_count: usize,
}

/// Evidence gathered at one prefix by the common-power search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PowerLevel {
    pub level: usize,
    pub prefix_length: usize,
    pub return_word_count: usize,
    /// `(p, q)` with `σ_u^p = τ_u^q`, if one was found.
    pub exponents: Option<(u32, u32)>,
    pub parikh_vectors: Vec<ParikhVector>,
    pub lattice_rank: usize,
    pub lattice_full: bool,
    pub colinear: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// Two levels `n < m` with equal prefixes, equal return words at both,
    /// and equal tuples; the refinement between them is prolongable.
    LevelRepeat {
        first: LevelState,
        second: LevelState,
        /// `|Φ(0)|` for the refinement `Θ_n ∘ Φ = Θ_m`.
        refinement_first_image_length: usize,
    },
    /// First position where the sequences differ.
    Difference {
        position: usize,
        left: String,
        right: String,
    },
    /// Both sequences periodic and equal on `compared` symbols.
    PeriodicAgreement {
        left_period: usize,
        right_period: usize,
        compared: usize,
    },
    /// A prefix with a single return word; the sequence is that word
    /// repeated.
    PeriodWord {
        level: usize,
        prefix_length: usize,
        period: String,
        period_length: usize,
        preperiod: usize,
    },
    /// The pair `(λ, σ_u)` recurs between two levels while every level so
    /// far has at least two return words.
    DerivationCycle {
        first: usize,
        second: usize,
        lambda: String,
        substitution: String,
        levels: Vec<DerivationLevel>,
    },
    /// `σ^p = τ^q`, established at a prefix whose return words have Parikh
    /// vectors spanning the full lattice.
    Exponents {
        sigma_exponent: u32,
        tau_exponent: u32,
        evidence: PowerLevel,
    },
    /// Per-prefix evidence when the search found no common power.
    Inconclusive {
        levels: Vec<PowerLevel>,
        summary: String,
    },
}

/// Which constants back the certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundProvenance {
    pub mode: BoundMode,
    pub note: String,
    pub k_left: BoundValue,
    pub k_right: Option<BoundValue>,
    /// Level bound of the procedure.
    pub k: BoundValue,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn to_text(&self) -> String {
        let v = serde_json::to_value(self).expect("certificates serialize");
        flatten(&v)
    }

    /// Parses either the JSON or the text form.
    pub fn parse(input: &str) -> Result<Certificate> {
        let value = if input.trim_start().starts_with('{') {
            serde_json::from_str(input).map_err(|e| Error::Certificate(e.to_string()))?
        } else {
            unflatten(input)?
        };
        let cert: Certificate =
            serde_json::from_value(value).map_err(|e| Error::Certificate(e.to_string()))?;
        if cert.format != FORMAT {
            return Err(Error::Certificate(format!(
                "unsupported format {}",
                cert.format
            )));
        }
        Ok(cert)
    }
}

/// Lists every leaf as `path: literal`, one per line.
pub fn flatten(v: &Value) -> String {
    let mut out = String::new();
    walk(v, String::new(), &mut out);
    out
}

fn walk(v: &Value, path: String, out: &mut String) {
    match v {
        Value::Object(m) if !m.is_empty() => {
            for (k, child) in m {
                let p = if path.is_empty() {
                    k.clone()
                } else {
                    format!("{path}.{k}")
                };
                walk(child, p, out);
            }
        }
        Value::Array(a) if !a.is_empty() => {
            for (i, child) in a.iter().enumerate() {
                walk(child, format!("{path}[{i}]"), out);
            }
        }
        leaf => {
            out.push_str(&path);
            out.push_str(": ");
            out.push_str(&leaf.to_string());
            out.push('\n');
        }
    }
}

enum Seg {
    Key(String),
    Index(usize),
}

fn segments(path: &str) -> Result<Vec<Seg>> {
    let bad = || Error::Certificate(format!("malformed path `{path}`"));
    let mut segs = Vec::new();
    for part in path.split('.') {
        let (key, mut rest) = match part.find('[') {
            Some(i) => (&part[..i], &part[i..]),
            None => (part, ""),
        };
        if key.is_empty() {
            return Err(bad());
        }
        segs.push(Seg::Key(key.to_string()));
        while !rest.is_empty() {
            let close = rest.find(']').ok_or_else(bad)?;
            let idx = rest[1..close].parse().map_err(|_| bad())?;
            segs.push(Seg::Index(idx));
            rest = &rest[close + 1..];
        }
    }
    Ok(segs)
}

fn insert(slot: &mut Value, segs: &[Seg], leaf: Value) -> Result<()> {
    let Some((first, rest)) = segs.split_first() else {
        *slot = leaf;
        return Ok(());
    };
    match first {
        Seg::Key(k) => {
            if slot.is_null() {
                *slot = Value::Object(Map::new());
            }
            let obj = slot
                .as_object_mut()
                .ok_or_else(|| Error::Certificate(format!("`{k}` under a non-object")))?;
            insert(obj.entry(k.clone()).or_insert(Value::Null), rest, leaf)
        }
        Seg::Index(i) => {
            if slot.is_null() {
                *slot = Value::Array(Vec::new());
            }
            let arr = slot
                .as_array_mut()
                .ok_or_else(|| Error::Certificate("index under a non-array".into()))?;
            if *i > arr.len() {
                return Err(Error::Certificate("array indices out of order".into()));
            }
            if *i == arr.len() {
                arr.push(Value::Null);
            }
            insert(&mut arr[*i], rest, leaf)
        }
    }
}

/// Inverse of [`flatten`].
pub fn unflatten(text: &str) -> Result<Value> {
    let mut root = Value::Object(Map::new());
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (path, literal) = line
            .split_once(": ")
            .ok_or_else(|| Error::Certificate(format!("line {}: expected `path: value`", n + 1)))?;
        let leaf: Value = serde_json::from_str(literal)
            .map_err(|e| Error::Certificate(format!("line {}: {e}", n + 1)))?;
        insert(&mut root, &segments(path)?, leaf)?;
    }
    Ok(root)
}
