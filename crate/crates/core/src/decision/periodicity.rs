//! Periodicity of `φ(σ^ω(a))` for primitive `σ`.

use crate::bounds::bound_set;
use crate::certificate::{
    BoundProvenance, Certificate, DecisionOptions, DerivationLevel, Problem, SeededMorphism,
    Verdict, Witness, FORMAT,
};
use crate::error::{Error, Result};
use crate::matrix::{is_prolongable_on, primitivity};
use crate::morphism::Morphism;
use crate::normalize::normalize_morphic;
use crate::words::{Letter, Word};

use super::{text_of, Side};

pub(crate) enum PeriodicityOutcome {
    Periodic {
        level: usize,
        prefix_length: usize,
        period: Word,
    },
    Aperiodic {
        first: usize,
        second: usize,
        lambda: Morphism,
        substitution: Morphism,
        levels: Vec<DerivationLevel>,
    },
}

impl PeriodicityOutcome {
    pub fn period_length(&self) -> Option<usize> {
        match self {
            PeriodicityOutcome::Periodic { period, .. } => Some(period.len()),
            PeriodicityOutcome::Aperiodic { .. } => None,
        }
    }
}

/// Derives the image sequence on its first letter again and again. A level
/// with a single return word proves periodicity (that word is the least
/// period). A recurring `(λ, σ_u)` pair means the derived sequences recur,
/// so the levels to come repeat ones already seen, none of which had a
/// single return word.
pub(crate) fn side_periodicity(side: &mut Side, max_levels: usize) -> Result<PeriodicityOutcome> {
    let mut len = 1;
    let mut levels = Vec::new();
    let mut seen: Vec<(usize, Morphism, Morphism)> = Vec::new();
    for level in 1..=max_levels {
        if len > side.budget() {
            return Err(Error::budget("derivation prefix", len, side.budget()));
        }
        let lvl = side.level(len)?;
        let count = lvl.image_words().len();
        levels.push(DerivationLevel {
            level,
            prefix_length: len,
            return_word_count: count,
        });
        if count == 1 {
            return Ok(PeriodicityOutcome::Periodic {
                level,
                prefix_length: len,
                period: lvl.image_words()[0].clone(),
            });
        }
        let lambda = lvl.lambda.lambda.clone();
        let sub = lvl.substitution().clone();
        if let Some((first, _, _)) = seen.iter().find(|(_, l, s)| *l == lambda && *s == sub) {
            return Ok(PeriodicityOutcome::Aperiodic {
                first: *first,
                second: level,
                lambda,
                substitution: sub,
                levels,
            });
        }
        seen.push((level, lambda, sub));
        len += lvl.image_words()[0].len();
    }
    Err(Error::budget(
        "derivation levels without a repeat",
        max_levels + 1,
        max_levels,
    ))
}

/// Rewrites `φ(σ^ω(a))` as `χ(τ^ω(seed))` with `τ` primitive and `χ`
/// letter to letter (erasing `φ` is absorbed by the marker construction).
pub(crate) fn periodicity_side(
    sigma: &Morphism,
    a: Letter,
    phi: &Morphism,
    budget: usize,
) -> Result<Side> {
    if !primitivity(sigma)?.primitive {
        return Err(Error::domain("substitution is not primitive"));
    }
    if !sigma.source().contains(a) || !is_prolongable_on(sigma, a)? {
        return Err(Error::domain(format!(
            "substitution is not prolongable on {}",
            if sigma.source().contains(a) {
                sigma.source().label(a)
            } else {
                "the seed"
            }
        )));
    }
    let phi = if phi.source() == sigma.source() {
        phi.clone()
    } else {
        phi.with_source(sigma.source())?
    };
    if phi.images().iter().all(|w| w.is_empty()) {
        return Err(Error::domain("coding erases every letter"));
    }
    let norm = normalize_morphic(sigma, a, &phi)?;
    Side::new(norm.tau, norm.seed, norm.chi, budget)
}

/// Decides whether `φ(σ^ω(a))` is periodic.
pub fn hd0l_periodicity(
    sigma: &Morphism,
    a: Letter,
    phi: &Morphism,
    opts: &DecisionOptions,
) -> Result<Certificate> {
    let mut side = periodicity_side(sigma, a, phi, opts.budget)?;
    let outcome = side_periodicity(&mut side, opts.max_levels)?;
    let target = side.chi().target().clone();
    let (verdict, witness) = match outcome {
        PeriodicityOutcome::Periodic {
            level,
            prefix_length,
            period,
        } => (
            Verdict::Periodic,
            Witness::PeriodWord {
                level,
                prefix_length,
                period: target.render(&period),
                period_length: period.len(),
                preperiod: 0,
            },
        ),
        PeriodicityOutcome::Aperiodic {
            first,
            second,
            lambda,
            substitution,
            levels,
        } => (
            Verdict::Aperiodic,
            Witness::DerivationCycle {
                first,
                second,
                lambda: text_of("lambda", &lambda),
                substitution: text_of("sigma_u", &substitution),
                levels,
            },
        ),
    };
    let bs = bound_set(sigma, opts.bound_mode)?;
    let bounds = BoundProvenance {
        mode: opts.bound_mode,
        note: format!(
            "Q ranges over exponents 0..={} with the row-ratio term of the positive power; \
             levels follow the derivation tower of the image and stop at the first repeat instead of running to K",
            bs.q_range
        ),
        k_left: bs.k_sigma.value(),
        k_right: None,
        k: bs.periodicity_bound().value(),
    };
    Ok(Certificate {
        format: FORMAT.into(),
        problem: Problem::Periodicity {
            substitution: SeededMorphism {
                morphism: text_of("sigma", sigma),
                seed: sigma.source().label(a).to_string(),
            },
            coding: text_of("phi", phi),
            options: *opts,
        },
        verdict,
        witness,
        bounds: Some(bounds),
        replay: "morphic --replay <certificate>: rebuilds the level named by the witness \
                 (single return word, or the recurring pair) from the problem"
            .into(),
    })
}
