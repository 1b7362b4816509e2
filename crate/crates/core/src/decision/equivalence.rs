//! ω-equivalence of `χ(σ^ω(a))` and `χ'(τ^ω(b))`.
//!
//! Equality is certified by two levels `n < m` at which both sequences have
//! the same prefixes `w_n ⊑ w_m`, the same return words to each, and the
//! same tuple `T`. Equal tuples make the derived sequences on `w_n` and
//! `w_m` agree, so on each side that derived sequence is a fixed point of
//! the refinement `Φ` (`Θ_{w_n} ∘ Φ = Θ_{w_m}`), which is the same map for
//! both sides. When `|Φ(0)| ≥ 2`, `Φ` has exactly one fixed point starting
//! with `0`, so both derived sequences, hence both sequences, coincide.
//!
//! Finitely many tuples exist, so when the sequences are equal a
//! qualifying pair turns up at some level; when they differ a difference
//! turns up at a finite position.

use crate::bounds::{bound_set, equivalence_bound_k, BoundSet};
use crate::certificate::{
    BoundProvenance, Certificate, DecisionOptions, LevelSchedule, LevelState, Problem,
    SeededMorphism, Verdict, Witness, FORMAT,
};
use crate::error::{Error, Result};
use crate::matrix::{is_prolongable_on, primitivity};
use crate::morphism::Morphism;
use crate::normalize::normalize_morphic;
use crate::words::{Alphabet, Letter};

use super::periodicity::side_periodicity;
use super::{first_difference, lcm, refinement, search_difference, text_of, Level, Side};

fn check_iterable(m: &Morphism, seed: Letter, which: &str) -> Result<()> {
    if !m.is_endomorphism() {
        return Err(Error::domain(format!(
            "{which} substitution is not an endomorphism"
        )));
    }
    if !primitivity(m)?.primitive {
        return Err(Error::domain(format!(
            "{which} substitution is not primitive"
        )));
    }
    if !m.source().contains(seed) || !is_prolongable_on(m, seed)? {
        return Err(Error::domain(format!(
            "{which} substitution is not prolongable on its seed"
        )));
    }
    Ok(())
}

pub(crate) fn d0l_sides(
    sigma: &Morphism,
    a: Letter,
    tau: &Morphism,
    b: Letter,
    budget: usize,
) -> Result<(Side, Side)> {
    check_iterable(sigma, a, "left")?;
    check_iterable(tau, b, "right")?;
    let union = sigma.source().union(tau.source());
    let left = Side::new(
        sigma.clone(),
        a,
        Morphism::identity(sigma.source()).retarget(&union)?,
        budget,
    )?;
    let right = Side::new(
        tau.clone(),
        b,
        Morphism::identity(tau.source()).retarget(&union)?,
        budget,
    )?;
    Ok((left, right))
}

pub(crate) fn hd0l_sides(
    sigma: &Morphism,
    a: Letter,
    phi: &Morphism,
    tau: &Morphism,
    b: Letter,
    psi: &Morphism,
    budget: usize,
) -> Result<(Side, Side)> {
    check_iterable(sigma, a, "left")?;
    check_iterable(tau, b, "right")?;
    let left = normalize_morphic(sigma, a, phi)?;
    let right = normalize_morphic(tau, b, psi)?;
    let union: Alphabet = phi.target().union(psi.target());
    Ok((
        Side::new(left.tau, left.seed, left.chi.retarget(&union)?, budget)?,
        Side::new(right.tau, right.seed, right.chi.retarget(&union)?, budget)?,
    ))
}

struct Schedule {
    kind: LevelSchedule,
    base: usize,
    next: usize,
}

impl Schedule {
    fn new(kind: LevelSchedule, k: Option<&num_bigint::BigUint>) -> Result<Schedule> {
        let base = match kind {
            LevelSchedule::Theorem => {
                let k = k
                    .and_then(num_traits::ToPrimitive::to_usize)
                    .ok_or_else(|| {
                        Error::budget(
                            "level base K + 1 (K does not fit a machine word)",
                            usize::MAX,
                            usize::MAX,
                        )
                    })?;
                k + 1
            }
            _ => 2,
        };
        let next = match kind {
            LevelSchedule::Theorem => base.saturating_add(1),
            _ => 1,
        };
        Ok(Schedule { kind, base, next })
    }

    /// Prefix length of the current level; `level` is the structure just
    /// computed at that length.
    fn current(&self) -> usize {
        self.next
    }

    fn advance(&mut self, n: usize, level: &Level) {
        self.next = match self.kind {
            LevelSchedule::Derivation => self.next + level.image_words()[0].len(),
            LevelSchedule::Doubling => self.next.saturating_mul(2),
            LevelSchedule::Theorem => self.base.saturating_pow(n as u32 + 1).saturating_add(1),
        };
    }
}

struct Stored {
    state: LevelState,
    level: Level,
    tuple: Vec<Morphism>,
}

/// Runs the decision on two prepared sides.
pub(crate) fn decide(
    left: &mut Side,
    right: &mut Side,
    with_lambdas: bool,
    opts: &DecisionOptions,
    k_for_schedule: Option<&num_bigint::BigUint>,
) -> Result<(Verdict, Witness)> {
    let budget = opts.budget;
    let pl = side_periodicity(&mut left.clone(), opts.max_levels)?;
    let pr = side_periodicity(&mut right.clone(), opts.max_levels)?;
    match (pl.period_length(), pr.period_length()) {
        (Some(p), Some(q)) => {
            let compared = lcm(p, q).saturating_mul(2);
            if compared > budget {
                return Err(Error::budget(
                    "comparing two periodic sequences",
                    compared,
                    budget,
                ));
            }
            return Ok(
                match first_difference(left.image(), right.image(), compared)? {
                    Some(i) => difference(left, right, i)?,
                    None => (
                        Verdict::Equal,
                        Witness::PeriodicAgreement {
                            left_period: p,
                            right_period: q,
                            compared,
                        },
                    ),
                },
            );
        }
        (Some(_), None) | (None, Some(_)) => {
            let i = search_difference(left.image(), right.image(), 64)?;
            return difference(left, right, i);
        }
        (None, None) => {}
    }

    let mut schedule = Schedule::new(opts.schedule, k_for_schedule)?;
    let mut stored: Vec<Stored> = Vec::new();
    for n in 1..=opts.max_levels {
        let len = schedule.current();
        if len > budget {
            return Err(Error::budget(
                format!("level {n} prefix (no repeat among {} levels)", n - 1),
                len,
                budget,
            ));
        }
        if let Some(i) = first_difference(left.image(), right.image(), len)? {
            return difference(left, right, i);
        }
        let ll = left.level(len)?;
        let rl = right.level(len)?;
        if ll.image_words() != rl.image_words() {
            let i = search_difference(left.image(), right.image(), len)?;
            return difference(left, right, i);
        }
        let tuple: Vec<Morphism> = if with_lambdas {
            vec![
                ll.lambda.lambda.clone(),
                ll.substitution().clone(),
                rl.lambda.lambda.clone(),
                rl.substitution().clone(),
            ]
        } else {
            vec![ll.substitution().clone(), rl.substitution().clone()]
        };
        let state = LevelState {
            level: n,
            prefix_length: len,
            return_words: ll.rendered_words(),
            tuple: tuple_text(&tuple, with_lambdas),
        };
        for earlier in stored.iter().filter(|s| s.tuple == tuple) {
            let phi = refinement(&earlier.level, &ll).ok_or_else(|| {
                Error::invariant("return words do not refine along nested prefixes")
            })?;
            if phi[0].len() >= 2 {
                return Ok((
                    Verdict::Equal,
                    Witness::LevelRepeat {
                        first: earlier.state.clone(),
                        second: state,
                        refinement_first_image_length: phi[0].len(),
                    },
                ));
            }
        }
        schedule.advance(n, &ll);
        stored.push(Stored {
            state,
            level: ll,
            tuple,
        });
    }
    Err(Error::budget(
        "equivalence levels without a qualifying repeat",
        opts.max_levels + 1,
        opts.max_levels,
    ))
}

pub(crate) fn tuple_text(tuple: &[Morphism], with_lambdas: bool) -> Vec<String> {
    let names: &[&str] = if with_lambdas {
        &["lambda_u", "sigma_u", "lambda_v", "tau_v"]
    } else {
        &["sigma_u", "tau_v"]
    };
    names
        .iter()
        .zip(tuple)
        .map(|(n, m)| text_of(n, m))
        .collect()
}

fn difference(left: &mut Side, right: &mut Side, i: usize) -> Result<(Verdict, Witness)> {
    let l = left.image().at(i)?;
    let r = right.image().at(i)?;
    let alpha = left.chi().target();
    Ok((
        Verdict::NotEqual,
        Witness::Difference {
            position: i,
            left: alpha.label(l).to_string(),
            right: alpha.label(r).to_string(),
        },
    ))
}

fn provenance(
    bs_l: &BoundSet,
    bs_r: &BoundSet,
    with_lambdas: bool,
    opts: &DecisionOptions,
) -> BoundProvenance {
    BoundProvenance {
        mode: opts.bound_mode,
        note: format!(
            "Q ranges over exponents 0..={} and 0..={} with the row-ratio term of the positive power; \
             levels follow the {} schedule and stop at the first qualifying repeat instead of running to K",
            bs_l.q_range, bs_r.q_range, opts.schedule
        ),
        k_left: bs_l.k_sigma.value(),
        k_right: Some(bs_r.k_sigma.value()),
        k: equivalence_bound_k(bs_l, bs_r, with_lambdas).value(),
    }
}

fn schedule_k(bs_l: &BoundSet, bs_r: &BoundSet) -> Option<num_bigint::BigUint> {
    let a = bs_l.k_value(128)?;
    let b = bs_r.k_value(128)?;
    Some(a.max(b))
}

fn seeded(name: &str, m: &Morphism, seed: Letter) -> SeededMorphism {
    SeededMorphism {
        morphism: text_of(name, m),
        seed: m.source().label(seed).to_string(),
    }
}

/// Decides `σ^ω(a) = τ^ω(b)`.
pub fn d0l_equivalence(
    sigma: &Morphism,
    a: Letter,
    tau: &Morphism,
    b: Letter,
    opts: &DecisionOptions,
) -> Result<Certificate> {
    let (mut left, mut right) = d0l_sides(sigma, a, tau, b, opts.budget)?;
    let bs_l = bound_set(sigma, opts.bound_mode)?;
    let bs_r = bound_set(tau, opts.bound_mode)?;
    let k = schedule_k(&bs_l, &bs_r);
    let (verdict, witness) = decide(&mut left, &mut right, false, opts, k.as_ref())?;
    Ok(Certificate {
        format: FORMAT.into(),
        problem: Problem::D0lEquivalence {
            left: seeded("sigma", sigma, a),
            right: seeded("tau", tau, b),
            options: *opts,
        },
        verdict,
        witness,
        bounds: Some(provenance(&bs_l, &bs_r, false, opts)),
        replay: REPLAY.into(),
    })
}

/// Decides `φ(σ^ω(a)) = ψ(τ^ω(b))`.
#[allow(clippy::too_many_arguments)]
pub fn hd0l_equivalence(
    sigma: &Morphism,
    a: Letter,
    phi: &Morphism,
    tau: &Morphism,
    b: Letter,
    psi: &Morphism,
    opts: &DecisionOptions,
) -> Result<Certificate> {
    let (mut left, mut right) = hd0l_sides(sigma, a, phi, tau, b, psi, opts.budget)?;
    let bs_l = bound_set(sigma, opts.bound_mode)?;
    let bs_r = bound_set(tau, opts.bound_mode)?;
    let k = schedule_k(&bs_l, &bs_r);
    let (verdict, witness) = decide(&mut left, &mut right, true, opts, k.as_ref())?;
    Ok(Certificate {
        format: FORMAT.into(),
        problem: Problem::Hd0lEquivalence {
            left: seeded("sigma", sigma, a),
            left_coding: text_of("phi", phi),
            right: seeded("tau", tau, b),
            right_coding: text_of("psi", psi),
            options: *opts,
        },
        verdict,
        witness,
        bounds: Some(provenance(&bs_l, &bs_r, true, opts)),
        replay: REPLAY.into(),
    })
}

const REPLAY: &str = "morphic --replay <certificate>: rebuilds both sequences from the problem and re-checks \
                      the witness (the differing position, or the two levels with their prefixes, return words, \
                      tuples and refinement)";
