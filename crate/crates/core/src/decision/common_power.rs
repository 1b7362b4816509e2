//! Searching for `σ^p = τ^q` when `σ` and `τ` share a fixed point.
//!
//! At a common prefix `u`, an identity `σ_u^p = τ_u^q` says `σ^p` and
//! `τ^q` agree on every return word to `u`. When the Parikh vectors of
//! those return words span `ℤ^d`, agreeing on them forces `σ^p = τ^q`.

use crate::certificate::{
    Certificate, DecisionOptions, PowerLevel, Problem, SearchBounds, Verdict, Witness, FORMAT,
};
use crate::error::{Error, Result};
use crate::lattice::{lattice_basis, ParikhVector};
use crate::matrix::{is_prolongable_on, primitivity};
use crate::morphism::Morphism;
use crate::returns::build_return_structure;
use crate::stream::FixedPointStream;
use crate::words::Letter;

use super::periodicity::{side_periodicity, PeriodicityOutcome};
use super::{text_of, Side};

/// Image lengths of `m^p` for every letter, saturating.
fn power_lengths(m: &Morphism, p: u32) -> Vec<u128> {
    let mut lens = vec![1u128; m.source().len()];
    for _ in 0..p {
        lens = m
            .images()
            .iter()
            .map(|w| {
                w.iter()
                    .fold(0u128, |acc, &b| acc.saturating_add(lens[b as usize]))
            })
            .collect();
    }
    lens
}

/// Least `(p, q)` by `p + q`, then `p`, with `σ_u^p = τ_u^q`.
fn find_exponents(
    su: &Morphism,
    tu: &Morphism,
    max: u32,
    budget: usize,
) -> Result<Option<(u32, u32)>> {
    let sl: Vec<Vec<u128>> = (0..=max).map(|p| power_lengths(su, p)).collect();
    let tl: Vec<Vec<u128>> = (0..=max).map(|q| power_lengths(tu, q)).collect();
    for total in 2..=2 * max {
        for p in 1..=max {
            let Some(q) = total.checked_sub(p).filter(|q| (1..=max).contains(q)) else {
                continue;
            };
            if sl[p as usize] != tl[q as usize] {
                continue;
            }
            let longest = sl[p as usize].iter().copied().max().unwrap_or(0);
            if longest > budget as u128 {
                return Err(Error::budget(
                    "return substitution power",
                    longest.min(usize::MAX as u128) as usize,
                    budget,
                ));
            }
            if su.power_bounded(p, budget)? == tu.power_bounded(q, budget)? {
                return Ok(Some((p, q)));
            }
        }
    }
    Ok(None)
}

pub(crate) fn check_common_inputs(sigma: &Morphism, tau: &Morphism, a: Letter) -> Result<Morphism> {
    for (m, which) in [(sigma, "left"), (tau, "right")] {
        if !m.is_endomorphism() || !primitivity(m)?.primitive {
            return Err(Error::domain(format!(
                "{which} substitution is not primitive"
            )));
        }
    }
    if !sigma.source().same_letters(tau.source()) {
        return Err(Error::domain("substitutions live on different alphabets"));
    }
    let tau = tau.relabel(sigma.source())?;
    if !sigma.source().contains(a) || !is_prolongable_on(sigma, a)? || !is_prolongable_on(&tau, a)?
    {
        return Err(Error::domain(
            "both substitutions must be prolongable on the seed",
        ));
    }
    Ok(tau)
}

/// Bounded search for a common power of two substitutions with the same
/// non-periodic fixed point on `a`.
pub fn common_power_check(
    sigma: &Morphism,
    tau: &Morphism,
    a: Letter,
    search: &SearchBounds,
    opts: &DecisionOptions,
) -> Result<Certificate> {
    let tau_r = check_common_inputs(sigma, tau, a)?;
    let budget = opts.budget;
    let mut x = FixedPointStream::with_budget(sigma.clone(), a, budget)?;
    let mut y = FixedPointStream::with_budget(tau_r.clone(), a, budget)?;
    let n = search.verify_prefix.min(budget);
    let px = x.prefix(n)?.to_vec();
    if let Some(i) = px.iter().zip(y.prefix(n)?).position(|(l, r)| l != r) {
        return Err(Error::domain(format!(
            "the fixed points differ at position {i}"
        )));
    }
    let mut side = Side::new(sigma.clone(), a, Morphism::identity(sigma.source()), budget)?;
    if let PeriodicityOutcome::Periodic { .. } =
        side_periodicity(&mut side.clone(), opts.max_levels)?
    {
        return Err(Error::domain("the common fixed point is periodic"));
    }

    let d = sigma.source().len();
    let mut levels = Vec::new();
    let mut len = 1;
    for level in 1..=search.max_prefix_levels {
        if len > budget {
            return Err(Error::budget("common-power prefix", len, budget));
        }
        let lvl = side.level(len)?;
        let rs_x = &lvl.rs;
        let u = rs_x.prefix().clone();
        let rs_y = build_return_structure(&mut y, &u)?;
        if rs_x.return_words() != rs_y.return_words() {
            return Err(Error::invariant(
                "return words of one sequence differ between generators",
            ));
        }
        let su = rs_x.return_substitution().expect("fixed point");
        let tu = rs_y.return_substitution().expect("fixed point");
        let exponents = find_exponents(su, tu, search.max_exponent, budget)?;
        let parikh: Vec<ParikhVector> = rs_x
            .return_words()
            .iter()
            .map(|w| ParikhVector::of(w, d))
            .collect();
        let basis = lattice_basis(
            &parikh
                .iter()
                .map(|v| v.0.iter().map(|&c| c as i64).collect())
                .collect::<Vec<_>>(),
            d,
        );
        let evidence = PowerLevel {
            level,
            prefix_length: len,
            return_word_count: rs_x.len(),
            exponents,
            parikh_vectors: parikh,
            lattice_rank: basis.rank(),
            lattice_full: basis.is_full(),
            colinear: basis.rank() <= 1,
        };
        if let (Some((p, q)), true) = (exponents, evidence.lattice_full) {
            let sp = sigma.power_bounded(p, budget)?;
            let tq = tau_r.power_bounded(q, budget)?;
            if sp != tq {
                return Err(Error::invariant(format!(
                    "σ^{p} and τ^{q} agree on spanning return words but differ as morphisms"
                )));
            }
            return Ok(certificate(
                sigma,
                tau,
                a,
                search,
                opts,
                Verdict::CommonPower,
                Witness::Exponents {
                    sigma_exponent: p,
                    tau_exponent: q,
                    evidence,
                },
            ));
        }
        len += lvl.image_words()[0].len();
        levels.push(evidence);
    }
    let with_identity: Vec<&PowerLevel> = levels.iter().filter(|l| l.exponents.is_some()).collect();
    let summary = if with_identity.is_empty() {
        format!(
            "no identity σ_u^p = τ_u^q with p, q ≤ {} at the {} prefixes tested",
            search.max_exponent,
            levels.len()
        )
    } else if with_identity.iter().all(|l| l.colinear) {
        format!(
            "all Parikh vectors of the return words are colinear at every tested prefix with an exponent identity ({} of {})",
            with_identity.len(),
            levels.len()
        )
    } else {
        "exponent identities found only at prefixes whose Parikh vectors span a proper sublattice"
            .to_string()
    };
    Ok(certificate(
        sigma,
        tau,
        a,
        search,
        opts,
        Verdict::NoConclusion,
        Witness::Inconclusive { levels, summary },
    ))
}

fn certificate(
    sigma: &Morphism,
    tau: &Morphism,
    a: Letter,
    search: &SearchBounds,
    opts: &DecisionOptions,
    verdict: Verdict,
    witness: Witness,
) -> Certificate {
    Certificate {
        format: FORMAT.into(),
        problem: Problem::CommonPower {
            left: text_of("sigma", sigma),
            right: text_of("tau", tau),
            seed: sigma.source().label(a).to_string(),
            search: *search,
            options: *opts,
        },
        verdict,
        witness,
        bounds: None,
        replay: "morphic --replay <certificate>: re-verifies σ^p = τ^q letter by letter and the lattice at the \
                 recorded prefix, or reruns the bounded search"
            .into(),
    }
}
