//! Independent re-checking of certificates.

use crate::certificate::{Certificate, Problem, Verdict, Witness, FORMAT};
use crate::error::{Error, Result};
use crate::lattice::{lattice_basis, ParikhVector};
use crate::morphism::Morphism;
use crate::text::parse_morphism;
use crate::words::Letter;

use super::common_power::{check_common_inputs, common_power_check};
use super::equivalence::{d0l_sides, hd0l_sides, tuple_text};
use super::periodicity::{hd0l_periodicity, periodicity_side};
use super::{first_difference, lcm, refinement, Side};

fn reject<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Certificate(msg.into()))
}

fn morphism(text: &str) -> Result<Morphism> {
    Ok(parse_morphism(text)?.morphism)
}

fn seed(m: &Morphism, label: &str) -> Result<Letter> {
    m.source().letter(label).ok_or_else(|| {
        Error::Certificate(format!("seed {label} is not a letter of the substitution"))
    })
}

/// Replays the witness of a certificate against its problem.
pub fn verify_certificate(cert: &Certificate) -> Result<()> {
    if cert.format != FORMAT {
        return reject(format!("unsupported format {}", cert.format));
    }
    match &cert.problem {
        Problem::D0lEquivalence {
            left,
            right,
            options,
        } => {
            let s = morphism(&left.morphism)?;
            let t = morphism(&right.morphism)?;
            let (mut l, mut r) = d0l_sides(
                &s,
                seed(&s, &left.seed)?,
                &t,
                seed(&t, &right.seed)?,
                options.budget,
            )?;
            check_equivalence(cert, &mut l, &mut r, false, options.max_levels)
        }
        Problem::Hd0lEquivalence {
            left,
            left_coding,
            right,
            right_coding,
            options,
        } => {
            let s = morphism(&left.morphism)?;
            let t = morphism(&right.morphism)?;
            let (mut l, mut r) = hd0l_sides(
                &s,
                seed(&s, &left.seed)?,
                &morphism(left_coding)?,
                &t,
                seed(&t, &right.seed)?,
                &morphism(right_coding)?,
                options.budget,
            )?;
            check_equivalence(cert, &mut l, &mut r, true, options.max_levels)
        }
        Problem::Periodicity {
            substitution,
            coding,
            options,
        } => {
            let s = morphism(&substitution.morphism)?;
            let a = seed(&s, &substitution.seed)?;
            let phi = morphism(coding)?;
            match (&cert.verdict, &cert.witness) {
                (
                    Verdict::Periodic,
                    Witness::PeriodWord {
                        prefix_length,
                        period,
                        period_length,
                        preperiod,
                        ..
                    },
                ) => {
                    let mut side = periodicity_side(&s, a, &phi, options.budget)?;
                    let lvl = side.level(*prefix_length)?;
                    if lvl.image_words().len() != 1 {
                        return reject("the recorded prefix has more than one return word");
                    }
                    let w = &lvl.image_words()[0];
                    if lvl.image_alphabet().render(w) != *period
                        || w.len() != *period_length
                        || *preperiod != 0
                    {
                        return reject("period word does not match");
                    }
                    let p = w.len();
                    let horizon = (4 * p + prefix_length).max(1 << 12).min(options.budget);
                    let x = side.image().prefix(horizon)?;
                    if (0..horizon - p).any(|i| x[i] != x[i + p]) {
                        return reject("sequence is not periodic with the recorded period");
                    }
                    Ok(())
                }
                (Verdict::Aperiodic, Witness::DerivationCycle { .. }) => {
                    let again = hd0l_periodicity(&s, a, &phi, options)?;
                    same(cert, &again)
                }
                _ => reject("verdict and witness do not fit a periodicity problem"),
            }
        }
        Problem::CommonPower {
            left,
            right,
            seed: seed_label,
            search,
            options,
        } => {
            let s = morphism(left)?;
            let t = morphism(right)?;
            let a = seed(&s, seed_label)?;
            match (&cert.verdict, &cert.witness) {
                (
                    Verdict::CommonPower,
                    Witness::Exponents {
                        sigma_exponent,
                        tau_exponent,
                        evidence,
                    },
                ) => {
                    let t = check_common_inputs(&s, &t, a)?;
                    if s.power_bounded(*sigma_exponent, options.budget)?
                        != t.power_bounded(*tau_exponent, options.budget)?
                    {
                        return reject("σ^p and τ^q differ");
                    }
                    let mut side =
                        Side::new(s.clone(), a, Morphism::identity(s.source()), options.budget)?;
                    let lvl = side.level(evidence.prefix_length)?;
                    let d = s.source().len();
                    let parikh: Vec<ParikhVector> = lvl
                        .rs
                        .return_words()
                        .iter()
                        .map(|w| ParikhVector::of(w, d))
                        .collect();
                    if parikh != evidence.parikh_vectors {
                        return reject("Parikh vectors do not match the recorded prefix");
                    }
                    let vecs: Vec<Vec<i64>> = parikh
                        .iter()
                        .map(|v| v.0.iter().map(|&c| c as i64).collect())
                        .collect();
                    if !lattice_basis(&vecs, d).is_full() {
                        return reject("Parikh vectors do not span the full lattice");
                    }
                    Ok(())
                }
                (Verdict::NoConclusion, Witness::Inconclusive { .. }) => {
                    let again = common_power_check(&s, &t, a, search, options)?;
                    same(cert, &again)
                }
                _ => reject("verdict and witness do not fit a common-power problem"),
            }
        }
    }
}

fn same(cert: &Certificate, again: &Certificate) -> Result<()> {
    if cert == again {
        Ok(())
    } else {
        reject("rerunning the procedure gives a different certificate")
    }
}

fn check_equivalence(
    cert: &Certificate,
    l: &mut Side,
    r: &mut Side,
    with_lambdas: bool,
    max_levels: usize,
) -> Result<()> {
    match (&cert.verdict, &cert.witness) {
        (
            Verdict::NotEqual,
            Witness::Difference {
                position,
                left,
                right,
            },
        ) => {
            let p = *position;
            if first_difference(l.image(), r.image(), p + 1)? != Some(p) {
                return reject("the sequences do not first differ at the recorded position");
            }
            let alpha = l.chi().target().clone();
            if alpha.label(l.image().at(p)?) != left || alpha.label(r.image().at(p)?) != right {
                return reject("recorded symbols do not match");
            }
            Ok(())
        }
        (
            Verdict::Equal,
            Witness::PeriodicAgreement {
                left_period,
                right_period,
                compared,
            },
        ) => {
            for (side, p) in [(&mut *l, *left_period), (&mut *r, *right_period)] {
                let out = super::periodicity::side_periodicity(&mut side.clone(), max_levels)?;
                if out.period_length() != Some(p) {
                    return reject("recorded period does not match");
                }
            }
            if *compared < lcm(*left_period, *right_period) {
                return reject("too few symbols compared");
            }
            if first_difference(l.image(), r.image(), *compared)?.is_some() {
                return reject("the periodic sequences differ");
            }
            Ok(())
        }
        (
            Verdict::Equal,
            Witness::LevelRepeat {
                first,
                second,
                refinement_first_image_length,
            },
        ) => {
            if first.prefix_length >= second.prefix_length {
                return reject("levels must have increasing prefixes");
            }
            if first_difference(l.image(), r.image(), second.prefix_length)?.is_some() {
                return reject("prefixes differ");
            }
            let mut levels = Vec::new();
            for st in [first, second] {
                let ll = l.level(st.prefix_length)?;
                let rl = r.level(st.prefix_length)?;
                if ll.image_words() != rl.image_words() {
                    return reject("return words differ between the two sequences");
                }
                if ll.rendered_words() != st.return_words {
                    return reject("recorded return words do not match");
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
                if tuple_text(&tuple, with_lambdas) != st.tuple {
                    return reject("recorded tuple does not match");
                }
                levels.push((ll, tuple));
            }
            if levels[0].1 != levels[1].1 {
                return reject("the tuples of the two levels differ");
            }
            let phi = refinement(&levels[0].0, &levels[1].0)
                .ok_or_else(|| Error::Certificate("no refinement".into()))?;
            if phi[0].len() < 2 || phi[0].len() != *refinement_first_image_length {
                return reject("refinement is not prolongable as recorded");
            }
            Ok(())
        }
        _ => reject("verdict and witness do not fit an equivalence problem"),
    }
}
