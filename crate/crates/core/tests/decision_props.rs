mod common;

use common::*;
use morphic::certificate::Witness;
use morphic::normalize::normalize_morphic;
use morphic::{
    common_power_check, d0l_equivalence, hd0l_equivalence, hd0l_periodicity, verify_certificate,
    Alphabet, DecisionOptions, Error, Letter, Morphism, SearchBounds, Verdict, Word,
};
use rand::Rng;

fn opts() -> DecisionOptions {
    DecisionOptions::default()
}

fn coding(source: &Alphabet, imgs: &[Vec<Letter>], t: usize) -> Morphism {
    Morphism::new(
        source.clone(),
        Alphabet::indexed(t),
        imgs.iter().cloned().map(Word::from).collect(),
    )
    .unwrap()
}

/// `φ(σ^ω(0))` by direct expansion.
fn naive_image(m: &Morphism, phi: &[Vec<Letter>], n: usize) -> Vec<Letter> {
    let imgs = images(m);
    let mut len = n;
    loop {
        let x = naive_fixed_point(&imgs, 0, len);
        let y = apply(phi, &x);
        if y.len() >= n {
            return y[..n].to_vec();
        }
        len *= 2;
    }
}

#[test]
fn normalization_invariants_hold_exactly() {
    let mut r = rng(21);
    let mut erasing = 0;
    for case in 0..40 {
        let sigma = random_primitive(&mut r, 4, 3);
        let d = sigma.source().len();
        let t = r.gen_range(1..=3);
        let rho_imgs = random_images(&mut r, d, t, 3);
        erasing += rho_imgs.iter().any(|w| w.is_empty()) as usize;
        let rho = coding(sigma.source(), &rho_imgs, t);
        let norm = normalize_morphic(&sigma, 0, &rho).unwrap();
        norm.verify(&sigma, &rho).unwrap();

        let tau = images(&norm.tau);
        let psi = images(&norm.psi);
        let chi = images(&norm.chi);
        let phi = images(&norm.phi);
        let sigma_n = images(&sigma.power(norm.n).unwrap());
        for c in 0..d {
            assert_eq!(
                apply(&tau, &psi[c]),
                apply(&psi, &sigma_n[c]),
                "case {case}: τψ ≠ ψσ^n on {c}"
            );
            assert_eq!(apply(&chi, &psi[c]), phi[c], "case {case}: χψ ≠ φ on {c}");
        }
        assert!(chi.iter().all(|w| w.len() == 1));
        assert!(
            primitive_by_bool(&tau).is_some(),
            "case {case}: τ not primitive"
        );
        let seeded = naive_fixed_point(&tau, norm.seed, 1000);
        assert_eq!(
            apply(&chi, &seeded),
            naive_image(&sigma, &rho_imgs, 1000),
            "case {case}"
        );
    }
    assert!(erasing >= 5);
}

#[test]
fn equal_verdicts_agree_positionally() {
    let mut r = rng(31);
    for case in 0..40 {
        let sigma = random_primitive(&mut r, 3, 3);
        let sigma2 = sigma.power(2).unwrap();
        let cert = d0l_equivalence(&sigma, 0, &sigma2, 0, &opts()).unwrap();
        assert_eq!(cert.verdict, Verdict::Equal, "case {case}");
        verify_certificate(&cert).unwrap();
        let x = naive_fixed_point(&images(&sigma), 0, 100_000);
        let y = naive_fixed_point(&images(&sigma2), 0, 100_000);
        assert_eq!(x, y);
    }
}

#[test]
fn random_pairs_give_sound_verdicts() {
    let mut r = rng(41);
    let mut seen = [0usize; 2];
    for case in 0..80 {
        let s = random_primitive(&mut r, 2, 3);
        let t = random_primitive(&mut r, 2, 3);
        let cert = d0l_equivalence(&s, 0, &t, 0, &opts()).unwrap();
        verify_certificate(&cert).unwrap();
        let x = naive_fixed_point(&images(&s), 0, 100_000);
        let y = naive_fixed_point(&images(&t), 0, 100_000);
        match (&cert.verdict, &cert.witness) {
            (Verdict::Equal, _) => {
                assert_eq!(x, y, "case {case}");
                seen[0] += 1;
            }
            (Verdict::NotEqual, Witness::Difference { position, .. }) => {
                let p = *position;
                assert_eq!(x[..p], y[..p], "case {case}");
                assert_ne!(x[p], y[p], "case {case}");
                seen[1] += 1;
            }
            other => panic!("case {case}: unexpected {other:?}"),
        }
    }
    assert!(seen[0] > 0 && seen[1] > 0, "{seen:?}");
}

#[test]
fn morphic_images_compare_soundly() {
    let mut r = rng(51);
    for case in 0..40 {
        let s = random_primitive(&mut r, 3, 3);
        let d = s.source().len();
        let phi_imgs = random_images(&mut r, d, 2, 2);
        let phi = coding(s.source(), &phi_imgs, 2);
        let s2 = s.power(2).unwrap();
        let cert = hd0l_equivalence(&s, 0, &phi, &s2, 0, &phi, &opts()).unwrap();
        assert_eq!(cert.verdict, Verdict::Equal, "case {case}");
        verify_certificate(&cert).unwrap();

        let t = random_primitive(&mut r, 3, 3);
        let psi_imgs = random_images(&mut r, t.source().len(), 2, 2);
        let psi = coding(t.source(), &psi_imgs, 2);
        let cert = hd0l_equivalence(&s, 0, &phi, &t, 0, &psi, &opts()).unwrap();
        verify_certificate(&cert).unwrap();
        let x = naive_image(&s, &phi_imgs, 20_000);
        let y = naive_image(&t, &psi_imgs, 20_000);
        match (&cert.verdict, &cert.witness) {
            (Verdict::Equal, _) => assert_eq!(x, y, "case {case}"),
            (Verdict::NotEqual, Witness::Difference { position, .. }) => {
                let p = *position;
                assert!(p < 20_000);
                assert_eq!(x[..p], y[..p], "case {case}");
                assert_ne!(x[p], y[p], "case {case}");
            }
            other => panic!("case {case}: unexpected {other:?}"),
        }
    }
}

#[test]
fn periodicity_verdicts_match_brute_force() {
    let mut r = rng(61);
    let mut periodic = 0;
    for case in 0..80 {
        let s = random_primitive(&mut r, 3, 3);
        let d = s.source().len();
        let t = r.gen_range(1..=2);
        let phi_imgs = random_images(&mut r, d, t, 2);
        let phi = coding(s.source(), &phi_imgs, t);
        let cert = hd0l_periodicity(&s, 0, &phi, &opts()).unwrap();
        verify_certificate(&cert).unwrap();
        match (&cert.verdict, &cert.witness) {
            (Verdict::Periodic, Witness::PeriodWord { period_length, .. }) => {
                let y = naive_image(&s, &phi_imgs, 100_000);
                let p = *period_length;
                assert!((0..y.len() - p).all(|i| y[i] == y[i + p]), "case {case}");
                assert_eq!(
                    brute_period(&y[..10_000], p),
                    Some(p),
                    "case {case}: period is not least"
                );
                periodic += 1;
            }
            (Verdict::Aperiodic, _) => {
                let y = naive_image(&s, &phi_imgs, 10_000);
                assert_eq!(brute_period(&y, 1000), None, "case {case}");
            }
            other => panic!("case {case}: unexpected {other:?}"),
        }
    }
    assert!(periodic > 0);
}

#[test]
fn common_power_search_is_consistent() {
    let mut r = rng(71);
    let mut found = 0;
    let mut tried = 0;
    while tried < 30 {
        let s = random_primitive(&mut r, 3, 3);
        let x = naive_fixed_point(&images(&s), 0, 5000);
        if brute_period(&x, 1000).is_some() {
            continue;
        }
        tried += 1;
        let k = r.gen_range(1..=2);
        let t = s.power(k).unwrap();
        let search = SearchBounds {
            max_prefix_levels: 5,
            ..SearchBounds::default()
        };
        let cert = common_power_check(&s, &t, 0, &search, &opts()).unwrap();
        verify_certificate(&cert).unwrap();
        if let Witness::Exponents {
            sigma_exponent,
            tau_exponent,
            ..
        } = cert.witness
        {
            assert_eq!(
                images(&s.power(sigma_exponent).unwrap()),
                images(&t.power(tau_exponent).unwrap())
            );
            found += 1;
        }
    }
    assert!(found > 0);
}

#[test]
fn every_window_holds_every_short_factor() {
    use morphic::bounds::{bound_set, BoundMode};
    for m in [fib(), thue_morse()] {
        let k: usize = bound_set(&m, BoundMode::Certificate)
            .unwrap()
            .k_value(64)
            .unwrap()
            .try_into()
            .unwrap();
        let x = naive_fixed_point(&images(&m), 0, 40_000);
        for n in 1..=8 {
            let mut all: Vec<&[Letter]> = x.windows(n).collect();
            all.sort();
            all.dedup();
            let w = (k + 1) * n;
            for start in (0..x.len() - w).step_by(997) {
                let window = &x[start..start + w];
                for f in &all {
                    assert!(
                        window.windows(n).any(|g| g == *f),
                        "n = {n}, window at {start}"
                    );
                }
            }
        }
    }
}

#[test]
fn tiny_budgets_report_exhaustion() {
    let (s, t) = seebold();
    let o = DecisionOptions {
        budget: 8,
        ..opts()
    };
    assert!(matches!(
        d0l_equivalence(&s, 0, &t, 0, &o),
        Err(Error::Budget { .. })
    ));
}
