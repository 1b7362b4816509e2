mod common;

use common::*;
use morphic::bounds::{bound_set, BoundMode};
use morphic::returns::build_return_structure;
use morphic::stream::FixedPointStream;
use morphic::Morphism;
use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::Rng;

/// `|σ^n(a)|` for every letter, by iterating image lengths.
fn power_lengths(m: &Morphism, n: u32) -> Vec<u128> {
    let imgs = images(m);
    let mut lens = vec![1u128; imgs.len()];
    for _ in 0..n {
        lens = imgs
            .iter()
            .map(|w| w.iter().map(|&b| lens[b as usize]).sum())
            .collect();
    }
    lens
}

#[test]
fn q_bounds_length_ratios_of_all_powers() {
    let mut r = rng(7);
    for case in 0..300 {
        let m = random_primitive(&mut r, 4, 4);
        let bs = bound_set(&m, BoundMode::Certificate).unwrap();
        let q = bs.q.ceil().to_integer().to_u128().unwrap();
        for n in 0..=12 {
            let lens = power_lengths(&m, n);
            let max = *lens.iter().max().unwrap();
            let min = *lens.iter().min().unwrap();
            assert!(
                max <= q * min,
                "case {case}, n = {n}: {max} > {q}·{min} for {m:?}"
            );
        }
    }
}

#[test]
fn observed_gap_never_exceeds_certificate_r() {
    let mut r = rng(11);
    for _ in 0..60 {
        let m = random_primitive(&mut r, 3, 3);
        let cert = bound_set(&m, BoundMode::Certificate).unwrap();
        let prac = bound_set(&m, BoundMode::Practical).unwrap();
        let observed = prac.r_bound.eval(64).unwrap();
        match cert.r_bound.eval(4096) {
            Some(v) => assert!(observed <= v),
            None => assert!(observed.bits() < 4096),
        }
    }
}

fn k_of(m: &Morphism) -> Option<BigUint> {
    bound_set(m, BoundMode::Certificate).unwrap().k_value(256)
}

/// Return words stay within `[|u|/K, K|u|]`, there are at most `4K³` of
/// them and `|σ_u| ≤ |σ|K²`, for every prefix up to `max_len`.
fn check_encadrement(m: &Morphism, max_len: usize) -> usize {
    let Some(k) = k_of(m) else { return 0 };
    let mut s = FixedPointStream::new(m.clone(), 0).unwrap();
    let mut checked = 0;
    for len in 1..=max_len {
        let u = s.prefix(len).unwrap().to_vec();
        let rs = build_return_structure(&mut s, &u).unwrap();
        let ulen = BigUint::from(len);
        for v in rs.return_words() {
            let vlen = BigUint::from(v.len());
            assert!(&vlen * &k >= ulen, "short return word for |u| = {len}");
            assert!(vlen <= &k * &ulen, "long return word for |u| = {len}");
        }
        assert!(BigUint::from(rs.len()) <= BigUint::from(4u32) * k.pow(3));
        let norm = rs.return_substitution().unwrap().norm();
        assert!(BigUint::from(norm) <= BigUint::from(m.norm()) * k.pow(2));
        checked += 1;
    }
    checked
}

#[test]
fn return_words_obey_length_and_count_bounds() {
    let mut total = 0;
    total += check_encadrement(&fib(), 64);
    total += check_encadrement(&thue_morse(), 64);
    let mut r = rng(13);
    let mut random = 0;
    while random < 40 {
        let m = random_primitive(&mut r, 2, 3);
        let x = naive_fixed_point(&images(&m), 0, 4000);
        if brute_period(&x, 1000).is_some() {
            continue;
        }
        total += check_encadrement(&m, r.gen_range(8..=32));
        random += 1;
    }
    assert!(total >= 128);
}
