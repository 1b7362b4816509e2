#![allow(dead_code)]

use morphic::{Letter, Morphism};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fib() -> Morphism {
    Morphism::from_strs(&[("0", "01"), ("1", "0")]).unwrap()
}

pub fn thue_morse() -> Morphism {
    Morphism::from_strs(&[("0", "01"), ("1", "10")]).unwrap()
}

pub fn seebold() -> (Morphism, Morphism) {
    (
        Morphism::from_strs(&[("a", "ab"), ("b", "baabba")]).unwrap(),
        Morphism::from_strs(&[("a", "abbaab"), ("b", "ba")]).unwrap(),
    )
}

/// Images as plain index vectors.
pub fn images(m: &Morphism) -> Vec<Vec<Letter>> {
    m.images().iter().map(|w| w.to_vec()).collect()
}

pub fn apply(images: &[Vec<Letter>], w: &[Letter]) -> Vec<Letter> {
    w.iter()
        .flat_map(|&a| images[a as usize].iter().copied())
        .collect()
}

/// Prefix of the fixed point by iterating the substitution on the seed.
pub fn naive_fixed_point(images: &[Vec<Letter>], seed: Letter, n: usize) -> Vec<Letter> {
    let mut w = vec![seed];
    while w.len() < n {
        let next = apply(images, &w);
        assert!(
            next.len() > w.len(),
            "substitution does not grow on the seed"
        );
        w = next;
    }
    w.truncate(n);
    w
}

/// Positive power test by repeated boolean products, up to `d²`.
pub fn primitive_by_bool(images: &[Vec<Letter>]) -> Option<u32> {
    let d = images.len();
    let mut m = vec![vec![false; d]; d];
    for (j, img) in images.iter().enumerate() {
        for &i in img {
            m[i as usize][j] = true;
        }
    }
    let mut p = m.clone();
    for k in 1..=(d * d) as u32 {
        if p.iter().all(|r| r.iter().all(|&b| b)) {
            return Some(k);
        }
        let mut q = vec![vec![false; d]; d];
        for i in 0..d {
            for l in 0..d {
                if p[i][l] {
                    for j in 0..d {
                        q[i][j] |= m[l][j];
                    }
                }
            }
        }
        p = q;
    }
    None
}

/// A random primitive substitution on `{0..d-1}`, `2 ≤ d ≤ max_d`, with
/// images of length at most `max_len`, prolongable on `0`.
pub fn random_primitive(rng: &mut ChaCha8Rng, max_d: usize, max_len: usize) -> Morphism {
    loop {
        let d = rng.gen_range(2..=max_d);
        let mut imgs: Vec<Vec<Letter>> = (0..d)
            .map(|_| {
                let len = rng.gen_range(1..=max_len);
                (0..len).map(|_| rng.gen_range(0..d as Letter)).collect()
            })
            .collect();
        imgs[0][0] = 0;
        if imgs[0].len() < 2 {
            imgs[0].push(rng.gen_range(0..d as Letter));
        }
        if primitive_by_bool(&imgs).is_some() {
            return Morphism::on_indices(imgs).unwrap();
        }
    }
}

/// A random map from `{0..d-1}` to words of length `0..=max_len` over
/// `{0..t-1}`, not erasing everything.
pub fn random_images(rng: &mut ChaCha8Rng, d: usize, t: usize, max_len: usize) -> Vec<Vec<Letter>> {
    loop {
        let imgs: Vec<Vec<Letter>> = (0..d)
            .map(|_| {
                let len = rng.gen_range(0..=max_len);
                (0..len).map(|_| rng.gen_range(0..t as Letter)).collect()
            })
            .collect();
        if imgs.iter().any(|w| !w.is_empty()) {
            return imgs;
        }
    }
}

/// Return words to `u` in order of first appearance, and the derived
/// sequence, read off a materialized prefix. Only returns followed by a
/// further occurrence of `u` inside `x` are counted.
pub fn brute_returns(x: &[Letter], u: &[Letter]) -> (Vec<Vec<Letter>>, Vec<Letter>) {
    let occ: Vec<usize> = (0..=x.len().saturating_sub(u.len()))
        .filter(|&i| x[i..].starts_with(u))
        .collect();
    assert_eq!(occ.first(), Some(&0));
    let mut words: Vec<Vec<Letter>> = Vec::new();
    let mut derived = Vec::new();
    for w in occ.windows(2) {
        let r = x[w[0]..w[1]].to_vec();
        let code = match words.iter().position(|v| *v == r) {
            Some(c) => c,
            None => {
                words.push(r);
                words.len() - 1
            }
        };
        derived.push(code as Letter);
    }
    (words, derived)
}

/// Number of factorizations of `w` over `code` (dynamic programming).
pub fn factorizations(w: &[Letter], code: &[Vec<Letter>]) -> u64 {
    let mut ways = vec![0u64; w.len() + 1];
    ways[0] = 1;
    for i in 0..w.len() {
        if ways[i] == 0 {
            continue;
        }
        for c in code {
            if w[i..].starts_with(c) {
                ways[i + c.len()] += ways[i];
            }
        }
    }
    ways[w.len()]
}

/// Least period `p ≤ max_p` of `x` (exact over the whole slice), if any.
pub fn brute_period(x: &[Letter], max_p: usize) -> Option<usize> {
    (1..=max_p.min(x.len().saturating_sub(1))).find(|&p| (0..x.len() - p).all(|i| x[i] == x[i + p]))
}
