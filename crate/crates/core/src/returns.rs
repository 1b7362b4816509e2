//! Return words, derived sequences, return substitutions and the maps
//! induced by codings.
//!
//! Return words to a prefix `u` of `x` are the gaps between consecutive
//! occurrences of `u`. They are numbered in order of first appearance in the
//! decomposition of `x`, which gives the coding `Θ` from the derived
//! alphabet `{0, 1, ...}` back to `x`'s alphabet and the derived sequence
//! `D` with `Θ(D) = x`.
//!
//! Every factorization here cuts `w · u` at the occurrences of `u` that
//! start inside `w`. When `w` is a concatenation of return words followed
//! in `x` by `u`, those cut points are exactly the concatenation
//! boundaries, so the factorization is the unique one.

use std::collections::HashMap;
use std::ops::Range;

use crate::error::{Error, Result};
use crate::matrix::primitivity;
use crate::morphism::Morphism;
use crate::stream::{FixedPointStream, MorphicStream};
use crate::words::{Alphabet, Letter, Matcher, Word};

/// Return words of a sequence to one of its prefixes.
#[derive(Clone, Debug)]
pub struct ReturnStructure {
    prefix: Word,
    return_words: Vec<Word>,
    index: HashMap<Vec<Letter>, Letter>,
    theta: Morphism,
    derived: MorphicStream,
}

/// `σ_u` together with the coding it commutes with: `Θ ∘ σ_u = σ ∘ Θ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReturnSubstitution {
    pub inner: Morphism,
    pub theta: Morphism,
}

/// Output of [`lambda_morphism`].
#[derive(Clone, Debug)]
pub struct LambdaResult {
    /// `λ_u`, from the derived alphabet of `x` on `u` to that of `φ(x)` on
    /// `φ(u)`.
    pub lambda: Morphism,
    /// Return structure of `φ(x)` on `φ(u)`.
    pub image: ReturnStructure,
}

impl ReturnStructure {
    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn return_words(&self) -> &[Word] {
        &self.return_words
    }

    /// Number of return words.
    pub fn len(&self) -> usize {
        self.return_words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.return_words.is_empty()
    }

    /// `Θ`: derived letter `i` ↦ `i`-th return word.
    pub fn theta(&self) -> &Morphism {
        &self.theta
    }

    pub fn derived_alphabet(&self) -> &Alphabet {
        self.theta.source()
    }

    /// The return substitution `σ_u` when this structure was built from a
    /// fixed point (its derived sequence is then `σ_u^ω(0)`).
    pub fn return_substitution(&self) -> Option<&Morphism> {
        match self.derived.map() {
            None => Some(self.derived.base().substitution()),
            Some(_) => None,
        }
    }

    /// The derived sequence as a lazy stream.
    pub fn derived(&mut self) -> &mut MorphicStream {
        &mut self.derived
    }

    pub fn derived_stream(&self) -> &MorphicStream {
        &self.derived
    }

    /// Code of a return word.
    pub fn code_of(&self, w: &[Letter]) -> Option<Letter> {
        self.index.get(w).copied()
    }

    /// Unique factorization of a concatenation of return words, or `None`
    /// when `word` is not such a concatenation.
    pub fn decode(&self, word: &[Letter]) -> Option<Word> {
        let pieces = cut_at_prefix(word, &self.prefix).ok()?;
        pieces.into_iter().map(|r| self.code_of(&word[r])).collect()
    }
}

/// Cuts `word · u` at the occurrences of `u` starting in `[0, |word|)`.
/// The first cut must be at position 0.
pub(crate) fn cut_at_prefix(word: &[Letter], u: &[Letter]) -> Result<Vec<Range<usize>>> {
    if word.is_empty() {
        return Ok(Vec::new());
    }
    let matcher = Matcher::new(u);
    let mut starts = matcher.occurrences_in(word, u, word.len());
    if starts.first() != Some(&0) {
        return Err(Error::invariant(
            "word does not start with an occurrence of the prefix",
        ));
    }
    starts.push(word.len());
    Ok(starts.windows(2).map(|w| w[0]..w[1]).collect())
}

struct CodeBook {
    words: Vec<Word>,
    index: HashMap<Vec<Letter>, Letter>,
    stored: usize,
    budget: usize,
}

impl CodeBook {
    fn new(budget: usize) -> Self {
        CodeBook {
            words: Vec::new(),
            index: HashMap::new(),
            stored: 0,
            budget,
        }
    }

    fn code(&mut self, w: &[Letter]) -> Result<Letter> {
        if let Some(&c) = self.index.get(w) {
            return Ok(c);
        }
        self.stored += w.len();
        if self.stored > self.budget {
            return Err(Error::budget("return words", self.stored, self.budget));
        }
        let c = self.words.len() as Letter;
        self.words.push(Word::from(w));
        self.index.insert(w.to_vec(), c);
        Ok(c)
    }
}

/// Builds `ℛ_{x,u}`, `Θ_{x,u}` and `σ_u` for `x = σ^ω(a)` with `σ`
/// primitive.
///
/// Starting from the first return word, each known return word `r` is
/// mapped by `σ` and `σ(r)` is cut into return words; new ones get the next
/// code. The derived sequence is the fixed point of `σ_u` on `0`, so the
/// return words reachable this way are all of them, and codes come out in
/// first-appearance order.
pub fn build_return_structure(x: &mut FixedPointStream, u: &[Letter]) -> Result<ReturnStructure> {
    if u.is_empty() {
        return Err(Error::domain("prefix must be non-empty"));
    }
    let sigma = x.substitution().clone();
    if !primitivity(&sigma)?.primitive {
        return Err(Error::domain("return words need a primitive substitution"));
    }
    if x.prefix(u.len())? != u {
        return Err(Error::domain("word is not a prefix of the sequence"));
    }
    let budget = x.budget();
    let second = x.find_from(u, 1)?;
    let first = x.prefix(second)?.to_vec();

    let mut book = CodeBook::new(budget);
    book.code(&first)?;
    let mut images: Vec<Vec<Letter>> = Vec::new();
    let mut next = 0;
    while next < book.words.len() {
        let img = sigma.apply(&book.words[next]);
        if img.len() > budget {
            return Err(Error::budget("image of a return word", img.len(), budget));
        }
        let pieces = cut_at_prefix(&img, u)?;
        let mut codes = Vec::with_capacity(pieces.len());
        for r in pieces {
            codes.push(book.code(&img[r])?);
        }
        images.push(codes);
        next += 1;
    }

    let n = book.words.len();
    let derived_alphabet = Alphabet::indexed(n);
    let theta = Morphism::new(derived_alphabet, sigma.source().clone(), book.words.clone())?;
    let inner = Morphism::on_indices(images)?;
    let derived = FixedPointStream::with_budget(inner, 0, budget)?;
    Ok(ReturnStructure {
        prefix: Word::from(u),
        return_words: book.words,
        index: book.index,
        theta,
        derived: MorphicStream::pure(derived),
    })
}

/// `σ_u` and `Θ_{x,u}` for `x = σ^ω(a)`.
pub fn return_substitution(x: &mut FixedPointStream, u: &[Letter]) -> Result<ReturnSubstitution> {
    let rs = build_return_structure(x, u)?;
    Ok(ReturnSubstitution {
        inner: rs
            .return_substitution()
            .cloned()
            .expect("built from a fixed point"),
        theta: rs.theta,
    })
}

/// First `n` symbols of the derived sequence.
pub fn derived_prefix(rs: &mut ReturnStructure, n: usize) -> Result<Word> {
    Ok(Word::from(rs.derived.prefix(n)?))
}

/// The unique `Θ` with `Θ_{x,u} ∘ Θ = Θ_{x,w}` for prefixes `u ⊑ w` of the
/// same sequence.
pub fn theta_refinement(rs_u: &ReturnStructure, rs_w: &ReturnStructure) -> Result<Morphism> {
    if !rs_w.prefix.starts_with(&rs_u.prefix) {
        return Err(Error::domain("first prefix must be a prefix of the second"));
    }
    if rs_u.theta.target() != rs_w.theta.target() {
        return Err(Error::domain(
            "return structures live over different alphabets",
        ));
    }
    let images = rs_w
        .return_words
        .iter()
        .map(|v| {
            rs_u.decode(v).ok_or_else(|| {
                Error::domain("return word does not factor over the shorter prefix's return words")
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Morphism::new(
        rs_w.derived_alphabet().clone(),
        rs_u.derived_alphabet().clone(),
        images,
    )
}

/// For a letter-to-letter `φ`, computes the return structure of `φ(x)` on
/// `φ(u)` and the unique `λ_u` with `φ ∘ Θ_{x,u} = Θ_{φ(x),φ(u)} ∘ λ_u`.
///
/// Occurrences of `u` in `x` map to occurrences of `φ(u)` in `φ(x)` at the
/// same positions, so each `φ(Θ_{x,u}(i))` is cut into return words of
/// `φ(x)`. Processing `i` in code order numbers them by first appearance.
pub fn lambda_morphism(rs: &ReturnStructure, phi: &Morphism) -> Result<LambdaResult> {
    if !phi.is_letter_to_letter() {
        return Err(Error::domain(
            "λ needs a coding (every image a single letter)",
        ));
    }
    if phi.source() != rs.theta.target() {
        return Err(Error::domain(
            "coding must start from the sequence's alphabet",
        ));
    }
    if rs.derived.map().is_some() {
        return Err(Error::domain(
            "λ is computed from the return structure of a fixed point",
        ));
    }
    let w = phi.apply(&rs.prefix);
    let budget = rs.derived.budget();
    let mut book = CodeBook::new(budget);
    let mut images = Vec::with_capacity(rs.len());
    for r in &rs.return_words {
        let img = phi.apply(r);
        let pieces = cut_at_prefix(&img, &w)?;
        let mut codes = Vec::with_capacity(pieces.len());
        for p in pieces {
            codes.push(book.code(&img[p])?);
        }
        images.push(Word::from(codes));
    }
    let image_alphabet = Alphabet::indexed(book.words.len());
    let lambda = Morphism::new(
        rs.derived_alphabet().clone(),
        image_alphabet.clone(),
        images,
    )?;
    let theta = Morphism::new(image_alphabet, phi.target().clone(), book.words.clone())?;
    let derived = MorphicStream::image(rs.derived.base().clone(), lambda.clone())?;
    Ok(LambdaResult {
        lambda,
        image: ReturnStructure {
            prefix: w,
            return_words: book.words,
            index: book.index,
            theta,
            derived,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stream(rules: &[(&str, &str)]) -> FixedPointStream {
        FixedPointStream::new(Morphism::from_strs(rules).unwrap(), 0).unwrap()
    }

    fn fib() -> FixedPointStream {
        stream(&[("0", "01"), ("1", "0")])
    }

    fn tm() -> FixedPointStream {
        stream(&[("0", "01"), ("1", "10")])
    }

    fn words(rs: &ReturnStructure) -> Vec<String> {
        rs.return_words()
            .iter()
            .map(|w| rs.theta().target().render(w))
            .collect()
    }

    #[test]
    fn fibonacci_return_words() {
        let mut x = fib();
        let rs = build_return_structure(&mut x, &[0]).unwrap();
        assert_eq!(words(&rs), ["01", "0"]);
        assert_eq!(
            rs.return_substitution().unwrap().describe(),
            "0 -> 01, 1 -> 0"
        );
    }

    #[test]
    fn thue_morse_return_words() {
        let mut x = tm();
        let rs = build_return_structure(&mut x, &[0]).unwrap();
        assert_eq!(words(&rs), ["011", "01", "0"]);
        assert_eq!(
            rs.return_substitution().unwrap().describe(),
            "0 -> 012, 1 -> 02, 2 -> 1"
        );
    }

    #[test]
    fn periodic_single_return_word() {
        let mut x = stream(&[("a", "ab"), ("b", "ab")]);
        let rs = build_return_structure(&mut x, &[0]).unwrap();
        assert_eq!(words(&rs), ["ab"]);
        let mut y = stream(&[("a", "aa")]);
        let rs = build_return_structure(&mut y, &[0]).unwrap();
        assert_eq!(rs.return_substitution().unwrap().describe(), "0 -> 00");
    }

    #[test]
    fn rejects_non_prefix_and_empty() {
        let mut x = fib();
        assert!(matches!(
            build_return_structure(&mut x, &[1]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            build_return_structure(&mut x, &[]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn derived_prefixes() {
        let mut x = fib();
        let mut rs = build_return_structure(&mut x, &[0]).unwrap();
        assert_eq!(
            derived_prefix(&mut rs, 8).unwrap().as_slice(),
            &[0, 1, 0, 0, 1, 0, 1, 0]
        );
        assert!(derived_prefix(&mut rs, 0).unwrap().is_empty());

        let mut x = tm();
        let mut rs = build_return_structure(&mut x, &[0]).unwrap();
        assert_eq!(
            derived_prefix(&mut rs, 15).unwrap().as_slice(),
            &[0, 1, 2, 0, 2, 1, 0, 1, 2, 1, 0, 2, 0, 1, 2]
        );
    }

    #[test]
    fn refinement_identity_when_equal() {
        let mut x = tm();
        let rs = build_return_structure(&mut x, &[0]).unwrap();
        let t = theta_refinement(&rs, &rs).unwrap();
        assert_eq!(t, Morphism::identity(rs.derived_alphabet()));
    }

    #[test]
    fn refinement_rejects_non_prefix() {
        let mut x = tm();
        let a = build_return_structure(&mut x, &[0, 1]).unwrap();
        let b = build_return_structure(&mut x, &[0]).unwrap();
        assert!(theta_refinement(&a, &b).is_err());
    }

    #[test]
    fn lambda_identity_and_collapse() {
        let mut x = tm();
        let rs = build_return_structure(&mut x, &[0]).unwrap();
        let id = Morphism::identity(rs.theta().target());
        let out = lambda_morphism(&rs, &id).unwrap();
        assert_eq!(out.lambda, Morphism::identity(rs.derived_alphabet()));

        let b = Alphabet::new(["b"]).unwrap();
        let collapse = Morphism::new(
            rs.theta().target().clone(),
            b,
            vec![vec![0].into(), vec![0].into()],
        )
        .unwrap();
        let out = lambda_morphism(&rs, &collapse).unwrap();
        assert_eq!(out.image.len(), 1);
        for i in rs.derived_alphabet().letters() {
            assert_eq!(out.lambda.image(i).len(), rs.theta().image(i).len());
            assert!(out.lambda.image(i).iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn lambda_rejects_non_coding() {
        let mut x = tm();
        let rs = build_return_structure(&mut x, &[0]).unwrap();
        let m = Morphism::from_strs(&[("0", "01"), ("1", "1")]).unwrap();
        assert!(matches!(lambda_morphism(&rs, &m), Err(Error::Domain(_))));
    }

    #[test]
    fn decode_rejects_non_concatenations() {
        let mut x = fib();
        let rs = build_return_structure(&mut x, &[0, 1]).unwrap();
        assert!(rs.decode(&[1, 1]).is_none());
        assert!(rs.decode(&[]).unwrap().is_empty());
    }
}
