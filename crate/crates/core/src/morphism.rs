//! Morphisms of free monoids.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::IncidenceMatrix;
use crate::words::{Alphabet, Letter, Word};

/// A morphism from `source*` to `target*`, given by the image of every
/// source letter.
///
/// Substitutions, codings, return-word codings, return substitutions and the
/// image maps between derived alphabets are all values of this type.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism {
    source: Alphabet,
    target: Alphabet,
    images: Vec<Word>,
}

impl Morphism {
    pub fn new(source: Alphabet, target: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != source.len() {
            return Err(Error::domain(format!(
                "morphism needs {} images, got {}",
                source.len(),
                images.len()
            )));
        }
        for (a, img) in images.iter().enumerate() {
            if let Some(&bad) = img.iter().find(|&&l| !target.contains(l)) {
                return Err(Error::domain(format!(
                    "image of {} uses letter index {bad} outside the target alphabet",
                    source.label(a as Letter)
                )));
            }
        }
        Ok(Morphism {
            source,
            target,
            images,
        })
    }

    /// Endomorphism of an alphabet.
    pub fn substitution(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        Morphism::new(alphabet.clone(), alphabet, images)
    }

    /// Builds an endomorphism on the index alphabet `{0..n-1}`.
    pub fn on_indices(images: Vec<Vec<Letter>>) -> Result<Self> {
        let n = images.len();
        let alphabet = Alphabet::indexed(n.max(1));
        Morphism::new(
            alphabet.clone(),
            alphabet,
            images.into_iter().map(Word::from).collect(),
        )
    }

    /// Convenience constructor from single-character labels, e.g.
    /// `Morphism::from_strs(&[("0", "01"), ("1", "0")])`.
    pub fn from_strs(rules: &[(&str, &str)]) -> Result<Self> {
        let alphabet = Alphabet::new(rules.iter().map(|(a, _)| *a))?;
        let images = rules
            .iter()
            .map(|(_, img)| alphabet.parse_word_loose(img))
            .collect::<Result<Vec<_>>>()?;
        Morphism::substitution(alphabet, images)
    }

    pub fn identity(alphabet: &Alphabet) -> Self {
        Morphism {
            source: alphabet.clone(),
            target: alphabet.clone(),
            images: alphabet.letters().map(|l| Word::from(vec![l])).collect(),
        }
    }

    pub fn source(&self) -> &Alphabet {
        &self.source
    }

    pub fn target(&self) -> &Alphabet {
        &self.target
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, letter: Letter) -> &Word {
        &self.images[letter as usize]
    }

    pub fn is_endomorphism(&self) -> bool {
        self.source == self.target
    }

    pub fn is_erasing(&self) -> bool {
        self.images.iter().any(|w| w.is_empty())
    }

    /// Every image is a single letter.
    pub fn is_letter_to_letter(&self) -> bool {
        self.images.iter().all(|w| w.len() == 1)
    }

    /// Letter-to-letter and onto the target alphabet.
    pub fn is_coding(&self) -> bool {
        if !self.is_letter_to_letter() {
            return false;
        }
        let mut hit = vec![false; self.target.len()];
        for w in &self.images {
            hit[w[0] as usize] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// `|σ|`: the maximal image length.
    pub fn norm(&self) -> usize {
        self.images.iter().map(|w| w.len()).max().unwrap_or(0)
    }

    pub fn apply(&self, word: &[Letter]) -> Word {
        let mut out = Vec::with_capacity(word.iter().map(|&l| self.images[l as usize].len()).sum());
        self.apply_into(word, &mut out);
        Word::from(out)
    }

    pub(crate) fn apply_into(&self, word: &[Letter], out: &mut Vec<Letter>) {
        for &l in word {
            out.extend_from_slice(&self.images[l as usize]);
        }
    }

    /// Length of the image of `word` without building it.
    pub fn image_len(&self, word: &[Letter]) -> usize {
        word.iter().map(|&l| self.images[l as usize].len()).sum()
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &Morphism) -> Result<Morphism> {
        if inner.target != self.source {
            return Err(Error::domain(
                "composition needs the inner target to equal the outer source",
            ));
        }
        Ok(Morphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            images: inner.images.iter().map(|w| self.apply(w)).collect(),
        })
    }

    /// `self^n` for an endomorphism; `n = 0` gives the identity.
    pub fn power(&self, n: u32) -> Result<Morphism> {
        if !self.is_endomorphism() {
            return Err(Error::domain("only endomorphisms have powers"));
        }
        let mut acc = Morphism::identity(&self.source);
        for _ in 0..n {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Like [`Morphism::power`] but gives up once an image exceeds `limit`
    /// letters.
    pub fn power_bounded(&self, n: u32, limit: usize) -> Result<Morphism> {
        if !self.is_endomorphism() {
            return Err(Error::domain("only endomorphisms have powers"));
        }
        let mut acc = Morphism::identity(&self.source);
        for _ in 0..n {
            let lens: usize = acc
                .images
                .iter()
                .map(|w| self.image_len(w))
                .max()
                .unwrap_or(0);
            if lens > limit {
                return Err(Error::budget("morphism power", lens, limit));
            }
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn incidence_matrix(&self) -> IncidenceMatrix {
        IncidenceMatrix::of(self)
    }

    /// Reinterprets the morphism over a larger target alphabet that contains
    /// every target label.
    pub fn retarget(&self, target: &Alphabet) -> Result<Morphism> {
        let map = self.target.embedding_into(target)?;
        Ok(Morphism {
            source: self.source.clone(),
            target: target.clone(),
            images: self
                .images
                .iter()
                .map(|w| w.iter().map(|&l| map[l as usize]).collect())
                .collect(),
        })
    }

    /// Reorders an endomorphism onto an alphabet with the same letters.
    pub fn relabel(&self, alphabet: &Alphabet) -> Result<Morphism> {
        if !self.is_endomorphism() || !self.source.same_letters(alphabet) {
            return Err(Error::domain(
                "relabel needs an endomorphism over the same letters",
            ));
        }
        let map = self.source.embedding_into(alphabet)?;
        let mut images = vec![Word::new(); alphabet.len()];
        for (a, img) in self.images.iter().enumerate() {
            images[map[a] as usize] = img.iter().map(|&l| map[l as usize]).collect();
        }
        Morphism::substitution(alphabet.clone(), images)
    }

    /// Reorders the source alphabet of a morphism onto `alphabet`, which must
    /// carry the same letters.
    pub fn with_source(&self, alphabet: &Alphabet) -> Result<Morphism> {
        if !self.source.same_letters(alphabet) {
            let missing: Vec<&str> = alphabet
                .labels()
                .iter()
                .filter(|l| self.source.letter(l).is_none())
                .chain(
                    self.source
                        .labels()
                        .iter()
                        .filter(|l| alphabet.letter(l).is_none()),
                )
                .map(String::as_str)
                .collect();
            return Err(Error::domain(format!(
                "alphabet mismatch, offending letters: {}",
                missing.join(" ")
            )));
        }
        let images = alphabet
            .labels()
            .iter()
            .map(|l| self.images[self.source.letter(l).unwrap() as usize].clone())
            .collect();
        Morphism::new(alphabet.clone(), self.target.clone(), images)
    }

    /// Human-readable rendering `a -> ab, b -> a`.
    pub fn describe(&self) -> String {
        self.source
            .letters()
            .map(|a| {
                let img = &self.images[a as usize];
                let rendered = if img.is_empty() {
                    "eps".to_string()
                } else {
                    self.target.render(img)
                };
                format!("{} -> {}", self.source.label(a), rendered)
            })
            .collect::<Vec<_>>()
            .join(", ")
    }
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Morphism({})", self.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fib() -> Morphism {
        Morphism::from_strs(&[("0", "01"), ("1", "0")]).unwrap()
    }

    #[test]
    fn flags() {
        let f = fib();
        assert!(f.is_endomorphism());
        assert!(!f.is_erasing());
        assert!(!f.is_coding());
        assert_eq!(f.norm(), 2);
        let e = Morphism::from_strs(&[("a", "ab"), ("b", "")]).unwrap();
        assert!(e.is_erasing());
        assert!(Morphism::identity(f.source()).is_coding());
    }

    #[test]
    fn powers_and_composition() {
        let f = fib();
        let f3 = f.power(3).unwrap();
        assert_eq!(f3.image(0).as_slice(), &[0, 1, 0, 0, 1]);
        assert_eq!(f.compose(&f).unwrap().image(1).as_slice(), &[0, 1]);
        assert_eq!(f.power(0).unwrap(), Morphism::identity(f.source()));
    }

    #[test]
    fn image_count_mismatch_is_rejected() {
        let a = Alphabet::indexed(2);
        assert!(Morphism::new(a.clone(), a, vec![Word::new()]).is_err());
    }

    #[test]
    fn relabel_permutes_consistently() {
        let f = fib();
        let swapped = Alphabet::new(["1", "0"]).unwrap();
        let g = f.relabel(&swapped).unwrap();
        // 0 is now index 1; its image 01 is [1, 0].
        assert_eq!(g.image(1).as_slice(), &[1, 0]);
        assert_eq!(g.image(0).as_slice(), &[1]);
    }
}
