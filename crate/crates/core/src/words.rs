//! Letters, words and alphabets.
//!
//! Letters are dense indices into an [`Alphabet`]; the alphabet keeps the
//! human-readable label of every index. Alphabets built for derived
//! sequences use the decimal labels `0`, `1`, ... so that they serialize as
//! plain indices.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Deref, DerefMut};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Index of a letter inside its alphabet.
pub type Letter = u32;

/// A finite word: a sequence of letter indices.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new() -> Self {
        Word(Vec::new())
    }

    pub fn into_vec(self) -> Vec<Letter> {
        self.0
    }

    pub fn as_slice(&self) -> &[Letter] {
        &self.0
    }

    /// Letter-occurrence counts over an alphabet of `dim` letters.
    pub fn parikh(&self, dim: usize) -> Vec<u64> {
        parikh(&self.0, dim)
    }
}

pub(crate) fn parikh(word: &[Letter], dim: usize) -> Vec<u64> {
    let mut v = vec![0u64; dim];
    for &l in word {
        v[l as usize] += 1;
    }
    v
}

impl Deref for Word {
    type Target = Vec<Letter>;
    fn deref(&self) -> &Vec<Letter> {
        &self.0
    }
}

impl DerefMut for Word {
    fn deref_mut(&mut self) -> &mut Vec<Letter> {
        &mut self.0
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl From<&[Letter]> for Word {
    fn from(v: &[Letter]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word{:?}", self.0)
    }
}

/// An ordered finite set of letter labels.
///
/// Cloning is cheap; labels are shared.
#[derive(Clone)]
pub struct Alphabet {
    labels: Arc<Vec<String>>,
    index: Arc<HashMap<String, Letter>>,
}

impl Alphabet {
    /// Builds an alphabet from labels, rejecting empty or duplicated input.
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::domain("alphabet must not be empty"));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.chars().any(char::is_whitespace) {
                return Err(Error::domain(format!("invalid letter label {l:?}")));
            }
            if index.insert(l.clone(), i as Letter).is_some() {
                return Err(Error::domain(format!("duplicate letter {l}")));
            }
        }
        Ok(Alphabet {
            labels: Arc::new(labels),
            index: Arc::new(index),
        })
    }

    /// The index alphabet `{0, 1, ..., size-1}` used for derived sequences.
    pub fn indexed(size: usize) -> Self {
        assert!(size > 0, "index alphabet must be non-empty");
        Alphabet::new((0..size).map(|i| i.to_string())).expect("decimal labels are distinct")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, letter: Letter) -> &str {
        &self.labels[letter as usize]
    }

    pub fn letter(&self, label: &str) -> Option<Letter> {
        self.index.get(label).copied()
    }

    pub fn contains(&self, letter: Letter) -> bool {
        (letter as usize) < self.labels.len()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> {
        0..self.labels.len() as Letter
    }

    /// Whether this is the canonical index alphabet of its size.
    pub fn is_indexed(&self) -> bool {
        self.labels
            .iter()
            .enumerate()
            .all(|(i, l)| *l == i.to_string())
    }

    /// Parses a word written as whitespace-separated labels.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        text.split_whitespace()
            .map(|t| {
                self.letter(t)
                    .ok_or_else(|| Error::domain(format!("letter {t} is not in the alphabet")))
            })
            .collect()
    }

    /// Parses a word that is either whitespace separated or, when every
    /// label is a single character, written as a contiguous string.
    pub fn parse_word_loose(&self, text: &str) -> Result<Word> {
        if text.split_whitespace().count() == 1
            && self.labels.iter().all(|l| l.chars().count() == 1)
        {
            return text
                .trim()
                .chars()
                .map(|c| {
                    let s = c.to_string();
                    self.letter(&s)
                        .ok_or_else(|| Error::domain(format!("letter {s} is not in the alphabet")))
                })
                .collect();
        }
        self.parse_word(text)
    }

    /// Renders a word. Single-character alphabets are rendered contiguously,
    /// others with a separating space.
    pub fn render(&self, word: &[Letter]) -> String {
        let compact = self.labels.iter().all(|l| l.chars().count() == 1);
        let sep = if compact { "" } else { " " };
        word.iter()
            .map(|&l| self.label(l))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Union alphabet: the letters of `self` followed by the new letters of
    /// `other` in order.
    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut labels: Vec<String> = self.labels.to_vec();
        for l in other.labels.iter() {
            if self.letter(l).is_none() {
                labels.push(l.clone());
            }
        }
        Alphabet::new(labels).expect("union of valid alphabets is valid")
    }

    /// Translation table sending each letter of `self` to the letter with the
    /// same label in `other`.
    pub fn embedding_into(&self, other: &Alphabet) -> Result<Vec<Letter>> {
        self.labels
            .iter()
            .map(|l| {
                other.letter(l).ok_or_else(|| {
                    Error::domain(format!("letter {l} is missing from the target alphabet"))
                })
            })
            .collect()
    }

    /// Same label set, possibly in another order.
    pub fn same_letters(&self, other: &Alphabet) -> bool {
        self.len() == other.len() && self.labels.iter().all(|l| other.letter(l).is_some())
    }
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}

/// Knuth–Morris–Pratt matcher over letter slices.
pub(crate) struct Matcher<'a> {
    pattern: &'a [Letter],
    failure: Vec<usize>,
}

impl<'a> Matcher<'a> {
    pub fn new(pattern: &'a [Letter]) -> Self {
        let mut failure = vec![0; pattern.len()];
        let mut k = 0;
        for i in 1..pattern.len() {
            while k > 0 && pattern[i] != pattern[k] {
                k = failure[k - 1];
            }
            if pattern[i] == pattern[k] {
                k += 1;
            }
            failure[i] = k;
        }
        Matcher { pattern, failure }
    }

    /// Start positions of every occurrence of the pattern in the
    /// concatenation `head · tail`, restricted to starts below `limit`.
    pub fn occurrences_in(&self, head: &[Letter], tail: &[Letter], limit: usize) -> Vec<usize> {
        let m = self.pattern.len();
        let mut out = Vec::new();
        if m == 0 {
            return (0..=(head.len() + tail.len()).min(limit.saturating_sub(1))).collect();
        }
        let mut k = 0;
        for (i, &c) in head.iter().chain(tail.iter()).enumerate() {
            while k > 0 && c != self.pattern[k] {
                k = self.failure[k - 1];
            }
            if c == self.pattern[k] {
                k += 1;
            }
            if k == m {
                let start = i + 1 - m;
                if start >= limit {
                    break;
                }
                out.push(start);
                k = self.failure[k - 1];
            }
            if i + 1 >= limit + m {
                break;
            }
        }
        out
    }

    /// First occurrence starting at or after `from`.
    pub fn find_from(&self, text: &[Letter], from: usize) -> Option<usize> {
        let m = self.pattern.len();
        if m == 0 {
            return (from <= text.len()).then_some(from);
        }
        if from >= text.len() {
            return None;
        }
        let mut k = 0;
        for (i, &c) in text.iter().enumerate().skip(from) {
            while k > 0 && c != self.pattern[k] {
                k = self.failure[k - 1];
            }
            if c == self.pattern[k] {
                k += 1;
            }
            if k == m {
                return Some(i + 1 - m);
            }
        }
        None
    }
}
