//! Lazily materialized fixed points and their morphic images.

use crate::error::{Error, Result};
use crate::matrix::is_prolongable_on;
use crate::morphism::Morphism;
use crate::words::{Letter, Matcher, Word};

/// Default cap on the number of materialized symbols per stream.
pub const DEFAULT_BUDGET: usize = 1 << 26;

/// Prefix of `σ^ω(a)` for a substitution prolongable on `a`.
///
/// The buffer always equals `σ(buffer[..cursor])`; growing it appends the
/// image of the next unexpanded symbol, so materialized symbols never change.
#[derive(Clone, Debug)]
pub struct FixedPointStream {
    substitution: Morphism,
    seed: Letter,
    buffer: Vec<Letter>,
    cursor: usize,
    budget: usize,
}

impl FixedPointStream {
    pub fn new(substitution: Morphism, seed: Letter) -> Result<Self> {
        Self::with_budget(substitution, seed, DEFAULT_BUDGET)
    }

    pub fn with_budget(substitution: Morphism, seed: Letter, budget: usize) -> Result<Self> {
        if !substitution.is_endomorphism() {
            return Err(Error::domain("fixed points need an endomorphism"));
        }
        if !substitution.source().contains(seed) {
            return Err(Error::domain("seed letter is not in the alphabet"));
        }
        if !is_prolongable_on(&substitution, seed)? {
            return Err(Error::domain(format!(
                "substitution is not prolongable on {}",
                substitution.source().label(seed)
            )));
        }
        let buffer = substitution.image(seed).to_vec();
        Ok(FixedPointStream {
            substitution,
            seed,
            buffer,
            cursor: 1,
            budget,
        })
    }

    pub fn substitution(&self) -> &Morphism {
        &self.substitution
    }

    pub fn seed(&self) -> Letter {
        self.seed
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// The symbols materialized so far.
    pub fn materialized(&self) -> &[Letter] {
        &self.buffer
    }

    /// First `n` symbols of the fixed point.
    pub fn prefix(&mut self, n: usize) -> Result<&[Letter]> {
        if n > self.budget {
            return Err(Error::budget("fixed point prefix", n, self.budget));
        }
        while self.buffer.len() < n {
            if self.cursor >= self.buffer.len() {
                return Err(Error::invariant("fixed point stopped growing"));
            }
            let l = self.buffer[self.cursor];
            self.cursor += 1;
            let img = self.substitution.image(l);
            self.buffer.extend_from_slice(img);
        }
        Ok(&self.buffer[..n])
    }

    pub fn at(&mut self, i: usize) -> Result<Letter> {
        Ok(self.prefix(i + 1)?[i])
    }

    /// Grows the buffer until `pattern` has an occurrence starting at or
    /// after `from`, returning its position.
    pub fn find_from(&mut self, pattern: &[Letter], from: usize) -> Result<usize> {
        let matcher = Matcher::new(pattern);
        let mut want = (from + pattern.len()).max(16) * 2;
        loop {
            let avail = want.min(self.budget);
            let text = self.prefix(avail.max(from + pattern.len()).min(self.budget))?;
            if let Some(p) = matcher.find_from(text, from) {
                return Ok(p);
            }
            if avail >= self.budget {
                return Err(Error::budget(
                    "searching for a factor occurrence",
                    want,
                    self.budget,
                ));
            }
            want *= 2;
        }
    }
}

/// `h(σ^ω(a))` for a morphism `h` that does not erase every letter of the
/// fixed point. Without `h` this is the fixed point itself.
#[derive(Clone, Debug)]
pub struct MorphicStream {
    base: FixedPointStream,
    map: Option<Morphism>,
    buffer: Vec<Letter>,
    consumed: usize,
}

impl MorphicStream {
    pub fn pure(base: FixedPointStream) -> Self {
        MorphicStream {
            base,
            map: None,
            buffer: Vec::new(),
            consumed: 0,
        }
    }

    pub fn image(base: FixedPointStream, map: Morphism) -> Result<Self> {
        if map.source() != base.substitution().source() {
            return Err(Error::domain(
                "image map must start from the fixed point's alphabet",
            ));
        }
        if map.images().iter().all(|w| w.is_empty()) {
            return Err(Error::domain("image map erases every letter"));
        }
        Ok(MorphicStream {
            base,
            map: Some(map),
            buffer: Vec::new(),
            consumed: 0,
        })
    }

    pub fn base(&self) -> &FixedPointStream {
        &self.base
    }

    pub fn base_mut(&mut self) -> &mut FixedPointStream {
        &mut self.base
    }

    pub fn map(&self) -> Option<&Morphism> {
        self.map.as_ref()
    }

    pub fn budget(&self) -> usize {
        self.base.budget
    }

    pub fn prefix(&mut self, n: usize) -> Result<&[Letter]> {
        let MorphicStream {
            base,
            map,
            buffer,
            consumed,
        } = self;
        let Some(map) = map else {
            return base.prefix(n);
        };
        let budget = base.budget;
        if n > budget {
            return Err(Error::budget("morphic sequence prefix", n, budget));
        }
        let mut chunk = 64usize;
        while buffer.len() < n {
            if *consumed >= budget {
                return Err(Error::budget("morphic sequence prefix", n, budget));
            }
            let upto = (*consumed + chunk).min(budget);
            let src = base.prefix(upto)?;
            for &l in &src[*consumed..upto] {
                buffer.extend_from_slice(map.image(l));
                *consumed += 1;
                if buffer.len() >= n {
                    break;
                }
            }
            chunk = chunk.saturating_mul(2);
        }
        Ok(&buffer[..n])
    }

    pub fn at(&mut self, i: usize) -> Result<Letter> {
        Ok(self.prefix(i + 1)?[i])
    }
}

/// All `i < horizon - |w| + 1` with `x[i..i+|w|] = w`, ascending.
pub fn factor_occurrences(
    x: &mut FixedPointStream,
    w: &[Letter],
    horizon: usize,
) -> Result<Vec<usize>> {
    if w.len() > horizon {
        return Ok(Vec::new());
    }
    let text = x.prefix(horizon)?;
    let matcher = Matcher::new(w);
    Ok(matcher.occurrences_in(text, &[], horizon - w.len() + 1))
}

/// Convenience: the first `n` symbols of `σ^ω(a)` as a [`Word`].
pub fn fixed_point_prefix(s: &mut FixedPointStream, n: usize) -> Result<Word> {
    Ok(Word::from(s.prefix(n)?))
}
