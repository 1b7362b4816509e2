//! Decision procedures: ω-equivalence of D0L and HD0L sequences,
//! periodicity of HD0L sequences, and the common-power search.
//!
//! Every sequence is handled as `χ(ξ)` with `ξ` the fixed point of a
//! primitive substitution and `χ` letter to letter. Levels are prefixes `w`
//! of `χ(ξ)`; at each level the return structure of `ξ` on the matching
//! prefix `u` (`χ(u) = w`) gives `σ_u`, and `λ_u` transports it to `χ(ξ)`.

mod common_power;
mod equivalence;
mod periodicity;
mod replay;

pub use common_power::common_power_check;
pub use equivalence::{d0l_equivalence, hd0l_equivalence};
pub use periodicity::hd0l_periodicity;
pub use replay::verify_certificate;

use crate::error::{Error, Result};
use crate::morphism::Morphism;
use crate::returns::{build_return_structure, lambda_morphism, LambdaResult, ReturnStructure};
use crate::stream::{FixedPointStream, MorphicStream};
use crate::text::format_morphism;
use crate::words::{Alphabet, Letter, Word};

/// `χ(ξ)` with both the base fixed point and the image available.
#[derive(Clone, Debug)]
pub(crate) struct Side {
    base: FixedPointStream,
    chi: Morphism,
    image: MorphicStream,
}

/// Return data of one side at one prefix length.
pub(crate) struct Level {
    pub rs: ReturnStructure,
    pub lambda: LambdaResult,
}

impl Level {
    pub fn substitution(&self) -> &Morphism {
        self.rs
            .return_substitution()
            .expect("levels are built on fixed points")
    }

    /// Return words of the image sequence.
    pub fn image_words(&self) -> &[Word] {
        self.lambda.image.return_words()
    }

    pub fn image_alphabet(&self) -> &Alphabet {
        self.lambda.image.theta().target()
    }

    pub fn rendered_words(&self) -> Vec<String> {
        let a = self.image_alphabet();
        self.image_words().iter().map(|w| a.render(w)).collect()
    }
}

impl Side {
    pub fn new(substitution: Morphism, seed: Letter, chi: Morphism, budget: usize) -> Result<Side> {
        if !chi.is_letter_to_letter() {
            return Err(Error::invariant("side coding must be letter to letter"));
        }
        let base = FixedPointStream::with_budget(substitution, seed, budget)?;
        let image = MorphicStream::image(base.clone(), chi.clone())?;
        Ok(Side { base, chi, image })
    }

    pub fn chi(&self) -> &Morphism {
        &self.chi
    }

    pub fn image(&mut self) -> &mut MorphicStream {
        &mut self.image
    }

    pub fn budget(&self) -> usize {
        self.base.budget()
    }

    pub fn level(&mut self, len: usize) -> Result<Level> {
        let u = self.base.prefix(len)?.to_vec();
        let rs = build_return_structure(&mut self.base, &u)?;
        let lambda = lambda_morphism(&rs, &self.chi)?;
        Ok(Level { rs, lambda })
    }
}

/// First position `< upto` where the two streams differ.
pub(crate) fn first_difference(
    p: &mut MorphicStream,
    q: &mut MorphicStream,
    upto: usize,
) -> Result<Option<usize>> {
    let a = p.prefix(upto)?.to_vec();
    let b = q.prefix(upto)?;
    Ok(a.iter().zip(b).position(|(x, y)| x != y))
}

/// Searches for a difference at doubling horizons starting from `from`,
/// giving up at the smaller budget.
pub(crate) fn search_difference(
    p: &mut MorphicStream,
    q: &mut MorphicStream,
    from: usize,
) -> Result<usize> {
    let budget = p.budget().min(q.budget());
    let mut horizon = from.max(64);
    loop {
        let h = horizon.min(budget);
        if let Some(i) = first_difference(p, q, h)? {
            return Ok(i);
        }
        if h >= budget {
            return Err(Error::budget(
                "searching for a position where the sequences differ",
                horizon,
                budget,
            ));
        }
        horizon = horizon.saturating_mul(2);
    }
}

/// Morphism in the text format with a generated name.
pub(crate) fn text_of(name: &str, m: &Morphism) -> String {
    format_morphism(name, m)
}

/// The refinement `Φ` with `Θ_{w_n} ∘ Φ = Θ_{w_m}` on image return words,
/// as the list of images of the derived letters of level `m`.
pub(crate) fn refinement(first: &Level, second: &Level) -> Option<Vec<Word>> {
    second
        .image_words()
        .iter()
        .map(|v| first.lambda.image.decode(v))
        .collect()
}

/// Least common multiple, saturating.
pub(crate) fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / num_integer::gcd(a, b)).saturating_mul(b)
}
