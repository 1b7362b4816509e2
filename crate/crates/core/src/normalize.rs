//! Rewriting a morphic sequence `ρ(σ^ω(a))` as a coding of the fixed point
//! of a primitive substitution on a marker alphabet.

use crate::error::{Error, Result};
use crate::matrix::{is_prolongable_on, primitivity};
use crate::morphism::Morphism;
use crate::stream::{FixedPointStream, MorphicStream, DEFAULT_BUDGET};
use crate::words::{Alphabet, Letter, Word};

/// `ρ(σ^ω(a)) = χ(τ^ω(seed))`, with `τ ∘ ψ = ψ ∘ σ^n` and `χ ∘ ψ = φ`
/// where `φ = ρ ∘ σ^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationResult {
    /// Primitive substitution on the markers `(c, j)`, `0 ≤ j < |φ(c)|`.
    pub tau: Morphism,
    /// Coding from markers to the target of `ρ`.
    pub chi: Morphism,
    pub seed: Letter,
    /// `c ↦ (c,0)(c,1)…(c,|φ(c)|-1)`.
    pub psi: Morphism,
    /// The non-erasing morphism `ρ ∘ σ^k`.
    pub phi: Morphism,
    pub k: u32,
    pub n: u32,
}

impl NormalizationResult {
    /// `χ(τ^ω(seed))` as a stream.
    pub fn stream(&self, budget: usize) -> Result<MorphicStream> {
        let base = FixedPointStream::with_budget(self.tau.clone(), self.seed, budget)?;
        MorphicStream::image(base, self.chi.clone())
    }

    /// Re-checks `τψ = ψσ^n`, `χψ = φ`, `φ = ρσ^k` and primitivity of `τ`
    /// letter by letter.
    pub fn verify(&self, sigma: &Morphism, rho: &Morphism) -> Result<()> {
        let sigma_n = sigma.power_bounded(self.n, DEFAULT_BUDGET)?;
        if self.phi != rho.compose(&sigma.power_bounded(self.k, DEFAULT_BUDGET)?)? {
            return Err(Error::invariant("φ differs from ρσ^k"));
        }
        if self.phi.is_erasing() {
            return Err(Error::invariant("φ erases a letter"));
        }
        if self.tau.compose(&self.psi)? != self.psi.compose(&sigma_n)? {
            return Err(Error::invariant("τψ differs from ψσ^n"));
        }
        if self.chi.compose(&self.psi)? != self.phi {
            return Err(Error::invariant("χψ differs from φ"));
        }
        if !self.chi.is_letter_to_letter() {
            return Err(Error::invariant("χ is not letter to letter"));
        }
        if !primitivity(&self.tau)?.primitive {
            return Err(Error::invariant("τ is not primitive"));
        }
        if !is_prolongable_on(&self.tau, self.seed)? {
            return Err(Error::invariant("τ is not prolongable on the seed"));
        }
        Ok(())
    }
}

/// Builds the marker substitution for `ρ(σ^ω(a))`.
///
/// `k` is 0 when `ρ` is already letter to letter and otherwise the
/// positivity exponent of `σ`, so that every image of `σ^k` contains every
/// letter and `φ = ρσ^k` erases nothing. `n ≥ 1` is the least exponent with
/// `|σ^n(c)| ≥ |φ(c)|` for all `c`.
pub fn normalize_morphic(
    sigma: &Morphism,
    a: Letter,
    rho: &Morphism,
) -> Result<NormalizationResult> {
    let prim = primitivity(sigma)?;
    let Some(k0) = prim.positivity_exponent else {
        return Err(Error::domain(
            "normalization needs a primitive substitution",
        ));
    };
    if !sigma.source().contains(a) || !is_prolongable_on(sigma, a)? {
        return Err(Error::domain("substitution is not prolongable on the seed"));
    }
    let rho = if rho.source() == sigma.source() {
        rho.clone()
    } else {
        rho.with_source(sigma.source())?
    };
    if rho.images().iter().all(|w| w.is_empty()) {
        return Err(Error::domain("morphism erases every letter"));
    }
    let k = if rho.is_letter_to_letter() { 0 } else { k0 };
    let phi = rho.compose(&sigma.power_bounded(k, DEFAULT_BUDGET)?)?;
    if phi.is_erasing() {
        return Err(Error::invariant("ρσ^k erases a letter"));
    }

    let d = sigma.source().len();
    let need: Vec<usize> = phi.images().iter().map(|w| w.len()).collect();
    let mut lens: Vec<usize> = sigma.images().iter().map(|w| w.len()).collect();
    let mut n = 1u32;
    while lens.iter().zip(&need).any(|(l, w)| l < w) {
        lens = sigma
            .images()
            .iter()
            .map(|w| {
                w.iter()
                    .map(|&b| lens[b as usize])
                    .fold(0usize, usize::saturating_add)
            })
            .collect();
        n += 1;
    }
    let sigma_n = sigma.power_bounded(n, DEFAULT_BUDGET)?;

    let mut offset = Vec::with_capacity(d);
    let mut labels = Vec::new();
    for c in sigma.source().letters() {
        offset.push(labels.len() as Letter);
        for j in 0..need[c as usize] {
            labels.push(format!("({},{})", sigma.source().label(c), j));
        }
    }
    let markers = Alphabet::new(labels)?;
    let psi_img = |c: Letter| -> Vec<Letter> {
        (0..need[c as usize] as Letter)
            .map(|j| offset[c as usize] + j)
            .collect()
    };
    let psi = Morphism::new(
        sigma.source().clone(),
        markers.clone(),
        sigma
            .source()
            .letters()
            .map(|c| Word::from(psi_img(c)))
            .collect(),
    )?;

    let mut tau_images = Vec::with_capacity(markers.len());
    let mut chi_images = Vec::with_capacity(markers.len());
    for c in sigma.source().letters() {
        let img = sigma_n.image(c);
        let len = need[c as usize];
        for j in 0..len {
            let part = if j + 1 < len {
                &img[j..j + 1]
            } else {
                &img[j..]
            };
            tau_images.push(psi.apply(part));
            chi_images.push(Word::from(vec![phi.image(c)[j]]));
        }
    }
    let tau = Morphism::substitution(markers.clone(), tau_images)?;
    let chi = Morphism::new(markers, phi.target().clone(), chi_images)?;
    let result = NormalizationResult {
        tau,
        chi,
        seed: offset[a as usize],
        psi,
        phi,
        k,
        n,
    };
    result.verify(sigma, &rho)?;
    Ok(result)
}
