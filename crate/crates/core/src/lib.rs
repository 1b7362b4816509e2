//! Decision procedures for fixed points of primitive substitutions and their
//! morphic images, built on return words and derived sequences.

pub mod bounds;
pub mod certificate;
pub mod cli;
pub mod decision;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod morphism;
pub mod normalize;
pub mod returns;
pub mod stream;
pub mod text;
pub mod words;

pub use certificate::{Certificate, DecisionOptions, LevelSchedule, SearchBounds, Verdict};
pub use decision::{
    common_power_check, d0l_equivalence, hd0l_equivalence, hd0l_periodicity, verify_certificate,
};
pub use error::{Error, Result};
pub use morphism::Morphism;
pub use words::{Alphabet, Letter, Word};
