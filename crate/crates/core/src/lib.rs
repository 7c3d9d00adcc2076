//! Alignment of pseudoknotted RNA structures.

pub mod align;
pub mod error;
pub mod generators;
pub mod scoring;
pub mod sequence;
pub mod structure;

pub use error::{AlignError, GeneratorError, ScoreError, StructureError};
pub use generators::{decompose, is_decomposable, DecompositionTree, Generator, GeneratorSet};
pub use scoring::{score_alignment, Score, ScoreScheme};
pub use sequence::{Alignment, Alphabet, FoldedSequence};
pub use structure::{Interval, Pairing, Structure};
