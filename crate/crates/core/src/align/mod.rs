//! Structural alignment: the interval dynamic program, traceback,
//! validation and an exhaustive oracle.

mod dp;
mod oracle;

use crate::error::AlignError;
use crate::generators::{GeneratorSet, SplitMode};
use crate::scoring::{Score, ScoreScheme};
use crate::sequence::{project, Alignment, FoldedSequence};
use crate::structure::Structure;

pub use oracle::{brute_force_min_alignment, DEFAULT_SIZE_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AlignOptions {
    pub mode: SplitMode,
    /// Record best choices so an alignment can be reconstructed.
    pub traceback: bool,
    /// Score a 1-structure entry with no pairing between the legs on one
    /// side as its two leg alignments, skipping the generator splittings.
    pub split_disconnected: bool,
}

impl Default for AlignOptions {
    fn default() -> Self {
        AlignOptions {
            mode: SplitMode::Relaxed,
            traceback: false,
            split_disconnected: true,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AlignStats {
    pub s0_entries: usize,
    pub s1_entries: usize,
    /// Splitting pairs whose decomposition score was evaluated.
    pub splittings: u64,
}

#[derive(Clone, Debug)]
pub struct AlignResult {
    pub score: Score,
    pub alignment: Option<Alignment>,
    pub stats: AlignStats,
}

/// A finished alignment job together with its memo tables.
pub struct Aligner<'a> {
    ctx: dp::Ctx<'a>,
    memo: dp::Memo,
    fs1: &'a FoldedSequence,
    fs2: &'a FoldedSequence,
    score: Score,
}

impl<'a> Aligner<'a> {
    /// Fills the memo tables for two 0-structure folded sequences.
    pub fn run(
        fs1: &'a FoldedSequence,
        fs2: &'a FoldedSequence,
        scheme: &'a ScoreScheme,
        gens: &'a GeneratorSet,
        options: AlignOptions,
    ) -> Result<Self, AlignError> {
        let ctx = dp::Ctx::new(fs1, fs2, scheme, gens, &options)?;
        let mut memo = dp::Memo::default();
        let score = ctx.root(&mut memo);
        Ok(Aligner {
            ctx,
            memo,
            fs1,
            fs2,
            score,
        })
    }

    pub fn score(&self) -> Score {
        self.score
    }

    pub fn stats(&self) -> AlignStats {
        self.ctx.stats(&self.memo)
    }

    /// Replays the recorded choices into an alignment.
    pub fn traceback(&self) -> Result<Alignment, AlignError> {
        self.ctx.traceback(&self.memo, self.fs1, self.fs2)
    }
}

/// Minimum semi-decomposable alignment score, with an optimal alignment
/// when `options.traceback` is set.
pub fn align(
    fs1: &FoldedSequence,
    fs2: &FoldedSequence,
    scheme: &ScoreScheme,
    gens: &GeneratorSet,
    options: AlignOptions,
) -> Result<AlignResult, AlignError> {
    let job = Aligner::run(fs1, fs2, scheme, gens, options)?;
    let alignment = if options.traceback {
        Some(job.traceback()?)
    } else {
        None
    };
    Ok(AlignResult {
        score: job.score(),
        alignment,
        stats: job.stats(),
    })
}

/// Checks that `a` projects onto `fs1` and `fs2`.
pub fn validate_alignment(
    a: &Alignment,
    fs1: &FoldedSequence,
    fs2: &FoldedSequence,
) -> Result<(), String> {
    validate_parts(a.structure(), a.top(), a.bottom(), fs1, fs2)
}

/// As [`validate_alignment`], on raw parts that may violate the
/// letter/blank pairing rule.
pub fn validate_parts(
    structure: &Structure,
    top: &[Option<char>],
    bottom: &[Option<char>],
    fs1: &FoldedSequence,
    fs2: &FoldedSequence,
) -> Result<(), String> {
    if structure.is_gapped() {
        return Err("alignment structure has a gap".into());
    }
    for (name, word, fs) in [("first", top, fs1), ("second", bottom, fs2)] {
        if word.len() != structure.len() {
            return Err(format!(
                "{name} word has {} columns, structure has {}",
                word.len(),
                structure.len()
            ));
        }
        for &(i, j) in structure.pairings() {
            if word[i - 1].is_some() != word[j - 1].is_some() {
                return Err(format!("pairing ({i},{j}) is half blank in the {name} word"));
            }
        }
        let p = project(structure, word).map_err(|e| e.to_string())?;
        if p.word() != fs.word() {
            return Err(format!(
                "{name} word projects to {:?}, expected {:?}",
                p.word().iter().collect::<String>(),
                fs.word().iter().collect::<String>()
            ));
        }
        if p.structure() != fs.structure() {
            return Err(format!(
                "{name} word projects to structure {}, expected {}",
                p.structure(),
                fs.structure()
            ));
        }
    }
    Ok(())
}
