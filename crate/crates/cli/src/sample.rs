//! Seeded random folded sequences for benchmarks and sweeps.

use pkalign::{is_decomposable, FoldedSequence, GeneratorSet, Structure};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random structure on `n` bases with between 0 and `n / 3` pairings.
pub fn random_structure<R: Rng>(rng: &mut R, n: usize) -> Structure {
    let k = rng.gen_range(0..=n / 3);
    let mut bases: Vec<usize> = (1..=n).collect();
    bases.shuffle(rng);
    let pairings = bases[..2 * k].chunks(2).map(|c| (c[0].min(c[1]), c[0].max(c[1])));
    Structure::new(n, pairings, None).expect("distinct bases")
}

pub fn random_word<R: Rng>(rng: &mut R, n: usize, letters: &[char]) -> String {
    (0..n).map(|_| *letters.choose(rng).expect("letters")).collect()
}

/// Rejection-samples a decomposable structure on `n` bases.
pub fn random_decomposable<R: Rng>(rng: &mut R, n: usize, gens: &GeneratorSet) -> Structure {
    loop {
        let s = random_structure(rng, n);
        if is_decomposable(&s, gens) {
            return s;
        }
    }
}

/// Decomposable structure on `n` bases with random RNA letters.
pub fn random_folded<R: Rng>(rng: &mut R, n: usize, gens: &GeneratorSet) -> FoldedSequence {
    let s = random_decomposable(rng, n, gens);
    let w = random_word(rng, n, &['A', 'C', 'G', 'U']);
    FoldedSequence::new(s, w).expect("lengths agree")
}
