//! Folded sequences, restriction to intervals, pairing removal, blank
//! projection and the alignment type.

use std::fmt;

use crate::error::StructureError;
use crate::structure::{Interval, Pairing, Structure};

/// A finite set of letters plus one reserved blank symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    letters: Vec<char>,
    blank: char,
}

impl Alphabet {
    pub fn new(letters: impl IntoIterator<Item = char>, blank: char) -> Result<Self, StructureError> {
        let mut out: Vec<char> = Vec::new();
        for c in letters {
            if c == blank {
                return Err(StructureError::BadAlphabet(format!(
                    "blank {blank:?} used as a letter"
                )));
            }
            if c.is_whitespace() {
                return Err(StructureError::BadAlphabet("whitespace letter".into()));
            }
            if !out.contains(&c) {
                out.push(c);
            }
        }
        if out.is_empty() {
            return Err(StructureError::BadAlphabet("no letters".into()));
        }
        Ok(Alphabet { letters: out, blank })
    }

    pub fn rna() -> Self {
        Alphabet::new("ACGU".chars(), '-').expect("valid")
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn blank(&self) -> char {
        self.blank
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn index(&self, c: char) -> Option<usize> {
        self.letters.iter().position(|&x| x == c)
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Alphabet::rna()
    }
}

/// A structure together with one letter per base. For a 1-structure the
/// word is the concatenation of both legs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FoldedSequence {
    structure: Structure,
    word: Vec<char>,
}

impl FoldedSequence {
    pub fn new(structure: Structure, word: impl AsRef<str>) -> Result<Self, StructureError> {
        Self::from_chars(structure, word.as_ref().chars().collect())
    }

    pub fn from_chars(structure: Structure, word: Vec<char>) -> Result<Self, StructureError> {
        if word.len() != structure.len() {
            return Err(StructureError::LengthMismatch {
                expected: structure.len(),
                got: word.len(),
            });
        }
        Ok(FoldedSequence { structure, word })
    }

    /// A 1-sequence from its two leg words; the gap is taken from `left`.
    pub fn from_legs(structure: Structure, left: &str, right: &str) -> Result<Self, StructureError> {
        let left: Vec<char> = left.chars().collect();
        match structure.gap() {
            Some(k) if k == left.len() => {}
            Some(k) => {
                return Err(StructureError::LengthMismatch {
                    expected: k,
                    got: left.len(),
                })
            }
            None => return Err(StructureError::WrongType),
        }
        let mut word = left;
        word.extend(right.chars());
        Self::from_chars(structure, word)
    }

    pub fn empty() -> Self {
        FoldedSequence {
            structure: Structure::empty0(),
            word: Vec::new(),
        }
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn word(&self) -> &[char] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Letter at base `i` (1-based).
    pub fn letter(&self, i: usize) -> char {
        self.word[i - 1]
    }

    /// The leg words; for a type-0 sequence the right leg is empty.
    pub fn legs(&self) -> (String, String) {
        let k = self.structure.gap().unwrap_or(self.word.len());
        (
            self.word[..k].iter().collect(),
            self.word[k..].iter().collect(),
        )
    }

    pub fn check_alphabet(&self, alphabet: &Alphabet) -> Result<(), StructureError> {
        match self.word.iter().find(|&&c| alphabet.index(c).is_none()) {
            Some(&letter) => Err(StructureError::UnknownLetter { letter }),
            None => Ok(()),
        }
    }

    /// Restriction to `i` (a 0-sequence) or to `i` and `j` (a 1-sequence
    /// with the gap between them). Unpaired bases outside the intervals and
    /// pairings with an end outside them are removed, each pairing together
    /// with both of its bases.
    pub fn restrict(&self, i: Interval, j: Option<Interval>) -> Result<Self, StructureError> {
        let n = self.len();
        for iv in std::iter::once(i).chain(j) {
            if let Some((_, hi)) = iv.bounds() {
                if hi > n {
                    return Err(StructureError::OutOfRange {
                        interval: iv.to_string(),
                        n,
                    });
                }
            }
        }
        let second = j.unwrap_or(Interval::Empty);
        if !i.precedes(&second) {
            return Err(StructureError::OverlappingIntervals {
                first: i.to_string(),
                second: second.to_string(),
            });
        }
        let inside = |x: usize| i.contains(x) || second.contains(x);
        let keep: Vec<bool> = (1..=n)
            .map(|x| inside(x) && self.structure.partner(x).is_none_or(inside))
            .collect();
        let gap = j.map(|_| i.iter().filter(|&x| keep[x - 1]).count());
        self.keep_bases(&keep, gap)
    }

    /// Removes the given pairings together with their bases.
    pub fn remove_pairings(&self, pairings: &[Pairing]) -> Result<Self, StructureError> {
        let mut keep = vec![true; self.len()];
        for &(i, j) in pairings {
            if !self.structure.has_pairing(i, j) {
                return Err(StructureError::UnknownPairing { i, j });
            }
            keep[i - 1] = false;
            keep[j - 1] = false;
        }
        let gap = self
            .structure
            .gap()
            .map(|k| keep[..k].iter().filter(|&&b| b).count());
        self.keep_bases(&keep, gap)
    }

    // Pairings must be kept or dropped as a whole by `keep`.
    fn keep_bases(&self, keep: &[bool], gap: Option<usize>) -> Result<Self, StructureError> {
        let mut new_index = vec![0usize; keep.len() + 1];
        let mut word = Vec::new();
        for (x, &k) in keep.iter().enumerate() {
            if k {
                word.push(self.word[x]);
                new_index[x + 1] = word.len();
            }
        }
        let pairings = self
            .structure
            .pairings()
            .iter()
            .filter(|&&(a, b)| keep[a - 1] && keep[b - 1])
            .map(|&(a, b)| (new_index[a], new_index[b]));
        let structure = Structure::new(word.len(), pairings, gap)?;
        Ok(FoldedSequence { structure, word })
    }
}

impl fmt::Debug for FoldedSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (l, r) = self.legs();
        if self.structure.is_gapped() {
            write!(f, "{:?} {l:?}&{r:?}", self.structure)
        } else {
            write!(f, "{:?} {l:?}", self.structure)
        }
    }
}

/// Removes every base associated with a blank (`None`). A pairing must have
/// two letters or two blanks.
pub fn project(structure: &Structure, word: &[Option<char>]) -> Result<FoldedSequence, StructureError> {
    if word.len() != structure.len() {
        return Err(StructureError::LengthMismatch {
            expected: structure.len(),
            got: word.len(),
        });
    }
    for &(i, j) in structure.pairings() {
        if word[i - 1].is_some() != word[j - 1].is_some() {
            return Err(StructureError::HalfBlankPairing { i, j });
        }
    }
    let keep: Vec<bool> = word.iter().map(Option::is_some).collect();
    let gap = structure
        .gap()
        .map(|k| keep[..k].iter().filter(|&&b| b).count());
    let letters: Vec<char> = word.iter().map(|c| c.unwrap_or(' ')).collect();
    let full = FoldedSequence {
        structure: structure.clone(),
        word: letters,
    };
    full.keep_bases(&keep, gap)
}

/// A common superstructure with two blank-extended words (`None` is the
/// blank).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Alignment {
    structure: Structure,
    top: Vec<Option<char>>,
    bottom: Vec<Option<char>>,
}

impl Alignment {
    /// Checks word lengths and that every pairing is letter/letter or
    /// blank/blank in each word.
    pub fn new(
        structure: Structure,
        top: Vec<Option<char>>,
        bottom: Vec<Option<char>>,
    ) -> Result<Self, StructureError> {
        for w in [&top, &bottom] {
            if w.len() != structure.len() {
                return Err(StructureError::LengthMismatch {
                    expected: structure.len(),
                    got: w.len(),
                });
            }
            for &(i, j) in structure.pairings() {
                if w[i - 1].is_some() != w[j - 1].is_some() {
                    return Err(StructureError::HalfBlankPairing { i, j });
                }
            }
        }
        Ok(Alignment {
            structure,
            top,
            bottom,
        })
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn top(&self) -> &[Option<char>] {
        &self.top
    }

    pub fn bottom(&self) -> &[Option<char>] {
        &self.bottom
    }

    pub fn len(&self) -> usize {
        self.top.len()
    }

    pub fn is_empty(&self) -> bool {
        self.top.is_empty()
    }

    /// Projection onto the first (`0`) or second (`1`) sequence.
    pub fn project(&self, side: usize) -> Result<FoldedSequence, StructureError> {
        project(&self.structure, if side == 0 { &self.top } else { &self.bottom })
    }

    /// Number of columns holding a blank in either word.
    pub fn blank_count(&self) -> usize {
        self.top
            .iter()
            .zip(&self.bottom)
            .filter(|(a, b)| a.is_none() || b.is_none())
            .count()
    }
}
