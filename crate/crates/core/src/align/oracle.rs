//! Exhaustive minimum alignment by enumerating monotone partial matchings.

use crate::error::AlignError;
use crate::scoring::{all_gap_weight, Role, Score, ScoreScheme};
use crate::sequence::{Alignment, FoldedSequence};

use super::dp::build_alignment;

pub const DEFAULT_SIZE_LIMIT: usize = 16;

struct Search<'a> {
    p: [Vec<usize>; 2],
    l: [Vec<usize>; 2],
    scheme: &'a ScoreScheme,
    // m[i]: position matched to base i of the first sequence (0 if none)
    m: Vec<usize>,
    best: Option<(i64, Vec<usize>)>,
}

impl Search<'_> {
    fn run(&mut self, i: usize, next: usize, delta: i64) {
        let n1 = self.m.len() - 1;
        let n2 = self.p[1].len() - 1;
        if i > n1 {
            if self.best.as_ref().is_none_or(|(b, _)| delta < *b) {
                self.best = Some((delta, self.m.clone()));
            }
            return;
        }
        let s = self.scheme;
        let pi = self.p[0][i];
        if pi != 0 && pi < i {
            // closing end: follows its partner
            let k0 = self.m[pi];
            if k0 == 0 {
                self.run(i + 1, next, delta);
            } else {
                let k = self.p[1][k0];
                if k >= next {
                    self.m[i] = k;
                    self.run(i + 1, k + 1, delta);
                    self.m[i] = 0;
                }
            }
            return;
        }
        self.run(i + 1, next, delta);
        for k in next..=n2 {
            let pk = self.p[1][k];
            let (l1, l2) = (&self.l[0], &self.l[1]);
            let d = if pi == 0 && pk == 0 {
                s.base_sub_idx(l1[i], l2[k]) as i64
                    - s.base_del_idx(l1[i]) as i64
                    - s.base_ins_idx(l2[k]) as i64
            } else if pi > i && pk > k {
                s.pair_sub_idx(l1[i], l1[pi], l2[k], l2[pk]) as i64
                    - s.pair_del_idx(l1[i], l1[pi]) as i64
                    - s.pair_ins_idx(l2[k], l2[pk]) as i64
            } else {
                continue;
            };
            self.m[i] = k;
            self.run(i + 1, k + 1, delta + d);
            self.m[i] = 0;
        }
    }
}

/// Exact minimum alignment score with one optimal alignment. Between
/// matched columns, deletions precede insertions.
pub fn brute_force_min_alignment(
    fs1: &FoldedSequence,
    fs2: &FoldedSequence,
    scheme: &ScoreScheme,
    size_limit: usize,
) -> Result<(Score, Alignment), AlignError> {
    if fs1.structure().is_gapped() || fs2.structure().is_gapped() {
        return Err(AlignError::TypeMismatch);
    }
    let total = fs1.len() + fs2.len();
    if total > size_limit {
        return Err(AlignError::TooLarge {
            total,
            limit: size_limit,
        });
    }
    let unknown = |fs: &FoldedSequence| {
        fs.word()
            .iter()
            .find(|&&c| scheme.alphabet().index(c).is_none())
            .map(|&letter| AlignError::UnknownLetter { letter })
    };
    if let Some(e) = unknown(fs1).or_else(|| unknown(fs2)) {
        return Err(e);
    }
    let base = all_gap_weight(fs1, scheme, Role::First).expect("letters checked")
        + all_gap_weight(fs2, scheme, Role::Second).expect("letters checked");
    let prep = |fs: &FoldedSequence| {
        let mut p = vec![0; fs.len() + 1];
        let mut l = vec![0; fs.len() + 1];
        for i in 1..=fs.len() {
            p[i] = fs.structure().partner(i).unwrap_or(0);
            l[i] = scheme.alphabet().index(fs.letter(i)).expect("letters checked");
        }
        (p, l)
    };
    let (p1, l1) = prep(fs1);
    let (p2, l2) = prep(fs2);
    let mut search = Search {
        p: [p1, p2],
        l: [l1, l2],
        scheme,
        m: vec![0; fs1.len() + 1],
        best: None,
    };
    search.run(1, 1, 0);
    let (delta, m) = search.best.expect("the empty matching always exists");
    let score = (base as i64 + delta) as Score;

    let mut cols = Vec::new();
    let mut k = 1;
    for i in 1..=fs1.len() {
        if m[i] == 0 {
            cols.push((Some(i as u32), None));
            continue;
        }
        while k < m[i] {
            cols.push((None, Some(k as u32)));
            k += 1;
        }
        cols.push((Some(i as u32), Some(k as u32)));
        k += 1;
    }
    while k <= fs2.len() {
        cols.push((None, Some(k as u32)));
        k += 1;
    }
    Ok((score, build_alignment(&cols, fs1, fs2)))
}
