//! The memoised interval recursion and its traceback.

use std::rc::Rc;

use rustc_hash::FxHashMap;

use crate::error::AlignError;
use crate::generators::{Generator, GeneratorSet, Slot, SplitMode};
use crate::scoring::{PairDeletionTable, Role, Score, ScoreScheme};
use crate::sequence::{Alignment, FoldedSequence};
use crate::structure::Structure;

use super::{AlignOptions, AlignStats};

/// Closed interval of base positions; `lo == 0` is the empty interval.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub(crate) struct Iv {
    lo: u32,
    hi: u32,
}

const EMPTY: Iv = Iv { lo: 0, hi: 0 };

impl Iv {
    fn new(lo: u32, hi: u32) -> Iv {
        if lo == 0 || lo > hi {
            EMPTY
        } else {
            Iv { lo, hi }
        }
    }

    fn is_empty(self) -> bool {
        self.lo == 0
    }

    fn len(self) -> u32 {
        if self.is_empty() {
            0
        } else {
            self.hi - self.lo + 1
        }
    }

    fn contains(self, x: u32) -> bool {
        !self.is_empty() && self.lo <= x && x <= self.hi
    }

    fn pack(self) -> u32 {
        (self.lo << 16) | self.hi
    }
}

/// Positions beyond this cannot be packed into memo keys.
pub(crate) const MAX_BASES: usize = u16::MAX as usize;

struct Side {
    partner: Vec<u32>,
    letter: Vec<usize>,
    // unp[i]: gap weight of the unpaired bases in 1..=i
    unp: Vec<Score>,
    r: PairDeletionTable,
    // free[i]: number of unpaired bases in 1..=i
    free: Vec<u32>,
    // pc[a * (n + 1) + b]: number of pairings (i, j) with i <= a, j <= b
    pc: Vec<u32>,
}

impl Side {
    fn new(fs: &FoldedSequence, scheme: &ScoreScheme, role: Role) -> Result<Side, AlignError> {
        let n = fs.len();
        let mut letter = vec![0; n + 1];
        let mut partner = vec![0; n + 1];
        let mut unp = vec![0; n + 1];
        for i in 1..=n {
            let c = fs.letter(i);
            letter[i] = scheme
                .alphabet()
                .index(c)
                .ok_or(AlignError::UnknownLetter { letter: c })?;
            partner[i] = fs.structure().partner(i).map_or(0, |p| p as u32);
            unp[i] = unp[i - 1]
                + if partner[i] == 0 {
                    scheme.base_gap_idx(letter[i], role)
                } else {
                    0
                };
        }
        let r = PairDeletionTable::new(fs, scheme, role).expect("letters checked above");
        let mut free = vec![0; n + 1];
        for i in 1..=n {
            free[i] = free[i - 1] + u32::from(partner[i] == 0);
        }
        let w = n + 1;
        let mut pc = vec![0; w * w];
        for &(i, j) in fs.structure().pairings() {
            pc[i * w + j] += 1;
        }
        for a in 1..w {
            for b in 1..w {
                pc[a * w + b] += pc[(a - 1) * w + b] + pc[a * w + b - 1] - pc[(a - 1) * w + b - 1];
            }
        }
        Ok(Side {
            partner,
            letter,
            unp,
            r,
            free,
            pc,
        })
    }

    fn free(&self, iv: Iv) -> u32 {
        if iv.is_empty() {
            0
        } else {
            self.free[iv.hi as usize] - self.free[iv.lo as usize - 1]
        }
    }

    /// Number of pairings from `a` to `b`, `a` left of or equal to `b`.
    fn pairs(&self, a: Iv, b: Iv) -> u32 {
        if a.is_empty() || b.is_empty() {
            return 0;
        }
        let w = self.free.len();
        let at = |x: u32, y: u32| self.pc[x as usize * w + y as usize];
        at(a.hi, b.hi) + at(a.lo - 1, b.lo - 1) - at(a.lo - 1, b.hi) - at(a.hi, b.lo - 1)
    }

    /// Unpaired bases and pairings inside the context `(i, j)`.
    fn content(&self, i: Iv, j: Iv) -> (u32, u32) {
        (
            self.free(i) + self.free(j),
            self.pairs(i, i) + self.pairs(j, j) + self.pairs(i, j),
        )
    }

    fn live(&self, x: u32, c: (Iv, Iv)) -> bool {
        let p = self.partner[x as usize];
        p == 0 || c.0.contains(p) || c.1.contains(p)
    }

    /// Drops dead bases from both ends.
    fn trim(&self, iv: Iv, c: (Iv, Iv)) -> Iv {
        if iv.is_empty() {
            return iv;
        }
        let (mut lo, mut hi) = (iv.lo, iv.hi);
        while lo <= hi && !self.live(lo, c) {
            lo += 1;
        }
        while hi >= lo && !self.live(hi, c) {
            hi -= 1;
        }
        Iv::new(lo, hi)
    }

    fn units(&self, iv: Iv, c: (Iv, Iv)) -> Vec<u32> {
        if iv.is_empty() {
            return Vec::new();
        }
        (iv.lo..=iv.hi).filter(|&x| self.live(x, c)).collect()
    }

    fn unp(&self, iv: Iv) -> Score {
        if iv.is_empty() {
            0
        } else {
            self.unp[iv.hi as usize] - self.unp[iv.lo as usize - 1]
        }
    }

    /// `R` between two intervals in left-to-right order.
    fn rr(&self, a: Iv, b: Iv) -> Score {
        if a.is_empty() || b.is_empty() {
            0
        } else {
            self.r
                .rect(a.lo as usize, a.hi as usize, b.lo as usize, b.hi as usize)
        }
    }

    fn w0(&self, i: Iv) -> Score {
        self.unp(i) + self.rr(i, i)
    }

    fn w1(&self, i: Iv, j: Iv) -> Score {
        self.w0(i) + self.w0(j) + self.rr(i, j)
    }
}

/// Canonical form of a subproblem.
#[derive(Clone, Copy, Debug)]
enum Norm {
    Zero,
    /// One structure is empty; the other is aligned to blanks.
    Gap { side: usize, i: Iv, j: Iv },
    S0(Iv, Iv),
    S1(Iv, Iv, Iv, Iv),
}

#[derive(Clone, Debug)]
enum Choice {
    Fallback,
    BaseMatch,
    PairMatch,
    /// Left legs and right legs aligned independently.
    Disconnect,
    /// Side-1 intervals followed by side-2 intervals.
    Split { generator: usize, intervals: Box<[Iv]> },
}

#[derive(Default)]
pub(crate) struct Memo {
    s0: FxHashMap<u64, Score>,
    s1: FxHashMap<u128, Score>,
    c0: FxHashMap<u64, Choice>,
    c1: FxHashMap<u128, Choice>,
    options: FxHashMap<u128, Rc<Options>>,
    splittings: u64,
}

fn key0(i1: Iv, i2: Iv) -> u64 {
    ((i1.pack() as u64) << 32) | i2.pack() as u64
}

fn key1(i1: Iv, j1: Iv, i2: Iv, j2: Iv) -> u128 {
    ((i1.pack() as u128) << 96)
        | ((j1.pack() as u128) << 64)
        | ((i2.pack() as u128) << 32)
        | j2.pack() as u128
}

fn cuts(units: &[u32], parts: usize, allow_empty: bool) -> Vec<Vec<Iv>> {
    let mut out = Vec::new();
    let q = units.len();
    if parts == 0 {
        if q == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    if !allow_empty && q < parts {
        return out;
    }
    let group = |from: usize, to: usize| {
        if from == to {
            EMPTY
        } else {
            Iv::new(units[from], units[to - 1])
        }
    };
    let step = usize::from(!allow_empty);
    // ends[k]: units consumed by groups 0..=k
    let mut ends = vec![0usize; parts];
    ends[parts - 1] = q;
    loop {
        // validity of the current cut vector
        let mut ok = true;
        let mut prev = 0;
        for &e in &ends {
            if e < prev + step {
                ok = false;
                break;
            }
            prev = e;
        }
        if ok {
            let mut prev = 0;
            out.push(
                ends.iter()
                    .map(|&e| {
                        let g = group(prev, e);
                        prev = e;
                        g
                    })
                    .collect(),
            );
        }
        // next cut vector in lexicographic order (last entry fixed at q)
        let mut k = parts - 1;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if ends[k] < q {
                ends[k] += 1;
                let v = ends[k];
                for e in &mut ends[k + 1..parts - 1] {
                    *e = v;
                }
                break;
            }
        }
    }
}

/// Splittings of one side, flattened with the generator's length as stride, with the `R` cost
/// of each and a bitmask of its non-empty intervals.
struct Options {
    ivs: Vec<Iv>,
    r: Vec<Score>,
    mask: Vec<u64>,
    // per option and structural element: unpaired bases and pairings
    content: Vec<(u32, u32)>,
}

fn floor(scheme: &ScoreScheme) -> [Score; 4] {
    let l = scheme.alphabet().len();
    let min = |f: &dyn Fn(usize) -> Score| (0..l).map(f).min().unwrap_or(0);
    [
        min(&|x| scheme.base_del_idx(x)),
        min(&|x| scheme.base_ins_idx(x)),
        min(&|x| (0..l).map(|y| scheme.pair_del_idx(x, y)).min().unwrap_or(0)),
        min(&|x| (0..l).map(|y| scheme.pair_ins_idx(x, y)).min().unwrap_or(0)),
    ]
}

pub(crate) struct Ctx<'a> {
    sides: [Side; 2],
    scheme: &'a ScoreScheme,
    gens: &'a GeneratorSet,
    mode: SplitMode,
    record: bool,
    split_disconnected: bool,
    n: [usize; 2],
    // per generator, the base positions of each structural element
    slot_masks: Vec<Vec<u64>>,
    // cheapest base deletion, base insertion, pair deletion, pair insertion
    floor: [Score; 4],
}

impl<'a> Ctx<'a> {
    pub(crate) fn new(
        fs1: &FoldedSequence,
        fs2: &FoldedSequence,
        scheme: &'a ScoreScheme,
        gens: &'a GeneratorSet,
        options: &AlignOptions,
    ) -> Result<Ctx<'a>, AlignError> {
        if fs1.structure().is_gapped() || fs2.structure().is_gapped() {
            return Err(AlignError::TypeMismatch);
        }
        let total = fs1.len() + fs2.len();
        if fs1.len() > MAX_BASES || fs2.len() > MAX_BASES {
            return Err(AlignError::TooLarge {
                total,
                limit: MAX_BASES,
            });
        }
        Ok(Ctx {
            sides: [
                Side::new(fs1, scheme, Role::First)?,
                Side::new(fs2, scheme, Role::Second)?,
            ],
            scheme,
            gens,
            mode: options.mode,
            record: options.traceback,
            split_disconnected: options.split_disconnected,
            n: [fs1.len(), fs2.len()],
            floor: floor(scheme),
            slot_masks: gens
                .generators()
                .iter()
                .map(|g| {
                    g.slots()
                        .iter()
                        .map(|slot| match *slot {
                            Slot::Unpaired(a) => 1 << a,
                            Slot::Paired(a, b) => (1 << a) | (1 << b),
                        })
                        .collect()
                })
                .collect(),
        })
    }

    pub(crate) fn root(&self, memo: &mut Memo) -> Score {
        let full = |n: usize| Iv::new(1, n as u32);
        self.value(memo, self.norm0(full(self.n[0]), full(self.n[1])))
    }

    fn norm0(&self, i1: Iv, i2: Iv) -> Norm {
        let i1 = self.sides[0].trim(i1, (i1, EMPTY));
        let i2 = self.sides[1].trim(i2, (i2, EMPTY));
        match (i1.is_empty(), i2.is_empty()) {
            (true, true) => Norm::Zero,
            (false, true) => Norm::Gap { side: 0, i: i1, j: EMPTY },
            (true, false) => Norm::Gap { side: 1, i: i2, j: EMPTY },
            (false, false) => Norm::S0(i1, i2),
        }
    }

    fn norm1(&self, i1: Iv, j1: Iv, i2: Iv, j2: Iv) -> Norm {
        let (a, b) = (&self.sides[0], &self.sides[1]);
        let (i1, j1) = (a.trim(i1, (i1, j1)), a.trim(j1, (i1, j1)));
        let (i2, j2) = (b.trim(i2, (i2, j2)), b.trim(j2, (i2, j2)));
        if i1.is_empty() && i2.is_empty() {
            return self.norm0(j1, j2);
        }
        if j1.is_empty() && j2.is_empty() {
            return self.norm0(i1, i2);
        }
        if i1.is_empty() && j1.is_empty() {
            return Norm::Gap { side: 1, i: i2, j: j2 };
        }
        if i2.is_empty() && j2.is_empty() {
            return Norm::Gap { side: 0, i: i1, j: j1 };
        }
        Norm::S1(i1, j1, i2, j2)
    }

    fn value(&self, memo: &mut Memo, norm: Norm) -> Score {
        match norm {
            Norm::Zero => 0,
            Norm::Gap { side, i, j } => self.sides[side].w1(i, j),
            Norm::S0(i1, i2) => {
                let k = key0(i1, i2);
                if let Some(&v) = memo.s0.get(&k) {
                    return v;
                }
                let (v, choice) = self.compute0(memo, i1, i2);
                memo.s0.insert(k, v);
                if self.record {
                    memo.c0.insert(k, choice);
                }
                v
            }
            Norm::S1(i1, j1, i2, j2) => {
                let k = key1(i1, j1, i2, j2);
                if let Some(&v) = memo.s1.get(&k) {
                    return v;
                }
                let (v, choice) = self.compute1(memo, i1, j1, i2, j2);
                memo.s1.insert(k, v);
                if self.record {
                    memo.c1.insert(k, choice);
                }
                v
            }
        }
    }

    fn compute0(&self, memo: &mut Memo, i1: Iv, i2: Iv) -> (Score, Choice) {
        let (a, b) = (&self.sides[0], &self.sides[1]);
        let mut best = a.w0(i1) + b.w0(i2);
        let mut choice = Choice::Fallback;
        if i1.len() == 1 && i2.len() == 1 {
            let v = self
                .scheme
                .base_sub_idx(a.letter[i1.lo as usize], b.letter[i2.lo as usize]);
            if v < best {
                best = v;
                choice = Choice::BaseMatch;
            }
        }
        for (gi, g) in self.gens.generators().iter().enumerate() {
            if g.is_gapped() {
                continue;
            }
            let o1 = self.options(memo, 0, gi, i1, EMPTY);
            let o2 = self.options(memo, 1, gi, i2, EMPTY);
            self.try_splittings(memo, gi, &o1, &o2, &mut best, &mut choice);
        }
        (best, choice)
    }

    fn compute1(&self, memo: &mut Memo, i1: Iv, j1: Iv, i2: Iv, j2: Iv) -> (Score, Choice) {
        let (a, b) = (&self.sides[0], &self.sides[1]);
        let mut best = a.w1(i1, j1) + b.w1(i2, j2);
        let mut choice = Choice::Fallback;
        if [i1, j1, i2, j2].iter().all(|iv| iv.len() == 1)
            && a.partner[i1.lo as usize] == j1.lo
            && b.partner[i2.lo as usize] == j2.lo
        {
            let l = |s: &Side, x: Iv| s.letter[x.lo as usize];
            let v = self
                .scheme
                .pair_sub_idx(l(a, i1), l(a, j1), l(b, i2), l(b, j2));
            if v < best {
                best = v;
                choice = Choice::PairMatch;
            }
        }
        // No pairing crosses the legs on one side, so no cross-leg pairing
        // can be matched and the legs align independently.
        if self.split_disconnected && (a.pairs(i1, j1) == 0 || b.pairs(i2, j2) == 0) {
            let v = a.rr(i1, j1)
                + b.rr(i2, j2)
                + self.value(memo, self.norm0(i1, i2))
                + self.value(memo, self.norm0(j1, j2));
            if v < best {
                best = v;
                choice = Choice::Disconnect;
            }
            return (best, choice);
        }
        for (gi, g) in self.gens.generators().iter().enumerate() {
            if !g.is_gapped() || g.element_count() < 2 {
                continue;
            }
            let o1 = self.options(memo, 0, gi, i1, j1);
            let o2 = self.options(memo, 1, gi, i2, j2);
            self.try_splittings(memo, gi, &o1, &o2, &mut best, &mut choice);
        }
        (best, choice)
    }

    /// Splittings of one structure's intervals `i`, `j` by generator `gi`,
    /// shared by every entry with the same intervals on that side.
    fn options(&self, memo: &mut Memo, side: usize, gi: usize, i: Iv, j: Iv) -> Rc<Options> {
        let k = ((side as u128) << 96) | ((gi as u128) << 64) | key0(i, j) as u128;
        if let Some(o) = memo.options.get(&k) {
            return Rc::clone(o);
        }
        let s = &self.sides[side];
        let c = (i, j);
        let g = &self.gens.generators()[gi];
        let o = Rc::new(self.side_options(side, g, &s.units(i, c), &s.units(j, c), c));
        memo.options.insert(k, Rc::clone(&o));
        o
    }

    fn side_options(
        &self,
        side: usize,
        g: &Generator,
        left: &[u32],
        right: &[u32],
        c: (Iv, Iv),
    ) -> Options {
        let legs = g.leg_sizes();
        let allow_empty = self.mode == SplitMode::Relaxed;
        let lefts = cuts(left, legs[0], allow_empty);
        let rights = match legs.get(1) {
            Some(&r) => cuts(right, r, allow_empty),
            None => vec![Vec::new()],
        };
        let s = &self.sides[side];
        let mut out = Options {
            ivs: Vec::new(),
            r: Vec::new(),
            mask: Vec::new(),
            content: Vec::new(),
        };
        let mut v = Vec::with_capacity(g.len());
        for l in &lefts {
            for r in &rights {
                v.clear();
                v.extend_from_slice(l);
                v.extend_from_slice(r);
                if self.mode == SplitMode::StrictProper && !self.is_proper(side, g, &v, c) {
                    continue;
                }
                let cost = g
                    .unpaired_slot_pairs()
                    .iter()
                    .map(|&(x, y)| s.rr(v[x], v[y]))
                    .sum();
                let mask = v
                    .iter()
                    .enumerate()
                    .filter(|(_, iv)| !iv.is_empty())
                    .fold(0u64, |m, (k, _)| m | 1 << k);
                out.ivs.extend_from_slice(&v);
                out.r.push(cost);
                out.mask.push(mask);
                out.content.extend(g.slots().iter().map(|slot| match *slot {
                    Slot::Unpaired(x) => s.content(v[x], EMPTY),
                    Slot::Paired(x, y) => s.content(v[x], v[y]),
                }));
            }
        }
        out
    }

    fn is_proper(&self, side: usize, g: &Generator, ivs: &[Iv], c: (Iv, Iv)) -> bool {
        let s = &self.sides[side];
        ivs.iter().enumerate().all(|(a, &iv)| {
            (iv.lo..=iv.hi).filter(|_| !iv.is_empty()).any(|x| {
                if !s.live(x, c) {
                    return false;
                }
                let p = s.partner[x as usize];
                if p == 0 {
                    return true;
                }
                match ivs.iter().position(|o| o.contains(p)) {
                    Some(b) if b == a => true,
                    Some(b) => g.structure().has_pairing(a.min(b) + 1, a.max(b) + 1),
                    None => false,
                }
            })
        })
    }

    /// Rejects splittings that hand all content to one element, except a
    /// single-pairing 0-generator whose two legs both keep content.
    fn admissible(g: &Generator, slot_masks: &[u64], filled: u64) -> bool {
        let count = slot_masks.iter().filter(|&&m| m & filled != 0).count();
        if count >= 2 {
            return true;
        }
        match g.slots() {
            [Slot::Paired(a, b)] if !g.is_gapped() => {
                filled & (1 << a) != 0 && filled & (1 << b) != 0
            }
            _ => false,
        }
    }

    fn try_splittings(
        &self,
        memo: &mut Memo,
        gi: usize,
        o1: &Options,
        o2: &Options,
        best: &mut Score,
        choice: &mut Choice,
    ) {
        let g = &self.gens.generators()[gi];
        let m = g.len();
        let e = g.element_count();
        let slot_masks = &self.slot_masks[gi];
        let mut bounds = vec![0; e];
        for (pi, p) in o1.ivs.chunks_exact(m).enumerate() {
            if o1.r[pi] >= *best {
                continue;
            }
            let c1 = &o1.content[pi * e..(pi + 1) * e];
            for (qi, q) in o2.ivs.chunks_exact(m).enumerate() {
                if !Self::admissible(g, slot_masks, o1.mask[pi] | o2.mask[qi]) {
                    continue;
                }
                memo.splittings += 1;
                let mut total = o1.r[pi] + o2.r[qi];
                let c2 = &o2.content[qi * e..(qi + 1) * e];
                for k in 0..e {
                    bounds[k] = self.lower_bound(c1[k], c2[k]);
                    total += bounds[k];
                }
                if total >= *best {
                    continue;
                }
                let mut pruned = false;
                for (k, slot) in g.slots().iter().enumerate() {
                    let norm = match *slot {
                        Slot::Unpaired(x) => self.norm0(p[x], q[x]),
                        Slot::Paired(x, y) => self.norm1(p[x], p[y], q[x], q[y]),
                    };
                    total = total - bounds[k] + self.value(memo, norm);
                    if total >= *best {
                        pruned = true;
                        break;
                    }
                }
                if !pruned {
                    *best = total;
                    if self.record {
                        let intervals = p.iter().chain(q.iter()).copied().collect();
                        *choice = Choice::Split {
                            generator: gi,
                            intervals,
                        };
                    }
                }
            }
        }
    }

    /// Cost every alignment of the given contents must pay: surplus
    /// unpaired bases and pairings on either side stay unmatched.
    fn lower_bound(&self, (u1, p1): (u32, u32), (u2, p2): (u32, u32)) -> Score {
        let f = &self.floor;
        u1.saturating_sub(u2) as Score * f[0]
            + u2.saturating_sub(u1) as Score * f[1]
            + p1.saturating_sub(p2) as Score * f[2]
            + p2.saturating_sub(p1) as Score * f[3]
    }

    pub(crate) fn stats(&self, memo: &Memo) -> AlignStats {
        AlignStats {
            s0_entries: memo.s0.len(),
            s1_entries: memo.s1.len(),
            splittings: memo.splittings,
        }
    }
}

type Col = (Option<u32>, Option<u32>);

impl Ctx<'_> {
    pub(crate) fn traceback(
        &self,
        memo: &Memo,
        fs1: &FoldedSequence,
        fs2: &FoldedSequence,
    ) -> Result<Alignment, AlignError> {
        if !self.record {
            return Err(AlignError::MissingRecords);
        }
        let full = |n: usize| Iv::new(1, n as u32);
        let mut cols = self.trace0(memo, full(self.n[0]), full(self.n[1]))?;
        for side in 0..2 {
            insert_missing(&mut cols, side, self.n[side]);
        }
        Ok(build_alignment(&cols, fs1, fs2))
    }

    fn gap_cols(&self, side: usize, iv: Iv, c: (Iv, Iv)) -> Vec<Col> {
        self.sides[side]
            .units(iv, c)
            .into_iter()
            .map(|x| if side == 0 { (Some(x), None) } else { (None, Some(x)) })
            .collect()
    }

    fn trace0(&self, memo: &Memo, i1: Iv, i2: Iv) -> Result<Vec<Col>, AlignError> {
        let (l, r) = self.trace(memo, self.norm0(i1, i2))?;
        debug_assert!(r.is_empty());
        Ok(l)
    }

    fn trace(&self, memo: &Memo, norm: Norm) -> Result<(Vec<Col>, Vec<Col>), AlignError> {
        match norm {
            Norm::Zero => Ok((Vec::new(), Vec::new())),
            Norm::Gap { side, i, j } => Ok((self.gap_cols(side, i, (i, j)), self.gap_cols(side, j, (i, j)))),
            Norm::S0(i1, i2) => {
                let choice = memo.c0.get(&key0(i1, i2)).ok_or(AlignError::MissingRecords)?;
                let cols = match choice {
                    Choice::Fallback => {
                        let mut v = self.gap_cols(0, i1, (i1, EMPTY));
                        v.extend(self.gap_cols(1, i2, (i2, EMPTY)));
                        v
                    }
                    Choice::BaseMatch => vec![(Some(i1.lo), Some(i2.lo))],
                    Choice::PairMatch | Choice::Disconnect => {
                        unreachable!("1-structure choice recorded for an S0 entry")
                    }
                    Choice::Split {
                        generator,
                        intervals,
                    } => self.layout(memo, *generator, intervals)?.0,
                };
                Ok((cols, Vec::new()))
            }
            Norm::S1(i1, j1, i2, j2) => {
                let choice = memo
                    .c1
                    .get(&key1(i1, j1, i2, j2))
                    .ok_or(AlignError::MissingRecords)?;
                match choice {
                    Choice::Fallback => {
                        let (c1, c2) = ((i1, j1), (i2, j2));
                        let mut l = self.gap_cols(0, i1, c1);
                        l.extend(self.gap_cols(1, i2, c2));
                        let mut r = self.gap_cols(0, j1, c1);
                        r.extend(self.gap_cols(1, j2, c2));
                        Ok((l, r))
                    }
                    Choice::PairMatch => Ok((
                        vec![(Some(i1.lo), Some(i2.lo))],
                        vec![(Some(j1.lo), Some(j2.lo))],
                    )),
                    Choice::BaseMatch => unreachable!("base match recorded for an S1 entry"),
                    Choice::Disconnect => Ok((self.trace0(memo, i1, i2)?, self.trace0(memo, j1, j2)?)),
                    Choice::Split {
                        generator,
                        intervals,
                    } => self.layout(memo, *generator, intervals),
                }
            }
        }
    }

    /// Places child alignments at the generator's base positions.
    fn layout(
        &self,
        memo: &Memo,
        gi: usize,
        intervals: &[Iv],
    ) -> Result<(Vec<Col>, Vec<Col>), AlignError> {
        let g = &self.gens.generators()[gi];
        let m = g.len();
        let (p, q) = intervals.split_at(m);
        let mut blocks: Vec<Vec<Col>> = vec![Vec::new(); m];
        for slot in g.slots() {
            match *slot {
                Slot::Unpaired(x) => blocks[x] = self.trace0(memo, p[x], q[x])?,
                Slot::Paired(x, y) => {
                    let (l, r) = self.trace(memo, self.norm1(p[x], p[y], q[x], q[y]))?;
                    blocks[x] = l;
                    blocks[y] = r;
                }
            }
        }
        let left = g.leg_sizes()[0];
        let r = blocks.split_off(left);
        Ok((blocks.concat(), r.concat()))
    }
}

/// Adds a deletion (or insertion) column for every base of `side` not yet
/// placed, right after the column of its predecessor on that side.
fn insert_missing(cols: &mut Vec<Col>, side: usize, n: usize) {
    let get = |c: &Col| if side == 0 { c.0 } else { c.1 };
    let mut present = vec![false; n + 1];
    for c in cols.iter() {
        if let Some(x) = get(c) {
            present[x as usize] = true;
        }
    }
    for x in 1..=n as u32 {
        if present[x as usize] {
            continue;
        }
        let at = if x == 1 {
            0
        } else {
            cols.iter().position(|c| get(c) == Some(x - 1)).expect("predecessor placed") + 1
        };
        let col = if side == 0 { (Some(x), None) } else { (None, Some(x)) };
        cols.insert(at, col);
    }
}

pub(crate) fn build_alignment(cols: &[Col], fs1: &FoldedSequence, fs2: &FoldedSequence) -> Alignment {
    let mut at = [vec![0usize; fs1.len() + 1], vec![0usize; fs2.len() + 1]];
    for (k, c) in cols.iter().enumerate() {
        if let Some(x) = c.0 {
            at[0][x as usize] = k + 1;
        }
        if let Some(y) = c.1 {
            at[1][y as usize] = k + 1;
        }
    }
    let mut pairs: Vec<(usize, usize)> = fs1
        .structure()
        .pairings()
        .iter()
        .map(|&(i, j)| (at[0][i], at[0][j]))
        .chain(
            fs2.structure()
                .pairings()
                .iter()
                .map(|&(i, j)| (at[1][i], at[1][j])),
        )
        .collect();
    pairs.sort_unstable();
    pairs.dedup();
    let structure = Structure::new(cols.len(), pairs, None).expect("aligned pairings are disjoint");
    let top = cols.iter().map(|c| c.0.map(|x| fs1.letter(x as usize))).collect();
    let bottom = cols.iter().map(|c| c.1.map(|y| fs2.letter(y as usize))).collect();
    Alignment::new(structure, top, bottom).expect("aligned pairings are whole")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: u32, hi: u32) -> Iv {
        Iv::new(lo, hi)
    }

    #[test]
    fn cuts_relaxed_and_strict() {
        let u = [1, 2, 3];
        assert_eq!(cuts(&u, 2, true).len(), 4);
        assert_eq!(
            cuts(&u, 2, false),
            vec![vec![iv(1, 1), iv(2, 3)], vec![iv(1, 2), iv(3, 3)]]
        );
        assert_eq!(cuts(&u, 3, true).len(), 10);
        assert_eq!(cuts(&[], 2, true), vec![vec![EMPTY, EMPTY]]);
        assert!(cuts(&[], 2, false).is_empty());
        assert_eq!(cuts(&[], 0, true), vec![Vec::<Iv>::new()]);
        assert!(cuts(&[4], 0, true).is_empty());
        assert_eq!(cuts(&[2, 5], 1, false), vec![vec![iv(2, 5)]]);
    }

    #[test]
    fn cuts_are_lexicographic() {
        let got = cuts(&[1, 2], 3, true);
        let want = vec![
            vec![EMPTY, EMPTY, iv(1, 2)],
            vec![EMPTY, iv(1, 1), iv(2, 2)],
            vec![EMPTY, iv(1, 2), EMPTY],
            vec![iv(1, 1), EMPTY, iv(2, 2)],
            vec![iv(1, 1), iv(2, 2), EMPTY],
            vec![iv(1, 2), EMPTY, EMPTY],
        ];
        assert_eq!(got, want);
    }
}
