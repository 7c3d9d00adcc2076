//! 0- and 1-structures, structural elements, intervals and the two
//! composition operations.
//!
//! Bases are numbered from 1. A structure of type 1 carries a gap `k`
//! splitting its bases into the legs `[1, k]` and `[k + 1, n]`; either leg
//! may be empty.

use std::cmp::Ordering;
use std::fmt;

use crate::error::StructureError;

/// A base pairing `(i, j)` with `i < j`.
pub type Pairing = (usize, usize);

/// A closed interval of base indices, or the empty interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum Interval {
    #[default]
    Empty,
    Span { lo: usize, hi: usize },
}

impl Interval {
    /// `[lo, hi]`, or `Empty` when `lo > hi`.
    pub fn new(lo: usize, hi: usize) -> Self {
        if lo > hi || lo == 0 {
            Interval::Empty
        } else {
            Interval::Span { lo, hi }
        }
    }

    pub fn single(i: usize) -> Self {
        Interval::new(i, i)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Interval::Empty)
    }

    pub fn len(&self) -> usize {
        match *self {
            Interval::Empty => 0,
            Interval::Span { lo, hi } => hi - lo + 1,
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        match *self {
            Interval::Empty => false,
            Interval::Span { lo, hi } => lo <= i && i <= hi,
        }
    }

    pub fn bounds(&self) -> Option<(usize, usize)> {
        match *self {
            Interval::Empty => None,
            Interval::Span { lo, hi } => Some((lo, hi)),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> {
        match *self {
            Interval::Empty => 1..1,
            Interval::Span { lo, hi } => lo..hi + 1,
        }
    }

    /// True when every index of `self` is smaller than every index of
    /// `other`. Empty intervals precede and follow everything.
    pub fn precedes(&self, other: &Interval) -> bool {
        match (self.bounds(), other.bounds()) {
            (Some((_, hi)), Some((lo, _))) => hi < lo,
            _ => true,
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Interval::Empty => write!(f, "[]"),
            Interval::Span { lo, hi } => write!(f, "[{lo},{hi}]"),
        }
    }
}

/// Relation between two endpoint-disjoint pairings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairRelation {
    Independent,
    Nested,
    Crossed,
}

/// Classifies two pairings sharing no endpoint. The arguments may be given
/// in either order.
pub fn classify_pair_relation(p: Pairing, q: Pairing) -> Result<PairRelation, StructureError> {
    let (p, q) = if p.0 <= q.0 { (p, q) } else { (q, p) };
    let ends = [p.0, p.1, q.0, q.1];
    for a in 0..4 {
        for b in a + 1..4 {
            if ends[a] == ends[b] {
                return Err(StructureError::SharedEndpoint { base: ends[a] });
            }
        }
    }
    let (i, j) = (p.0.min(p.1), p.0.max(p.1));
    let (k, l) = (q.0.min(q.1), q.0.max(q.1));
    Ok(if j < k {
        PairRelation::Independent
    } else if l < j {
        PairRelation::Nested
    } else {
        debug_assert!(i < k && k < j && j < l);
        PairRelation::Crossed
    })
}

/// An unpaired base or a pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StructuralElement {
    UnpairedBase(usize),
    Pairing(usize, usize),
}

impl StructuralElement {
    /// The index the element order is keyed by.
    pub fn key(&self) -> usize {
        match *self {
            StructuralElement::UnpairedBase(i) => i,
            StructuralElement::Pairing(i, _) => i,
        }
    }
}

impl PartialOrd for StructuralElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for StructuralElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// A 0-structure `(n, P)` or, with a gap, a 1-structure `(n, P, k)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    n: usize,
    pairings: Vec<Pairing>,
    gap: Option<usize>,
    // partner[i - 1] is the base paired with i, or 0
    partner: Vec<usize>,
}

impl Structure {
    /// Validating constructor.
    pub fn new(
        n: usize,
        pairings: impl IntoIterator<Item = Pairing>,
        gap: Option<usize>,
    ) -> Result<Self, StructureError> {
        let mut partner = vec![0usize; n];
        let mut sorted = Vec::new();
        for (i, j) in pairings {
            for x in [i, j] {
                if x == 0 || x > n {
                    return Err(StructureError::IndexOutOfRange { index: x, n });
                }
            }
            if i >= j {
                return Err(StructureError::NotIncreasing { i, j });
            }
            for x in [i, j] {
                if partner[x - 1] != 0 {
                    return Err(StructureError::SharedEndpoint { base: x });
                }
            }
            partner[i - 1] = j;
            partner[j - 1] = i;
            sorted.push((i, j));
        }
        if let Some(k) = gap {
            if k > n {
                return Err(StructureError::BadGap { gap: k, n });
            }
        }
        sorted.sort_unstable();
        Ok(Structure {
            n,
            pairings: sorted,
            gap,
            partner,
        })
    }

    pub fn id0() -> Self {
        Structure::new(1, [], None).expect("valid")
    }

    pub fn id1() -> Self {
        Structure::new(2, [(1, 2)], Some(1)).expect("valid")
    }

    pub fn empty0() -> Self {
        Structure::new(0, [], None).expect("valid")
    }

    pub fn empty1() -> Self {
        Structure::new(0, [], Some(0)).expect("valid")
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Pairings sorted by left end.
    pub fn pairings(&self) -> &[Pairing] {
        &self.pairings
    }

    pub fn gap(&self) -> Option<usize> {
        self.gap
    }

    pub fn is_gapped(&self) -> bool {
        self.gap.is_some()
    }

    /// Same bases and pairings with the gap replaced.
    pub fn with_gap(&self, gap: Option<usize>) -> Result<Self, StructureError> {
        Structure::new(self.n, self.pairings.iter().copied(), gap)
    }

    pub fn partner(&self, i: usize) -> Option<usize> {
        match self.partner.get(i.wrapping_sub(1)) {
            Some(&p) if p != 0 => Some(p),
            _ => None,
        }
    }

    pub fn is_paired(&self, i: usize) -> bool {
        self.partner(i).is_some()
    }

    pub fn has_pairing(&self, i: usize, j: usize) -> bool {
        i < j && self.partner(i) == Some(j)
    }

    /// The two legs of a 1-structure; a 0-structure reports `[1, n]` and an
    /// empty right leg.
    pub fn legs(&self) -> (Interval, Interval) {
        let k = self.gap.unwrap_or(self.n);
        (Interval::new(1, k), Interval::new(k + 1, self.n))
    }

    /// Structural elements sorted by the element order.
    pub fn elements(&self) -> Vec<StructuralElement> {
        (1..=self.n)
            .filter_map(|i| match self.partner(i) {
                None => Some(StructuralElement::UnpairedBase(i)),
                Some(j) if i < j => Some(StructuralElement::Pairing(i, j)),
                Some(_) => None,
            })
            .collect()
    }

    pub fn element_count(&self) -> usize {
        self.n - self.pairings.len()
    }

    /// True iff no two pairings cross.
    pub fn is_nested(&self) -> bool {
        let mut open = Vec::new();
        for i in 1..=self.n {
            match self.partner(i) {
                Some(j) if i < j => open.push(j),
                Some(_) => {
                    if open.pop() != Some(i) {
                        return false;
                    }
                }
                None => {}
            }
        }
        true
    }

    /// Composition along the unpaired base `i` with the 0-structure `t`.
    pub fn compose_at_base(&self, i: usize, t: &Structure) -> Result<Structure, StructureError> {
        if i == 0 || i > self.n {
            return Err(StructureError::IndexOutOfRange { index: i, n: self.n });
        }
        if self.is_paired(i) {
            return Err(StructureError::BaseIsPaired { base: i });
        }
        if t.is_gapped() {
            return Err(StructureError::WrongType);
        }
        let m = t.n;
        let shift = |x: usize| if x < i { x } else { x + m - 1 };
        let outer = self.pairings.iter().map(|&(a, b)| (shift(a), shift(b)));
        let inner = t.pairings.iter().map(|&(a, b)| (a + i - 1, b + i - 1));
        let gap = self.gap.map(|k| if k < i { k } else { k + m - 1 });
        Structure::new(self.n + m - 1, outer.chain(inner), gap)
    }

    /// Composition along the pairing `(i, j)` with the 1-structure `t`.
    pub fn compose_at_pairing(
        &self,
        (i, j): Pairing,
        t: &Structure,
    ) -> Result<Structure, StructureError> {
        if !self.has_pairing(i, j) {
            return Err(StructureError::NotAPairing { i, j });
        }
        let l = t.gap.ok_or(StructureError::WrongType)?;
        let m = t.n;
        let shift = |x: usize| {
            if x < i {
                x
            } else if x < j {
                x + l - 1
            } else {
                x + m - 2
            }
        };
        let outer = self
            .pairings
            .iter()
            .filter(|&&p| p != (i, j))
            .map(|&(a, b)| (shift(a), shift(b)));
        let place = |x: usize| if x <= l { x + i - 1 } else { x + j - 2 };
        let inner = t.pairings.iter().map(|&(a, b)| (place(a), place(b)));
        let gap = self.gap.map(|k| {
            if k < i {
                k
            } else if k < j {
                k + l - 1
            } else {
                k + m - 2
            }
        });
        Structure::new(self.n + m - 2, outer.chain(inner), gap)
    }

    /// Simultaneous composition along every structural element, children
    /// given in element order.
    pub fn compose_all(&self, children: &[Structure]) -> Result<Structure, StructureError> {
        let elements = self.elements();
        if elements.len() != children.len() {
            return Err(StructureError::ArityMismatch {
                expected: elements.len(),
                got: children.len(),
            });
        }
        // bases contributed at each original position
        let mut block = vec![0usize; self.n + 1];
        for (e, c) in elements.iter().zip(children) {
            match (*e, c.gap) {
                (StructuralElement::UnpairedBase(i), None) => block[i] = c.n,
                (StructuralElement::Pairing(i, j), Some(l)) => {
                    block[i] = l;
                    block[j] = c.n - l;
                }
                _ => return Err(StructureError::WrongType),
            }
        }
        // start[p]: number of result bases before the block of position p
        let mut start = vec![0usize; self.n + 2];
        for p in 1..=self.n {
            start[p + 1] = start[p] + block[p];
        }
        let mut pairings = Vec::new();
        for (e, c) in elements.iter().zip(children) {
            match *e {
                StructuralElement::UnpairedBase(i) => {
                    pairings.extend(c.pairings.iter().map(|&(a, b)| (start[i] + a, start[i] + b)));
                }
                StructuralElement::Pairing(i, j) => {
                    let l = c.gap.unwrap_or(0);
                    let place = |x: usize| if x <= l { start[i] + x } else { start[j] + x - l };
                    pairings.extend(c.pairings.iter().map(|&(a, b)| (place(a), place(b))));
                }
            }
        }
        let gap = self.gap.map(|k| start[k + 1]);
        Structure::new(start[self.n + 1], pairings, gap)
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {{", self.n)?;
        for (x, (i, j)) in self.pairings.iter().enumerate() {
            if x > 0 {
                write!(f, ",")?;
            }
            write!(f, "({i},{j})")?;
        }
        write!(f, "}}")?;
        if let Some(k) = self.gap {
            write!(f, ", {k}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Every 0-structure on `n` bases (all sets of disjoint pairings), in a
/// fixed order.
pub fn all_structures(n: usize) -> Vec<Structure> {
    fn rec(i: usize, n: usize, used: &mut Vec<bool>, cur: &mut Vec<Pairing>, out: &mut Vec<Structure>) {
        if i > n {
            out.push(Structure::new(n, cur.iter().copied(), None).expect("disjoint pairings"));
            return;
        }
        if used[i] {
            return rec(i + 1, n, used, cur, out);
        }
        rec(i + 1, n, used, cur, out);
        for j in i + 1..=n {
            if !used[j] {
                used[j] = true;
                cur.push((i, j));
                rec(i + 1, n, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(1, n, &mut vec![false; n + 1], &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize, p: &[Pairing], gap: Option<usize>) -> Structure {
        Structure::new(n, p.iter().copied(), gap).unwrap()
    }

    #[test]
    fn make_structure_examples() {
        let crossing = s(8, &[(1, 6), (2, 5), (3, 8), (4, 7)], None);
        assert_eq!(crossing.len(), 8);
        assert!(!crossing.is_nested());
        assert_eq!(s(1, &[], None), Structure::id0());
        assert_eq!(
            Structure::new(4, [(1, 3), (1, 4)], None),
            Err(StructureError::SharedEndpoint { base: 1 })
        );
    }

    #[test]
    fn make_structure_errors() {
        assert!(matches!(
            Structure::new(3, [(1, 4)], None),
            Err(StructureError::IndexOutOfRange { index: 4, .. })
        ));
        assert!(matches!(
            Structure::new(3, [(0, 2)], None),
            Err(StructureError::IndexOutOfRange { index: 0, .. })
        ));
        assert!(matches!(
            Structure::new(3, [(2, 2)], None),
            Err(StructureError::NotIncreasing { .. })
        ));
        assert!(matches!(
            Structure::new(3, [(3, 1)], None),
            Err(StructureError::NotIncreasing { .. })
        ));
        assert!(matches!(
            Structure::new(3, [], Some(4)),
            Err(StructureError::BadGap { .. })
        ));
        // empty legs are fine
        assert!(Structure::new(3, [], Some(0)).is_ok());
        assert!(Structure::new(3, [], Some(3)).is_ok());
    }

    #[test]
    fn pair_relations() {
        use PairRelation::*;
        assert_eq!(classify_pair_relation((1, 2), (3, 4)), Ok(Independent));
        assert_eq!(classify_pair_relation((1, 4), (2, 3)), Ok(Nested));
        assert_eq!(classify_pair_relation((1, 3), (2, 4)), Ok(Crossed));
        assert_eq!(classify_pair_relation((2, 4), (1, 3)), Ok(Crossed));
        assert_eq!(
            classify_pair_relation((1, 3), (3, 4)),
            Err(StructureError::SharedEndpoint { base: 3 })
        );
    }

    #[test]
    fn nestedness() {
        assert!(s(4, &[(1, 4), (2, 3)], None).is_nested());
        assert!(!s(4, &[(1, 3), (2, 4)], None).is_nested());
        assert!(Structure::empty0().is_nested());
    }

    #[test]
    fn element_order_examples() {
        use StructuralElement::*;
        assert_eq!(
            s(3, &[(1, 3)], None).elements(),
            vec![Pairing(1, 3), UnpairedBase(2)]
        );
        assert_eq!(
            s(2, &[], None).elements(),
            vec![UnpairedBase(1), UnpairedBase(2)]
        );
        assert_eq!(
            s(4, &[(2, 4)], None).elements(),
            vec![UnpairedBase(1), Pairing(2, 4), UnpairedBase(3)]
        );
    }

    #[test]
    fn base_composition_worked_example() {
        let outer = s(5, &[(1, 5), (3, 4)], None);
        let inner = s(4, &[(1, 3), (2, 4)], None);
        assert_eq!(
            outer.compose_at_base(2, &inner).unwrap(),
            s(8, &[(1, 8), (2, 4), (3, 5), (6, 7)], None)
        );
    }

    #[test]
    fn base_composition_trivial() {
        let outer = s(5, &[(1, 5), (3, 4)], Some(2));
        assert_eq!(outer.compose_at_base(2, &Structure::id0()).unwrap(), outer);
        let hairpin = s(3, &[(1, 3)], None);
        assert_eq!(
            hairpin.compose_at_base(2, &Structure::empty0()).unwrap(),
            s(2, &[(1, 2)], None)
        );
        assert_eq!(
            hairpin.compose_at_base(1, &Structure::id0()),
            Err(StructureError::BaseIsPaired { base: 1 })
        );
        assert_eq!(
            hairpin.compose_at_base(2, &Structure::id1()),
            Err(StructureError::WrongType)
        );
    }

    #[test]
    fn gap_moves_with_base_composition() {
        // gap after base 2; inserting three bases at base 2 pushes it to 4
        let outer = s(3, &[], Some(2));
        let t = s(3, &[], None);
        assert_eq!(outer.compose_at_base(2, &t).unwrap().gap(), Some(4));
        assert_eq!(outer.compose_at_base(3, &t).unwrap().gap(), Some(2));
        assert_eq!(
            outer.compose_at_base(1, &Structure::empty0()).unwrap().gap(),
            Some(1)
        );
    }

    #[test]
    fn pairing_composition_worked_example() {
        let outer = s(4, &[(1, 3), (2, 4)], None);
        let inner = s(4, &[(1, 4), (2, 3)], Some(2));
        assert_eq!(
            outer.compose_at_pairing((2, 4), &inner).unwrap(),
            s(6, &[(1, 4), (2, 6), (3, 5)], None)
        );
    }

    #[test]
    fn pairing_composition_trivial() {
        let outer = s(4, &[(1, 3), (2, 4)], Some(3));
        assert_eq!(
            outer.compose_at_pairing((1, 3), &Structure::id1()).unwrap(),
            outer
        );
        let pair = s(2, &[(1, 2)], None);
        assert_eq!(
            pair.compose_at_pairing((1, 2), &Structure::empty1()).unwrap(),
            Structure::empty0()
        );
        assert_eq!(
            pair.compose_at_pairing((1, 2), &Structure::id0()),
            Err(StructureError::WrongType)
        );
        assert_eq!(
            pair.compose_at_pairing((1, 3), &Structure::id1()),
            Err(StructureError::NotAPairing { i: 1, j: 3 })
        );
    }

    #[test]
    fn pairing_composition_gap_cases() {
        // outer gap before, inside and after the pairing (2,4)
        let t = s(5, &[(1, 5), (2, 4)], Some(2));
        for (k, expected) in [(1, 1), (2, 3), (3, 4), (4, 7), (5, 8)] {
            let outer = s(5, &[(2, 4)], Some(k));
            assert_eq!(
                outer.compose_at_pairing((2, 4), &t).unwrap().gap(),
                Some(expected),
                "k = {k}"
            );
        }
    }

    #[test]
    fn compose_all_examples() {
        let concat = s(2, &[], None);
        let ids = [Structure::id0(), Structure::id0()];
        assert_eq!(concat.compose_all(&ids).unwrap(), concat);

        let lp = s(2, &[(1, 2)], None);
        let linsert = s(3, &[(1, 3)], Some(2));
        assert_eq!(
            lp.compose_all(std::slice::from_ref(&linsert)).unwrap(),
            s(3, &[(1, 3)], None)
        );

        let nest = s(4, &[(1, 4), (2, 3)], Some(2));
        assert_eq!(
            nest.compose_all(&[Structure::id1(), Structure::empty1()])
                .unwrap(),
            s(2, &[(1, 2)], Some(1))
        );
    }

    #[test]
    fn compose_all_errors() {
        let concat = s(2, &[], None);
        assert_eq!(
            concat.compose_all(&[Structure::id0()]),
            Err(StructureError::ArityMismatch {
                expected: 2,
                got: 1
            })
        );
        assert_eq!(
            concat.compose_all(&[Structure::id0(), Structure::id1()]),
            Err(StructureError::WrongType)
        );
    }

    #[test]
    fn interval_basics() {
        assert!(Interval::new(3, 2).is_empty());
        assert_eq!(Interval::new(2, 4).len(), 3);
        assert!(Interval::new(1, 2).precedes(&Interval::new(3, 3)));
        assert!(!Interval::new(1, 3).precedes(&Interval::new(3, 3)));
        assert!(Interval::Empty.precedes(&Interval::new(1, 1)));
        assert_eq!(Interval::new(2, 4).iter().collect::<Vec<_>>(), vec![2, 3, 4]);
        assert_eq!(Interval::Empty.iter().count(), 0);
    }
}
