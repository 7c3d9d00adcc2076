//! The generator grammar: built-in generators, splittings of intervals,
//! incompatible pairings and the decomposability parser.

use std::collections::HashMap;
use std::fmt;

use crate::error::GeneratorError;
use crate::structure::{Interval, Pairing, StructuralElement, Structure};

/// A structural element of a generator by 0-based base slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    Unpaired(usize),
    Paired(usize, usize),
}

/// Generators are small; the aligner tracks their bases in a bitmask.
pub const MAX_GENERATOR_BASES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    name: String,
    structure: Structure,
    slots: Vec<Slot>,
    // 0-based slot pairs (a, b), a < b, that are not pairings
    unpaired_slot_pairs: Vec<(usize, usize)>,
}

impl Generator {
    pub fn new(name: impl Into<String>, structure: Structure) -> Result<Self, GeneratorError> {
        let name = name.into();
        if structure.is_empty() || structure == Structure::id0() || structure == Structure::id1() {
            return Err(GeneratorError::Trivial(name));
        }
        if structure.len() > MAX_GENERATOR_BASES {
            return Err(GeneratorError::TooLarge {
                name,
                n: structure.len(),
                limit: MAX_GENERATOR_BASES,
            });
        }
        let slots = structure
            .elements()
            .into_iter()
            .map(|e| match e {
                StructuralElement::UnpairedBase(i) => Slot::Unpaired(i - 1),
                StructuralElement::Pairing(i, j) => Slot::Paired(i - 1, j - 1),
            })
            .collect();
        let n = structure.len();
        let mut unpaired_slot_pairs = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if !structure.has_pairing(a + 1, b + 1) {
                    unpaired_slot_pairs.push((a, b));
                }
            }
        }
        Ok(Generator {
            name,
            structure,
            slots,
            unpaired_slot_pairs,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn is_gapped(&self) -> bool {
        self.structure.is_gapped()
    }

    /// Number of bases.
    pub fn len(&self) -> usize {
        self.structure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.structure.is_empty()
    }

    pub fn element_count(&self) -> usize {
        self.slots.len()
    }

    /// Structural elements in element order, by 0-based slot.
    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn unpaired_slot_pairs(&self) -> &[(usize, usize)] {
        &self.unpaired_slot_pairs
    }

    /// `[m]` for a 0-generator, `[left, right]` for a 1-generator.
    pub fn leg_sizes(&self) -> Vec<usize> {
        match self.structure.gap() {
            None => vec![self.len()],
            Some(k) => vec![k, self.len() - k],
        }
    }
}

/// A finite set of generators.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    generators: Vec<Generator>,
    max_leg: usize,
}

fn builtin(name: &str, n: usize, pairings: &[Pairing], gap: Option<usize>) -> Generator {
    let s = Structure::new(n, pairings.iter().copied(), gap).expect("built-in generator");
    Generator::new(name, s).expect("built-in generator")
}

impl GeneratorSet {
    /// The thirteen built-in generators, in a fixed order.
    pub fn builtin() -> Self {
        let generators = vec![
            builtin("concat", 2, &[], None),
            builtin("loop", 2, &[(1, 2)], None),
            builtin("disconn", 2, &[], Some(1)),
            builtin("lembed", 1, &[], Some(1)),
            builtin("rembed", 1, &[], Some(0)),
            builtin("lconcat", 3, &[(2, 3)], Some(2)),
            builtin("rconcat", 3, &[(1, 2)], Some(1)),
            builtin("linsert", 3, &[(1, 3)], Some(2)),
            builtin("rinsert", 3, &[(1, 3)], Some(1)),
            builtin("lwrap", 4, &[(1, 3), (2, 4)], Some(3)),
            builtin("rwrap", 4, &[(1, 3), (2, 4)], Some(1)),
            builtin("nest", 4, &[(1, 4), (2, 3)], Some(2)),
            builtin("cross", 4, &[(1, 3), (2, 4)], Some(2)),
        ];
        let mut set = GeneratorSet {
            generators,
            max_leg: 0,
        };
        set.max_leg = set.compute_max_leg();
        set
    }

    /// A set holding exactly `generators`; names must be unique.
    pub fn new(generators: impl IntoIterator<Item = Generator>) -> Result<Self, GeneratorError> {
        let mut set = GeneratorSet {
            generators: Vec::new(),
            max_leg: 0,
        };
        for g in generators {
            set.add(g)?;
        }
        Ok(set)
    }

    fn compute_max_leg(&self) -> usize {
        self.generators
            .iter()
            .flat_map(|g| g.leg_sizes())
            .max()
            .unwrap_or(0)
    }

    /// Adds a generator; names must be unique.
    pub fn add(&mut self, g: Generator) -> Result<(), GeneratorError> {
        if self.get(g.name()).is_some() {
            return Err(GeneratorError::Duplicate(g.name().to_string()));
        }
        self.generators.push(g);
        self.max_leg = self.compute_max_leg();
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&Generator> {
        self.generators.iter().find(|g| g.name() == name)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Largest number of bases in any leg of any generator.
    pub fn max_leg(&self) -> usize {
        self.max_leg
    }

    /// Parses generator definitions, one per line:
    /// `name n gap pairings`, where `gap` is `-` for a 0-generator and
    /// `pairings` is `i:j,i:j,...` (omitted or `-` when there are none).
    pub fn parse_definitions(text: &str) -> Result<Vec<Generator>, GeneratorError> {
        let mut out = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| GeneratorError::Parse {
                line: line_no,
                message,
            };
            let fields: Vec<&str> = content.split_whitespace().collect();
            if !(3..=4).contains(&fields.len()) {
                return Err(err(format!(
                    "expected `name n gap pairings`, got {} fields",
                    fields.len()
                )));
            }
            let name = fields[0];
            let n: usize = fields[1]
                .parse()
                .map_err(|_| err(format!("invalid base count {:?}", fields[1])))?;
            let gap = match fields[2] {
                "-" => None,
                g => Some(
                    g.parse::<usize>()
                        .map_err(|_| err(format!("invalid gap {g:?}")))?,
                ),
            };
            let mut pairings = Vec::new();
            if let Some(&spec) = fields.get(3).filter(|&&f| f != "-") {
                for item in spec.split(',') {
                    let (a, b) = item
                        .split_once(':')
                        .ok_or_else(|| err(format!("invalid pairing {item:?}")))?;
                    let a = a.parse().map_err(|_| err(format!("invalid pairing {item:?}")))?;
                    let b = b.parse().map_err(|_| err(format!("invalid pairing {item:?}")))?;
                    pairings.push((a, b));
                }
            }
            let s = Structure::new(n, pairings, gap).map_err(|source| GeneratorError::Structure {
                name: name.to_string(),
                source,
            })?;
            out.push(Generator::new(name, s)?);
        }
        Ok(out)
    }
}

impl Default for GeneratorSet {
    fn default() -> Self {
        GeneratorSet::builtin()
    }
}

/// Which splittings are admitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SplitMode {
    /// Empty intervals allowed.
    #[default]
    Relaxed,
    /// No empty intervals, and every interval keeps an unpaired base or an
    /// end of a compatible pairing.
    StrictProper,
}

/// One interval per generator base; the first `left` intervals partition
/// the left input interval, the rest the right one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Splitting {
    pub intervals: Vec<Interval>,
    pub left: usize,
}

impl Splitting {
    /// Index of the interval holding base `x`.
    pub fn interval_of(&self, x: usize) -> Option<usize> {
        self.intervals.iter().position(|iv| iv.contains(x))
    }
}

impl fmt::Display for Splitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, iv) in self.intervals.iter().enumerate() {
            if k > 0 {
                write!(f, "{}", if k == self.left { " | " } else { "," })?;
            }
            write!(f, "{iv}")?;
        }
        write!(f, ")")
    }
}

/// Calls `f` for every way of cutting the ordered `units` into `parts`
/// consecutive groups, in lexicographic order of the cut positions. Each
/// group becomes the interval from its first to its last unit.
pub fn for_each_cut(units: &[usize], parts: usize, allow_empty: bool, mut f: impl FnMut(&[Interval])) {
    let q = units.len();
    if parts == 0 {
        if q == 0 {
            f(&[]);
        }
        return;
    }
    if !allow_empty && q < parts {
        return;
    }
    // ends[k]: number of units in groups 0..=k
    let mut ends = vec![0usize; parts];
    let mut out = vec![Interval::Empty; parts];
    fn rec(
        k: usize,
        prev: usize,
        units: &[usize],
        allow_empty: bool,
        ends: &mut [usize],
        out: &mut [Interval],
        f: &mut dyn FnMut(&[Interval]),
    ) {
        let parts = ends.len();
        let q = units.len();
        let lo = if allow_empty { prev } else { prev + 1 };
        if k == parts - 1 {
            if q < lo {
                return;
            }
            ends[k] = q;
            out[k] = group(units, prev, q);
            f(out);
            return;
        }
        // leave room for the remaining groups
        let remaining = parts - 1 - k;
        let hi = if allow_empty { q } else { q.saturating_sub(remaining) };
        for end in lo..=hi {
            ends[k] = end;
            out[k] = group(units, prev, end);
            rec(k + 1, end, units, allow_empty, ends, out, f);
        }
    }
    rec(0, 0, units, allow_empty, &mut ends, &mut out, &mut f);
}

fn group(units: &[usize], from: usize, to: usize) -> Interval {
    if from == to {
        Interval::Empty
    } else {
        Interval::new(units[from], units[to - 1])
    }
}

/// Pairings of `s` inside the splitting whose ends fall into two different
/// intervals that are not paired in `g`.
pub fn incompatible_pairings(s: &Structure, split: &Splitting, g: &Generator) -> Vec<Pairing> {
    s.pairings()
        .iter()
        .copied()
        .filter(|&(i, j)| match (split.interval_of(i), split.interval_of(j)) {
            (Some(a), Some(b)) if a != b => {
                let (a, b) = (a.min(b), a.max(b));
                !g.structure().has_pairing(a + 1, b + 1)
            }
            _ => false,
        })
        .collect()
}

/// Every splitting of `i` (and `j` for a 1-generator) by `g` admitted by
/// `mode`. Propriety is judged on `s` restricted to the input intervals.
pub fn enumerate_splittings(
    g: &Generator,
    s: &Structure,
    i: Interval,
    j: Option<Interval>,
    mode: SplitMode,
) -> Result<Vec<Splitting>, GeneratorError> {
    if g.is_gapped() != j.is_some() {
        return Err(GeneratorError::WrongType);
    }
    let legs = g.leg_sizes();
    let inputs: Vec<Interval> = std::iter::once(i).chain(j).collect();
    let allow_empty = mode == SplitMode::Relaxed;
    let units: Vec<Vec<usize>> = inputs.iter().map(|iv| iv.iter().collect()).collect();
    let mut left_options = Vec::new();
    for_each_cut(&units[0], legs[0], allow_empty, |ivs| left_options.push(ivs.to_vec()));
    let mut right_options = vec![Vec::new()];
    if legs.len() == 2 {
        right_options.clear();
        for_each_cut(&units[1], legs[1], allow_empty, |ivs| right_options.push(ivs.to_vec()));
    }
    let context = |x: usize| inputs.iter().any(|iv| iv.contains(x));
    let mut out = Vec::new();
    for l in &left_options {
        for r in &right_options {
            let mut intervals = l.clone();
            intervals.extend_from_slice(r);
            let split = Splitting {
                intervals,
                left: legs[0],
            };
            if mode == SplitMode::StrictProper && !is_proper(s, &split, g, &context) {
                continue;
            }
            out.push(split);
        }
    }
    Ok(out)
}

/// Each interval holds an unpaired base or an end of a compatible pairing,
/// judged within the restriction given by `context`.
pub(crate) fn is_proper(
    s: &Structure,
    split: &Splitting,
    g: &Generator,
    context: &dyn Fn(usize) -> bool,
) -> bool {
    split.intervals.iter().enumerate().all(|(a, iv)| {
        iv.iter().any(|x| match s.partner(x) {
            None => true,
            Some(y) if !context(y) => false,
            Some(y) => match split.interval_of(y) {
                Some(b) if b == a => true,
                Some(b) => g.structure().has_pairing(a.min(b) + 1, a.max(b) + 1),
                None => false,
            },
        })
    })
}

/// A derivation of a structure from generators and identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionTree {
    Identity0,
    Identity1,
    Node {
        generator: usize,
        name: String,
        splitting: Splitting,
        children: Vec<DecompositionTree>,
    },
}

impl DecompositionTree {
    /// Recomposes the structure described by the tree.
    pub fn evaluate(&self, gens: &GeneratorSet) -> Structure {
        match self {
            DecompositionTree::Identity0 => Structure::id0(),
            DecompositionTree::Identity1 => Structure::id1(),
            DecompositionTree::Node {
                generator,
                children,
                ..
            } => {
                let kids: Vec<Structure> = children.iter().map(|c| c.evaluate(gens)).collect();
                gens.generators()[*generator]
                    .structure()
                    .compose_all(&kids)
                    .expect("witness children match their generator")
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            DecompositionTree::Node { children, .. } => {
                1 + children.iter().map(|c| c.depth()).max().unwrap_or(0)
            }
            _ => 0,
        }
    }
}

impl fmt::Display for DecompositionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompositionTree::Identity0 => write!(f, "id0"),
            DecompositionTree::Identity1 => write!(f, "id1"),
            DecompositionTree::Node { name, children, .. } => {
                write!(f, "{name}(")?;
                for (k, c) in children.iter().enumerate() {
                    if k > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

type ParseKey = (Interval, Option<Interval>);

#[derive(Clone)]
enum Parse {
    Pending,
    Failed,
    Identity,
    Split(usize, Splitting),
}

struct Parser<'a> {
    s: &'a Structure,
    gens: &'a GeneratorSet,
    memo: HashMap<ParseKey, Parse>,
}

impl Parser<'_> {
    fn solve(&mut self, key: ParseKey) -> bool {
        match self.memo.get(&key) {
            Some(Parse::Failed) => return false,
            Some(Parse::Pending) => {
                debug_assert!(false, "cyclic decomposition subproblem {key:?}");
                return false;
            }
            Some(_) => return true,
            None => {}
        }
        self.memo.insert(key, Parse::Pending);
        let result = self.compute(key);
        let ok = !matches!(result, Parse::Failed);
        self.memo.insert(key, result);
        ok
    }

    fn compute(&mut self, (i, j): ParseKey) -> Parse {
        let s = self.s;
        match j {
            None if i.len() == 1 => return Parse::Identity,
            Some(jv) if i.len() == 1 && jv.len() == 1 => {
                let (a, b) = (i.bounds().unwrap().0, jv.bounds().unwrap().0);
                if s.has_pairing(a, b) {
                    return Parse::Identity;
                }
            }
            _ => {}
        }
        let gens = self.gens;
        for (gi, g) in gens.generators().iter().enumerate() {
            if g.is_gapped() != j.is_some() {
                continue;
            }
            let Ok(splits) = enumerate_splittings(g, s, i, j, SplitMode::StrictProper) else {
                continue;
            };
            for split in splits {
                if split.intervals.iter().any(Interval::is_empty)
                    || !incompatible_pairings(s, &split, g).is_empty()
                {
                    continue;
                }
                let all = g.slots().iter().all(|slot| match *slot {
                    Slot::Unpaired(a) => self.solve((split.intervals[a], None)),
                    Slot::Paired(a, b) => {
                        self.solve((split.intervals[a], Some(split.intervals[b])))
                    }
                });
                if all {
                    return Parse::Split(gi, split);
                }
            }
        }
        Parse::Failed
    }

    fn tree(&self, key: ParseKey) -> DecompositionTree {
        match &self.memo[&key] {
            Parse::Identity if key.1.is_none() => DecompositionTree::Identity0,
            Parse::Identity => DecompositionTree::Identity1,
            Parse::Split(gi, split) => {
                let g = &self.gens.generators()[*gi];
                let children = g
                    .slots()
                    .iter()
                    .map(|slot| match *slot {
                        Slot::Unpaired(a) => self.tree((split.intervals[a], None)),
                        Slot::Paired(a, b) => {
                            self.tree((split.intervals[a], Some(split.intervals[b])))
                        }
                    })
                    .collect();
                DecompositionTree::Node {
                    generator: *gi,
                    name: g.name().to_string(),
                    splitting: split.clone(),
                    children,
                }
            }
            Parse::Failed | Parse::Pending => unreachable!("tree requested for a failed parse"),
        }
    }
}

/// Decides decomposability and returns a witness tree on success. Empty
/// structures are not decomposable.
pub fn decompose(s: &Structure, gens: &GeneratorSet) -> Option<DecompositionTree> {
    if s.is_empty() {
        return None;
    }
    let root = match s.gap() {
        None => (Interval::new(1, s.len()), None),
        Some(_) => {
            let (l, r) = s.legs();
            (l, Some(r))
        }
    };
    let mut parser = Parser {
        s,
        gens,
        memo: HashMap::new(),
    };
    parser.solve(root).then(|| parser.tree(root))
}

pub fn is_decomposable(s: &Structure, gens: &GeneratorSet) -> bool {
    decompose(s, gens).is_some()
}
