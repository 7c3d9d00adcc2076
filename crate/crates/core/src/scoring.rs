//! Edit-operation scores, all-gap weights, pair-deletion tables and the
//! approximation constant.
//!
//! Scores are exact non-negative integers. Text inputs with decimals are
//! multiplied by a declared `scale` when parsed.

use std::fmt::Write as _;

use num_rational::Ratio;

use crate::error::ScoreError;
use crate::sequence::{Alignment, Alphabet, FoldedSequence};
use crate::structure::Interval;

pub type Score = u64;

/// Whether a sequence plays the first role (its elements are deleted) or the
/// second (its elements are inserted).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    First,
    Second,
}

/// Unvalidated score tables. Entries may be negative until
/// [`RawScheme::validate`] rejects them.
#[derive(Clone, Debug)]
pub struct RawScheme {
    alphabet: Alphabet,
    base_sub: Vec<i64>,
    base_del: Vec<i64>,
    base_ins: Vec<i64>,
    pair_sub: Vec<i64>,
    pair_del: Vec<i64>,
    pair_ins: Vec<i64>,
}

fn matches(slot: Option<usize>, x: usize) -> bool {
    slot.is_none_or(|s| s == x)
}

impl RawScheme {
    /// All tables zero.
    pub fn zeros(alphabet: Alphabet) -> Self {
        let l = alphabet.len();
        RawScheme {
            base_sub: vec![0; l * l],
            base_del: vec![0; l],
            base_ins: vec![0; l],
            pair_sub: vec![0; l * l * l * l],
            pair_del: vec![0; l * l],
            pair_ins: vec![0; l * l],
            alphabet,
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn l(&self) -> usize {
        self.alphabet.len()
    }

    /// Sets `base_sub(x, y)`; `None` is a wildcard. Wildcards skip the
    /// identity cells.
    pub fn set_base_sub(&mut self, x: Option<usize>, y: Option<usize>, v: i64) {
        let l = self.l();
        for a in 0..l {
            for b in 0..l {
                if !matches(x, a) || !matches(y, b) {
                    continue;
                }
                if a == b && (x.is_none() || y.is_none()) {
                    continue;
                }
                self.base_sub[a * l + b] = v;
            }
        }
    }

    pub fn set_base_del(&mut self, x: Option<usize>, v: i64) {
        for a in 0..self.l() {
            if matches(x, a) {
                self.base_del[a] = v;
            }
        }
    }

    pub fn set_base_ins(&mut self, x: Option<usize>, v: i64) {
        for a in 0..self.l() {
            if matches(x, a) {
                self.base_ins[a] = v;
            }
        }
    }

    /// Sets `pair_sub(x1, x2, y1, y2)`; wildcards skip the identity cells.
    pub fn set_pair_sub(&mut self, slots: [Option<usize>; 4], v: i64) {
        let l = self.l();
        let any_wild = slots.iter().any(Option::is_none);
        for idx in 0..l * l * l * l {
            let c = [idx / (l * l * l), idx / (l * l) % l, idx / l % l, idx % l];
            if !(0..4).all(|k| matches(slots[k], c[k])) {
                continue;
            }
            if any_wild && c[0] == c[2] && c[1] == c[3] {
                continue;
            }
            self.pair_sub[idx] = v;
        }
    }

    pub fn set_pair_del(&mut self, x: [Option<usize>; 2], v: i64) {
        let l = self.l();
        for a in 0..l {
            for b in 0..l {
                if matches(x[0], a) && matches(x[1], b) {
                    self.pair_del[a * l + b] = v;
                }
            }
        }
    }

    pub fn set_pair_ins(&mut self, x: [Option<usize>; 2], v: i64) {
        let l = self.l();
        for a in 0..l {
            for b in 0..l {
                if matches(x[0], a) && matches(x[1], b) {
                    self.pair_ins[a * l + b] = v;
                }
            }
        }
    }

    /// Checks non-negativity and zero identity scores.
    pub fn validate(self) -> Result<ScoreScheme, ScoreError> {
        let l = self.l();
        let name = |i: usize| self.alphabet.letters()[i];
        let neg = |entry: String, value: i64| Err(ScoreError::NegativeScore { entry, value });
        for a in 0..l {
            for b in 0..l {
                let v = self.base_sub[a * l + b];
                if v < 0 {
                    return neg(format!("base_sub {} {}", name(a), name(b)), v);
                }
                if a == b && v != 0 {
                    return Err(ScoreError::NonZeroIdentity {
                        entry: format!("base_sub {} {}", name(a), name(b)),
                        value: v,
                    });
                }
            }
            if self.base_del[a] < 0 {
                return neg(format!("base_del {}", name(a)), self.base_del[a]);
            }
            if self.base_ins[a] < 0 {
                return neg(format!("base_ins {}", name(a)), self.base_ins[a]);
            }
        }
        for idx in 0..l * l * l * l {
            let c = [idx / (l * l * l), idx / (l * l) % l, idx / l % l, idx % l];
            let v = self.pair_sub[idx];
            let entry = || {
                format!(
                    "pair_sub {} {} {} {}",
                    name(c[0]),
                    name(c[1]),
                    name(c[2]),
                    name(c[3])
                )
            };
            if v < 0 {
                return neg(entry(), v);
            }
            if c[0] == c[2] && c[1] == c[3] && v != 0 {
                return Err(ScoreError::NonZeroIdentity {
                    entry: entry(),
                    value: v,
                });
            }
        }
        for idx in 0..l * l {
            for (table, label) in [(&self.pair_del, "pair_del"), (&self.pair_ins, "pair_ins")] {
                if table[idx] < 0 {
                    return neg(
                        format!("{label} {} {}", name(idx / l), name(idx % l)),
                        table[idx],
                    );
                }
            }
        }
        let cast = |v: Vec<i64>| v.into_iter().map(|x| x as Score).collect::<Vec<_>>();
        Ok(ScoreScheme {
            base_sub: cast(self.base_sub),
            base_del: cast(self.base_del),
            base_ins: cast(self.base_ins),
            pair_sub: cast(self.pair_sub),
            pair_del: cast(self.pair_del),
            pair_ins: cast(self.pair_ins),
            alphabet: self.alphabet,
        })
    }
}

/// Validated score tables over an alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoreScheme {
    alphabet: Alphabet,
    base_sub: Vec<Score>,
    base_del: Vec<Score>,
    base_ins: Vec<Score>,
    pair_sub: Vec<Score>,
    pair_del: Vec<Score>,
    pair_ins: Vec<Score>,
}

impl ScoreScheme {
    /// Mismatch, deletion and insertion of a base cost 1, a pair
    /// substitution 1 and a pair deletion or insertion 2.
    pub fn unit(alphabet: Alphabet) -> Self {
        let mut raw = RawScheme::zeros(alphabet);
        raw.set_base_sub(None, None, 1);
        raw.set_base_del(None, 1);
        raw.set_base_ins(None, 1);
        raw.set_pair_sub([None; 4], 1);
        raw.set_pair_del([None; 2], 2);
        raw.set_pair_ins([None; 2], 2);
        raw.validate().expect("unit preset is valid")
    }

    /// Like [`ScoreScheme::unit`] but a pair substitution costs exactly a
    /// pair deletion plus a pair insertion.
    pub fn additive(alphabet: Alphabet) -> Self {
        let mut raw = RawScheme::zeros(alphabet);
        raw.set_base_sub(None, None, 1);
        raw.set_base_del(None, 1);
        raw.set_base_ins(None, 1);
        raw.set_pair_sub([None; 4], 4);
        raw.set_pair_del([None; 2], 2);
        raw.set_pair_ins([None; 2], 2);
        raw.validate().expect("additive preset is valid")
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn l(&self) -> usize {
        self.alphabet.len()
    }

    // Index-based lookups; indices come from `Alphabet::index`.

    pub fn base_sub_idx(&self, x: usize, y: usize) -> Score {
        self.base_sub[x * self.l() + y]
    }

    pub fn base_del_idx(&self, x: usize) -> Score {
        self.base_del[x]
    }

    pub fn base_ins_idx(&self, y: usize) -> Score {
        self.base_ins[y]
    }

    pub fn pair_sub_idx(&self, x1: usize, x2: usize, y1: usize, y2: usize) -> Score {
        let l = self.l();
        self.pair_sub[((x1 * l + x2) * l + y1) * l + y2]
    }

    pub fn pair_del_idx(&self, x1: usize, x2: usize) -> Score {
        self.pair_del[x1 * self.l() + x2]
    }

    pub fn pair_ins_idx(&self, y1: usize, y2: usize) -> Score {
        self.pair_ins[y1 * self.l() + y2]
    }

    /// Unpaired-base weight against a blank in the given role.
    pub fn base_gap_idx(&self, x: usize, role: Role) -> Score {
        match role {
            Role::First => self.base_del_idx(x),
            Role::Second => self.base_ins_idx(x),
        }
    }

    pub fn pair_gap_idx(&self, x1: usize, x2: usize, role: Role) -> Score {
        match role {
            Role::First => self.pair_del_idx(x1, x2),
            Role::Second => self.pair_ins_idx(x1, x2),
        }
    }

    fn idx(&self, c: char) -> Option<usize> {
        self.alphabet.index(c)
    }

    /// Score of one unpaired alignment column.
    pub fn base_column(&self, top: Option<char>, bottom: Option<char>) -> Option<Score> {
        Some(match (top, bottom) {
            (None, None) => 0,
            (Some(x), None) => self.base_del_idx(self.idx(x)?),
            (None, Some(y)) => self.base_ins_idx(self.idx(y)?),
            (Some(x), Some(y)) => self.base_sub_idx(self.idx(x)?, self.idx(y)?),
        })
    }

    /// Score of one paired pair of alignment columns.
    pub fn pair_columns(
        &self,
        top: (Option<char>, Option<char>),
        bottom: (Option<char>, Option<char>),
    ) -> Option<Score> {
        Some(match (top, bottom) {
            ((None, None), (None, None)) => 0,
            ((Some(a), Some(b)), (None, None)) => self.pair_del_idx(self.idx(a)?, self.idx(b)?),
            ((None, None), (Some(a), Some(b))) => self.pair_ins_idx(self.idx(a)?, self.idx(b)?),
            ((Some(a), Some(b)), (Some(c), Some(d))) => {
                self.pair_sub_idx(self.idx(a)?, self.idx(b)?, self.idx(c)?, self.idx(d)?)
            }
            _ => return None,
        })
    }

    /// True when swapping the two sequences leaves every score unchanged.
    pub fn is_role_symmetric(&self) -> bool {
        self == &self.transposed()
    }

    /// The scheme with the roles of the two sequences exchanged.
    pub fn transposed(&self) -> ScoreScheme {
        let l = self.l();
        let mut t = self.clone();
        for x in 0..l {
            for y in 0..l {
                t.base_sub[x * l + y] = self.base_sub[y * l + x];
            }
        }
        t.base_del = self.base_ins.clone();
        t.base_ins = self.base_del.clone();
        t.pair_del = self.pair_ins.clone();
        t.pair_ins = self.pair_del.clone();
        for x1 in 0..l {
            for x2 in 0..l {
                for y1 in 0..l {
                    for y2 in 0..l {
                        t.pair_sub[((x1 * l + x2) * l + y1) * l + y2] =
                            self.pair_sub[((y1 * l + y2) * l + x1) * l + x2];
                    }
                }
            }
        }
        t
    }

    /// Parses the line-oriented score file format.
    ///
    /// ```text
    /// # comment
    /// alphabet ACGU
    /// scale 10
    /// preset unit
    /// base_sub A G 0.5
    /// base_indel * 1
    /// pair_sub * * * * 1
    /// pair_indel * * 2
    /// ```
    ///
    /// `*` is a wildcard, later lines override earlier ones, and
    /// `base_del`, `base_ins`, `pair_del`, `pair_ins` set one role only.
    /// `alphabet` and `scale` must precede all score lines.
    pub fn parse(text: &str) -> Result<ScoreScheme, ScoreError> {
        let mut raw = RawScheme::zeros(Alphabet::rna());
        let mut scale: i64 = 1;
        let mut seen_values = false;
        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let content = line.split('#').next().unwrap_or("");
            let tokens = tokenize(content);
            let Some(&(col, head)) = tokens.first() else {
                continue;
            };
            let err = |column: usize, message: String| ScoreError::Parse {
                line: line_no,
                column,
                message,
            };
            let args = &tokens[1..];
            let want = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(err(
                        col,
                        format!("{head} expects {n} arguments, got {}", args.len()),
                    ))
                }
            };
            let letter = |raw: &RawScheme, k: usize| -> Result<Option<usize>, ScoreError> {
                let (c, tok) = args[k];
                if tok == "*" {
                    return Ok(None);
                }
                let mut chars = tok.chars();
                match (chars.next(), chars.next()) {
                    (Some(ch), None) => raw
                        .alphabet()
                        .index(ch)
                        .map(Some)
                        .ok_or_else(|| err(c, format!("letter {ch:?} is not in the alphabet"))),
                    _ => Err(err(c, format!("expected a single letter, got {tok:?}"))),
                }
            };
            let value = |k: usize| -> Result<i64, ScoreError> {
                let (c, tok) = args[k];
                parse_scaled(tok, scale).map_err(|m| err(c, m))
            };
            match head {
                "alphabet" | "scale" if seen_values => {
                    return Err(err(col, format!("{head} must precede score lines")));
                }
                "alphabet" => {
                    want(1)?;
                    let alphabet = Alphabet::new(args[0].1.chars(), '-')
                        .map_err(|e| err(args[0].0, e.to_string()))?;
                    raw = RawScheme::zeros(alphabet);
                }
                "scale" => {
                    want(1)?;
                    scale = args[0]
                        .1
                        .parse::<i64>()
                        .ok()
                        .filter(|&s| s > 0)
                        .ok_or_else(|| err(args[0].0, "scale must be a positive integer".into()))?;
                }
                "preset" => {
                    want(1)?;
                    let alphabet = raw.alphabet().clone();
                    let preset = match args[0].1 {
                        "unit" => ScoreScheme::unit(alphabet),
                        "additive" => ScoreScheme::additive(alphabet),
                        other => return Err(err(args[0].0, format!("unknown preset {other:?}"))),
                    };
                    raw = preset.scaled_raw(scale);
                    seen_values = true;
                }
                "base_sub" => {
                    want(3)?;
                    let (x, y, v) = (letter(&raw, 0)?, letter(&raw, 1)?, value(2)?);
                    raw.set_base_sub(x, y, v);
                    seen_values = true;
                }
                "base_indel" | "base_del" | "base_ins" => {
                    want(2)?;
                    let (x, v) = (letter(&raw, 0)?, value(1)?);
                    if head != "base_ins" {
                        raw.set_base_del(x, v);
                    }
                    if head != "base_del" {
                        raw.set_base_ins(x, v);
                    }
                    seen_values = true;
                }
                "pair_sub" => {
                    want(5)?;
                    let slots = [
                        letter(&raw, 0)?,
                        letter(&raw, 1)?,
                        letter(&raw, 2)?,
                        letter(&raw, 3)?,
                    ];
                    let v = value(4)?;
                    raw.set_pair_sub(slots, v);
                    seen_values = true;
                }
                "pair_indel" | "pair_del" | "pair_ins" => {
                    want(3)?;
                    let x = [letter(&raw, 0)?, letter(&raw, 1)?];
                    let v = value(2)?;
                    if head != "pair_ins" {
                        raw.set_pair_del(x, v);
                    }
                    if head != "pair_del" {
                        raw.set_pair_ins(x, v);
                    }
                    seen_values = true;
                }
                other => return Err(err(col, format!("unknown directive {other:?}"))),
            }
        }
        raw.validate()
    }

    fn scaled_raw(&self, scale: i64) -> RawScheme {
        let up = |v: &Vec<Score>| v.iter().map(|&x| x as i64 * scale).collect();
        RawScheme {
            alphabet: self.alphabet.clone(),
            base_sub: up(&self.base_sub),
            base_del: up(&self.base_del),
            base_ins: up(&self.base_ins),
            pair_sub: up(&self.pair_sub),
            pair_del: up(&self.pair_del),
            pair_ins: up(&self.pair_ins),
        }
    }

    /// Renders the scheme in the text format, one line per cell.
    pub fn to_text(&self) -> String {
        let l = self.l();
        let c = |i: usize| self.alphabet.letters()[i];
        let mut out = String::new();
        let letters: String = self.alphabet.letters().iter().collect();
        writeln!(out, "alphabet {letters}").unwrap();
        for x in 0..l {
            writeln!(out, "base_del {} {}", c(x), self.base_del[x]).unwrap();
            writeln!(out, "base_ins {} {}", c(x), self.base_ins[x]).unwrap();
            for y in 0..l {
                if x != y {
                    writeln!(out, "base_sub {} {} {}", c(x), c(y), self.base_sub_idx(x, y)).unwrap();
                }
            }
        }
        for x1 in 0..l {
            for x2 in 0..l {
                writeln!(out, "pair_del {} {} {}", c(x1), c(x2), self.pair_del_idx(x1, x2)).unwrap();
                writeln!(out, "pair_ins {} {} {}", c(x1), c(x2), self.pair_ins_idx(x1, x2)).unwrap();
                for y1 in 0..l {
                    for y2 in 0..l {
                        if (x1, x2) != (y1, y2) {
                            let v = self.pair_sub_idx(x1, x2, y1, y2);
                            writeln!(out, "pair_sub {} {} {} {} {v}", c(x1), c(x2), c(y1), c(y2))
                                .unwrap();
                        }
                    }
                }
            }
        }
        out
    }
}

// (1-based column, token)
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (pos, (byte, ch)) in line.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((pos + 1, byte)),
            (true, Some((col, b))) => {
                out.push((col, &line[b..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((col, b)) = start {
        out.push((col, &line[b..]));
    }
    out
}

/// Parses a decimal and multiplies it by `scale`; the product must be an
/// integer.
fn parse_scaled(tok: &str, scale: i64) -> Result<i64, String> {
    let bad = || format!("invalid number {tok:?}");
    let (neg, digits) = match tok.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, tok),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let frac_digits = frac_part.trim_end_matches('0');
    let denom = 10i64
        .checked_pow(frac_digits.len() as u32)
        .ok_or_else(bad)?;
    let all = format!("{int_part}{frac_digits}");
    let numer: i64 = if all.is_empty() {
        0
    } else {
        all.parse().map_err(|_| bad())?
    };
    let scaled = numer.checked_mul(scale).ok_or_else(bad)?;
    if scaled % denom != 0 {
        return Err(format!(
            "{tok} is not a multiple of 1/{scale}; declare a larger scale"
        ));
    }
    Ok(if neg { -scaled / denom } else { scaled / denom })
}

/// Score of aligning a whole folded sequence against blanks.
pub fn all_gap_weight(fs: &FoldedSequence, scheme: &ScoreScheme, role: Role) -> Option<Score> {
    let s = fs.structure();
    let mut total = 0;
    for i in 1..=fs.len() {
        let x = scheme.alphabet().index(fs.letter(i))?;
        match s.partner(i) {
            None => total += scheme.base_gap_idx(x, role),
            Some(j) if i < j => {
                let y = scheme.alphabet().index(fs.letter(j))?;
                total += scheme.pair_gap_idx(x, y, role);
            }
            Some(_) => {}
        }
    }
    Some(total)
}

/// `R[I;J]`: summed gap weight of the pairings with one end in `I` and the
/// other in `J`, answered in O(1) from two-dimensional prefix sums.
#[derive(Clone, Debug)]
pub struct PairDeletionTable {
    n: usize,
    // prefix[a * (n + 1) + b]: weight of pairings (i, j) with i <= a, j <= b
    prefix: Vec<Score>,
}

impl PairDeletionTable {
    /// Returns `None` if a letter is missing from the scheme's alphabet.
    pub fn new(fs: &FoldedSequence, scheme: &ScoreScheme, role: Role) -> Option<Self> {
        let n = fs.len();
        let w = n + 1;
        let mut prefix = vec![0; w * w];
        for &(i, j) in fs.structure().pairings() {
            let x = scheme.alphabet().index(fs.letter(i))?;
            let y = scheme.alphabet().index(fs.letter(j))?;
            prefix[i * w + j] += scheme.pair_gap_idx(x, y, role);
        }
        for a in 1..w {
            for b in 1..w {
                prefix[a * w + b] += prefix[(a - 1) * w + b] + prefix[a * w + b - 1]
                    - prefix[(a - 1) * w + b - 1];
            }
        }
        Some(PairDeletionTable { n, prefix })
    }

    fn at(&self, a: usize, b: usize) -> Score {
        self.prefix[a * (self.n + 1) + b]
    }

    /// Weight of pairings `(i, j)`, `i < j`, with `i` in `[a_lo, a_hi]` and
    /// `j` in `[b_lo, b_hi]`.
    pub fn rect(&self, a_lo: usize, a_hi: usize, b_lo: usize, b_hi: usize) -> Score {
        self.at(a_hi, b_hi) + self.at(a_lo - 1, b_lo - 1)
            - self.at(a_lo - 1, b_hi)
            - self.at(a_hi, b_lo - 1)
    }

    /// `R[I;J]` for disjoint intervals in either order.
    pub fn get(&self, i: Interval, j: Interval) -> Score {
        match (i.bounds(), j.bounds()) {
            (Some((a, b)), Some((c, d))) if b < c => self.rect(a, b, c, d),
            (Some((a, b)), Some((c, d))) => self.rect(c, d, a, b),
            _ => 0,
        }
    }
}

/// Score of an alignment: unpaired columns plus pairings.
pub fn score_alignment(a: &Alignment, scheme: &ScoreScheme) -> Result<Score, ScoreError> {
    let s = a.structure();
    let (top, bottom) = (a.top(), a.bottom());
    let unknown = || ScoreError::InvalidAlignment("letter outside the score alphabet".into());
    let mut total = 0;
    for i in 1..=s.len() {
        match s.partner(i) {
            None => total += scheme.base_column(top[i - 1], bottom[i - 1]).ok_or_else(unknown)?,
            Some(j) if i < j => {
                total += scheme
                    .pair_columns((top[i - 1], top[j - 1]), (bottom[i - 1], bottom[j - 1]))
                    .ok_or_else(|| {
                        ScoreError::InvalidAlignment(format!(
                            "pairing ({i},{j}) is half blank or has unknown letters"
                        ))
                    })?;
            }
            Some(_) => {}
        }
    }
    Ok(total)
}

/// The smallest `c >= 1` with `c * pair_sub >= pair_del + pair_ins` over all
/// mismatched pair substitutions.
pub fn approximation_constant(scheme: &ScoreScheme) -> Result<Ratio<Score>, ScoreError> {
    let l = scheme.alphabet().len();
    let letters = scheme.alphabet().letters();
    let mut best = Ratio::from_integer(1);
    for x1 in 0..l {
        for x2 in 0..l {
            for y1 in 0..l {
                for y2 in 0..l {
                    if (x1, x2) == (y1, y2) {
                        continue;
                    }
                    let sub = scheme.pair_sub_idx(x1, x2, y1, y2);
                    let split = scheme.pair_del_idx(x1, x2) + scheme.pair_ins_idx(y1, y2);
                    if sub == 0 {
                        if split == 0 {
                            continue;
                        }
                        return Err(ScoreError::UnboundedRatio {
                            entry: format!(
                                "{}{}/{}{}",
                                letters[x1], letters[x2], letters[y1], letters[y2]
                            ),
                        });
                    }
                    let r = Ratio::new(split, sub);
                    if r > best {
                        best = r;
                    }
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Structure;

    fn fs(n: usize, p: &[(usize, usize)], word: &str) -> FoldedSequence {
        FoldedSequence::new(Structure::new(n, p.iter().copied(), None).unwrap(), word).unwrap()
    }

    fn blanks(s: &str) -> Vec<Option<char>> {
        s.chars().map(|c| (c != '-').then_some(c)).collect()
    }

    fn unit() -> ScoreScheme {
        ScoreScheme::unit(Alphabet::rna())
    }

    #[test]
    fn presets_validate() {
        let u = unit();
        assert_eq!(u.base_sub_idx(0, 0), 0);
        assert_eq!(u.base_sub_idx(0, 1), 1);
        assert_eq!(u.pair_sub_idx(0, 1, 0, 1), 0);
        assert_eq!(u.pair_sub_idx(0, 1, 0, 2), 1);
        assert_eq!(u.pair_del_idx(2, 3), 2);
        let a = ScoreScheme::additive(Alphabet::rna());
        assert_eq!(a.pair_sub_idx(0, 1, 2, 3), 4);
        assert!(u.is_role_symmetric());
        assert!(a.is_role_symmetric());
    }

    #[test]
    fn nonzero_identity_rejected() {
        let mut raw = RawScheme::zeros(Alphabet::rna());
        raw.set_base_sub(Some(0), Some(0), 1);
        assert!(matches!(
            raw.validate(),
            Err(ScoreError::NonZeroIdentity { .. })
        ));
        let mut raw = RawScheme::zeros(Alphabet::rna());
        raw.set_pair_sub([Some(0), Some(1), Some(0), Some(1)], 3);
        assert!(matches!(
            raw.validate(),
            Err(ScoreError::NonZeroIdentity { .. })
        ));
    }

    #[test]
    fn negative_rejected() {
        let mut raw = RawScheme::zeros(Alphabet::rna());
        raw.set_pair_del([None, Some(3)], -1);
        assert!(matches!(
            raw.validate(),
            Err(ScoreError::NegativeScore { value: -1, .. })
        ));
    }

    #[test]
    fn all_gap_weight_examples() {
        let u = unit();
        assert_eq!(all_gap_weight(&fs(2, &[(1, 2)], "GC"), &u, Role::First), Some(2));
        assert_eq!(all_gap_weight(&fs(3, &[], "AAA"), &u, Role::First), Some(3));
        assert_eq!(all_gap_weight(&FoldedSequence::empty(), &u, Role::First), Some(0));
        assert_eq!(all_gap_weight(&fs(1, &[], "X"), &u, Role::First), None);
    }

    #[test]
    fn pair_deletion_table_examples() {
        let u = unit();
        let t = PairDeletionTable::new(&fs(4, &[(1, 3), (2, 4)], "ACGU"), &u, Role::First).unwrap();
        assert_eq!(t.get(Interval::new(1, 2), Interval::new(3, 4)), 4);
        assert_eq!(t.get(Interval::single(1), Interval::single(2)), 0);
        assert_eq!(t.get(Interval::new(1, 2), Interval::Empty), 0);
        assert_eq!(t.get(Interval::new(3, 4), Interval::new(1, 2)), 4);
        assert_eq!(t.get(Interval::single(1), Interval::single(3)), 2);
    }

    #[test]
    fn pair_deletion_table_is_additive() {
        let u = unit();
        let f = fs(8, &[(1, 5), (2, 8), (3, 4), (6, 7)], "ACGUACGU");
        let t = PairDeletionTable::new(&f, &u, Role::First).unwrap();
        // brute-force definition
        let direct = |i: Interval, j: Interval| -> Score {
            f.structure()
                .pairings()
                .iter()
                .filter(|&&(a, b)| (i.contains(a) && j.contains(b)) || (i.contains(b) && j.contains(a)))
                .map(|_| 2)
                .sum()
        };
        let all: Vec<Interval> = std::iter::once(Interval::Empty)
            .chain((1..=8).flat_map(|lo| (lo..=8).map(move |hi| Interval::new(lo, hi))))
            .collect();
        for &i in &all {
            for &j in &all {
                if i.precedes(&j) {
                    assert_eq!(t.get(i, j), direct(i, j), "{i} {j}");
                }
            }
            // R[I;J] + R[I;J'] = R[I;J ∪ J'] for adjacent J, J'
            if let Some((_, hi)) = i.bounds() {
                for mid in hi + 1..=8 {
                    for end in mid..=8 {
                        let left = Interval::new(hi + 1, mid);
                        let right = Interval::new(mid + 1, end);
                        assert_eq!(
                            t.get(i, left) + t.get(i, right),
                            t.get(i, Interval::new(hi + 1, end))
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn score_alignment_examples() {
        let u = unit();
        let s = Structure::new(4, [(1, 4)], None).unwrap();
        let same = Alignment::new(s.clone(), blanks("GAAC"), blanks("GAAC")).unwrap();
        assert_eq!(score_alignment(&same, &u), Ok(0));
        let hairpin = Alignment::new(s, blanks("G--C"), blanks("GAAC")).unwrap();
        assert_eq!(score_alignment(&hairpin, &u), Ok(2));
        let p = Structure::new(2, [(1, 2)], None).unwrap();
        let del = Alignment::new(p, blanks("GC"), blanks("--")).unwrap();
        assert_eq!(score_alignment(&del, &u), Ok(2));
    }

    #[test]
    fn approximation_constants() {
        assert_eq!(approximation_constant(&unit()), Ok(Ratio::from_integer(4)));
        assert_eq!(
            approximation_constant(&ScoreScheme::additive(Alphabet::rna())),
            Ok(Ratio::from_integer(1))
        );
        let mut raw = ScoreScheme::unit(Alphabet::rna()).scaled_raw(1);
        raw.set_pair_sub([Some(0), Some(1), Some(0), Some(2)], 0);
        let zero = raw.validate().unwrap();
        assert!(matches!(
            approximation_constant(&zero),
            Err(ScoreError::UnboundedRatio { .. })
        ));
        // an expensive substitution never pushes c below 1
        let mut raw = ScoreScheme::unit(Alphabet::rna()).scaled_raw(1);
        raw.set_pair_sub([None; 4], 100);
        assert_eq!(
            approximation_constant(&raw.validate().unwrap()),
            Ok(Ratio::from_integer(1))
        );
        let mut raw = ScoreScheme::unit(Alphabet::rna()).scaled_raw(1);
        raw.set_pair_sub([None; 4], 3);
        assert_eq!(
            approximation_constant(&raw.validate().unwrap()),
            Ok(Ratio::new(4, 3))
        );
    }

    #[test]
    fn parse_score_file() {
        let text = "\
# unit scores, spelled out
scale 10
base_sub * * 1
base_indel * 1
pair_sub * * * * 0.5
pair_indel * * 2
base_sub A G 0.3
";
        let s = ScoreScheme::parse(text).unwrap();
        assert_eq!(s.base_sub_idx(0, 1), 10);
        assert_eq!(s.base_sub_idx(0, 2), 3);
        assert_eq!(s.base_sub_idx(2, 0), 10);
        assert_eq!(s.base_sub_idx(0, 0), 0);
        assert_eq!(s.pair_sub_idx(0, 1, 2, 3), 5);
        assert_eq!(s.pair_ins_idx(0, 1), 20);
    }

    #[test]
    fn parse_preset_matches_constructor() {
        assert_eq!(ScoreScheme::parse("preset unit").unwrap(), unit());
        let text = unit().to_text();
        assert_eq!(ScoreScheme::parse(&text).unwrap(), unit());
    }

    #[test]
    fn parse_errors_carry_positions() {
        match ScoreScheme::parse("base_sub A X 1") {
            Err(ScoreError::Parse { line: 1, column: 12, .. }) => {}
            other => panic!("{other:?}"),
        }
        match ScoreScheme::parse("\nscale 10\nbase_sub A C 0.05") {
            Err(ScoreError::Parse { line: 3, column: 14, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            ScoreScheme::parse("base_indel * 1\nscale 2"),
            Err(ScoreError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            ScoreScheme::parse("base_sub A A 1"),
            Err(ScoreError::NonZeroIdentity { .. })
        ));
        assert!(matches!(
            ScoreScheme::parse("base_indel A -1"),
            Err(ScoreError::NegativeScore { .. })
        ));
        assert!(matches!(
            ScoreScheme::parse("frobnicate"),
            Err(ScoreError::Parse { .. })
        ));
    }

    #[test]
    fn scaled_decimals() {
        assert_eq!(parse_scaled("1.5", 10), Ok(15));
        assert_eq!(parse_scaled("0", 1), Ok(0));
        assert_eq!(parse_scaled("0.0", 1), Ok(0));
        assert_eq!(parse_scaled("-2", 3), Ok(-6));
        assert_eq!(parse_scaled("2.50", 2), Ok(5));
        assert!(parse_scaled("1.25", 10).is_err());
        assert!(parse_scaled("abc", 1).is_err());
        assert!(parse_scaled(".", 1).is_err());
    }
}
