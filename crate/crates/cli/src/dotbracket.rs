//! Dot-bracket documents with bracket layers for crossing pairings.
//!
//! A document holds optional `>` header and `#` comment lines, one or more
//! sequence lines and a final structure line. Layers in precedence order
//! are `()`, `[]`, `{}`, `<>`, then `Aa` through `Zz`; `&` marks the gap of
//! a 1-structure and must sit at the same column in the sequence.

use std::fmt::Write as _;

use pkalign::{Alignment, FoldedSequence, Structure};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DotBracketError {
    #[error("line {line}, column {column}: unbalanced {symbol:?}")]
    Unbalanced {
        line: usize,
        column: usize,
        symbol: char,
    },
    #[error("line {line}: structure has {structure} positions, sequence has {sequence}")]
    LengthMismatch {
        line: usize,
        sequence: usize,
        structure: usize,
    },
    #[error("line {line}, column {column}: unknown symbol {symbol:?}")]
    UnknownSymbol {
        line: usize,
        column: usize,
        symbol: char,
    },
    #[error("line {line}, column {column}: {message}")]
    BadGap {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("document has no structure line")]
    Missing,
    #[error("structure needs more than {0} bracket layers")]
    TooManyLayers(usize),
}

const LAYERS: usize = 4 + 26;

fn layer_chars(layer: usize) -> (char, char) {
    match layer {
        0 => ('(', ')'),
        1 => ('[', ']'),
        2 => ('{', '}'),
        3 => ('<', '>'),
        k => {
            let up = (b'A' + (k - 4) as u8) as char;
            (up, up.to_ascii_lowercase())
        }
    }
}

enum Symbol {
    Dot,
    Gap,
    Open(usize),
    Close(usize),
}

fn classify(c: char) -> Option<Symbol> {
    Some(match c {
        '.' => Symbol::Dot,
        '&' => Symbol::Gap,
        '(' => Symbol::Open(0),
        ')' => Symbol::Close(0),
        '[' => Symbol::Open(1),
        ']' => Symbol::Close(1),
        '{' => Symbol::Open(2),
        '}' => Symbol::Close(2),
        '<' => Symbol::Open(3),
        '>' => Symbol::Close(3),
        'A'..='Z' => Symbol::Open(4 + (c as u8 - b'A') as usize),
        'a'..='z' => Symbol::Close(4 + (c as u8 - b'a') as usize),
        _ => return None,
    })
}

/// Parses a document into a folded sequence.
pub fn parse_dotbracket(text: &str) -> Result<FoldedSequence, DotBracketError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim_end()))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('>') && !t.starts_with('#')
        })
        .collect();
    let Some((&(sline, structure), seq_lines)) = lines.split_last() else {
        return Err(DotBracketError::Missing);
    };
    if seq_lines.is_empty() {
        return Err(DotBracketError::Missing);
    }
    let seq: Vec<(usize, usize, char)> = seq_lines
        .iter()
        .flat_map(|&(ln, l)| {
            l.chars()
                .enumerate()
                .filter(|(_, c)| !c.is_whitespace())
                .map(move |(col, c)| (ln, col + 1, c))
        })
        .collect();
    let chars: Vec<(usize, char)> = structure
        .chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(col, c)| (col + 1, c))
        .collect();
    if chars.len() != seq.len() {
        return Err(DotBracketError::LengthMismatch {
            line: sline,
            sequence: seq.len(),
            structure: chars.len(),
        });
    }

    let mut stacks: Vec<Vec<(usize, usize, char)>> = vec![Vec::new(); LAYERS];
    let mut pairings = Vec::new();
    let mut gap = None;
    let mut word = Vec::new();
    for (&(col, c), &(qline, qcol, letter)) in chars.iter().zip(&seq) {
        let sym = classify(c).ok_or(DotBracketError::UnknownSymbol {
            line: sline,
            column: col,
            symbol: c,
        })?;
        let bad_gap = |message: &str| DotBracketError::BadGap {
            line: sline,
            column: col,
            message: message.to_string(),
        };
        if matches!(sym, Symbol::Gap) != (letter == '&') {
            return Err(DotBracketError::BadGap {
                line: qline,
                column: qcol,
                message: "'&' must appear at the same position in sequence and structure".into(),
            });
        }
        let pos = word.len() + 1;
        match sym {
            Symbol::Gap => {
                if gap.is_some() {
                    return Err(bad_gap("more than one '&'"));
                }
                gap = Some(word.len());
                continue;
            }
            Symbol::Dot => {}
            Symbol::Open(k) => stacks[k].push((pos, col, c)),
            Symbol::Close(k) => {
                let (open, _, _) = stacks[k].pop().ok_or(DotBracketError::Unbalanced {
                    line: sline,
                    column: col,
                    symbol: c,
                })?;
                pairings.push((open, pos));
            }
        }
        word.push(letter);
    }
    if let Some(&(_, col, c)) = stacks.iter().flatten().min_by_key(|(pos, _, _)| *pos) {
        return Err(DotBracketError::Unbalanced {
            line: sline,
            column: col,
            symbol: c,
        });
    }
    let s = Structure::new(word.len(), pairings, gap).expect("brackets give disjoint pairings");
    Ok(FoldedSequence::from_chars(s, word).expect("lengths agree"))
}

/// Assigns each pairing the first layer in which it crosses nothing,
/// taking pairings by left end.
fn assign_layers(s: &Structure) -> Result<Vec<usize>, DotBracketError> {
    let mut layers: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut out = Vec::with_capacity(s.pairings().len());
    for &(i, j) in s.pairings() {
        let crosses = |&(a, b): &(usize, usize)| (a < i && i < b && b < j) || (i < a && a < j && j < b);
        let k = match layers.iter().position(|l| !l.iter().any(crosses)) {
            Some(k) => k,
            None => {
                layers.push(Vec::new());
                layers.len() - 1
            }
        };
        if k >= LAYERS {
            return Err(DotBracketError::TooManyLayers(LAYERS));
        }
        layers[k].push((i, j));
        out.push(k);
    }
    Ok(out)
}

/// Structure line for `s`, with `&` at the gap.
pub fn structure_line(s: &Structure) -> Result<String, DotBracketError> {
    let mut line = vec!['.'; s.len()];
    for (&(i, j), k) in s.pairings().iter().zip(assign_layers(s)?) {
        let (open, close) = layer_chars(k);
        line[i - 1] = open;
        line[j - 1] = close;
    }
    if let Some(k) = s.gap() {
        line.insert(k, '&');
    }
    Ok(line.into_iter().collect())
}

/// Canonical two-line document for a folded sequence.
pub fn serialize(fs: &FoldedSequence) -> Result<String, DotBracketError> {
    let mut word: String = fs.word().iter().collect();
    if let Some(k) = fs.structure().gap() {
        word.insert(k, '&');
    }
    Ok(format!("{word}\n{}\n", structure_line(fs.structure())?))
}

/// Four lines: structure, first word, match markers, second word. Blanks
/// are `-`; markers are `|` for equal letters, `:` for a substitution and
/// a space where either word has a blank.
pub fn serialize_alignment(a: &Alignment) -> Result<String, DotBracketError> {
    let render = |w: &[Option<char>]| -> String { w.iter().map(|c| c.unwrap_or('-')).collect() };
    let marks: String = a
        .top()
        .iter()
        .zip(a.bottom())
        .map(|(x, y)| match (x, y) {
            (Some(x), Some(y)) if x == y => '|',
            (Some(_), Some(_)) => ':',
            _ => ' ',
        })
        .collect();
    let mut out = String::new();
    writeln!(out, "{}", structure_line(a.structure())?).unwrap();
    writeln!(out, "{}", render(a.top())).unwrap();
    writeln!(out, "{}", marks.trim_end()).unwrap();
    writeln!(out, "{}", render(a.bottom())).unwrap();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(seq: &str, st: &str) -> String {
        format!("{seq}\n{st}\n")
    }

    #[test]
    fn parses_nested_and_crossing() {
        let fs = parse_dotbracket(&doc("GGAACC", "((..))")).unwrap();
        assert_eq!(fs.structure(), &Structure::new(6, [(1, 6), (2, 5)], None).unwrap());
        assert_eq!(fs.word().iter().collect::<String>(), "GGAACC");
        let fs = parse_dotbracket(&doc("ACGU", "([)]")).unwrap();
        assert_eq!(fs.structure(), &Structure::new(4, [(1, 3), (2, 4)], None).unwrap());
    }

    #[test]
    fn parses_gap() {
        let fs = parse_dotbracket(&doc("GC&GC", "((&))")).unwrap();
        assert_eq!(fs.structure(), &Structure::new(4, [(1, 4), (2, 3)], Some(2)).unwrap());
        assert_eq!(serialize(&fs).unwrap(), doc("GC&GC", "((&))"));
    }

    #[test]
    fn headers_comments_and_wrapped_sequence() {
        let text = "> hairpin\n# note\nGGAA\nCC\n((..))\n";
        let fs = parse_dotbracket(text).unwrap();
        assert_eq!(fs.len(), 6);
    }

    #[test]
    fn round_trip_canonical() {
        for (seq, st) in [
            ("GGAACC", "((..))"),
            ("ACGU", "([)]"),
            ("ACGUACGUAC", "([{)]}(.)."),
            ("ACGUACGU", "([{<)]}>"),
            ("ACGUACGUAC", "([{<A)]}>a"),
        ] {
            let text = doc(seq, st);
            assert_eq!(serialize(&parse_dotbracket(&text).unwrap()).unwrap(), text);
        }
    }

    #[test]
    fn normalizes_layers() {
        let fs = parse_dotbracket(&doc("ACGU", "[(])")).unwrap();
        assert_eq!(serialize(&fs).unwrap(), doc("ACGU", "([)]"));
        let fs = parse_dotbracket(&doc("GGAACC", "[[..]]")).unwrap();
        assert_eq!(serialize(&fs).unwrap(), doc("GGAACC", "((..))"));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(
            parse_dotbracket(&doc("GAC", "(.))")),
            Err(DotBracketError::LengthMismatch {
                line: 2,
                sequence: 3,
                structure: 4
            })
        );
        assert_eq!(
            parse_dotbracket(&doc("GAC", "(.)")).map(|f| f.len()),
            Ok(3)
        );
        assert_eq!(
            parse_dotbracket(&doc("GACU", "(.))")),
            Err(DotBracketError::Unbalanced {
                line: 2,
                column: 4,
                symbol: ')'
            })
        );
        assert_eq!(
            parse_dotbracket(&doc("GACU", "((.)")),
            Err(DotBracketError::Unbalanced {
                line: 2,
                column: 1,
                symbol: '('
            })
        );
        assert_eq!(
            parse_dotbracket(&doc("GACU", "(.?)")),
            Err(DotBracketError::UnknownSymbol {
                line: 2,
                column: 3,
                symbol: '?'
            })
        );
        assert!(matches!(
            parse_dotbracket(&doc("GA&CU", "((.))")),
            Err(DotBracketError::BadGap { line: 1, column: 3, .. })
        ));
        assert_eq!(parse_dotbracket("((..))\n"), Err(DotBracketError::Missing));
    }

    #[test]
    fn alignment_rendering() {
        let s = Structure::new(4, [(1, 4)], None).unwrap();
        let a = Alignment::new(
            s,
            vec![Some('G'), None, None, Some('C')],
            vec![Some('G'), Some('A'), Some('A'), Some('C')],
        )
        .unwrap();
        assert_eq!(
            serialize_alignment(&a).unwrap(),
            "(..)\nG--C\n|  |\nGAAC\n"
        );
    }
}
