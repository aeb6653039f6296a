//! Plain-text formats for matrices, words, tableaux, and transducers, with
//! line-numbered parse errors. All renderers are deterministic and round-trip
//! through their parsers.
//!
//! Matrix:
//! ```text
//! matrix n=3
//! 110
//! 101
//! 101
//! ```
//!
//! Tableau (the matrix is supplied separately):
//! ```text
//! tableau n=2
//! 1 -> 11
//! 21 -> 12
//! 22 -> 2
//! ```
//!
//! Transducer (matrix files are referenced by path in the header and loaded
//! by the caller):
//! ```text
//! transducer A=a2.txt B=a2.txt states=3 initial=0
//! 0 1 -> 1 1
//! 0 2 -> 2 2
//! ```
//!
//! Words use digit strings when the alphabet fits in one digit (n ≤ 9) and
//! comma-separated numbers otherwise; `-` is the empty word. Blank lines and
//! `#` comments are ignored everywhere.

use thiserror::Error;

use crate::matrix::{Symbol, TransitionMatrix};
use crate::point::Word;
use crate::tableau::TableauElement;
use crate::transducer::SequentialTransducer;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based line number in the input text.
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// Content lines with their 1-based numbers; blanks and comments dropped.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

pub fn parse_matrix(text: &str) -> Result<TransitionMatrix, ParseError> {
    let lines = content_lines(text);
    let Some(&(hline, header)) = lines.first() else {
        return err(1, "empty input, expected a 'matrix n=<N>' header");
    };
    let n: usize = match header.strip_prefix("matrix n=") {
        Some(rest) => rest
            .trim()
            .parse()
            .map_err(|_| ParseError {
                line: hline,
                message: format!("invalid size in matrix header: {rest:?}"),
            })?,
        None => return err(hline, format!("expected 'matrix n=<N>', got {header:?}")),
    };
    let rows = &lines[1..];
    if rows.len() != n {
        return err(hline, format!("expected {n} rows, got {}", rows.len()));
    }
    let mut entries = Vec::with_capacity(n);
    for &(lno, row) in rows {
        let digits: Vec<u8> = if row.chars().all(|c| c == '0' || c == '1') {
            row.bytes().map(|b| b - b'0').collect()
        } else {
            let mut out = Vec::new();
            for tok in row.split([' ', ',', '\t']).filter(|t| !t.is_empty()) {
                match tok {
                    "0" => out.push(0),
                    "1" => out.push(1),
                    _ => return err(lno, format!("matrix entries must be 0 or 1, got {tok:?}")),
                }
            }
            out
        };
        if digits.len() != n {
            return err(lno, format!("row has {} entries, expected {n}", digits.len()));
        }
        entries.push(digits);
    }
    TransitionMatrix::from_rows(entries).map_err(|e| ParseError {
        line: hline,
        message: e.to_string(),
    })
}

pub fn render_matrix(m: &TransitionMatrix) -> String {
    let n = m.n();
    let mut out = format!("matrix n={n}\n");
    for i in 1..=n {
        for j in 1..=n {
            out.push(if m.entry(i as Symbol, j as Symbol) { '1' } else { '0' });
        }
        out.push('\n');
    }
    out
}

/// Parses a word against the matrix's alphabet; `-` is the empty word.
pub fn parse_word(s: &str, m: &TransitionMatrix) -> Result<Word, String> {
    let s = s.trim();
    if s == "-" {
        return Ok(Word::empty());
    }
    let symbols: Vec<Symbol> = if s.contains(',') {
        s.split(',')
            .map(|t| t.trim().parse::<Symbol>().map_err(|_| format!("bad symbol {t:?}")))
            .collect::<Result<_, _>>()?
    } else if m.n() <= 9 {
        s.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as Symbol)
                    .ok_or_else(|| format!("bad symbol {c:?}"))
            })
            .collect::<Result<_, _>>()?
    } else {
        return Err(format!(
            "alphabet has {} symbols; separate them with commas",
            m.n()
        ));
    };
    Word::new(symbols, m).map_err(|e| e.to_string())
}

pub fn render_word(w: &[Symbol], n: usize) -> String {
    if w.is_empty() {
        return "-".into();
    }
    if n <= 9 {
        w.iter().map(|&s| char::from(b'0' + s)).collect()
    } else {
        w.iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

pub fn parse_tableau(text: &str, m: &TransitionMatrix) -> Result<TableauElement, ParseError> {
    let lines = content_lines(text);
    let Some(&(hline, header)) = lines.first() else {
        return err(1, "empty input, expected a 'tableau n=<N>' header");
    };
    let n: usize = match header.strip_prefix("tableau n=") {
        Some(rest) => rest.trim().parse().map_err(|_| ParseError {
            line: hline,
            message: format!("invalid size in tableau header: {rest:?}"),
        })?,
        None => return err(hline, format!("expected 'tableau n=<N>', got {header:?}")),
    };
    if n != m.n() {
        return err(
            hline,
            format!("tableau is over an alphabet of {n} symbols, the matrix has {}", m.n()),
        );
    }
    let mut pairs = Vec::new();
    for &(lno, line) in &lines[1..] {
        let Some((src, dst)) = line.split_once("->") else {
            return err(lno, format!("expected '<source> -> <target>', got {line:?}"));
        };
        let s = parse_word(src, m).map_err(|msg| ParseError { line: lno, message: msg })?;
        let t = parse_word(dst, m).map_err(|msg| ParseError { line: lno, message: msg })?;
        pairs.push((s, t));
    }
    TableauElement::new(pairs, m).map_err(|e| ParseError {
        line: hline,
        message: e.to_string(),
    })
}

pub fn render_tableau(t: &TableauElement) -> String {
    let n = t.matrix().n();
    let mut out = format!("tableau n={n}\n");
    for (s, d) in t.pairs() {
        out.push_str(&render_word(s, n));
        out.push_str(" -> ");
        out.push_str(&render_word(d, n));
        out.push('\n');
    }
    out
}

/// The header of a transducer file: matrix file references plus shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransducerHeader {
    pub source_path: String,
    pub target_path: String,
    pub states: usize,
    pub initial: usize,
}

pub fn parse_transducer_header(text: &str) -> Result<TransducerHeader, ParseError> {
    let lines = content_lines(text);
    let Some(&(hline, header)) = lines.first() else {
        return err(1, "empty input, expected a 'transducer ...' header");
    };
    let Some(rest) = header.strip_prefix("transducer ") else {
        return err(
            hline,
            format!("expected 'transducer A=<file> B=<file> states=<k> initial=<q>', got {header:?}"),
        );
    };
    let mut source_path = None;
    let mut target_path = None;
    let mut states = None;
    let mut initial = None;
    for field in rest.split_whitespace() {
        let Some((key, value)) = field.split_once('=') else {
            return err(hline, format!("malformed header field {field:?}"));
        };
        match key {
            "A" => source_path = Some(value.to_string()),
            "B" => target_path = Some(value.to_string()),
            "states" => {
                states = Some(value.parse().map_err(|_| ParseError {
                    line: hline,
                    message: format!("invalid state count {value:?}"),
                })?)
            }
            "initial" => {
                initial = Some(value.parse().map_err(|_| ParseError {
                    line: hline,
                    message: format!("invalid initial state {value:?}"),
                })?)
            }
            _ => return err(hline, format!("unknown header field {key:?}")),
        }
    }
    match (source_path, target_path, states, initial) {
        (Some(source_path), Some(target_path), Some(states), Some(initial)) => {
            Ok(TransducerHeader {
                source_path,
                target_path,
                states,
                initial,
            })
        }
        _ => err(hline, "header must set A=, B=, states=, and initial="),
    }
}

/// Parses the edge list against the already-loaded matrices. Validation
/// errors from the machine constructor are reported on the header line.
pub fn parse_transducer(
    text: &str,
    source: &TransitionMatrix,
    target: &TransitionMatrix,
) -> Result<SequentialTransducer, ParseError> {
    let lines = content_lines(text);
    let header = parse_transducer_header(text)?;
    let hline = lines[0].0;
    let mut edges = Vec::new();
    for &(lno, line) in &lines[1..] {
        let Some((lhs, rhs)) = line.split_once("->") else {
            return err(lno, format!("expected '<q> <symbol> -> <q'> <output>', got {line:?}"));
        };
        let lparts: Vec<&str> = lhs.split_whitespace().collect();
        let [q, a] = lparts.as_slice() else {
            return err(lno, format!("expected '<q> <symbol>' before '->', got {lhs:?}"));
        };
        let rparts: Vec<&str> = rhs.split_whitespace().collect();
        let [q2, out] = rparts.as_slice() else {
            return err(lno, format!("expected '<q'> <output>' after '->', got {rhs:?}"));
        };
        let q: usize = q
            .parse()
            .map_err(|_| ParseError { line: lno, message: format!("invalid state {q:?}") })?;
        let a: Symbol = a
            .parse()
            .map_err(|_| ParseError { line: lno, message: format!("invalid symbol {a:?}") })?;
        let q2: usize = q2
            .parse()
            .map_err(|_| ParseError { line: lno, message: format!("invalid state {q2:?}") })?;
        let out = parse_word(out, target)
            .map_err(|msg| ParseError { line: lno, message: msg })?;
        edges.push((q, a, q2, out.as_slice().to_vec()));
    }
    SequentialTransducer::new(source, target, header.states, header.initial, edges).map_err(
        |e| ParseError {
            line: hline,
            message: e.to_string(),
        },
    )
}

/// Renders a transducer; the header carries the given matrix file names.
pub fn render_transducer(
    t: &SequentialTransducer,
    source_path: &str,
    target_path: &str,
) -> String {
    let mut out = format!(
        "transducer A={source_path} B={target_path} states={} initial={}\n",
        t.state_count(),
        t.initial()
    );
    let n = t.target().n();
    for (q, a, q2, w) in t.edges() {
        out.push_str(&format!("{q} {a} -> {q2} {}\n", render_word(&w, n)));
    }
    out
}

/// Renders a locally constant integer function as `word -> value` lines.
pub fn render_function(f: &crate::func::LocallyConstantZFunction, m: &TransitionMatrix) -> String {
    match f.as_constant() {
        Some(c) => format!("function constant {c}\n"),
        None => {
            let mut out = format!("function depth={}\n", f.depth());
            for (w, v) in f.table(m) {
                out.push_str(&format!("{} -> {v}\n", render_word(&w, m.n())));
            }
            out
        }
    }
}
