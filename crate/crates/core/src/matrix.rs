//! Transition matrices for one-sided topological Markov shifts.
//!
//! A valid matrix is square over {0,1}, irreducible (every state reaches
//! every state), and not a permutation matrix. Symbols are 1-based
//! throughout, matching the usual indexing of shift spaces.

use thiserror::Error;

use crate::linalg::{self, IMat};
use crate::point::Word;

/// A symbol of the alphabet, in `1..=n`.
pub type Symbol = u8;

/// Errors raised when constructing a [`TransitionMatrix`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix must be square with size between 2 and 255, got {rows} rows")]
    InvalidShape { rows: usize },
    #[error("row {row} has length {len}, expected {expected}")]
    RaggedRow { row: usize, len: usize, expected: usize },
    #[error("entry ({row},{col}) is {value}, entries must be 0 or 1")]
    InvalidEntry { row: usize, col: usize, value: u8 },
    #[error("{kind} {index} has no 1s")]
    ZeroRowOrColumn { kind: RowOrColumn, index: usize },
    #[error("matrix is a permutation matrix")]
    IsPermutation,
    #[error("matrix is not irreducible (state {to} unreachable from {from})")]
    NotIrreducible { from: Symbol, to: Symbol },
}

/// Which axis a [`MatrixError::ZeroRowOrColumn`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowOrColumn {
    Row,
    Column,
}

impl std::fmt::Display for RowOrColumn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RowOrColumn::Row => write!(f, "row"),
            RowOrColumn::Column => write!(f, "column"),
        }
    }
}

/// An irreducible, non-permutation 0/1 transition matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    n: usize,
    rows: Vec<Vec<bool>>,
}

impl TransitionMatrix {
    /// Validates and wraps a matrix given as rows of 0/1 entries.
    pub fn from_rows(entries: Vec<Vec<u8>>) -> Result<Self, MatrixError> {
        let n = entries.len();
        if !(2..=255).contains(&n) {
            return Err(MatrixError::InvalidShape { rows: n });
        }
        let mut rows = Vec::with_capacity(n);
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::RaggedRow {
                    row: i + 1,
                    len: row.len(),
                    expected: n,
                });
            }
            let mut r = Vec::with_capacity(n);
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => r.push(false),
                    1 => r.push(true),
                    _ => {
                        return Err(MatrixError::InvalidEntry {
                            row: i + 1,
                            col: j + 1,
                            value: v,
                        })
                    }
                }
            }
            rows.push(r);
        }
        let m = TransitionMatrix { n, rows };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<(), MatrixError> {
        let n = self.n;
        for i in 0..n {
            if self.rows[i].iter().all(|&b| !b) {
                return Err(MatrixError::ZeroRowOrColumn {
                    kind: RowOrColumn::Row,
                    index: i + 1,
                });
            }
        }
        for j in 0..n {
            if (0..n).all(|i| !self.rows[i][j]) {
                return Err(MatrixError::ZeroRowOrColumn {
                    kind: RowOrColumn::Column,
                    index: j + 1,
                });
            }
        }
        let rows_single = (0..n).all(|i| self.rows[i].iter().filter(|&&b| b).count() == 1);
        let cols_single = (0..n).all(|j| (0..n).filter(|&i| self.rows[i][j]).count() == 1);
        if rows_single && cols_single {
            return Err(MatrixError::IsPermutation);
        }
        // Irreducibility: BFS from every state.
        for from in 0..n {
            let mut seen = vec![false; n];
            let mut queue = vec![from];
            while let Some(s) = queue.pop() {
                for t in 0..n {
                    if self.rows[s][t] && !seen[t] {
                        seen[t] = true;
                        queue.push(t);
                    }
                }
            }
            if let Some(to) = (0..n).find(|&t| !seen[t]) {
                return Err(MatrixError::NotIrreducible {
                    from: (from + 1) as Symbol,
                    to: (to + 1) as Symbol,
                });
            }
        }
        Ok(())
    }

    /// Alphabet size.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry lookup with 1-based symbols.
    pub fn entry(&self, from: Symbol, to: Symbol) -> bool {
        self.rows[from as usize - 1][to as usize - 1]
    }

    /// The row of a symbol, i.e. its follower set as a boolean mask.
    pub fn row(&self, sym: Symbol) -> &[bool] {
        &self.rows[sym as usize - 1]
    }

    /// True when two symbols have identical rows (equal follower sets).
    pub fn rows_equal(&self, a: Symbol, b: Symbol) -> bool {
        self.row(a) == self.row(b)
    }

    /// Symbols that may follow `sym`, in increasing order.
    pub fn followers(&self, sym: Symbol) -> Vec<Symbol> {
        self.row(sym)
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(j, _)| (j + 1) as Symbol)
            .collect()
    }

    /// All symbols `1..=n`.
    pub fn symbols(&self) -> Vec<Symbol> {
        (1..=self.n as u8).collect()
    }

    /// Is a finite symbol sequence admissible (in-range, each step allowed)?
    pub fn is_admissible(&self, syms: &[Symbol]) -> bool {
        if syms
            .iter()
            .any(|&s| s == 0 || s as usize > self.n)
        {
            return false;
        }
        syms.windows(2).all(|w| self.entry(w[0], w[1]))
    }

    /// All admissible words of exactly `len` symbols, in lexicographic order.
    /// `len == 0` yields the single empty word.
    pub fn admissible_words(&self, len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        let mut cur: Vec<Symbol> = Vec::with_capacity(len);
        self.words_rec(len, &mut cur, &mut out);
        out
    }

    fn words_rec(&self, len: usize, cur: &mut Vec<Symbol>, out: &mut Vec<Word>) {
        if cur.len() == len {
            out.push(Word::from_raw(cur.clone()));
            return;
        }
        let choices: Vec<Symbol> = match cur.last() {
            None => self.symbols(),
            Some(&s) => self.followers(s),
        };
        for a in choices {
            cur.push(a);
            self.words_rec(len, cur, out);
            cur.pop();
        }
    }

    /// Representatives of the primitive periodic orbits of length up to
    /// `max_len`. Each orbit is reported once, as the lexicographically least
    /// rotation of its cycle word, ordered by (length, word).
    pub fn periodic_orbits(&self, max_len: usize) -> Vec<Word> {
        let mut out = Vec::new();
        for len in 1..=max_len {
            for w in self.admissible_words(len) {
                let syms = w.as_slice();
                if !self.entry(syms[len - 1], syms[0]) {
                    continue;
                }
                if !is_primitive(syms) || !is_least_rotation(syms) {
                    continue;
                }
                out.push(w);
            }
        }
        out
    }

    /// The matrix as `i128` rows, for the invariant computations.
    pub fn as_imat(&self) -> IMat {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&b| i128::from(b)).collect())
            .collect()
    }

    /// Trace of the `k`-th power; counts points of period dividing `k`.
    pub fn trace_of_power(&self, k: usize) -> i128 {
        let p = linalg::pow(&self.as_imat(), k);
        (0..self.n).map(|i| p[i][i]).sum()
    }
}

fn is_primitive(w: &[Symbol]) -> bool {
    let n = w.len();
    for p in 1..n {
        if n % p == 0 && w.iter().zip(w.iter().cycle().skip(p)).all(|(a, b)| a == b) {
            return false;
        }
    }
    true
}

fn is_least_rotation(w: &[Symbol]) -> bool {
    let n = w.len();
    let doubled: Vec<Symbol> = w.iter().chain(w.iter()).copied().collect();
    (1..n).all(|r| w <= &doubled[r..r + n])
}
