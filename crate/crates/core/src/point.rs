//! Finite words and ultimately periodic points of a shift space.
//!
//! An ultimately periodic point `u · c^∞` is stored in canonical form: the
//! cycle is primitive (not a proper power) and the preperiod is the shortest
//! possible. Two such points are equal as infinite sequences exactly when
//! their canonical forms are structurally equal.

use thiserror::Error;

use crate::matrix::{Symbol, TransitionMatrix};

/// Errors raised when building words or points.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointError {
    #[error("symbol {symbol} out of range 1..={n}")]
    SymbolOutOfRange { symbol: Symbol, n: usize },
    #[error("inadmissible step {from}->{to} at position {at}")]
    InadmissibleStep { at: usize, from: Symbol, to: Symbol },
    #[error("cycle must be nonempty")]
    EmptyCycle,
}

/// A finite admissible word over a shift's alphabet (possibly empty).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Symbol>);

impl Word {
    /// Validates symbols and adjacency against `m`.
    pub fn new(syms: Vec<Symbol>, m: &TransitionMatrix) -> Result<Self, PointError> {
        check_steps(&syms, m)?;
        Ok(Word(syms))
    }

    /// The empty word.
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Wraps symbols that are already known to be admissible.
    pub(crate) fn from_raw(syms: Vec<Symbol>) -> Self {
        Word(syms)
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Symbol> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Symbol> {
        self.0.last().copied()
    }

    /// Is `self` a prefix of `other`?
    pub fn is_prefix_of(&self, other: &[Symbol]) -> bool {
        other.len() >= self.len() && &other[..self.len()] == self.as_slice()
    }
}

impl std::ops::Deref for Word {
    type Target = [Symbol];
    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

fn check_steps(syms: &[Symbol], m: &TransitionMatrix) -> Result<(), PointError> {
    for &s in syms {
        if s == 0 || s as usize > m.n() {
            return Err(PointError::SymbolOutOfRange { symbol: s, n: m.n() });
        }
    }
    for (i, w) in syms.windows(2).enumerate() {
        if !m.entry(w[0], w[1]) {
            return Err(PointError::InadmissibleStep {
                at: i,
                from: w[0],
                to: w[1],
            });
        }
    }
    Ok(())
}

/// An ultimately periodic point `preperiod · cycle^∞` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UltimatelyPeriodicPoint {
    preperiod: Vec<Symbol>,
    cycle: Vec<Symbol>,
}

impl UltimatelyPeriodicPoint {
    /// Builds a point from any representation, validating admissibility of
    /// `preperiod · cycle` and `cycle · cycle`, then canonicalizing.
    pub fn new(
        preperiod: Vec<Symbol>,
        cycle: Vec<Symbol>,
        m: &TransitionMatrix,
    ) -> Result<Self, PointError> {
        if cycle.is_empty() {
            return Err(PointError::EmptyCycle);
        }
        let mut joined = preperiod.clone();
        joined.extend_from_slice(&cycle);
        check_steps(&joined, m)?;
        if !m.entry(*cycle.last().unwrap(), cycle[0]) {
            return Err(PointError::InadmissibleStep {
                at: preperiod.len() + cycle.len() - 1,
                from: *cycle.last().unwrap(),
                to: cycle[0],
            });
        }
        Ok(Self::canonicalize(preperiod, cycle))
    }

    fn canonicalize(mut preperiod: Vec<Symbol>, mut cycle: Vec<Symbol>) -> Self {
        // Reduce the cycle to its primitive root.
        let n = cycle.len();
        for p in 1..n {
            if n % p == 0
                && cycle
                    .iter()
                    .zip(cycle.iter().cycle().skip(p))
                    .all(|(a, b)| a == b)
            {
                cycle.truncate(p);
                break;
            }
        }
        // Shorten the preperiod: while its last symbol equals the cycle's
        // last symbol, absorb it by rotating the cycle right.
        while let Some(&last) = preperiod.last() {
            if last == *cycle.last().unwrap() {
                preperiod.pop();
                let tail = cycle.pop().unwrap();
                cycle.insert(0, tail);
            } else {
                break;
            }
        }
        UltimatelyPeriodicPoint { preperiod, cycle }
    }

    pub fn preperiod(&self) -> &[Symbol] {
        &self.preperiod
    }

    pub fn cycle(&self) -> &[Symbol] {
        &self.cycle
    }

    /// The primitive period of the tail.
    pub fn period(&self) -> usize {
        self.cycle.len()
    }

    /// The first `len` symbols of the point.
    pub fn expand(&self, len: usize) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(len);
        out.extend(self.preperiod.iter().copied().take(len));
        let mut i = 0;
        while out.len() < len {
            out.push(self.cycle[i % self.cycle.len()]);
            i += 1;
        }
        out
    }

    pub fn first_symbol(&self) -> Symbol {
        *self.preperiod.first().unwrap_or(&self.cycle[0])
    }

    /// The shifted point (first symbol dropped). Canonical form is preserved.
    pub fn shift(&self) -> Self {
        if self.preperiod.is_empty() {
            let mut cycle = self.cycle.clone();
            cycle.rotate_left(1);
            UltimatelyPeriodicPoint {
                preperiod: Vec::new(),
                cycle,
            }
        } else {
            UltimatelyPeriodicPoint {
                preperiod: self.preperiod[1..].to_vec(),
                cycle: self.cycle.clone(),
            }
        }
    }

    /// Applies `shift` `k` times.
    pub fn shift_by(&self, k: usize) -> Self {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.shift();
        }
        p
    }

    /// The point `w · self`, validated at the junction and canonicalized.
    pub fn prepend(&self, w: &[Symbol], m: &TransitionMatrix) -> Result<Self, PointError> {
        let mut pre = w.to_vec();
        pre.extend_from_slice(&self.preperiod);
        Self::new(pre, self.cycle.clone(), m)
    }

    /// Is the point purely periodic (empty preperiod)?
    pub fn is_periodic(&self) -> bool {
        self.preperiod.is_empty()
    }
}
