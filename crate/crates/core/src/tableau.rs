//! The continuous full group of a Markov shift, as prefix-exchange tableaux.
//!
//! An element is a finite list of pairs `(source, target)`: the homeomorphism
//! sends `source·y` to `target·y`. Sources and targets each form a complete
//! prefix code, and each pair's end symbols have equal follower rows, which is
//! exactly what makes the exchange a homeomorphism. Elements are kept in a
//! canonical, maximally merged form so that structural equality is pointwise
//! equality.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use thiserror::Error;

use crate::func::LocallyConstantZFunction;
use crate::matrix::{Symbol, TransitionMatrix};
use crate::point::{UltimatelyPeriodicPoint, Word};

/// Violations of the tableau invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableauError {
    #[error("tableau has no pairs")]
    Empty,
    #[error("inadmissible word in tableau: {0:?}")]
    InadmissibleWord(Vec<Symbol>),
    #[error("duplicate source {0:?}")]
    DuplicateSource(Vec<Symbol>),
    #[error("duplicate target {0:?}")]
    DuplicateTarget(Vec<Symbol>),
    #[error("completeness violated: sources overlap ({0:?} is a prefix of {1:?})")]
    SourcesOverlap(Vec<Symbol>, Vec<Symbol>),
    #[error("completeness violated: targets overlap ({0:?} is a prefix of {1:?})")]
    TargetsOverlap(Vec<Symbol>, Vec<Symbol>),
    #[error("completeness violated: no source is a prefix of {0:?}")]
    SourcesIncomplete(Vec<Symbol>),
    #[error("completeness violated: no target is a prefix of {0:?}")]
    TargetsIncomplete(Vec<Symbol>),
    #[error("follower-row mismatch between source {0:?} and target {1:?}")]
    FollowerMismatch(Vec<Symbol>, Vec<Symbol>),
}

/// An element of the continuous full group, in canonical form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableauElement {
    matrix: TransitionMatrix,
    /// Sorted by source; maximally merged.
    pairs: Vec<(Word, Word)>,
}

/// The follower row of a finite word: which symbols may come next.
/// The empty word allows every symbol.
fn follower_row(w: &[Symbol], m: &TransitionMatrix) -> Vec<bool> {
    match w.last() {
        None => vec![true; m.n()],
        Some(&a) => m.row(a).to_vec(),
    }
}

impl TableauElement {
    /// Validates the pairs and stores the canonical (maximally merged) form.
    pub fn new(
        pairs: Vec<(Word, Word)>,
        m: &TransitionMatrix,
    ) -> Result<Self, TableauError> {
        if pairs.is_empty() {
            return Err(TableauError::Empty);
        }
        for (s, t) in &pairs {
            for w in [s, t] {
                if !m.is_admissible(w) {
                    return Err(TableauError::InadmissibleWord(w.as_slice().to_vec()));
                }
            }
            if follower_row(s, m) != follower_row(t, m) {
                return Err(TableauError::FollowerMismatch(
                    s.as_slice().to_vec(),
                    t.as_slice().to_vec(),
                ));
            }
        }
        check_prefix_code(pairs.iter().map(|(s, _)| s), m, true)?;
        check_prefix_code(pairs.iter().map(|(_, t)| t), m, false)?;
        let mut sorted = pairs;
        sorted.sort();
        let canonical = merge_fixpoint(sorted, m);
        Ok(TableauElement {
            matrix: m.clone(),
            pairs: canonical,
        })
    }

    /// The identity element, canonical form `{(ε, ε)}`.
    pub fn identity(m: &TransitionMatrix) -> Self {
        TableauElement {
            matrix: m.clone(),
            pairs: vec![(Word::empty(), Word::empty())],
        }
    }

    pub fn pairs(&self) -> &[(Word, Word)] {
        &self.pairs
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }

    fn max_source_len(&self) -> usize {
        self.pairs.iter().map(|(s, _)| s.len()).max().unwrap_or(0)
    }

    fn pair_for(&self, syms: &[Symbol]) -> &(Word, Word) {
        self.pairs
            .iter()
            .find(|(s, _)| s.is_prefix_of(syms))
            .expect("complete prefix code covers every admissible word")
    }

    /// Applies the prefix exchange to a point.
    pub fn apply(&self, p: &UltimatelyPeriodicPoint) -> UltimatelyPeriodicPoint {
        let head = p.expand(self.max_source_len());
        let (s, t) = self.pair_for(&head);
        p.shift_by(s.len())
            .prepend(t, &self.matrix)
            .expect("equal follower rows make the exchanged junction admissible")
    }

    /// The composition `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &TableauElement) -> TableauElement {
        assert_eq!(
            self.matrix, other.matrix,
            "composition requires elements of the same full group"
        );
        let depth = self.max_source_len();
        // Refine other's pairs until each target reaches a source of self,
        // then rewrite that prefix.
        let mut queue: Vec<(Word, Word)> = other.pairs.clone();
        let mut resolved: Vec<(Word, Word)> = Vec::new();
        while let Some((s, t)) = queue.pop() {
            if t.len() >= depth || self.pairs.iter().any(|(u, _)| u.is_prefix_of(&t)) {
                let (u, v) = self.pair_for(&pad(&t, depth, &self.matrix));
                let mut target = v.as_slice().to_vec();
                target.extend_from_slice(&t[u.len()..]);
                resolved.push((s, Word::from_raw(target)));
            } else {
                for a in self.matrix.symbols() {
                    // Follower rows of s and t agree, so extending both by the
                    // same symbol keeps the pair admissible or drops it.
                    if follower_row(&t, &self.matrix)[(a - 1) as usize] {
                        let mut s2 = s.as_slice().to_vec();
                        let mut t2 = t.as_slice().to_vec();
                        s2.push(a);
                        t2.push(a);
                        queue.push((Word::from_raw(s2), Word::from_raw(t2)));
                    }
                }
            }
        }
        resolved.sort();
        TableauElement {
            matrix: self.matrix.clone(),
            pairs: merge_fixpoint(resolved, &self.matrix),
        }
    }

    /// The inverse element: all pairs swapped.
    pub fn invert(&self) -> TableauElement {
        let mut pairs: Vec<(Word, Word)> = self
            .pairs
            .iter()
            .map(|(s, t)| (t.clone(), s.clone()))
            .collect();
        pairs.sort();
        TableauElement {
            matrix: self.matrix.clone(),
            pairs: merge_fixpoint(pairs, &self.matrix),
        }
    }

    /// Pointwise equality; canonical forms make this structural.
    pub fn equal(&self, other: &TableauElement) -> bool {
        self == other
    }

    /// The canonical cocycle: on the cylinder of `source` its value is
    /// `|source| - |target|`.
    pub fn cocycle(&self) -> LocallyConstantZFunction {
        let depth = self.max_source_len();
        if depth == 0 {
            return LocallyConstantZFunction::constant(0);
        }
        let mut values = BTreeMap::new();
        for w in self.matrix.admissible_words(depth) {
            let (s, t) = self.pair_for(&w);
            values.insert(w.as_slice().to_vec(), s.len() as i64 - t.len() as i64);
        }
        LocallyConstantZFunction::from_table(depth, values, &self.matrix)
            .expect("cocycle table covers all admissible words")
    }

    /// Membership in the AF subgroup: `Some(K)` with the least `K` such that
    /// `σ^K ∘ τ = σ^K`, or `None` when the cocycle is not identically zero.
    pub fn is_af(&self) -> Option<usize> {
        if self.pairs.iter().any(|(s, t)| s.len() != t.len()) {
            return None;
        }
        let k = self
            .pairs
            .iter()
            .map(|(s, t)| s.len() - common_suffix_len(s, t))
            .max()
            .unwrap_or(0);
        Some(k)
    }

    /// The pullback `f ∘ τ` of a locally constant function through `self`.
    pub fn pull_back(&self, f: &LocallyConstantZFunction) -> LocallyConstantZFunction {
        let m = &self.matrix;
        let depth = self
            .pairs
            .iter()
            .map(|(s, t)| s.len() + f.depth().saturating_sub(t.len()))
            .max()
            .unwrap_or(0);
        if depth == 0 {
            return LocallyConstantZFunction::constant(match f {
                LocallyConstantZFunction::Constant(c) => *c,
                _ => unreachable!("depth 0 forces identity tableau and constant f"),
            });
        }
        let mut values = BTreeMap::new();
        for w in m.admissible_words(depth) {
            let (s, t) = self.pair_for(&w);
            let mut image = t.as_slice().to_vec();
            image.extend_from_slice(&w[s.len()..]);
            values.insert(w.as_slice().to_vec(), f.evaluate_word(&image));
        }
        LocallyConstantZFunction::from_table(depth, values, m)
            .expect("pullback table covers all admissible words")
    }

    /// Checks the cocycle composition identity
    /// `c(τ1∘τ2) = c(τ1)∘τ2 + c(τ2)` as a table identity.
    pub fn cocycle_composition_identity_check(&self, other: &TableauElement) -> bool {
        let m = &self.matrix;
        let lhs = self.compose(other).cocycle();
        let rhs = other.pull_back(&self.cocycle()).add(&other.cocycle(), m);
        lhs.equal_as_functions(&rhs, m)
    }
}

/// Extends a word to length `len` with admissible symbols (any choice works
/// for locating the covering source cylinder).
fn pad(w: &Word, len: usize, m: &TransitionMatrix) -> Vec<Symbol> {
    let mut out = w.as_slice().to_vec();
    while out.len() < len {
        let next = match out.last() {
            None => 1,
            Some(&a) => m.followers(a)[0],
        };
        out.push(next);
    }
    out
}

fn common_suffix_len(a: &[Symbol], b: &[Symbol]) -> usize {
    a.iter()
        .rev()
        .zip(b.iter().rev())
        .take_while(|(x, y)| x == y)
        .count()
}

/// Prefix-freeness and completeness for one side of the tableau.
fn check_prefix_code<'a>(
    words: impl Iterator<Item = &'a Word>,
    m: &TransitionMatrix,
    sources: bool,
) -> Result<(), TableauError> {
    let mut sorted: Vec<&Word> = words.collect();
    sorted.sort();
    for pair in sorted.windows(2) {
        if pair[0] == pair[1] {
            let w = pair[0].as_slice().to_vec();
            return Err(if sources {
                TableauError::DuplicateSource(w)
            } else {
                TableauError::DuplicateTarget(w)
            });
        }
        // In sorted order a prefix violation always shows up adjacently.
        if pair[0].is_prefix_of(pair[1]) {
            let (a, b) = (pair[0].as_slice().to_vec(), pair[1].as_slice().to_vec());
            return Err(if sources {
                TableauError::SourcesOverlap(a, b)
            } else {
                TableauError::TargetsOverlap(a, b)
            });
        }
    }
    let max_len = sorted.iter().map(|w| w.len()).max().unwrap_or(0);
    for w in m.admissible_words(max_len) {
        if !sorted.iter().any(|s| s.is_prefix_of(&w)) {
            let w = w.as_slice().to_vec();
            return Err(if sources {
                TableauError::SourcesIncomplete(w)
            } else {
                TableauError::TargetsIncomplete(w)
            });
        }
    }
    Ok(())
}

/// Greedily merges sibling pairs `(w·a, v·a)` back into `(w, v)` until no
/// merge applies. The merge order does not matter: distinct applicable merges
/// touch disjoint sibling families, so the rewriting is confluent.
fn merge_fixpoint(mut pairs: Vec<(Word, Word)>, m: &TransitionMatrix) -> Vec<(Word, Word)> {
    loop {
        let set: BTreeMap<Word, Word> = pairs.iter().cloned().collect();
        let mut merged = false;
        let mut candidates: BTreeSet<(Word, Word)> = BTreeSet::new();
        for (s, t) in &pairs {
            if s.is_empty() || t.is_empty() || s.last() != t.last() {
                continue;
            }
            let w = Word::from_raw(s[..s.len() - 1].to_vec());
            let v = Word::from_raw(t[..t.len() - 1].to_vec());
            if follower_row(&w, m) != follower_row(&v, m) {
                continue;
            }
            candidates.insert((w, v));
        }
        for (w, v) in candidates {
            let fam: Vec<Symbol> = m
                .symbols()
                .into_iter()
                .filter(|&a| follower_row(&w, m)[(a - 1) as usize])
                .collect();
            let all_present = fam.iter().all(|&a| {
                let mut sw = w.as_slice().to_vec();
                sw.push(a);
                let mut tv = v.as_slice().to_vec();
                tv.push(a);
                set.get(&Word::from_raw(sw)) == Some(&Word::from_raw(tv))
            });
            if !all_present {
                continue;
            }
            pairs.retain(|(s, _)| !(w.is_prefix_of(s) && s.len() == w.len() + 1));
            pairs.push((w, v));
            pairs.sort();
            merged = true;
            break;
        }
        if !merged {
            return pairs;
        }
    }
}

/// All transpositions of two distinct depth-`d` cylinders whose end symbols
/// have equal follower rows (identity elsewhere).
pub fn af_transpositions(m: &TransitionMatrix, d: usize) -> Vec<TableauElement> {
    assert!(d >= 1, "transposition depth must be positive");
    let words = m.admissible_words(d);
    let mut out = Vec::new();
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            let (u, v) = (&words[i], &words[j]);
            if !m.rows_equal(u.last().unwrap(), v.last().unwrap()) {
                continue;
            }
            let pairs: Vec<(Word, Word)> = words
                .iter()
                .map(|w| {
                    if w == u {
                        (u.clone(), v.clone())
                    } else if w == v {
                        (v.clone(), u.clone())
                    } else {
                        (w.clone(), w.clone())
                    }
                })
                .collect();
            out.push(TableauElement::new(pairs, m).expect("transpositions are valid"));
        }
    }
    out
}

/// Exhaustively enumerates the (canonical) tableaux whose source and target
/// words all have length at most `max_len`. Intended as a test generator;
/// feasible for small alphabets and depths.
pub fn enumerate_tableaux(m: &TransitionMatrix, max_len: usize) -> Vec<TableauElement> {
    let cuts = enumerate_cuts(m, max_len);
    let mut seen: BTreeSet<Vec<(Word, Word)>> = BTreeSet::new();
    let mut out = Vec::new();
    for src in &cuts {
        for dst in &cuts {
            if src.len() != dst.len() {
                continue;
            }
            for perm in dst.iter().permutations(dst.len()) {
                let ok = src
                    .iter()
                    .zip(&perm)
                    .all(|(s, t)| follower_row(s, m) == follower_row(t, m));
                if !ok {
                    continue;
                }
                let pairs: Vec<(Word, Word)> = src
                    .iter()
                    .cloned()
                    .zip(perm.iter().map(|t| (*t).clone()))
                    .collect();
                if let Ok(el) = TableauElement::new(pairs, m) {
                    if seen.insert(el.pairs.clone()) {
                        out.push(el);
                    }
                }
            }
        }
    }
    out
}

/// All complete prefix codes ("cuts") with words of length at most `max_len`,
/// including the trivial cut `{ε}`.
fn enumerate_cuts(m: &TransitionMatrix, max_len: usize) -> Vec<Vec<Word>> {
    fn below(prefix: &[Symbol], m: &TransitionMatrix, max_len: usize) -> Vec<Vec<Word>> {
        let mut cuts = vec![vec![Word::from_raw(prefix.to_vec())]];
        if prefix.len() < max_len {
            let next: Vec<Symbol> = match prefix.last() {
                None => m.symbols(),
                Some(&a) => m.followers(a),
            };
            let child_cuts: Vec<Vec<Vec<Word>>> = next
                .iter()
                .map(|&a| {
                    let mut p = prefix.to_vec();
                    p.push(a);
                    below(&p, m, max_len)
                })
                .collect();
            for combo in child_cuts.into_iter().multi_cartesian_product() {
                cuts.push(combo.into_iter().flatten().collect());
            }
        }
        cuts
    }
    below(&[], m, max_len)
}
