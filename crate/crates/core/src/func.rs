//! Locally constant integer-valued functions on a shift space.
//!
//! A function of depth `d` depends only on the first `d` symbols of a point
//! and is stored as a table over the admissible `d`-words. Depth-0 functions
//! are stored as a single constant so that constancy checks are O(1).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::matrix::{Symbol, TransitionMatrix};
use crate::point::{UltimatelyPeriodicPoint, Word};

/// Errors raised when building a function table.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FuncError {
    #[error("table keys do not match the admissible words of depth {depth}: {detail}")]
    BadKeys { depth: usize, detail: String },
}

/// A locally constant function `X_A -> Z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocallyConstantZFunction {
    /// Depth 0: a constant.
    Constant(i64),
    /// Depth >= 1: a full table over the admissible words of that depth.
    Table {
        depth: usize,
        values: BTreeMap<Vec<Symbol>, i64>,
    },
}

use LocallyConstantZFunction as Lcf;

impl LocallyConstantZFunction {
    /// The constant function.
    pub fn constant(c: i64) -> Self {
        Lcf::Constant(c)
    }

    /// Builds a depth-`d` table; the key set must be exactly the admissible
    /// `d`-words of `m`. Depth 0 collapses to a constant.
    pub fn from_table(
        depth: usize,
        values: BTreeMap<Vec<Symbol>, i64>,
        m: &TransitionMatrix,
    ) -> Result<Self, FuncError> {
        if depth == 0 {
            let c = values.get(&Vec::new()).copied().ok_or(FuncError::BadKeys {
                depth: 0,
                detail: "expected the single empty-word key".into(),
            })?;
            if values.len() != 1 {
                return Err(FuncError::BadKeys {
                    depth: 0,
                    detail: "depth 0 admits only the empty word".into(),
                });
            }
            return Ok(Lcf::Constant(c));
        }
        let expected: Vec<Vec<Symbol>> = m
            .admissible_words(depth)
            .into_iter()
            .map(|w| w.as_slice().to_vec())
            .collect();
        let keys: Vec<Vec<Symbol>> = values.keys().cloned().collect();
        if keys != expected {
            return Err(FuncError::BadKeys {
                depth,
                detail: format!("got {} keys, expected {}", keys.len(), expected.len()),
            });
        }
        Ok(Lcf::Table { depth, values })
    }

    pub fn depth(&self) -> usize {
        match self {
            Lcf::Constant(_) => 0,
            Lcf::Table { depth, .. } => *depth,
        }
    }

    /// Value at a point.
    pub fn evaluate(&self, p: &UltimatelyPeriodicPoint) -> i64 {
        match self {
            Lcf::Constant(c) => *c,
            Lcf::Table { depth, values } => {
                let key = p.expand(*depth);
                values[&key]
            }
        }
    }

    /// Value on the cylinder of a word with `len >= depth`.
    pub fn evaluate_word(&self, w: &[Symbol]) -> i64 {
        match self {
            Lcf::Constant(c) => *c,
            Lcf::Table { depth, values } => {
                assert!(w.len() >= *depth, "word shorter than function depth");
                values[&w[..*depth]]
            }
        }
    }

    /// The same function as a table of larger depth `d`.
    pub fn refine(&self, d: usize, m: &TransitionMatrix) -> Self {
        assert!(d >= self.depth(), "refinement cannot reduce depth");
        if d == self.depth() {
            return self.clone();
        }
        let mut values = BTreeMap::new();
        for w in m.admissible_words(d) {
            values.insert(w.as_slice().to_vec(), self.evaluate_word(&w));
        }
        Lcf::Table { depth: d, values }
    }

    /// The pullback `f ∘ σ`, one level deeper (constants are unchanged).
    pub fn compose_with_shift(&self, m: &TransitionMatrix) -> Self {
        match self {
            Lcf::Constant(c) => Lcf::Constant(*c),
            Lcf::Table { depth, .. } => {
                let mut values = BTreeMap::new();
                for w in m.admissible_words(depth + 1) {
                    values.insert(w.as_slice().to_vec(), self.evaluate_word(&w[1..]));
                }
                Lcf::Table {
                    depth: depth + 1,
                    values,
                }
            }
        }
    }

    fn zip(&self, other: &Self, m: &TransitionMatrix, op: impl Fn(i64, i64) -> i64) -> Self {
        if let (Lcf::Constant(a), Lcf::Constant(b)) = (self, other) {
            return Lcf::Constant(op(*a, *b));
        }
        let d = self.depth().max(other.depth());
        let mut values = BTreeMap::new();
        for w in m.admissible_words(d) {
            values.insert(
                w.as_slice().to_vec(),
                op(self.evaluate_word(&w), other.evaluate_word(&w)),
            );
        }
        Lcf::Table { depth: d, values }
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self, m: &TransitionMatrix) -> Self {
        self.zip(other, m, |a, b| a + b)
    }

    /// Pointwise difference.
    pub fn sub(&self, other: &Self, m: &TransitionMatrix) -> Self {
        self.zip(other, m, |a, b| a - b)
    }

    /// Semantic constancy check: `Some(c)` when every value equals `c`.
    pub fn as_constant(&self) -> Option<i64> {
        match self {
            Lcf::Constant(c) => Some(*c),
            Lcf::Table { values, .. } => {
                let mut it = values.values();
                let first = *it.next()?;
                it.all(|&v| v == first).then_some(first)
            }
        }
    }

    /// Equality as functions (tables compared after refining to the common
    /// depth).
    pub fn equal_as_functions(&self, other: &Self, m: &TransitionMatrix) -> bool {
        let d = self.depth().max(other.depth());
        m.admissible_words(d)
            .iter()
            .all(|w| self.evaluate_word(w) == other.evaluate_word(w))
    }

    /// Table access for rendering.
    pub fn table(&self, m: &TransitionMatrix) -> BTreeMap<Vec<Symbol>, i64> {
        match self {
            Lcf::Constant(c) => {
                let mut t = BTreeMap::new();
                t.insert(Vec::new(), *c);
                t
            }
            Lcf::Table { values, .. } => {
                let _ = m;
                values.clone()
            }
        }
    }
}

/// The cocycle sum `f^k(x) = Σ_{i<k} f(σ^i x)`.
pub fn cocycle_sum(f: &LocallyConstantZFunction, k: usize, p: &UltimatelyPeriodicPoint) -> i64 {
    if k == 0 {
        return 0;
    }
    match f {
        Lcf::Constant(c) => *c * k as i64,
        Lcf::Table { depth, values } => {
            let syms = p.expand(k - 1 + depth);
            (0..k).map(|i| values[&syms[i..i + depth]]).sum()
        }
    }
}

/// Result of the bounded coboundary decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoboundaryOutcome {
    /// `f - g = w - w∘σ` for the returned witness `w`.
    Yes { witness: LocallyConstantZFunction },
    /// A periodic orbit along which the orbit sums of `f` and `g` differ;
    /// the word is the orbit representative.
    No { orbit: Word },
    /// Neither a witness of depth <= max_depth nor an obstruction orbit of
    /// length <= max_depth was found.
    Unknown,
}

/// Semi-decides whether `f - g` is a coboundary `w - w∘σ` with `w` locally
/// constant of depth at most `max_depth`.
///
/// Witness depths are tried in increasing order (so a returned witness has
/// minimal depth); if none works, primitive periodic orbits of length up to
/// `max_depth` are scanned for an obstruction.
pub fn is_coboundary_equivalent(
    f: &LocallyConstantZFunction,
    g: &LocallyConstantZFunction,
    m: &TransitionMatrix,
    max_depth: usize,
) -> CoboundaryOutcome {
    for e in 0..=max_depth {
        if let Some(witness) = solve_witness(f, g, m, e) {
            return CoboundaryOutcome::Yes { witness };
        }
    }
    for orbit in m.periodic_orbits(max_depth) {
        let p = UltimatelyPeriodicPoint::new(vec![], orbit.as_slice().to_vec(), m)
            .expect("orbit representatives are admissible");
        let k = orbit.len();
        if cocycle_sum(f, k, &p) != cocycle_sum(g, k, &p) {
            return CoboundaryOutcome::No { orbit };
        }
    }
    CoboundaryOutcome::Unknown
}

/// Tries to solve `w(u[..e]) - w(u[1..1+e]) = (f-g)(u)` over all admissible
/// words `u` of depth `max(f.depth, g.depth, e+1)`. This is a potential
/// assignment problem on the depth-`e` de Bruijn graph of the shift.
fn solve_witness(
    f: &LocallyConstantZFunction,
    g: &LocallyConstantZFunction,
    m: &TransitionMatrix,
    e: usize,
) -> Option<LocallyConstantZFunction> {
    let d = f.depth().max(g.depth()).max(e + 1);
    let nodes: Vec<Vec<Symbol>> = m
        .admissible_words(e)
        .into_iter()
        .map(|w| w.as_slice().to_vec())
        .collect();
    let index: BTreeMap<Vec<Symbol>, usize> =
        nodes.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();

    // Constraint edges x[a] - x[b] = c.
    let mut edges: Vec<(usize, usize, i64)> = Vec::new();
    for u in m.admissible_words(d) {
        let c = f.evaluate_word(&u) - g.evaluate_word(&u);
        let a = index[&u[..e]];
        let b = index[&u[1..1 + e]];
        edges.push((a, b, c));
    }
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); nodes.len()];
    for &(a, b, c) in &edges {
        // x[a] = x[b] + c in both directions.
        adj[a].push((b, c));
        adj[b].push((a, -c));
    }
    let mut pot: Vec<Option<i64>> = vec![None; nodes.len()];
    for start in 0..nodes.len() {
        if pot[start].is_some() {
            continue;
        }
        pot[start] = Some(0);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let pv = pot[v].unwrap();
            for &(w, c) in &adj[v] {
                match pot[w] {
                    None => {
                        pot[w] = Some(pv - c);
                        queue.push_back(w);
                    }
                    Some(pw) => {
                        if pv - pw != c {
                            return None;
                        }
                    }
                }
            }
        }
    }
    // Every parallel constraint must hold exactly.
    for &(a, b, c) in &edges {
        if pot[a].unwrap() - pot[b].unwrap() != c {
            return None;
        }
    }
    // Normalize: the lexicographically first word gets value 0.
    let base = pot[0].unwrap();
    let mut values = BTreeMap::new();
    for (i, w) in nodes.iter().enumerate() {
        values.insert(w.clone(), pot[i].unwrap() - base);
    }
    let witness = if e == 0 {
        Lcf::Constant(values[&Vec::new()])
    } else {
        Lcf::Table { depth: e, values }
    };
    // Re-verify the table identity f - g = w - w∘σ at depth d.
    let lhs = f.sub(g, m);
    let rhs = witness.sub(&witness.compose_with_shift(m), m);
    debug_assert!(lhs.equal_as_functions(&rhs, m));
    lhs.equal_as_functions(&rhs, m).then_some(witness)
}
