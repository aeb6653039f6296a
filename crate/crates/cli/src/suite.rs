//! The bundled example suite: six transition matrices with a known relation
//! table, plus the runner that reclassifies every pair and compares the
//! verdicts against that table.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use orbiteq_core::io::parse_matrix;
use orbiteq_core::{
    classify, ClassifyOptions, ContradictoryEvidence, Relation, TransitionMatrix,
};

use crate::output::{json_doc, Format};

pub const BUNDLED_MATRICES: [(&str, &str); 6] = [
    ("a2", include_str!("../../../data/a2.txt")),
    ("f2", include_str!("../../../data/f2.txt")),
    ("b2", include_str!("../../../data/b2.txt")),
    ("b3", include_str!("../../../data/b3.txt")),
    ("c3", include_str!("../../../data/c3.txt")),
    ("a4", include_str!("../../../data/a4.txt")),
];

pub const BUNDLED_RELATIONS: &str = include_str!("../../../data/relations.txt");

pub enum SuiteError {
    /// Malformed table or matrix reference; maps to the invalid-input exit.
    Invalid(String),
    /// A pair produced irreconcilable evidence; maps to its own exit code.
    Contradiction(ContradictoryEvidence),
}

pub fn bundled_matrix_set() -> Result<BTreeMap<String, TransitionMatrix>, String> {
    let mut out = BTreeMap::new();
    for (name, text) in BUNDLED_MATRICES {
        let m = parse_matrix(text).map_err(|e| format!("bundled matrix {name}: {e}"))?;
        out.insert(name.to_string(), m);
    }
    Ok(out)
}

/// One expected row: two matrix names and a status per relation, in the
/// order of [`Relation::all`].
pub type ExpectedRow = (String, String, [String; 5]);

pub fn parse_expected_table(text: &str) -> Result<Vec<ExpectedRow>, String> {
    let mut rows = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 7 {
            return Err(format!(
                "table row has {} fields, expected 7: {line:?}",
                fields.len()
            ));
        }
        for status in &fields[2..] {
            if !matches!(*status, "established" | "refuted" | "unknown") {
                return Err(format!("unknown status {status:?} in table row {line:?}"));
            }
        }
        let statuses: [String; 5] = std::array::from_fn(|i| fields[2 + i].to_string());
        rows.push((fields[0].to_string(), fields[1].to_string(), statuses));
    }
    Ok(rows)
}

#[derive(Serialize)]
pub struct RelationCheck {
    relation: &'static str,
    expected: String,
    computed: String,
    ok: bool,
}

#[derive(Serialize)]
pub struct PairResult {
    a: String,
    b: String,
    ok: bool,
    checks: Vec<RelationCheck>,
}

#[derive(Serialize)]
pub struct SuiteDoc {
    pair_count: usize,
    mismatch_count: usize,
    ok: bool,
    first_failure: Option<String>,
    pairs: Vec<PairResult>,
}

impl SuiteDoc {
    pub fn ok(&self) -> bool {
        self.ok
    }
}

/// Classifies every pair in the table (no certificates) and records the
/// comparison. Pairs are processed and reported in table order.
pub fn run_suite(table_text: &str, opts: &ClassifyOptions) -> Result<SuiteDoc, SuiteError> {
    let matrices = bundled_matrix_set().map_err(SuiteError::Invalid)?;
    let rows = parse_expected_table(table_text).map_err(SuiteError::Invalid)?;
    let lookup = |name: &str| {
        matrices
            .get(name)
            .ok_or_else(|| SuiteError::Invalid(format!("table references unknown matrix {name:?}")))
    };
    let mut pairs = Vec::new();
    let mut first_failure = None;
    for (a, b, expected) in rows {
        let ma = lookup(&a)?;
        let mb = lookup(&b)?;
        let report = classify(ma, mb, &[], opts).map_err(SuiteError::Contradiction)?;
        let mut checks = Vec::new();
        let mut pair_ok = true;
        for (i, r) in Relation::all().into_iter().enumerate() {
            let computed = report.verdict(r).status.to_string();
            let ok = computed == expected[i];
            if !ok {
                pair_ok = false;
                if first_failure.is_none() {
                    first_failure = Some(format!(
                        "{a} {b} {}: expected {}, computed {computed}",
                        r.key(),
                        expected[i]
                    ));
                }
            }
            checks.push(RelationCheck {
                relation: r.key(),
                expected: expected[i].clone(),
                computed,
                ok,
            });
        }
        pairs.push(PairResult {
            a,
            b,
            ok: pair_ok,
            checks,
        });
    }
    let mismatch_count = pairs.iter().filter(|p| !p.ok).count();
    Ok(SuiteDoc {
        pair_count: pairs.len(),
        mismatch_count,
        ok: mismatch_count == 0,
        first_failure,
        pairs,
    })
}

pub fn render_suite(doc: &SuiteDoc, format: Format) -> String {
    match format {
        Format::Json => json_doc(doc),
        Format::Text => {
            let mut out = String::new();
            for p in &doc.pairs {
                if p.ok {
                    let verdicts: Vec<String> = p
                        .checks
                        .iter()
                        .map(|c| format!("{}={}", c.relation, c.computed))
                        .collect();
                    let _ = writeln!(out, "ok    {} {}: {}", p.a, p.b, verdicts.join(" "));
                } else {
                    let misses: Vec<String> = p
                        .checks
                        .iter()
                        .filter(|c| !c.ok)
                        .map(|c| {
                            format!("{} expected {}, computed {}", c.relation, c.expected, c.computed)
                        })
                        .collect();
                    let _ = writeln!(out, "FAIL  {} {}: {}", p.a, p.b, misses.join("; "));
                }
            }
            match &doc.first_failure {
                None => {
                    let _ = writeln!(out, "suite: {} pairs, all match", doc.pair_count);
                }
                Some(first) => {
                    let _ = writeln!(
                        out,
                        "suite: {} pairs, {} mismatched; first failure: {first}",
                        doc.pair_count, doc.mismatch_count
                    );
                }
            }
            out
        }
    }
}
