//! Shared fixtures for the property suites: a pool of small irreducible
//! matrices with pre-enumerated full-group elements and ultimately periodic
//! points over each.

use std::sync::OnceLock;

use orbiteq_core::{
    enumerate_tableaux, Symbol, TableauElement, TransitionMatrix, UltimatelyPeriodicPoint,
};

// Each integration-test binary compiles this module separately and uses a
// different subset of the fields.
#[allow(dead_code)]
pub struct Fixture {
    pub m: TransitionMatrix,
    pub taus: Vec<TableauElement>,
    pub points: Vec<UltimatelyPeriodicPoint>,
}

fn mat(rows: Vec<Vec<u8>>) -> TransitionMatrix {
    TransitionMatrix::from_rows(rows).unwrap()
}

fn point_pool(m: &TransitionMatrix) -> Vec<UltimatelyPeriodicPoint> {
    let mut prefixes: Vec<Vec<Symbol>> = vec![Vec::new()];
    for len in 1..=2 {
        prefixes.extend(m.admissible_words(len).into_iter().map(|w| w.as_slice().to_vec()));
    }
    let mut out = Vec::new();
    for cycle in m.periodic_orbits(3) {
        for pre in &prefixes {
            if let Ok(p) =
                UltimatelyPeriodicPoint::new(pre.clone(), cycle.as_slice().to_vec(), m)
            {
                out.push(p);
            }
        }
    }
    out
}

/// Four matrices: the full 2-shift, the golden-mean shift, and two
/// 3-symbol shifts (one with a nontrivial K0 group).
pub fn fixtures() -> &'static [Fixture] {
    static FX: OnceLock<Vec<Fixture>> = OnceLock::new();
    FX.get_or_init(|| {
        let mats = vec![
            mat(vec![vec![1, 1], vec![1, 1]]),
            mat(vec![vec![1, 1], vec![1, 0]]),
            mat(vec![vec![1, 1, 0], vec![1, 0, 1], vec![1, 0, 1]]),
            mat(vec![vec![1, 1, 1], vec![1, 1, 1], vec![1, 0, 0]]),
        ];
        mats.into_iter()
            .map(|m| Fixture {
                taus: enumerate_tableaux(&m, 2),
                points: point_pool(&m),
                m,
            })
            .collect()
    })
}

pub const FIXTURE_COUNT: usize = 4;
