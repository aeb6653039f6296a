//! The relation classifier: combines exact invariants, certificate
//! verification, and the implication diagram between the five equivalence
//! notions, reporting established/refuted/unknown per relation with the
//! evidence spelled out.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::certificate::{
    extract_coe_data, verify_homeomorphism, CoeData, CoeExtraction, HomeoCertificate,
};
use crate::func::{is_coboundary_equivalent, CoboundaryOutcome, LocallyConstantZFunction};
use crate::invariants::{
    det_id_minus, dimension_group, dimension_groups_isomorphic, elementary_sse_search,
    essential_char_poly, k0_pointed_isomorphic, k_groups, DimGroupComparison, SseSearch,
};
use crate::matrix::{Symbol, TransitionMatrix};
use crate::tableau::af_transpositions;
use crate::transducer::{outputs_equal, SequentialTransducer};

/// The five relations the classifier reports on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Coe,
    Scoe,
    Ucoe,
    Uoe,
    TwoSided,
}

impl Relation {
    pub fn key(self) -> &'static str {
        match self {
            Relation::Coe => "coe",
            Relation::Scoe => "scoe",
            Relation::Ucoe => "ucoe",
            Relation::Uoe => "uoe",
            Relation::TwoSided => "two_sided",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Relation::Coe => "continuous orbit equivalence",
            Relation::Scoe => "strong continuous orbit equivalence",
            Relation::Ucoe => "uniform continuous orbit equivalence",
            Relation::Uoe => "uniform orbit equivalence",
            Relation::TwoSided => "two-sided conjugacy",
        }
    }

    pub fn all() -> [Relation; 5] {
        [
            Relation::Coe,
            Relation::Scoe,
            Relation::Ucoe,
            Relation::Uoe,
            Relation::TwoSided,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Established,
    Refuted,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Established => "established",
            Status::Refuted => "refuted",
            Status::Unknown => "unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub evidence: Vec<String>,
}

/// One verdict per relation, plus free-form notes (e.g. about certificates
/// that failed verification or searches that ran out of budget).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub coe: Verdict,
    pub scoe: Verdict,
    pub ucoe: Verdict,
    pub uoe: Verdict,
    pub two_sided: Verdict,
    pub notes: Vec<String>,
}

impl RelationReport {
    pub fn verdict(&self, r: Relation) -> &Verdict {
        match r {
            Relation::Coe => &self.coe,
            Relation::Scoe => &self.scoe,
            Relation::Ucoe => &self.ucoe,
            Relation::Uoe => &self.uoe,
            Relation::TwoSided => &self.two_sided,
        }
    }
}

/// Raised when direct evidence and the implication diagram cannot be
/// reconciled: some relation ends up both established and refuted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContradictoryEvidence {
    pub relation: Relation,
    pub established: Vec<String>,
    pub refuted: Vec<String>,
}

impl fmt::Display for ContradictoryEvidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "contradictory evidence for {}: established [{}] vs refuted [{}]",
            self.relation.describe(),
            self.established.join("; "),
            self.refuted.join("; ")
        )
    }
}

impl std::error::Error for ContradictoryEvidence {}

#[derive(Debug, Clone, Copy)]
pub struct ClassifyOptions {
    /// Bound for the per-cylinder (k, l) search when extracting orbit data.
    pub search_bound: usize,
    /// Depth budget for coboundary decisions.
    pub max_depth: usize,
    /// Largest lag tried for eventual conjugacy / AF conjugation.
    pub k_bound: usize,
    /// Size gate for the strong-shift-equivalence search.
    pub sse_size_max: usize,
    /// Depth of the transposition generators conjugated in the UCOE check.
    pub ucoe_generator_depth: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            search_bound: 16,
            max_depth: 8,
            k_bound: 16,
            sse_size_max: 4,
            ucoe_generator_depth: 2,
        }
    }
}

/// Least `K ≤ k_bound` such that `σ_B^K ∘ h ∘ σ_A = σ_B^{K+1} ∘ h` and the
/// same with the roles of the two sides swapped — i.e. the certificate is an
/// eventual conjugacy.
pub fn verify_eventual_conjugacy(cert: &HomeoCertificate, k_bound: usize) -> Option<usize> {
    let fs = cert.forward.precompose_shift();
    let bs = cert.backward.precompose_shift();
    (0..=k_bound).find(|&k| {
        outputs_equal(&fs, &cert.forward, k, k + 1).is_equal()
            && outputs_equal(&bs, &cert.backward, k, k + 1).is_equal()
    })
}

/// Uniform conjugation check: every prefix-exchange transposition of the
/// given depth, conjugated through the certificate, must satisfy
/// `σ^K ∘ (h τ h⁻¹) = σ^K` for one lag `K ≤ k_bound` uniform over the
/// generators — and symmetrically. This is the operational form of uniform
/// continuous orbit equivalence on generators.
pub fn verify_ucoe(cert: &HomeoCertificate, generator_depth: usize, k_bound: usize) -> bool {
    let conjugates_af = |h: &SequentialTransducer, hinv: &SequentialTransducer| {
        let gens = af_transpositions(h.source(), generator_depth);
        let id_t = SequentialTransducer::identity(h.target());
        let conj: Vec<SequentialTransducer> = gens
            .iter()
            .map(|tau| h.compose(&SequentialTransducer::lift(tau).compose(hinv)))
            .collect();
        (0..=k_bound).any(|k| {
            conj.iter()
                .all(|g| outputs_equal(g, &id_t, k, k).is_equal())
        })
    };
    conjugates_af(&cert.forward, &cert.backward)
        && conjugates_af(&cert.backward, &cert.forward)
}

/// Outcome of testing one certificate's orbit cocycles against the class of
/// the constant 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScoeCheck {
    /// Both cocycles are cohomologous to 1; the transfer witnesses are
    /// locally constant of the reported depths.
    Established { depth_a: usize, depth_b: usize },
    /// This certificate's cocycle is obstructed along a periodic orbit; the
    /// certificate is not a strong equivalence (other maps may still be).
    CertificateObstructed {
        on_source: bool,
        orbit: Vec<Symbol>,
    },
    Unknown,
}

pub fn scoe_check(
    data: &CoeData,
    ma: &TransitionMatrix,
    mb: &TransitionMatrix,
    max_depth: usize,
) -> ScoeCheck {
    let one = LocallyConstantZFunction::constant(1);
    let wa = match is_coboundary_equivalent(&data.c1, &one, ma, max_depth) {
        CoboundaryOutcome::Yes { witness } => witness,
        CoboundaryOutcome::No { orbit } => {
            return ScoeCheck::CertificateObstructed {
                on_source: true,
                orbit: orbit.as_slice().to_vec(),
            }
        }
        CoboundaryOutcome::Unknown => return ScoeCheck::Unknown,
    };
    match is_coboundary_equivalent(&data.c2, &one, mb, max_depth) {
        CoboundaryOutcome::Yes { witness } => ScoeCheck::Established {
            depth_a: wa.depth(),
            depth_b: witness.depth(),
        },
        CoboundaryOutcome::No { orbit } => ScoeCheck::CertificateObstructed {
            on_source: false,
            orbit: orbit.as_slice().to_vec(),
        },
        CoboundaryOutcome::Unknown => ScoeCheck::Unknown,
    }
}

/// The implication diagram: an established source relation forces the
/// target; a refuted target refutes the source.
const IMPLICATIONS: [(Relation, Relation); 4] = [
    (Relation::Ucoe, Relation::Uoe),
    (Relation::Ucoe, Relation::Scoe),
    (Relation::Scoe, Relation::Coe),
    (Relation::Scoe, Relation::TwoSided),
];

/// Classifies the pair `(A, B)` against all five relations. Certificates
/// may be given in either orientation; unverifiable ones contribute notes,
/// never verdicts.
pub fn classify(
    a: &TransitionMatrix,
    b: &TransitionMatrix,
    certs: &[HomeoCertificate],
    opts: &ClassifyOptions,
) -> Result<RelationReport, ContradictoryEvidence> {
    let mut evidence: Vec<(Relation, Status, String)> = Vec::new();
    let mut notes: Vec<String> = Vec::new();

    // One-sided classification invariants decide COE outright.
    let (da, db) = (det_id_minus(a), det_id_minus(b));
    if da != db {
        evidence.push((
            Relation::Coe,
            Status::Refuted,
            format!("det(I-A) differs: {da} vs {db}"),
        ));
    } else if !k0_pointed_isomorphic(a, b) {
        evidence.push((
            Relation::Coe,
            Status::Refuted,
            "pointed (K0, [1]) groups are not isomorphic".into(),
        ));
    } else if k_groups(a).k1_rank != k_groups(b).k1_rank {
        evidence.push((
            Relation::Coe,
            Status::Refuted,
            format!(
                "K1 ranks differ: {} vs {}",
                k_groups(a).k1_rank,
                k_groups(b).k1_rank
            ),
        ));
    } else {
        evidence.push((
            Relation::Coe,
            Status::Established,
            format!(
                "pointed (K0, [1]), K1 rank, and det(I-A) = {da} all agree; \
                 equivalent by the classification theorem"
            ),
        ));
    }

    // Dimension groups decide uniform orbit equivalence when comparable.
    match dimension_groups_isomorphic(a, b) {
        DimGroupComparison::Isomorphic => {
            let (ra, rb) = (
                dimension_group(a).rank_one.unwrap(),
                dimension_group(b).rank_one.unwrap(),
            );
            evidence.push((
                Relation::Uoe,
                Status::Established,
                format!(
                    "stationary dimension groups with order unit are isomorphic \
                     (lambda {} with unit {} vs lambda {} with unit {})",
                    ra.lambda, ra.unit_value, rb.lambda, rb.unit_value
                ),
            ));
        }
        DimGroupComparison::Distinct => {
            evidence.push((
                Relation::Uoe,
                Status::Refuted,
                "stationary dimension groups with order unit are not isomorphic".into(),
            ));
        }
        DimGroupComparison::Unsupported => {
            notes.push(format!(
                "dimension-group comparison unsupported at rank {} > 1; \
                 uniform orbit equivalence left to other evidence",
                dimension_group(a).eventual_rank
            ));
        }
    }

    // Two-sided conjugacy: spectral obstruction, then witness search.
    let (pa, pb) = (essential_char_poly(a), essential_char_poly(b));
    if pa != pb {
        evidence.push((
            Relation::TwoSided,
            Status::Refuted,
            format!("essential characteristic polynomials differ: {pa:?} vs {pb:?}"),
        ));
    } else {
        match elementary_sse_search(a, b, opts.sse_size_max) {
            SseSearch::Found { .. } => evidence.push((
                Relation::TwoSided,
                Status::Established,
                "elementary strong shift equivalence witness found".into(),
            )),
            SseSearch::NotFound => notes.push(
                "no elementary strong shift equivalence within the search gate; \
                 two-sided conjugacy left to other evidence"
                    .into(),
            ),
        }
    }

    // Certificates.
    for (i, given) in certs.iter().enumerate() {
        let idx = i + 1;
        let cert = if given.source() == a && given.target() == b {
            given.clone()
        } else if given.source() == b && given.target() == a {
            HomeoCertificate::new(given.backward.clone(), given.forward.clone())
        } else {
            notes.push(format!(
                "certificate {idx} connects different matrices; ignored"
            ));
            continue;
        };
        if !verify_homeomorphism(&cert).is_verified() {
            notes.push(format!(
                "certificate {idx} failed homeomorphism verification; ignored"
            ));
            continue;
        }
        let data = match extract_coe_data(&cert, opts.search_bound) {
            CoeExtraction::Found(d) => d,
            CoeExtraction::Inconclusive { on_source, cylinder } => {
                notes.push(format!(
                    "certificate {idx}: no orbit constants within bound {} on the {} \
                     cylinder {cylinder:?}",
                    opts.search_bound,
                    if on_source { "source" } else { "target" },
                ));
                continue;
            }
        };
        evidence.push((
            Relation::Coe,
            Status::Established,
            format!("certificate {idx} is a verified homeomorphism with continuous orbit data"),
        ));
        match scoe_check(&data, a, b, opts.max_depth) {
            ScoeCheck::Established { depth_a, depth_b } => evidence.push((
                Relation::Scoe,
                Status::Established,
                format!(
                    "certificate {idx} has both orbit cocycles cohomologous to 1 \
                     (transfer witnesses of depth {depth_a} and {depth_b})"
                ),
            )),
            ScoeCheck::CertificateObstructed { on_source, orbit } => notes.push(format!(
                "certificate {idx}: orbit cocycle on the {} side is not cohomologous to 1 \
                 (periodic obstruction {orbit:?}); this map is not a strong equivalence",
                if on_source { "source" } else { "target" },
            )),
            ScoeCheck::Unknown => notes.push(format!(
                "certificate {idx}: coboundary search exhausted depth {}",
                opts.max_depth
            )),
        }
        if let Some(k) = verify_eventual_conjugacy(&cert, opts.k_bound) {
            evidence.push((
                Relation::Ucoe,
                Status::Established,
                format!("certificate {idx} is an eventual conjugacy (least lag K = {k})"),
            ));
        } else if verify_ucoe(&cert, opts.ucoe_generator_depth, opts.k_bound) {
            evidence.push((
                Relation::Ucoe,
                Status::Established,
                format!(
                    "certificate {idx} conjugates depth-{} transposition generators \
                     into eventually trivial elements both ways",
                    opts.ucoe_generator_depth
                ),
            ));
        }
    }

    assemble(evidence, notes)
}

/// Merges raw evidence and closes it under the implication diagram,
/// detecting contradictions.
pub(crate) fn assemble(
    evidence: Vec<(Relation, Status, String)>,
    notes: Vec<String>,
) -> Result<RelationReport, ContradictoryEvidence> {
    let mut state: BTreeMap<Relation, (Status, Vec<String>, Vec<String>)> = Relation::all()
        .into_iter()
        .map(|r| (r, (Status::Unknown, Vec::new(), Vec::new())))
        .collect();
    let add = |state: &mut BTreeMap<Relation, (Status, Vec<String>, Vec<String>)>,
                   rel: Relation,
                   status: Status,
                   msg: String|
     -> Result<bool, ContradictoryEvidence> {
        let entry = state.get_mut(&rel).unwrap();
        match status {
            Status::Established => entry.1.push(msg),
            Status::Refuted => entry.2.push(msg),
            Status::Unknown => return Ok(false),
        }
        if !entry.1.is_empty() && !entry.2.is_empty() {
            return Err(ContradictoryEvidence {
                relation: rel,
                established: entry.1.clone(),
                refuted: entry.2.clone(),
            });
        }
        let changed = entry.0 != status;
        entry.0 = status;
        Ok(changed)
    };
    for (rel, status, msg) in evidence {
        add(&mut state, rel, status, msg)?;
    }
    // Close under the diagram until stable.
    loop {
        let mut changed = false;
        for (from, to) in IMPLICATIONS {
            if state[&from].0 == Status::Established && state[&to].0 != Status::Established {
                changed |= add(
                    &mut state,
                    to,
                    Status::Established,
                    format!("follows from established {}", from.describe()),
                )?;
            }
            if state[&to].0 == Status::Refuted && state[&from].0 != Status::Refuted {
                changed |= add(
                    &mut state,
                    from,
                    Status::Refuted,
                    format!("would imply {}, which is refuted", to.describe()),
                )?;
            }
        }
        if !changed {
            break;
        }
    }
    let verdict = |rel: Relation| {
        let (status, est, refs) = &state[&rel];
        Verdict {
            status: *status,
            evidence: if est.is_empty() { refs.clone() } else { est.clone() },
        }
    };
    Ok(RelationReport {
        coe: verdict(Relation::Coe),
        scoe: verdict(Relation::Scoe),
        ucoe: verdict(Relation::Ucoe),
        uoe: verdict(Relation::Uoe),
        two_sided: verdict(Relation::TwoSided),
        notes,
    })
}
