//! Exact computational toolkit for one-sided topological Markov shifts.
//!
//! Everything here works with exact integer arithmetic over finite
//! presentations: transition matrices, finite words, ultimately periodic
//! points, locally constant integer-valued functions, prefix-exchange
//! tableaux (elements of the continuous full group), sequential transducers
//! (certificates for homeomorphisms between shift spaces), C*-algebraic
//! invariants (determinants, K-groups, stationary dimension groups), and a
//! classifier that assembles orbit-equivalence verdicts from invariants and
//! certificates.
//!
//! There is no floating point anywhere in the crate; all linear algebra is
//! fraction-free over `i128`.

pub mod certificate;
pub mod classify;
pub mod func;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod point;
pub mod tableau;
pub mod transducer;

pub use certificate::{
    extract_coe_data, orbit_cocycle_identity, periodic_orbit_positivity,
    preserves_eventually_periodic, psi_h, unit_cocycle_law, verify_coe_equations,
    verify_homeomorphism, CoeData, CoeExtraction, HomeoCertificate, HomeoVerification,
};
pub use classify::{
    classify, scoe_check, verify_eventual_conjugacy, verify_ucoe, ClassifyOptions,
    ContradictoryEvidence, Relation, RelationReport, ScoeCheck, Status, Verdict,
};
pub use func::{
    cocycle_sum, is_coboundary_equivalent, CoboundaryOutcome, FuncError, LocallyConstantZFunction,
};
pub use invariants::{
    char_poly, coe_invariants_match, det_id_minus, dimension_group, dimension_groups_isomorphic,
    elementary_sse_search, essential_char_poly, invariant_report, k0_pointed_isomorphic, k_groups,
    DimGroupComparison, KGroups, KZeroGroup, RankOneData, SseSearch, StationaryDimensionGroup,
};
pub use matrix::{MatrixError, Symbol, TransitionMatrix};
pub use point::{PointError, UltimatelyPeriodicPoint, Word};
pub use tableau::{af_transpositions, enumerate_tableaux, TableauElement, TableauError};
pub use transducer::{
    outputs_equal, outputs_equal_from, EqualityOutcome, SequentialTransducer, TransducerError,
};
