//! Exact algebraic invariants of a transition matrix: determinant and
//! characteristic polynomial of `I − A`, the K-theory pair `(K₀, [1])` and
//! `K₁`, the stationary dimension group, and a bounded search for elementary
//! strong shift equivalences.
//!
//! Everything here is integer arithmetic over `i128`; nothing is sampled or
//! rounded.

use std::collections::{BTreeMap, BTreeSet};

use crate::linalg::{self, IMat};
use crate::matrix::TransitionMatrix;

/// `det(I − A)`.
pub fn det_id_minus(m: &TransitionMatrix) -> i128 {
    linalg::det(&id_minus(&m.as_imat()))
}

/// Characteristic polynomial of `A`, leading coefficient first.
pub fn char_poly(m: &TransitionMatrix) -> Vec<i128> {
    linalg::char_poly(&m.as_imat())
}

/// Characteristic polynomial with the `t^v` factor stripped: the invariant
/// part away from the nilpotent spectrum. Two conjugate two-sided shifts
/// agree on this.
pub fn essential_char_poly(m: &TransitionMatrix) -> Vec<i128> {
    let mut p = char_poly(m);
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    p
}

fn id_minus(a: &IMat) -> IMat {
    let n = a.len();
    let mut m = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = i128::from(i == j) - a[i][j];
        }
    }
    m
}

/// `K₀` presented by invariant factors, with the class of the unit.
///
/// The group is `⊕ᵢ Z/dᵢ ⊕ Z^free_rank` with each listed factor ≥ 2; the
/// unit class is given in those coordinates (torsion entries reduced mod
/// their factor, then the free entries).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KZeroGroup {
    pub invariant_factors: Vec<i128>,
    pub free_rank: usize,
    pub unit_class: Vec<i128>,
}

impl KZeroGroup {
    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    /// Order of the unit class: `Some(k)` for finite order, `None` for
    /// infinite.
    pub fn unit_order(&self) -> Option<i128> {
        let torsion = self.invariant_factors.len();
        if self.unit_class[torsion..].iter().any(|&c| c != 0) {
            return None;
        }
        let mut order = 1i128;
        for (i, &d) in self.invariant_factors.iter().enumerate() {
            let c = self.unit_class[i];
            let o = d / num_integer::gcd(c, d);
            order = num_integer::lcm(order, o);
        }
        Some(order)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KGroups {
    pub k0: KZeroGroup,
    /// `K₁` is free; only its rank matters.
    pub k1_rank: usize,
}

/// Computes `K₀ = coker(I − Aᵗ)` with the class of `(1,…,1)`, and the rank
/// of `K₁ = ker(I − Aᵗ)`, via Smith normal form with verified transforms.
pub fn k_groups(m: &TransitionMatrix) -> KGroups {
    let n = m.n();
    let p = id_minus(&linalg::transpose(&m.as_imat()));
    let s = linalg::smith(&p);
    debug_assert!(s.verify(&p));
    let coords: Vec<i128> = (0..n).map(|i| s.u[i].iter().sum()).collect();
    let mut invariant_factors = Vec::new();
    let mut unit_class = Vec::new();
    let mut free_rank = 0;
    let mut free_coords = Vec::new();
    for i in 0..n {
        let d = if i < s.diag.len() { s.diag[i] } else { 0 };
        match d {
            0 => {
                free_rank += 1;
                free_coords.push(coords[i]);
            }
            1 => {}
            _ => {
                invariant_factors.push(d);
                unit_class.push(coords[i].rem_euclid(d));
            }
        }
    }
    unit_class.extend(free_coords);
    let k1_rank = n - linalg::rank(&p);
    KGroups {
        k0: KZeroGroup {
            invariant_factors,
            free_rank,
            unit_class,
        },
        k1_rank,
    }
}

/// Invariant factors and free rank of `K₀/⟨[1]⟩`, computed from the stacked
/// presentation `[I − Aᵗ | 1]`.
fn quotient_by_unit(m: &TransitionMatrix) -> (Vec<i128>, usize) {
    let n = m.n();
    let mut p = id_minus(&linalg::transpose(&m.as_imat()));
    for row in p.iter_mut() {
        row.push(1);
    }
    let s = linalg::smith(&p);
    debug_assert!(s.verify(&p));
    let factors: Vec<i128> = s.diag.iter().copied().filter(|&d| d > 1).collect();
    let rank = s.diag.iter().filter(|&&d| d != 0).count();
    (factors, n - rank)
}

/// Whether `(K₀(A), [1_A])` and `(K₀(B), [1_B])` are isomorphic as pointed
/// groups. The unit classes are compared up to automorphism of the group
/// through the complete pair of invariants (order of the unit, isomorphism
/// type of the quotient by the unit) — a full invariant when the torsion is
/// cyclic, which covers every matrix handled here.
pub fn k0_pointed_isomorphic(a: &TransitionMatrix, b: &TransitionMatrix) -> bool {
    let ka = k_groups(a).k0;
    let kb = k_groups(b).k0;
    ka.invariant_factors == kb.invariant_factors
        && ka.free_rank == kb.free_rank
        && ka.unit_order() == kb.unit_order()
        && quotient_by_unit(a) == quotient_by_unit(b)
}

/// The full invariant triple behind the one-sided classification: pointed
/// `K₀`, the rank of `K₁`, and `det(I − A)`.
pub fn coe_invariants_match(a: &TransitionMatrix, b: &TransitionMatrix) -> bool {
    k0_pointed_isomorphic(a, b)
        && k_groups(a).k1_rank == k_groups(b).k1_rank
        && det_id_minus(a) == det_id_minus(b)
}

/// The stationary dimension group `lim (Z^n, A)` in the cases this crate can
/// present exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StationaryDimensionGroup {
    /// Rank of `A^n` for large `n`: the rank of the rationalized group.
    pub eventual_rank: usize,
    /// Present exactly when the eventual rank is 1.
    pub rank_one: Option<RankOneData>,
}

/// Rank-one stationary dimension groups embed into `Z[1/λ]` by pairing a
/// stage-`k` vector `v` with the primitive right Perron vector `w` as
/// `⟨v, w⟩/λᵏ`; the order unit is the value `Σᵢ wᵢ` of `(1,…,1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankOneData {
    pub lambda: i128,
    pub weights: Vec<i128>,
    pub unit_value: i128,
}

pub fn dimension_group(m: &TransitionMatrix) -> StationaryDimensionGroup {
    let a = m.as_imat();
    let n = m.n();
    let an = linalg::pow(&a, n);
    let eventual_rank = linalg::rank(&an);
    let rank_one = (eventual_rank == 1).then(|| {
        // With a single nonzero eigenvalue, tr(A^k) = λ^k for k ≥ n.
        let tr = |p: &IMat| (0..n).map(|i| p[i][i]).sum::<i128>();
        let tn = tr(&an);
        let tn1 = tr(&linalg::mul(&a, &an));
        assert!(tn > 0 && tn1 % tn == 0, "rank-one trace ratio must be integral");
        let lambda = tn1 / tn;
        // Primitive positive solution of Aw = λw.
        let mut a_minus = a.clone();
        for i in 0..n {
            a_minus[i][i] -= lambda;
        }
        let kernel = linalg::kernel_basis(&a_minus);
        assert_eq!(kernel.len(), 1, "Perron eigenspace must be a line");
        let mut w = kernel.into_iter().next().unwrap();
        let g = w.iter().fold(0i128, |g, &x| num_integer::gcd(g, x));
        for x in w.iter_mut() {
            *x /= g;
        }
        if w.iter().any(|&x| x < 0) {
            for x in w.iter_mut() {
                *x = -*x;
            }
        }
        assert!(w.iter().all(|&x| x > 0), "Perron vector must be positive");
        let unit_value = w.iter().sum();
        RankOneData {
            lambda,
            weights: w,
            unit_value,
        }
    });
    StationaryDimensionGroup {
        eventual_rank,
        rank_one,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DimGroupComparison {
    Isomorphic,
    Distinct,
    /// Both groups have rank > 1; the order-structure comparison is out of
    /// scope.
    Unsupported,
}

/// Compares two stationary dimension groups as ordered groups with order
/// unit. Rank is an isomorphism invariant, so mismatched ranks decide
/// `Distinct`. In rank one the group is `Z[1/λ] = Z[1/rad(λ)]` and its
/// positive automorphisms are multiplications by fractions supported on the
/// primes of λ, so the pair (prime support of λ, prime-to-λ core of the
/// unit) is a complete invariant.
pub fn dimension_groups_isomorphic(
    a: &TransitionMatrix,
    b: &TransitionMatrix,
) -> DimGroupComparison {
    let ga = dimension_group(a);
    let gb = dimension_group(b);
    if ga.eventual_rank != gb.eventual_rank {
        return DimGroupComparison::Distinct;
    }
    match (ga.rank_one, gb.rank_one) {
        (Some(ra), Some(rb)) => {
            let sa = prime_support(ra.lambda);
            let sb = prime_support(rb.lambda);
            if sa == sb && strip_primes(ra.unit_value, &sa) == strip_primes(rb.unit_value, &sb) {
                DimGroupComparison::Isomorphic
            } else {
                DimGroupComparison::Distinct
            }
        }
        _ => DimGroupComparison::Unsupported,
    }
}

fn prime_support(mut n: i128) -> BTreeSet<i128> {
    assert!(n >= 2);
    let mut out = BTreeSet::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.insert(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.insert(n);
    }
    out
}

fn strip_primes(mut n: i128, primes: &BTreeSet<i128>) -> i128 {
    for &p in primes {
        while n % p == 0 {
            n /= p;
        }
    }
    n
}

/// Result of the elementary strong-shift-equivalence search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SseSearch {
    /// `A = R·S` and `B = S·R`; a conjugacy witness.
    Found { r: IMat, s: IMat },
    /// No witness in the searched family. Not a disproof: conjugacies may
    /// need a longer chain or exceed the size gate.
    NotFound,
}

/// Exhaustive search for 0/1 matrices `R` (N_A×N_B) and `S` (N_B×N_A) with
/// `A = RS`, `B = SR`. Entries beyond {0,1} cannot occur: an entry ≥ 2 in
/// `R` against a nonzero row of `S` would push an entry of `A` above 1, and
/// zero rows of `S` are ruled out by `B` having no zero rows. The search
/// runs only when both sizes are at most `size_max`.
pub fn elementary_sse_search(
    a: &TransitionMatrix,
    b: &TransitionMatrix,
    size_max: usize,
) -> SseSearch {
    let am = a.as_imat();
    let bm = b.as_imat();
    if am == bm {
        return SseSearch::Found {
            r: am,
            s: linalg::identity(a.n()),
        };
    }
    let (na, nb) = (a.n(), b.n());
    if na.max(nb) > size_max || na * nb > 24 {
        return SseSearch::NotFound;
    }
    // Trace is invariant under RS ↔ SR.
    let tr = |m: &IMat| (0..m.len()).map(|i| m[i][i]).sum::<i128>();
    if tr(&am) != tr(&bm) {
        return SseSearch::NotFound;
    }
    for rbits in 0u64..(1 << (na * nb)) {
        let r: IMat = (0..na)
            .map(|i| (0..nb).map(|j| i128::from(rbits >> (i * nb + j) & 1)).collect())
            .collect();
        // A has no zero rows, so R cannot either.
        if r.iter().any(|row| row.iter().all(|&x| x == 0)) {
            continue;
        }
        // Columns of S are independent under A = RS: column j must solve
        // R·s = A[..][j].
        let mut col_choices: Vec<Vec<Vec<i128>>> = Vec::with_capacity(na);
        let mut feasible = true;
        for j in 0..na {
            let mut choices = Vec::new();
            'cand: for sbits in 0u64..(1 << nb) {
                let s_col: Vec<i128> =
                    (0..nb).map(|k| i128::from(sbits >> k & 1)).collect();
                for i in 0..na {
                    let dot: i128 = (0..nb).map(|k| r[i][k] * s_col[k]).sum();
                    if dot != am[i][j] {
                        continue 'cand;
                    }
                }
                choices.push(s_col);
            }
            if choices.is_empty() {
                feasible = false;
                break;
            }
            col_choices.push(choices);
        }
        if !feasible {
            continue;
        }
        let mut index = vec![0usize; na];
        loop {
            let s: IMat = (0..nb)
                .map(|k| (0..na).map(|j| col_choices[j][index[j]][k]).collect())
                .collect();
            if linalg::mul(&s, &r) == bm {
                debug_assert_eq!(linalg::mul(&r, &s), am);
                return SseSearch::Found { r, s };
            }
            // Advance the mixed-radix counter over column choices.
            let mut pos = 0;
            loop {
                if pos == na {
                    break;
                }
                index[pos] += 1;
                if index[pos] < col_choices[pos].len() {
                    break;
                }
                index[pos] = 0;
                pos += 1;
            }
            if pos == na {
                break;
            }
        }
    }
    SseSearch::NotFound
}

/// Renders every invariant of one matrix into a sorted key → value map.
pub fn invariant_report(m: &TransitionMatrix) -> BTreeMap<String, String> {
    let kg = k_groups(m);
    let dg = dimension_group(m);
    let vecfmt = |v: &[i128]| {
        let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        format!("[{}]", items.join(", "))
    };
    let mut out = BTreeMap::new();
    out.insert("det_id_minus".into(), det_id_minus(m).to_string());
    out.insert("charpoly".into(), vecfmt(&char_poly(m)));
    out.insert(
        "charpoly_essential".into(),
        vecfmt(&essential_char_poly(m)),
    );
    out.insert("k0_factors".into(), vecfmt(&kg.k0.invariant_factors));
    out.insert("k0_free_rank".into(), kg.k0.free_rank.to_string());
    out.insert("k0_unit".into(), vecfmt(&kg.k0.unit_class));
    out.insert("k1_rank".into(), kg.k1_rank.to_string());
    out.insert(
        "dimgroup_rank".into(),
        dg.eventual_rank.to_string(),
    );
    match dg.rank_one {
        Some(r) => {
            out.insert("dimgroup_lambda".into(), r.lambda.to_string());
            out.insert("dimgroup_weights".into(), vecfmt(&r.weights));
            out.insert("dimgroup_unit".into(), r.unit_value.to_string());
        }
        None => {
            out.insert("dimgroup_lambda".into(), "-".into());
            out.insert("dimgroup_weights".into(), "-".into());
            out.insert("dimgroup_unit".into(), "-".into());
        }
    }
    out
}
