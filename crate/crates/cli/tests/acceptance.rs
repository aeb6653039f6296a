//! Acceptance suite: one test (and one printed pass/fail line) per criterion.
//!
//! 1. det(id − A) table against an independent cofactor oracle.
//! 2. K₀ table with unit classes and the pointed refutations.
//! 3. Dimension groups, the rank-one unit values, and the two comparisons.
//! 4. Two-sided conjugacy: SSE witness for (B₃, C₃), charpoly refutation.
//! 5. The bundled example suite: 15 pairs match the golden table.
//! 6. Randomized property suites (≥200 cases each, seeded).
//! 7. The induced map sends the constant 1 to the orbit cocycle.

use std::path::{Path, PathBuf};
use std::process::Command;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use orbiteq_core::{
    classify, cocycle_sum, det_id_minus, char_poly, dimension_group, dimension_groups_isomorphic,
    elementary_sse_search, enumerate_tableaux, extract_coe_data, k0_pointed_isomorphic, k_groups,
    linalg, orbit_cocycle_identity, outputs_equal, periodic_orbit_positivity, psi_h,
    unit_cocycle_law, verify_coe_equations, verify_eventual_conjugacy, verify_homeomorphism,
    verify_ucoe, ClassifyOptions, CoeData, CoeExtraction, DimGroupComparison, EqualityOutcome,
    HomeoCertificate, LocallyConstantZFunction, Relation, SequentialTransducer, SseSearch, Status,
    Symbol, TableauElement, TransitionMatrix, UltimatelyPeriodicPoint,
};

fn data_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn load(name: &str) -> TransitionMatrix {
    let text = std::fs::read_to_string(data_path(&format!("{name}.txt"))).unwrap();
    orbiteq_core::io::parse_matrix(&text).unwrap()
}

fn report(n: usize, what: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("acceptance criterion {n} ({what}): pass");
    } else {
        println!("acceptance criterion {n} ({what}): FAIL");
        panic!("criterion {n} ({what}):\n{}", failures.join("\n"));
    }
}

// --------------------------------------------------------------- criterion 1

/// Independent oracle: cofactor expansion along the first row.
fn cofactor_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut det = 0;
    for (j, &entry) in m[0].iter().enumerate() {
        if entry == 0 {
            continue;
        }
        let minor: Vec<Vec<i128>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        det += sign * entry * cofactor_det(&minor);
    }
    det
}

#[test]
fn criterion_1_determinant_table() {
    let expected = [("a2", -1), ("f2", -1), ("a4", -3), ("b3", -2), ("c3", -2)];
    let mut failures = Vec::new();
    for (name, want) in expected {
        let m = load(name);
        let got = det_id_minus(&m);
        let a = m.as_imat();
        let id_minus: Vec<Vec<i128>> = (0..m.n())
            .map(|i| (0..m.n()).map(|j| i128::from(i == j) - a[i][j]).collect())
            .collect();
        let oracle = cofactor_det(&id_minus);
        if got != want {
            failures.push(format!("{name}: det_id_minus = {got}, expected {want}"));
        }
        if oracle != want {
            failures.push(format!("{name}: cofactor oracle = {oracle}, expected {want}"));
        }
    }
    report(1, "det(id - A) table", failures);
}

// --------------------------------------------------------------- criterion 2

#[test]
fn criterion_2_k_theory_table() {
    let mut failures = Vec::new();
    let mut check = |cond: bool, msg: &str| {
        if !cond {
            failures.push(msg.to_string());
        }
    };
    let a2 = load("a2");
    let a4 = load("a4");
    let b3 = load("b3");
    let c3 = load("c3");
    check(k_groups(&a2).k0.is_trivial(), "K0(a2) should be trivial");
    let k_a4 = k_groups(&a4).k0;
    check(
        k_a4.invariant_factors == vec![3] && k_a4.free_rank == 0,
        "K0(a4) should be Z/3",
    );
    check(k_a4.unit_class != vec![0], "unit class of a4 should be nonzero");
    let k_b3 = k_groups(&b3).k0;
    check(
        k_b3.invariant_factors == vec![2] && k_b3.free_rank == 0,
        "K0(b3) should be Z/2",
    );
    check(k_b3.unit_class == vec![1], "unit class of b3 should be nonzero");
    let k_c3 = k_groups(&c3).k0;
    check(
        k_c3.invariant_factors == vec![2] && k_c3.free_rank == 0,
        "K0(c3) should be Z/2",
    );
    check(k_c3.unit_class == vec![0], "unit class of c3 should be zero");
    check(
        !k0_pointed_isomorphic(&a2, &a4),
        "(K0, [1]) must distinguish a2 from a4",
    );
    check(
        !k0_pointed_isomorphic(&b3, &c3),
        "(K0, [1]) must distinguish b3 from c3",
    );
    report(2, "K-theory table", failures);
}

// --------------------------------------------------------------- criterion 3

#[test]
fn criterion_3_dimension_groups() {
    let mut failures = Vec::new();
    let mut check = |cond: bool, msg: String| {
        if !cond {
            failures.push(msg);
        }
    };
    let a2 = load("a2");
    let b2 = load("b2");
    let a4 = load("a4");
    for (name, m, lambda, unit) in [("b2", &b2, 2, 3), ("a2", &a2, 2, 2), ("a4", &a4, 4, 4)] {
        let dg = dimension_group(m);
        match dg.rank_one {
            Some(r) => check(
                r.lambda == lambda && r.unit_value == unit,
                format!(
                    "{name}: (lambda, unit) = ({}, {}), expected ({lambda}, {unit})",
                    r.lambda, r.unit_value
                ),
            ),
            None => check(false, format!("{name}: expected a rank-one dimension group")),
        }
    }
    check(
        dimension_groups_isomorphic(&a2, &a4) == DimGroupComparison::Isomorphic,
        "dimension groups of a2 and a4 should be isomorphic".into(),
    );
    check(
        dimension_groups_isomorphic(&a2, &b2) == DimGroupComparison::Distinct,
        "dimension groups of a2 and b2 should be distinct".into(),
    );
    let opts = ClassifyOptions::default();
    let uoe_a2_a4 = classify(&a2, &a4, &[], &opts).unwrap().uoe.status;
    check(
        uoe_a2_a4 == Status::Established,
        format!("uoe(a2, a4) = {uoe_a2_a4}, expected established"),
    );
    let uoe_a2_b2 = classify(&a2, &b2, &[], &opts).unwrap().uoe.status;
    check(
        uoe_a2_b2 == Status::Refuted,
        format!("uoe(a2, b2) = {uoe_a2_b2}, expected refuted"),
    );
    report(3, "dimension groups", failures);
}

// --------------------------------------------------------------- criterion 4

#[test]
fn criterion_4_two_sided_conjugacy() {
    let mut failures = Vec::new();
    let b3 = load("b3");
    let c3 = load("c3");
    match elementary_sse_search(&b3, &c3, 4) {
        SseSearch::Found { r, s } => {
            if linalg::mul(&r, &s) != b3.as_imat() || linalg::mul(&s, &r) != c3.as_imat() {
                failures.push("SSE witness does not multiply back to (b3, c3)".into());
            }
        }
        SseSearch::NotFound => failures.push("no SSE witness found for (b3, c3)".into()),
    }
    let a2 = load("a2");
    let f2 = load("f2");
    if char_poly(&a2) != vec![1, -2, 0] {
        failures.push(format!("charpoly(a2) = {:?}", char_poly(&a2)));
    }
    if char_poly(&f2) != vec![1, -1, -1] {
        failures.push(format!("charpoly(f2) = {:?}", char_poly(&f2)));
    }
    let verdict = classify(&a2, &f2, &[], &ClassifyOptions::default())
        .unwrap()
        .two_sided
        .status;
    if verdict != Status::Refuted {
        failures.push(format!("two_sided(a2, f2) = {verdict}, expected refuted"));
    }
    report(4, "two-sided conjugacy", failures);
}

// --------------------------------------------------------------- criterion 5

fn orbiteq() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orbiteq"))
}

#[test]
fn criterion_5_example_suite() {
    let mut failures = Vec::new();

    // Library level: every table row matches a fresh classification.
    let table = std::fs::read_to_string(data_path("relations.txt")).unwrap();
    let opts = ClassifyOptions::default();
    let mut rows = 0;
    for line in table.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let f: Vec<&str> = line.split_whitespace().collect();
        assert_eq!(f.len(), 7, "golden table row: {line:?}");
        rows += 1;
        let report = match classify(&load(f[0]), &load(f[1]), &[], &opts) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{} {}: contradictory evidence: {e}", f[0], f[1]));
                continue;
            }
        };
        for (i, rel) in Relation::all().into_iter().enumerate() {
            let got = report.verdict(rel).status.to_string();
            if got != f[2 + i] {
                failures.push(format!(
                    "{} {} {}: computed {got}, table says {}",
                    f[0], f[1], rel.key(), f[2 + i]
                ));
            }
        }
    }
    if rows != 15 {
        failures.push(format!("golden table has {rows} rows, expected 15"));
    }

    // CLI level: fresh run passes, text and JSON agree, perturbation fails.
    let out = orbiteq().arg("examples").output().unwrap();
    if !out.status.success() {
        failures.push(format!("`orbiteq examples` exited {:?}", out.status.code()));
    }
    let text = String::from_utf8(out.stdout).unwrap();
    if !text.contains("suite: 15 pairs, all match") {
        failures.push("text summary line missing".into());
    }
    let out = orbiteq().args(["examples", "--format", "json"]).output().unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    if doc["ok"] != serde_json::json!(true) || doc["pair_count"] != serde_json::json!(15) {
        failures.push(format!("json summary unexpected: {doc}"));
    }

    let perturbed = table.replace(
        "b3 c3 refuted refuted refuted unknown established",
        "b3 c3 refuted refuted refuted unknown refuted",
    );
    assert_ne!(perturbed, table, "perturbation must hit a row");
    let ppath = std::env::temp_dir().join(format!("orbiteq-perturbed-{}.txt", std::process::id()));
    std::fs::write(&ppath, perturbed).unwrap();
    let out = orbiteq().args(["examples", "--table"]).arg(&ppath).output().unwrap();
    std::fs::remove_file(&ppath).ok();
    if out.status.code() != Some(1) {
        failures.push(format!(
            "perturbed table: exit {:?}, expected 1",
            out.status.code()
        ));
    }
    let err = String::from_utf8(out.stderr).unwrap();
    if !err.contains("first failure: b3 c3 two_sided") {
        failures.push(format!("perturbed table should name b3; stderr: {err}"));
    }

    report(5, "bundled example suite", failures);
}

// --------------------------------------------------------------- criterion 6

struct Fixture {
    m: TransitionMatrix,
    taus: Vec<TableauElement>,
    points: Vec<UltimatelyPeriodicPoint>,
}

fn fixtures() -> Vec<Fixture> {
    ["a2", "f2", "b2", "b3"]
        .into_iter()
        .map(|name| {
            let m = load(name);
            let taus = enumerate_tableaux(&m, 2);
            let mut prefixes: Vec<Vec<Symbol>> = vec![Vec::new()];
            for len in 1..=2 {
                prefixes.extend(m.admissible_words(len).into_iter().map(|w| w.as_slice().to_vec()));
            }
            let mut points = Vec::new();
            for cyc in m.periodic_orbits(3) {
                for pre in &prefixes {
                    if let Ok(p) =
                        UltimatelyPeriodicPoint::new(pre.clone(), cyc.as_slice().to_vec(), &m)
                    {
                        points.push(p);
                    }
                }
            }
            Fixture { m, taus, points }
        })
        .collect()
}

fn pick<'a, T>(rng: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[rng.gen_range(0..items.len())]
}

fn random_function(rng: &mut ChaCha8Rng, m: &TransitionMatrix) -> LocallyConstantZFunction {
    let depth = rng.gen_range(0..=2usize);
    if depth == 0 {
        return LocallyConstantZFunction::constant(rng.gen_range(-3..=3));
    }
    let table = m
        .admissible_words(depth)
        .into_iter()
        .map(|w| (w.as_slice().to_vec(), rng.gen_range(-3i64..=3)))
        .collect();
    LocallyConstantZFunction::from_table(depth, table, m).unwrap()
}

fn random_certificate(rng: &mut ChaCha8Rng, fx: &Fixture) -> HomeoCertificate {
    let t1 = pick(rng, &fx.taus);
    if rng.gen_bool(0.5) {
        HomeoCertificate::from_tableau(&t1.compose(pick(rng, &fx.taus)))
    } else {
        HomeoCertificate::from_tableau(t1)
    }
}

fn extracted(cert: &HomeoCertificate) -> Result<CoeData, String> {
    match extract_coe_data(cert, 16) {
        CoeExtraction::Found(data) => Ok(data),
        CoeExtraction::Inconclusive { on_source, cylinder } => Err(format!(
            "extraction inconclusive (on_source={on_source}, cylinder={cylinder:?})"
        )),
    }
}

#[test]
fn criterion_6_property_suites() {
    let fx = fixtures();
    let mut failures = Vec::new();

    // Full-group laws, the cocycle composition identity, AF closure.
    let mut rng = ChaCha8Rng::seed_from_u64(601);
    for case in 0..200 {
        let f = pick(&mut rng, &fx);
        let (t1, t2, t3) = (pick(&mut rng, &f.taus), pick(&mut rng, &f.taus), pick(&mut rng, &f.taus));
        let p = pick(&mut rng, &f.points);
        let e = TableauElement::identity(&f.m);
        let ok = t1.compose(t2).compose(t3).equal(&t1.compose(&t2.compose(t3)))
            && t1.compose(&e).equal(t1)
            && t1.compose(&t1.invert()).equal(&e)
            && t1.invert().compose(t1).equal(&e)
            && t1.compose(t2).apply(p) == t1.apply(&t2.apply(p))
            && t1.cocycle_composition_identity_check(t2)
            && (t1.is_af().is_none()
                || t2.is_af().is_none()
                || t1.compose(t2).is_af().is_some());
        if !ok {
            failures.push(format!("full-group laws failed at case {case}"));
            break;
        }
    }

    // Cocycle additivity f^{j+k}(x) = f^j(x) + f^k(sigma^j x).
    let mut rng = ChaCha8Rng::seed_from_u64(602);
    for case in 0..200 {
        let f = pick(&mut rng, &fx);
        let g = random_function(&mut rng, &f.m);
        let p = pick(&mut rng, &f.points);
        let (j, k) = (rng.gen_range(0..=5), rng.gen_range(0..=5));
        if cocycle_sum(&g, j + k, p) != cocycle_sum(&g, j, p) + cocycle_sum(&g, k, &p.shift_by(j))
        {
            failures.push(format!("cocycle additivity failed at case {case}"));
            break;
        }
    }

    // Transducers: composition matches staged runs; equality decisions are
    // sound and symmetric.
    let mut rng = ChaCha8Rng::seed_from_u64(603);
    for case in 0..200 {
        let f = pick(&mut rng, &fx);
        let machine = |rng: &mut ChaCha8Rng| match rng.gen_range(0..3u8) {
            0 => SequentialTransducer::identity(&f.m),
            1 => SequentialTransducer::shift_machine(&f.m),
            _ => SequentialTransducer::lift(pick(rng, &f.taus)),
        };
        let (g1, g2) = (machine(&mut rng), machine(&mut rng));
        let p = pick(&mut rng, &f.points);
        let mut ok = g2.compose(&g1).run(p).unwrap() == g2.run(&g1.run(p).unwrap()).unwrap()
            && outputs_equal(&g1, &g1, 1, 1).is_equal()
            && outputs_equal(&g1, &g2, 0, 0).is_equal()
                == outputs_equal(&g2, &g1, 0, 0).is_equal();
        match outputs_equal(&g1, &g2, 0, 0) {
            EqualityOutcome::Equal => {
                ok &= f.points.iter().all(|q| g1.run(q).unwrap() == g2.run(q).unwrap());
            }
            EqualityOutcome::Distinct { witness } => {
                ok &= g1.run(&witness).unwrap() != g2.run(&witness).unwrap();
            }
            EqualityOutcome::RateDivergence { .. } => ok = false,
        }
        if !ok {
            failures.push(format!("transducer laws failed at case {case}"));
            break;
        }
    }

    // Certificates: the four-term orbit identity at 50 points each, the
    // unit-cocycle law, and periodic positivity on orbits of length <= 6.
    let mut rng = ChaCha8Rng::seed_from_u64(604);
    for case in 0..200 {
        let f = pick(&mut rng, &fx);
        let cert = random_certificate(&mut rng, f);
        if !verify_homeomorphism(&cert).is_verified() {
            failures.push(format!("certificate {case} failed verification"));
            break;
        }
        let data = match extracted(&cert) {
            Ok(d) => d,
            Err(e) => {
                failures.push(format!("certificate {case}: {e}"));
                break;
            }
        };
        let mut ok = verify_coe_equations(&cert, &data)
            && unit_cocycle_law(&data)
            && periodic_orbit_positivity(&data, &f.m, 6);
        for _ in 0..50 {
            ok &= orbit_cocycle_identity(&cert, &data, pick(&mut rng, &f.points));
        }
        if !ok {
            failures.push(format!("certificate properties failed at case {case}"));
            break;
        }
    }

    // Eventual conjugacy implies the uniform check on depth-2 generators.
    let mut rng = ChaCha8Rng::seed_from_u64(605);
    for case in 0..200 {
        let f = &fx[rng.gen_range(0..2)];
        let cert = random_certificate(&mut rng, f);
        if let Some(k) = verify_eventual_conjugacy(&cert, 8) {
            if !verify_ucoe(&cert, 2, 8 + k) {
                failures.push(format!("eventual conjugacy without uniform check at case {case}"));
                break;
            }
        }
    }

    report(6, "property suites", failures);
}

// --------------------------------------------------------------- criterion 7

#[test]
fn criterion_7_induced_map_unit() {
    let fx = fixtures();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(700);
    for case in 0..200 {
        let f = pick(&mut rng, &fx);
        let cert = random_certificate(&mut rng, f);
        let data = match extracted(&cert) {
            Ok(d) => d,
            Err(e) => {
                failures.push(format!("certificate {case}: {e}"));
                break;
            }
        };
        let image = psi_h(&cert, &data, &LocallyConstantZFunction::constant(1));
        if !image.equal_as_functions(&data.c1, &f.m) {
            failures.push(format!("psi_h(1) != c1 at case {case}"));
            break;
        }
    }
    report(7, "induced map on the constant 1", failures);
}
