//! End-to-end tests of the `orbiteq` binary: golden outputs on the bundled
//! data, the exit-code contract, agreement between the text and JSON views,
//! and byte-determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn orbiteq() -> Command {
    Command::new(env!("CARGO_BIN_EXE_orbiteq"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str], paths: &[&Path]) -> Output {
    let mut cmd = orbiteq();
    for a in args {
        cmd.arg(a);
    }
    for p in paths {
        cmd.arg(p);
    }
    cmd.output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}, stderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Writes a throwaway input file unique to this test run.
fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("orbiteq-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn invariants_of_a2_and_b2() {
    let text = stdout(&run(&["invariants"], &[&data("a2.txt")]));
    assert!(text.contains("det_id_minus        -1"), "{text}");
    assert!(text.contains("k0_factors          []"), "{text}");
    assert!(text.contains("k0_free_rank        0"), "{text}");
    let text = stdout(&run(&["invariants"], &[&data("b2.txt")]));
    assert!(text.contains("dimgroup_unit       3"), "{text}");
    assert!(text.contains("dimgroup_lambda     2"), "{text}");
}

#[test]
fn invariants_text_and_json_carry_the_same_map() {
    for name in ["a2.txt", "f2.txt", "b2.txt", "b3.txt", "c3.txt", "a4.txt"] {
        let text = stdout(&run(&["invariants"], &[&data(name)]));
        let json = stdout(&run(&["invariants", "--format", "json"], &[&data(name)]));
        let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
        let map = doc.as_object().unwrap();
        let mut lines = 0;
        for line in text.lines() {
            let (key, value) = line.split_once(' ').unwrap();
            assert_eq!(
                map[key].as_str().unwrap(),
                value.trim(),
                "{name}: field {key}"
            );
            lines += 1;
        }
        assert_eq!(lines, map.len(), "{name}: text and json field counts");
    }
}

#[test]
fn malformed_matrix_exits_2_naming_the_violation() {
    let bad = scratch("nonsquare.txt", "matrix n=2\n11\n1\n");
    let out = run(&["invariants"], &[&bad]);
    std::fs::remove_file(&bad).ok();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");

    let perm = scratch("perm.txt", "matrix n=2\n01\n10\n");
    let out = run(&["invariants"], &[&perm]);
    std::fs::remove_file(&perm).ok();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("permutation"), "{err}");
}

#[test]
fn classify_separates_the_bundled_counterexamples() {
    let text = stdout(&run(&["classify"], &[&data("a2.txt"), &data("a4.txt")]));
    assert!(text.contains("uoe: established"), "{text}");
    assert!(text.contains("ucoe: refuted"), "{text}");
    let text = stdout(&run(&["classify"], &[&data("b3.txt"), &data("c3.txt")]));
    assert!(text.contains("two_sided: established"), "{text}");
    assert!(text.contains("coe: refuted"), "{text}");
}

#[test]
fn classify_with_identity_certificate_establishes_everything() {
    let out = run(
        &["classify"],
        &[
            &data("a2.txt"),
            &data("a2.txt"),
            Path::new("--cert"),
            &data("ident_a2.txt"),
            &data("ident_a2.txt"),
        ],
    );
    let text = stdout(&out);
    for rel in ["coe", "scoe", "ucoe", "uoe", "two_sided"] {
        assert!(text.contains(&format!("{rel}: established")), "{rel}: {text}");
    }
}

#[test]
fn classify_text_statuses_match_json() {
    let args = [&data("a2.txt"), &data("b2.txt")];
    let text = stdout(&run(&["classify"], &args.map(|p| p.as_path())));
    let json = stdout(&run(&["classify", "--format", "json"], &args.map(|p| p.as_path())));
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    for rel in ["coe", "scoe", "ucoe", "uoe", "two_sided"] {
        let status = doc[rel]["status"].as_str().unwrap();
        assert!(text.contains(&format!("{rel}: {status}")), "{rel}: {text}");
    }
}

#[test]
fn verify_cert_accepts_the_exchange_pair() {
    let text = stdout(&run(
        &["verify-cert"],
        &[&data("exchange_a2_fwd.txt"), &data("exchange_a2_bwd.txt")],
    ));
    assert!(text.contains("homeomorphism: verified"), "{text}");
    assert!(text.contains("orbit equations: verified"), "{text}");
    assert!(text.contains("c1:"), "{text}");

    let json = stdout(&run(
        &["verify-cert", "--format", "json"],
        &[&data("exchange_a2_fwd.txt"), &data("exchange_a2_bwd.txt")],
    ));
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["result"], "verified");
    assert_eq!(doc["equations_hold"], true);
    assert_eq!(doc["c1"]["depth"], 3);
}

#[test]
fn verify_cert_rejects_a_non_inverse_pair() {
    let out = run(
        &["verify-cert"],
        &[&data("ident_a2.txt"), &data("swap_a2.txt")],
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("not the identity"), "{err}");
    assert!(err.contains("separating point"), "{err}");
}

#[test]
fn fullgroup_swap_is_af_with_lag_one() {
    let swap = scratch("swap-tab.txt", "tableau n=2\n1 -> 2\n2 -> 1\n");
    let text = stdout(&run(
        &["fullgroup", "is-af"],
        &[&data("a2.txt"), &swap],
    ));
    assert_eq!(text, "af: yes\nleast lag K: 1\n");

    let composed = stdout(&run(
        &["fullgroup", "compose"],
        &[&data("a2.txt"), &swap, &swap],
    ));
    std::fs::remove_file(&swap).ok();
    assert_eq!(composed, "tableau n=2\n- -> -\n");
}

#[test]
fn fullgroup_cocycle_of_identity_is_zero() {
    let ident = scratch("ident-tab.txt", "tableau n=2\n- -> -\n");
    let text = stdout(&run(
        &["fullgroup", "cocycle"],
        &[&data("a2.txt"), &ident],
    ));
    std::fs::remove_file(&ident).ok();
    assert_eq!(text, "function constant 0\n");
}

#[test]
fn fullgroup_invert_composes_to_identity() {
    let text = stdout(&run(
        &["fullgroup", "invert"],
        &[&data("a2.txt"), &data("exchange_a2.txt")],
    ));
    let inv = scratch("exchange-inv.txt", &text);
    let composed = stdout(&run(
        &["fullgroup", "compose"],
        &[&data("a2.txt"), &data("exchange_a2.txt"), &inv],
    ));
    std::fs::remove_file(&inv).ok();
    assert_eq!(composed, "tableau n=2\n- -> -\n");
}

#[test]
fn fullgroup_rejects_an_incomplete_tableau() {
    let bad = scratch("bad-tab.txt", "tableau n=2\n1 -> 2\n");
    let out = run(&["fullgroup", "is-af"], &[&data("a2.txt"), &bad]);
    std::fs::remove_file(&bad).ok();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("completeness violated"), "{err}");
}

#[test]
fn transducer_matrix_references_resolve_relative_to_the_file() {
    // Run from a different working directory: paths inside the transducer
    // header must still resolve against the transducer file's directory.
    let fwd = data("exchange_a2_fwd.txt").canonicalize().unwrap();
    let bwd = data("exchange_a2_bwd.txt").canonicalize().unwrap();
    let out = orbiteq()
        .current_dir(std::env::temp_dir())
        .arg("verify-cert")
        .args([&fwd, &bwd])
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn outputs_are_byte_deterministic() {
    for args in [
        vec!["invariants"],
        vec!["classify"],
        vec!["examples", "--format", "json"],
    ] {
        let paths: Vec<PathBuf> = match args[0] {
            "invariants" => vec![data("b3.txt")],
            "classify" => vec![data("b3.txt"), data("c3.txt")],
            _ => vec![],
        };
        let path_refs: Vec<&Path> = paths.iter().map(|p| p.as_path()).collect();
        let first = run(&args, &path_refs);
        let second = run(&args, &path_refs);
        assert_eq!(first.stdout, second.stdout, "args: {args:?}");
        assert_eq!(first.status.code(), second.status.code());
    }
}

#[test]
fn examples_json_agrees_with_text() {
    let text = stdout(&run(&["examples"], &[]));
    let json = stdout(&run(&["examples", "--format", "json"], &[]));
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    let pairs = doc["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 15);
    for p in pairs {
        let (a, b) = (p["a"].as_str().unwrap(), p["b"].as_str().unwrap());
        let line = text
            .lines()
            .find(|l| l.contains(&format!(" {a} {b}:")))
            .unwrap_or_else(|| panic!("no text line for {a} {b}"));
        assert!(line.starts_with("ok"), "{line}");
        for c in p["checks"].as_array().unwrap() {
            let rel = c["relation"].as_str().unwrap();
            let status = c["computed"].as_str().unwrap();
            assert!(line.contains(&format!("{rel}={status}")), "{line}");
        }
    }
}
