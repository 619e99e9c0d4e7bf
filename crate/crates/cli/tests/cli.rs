use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scd_stab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scd-stab")).args(args).env_remove("SCD_STAB_WORKERS").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn two_branch_fails_only_the_aubin_condition() {
    let out = scd_stab(&["--json", "check", &fixture("two_branch.json")]);
    assert_eq!(code(&out), 2);
    let v = stdout_json(&out);
    assert_eq!(v["command"], "check");
    assert_eq!(v["all_hold"], false);
    for c in v["conditions"].as_array().unwrap() {
        let expected = if c["condition"] == "aubin" { "fails" } else { "holds" };
        assert_eq!(c["verdict"], expected, "{}", c["condition"]);
    }
    let face = scd_stab(&["check", "--condition", "face", &fixture("two_branch.json")]);
    assert_eq!(code(&face), 0);
}

#[test]
fn face_gap_separates_the_point_condition() {
    let out = scd_stab(&["--json", "check", &fixture("face_gap.json")]);
    assert_eq!(code(&out), 2);
    let v = stdout_json(&out);
    let by_id = |id: &str| v["conditions"].as_array().unwrap().iter().find(|c| c["condition"] == id).unwrap().clone();
    assert_eq!(by_id("point")["verdict"], "holds");
    let face = by_id("face");
    assert_eq!(face["verdict"], "fails");
    assert_eq!(face["provenance"]["face"], serde_json::json!([1]));
    assert!(face["witness"]["v"].is_array());
    assert_eq!(code(&scd_stab(&["check", "--condition", "point", &fixture("face_gap.json")])), 0);
}

#[test]
fn vertical_line_fails_everything() {
    let out = scd_stab(&["--json", "check", &fixture("vertical_line.json")]);
    assert_eq!(code(&out), 2);
    let v = stdout_json(&out);
    assert!(v["conditions"].as_array().unwrap().iter().all(|c| c["verdict"] == "fails"));
}

#[test]
fn decimal_and_unconstrained_inputs() {
    assert_eq!(code(&scd_stab(&["check", &fixture("box_decimal.json")])), 0);
    assert_eq!(code(&scd_stab(&["check", &fixture("equation.json")])), 0);
    assert_eq!(code(&scd_stab(&["check", &fixture("orthant_corner.json")])), 0);
}

#[test]
fn input_errors_exit_with_one() {
    let out = scd_stab(&["check", &fixture("infeasible.json")]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("not a solution"), "{}", stderr(&out));

    let out = scd_stab(&["check", &fixture("malformed.json")]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("line 6"), "{}", stderr(&out));

    let out = scd_stab(&["check", &fixture("missing_f0.json")]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("f0"), "{}", stderr(&out));

    let out = scd_stab(&["check", &fixture("no_such_file.json")]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("cannot read"));

    assert_eq!(code(&scd_stab(&["check", "--condition", "bogus", &fixture("two_branch.json")])), 1);
    assert_eq!(code(&scd_stab(&["--help"])), 0);
}

#[test]
fn oracle_needs_affine_data() {
    let out = scd_stab(&["oracle", &fixture("smooth.json")]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("oracle requires affine data"));
    // the checks themselves only need the Jacobians
    assert_eq!(code(&scd_stab(&["check", "--condition", "face", &fixture("smooth.json")])), 0);
}

#[test]
fn oracle_two_branch_modulus() {
    let out = scd_stab(&[
        "--json", "oracle", &fixture("two_branch.json"), "--radius", "0.1", "--kappa", "2", "--samples", "10000", "--seed", "42",
    ]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "consistent");
    assert_eq!(v["rng"], "ChaCha8");
    assert_eq!(v["seed"], 42);
    assert_eq!(v["probes"], 10000);
    assert!(v["modulus"].as_f64().unwrap() <= 1.0 + 1e-9);
}

#[test]
fn oracle_vertical_line_is_violated() {
    let out = scd_stab(&["--json", "oracle", &fixture("vertical_line.json")]);
    assert_eq!(code(&out), 2);
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "violated");
    assert!(v["modulus"].is_null());
    let q = &v["quadruple"];
    assert_eq!(q["x"], q["x_prime"]);
    assert_ne!(q["y"], q["y_prime"]);
}

#[test]
fn faces_are_listed_by_dimension() {
    let v = stdout_json(&scd_stab(&["--json", "faces", &fixture("two_branch.json")]));
    let dims: Vec<u64> = v["faces"].as_array().unwrap().iter().map(|f| f["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, [1, 0]);
    let v = stdout_json(&scd_stab(&["--json", "faces", &fixture("orthant_corner.json")]));
    let dims: Vec<u64> = v["faces"].as_array().unwrap().iter().map(|f| f["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, [2, 1, 1, 0]);
}

#[test]
fn json_output_is_reproducible() {
    for args in [
        vec!["--json", "check", "--workers", "1"],
        vec!["--json", "oracle", "--samples", "400", "--seed", "9", "--workers", "1"],
        vec!["--json", "faces"],
    ] {
        for name in ["face_gap.json", "two_branch.json", "box_decimal.json"] {
            let mut a = args.clone();
            let path = fixture(name);
            a.push(&path);
            let first = scd_stab(&a);
            assert_eq!(first.stdout, scd_stab(&a).stdout);
            // more workers do not change the bytes
            let mut wide = a.clone();
            if let Some(i) = wide.iter().position(|s| *s == "1") {
                wide[i] = "4";
                assert_eq!(first.stdout, scd_stab(&wide).stdout, "{wide:?}");
            }
            let env = Command::new(env!("CARGO_BIN_EXE_scd-stab")).args(&a).env("SCD_STAB_WORKERS", "3").output().unwrap();
            assert_eq!(first.stdout, env.stdout);
        }
    }
}

#[test]
fn quiet_keeps_the_exit_code() {
    let out = scd_stab(&["--quiet", "check", &fixture("two_branch.json")]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());
}

#[test]
fn library_entry_point_matches_the_binary() {
    let path = fixture("face_gap.json");
    let lib = scd_stab::run_args(["scd-stab", "--json", "check", &path]);
    let bin = scd_stab(&["--json", "check", &path]);
    assert_eq!(lib.code, code(&bin));
    assert_eq!(lib.stdout.as_bytes(), bin.stdout.as_slice());
}
