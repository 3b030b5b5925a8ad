use std::process::{Command, Output};

fn delpezzo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_delpezzo")).args(args).output().expect("run delpezzo")
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

const MINUS_K: &str = "[3,1,1,1,1,1,1,1,1]";

#[test]
fn enumerate_conics_gives_2160_rows() {
    let out = delpezzo(&["enumerate", "--kind", "conics", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("d,m1,m2,m3,m4,m5,m6,m7,m8"));
    assert_eq!(lines.count(), 2160);
    assert!(String::from_utf8_lossy(&out.stderr).contains("2160"));
}

#[test]
fn enumerate_json_counts() {
    for (kind, n) in [("roots", 240), ("minus-one", 240), ("cubics", 17280)] {
        let v = json(&delpezzo(&["enumerate", "--kind", kind]));
        assert_eq!(v["count"], n);
        assert_eq!(v["classes"].as_array().unwrap().len(), n);
    }
}

#[test]
fn small_orbit_cap_is_a_domain_error() {
    let out = delpezzo(&["enumerate", "--kind", "conics", "--orbit-cap", "100"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn anticanonical_chamber_is_central() {
    let v = json(&delpezzo(&["chamber", MINUS_K]));
    assert_eq!(v["label"], "CENTRAL");
    assert_eq!(v["negative_walls"], 0);
    assert_eq!(v["moduli"]["kind"], "SMOOTH_4FOLD");
}

#[test]
fn canonical_class_is_rejected() {
    // K_S itself is not ample
    let out = delpezzo(&["chamber", "[-3,-1,-1,-1,-1,-1,-1,-1,-1]"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not ample"));
}

#[test]
fn malformed_literals_exit_1() {
    for lit in ["[1,2,3]", "[1.5,0,0,0,0,0,0,0,0]", "nonsense", "{\"basis\":\"Q\",\"coeffs\":[1,0,0,0,0,0,0,0,0]}"] {
        assert_eq!(delpezzo(&["rho", lit]).status.code(), Some(1), "{lit}");
    }
    assert_eq!(delpezzo(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(delpezzo(&["associate", "--points", "/nonexistent.json"]).status.code(), Some(1));
}

#[test]
fn rational_literals_are_exact() {
    let v = json(&delpezzo(&["walls", "--through", "[\"3/2\",\"1/2\",\"1/2\",\"1/2\",\"1/2\",\"1/2\",\"1/2\",\"1/2\",\"1/2\"]"]));
    assert_eq!(v["count"], 0);
}

#[test]
fn rho_zeta_and_bertini() {
    let v = json(&delpezzo(&["rho", MINUS_K]));
    assert_eq!(v["rho"]["coeffs"], serde_json::json!([5, 3, 3, 3, 3, 3, 3, 3, 3]));
    assert_eq!(v["rho_half_integral"], false);
    let v = json(&delpezzo(&["zeta", "[1,0,0,0,0,0,0,0,0]"]));
    assert_eq!(v["zeta"]["basis"], "S");
    let v = json(&delpezzo(&["bertini-x", "[1,0,0,0,0,0,0,0,0]"]));
    assert_eq!(v["image"]["coeffs"], serde_json::json!([49, 30, 30, 30, 30, 30, 30, 30, 30]));
    // --basis overrides the default
    let v = json(&delpezzo(&["--basis", "X", "bertini-x", "{\"coeffs\":[1,0,0,0,0,0,0,0,0]}"]));
    assert_eq!(v["image"]["coeffs"][0], 49);
}

#[test]
fn path_report_and_walk() {
    let v = json(&delpezzo(&["path", "[7,1,1,1,1,1,1,1,1]", MINUS_K, "--report", "json"]));
    let ts: Vec<&str> = v["events"].as_array().unwrap().iter().map(|e| e["t"].as_str().unwrap()).collect();
    assert_eq!(ts, ["1/4", "3/4", "11/12"]);

    let v = json(&delpezzo(&["walk", "[7,1,1,1,1,1,1,1,1]", MINUS_K, "--invariants"]));
    assert_eq!(v["chi_tangent"], -8);
    assert_eq!(v["invariants"]["b4"], 45);
    let v = json(&delpezzo(&["walk", "[7,1,1,1,1,1,1,1,1]", MINUS_K]));
    assert!(v.get("invariants").is_none());
    assert!(v["events"][0].get("deltas").is_some());
}

#[test]
fn fixed_divisors_csv() {
    let out = delpezzo(&["fixed-divisors", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 2161);
}

#[test]
fn associate_reads_exact_points() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/points.json");
    let v = json(&delpezzo(&["associate", "--points", path]));
    assert_eq!(v["k"], 4);
    assert_eq!(v["n"], 8);
}

#[test]
fn surface_profile_and_factorization() {
    let v = json(&delpezzo(&["surface-profile", "--cubic", "[1,0,0,0,0,0,0,0,0]", "--curve", "[6,3,2,2,2,2,2,2,2]"]));
    assert_eq!(v["profile"]["degree"], 15);
    let v = json(&delpezzo(&["bertini-factorization"]));
    assert_eq!(v["degree"], 49);
    assert_eq!(v["multiplicity"], 30);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["path", "[7,1,1,1,1,1,1,1,1]", MINUS_K];
    assert_eq!(delpezzo(&args).stdout, delpezzo(&args).stdout);
    let args = ["enumerate", "--kind", "roots", "--format", "csv"];
    assert_eq!(delpezzo(&args).stdout, delpezzo(&args).stdout);
}

#[test]
fn verify_all_exits_2_while_criteria_fail_as_stated() {
    let out = Command::new(env!("CARGO_BIN_EXE_delpezzo")).args(["verify-all", "--format", "json"]).env("TOOLKIT_THREADS", "2").output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let results = v.as_array().unwrap();
    assert_eq!(results.len(), 11);
    let failing: Vec<u64> = results.iter().filter(|r| r["passed"] != true).map(|r| r["id"].as_u64().unwrap()).collect();
    assert_eq!(out.status.code(), Some(if failing.is_empty() { 0 } else { 2 }));
    for r in results.iter().filter(|r| r["passed"] != true) {
        assert!(r["deviations"].as_array().unwrap().iter().all(|d| d["corrected_claim_holds"] == true));
    }
}

#[test]
fn bad_thread_count_exits_1() {
    let out = Command::new(env!("CARGO_BIN_EXE_delpezzo")).args(["rho", MINUS_K]).env("TOOLKIT_THREADS", "many").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}
