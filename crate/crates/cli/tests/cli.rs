use assert_cmd::Command;
use serde_json::Value;

fn bin() -> Command {
    Command::cargo_bin("orbibraid").unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let out = bin().args(args).arg("--json").output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stdout_of(cmd: &mut Command) -> String {
    String::from_utf8(cmd.output().unwrap().stdout).unwrap()
}

#[test]
fn normal_form_detects_torsion_identity() {
    let v = json_of(&["normal-form", "X[2,1]^3", "--n", "2", "--q", "3"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["identity"], true);
    let v = json_of(&["normal-form", "X[2,1]^2", "--n", "2", "--q", "3"]);
    assert_eq!(v["identity"], false);
    assert_eq!(v["coordinates"]["u2"], serde_json::json!([["X[2,1]", 2]]));
}

#[test]
fn normal_form_text_verdict() {
    let out = stdout_of(bin().args(["normal-form", "B[1,2] B[1,2]^-1", "--n", "2"]));
    assert!(out.contains("u2 = 1"), "{out}");
    assert!(out.trim_end().ends_with("verdict: identity"), "{out}");
}

#[test]
fn normal_form_reads_file() {
    let dir = std::env::temp_dir().join(format!("orbibraid-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("w.txt");
    std::fs::write(&path, "P[2,1] P[2,1]^-1\n").unwrap();
    let v = json_of(&["normal-form", "--file", path.to_str().unwrap(), "--n", "2", "--k", "1"]);
    assert_eq!(v["identity"], true);
}

#[test]
fn parse_errors_report_offset_and_exit_2() {
    let out = bin().args(["normal-form", "B[1]", "--n", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("offset 0"), "{err}");
}

#[test]
fn mismatched_m_and_q_is_a_usage_error() {
    bin()
        .args(["normal-form", "X[1,1]", "--n", "1", "--m", "2", "--q", "2"])
        .assert()
        .code(2);
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "esg-splitting", "--n", "2", "--k", "1", "--cases", "20", "--seed", "7", "--json"];
    let a = bin().args(args).output().unwrap();
    let b = bin().args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), b.status.code());
}

#[test]
fn verify_passing_suite_exits_0() {
    bin()
        .args(["verify", "torsion", "--n", "2", "--k", "1", "--q", "2,3", "--max-d", "6"])
        .assert()
        .success();
}

#[test]
fn verify_lower_strand_relators_exit_1() {
    // lower-strand torsion relators do not comb to the identity once m >= 1
    bin()
        .args(["verify", "esg-splitting", "--n", "3", "--k", "1", "--m", "1", "--q", "2"])
        .assert()
        .code(1);
}

#[test]
fn verify_unknown_suite_exits_2() {
    bin().args(["verify", "no-such-suite"]).assert().code(2);
}

#[test]
fn verify_falk_prints_witness() {
    let out = stdout_of(bin().args(["verify", "falk", "--n", "4", "--k", "1"]));
    assert!(out.contains("z1 = z2, z1 = -z2, z3 = z4, z3 = -z4, z1 = z4"), "{out}");
}

#[test]
fn groupoid_axioms_suite_honours_max_m() {
    let v = json_of(&["verify", "groupoid-axioms", "--instances", "5", "--max-m", "6"]);
    assert_eq!(v["passed"], true);
}

#[test]
fn arrangement_report() {
    let v = json_of(&["arrangement", "--n", "4", "--k", "1"]);
    assert_eq!(v["hyperplane_count"], 12);
    assert_eq!(v["supersolvable"], false);
    assert_eq!(v["falk_witness"]["indices"], serde_json::json!([1, 2, 3, 4]));
    let v = json_of(&["arrangement", "--n", "3", "--k", "1"]);
    assert_eq!(v["falk_witness"], Value::Null);
    assert_eq!(v["supersolvable"], true);
    let v = json_of(&["arrangement", "--n", "4", "--braid"]);
    assert_eq!(v["supersolvable"], true);
}

#[test]
fn conj_table_needs_two_strands() {
    bin().args(["conj-table", "--n", "1"]).assert().code(2);
    let v = json_of(&["conj-table", "--n", "2", "--k", "1", "--q", "2"]);
    assert_eq!(v["complete"], true);
    assert!(!v["entries"].as_array().unwrap().is_empty());
}

#[test]
fn groupoid_on_free_action() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/z2_free.json");
    let v = json_of(&["groupoid", path, "--n", "3"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"]["free-action"], true);
    assert_eq!(v["checks"]["forget_b[3]-b-fibration"]["ok"], true);
}

#[test]
fn groupoid_on_action_with_fixed_points() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/z2_fixed.json");
    let v = json_of(&["groupoid", path]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"]["free-action"], false);
    assert_eq!(v["checks"]["forget_b[2]-b-fibration"]["ok"], Value::Null);
}

#[test]
fn groupoid_rejects_bad_action() {
    bin()
        .args(["groupoid", "-"])
        .write_stdin(r#"{"points":["a"],"group":{"elements":["e"],"table":[[0]]},"action":[[1]]}"#)
        .assert()
        .code(2);
}

#[test]
fn groupoid_accepts_raw_tables() {
    // the one-object, two-morphism groupoid Z/2
    let tables = r#"{
        "objects": ["o"], "morphisms": ["e", "s"],
        "source": [0, 0], "target": [0, 0], "unit": [0], "inverse": [0, 1],
        "compose": [[0,0,0],[0,1,1],[1,0,1],[1,1,0]]
    }"#;
    bin().args(["groupoid", "-"]).write_stdin(tables).assert().success();
    let broken = tables.replace("[1,1,0]", "[1,1,1]");
    bin().args(["groupoid", "-"]).write_stdin(broken).assert().code(1);
}
