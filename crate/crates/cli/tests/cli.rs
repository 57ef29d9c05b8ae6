use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

use twistab_core::json::{to_canonical_json, InputDocument};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn twistab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_twistab")).args(args).output().expect("runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).expect("stderr is JSON")
}

fn temp_file(name: &str, contents: &[u8]) -> PathBuf {
    let p = std::env::temp_dir().join(format!("twistab-{}-{name}", std::process::id()));
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn xm_of_a_sixth_root() {
    let o = twistab(&["xm", "--monoid", r#"[["1/6"]]"#, "--m", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o), serde_json::json!({ "invariant_factors": [2] }));
}

#[test]
fn torsors_for_one_involution_point() {
    let o = twistab(&["torsors", "--orders", "2", "--m", "2", "--group", "S3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o), serde_json::json!({ "count": 2 }));
    let brute = twistab(&["oracle", "torsors", "--orders", "2", "--m", "2", "--group", "S3"]);
    assert_eq!(stdout_json(&brute), stdout_json(&o));
}

#[test]
fn empty_curve_is_an_input_error() {
    let p = temp_file("empty.json", b"{}");
    let o = twistab(&["validate", "--curve", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr_json(&o);
    assert_eq!(e["message"], "curve must be connected and nonempty");
    assert_eq!(e["code"], "invalid_curve");
}

#[test]
fn malformed_json_is_located() {
    let p = temp_file("broken.json", b"{\"n\": 2,\n \"vertices\": [}");
    let o = twistab(&["validate", "--curve", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr_json(&o)["location"].as_str().unwrap().starts_with("curve:2:"));
}

#[test]
fn unknown_element_is_located() {
    let doc = std::fs::read_to_string(fixture("s3_tail.json")).unwrap().replacen("(1 2)", "(1 9)", 1);
    let p = temp_file("bad-element.json", doc.as_bytes());
    let o = twistab(&["validate", "--input", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr_json(&o);
    assert_eq!(e["code"], "bad_element");
    assert_eq!(e["location"], "monodromy.v0[0]");
}

#[test]
fn same_chamber_exit_codes() {
    assert_eq!(twistab(&["same-chamber", "1/2,1/2", "1/3,1/3"]).status.code(), Some(0));
    let o = twistab(&["same-chamber", "1/2,1/2", "1,1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["same_chamber"], false);
    assert_eq!(twistab(&["same-chamber", "1/2", "1,1"]).status.code(), Some(2));
}

#[test]
fn stability_exit_codes() {
    let f = fixture("s3_tail.json");
    let o = twistab(&["stability", "--input", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["weighted_ok"], false);
    let heavier = twistab(&["stability", "--input", f.to_str().unwrap(), "--weights", "1/2,1,1"]);
    assert_eq!(heavier.status.code(), Some(0));
    assert_eq!(stdout_json(&heavier)["stable"], true);
}

#[test]
fn stabilize_contracts_the_abelian_tail() {
    let f = fixture("s3_tail.json");
    let o = twistab(&["stabilize", "--input", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let rec = stdout_json(&o);
    assert_eq!(rec["trace"], serde_json::json!([{ "kind": "tail", "vertex": "v1" }]));
    let clusters = &rec["curve"]["vertices"][0]["clusters"];
    assert_eq!(clusters[1]["markings"], serde_json::json!([2, 3]));
    assert_eq!(clusters[1]["local_group"], serde_json::json!([2]));
    assert_eq!(rec["monodromy"]["v0"][0]["point"], "cluster:1");
}

#[test]
fn stabilize_contracts_the_bridge() {
    let f = fixture("trivial_bridge.json");
    let rec = stdout_json(&twistab(&["stabilize", "--input", f.to_str().unwrap()]));
    assert_eq!(rec["trace"], serde_json::json!([{ "kind": "bridge", "vertex": "b" }]));
    assert_eq!(rec["curve"]["edges"], serde_json::json!([{ "id": "e1", "ends": [["a", 0], ["c", 0]], "order": 1 }]));
}

#[test]
fn stabilize_reports_a_missing_stable_model() {
    let f = fixture("trivial_bridge.json");
    let o = twistab(&["stabilize", "--input", f.to_str().unwrap(), "--weights", "1/2,1/2,1/2,1/2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["code"], "no_stable_model");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let f = fixture("s3_tail.json");
    for order in ["ascending", "descending", "shuffled:7"] {
        let a = twistab(&["stabilize", "--input", f.to_str().unwrap(), "--order", order]);
        let b = twistab(&["stabilize", "--input", f.to_str().unwrap(), "--order", order]);
        assert_eq!(a.stdout, b.stdout);
    }
    assert_eq!(twistab(&["chambers", "-n", "3"]).stdout, twistab(&["chambers", "-n", "3"]).stdout);
}

#[test]
fn reduce_reads_back_a_record() {
    let f = fixture("s3_tail.json");
    let rec = twistab(&["stabilize", "--input", f.to_str().unwrap(), "--weights", "1/2,1,1"]);
    assert_eq!(stdout_json(&rec)["trace"], serde_json::json!([]));
    let p = temp_file("record.json", &rec.stdout);
    let o = twistab(&["reduce", "--record", p.to_str().unwrap(), "--group", "S3", "--weights", "1/2,1/2,1/2"]);
    assert_eq!(o.status.code(), Some(0));
    let direct = twistab(&["stabilize", "--input", f.to_str().unwrap()]);
    assert_eq!(o.stdout, direct.stdout);
    let up = twistab(&["reduce", "--record", p.to_str().unwrap(), "--group", "S3", "--weights", "1,1,1"]);
    assert_eq!(up.status.code(), Some(2));
    assert_eq!(stderr_json(&up)["code"], "not_dominated");
}

#[test]
fn chambers_counts_and_limits() {
    for (n, count) in [(1, 1), (2, 2), (3, 9)] {
        let v = stdout_json(&twistab(&["chambers", "-n", &n.to_string()]));
        assert_eq!(v["count"], count);
        let grid = stdout_json(&twistab(&["oracle", "grid", "-n", &n.to_string()]));
        assert_eq!(grid["count"], count);
    }
    assert_eq!(twistab(&["chambers", "-n", "6"]).status.code(), Some(2));
}

#[test]
fn picard_agrees_with_the_minors_oracle() {
    for (orders, m) in [("2,2", "2"), ("2,3", "6"), ("", "1"), ("4,6,2", "4")] {
        let a = twistab(&["picard", "--orders", orders, "--m", m]);
        let b = twistab(&["oracle", "abelianization", "--orders", orders, "--m", m]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(stdout_json(&a), stdout_json(&b));
    }
}

#[test]
fn xm_agrees_with_the_closure_oracle() {
    let fast = stdout_json(&twistab(&["xm", "--monoid", r#"[["1/2","1/2"],["0","1/3"]]"#, "--m", "2"]));
    let slow = stdout_json(&twistab(&["oracle", "xm", "--monoid", r#"[["1/2","1/2"],["0","1/3"]]"#, "--m", "2"]));
    let order: u64 = fast["invariant_factors"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).product();
    assert_eq!(serde_json::json!(order), slow["xm_order"]);
}

#[test]
fn classical_oracle_matches_on_the_bridge() {
    let f = fixture("trivial_bridge.json");
    let v = stdout_json(&twistab(&["oracle", "stabilize", "--input", f.to_str().unwrap()]));
    assert_eq!(v["stable_model"]["edges"], serde_json::json!([["a", "c"]]));
    let dm = twistab(&["oracle", "dm-stable", "--input", f.to_str().unwrap()]);
    assert_eq!(dm.status.code(), Some(1));
}

#[test]
fn fuzz_honours_the_seed() {
    let o = Command::new(env!("CARGO_BIN_EXE_twistab"))
        .args(["oracle", "fuzz", "--cases", "30"])
        .env("TWISTAB_SEED", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let v = stdout_json(&o);
    assert_eq!(v["seed"], 5);
    assert_eq!(v["failures"], serde_json::json!([]));
}

#[test]
fn schemas_are_shipped() {
    let all = stdout_json(&twistab(&["--schema"]));
    for name in ["chambers", "curve", "error", "group", "input", "monodromy", "record", "stability"] {
        assert_eq!(all[name]["$id"], format!("{name}.schema.json"));
        let one = stdout_json(&twistab(&["--schema", name]));
        assert_eq!(one, all[name]);
    }
    assert_eq!(twistab(&["--schema", "nope"]).status.code(), Some(2));
}

#[test]
fn usage_errors_are_json() {
    let o = twistab(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["code"], "usage");
    assert_eq!(twistab(&[]).status.code(), Some(2));
}

#[test]
fn fixtures_round_trip_to_canonical_form() {
    for entry in std::fs::read_dir(fixture("")).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let doc: InputDocument = serde_json::from_str(&text).unwrap();
        let raw: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(to_canonical_json(&doc), to_canonical_json(&raw), "{}", path.display());
        assert_eq!(to_canonical_json(&raw) + "\n", text, "{} is not stored canonically", path.display());
    }
}
