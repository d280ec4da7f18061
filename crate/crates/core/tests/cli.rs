use std::process::{Command, Output};

use serde_json::Value;

fn qtwist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qtwist"))
        .args(args)
        .env_remove("QTWIST_FACTOR_BOUND")
        .output()
        .expect("binary runs")
}

fn json_lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("stdout line is JSON"))
        .collect()
}

fn single(args: &[&str]) -> Value {
    let out = qtwist(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let mut v = json_lines(&out);
    assert_eq!(v.len(), 1);
    v.pop().unwrap()
}

#[test]
fn hilbert_and_quaternion() {
    let v = single(&["hilbert", "--a", "-1", "--b", "-1", "--place", "2"]);
    assert_eq!(v["symbol"], -1);
    assert_eq!(v["schema"], "1");
    let v = single(&["hilbert", "--a", "-1", "--b", "-1", "--place", "inf"]);
    assert_eq!(v["symbol"], -1);
    let v = single(&["quaternion", "--a", "-7", "--b", "3"]);
    assert_eq!(v["reduced_discriminant"], "21");
    assert_eq!(v["ramified"], serde_json::json!(["3", "7"]));
    assert_eq!(v["trivial"], false);
}

#[test]
fn classify_reports_cases() {
    let v = single(&["classify", "--d", "-3", "--e", "-2", "--m", "-2"]);
    assert_eq!(v["cases"], serde_json::json!({"A": false, "B": true, "C": false, "D": false}));
    assert_eq!(v["has_primitive_twist"], true);
    assert_eq!(v["xi"]["sign_class"], "eta2");

    let v = single(&["classify", "--d", "6", "--e", "3"]);
    assert_eq!(v["cases"], serde_json::json!({"A": true, "B": false, "C": false, "D": true}));

    let v = single(&["classify", "--d", "5", "--e", "3"]);
    assert_eq!(v["cases"], serde_json::json!({"A": false, "B": false, "C": false, "D": false}));
}

#[test]
fn gamma_round_trips_through_galois_type() {
    for (case, d, e, class) in [("A", "6", "3", "h0"), ("D", "6", "3", "h_de"), ("C", "7", "3", "h_e"), ("B", "-3", "-2", "h_d")] {
        let g = single(&["gamma", "--case", case, "--d", d, "--e", e]);
        assert_eq!(g["class"], class);
        let t = serde_json::to_string(&g["t"]).unwrap();
        let v = single(&["galois-type", "--d", d, "--e", e, "--gamma", &t]);
        assert_eq!(v["galois"], true);
        assert_eq!(v["class"], class, "case {case} over ({d},{e})");
    }
}

#[test]
fn twist_reproduces_integral_model() {
    let curve = r#"{"d":"6","e":"3","a4":["-90","-12","0","0"],"a6":["168","136","0","0"]}"#;
    let v = single(&["twist", "--curve", curve, "--gamma", r#"["3","1","0","0"]"#, "--scale", "2"]);
    assert_eq!(v["curve"]["a4"], serde_json::json!(["-28512", "-11520", "0", "0"]));
    assert_eq!(v["curve"]["a6"], serde_json::json!(["2594304", "1059840", "0", "0"]));
    assert_eq!(v["integral"], true);

    // the printed curve feeds back in as input
    let again = serde_json::to_string(&v["curve"]).unwrap();
    let w = single(&["twist", "--curve", &again, "--gamma", r#"["1","0","0","0"]"#]);
    assert_eq!(w["curve"], v["curve"]);
    assert_eq!(w["j"], v["j"]);
}

#[test]
fn worked_examples_all_pass() {
    let out = qtwist(&["paper-examples"]);
    assert_eq!(out.status.code(), Some(0));
    let lines = json_lines(&out);
    let summary = lines.last().unwrap();
    assert_eq!(summary["failed"], 0);
    assert!(summary["checks"].as_u64().unwrap() >= 20);
    assert!(lines[..lines.len() - 1].iter().all(|l| l["pass"] == true));
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| qtwist(args).status.code();
    assert_eq!(code(&["classify", "--d", "4", "--e", "3"]), Some(2));
    assert_eq!(code(&["classify", "--d", "3", "--e", "3"]), Some(2));
    assert_eq!(code(&["gamma", "--case", "A", "--d", "5", "--e", "3"]), Some(2));
    assert_eq!(code(&["hilbert", "--a", "2", "--b", "3", "--place", "4"]), Some(2));
    assert_eq!(code(&["hilbert", "--a", "0", "--b", "3", "--place", "3"]), Some(2));
    assert_eq!(code(&["gamma", "--case", "A", "--d", "6", "--e", "3", "--height", "0"]), Some(3));
    assert_eq!(code(&["frobnicate"]), Some(2));

    let out = qtwist(&["classify", "--d", "4", "--e", "3"]);
    let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    assert_eq!(err["exit_code"], 2);
    assert!(err["error"].is_string());
}

#[test]
fn factor_bound_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_qtwist"))
        .args(["quaternion", "--a", "-10007", "--b", "10009"])
        .env("QTWIST_FACTOR_BOUND", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let out = qtwist(&["quaternion", "--a", "-10007", "--b", "10009"]);
    assert_eq!(out.status.code(), Some(0));
}
