use std::process::{Command, Output};

use serde_json::Value;

fn qharm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qharm")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = qharm(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn code(args: &[&str]) -> i32 {
    qharm(args).status.code().unwrap_or(-1)
}

#[test]
fn laplacian_eigenvalue_example() {
    let v = json(&["disc", "--q", "1/2", "lambda", "--l", "1"]);
    assert_eq!(v["command"], "disc");
    assert_eq!(v["rows"][0]["l"], 1);
    assert_eq!(v["rows"][0]["lambda"], -5);
    assert!(v["provenance"]["laplacian-eigenvalue"].is_string());
    assert_eq!(v["params"]["q"], "1/2");
}

#[test]
fn anick_example_rules() {
    let v = json(&["groebner", "--preset", "anick_example"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!((rows[0]["lhs"].as_str(), rows[0]["rhs"].as_str()), (Some("x*x"), Some("-y*y")));
    assert_eq!((rows[1]["lhs"].as_str(), rows[1]["rhs"].as_str()), (Some("x*y*y"), Some("y*y*x")));
}

#[test]
fn q_gamma_example() {
    let v = json(&["qseries", "--q", "1/2", "gamma", "--x", "3"]);
    assert_eq!(v["rows"][0]["value"], "3/2");
    let out = qharm(&["qseries", "--q", "1/2", "gamma", "--x", "3", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "tag,x,value\nq-gamma,3,3/2\n");
}

#[test]
fn csv_floats_use_a_point() {
    let out = qharm(&["bergman", "berezin", "--lambda", "3", "--n", "3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(1), Some("berezin-transform,0,0.9375"));
    assert!(!text.contains(";"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["verify", "--seed", "7", "--cases", "3"][..],
        &["star", "--f", "z* + 2 z*^2", "--g", "z z*", "--order", "2"],
        &["disc", "--float", "phi", "--rho", "0.4", "--n", "6", "--format", "csv"],
    ] {
        let (a, b) = (qharm(args), qharm(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn verify_passes() {
    let v = json(&["verify", "--cases", "4"]);
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.len() >= 8);
    assert!(rows.iter().all(|r| r["passed"] == true), "{v}");
}

#[test]
fn exit_codes() {
    // validation
    assert_eq!(code(&["disc", "--q", "3/2", "lambda", "--l", "1"]), 1);
    assert_eq!(code(&["disc", "--q", "abc", "lambda", "--l", "1"]), 1);
    assert_eq!(code(&["--exact", "disc", "eigen"]), 1);
    assert_eq!(code(&["bergman", "norm", "--lambda", "1"]), 1);
    assert_eq!(code(&["--exact", "qseries", "exp", "--z", "1/4"]), 1);
    let err = String::from_utf8(qharm(&["bergman", "norm", "--lambda", "1"]).stderr).unwrap();
    assert!(err.contains("lambda"), "{err}");
    // nonconvergence
    assert_eq!(code(&["--float", "--trunc", "3", "qseries", "hyper", "--upper", "0.5,0.5", "--lower", "0.25", "--z", "0.9"]), 2);
    // completion cap
    let dir = std::env::temp_dir().join("qharm-cli-cap.txt");
    std::fs::write(&dir, "alphabet: x > y\nx*y*x - y*x*y\n").unwrap();
    assert_eq!(code(&["groebner", "--file", dir.to_str().unwrap(), "--degree-cap", "5"]), 3);
}

#[test]
fn out_file_and_relation_files() {
    let dir = std::env::temp_dir();
    let rel = dir.join("qharm-cli-plane.txt");
    std::fs::write(&rel, "alphabet: t2 > t1\nt2*t1 - q*t1*t2\n").unwrap();
    let out = dir.join("qharm-cli-out.json");
    let status = qharm(&["groebner", "--file", rel.to_str().unwrap(), "--words", "2", "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["rows"][0]["rhs"], "q*t1*t2");
    let words: Vec<&Value> = v["rows"].as_array().unwrap().iter().filter(|r| r["tag"] == "normal-words").collect();
    assert_eq!(words.iter().map(|r| r["count"].as_i64().unwrap()).collect::<Vec<_>>(), vec![1, 2, 3]);
}

#[test]
fn module_commands_run() {
    for args in [
        &["qseries", "poch", "--a", "1/3", "--n", "4"][..],
        &["--float", "qseries", "poch", "--a", "0.3", "--n", "inf"],
        &["qseries", "binom", "--n", "4", "--k", "2"],
        &["qseries", "qnum", "--x", "2"],
        &["qseries", "exp", "--z", "1/4", "--kind", "big"],
        &["qseries", "hyper", "--upper", "1/4", "--z", "1/3"],
        &["orth", "norm", "--family", "q-hahn", "--alpha", "1/2", "--beta", "1/2", "--big-n", "3", "--n", "3"],
        &["--float", "orth", "eval", "--family", "askey-wilson", "--a", "0.1", "--b", "0.2", "--c", "0.3", "--d", "0.4", "--n", "3", "--x", "0.5", "--method", "recurrence"],
        &["disc", "laplacian", "--expr", "z z*"],
        &["disc", "fock", "--expr", "z* z", "--n", "4"],
        &["disc", "phi", "--l", "1", "--n", "4"],
        &["disc", "density", "--points", "5"],
        &["disc", "radial", "--n", "4"],
        &["disc", "eigen", "--n", "10"],
        &["disc", "green", "--m", "20", "--n", "4"],
        &["disc", "cfun", "--l", "0.7"],
        &["bergman", "norm", "--lambda", "2", "--n", "4"],
        &["bergman", "toeplitz", "--lambda", "2", "--symbol", "y^2", "--n", "4"],
        &["--float", "bergman", "toeplitz", "--lambda", "2.5", "--symbol", "zs", "--n", "4"],
        &["bergman", "product", "--lambda", "3", "--n", "4"],
        &["bergman", "ppoly", "--j", "2"],
    ] {
        let out = qharm(args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(!v["rows"].as_array().unwrap().is_empty(), "{args:?}");
    }
    let v = json(&["bergman", "toeplitz", "--lambda", "2", "--symbol", "zs", "--n", "3"]);
    assert_eq!(v["rows"][0]["value"], "4/5");
}
