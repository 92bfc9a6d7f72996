use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsfactor"))
        .args(args)
        .env("LSFACTOR_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json_of(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn gamma_of_trivial_character() {
    let v = json_of(&["gamma", "--q", "3", "--char", "trivial", "--psi", "level=0"]);
    assert_eq!(v["schema"], "lsfactor/gamma/v1");
    assert_eq!(v["display"], "[(-3)Z + (3)Z^2] / [(1) + (-3)Z]");
}

#[test]
fn character_json_round_trips_through_the_command_line() {
    let a = json_of(&["eps", "--q", "5", "--char", "random:m=2,seed=9"]);
    let chi = serde_json::to_string(&a["char"]).unwrap();
    let b = json_of(&["eps", "--q", "5", "--char", &chi]);
    assert_eq!(a, b);
}

#[test]
fn every_group_produces_factors() {
    for group in ["GL", "SO_odd", "Sp", "SO_even", "U_even", "U_odd"] {
        let v = json_of(&[
            "lfun", "--q", "3", "--group", group, "--n", "1", "--m", "2", "--seed", "5",
        ]);
        assert_eq!(v["schema"], "lsfactor/lfun/v1");
        assert!(!v["factors"].as_array().unwrap().is_empty(), "{group}");
        let c = json_of(&[
            "coeff", "--q", "3", "--group", group, "--n", "1", "--seed", "5",
        ]);
        assert_eq!(c["gammas"].as_array().unwrap().len(), 2, "{group}");
    }
}

#[test]
fn lambda_and_satake() {
    for kind in ["split", "unramified", "ramified"] {
        let v = json_of(&["lambda", "--q", "3", "--kind", kind]);
        assert_eq!(v["schema"], "lsfactor/lambda/v1");
    }
    let v = json_of(&["satake", "--q", "3", "--rep", "std", "--x", "0/1,1/2"]);
    assert_eq!(v["display"], "[(1)] / [(1) + (-1)Z^2]");
    let v = json_of(&[
        "satake", "--q", "3", "--group", "U_odd", "--n", "2", "--seed", "1",
    ]);
    assert_eq!(v["identity_ok"], true);
}

#[test]
fn hecke_listing_and_functional_equation() {
    let list = json_of(&["hecke", "--q", "2", "--modulus", "t^3", "--list"]);
    assert_eq!(list["count"], 2);
    let v = json_of(&[
        "hecke",
        "--q",
        "2",
        "--modulus",
        "t^3",
        "--char-index",
        "1",
        "--verify-fe",
    ]);
    assert_eq!(v["fe_ok"], true);
    assert_eq!(v["L"].as_array().unwrap().len(), 2);
}

#[test]
fn sweep_and_verify_report_success() {
    let path = std::env::temp_dir().join(format!("lsfactor-sweep-{}.json", std::process::id()));
    let v = json_of(&[
        "sweep",
        "--q",
        "2,3",
        "--maxdeg",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(v["pass"], true);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(saved, v);
    std::fs::remove_file(&path).unwrap();
    let v = json_of(&["verify", "abelian", "--cases", "5", "--q", "3"]);
    assert_eq!(v["report"]["pass"], true);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["verify", "crude", "--cases", "2"];
    let one = Command::new(env!("CARGO_BIN_EXE_lsfactor"))
        .args(args)
        .env("LSFACTOR_THREADS", "1")
        .output()
        .unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_lsfactor"))
        .args(args)
        .env("LSFACTOR_THREADS", "4")
        .output()
        .unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn table_format() {
    let out = run(&["--format", "table", "gamma", "--q", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text
        .lines()
        .any(|l| l.starts_with("schema") && l.ends_with("lsfactor/gamma/v1")));
}

#[test]
fn bad_input_exits_with_structured_error() {
    for args in [
        vec!["gamma", "--q", "6"],
        vec!["gamma", "--q", "3", "--char", "{not json"],
        vec!["lfun", "--q", "3", "--group", "E8"],
        vec!["hecke", "--q", "2", "--modulus", "t^3", "--char-index", "7"],
        vec!["verify", "nonsense"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
        assert_eq!(err["schema"], "lsfactor/error/v1");
    }
}
