use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_amice-kit"));
    c.env_remove("AMICE_KIT_MAX_ORDER");
    c
}

fn write(name: &str, v: &Value) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("amice-kit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, v.to_string()).unwrap();
    path
}

fn run(args: &[&str]) -> (i32, Value, Output) {
    run_with(bin(), args)
}

fn run_with(mut c: Command, args: &[&str]) -> (i32, Value, Output) {
    let out = c.args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout.clone()).unwrap();
    let v = serde_json::from_str(stdout.trim()).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v, out)
}

#[test]
fn bernoulli_twelve() {
    let (code, v, out) = run(&["bernoulli", "--n", "12"]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({"B": "-691/2730"}));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "{\"B\":\"-691/2730\"}\n");
}

#[test]
fn bernoulli_zero_is_a_domain_error() {
    let (code, v, out) = run(&["bernoulli", "--n", "0"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "domain");
    assert!(!out.stderr.is_empty());
}

#[test]
fn hopf_verify_reports_each_axiom() {
    for model in ["Z-trivial", "Q-arch"] {
        let (code, v, _) = run(&["hopf-verify", "--model", model, "--order", "12"]);
        assert_eq!(code, 0);
        assert_eq!(v, json!({"coassoc": "pass", "counit": "pass", "antipode": "pass"}));
    }
}

#[test]
fn unknown_model_is_a_schema_error() {
    let (code, v, _) = run(&["hopf-verify", "--model", "Q-complex", "--order", "3"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["kind"], "schema");
    assert_eq!(v["error"]["path"], "--model");
}

#[test]
fn nuclearity_of_the_disk() {
    let rows: Vec<Value> = (1..=5)
        .map(|j| json!({"kind": "geometric", "ratio": format!("{j}/{}", j + 1)}))
        .collect();
    let m = write("disk.json", &json!({"rows": rows}));
    let (code, v, _) = run(&["nuclearity", "--matrix", m.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({"nuclear": true, "rows": 5}));

    let flat = write(
        "flat.json",
        &json!({"rows": [{"kind": "geometric", "ratio": "1/2"}, {"kind": "geometric", "ratio": "1/2"}], "na": true}),
    );
    let (_, v, _) = run(&["nuclearity", "--matrix", flat.to_str().unwrap()]);
    assert_eq!(v["nuclear"], false);
}

#[test]
fn schema_errors_name_the_field() {
    let bad = write("bad-series.json", &json!({"model": "Z-trivial", "coeffs": [1, "x", 3]}));
    let (code, v, _) = run(&["norm", "--series", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["path"], "$.coeffs[1]");

    let decreasing = write(
        "decreasing.json",
        &json!({"rows": [{"kind": "geometric", "ratio": "2"}, {"kind": "geometric", "ratio": "1"}]}),
    );
    let (code, v, _) = run(&["nuclearity", "--matrix", decreasing.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["path"], "$.rows");

    let (code, _, _) = run(&["norm", "--series", "/nonexistent/series.json"]);
    assert_eq!(code, 2);
}

#[test]
fn mahler_expand_and_evaluate() {
    let t = write("pow3.json", &json!({"model": "Z-trivial", "values": [1, 3, 9, 27, 81]}));
    let (code, v, _) = run(&["mahler-expand", "--table", t.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(
        v,
        json!({"model": "Z-trivial", "basis": "mahler", "coeffs": ["1", "2", "4", "8", "16"], "tail": "unknown"})
    );

    let f = write(
        "binom3.json",
        &json!({"model": "Z-trivial", "basis": "mahler", "coeffs": [0, 0, 0, 1]}),
    );
    let (code, v, _) = run(&["evaluate", "--series", f.to_str().unwrap(), "--at", "7"]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({"value": "35"}));
    // binom(-2, 3) = -4
    let (code, v, _) = run(&["evaluate", "--series", f.to_str().unwrap(), "--at", "-2"]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({"value": "-4"}));
}

#[test]
fn pairing_and_amice() {
    let xi = write("xi.json", &json!({"model": "Z-trivial", "coeffs": [1, 2, 3]}));
    let f = write(
        "f.json",
        &json!({"model": "Z-trivial", "basis": "mahler", "coeffs": [4, 5, 6, 7]}),
    );
    let (code, v, _) = run(&["pairing", "--xi", xi.to_str().unwrap(), "--f", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({"value": "32", "error_bound": "0"}));

    let mu = write("mu.json", &json!({"model": "Z-trivial", "moments": [1, 2, 3]}));
    let (code, v, _) = run(&[
        "amice",
        "--moments",
        mu.to_str().unwrap(),
        "--against",
        f.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["integral"], "32");
    assert_eq!(v["transform"]["coeffs"], json!(["1", "2", "3"]));

    // monomial series on the Mahler side is refused
    let (code, v, _) = run(&["pairing", "--xi", xi.to_str().unwrap(), "--f", xi.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "domain");
}

#[test]
fn kubota_leopoldt_moments_are_bernoulli_numbers() {
    let (code, v, _) = run(&["moments", "--kubota-leopoldt", "--n", "4"]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({"power_moments": ["1", "-1/2", "1/6", "0", "-1/30"]}));
}

#[test]
fn membership_verdicts() {
    let s = write(
        "geom.json",
        &json!({"model": "Q-arch", "coeffs": [], "tail": {"start": 0, "C": "1", "r": "2", "sharp": true}}),
    );
    let m = write(
        "entire.json",
        &json!({"rows": [{"kind": "geometric", "ratio": "1/4"}, {"kind": "geometric", "ratio": "1"}]}),
    );
    let (code, v, _) = run(&[
        "membership",
        "--series",
        s.to_str().unwrap(),
        "--matrix",
        m.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "non-member");
    assert_eq!(v["witness"], 1);
    assert_eq!(v["rows"][0], json!({"status": "certified", "bound": "2"}));
    assert_eq!(v["rows"][1], json!({"status": "divergent"}));
}

#[test]
fn base_change_and_norms() {
    let f = write("ints.json", &json!({"model": "Z-trivial", "coeffs": [9, 0, 6]}));
    let (code, v, _) = run(&["base-change", "--series", f.to_str().unwrap(), "--to", "Qp:3"]);
    assert_eq!(code, 0);
    assert_eq!(v["model"], "Qp:3");
    let g = write("q3.json", &v);
    let (code, v, _) = run(&["norm", "--series", g.to_str().unwrap(), "--rho", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({"norm": "1/3"}));

    let (code, v, _) = run(&["norm", "--element", "-5/12", "--model", "Qp:2"]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({"norm": "4"}));
}

#[test]
fn output_is_deterministic_and_sorted() {
    let a = run(&["hopf-verify", "--model", "Q-na", "--order", "6"]).2.stdout;
    let b = run(&["hopf-verify", "--model", "Q-na", "--order", "6"]).2.stdout;
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    let keys: Vec<usize> = ["antipode", "coassoc", "counit"]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]), "{text}");

    let pretty = run(&["--pretty", "bernoulli", "--n", "2"]).2.stdout;
    assert_eq!(String::from_utf8(pretty).unwrap(), "{\n  \"B\": \"1/6\"\n}\n");
}

#[test]
fn order_cap_from_environment() {
    let mut c = bin();
    c.env("AMICE_KIT_MAX_ORDER", "8");
    let (code, v, _) = run_with(c, &["hopf-verify", "--model", "Z-trivial", "--order", "9"]);
    assert_eq!(code, 1);
    assert!(v["error"]["message"].as_str().unwrap().contains("AMICE_KIT_MAX_ORDER"));

    let mut c = bin();
    c.env("AMICE_KIT_MAX_ORDER", "lots");
    let (code, v, _) = run_with(c, &["bernoulli", "--n", "2"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["path"], "AMICE_KIT_MAX_ORDER");

    let (code, _, _) = run(&["hopf-verify", "--model", "Z-trivial", "--order", "257"]);
    assert_eq!(code, 1);
}

#[test]
fn usage_errors_exit_two() {
    let out = bin().args(["bernoulli"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["frobnicate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
