use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn monogamy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_monogamy"))
        .args(args)
        .output()
        .unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = monogamy(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn num(v: &Value, pointer: &str) -> f64 {
    v.pointer(pointer)
        .and_then(Value::as_f64)
        .unwrap_or_else(|| panic!("missing {pointer}"))
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn numbers(v: &Value, out: &mut Vec<f64>) {
    match v {
        Value::Number(n) => out.push(n.as_f64().unwrap()),
        Value::Array(a) => a.iter().for_each(|x| numbers(x, out)),
        Value::Object(o) => o.values().for_each(|x| numbers(x, out)),
        _ => {}
    }
}

#[test]
fn compute_ghz() {
    let r = json(&["compute", "--state", "ghz"]);
    assert!((num(&r, "/pivots/0/residual_nonlocality") - 1.0).abs() <= 1e-10);
    assert!((num(&r, "/tangle") - 1.0).abs() <= 1e-10);
    assert!((num(&r, "/cuts/0/m") - 2.0).abs() <= 1e-10);
    assert_eq!(r["inequalities"].as_array().unwrap().len(), 12);
}

#[test]
fn compute_zero_state_has_classical_chsh_everywhere() {
    let r = json(&["compute", "--state", "named:zero"]);
    for section in ["pairs", "cuts"] {
        for entry in r[section].as_array().unwrap() {
            assert!((num(entry, "/chsh") - 2.0).abs() <= 1e-10, "{entry}");
        }
    }
}

#[test]
fn acin_route_matches_named_ghz() {
    let h = "0.7071067811865476";
    let a = json(&["compute", "--state", &format!("acin:{h},0,0,0,{h},0")]);
    let b = json(&["compute", "--state", "ghz"]);
    let (mut xa, mut xb) = (Vec::new(), Vec::new());
    numbers(&a, &mut xa);
    numbers(&b, &mut xb);
    assert_eq!(xa.len(), xb.len());
    for (x, y) in xa.iter().zip(&xb) {
        assert!((x - y).abs() <= 1e-12, "{x} vs {y}");
    }
}

#[test]
fn compute_text_and_pivot() {
    let out = monogamy(&["compute", "--state", "w", "--pivot", "2", "--format", "text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("pivot: C"));
    assert!(text.contains("8.8888888888888"), "{text}");
    assert!(!text.contains("VIOLATED"));
}

#[test]
fn numbers_are_written_with_17_significant_digits() {
    let out = monogamy(&["compute", "--state", "w"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"m\": 8.8888888888888"), "{text}");
    assert!(text.contains("e-1"));
}

#[test]
fn compute_reads_state_files_of_any_supported_size() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ghz4.json");
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![[0.0, 0.0]; 16];
    amps[0] = [h, 0.0];
    amps[15] = [0.0, h];
    std::fs::write(
        &path,
        serde_json::json!({"n_qubits": 4, "amplitudes": amps, "note": "x"}).to_string(),
    )
    .unwrap();
    let r = json(&["compute", "--state", &format!("file:{}", path.display())]);
    let names: Vec<&str> = r["inequalities"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["eq12", "eq13", "eq14", "eq16"]);
    assert!(r.get("tangle").is_none());
    assert_eq!(r["pairs"].as_array().unwrap().len(), 6);
}

#[test]
fn malformed_inputs_exit_2_with_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"n_qubits\": 3,\n  \"amplitudes\": [1, 0\n}").unwrap();
    let out = monogamy(&["compute", "--state", &format!("file:{}", path.display())]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line"), "{}", stderr(&out));

    let out = monogamy(&["compute", "--state", "acin:0.5,0.5,oops,0.5,0.5,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("field 3"));

    for args in [
        &["compute", "--state", "bell"][..],
        &["compute", "--state", "ghz", "--pivot", "D"],
        &["compute"],
        &["verify", "--sampler", "sobol"],
        &["search", "--objective", "min-margin:nope"],
    ] {
        assert_eq!(monogamy(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_unknown_inequality() {
    let out = monogamy(&["verify", "--ineq", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("unknown inequality identifier `bogus`"));
}

#[test]
fn verify_haar_campaign_passes() {
    let out = monogamy(&[
        "verify",
        "--sampler",
        "haar",
        "--n",
        "10000",
        "--seed",
        "42",
        "--ineq",
        "all",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn verify_writes_identical_csv_and_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let csv = dir.path().join(format!("{name}.csv"));
        let summary = dir.path().join(format!("{name}.json"));
        let out = monogamy(&[
            "verify",
            "--sampler",
            "acin",
            "--n",
            "1000",
            "--ineq",
            "thm8",
            "--seed",
            "7",
            "--csv",
            csv.to_str().unwrap(),
            "--summary",
            summary.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        (std::fs::read(csv).unwrap(), std::fs::read_to_string(summary).unwrap())
    };
    let (a, summary) = run("a");
    let (b, _) = run("b");
    assert_eq!(a, b);

    let s: Value = serde_json::from_str(&summary).unwrap();
    assert_eq!(s["samples"], 1000);
    assert_eq!(s["total_violations"], 0);
    let mut rdr = csv::Reader::from_reader(a.as_slice());
    let min = rdr
        .records()
        .map(|r| r.unwrap()[5].parse::<f64>().unwrap())
        .fold(f64::INFINITY, f64::min);
    assert_eq!(min, num(&s, "/inequalities/0/min_margin"));
}

#[test]
fn verify_reports_violations_with_exit_1() {
    // W saturates eq15; with zero tolerance its roundoff-level margin counts.
    let out = monogamy(&["verify", "--sampler", "named:w", "--ineq", "eq15", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
}

#[test]
fn unwritable_output_paths_exit_3() {
    let missing = Path::new("/nonexistent-dir/out");
    let out = monogamy(&["verify", "--n", "5", "--csv", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let out = monogamy(&[
        "search",
        "--objective",
        "max-residual",
        "--iters",
        "5",
        "--out",
        missing.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(
        monogamy(&["compute", "--state", "file:/nonexistent-dir/s.json"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn search_document_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("best.json");
    let out = monogamy(&[
        "search",
        "--objective",
        "max-residual-asymmetry",
        "--seed",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["n_qubits"], 3);
    assert!(matches!(doc["status"].as_str(), Some("converged" | "iteration-limit")));
    assert!(!doc["trace"].as_array().unwrap().is_empty());
    let objective = num(&doc, "/objective");
    assert!(objective > 0.01);

    let r = json(&["compute", "--state", &format!("file:{}", path.display())]);
    let again = (num(&r, "/pivots/0/residual_nonlocality") - num(&r, "/pivots/1/residual_nonlocality")).abs();
    assert!((again - objective).abs() <= 1e-10);
}

#[test]
fn search_without_out_prints_the_document() {
    let v = json(&["search", "--objective", "min-margin:eq6", "--restarts", "2"]);
    assert!(num(&v, "/objective") <= 1e-6);
    assert_eq!(v["objective_kind"], "min-margin:eq6");
}
