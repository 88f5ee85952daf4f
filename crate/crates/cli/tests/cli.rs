use std::path::PathBuf;
use std::process::{Command, Output};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn board(name: &str) -> String {
    root().join("boards").join(format!("{name}.json")).display().to_string()
}

fn mermin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mermin")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Compares against `tests/golden/<name>`; set `UPDATE_GOLDEN=1` to rewrite.
fn golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden file {name}");
}

#[test]
fn decide_canonical_boards() {
    for (name, verdict) in [("square", "magic\n"), ("pentagram", "magic\n"), ("triangle", "not magic\n")] {
        let o = mermin(&["decide", "--arrangement", &board(name)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
        assert_eq!(stdout(&o), verdict);
    }
}

#[test]
fn bad_degree_is_rejected() {
    let o = mermin(&["validate", "--arrangement", &board("bad-degree")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("DegreeError"), "{}", stderr(&o));

    let o = mermin(&["validate", "--arrangement", &board("square")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "valid: 9 vertices, 6 hyperedges, signing parity -1\n");

    let o = mermin(&["validate", "--arrangement", "/nonexistent/board.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn certificate_round_trip_and_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("out.json");
    let cert_s = cert.display().to_string();
    let o = mermin(&["decide", "--arrangement", &board("triangle"), "--certificate", &cert_s]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "not magic\n");
    golden("triangle-certificate.json", &std::fs::read_to_string(&cert).unwrap());

    let o = mermin(&["certify", "--arrangement", &board("triangle"), "--trace", &cert_s]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "+1\n");

    let mut envelope: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    envelope["trace"]["steps"].as_array_mut().unwrap().remove(0);
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, envelope.to_string()).unwrap();
    let o = mermin(&["certify", "--arrangement", &board("triangle"), "--trace", &bad.display().to_string()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("IllegalStep") && stderr(&o).contains("illegal step"), "{}", stderr(&o));
}

#[test]
fn synthesized_realization_certifies() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["square", "pentagram"] {
        let out = dir.path().join(format!("{name}.json"));
        let o = mermin(&["synthesize", "--arrangement", &board(name), "--output", &out.display().to_string()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let envelope: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(envelope["verdict"], "magic");
        let rfile = dir.path().join(format!("{name}-realization.json"));
        std::fs::write(&rfile, envelope["realization"].to_string()).unwrap();
        let o = mermin(&["certify", "--arrangement", &board(name), "--realization", &rfile.display().to_string()]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert_eq!(stdout(&o), "verified: parity -1\n");

        let mut broken = envelope["realization"].clone();
        let first = broken["operators"].as_object().unwrap().keys().next().unwrap().clone();
        broken["operators"][&first] = serde_json::Value::String(if name == "square" { "+II" } else { "+III" }.into());
        std::fs::write(&rfile, broken.to_string()).unwrap();
        let o = mermin(&["certify", "--arrangement", &board(name), "--realization", &rfile.display().to_string()]);
        assert_eq!(o.status.code(), Some(2));
    }
    let o = mermin(&["synthesize", "--arrangement", &board("square")]);
    golden("square-synthesize.json", &stdout(&o));
}

#[test]
fn simulate_reports() {
    let o = mermin(&["simulate", "--arrangement", &board("square"), "--exact"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["win_probability"], 1.0);
    assert_eq!(report["per_query_breakdown"].as_array().unwrap().len(), 18);
    golden("square-quantum-exact.json", &stdout(&o));

    let o = mermin(&["simulate", "--arrangement", &board("square"), "--strategy", "classical", "--exact"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((report["win_probability"].as_f64().unwrap() - 17.0 / 18.0).abs() < 1e-12);

    let args = ["simulate", "--arrangement", &board("square"), "--strategy", "classical", "--trials", "500", "--seed", "7"];
    let first = mermin(&args);
    assert_eq!(stdout(&first), stdout(&mermin(&args)));
    golden("square-classical-mc.json", &stdout(&first));

    let o = mermin(&["simulate", "--arrangement", &board("pentagram"), "--exact", "--literal-measurements"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((report["win_probability"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let o = mermin(&["simulate", "--arrangement", &board("square"), "--trials", "300"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["win_probability"], 1.0);
}

#[test]
fn simulate_rejects_impossible_quantum_strategy() {
    // The triangle board carries an odd signing and is not magic.
    let o = mermin(&["simulate", "--arrangement", &board("triangle")]);
    assert_eq!(o.status.code(), Some(1));
    let o = mermin(&["simulate", "--arrangement", &board("triangle"), "--strategy", "classical", "--exact"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((report["win_probability"].as_f64().unwrap() - 5.0 / 6.0).abs() < 1e-12);
}

#[test]
fn strategy_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("strategy.json");
    std::fs::write(
        &file,
        r#"{"alice": {"a": 1, "b": 1, "c": 1},
            "bob": {"ab": {"a": -1, "b": 1}, "bc": {"b": 1, "c": 1}, "ca": {"c": 1, "a": 1}}}"#,
    )
    .unwrap();
    let o = mermin(&["simulate", "--arrangement", &board("triangle"), "--strategy", &file.display().to_string(), "--exact"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((report["win_probability"].as_f64().unwrap() - 5.0 / 6.0).abs() < 1e-12);
}

#[test]
fn gen_and_export_are_deterministic() {
    let o = mermin(&["gen", "--hyperedges", "5", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), stdout(&mermin(&["gen", "--hyperedges", "5", "--seed", "7"])));
    golden("gen-5-7.json", &stdout(&o));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gen.json");
    std::fs::write(&path, stdout(&o)).unwrap();
    let o = mermin(&["validate", "--arrangement", &path.display().to_string()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let o = mermin(&["gen", "--hyperedges", "1"]);
    assert_eq!(o.status.code(), Some(1));

    let o = mermin(&["export-dot", "--arrangement", &board("square")]);
    golden("square.dot", &stdout(&o));
}
