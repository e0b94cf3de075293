use std::fs;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gwdesc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap().trim_end().to_string()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn correlator_values() {
    assert_eq!(ok(&["correlator", "--model", "P1", "--beta", "1", "--ins", "tau(1):one,tau(0):h"]), "-1");
    assert_eq!(ok(&["correlator", "--model", "P2", "--qmax", "1", "--ins", "tau(0):h2,tau(0):h2,tau(0):h"]), "1·q^[1]");
    assert_eq!(ok(&["correlator", "--model", "P1", "--beta", "0", "--ins", "tau(0):h,tau(0):h"]), "0");
    assert_eq!(ok(&["correlator", "--model", "P2", "--beta", "3", "--ins", &["h2"; 8].join(",")]), "12");
    assert_eq!(ok(&["correlator", "--model", "point", "--ins", "tau(0,1):one,tau(0,1):one,tau(0,1):one,one,one,one"]), "6");
}

#[test]
fn bad_queries_exit_with_two() {
    let o = run(&["correlator", "--model", "P1", "--genus", "1", "--beta", "1", "--ins", "tau(0):h"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("out of scope"));
    let o = run(&["correlator", "--model", "P1", "--beta", "1", "--ins", "tau(0):h,tau(0):h9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("position 16"));
    assert_eq!(run(&["correlator", "--model", "P9", "--beta", "1"]).status.code(), Some(2));
    assert_eq!(run(&["intersect", "--n", "2", "--psi", "0,0"]).status.code(), Some(2));
}

#[test]
fn psi_integrals() {
    assert_eq!(ok(&["intersect", "--n", "5", "--psi", "1,1,0,0,0"]), "2");
    assert_eq!(ok(&["intersect", "--n", "3", "--psi", "0,0,0"]), "1");
    assert_eq!(ok(&["intersect", "--n", "4", "--psi", "2,0,0,0"]), "0");
}

#[test]
fn transform_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let args = |p: &std::path::Path| {
        vec![
            "transform".to_string(),
            "--model".into(),
            "P1".into(),
            "--qmax".into(),
            "1".into(),
            "--dmax".into(),
            "2".into(),
            "--out".into(),
            p.display().to_string(),
        ]
    };
    for p in [&a, &b] {
        let v = args(p);
        ok(&v.iter().map(String::as_str).collect::<Vec<_>>());
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text.contains(r#"{"row":[0,0],"col":[1,1],"beta":[1],"value":"1"}"#));
    assert!(text.contains(r#"{"row":[0,0],"col":[2,0],"beta":[1],"value":"-1"}"#));
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["T"].as_array().unwrap().len(), 10);

    let trivial = ok(&["transform", "--model", "P1", "--qmax", "0", "--dmax", "2"]);
    let doc: serde_json::Value = serde_json::from_str(&trivial).unwrap();
    for e in doc["T"].as_array().unwrap() {
        assert_eq!(e["row"], e["col"]);
        assert_eq!(e["value"], "1");
    }
}

#[test]
fn verify_suites() {
    let out = ok(&["verify", "--model", "P1", "--suite", "thm22", "--xdeg", "4", "--dmax", "3", "--qmax", "3"]);
    assert!(out.contains("thm22") && out.contains("pass"));
    ok(&["verify", "--model", "P2", "--suite", "gamma0-independence", "--qmax", "3"]);
    ok(&["verify", "--model", "point", "--suite", "eq11-oracle", "--nmax", "7"]);
    let o = run(&["verify", "--model", "P1", "--suite", "thm99"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn corrupted_table_fails_identities() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.json");
    fs::write(&table, r#"[{"beta":[1],"classes":["h","h2","h2"],"value":"2"}]"#).unwrap();
    let o = run(&["verify", "--model", "P2", "--table", table.to_str().unwrap(), "--suite", "enumerative", "--qmax", "2"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("first counterexample"));
}

#[test]
fn potentials() {
    let phi = ok(&["potential", "--model", "P1", "--which", "phi", "--xdeg", "3", "--qmax", "1"]);
    let rows: Vec<serde_json::Value> = serde_json::from_str(&phi).unwrap();
    assert!(rows.iter().any(|r| r["indices"] == serde_json::json!([[0, 1], [0, 1], [0, 1]]) && r["value"] == "1/6"));
    let g = ok(&["potential", "--model", "point", "--which", "g", "--xdeg", "5", "--dmax", "2"]);
    assert!(g.contains(r#"{"indices":[[0,0],[0,0],[0,0],[1,0]],"beta":[],"value":"1/6"}"#), "{g}");
}

#[test]
fn model_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("line.json");
    fs::write(&good, gwdesc::fixtures::load_fixture("P1").map(|f| serde_json::to_string(&f.model.to_file()).unwrap()).unwrap()).unwrap();
    let out = ok(&["validate", "--model", good.to_str().unwrap()]);
    assert!(out.contains("PASS"));
    assert_eq!(ok(&["correlator", "--model", good.to_str().unwrap(), "--beta", "0", "--ins", "one,one,h"]), "1");

    let mut file = gwdesc::fixtures::load_fixture("P2").unwrap().model.to_file();
    file.chern_classes[0] = [("h".to_string(), "1".to_string())].into_iter().collect();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, serde_json::to_string(&file).unwrap()).unwrap();
    let o = run(&["validate", "--model", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL"));
}
