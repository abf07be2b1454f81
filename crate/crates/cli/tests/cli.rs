use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn relidep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relidep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn mome2(dir: &Path) -> String {
    write(
        dir,
        "mome2.json",
        r#"{"family":"MOME","n":2,"rates":{"1":1,"2":1,"1,2":1}}"#,
    )
}

fn diagnostic(o: &Output) -> Value {
    let text = String::from_utf8(o.stderr.clone()).unwrap();
    serde_json::from_str(text.trim()).unwrap_or_else(|_| panic!("stderr is not JSON: {text}"))
}

#[test]
fn error_fr_column_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let m = mome2(dir.path());
    let o = relidep(&[
        "error",
        "--model",
        &m,
        "--structure",
        "series",
        "--baseline",
        "paper-literal",
        "--grid",
        "0.01:10:200:log",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,e_sf,e_fr,e_rfr,e_mrl,e_ai"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 200);
    for r in rows {
        let e_fr: f64 = r.split(',').nth(2).unwrap().parse().unwrap();
        assert!((e_fr - 0.5).abs() < 1e-12, "{r}");
    }
}

#[test]
fn families_lists_ten() {
    let o = relidep(&["families", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f["family"].as_str().unwrap())
        .collect();
    assert_eq!(names.len(), 10);
    for f in [
        "IndExp",
        "MOME",
        "MG1",
        "IndWeibull",
        "MOMW",
        "Crowder",
        "Lee",
        "LB1",
        "FGMW",
        "LB2",
    ] {
        assert!(names.contains(&f), "{f}");
    }
    assert!(v[1]["parameters"]["rates"].is_string());
}

#[test]
fn order_chain_for_mome() {
    let dir = tempfile::tempdir().unwrap();
    let m = mome2(dir.path());
    let o = relidep(&[
        "order",
        "--a",
        "dependent",
        "--b",
        "independent",
        "--relations",
        "lr,fr,st,mrl",
        "--model",
        &m,
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let verdicts = v["verdicts"].as_array().unwrap();
    assert_eq!(verdicts.len(), 4);
    for x in verdicts {
        assert_eq!(x["direction"], "A_leq_B", "{x}");
    }
    assert_eq!(v["audit"]["consistent"], true);
}

#[test]
fn example_documents_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for f in [
        "IndExp",
        "MOME",
        "MG1",
        "IndWeibull",
        "MOMW",
        "Crowder",
        "Lee",
        "LB1",
        "FGMW",
        "LB2",
    ] {
        let o = relidep(&["families", "--example", f]);
        assert!(o.status.success(), "{f}");
        let path = write(dir.path(), &format!("{f}.json"), &stdout(&o));
        let e = relidep(&[
            "eval",
            "--model",
            &path,
            "--grid",
            "0.5:2:4:linear",
            "--format",
            "json",
        ]);
        assert!(
            e.status.success(),
            "{f}: {}",
            String::from_utf8_lossy(&e.stderr)
        );
        let v: Value = serde_json::from_str(&stdout(&e)).unwrap();
        assert_eq!(v["family"], f);
    }
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let m = mome2(dir.path());
    let args = [
        "simulate",
        "--model",
        &m,
        "--samples",
        "20000",
        "--seed",
        "7",
        "--grid",
        "0.1:3:30:linear",
    ];
    let a = relidep(&args);
    let mut threaded = args.to_vec();
    threaded.extend(["--threads", "1"]);
    let b = relidep(&threaded);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("t,estimate,ci_low,ci_high\n"));
    let e1 = relidep(&["eval", "--model", &m]);
    let e2 = relidep(&["eval", "--model", &m, "--threads", "3"]);
    assert_eq!(e1.stdout, e2.stdout);
    assert!(stdout(&e1).starts_with("t,sf,fr,rfr,mrl,ai,provenance\n"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let m = mome2(dir.path());
    let out = dir.path().join("deps.json");
    let o = relidep(&[
        "depend",
        "--model",
        &m,
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["dependence"]["label"], "PUOD");
    assert_eq!(v["sign_link"]["passed"], true);
}

#[test]
fn exit_codes_and_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let missing = relidep(&["eval", "--model", "/nonexistent/model.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(diagnostic(&missing)["error"], "io");

    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"family":"IndExp","n":2,"lambdas":[1.0,-1.0]}"#,
    );
    let o = relidep(&["eval", "--model", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(diagnostic(&o)["error"], "invalid_parameter");

    let o = relidep(&["eval", "--model", &bad, "--grid", "1:0:5:log"]);
    assert_eq!(o.status.code(), Some(2));

    let mg1 = write(
        dir.path(),
        "mg1.json",
        &stdout(&relidep(&["families", "--example", "MG1"])),
    );
    let o = relidep(&["simulate", "--model", &mg1, "--samples", "10"]);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(diagnostic(&o)["error"], "unsupported");

    // LB1 with m > 1 has no proper parallel law near the origin.
    let lb1 = write(
        dir.path(),
        "lb1.json",
        &stdout(&relidep(&["families", "--example", "LB1"])),
    );
    let o = relidep(&[
        "eval",
        "--model",
        &lb1,
        "--structure",
        "parallel",
        "--grid",
        "0.01:0.3:20:linear",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(diagnostic(&o)["error"], "degenerate");
    let o = relidep(&[
        "eval",
        "--model",
        &lb1,
        "--structure",
        "series",
        "--grid",
        "0.01:0.3:20:linear",
    ]);
    assert_eq!(o.status.code(), Some(0));

    let o = relidep(&["eval", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(diagnostic(&o)["error"], "usage");
}
