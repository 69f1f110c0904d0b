use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

fn ruin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ruin"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn records(o: &Output) -> Vec<serde_json::Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn classical_gambler_column() {
    let out = ruin(&["ruin", "--input", &fixture("classical_n4.json"), "--format", "records"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let got: Vec<(String, String)> = records(&out)
        .iter()
        .map(|r| {
            (
                r["state"].as_str().unwrap().to_owned(),
                r["closed_form"].as_str().unwrap().to_owned(),
            )
        })
        .collect();
    let want = [("(1)", "1/4"), ("(2)", "1/2"), ("(3)", "3/4"), ("(4)", "1")];
    assert_eq!(
        got,
        want.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect::<Vec<_>>()
    );
}

#[test]
fn two_dimensional_symmetric_spec_agrees_across_methods() {
    let out = ruin(&[
        "ruin",
        "--input",
        &fixture("d2_symmetric.json"),
        "--with-oracle",
        "--with-duality",
        "--format",
        "records",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let recs = records(&out);
    let values: Vec<&str> = recs.iter().map(|r| r["closed_form"].as_str().unwrap()).collect();
    assert_eq!(values, ["1/4", "1/2", "1/2", "1"]);
    for r in &recs {
        assert_eq!(r["closed_form"], r["duality"]);
        assert_eq!(r["closed_form"], r["oracle"]);
        assert!(r["simulation_estimate"].is_null());
    }
}

#[test]
fn state_filter_accepts_loose_tuples() {
    let out = ruin(&[
        "ruin",
        "--input",
        &fixture("d2_symmetric.json"),
        "--state",
        "2,1",
        "--state",
        "(1, 1)",
        "--format",
        "records",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let states: Vec<String> = records(&out)
        .iter()
        .map(|r| r["state"].as_str().unwrap().to_owned())
        .collect();
    assert_eq!(states, ["(2,1)", "(1,1)"]);

    let out = ruin(&["ruin", "--input", &fixture("d2_symmetric.json"), "--state", "3,1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn trivial_and_one_dimensional_specs() {
    let out = ruin(&["ruin", "--input", &fixture("trivial.json"), "--with-oracle", "--with-duality"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("(1,1)"));

    let out = ruin(&["compare", "--input", &fixture("d1_n3.json"), "--format", "records"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let first = &records(&out)[0];
    assert_eq!(first["closed_form"], "4/13");
    assert_eq!(first["duality"], "4/13");
    assert_eq!(first["oracle"], "4/13");
}

#[test]
fn maze_comparison_flags_the_quoted_value() {
    let out = ruin(&["compare", "--input", &fixture("maze.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("2/7 = 0.285714"));
    assert!(text.contains("3/7 = 0.428571"));
    assert!(text.contains("reference value for 4 is 1/7"));
    assert!(text.contains("status: exact methods agree"));
}

#[test]
fn maze_with_trap_is_inconsistent() {
    let out = ruin(&["compare", "--input", &fixture("maze_trap.json")]);
    assert_eq!(out.status.code(), Some(3));
    let text = stdout(&out);
    assert!(text.contains("1/5 = 0.200000"), "{text}");
    assert!(text.contains("duality pipeline failed"));
}

#[test]
fn verify_holds_on_maze_and_catches_a_bent_antidual() {
    let out = ruin(&["verify", "--input", &fixture("maze.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("duality: holds"));

    let out = ruin(&["verify", "--input", &fixture("maze_bent.json"), "--format", "records"]);
    assert_eq!(out.status.code(), Some(3));
    let r = &records(&out)[0];
    assert_eq!(r["holds"], false);
    assert_eq!(r["first_violation"]["power"], 1);
    assert_eq!(r["first_violation"]["e_i"], "1");
    assert_eq!(r["first_violation"]["e_j"], "1");
    assert_eq!(r["first_violation"]["lhs"], "99/100");
}

#[test]
fn verify_gambler_spec() {
    let out = ruin(&["verify", "--input", &fixture("d2_symmetric.json"), "--max-power", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("powers checked: 0..=4"));
}

#[test]
fn antidual_then_dual_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let px = dir.path().join("px.json");
    let out = ruin(&[
        "antidual",
        "--input",
        &fixture("maze.json"),
        "--output",
        px.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("quasi"));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&px).unwrap()).unwrap();
    assert_eq!(doc["rows"][1][3], "7/6");

    let out = ruin(&["dual", "--input", px.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let chain: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(chain["coffin"], "-inf");
    assert_eq!(chain["win"], "5");
    assert_eq!(chain["rows"][0], serde_json::json!(["0", "1/2", "1/2", "0", "0"]));
    assert_eq!(chain["rows"][2], serde_json::json!(["1/3", "0", "0", "1/3", "1/3"]));
}

#[test]
fn dual_rejects_non_monotone_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flip.json");
    std::fs::write(
        &path,
        r#"{"states":["1","2"],"rows":[["0","1"],["1","0"]],"poset":{"covers":[["1","2"]]}}"#,
    )
    .unwrap();
    let out = ruin(&["dual", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not Möbius monotone"), "{}", stderr(&out));
}

#[test]
fn simulation_is_reproducible() {
    let args = [
        "compare",
        "--input",
        &fixture("maze.json"),
        "--with-simulation",
        "--trials",
        "5000",
        "--seed",
        "7",
    ];
    let a = ruin(&args);
    let b = ruin(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let out = ruin(&[
        "simulate",
        "--input",
        &fixture("classical_n4.json"),
        "--trials",
        "20000",
        "--seed",
        "2016",
        "--format",
        "records",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for (r, exact) in records(&out).iter().zip([0.25, 0.5, 0.75, 1.0]) {
        let est = r["simulation_estimate"].as_f64().unwrap();
        let se = r["simulation_stderr"].as_f64().unwrap();
        assert!((est - exact).abs() <= 4.0 * se + 1e-12, "{est} vs {exact}");
    }
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(ruin(&["ruin"]).status.code(), Some(1));
    assert_eq!(ruin(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(ruin(&["--help"]).status.code(), Some(0));
    assert_eq!(
        ruin(&["ruin", "--input", &fixture("classical_n4.json"), "--digits", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(
        ruin(&["simulate", "--input", &fixture("maze.json"), "--trials", "0"]).status.code(),
        Some(1)
    );
    assert_eq!(ruin(&["ruin", "--input", "/nonexistent/x.json"]).status.code(), Some(2));
    assert_eq!(ruin(&["ruin", "--input", &fixture("maze.json")]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"d":1,"N":[3],"p":[["1/2","x"]],"q":[["1/2","1/2"]]}"#).unwrap();
    let out = ruin(&["ruin", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("p[0][1]"), "{}", stderr(&out));

    std::fs::write(&bad, r#"{"d":1,"N":[3],"p":[["3/4","1/2"]],"q":[["1/2","1/2"]]}"#).unwrap();
    let out = ruin(&["ruin", "--input", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}
