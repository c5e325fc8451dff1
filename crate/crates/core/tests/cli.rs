use std::process::{Command, Output};

fn qgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgraph")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn constructions_exit_zero() {
    for args in [
        &["graph", "build", "--n", "3"][..],
        &["graph", "line", "--family", "pi", "--n", "2", "--format", "dot"],
        &["graph", "matrix", "--kind", "edge"],
        &["magic", "commutant", "--n", "2"],
        &["magic", "pi", "--n", "3"],
        &["ck", "build", "--family", "pi2-finite"],
        &["ck", "build", "--family", "claim", "--n", "3", "--dim", "200", "--seed", "4"],
        &["hopf", "check", "--model", "sd", "--d", "3"],
        &["hopf", "aw", "--model", "group-ring", "--d", "3", "--group-type", "gl", "--shift", "2"],
        &["hopf", "dqg", "--model", "sd", "--d", "3"],
        &["hopf", "cointegral", "--model", "sd", "--d", "3"],
    ] {
        let out = qgraph(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stdout.is_empty());
    }
}

#[test]
fn refutations_exit_two_with_report() {
    let out = qgraph(&["ck", "verify", "--family", "pi2-finite"]);
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["report"]["passed"], false);

    let out = qgraph(&["hopf", "check", "--model", "literal", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["report"]["coassociativity"]["status"], "not_applicable");

    let out = qgraph(&["ck", "closure", "--family", "pin-finite", "--n", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["report"]["dimension"], 25);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["graph", "build", "--n", "1"][..],
        &["ck", "verify", "--family", "nope"],
        &["ck", "verify", "--family", "Pi2-inf", "--dim", "10"],
        &["ck", "closure", "--family", "Pi2-inf"],
        &["ck", "build", "--family", "claim", "--params", "0:0"],
        &["hopf", "check", "--model", "sd", "--format", "dot"],
        &["hopf", "aw", "--model", "sd", "--group-type", "SL"],
        &["hopf", "aw", "--model", "group-ring", "--group-type", "SL", "--shift", "1"],
        &["hopf", "check", "--tol", "0"],
        &["--config", "/nonexistent/qgraph.conf", "graph", "build"],
    ] {
        let out = qgraph(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "# truncated runs\ntruncation_n = 120\nmargin = 6\nformat = text\n").unwrap();
    let p = path.to_str().unwrap();

    let out = qgraph(&["--config", p, "ck", "verify", "--family", "Pi2-inf"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("report.backing.dim = 120"));
    assert!(text.contains("report.backing.margin = 6"));

    let out = qgraph(&["--config", p, "--format", "json", "ck", "verify", "--family", "Pi2-inf", "--dim", "240"]);
    assert_eq!(json(&out)["report"]["backing"]["dim"], 240);
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["hopf", "aw", "--model", "group-ring", "--d", "4", "--seed", "5"][..],
        &["hopf", "check", "--model", "sd", "--d", "4", "--samples", "500", "--seed", "9"],
        &["ck", "verify", "--family", "claim", "--n", "3", "--dim", "240", "--seed", "2"],
        &["magic", "commutant", "--family", "pi", "--n", "3"],
        &["graph", "build", "--n", "4", "--format", "dot"],
    ] {
        let a = qgraph(args);
        let b = qgraph(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn help_and_version() {
    let out = qgraph(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("Usage"));
    assert_eq!(qgraph(&["--version"]).status.code(), Some(0));
}
