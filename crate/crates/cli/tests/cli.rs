use std::io::Write;
use std::process::{Command, Output, Stdio};

const EXAMPLE: &str = "P = y^2 + x^4; Q = -x*y + x^5 + x*y^2;";

fn foliasep(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_foliasep"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is the JSON report")
}

#[test]
fn example_certify_from_stdin() {
    let out = foliasep(&["certify"], EXAMPLE);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["certificate"]["theorem"], "even-multiplicity");
    assert_eq!(r["certificate"]["verdict"], "separatrix-exists");
    assert_eq!(r["certificate"]["witness"]["formal_only"], true);
    assert_eq!(r["status"], "ok");
}

#[test]
fn invariants_carry_routes() {
    let r = json(&foliasep(&["invariants"], EXAMPLE));
    assert_eq!(r["invariants"]["nu0"]["value"], 2);
    assert_eq!(r["invariants"]["mu0"]["value"], 6);
    assert_eq!(r["invariants"]["mu0_oracle"]["value"], 6);
    assert!(r["invariants"]["mu0"]["route"].as_str().unwrap().len() > 5);
}

#[test]
fn files_for_input_json_and_dot() {
    let dir = std::env::temp_dir().join(format!("foliasep-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("cusp.txt");
    std::fs::write(&input, "P = 2*y;\nQ = 3*x^2;\n").unwrap();
    let (js, dot) = (dir.join("r.json"), dir.join("r.dot"));
    let out = foliasep(
        &[
            "polar-check",
            "--input",
            input.to_str().unwrap(),
            "--json",
            js.to_str().unwrap(),
            "--dot",
            dot.to_str().unwrap(),
            "--seed",
            "3",
        ],
        "",
    );
    assert_eq!(out.status.code(), Some(0));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&js).unwrap()).unwrap();
    let p = &r["checks"]["polar"]["identity"];
    assert_eq!((p["p0"].as_i64(), p["mu0"].as_i64(), p["nu0"].as_i64()), (Some(3), Some(2), Some(1)));
    let dot = std::fs::read_to_string(&dot).unwrap();
    assert!(dot.starts_with("graph reduction {"));
    assert_eq!(dot.matches("[shape=box").count(), 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn center_has_no_conclusion() {
    let r = json(&foliasep(&["certify"], "P = y; Q = -x;"));
    assert_eq!(r["certificate"]["verdict"], "no-conclusion");
    assert_eq!(r["certificate"]["flags"]["center_focus"], "yes");
}

#[test]
fn exit_codes() {
    assert_eq!(foliasep(&["invariants"], "P = x*y; Q = x*y;").status.code(), Some(1));
    let bad = foliasep(&["invariants"], "P = y;\nQ = x +;");
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("2:8"));
    assert_eq!(foliasep(&["nonsense"], EXAMPLE).status.code(), Some(1));
    let starved = foliasep(&["separatrices", "--trunc", "0"], EXAMPLE);
    assert_eq!(starved.status.code(), Some(3));
    assert_eq!(json(&starved)["errors"][0]["code"], "real.UndecidedReality");
}

#[test]
fn sign_rule_flag() {
    let r = json(&foliasep(&["reduce", "--no-sign-rule"], EXAMPLE));
    let types: Vec<_> = r["tree"]["points"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|p| p["topological_type"].as_str())
        .collect();
    assert_eq!(types, ["saddle-or-node"]);
}

#[test]
fn reports_are_deterministic() {
    let a = foliasep(&["all", "--seed", "9"], EXAMPLE).stdout;
    let b = foliasep(&["all", "--seed", "9"], EXAMPLE).stdout;
    assert_eq!(a, b);
}
