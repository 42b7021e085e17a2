//! End-to-end runs of the `ordhom` binary: outputs, exit codes, and
//! byte-stable rendering.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordhom")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn h_cube_uses_engine() {
    let out = run(&["h", "C3*C3*C3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "211250\nmethod: engine\n");
}

#[test]
fn h_method_selection() {
    let out = run(&["h", "H(C2,C4)", "--method", "summation"]);
    assert_eq!(stdout(&out), "126\nmethod: summation\n");
    let out = run(&["h", "A3"]);
    assert_eq!(stdout(&out), "27\nmethod: summation\n");
    // engine needs the product-with-chain shape
    let out = run(&["h", "H(C2,C5)", "--method", "engine"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn surjective_and_constrained() {
    let out = run(&["surjective", "C3*C3"]);
    assert_eq!(stdout(&out), "118\n");
    let out = run(&[
        "constrained",
        "C3*C3*C3",
        "--fix",
        "0=1",
        "--fix",
        "13=2",
        "--fix",
        "26=3",
    ]);
    assert_eq!(stdout(&out), "116211\n");
}

#[test]
fn show_elements_prints_the_id_map() {
    // maps with the bottom pinned low: sum over middle values (a, b)
    // of 4 - max(a, b), i.e. 3 + 6 + 5
    let out = run(&["constrained", "C2*C2", "--fix", "0=1", "--show-elements"]);
    assert_eq!(stdout(&out), "0\t(1,1)\n1\t(1,2)\n2\t(2,1)\n3\t(2,2)\n14\n");
}

#[test]
fn downsets_count_and_list() {
    let out = run(&["downsets", "H(C2,C6)", "--count"]);
    assert_eq!(stdout(&out), "64\n");
    let out = run(&["downsets", "L", "--list"]);
    assert_eq!(stdout(&out), "000\n100\n010\n110\n111\n");
}

#[test]
fn omega_evaluation() {
    let out = run(&["omega", "C3*C3", "3"]);
    assert_eq!(stdout(&out), "175\n");
}

#[test]
fn tables_are_deterministic() {
    let a = run(&["table", "cnck", "--k-max", "3", "--format", "csv"]);
    let b = run(&["table", "cnck", "--k-max", "3", "--format", "csv"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("n,k,j,a,h\n"));
}

#[test]
fn grid_table_contains_the_diamond_upset() {
    // the top-right 2x2 corner of the grid is an up-set shaped like the
    // diamond; its level-2 row must carry h = 168
    let out = run(&["table", "c3c3grid", "--k-max", "2", "--format", "csv"]);
    let text = stdout(&out);
    assert!(text.contains("432,4,2,168,20\n"), "missing diamond row in:\n{text}");
}

#[test]
fn json_table_round_trips() {
    let out = run(&["table", "polycoeffs", "--k-max", "2", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = value["rows"].as_array().unwrap();
    let k2: Vec<&str> = rows
        .iter()
        .filter(|r| r[0] == "2")
        .map(|r| r[2].as_str().unwrap())
        .collect();
    assert_eq!(k2, vec!["1", "2", "2"]);
}

#[test]
fn exit_codes() {
    // parse error
    let out = run(&["h", "C3**"]);
    assert_eq!(out.status.code(), Some(1));
    // enumeration bound exceeded
    let out = run(&["downsets", "A26*C2", "--count"]);
    assert_eq!(out.status.code(), Some(2));
    // verification passes on a reduced corpus
    let out = run(&["verify", "--max-size", "6", "--samples", "5", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("all checks passed\n"));
}

#[test]
fn file_atom_loads_json_posets() {
    let dir = std::env::temp_dir().join(format!("ordhom-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("diamond.json");
    std::fs::write(
        &path,
        r#"{"name": "diamond", "elements": ["b", "l", "r", "t"],
            "covers": [[0,1],[0,2],[1,3],[2,3]]}"#,
    )
    .unwrap();
    let expr = format!("file:{}", path.display());
    let out = run(&["h", &expr]);
    assert_eq!(stdout(&out), "20\nmethod: summation\n");
    // products over loaded posets work too
    let out = run(&["downsets", &format!("{expr}*C2"), "--count"]);
    assert_eq!(stdout(&out), "20\n");
    std::fs::remove_dir_all(&dir).ok();
}
