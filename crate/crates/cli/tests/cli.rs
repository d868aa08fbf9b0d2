use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn quadapn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadapn"))
        .args(args)
        .env_remove("QUADAPN_WORKERS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = quadapn(&full);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad json ({e}): {}{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    });
    (code(&out), v)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_binomial_is_apn() {
    let (c, v) = json(&[
        "verify",
        "--field",
        "n=6",
        "--params",
        "k=2,s=1,u=0x02,v=0,w=0",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["apn"], true);
    assert_eq!(v["verification"]["exhaustive_uniformity"], 2);
    assert_eq!(v["verification"]["max_kernel"], 2);
    assert_eq!(v["input"]["params"], "k=2,s=1,u=0x02,v=0x00,w=0x00");
    assert_eq!(v["field"]["modulus"], "0x43");
    assert!(v["version"].is_string());
}

#[test]
fn verify_identity_fails() {
    let out = quadapn(&["verify", "--known", "identity"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("uniformity 64"));
}

#[test]
fn verify_expected_uniformity() {
    let out = quadapn(&[
        "verify",
        "--known",
        "gold:2",
        "--field",
        "n=6",
        "--expect-uniformity",
        "4",
    ]);
    assert_eq!(code(&out), 0);
    let out = quadapn(&["verify", "--known", "gold:2", "--field", "n=6"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn invalid_input_exits_2() {
    for args in [
        &["verify", "--params", "k=2,s=2,u=0x02"][..],
        &["verify", "--params", "k=2,s=1,u=0x01"],
        &["verify", "--field", "n=6,modulus=0x41", "--known", "gold:1"],
        &["verify", "--known", "frobnicate"],
        &["verify", "--known", "inverse", "--method", "quadratic"],
        &["verify", "--field", "n=9", "--params", "k=2,s=1,u=0x02"],
        &["enumerate", "--k", "2", "--s", "2"],
    ] {
        let out = quadapn(args);
        assert_eq!(
            code(&out),
            2,
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    }
    assert_eq!(
        code(&quadapn(&[
            "verify",
            "--known",
            "gold:1",
            "--params",
            "k=1,s=2,u=0x02"
        ])),
        2
    );
}

#[test]
fn enumerate_gf8() {
    let out = quadapn(&["enumerate", "--field", "n=3", "--k", "1", "--s", "2"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<Value> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 18);
    let mut names: Vec<&str> = lines
        .iter()
        .map(|l| l["params"].as_str().unwrap())
        .collect();
    names.sort();
    names.dedup();
    assert_eq!(names.len(), 18);
    let limited = quadapn(&["enumerate", "--k", "2", "--s", "1", "--limit", "5"]);
    let text = String::from_utf8(limited.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().all(|l| l.contains("\"form\"")));
}

#[test]
fn proofcheck_single_and_sweep() {
    let (c, v) = json(&[
        "proofcheck",
        "--field",
        "n=6",
        "--params",
        "k=2,s=1,u=0x02,v=0x01,w=0x3a",
    ]);
    assert_eq!(c, 0);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 16);
    assert!(checks.iter().all(|c| c["pass"] == true));
    let (c, v) = json(&["proofcheck", "--k", "1", "--s", "2", "--theta-samples", "5"]);
    assert_eq!(c, 0);
    assert_eq!(v["tuples"], 18);
    assert_eq!(v["failures"].as_array().unwrap().len(), 0);
}

#[test]
fn spectrum_of_cube() {
    let (c, v) = json(&["spectrum", "--known", "gold:1", "--field", "n=6"]);
    assert_eq!(c, 0);
    assert_eq!(v["uniformity"], 2);
    assert_eq!(v["nonlinearity"], 24);
    assert_eq!(v["histogram"]["2"], 2016);
    let out = quadapn(&[
        "--format", "csv", "spectrum", "--known", "gold:1", "--field", "n=6",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("kind,value,count\nddt,0,2016\nddt,2,2016\n"));
}

#[test]
fn ddt_and_code_exports() {
    let dir = tempfile::tempdir().unwrap();
    let ddt = dir.path().join("ddt.csv");
    let out = quadapn(&[
        "spectrum",
        "--known",
        "gold:1",
        "--field",
        "n=3",
        "--ddt-csv",
        path(&ddt),
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&ddt).unwrap();
    assert_eq!(text.lines().next().unwrap(), "8,0,0,0,0,0,0,0");
    let hex = dir.path().join("code.hex");
    let (c, v) = json(&[
        "invariants",
        "--known",
        "gold:1",
        "--field",
        "n=6",
        "--code-hex",
        path(&hex),
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["bundle"]["code_dimension"], 13);
    assert_eq!(v["hash"].as_str().unwrap().len(), 64);
    assert_eq!(std::fs::read_to_string(&hex).unwrap().lines().count(), 13);
}

#[test]
fn walsh_row_and_spectrum() {
    let (c, v) = json(&[
        "walsh", "--known", "gold:1", "--field", "n=6", "--b", "0x01",
    ]);
    assert_eq!(c, 0);
    let row = v["row"].as_array().unwrap();
    assert_eq!(row.len(), 64);
    let sq: i64 = row.iter().map(|w| w.as_i64().unwrap().pow(2)).sum();
    assert_eq!(sq, 1 << 12);
    let (c, v) = json(&["walsh", "--known", "gold:1", "--field", "n=6"]);
    assert_eq!(c, 0);
    assert_eq!(v["parseval"], true);
}

#[test]
fn spec_and_table_sources() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("f.json");
    std::fs::write(
        &spec,
        r#"{"field":{"n":6,"modulus":"0x43"},"terms":[{"coeff":"0x01","exp":3},{"coeff":"0x01","exp":10},{"coeff":"0x07","exp":24}]}"#,
    )
    .unwrap();
    assert_eq!(code(&quadapn(&["verify", "--spec", path(&spec)])), 0);
    assert_eq!(
        code(&quadapn(&[
            "verify",
            "--spec",
            path(&spec),
            "--field",
            "n=5"
        ])),
        2
    );

    let table = dir.path().join("t.txt");
    let lines: String = (0u32..16).map(|i| format!("0x{:x}\n", i)).collect();
    std::fs::write(&table, lines).unwrap();
    let (c, v) = json(&["verify", "--table", path(&table)]);
    assert_eq!(c, 1);
    assert_eq!(v["field"]["n"], 4);
    assert_eq!(v["verification"]["uniformity"], 16);
}

#[test]
fn compare_sources() {
    let (c, v) = json(&[
        "compare",
        "--field",
        "n=6",
        "--a",
        "known:gold:1",
        "--b",
        "params:k=2,s=1,u=0x02,v=0x01,w=0x3a",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["verdict"]["status"], "distinguished");
    assert_eq!(v["verdict"]["witness"], "ortho_derivative");
    let (_, v) = json(&[
        "compare",
        "--a",
        "known:dillon:0x07",
        "--b",
        "params:k=2,s=1,u=0x02,v=0x01,w=0x00",
    ]);
    assert_eq!(v["verdict"]["status"], "indistinguishable");
    assert_eq!(
        code(&quadapn(&[
            "compare",
            "--a",
            "gold:1",
            "--b",
            "known:gold:1"
        ])),
        2
    );
    assert_eq!(
        code(&quadapn(&[
            "--format",
            "csv",
            "compare",
            "--a",
            "known:gold:1",
            "--b",
            "known:gold:1"
        ])),
        2
    );
}

#[test]
fn weight_budget_exit_4() {
    assert_eq!(
        code(&quadapn(&[
            "invariants",
            "--known",
            "gold:1",
            "--field",
            "n=6",
            "--budget",
            "5"
        ])),
        4
    );
}

#[test]
fn field_info() {
    let (c, v) = json(&["field-info", "--field", "n=6"]);
    assert_eq!(c, 0);
    assert_eq!(v["primitive_elements"], 36);
    assert_eq!(v["order_factors"], serde_json::json!([3, 7]));
    assert_eq!(code(&quadapn(&["field-info", "--field", "n=16"])), 2);
}

#[test]
fn reproduce_is_consistent_and_worker_independent() {
    let one = quadapn(&["--format", "json", "--workers", "1", "reproduce-n6"]);
    assert_eq!(code(&one), 0);
    let v: Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["all_consistent"], true);
    assert_eq!(v["sweep"]["tuples"], 468);
    let four = Command::new(env!("CARGO_BIN_EXE_quadapn"))
        .args(["--format", "json", "reproduce-n6"])
        .env("QUADAPN_WORKERS", "4")
        .output()
        .unwrap();
    assert_eq!(one.stdout, four.stdout);
}
