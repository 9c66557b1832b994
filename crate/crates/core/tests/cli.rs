//! End-to-end checks of the command-line binary: exit codes, the worked
//! examples, and agreement between the table and JSON renderings.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tame-lattices"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn ptau_example_lists_four_bitmasks() {
    let (code, stdout, _) = run(&["ptau", "--p", "5", "--f", "2", "--type", "ps:7,0", "--out", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    let masks: Vec<u64> = v["p_tau"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert_eq!(masks, vec![0, 1, 2, 3]);
}

#[test]
fn ideals_example_reproduces_the_three_computations() {
    let (code, stdout, _) = run(&["ideals", "--delta", "2", "--check", "example", "--out", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["report"]["pass"], serde_json::Value::Bool(true));
    let comps = v["report"]["computations"].as_array().unwrap();
    assert_eq!(comps.len(), 3);
    assert_eq!(comps[0]["sum"], "(X'_0, X'_1, Y'_0, Y'_1)");
    assert_eq!(comps[1]["sum"], "(X'_0, Y'_0)");
    assert_eq!(comps[2]["sum"], "(X'_0, X'_1*Y'_0)");
    assert_eq!(comps[2]["i2"], "(X'_0*Y'_1, X'_1*Y'_0)");
}

#[test]
fn verify_suite_passes_and_is_deterministic() {
    let (code, stdout, _) = run(&["verify", "--suite", "gauge", "--p", "5", "--f", "1", "--out", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["report"]["pass"], serde_json::Value::Bool(true));
    // Byte determinism modulo the timing field.
    let (code2, stdout2, _) =
        run(&["verify", "--suite", "gauge", "--p", "5", "--f", "1", "--out", "json"]);
    assert_eq!(code2, 0);
    let strip = |s: &str| -> String {
        s.lines().filter(|l| !l.contains("elapsed_ms")).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(strip(&stdout), strip(&stdout2));
}

#[test]
fn usage_errors_exit_one() {
    let (code, _, stderr) = run(&["ptau", "--p", "5", "--f", "2"]);
    assert_eq!(code, 1);
    assert!(!stderr.is_empty());
    let (code, _, _) = run(&["ptau", "--p", "5", "--f", "2", "--type", "bogus:1"]);
    assert_eq!(code, 1);
}

#[test]
fn computation_errors_exit_two() {
    // A non-generic parameter is a precondition failure, not a usage error.
    let (code, _, _) = run(&["weights", "--p", "5", "--f", "1", "--rhobar", "red:0,0"]);
    assert_eq!(code, 2);
}

fn flatten(value: &serde_json::Value, prefix: &str, out: &mut Vec<(String, String)>) {
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(v, &key, out);
            }
        }
        serde_json::Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(v, &format!("{prefix}[{i}]"), out);
            }
        }
        scalar => out.push((prefix.to_string(), scalar.to_string())),
    }
}

#[test]
fn table_and_json_encode_identical_data() {
    for args in [
        vec!["jh", "--p", "5", "--f", "1", "--type", "cusp:3"],
        vec!["gauge", "--p", "5", "--f", "2", "--type", "ps:7,0"],
        vec![
            "predict", "--p", "5", "--f", "2", "--type", "ps:7,0", "--jmin", "0", "--jmax", "2",
            "--lambda", "1/3",
        ],
    ] {
        let mut jargs = args.clone();
        jargs.extend(["--out", "json"]);
        let (jc, jout, _) = run(&jargs);
        let mut targs = args.clone();
        targs.extend(["--out", "table"]);
        let (tc, tout, _) = run(&targs);
        assert_eq!(jc, 0);
        assert_eq!(tc, 0);
        let v: serde_json::Value = serde_json::from_str(&jout).unwrap();
        let mut leaves = Vec::new();
        flatten(&v, "", &mut leaves);
        assert!(!leaves.is_empty());
        let table_lines: Vec<&str> = tout.lines().collect();
        for (path, val) in &leaves {
            let line = format!("{path}: {val}");
            assert!(
                table_lines.contains(&line.as_str()),
                "missing table line {line:?} for {args:?}"
            );
        }
        // No extra data rows either.
        assert_eq!(
            table_lines.iter().filter(|l| !l.is_empty()).count(),
            leaves.len()
        );
    }
}

#[test]
fn out_file_writes_the_output() {
    let path = std::env::temp_dir().join("tame_lattices_cli_test.json");
    let _ = std::fs::remove_file(&path);
    let (code, stdout, _) = run(&[
        "ptau", "--p", "5", "--f", "1", "--type", "ps:2,0", "--out", "json", "--out-file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["p_tau"].is_array());
    let _ = std::fs::remove_file(&path);
}

#[test]
fn env_var_sets_default_precision() {
    let out = bin()
        .args(["verify", "--suite", "jh", "--p", "5", "--f", "1", "--out", "json"])
        .env("TAME_LATTICES_PRECISION", "6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["report"]["precision"], serde_json::json!(6));
}
