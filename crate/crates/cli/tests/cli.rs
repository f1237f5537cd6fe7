use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn plexus(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plexus")).args(args).env_remove("PLEXUS_CONFIG").output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn validate(schema: &str, value: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(schema);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

#[test]
fn verify_exit_codes() {
    let out = plexus(&["verify", "car", "--stage", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    validate("report.schema.json", &report);
    assert_eq!(report["params"]["seed"], 0);

    // Stage 2 Pauli fails honestly, stage 5 is out of range.
    assert_eq!(code(&plexus(&["verify", "pauli", "--stage", "2"])), 1);
    assert_eq!(code(&plexus(&["verify", "pauli", "--stage", "5"])), 2);
    assert_eq!(code(&plexus(&["verify", "pauli", "--stage", "3"])), 0);
    assert_eq!(code(&plexus(&["verify", "closure"])), 0);
    assert_eq!(code(&plexus(&["verify", "rotation"])), 0);
    assert_eq!(code(&plexus(&["verify", "nonsense"])), 2);
    assert_eq!(code(&plexus(&["verify", "car", "--tolerance=0"])), 2);
}

#[test]
fn yang_in_both_signatures() {
    for sig in ["3-3-compact-i", "alt"] {
        let out = plexus(&["verify", "yang", "--signature", sig, "--format", "json"]);
        assert_eq!(code(&out), 0, "{sig}");
        validate("report.schema.json", &json(&out));
    }
}

#[test]
fn elem_attributes() {
    let out = plexus(&["elem", "e6", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    validate("elem.schema.json", &v);
    assert_eq!((v["serial"].as_u64(), v["rank"].as_u64(), v["degree"].as_u64(), v["parity"].as_i64()), (Some(6), Some(3), Some(2), Some(1)));

    let out = plexus(&["elem", "i(e4)", "--show", "serial", "--format", "json"]);
    assert_eq!(json(&out)["serial"], 16);

    let v = json(&plexus(&["elem", "i(1)vi(1)", "--format", "json"]));
    validate("elem.schema.json", &v);
    assert_eq!(v["zero"], true);

    let v = json(&plexus(&["elem", "2e6+e1", "--format", "json"]));
    validate("elem.schema.json", &v);
    assert_eq!(v["terms"].as_array().unwrap().len(), 2);

    assert_eq!(code(&plexus(&["elem", "i(("])), 2);
}

#[test]
fn contract_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = plexus(&["contract", "--out", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    validate("contract.schema.json", &v);
    let r1 = v["fits"].as_array().unwrap().iter().find(|f| f["quantity"] == "r1").unwrap();
    assert!((r1["slope"].as_f64().unwrap() + 0.5).abs() <= 0.05);

    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "N,W,r1_max_band,r2,band_levels,band_width");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.split(',').count() == 6));

    // Too few points to fit a slope.
    assert_eq!(code(&plexus(&["contract", "--n", "8"])), 2);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("plexus.cfg");
    std::fs::write(&cfg, "# run settings\nseed = 3\nformat = json\n").unwrap();
    let run = |args: &[&str]| Command::new(env!("CARGO_BIN_EXE_plexus")).args(args).env("PLEXUS_CONFIG", &cfg).output().unwrap();

    let v = json(&run(&["verify", "car", "--stage", "1"]));
    assert_eq!(v["params"]["seed"], 3);
    let v = json(&run(&["verify", "car", "--stage", "1", "--seed", "9"]));
    assert_eq!(v["params"]["seed"], 9);

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(code(&run(&["verify", "car"])), 2);
    std::fs::write(&cfg, "seed = minus one\n").unwrap();
    assert_eq!(code(&run(&["verify", "car"])), 2);
}

#[test]
fn tables_match_golden() {
    for kind in ["polyadics", "monadics", "tree"] {
        let out = plexus(&["tables", kind, "--check", "--format", "json"]);
        assert_eq!(code(&out), 0, "{kind}");
        let v = json(&out);
        validate("table.schema.json", &v);
        validate("report.schema.json", &v["check"]);
    }
    let out = plexus(&["tables", "polyadics", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 40);
}
