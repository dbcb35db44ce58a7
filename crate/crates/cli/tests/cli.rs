//! End-to-end tests of the binary: exit codes, fixture values, CSV shapes,
//! byte-stability under a fixed seed, and validation of every subcommand's
//! JSON output against the schemas shipped in `schemas/`.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn k3glue(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3glue"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn json_of(out: &Output) -> Value {
    let text = stdout_str(out);
    // verify-all prints one line per criterion before the JSON document.
    let start = text.find('{').expect("JSON object in stdout");
    serde_json::from_str(&text[start..]).expect("valid JSON")
}

fn load_schema(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("schemas")
        .join(name);
    serde_json::from_str(&std::fs::read_to_string(&path).expect("schema file"))
        .expect("schema parses")
}

/// Minimal JSON-Schema validator covering the subset the shipped schemas
/// use: `type` (string or list), `enum`, `properties`, `required`,
/// `additionalProperties: false`, and `items`.
fn validate(schema: &Value, value: &Value, path: &str) -> Result<(), String> {
    if let Some(allowed) = schema.get("enum") {
        let ok = allowed
            .as_array()
            .map(|a| a.contains(value))
            .unwrap_or(false);
        if !ok {
            return Err(format!("{path}: {value} not in enum {allowed}"));
        }
    }
    if let Some(ty) = schema.get("type") {
        let names: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(a) => a.iter().filter_map(|v| v.as_str()).collect(),
            _ => vec![],
        };
        let matches = names.iter().any(|name| match *name {
            "object" => value.is_object(),
            "array" => value.is_array(),
            "string" => value.is_string(),
            "number" => value.is_number(),
            "integer" => value.is_i64() || value.is_u64(),
            "boolean" => value.is_boolean(),
            "null" => value.is_null(),
            _ => false,
        });
        if !matches {
            return Err(format!("{path}: expected type {names:?}, got {value}"));
        }
    }
    if let Some(obj) = value.as_object() {
        if let Some(required) = schema.get("required").and_then(|r| r.as_array()) {
            for key in required.iter().filter_map(|k| k.as_str()) {
                if !obj.contains_key(key) {
                    return Err(format!("{path}: missing required key {key}"));
                }
            }
        }
        let props = schema.get("properties").and_then(|p| p.as_object());
        let closed = schema.get("additionalProperties") == Some(&Value::Bool(false));
        for (key, sub) in obj {
            match props.and_then(|p| p.get(key)) {
                Some(subschema) => validate(subschema, sub, &format!("{path}/{key}"))?,
                None if closed => {
                    return Err(format!("{path}: unexpected key {key}"));
                }
                None => {}
            }
        }
    }
    if let (Some(arr), Some(items)) = (value.as_array(), schema.get("items")) {
        for (i, sub) in arr.iter().enumerate() {
            validate(items, sub, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}

fn assert_valid(schema_name: &str, out: &Output) {
    assert!(
        out.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let schema = load_schema(schema_name);
    let value = json_of(out);
    if let Err(e) = validate(&schema, &value, "") {
        panic!("{schema_name}: {e}");
    }
}

#[test]
fn dioph_check_refuted_fixture() {
    let out = k3glue(&["dioph-check", "--p", "1/2", "--q", "1/3"]);
    assert_valid("dioph-check.schema.json", &out);
    let v = json_of(&out);
    assert_eq!(v["status"], "refuted");
    assert_eq!(v["witness_n"], 6);
}

#[test]
fn dioph_check_estimated_schema() {
    let out = k3glue(&[
        "dioph-check",
        "--p",
        "sqrt(2)",
        "--q",
        "sqrt(3)",
        "--n-max",
        "5000",
    ]);
    assert_valid("dioph-check.schema.json", &out);
    let v = json_of(&out);
    assert_eq!(v["status"], "estimated");
    assert!(v["min_slack"].as_f64().unwrap() >= 1.0 - 1e-12);
}

#[test]
fn dioph_check_csv_dump() {
    let out = k3glue(&[
        "dioph-check",
        "--p",
        "sqrt(2)",
        "--q",
        "1/3",
        "--n-max",
        "50",
        "--output",
        "csv",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,min_distance"));
    assert_eq!(text.lines().count(), 51);
}

#[test]
fn embed_lands_on_cubic() {
    let out = k3glue(&["embed", "--tau", "2i", "--z", "0.3+0.4i"]);
    assert_valid("embed.schema.json", &out);
    let v = json_of(&out);
    assert_eq!(v["passed"], true);
    assert!(v["cubic_residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn picard_table_contains_reference_row() {
    let out = k3glue(&["picard-table", "--dmax", "12"]);
    assert_valid("picard-table.schema.json", &out);
    let csv = k3glue(&["picard-table", "--dmax", "12", "--output", "csv"]);
    let text = stdout_str(&csv);
    assert!(text.starts_with("d,k,verdict,b0"));
    assert!(text.lines().any(|l| l == "7,2,certified,3"));
    assert!(text.lines().any(|l| l == "6,2,not_certified,0"));
}

#[test]
fn toroidal_classify_shapes() {
    let out = k3glue(&["toroidal-classify", "--p", "sqrt(2)", "--q", "1/3", "--tau", "i"]);
    assert_valid("toroidal-classify.schema.json", &out);
    let v = json_of(&out);
    assert_eq!(v["toroidal"], "toroidal");
    assert_eq!(v["type"], 1);
    assert_eq!(v["kind"], 0);
    assert_eq!(v["riemann_form_ok"], true);

    let refuted = k3glue(&["toroidal-classify", "--p", "1/2", "--q", "1/3", "--tau", "i"]);
    assert_valid("toroidal-classify.schema.json", &refuted);
    let v2 = json_of(&refuted);
    assert_eq!(v2["toroidal"], "not_toroidal");
    assert_eq!(v2["witness_products"], serde_json::json!([6, 3, 2]));
}

#[test]
fn theta_cocycle_passes() {
    let out = k3glue(&["theta-cocycle", "--tau", "i", "--b0", "3"]);
    assert_valid("theta-cocycle.schema.json", &out);
    assert_eq!(json_of(&out)["passed"], true);
}

#[test]
fn glue_check_passes() {
    let out = k3glue(&["glue-check", "--tau", "i", "--p", "sqrt(2)", "--q", "sqrt(3)"]);
    assert_valid("glue-check.schema.json", &out);
    assert_eq!(json_of(&out)["passed"], true);
}

#[test]
fn metric_report_fixture() {
    let out = k3glue(&[
        "metric-report",
        "--tau",
        "i",
        "--b0",
        "3",
        "--b",
        "0.5",
        "--w",
        "0.1",
    ]);
    assert_valid("metric-report.schema.json", &out);
    let v = json_of(&out);
    let det = v["det"].as_f64().unwrap();
    assert!((det - 1200.0 / std::f64::consts::PI).abs() < 1e-10);
    let m = v["matrix"].as_array().unwrap();
    assert!((m[0].as_f64().unwrap() - 6.0).abs() < 1e-12);

    let csv = k3glue(&[
        "metric-report",
        "--tau",
        "i",
        "--b0",
        "3",
        "--b",
        "0.5",
        "--w",
        "0.1",
        "--output",
        "csv",
    ]);
    assert!(stdout_str(&csv).starts_with("x,cutoff,potential"));
}

#[test]
fn family_sample_schema_and_determinism() {
    let args = ["--seed", "9", "family-sample", "--count", "3"];
    let a = k3glue(&args);
    assert_valid("family-sample.schema.json", &a);
    let b = k3glue(&args);
    assert_eq!(a.stdout, b.stdout, "family-sample must be byte-stable");
    let v = json_of(&a);
    assert_eq!(v["fibers"].as_array().unwrap().len(), 3);
    for fiber in v["fibers"].as_array().unwrap() {
        assert_eq!(fiber["b0"], 3);
        assert_eq!(fiber["points"].as_array().unwrap().len(), 9);
    }
}

#[test]
fn family_distinct_fixture() {
    let out = k3glue(&["family-distinct", "--tau1", "i", "--tau2", "2i"]);
    assert_valid("family-distinct.schema.json", &out);
    let v = json_of(&out);
    assert_eq!(v["relation"], "distinct_curves");
    assert!((v["j1"][0].as_f64().unwrap() - 1728.0).abs() < 1e-6);
    assert!((v["j2"][0].as_f64().unwrap() - 287_496.0).abs() < 1e-3);

    let same = k3glue(&["family-distinct", "--tau1", "i", "--tau2", "i"]);
    assert_eq!(json_of(&same)["relation"], "same_curve_class");
}

#[test]
fn verify_all_passes_and_is_byte_stable() {
    let a = k3glue(&["--seed", "17", "verify-all"]);
    assert_valid("verify-all.schema.json", &a);
    assert!(a.status.success());
    let text = stdout_str(&a);
    for name in [
        "elliptic-identities",
        "diophantine",
        "picard",
        "toroidal-theta",
        "gluing",
        "metric",
        "family",
        "end-to-end",
    ] {
        assert!(
            text.contains(&format!("[PASS] {name}")),
            "missing pass line for {name}"
        );
    }
    let b = k3glue(&["--seed", "17", "verify-all"]);
    assert_eq!(a.stdout, b.stdout, "verify-all must be byte-stable");
}

#[test]
fn exit_codes() {
    // Usage errors exit 2.
    let unknown = k3glue(&["no-such-subcommand"]);
    assert_eq!(unknown.status.code(), Some(2));
    let bad_value = k3glue(&["embed", "--tau", "not-a-number", "--z", "0"]);
    assert_eq!(bad_value.status.code(), Some(2));
    let bad_tau = k3glue(&["embed", "--tau", "-i", "--z", "0.3"]);
    assert_eq!(bad_tau.status.code(), Some(2));
    let csv_unsupported = k3glue(&["embed", "--tau", "i", "--z", "0.3", "--output", "csv"]);
    assert_eq!(csv_unsupported.status.code(), Some(2));

    // Verification failures exit 1: squeeze the cocycle tolerance to zero-ish.
    let dir = std::env::temp_dir().join("k3glue-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("tight.json");
    std::fs::write(&cfg_path, r#"{"tolerances": {"cocycle": 1e-300}}"#).unwrap();
    let fail = k3glue(&[
        "--config",
        cfg_path.to_str().unwrap(),
        "theta-cocycle",
        "--tau",
        "i",
        "--b0",
        "3",
    ]);
    assert_eq!(fail.status.code(), Some(1));
    assert_eq!(json_of(&fail)["passed"], false);
}

#[test]
fn config_file_and_env_var() {
    let dir = std::env::temp_dir().join("k3glue-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path = dir.join("seeded.json");
    std::fs::write(&cfg_path, r#"{"seed": 123}"#).unwrap();

    let via_flag = k3glue(&[
        "--config",
        cfg_path.to_str().unwrap(),
        "family-sample",
        "--count",
        "1",
    ]);
    assert_eq!(json_of(&via_flag)["seed"], 123);

    let via_env = Command::new(env!("CARGO_BIN_EXE_k3glue"))
        .env("K3GLUE_CONFIG", &cfg_path)
        .args(["family-sample", "--count", "1"])
        .output()
        .unwrap();
    assert_eq!(json_of(&via_env)["seed"], 123);

    // CLI flag overrides the file.
    let overridden = k3glue(&[
        "--config",
        cfg_path.to_str().unwrap(),
        "--seed",
        "7",
        "family-sample",
        "--count",
        "1",
    ]);
    assert_eq!(json_of(&overridden)["seed"], 7);

    // Invalid tolerances are a usage error.
    let bad_path = dir.join("bad.json");
    std::fs::write(&bad_path, r#"{"tolerances": {"cubic": -1.0}}"#).unwrap();
    let bad = k3glue(&[
        "--config",
        bad_path.to_str().unwrap(),
        "picard-table",
        "--dmax",
        "5",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}
