//! End-to-end runs of the binary: exit codes, error messages, format
//! switches, file inputs, and envelope conformance to the published schema.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hflab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hflab"))
        .args(args)
        .output()
        .expect("run hflab")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn eval_truth_values_set_the_exit_code() {
    let out = hflab(&["eval", "--structure", "V2", "--formula", "exists x. forall y. !(y in x)"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("true"));

    let out = hflab(&["eval", "--structure", "V1", "--formula", "exists y. #0 in y"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("false"));
}

#[test]
fn unbound_variables_are_named_in_the_error() {
    let out = hflab(&["eval", "--structure", "V2", "--formula", "p in q", "--assign", "p={}"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("'q'"), "stderr: {}", stderr(&out));
}

#[test]
fn assignments_resolve_both_notations() {
    let out = hflab(&[
        "eval",
        "--structure",
        "V3",
        "--formula",
        "p in q",
        "--assign",
        "p=#0",
        "--assign",
        "q={{},{{}}}",
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn formula_and_structure_files_load() {
    let out = hflab(&[
        "eval",
        "--structure",
        &fixture("structure_small.json"),
        "--formula",
        &format!("@{}", fixture("formula.txt")),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("true"));
}

#[test]
fn missing_files_are_usage_errors() {
    let out = hflab(&["eval", "--structure", "no_such_file.json", "--formula", "x = x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no_such_file.json"));
}

#[test]
fn audit_accepts_a_battery_file() {
    let out = hflab(&[
        "audit",
        &fixture("structure_small.json"),
        "--battery",
        &fixture("battery.json"),
    ]);
    assert_eq!(out.status.code(), Some(1), "some axioms fail here");
    let text = stdout(&out);
    assert!(text.contains("Z1"));
    assert!(text.contains("foundation:"));
}

#[test]
fn audit_exit_zero_needs_every_row_to_hold() {
    // V_1 = {{}} satisfies nothing interesting but fails pairing outright.
    let out = hflab(&["audit", "V1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn ef_rejects_non_substructures() {
    let out = hflab(&["ef", "V2", "V1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("left structure"));
}

#[test]
fn tiers_rejects_unknown_checks() {
    let out = hflab(&["tiers", "--config", "2,3", "--check", "A9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("A9"));
}

#[test]
fn validate_prints_the_law_witness() {
    let out = hflab(&["cat", "validate", &fixture("broken_assoc.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("(b . a) . a"), "stdout: {}", stdout(&out));
}

#[test]
fn freyd_requires_exactly_one_input_mode() {
    let out = hflab(&["cat", "freyd"]);
    assert_eq!(out.status.code(), Some(2));
    let out = hflab(&[
        "cat",
        "freyd",
        &fixture("parallel_pair.json"),
        "--enumerate",
        "2",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn freyd_audits_a_category_file() {
    let out = hflab(&["cat", "freyd", &fixture("parallel_pair.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("power of 4 copies absent"));
}

#[test]
fn classify_without_payloads_is_an_error() {
    let out = hflab(&["cat", "classify", &fixture("parallel_pair.json"), "--config", "2,3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("no set encoding"), "stderr: {}", stderr(&out));
}

#[test]
fn budget_exhaustion_is_a_resource_error() {
    let out = hflab(&[
        "eval",
        "--structure",
        "V4",
        "--formula",
        "forall x. forall y. forall z. x = x",
        "--budget",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("budget"));
}

#[test]
fn text_mode_prints_no_envelope() {
    let out = hflab(&["cat", "cantor", "--size", "1"]);
    assert!(!stdout(&out).contains("\"tool\""));
    let out = hflab(&["cat", "cantor", "--size", "1", "--format", "json"]);
    assert!(stdout(&out).contains("\"tool\""));
}

#[test]
fn envelope_echoes_budgets_and_seed() {
    let out = hflab(&[
        "cat",
        "cantor",
        "--size",
        "1",
        "--format",
        "json",
        "--seed",
        "7",
        "--budget",
        "12345",
        "--cap",
        "99",
    ]);
    let envelope: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(envelope["seed"], 7);
    assert_eq!(envelope["budgets"]["nodes"], 12345);
    assert_eq!(envelope["budgets"]["cap"], 99);
    assert_eq!(envelope["tool"], "hflab");
    assert_eq!(envelope["version"], env!("CARGO_PKG_VERSION"));
}

/// Just enough JSON Schema to check the published envelope schema: type,
/// const, minimum, required, properties, additionalProperties.
fn conforms(schema: &Value, value: &Value, at: &str) -> Result<(), String> {
    if let Some(expected) = schema.get("const") {
        if expected != value {
            return Err(format!("{at}: expected constant {expected}, got {value}"));
        }
    }
    if let Some(ty) = schema.get("type").and_then(Value::as_str) {
        let ok = match ty {
            "object" => value.is_object(),
            "string" => value.is_string(),
            "integer" => value.is_u64() || value.is_i64(),
            other => return Err(format!("{at}: unhandled schema type {other}")),
        };
        if !ok {
            return Err(format!("{at}: expected {ty}, got {value}"));
        }
    }
    if let Some(min) = schema.get("minimum").and_then(Value::as_i64) {
        let n = value.as_i64().ok_or_else(|| format!("{at}: not a number"))?;
        if n < min {
            return Err(format!("{at}: {n} below minimum {min}"));
        }
    }
    if let Some(object) = value.as_object() {
        if let Some(required) = schema.get("required").and_then(Value::as_array) {
            for key in required {
                let key = key.as_str().expect("required names are strings");
                if !object.contains_key(key) {
                    return Err(format!("{at}: missing required member '{key}'"));
                }
            }
        }
        let properties = schema.get("properties").and_then(Value::as_object);
        if let Some(properties) = properties {
            for (key, subschema) in properties {
                if let Some(member) = object.get(key) {
                    conforms(subschema, member, &format!("{at}/{key}"))?;
                }
            }
            if schema.get("additionalProperties") == Some(&Value::Bool(false)) {
                for key in object.keys() {
                    if !properties.contains_key(key) {
                        return Err(format!("{at}: unexpected member '{key}'"));
                    }
                }
            }
        }
    }
    Ok(())
}

#[test]
fn envelopes_validate_against_the_published_schema() {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/report-schema.json");
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    let commands: &[&[&str]] = &[
        &["eval", "--structure", "V2", "--formula", "x = x", "--assign", "x={}"],
        &["audit", "V2"],
        &["ef", "V1", "V2"],
        &["tiers", "--config", "2,3", "--check", "A2,lemma"],
        &["cat", "coll", "--stage", "2"],
        &["cat", "freyd", "--enumerate", "1", "2"],
        &["cat", "cantor", "--size", "3"],
        &["cat", "functorcat", "discrete1", "discrete2"],
        &["cat", "embed", "2", "3"],
        &["cat", "topos", "--stage", "2"],
    ];
    for args in commands {
        let mut full = args.to_vec();
        full.extend_from_slice(&["--format", "json"]);
        let out = hflab(&full);
        let envelope: Value = serde_json::from_str(&stdout(&out))
            .unwrap_or_else(|e| panic!("{args:?}: bad JSON: {e}"));
        if let Err(msg) = conforms(&schema, &envelope, "envelope") {
            panic!("{args:?}: {msg}");
        }
    }
}

#[test]
fn reports_embed_the_command_line() {
    let out = hflab(&["cat", "embed", "2", "3", "--format", "json"]);
    let envelope: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(envelope["command"], "cat embed 2 3 --format json");
}
