//! End-to-end checks of the command-line surface: pinned text outputs, the
//! JSON schema, exit codes, and the print/parse round trip.

use diagramma::cli::execute;
use diagramma::diagram::{parse_diagram, print_diagram};
use diagramma::search::construct_four_disc_example;
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String) {
    let mut full = vec!["diagramma"];
    full.extend_from_slice(args);
    execute(&full)
}

#[test]
fn shape_verb_matches_pinned_output() {
    let (code, out) = run(&["shape", "T T T' T' T' T T"]);
    assert_eq!(code, 0);
    assert_eq!(out, "complexity=3 root=\"T T T'\" amenable=true\n");
}

#[test]
fn psp_verb_matches_pinned_output() {
    let (code, out) = run(&["psp", "5"]);
    assert_eq!(code, 0);
    assert_eq!(out, "rank=4\n");
}

#[test]
fn search_verb_reports_zero_over_free_group() {
    let (code, out) = run(&[
        "search",
        "--word",
        "T a T b T' c",
        "--group",
        "free:a,b,c",
        "--max-discs",
        "4",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("irreducible=0"), "{out}");
}

#[test]
fn exit_codes() {
    let (code, _) = run(&["shape", "T X"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["psp", "0"]);
    assert_eq!(code, 1);
    let (code, _) = run(&["no-such-verb"]);
    assert_eq!(code, 2);
}

#[test]
fn disc_cap_env_is_respected() {
    let (code, msg) = run(&[
        "search",
        "--word",
        "T a",
        "--group",
        "free:a",
        "--max-discs",
        "7",
    ]);
    assert_eq!(code, 1);
    assert!(msg.contains("cap"), "{msg}");
}

fn write_four_disc(tag: &str) -> std::path::PathBuf {
    let d = construct_four_disc_example().unwrap();
    let path = std::env::temp_dir().join(format!(
        "diagramma-four_disc-{}-{tag}.diagram",
        std::process::id()
    ));
    std::fs::write(&path, print_diagram(&d).unwrap()).unwrap();
    path
}

#[test]
fn diagram_verbs_round_trip() {
    let path = write_four_disc("verbs");
    let file = path.to_str().unwrap();

    let (code, out) = run(&["diagram-validate", file]);
    assert_eq!(code, 0);
    assert!(out.starts_with("valid=true"));

    let (code, out) = run(&["diagram-irreducible", file]);
    assert_eq!(code, 0);
    assert!(out.contains("irreducible=true"));

    let (code, out) = run(&["diagram-reduce", file]);
    assert_eq!(code, 0);
    // Irreducible input is untouched; the output re-parses isomorphically.
    let reduced = parse_diagram(&out).unwrap();
    assert!(reduced.isomorphic(&construct_four_disc_example().unwrap()));

    let (code, out) = run(&[
        "diagram-cycle",
        file,
        "--hom",
        "hom dihedral { a = (1 2); b = (1 2); c = (1 2); }",
        "--t-image",
        "(1 3)",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("is_zero=false"), "{out}");

    let (code, out) = run(&["diagram-convert", file]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("irreducibility_preserved=true"), "{out}");
    // The converted diagram (with its two-leg discs) re-parses exactly.
    let body = out.split_once('\n').unwrap().1;
    let converted = parse_diagram(body).unwrap();
    assert_eq!(print_diagram(&converted).unwrap(), body);

    let (code, out) = run(&["render", file]);
    assert_eq!(code, 0);
    assert!(out.starts_with("<svg"));

    std::fs::remove_file(path).ok();
}

#[test]
fn json_outputs_validate_against_the_shipped_schema() {
    let schema: Value =
        serde_json::from_str(include_str!("../schemas/cli-output.schema.json")).unwrap();
    let path = write_four_disc("json");
    let file = path.to_str().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["--format", "json", "shape", "T T T'"],
        vec!["--format", "json", "shape", "T T"],
        vec![
            "--format", "json", "word", "--group", "free:a,b,c,d,e",
            "a T T b T' T' c d T' e T T",
        ],
        vec!["--format", "json", "diagram-validate", file],
        vec!["--format", "json", "diagram-reduce", file],
        vec!["--format", "json", "diagram-irreducible", file],
        vec!["--format", "json", "diagram-cycle", file],
        vec![
            "--format", "json", "diagram-cycle", file,
            "--hom", "hom d { a = (1 2); b = (1 2); c = (1 2); }",
            "--t-image", "(1 3)",
        ],
        vec!["--format", "json", "diagram-convert", file],
        vec![
            "--format", "json", "search", "--word", "T a T' b", "--group",
            "free:a,b", "--max-discs", "2",
        ],
        vec!["--format", "json", "psp", "6"],
        vec!["--format", "json", "render", file],
    ];
    for case in cases {
        let (code, out) = run(&case);
        assert_eq!(code, 0, "case {case:?}: {out}");
        let value: Value = serde_json::from_str(&out).unwrap_or_else(|e| {
            panic!("case {case:?} produced invalid json: {e}\n{out}")
        });
        validate_against_schema(&schema, &value)
            .unwrap_or_else(|e| panic!("case {case:?}: {e}"));
    }
    std::fs::remove_file(path).ok();
}

/// Minimal structural validator for the shipped schema format.
fn validate_against_schema(schema: &Value, value: &Value) -> Result<(), String> {
    let verb = value
        .get("verb")
        .and_then(|v| v.as_str())
        .ok_or("output lacks a `verb` field")?;
    let spec = schema["verbs"]
        .get(verb)
        .ok_or_else(|| format!("verb `{verb}` missing from the schema"))?;
    let required = spec["required"]
        .as_object()
        .ok_or("schema entry lacks `required`")?;
    for (field, ty) in required {
        let ty = ty.as_str().unwrap_or("");
        let entry = value
            .get(field)
            .ok_or_else(|| format!("`{verb}` output lacks `{field}`"))?;
        let nullable = ty.ends_with("|null");
        let base = ty.trim_end_matches("|null");
        if entry.is_null() {
            if nullable {
                continue;
            }
            return Err(format!("`{verb}.{field}` must not be null"));
        }
        let ok = match base {
            "number" => entry.is_number(),
            "string" => entry.is_string(),
            "boolean" => entry.is_boolean(),
            "array" => entry.is_array(),
            other => return Err(format!("unknown schema type `{other}`")),
        };
        if !ok {
            return Err(format!("`{verb}.{field}` is not a {base}"));
        }
    }
    Ok(())
}
