//! Runs every `check` directive of every fixture through the binary: the exit
//! code must match the directive, the JSON report must validate against the
//! shipped schema, two runs must agree byte for byte, and the report must
//! equal the golden file. Set `LAWVERE_BLESS=1` to rewrite the golden files.

use std::path::{Path, PathBuf};
use std::process::Command;

use lawvere_core::dsl;
use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

pub fn slug(args: &str) -> String {
    let mut s = String::new();
    for c in args.chars() {
        if c.is_ascii_alphanumeric() {
            s.push(c);
        } else if !s.ends_with('-') {
            s.push('-');
        }
    }
    s.trim_matches('-').to_string()
}

fn run(file: &str, args: &str) -> (i32, String) {
    let mut words = args.split_whitespace();
    let sub = words.next().expect("a subcommand");
    let out = Command::new(env!("CARGO_BIN_EXE_lawvere"))
        .current_dir(root())
        .arg(sub)
        .arg(file)
        .args(words)
        .args(["--format", "json", "--no-timings"])
        .output()
        .expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).unwrap())
}

fn directives() -> Vec<(String, String, i32)> {
    let mut out = Vec::new();
    let mut files: Vec<PathBuf> = std::fs::read_dir(root().join("fixtures"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "law"))
        .collect();
    files.sort();
    for path in files {
        // only the file's own directives, not those of its imports
        let doc = dsl::parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let rel = format!("fixtures/{}", path.file_name().unwrap().to_string_lossy());
        for c in doc.checks() {
            out.push((rel.clone(), c.args.clone(), c.expect));
        }
    }
    out
}

#[test]
fn fixture_directives_match_golden_reports() {
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(root().join("schema/report.schema.json")).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    let bless = std::env::var_os("LAWVERE_BLESS").is_some();
    let all = directives();
    assert!(all.len() >= 30, "expected directives in every fixture");
    for (file, args, expect) in all {
        let (code, json) = run(&file, &args);
        assert_eq!(code, expect, "{file}: {args}\n{json}");
        let (_, again) = run(&file, &args);
        assert_eq!(json, again, "{file}: {args} is not deterministic");
        let report: Value = serde_json::from_str(&json).unwrap();
        let errors: Vec<String> = validator.iter_errors(&report).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{file}: {args}: {errors:?}");
        if code == 1 {
            let fails: Vec<&str> = report["verdicts"]
                .as_array()
                .unwrap()
                .iter()
                .filter(|v| v["status"] == "fail")
                .map(|v| v["check"].as_str().unwrap())
                .collect();
            for f in fails {
                assert!(
                    report["witnesses"].as_array().unwrap().iter().any(|w| w["check"] == f),
                    "{file}: {args}: failing check {f} has no witness"
                );
            }
        }
        let stem = Path::new(&file).file_stem().unwrap().to_string_lossy().to_string();
        let golden = root().join("golden").join(stem).join(format!("{}.json", slug(&args)));
        if bless {
            std::fs::create_dir_all(golden.parent().unwrap()).unwrap();
            std::fs::write(&golden, &json).unwrap();
        } else {
            let want = std::fs::read_to_string(&golden).unwrap_or_else(|_| panic!("missing golden file {}", golden.display()));
            assert_eq!(json, want, "{file}: {args} differs from {}", golden.display());
        }
    }
}

#[test]
fn text_reports_are_stable_without_timings() {
    let out = |_: ()| {
        Command::new(env!("CARGO_BIN_EXE_lawvere"))
            .current_dir(root())
            .args(["sigma-check", "fixtures/t_braid.law", "--no-timings"])
            .output()
            .unwrap()
    };
    let (a, b) = (out(()), out(()));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(1));
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("FAIL    gray2-vertical"), "{text}");
    assert!(!text.contains("timings"));
}
