use std::path::{Path, PathBuf};

use lawvere_core::dsl::{self, Expr, Item, TheoryItem};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn fixtures() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(root().join("fixtures"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "law"))
        .collect();
    v.sort();
    v
}

#[test]
fn every_fixture_round_trips() {
    let files = fixtures();
    assert_eq!(files.len(), 7);
    for path in files {
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = dsl::parse(&text).unwrap();
        let once = dsl::serialize(&doc);
        let reparsed = dsl::parse(&once).unwrap();
        assert_eq!(reparsed, doc, "{}", path.display());
        assert_eq!(dsl::serialize(&reparsed), once, "{} is not a fixpoint", path.display());
        dsl::load_library(&path).unwrap_or_else(|d| panic!("{d}"));
    }
}

#[test]
fn graded_lines_matches_its_canonical_form() {
    let text = std::fs::read_to_string(root().join("fixtures/graded_lines.law")).unwrap();
    let canonical = dsl::serialize(&dsl::parse(&text).unwrap());
    let golden = std::fs::read_to_string(root().join("golden/dsl/graded_lines.law")).unwrap();
    assert_eq!(canonical, golden);
    assert_eq!(dsl::parse(&golden).unwrap(), dsl::parse(&text).unwrap());
}

#[test]
fn empty_theory_has_no_generators() {
    let lib = dsl::resolve(&dsl::parse("theory E { }").unwrap()).unwrap();
    let t = &lib.theories["E"];
    assert!(t.base.signature.ops.is_empty());
    assert!(t.base.equations.is_empty());
    assert!(t.cells.is_empty());
}

#[test]
fn commutative_monoid_fixture_has_two_generators_and_three_equations() {
    let lib = dsl::load_library(&root().join("fixtures/t_comm.law")).unwrap();
    let t = &lib.theories["CMon"];
    assert_eq!(t.base.signature.ops.len(), 2);
    assert_eq!(t.base.equations.len(), 3);
    assert_eq!(t.base.arity(t.base.op("m").unwrap()), 2);
    assert_eq!(t.base.arity(t.base.op("u").unwrap()), 0);
}

#[test]
fn missing_target_is_reported_where_it_is_missing() {
    let text = "theory T {\n  op m : 2 ->\n}";
    let d = dsl::parse(text).unwrap_err();
    assert_eq!((d.line, d.column), (3, 1), "{d}");
}

#[test]
fn diagnostics_point_inside_the_text() {
    let bad = [
        "theory T { op m : 2 -> 1; eq e : m(x1, x2) = n(x1); }",
        "theory T { op m : 2 -> 1 }",
        "model M of Nope in finset { carrier 2; }",
        "theory T { op m : 2 -> 1; }\nmodel M of T in finset {\n  carrier 2;\n  m = table [0, 1];\n}",
        "theory T { op m : 2 -> 2; }",
        "category C { objects a; arrow f : a -> b; }",
        "theory T { op m : 2 -> 1; cell c : m => u; }",
        "import \"nowhere.law\";",
        "theory T { op m : 2 -> 1; } theory T { }",
        "@",
        "check \"unterminated",
    ];
    for text in bad {
        let d = match dsl::parse(text) {
            Err(d) => d,
            Ok(doc) => match dsl::resolve(&doc) {
                Err(d) => d,
                Ok(_) => panic!("accepted: {text}"),
            },
        };
        let lines: Vec<&str> = text.split('\n').collect();
        assert!(d.line >= 1 && d.line <= lines.len(), "{text}: {d}");
        assert!(d.column >= 1 && d.column <= lines[d.line - 1].chars().count() + 1, "{text}: {d}");
        assert!(!d.message.is_empty());
    }
}

#[test]
fn unresolved_reference_names_the_missing_operation() {
    let doc = dsl::parse("theory T {\n  op m : 2 -> 1;\n  eq e : m(x1, x2) = n(x1);\n}").unwrap();
    let d = dsl::resolve(&doc).unwrap_err();
    assert_eq!(d.line, 3);
    assert!(d.message.contains('n'), "{d}");
}

#[test]
fn serialize_reflects_a_mutation() {
    let mut doc = dsl::parse("theory T { op m : 2 -> 1; }").unwrap();
    if let Item::Theory(t) = &mut doc.items[0] {
        t.items.push(TheoryItem::Eq {
            span: Default::default(),
            name: "comm".into(),
            lhs: Expr::Name("m".into()),
            rhs: Expr::Compose(
                Box::new(Expr::Name("m".into())),
                Box::new(Expr::Call("swap".into(), vec![Expr::Num(1), Expr::Num(2)])),
            ),
        });
    }
    let text = dsl::serialize(&doc);
    assert!(text.contains("  eq comm : m = m . swap(1, 2);\n"), "{text}");
    assert_eq!(dsl::parse(&text).unwrap(), doc);
}

#[test]
fn imports_are_spliced_once_and_relative_to_the_importer() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::create_dir(dir.path().join("sub")).unwrap();
    std::fs::write(dir.path().join("sub/base.law"), "theory T { op m : 2 -> 1; }\n").unwrap();
    std::fs::write(dir.path().join("sub/mid.law"), "import \"base.law\";\n").unwrap();
    std::fs::write(
        dir.path().join("top.law"),
        "import \"sub/mid.law\";\nimport \"sub/base.law\";\nmodel M of T in finset { carrier 1; m = table [0]; }\n",
    )
    .unwrap();
    let lib = dsl::load_library(&dir.path().join("top.law")).unwrap();
    assert_eq!(lib.theories.len(), 1);
    assert_eq!(lib.finset_models.len(), 1);
}

#[test]
fn pasting_combinators_elaborate() {
    let text = "theory P {\n  op m : 2 -> 1;\n  cell a : m(m(x1, x2), x3) => m(x1, m(x2, x3)) invertible;\n  \
                celleq back : vert(a, inv(a)) = id(m(m(x1, x2), x3));\n  \
                celleq whisk : whiskR(powL(2, a), m) = whiskR(powL(2, a), m);\n}\n";
    let lib = dsl::resolve(&dsl::parse(text).unwrap()).unwrap();
    assert_eq!(lib.theories["P"].cell_equations.len(), 2);
}
