use lascat_cli::{
    bundled_corpus, parse_workspace, CategorySource, InputError, SourceFile, Workspace,
};

fn parse(text: &str) -> Result<Workspace, InputError> {
    parse_workspace(&[SourceFile::new("input.json", text)])
}

const BS2: &str = r#"{
  "categories": [
    {
      "name": "BS2",
      "objects": ["o"],
      "morphisms": [{"id": "t", "src": "o", "tgt": "o"}],
      "compose": [["t", "t", "1_o"]]
    }
  ]
}"#;

#[test]
fn explicit_table_gives_one_category() {
    let ws = parse(BS2).unwrap();
    assert_eq!(ws.categories.len(), 1);
    let c = ws.category("BS2").unwrap().category();
    assert_eq!(c.num_objects(), 1);
    assert_eq!(c.num_morphisms(), 2);
    let t = c.mor("t").unwrap();
    assert_eq!(c.compose(t, t), Some(c.identity(c.obj("o").unwrap())));
}

#[test]
fn circle_poset_shorthand_expands_lazily() {
    let ws = parse(
        r#"{"categories": [{"name": "S1", "poset": {"elements": ["a", "b", "x", "y"],
            "leq": [["a", "x"], ["a", "y"], ["b", "x"], ["b", "y"]]}}]}"#,
    )
    .unwrap();
    let item = ws.category("S1").unwrap();
    assert!(matches!(item.source, CategorySource::Poset(_)));
    assert!(!item.is_expanded());
    let c = item.category();
    assert!(item.is_expanded());
    assert_eq!(c.num_morphisms(), 8);
    assert_eq!(c.non_identities().count(), 4);
}

#[test]
fn poset_shorthand_takes_transitive_closure() {
    let ws = parse(r#"{"categories": [{"name": "C", "poset": {"elements": ["0", "1", "2"], "leq": [["0", "1"], ["1", "2"]]}}]}"#)
        .unwrap();
    let c = ws.category("C").unwrap().category();
    assert_eq!(c.hom(c.obj("0").unwrap(), c.obj("2").unwrap()).len(), 1);
}

#[test]
fn undefined_codomain_is_unresolved() {
    let text = r#"{
  "categories": [{"name": "P", "poset": {"elements": ["*"], "leq": []}}],
  "functors": [{"name": "F", "dom": "P", "cod": "Missing", "objects": [["*", "x"]], "morphisms": []}]
}"#;
    match parse(text) {
        Err(InputError::UnresolvedReference {
            at,
            name,
            target,
            target_kind,
            ..
        }) => {
            assert_eq!(
                (name.as_str(), target.as_str(), target_kind),
                ("F", "Missing", "category")
            );
            assert_eq!(at.line, 3);
        }
        other => panic!("expected an unresolved reference, got {other:?}"),
    }
}

#[test]
fn references_resolve_across_files() {
    let a = SourceFile::new(
        "a.json",
        r#"{"categories": [{"name": "P", "poset": {"elements": ["*"], "leq": []}}]}"#,
    );
    let b = SourceFile::new(
        "b.json",
        r#"{"functors": [{"name": "Id", "dom": "P", "cod": "P", "objects": [["*", "*"]], "morphisms": []}]}"#,
    );
    let ws = parse_workspace(&[b, a]).unwrap();
    assert_eq!(ws.functor("Id").unwrap().provenance.file, "b.json");
}

#[test]
fn syntax_errors_carry_a_position() {
    let err = parse("{\n  \"categories\": [\n    {\"name\": \"X\",, }\n  ]\n}").unwrap_err();
    match err {
        InputError::Syntax {
            file, line, column, ..
        } => {
            assert_eq!(file, "input.json");
            assert_eq!(line, 3);
            assert!(column > 1);
        }
        other => panic!("expected a syntax error, got {other:?}"),
    }
}

#[test]
fn unknown_fields_are_rejected() {
    let err = parse(
        r#"{"categories": [{"name": "P", "poset": {"elements": [], "leq": []}, "colour": 3}]}"#,
    )
    .unwrap_err();
    assert!(matches!(err, InputError::Syntax { .. }), "{err:?}");
}

#[test]
fn invalid_tables_are_validation_errors() {
    // t∘t is left undefined.
    let text = r#"{"categories": [{"name": "Bad", "objects": ["o"], "morphisms": [{"id": "t", "src": "o", "tgt": "o"}]}]}"#;
    match parse(text).unwrap_err() {
        InputError::Validation { kind, name, .. } => {
            assert_eq!((kind, name.as_str()), ("category", "Bad"))
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn a_category_needs_exactly_one_form() {
    let text = r#"{"categories": [{"name": "Both", "objects": ["o"], "poset": {"elements": ["o"], "leq": []}}]}"#;
    assert!(matches!(
        parse(text).unwrap_err(),
        InputError::Validation { .. }
    ));
}

#[test]
fn duplicate_names_point_at_both_definitions() {
    let a = SourceFile::new(
        "a.json",
        r#"{"categories": [{"name": "P", "poset": {"elements": ["*"], "leq": []}}]}"#,
    );
    let b = SourceFile::new(
        "b.json",
        "{\n\"categories\": [{\"name\": \"P\", \"poset\": {\"elements\": [], \"leq\": []}}]}",
    );
    match parse_workspace(&[a, b]).unwrap_err() {
        InputError::Validation { at, message, .. } => {
            assert_eq!((at.file.as_str(), at.line), ("b.json", 2));
            assert!(message.contains("a.json:1"), "{message}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn unknown_subset_members_are_rejected() {
    let text = r#"{"categories": [{"name": "P", "poset": {"elements": ["*"], "leq": []}, "subsets": {"s": ["nope"]}}]}"#;
    assert!(matches!(
        parse(text).unwrap_err(),
        InputError::Validation { .. }
    ));
}

#[test]
fn functor_laws_are_checked_on_load() {
    let text = r#"{
  "categories": [
    {"name": "A", "poset": {"elements": ["a", "b"], "leq": [["a", "b"]]}},
    {"name": "T", "poset": {"elements": ["x", "y"], "leq": []}}
  ],
  "functors": [{"name": "F", "dom": "A", "cod": "T", "objects": [["a", "x"], ["b", "y"]], "morphisms": [["a<b", "1_x"]]}]
}"#;
    assert!(matches!(
        parse(text).unwrap_err(),
        InputError::Validation {
            kind: "functor",
            ..
        }
    ));
}

#[test]
fn round_trip_preserves_content() {
    let ws = parse_workspace(&bundled_corpus()).unwrap();
    let text = serde_json::to_string_pretty(&ws.to_json()).unwrap();
    let again = parse(&text).unwrap();
    assert!(ws.same_content(&again));
    assert_eq!(again.to_json(), ws.to_json());
}

#[test]
fn same_content_notices_changes() {
    let a = parse(BS2).unwrap();
    // Same shape, but t is now idempotent.
    let b = parse(&BS2.replace(r#"["t", "t", "1_o"]"#, r#"["t", "t", "t"]"#)).unwrap();
    assert!(!a.same_content(&b));
    assert!(a.same_content(&parse(BS2).unwrap()));
}

#[test]
fn bundled_corpus_is_large_enough() {
    let ws = parse_workspace(&bundled_corpus()).unwrap();
    assert!(ws.categories.len() >= 30);
    for name in [
        "BZ2",
        "BS3",
        "CirclePoset",
        "WalkingSpan",
        "FinInj5",
        "FaceBoundaryTetrahedron",
        "Bool3",
    ] {
        assert!(ws.category(name).is_some(), "{name}");
    }
    assert!(ws.complex("BoundaryTetrahedron").is_some());
    assert!(ws.transformation("ToB").is_some());
}
