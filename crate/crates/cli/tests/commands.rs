use std::process::Command as Process;
use std::sync::OnceLock;

use lascat_cli::{
    bundled_corpus, parse_workspace, run_command, Command, CommandError, Flags, Format, Workspace,
};
use serde_json::{json, Value};

fn corpus() -> &'static Workspace {
    static WS: OnceLock<Workspace> = OnceLock::new();
    WS.get_or_init(|| parse_workspace(&bundled_corpus()).unwrap())
}

fn on(category: &str) -> Flags {
    Flags {
        category: Some(category.into()),
        ..Flags::default()
    }
}

fn run(cmd: Command, flags: Flags) -> lascat_cli::Report {
    run_command(corpus(), cmd, &flags).unwrap()
}

fn field<'a>(r: &'a lascat_cli::Report, path: &str) -> &'a Value {
    r.get(path)
        .unwrap_or_else(|| panic!("no {path} in\n{}", r.to_json()))
}

#[test]
fn pi1_of_bs3_has_order_six() {
    let r = run(
        Command::Pi1,
        Flags {
            basepoint: Some("o".into()),
            identify: Some(1000),
            ..on("BS3")
        },
    );
    assert_eq!(r.exit_code(), 0);
    assert_eq!(field(&r, "/result/order"), 6);
}

#[test]
fn lascar_on_injections() {
    let r = run(
        Command::Lascar,
        Flags {
            sub: Some("size<=3".into()),
            at: Some("U5".into()),
            ..on("FinInj5")
        },
    );
    assert_eq!(r.exit_code(), 0);
    assert_eq!(field(&r, "/result/lst_order"), 120);
    assert_eq!(field(&r, "/result/quotient_trivial"), true);
}

#[test]
fn homology_of_circle_poset() {
    let r = run(
        Command::Homology,
        Flags {
            max_dim: Some(2),
            ..on("CirclePoset")
        },
    );
    assert_eq!(
        field(&r, "/result/homology/display"),
        &json!(["Z", "Z", "0"])
    );
}

#[test]
fn reports_echo_budgets_and_flags() {
    let r = run(
        Command::Homology,
        Flags {
            max_dim: Some(3),
            ..on("BZ2")
        },
    );
    assert_eq!(field(&r, "/budgets/max_dim"), 3);
    assert_eq!(
        field(&r, "/budgets/max_cosets"),
        lascat_cli::DEFAULT_MAX_COSETS
    );
    assert_eq!(
        field(&r, "/command/flags"),
        &json!({"category": "BZ2", "max_dim": 3})
    );
    assert_eq!(field(&r, "/command/name"), "homology");
}

#[test]
fn validate_lists_everything() {
    let r = run(Command::Validate, Flags::default());
    assert_eq!(r.exit_code(), 0);
    let text = r.to_json();
    for name in ["BS2", "FinInj3", "ConjugateBS3", "BoundaryTriangle"] {
        assert!(text.contains(name), "{name}");
    }
}

#[test]
fn failing_property_exits_one() {
    let r = run(
        Command::Props,
        Flags {
            property: vec!["Terminal".into()],
            ..on("CirclePoset")
        },
    );
    assert_eq!(r.exit_code(), 1);
    assert_eq!(field(&r, "/result/category/0/verdict"), "Fails");
}

#[test]
fn resource_limits_exit_three() {
    let r = run(
        Command::Homology,
        Flags {
            max_steps: Some(1000),
            ..on("FinInj4")
        },
    );
    assert_eq!(r.exit_code(), 3);
}

#[test]
fn quillen_counterexample_fails_with_witness() {
    let r = run(
        Command::QuillenA,
        Flags {
            functor: Some("IncB".into()),
            ..Flags::default()
        },
    );
    assert_eq!(r.exit_code(), 1);
    assert_eq!(field(&r, "/result/witness/kind"), "empty_slice");
    assert_eq!(field(&r, "/result/witness/fields/object"), "a");
}

#[test]
fn equivalences() {
    let ok = run(
        Command::Equiv,
        Flags {
            functor: Some("Closure".into()),
            inverse: Some("ClosedInclusion".into()),
            evidence: vec!["ClosureUnit".into()],
            ..Flags::default()
        },
    );
    assert_eq!(ok.exit_code(), 0, "{}", ok.to_json());
    let bad = run(
        Command::Equiv,
        Flags {
            functor: Some("IdBS3".into()),
            inverse: Some("IdBS3".into()),
            evidence: vec!["ConjugateBS3".into()],
            ..Flags::default()
        },
    );
    assert_eq!(bad.exit_code(), 1);
    assert!(bad.to_json().contains("naturality_failure"));
}

#[test]
fn main_theorem_on_bs4() {
    let r = run(
        Command::MainTheorem,
        Flags {
            sub: Some("o".into()),
            ..on("BS4")
        },
    );
    assert_eq!(field(&r, "/result/verdict"), "Holds");
    assert_eq!(field(&r, "/result/gal/order"), 24);
    assert_eq!(field(&r, "/result/pi1/order"), 24);
}

#[test]
fn karoubi_splits_the_idempotent() {
    let r = run(Command::Karoubi, on("WalkingIdempotent"));
    assert_eq!(r.exit_code(), 0);
    assert_eq!(field(&r, "/result/homology/agree"), true);
}

#[test]
fn face_poset_and_subdivision_agree() {
    for cmd in [Command::FacePoset, Command::Subdivide] {
        let r = run(
            cmd,
            Flags {
                complex: Some("BoundaryTetrahedron".into()),
                ..Flags::default()
            },
        );
        assert_eq!(r.exit_code(), 0, "{}", cmd.name());
        assert_eq!(field(&r, "/result/homology/agree"), true);
    }
}

#[test]
fn usage_errors() {
    let ws = corpus();
    let cases = [
        (Command::Homology, on("NoSuchCategory")),
        (Command::Pi1, Flags::default()),
        (Command::Lascar, on("FinInj5")),
        (
            Command::QuillenA,
            Flags {
                functor: Some("IncB".into()),
                side: Some("sideways".into()),
                ..Flags::default()
            },
        ),
        (
            Command::Props,
            Flags {
                property: vec!["Shiny".into()],
                ..on("BZ2")
            },
        ),
    ];
    for (cmd, flags) in cases {
        assert!(
            matches!(run_command(ws, cmd, &flags), Err(CommandError::Usage(_))),
            "{} {flags:?}",
            cmd.name()
        );
    }
}

#[test]
fn reports_are_deterministic() {
    let a = parse_workspace(&bundled_corpus()).unwrap();
    let b = parse_workspace(&bundled_corpus()).unwrap();
    for cmd in [
        Command::Props,
        Command::Pi1,
        Command::Homology,
        Command::Karoubi,
        Command::Amalgamate,
    ] {
        for name in ["BS3", "CirclePoset", "WalkingSpan", "PendantCircle"] {
            let x = run_command(&a, cmd, &on(name)).unwrap();
            let y = run_command(&b, cmd, &on(name)).unwrap();
            assert_eq!(x.to_json(), y.to_json());
            assert_eq!(x.render(Format::Text), y.render(Format::Text));
        }
    }
}

fn lascat(args: &[&str]) -> (i32, String) {
    let out = Process::new(env!("CARGO_BIN_EXE_lascat"))
        .args(args)
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
    )
}

#[test]
fn binary_exit_codes() {
    let (code, out) = lascat(&[
        "pi1",
        "--category",
        "BS3",
        "--basepoint",
        "o",
        "--identify",
        "1000",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("order: 6"), "{out}");
    let (code, out) = lascat(&[
        "homology",
        "--category",
        "CirclePoset",
        "--max-dim",
        "2",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["homology"]["display"], json!(["Z", "Z", "0"]));
    assert_eq!(
        lascat(&[
            "props",
            "--category",
            "CirclePoset",
            "--property",
            "Terminal"
        ])
        .0,
        1
    );
    assert_eq!(lascat(&["homology", "--category", "Nope"]).0, 2);
    assert_eq!(lascat(&["homology", "--input", "/nonexistent.json"]).0, 2);
    assert_eq!(
        lascat(&["homology", "--category", "FinInj4", "--max-steps", "100"]).0,
        3
    );
}

#[test]
fn binary_reads_input_files() {
    let dir = std::env::temp_dir().join(format!("lascat-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z3.json");
    std::fs::write(
        &path,
        r#"{"categories": [{"name": "Z3", "objects": ["o"], "morphisms": [{"id": "g", "src": "o", "tgt": "o"},
            {"id": "h", "src": "o", "tgt": "o"}], "compose": [["g", "g", "h"], ["g", "h", "1_o"], ["h", "g", "1_o"], ["h", "h", "g"]]}]}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let (code, out) = lascat(&[
        "pi1",
        "--input",
        p,
        "--category",
        "Z3",
        "--identify",
        "100",
        "--format",
        "json",
    ]);
    assert_eq!(code, 0, "{out}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["order"], 3);
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(lascat(&["validate", "--input", p]).0, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}
