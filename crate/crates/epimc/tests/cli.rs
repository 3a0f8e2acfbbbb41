use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn epimc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epimc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn check_true_false_and_error_exit_codes() {
    let m = fixture("fact33.json");
    let t = epimc(&["check", "-m", &m, "-w", "w", "-f", "[! p] K a p"]);
    assert_eq!(t.status.code(), Some(0));
    assert_eq!(stdout(&t).trim(), "true");

    let f = epimc(&["check", "-m", &m, "-w", "w", "-f", "K a p"]);
    assert_eq!(f.status.code(), Some(1));
    assert_eq!(stdout(&f).trim(), "false");

    let e = epimc(&["check", "-m", &m, "-w", "w", "-f", "(p &"]);
    assert_eq!(e.status.code(), Some(2));

    // defaults to the model's point
    let d = epimc(&["check", "-m", &m, "-f", "p"]);
    assert_eq!(d.status.code(), Some(0));
}

#[test]
fn check_routes_quantified_formulas() {
    let right = fixture("pair1_right.json");
    let out = epimc(&["check", "-m", &right, "-w", "w1", "-f", "<* a,b> (K a p & ~K a K a p)"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let left = fixture("pair1_left.json");
    let out = epimc(&["check", "-m", &left, "-w", "w", "-f", "<* a,b> (K a p & ~K a K a p)"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn global_check_lists_satisfying_worlds() {
    let m = fixture("fact34.json");
    let out = epimc(&["global-check", "-m", &m, "-f", "[{a,b} ! q] K a p"]);
    assert_eq!(out.status.code(), Some(0));
    let worlds: Vec<String> = stdout(&out).lines().map(str::to_string).collect();
    // agrees with per-world check
    for w in ["w0", "u0", "u1"] {
        let pointed = epimc(&["check", "-m", &m, "-w", w, "-f", "[{a,b} ! q] K a p"]);
        assert_eq!(
            pointed.status.code() == Some(0),
            worlds.contains(&w.to_string()),
            "world {w}"
        );
    }
}

#[test]
fn global_check_json_output() {
    let m = fixture("fact33.json");
    let out = epimc(&["--json", "global-check", "-m", &m, "-f", "p"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["worlds"], serde_json::json!(["w"]));
}

#[test]
fn update_with_empty_share_group_is_identity() {
    let m = fixture("fact34.json");
    let out = epimc(&["update", "-m", &m, "--share", "", "--topic", "p"]);
    assert_eq!(out.status.code(), Some(0));
    let updated = epimc::model::RawModel::from_json(&stdout(&out)).unwrap().build().unwrap();
    let original = epimc::model::RawModel::from_json(&std::fs::read_to_string(&m).unwrap())
        .unwrap()
        .build()
        .unwrap();
    assert_eq!(updated, original);
}

#[test]
fn update_share_and_announce_produce_loadable_models() {
    let m = fixture("fact34.json");
    for args in [
        vec!["update", "-m", &m, "--share", "a,b", "--topic", "q"],
        vec!["update", "-m", &m, "--announce", "p"],
        vec!["update", "-m", &m, "--announce", "p", "--worlds"],
    ] {
        let out = epimc(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}");
        let (model, _) = epimc::model::RawModel::from_json(&stdout(&out))
            .unwrap()
            .build()
            .unwrap();
        assert!(!model.worlds().is_empty());
    }
    // world-removing announcement of a falsehood is an error
    let out = epimc(&["update", "-m", &m, "--announce", "false", "--worlds"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bisim_and_classes() {
    let l = fixture("pair1_left.json");
    let r = fixture("pair1_right.json");
    let yes = epimc(&["bisim", "--m1", &l, "--w1", "w", "--m2", &r, "--w2", "w1", "--atoms", "p"]);
    assert_eq!(yes.status.code(), Some(0));
    assert!(stdout(&yes).starts_with("true"));
    let no = epimc(&["bisim", "--m1", &l, "--w1", "w", "--m2", &r, "--w2", "w1"]);
    assert_eq!(no.status.code(), Some(1));

    let out = epimc(&["--json", "classes", "-m", &fixture("quotient_gap.json")]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["blocks"], serde_json::json!([["u", "v"], ["w1", "w2"]]));
}

#[test]
fn translate_emits_box_free_formulas() {
    let out = epimc(&["translate", "-f", "[{a} ! p] q"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let f = epimc::parse_formula(text.trim()).unwrap();
    assert!(!f.has_update_modality());

    let out = epimc(&["translate", "-f", "[* a] p"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn qbf_subcommand_agrees_with_itself() {
    let out = epimc(&["qbf", "-i", &fixture("qbf_example.txt")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("oracle: true"));
    assert!(text.contains("encoded: true"));

    let out = epimc(&["--json", "qbf", "-i", &fixture("qbf_example.txt"), "--emit-model"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["oracle"], serde_json::json!(true));
    assert_eq!(v["model"]["point"], serde_json::json!("w0"));
}

#[test]
fn validate_reports_violations() {
    let ok = epimc(&["validate", "-m", &fixture("fact33.json")]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout(&ok).trim(), "ok");

    let dir = std::env::temp_dir().join("epimc-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        r#"{"agents": ["a"], "worlds": ["w"], "relations": {"a": [["w", "zz"]]}}"#,
    )
    .unwrap();
    let out = epimc(&["validate", "-m", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("undeclared"));

    let json = epimc(&["--json", "validate", "-m", bad.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(stdout(&json).trim()).unwrap();
    assert!(v["violations"].as_array().unwrap().len() == 1);
}

#[test]
fn json_errors_are_machine_readable() {
    let out = epimc(&["--json", "check", "-m", "/nonexistent.json", "-f", "p"]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert!(v["error"].is_string());
}
