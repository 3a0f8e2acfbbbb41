//! The JSON files under `fixtures/` must stay in lockstep with the
//! programmatic builders the unit tests use.

use std::path::PathBuf;

use epimc::model::{KripkeModel, RawModel};
use epimc::qbf::{encode, QbfInstance};
use epimc::{fixtures, parse_formula};

fn load(name: &str) -> (KripkeModel, Option<String>) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path:?}: {e}"));
    RawModel::from_json(&text).unwrap().build().unwrap()
}

#[test]
fn model_files_match_builders() {
    let cases: [(&str, KripkeModel, &str); 7] = [
        ("fact33.json", fixtures::fact33(), "w"),
        ("fact34.json", fixtures::fact34(), "w0"),
        ("pair1_left.json", fixtures::pair1_left(), "w"),
        ("pair1_right.json", fixtures::pair1_right(), "w1"),
        ("pair2_left.json", fixtures::pair2_left(), "w1"),
        ("pair2_right.json", fixtures::pair2_right(), "w1"),
        ("quotient_gap.json", fixtures::quotient_gap(), "w1"),
    ];
    for (file, expected, point) in cases {
        let (m, p) = load(file);
        assert_eq!(m, expected, "{file}");
        assert_eq!(p.as_deref(), Some(point), "{file}");
    }
}

#[test]
fn qbf_gadget_files_match_the_encoder() {
    for (file, instance) in [
        ("qbf_gadget_n1.json", "exists x1 : x1"),
        ("qbf_gadget_n2.json", "forall x1 exists x2 : (x1 <-> x2)"),
    ] {
        let (m, p) = load(file);
        let inst = QbfInstance::parse(instance).unwrap();
        let (expected, point, _) = encode(&inst);
        assert_eq!(m, expected, "{file}");
        assert_eq!(p.as_deref(), Some(point.as_str()), "{file}");
    }
}

#[test]
fn qbf_instance_file_parses() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/qbf_example.txt");
    let text = std::fs::read_to_string(path).unwrap();
    let inst = QbfInstance::parse(text.trim()).unwrap();
    assert_eq!(inst.n(), 2);
    assert_eq!(inst.matrix, parse_formula("(x1 <-> x2)").unwrap());
}
