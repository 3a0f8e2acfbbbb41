//! The concrete models used throughout the test suite, built in code so
//! library unit tests do not depend on files on disk. The same models ship
//! as JSON under `fixtures/`; a test keeps the two in sync.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::model::KripkeModel;

fn set(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Reflexive-symmetric closure of an undirected edge list, over `worlds`.
fn closed(worlds: &[&str], edges: &[(&str, &str)]) -> BTreeSet<(String, String)> {
    let mut pairs: BTreeSet<(String, String)> =
        worlds.iter().map(|w| (w.to_string(), w.to_string())).collect();
    for (u, v) in edges {
        pairs.insert((u.to_string(), v.to_string()));
        pairs.insert((v.to_string(), u.to_string()));
    }
    pairs
}

fn build(
    worlds: &[&str],
    agents: &[&str],
    relations: &[(&str, &[(&str, &str)])],
    valuation: &[(&str, &[&str])],
) -> KripkeModel {
    let rels: BTreeMap<String, BTreeSet<(String, String)>> = relations
        .iter()
        .map(|(a, edges)| (a.to_string(), closed(worlds, edges)))
        .collect();
    let val: BTreeMap<String, BTreeSet<String>> =
        valuation.iter().map(|(w, ats)| (w.to_string(), set(ats))).collect();
    KripkeModel::new(set(worlds), set(agents), rels, val).expect("fixture must be well-formed")
}

/// Single agent `a`, worlds `w` (p) and `u`, one undirected a-edge.
pub fn fact33() -> KripkeModel {
    build(&["w", "u"], &["a"], &[("a", &[("w", "u")])], &[("w", &["p"])])
}

/// Agents `a`, `b`; worlds `w0` (p), `u0` (p,q), `u1`; a-edges w0-u0, w0-u1,
/// u0-u1 and b-edge w0-u0; reflexive and symmetric.
pub fn fact34() -> KripkeModel {
    build(
        &["w0", "u0", "u1"],
        &["a", "b"],
        &[
            ("a", &[("w0", "u0"), ("w0", "u1"), ("u0", "u1")]),
            ("b", &[("w0", "u0")]),
        ],
        &[("w0", &["p"]), ("u0", &["p", "q"])],
    )
}

/// Left model of the first incomparability pair: `w` (p) and `u`, a-edge
/// between them, agents a and b (b only loops).
pub fn pair1_left() -> KripkeModel {
    build(&["w", "u"], &["a", "b"], &[("a", &[("w", "u")]), ("b", &[])], &[("w", &["p"])])
}

/// Right model of the first incomparability pair: `w1` (p), `w2` (p,q), `u`;
/// a,b-edge w1-w2; a-edges w1-u and w2-u.
pub fn pair1_right() -> KripkeModel {
    build(
        &["w1", "w2", "u"],
        &["a", "b"],
        &[
            ("a", &[("w1", "w2"), ("w1", "u"), ("w2", "u")]),
            ("b", &[("w1", "w2")]),
        ],
        &[("w1", &["p"]), ("w2", &["p", "q"])],
    )
}

/// Left model of the second incomparability pair, with agents a, b, c.
pub fn pair2_left() -> KripkeModel {
    build(
        &["w1", "w2", "u"],
        &["a", "b", "c"],
        &[
            ("a", &[("w1", "w2")]),
            ("b", &[("w1", "w2"), ("w1", "u"), ("w2", "u")]),
            ("c", &[("w1", "w2"), ("w1", "u"), ("w2", "u")]),
        ],
        &[("w1", &["p"]), ("w2", &["p", "q"])],
    )
}

/// Right model of the second incomparability pair.
pub fn pair2_right() -> KripkeModel {
    build(
        &["w1", "w2", "u1", "u2"],
        &["a", "b", "c"],
        &[
            ("a", &[("w1", "w2")]),
            ("b", &[("w1", "w2"), ("w1", "u1"), ("w2", "u2")]),
            ("c", &[("w1", "w2"), ("w1", "u1"), ("w2", "u2")]),
        ],
        &[("w1", &["p"]), ("w2", &["p", "q"]), ("u1", &["q"])],
    )
}

/// A model that is not collectively bisimilar to its quotient: w1 and w2 are
/// collectively bisimilar (and so are u, v), but merging them creates an
/// `R_{D,{a,b}}` edge that no original world has.
pub fn quotient_gap() -> KripkeModel {
    let worlds = set(&["w1", "w2", "u", "v"]);
    let agents = set(&["a", "b"]);
    let rels: BTreeMap<String, BTreeSet<(String, String)>> = [
        (
            "a".to_string(),
            [("w1", "u"), ("w2", "v")]
                .iter()
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .collect(),
        ),
        (
            "b".to_string(),
            [("w1", "v"), ("w2", "u")]
                .iter()
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .collect(),
        ),
    ]
    .into_iter()
    .collect();
    KripkeModel::new(worlds, agents, rels, BTreeMap::new()).unwrap()
}
