//! Model transformers: partial communication and the two styles of public
//! announcement. The topic / announced formula arrives as a truth set, so
//! these functions do not depend on the semantics module.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::KripkeModel;

/// `[S!χ]`: each agent keeps an edge iff both endpoints are linked for the
/// whole group `S` or agree on the topic. With `S = ∅` the group relation is
/// total and nothing changes.
pub fn partial_comm_update(
    m: &KripkeModel,
    group: &BTreeSet<String>,
    topic: &BTreeSet<String>,
) -> Result<KripkeModel> {
    let group_rel = m.group_relation(group)?;
    for w in topic {
        if !m.has_world(w) {
            return Err(Error::UnknownWorld(w.clone()));
        }
    }
    let keep = |u: &str, v: &str| group_rel.contains(u, v) || KripkeModel::agree(topic, u, v);
    let relations: BTreeMap<String, BTreeSet<(String, String)>> = m
        .relations()
        .iter()
        .map(|(a, pairs)| {
            (a.clone(), pairs.iter().filter(|(u, v)| keep(u, v)).cloned().collect())
        })
        .collect();
    Ok(m.with_relations(relations))
}

/// `[ξ!]`: delete every edge whose endpoints disagree on `ξ`; the domain is
/// unchanged.
pub fn pa_edge_update(m: &KripkeModel, announced: &BTreeSet<String>) -> Result<KripkeModel> {
    for w in announced {
        if !m.has_world(w) {
            return Err(Error::UnknownWorld(w.clone()));
        }
    }
    let relations: BTreeMap<String, BTreeSet<(String, String)>> = m
        .relations()
        .iter()
        .map(|(a, pairs)| {
            (
                a.clone(),
                pairs
                    .iter()
                    .filter(|(u, v)| KripkeModel::agree(announced, u, v))
                    .cloned()
                    .collect(),
            )
        })
        .collect();
    Ok(m.with_relations(relations))
}

/// World-removing announcement: restrict the model to the worlds where the
/// announced formula holds. Errors if that set is empty.
pub fn pa_world_update(m: &KripkeModel, announced: &BTreeSet<String>) -> Result<KripkeModel> {
    for w in announced {
        if !m.has_world(w) {
            return Err(Error::UnknownWorld(w.clone()));
        }
    }
    if announced.is_empty() {
        return Err(Error::EmptyDomain);
    }
    Ok(m.restricted_to(announced))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn set(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn edge_count(m: &KripkeModel) -> usize {
        m.relations().values().map(|p| p.len()).sum()
    }

    fn sub_relation(m1: &KripkeModel, m2: &KripkeModel) -> bool {
        m1.relations()
            .iter()
            .all(|(a, pairs)| pairs.is_subset(&m2.relations()[a]))
    }

    #[test]
    fn empty_group_update_is_identity() {
        let m = fixtures::fact34();
        let updated = partial_comm_update(&m, &BTreeSet::new(), &set(&["w0", "u0"])).unwrap();
        assert_eq!(updated, m);
    }

    #[test]
    fn full_share_on_fact34_deletes_the_disagreeing_a_edges() {
        // group {a,b}, topic q = {u0}: a loses exactly w0-u1's companions?
        // No: R_{D,{a,b}} keeps w0-u0; agreement on {u0} keeps w0-u1 and
        // loops; the deleted a-pairs are (u0,u1) and (u1,u0).
        let m = fixtures::fact34();
        let updated = partial_comm_update(&m, &set(&["a", "b"]), &set(&["u0"])).unwrap();
        let before = &m.relations()["a"];
        let after = &updated.relations()["a"];
        let deleted: BTreeSet<_> = before.difference(after).cloned().collect();
        assert_eq!(
            deleted,
            [("u0", "u1"), ("u1", "u0")]
                .iter()
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .collect()
        );
        assert_eq!(updated.relations()["b"], m.relations()["b"]);
        // transitivity of R_a is not preserved: w0-u0 and w0-u1 survive but
        // u0-u1 does not
        assert!(m.group_relation(&set(&["a"])).unwrap().is_transitive());
        assert!(!updated.group_relation(&set(&["a"])).unwrap().is_transitive());
    }

    #[test]
    fn group_relation_after_update_decomposes() {
        // R'_{D,G} = R_{D,G∪S} ∪ (R_{D,G} ∩ ~χ)
        let m = fixtures::fact34();
        for (g, s) in [
            (set(&["a"]), set(&["b"])),
            (set(&["b"]), set(&["a"])),
            (set(&["a"]), set(&["a", "b"])),
            (set(&["a", "b"]), set(&["a"])),
        ] {
            for topic in [set(&[]), set(&["w0"]), set(&["u0"]), set(&["w0", "u0"])] {
                let updated = partial_comm_update(&m, &s, &topic).unwrap();
                let lhs = updated.group_relation(&g).unwrap();
                let union_rel = m
                    .group_relation(&g.union(&s).cloned().collect())
                    .unwrap();
                let agree = m.agreement_relation(&topic).unwrap();
                let rhs: BTreeSet<_> = union_rel
                    .iter()
                    .cloned()
                    .chain(
                        m.group_relation(&g)
                            .unwrap()
                            .intersect(&agree)
                            .iter()
                            .cloned(),
                    )
                    .collect();
                assert_eq!(lhs.iter().cloned().collect::<BTreeSet<_>>(), rhs);
            }
        }
    }

    #[test]
    fn edge_update_keeps_domain_and_drops_disagreeing_edges() {
        let m = fixtures::fact33();
        let updated = pa_edge_update(&m, &set(&["w"])).unwrap();
        assert_eq!(updated.worlds(), m.worlds());
        let after = &updated.relations()["a"];
        assert!(after.contains(&("w".to_string(), "w".to_string())));
        assert!(after.contains(&("u".to_string(), "u".to_string())));
        assert!(!after.contains(&("w".to_string(), "u".to_string())));
    }

    #[test]
    fn world_update_restricts_domain() {
        let m = fixtures::fact33();
        let updated = pa_world_update(&m, &set(&["w"])).unwrap();
        assert_eq!(updated.worlds(), &set(&["w"]));
        assert_eq!(
            updated.relations()["a"],
            [("w".to_string(), "w".to_string())].into_iter().collect()
        );
    }

    #[test]
    fn world_update_on_empty_truth_set_fails() {
        let m = fixtures::fact33();
        assert_eq!(pa_world_update(&m, &BTreeSet::new()), Err(Error::EmptyDomain));
    }

    #[test]
    fn updates_reject_foreign_worlds() {
        let m = fixtures::fact33();
        let bad = set(&["nope"]);
        assert!(matches!(
            partial_comm_update(&m, &set(&["a"]), &bad),
            Err(Error::UnknownWorld(_))
        ));
        assert!(matches!(pa_edge_update(&m, &bad), Err(Error::UnknownWorld(_))));
        assert!(matches!(pa_world_update(&m, &bad), Err(Error::UnknownWorld(_))));
    }

    #[test]
    fn unknown_agent_in_group_is_rejected() {
        let m = fixtures::fact33();
        assert!(matches!(
            partial_comm_update(&m, &set(&["z"]), &set(&["w"])),
            Err(Error::UnknownAgent(_))
        ));
    }

    #[test]
    fn edge_update_preserves_transitivity() {
        // deleting all edges crossing a truth-set boundary cannot break
        // transitivity on either side
        let m = fixtures::fact34();
        for announced in [set(&["w0"]), set(&["u0"]), set(&["w0", "u0"]), set(&["w0", "u1"])] {
            let updated = pa_edge_update(&m, &announced).unwrap();
            for a in m.agents() {
                let r = updated.group_relation(&set(&[a])).unwrap();
                if m.group_relation(&set(&[a])).unwrap().is_transitive() {
                    assert!(r.is_transitive(), "agent {a}, announced {announced:?}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn partial_comm_only_deletes_edges(
            topic_bits in proptest::collection::vec(any::<bool>(), 3),
            share_a in any::<bool>(),
            share_b in any::<bool>(),
        ) {
            let m = fixtures::fact34();
            let worlds: Vec<_> = m.worlds().iter().cloned().collect();
            let topic: BTreeSet<String> = worlds
                .iter()
                .zip(&topic_bits)
                .filter(|(_, keep)| **keep)
                .map(|(w, _)| w.clone())
                .collect();
            let mut group = BTreeSet::new();
            if share_a { group.insert("a".to_string()); }
            if share_b { group.insert("b".to_string()); }

            let updated = partial_comm_update(&m, &group, &topic).unwrap();
            prop_assert!(sub_relation(&updated, &m));
            prop_assert!(edge_count(&updated) <= edge_count(&m));

            // the topic and its complement induce the same update
            let complement: BTreeSet<String> =
                m.worlds().difference(&topic).cloned().collect();
            prop_assert_eq!(&partial_comm_update(&m, &group, &complement).unwrap(), &updated);

            // updating twice with the same topic is idempotent
            prop_assert_eq!(&partial_comm_update(&updated, &group, &topic).unwrap(), &updated);
        }

        #[test]
        fn edge_update_matches_empty_group_complementary_form(
            topic_bits in proptest::collection::vec(any::<bool>(), 3),
        ) {
            // [ξ!] deletes exactly the edges that disagree on ξ, which is the
            // partial communication filter with S = ∅ minus the group escape:
            // here we check it directly against the agreement relation.
            let m = fixtures::fact34();
            let worlds: Vec<_> = m.worlds().iter().cloned().collect();
            let announced: BTreeSet<String> = worlds
                .iter()
                .zip(&topic_bits)
                .filter(|(_, keep)| **keep)
                .map(|(w, _)| w.clone())
                .collect();
            let updated = pa_edge_update(&m, &announced).unwrap();
            let agree = m.agreement_relation(&announced).unwrap();
            for (a, pairs) in m.relations() {
                let expected: BTreeSet<_> =
                    pairs.iter().filter(|(u, v)| agree.contains(u, v)).cloned().collect();
                prop_assert_eq!(&updated.relations()[a], &expected);
            }
        }
    }
}
