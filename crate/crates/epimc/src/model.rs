//! Finite multi-agent Kripke models.
//!
//! Worlds, agents and atoms are plain strings. Relations are explicit
//! directed pair sets; no closure is applied implicitly (indistinguishability
//! need not be reflexive, symmetric or transitive). [`RawModel`] is the JSON
//! surface; it can apply reflexive/symmetric closures on request when a
//! fixture is described that way.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A binary relation over worlds, stored as a set of ordered pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Relation(pub BTreeSet<(String, String)>);

impl Relation {
    pub fn contains(&self, from: &str, to: &str) -> bool {
        self.0.contains(&(from.to_string(), to.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = &(String, String)> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_reflexive(&self, worlds: &BTreeSet<String>) -> bool {
        worlds.iter().all(|w| self.contains(w, w))
    }

    pub fn is_symmetric(&self) -> bool {
        self.0.iter().all(|(u, v)| self.contains(v, u))
    }

    pub fn is_transitive(&self) -> bool {
        self.0
            .iter()
            .all(|(u, v)| self.0.iter().filter(|(x, _)| x == v).all(|(_, z)| self.contains(u, z)))
    }

    pub fn intersect(&self, other: &Relation) -> Relation {
        Relation(self.0.intersection(&other.0).cloned().collect())
    }
}

impl FromIterator<(String, String)> for Relation {
    fn from_iter<T: IntoIterator<Item = (String, String)>>(iter: T) -> Self {
        Relation(iter.into_iter().collect())
    }
}

/// A finite multi-agent Kripke model. Always well-formed: construction
/// goes through [`KripkeModel::new`] or [`RawModel::build`], which reject
/// dangling edges, unknown valuation keys and empty world sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KripkeModel {
    worlds: BTreeSet<String>,
    agents: BTreeSet<String>,
    relations: BTreeMap<String, BTreeSet<(String, String)>>,
    valuation: BTreeMap<String, BTreeSet<String>>,
}

/// A model with a designated evaluation point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointedModel {
    pub model: KripkeModel,
    pub point: String,
}

impl PointedModel {
    pub fn new(model: KripkeModel, point: impl Into<String>) -> Result<Self> {
        let point = point.into();
        if !model.has_world(&point) {
            return Err(Error::UnknownWorld(point));
        }
        Ok(PointedModel { model, point })
    }
}

impl KripkeModel {
    pub fn new(
        worlds: BTreeSet<String>,
        agents: BTreeSet<String>,
        relations: BTreeMap<String, BTreeSet<(String, String)>>,
        valuation: BTreeMap<String, BTreeSet<String>>,
    ) -> Result<Self> {
        let raw = RawModel {
            worlds: worlds.iter().cloned().collect(),
            agents: agents.iter().cloned().collect(),
            relations: relations
                .iter()
                .map(|(a, ps)| (a.clone(), ps.iter().map(|(u, v)| [u.clone(), v.clone()]).collect()))
                .collect(),
            valuation: valuation
                .iter()
                .map(|(w, ats)| (w.clone(), ats.iter().cloned().collect()))
                .collect(),
            point: None,
            closure: Vec::new(),
        };
        let violations = raw.validate();
        if let Some(first) = violations.first() {
            return Err(Error::InvalidModel(first.clone()));
        }
        let mut relations: BTreeMap<_, _> = relations;
        for a in &agents {
            relations.entry(a.clone()).or_default();
        }
        let mut valuation = valuation;
        for w in &worlds {
            valuation.entry(w.clone()).or_default();
        }
        Ok(KripkeModel { worlds, agents, relations, valuation })
    }

    pub fn worlds(&self) -> &BTreeSet<String> {
        &self.worlds
    }

    pub fn agents(&self) -> &BTreeSet<String> {
        &self.agents
    }

    pub fn has_world(&self, w: &str) -> bool {
        self.worlds.contains(w)
    }

    pub fn relation_pairs(&self, agent: &str) -> Result<&BTreeSet<(String, String)>> {
        self.relations.get(agent).ok_or_else(|| Error::UnknownAgent(agent.to_string()))
    }

    pub fn relations(&self) -> &BTreeMap<String, BTreeSet<(String, String)>> {
        &self.relations
    }

    /// Atoms of the valuation of one world.
    pub fn atoms_at(&self, world: &str) -> Result<&BTreeSet<String>> {
        self.valuation.get(world).ok_or_else(|| Error::UnknownWorld(world.to_string()))
    }

    pub fn holds_atom(&self, world: &str, atom: &str) -> bool {
        self.valuation.get(world).map(|ats| ats.contains(atom)).unwrap_or(false)
    }

    /// Atoms with non-empty extension in this model.
    pub fn atoms(&self) -> BTreeSet<String> {
        self.valuation.values().flatten().cloned().collect()
    }

    /// `R_{D,G}`: the intersection of the group members' relations. For the
    /// empty group this is the full relation `W x W`, which makes the partial
    /// communication identity `R^{∅!χ}_i = R_i` fall out of the update
    /// formula without a special case.
    pub fn group_relation(&self, group: &BTreeSet<String>) -> Result<Relation> {
        for a in group {
            if !self.agents.contains(a) {
                return Err(Error::UnknownAgent(a.clone()));
            }
        }
        if group.is_empty() {
            let full = self
                .worlds
                .iter()
                .flat_map(|u| self.worlds.iter().map(move |v| (u.clone(), v.clone())))
                .collect();
            return Ok(Relation(full));
        }
        let mut iter = group.iter();
        let first = iter.next().unwrap();
        let mut pairs = self.relations[first].clone();
        for a in iter {
            pairs = pairs.intersection(&self.relations[a]).cloned().collect();
        }
        Ok(Relation(pairs))
    }

    /// The agreement relation `~χ` induced by a truth set: pairs of worlds on
    /// the same side of the bipartition `(T, W \ T)`.
    pub fn agreement_relation(&self, truth_set: &BTreeSet<String>) -> Result<Relation> {
        for w in truth_set {
            if !self.worlds.contains(w) {
                return Err(Error::UnknownWorld(w.clone()));
            }
        }
        let pairs = self
            .worlds
            .iter()
            .flat_map(|u| self.worlds.iter().map(move |v| (u, v)))
            .filter(|(u, v)| truth_set.contains(*u) == truth_set.contains(*v))
            .map(|(u, v)| (u.clone(), v.clone()))
            .collect();
        Ok(Relation(pairs))
    }

    /// Whether two worlds agree on membership in a truth set. Equivalent to a
    /// pair lookup in [`KripkeModel::agreement_relation`] without building it.
    pub fn agree(truth_set: &BTreeSet<String>, u: &str, v: &str) -> bool {
        truth_set.contains(u) == truth_set.contains(v)
    }

    /// `|M| = |W| + Σ_i |R_i| + Σ_w |{p : w ∈ V(p)}|`.
    pub fn size(&self) -> usize {
        self.worlds.len()
            + self.relations.values().map(|r| r.len()).sum::<usize>()
            + self.valuation.values().map(|ats| ats.len()).sum::<usize>()
    }

    /// Disjoint union; world identifiers are tagged `0#`/`1#` per side to
    /// avoid collision. Agent sets are unified, with missing relations empty.
    pub fn disjoint_union(&self, other: &KripkeModel) -> KripkeModel {
        let tag = |side: usize, w: &str| format!("{side}#{w}");
        let mut worlds = BTreeSet::new();
        let mut relations: BTreeMap<String, BTreeSet<(String, String)>> = BTreeMap::new();
        let mut valuation = BTreeMap::new();
        let agents: BTreeSet<String> = self.agents.union(&other.agents).cloned().collect();
        for (side, m) in [(0usize, self), (1, other)] {
            for w in &m.worlds {
                worlds.insert(tag(side, w));
                valuation.insert(tag(side, w), m.valuation[w].clone());
            }
            for (a, pairs) in &m.relations {
                let entry = relations.entry(a.clone()).or_default();
                for (u, v) in pairs {
                    entry.insert((tag(side, u), tag(side, v)));
                }
            }
        }
        for a in &agents {
            relations.entry(a.clone()).or_default();
        }
        KripkeModel { worlds, agents, relations, valuation }
    }

    /// Tagged name of a world on the given side of a disjoint union.
    pub fn union_world(side: usize, w: &str) -> String {
        format!("{side}#{w}")
    }

    /// Rebuild with new relations, keeping worlds and valuation. The new
    /// relation pairs must be a subset of world pairs; internal use by the
    /// update operations.
    pub(crate) fn with_relations(
        &self,
        relations: BTreeMap<String, BTreeSet<(String, String)>>,
    ) -> KripkeModel {
        KripkeModel {
            worlds: self.worlds.clone(),
            agents: self.agents.clone(),
            relations,
            valuation: self.valuation.clone(),
        }
    }

    /// Restrict the model to a subset of its worlds.
    pub(crate) fn restricted_to(&self, keep: &BTreeSet<String>) -> KripkeModel {
        let relations = self
            .relations
            .iter()
            .map(|(a, pairs)| {
                let kept = pairs
                    .iter()
                    .filter(|(u, v)| keep.contains(u) && keep.contains(v))
                    .cloned()
                    .collect();
                (a.clone(), kept)
            })
            .collect();
        KripkeModel {
            worlds: keep.clone(),
            agents: self.agents.clone(),
            relations,
            valuation: self
                .valuation
                .iter()
                .filter(|(w, _)| keep.contains(*w))
                .map(|(w, ats)| (w.clone(), ats.clone()))
                .collect(),
        }
    }

    pub fn to_raw(&self, point: Option<&str>) -> RawModel {
        RawModel {
            agents: self.agents.iter().cloned().collect(),
            worlds: self.worlds.iter().cloned().collect(),
            relations: self
                .relations
                .iter()
                .map(|(a, ps)| (a.clone(), ps.iter().map(|(u, v)| [u.clone(), v.clone()]).collect()))
                .collect(),
            valuation: self
                .valuation
                .iter()
                .map(|(w, ats)| (w.clone(), ats.iter().cloned().collect()))
                .collect(),
            point: point.map(|p| p.to_string()),
            closure: Vec::new(),
        }
    }
}

/// The JSON surface of a model, possibly ill-formed. `closure` names
/// closures (`reflexive`, `symmetric`) applied to every agent relation when
/// building; `point` is an optional evaluation point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RawModel {
    pub agents: Vec<String>,
    pub worlds: Vec<String>,
    #[serde(default)]
    pub relations: BTreeMap<String, Vec<[String; 2]>>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub closure: Vec<String>,
}

impl RawModel {
    pub fn from_json(text: &str) -> Result<RawModel> {
        serde_json::from_str(text).map_err(|e| Error::InvalidModel(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serialization cannot fail")
    }

    /// Every invariant violation, as data. An empty list means the model is
    /// well-formed.
    pub fn validate(&self) -> Vec<String> {
        let mut violations = Vec::new();
        let worlds: BTreeSet<&String> = self.worlds.iter().collect();
        let agents: BTreeSet<&String> = self.agents.iter().collect();
        if self.worlds.is_empty() {
            violations.push("worlds must be non-empty".to_string());
        }
        if self.agents.is_empty() {
            violations.push("agents must be non-empty".to_string());
        }
        if worlds.len() != self.worlds.len() {
            violations.push("duplicate world identifiers".to_string());
        }
        if agents.len() != self.agents.len() {
            violations.push("duplicate agent identifiers".to_string());
        }
        for (agent, pairs) in &self.relations {
            if !agents.contains(agent) {
                violations.push(format!("relation for undeclared agent `{agent}`"));
            }
            for [u, v] in pairs {
                if !worlds.contains(u) || !worlds.contains(v) {
                    violations.push(format!(
                        "relation for `{agent}` has pair ({u},{v}) with undeclared endpoint"
                    ));
                }
            }
        }
        for w in self.valuation.keys() {
            if !worlds.contains(w) {
                violations.push(format!("valuation on undeclared world `{w}`"));
            }
        }
        for name in &self.closure {
            if name != "reflexive" && name != "symmetric" {
                violations.push(format!("unknown closure `{name}`"));
            }
        }
        if let Some(p) = &self.point {
            if !worlds.contains(p) {
                violations.push(format!("point `{p}` is not a declared world"));
            }
        }
        violations
    }

    /// Build a validated model, applying the requested closures.
    pub fn build(&self) -> Result<(KripkeModel, Option<String>)> {
        let violations = self.validate();
        if let Some(first) = violations.into_iter().next() {
            return Err(Error::InvalidModel(first));
        }
        let worlds: BTreeSet<String> = self.worlds.iter().cloned().collect();
        let agents: BTreeSet<String> = self.agents.iter().cloned().collect();
        let mut relations: BTreeMap<String, BTreeSet<(String, String)>> = agents
            .iter()
            .map(|a| {
                let pairs = self
                    .relations
                    .get(a)
                    .map(|ps| ps.iter().map(|[u, v]| (u.clone(), v.clone())).collect())
                    .unwrap_or_default();
                (a.clone(), pairs)
            })
            .collect();
        for name in &self.closure {
            for pairs in relations.values_mut() {
                match name.as_str() {
                    "reflexive" => {
                        for w in &worlds {
                            pairs.insert((w.clone(), w.clone()));
                        }
                    }
                    "symmetric" => {
                        let flipped: Vec<_> =
                            pairs.iter().map(|(u, v)| (v.clone(), u.clone())).collect();
                        pairs.extend(flipped);
                    }
                    _ => unreachable!("rejected by validate"),
                }
            }
        }
        let valuation: BTreeMap<String, BTreeSet<String>> = worlds
            .iter()
            .map(|w| {
                let ats = self.valuation.get(w).map(|v| v.iter().cloned().collect()).unwrap_or_default();
                (w.clone(), ats)
            })
            .collect();
        let model = KripkeModel { worlds, agents, relations, valuation };
        Ok((model, self.point.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn pairs(raw: &[(&str, &str)]) -> BTreeSet<(String, String)> {
        raw.iter().map(|(u, v)| (u.to_string(), v.to_string())).collect()
    }

    fn set(raw: &[&str]) -> BTreeSet<String> {
        raw.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn group_relation_singleton_is_the_agent_relation() {
        let m = fixtures::fact34();
        let g = set(&["a"]);
        let rel = m.group_relation(&g).unwrap();
        assert_eq!(&rel.0, m.relation_pairs("a").unwrap());
    }

    #[test]
    fn group_relation_on_fact34_pair() {
        let m = fixtures::fact34();
        let rel = m.group_relation(&set(&["a", "b"])).unwrap();
        let expected = pairs(&[
            ("w0", "w0"),
            ("u0", "u0"),
            ("u1", "u1"),
            ("w0", "u0"),
            ("u0", "w0"),
        ]);
        assert_eq!(rel.0, expected);
    }

    #[test]
    fn group_relation_is_pairwise_intersection() {
        let m = fixtures::fact34();
        let ra = m.group_relation(&set(&["a"])).unwrap();
        let rb = m.group_relation(&set(&["b"])).unwrap();
        let rab = m.group_relation(&set(&["a", "b"])).unwrap();
        assert_eq!(rab, ra.intersect(&rb));
    }

    #[test]
    fn group_relation_empty_group_is_full() {
        let m = fixtures::fact34();
        let rel = m.group_relation(&BTreeSet::new()).unwrap();
        assert_eq!(rel.len(), m.worlds().len() * m.worlds().len());
    }

    #[test]
    fn group_relation_unknown_agent_is_an_error() {
        let m = fixtures::fact34();
        assert_eq!(m.group_relation(&set(&["zz"])), Err(Error::UnknownAgent("zz".into())));
    }

    #[test]
    fn agreement_full_truth_set_is_full_relation() {
        let m = fixtures::fact34();
        let rel = m.agreement_relation(m.worlds()).unwrap();
        assert_eq!(rel.len(), 9);
    }

    #[test]
    fn agreement_on_fact34_topic_blocks() {
        // truthset(p <-> q) = {u0, u1}: blocks {w0} and {u0, u1}.
        let m = fixtures::fact34();
        let rel = m.agreement_relation(&set(&["u0", "u1"])).unwrap();
        let expected = pairs(&[
            ("w0", "w0"),
            ("u0", "u0"),
            ("u1", "u1"),
            ("u0", "u1"),
            ("u1", "u0"),
        ]);
        assert_eq!(rel.0, expected);
    }

    #[test]
    fn agreement_matches_pairwise_oracle() {
        let m = fixtures::fact34();
        for t in [set(&[]), set(&["w0"]), set(&["w0", "u1"]), set(&["u0"])] {
            let rel = m.agreement_relation(&t).unwrap();
            for u in m.worlds() {
                for v in m.worlds() {
                    let same_side = t.contains(u) == t.contains(v);
                    assert_eq!(rel.contains(u, v), same_side);
                }
            }
        }
    }

    #[test]
    fn agreement_is_equivalence_and_complement_symmetric() {
        let m = fixtures::fact34();
        let t = set(&["w0", "u0"]);
        let rel = m.agreement_relation(&t).unwrap();
        assert!(rel.is_reflexive(m.worlds()));
        assert!(rel.is_symmetric());
        assert!(rel.is_transitive());
        let complement: BTreeSet<String> = m.worlds().difference(&t).cloned().collect();
        assert_eq!(rel, m.agreement_relation(&complement).unwrap());
    }

    #[test]
    fn model_size_counts_worlds_edges_and_atom_occurrences() {
        let trivial = KripkeModel::new(
            set(&["w"]),
            set(&["a"]),
            BTreeMap::new(),
            BTreeMap::new(),
        )
        .unwrap();
        assert_eq!(trivial.size(), 1);
        // Fact 3.3: 2 worlds, 4 a-pairs (loops + both directions), 1 atom occurrence.
        assert_eq!(fixtures::fact33().size(), 7);
        let m = fixtures::fact34();
        let by_hand = m.worlds().len()
            + m.relation_pairs("a").unwrap().len()
            + m.relation_pairs("b").unwrap().len()
            + m.worlds().iter().map(|w| m.atoms_at(w).unwrap().len()).sum::<usize>();
        assert_eq!(m.size(), by_hand);
    }

    #[test]
    fn disjoint_union_doubles_and_keeps_sides() {
        let m = fixtures::fact33();
        let u = m.disjoint_union(&m);
        assert_eq!(u.worlds().len(), 2 * m.worlds().len());
        assert_eq!(u.relation_pairs("a").unwrap().len(), 2 * m.relation_pairs("a").unwrap().len());
        assert!(u.holds_atom(&KripkeModel::union_world(0, "w"), "p"));
        assert!(u.holds_atom(&KripkeModel::union_world(1, "w"), "p"));
    }

    #[test]
    fn disjoint_union_unifies_agent_sets() {
        let m1 = fixtures::fact33(); // agent a
        let m2 = fixtures::fact34(); // agents a, b
        let u = m1.disjoint_union(&m2);
        assert_eq!(u.agents(), &set(&["a", "b"]));
        // b-pairs only come from the right side
        assert!(u.relation_pairs("b").unwrap().iter().all(|(x, _)| x.starts_with("1#")));
    }

    #[test]
    fn validate_reports_dangling_edge() {
        let raw = RawModel {
            agents: vec!["a".into()],
            worlds: vec!["w".into()],
            relations: [("a".to_string(), vec![["w".to_string(), "ghost".to_string()]])]
                .into_iter()
                .collect(),
            valuation: BTreeMap::new(),
            point: None,
            closure: Vec::new(),
        };
        let violations = raw.validate();
        assert_eq!(violations.len(), 1);
        assert!(violations[0].contains("(w,ghost)"));
    }

    #[test]
    fn validate_rejects_empty_world_set() {
        let raw = RawModel {
            agents: vec!["a".into()],
            worlds: vec![],
            relations: BTreeMap::new(),
            valuation: BTreeMap::new(),
            point: None,
            closure: Vec::new(),
        };
        assert!(raw.validate().iter().any(|v| v.contains("non-empty")));
    }

    #[test]
    fn closure_builds_reflexive_symmetric_fixture() {
        let raw = RawModel {
            agents: vec!["a".into()],
            worlds: vec!["w".into(), "u".into()],
            relations: [("a".to_string(), vec![["w".to_string(), "u".to_string()]])]
                .into_iter()
                .collect(),
            valuation: [("w".to_string(), vec!["p".to_string()])].into_iter().collect(),
            point: Some("w".into()),
            closure: vec!["reflexive".into(), "symmetric".into()],
        };
        let (m, point) = raw.build().unwrap();
        assert_eq!(point.as_deref(), Some("w"));
        assert_eq!(m, fixtures::fact33());
    }

    #[test]
    fn raw_model_json_round_trip() {
        let m = fixtures::fact34();
        let raw = m.to_raw(Some("w0"));
        let (again, point) = RawModel::from_json(&raw.to_json()).unwrap().build().unwrap();
        assert_eq!(again, m);
        assert_eq!(point.as_deref(), Some("w0"));
    }
}
