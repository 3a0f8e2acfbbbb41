//! The two model checkers: a global labelling algorithm for the
//! partial-communication fragment that never rebuilds the model, and a
//! recursive checker for the quantified languages that enumerates topic
//! candidates up to collective bisimilarity.

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::collections::HashSet;

use crate::bisim::bisim_classes;
use crate::error::{Error, Result};
use crate::model::KripkeModel;
use crate::syntax::{
    ordered_subformulas, Formula, LabelledSubformula, ModalityDescriptor, SubElement,
};
use crate::updates::{pa_edge_update, partial_comm_update};

/// Result of the global labelling algorithm: for every entry of the ordered
/// subformula list and every world, whether the (relabelled) subformula
/// holds there. Worlds are interned; edges are labelled per pair rather
/// than per agent, which is sound because the communication filter does not
/// depend on the agent.
pub struct Labelling {
    entries: Vec<LabelledSubformula>,
    worlds: Vec<String>,
    /// `truth[e][w]`; `None` for modality-symbol entries.
    truth: Vec<Option<Vec<bool>>>,
}

impl Labelling {
    pub fn entries(&self) -> &[LabelledSubformula] {
        &self.entries
    }

    /// Worlds satisfying the top formula.
    pub fn truthset(&self) -> BTreeSet<String> {
        let top = self.truth.last().expect("entry list is non-empty");
        let top = top.as_ref().expect("the last entry is the formula itself");
        self.worlds
            .iter()
            .zip(top)
            .filter(|(_, holds)| **holds)
            .map(|(w, _)| w.clone())
            .collect()
    }

    pub fn holds_at(&self, world: &str) -> Result<bool> {
        let i = self
            .worlds
            .iter()
            .position(|w| w == world)
            .ok_or_else(|| Error::UnknownWorld(world.to_string()))?;
        let top = self.truth.last().unwrap().as_ref().unwrap();
        Ok(top[i])
    }

    /// Truth of an arbitrary entry, by its position in `entries()`.
    pub fn entry_holds_at(&self, entry: usize, world: &str) -> Result<bool> {
        let i = self
            .worlds
            .iter()
            .position(|w| w == world)
            .ok_or_else(|| Error::UnknownWorld(world.to_string()))?;
        match &self.truth[entry] {
            Some(row) => Ok(row[i]),
            None => Err(Error::UnsupportedFragment(
                "modality symbols carry no truth value".to_string(),
            )),
        }
    }
}

/// Label every world with every labelled subformula in one pass over the
/// ordered list, tracking which edges survive each modality prefix instead
/// of materialising updated models.
pub fn global_mc(m: &KripkeModel, f: &Formula) -> Result<Labelling> {
    let entries = ordered_subformulas(f)?;
    let worlds: Vec<String> = m.worlds().iter().cloned().collect();
    let n = worlds.len();
    let widx: HashMap<&str, usize> =
        worlds.iter().enumerate().map(|(i, w)| (w.as_str(), i)).collect();

    // agent relations and the set of all pairs any agent uses, as indices
    let agent_pairs: HashMap<&str, HashSet<(usize, usize)>> = m
        .relations()
        .iter()
        .map(|(a, pairs)| {
            (
                a.as_str(),
                pairs
                    .iter()
                    .map(|(u, v)| (widx[u.as_str()], widx[v.as_str()]))
                    .collect(),
            )
        })
        .collect();
    let universe: HashSet<(usize, usize)> =
        agent_pairs.values().flat_map(|s| s.iter().copied()).collect();

    // verify the formula's agents against the model before labelling
    for a in f.agents() {
        if !m.agents().contains(&a) {
            return Err(Error::UnknownAgent(a));
        }
    }

    let mut group_cache: HashMap<Vec<String>, HashSet<(usize, usize)>> = HashMap::new();
    let mut group_pairs = |g: &BTreeSet<String>| -> HashSet<(usize, usize)> {
        let key: Vec<String> = g.iter().cloned().collect();
        group_cache
            .entry(key)
            .or_insert_with(|| {
                let mut iter = g.iter();
                let first = iter.next().expect("group is non-empty");
                let mut acc = agent_pairs[first.as_str()].clone();
                for a in iter {
                    acc = acc.intersection(&agent_pairs[a.as_str()]).copied().collect();
                }
                acc
            })
            .clone()
    };

    // label interning: which pairs pass all filters of each modality prefix
    let mut label_id: HashMap<Vec<ModalityDescriptor>, usize> = HashMap::new();
    label_id.insert(Vec::new(), 0);
    let mut passes: Vec<HashSet<(usize, usize)>> = vec![universe];

    let index: HashMap<LabelledSubformula, usize> =
        entries.iter().cloned().zip(0..).collect();
    let child = |f: &Formula, label: &[ModalityDescriptor]| -> usize {
        index[&LabelledSubformula {
            element: SubElement::Formula(f.clone()),
            label: label.to_vec(),
        }]
    };

    let mut truth: Vec<Option<Vec<bool>>> = Vec::with_capacity(entries.len());
    for (e, entry) in entries.iter().enumerate() {
        let sigma = passes[label_id[&entry.label]].clone();
        match &entry.element {
            SubElement::Modality((s, chi)) => {
                let chi_truth = truth[child(chi, &entry.label)]
                    .as_ref()
                    .expect("topic is labelled before its modality")
                    .clone();
                let surviving: HashSet<(usize, usize)> = if s.is_empty() {
                    sigma
                } else {
                    let shared = group_pairs(s);
                    sigma
                        .into_iter()
                        .filter(|(u, v)| chi_truth[*u] == chi_truth[*v] || shared.contains(&(*u, *v)))
                        .collect()
                };
                let mut inner = entry.label.clone();
                inner.push((s.clone(), chi.clone()));
                label_id.insert(inner, passes.len());
                passes.push(surviving);
                truth.push(None);
            }
            SubElement::Formula(form) => {
                let row: Vec<bool> = match form {
                    Formula::Atom(p) => worlds.iter().map(|w| m.holds_atom(w, p)).collect(),
                    Formula::Not(g) => {
                        let g = truth[child(g, &entry.label)].as_ref().unwrap();
                        g.iter().map(|b| !b).collect()
                    }
                    Formula::And(a, b) => {
                        let a = truth[child(a, &entry.label)].as_ref().unwrap().clone();
                        let b = truth[child(b, &entry.label)].as_ref().unwrap();
                        a.iter().zip(b).map(|(x, y)| *x && *y).collect()
                    }
                    Formula::D(g, body) => {
                        let body = truth[child(body, &entry.label)].as_ref().unwrap().clone();
                        let mut row = vec![true; n];
                        for (u, v) in group_pairs(g) {
                            if sigma.contains(&(u, v)) && !body[v] {
                                row[u] = false;
                            }
                        }
                        row
                    }
                    Formula::PartialComm(s, chi, body) => {
                        let mut inner = entry.label.clone();
                        inner.push((s.clone(), (**chi).clone()));
                        truth[child(body, &inner)].as_ref().unwrap().clone()
                    }
                    Formula::PubAnn(..) | Formula::ArbPartialComm(..) | Formula::ArbPubAnn(..) => {
                        unreachable!("rejected by ordered_subformulas")
                    }
                };
                truth.push(Some(row));
            }
        }
        debug_assert_eq!(truth.len(), e + 1);
    }

    Ok(Labelling { entries, worlds, truth })
}

/// The collective bisimulation classes of a model, prepared for enumerating
/// the truth sets an arbitrary-communication or arbitrary-announcement
/// modality has to range over. Every expressible topic denotes a union of
/// classes, and a topic and its complement induce the same update, so one
/// block can always be pinned to the chosen side: `2^(k-1)` candidates for
/// `k` classes.
pub struct RestrictionEnumeration {
    blocks: Vec<BTreeSet<String>>,
}

impl RestrictionEnumeration {
    pub fn new(m: &KripkeModel) -> RestrictionEnumeration {
        RestrictionEnumeration { blocks: bisim_classes(m, &m.atoms()).blocks }
    }

    pub fn blocks(&self) -> &[BTreeSet<String>] {
        &self.blocks
    }

    pub fn candidate_count(&self) -> usize {
        1 << (self.blocks.len() - 1)
    }

    fn unions_pinning(&self, pinned: usize) -> impl Iterator<Item = BTreeSet<String>> + '_ {
        let free: Vec<usize> = (0..self.blocks.len()).filter(move |i| *i != pinned).collect();
        (0..(1u64 << free.len())).map(move |mask| {
            let mut t = self.blocks[pinned].clone();
            for (bit, i) in free.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    t.extend(self.blocks[*i].iter().cloned());
                }
            }
            t
        })
    }

    /// All candidate truth sets up to complement, pinning the block of the
    /// least world.
    pub fn canonical(&self) -> impl Iterator<Item = BTreeSet<String>> + '_ {
        self.unions_pinning(0)
    }

    /// All candidate truth sets containing `world`: the truthful
    /// announcements, the only ones that matter at that world.
    pub fn containing(&self, world: &str) -> Result<impl Iterator<Item = BTreeSet<String>> + '_> {
        let pinned = self
            .blocks
            .iter()
            .position(|b| b.contains(world))
            .ok_or_else(|| Error::UnknownWorld(world.to_string()))?;
        Ok(self.unions_pinning(pinned))
    }
}

/// Truth at a world for the full language, quantifiers included. The
/// conjunction is checked left to right and abandoned early, which keeps
/// guarded quantifier bodies cheap on non-conforming candidates.
pub fn check_quantified(m: &KripkeModel, world: &str, f: &Formula) -> Result<bool> {
    if !m.has_world(world) {
        return Err(Error::UnknownWorld(world.to_string()));
    }
    match f {
        Formula::Atom(p) => Ok(m.holds_atom(world, p)),
        Formula::Not(g) => Ok(!check_quantified(m, world, g)?),
        Formula::And(a, b) => {
            Ok(check_quantified(m, world, a)? && check_quantified(m, world, b)?)
        }
        Formula::D(group, body) => {
            let rel = m.group_relation(group)?;
            for (u, v) in rel.iter() {
                if u == world && !check_quantified(m, v, body)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::PartialComm(group, topic, body) => {
            let t = truthset_quantified(m, topic)?;
            check_quantified(&partial_comm_update(m, group, &t)?, world, body)
        }
        Formula::PubAnn(topic, body) => {
            let t = truthset_quantified(m, topic)?;
            if !t.contains(world) {
                return Ok(true);
            }
            check_quantified(&pa_edge_update(m, &t)?, world, body)
        }
        Formula::ArbPartialComm(group, body) => {
            let restrictions = RestrictionEnumeration::new(m);
            for t in restrictions.canonical() {
                let updated = partial_comm_update(m, group, &t)?;
                if !check_quantified(&updated, world, body)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::ArbPubAnn(body) => {
            let restrictions = RestrictionEnumeration::new(m);
            for t in restrictions.containing(world)? {
                let updated = pa_edge_update(m, &t)?;
                if !check_quantified(&updated, world, body)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

pub fn truthset_quantified(m: &KripkeModel, f: &Formula) -> Result<BTreeSet<String>> {
    let mut out = BTreeSet::new();
    for w in m.worlds() {
        if check_quantified(m, w, f)? {
            out.insert(w.clone());
        }
    }
    Ok(out)
}
