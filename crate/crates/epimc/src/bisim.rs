//! Collective bisimulation: partition refinement over every non-empty
//! group relation, with an exact characteristic formula maintained per
//! block. The formulas power distinguishing formulas and characteristic
//! topics; refinement splits keep them exact by construction, and the
//! public entry points double-check the contract cheap enough to afford.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::model::{KripkeModel, Relation};
use crate::syntax::Formula;

/// Blocks of the coarsest collective bisimulation over the given atoms,
/// each with a formula true exactly on that block.
#[derive(Debug, Clone)]
pub struct ClassAnalysis {
    pub blocks: Vec<BTreeSet<String>>,
    pub formulas: Vec<Formula>,
}

impl ClassAnalysis {
    pub fn block_of(&self, world: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(world))
    }

    pub fn same_block(&self, u: &str, v: &str) -> bool {
        match (self.block_of(u), self.block_of(v)) {
            (Some(i), Some(j)) => i == j,
            _ => false,
        }
    }
}

fn nonempty_groups(agents: &BTreeSet<String>) -> Vec<BTreeSet<String>> {
    let agents: Vec<&String> = agents.iter().collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << agents.len()) {
        out.push(
            agents
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, a)| (*a).clone())
                .collect(),
        );
    }
    out
}

fn profile_formula(atoms: &BTreeSet<String>, held: &BTreeSet<String>) -> Formula {
    let mut f = Formula::tt();
    let mut first = true;
    for p in atoms {
        let lit = if held.contains(p) {
            Formula::atom(p.clone())
        } else {
            Formula::not(Formula::atom(p.clone()))
        };
        f = if first { lit } else { Formula::and(f, lit) };
        first = false;
    }
    f
}

/// Coarsest partition of the worlds under collective bisimilarity with
/// respect to `atoms`: refine the atom-profile partition, splitting any
/// block whose members disagree on reachability into some block via some
/// non-empty group relation.
pub fn bisim_classes(m: &KripkeModel, atoms: &BTreeSet<String>) -> ClassAnalysis {
    let groups = nonempty_groups(m.agents());
    let rels: Vec<Relation> = groups
        .iter()
        .map(|g| m.group_relation(g).expect("groups come from the model"))
        .collect();

    // initial partition: atom profiles
    let mut by_profile: BTreeMap<BTreeSet<String>, BTreeSet<String>> = BTreeMap::new();
    for w in m.worlds() {
        let held: BTreeSet<String> = m
            .atoms_at(w)
            .expect("world comes from the model")
            .intersection(atoms)
            .cloned()
            .collect();
        by_profile.entry(held).or_default().insert(w.clone());
    }
    let mut blocks: Vec<(BTreeSet<String>, Formula)> = by_profile
        .into_iter()
        .map(|(held, ws)| (ws, profile_formula(atoms, &held)))
        .collect();

    loop {
        let mut changed = false;
        let snapshot: Vec<(BTreeSet<String>, Formula)> = blocks.clone();
        let mut next: Vec<(BTreeSet<String>, Formula)> = Vec::new();
        for (block, f_block) in blocks {
            let mut pieces = vec![(block, f_block)];
            for ((splitter, f_split), (group, rel)) in snapshot
                .iter()
                .flat_map(|s| groups.iter().zip(&rels).map(move |gr| (s, gr)))
            {
                let mut refined = Vec::new();
                for (piece, f_piece) in pieces {
                    let (hit, miss): (BTreeSet<String>, BTreeSet<String>) = piece
                        .iter()
                        .cloned()
                        .partition(|w| splitter.iter().any(|v| rel.contains(w, v)));
                    if hit.is_empty() || miss.is_empty() {
                        refined.push((hit.union(&miss).cloned().collect(), f_piece));
                        continue;
                    }
                    changed = true;
                    let escape = Formula::d(group.clone(), Formula::not(f_split.clone()));
                    refined.push((hit, Formula::and(f_piece.clone(), Formula::not(escape.clone()))));
                    refined.push((miss, Formula::and(f_piece, escape)));
                }
                pieces = refined;
            }
            next.extend(pieces);
        }
        blocks = next;
        if !changed {
            break;
        }
    }

    blocks.sort_by(|(a, _), (b, _)| a.iter().next().cmp(&b.iter().next()));
    let (blocks, formulas) = blocks.into_iter().unzip();
    ClassAnalysis { blocks, formulas }
}

/// Collective bisimilarity of two pointed models over `atoms`, decided on
/// the disjoint union.
pub fn is_bisimilar(
    m1: &KripkeModel,
    w1: &str,
    m2: &KripkeModel,
    w2: &str,
    atoms: &BTreeSet<String>,
) -> Result<bool> {
    if !m1.has_world(w1) {
        return Err(Error::UnknownWorld(w1.to_string()));
    }
    if !m2.has_world(w2) {
        return Err(Error::UnknownWorld(w2.to_string()));
    }
    let union = m1.disjoint_union(m2);
    let classes = bisim_classes(&union, atoms);
    Ok(classes.same_block(&KripkeModel::union_world(0, w1), &KripkeModel::union_world(1, w2)))
}

/// A formula over `atoms` true at `w1` and false at `w2`, or an error if
/// the two worlds are collectively bisimilar.
pub fn distinguishing_formula(
    m: &KripkeModel,
    w1: &str,
    w2: &str,
    atoms: &BTreeSet<String>,
) -> Result<Formula> {
    if !m.has_world(w1) {
        return Err(Error::UnknownWorld(w1.to_string()));
    }
    if !m.has_world(w2) {
        return Err(Error::UnknownWorld(w2.to_string()));
    }
    let classes = bisim_classes(m, atoms);
    let i = classes.block_of(w1).expect("w1 is in the model");
    if classes.blocks[i].contains(w2) {
        return Err(Error::NoDistinguisher(w1.to_string(), w2.to_string()));
    }
    let f = classes.formulas[i].clone();
    debug_assert!(crate::semantics::eval(m, w1, &f).unwrap());
    debug_assert!(!crate::semantics::eval(m, w2, &f).unwrap());
    Ok(f)
}

/// A formula whose truth set is exactly `target`, which must be a union of
/// collective bisimulation classes over `atoms`.
pub fn characteristic_topic(
    m: &KripkeModel,
    target: &BTreeSet<String>,
    atoms: &BTreeSet<String>,
) -> Result<Formula> {
    for w in target {
        if !m.has_world(w) {
            return Err(Error::UnknownWorld(w.clone()));
        }
    }
    if target.is_empty() {
        return Ok(Formula::ff());
    }
    if target == m.worlds() {
        return Ok(Formula::tt());
    }
    let classes = bisim_classes(m, atoms);
    let mut picked = Vec::new();
    for (block, f) in classes.blocks.iter().zip(&classes.formulas) {
        if block.is_subset(target) {
            picked.push(f.clone());
        } else if !block.is_disjoint(target) {
            return Err(Error::NotBisimClosed);
        }
    }
    let mut out = picked.pop().expect("target is non-empty");
    for f in picked {
        out = Formula::or(out, f);
    }
    debug_assert_eq!(&crate::semantics::truthset(m, &out).unwrap(), target);
    Ok(out)
}

/// Quotient under collective bisimilarity: one representative world (the
/// least element) per block, relations lifted existentially. The quotient
/// is not in general collectively bisimilar to the original model; it is a
/// diagnostic, not a minimisation.
pub fn quotient(m: &KripkeModel, atoms: &BTreeSet<String>) -> (KripkeModel, BTreeMap<String, String>) {
    let classes = bisim_classes(m, atoms);
    let rep_of: BTreeMap<String, String> = classes
        .blocks
        .iter()
        .flat_map(|b| {
            let rep = b.iter().next().expect("blocks are non-empty").clone();
            b.iter().map(move |w| (w.clone(), rep.clone()))
        })
        .collect();
    let worlds: BTreeSet<String> = rep_of.values().cloned().collect();
    let relations: BTreeMap<String, BTreeSet<(String, String)>> = m
        .relations()
        .iter()
        .map(|(a, pairs)| {
            (
                a.clone(),
                pairs.iter().map(|(u, v)| (rep_of[u].clone(), rep_of[v].clone())).collect(),
            )
        })
        .collect();
    let valuation: BTreeMap<String, BTreeSet<String>> = worlds
        .iter()
        .map(|w| {
            let held: BTreeSet<String> = m
                .atoms_at(w)
                .expect("representatives are worlds of m")
                .intersection(atoms)
                .cloned()
                .collect();
            (w.clone(), held)
        })
        .collect();
    let q = KripkeModel::new(worlds, m.agents().clone(), relations, valuation)
        .expect("quotient is well-formed");
    (q, rep_of)
}
