//! Direct (brute-force) semantics for the quantifier-free languages, plus
//! seeded random generators for models and formulas. Quantified modalities
//! are handled by the checker in `mc`; evaluating them here is an error.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{KripkeModel, PointedModel};
use crate::syntax::Formula;
use crate::updates::{pa_edge_update, partial_comm_update};

/// Truth at a world, by structural recursion; update modalities rebuild the
/// model. Errors on `[*S]` / `[!*]` and on unknown agents or worlds.
pub fn eval(m: &KripkeModel, world: &str, f: &Formula) -> Result<bool> {
    if !m.has_world(world) {
        return Err(Error::UnknownWorld(world.to_string()));
    }
    match f {
        Formula::Atom(p) => Ok(m.holds_atom(world, p)),
        Formula::Not(g) => Ok(!eval(m, world, g)?),
        Formula::And(a, b) => Ok(eval(m, world, a)? && eval(m, world, b)?),
        Formula::D(group, body) => {
            let rel = m.group_relation(group)?;
            for (u, v) in rel.iter() {
                if u == world && !eval(m, v, body)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::PartialComm(group, topic, body) => {
            let topic_set = truthset(m, topic)?;
            let updated = partial_comm_update(m, group, &topic_set)?;
            eval(&updated, world, body)
        }
        Formula::PubAnn(topic, body) => {
            // announcements are truthful: vacuously true where the
            // announced formula fails
            let topic_set = truthset(m, topic)?;
            if !topic_set.contains(world) {
                return Ok(true);
            }
            let updated = pa_edge_update(m, &topic_set)?;
            eval(&updated, world, body)
        }
        Formula::ArbPartialComm(..) | Formula::ArbPubAnn(..) => Err(Error::UnsupportedFragment(
            "direct evaluation does not cover quantified modalities".to_string(),
        )),
    }
}

pub fn eval_pointed(pm: &PointedModel, f: &Formula) -> Result<bool> {
    eval(&pm.model, &pm.point, f)
}

/// The worlds where `f` holds.
pub fn truthset(m: &KripkeModel, f: &Formula) -> Result<BTreeSet<String>> {
    let mut out = BTreeSet::new();
    for w in m.worlds() {
        if eval(m, w, f)? {
            out.insert(w.clone());
        }
    }
    Ok(out)
}

/// True everywhere on the model.
pub fn valid_on_model(m: &KripkeModel, f: &Formula) -> Result<bool> {
    for w in m.worlds() {
        if !eval(m, w, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Which modalities a random formula may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    /// Atoms, booleans and `D_G` only.
    Epistemic,
    /// Adds `[S!χ]`.
    PartialComm,
    /// Atoms, booleans, `D_G` and `[ξ!]` (no communication boxes).
    PubAnn,
    /// Everything, including `[*S]` and `[!*]`.
    Quantified,
}

/// Seed for reproducible randomised runs; honours `EPIMC_SEED`.
pub fn seed_from_env() -> u64 {
    std::env::var("EPIMC_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x5EED)
}

/// A random model with reflexive-symmetric relations: `w0..w{n-1}`, each
/// undirected non-loop pair present with probability `edge_prob` per agent,
/// each atom true at each world with probability 1/2.
pub fn random_model(
    seed: u64,
    n_worlds: usize,
    agents: &[&str],
    atoms: &[&str],
    edge_prob: f64,
) -> KripkeModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let worlds: Vec<String> = (0..n_worlds).map(|i| format!("w{i}")).collect();
    let mut relations: BTreeMap<String, BTreeSet<(String, String)>> = BTreeMap::new();
    for a in agents {
        let mut pairs: BTreeSet<(String, String)> =
            worlds.iter().map(|w| (w.clone(), w.clone())).collect();
        for i in 0..n_worlds {
            for j in (i + 1)..n_worlds {
                if rng.random_bool(edge_prob) {
                    pairs.insert((worlds[i].clone(), worlds[j].clone()));
                    pairs.insert((worlds[j].clone(), worlds[i].clone()));
                }
            }
        }
        relations.insert(a.to_string(), pairs);
    }
    let valuation: BTreeMap<String, BTreeSet<String>> = worlds
        .iter()
        .map(|w| {
            let ats: BTreeSet<String> = atoms
                .iter()
                .filter(|_| rng.random_bool(0.5))
                .map(|p| p.to_string())
                .collect();
            (w.clone(), ats)
        })
        .collect();
    KripkeModel::new(worlds.into_iter().collect(), agents.iter().map(|a| a.to_string()).collect(), relations, valuation)
        .expect("generated model is well-formed")
}

/// A random formula of modal depth at most `depth` over the given
/// vocabulary, drawing modalities from `layer`.
pub fn random_formula(
    seed: u64,
    depth: usize,
    atoms: &[&str],
    agents: &[&str],
    layer: Layer,
) -> Formula {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen_formula(&mut rng, depth, atoms, agents, layer)
}

fn random_group(rng: &mut ChaCha8Rng, agents: &[&str], allow_empty: bool) -> BTreeSet<String> {
    loop {
        let g: BTreeSet<String> = agents
            .iter()
            .filter(|_| rng.random_bool(0.5))
            .map(|a| a.to_string())
            .collect();
        if allow_empty || !g.is_empty() {
            return g;
        }
    }
}

fn gen_formula(
    rng: &mut ChaCha8Rng,
    depth: usize,
    atoms: &[&str],
    agents: &[&str],
    layer: Layer,
) -> Formula {
    if depth == 0 {
        return random_atom(rng, atoms);
    }
    let top = match layer {
        Layer::Epistemic => 4,
        Layer::PartialComm => 5,
        Layer::PubAnn => 5,
        Layer::Quantified => 8,
    };
    match rng.random_range(0..top) {
        0 => random_atom(rng, atoms),
        1 => Formula::not(gen_formula(rng, depth - 1, atoms, agents, layer)),
        2 => Formula::and(
            gen_formula(rng, depth - 1, atoms, agents, layer),
            gen_formula(rng, depth - 1, atoms, agents, layer),
        ),
        3 => {
            let g = random_group(rng, agents, false);
            Formula::d(g, gen_formula(rng, depth - 1, atoms, agents, layer))
        }
        4 if layer == Layer::PubAnn => Formula::pub_ann(
            gen_formula(rng, depth - 1, atoms, agents, layer),
            gen_formula(rng, depth - 1, atoms, agents, layer),
        ),
        4 => {
            let g = random_group(rng, agents, true);
            Formula::partial_comm(
                g,
                gen_formula(rng, depth - 1, atoms, agents, layer),
                gen_formula(rng, depth - 1, atoms, agents, layer),
            )
        }
        5 => Formula::pub_ann(
            gen_formula(rng, depth - 1, atoms, agents, layer),
            gen_formula(rng, depth - 1, atoms, agents, layer),
        ),
        6 => {
            let g = random_group(rng, agents, true);
            Formula::arb_partial_comm(g, gen_formula(rng, depth - 1, atoms, agents, layer))
        }
        _ => Formula::arb_pub_ann(gen_formula(rng, depth - 1, atoms, agents, layer)),
    }
}

fn random_atom(rng: &mut ChaCha8Rng, atoms: &[&str]) -> Formula {
    Formula::atom(*atoms.choose(rng).expect("atom list is non-empty"))
}
