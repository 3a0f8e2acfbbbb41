//! Reduction from closed prenex QBF to model checking with quantified
//! communication, plus a brute-force QBF evaluator used to cross-check it.
//!
//! Instance text format: `forall x1 exists x2 : (x1 <-> x2)` — a quantifier
//! prefix, a colon, and a Boolean matrix in the formula syntax (variables
//! as atoms, `~ & | -> <->` only).

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::mc::check_quantified;
use crate::model::KripkeModel;
use crate::syntax::{parse_formula, Formula};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quant {
    Forall,
    Exists,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QbfInstance {
    /// Variables in prefix order, each quantified exactly once.
    pub vars: Vec<String>,
    pub quants: Vec<Quant>,
    /// Boolean formula over the variables (atoms, `~`, `&` and sugar).
    pub matrix: Formula,
}

impl QbfInstance {
    pub fn parse(text: &str) -> Result<QbfInstance> {
        let (prefix, matrix_text) = text
            .split_once(':')
            .ok_or_else(|| Error::BadQbf("expected `:` between prefix and matrix".to_string()))?;
        let mut vars = Vec::new();
        let mut quants = Vec::new();
        let mut tokens = prefix.split_whitespace();
        while let Some(tok) = tokens.next() {
            let q = match tok {
                "forall" => Quant::Forall,
                "exists" => Quant::Exists,
                other => return Err(Error::BadQbf(format!("unexpected token `{other}`"))),
            };
            let var = tokens
                .next()
                .ok_or_else(|| Error::BadQbf("quantifier without a variable".to_string()))?
                .to_string();
            if vars.contains(&var) {
                return Err(Error::BadQbf(format!("variable `{var}` quantified twice")));
            }
            vars.push(var);
            quants.push(q);
        }
        if vars.is_empty() {
            return Err(Error::BadQbf("empty quantifier prefix".to_string()));
        }
        let matrix = parse_formula(matrix_text)
            .map_err(|e| Error::BadQbf(format!("bad matrix: {e}")))?;
        if !is_boolean(&matrix) {
            return Err(Error::BadQbf("matrix must be purely Boolean".to_string()));
        }
        for atom in matrix.atoms() {
            if !vars.contains(&atom) {
                return Err(Error::BadQbf(format!("free variable `{atom}`")));
            }
        }
        Ok(QbfInstance { vars, quants, matrix })
    }

    pub fn n(&self) -> usize {
        self.vars.len()
    }
}

fn is_boolean(f: &Formula) -> bool {
    match f {
        Formula::Atom(_) => true,
        Formula::Not(g) => is_boolean(g),
        Formula::And(a, b) => is_boolean(a) && is_boolean(b),
        _ => false,
    }
}

fn eval_matrix(f: &Formula, assign: &BTreeMap<String, bool>) -> bool {
    match f {
        Formula::Atom(x) => assign[x],
        Formula::Not(g) => !eval_matrix(g, assign),
        Formula::And(a, b) => eval_matrix(a, assign) && eval_matrix(b, assign),
        _ => unreachable!("matrix is Boolean"),
    }
}

/// Truth of the closed QBF, by trying every assignment.
pub fn eval_qbf(inst: &QbfInstance) -> bool {
    fn rec(inst: &QbfInstance, i: usize, assign: &mut BTreeMap<String, bool>) -> bool {
        if i == inst.n() {
            return eval_matrix(&inst.matrix, assign);
        }
        let var = inst.vars[i].clone();
        let mut branch = |val: bool| {
            assign.insert(var.clone(), val);
            let r = rec(inst, i + 1, assign);
            assign.remove(&var);
            r
        };
        match inst.quants[i] {
            Quant::Forall => branch(false) && branch(true),
            Quant::Exists => branch(false) || branch(true),
        }
    }
    rec(inst, 0, &mut BTreeMap::new())
}

fn k_hat_a(atom: String) -> Formula {
    Formula::k_hat("a", Formula::atom(atom))
}

/// `chosen_k`: the first `k` variables have been fixed unambiguously, the
/// rest are still open.
fn chosen(k: usize, n: usize) -> Formula {
    let mut f: Option<Formula> = None;
    for i in 1..=n {
        let p = k_hat_a(format!("p{i}"));
        let q = k_hat_a(format!("q{i}"));
        let clause = if i <= k {
            Formula::iff(p, Formula::not(q))
        } else {
            Formula::and(p, q)
        };
        f = Some(match f {
            None => clause,
            Some(acc) => Formula::and(acc, clause),
        });
    }
    f.expect("n >= 1")
}

fn substitute_vars(f: &Formula, map: &BTreeMap<String, Formula>) -> Formula {
    match f {
        Formula::Atom(x) => map[x].clone(),
        Formula::Not(g) => Formula::not(substitute_vars(g, map)),
        Formula::And(a, b) => {
            Formula::and(substitute_vars(a, map), substitute_vars(b, map))
        }
        _ => unreachable!("matrix is Boolean"),
    }
}

/// The model-checking instance equivalent to the QBF: the gadget model, its
/// evaluation point, and the quantified formula. For variable `x_i` the
/// model has a `p_i`-world and a `q_i`-world, both `a`-adjacent to the
/// evaluation point; `b` is the identity, so a shared topic for `{a,b}` can
/// cut any subset of the `a`-edges. The quantifier for `x_1` is outermost:
/// edge deletion is monotone, so choices must be made outside-in.
pub fn encode(inst: &QbfInstance) -> (KripkeModel, String, Formula) {
    let n = inst.n();
    let mut worlds = BTreeSet::from(["w0".to_string()]);
    let mut valuation: BTreeMap<String, BTreeSet<String>> =
        [("w0".to_string(), BTreeSet::new())].into();
    let mut a_pairs: BTreeSet<(String, String)> = BTreeSet::new();
    for i in 1..=n {
        for (suffix, atom) in [("1", format!("p{i}")), ("0", format!("q{i}"))] {
            let w = format!("w{i}_{suffix}");
            worlds.insert(w.clone());
            valuation.insert(w.clone(), [atom].into_iter().collect());
            a_pairs.insert(("w0".to_string(), w.clone()));
            a_pairs.insert((w, "w0".to_string()));
        }
    }
    let loops: BTreeSet<(String, String)> = worlds.iter().map(|w| (w.clone(), w.clone())).collect();
    a_pairs.extend(loops.iter().cloned());
    let relations: BTreeMap<String, BTreeSet<(String, String)>> =
        [("a".to_string(), a_pairs), ("b".to_string(), loops)].into();
    let model = KripkeModel::new(
        worlds,
        ["a".to_string(), "b".to_string()].into_iter().collect(),
        relations,
        valuation,
    )
    .expect("gadget model is well-formed");

    let var_map: BTreeMap<String, Formula> = inst
        .vars
        .iter()
        .enumerate()
        .map(|(i, x)| (x.clone(), k_hat_a(format!("p{}", i + 1))))
        .collect();
    let group: BTreeSet<String> = ["a".to_string(), "b".to_string()].into_iter().collect();

    fn build(inst: &QbfInstance, k: usize, map: &BTreeMap<String, Formula>, group: &BTreeSet<String>) -> Formula {
        let n = inst.n();
        if k > n {
            return substitute_vars(&inst.matrix, map);
        }
        let inner = build(inst, k + 1, map, group);
        match inst.quants[k - 1] {
            Quant::Forall => Formula::arb_partial_comm(
                group.clone(),
                Formula::implies(chosen(k, n), inner),
            ),
            Quant::Exists => Formula::arb_partial_comm_dia(
                group.clone(),
                Formula::and(chosen(k, n), inner),
            ),
        }
    }

    let formula = build(inst, 1, &var_map, &group);
    (model, "w0".to_string(), formula)
}

/// Decide the QBF by checking its encoding.
pub fn solve_by_model_checking(inst: &QbfInstance) -> Result<bool> {
    let (model, point, formula) = encode(inst);
    check_quantified(&model, &point, &formula)
}
