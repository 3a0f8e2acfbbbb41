//! Reduction of the update modalities to the base epistemic language: every
//! formula with `[S!χ]` / `[ξ!]` boxes is equivalent to one with `D_G` only.
//! Translation is innermost-first, so a box is always pushed through an
//! already box-free body. Output can be exponentially larger than the input.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::syntax::Formula;

/// "The agents in `G` know distributively that `χ`'s truth value implies
/// `φ`": `(χ → D_G(χ → φ)) ∧ (¬χ → D_G(¬χ → φ))`.
pub fn dgr(group: &BTreeSet<String>, chi: &Formula, phi: &Formula) -> Formula {
    let half = |lit: Formula| {
        Formula::implies(
            lit.clone(),
            Formula::d(group.clone(), Formula::implies(lit, phi.clone())),
        )
    };
    Formula::and(half(chi.clone()), half(Formula::not(chi.clone())))
}

/// Push `[S!χ]` (with box-free `χ`) through a box-free formula.
fn push_pc(group: &BTreeSet<String>, chi: &Formula, f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) => f.clone(),
        Formula::Not(g) => Formula::not(push_pc(group, chi, g)),
        Formula::And(a, b) => Formula::and(push_pc(group, chi, a), push_pc(group, chi, b)),
        Formula::D(g, body) => {
            let pushed = push_pc(group, chi, body);
            let joint: BTreeSet<String> = group.union(g).cloned().collect();
            Formula::and(Formula::d(joint, pushed.clone()), dgr(g, chi, &pushed))
        }
        _ => unreachable!("body is box-free"),
    }
}

/// Push `[ξ!]` (with box-free `ξ`) through a box-free formula.
fn push_pa(xi: &Formula, f: &Formula) -> Formula {
    match f {
        Formula::Atom(_) => Formula::implies(xi.clone(), f.clone()),
        Formula::Not(g) => Formula::implies(xi.clone(), Formula::not(push_pa(xi, g))),
        Formula::And(a, b) => Formula::and(push_pa(xi, a), push_pa(xi, b)),
        Formula::D(g, body) => {
            Formula::implies(xi.clone(), Formula::d(g.clone(), push_pa(xi, body)))
        }
        _ => unreachable!("body is box-free"),
    }
}

/// Eliminate all communication and announcement boxes. Quantified
/// modalities have no reduction and are rejected.
pub fn translate(f: &Formula) -> Result<Formula> {
    match f {
        Formula::Atom(_) => Ok(f.clone()),
        Formula::Not(g) => Ok(Formula::not(translate(g)?)),
        Formula::And(a, b) => Ok(Formula::and(translate(a)?, translate(b)?)),
        Formula::D(g, body) => Ok(Formula::d(g.clone(), translate(body)?)),
        Formula::PartialComm(s, chi, body) => {
            let chi = translate(chi)?;
            let body = translate(body)?;
            Ok(push_pc(s, &chi, &body))
        }
        Formula::PubAnn(xi, body) => {
            let xi = translate(xi)?;
            let body = translate(body)?;
            Ok(push_pa(&xi, &body))
        }
        Formula::ArbPartialComm(..) | Formula::ArbPubAnn(..) => Err(Error::UnsupportedFragment(
            "quantified modalities cannot be reduced".to_string(),
        )),
    }
}

fn contains_pub_ann(f: &Formula) -> bool {
    match f {
        Formula::Atom(_) => false,
        Formula::Not(g) | Formula::D(_, g) | Formula::ArbPartialComm(_, g) | Formula::ArbPubAnn(g) => {
            contains_pub_ann(g)
        }
        Formula::And(a, b) | Formula::PartialComm(_, a, b) => {
            contains_pub_ann(a) || contains_pub_ann(b)
        }
        Formula::PubAnn(..) => true,
    }
}

fn contains_partial_comm(f: &Formula) -> bool {
    match f {
        Formula::Atom(_) => false,
        Formula::Not(g) | Formula::D(_, g) | Formula::ArbPartialComm(_, g) | Formula::ArbPubAnn(g) => {
            contains_partial_comm(g)
        }
        Formula::And(a, b) | Formula::PubAnn(a, b) => {
            contains_partial_comm(a) || contains_partial_comm(b)
        }
        Formula::PartialComm(..) => true,
    }
}

/// Reduction for the partial communication language only.
pub fn translate_pc(f: &Formula) -> Result<Formula> {
    if contains_pub_ann(f) {
        return Err(Error::UnsupportedFragment(
            "announcement modality outside the communication fragment".to_string(),
        ));
    }
    translate(f)
}

/// Reduction for the announcement language only.
pub fn translate_pa(f: &Formula) -> Result<Formula> {
    if contains_partial_comm(f) {
        return Err(Error::UnsupportedFragment(
            "communication modality outside the announcement fragment".to_string(),
        ));
    }
    translate(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::semantics::{eval, random_formula, random_model, Layer};
    use crate::syntax::parse_formula;

    #[test]
    fn output_is_box_free() {
        for text in [
            "[{a,b} ! q] D{a} p",
            "[! p] K a p",
            "~[{a} ! (p | q)] ([! q] K b p & D{a,b} ~q)",
            "[{} ! p] K a q",
        ] {
            let f = parse_formula(text).unwrap();
            let t = translate(&f).unwrap();
            assert!(!t.has_update_modality(), "{text} -> {t}");
        }
    }

    #[test]
    fn translation_preserves_truth_on_fixtures() {
        let texts = [
            "[{a,b} ! q] K a q",
            "[{a,b} ! q] K a p",
            "[{b} ! q] [{a} ! p] D{a,b} (p & ~q)",
            "[! p] K a p",
            "[! p] K a ~p",
            "[! (p & q)] D{a,b} q",
            "[{} ! q] K a p",
            "<! q> K b q",
        ];
        for m in [fixtures::fact33(), fixtures::fact34()] {
            for text in texts {
                let f = parse_formula(text).unwrap();
                let t = translate(&f).unwrap();
                for w in m.worlds() {
                    if f.agents().iter().all(|a| m.agents().contains(a)) {
                        assert_eq!(
                            eval(&m, w, &f).unwrap(),
                            eval(&m, w, &t).unwrap(),
                            "{text} at {w}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn translation_preserves_truth_on_random_instances() {
        for seed in 0..80u64 {
            let m = random_model(seed, 5, &["a", "b"], &["p", "q"], 0.4);
            let f = random_formula(seed.wrapping_add(31), 3, &["p", "q"], &["a", "b"], Layer::PubAnn);
            let t = translate(&f).unwrap();
            assert!(!t.has_update_modality());
            for w in m.worlds() {
                assert_eq!(
                    eval(&m, w, &f).unwrap(),
                    eval(&m, w, &t).unwrap(),
                    "seed {seed} at {w}: {f}"
                );
            }
        }
    }

    #[test]
    fn fragment_entry_points_validate() {
        let mixed = parse_formula("[{a} ! p] [! q] r").unwrap();
        assert!(matches!(translate_pc(&mixed), Err(Error::UnsupportedFragment(_))));
        assert!(matches!(translate_pa(&mixed), Err(Error::UnsupportedFragment(_))));
        assert!(translate_pc(&parse_formula("[{a} ! p] q").unwrap()).is_ok());
        assert!(translate_pa(&parse_formula("[! p] q").unwrap()).is_ok());
        assert!(matches!(
            translate(&parse_formula("[* a] p").unwrap()),
            Err(Error::UnsupportedFragment(_))
        ));
    }

    #[test]
    fn announcement_diamond_unfolds_to_conjunction() {
        // ⟨ξ!⟩φ ↔ ξ ∧ [ξ!]φ
        let m = fixtures::fact33();
        for w in m.worlds() {
            let dia = parse_formula("<! p> K a p").unwrap();
            let conj = parse_formula("(p & [! p] K a p)").unwrap();
            assert_eq!(eval(&m, w, &dia).unwrap(), eval(&m, w, &conj).unwrap());
        }
    }

    #[test]
    fn dgr_shape() {
        let g: BTreeSet<String> = ["a".to_string()].into_iter().collect();
        let chi = parse_formula("p").unwrap();
        let phi = parse_formula("q").unwrap();
        let expected = parse_formula("((p -> D{a} (p -> q)) & (~p -> D{a} (~p -> q)))").unwrap();
        assert_eq!(dgr(&g, &chi, &phi), expected);
    }
}
