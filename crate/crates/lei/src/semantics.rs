//! Static semantics: three-valued evaluation and the satisfaction pair.
//!
//! The same language is interpreted twice, on purpose. [`eval3`] computes
//! a compositional three-valued value from the truth tables. [`sat`] and
//! [`sat_neg`] are a mutually recursive pair of two-valued relations
//! ("supported" and "rejected") that push negation inward clause by
//! clause. The two routes agree, and the crate's tests lean on that: a
//! formula evaluates to true exactly when it is supported, and to false
//! exactly when it is rejected. Keeping both implementations separate
//! means a bug has to show up twice to go unnoticed.
//!
//! Ignorance is evaluated *reflexive-insensitively*: `I f` holds at `w`
//! when `f` holds at `w` and at no accessible world other than `w`
//! itself. A self-loop never destroys ignorance.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::formula::Formula;
use crate::model::{KripkeModel, TruthValue};

/// Errors from static evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    /// The world id is not in the model.
    #[error("unknown world `{0}`")]
    UnknownWorld(String),
    /// The formula contains an announcement; static evaluation only
    /// handles the announcement-free fragment.
    #[error("formula `{0}` contains an announcement; use dynamic evaluation")]
    DynamicFormula(Formula),
}

fn check_world(model: &KripkeModel, world: &str) -> Result<(), SemanticsError> {
    if model.has_world(world) {
        Ok(())
    } else {
        Err(SemanticsError::UnknownWorld(world.to_string()))
    }
}

/// Three-valued evaluation of a static formula at a world.
pub fn eval3(model: &KripkeModel, world: &str, f: &Formula) -> Result<TruthValue, SemanticsError> {
    check_world(model, world)?;
    eval3_inner(model, world, f)
}

fn eval3_inner(
    model: &KripkeModel,
    world: &str,
    f: &Formula,
) -> Result<TruthValue, SemanticsError> {
    match f {
        Formula::Atom(a) => Ok(model.value(world, a).expect("world checked")),
        Formula::Not(x) => Ok(eval3_inner(model, world, x)?.neg()),
        Formula::And(a, b) => Ok(eval3_inner(model, world, a)?.and(eval3_inner(model, world, b)?)),
        Formula::Imp(a, b) => Ok(eval3_inner(model, world, a)?.imp(eval3_inner(model, world, b)?)),
        Formula::Ign(x) => {
            if !eval3_inner(model, world, x)?.is_true() {
                return Ok(TruthValue::False);
            }
            for succ in model.successors(world) {
                if succ == world {
                    continue;
                }
                if eval3_inner(model, succ, x)?.is_true() {
                    return Ok(TruthValue::False);
                }
            }
            Ok(TruthValue::True)
        }
        Formula::Ann(_, _) => Err(SemanticsError::DynamicFormula(f.clone())),
    }
}

/// The support relation: `f` is true at `world`.
pub fn sat(model: &KripkeModel, world: &str, f: &Formula) -> Result<bool, SemanticsError> {
    check_world(model, world)?;
    sat_inner(model, world, f)
}

/// The rejection relation: `~f` is true at `world`.
pub fn sat_neg(model: &KripkeModel, world: &str, f: &Formula) -> Result<bool, SemanticsError> {
    check_world(model, world)?;
    sat_neg_inner(model, world, f)
}

fn sat_inner(model: &KripkeModel, world: &str, f: &Formula) -> Result<bool, SemanticsError> {
    match f {
        Formula::Atom(a) => Ok(model.value(world, a).expect("world checked").is_true()),
        Formula::Not(x) => sat_neg_inner(model, world, x),
        Formula::And(a, b) => Ok(sat_inner(model, world, a)? && sat_inner(model, world, b)?),
        Formula::Imp(a, b) => Ok(!sat_inner(model, world, a)? || sat_inner(model, world, b)?),
        Formula::Ign(x) => {
            if !sat_inner(model, world, x)? {
                return Ok(false);
            }
            for succ in model.successors(world) {
                if succ == world {
                    continue;
                }
                if sat_inner(model, succ, x)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Ann(_, _) => Err(SemanticsError::DynamicFormula(f.clone())),
    }
}

fn sat_neg_inner(model: &KripkeModel, world: &str, f: &Formula) -> Result<bool, SemanticsError> {
    match f {
        Formula::Atom(a) => Ok(model.value(world, a).expect("world checked").is_false()),
        // Rejecting a negation is supporting the negatum.
        Formula::Not(x) => sat_inner(model, world, x),
        Formula::And(a, b) => {
            Ok(sat_neg_inner(model, world, a)? || sat_neg_inner(model, world, b)?)
        }
        // Implication is two-valued, so its rejection is just non-support.
        Formula::Imp(a, b) => Ok(sat_inner(model, world, a)? && !sat_inner(model, world, b)?),
        // So is ignorance: `~I f` holds when some other accessible world
        // supports `f`, or when `f` fails here.
        Formula::Ign(x) => {
            for succ in model.successors(world) {
                if succ == world {
                    continue;
                }
                if sat_inner(model, succ, x)? {
                    return Ok(true);
                }
            }
            Ok(!sat_inner(model, world, x)?)
        }
        Formula::Ann(_, _) => Err(SemanticsError::DynamicFormula(f.clone())),
    }
}

/// True when `f` is supported at every world of the model.
pub fn valid_in_model(model: &KripkeModel, f: &Formula) -> Result<bool, SemanticsError> {
    for w in model.world_ids() {
        if !sat(model, w, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Enumerates the bounded formula family used when a set of "everything
/// true here" formulas has to be made concrete.
///
/// Level zero is the literals over `atoms` (all positives in order, then
/// all negatives), plus `x & y` and `x | y` for every ordered pair of
/// distinct literals. Each further level adds `I f` and `~I f` for every
/// formula of the previous level, cumulatively. `layers` counts the
/// ignorance levels, so the deepest formulas have modal depth `layers`.
///
/// The order is deterministic and duplicate-free, which the update
/// machinery relies on for reproducibility.
pub fn theory_slice(atoms: &BTreeSet<String>, layers: usize) -> Vec<Formula> {
    let mut literals: Vec<Formula> = Vec::new();
    for a in atoms {
        literals.push(Formula::atom(a.clone()));
    }
    for a in atoms {
        literals.push(Formula::atom(a.clone()).not());
    }

    let mut out = literals.clone();
    for (i, x) in literals.iter().enumerate() {
        for (j, y) in literals.iter().enumerate() {
            if i == j {
                continue;
            }
            out.push(x.clone().and(y.clone()));
            out.push(x.clone().or(y.clone()));
        }
    }

    let mut level_start = 0;
    for _ in 0..layers {
        let level_end = out.len();
        for idx in level_start..level_end {
            let f = out[idx].clone();
            out.push(f.clone().ign());
            out.push(f.ign().not());
        }
        level_start = level_end;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::model::TruthValue::{False as F, Gap as G, True as T};

    /// w0 sees w1 (p false) and w2 (p gappy); p is true at w0.
    fn hearer() -> KripkeModel {
        let mut m = KripkeModel::new("m1");
        for w in ["w0", "w1", "w2"] {
            m.add_world(w).unwrap();
        }
        m.set_atom("w0", "p", T).unwrap();
        m.set_atom("w1", "p", F).unwrap();
        m.add_edge("w0", "w1").unwrap();
        m.add_edge("w0", "w2").unwrap();
        m
    }

    fn value(m: &KripkeModel, w: &str, src: &str) -> TruthValue {
        eval3(m, w, &parse(src).unwrap()).unwrap()
    }

    fn holds(m: &KripkeModel, w: &str, src: &str) -> bool {
        sat(m, w, &parse(src).unwrap()).unwrap()
    }

    #[test]
    fn atoms_read_the_valuation() {
        let m = hearer();
        assert_eq!(value(&m, "w0", "p"), T);
        assert_eq!(value(&m, "w1", "p"), F);
        assert_eq!(value(&m, "w2", "p"), G);
    }

    #[test]
    fn connectives_follow_the_tables() {
        let m = hearer();
        assert_eq!(value(&m, "w2", "~p"), G);
        assert_eq!(value(&m, "w2", "p & ~p"), G);
        assert_eq!(value(&m, "w2", "p | ~p"), G);
        assert_eq!(value(&m, "w1", "p | ~p"), T);
        assert_eq!(value(&m, "w2", "p -> p"), T);
        assert_eq!(value(&m, "w0", "p -> ~p"), F);
        assert_eq!(value(&m, "w2", "p -> ~p"), T);
    }

    #[test]
    fn ignorance_needs_truth_here_and_nowhere_else() {
        let m = hearer();
        // p is true at w0 and at no accessible world, so the hearer at w0
        // is "excusably ignorant" of p.
        assert_eq!(value(&m, "w0", "I p"), T);
        // p fails at w1, so no ignorance of it there.
        assert_eq!(value(&m, "w1", "I p"), F);
        // ~p is true at w1, which w0 can see.
        assert_eq!(value(&m, "w0", "I ~p"), F);
    }

    #[test]
    fn ignorance_is_two_valued() {
        let m = hearer();
        assert_eq!(value(&m, "w2", "I p"), F);
        assert_eq!(value(&m, "w2", "~I p"), T);
    }

    #[test]
    fn self_loops_do_not_destroy_ignorance() {
        let mut m = hearer();
        m.add_edge("w0", "w0").unwrap();
        assert_eq!(value(&m, "w0", "I p"), T);
        assert!(holds(&m, "w0", "I p"));
        assert!(!sat_neg(&m, "w0", &parse("I p").unwrap()).unwrap());
    }

    #[test]
    fn factivity_holds() {
        let m = hearer();
        for w in ["w0", "w1", "w2"] {
            assert!(holds(&m, w, "I p -> p"));
        }
        assert!(valid_in_model(&m, &parse("I p -> p").unwrap()).unwrap());
    }

    #[test]
    fn support_and_rejection_track_the_valuation() {
        let m = hearer();
        for w in ["w0", "w1", "w2"] {
            for src in [
                "p",
                "~p",
                "p & ~p",
                "p | ~p",
                "p -> ~p",
                "I p",
                "~I p",
                "I ~p",
                "~I ~p",
                "I (p -> p)",
                "~(p & p)",
                "~~p",
                "~(p -> p)",
            ] {
                let f = parse(src).unwrap();
                let v = eval3(&m, w, &f).unwrap();
                assert_eq!(sat(&m, w, &f).unwrap(), v == T, "{src} at {w}");
                assert_eq!(sat_neg(&m, w, &f).unwrap(), v == F, "~({src}) at {w}");
            }
        }
    }

    #[test]
    fn dynamic_formulas_are_rejected() {
        let m = hearer();
        let f = parse("[p] q").unwrap();
        assert!(matches!(
            eval3(&m, "w0", &f),
            Err(SemanticsError::DynamicFormula(_))
        ));
        assert!(matches!(
            sat(&m, "w0", &f),
            Err(SemanticsError::DynamicFormula(_))
        ));
    }

    #[test]
    fn unknown_worlds_are_rejected() {
        let m = hearer();
        assert!(matches!(
            eval3(&m, "w9", &parse("p").unwrap()),
            Err(SemanticsError::UnknownWorld(_))
        ));
    }

    #[test]
    fn slice_level_zero_for_one_atom() {
        let atoms: BTreeSet<String> = ["p".to_string()].into();
        let slice = theory_slice(&atoms, 0);
        let rendered: Vec<String> = slice.iter().map(|f| f.to_string()).collect();
        assert_eq!(
            rendered,
            vec!["p", "~p", "p & ~p", "~(~p & ~~p)", "~p & p", "~(~~p & ~p)",]
        );
    }

    #[test]
    fn slice_layers_are_cumulative_and_deduplicated_by_construction() {
        let atoms: BTreeSet<String> = ["p".to_string(), "q".to_string()].into();
        let zero = theory_slice(&atoms, 0);
        // 4 literals + 4*3 ordered pairs * 2 connectives.
        assert_eq!(zero.len(), 4 + 24);
        let one = theory_slice(&atoms, 1);
        assert_eq!(one.len(), 28 * 3);
        assert_eq!(&one[..28], &zero[..]);
        // Layer two adds `I`/`~I` over the 56 formulas layer one added.
        let two = theory_slice(&atoms, 2);
        assert_eq!(two.len(), 28 + 56 + 112);
        let unique: BTreeSet<&Formula> = two.iter().collect();
        assert_eq!(unique.len(), two.len(), "no duplicates");
        assert!(two.iter().all(|f| f.modal_depth() <= 2));
        let ignorance_of_q = parse("~I q").unwrap();
        assert!(one.contains(&ignorance_of_q));
    }
}
