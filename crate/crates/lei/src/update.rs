//! Additive announcement: model update by world addition.
//!
//! Announcing `f` to the hearer at world `w` does not delete epistemic
//! alternatives. It adds one new world `w*` that carries exactly what the
//! announcement licenses: the content itself plus everything the hearer
//! already accepted without being ignorant of it. The new world becomes
//! an alternative for `w` and inherits `w`'s outgoing edges, so earlier
//! alternatives stay reachable and ignorance claims can survive an
//! announcement instead of being silently revised away.
//!
//! Because worlds here are concrete atom valuations rather than deductively
//! closed theories, the construction works through a finite slice of the
//! language (see [`crate::semantics::theory_slice`]) and the bounded
//! [`crate::oracle`]:
//!
//! * the announcement is *admissible* when the content is jointly
//!   satisfiable with everything true at `w` (sliced to the content's
//!   modal depth plus one);
//! * each atom of `w*` is what the content together with the hearer's
//!   non-ignored truths forces: true if entailed, false if its negation
//!   is entailed, a gap otherwise;
//! * a completion pass then raises gaps at `w*` (fewest atoms first) if
//!   that is needed to make the announced content itself true there.
//!
//! Everything the oracle cannot settle within bounds surfaces through
//! [`UnknownPolicy`]; nothing is silently guessed.
//!
//! [`eliminative_announce`] implements the classical world-deleting update
//! for contrast. Its known pathology (a truthful announcement of `p` can
//! leave the hearer's ignorance of `p` formally intact, or even manufacture
//! it) is demonstrated in the gallery tests.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::collections::HashMap;

use crate::formula::Formula;
use crate::model::{KripkeModel, TruthValue};
use crate::oracle::{self, ConsequenceVerdict, ConsistencyVerdict, SearchBounds};
use crate::semantics::{self, SemanticsError};
use thiserror::Error;

/// Failures while updating a model or evaluating a dynamic formula.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum UpdateError {
    /// A world or formula was rejected by the static layer.
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    /// The bounded search itself refused the query.
    #[error(transparent)]
    Oracle(#[from] crate::oracle::OracleError),
    /// Announced content must be a static formula.
    #[error("announcement content `{0}` contains an announcement")]
    DynamicContent(Formula),
    /// The oracle ran out of bounds and the policy was to stop.
    #[error("could not settle `{0}` within the search bounds")]
    Undecided(Formula),
}

/// What to do when the bounded oracle returns no verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UnknownPolicy {
    /// Refuse to guess: surface the unknown to the caller.
    #[default]
    Error,
    /// Treat an unsettled admissibility check as consistent and keep
    /// going; unsettled atom entailments become gaps.
    AssumeConsistent,
    /// Treat an unsettled admissibility check as inconsistent.
    AssumeInconsistent,
}

/// Result of announcing a static formula at a world.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UpdateOutcome {
    /// The announcement was admissible; `new_world` names the added world.
    Updated {
        model: KripkeModel,
        new_world: String,
    },
    /// The content contradicts what is true at the announcement world.
    Inconsistent,
    /// The bounded oracle could not decide admissibility.
    Unknown,
}

/// Everything true at `world`, restricted to the content's signature and
/// sliced one ignorance layer above the content's modal depth. The content
/// is always the first element; its negation is included when the content
/// is false at `world`. This is the set whose joint satisfiability decides
/// whether the announcement is admissible.
pub fn truth_set(
    model: &KripkeModel,
    world: &str,
    content: &Formula,
) -> Result<Vec<Formula>, UpdateError> {
    let mut sig = model.atoms();
    sig.extend(content.atoms());
    let depth = content.modal_depth() + 1;
    let mut out = vec![content.clone()];
    if semantics::sat_neg(model, world, content)? {
        out.push(content.clone().not());
    }
    for chi in semantics::theory_slice(&sig, depth) {
        if !out.contains(&chi) && semantics::sat(model, world, &chi)? {
            out.push(chi);
        }
    }
    Ok(out)
}

/// The formulas that define the announcement's new world: the content,
/// plus every sliced formula the hearer accepts at `world` without being
/// ignorant of it. Atom values at the new world are exactly what this set
/// entails.
pub fn defining_set(
    model: &KripkeModel,
    world: &str,
    content: &Formula,
) -> Result<Vec<Formula>, UpdateError> {
    let mut sig = model.atoms();
    sig.extend(content.atoms());
    let depth = content.modal_depth() + 1;
    let mut out = vec![content.clone()];
    for chi in semantics::theory_slice(&sig, depth) {
        if out.contains(&chi) {
            continue;
        }
        let not_ignored = chi.clone().ign().not();
        if semantics::sat(model, world, &chi)? && semantics::sat(model, world, &not_ignored)? {
            out.push(chi);
        }
    }
    Ok(out)
}

/// Picks an unused world id of the form `base@n`. Generated ids keep a
/// `@` so they can never collide with hand-written ones, and `n` is one
/// above the largest generated suffix anywhere in the model, so repeated
/// announcements stay fresh.
fn fresh_world_id(model: &KripkeModel, base: &str) -> String {
    let mut max = 0u64;
    for id in model.world_ids() {
        if let Some(pos) = id.rfind('@') {
            if let Ok(k) = id[pos + 1..].parse::<u64>() {
                max = max.max(k);
            }
        }
    }
    format!("{base}@{}", max + 1)
}

/// Announces `content` at `world`, producing the updated model.
///
/// The update never removes worlds or edges. On success the new world is
/// an alternative of `world` and inherits all of `world`'s previous
/// outgoing edges.
pub fn announce(
    model: &KripkeModel,
    world: &str,
    content: &Formula,
    bounds: &SearchBounds,
    policy: UnknownPolicy,
) -> Result<UpdateOutcome, UpdateError> {
    if !model.has_world(world) {
        return Err(SemanticsError::UnknownWorld(world.to_string()).into());
    }
    if !content.is_static() {
        return Err(UpdateError::DynamicContent(content.clone()));
    }

    let truths = truth_set(model, world, content)?;
    match oracle::consistent(&truths, bounds)? {
        ConsistencyVerdict::Inconsistent => return Ok(UpdateOutcome::Inconsistent),
        ConsistencyVerdict::Unknown => match policy {
            UnknownPolicy::Error => return Ok(UpdateOutcome::Unknown),
            UnknownPolicy::AssumeInconsistent => return Ok(UpdateOutcome::Inconsistent),
            UnknownPolicy::AssumeConsistent => {}
        },
        ConsistencyVerdict::Consistent(_) => {}
    }

    let base = defining_set(model, world, content)?;
    let mut sig = model.atoms();
    sig.extend(content.atoms());

    let mut assignment: BTreeMap<String, TruthValue> = BTreeMap::new();
    for a in &sig {
        let pos = Formula::atom(a.clone());
        let neg = pos.clone().not();
        // Literal membership settles the atom without a search.
        let value = if base.contains(&pos) {
            Some(TruthValue::True)
        } else if base.contains(&neg) {
            Some(TruthValue::False)
        } else {
            match oracle::consequence(&base, &pos, bounds)? {
                ConsequenceVerdict::Follows => Some(TruthValue::True),
                ConsequenceVerdict::Unknown if policy == UnknownPolicy::Error => {
                    return Ok(UpdateOutcome::Unknown)
                }
                _ => match oracle::consequence(&base, &neg, bounds)? {
                    ConsequenceVerdict::Follows => Some(TruthValue::False),
                    ConsequenceVerdict::Unknown if policy == UnknownPolicy::Error => {
                        return Ok(UpdateOutcome::Unknown)
                    }
                    _ => None,
                },
            }
        };
        if let Some(v) = value {
            assignment.insert(a.clone(), v);
        }
    }

    let new_world = fresh_world_id(model, world);
    let mut updated = model.clone();
    updated
        .add_world(new_world.clone())
        .expect("fresh id cannot collide");
    for (a, v) in &assignment {
        updated.set_atom(&new_world, a, *v).expect("world exists");
    }
    updated.add_edge(world, &new_world).expect("worlds exist");
    let inherited: Vec<String> = model.successors(world).map(str::to_string).collect();
    for succ in &inherited {
        updated.add_edge(&new_world, succ).expect("worlds exist");
    }

    complete_content(&mut updated, &new_world, content, &sig)?;
    Ok(UpdateOutcome::Updated {
        model: updated,
        new_world,
    })
}

/// Raises gaps at `world` until `content` is true there, if it is not
/// already. Smallest repairs first: subsets of gap atoms by size and then
/// lexicographically, each subset tried with every true/false assignment
/// (all-true first). Best effort; an unrepairable content is left as is
/// and shows up in [`verify_new_world`].
fn complete_content(
    model: &mut KripkeModel,
    world: &str,
    content: &Formula,
    sig: &BTreeSet<String>,
) -> Result<(), UpdateError> {
    if semantics::sat(model, world, content)? {
        return Ok(());
    }
    let gaps: Vec<&String> = sig
        .iter()
        .filter(|a| model.value(world, a) == Some(TruthValue::Gap))
        .collect();
    for k in 1..=gaps.len() {
        let mut chosen: Vec<usize> = (0..k).collect();
        loop {
            for pattern in 0..(1u32 << k) {
                let mut trial = model.clone();
                for (j, &gap_idx) in chosen.iter().enumerate() {
                    let v = if pattern >> (k - 1 - j) & 1 == 0 {
                        TruthValue::True
                    } else {
                        TruthValue::False
                    };
                    trial
                        .set_atom(world, gaps[gap_idx], v)
                        .expect("world exists");
                }
                if semantics::sat(&trial, world, content)? {
                    *model = trial;
                    return Ok(());
                }
            }
            if !next_combination(&mut chosen, gaps.len()) {
                break;
            }
        }
    }
    Ok(())
}

/// Advances `idx` to the next k-combination of `0..n` in lexicographic
/// order; false when exhausted.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] != i + n - k {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Outcome of replaying a defining set against the world it defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewWorldReport {
    /// Formulas checked (those within the depth cap).
    pub checked: usize,
    /// Checked formulas that are not true at the new world.
    pub drifted: Vec<Formula>,
}

/// Replays `defining` at `new_world` and reports which members failed to
/// survive the move from theories to concrete valuations. Drift is
/// expected for disjunctions whose truth at the original world rested on
/// an atom the set does not entail; it is reported, never repaired.
pub fn verify_new_world(
    updated: &KripkeModel,
    new_world: &str,
    defining: &[Formula],
    max_depth: usize,
) -> Result<NewWorldReport, UpdateError> {
    let mut checked = 0;
    let mut drifted = Vec::new();
    for chi in defining {
        if chi.modal_depth() > max_depth {
            continue;
        }
        checked += 1;
        if !semantics::sat(updated, new_world, chi)? {
            drifted.push(chi.clone());
        }
    }
    Ok(NewWorldReport { checked, drifted })
}

/// Announcement results keyed by (world, content), nested per updated
/// model so repeated and nested announcements are built once.
#[derive(Default)]
struct AnnounceCache {
    map: HashMap<(String, Formula), CacheEntry>,
}

struct CacheEntry {
    outcome: UpdateOutcome,
    inner: AnnounceCache,
}

/// Evaluates a formula that may contain announcements.
///
/// Static connectives follow the three-valued tables; an announcement
/// `[f] g` is two-valued: true when the announcement is inadmissible at
/// `world`, and otherwise exactly when `g` is true at `world` in the
/// updated model. An announcement the oracle cannot settle surfaces as
/// [`UpdateError::Undecided`] under [`UnknownPolicy::Error`].
pub fn eval_dynamic(
    model: &KripkeModel,
    world: &str,
    f: &Formula,
    bounds: &SearchBounds,
    policy: UnknownPolicy,
) -> Result<TruthValue, UpdateError> {
    if !model.has_world(world) {
        return Err(SemanticsError::UnknownWorld(world.to_string()).into());
    }
    let mut cache = AnnounceCache::default();
    eval_dyn(model, &mut cache, world, f, bounds, policy)
}

fn eval_dyn(
    model: &KripkeModel,
    cache: &mut AnnounceCache,
    world: &str,
    f: &Formula,
    bounds: &SearchBounds,
    policy: UnknownPolicy,
) -> Result<TruthValue, UpdateError> {
    match f {
        Formula::Atom(a) => Ok(model.value(world, a).expect("world exists")),
        Formula::Not(x) => Ok(eval_dyn(model, cache, world, x, bounds, policy)?.neg()),
        Formula::And(x, y) => {
            let l = eval_dyn(model, cache, world, x, bounds, policy)?;
            let r = eval_dyn(model, cache, world, y, bounds, policy)?;
            Ok(l.and(r))
        }
        Formula::Imp(x, y) => {
            let l = eval_dyn(model, cache, world, x, bounds, policy)?;
            let r = eval_dyn(model, cache, world, y, bounds, policy)?;
            Ok(l.imp(r))
        }
        Formula::Ign(x) => {
            if eval_dyn(model, cache, world, x, bounds, policy)? != TruthValue::True {
                return Ok(TruthValue::False);
            }
            let succs: Vec<String> = model.successors(world).map(str::to_string).collect();
            for succ in succs {
                if succ == world {
                    continue;
                }
                if eval_dyn(model, cache, &succ, x, bounds, policy)? == TruthValue::True {
                    return Ok(TruthValue::False);
                }
            }
            Ok(TruthValue::True)
        }
        Formula::Ann(content, body) => {
            if !content.is_static() {
                return Err(UpdateError::DynamicContent((**content).clone()));
            }
            let key = (world.to_string(), (**content).clone());
            if !cache.map.contains_key(&key) {
                let outcome = announce(model, world, content, bounds, policy)?;
                cache.map.insert(
                    key.clone(),
                    CacheEntry {
                        outcome,
                        inner: AnnounceCache::default(),
                    },
                );
            }
            let CacheEntry { outcome, inner } = cache.map.get_mut(&key).expect("just inserted");
            match &*outcome {
                UpdateOutcome::Inconsistent => Ok(TruthValue::True),
                UpdateOutcome::Unknown => Err(UpdateError::Undecided(f.clone())),
                UpdateOutcome::Updated { model: updated, .. } => {
                    let v = eval_dyn(updated, inner, world, body, bounds, policy)?;
                    Ok(TruthValue::from(v == TruthValue::True))
                }
            }
        }
    }
}

/// Which worlds an eliminative announcement keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EliminationRule {
    /// Keep exactly the worlds where the content is true.
    KeepWhereTrue,
    /// Drop exactly the worlds where the content is false, keeping gaps.
    DropWhereFalse,
}

/// The classical world-deleting update, for contrast with [`announce`].
/// Returns the restricted model and the set of worlds removed.
pub fn eliminative_announce(
    model: &KripkeModel,
    content: &Formula,
    rule: EliminationRule,
) -> Result<(KripkeModel, BTreeSet<String>), UpdateError> {
    if !content.is_static() {
        return Err(UpdateError::DynamicContent(content.clone()));
    }
    let mut kept = BTreeSet::new();
    let mut removed = BTreeSet::new();
    for w in model.world_ids() {
        let keep = match rule {
            EliminationRule::KeepWhereTrue => semantics::sat(model, w, content)?,
            EliminationRule::DropWhereFalse => !semantics::sat_neg(model, w, content)?,
        };
        if keep {
            kept.insert(w.to_string());
        } else {
            removed.insert(w.to_string());
        }
    }
    let mut out = KripkeModel::new(model.name());
    for w in &kept {
        out.add_world(w.clone())
            .expect("ids come from a valid model");
        for (a, v) in model.world_atoms(w).expect("world exists") {
            out.set_atom(w, a, *v).expect("world exists");
        }
    }
    for (x, y) in model.edges() {
        if kept.contains(x) && kept.contains(y) {
            out.add_edge(x, y).expect("worlds exist");
        }
    }
    Ok((out, removed))
}

/// Evaluates a formula reading every announcement eliminatively: `[f] g`
/// is vacuously true at a world the announcement deletes, and otherwise
/// true exactly when `g` is true there in the restricted model.
pub fn eval_eliminative(
    model: &KripkeModel,
    world: &str,
    f: &Formula,
    rule: EliminationRule,
) -> Result<TruthValue, UpdateError> {
    if !model.has_world(world) {
        return Err(SemanticsError::UnknownWorld(world.to_string()).into());
    }
    match f {
        Formula::Atom(a) => Ok(model.value(world, a).expect("world exists")),
        Formula::Not(x) => Ok(eval_eliminative(model, world, x, rule)?.neg()),
        Formula::And(x, y) => {
            let l = eval_eliminative(model, world, x, rule)?;
            let r = eval_eliminative(model, world, y, rule)?;
            Ok(l.and(r))
        }
        Formula::Imp(x, y) => {
            let l = eval_eliminative(model, world, x, rule)?;
            let r = eval_eliminative(model, world, y, rule)?;
            Ok(l.imp(r))
        }
        Formula::Ign(x) => {
            if eval_eliminative(model, world, x, rule)? != TruthValue::True {
                return Ok(TruthValue::False);
            }
            let succs: Vec<String> = model.successors(world).map(str::to_string).collect();
            for succ in succs {
                if succ == world {
                    continue;
                }
                if eval_eliminative(model, &succ, x, rule)? == TruthValue::True {
                    return Ok(TruthValue::False);
                }
            }
            Ok(TruthValue::True)
        }
        Formula::Ann(content, body) => {
            if !content.is_static() {
                return Err(UpdateError::DynamicContent((**content).clone()));
            }
            let (restricted, _removed) = eliminative_announce(model, content, rule)?;
            if !restricted.has_world(world) {
                return Ok(TruthValue::True);
            }
            let v = eval_eliminative(&restricted, world, body, rule)?;
            Ok(TruthValue::from(v == TruthValue::True))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figures;
    use crate::formula::parse;

    fn f(src: &str) -> Formula {
        parse(src).unwrap()
    }

    fn announce_ok(model: &KripkeModel, world: &str, content: &str) -> (KripkeModel, String) {
        let outcome = announce(
            model,
            world,
            &f(content),
            &SearchBounds::default(),
            UnknownPolicy::Error,
        )
        .unwrap();
        match outcome {
            UpdateOutcome::Updated { model, new_world } => (model, new_world),
            other => panic!("expected an update, got {other:?}"),
        }
    }

    fn dyn_val(model: &KripkeModel, world: &str, src: &str) -> TruthValue {
        eval_dynamic(
            model,
            world,
            &f(src),
            &SearchBounds::default(),
            UnknownPolicy::Error,
        )
        .unwrap()
    }

    #[test]
    fn announcing_an_atom_adds_one_world_carrying_it() {
        let m = figures::m2();
        let (updated, w) = announce_ok(&m, "w0", "p");
        assert_eq!(w, "w0@1");
        assert_eq!(updated.world_count(), 5);
        assert_eq!(updated.value(&w, "p"), Some(TruthValue::True));
        assert_eq!(updated.value(&w, "q"), Some(TruthValue::True));
        // One edge in, plus the three inherited from w0.
        assert_eq!(updated.edge_count(), 7);
        assert!(updated.has_edge("w0", &w));
        for succ in ["w1", "w2", "w3"] {
            assert!(updated.has_edge(&w, succ));
        }
        // The original model is untouched by value semantics.
        assert_eq!(m.world_count(), 4);
    }

    #[test]
    fn announcing_removes_excusable_ignorance_of_the_content() {
        let m = figures::m2();
        assert_eq!(dyn_val(&m, "w0", "I p"), TruthValue::True);
        assert_eq!(dyn_val(&m, "w0", "[p] ~I p"), TruthValue::True);
        assert_eq!(dyn_val(&m, "w0", "[p] I p"), TruthValue::False);
    }

    #[test]
    fn announcing_non_ignorance_leaves_unforced_atoms_as_gaps() {
        let m = figures::m2();
        let content = f("~I q");
        let (updated, w) = announce_ok(&m, "w0", "~I q");
        assert_eq!(updated.value(&w, "q"), Some(TruthValue::True));
        assert_eq!(updated.value(&w, "p"), Some(TruthValue::Gap));
        // The content survives at the new world and the disjunction that
        // rode on `p` does not; the report names it rather than fixing it.
        let defining = defining_set(&m, "w0", &content).unwrap();
        let report = verify_new_world(&updated, &w, &defining, content.modal_depth() + 1).unwrap();
        assert!(report.checked > 0);
        assert!(report.drifted.contains(&f("~(~p & ~~p)")));
        assert!(!report.drifted.contains(&f("~I q")));
    }

    #[test]
    fn announcing_an_ignorance_claim_communicates_its_factive_content() {
        let m = figures::m2();
        let (updated, w) = announce_ok(&m, "w0", "I p");
        // Factivity pins p at the new world; q rides along from the
        // hearer's non-ignored truths.
        assert_eq!(updated.value(&w, "p"), Some(TruthValue::True));
        assert_eq!(updated.value(&w, "q"), Some(TruthValue::True));
        // The claim itself stays true at the world it defined: that world
        // sees only the old alternatives, none of which verifies p.
        assert!(semantics::sat(&updated, &w, &f("I p")).unwrap());
        // But at the point the new world is a p-alternative, so being
        // told "you are ignorant of p" ends that very ignorance.
        assert_eq!(dyn_val(&m, "w0", "[I p] I p"), TruthValue::False);
        assert_eq!(dyn_val(&m, "w0", "[I p] ~I p"), TruthValue::True);
        assert_eq!(dyn_val(&m, "w0", "[I p] p"), TruthValue::True);
    }

    #[test]
    fn truthful_chocolate_announcement_is_admissible_and_fully_defined() {
        let m = figures::chocolate(true);
        let content = f("p");
        let defining = defining_set(&m, "w0", &content).unwrap();
        let rendered: Vec<String> = defining.iter().map(|c| c.to_string()).collect();
        assert_eq!(rendered, vec!["p", "~I ~p", "~I (p & ~p)", "~I (~p & p)"],);
        let (updated, w) = announce_ok(&m, "w0", "p");
        assert_eq!(updated.value(&w, "p"), Some(TruthValue::True));
        assert_eq!(updated.world_count(), 3);
        assert_eq!(updated.edge_count(), 3);
        let report = verify_new_world(&updated, &w, &defining, 1).unwrap();
        assert_eq!(report.checked, defining.len());
        assert!(report.drifted.is_empty());
        assert_eq!(dyn_val(&m, "w0", "[p] I p"), TruthValue::False);
        assert_eq!(dyn_val(&m, "w0", "[p] ~I p"), TruthValue::True);
    }

    #[test]
    fn lying_about_chocolate_is_inadmissible() {
        let m = figures::chocolate(false);
        let outcome = announce(
            &m,
            "w0",
            &f("p"),
            &SearchBounds::default(),
            UnknownPolicy::Error,
        )
        .unwrap();
        assert_eq!(outcome, UpdateOutcome::Inconsistent);
        // An inadmissible announcement makes every [p] claim hold.
        assert_eq!(dyn_val(&m, "w0", "[p] I p"), TruthValue::True);
        assert_eq!(dyn_val(&m, "w0", "[p] (q & ~q)"), TruthValue::True);
    }

    #[test]
    fn additive_and_eliminative_updates_disagree_on_the_known_pathology() {
        let m = figures::m1();
        // Additively: announcing p gives the hearer a p-world to see, so
        // ignorance of p is gone and these conditionals are false.
        assert_eq!(dyn_val(&m, "w0", "I p -> [p] I p"), TruthValue::False);
        assert_eq!(
            dyn_val(&m, "w0", "~I (p -> p) -> [p] I (p -> p)"),
            TruthValue::False
        );
        // Eliminatively the first comes out true under both rules:
        // deleting the refuting world leaves the hearer formally ignorant
        // of what was just said.
        for rule in [
            EliminationRule::KeepWhereTrue,
            EliminationRule::DropWhereFalse,
        ] {
            let v = eval_eliminative(&m, "w0", &f("I p -> [p] I p"), rule).unwrap();
            assert_eq!(v, TruthValue::True, "rule {rule:?}");
        }
        // The tautology variant even lets a keep-true announcement of p
        // manufacture ignorance of p -> p out of nothing. Drop-where-false
        // escapes only because the gap world survives and still verifies
        // the tautology.
        let taut = f("~I (p -> p) -> [p] I (p -> p)");
        let v = eval_eliminative(&m, "w0", &taut, EliminationRule::KeepWhereTrue).unwrap();
        assert_eq!(v, TruthValue::True);
        let v = eval_eliminative(&m, "w0", &taut, EliminationRule::DropWhereFalse).unwrap();
        assert_eq!(v, TruthValue::False);
    }

    #[test]
    fn elimination_rules_differ_exactly_on_gap_worlds() {
        let m = figures::m1();
        let (kept_true, removed_true) =
            eliminative_announce(&m, &f("p"), EliminationRule::KeepWhereTrue).unwrap();
        assert_eq!(kept_true.world_count(), 1);
        assert!(removed_true.contains("w1") && removed_true.contains("w2"));
        let (kept_open, removed_open) =
            eliminative_announce(&m, &f("p"), EliminationRule::DropWhereFalse).unwrap();
        assert_eq!(kept_open.world_count(), 2);
        assert!(kept_open.has_world("w2"));
        assert_eq!(removed_open.len(), 1);
    }

    #[test]
    fn repeated_announcements_generate_distinct_world_ids() {
        let m = figures::chocolate(true);
        let (first, w1) = announce_ok(&m, "w0", "p");
        assert_eq!(w1, "w0@1");
        let (second, w2) = announce_ok(&first, "w0", "p");
        assert_eq!(w2, "w0@2");
        assert_eq!(second.world_count(), 4);
        // Nested evaluation reaches the same place.
        assert_eq!(dyn_val(&m, "w0", "[p] [p] ~I p"), TruthValue::True);
    }

    #[test]
    fn completion_raises_gaps_to_make_a_disjunctive_content_true() {
        // A hearer with no opinion on p or q: announcing `p | q` pins
        // neither disjunct, so the completion pass must raise one.
        let mut m = KripkeModel::new("open");
        m.add_world("w0").unwrap();
        m.add_world("w1").unwrap();
        m.set_atom("w0", "p", TruthValue::True).unwrap();
        m.set_atom("w0", "q", TruthValue::True).unwrap();
        m.add_edge("w0", "w1").unwrap();
        let (updated, w) = announce_ok(&m, "w0", "p | q");
        assert!(semantics::sat(&updated, &w, &f("p | q")).unwrap());
        // Smallest repair, first atom in order, raised to true.
        assert_eq!(updated.value(&w, "p"), Some(TruthValue::True));
        assert_eq!(updated.value(&w, "q"), Some(TruthValue::Gap));
    }

    #[test]
    fn dynamic_content_inside_an_announcement_is_rejected() {
        let m = figures::chocolate(true);
        let err = eval_dynamic(
            &m,
            "w0",
            &f("[[p] q] r"),
            &SearchBounds::default(),
            UnknownPolicy::Error,
        )
        .unwrap_err();
        assert!(matches!(err, UpdateError::DynamicContent(_)));
        let err = announce(
            &m,
            "w0",
            &f("[p] q"),
            &SearchBounds::default(),
            UnknownPolicy::Error,
        )
        .unwrap_err();
        assert!(matches!(err, UpdateError::DynamicContent(_)));
    }

    #[test]
    fn unknown_policy_controls_what_an_unsettled_oracle_does() {
        let m = figures::chocolate(true);
        let starved = SearchBounds {
            max_candidates: 0,
            ..SearchBounds::default()
        };
        // With no search budget the admissibility check cannot finish.
        let outcome = announce(&m, "w0", &f("p"), &starved, UnknownPolicy::Error).unwrap();
        assert_eq!(outcome, UpdateOutcome::Unknown);
        let outcome = announce(
            &m,
            "w0",
            &f("p"),
            &starved,
            UnknownPolicy::AssumeInconsistent,
        )
        .unwrap();
        assert_eq!(outcome, UpdateOutcome::Inconsistent);
        let outcome =
            announce(&m, "w0", &f("p"), &starved, UnknownPolicy::AssumeConsistent).unwrap();
        match outcome {
            // Entailment checks are also starved, so every atom gaps out;
            // the completion pass then raises p to make the content true.
            UpdateOutcome::Updated { model, new_world } => {
                assert_eq!(model.value(&new_world, "p"), Some(TruthValue::True));
            }
            other => panic!("expected an update, got {other:?}"),
        }
        let err = eval_dynamic(&m, "w0", &f("[p] q"), &starved, UnknownPolicy::Error).unwrap_err();
        assert_eq!(err, UpdateError::Undecided(f("[p] q")));
    }

    #[test]
    fn announcement_worlds_never_shadow_their_origin() {
        let m = figures::m2();
        let (updated, w) = announce_ok(&m, "w0", "p");
        // w0 keeps its own valuation; only the new world was touched.
        assert_eq!(updated.value("w0", "p"), Some(TruthValue::True));
        assert_eq!(updated.value("w0", "q"), Some(TruthValue::True));
        assert!(!updated.has_edge(&w, "w0"));
    }
}
