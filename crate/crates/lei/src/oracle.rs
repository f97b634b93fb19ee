//! Bounded countermodel search.
//!
//! The update machinery keeps asking two questions about finite sets of
//! static formulas: "is this set satisfiable at a point?" and "does this
//! set force that formula at the point?". Both reduce to searching for a
//! pointed model that makes every formula in one list true and every
//! formula in another list not true. The search enumerates candidate
//! models in a fixed canonical order and reports one of three verdicts:
//! a witness, "no model within the bounds", or "ran out of budget".
//!
//! The candidate space is trimmed in ways that do not lose witnesses
//! within the world bound:
//!
//! - the designated point is always world 0;
//! - self-loops are never enumerated, because evaluation is
//!   reflexive-insensitive and deleting self-loops changes nothing;
//! - point atoms whose value is forced by a constraint (for example the
//!   antecedent of a required `I p` forces `p` true) are pinned before
//!   enumeration, and a contradiction between pins settles the search
//!   without enumerating at all;
//! - when no constraint nests modal operators, one world suffices; when
//!   the deepest constraint has modal depth one, point truth only depends
//!   on the set of successor valuations, so only star-shaped models with
//!   distinct successor valuations are enumerated; deeper constraints get
//!   the general space (sorted non-point valuations, every irreflexive
//!   relation).
//!
//! Candidates carry a global index in enumeration order. With several
//! workers, worker `k` evaluates the indices congruent to `k`, and the
//! hit with the smallest index wins, so the verdict (including the
//! witness) is identical for every worker count. The result is
//! deterministic unless a wall-clock budget is set, which is why
//! [`SearchBounds::time_budget`] defaults to `None`.
//!
//! Every witness found through the fast evaluation path is re-checked
//! with [`crate::semantics::sat`] before it is returned.

pub mod naive;

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::formula::Formula;
use crate::model::{KripkeModel, PointedModel, TruthValue};
use crate::semantics;

const MAX_WORLDS: usize = 8;
const MAX_ATOMS: usize = 8;

const V_FALSE: u8 = 0;
const V_GAP: u8 = 1;
const V_TRUE: u8 = 2;

/// Value order used when enumerating assignments: truth first, then
/// falsity, then the gap. Fixed once; the canonical witness depends on it.
const VALUE_ORDER: [u8; 3] = [V_TRUE, V_FALSE, V_GAP];

/// Resource limits for one search.
#[derive(Debug, Clone)]
pub struct SearchBounds {
    /// Largest model size to consider, point included. At most 8.
    pub max_worlds: usize,
    /// Stop after this many candidates and report [`SearchVerdict::Unknown`].
    pub max_candidates: u64,
    /// Worker threads; the verdict does not depend on this.
    pub workers: usize,
    /// Optional wall-clock budget. Setting it trades determinism for
    /// latency, so it is off by default.
    pub time_budget: Option<Duration>,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            max_worlds: 4,
            max_candidates: 5_000_000,
            workers: 1,
            time_budget: None,
        }
    }
}

/// Outcome of a satisfiability search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchVerdict {
    /// A pointed model meeting every constraint; the first one in
    /// canonical order.
    Sat(PointedModel),
    /// No model with at most [`SearchBounds::max_worlds`] worlds meets the
    /// constraints.
    UnsatWithin,
    /// The candidate or time budget ran out first.
    Unknown,
}

/// Outcome of a consequence query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConsequenceVerdict {
    /// Every bounded model of the premises makes the conclusion true.
    Follows,
    /// A countermodel: premises true, conclusion not true, at the point.
    NotFollows(PointedModel),
    /// Budget ran out.
    Unknown,
}

/// Outcome of a consistency query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConsistencyVerdict {
    /// A pointed model making every premise true.
    Consistent(PointedModel),
    /// No bounded model makes all premises true.
    Inconsistent,
    /// Budget ran out.
    Unknown,
}

/// Errors that make a search impossible rather than unresolved.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    /// Constraints must be static.
    #[error("formula `{0}` contains an announcement; the search handles static formulas only")]
    DynamicFormula(Formula),
    /// Too many distinct atoms for the fixed-width fast path.
    #[error("constraints mention {found} atoms; the search supports at most {max}")]
    TooManyAtoms {
        /// Atoms found in the constraints.
        found: usize,
        /// Hard limit.
        max: usize,
    },
    /// The requested world bound exceeds the fixed-width fast path.
    #[error("max_worlds {requested} exceeds the supported maximum {max}")]
    TooManyWorlds {
        /// Requested bound.
        requested: usize,
        /// Hard limit.
        max: usize,
    },
}

/// A formula compiled to atom indices for the fast evaluation path.
#[derive(Debug, Clone)]
enum Compiled {
    Atom(usize),
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Imp(Box<Compiled>, Box<Compiled>),
    Ign(Box<Compiled>),
}

fn compile(f: &Formula, index: &BTreeMap<String, usize>) -> Result<Compiled, OracleError> {
    match f {
        Formula::Atom(a) => Ok(Compiled::Atom(index[a])),
        Formula::Not(x) => Ok(Compiled::Not(Box::new(compile(x, index)?))),
        Formula::And(a, b) => Ok(Compiled::And(
            Box::new(compile(a, index)?),
            Box::new(compile(b, index)?),
        )),
        Formula::Imp(a, b) => Ok(Compiled::Imp(
            Box::new(compile(a, index)?),
            Box::new(compile(b, index)?),
        )),
        Formula::Ign(x) => Ok(Compiled::Ign(Box::new(compile(x, index)?))),
        Formula::Ann(_, _) => Err(OracleError::DynamicFormula(f.clone())),
    }
}

/// A candidate model in fixed-width arrays: `val[w][a]` is the value of
/// atom `a` at world `w`, `adj[w]` is a successor bitmask.
#[derive(Debug, Clone, Copy)]
struct RawModel {
    n: usize,
    val: [[u8; MAX_ATOMS]; MAX_WORLDS],
    adj: [u8; MAX_WORLDS],
}

impl RawModel {
    fn empty(n: usize) -> Self {
        RawModel {
            n,
            val: [[V_GAP; MAX_ATOMS]; MAX_WORLDS],
            adj: [0; MAX_WORLDS],
        }
    }
}

fn raw_sat(m: &RawModel, w: usize, f: &Compiled) -> bool {
    match f {
        Compiled::Atom(a) => m.val[w][*a] == V_TRUE,
        Compiled::Not(x) => raw_sat_neg(m, w, x),
        Compiled::And(a, b) => raw_sat(m, w, a) && raw_sat(m, w, b),
        Compiled::Imp(a, b) => !raw_sat(m, w, a) || raw_sat(m, w, b),
        Compiled::Ign(x) => {
            if !raw_sat(m, w, x) {
                return false;
            }
            for succ in 0..m.n {
                if succ != w && m.adj[w] & (1 << succ) != 0 && raw_sat(m, succ, x) {
                    return false;
                }
            }
            true
        }
    }
}

fn raw_sat_neg(m: &RawModel, w: usize, f: &Compiled) -> bool {
    match f {
        Compiled::Atom(a) => m.val[w][*a] == V_FALSE,
        Compiled::Not(x) => raw_sat(m, w, x),
        Compiled::And(a, b) => raw_sat_neg(m, w, a) || raw_sat_neg(m, w, b),
        Compiled::Imp(a, b) => raw_sat(m, w, a) && !raw_sat(m, w, b),
        Compiled::Ign(x) => {
            for succ in 0..m.n {
                if succ != w && m.adj[w] & (1 << succ) != 0 && raw_sat(m, succ, x) {
                    return true;
                }
            }
            !raw_sat(m, w, x)
        }
    }
}

const DOM_ALL: u8 = 0b111;

fn dom_bit(v: u8) -> u8 {
    1 << v
}

/// Narrows point-atom domains with values forced by "this must be true".
fn pin_true(f: &Compiled, dom: &mut [u8; MAX_ATOMS]) {
    match f {
        Compiled::Atom(a) => dom[*a] &= dom_bit(V_TRUE),
        Compiled::Not(x) => pin_false(x, dom),
        Compiled::And(a, b) => {
            pin_true(a, dom);
            pin_true(b, dom);
        }
        // A true implication constrains nothing by itself.
        Compiled::Imp(_, _) => {}
        // Ignorance is factive at the point.
        Compiled::Ign(x) => pin_true(x, dom),
    }
}

/// Narrows point-atom domains with values forced by "this must be false".
fn pin_false(f: &Compiled, dom: &mut [u8; MAX_ATOMS]) {
    match f {
        Compiled::Atom(a) => dom[*a] &= dom_bit(V_FALSE),
        Compiled::Not(x) => pin_true(x, dom),
        // A false conjunction or a false ignorance is a disjunctive fact.
        Compiled::And(_, _) | Compiled::Ign(_) => {}
        Compiled::Imp(a, b) => {
            pin_true(a, dom);
            pin_not_true(b, dom);
        }
    }
}

/// Narrows point-atom domains with values forced by "this must not be
/// true" (false or gap).
fn pin_not_true(f: &Compiled, dom: &mut [u8; MAX_ATOMS]) {
    match f {
        Compiled::Atom(a) => dom[*a] &= dom_bit(V_FALSE) | dom_bit(V_GAP),
        // "`~x` is not true" means "`x` is not false"; there is no pin
        // for that, and the remaining shapes are disjunctive.
        Compiled::Not(_) | Compiled::And(_, _) => {}
        // Implication is two-valued, so not-true coincides with false.
        Compiled::Imp(a, b) => {
            pin_true(a, dom);
            pin_not_true(b, dom);
        }
        Compiled::Ign(_) => {}
    }
}

struct Plan {
    atom_names: Vec<String>,
    domains: [u8; MAX_ATOMS],
    depth: usize,
    max_worlds: usize,
    needs_true: Vec<Compiled>,
    needs_not_true: Vec<Compiled>,
}

fn decode_vector(mut v: usize, n_atoms: usize, out: &mut [u8; MAX_ATOMS]) {
    for slot in out.iter_mut().take(n_atoms) {
        *slot = VALUE_ORDER[v % 3];
        v /= 3;
    }
}

/// Advances an ascending sequence over `0..count`; strictly ascending when
/// `strict`. Returns `false` when the sequence was the last one.
fn advance_seq(seq: &mut [usize], count: usize, strict: bool) -> bool {
    let m = seq.len();
    for i in (0..m).rev() {
        let limit = if strict { count - (m - 1 - i) } else { count };
        if seq[i] + 1 < limit {
            seq[i] += 1;
            for j in i + 1..m {
                seq[j] = if strict { seq[j - 1] + 1 } else { seq[i] };
            }
            return true;
        }
    }
    false
}

fn first_seq(m: usize, count: usize, strict: bool) -> Option<Vec<usize>> {
    if strict {
        if m > count {
            return None;
        }
        Some((0..m).collect())
    } else {
        if m > 0 && count == 0 {
            return None;
        }
        Some(vec![0; m])
    }
}

/// Calls `visit` for every candidate in canonical order, threading the
/// global candidate index.
fn enumerate_candidates(
    plan: &Plan,
    visit: &mut dyn FnMut(u64, &RawModel) -> ControlFlow<()>,
) -> u64 {
    let n_atoms = plan.atom_names.len();
    let vec_count = 3usize.pow(n_atoms as u32);
    let allowed: Vec<Vec<u8>> = (0..n_atoms)
        .map(|a| {
            VALUE_ORDER
                .iter()
                .copied()
                .filter(|v| plan.domains[a] & dom_bit(*v) != 0)
                .collect()
        })
        .collect();

    let mut idx: u64 = 0;
    let max_n = if plan.depth == 0 { 1 } else { plan.max_worlds };

    'sizes: for n in 1..=max_n {
        // Point valuation odometer over the pinned domains.
        let mut point_choice = vec![0usize; n_atoms];
        'points: loop {
            let mut base = RawModel::empty(n);
            for a in 0..n_atoms {
                base.val[0][a] = allowed[a][point_choice[a]];
            }

            let emitted = match plan.depth {
                0 => {
                    let flow = visit(idx, &base);
                    idx += 1;
                    flow
                }
                1 => emit_stars(plan, &mut base, vec_count, n, &mut idx, visit),
                _ => emit_general(plan, &mut base, vec_count, n, &mut idx, visit),
            };
            if emitted.is_break() {
                break 'sizes;
            }

            // Advance the point odometer.
            let mut pos = n_atoms;
            loop {
                if pos == 0 {
                    break 'points;
                }
                pos -= 1;
                if point_choice[pos] + 1 < allowed[pos].len() {
                    point_choice[pos] += 1;
                    for later in point_choice.iter_mut().skip(pos + 1) {
                        *later = 0;
                    }
                    break;
                }
            }
        }
    }
    idx
}

/// Star models: world 0 points at every other world, nothing else; the
/// other worlds carry distinct valuations in ascending order.
fn emit_stars(
    plan: &Plan,
    base: &mut RawModel,
    vec_count: usize,
    n: usize,
    idx: &mut u64,
    visit: &mut dyn FnMut(u64, &RawModel) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let n_atoms = plan.atom_names.len();
    let Some(mut seq) = first_seq(n - 1, vec_count, true) else {
        return ControlFlow::Continue(());
    };
    loop {
        for (slot, vector) in seq.iter().enumerate() {
            decode_vector(*vector, n_atoms, &mut base.val[slot + 1]);
        }
        base.adj[0] = if n == 1 { 0 } else { ((1u16 << n) - 2) as u8 };
        for w in 1..n {
            base.adj[w] = 0;
        }
        let flow = visit(*idx, base);
        *idx += 1;
        flow?;
        if !advance_seq(&mut seq, vec_count, true) {
            return ControlFlow::Continue(());
        }
    }
}

/// The general space: non-point valuations as a sorted multiset, then
/// every irreflexive relation over the worlds.
fn emit_general(
    plan: &Plan,
    base: &mut RawModel,
    vec_count: usize,
    n: usize,
    idx: &mut u64,
    visit: &mut dyn FnMut(u64, &RawModel) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let n_atoms = plan.atom_names.len();
    let Some(mut seq) = first_seq(n - 1, vec_count, false) else {
        return ControlFlow::Continue(());
    };
    let pair_bits = n * (n - 1);
    loop {
        for (slot, vector) in seq.iter().enumerate() {
            decode_vector(*vector, n_atoms, &mut base.val[slot + 1]);
        }
        for mask in 0u64..(1u64 << pair_bits) {
            let mut bit = 0;
            for i in 0..n {
                base.adj[i] = 0;
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    if mask & (1 << bit) != 0 {
                        base.adj[i] |= 1 << j;
                    }
                    bit += 1;
                }
            }
            let flow = visit(*idx, base);
            *idx += 1;
            flow?;
        }
        if !advance_seq(&mut seq, vec_count, false) {
            return ControlFlow::Continue(());
        }
    }
}

fn materialize(raw: &RawModel, atom_names: &[String]) -> PointedModel {
    let mut m = KripkeModel::new("witness");
    for w in 0..raw.n {
        m.add_world(format!("w{w}")).expect("generated id");
    }
    for w in 0..raw.n {
        for (a, name) in atom_names.iter().enumerate() {
            let value = match raw.val[w][a] {
                V_TRUE => TruthValue::True,
                V_FALSE => TruthValue::False,
                _ => TruthValue::Gap,
            };
            if value != TruthValue::Gap {
                m.set_atom(&format!("w{w}"), name.clone(), value)
                    .expect("valid atom");
            }
        }
    }
    for i in 0..raw.n {
        for j in 0..raw.n {
            if raw.adj[i] & (1 << j) != 0 {
                m.add_edge(&format!("w{i}"), &format!("w{j}"))
                    .expect("edge");
            }
        }
    }
    PointedModel::new(m, "w0").expect("point exists")
}

/// Searches for a pointed model making every formula in `needs_true` true
/// and every formula in `needs_not_true` not true at the point.
pub fn satisfiable(
    needs_true: &[Formula],
    needs_not_true: &[Formula],
    bounds: &SearchBounds,
) -> Result<SearchVerdict, OracleError> {
    if bounds.max_worlds > MAX_WORLDS {
        return Err(OracleError::TooManyWorlds {
            requested: bounds.max_worlds,
            max: MAX_WORLDS,
        });
    }

    let mut atoms: BTreeSet<String> = BTreeSet::new();
    for f in needs_true.iter().chain(needs_not_true) {
        atoms.extend(f.atoms());
    }
    if atoms.len() > MAX_ATOMS {
        return Err(OracleError::TooManyAtoms {
            found: atoms.len(),
            max: MAX_ATOMS,
        });
    }
    let atom_names: Vec<String> = atoms.into_iter().collect();
    let index: BTreeMap<String, usize> = atom_names
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), i))
        .collect();

    let needs_true_c: Vec<Compiled> = needs_true
        .iter()
        .map(|f| compile(f, &index))
        .collect::<Result<_, _>>()?;
    let needs_not_true_c: Vec<Compiled> = needs_not_true
        .iter()
        .map(|f| compile(f, &index))
        .collect::<Result<_, _>>()?;

    let mut domains = [DOM_ALL; MAX_ATOMS];
    for f in &needs_true_c {
        pin_true(f, &mut domains);
    }
    for f in &needs_not_true_c {
        pin_not_true(f, &mut domains);
    }
    if domains[..atom_names.len()].contains(&0) {
        return Ok(SearchVerdict::UnsatWithin);
    }

    let depth = needs_true
        .iter()
        .chain(needs_not_true)
        .map(Formula::modal_depth)
        .max()
        .unwrap_or(0);

    let plan = Plan {
        atom_names,
        domains,
        depth,
        max_worlds: bounds.max_worlds.max(1),
        needs_true: needs_true_c,
        needs_not_true: needs_not_true_c,
    };

    let workers = bounds.workers.max(1);
    let deadline = bounds.time_budget.map(|d| Instant::now() + d);

    let cap_hit = AtomicBool::new(false);
    let timed_out = AtomicBool::new(false);
    let best_idx = AtomicU64::new(u64::MAX);

    let run_worker = |me: u64| -> Option<(u64, RawModel)> {
        let mut hit: Option<(u64, RawModel)> = None;
        enumerate_candidates(&plan, &mut |idx, raw| {
            if idx >= bounds.max_candidates {
                cap_hit.store(true, Ordering::Relaxed);
                return ControlFlow::Break(());
            }
            if idx > best_idx.load(Ordering::Relaxed) {
                return ControlFlow::Break(());
            }
            if idx % workers as u64 != me {
                return ControlFlow::Continue(());
            }
            if let Some(deadline) = deadline {
                if idx % 4096 == me && Instant::now() > deadline {
                    timed_out.store(true, Ordering::Relaxed);
                    return ControlFlow::Break(());
                }
            }
            let ok = plan.needs_true.iter().all(|f| raw_sat(raw, 0, f))
                && plan.needs_not_true.iter().all(|f| !raw_sat(raw, 0, f));
            if ok {
                best_idx.fetch_min(idx, Ordering::Relaxed);
                hit = Some((idx, *raw));
                return ControlFlow::Break(());
            }
            ControlFlow::Continue(())
        });
        hit
    };

    let mut hits: Vec<(u64, RawModel)> = Vec::new();
    if workers == 1 {
        hits.extend(run_worker(0));
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers as u64)
                .map(|me| scope.spawn(move || run_worker(me)))
                .collect();
            for h in handles {
                if let Some(hit) = h.join().expect("search worker panicked") {
                    hits.push(hit);
                }
            }
        });
    }

    if let Some((_, raw)) = hits.iter().min_by_key(|(idx, _)| *idx) {
        let witness = materialize(raw, &plan.atom_names);
        for f in needs_true {
            assert!(
                semantics::sat(&witness.model, &witness.point, f).expect("static formula"),
                "fast path and reference semantics disagree on `{f}`"
            );
        }
        for f in needs_not_true {
            assert!(
                !semantics::sat(&witness.model, &witness.point, f).expect("static formula"),
                "fast path and reference semantics disagree on `~({f})`"
            );
        }
        return Ok(SearchVerdict::Sat(witness));
    }
    if cap_hit.load(Ordering::Relaxed) || timed_out.load(Ordering::Relaxed) {
        return Ok(SearchVerdict::Unknown);
    }
    Ok(SearchVerdict::UnsatWithin)
}

/// Does `conclusion` hold at the point of every bounded model of
/// `premises`?
pub fn consequence(
    premises: &[Formula],
    conclusion: &Formula,
    bounds: &SearchBounds,
) -> Result<ConsequenceVerdict, OracleError> {
    let verdict = satisfiable(premises, std::slice::from_ref(conclusion), bounds)?;
    Ok(match verdict {
        SearchVerdict::Sat(witness) => ConsequenceVerdict::NotFollows(witness),
        SearchVerdict::UnsatWithin => ConsequenceVerdict::Follows,
        SearchVerdict::Unknown => ConsequenceVerdict::Unknown,
    })
}

/// Is there a bounded pointed model making every premise true?
pub fn consistent(
    premises: &[Formula],
    bounds: &SearchBounds,
) -> Result<ConsistencyVerdict, OracleError> {
    let verdict = satisfiable(premises, &[], bounds)?;
    Ok(match verdict {
        SearchVerdict::Sat(witness) => ConsistencyVerdict::Consistent(witness),
        SearchVerdict::UnsatWithin => ConsistencyVerdict::Inconsistent,
        SearchVerdict::Unknown => ConsistencyVerdict::Unknown,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn f(src: &str) -> Formula {
        parse(src).unwrap()
    }

    fn fs(srcs: &[&str]) -> Vec<Formula> {
        srcs.iter().map(|s| f(s)).collect()
    }

    #[test]
    fn finds_a_trivial_witness() {
        let verdict = satisfiable(&fs(&["p"]), &[], &SearchBounds::default()).unwrap();
        match verdict {
            SearchVerdict::Sat(w) => {
                assert_eq!(w.model.world_count(), 1);
                assert!(semantics::sat(&w.model, &w.point, &f("p")).unwrap());
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn pin_conflicts_settle_without_enumeration() {
        // Required ignorance of p pins p true; requiring p not true
        // empties the domain.
        let verdict = satisfiable(
            &fs(&["I p"]),
            &fs(&["p"]),
            &SearchBounds {
                max_candidates: 0,
                ..SearchBounds::default()
            },
        )
        .unwrap();
        assert_eq!(verdict, SearchVerdict::UnsatWithin);
    }

    #[test]
    fn plain_contradictions_are_unsat() {
        let verdict = satisfiable(&fs(&["p", "~p"]), &[], &SearchBounds::default()).unwrap();
        assert_eq!(verdict, SearchVerdict::UnsatWithin);
    }

    #[test]
    fn excluded_middle_is_satisfiable_but_not_forced() {
        let bounds = SearchBounds::default();
        assert!(matches!(
            satisfiable(&fs(&["p | ~p"]), &[], &bounds).unwrap(),
            SearchVerdict::Sat(_)
        ));
        // A gap at p refutes p | ~p, so it does not follow from nothing.
        match consequence(&[], &f("p | ~p"), &bounds).unwrap() {
            ConsequenceVerdict::NotFollows(w) => {
                assert!(!semantics::sat(&w.model, &w.point, &f("p | ~p")).unwrap());
            }
            other => panic!("expected countermodel, got {other:?}"),
        }
    }

    #[test]
    fn modus_ponens_is_a_consequence() {
        let verdict =
            consequence(&fs(&["p -> q", "p"]), &f("q"), &SearchBounds::default()).unwrap();
        assert_eq!(verdict, ConsequenceVerdict::Follows);
    }

    #[test]
    fn disjunctive_syllogism_is_a_consequence() {
        let verdict =
            consequence(&fs(&["p | q", "~q"]), &f("p"), &SearchBounds::default()).unwrap();
        assert_eq!(verdict, ConsequenceVerdict::Follows);
    }

    #[test]
    fn unforced_atoms_get_countermodels() {
        let verdict = consequence(&fs(&["p"]), &f("q"), &SearchBounds::default()).unwrap();
        assert!(matches!(verdict, ConsequenceVerdict::NotFollows(_)));
    }

    #[test]
    fn non_ignorance_needs_a_second_world() {
        let verdict = satisfiable(&fs(&["p", "~I p"]), &[], &SearchBounds::default()).unwrap();
        match verdict {
            SearchVerdict::Sat(w) => {
                assert_eq!(w.model.world_count(), 2);
                assert!(semantics::sat(&w.model, &w.point, &f("~I p")).unwrap());
            }
            other => panic!("expected witness, got {other:?}"),
        }
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let verdict = satisfiable(
            &fs(&["~I p", "~I q", "~I (p & q)"]),
            &fs(&["p & q"]),
            &SearchBounds {
                max_candidates: 3,
                ..SearchBounds::default()
            },
        )
        .unwrap();
        assert_eq!(verdict, SearchVerdict::Unknown);
    }

    #[test]
    fn witnesses_are_deterministic_across_worker_counts() {
        let queries: Vec<(Vec<Formula>, Vec<Formula>)> = vec![
            (fs(&["p", "~I p"]), vec![]),
            (fs(&["~I (p & q)", "~p | q"]), fs(&["q"])),
            (fs(&["I (p | q)"]), fs(&["I p"])),
            (fs(&["~I ~I p"]), vec![]),
        ];
        for (needs_true, needs_not_true) in queries {
            let mut verdicts = Vec::new();
            for workers in [1, 2, 3, 5] {
                let bounds = SearchBounds {
                    workers,
                    ..SearchBounds::default()
                };
                verdicts.push(satisfiable(&needs_true, &needs_not_true, &bounds).unwrap());
            }
            for v in &verdicts[1..] {
                assert_eq!(v, &verdicts[0]);
            }
        }
    }

    #[test]
    fn agrees_with_the_naive_search_on_small_queries() {
        let cases: Vec<(Vec<Formula>, Vec<Formula>)> = vec![
            (fs(&["p"]), fs(&["q"])),
            (fs(&["p", "~p"]), vec![]),
            (fs(&["I p"]), fs(&["p"])),
            (fs(&["p", "~I p"]), vec![]),
            (fs(&["p -> q", "p"]), fs(&["q"])),
            (fs(&["I I p"]), vec![]),
            (fs(&["~I ~I p"]), fs(&["p"])),
            (fs(&["p | ~p"]), fs(&["p", "~p"])),
        ];
        let bounds = SearchBounds {
            max_worlds: 2,
            ..SearchBounds::default()
        };
        for (needs_true, needs_not_true) in cases {
            let fast = satisfiable(&needs_true, &needs_not_true, &bounds).unwrap();
            let slow =
                naive::naive_satisfiable(&needs_true, &needs_not_true, 2, 10_000_000).unwrap();
            let fast_sat = matches!(fast, SearchVerdict::Sat(_));
            let slow_sat = matches!(slow, SearchVerdict::Sat(_));
            assert_eq!(
                fast_sat, slow_sat,
                "disagreement on {needs_true:?} / {needs_not_true:?}"
            );
        }
    }

    #[test]
    fn dynamic_constraints_are_errors() {
        let err = satisfiable(&fs(&["[p] q"]), &[], &SearchBounds::default()).unwrap_err();
        assert!(matches!(err, OracleError::DynamicFormula(_)));
    }
}
