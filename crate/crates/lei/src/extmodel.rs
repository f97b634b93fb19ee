//! Extended models: a Kripke core plus one labelled transition relation
//! per announcement.
//!
//! An announcement can be treated dynamically, by rebuilding the model
//! (see [`crate::update`]), or statically, by recording where each
//! announcement leads as extra structure. An [`ExtendedModel`] takes the
//! second view: alongside the core accessibility relation it stores, for
//! each content formula, a set of `(from, to)` transition pairs, and
//! [`sat_plus`] reads `[f] g` as "g holds at every transition target"
//! instead of re-running the update.
//!
//! The two views only agree when the transitions are wired the way the
//! update machinery would wire them. [`induce_extended`] builds such a
//! model from a core by materialising every admissible announcement
//! inside one growing core, and [`check_extension_properties`] verifies
//! the structural laws that separate honest extensions from arbitrary
//! ones: transitions are functional and only leave worlds that admit the
//! announcement, atom values survive a transition, the target keeps every
//! previous alternative and adds one realising the announced content, and
//! no target smuggles in information that was inconceivable before.
//!
//! One wrinkle is worth spelling out. When a world `w` can see itself,
//! the post-announcement state of `w` must also see *itself*, not the
//! pre-announcement `w`: ignorance quantifies over alternatives other
//! than the current world, so pointing the copy back at the original
//! would make the original count as "another world" and change every
//! ignorance fact. [`induce_extended`] therefore redirects self-loops to
//! the copy. The structural checker reads the inheritance laws literally,
//! so hand-made extensions of self-looping cores can fail them even when
//! the transition targets are semantically right.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;

use crate::formula::{parse, render, Formula};
use crate::model::{load_model, save_model, KripkeModel, ModelError};
use crate::oracle::SearchBounds;
use crate::semantics::{self, SemanticsError};
use crate::update::{
    announce, defining_set, verify_new_world, UnknownPolicy, UpdateError, UpdateOutcome,
};

/// A Kripke core plus, for each announcement content, the set of
/// transition pairs `(from, to)` that the announcement induces.
///
/// A missing entry and an empty set mean the same thing: the announcement
/// leads nowhere, and `[f] g` is vacuously supported. Contents are kept
/// as parsed formulas, so `p | q` and `~(~p & ~q)` name the same
/// relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedModel {
    core: KripkeModel,
    transitions: BTreeMap<Formula, BTreeSet<(String, String)>>,
}

impl ExtendedModel {
    /// Wraps a core with no transitions.
    pub fn new(core: KripkeModel) -> Self {
        ExtendedModel {
            core,
            transitions: BTreeMap::new(),
        }
    }

    /// The underlying Kripke model.
    pub fn core(&self) -> &KripkeModel {
        &self.core
    }

    /// Adds a transition for `content` from one existing world to
    /// another. The content is kept verbatim; whether it is a formula an
    /// announcement could actually have (announcement-free, admissible at
    /// `from`) is the property checker's business, not the container's.
    pub fn add_transition(
        &mut self,
        content: Formula,
        from: &str,
        to: &str,
    ) -> Result<(), ModelError> {
        for w in [from, to] {
            if !self.core.has_world(w) {
                return Err(ModelError::UnknownWorld(w.to_string()));
            }
        }
        self.transitions
            .entry(content)
            .or_default()
            .insert((from.to_string(), to.to_string()));
        Ok(())
    }

    /// The contents that index a (possibly empty) transition relation.
    pub fn transition_contents(&self) -> impl Iterator<Item = &Formula> {
        self.transitions.keys()
    }

    /// All transition pairs for `content`, in lexicographic order.
    pub fn transitions(&self, content: &Formula) -> impl Iterator<Item = (&str, &str)> {
        self.transitions
            .get(content)
            .into_iter()
            .flat_map(|pairs| pairs.iter().map(|(f, t)| (f.as_str(), t.as_str())))
    }

    /// Total number of transition pairs across all contents.
    pub fn transition_count(&self) -> usize {
        self.transitions.values().map(BTreeSet::len).sum()
    }

    /// Transition targets of `content` from one world.
    fn targets<'a>(&'a self, content: &Formula, from: &'a str) -> impl Iterator<Item = &'a str> {
        self.transitions(content)
            .filter(move |(f, _)| *f == from)
            .map(|(_, t)| t)
    }
}

/// The support relation over an extended model.
///
/// Static connectives behave exactly as in [`semantics::sat`] on the
/// core. `[f] g` is supported when `g` is supported at every transition
/// target of `f`, and rejected when it fails at some target; with no
/// targets it is vacuously supported, matching how an inadmissible
/// announcement makes `[f] g` true under the dynamic reading.
pub fn sat_plus(em: &ExtendedModel, world: &str, f: &Formula) -> Result<bool, SemanticsError> {
    if !em.core.has_world(world) {
        return Err(SemanticsError::UnknownWorld(world.to_string()));
    }
    sat_plus_inner(em, world, f)
}

/// The rejection relation over an extended model: `~f` is supported at
/// `world`. Announcements are two-valued, so `[f] g` is rejected exactly
/// when it is not supported.
pub fn sat_plus_neg(em: &ExtendedModel, world: &str, f: &Formula) -> Result<bool, SemanticsError> {
    if !em.core.has_world(world) {
        return Err(SemanticsError::UnknownWorld(world.to_string()));
    }
    sat_plus_neg_inner(em, world, f)
}

fn sat_plus_inner(em: &ExtendedModel, world: &str, f: &Formula) -> Result<bool, SemanticsError> {
    let core = &em.core;
    match f {
        Formula::Atom(a) => Ok(core.value(world, a).expect("world checked").is_true()),
        Formula::Not(x) => sat_plus_neg_inner(em, world, x),
        Formula::And(a, b) => Ok(sat_plus_inner(em, world, a)? && sat_plus_inner(em, world, b)?),
        Formula::Imp(a, b) => Ok(!sat_plus_inner(em, world, a)? || sat_plus_inner(em, world, b)?),
        Formula::Ign(x) => {
            if !sat_plus_inner(em, world, x)? {
                return Ok(false);
            }
            for succ in core.successors(world) {
                if succ == world {
                    continue;
                }
                if sat_plus_inner(em, succ, x)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Ann(content, body) => {
            for to in em.targets(content, world) {
                if !sat_plus_inner(em, to, body)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

fn sat_plus_neg_inner(
    em: &ExtendedModel,
    world: &str,
    f: &Formula,
) -> Result<bool, SemanticsError> {
    let core = &em.core;
    match f {
        Formula::Atom(a) => Ok(core.value(world, a).expect("world checked").is_false()),
        Formula::Not(x) => sat_plus_inner(em, world, x),
        Formula::And(a, b) => {
            Ok(sat_plus_neg_inner(em, world, a)? || sat_plus_neg_inner(em, world, b)?)
        }
        Formula::Imp(a, b) => Ok(sat_plus_inner(em, world, a)? && !sat_plus_inner(em, world, b)?),
        Formula::Ign(x) => {
            for succ in core.successors(world) {
                if succ == world {
                    continue;
                }
                if sat_plus_inner(em, succ, x)? {
                    return Ok(true);
                }
            }
            Ok(!sat_plus_inner(em, world, x)?)
        }
        Formula::Ann(content, body) => {
            for to in em.targets(content, world) {
                if !sat_plus_inner(em, to, body)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Serialises an extended model: the core in the model text format,
/// followed by one `trans "FORMULA" FROM TO` line per transition pair.
/// Output is canonical and `load_extended` inverts it.
pub fn save_extended(em: &ExtendedModel) -> String {
    let mut out = save_model(&em.core);
    for (content, pairs) in &em.transitions {
        for (from, to) in pairs {
            out.push_str(&format!("trans \"{}\" {from} {to}\n", render(content)));
        }
    }
    out
}

/// Parses the extended text format: every `trans` line adds a transition,
/// everything else is the core model format.
pub fn load_extended(src: &str) -> Result<ExtendedModel, ModelError> {
    let mut core_src = String::new();
    let mut trans_lines: Vec<(usize, String)> = Vec::new();
    for (idx, raw) in src.lines().enumerate() {
        let body = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        if body.split_whitespace().next() == Some("trans") {
            trans_lines.push((idx + 1, body.trim().to_string()));
            // Keep a blank placeholder so core errors report true lines.
            core_src.push('\n');
        } else {
            core_src.push_str(raw);
            core_src.push('\n');
        }
    }

    let core = load_model(&core_src)?;
    let mut em = ExtendedModel::new(core);
    for (line, text) in trans_lines {
        let err = |message: String| ModelError::Parse { line, message };
        let rest = text["trans".len()..].trim_start();
        let rest = rest
            .strip_prefix('"')
            .ok_or_else(|| err("`trans` needs a quoted formula".to_string()))?;
        let close = rest
            .find('"')
            .ok_or_else(|| err("unterminated formula quote".to_string()))?;
        let content =
            parse(&rest[..close]).map_err(|e| err(format!("bad transition formula: {e}")))?;
        let mut words = rest[close + 1..].split_whitespace();
        let from = words
            .next()
            .ok_or_else(|| err("`trans` needs a source world".to_string()))?;
        let to = words
            .next()
            .ok_or_else(|| err("`trans` needs a target world".to_string()))?;
        if words.next().is_some() {
            return Err(err("trailing input after transition".to_string()));
        }
        em.add_transition(content, from, to)
            .map_err(|e| err(e.to_string()))?;
    }
    Ok(em)
}

/// An induced extended model plus the announcements the bounded oracle
/// could not settle (those get no transition and no verdict).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedModel {
    /// The grown model: original core, one copy and one content-realising
    /// world per admissible announcement, and the transition pairs.
    pub model: ExtendedModel,
    /// `(world, content)` pairs whose admissibility stayed unknown.
    pub undecided: Vec<(String, Formula)>,
}

/// Picks a world id of the form `base@n` that the core does not use yet.
fn fresh_id(core: &KripkeModel, base: &str) -> String {
    let mut n = 1;
    loop {
        let id = format!("{base}@{n}");
        if !core.has_world(&id) {
            return id;
        }
        n += 1;
    }
}

/// Builds the extended model a run of announcements would induce.
///
/// For every content and every listed world, the announcement is made
/// against the original core. An admissible one contributes two fresh
/// worlds: a copy of the announcement world (the transition target) and a
/// realising world carrying the update's new-world valuation. The copy
/// sees everything the original saw plus the realising world; the
/// realising world sees everything the original saw. In both successor
/// lists a self-loop of the original is redirected to the copy, because
/// after the announcement "the current world" is the copy. Inadmissible
/// announcements contribute nothing; unsettled ones are reported in
/// [`InducedModel::undecided`].
pub fn induce_extended(
    core: &KripkeModel,
    contents: &[Formula],
    points: &[String],
    bounds: &SearchBounds,
) -> Result<InducedModel, UpdateError> {
    let mut em = ExtendedModel::new(core.clone());
    let mut undecided = Vec::new();
    let mut seen: BTreeSet<(&Formula, &String)> = BTreeSet::new();

    for content in contents {
        for point in points {
            if !seen.insert((content, point)) {
                continue;
            }
            match announce(core, point, content, bounds, UnknownPolicy::Error)? {
                UpdateOutcome::Inconsistent => {}
                UpdateOutcome::Unknown => undecided.push((point.clone(), content.clone())),
                UpdateOutcome::Updated { model, new_world } => {
                    let star_atoms = model
                        .world_atoms(&new_world)
                        .expect("announce adds the world it names")
                        .clone();
                    let point_atoms = core
                        .world_atoms(point)
                        .expect("announce checked the world")
                        .clone();

                    let copy = fresh_id(&em.core, point);
                    em.core.add_world(&copy).expect("fresh id");
                    for (atom, value) in &point_atoms {
                        em.core.set_atom(&copy, atom, *value).expect("world added");
                    }
                    let star = fresh_id(&em.core, point);
                    em.core.add_world(&star).expect("fresh id");
                    for (atom, value) in &star_atoms {
                        em.core.set_atom(&star, atom, *value).expect("world added");
                    }

                    let succ: Vec<String> = core.successors(point).map(str::to_string).collect();
                    for u in &succ {
                        let u = if u == point {
                            copy.as_str()
                        } else {
                            u.as_str()
                        };
                        em.core.add_edge(&copy, u).expect("worlds exist");
                        em.core.add_edge(&star, u).expect("worlds exist");
                    }
                    em.core.add_edge(&copy, &star).expect("worlds exist");

                    em.add_transition(content.clone(), point, &copy)
                        .expect("worlds exist");
                }
            }
        }
    }

    Ok(InducedModel {
        model: em,
        undecided,
    })
}

/// Verdict on one structural property of an extended model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PropertyVerdict {
    /// Every transition satisfies the property.
    Pass,
    /// A transition violates it; the message names the first offender.
    Fail(String),
    /// The bounded oracle could not settle an announcement the check
    /// depends on.
    Unknown(String),
}

impl PropertyVerdict {
    /// True only for [`PropertyVerdict::Pass`].
    pub fn passed(&self) -> bool {
        matches!(self, PropertyVerdict::Pass)
    }
}

impl fmt::Display for PropertyVerdict {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyVerdict::Pass => write!(out, "pass"),
            PropertyVerdict::Fail(msg) => write!(out, "FAIL: {msg}"),
            PropertyVerdict::Unknown(msg) => write!(out, "unknown: {msg}"),
        }
    }
}

/// Results of [`check_extension_properties`], one verdict per law.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionReport {
    /// Each world has at most one transition target per content, and
    /// transitions only leave worlds where the announcement is
    /// admissible.
    pub functionality: PropertyVerdict,
    /// True atoms stay true across every transition, and conversely.
    pub atom_invariance_pos: PropertyVerdict,
    /// False atoms stay false across every transition, and conversely.
    pub atom_invariance_neg: PropertyVerdict,
    /// The target keeps every alternative of the source and adds one
    /// realising the announcement (right valuation, content supported,
    /// itself seeing everything the source saw).
    pub successor_structure: PropertyVerdict,
    /// Every alternative of the target was already conceivable: its
    /// bounded theory is contained in the realising world's or in some
    /// previous alternative's.
    pub no_new_information: PropertyVerdict,
    /// Defining formulas that did not survive replay at the realising
    /// world, as `(source, content, formula)`. Drift is expected for
    /// disjunctions settled by an atom the announcement does not entail;
    /// it is reported, never counted as a failure.
    pub drift: Vec<(String, Formula, Formula)>,
}

impl ExtensionReport {
    /// True when all five properties pass (drift does not count).
    pub fn all_pass(&self) -> bool {
        self.functionality.passed()
            && self.atom_invariance_pos.passed()
            && self.atom_invariance_neg.passed()
            && self.successor_structure.passed()
            && self.no_new_information.passed()
    }

    /// The verdicts with their names, for report printing.
    pub fn named(&self) -> [(&'static str, &PropertyVerdict); 5] {
        [
            ("functionality", &self.functionality),
            ("atom invariance (+)", &self.atom_invariance_pos),
            ("atom invariance (-)", &self.atom_invariance_neg),
            ("successor structure", &self.successor_structure),
            ("no new information", &self.no_new_information),
        ]
    }
}

/// Collects the first failure and the first unknown for one property.
struct Slot {
    first_fail: Option<String>,
    first_unknown: Option<String>,
}

impl Slot {
    fn new() -> Self {
        Slot {
            first_fail: None,
            first_unknown: None,
        }
    }

    fn fail(&mut self, msg: String) {
        self.first_fail.get_or_insert(msg);
    }

    fn unknown(&mut self, msg: String) {
        self.first_unknown.get_or_insert(msg);
    }

    fn verdict(self) -> PropertyVerdict {
        match (self.first_fail, self.first_unknown) {
            (Some(msg), _) => PropertyVerdict::Fail(msg),
            (None, Some(msg)) => PropertyVerdict::Unknown(msg),
            (None, None) => PropertyVerdict::Pass,
        }
    }
}

/// Checks the structural laws an honest extension satisfies.
///
/// Every transition pair is replayed: the announcement is re-run at the
/// source against the current core, and the outcome is compared with the
/// recorded structure. `depth` bounds two searches: defining formulas
/// deeper than it are skipped during drift replay, and the
/// no-new-information containment compares theories sliced to that many
/// ignorance layers.
///
/// Existence is never demanded: a world with no transition for an
/// admissible announcement passes every check, because a bounded checker
/// cannot tell a deliberately partial extension from a wrong one. What it
/// can tell is when recorded structure lies, and that is what fails.
pub fn check_extension_properties(
    em: &ExtendedModel,
    bounds: &SearchBounds,
    depth: usize,
) -> Result<ExtensionReport, UpdateError> {
    let core = &em.core;
    let mut functionality = Slot::new();
    let mut inv_pos = Slot::new();
    let mut inv_neg = Slot::new();
    let mut successor = Slot::new();
    let mut no_new = Slot::new();
    let mut drift = Vec::new();

    let mut sig = core.atoms();
    for content in em.transitions.keys() {
        sig.extend(content.atoms());
    }
    let family = semantics::theory_slice(&sig, depth);
    let mut profiles: BTreeMap<String, Vec<bool>> = BTreeMap::new();
    let mut profile = |world: &str| -> Result<Vec<bool>, UpdateError> {
        if let Some(p) = profiles.get(world) {
            return Ok(p.clone());
        }
        let mut p = Vec::with_capacity(family.len());
        for f in &family {
            p.push(semantics::sat(core, world, f)?);
        }
        profiles.insert(world.to_string(), p.clone());
        Ok(p)
    };
    let contained = |a: &[bool], b: &[bool]| a.iter().zip(b).all(|(x, y)| *y || !*x);

    for (content, pairs) in &em.transitions {
        let shown = render(content);

        let mut by_from: BTreeMap<&String, usize> = BTreeMap::new();
        for (from, _) in pairs {
            *by_from.entry(from).or_insert(0) += 1;
        }
        for (from, count) in by_from {
            if count > 1 {
                functionality.fail(format!(
                    "announcing `{shown}` at {from} has {count} targets"
                ));
            }
        }

        for (from, to) in pairs {
            for atom in &sig {
                let before = core.value(from, atom).expect("transition worlds exist");
                let after = core.value(to, atom).expect("transition worlds exist");
                if before.is_true() != after.is_true() {
                    inv_pos.fail(format!(
                        "`{atom}` changes truth from {from} to {to} under `{shown}`"
                    ));
                }
                if before.is_false() != after.is_false() {
                    inv_neg.fail(format!(
                        "`{atom}` changes falsity from {from} to {to} under `{shown}`"
                    ));
                }
            }

            let outcome = announce(core, from, content, bounds, UnknownPolicy::Error)?;
            let (upd, new_world) = match outcome {
                UpdateOutcome::Inconsistent => {
                    functionality.fail(format!(
                        "`{shown}` is inadmissible at {from} yet a transition leaves it"
                    ));
                    continue;
                }
                UpdateOutcome::Unknown => {
                    let msg = format!("admissibility of `{shown}` at {from} is unsettled");
                    functionality.unknown(msg.clone());
                    successor.unknown(msg.clone());
                    no_new.unknown(msg);
                    continue;
                }
                UpdateOutcome::Updated { model, new_world } => (model, new_world),
            };

            for w2 in core.successors(from) {
                if !core.has_edge(to, w2) {
                    successor.fail(format!("{to} drops the alternative {w2} that {from} had"));
                }
            }

            let want = upd.world_atoms(&new_world).expect("announce adds it");
            let mut star: Option<&str> = None;
            for cand in core.successors(to) {
                if core.world_atoms(cand) != Some(want) {
                    continue;
                }
                if !semantics::sat(core, cand, content)? {
                    continue;
                }
                if core.successors(from).any(|w2| !core.has_edge(cand, w2)) {
                    continue;
                }
                star = Some(cand);
                break;
            }

            match star {
                None => successor.fail(format!(
                    "no alternative of {to} realises announcing `{shown}` at {from}"
                )),
                Some(star) => {
                    let defining = defining_set(core, from, content)?;
                    let replay = verify_new_world(core, star, &defining, depth)?;
                    for chi in replay.drifted {
                        drift.push((from.clone(), content.clone(), chi));
                    }

                    let star_profile = profile(star)?;
                    let mut old: Vec<Vec<bool>> = Vec::new();
                    let from_succ: Vec<String> =
                        core.successors(from).map(str::to_string).collect();
                    for w3 in &from_succ {
                        old.push(profile(w3)?);
                    }
                    let to_succ: Vec<String> = core.successors(to).map(str::to_string).collect();
                    for w2 in &to_succ {
                        let p = profile(w2)?;
                        let ok =
                            contained(&p, &star_profile) || old.iter().any(|q| contained(&p, q));
                        if !ok {
                            no_new.fail(format!(
                                "{w2} holds information unavailable before announcing `{shown}` at {from}"
                            ));
                        }
                    }
                }
            }
        }
    }

    Ok(ExtensionReport {
        functionality: functionality.verdict(),
        atom_invariance_pos: inv_pos.verdict(),
        atom_invariance_neg: inv_neg.verdict(),
        successor_structure: successor.verdict(),
        no_new_information: no_new.verdict(),
        drift,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::figures;
    use crate::model::TruthValue;
    use crate::update::eval_dynamic;

    fn bounds() -> SearchBounds {
        SearchBounds::default()
    }

    fn f(src: &str) -> Formula {
        parse(src).unwrap()
    }

    #[test]
    fn announcements_without_transitions_are_vacuous() {
        let mut core = KripkeModel::new("solo");
        core.add_world("w0").unwrap();
        core.set_atom("w0", "p", TruthValue::True).unwrap();
        let em = ExtendedModel::new(core);

        assert!(sat_plus(&em, "w0", &f("[p] q")).unwrap());
        assert!(sat_plus(&em, "w0", &f("[p] (q & ~q)")).unwrap());
        assert!(!sat_plus_neg(&em, "w0", &f("[p] q")).unwrap());
    }

    #[test]
    fn static_clauses_agree_with_the_core_relation() {
        let core = figures::m_star();
        let em = ExtendedModel::new(core.clone());
        for src in [
            "p",
            "~p",
            "p & q",
            "p | r",
            "p -> q",
            "I p",
            "~I q",
            "I (p & q)",
            "~(p & ~q)",
            "I p & I q & I r",
        ] {
            let g = f(src);
            for w in core.world_ids() {
                assert_eq!(
                    sat_plus(&em, w, &g).unwrap(),
                    semantics::sat(&core, w, &g).unwrap(),
                    "support for {src} at {w}"
                );
                assert_eq!(
                    sat_plus_neg(&em, w, &g).unwrap(),
                    semantics::sat_neg(&core, w, &g).unwrap(),
                    "rejection for {src} at {w}"
                );
            }
        }
    }

    // A transition can point at a world that satisfies the content while
    // still disagreeing with the genuine update: here the target is a
    // world where `p` is no longer ignorance-free news but settled
    // knowledge, so `[p] ~I p` fails statically even though announcing
    // `p` really does leave the hearer non-ignorant of nothing... the
    // structural checker catches the lie.
    #[test]
    fn a_wrong_transition_separates_the_two_readings() {
        let mut core = KripkeModel::new("cx");
        core.add_world("w0").unwrap();
        core.add_world("w1").unwrap();
        core.set_atom("w1", "p", TruthValue::True).unwrap();
        let mut em = ExtendedModel::new(core.clone());
        em.add_transition(f("p"), "w0", "w1").unwrap();

        let g = f("[p] ~I p");
        assert!(!sat_plus(&em, "w0", &g).unwrap());
        assert_eq!(
            eval_dynamic(&core, "w0", &g, &bounds(), UnknownPolicy::Error).unwrap(),
            TruthValue::True,
        );

        let report = check_extension_properties(&em, &bounds(), 2).unwrap();
        assert!(matches!(
            report.successor_structure,
            PropertyVerdict::Fail(_)
        ));
        assert!(!report.all_pass());
    }

    #[test]
    fn induced_model_matches_direct_evaluation_and_passes_the_laws() {
        let core = figures::m2();
        let points: Vec<String> = core.world_ids().map(str::to_string).collect();
        let contents = [f("p"), f("~I q")];
        let induced = induce_extended(&core, &contents, &points, &bounds()).unwrap();
        assert!(induced.undecided.is_empty());
        let em = &induced.model;

        for content in &contents {
            for body in ["I p", "I q", "~I p", "p & q", "q -> p", "p | q"] {
                let g = Formula::ann(content.clone(), f(body));
                for w in core.world_ids() {
                    let direct = match eval_dynamic(&core, w, &g, &bounds(), UnknownPolicy::Error) {
                        Ok(v) => v,
                        Err(UpdateError::Undecided(_)) => continue,
                        Err(e) => panic!("dynamic evaluation failed: {e}"),
                    };
                    assert_eq!(
                        direct.is_true(),
                        sat_plus(em, w, &g).unwrap(),
                        "[{}] {body} at {w}",
                        render(content),
                    );
                }
            }
        }

        let report = check_extension_properties(em, &bounds(), 2).unwrap();
        for (name, verdict) in report.named() {
            assert!(verdict.passed(), "{name}: {verdict}");
        }
    }

    #[test]
    fn redirected_self_loops_keep_ignorance_facts_straight() {
        let mut core = KripkeModel::new("loop");
        core.add_world("w0").unwrap();
        core.set_atom("w0", "p", TruthValue::True).unwrap();
        core.set_atom("w0", "q", TruthValue::True).unwrap();
        core.add_edge("w0", "w0").unwrap();

        let contents = [f("p")];
        let points = vec!["w0".to_string()];
        let induced = induce_extended(&core, &contents, &points, &bounds()).unwrap();
        let em = &induced.model;

        // Announcing `p` leaves `q` out of the new world, so the hearer's
        // ignorance of `q` is intact afterwards; a copy that still saw
        // the original world would wrongly refute it.
        let g = f("[p] I q");
        assert_eq!(
            eval_dynamic(&core, "w0", &g, &bounds(), UnknownPolicy::Error).unwrap(),
            TruthValue::True,
        );
        assert!(sat_plus(em, "w0", &g).unwrap());
    }

    #[test]
    fn atom_changes_across_transitions_are_flagged() {
        let core = figures::m1();
        let mut em = ExtendedModel::new(core);
        em.add_transition(f("q"), "w0", "w1").unwrap();

        let report = check_extension_properties(&em, &bounds(), 1).unwrap();
        assert!(matches!(
            report.atom_invariance_pos,
            PropertyVerdict::Fail(_)
        ));
        assert!(matches!(
            report.atom_invariance_neg,
            PropertyVerdict::Fail(_)
        ));
    }

    #[test]
    fn a_second_target_breaks_functionality() {
        let mut core = KripkeModel::new("twins");
        for w in ["w0", "w1", "w2"] {
            core.add_world(w).unwrap();
        }
        let mut em = ExtendedModel::new(core);
        em.add_transition(f("p"), "w0", "w1").unwrap();
        em.add_transition(f("p"), "w0", "w2").unwrap();

        let report = check_extension_properties(&em, &bounds(), 1).unwrap();
        assert!(matches!(report.functionality, PropertyVerdict::Fail(_)));
    }

    #[test]
    fn inadmissible_announcements_get_no_transition() {
        let core = figures::chocolate(false);
        let points: Vec<String> = core.world_ids().map(str::to_string).collect();
        let induced = induce_extended(&core, &[f("p")], &points, &bounds()).unwrap();
        let em = &induced.model;

        // `p` is false at w0, so the lie leads nowhere from there and
        // `[p] anything` is vacuously supported; w1 is silent about `p`
        // and accepts it.
        assert!(em.transitions(&f("p")).all(|(from, _)| from != "w0"));
        assert!(em.transitions(&f("p")).any(|(from, _)| from == "w1"));
        assert!(sat_plus(em, "w0", &f("[p] (q & ~q)")).unwrap());
        assert_eq!(
            eval_dynamic(
                &core,
                "w0",
                &f("[p] (q & ~q)"),
                &bounds(),
                UnknownPolicy::Error
            )
            .unwrap(),
            TruthValue::True,
        );

        let report = check_extension_properties(em, &bounds(), 2).unwrap();
        assert!(report.all_pass());
    }

    #[test]
    fn the_text_format_round_trips() {
        let core = figures::m2();
        let points: Vec<String> = core.world_ids().map(str::to_string).collect();
        let induced = induce_extended(&core, &[f("p"), f("p | q")], &points, &bounds()).unwrap();
        let em = induced.model;

        let text = save_extended(&em);
        let back = load_extended(&text).unwrap();
        assert_eq!(back, em);
        assert_eq!(save_extended(&back), text);
    }

    #[test]
    fn transition_lines_reject_unknown_worlds_and_bad_formulas() {
        let src = "model tiny\nworld w0 { }\ntrans \"p\" w0 w9\n";
        let err = load_extended(src).unwrap_err();
        assert!(matches!(err, ModelError::Parse { line: 3, .. }));

        let src = "model tiny\nworld w0 { }\ntrans \"p &\" w0 w0\n";
        let err = load_extended(src).unwrap_err();
        assert!(matches!(err, ModelError::Parse { line: 3, .. }));

        let src = "model tiny\nworld w0 { }\ntrans p w0 w0\n";
        let err = load_extended(src).unwrap_err();
        assert!(matches!(err, ModelError::Parse { line: 3, .. }));
    }
}
