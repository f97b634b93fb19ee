//! Worked models and the claim gallery.
//!
//! The builders return the small models used throughout the
//! documentation and the test suite: a speaker/hearer model where
//! ignorance of `p` is excusable, a three-world model whose update
//! behaviour separates additive from eliminative announcements, a
//! four-world model rich enough to exercise every announcement golden,
//! and the two-world "chocolate" model where announcing a truth the
//! hearer could not rule out removes their ignorance of it.
//!
//! [`run_gallery`] replays every documented claim about these models and
//! reports each as a named pass/fail line. The gallery is the first
//! acceptance gate: if a refactor changes any documented value, a claim
//! here goes red before anything else does.

use std::collections::BTreeMap;

use crate::extmodel;
use crate::formula::{parse, render, Formula};
use crate::model::{load_model, save_model, to_dot, KripkeModel, TruthValue};
use crate::oracle::{self, ConsequenceVerdict, SearchBounds, SearchVerdict};
use crate::proofkit;
use crate::semantics::{eval3, sat, sat_neg, theory_slice, valid_in_model};
use crate::update::{
    self, announce, eliminative_announce, eval_dynamic, eval_eliminative, EliminationRule,
    UnknownPolicy, UpdateOutcome,
};

/// Four worlds; the point sees three alternatives and `p & q & r` holds
/// only at the point, so the speaker is ignorant of each conjunct.
pub fn m_star() -> KripkeModel {
    let mut m = KripkeModel::new("m_star");
    for w in ["w0", "w1", "w2", "w3"] {
        m.add_world(w).unwrap();
    }
    for (a, v) in [
        ("p", TruthValue::True),
        ("q", TruthValue::True),
        ("r", TruthValue::True),
    ] {
        m.set_atom("w0", a, v).unwrap();
    }
    m.set_atom("w1", "p", TruthValue::False).unwrap();
    m.set_atom("w2", "p", TruthValue::False).unwrap();
    m.set_atom("w2", "q", TruthValue::False).unwrap();
    m.set_atom("w3", "p", TruthValue::False).unwrap();
    for to in ["w1", "w2", "w3"] {
        m.add_edge("w0", to).unwrap();
    }
    m
}

/// Three worlds: the point knows `p`, one alternative refutes it, one is
/// silent about it. The eliminative/additive contrast lives here.
pub fn m1() -> KripkeModel {
    let mut m = KripkeModel::new("m1");
    for w in ["w0", "w1", "w2"] {
        m.add_world(w).unwrap();
    }
    m.set_atom("w0", "p", TruthValue::True).unwrap();
    m.set_atom("w1", "p", TruthValue::False).unwrap();
    m.add_edge("w0", "w1").unwrap();
    m.add_edge("w0", "w2").unwrap();
    m
}

/// Four worlds over `p` and `q`; the announcement goldens (`p`, `~I q`,
/// `I p`) are all computed on this model.
pub fn m2() -> KripkeModel {
    let mut m = KripkeModel::new("m2");
    for w in ["w0", "w1", "w2", "w3"] {
        m.add_world(w).unwrap();
    }
    m.set_atom("w0", "p", TruthValue::True).unwrap();
    m.set_atom("w0", "q", TruthValue::True).unwrap();
    m.set_atom("w2", "p", TruthValue::False).unwrap();
    m.set_atom("w2", "q", TruthValue::True).unwrap();
    m.set_atom("w3", "p", TruthValue::False).unwrap();
    for to in ["w1", "w2", "w3"] {
        m.add_edge("w0", to).unwrap();
    }
    m
}

/// Two worlds: the hearer is told `p` ("there is chocolate in the
/// cupboard") while their only alternative is silent about it. With
/// `p_true` false, the speaker lies and the announcement is inconsistent
/// with the point.
pub fn chocolate(p_true: bool) -> KripkeModel {
    let mut m = KripkeModel::new("chocolate");
    m.add_world("w0").unwrap();
    m.add_world("w1").unwrap();
    m.set_atom("w0", "p", TruthValue::from(p_true)).unwrap();
    m.add_edge("w0", "w1").unwrap();
    m
}

/// One verified statement about the bundled models and scripts.
#[derive(Debug, Clone)]
pub struct Claim {
    /// What the claim asserts, phrased as a sentence.
    pub name: &'static str,
    /// Whether the replay confirmed it.
    pub pass: bool,
    /// Error detail when the replay could not even run (empty otherwise).
    pub note: String,
}

fn claim(name: &'static str, result: Result<bool, String>) -> Claim {
    match result {
        Ok(pass) => Claim {
            name,
            pass,
            note: String::new(),
        },
        Err(note) => Claim {
            name,
            pass: false,
            note,
        },
    }
}

fn e(err: impl std::fmt::Display) -> String {
    err.to_string()
}

fn g(src: &str) -> Formula {
    parse(src).expect("gallery formulas are well-formed")
}

const PROOF_CORPUS: [(&str, &str); 11] = [
    (
        "negated_antecedent",
        include_str!("../fixtures/proofs/negated_antecedent.proof"),
    ),
    (
        "material_conditional",
        include_str!("../fixtures/proofs/material_conditional.proof"),
    ),
    (
        "import_export",
        include_str!("../fixtures/proofs/import_export.proof"),
    ),
    (
        "announce_conj",
        include_str!("../fixtures/proofs/announce_conj.proof"),
    ),
    (
        "discharge_with_ir",
        include_str!("../fixtures/proofs/discharge_with_ir.proof"),
    ),
    (
        "ign_disjunction_2",
        include_str!("../fixtures/proofs/ign_disjunction_2.proof"),
    ),
    (
        "ign_disjunction_3",
        include_str!("../fixtures/proofs/ign_disjunction_3.proof"),
    ),
    (
        "preserved_truths_2",
        include_str!("../fixtures/proofs/preserved_truths_2.proof"),
    ),
    (
        "intro_nonignorance",
        include_str!("../fixtures/proofs/intro_nonignorance.proof"),
    ),
    (
        "consistent_news",
        include_str!("../fixtures/proofs/consistent_news.proof"),
    ),
    (
        "axiom_instances",
        include_str!("../fixtures/proofs/axiom_instances.proof"),
    ),
];

/// Replays every documented claim about the bundled models, files, and
/// proof scripts, one entry per claim. A claim computes a value the
/// documentation states outright (a truth value, a valuation, a world
/// set, a verdict) and compares; there are no tolerances.
pub fn run_gallery(bounds: &SearchBounds) -> Vec<Claim> {
    let mut claims = Vec::new();

    // Parsing and printing.
    claims.push(claim(
        "parsing wraps a lone ignorance operator around its atom",
        Ok(g("I p") == Formula::atom("p").ign()),
    ));
    claims.push(claim(
        "disjunction desugars to a negated conjunction of negations",
        Ok(g("p | q") == Formula::atom("p").not().and(Formula::atom("q").not()).not()),
    ));
    claims.push(claim(
        "announcement brackets separate content from body",
        Ok(g("[p] ~I p") == Formula::ann(Formula::atom("p"), Formula::atom("p").ign().not())),
    ));
    claims.push(claim(
        "rendering is minimal and parses back to the same tree",
        (|| {
            for src in ["I p", "p & ~p", "[p] I q", "p & q -> q -> r", "I (p & q)"] {
                let f = g(src);
                if render(&f) != src || parse(&render(&f)).map_err(e)? != f {
                    return Ok(false);
                }
            }
            Ok(true)
        })(),
    ));
    claims.push(claim(
        "substitution rewrites every occurrence at once",
        Ok({
            let map = BTreeMap::from([("p".to_string(), Formula::atom("q"))]);
            g("p -> p").uniform_substitute(&map) == (g("q -> q"), true)
        }),
    ));
    claims.push(claim(
        "substituting into a two-valued ignorance tautology keeps its shape",
        Ok({
            let map = BTreeMap::from([("p".to_string(), g("q & r"))]);
            g("I p | ~I p").uniform_substitute(&map) == (g("I (q & r) | ~I (q & r)"), true)
        }),
    ));
    claims.push(claim(
        "substituting an atom that lives under an announcement is flagged",
        Ok({
            let map = BTreeMap::from([("p".to_string(), Formula::atom("q"))]);
            g("[p] ~I p").uniform_substitute(&map) == (g("[q] ~I q"), false)
        }),
    ));

    // Model files and graphs.
    claims.push(claim(
        "the bundled four-world showcase file reproduces its builder",
        (|| {
            let loaded = load_model(include_str!("../fixtures/models/m_star.model")).map_err(e)?;
            Ok(loaded == m_star() && loaded.world_count() == 4)
        })(),
    ));
    claims.push(claim(
        "model text round-trips and ends in canonical form",
        (|| {
            let bundled = [
                (m_star(), include_str!("../fixtures/models/m_star.model")),
                (m1(), include_str!("../fixtures/models/m1.model")),
                (m2(), include_str!("../fixtures/models/m2.model")),
                (
                    chocolate(true),
                    include_str!("../fixtures/models/chocolate.model"),
                ),
            ];
            for (m, text) in bundled {
                // Fixtures open with a commented rationale; the body
                // below it is exactly what save_model writes.
                if load_model(text).map_err(e)? != m || !text.ends_with(&save_model(&m)) {
                    return Ok(false);
                }
            }
            Ok(true)
        })(),
    ));
    claims.push(claim(
        "edges may only join declared worlds",
        Ok(load_model("model x\nworld w0 { }\nedge w0 w9\n").is_err()),
    ));
    claims.push(claim(
        "graph output shows atom values and double-rings the point",
        Ok({
            let mut m = KripkeModel::new("dot");
            m.add_world("w0").expect("fresh");
            m.set_atom("w0", "p", TruthValue::True).expect("exists");
            let dot = to_dot(&m, Some("w0"));
            dot.contains("label=\"w0\\np\"") && dot.contains("peripheries=2")
        }),
    ));
    claims.push(claim(
        "announcing a fact draws one new node and four new arrows",
        (|| match announce(&m2(), "w0", &g("p"), bounds, UnknownPolicy::Error).map_err(e)? {
            UpdateOutcome::Updated { model, .. } => {
                let dot = to_dot(&model, None);
                Ok(dot.matches("label=").count() == 5 && dot.matches("->").count() == 7)
            }
            _ => Ok(false),
        })(),
    ));
    claims.push(claim(
        "an empty model draws an empty graph",
        Ok({
            let dot = to_dot(&KripkeModel::new("void"), None);
            !dot.contains("label=") && !dot.contains("->")
        }),
    ));

    // Static evaluation.
    claims.push(claim(
        "the showcase point is ignorant of each truth only it sees",
        (|| {
            let m = m_star();
            let f = g("I p & I q & I r");
            Ok(eval3(&m, "w0", &f).map_err(e)? == TruthValue::True
                && sat(&m, "w0", &f).map_err(e)?
                && !sat_neg(&m, "w0", &f).map_err(e)?)
        })(),
    ));
    claims.push(claim(
        "ignorance of a false fact fails",
        (|| {
            let m = m_star();
            Ok(eval3(&m, "w1", &g("I p")).map_err(e)? == TruthValue::False
                && !valid_in_model(&m, &g("I p")).map_err(e)?)
        })(),
    ));
    claims.push(claim(
        "a gapped antecedent makes a conditional true",
        (|| {
            let mut m = KripkeModel::new("gap");
            m.add_world("w0").expect("fresh");
            Ok(eval3(&m, "w0", &g("p -> q")).map_err(e)? == TruthValue::True)
        })(),
    ));
    claims.push(claim(
        "ignorance claims are classical on every bundled model",
        (|| {
            for m in [m_star(), m1(), m2(), chocolate(true)] {
                if !valid_in_model(&m, &g("I p | ~I p")).map_err(e)?
                    || !valid_in_model(&m, &g("p -> p")).map_err(e)?
                {
                    return Ok(false);
                }
                for w in m.world_ids() {
                    if eval3(&m, w, &g("I p")).map_err(e)? == TruthValue::Gap {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        })(),
    ));
    claims.push(claim(
        "rejection follows the strong-negation reading",
        (|| {
            Ok(sat_neg(&m2(), "w0", &g("I q")).map_err(e)?
                && !sat(&m1(), "w2", &g("p")).map_err(e)?
                && !sat_neg(&m1(), "w2", &g("p")).map_err(e)?)
        })(),
    ));
    claims.push(claim(
        "bounded slices list exactly the supported members",
        (|| {
            let mut solo = KripkeModel::new("solo");
            solo.add_world("w0").expect("fresh");
            solo.set_atom("w0", "p", TruthValue::True).expect("exists");
            let true_members = |m: &KripkeModel, w: &str, layers: usize| {
                let family = theory_slice(&m.atoms(), layers);
                let mut kept = Vec::new();
                for f in family {
                    if sat(m, w, &f).map_err(e)? {
                        kept.push(f);
                    }
                }
                Ok::<_, String>(kept)
            };
            let solo_slice = true_members(&solo, "w0", 0)?;
            let m1_slice = true_members(&m1(), "w0", 1)?;
            let m2_slice = true_members(&m2(), "w0", 1)?;
            Ok(solo_slice.contains(&g("p"))
                && !solo_slice.contains(&g("~p"))
                && m1_slice.contains(&g("I p"))
                && m2_slice.contains(&g("I p"))
                && m2_slice.contains(&g("~I q")))
        })(),
    ));

    // The bounded search.
    claims.push(claim(
        "a contradiction has no bounded model",
        (|| {
            Ok(
                oracle::satisfiable(&[g("p"), g("~p")], &[], bounds).map_err(e)?
                    == SearchVerdict::UnsatWithin,
            )
        })(),
    ));
    claims.push(claim(
        "ignorance of an atom is satisfiable and the witness re-checks",
        (|| match oracle::satisfiable(&[g("I p")], &[], bounds).map_err(e)? {
            SearchVerdict::Sat(pm) => sat(&pm.model, &pm.point, &g("I p")).map_err(e),
            _ => Ok(false),
        })(),
    ));
    claims.push(claim(
        "detachment cannot be refuted",
        (|| {
            Ok(
                oracle::satisfiable(&[g("p -> q"), g("p"), g("~q")], &[], bounds).map_err(e)?
                    == SearchVerdict::UnsatWithin,
            )
        })(),
    ));
    claims.push(claim(
        "ignorance entails its content",
        (|| {
            Ok(
                oracle::consequence(&[g("I p")], &g("p"), bounds).map_err(e)?
                    == ConsequenceVerdict::Follows,
            )
        })(),
    ));
    claims.push(claim(
        "independent atoms are not consequences",
        (|| match oracle::consequence(&[g("p")], &g("q"), bounds).map_err(e)? {
            ConsequenceVerdict::NotFollows(pm) => Ok(sat(&pm.model, &pm.point, &g("p"))
                .map_err(e)?
                && !sat(&pm.model, &pm.point, &g("q")).map_err(e)?),
            _ => Ok(false),
        })(),
    ));
    claims.push(claim(
        "joint truth forces the conjunction",
        (|| {
            Ok(
                oracle::consequence(&[g("p"), g("q")], &g("p & q"), bounds).map_err(e)?
                    == ConsequenceVerdict::Follows,
            )
        })(),
    ));

    // Announcements.
    claims.push(claim(
        "a world that rejects the content refuses the announcement",
        (|| {
            Ok(announce(
                &chocolate(false),
                "w0",
                &g("p"),
                bounds,
                UnknownPolicy::Error,
            )
            .map_err(e)?
                == UpdateOutcome::Inconsistent)
        })(),
    ));
    claims.push(claim(
        "a silent world accepts news it cannot rule out",
        (|| {
            Ok(matches!(
                announce(
                    &chocolate(true),
                    "w1",
                    &g("p"),
                    bounds,
                    UnknownPolicy::Error
                )
                .map_err(e)?,
                UpdateOutcome::Updated { .. }
            ))
        })(),
    ));
    claims.push(claim(
        "hearing a bare fact ends ignorance of it and keeps the rest",
        (|| match announce(&m2(), "w0", &g("p"), bounds, UnknownPolicy::Error).map_err(e)? {
            UpdateOutcome::Updated { model, new_world } => {
                let want = BTreeMap::from([
                    ("p".to_string(), TruthValue::True),
                    ("q".to_string(), TruthValue::True),
                ]);
                Ok(model.world_atoms(&new_world) == Some(&want)
                    && sat(&model, "w0", &g("~I p & ~I q")).map_err(e)?)
            }
            _ => Ok(false),
        })(),
    ));
    claims.push(claim(
        "announced ignorance undoes itself",
        (|| match announce(&m2(), "w0", &g("I p"), bounds, UnknownPolicy::Error).map_err(e)? {
            UpdateOutcome::Updated { model, new_world } => Ok(sat(&model, &new_world, &g("I p"))
                .map_err(e)?
                && sat(&model, "w0", &g("~I p")).map_err(e)?),
            _ => Ok(false),
        })(),
    ));
    claims.push(claim(
        "non-ignorance news carries the fact but not its grounds",
        (|| match announce(&m2(), "w0", &g("~I q"), bounds, UnknownPolicy::Error).map_err(e)? {
            UpdateOutcome::Updated { model, new_world } => {
                let want = BTreeMap::from([("q".to_string(), TruthValue::True)]);
                Ok(model.world_atoms(&new_world) == Some(&want)
                    && sat(&model, "w0", &g("~I q")).map_err(e)?
                    && sat(&model, &new_world, &g("~I q")).map_err(e)?)
            }
            _ => Ok(false),
        })(),
    ));
    claims.push(claim(
        "the chocolate news removes ignorance when true and stays refused when false",
        (|| {
            let honest = chocolate(true);
            let after =
                match announce(&honest, "w0", &g("p"), bounds, UnknownPolicy::Error).map_err(e)? {
                    UpdateOutcome::Updated { model, .. } => model,
                    _ => return Ok(false),
                };
            Ok(sat(&after, "w0", &g("~I p")).map_err(e)?
                && eval_dynamic(&honest, "w0", &g("[p] I p"), bounds, UnknownPolicy::Error)
                    .map_err(e)?
                    == TruthValue::False
                && eval_dynamic(
                    &chocolate(false),
                    "w0",
                    &g("[p] I p"),
                    bounds,
                    UnknownPolicy::Error,
                )
                .map_err(e)?
                    == TruthValue::True)
        })(),
    ));
    claims.push(claim(
        "announcements are two-valued and preserve untouched non-ignorance",
        (|| {
            let m = m2();
            for src in ["[p] ~I q", "[p] I q", "[p] q", "[~I q] ~I q"] {
                if eval_dynamic(&m, "w0", &g(src), bounds, UnknownPolicy::Error).map_err(e)?
                    == TruthValue::Gap
                {
                    return Ok(false);
                }
            }
            Ok(
                eval_dynamic(&m, "w0", &g("[p] ~I q"), bounds, UnknownPolicy::Error).map_err(e)?
                    == TruthValue::True
                    && eval_dynamic(&m1(), "w0", &g("[p] ~I p"), bounds, UnknownPolicy::Error)
                        .map_err(e)?
                        == TruthValue::True,
            )
        })(),
    ));
    claims.push(claim(
        "an update keeps every old world, edge, and atom",
        (|| {
            let before = m2();
            match announce(&before, "w0", &g("p"), bounds, UnknownPolicy::Error).map_err(e)? {
                UpdateOutcome::Updated { model, .. } => {
                    let worlds_kept = before
                        .world_ids()
                        .all(|w| model.world_atoms(w) == before.world_atoms(w));
                    let edges_kept = before.edges().all(|(x, y)| model.has_edge(x, y));
                    Ok(worlds_kept && edges_kept)
                }
                _ => Ok(false),
            }
        })(),
    ));
    claims.push(claim(
        "the defining facts replay cleanly at the new world",
        (|| {
            let before = m2();
            let content = g("p");
            match announce(&before, "w0", &content, bounds, UnknownPolicy::Error).map_err(e)? {
                UpdateOutcome::Updated { model, new_world } => {
                    let defining = update::defining_set(&before, "w0", &content).map_err(e)?;
                    let report =
                        update::verify_new_world(&model, &new_world, &defining, 2).map_err(e)?;
                    Ok(report.checked > 0 && report.drifted.is_empty())
                }
                _ => Ok(false),
            }
        })(),
    ));
    claims.push(claim(
        "eliminative updates breed omniscience; additive ones do not",
        (|| {
            let m = m1();
            let counterintuitive = [g("I p -> [p] I p"), g("~I (p -> p) -> [p] I (p -> p)")];
            for f in &counterintuitive {
                if eval_eliminative(&m, "w0", f, EliminationRule::KeepWhereTrue).map_err(e)?
                    != TruthValue::True
                {
                    return Ok(false);
                }
                if eval_dynamic(&m, "w0", f, bounds, UnknownPolicy::Error).map_err(e)?
                    == TruthValue::True
                {
                    return Ok(false);
                }
            }
            Ok(true)
        })(),
    ));
    claims.push(claim(
        "dropping only refuted worlds keeps the silent one",
        (|| {
            let m = m1();
            let (strict, _) =
                eliminative_announce(&m, &g("p"), EliminationRule::KeepWhereTrue).map_err(e)?;
            let (lenient, _) =
                eliminative_announce(&m, &g("p"), EliminationRule::DropWhereFalse).map_err(e)?;
            let ids = |m: &KripkeModel| m.world_ids().map(str::to_string).collect::<Vec<_>>();
            Ok(ids(&strict) == ["w0"] && ids(&lenient) == ["w0", "w2"])
        })(),
    ));
    claims.push(claim(
        "keeping unrefuted worlds does not cure the omniscience pathology",
        (|| {
            let m = m1();
            let first = eval_eliminative(
                &m,
                "w0",
                &g("I p -> [p] I p"),
                EliminationRule::DropWhereFalse,
            )
            .map_err(e)?;
            let second = eval_eliminative(
                &m,
                "w0",
                &g("~I (p -> p) -> [p] I (p -> p)"),
                EliminationRule::DropWhereFalse,
            )
            .map_err(e)?;
            Ok(first == TruthValue::True && second == TruthValue::False)
        })(),
    ));
    claims.push(claim(
        "announcing a model-wide validity eliminates nothing",
        (|| {
            let m = m1();
            let (kept, removed) =
                eliminative_announce(&m, &g("p -> p"), EliminationRule::KeepWhereTrue)
                    .map_err(e)?;
            Ok(removed.is_empty() && kept == m)
        })(),
    ));

    // Derivations.
    claims.push(claim(
        "scheme matching finds the unique instantiation or none",
        Ok({
            let fact_hit = proofkit::match_axiom("fact", &g("I p -> p"))
                .is_some_and(|s| s.formulas.get("phi") == Some(&Formula::atom("p")));
            let iand_hit = proofkit::match_axiom("IAND", &g("(I p & I q) -> I (p | q)")).is_some();
            let miss = proofkit::match_axiom("fact", &g("p -> q")).is_none();
            fact_hit && iand_hit && miss
        }),
    ));
    claims.push(claim(
        "every bundled derivation checks line by line",
        (|| {
            for (name, src) in PROOF_CORPUS {
                let d = proofkit::parse_script(src).map_err(|err| format!("{name}: {err}"))?;
                proofkit::check_derivation(&d).map_err(|err| format!("{name}: {err}"))?;
            }
            Ok(true)
        })(),
    ));
    claims.push(claim(
        "theorem-only rules reject hypothetical premises",
        (|| {
            let src = "1. [CTX: p -> q] p -> q  BY assume\n\
                       2. [CTX: p -> q] p -> (I q -> I p)  BY rule:IR 1\n";
            let d = proofkit::parse_script(src).map_err(e)?;
            Ok(matches!(proofkit::check_derivation(&d), Err(err) if err.line == 2))
        })(),
    ));
    claims.push(claim(
        "the bundled conclusions say what they should",
        (|| {
            let want: [(&str, &str); 5] = [
                ("negated_antecedent", "~p -> (p -> q)"),
                ("material_conditional", "(~p | q) -> (p -> q)"),
                ("announce_conj", "[s] (p & q) <-> ([s] p & [s] q)"),
                (
                    "ign_disjunction_3",
                    "((I p & I q) & I r) -> I ((p | q) | r)",
                ),
                (
                    "preserved_truths_2",
                    "(((p & ~I p) & q) & ~I q) -> [s] ~I (p & q)",
                ),
            ];
            for (name, conclusion) in want {
                let src = PROOF_CORPUS
                    .iter()
                    .find(|(n, _)| *n == name)
                    .expect("bundled")
                    .1;
                let d = proofkit::parse_script(src).map_err(e)?;
                let last = d.lines.last().expect("scripts are nonempty");
                if last.formula != g(conclusion) || !last.context.is_empty() {
                    return Ok(false);
                }
            }
            Ok(true)
        })(),
    ));

    // Extended models.
    let points = |m: &KripkeModel| m.world_ids().map(str::to_string).collect::<Vec<_>>();
    claims.push(claim(
        "a transition table can stand in for recomputing updates",
        (|| {
            let core = m2();
            let induced =
                extmodel::induce_extended(&core, &[g("p")], &points(&core), bounds).map_err(e)?;
            for body in ["~I p", "I q", "p & q"] {
                let f = Formula::ann(g("p"), g(body));
                for w in core.world_ids() {
                    let direct =
                        eval_dynamic(&core, w, &f, bounds, UnknownPolicy::Error).map_err(e)?;
                    let tabled = extmodel::sat_plus(&induced.model, w, &f).map_err(e)?;
                    if (direct == TruthValue::True) != tabled {
                        return Ok(false);
                    }
                }
            }
            extmodel::sat_plus(&induced.model, "w0", &g("[p] ~I p")).map_err(e)
        })(),
    ));
    claims.push(claim(
        "a content-true target can still lie about the update, and the laws catch it",
        (|| {
            let mut core = KripkeModel::new("cx");
            core.add_world("w0").expect("fresh");
            core.add_world("w1").expect("fresh");
            core.set_atom("w1", "p", TruthValue::True).expect("exists");
            let mut em = extmodel::ExtendedModel::new(core.clone());
            em.add_transition(g("p"), "w0", "w1").map_err(e)?;

            let f = g("[p] ~I p");
            let tabled = extmodel::sat_plus(&em, "w0", &f).map_err(e)?;
            let direct = eval_dynamic(&core, "w0", &f, bounds, UnknownPolicy::Error).map_err(e)?;
            let report = extmodel::check_extension_properties(&em, bounds, 2).map_err(e)?;
            Ok(!tabled
                && direct == TruthValue::True
                && matches!(
                    report.successor_structure,
                    extmodel::PropertyVerdict::Fail(_)
                ))
        })(),
    ));
    claims.push(claim(
        "induced extensions satisfy every structural law",
        (|| {
            let core = m2();
            let induced =
                extmodel::induce_extended(&core, &[g("p")], &points(&core), bounds).map_err(e)?;
            let report =
                extmodel::check_extension_properties(&induced.model, bounds, 2).map_err(e)?;
            Ok(induced.undecided.is_empty() && report.all_pass())
        })(),
    ));
    claims.push(claim(
        "no announcements, no changes",
        (|| {
            let core = m2();
            let induced =
                extmodel::induce_extended(&core, &[], &points(&core), bounds).map_err(e)?;
            Ok(induced.model.core() == &core && induced.model.transition_count() == 0)
        })(),
    ));
    claims.push(claim(
        "refused announcements leave vacuous truths",
        (|| {
            let core = chocolate(false);
            let induced =
                extmodel::induce_extended(&core, &[g("p")], &points(&core), bounds).map_err(e)?;
            let em = &induced.model;
            Ok(em.transitions(&g("p")).all(|(from, _)| from != "w0")
                && extmodel::sat_plus(em, "w0", &g("[p] (q & ~q)")).map_err(e)?)
        })(),
    ));

    claims
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_gallery_is_all_green_and_fast() {
        let start = std::time::Instant::now();
        let claims = run_gallery(&SearchBounds::default());
        let failed: Vec<String> = claims
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{}: {}", c.name, c.note))
            .collect();
        assert!(failed.is_empty(), "failed claims:\n{}", failed.join("\n"));
        assert!(
            claims.len() >= 40,
            "gallery shrank to {} claims",
            claims.len()
        );
        assert!(
            start.elapsed() < std::time::Duration::from_secs(5),
            "gallery took {:?}",
            start.elapsed()
        );
    }

    #[test]
    fn claim_names_are_unique() {
        let claims = run_gallery(&SearchBounds::default());
        let names: std::collections::BTreeSet<&str> = claims.iter().map(|c| c.name).collect();
        assert_eq!(names.len(), claims.len());
    }
}
