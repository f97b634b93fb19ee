//! The axiom scheme library and scheme matching.
//!
//! Patterns are stored as ordinary formulas over the reserved atom names
//! `phi`, `psi`, `chi`, `rho` (formula metavariables) and `p`, `q`
//! (schematic atoms). Matching is purely syntactic on desugared trees:
//! no matching modulo commutativity or associativity.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::formula::{parse, Formula};

use super::Subst;

/// `(id, pattern source)` for every scheme, in presentation order.
///
/// The first fourteen axiomatise the static base logic, the next three
/// the ignorance operator, and the rest the announcement operator.
const SCHEMES: &[(&str, &str)] = &[
    ("A1", "(phi & psi) -> phi"),
    ("A2", "(phi & psi) -> psi"),
    (
        "A3",
        "((phi -> psi) & (phi -> chi)) -> (phi -> (psi & chi))",
    ),
    ("A4", "phi -> (phi | psi)"),
    ("A5", "psi -> (phi | psi)"),
    (
        "A6",
        "((phi -> chi) & (psi -> chi)) -> ((phi | psi) -> chi)",
    ),
    ("A7", "(phi & (psi | chi)) -> ((phi & psi) | (phi & chi))"),
    ("A8", "~(phi | psi) <-> (~phi & ~psi)"),
    ("A9", "~(phi & psi) <-> (~phi | ~psi)"),
    ("A10", "phi <-> ~~phi"),
    ("A11", "((phi -> psi) & phi) -> psi"),
    ("A12", "psi -> (phi -> psi)"),
    ("A13", "phi | (phi -> psi)"),
    ("A14", "phi -> (psi | ~(phi -> psi))"),
    ("fact", "I phi -> phi"),
    ("IAND", "(I phi & I psi) -> I (phi | psi)"),
    ("emI", "I phi | ~I phi"),
    ("AI", "(phi & I ~psi & [phi] I psi) -> I (psi | ~psi)"),
    ("dAimp", "[phi] (psi -> chi) <-> ([phi] psi -> [phi] chi)"),
    ("nI", "[phi] ~I phi"),
    ("nA1", "~[phi] psi -> [phi] (psi -> (p & ~p))"),
    ("nA2", "~phi -> [phi] (p & ~p)"),
    ("dAor", "[phi] (psi | chi) <-> ([phi] psi | [phi] chi)"),
    ("emA", "[phi] psi | ~[phi] psi"),
    ("INV", "(p -> [phi] p) & (~p -> [phi] ~p)"),
    ("nAp1", "~[phi] ~p -> (p | [phi] (p -> (q & ~q)))"),
    ("nAp2", "~[phi] p -> (~p | [phi] (~p -> (q & ~q)))"),
    ("uA", "([phi] psi & [phi] ~psi) -> (phi -> (p & ~p))"),
];

const FORMULA_VARS: [&str; 4] = ["phi", "psi", "chi", "rho"];
const ATOM_VARS: [&str; 2] = ["p", "q"];

fn is_formula_var(name: &str) -> bool {
    FORMULA_VARS.contains(&name)
}

fn is_atom_var(name: &str) -> bool {
    ATOM_VARS.contains(&name)
}

fn table() -> &'static BTreeMap<&'static str, Formula> {
    static TABLE: OnceLock<BTreeMap<&'static str, Formula>> = OnceLock::new();
    TABLE.get_or_init(|| {
        SCHEMES
            .iter()
            .map(|(id, src)| (*id, parse(src).expect("scheme pattern parses")))
            .collect()
    })
}

/// All scheme identifiers, in presentation order.
pub fn scheme_ids() -> Vec<&'static str> {
    SCHEMES.iter().map(|(id, _)| *id).collect()
}

/// Returns the pattern of a scheme, if the identifier is known.
pub fn scheme_pattern(id: &str) -> Option<&'static Formula> {
    table().get(id)
}

fn unify(pattern: &Formula, f: &Formula, out: &mut Subst) -> bool {
    match pattern {
        Formula::Atom(name) if is_formula_var(name) => match out.formulas.get(name.as_str()) {
            Some(bound) => bound == f,
            None => {
                out.formulas.insert(name.clone(), f.clone());
                true
            }
        },
        Formula::Atom(name) if is_atom_var(name) => {
            let Formula::Atom(a) = f else { return false };
            match out.atoms.get(name.as_str()) {
                Some(bound) => bound == a,
                None => {
                    out.atoms.insert(name.clone(), a.clone());
                    true
                }
            }
        }
        Formula::Atom(name) => matches!(f, Formula::Atom(a) if a == name),
        Formula::Not(p) => matches!(f, Formula::Not(g) if unify(p, g, out)),
        Formula::Ign(p) => matches!(f, Formula::Ign(g) if unify(p, g, out)),
        Formula::And(pl, pr) => {
            matches!(f, Formula::And(l, r) if unify(pl, l, out) && unify(pr, r, out))
        }
        Formula::Imp(pl, pr) => {
            matches!(f, Formula::Imp(l, r) if unify(pl, l, out) && unify(pr, r, out))
        }
        Formula::Ann(pc, pb) => {
            matches!(f, Formula::Ann(c, b) if unify(pc, c, out) && unify(pb, b, out))
        }
    }
}

/// Matches a formula against a scheme, returning the substitution when
/// it is an instance.
///
/// Returns `None` for an unknown scheme identifier as well; callers that
/// care about the difference should validate the identifier against
/// [`scheme_ids`] first. Where a scheme uses both schematic atoms they
/// must match distinct atoms, so `~[s] ~a -> (a | [s] (a -> (a & ~a)))`
/// is not an `nAp1` instance.
pub fn match_axiom(scheme: &str, f: &Formula) -> Option<Subst> {
    let pattern = scheme_pattern(scheme)?;
    let mut subst = Subst::default();
    if !unify(pattern, f, &mut subst) {
        return None;
    }
    if let (Some(p), Some(q)) = (subst.atoms.get("p"), subst.atoms.get("q")) {
        if p == q {
            return None;
        }
    }
    Some(subst)
}

fn pattern_vars(pattern: &Formula) -> (Vec<&str>, Vec<&str>) {
    let mut formulas = Vec::new();
    let mut atoms = Vec::new();
    for name in pattern.atoms() {
        if is_formula_var(&name) {
            formulas.push(FORMULA_VARS[FORMULA_VARS.iter().position(|v| *v == name).unwrap()]);
        } else if is_atom_var(&name) {
            atoms.push(ATOM_VARS[ATOM_VARS.iter().position(|v| *v == name).unwrap()]);
        }
    }
    (formulas, atoms)
}

/// Builds the instance of a scheme under an explicit substitution.
///
/// Fails when the scheme is unknown, a variable the pattern uses is
/// missing from the substitution, the substitution binds a variable the
/// pattern does not use, or both schematic atoms are bound to the same
/// atom.
pub fn instantiate(scheme: &str, subst: &Subst) -> Result<Formula, String> {
    let pattern =
        scheme_pattern(scheme).ok_or_else(|| format!("unknown axiom scheme `{scheme}`"))?;
    let (fvars, avars) = pattern_vars(pattern);
    for key in subst.formulas.keys() {
        if !fvars.iter().any(|v| v == key) {
            return Err(format!(
                "substitution binds `{key}`, which {scheme} does not use"
            ));
        }
    }
    for key in subst.atoms.keys() {
        if !avars.iter().any(|v| v == key) {
            return Err(format!(
                "substitution binds `{key}`, which {scheme} does not use"
            ));
        }
    }
    if let (Some(p), Some(q)) = (subst.atoms.get("p"), subst.atoms.get("q")) {
        if p == q {
            return Err("schematic atoms `p` and `q` must be distinct".into());
        }
    }
    fn build(pattern: &Formula, subst: &Subst, scheme: &str) -> Result<Formula, String> {
        Ok(match pattern {
            Formula::Atom(name) if is_formula_var(name) => subst
                .formulas
                .get(name.as_str())
                .cloned()
                .ok_or_else(|| format!("substitution is missing `{name}` for {scheme}"))?,
            Formula::Atom(name) if is_atom_var(name) => Formula::atom(
                subst
                    .atoms
                    .get(name.as_str())
                    .cloned()
                    .ok_or_else(|| format!("substitution is missing `{name}` for {scheme}"))?,
            ),
            Formula::Atom(name) => Formula::atom(name.clone()),
            Formula::Not(f) => build(f, subst, scheme)?.not(),
            Formula::Ign(f) => build(f, subst, scheme)?.ign(),
            Formula::And(l, r) => build(l, subst, scheme)?.and(build(r, subst, scheme)?),
            Formula::Imp(l, r) => build(l, subst, scheme)?.imp(build(r, subst, scheme)?),
            Formula::Ann(c, b) => Formula::ann(build(c, subst, scheme)?, build(b, subst, scheme)?),
        })
    }
    build(pattern, subst, scheme)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(src: &str) -> Formula {
        parse(src).unwrap()
    }

    #[test]
    fn factivity_matches_and_reports_its_substitution() {
        let subst = match_axiom("fact", &f("I p -> p")).unwrap();
        assert_eq!(subst.formulas.get("phi"), Some(&Formula::atom("p")));
        assert!(subst.atoms.is_empty());

        let nested = match_axiom("fact", &f("I (p & ~q) -> (p & ~q)")).unwrap();
        assert_eq!(nested.formulas.get("phi"), Some(&f("p & ~q")));
    }

    #[test]
    fn ignorance_adjunction_matches() {
        let subst = match_axiom("IAND", &f("(I p & I q) -> I (p | q)")).unwrap();
        assert_eq!(subst.formulas.get("phi"), Some(&Formula::atom("p")));
        assert_eq!(subst.formulas.get("psi"), Some(&Formula::atom("q")));
    }

    #[test]
    fn non_instances_are_rejected() {
        assert_eq!(match_axiom("fact", &f("p -> q")), None);
        // Same metavariable twice: the two occurrences must agree.
        assert_eq!(match_axiom("A11", &f("((p -> q) & p) -> r")), None);
        // Disjunction is matched on the desugared tree, not the surface.
        assert!(match_axiom("A13", &f("~(~p & ~(p -> q))")).is_some());
        assert_eq!(match_axiom("no_such_scheme", &f("p")), None);
    }

    #[test]
    fn schematic_atoms_only_match_atoms_and_stay_distinct() {
        assert!(match_axiom("nA2", &f("~(p & q) -> [p & q] (r & ~r)")).is_some());
        // The contradiction slot cannot hold a compound.
        assert_eq!(
            match_axiom("nA2", &f("~p -> [p] ((q & r) & ~(q & r))")),
            None
        );
        // nAp1 uses both p and q; binding them to the same atom fails.
        assert!(match_axiom("nAp1", &f("~[s] ~a -> (a | [s] (a -> (b & ~b)))")).is_some());
        assert_eq!(
            match_axiom("nAp1", &f("~[s] ~a -> (a | [s] (a -> (a & ~a)))")),
            None
        );
    }

    #[test]
    fn every_scheme_matches_its_own_generic_instance() {
        for id in scheme_ids() {
            let pattern = scheme_pattern(id).unwrap();
            let mut subst = Subst::default();
            for v in FORMULA_VARS {
                subst
                    .formulas
                    .insert(v.into(), Formula::atom(format!("{v}0")));
            }
            subst.atoms.insert("p".into(), "a0".into());
            subst.atoms.insert("q".into(), "b0".into());
            let (fvars, avars) = pattern_vars(pattern);
            subst.formulas.retain(|k, _| fvars.iter().any(|v| v == k));
            subst.atoms.retain(|k, _| avars.iter().any(|v| v == k));
            let instance = instantiate(id, &subst).unwrap();
            let recovered = match_axiom(id, &instance).unwrap();
            assert_eq!(recovered, subst, "round-trip failed for {id}");
        }
    }

    #[test]
    fn instantiate_rejects_missing_and_extra_bindings() {
        let mut subst = Subst::default();
        subst.formulas.insert("phi".into(), Formula::atom("p"));
        assert!(instantiate("A1", &subst).is_err());
        subst.formulas.insert("psi".into(), Formula::atom("q"));
        assert_eq!(instantiate("A1", &subst).unwrap(), f("(p & q) -> p"));
        subst.formulas.insert("chi".into(), Formula::atom("r"));
        assert!(instantiate("A1", &subst).is_err());
    }
}
