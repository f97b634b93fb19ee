//! Line-by-line derivation checking.
//!
//! Each line is validated against its stated justification; the first
//! failure is reported with its 1-based line number. A macro line is
//! validated by expanding it and re-checking every emitted line as if it
//! had been written out by hand, so derived rules carry no trust.

use std::collections::BTreeSet;

use crate::formula::{render, Formula};

use super::macros::{self, as_contradiction, as_imp};
use super::{schemes, CheckError, Derivation, Justification, Line};

/// Checks a derivation, returning the first offending line on failure.
pub fn check_derivation(derivation: &Derivation) -> Result<(), CheckError> {
    for (i, line) in derivation.lines.iter().enumerate() {
        let prefix = &derivation.lines[..i];
        let result = match &line.justification {
            Justification::Macro { name, premises } => {
                macros::expand_macro(name, prefix, premises, line)
                    .and_then(|expansion| check_expansion(prefix, &expansion, line))
            }
            _ => check_primitive_line(prefix, line),
        };
        if let Err(reason) = result {
            return Err(CheckError {
                line: i + 1,
                reason,
            });
        }
    }
    Ok(())
}

/// Re-checks an expansion in place of the macro line it came from.
fn check_expansion(prefix: &[Line], expansion: &[Line], stated: &Line) -> Result<(), String> {
    if expansion.is_empty() {
        return Err("macro produced an empty expansion".into());
    }
    let mut virt: Vec<Line> = prefix.to_vec();
    for emitted in expansion {
        if matches!(emitted.justification, Justification::Macro { .. }) {
            return Err("internal: macro expansion emitted a macro line".into());
        }
        check_primitive_line(&virt, emitted)
            .map_err(|reason| format!("expansion line {}: {reason}", virt.len() + 1))?;
        virt.push(emitted.clone());
    }
    let last = expansion.last().expect("nonempty");
    if last.formula != stated.formula {
        return Err(format!(
            "the macro derives `{}`, not the stated `{}`",
            render(&last.formula),
            render(&stated.formula)
        ));
    }
    if !last.context.is_subset(&stated.context) {
        return Err("the macro expansion needs hypotheses the stated context lacks".into());
    }
    Ok(())
}

fn resolve<'a>(prefix: &'a [Line], premises: &[usize]) -> Result<Vec<&'a Line>, String> {
    premises
        .iter()
        .map(|&i| {
            if i == 0 || i > prefix.len() {
                Err(format!("premise {i} is not an earlier line"))
            } else {
                Ok(&prefix[i - 1])
            }
        })
        .collect()
}

fn want(name: &str, premises: &[&Line], n: usize) -> Result<(), String> {
    if premises.len() == n {
        Ok(())
    } else {
        Err(format!(
            "{name} takes {n} premise(s), got {}",
            premises.len()
        ))
    }
}

/// Context-respecting rules: the conclusion context must contain every
/// hypothesis any premise depends on.
fn require_ctx(line: &Line, premises: &[&Line]) -> Result<(), String> {
    for p in premises {
        if !p.context.is_subset(&line.context) {
            return Err("the conclusion context must include every premise context".into());
        }
    }
    Ok(())
}

/// Theorem-only rules: every premise must carry an empty context.
fn require_theorems(name: &str, premises: &[&Line]) -> Result<(), String> {
    for p in premises {
        if !p.context.is_empty() {
            return Err(format!(
                "{name} applies to theorems only; its premise carries hypotheses"
            ));
        }
    }
    Ok(())
}

/// Left-nested spine peeled exactly `k` times: `((a & b) & c)` peeled
/// twice gives `[a, b, c]`; peeling more than the tree allows fails.
fn peel_exact(f: &Formula, k: usize) -> Option<Vec<&Formula>> {
    if k == 0 {
        return Some(vec![f]);
    }
    let Formula::And(l, r) = f else { return None };
    let mut out = peel_exact(l, k - 1)?;
    out.push(r);
    Some(out)
}

fn check_int_a2_gen(premise: &Line, line: &Line) -> Result<(), String> {
    const SHAPE: &str = "intA2gen turns `(f & b1 & ... & bn) -> c` into \
                         `(b1 & ~I b1 & ... & bn & ~I bn) -> [f] ~I c`";
    let (ante, rhs) = as_imp(&line.formula).ok_or(SHAPE)?;
    let Formula::Ann(content, body) = rhs else {
        return Err(SHAPE.into());
    };
    let Formula::Not(ig) = body.as_ref() else {
        return Err(SHAPE.into());
    };
    let Formula::Ign(chi) = ig.as_ref() else {
        return Err(SHAPE.into());
    };
    let (plhs, pchi) = as_imp(&premise.formula).ok_or(SHAPE)?;
    if pchi != chi.as_ref() {
        return Err("the premise consequent and the announced non-ignorance differ".into());
    }
    for n in 1..=64usize {
        let Some(parts) = peel_exact(ante, 2 * n - 1) else {
            break;
        };
        let pairs_ok = (1..=n).all(|j| {
            if let Formula::Not(inner) = parts[2 * j - 1] {
                if let Formula::Ign(x) = inner.as_ref() {
                    return x.as_ref() == parts[2 * j - 2];
                }
            }
            false
        });
        if !pairs_ok {
            continue;
        }
        let Some(pparts) = peel_exact(plhs, n) else {
            continue;
        };
        if pparts[0] != content.as_ref() {
            continue;
        }
        if (1..=n).all(|j| pparts[j] == parts[2 * (j - 1)]) {
            return Ok(());
        }
    }
    Err(SHAPE.into())
}

fn check_primitive_line(prefix: &[Line], line: &Line) -> Result<(), String> {
    match &line.justification {
        Justification::Assume => {
            if line.context.contains(&line.formula) {
                Ok(())
            } else {
                Err("the assumed formula is not among the line's hypotheses".into())
            }
        }
        Justification::Axiom { scheme, subst } => {
            if schemes::scheme_pattern(scheme).is_none() {
                return Err(format!("unknown axiom scheme `{scheme}`"));
            }
            if schemes::match_axiom(scheme, &line.formula).is_none() {
                return Err(format!(
                    "`{}` is not an instance of {scheme}",
                    render(&line.formula)
                ));
            }
            if let Some(s) = subst {
                let built = schemes::instantiate(scheme, s)?;
                if built != line.formula {
                    return Err(
                        "the explicit substitution does not produce the stated formula".into(),
                    );
                }
            }
            Ok(())
        }
        Justification::Rule { name, premises } => {
            let prems = resolve(prefix, premises)?;
            check_rule(name, &prems, line)
        }
        Justification::Macro { .. } => {
            Err("internal: macro line reached the primitive checker".into())
        }
    }
}

fn check_rule(name: &str, prems: &[&Line], line: &Line) -> Result<(), String> {
    match name {
        "MP" => {
            want(name, prems, 2)?;
            let (a, b) =
                as_imp(&prems[0].formula).ok_or("MP's first premise must be an implication")?;
            if prems[1].formula != *a {
                return Err("MP's second premise must match the antecedent".into());
            }
            if line.formula != *b {
                return Err("MP must conclude the consequent".into());
            }
            require_ctx(line, prems)
        }
        "Adj" => {
            want(name, prems, 2)?;
            if line.formula != prems[0].formula.clone().and(prems[1].formula.clone()) {
                return Err("Adj must conclude the conjunction of its premises, in order".into());
            }
            require_ctx(line, prems)
        }
        "dMP" => {
            want(name, prems, 2)?;
            let (x, im) = prems[0]
                .formula
                .as_or()
                .ok_or("dMP's first premise must be `x | (a -> b)`")?;
            let (a, b) = as_imp(im).ok_or("dMP's first premise must be `x | (a -> b)`")?;
            let (x2, a2) = prems[1]
                .formula
                .as_or()
                .ok_or("dMP's second premise must be `x | a`")?;
            if x2 != x || a2 != a {
                return Err("dMP premises must share the guard and the antecedent".into());
            }
            if line.formula != x.clone().or(b.clone()) {
                return Err("dMP must conclude the guard or the consequent".into());
            }
            require_ctx(line, prems)
        }
        "dTrans" => {
            want(name, prems, 2)?;
            let (r, im1) = prems[0]
                .formula
                .as_or()
                .ok_or("dTrans premises must be `r | (a -> b)` and `r | (b -> c)`")?;
            let (a, b) =
                as_imp(im1).ok_or("dTrans premises must be `r | (a -> b)` and `r | (b -> c)`")?;
            let (r2, im2) = prems[1]
                .formula
                .as_or()
                .ok_or("dTrans premises must be `r | (a -> b)` and `r | (b -> c)`")?;
            let (b2, c) =
                as_imp(im2).ok_or("dTrans premises must be `r | (a -> b)` and `r | (b -> c)`")?;
            if r2 != r || b2 != b {
                return Err("dTrans premises must share the guard and chain through `b`".into());
            }
            if line.formula != r.clone().or(a.clone().imp(c.clone())) {
                return Err("dTrans must conclude `r | (a -> c)`".into());
            }
            require_ctx(line, prems)
        }
        "dECQ" => {
            want(name, prems, 1)?;
            let (x, contra) = prems[0]
                .formula
                .as_or()
                .ok_or("dECQ's premise must be `x | (f & ~f)`")?;
            if as_contradiction(contra).is_none() {
                return Err("dECQ's premise must be `x | (f & ~f)`".into());
            }
            let (x2, _) = line
                .formula
                .as_or()
                .ok_or("dECQ must conclude a disjunction with the same guard")?;
            if x2 != x {
                return Err("dECQ must conclude a disjunction with the same guard".into());
            }
            require_ctx(line, prems)
        }
        "t1" => {
            want(name, prems, 0)?;
            let (a, b) = as_imp(&line.formula).ok_or("t1 concludes an identity `f -> f`")?;
            if a != b {
                return Err("t1 concludes an identity `f -> f`".into());
            }
            Ok(())
        }
        "IR" => {
            want(name, prems, 1)?;
            require_theorems(name, prems)?;
            let (a, b) = as_imp(&prems[0].formula).ok_or("IR's premise must be an implication")?;
            let expected = a.clone().imp(b.clone().ign().imp(a.clone().ign()));
            if line.formula != expected {
                return Err(format!("IR must conclude `{}`", render(&expected)));
            }
            Ok(())
        }
        "nec" => {
            want(name, prems, 1)?;
            require_theorems(name, prems)?;
            let Formula::Ann(_, body) = &line.formula else {
                return Err("nec must conclude an announcement of its premise".into());
            };
            if **body != prems[0].formula {
                return Err("nec must conclude an announcement of its premise".into());
            }
            Ok(())
        }
        "intA1" => {
            want(name, prems, 1)?;
            require_theorems(name, prems)?;
            let (a, b) =
                as_imp(&prems[0].formula).ok_or("intA1's premise must be an implication")?;
            let expected = Formula::ann(a.clone(), b.clone().ign().not());
            if line.formula != expected {
                return Err(format!("intA1 must conclude `{}`", render(&expected)));
            }
            Ok(())
        }
        "intA2" => {
            want(name, prems, 1)?;
            require_theorems(name, prems)?;
            let (lhs, c) = as_imp(&prems[0].formula)
                .ok_or("intA2's premise must have the shape `(f & b) -> c`")?;
            let Formula::And(a, b) = lhs else {
                return Err("intA2's premise must have the shape `(f & b) -> c`".into());
            };
            let expected = b
                .as_ref()
                .clone()
                .and(b.as_ref().clone().ign().not())
                .imp(Formula::ann(a.as_ref().clone(), c.clone().ign().not()));
            if line.formula != expected {
                return Err(format!("intA2 must conclude `{}`", render(&expected)));
            }
            Ok(())
        }
        "intA2gen" => {
            want(name, prems, 1)?;
            require_theorems(name, prems)?;
            check_int_a2_gen(prems[0], line)
        }
        "CN" => {
            want(name, prems, 1)?;
            let Formula::And(l, r) = &prems[0].formula else {
                return Err("CN's premise must be `I f & ~[g] I f`".into());
            };
            let Formula::Ign(psi) = l.as_ref() else {
                return Err("CN's premise must be `I f & ~[g] I f`".into());
            };
            let Formula::Not(inner) = r.as_ref() else {
                return Err("CN's premise must be `I f & ~[g] I f`".into());
            };
            let Formula::Ann(phi, ipsi) = inner.as_ref() else {
                return Err("CN's premise must be `I f & ~[g] I f`".into());
            };
            if **ipsi != psi.as_ref().clone().ign() {
                return Err("CN's premise must deny ignorance of the same formula".into());
            }
            if line.formula != phi.as_ref().clone().imp(psi.as_ref().clone()) {
                return Err("CN must conclude `g -> f`".into());
            }
            let expected_ctx: BTreeSet<Formula> = prems[0]
                .context
                .iter()
                .filter_map(|h| {
                    if let Formula::And(a, npart) = h {
                        if let Formula::Not(ig) = npart.as_ref() {
                            if let Formula::Ign(b) = ig.as_ref() {
                                if a == b {
                                    return Some(a.as_ref().clone());
                                }
                            }
                        }
                    }
                    None
                })
                .collect();
            if line.context != expected_ctx {
                return Err(
                    "CN's conclusion context must be exactly the non-ignored premise facts".into(),
                );
            }
            Ok(())
        }
        other => Err(format!("unknown rule `{other}`")),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_script, Derivation, Justification, Line};
    use super::*;
    use crate::formula::parse;

    fn checked(src: &str) -> Derivation {
        let d = parse_script(src).unwrap();
        check_derivation(&d).unwrap_or_else(|e| panic!("{e}\nscript:\n{src}"));
        d
    }

    #[test]
    fn a_false_antecedent_supports_any_conditional() {
        // ~p -> (p -> q), derived by discharging both hypotheses.
        checked(
            "\
1. [CTX: p; ~p] p  BY assume
2. [CTX: p; ~p] ~p  BY assume
3. [CTX: p; ~p] p & ~p  BY rule:Adj 1,2
4. [CTX: p; ~p] q  BY macro:ECQ 3
5. [CTX: ~p] p -> q  BY macro:DT 4
6. ~p -> (p -> q)  BY macro:DT 5
",
        );
    }

    #[test]
    fn discharging_replays_disjunctive_steps() {
        checked(
            "\
1. [CTX: r | (p -> q); r | p] r | (p -> q)  BY assume
2. [CTX: r | (p -> q); r | p] r | p  BY assume
3. [CTX: r | (p -> q); r | p] r | q  BY rule:dMP 1,2
4. [CTX: r | p] (r | (p -> q)) -> (r | q)  BY macro:DT 3
5. (r | p) -> ((r | (p -> q)) -> (r | q))  BY macro:DT 4
",
        );
    }

    #[test]
    fn discharging_keeps_theorem_rules_on_the_untouched_side() {
        checked(
            "\
1. (p & q) -> p  BY axiom:A1
2. (p & q) -> (I p -> I (p & q))  BY rule:IR 1
3. [CTX: s] s  BY assume
4. [CTX: s] s & ((p & q) -> (I p -> I (p & q)))  BY rule:Adj 3,2
5. s -> (s & ((p & q) -> (I p -> I (p & q))))  BY macro:DT 4
",
        );
    }

    #[test]
    fn theorem_only_rules_reject_hypothetical_premises() {
        let src = "\
1. [CTX: p -> q] p -> q  BY assume
2. [CTX: p -> q] p -> (I q -> I p)  BY rule:IR 1
";
        let d = parse_script(src).unwrap();
        let e = check_derivation(&d).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.reason.contains("theorems only"), "{e}");
    }

    #[test]
    fn a_hypothesis_cannot_be_discharged_across_cn() {
        let src = "\
1. [CTX: q & ~I q; I p & ~[s] I p] I p & ~[s] I p  BY assume
2. [CTX: q] s -> p  BY rule:CN 1
3. (q & ~I q) -> (s -> p)  BY macro:DT 2
";
        let d = parse_script(src).unwrap();
        let e = check_derivation(&d).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.reason.contains("across CN"), "{e}");
    }

    #[test]
    fn consistent_news_computes_its_conclusion_context() {
        checked(
            "\
1. [CTX: q & ~I q; I p & ~[s] I p] I p & ~[s] I p  BY assume
2. [CTX: q] s -> p  BY rule:CN 1
",
        );
        // The stated context must be exactly the transformed one.
        let src = "\
1. [CTX: q & ~I q; I p & ~[s] I p] I p & ~[s] I p  BY assume
2. [CTX: q & ~I q] s -> p  BY rule:CN 1
";
        let d = parse_script(src).unwrap();
        let e = check_derivation(&d).unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.reason.contains("exactly"), "{e}");
    }

    #[test]
    fn preserved_truths_accepts_the_two_fact_shape() {
        checked(
            "\
1. ((s & p) & q) -> (s & p)  BY axiom:A1
2. (s & p) -> p  BY axiom:A2
3. ((s & p) & q) -> p  BY macro:Trans 1,2
4. ((s & p) & q) -> q  BY axiom:A2
5. ((s & p) & q) -> (p & q)  BY macro:andIntro 3,4
6. (((p & ~I p) & q) & ~I q) -> [s] ~I (p & q)  BY rule:intA2gen 5
",
        );
    }

    #[test]
    fn single_fact_generalised_introspection_matches_the_base_rule() {
        let src = "\
1. (s & p) -> p  BY axiom:A2
2. (p & ~I p) -> [s] ~I p  BY rule:intA2gen 1
3. (p & ~I p) -> [s] ~I p  BY rule:intA2 1
";
        checked(src);
    }

    #[test]
    fn announcement_distributes_over_conjunction_via_macro() {
        checked("1. [s] (p & q) <-> ([s] p & [s] q)  BY macro:dAand\n");
        checked("1. [s] ((p & q) & r) <-> (([s] p & [s] q) & [s] r)  BY macro:AnnAndGen\n");
        checked("1. [s] p <-> ([s] p)  BY macro:AnnAndGen\n");
    }

    #[test]
    fn ignorance_collects_into_disjunctions_of_any_width() {
        checked("1. (I p & I q) -> I (p | q)  BY macro:IandGen\n");
        checked("1. ((I p & I q) & I r) -> I ((p | q) | r)  BY macro:IandGen\n");
        checked("1. I p -> I p  BY macro:IandGen\n");
        let bad = parse_script("1. (I p & I q) -> I (q | p)  BY macro:IandGen\n").unwrap();
        let e = check_derivation(&bad).unwrap_err();
        assert!(e.reason.contains("same order"), "{e}");
    }

    #[test]
    fn expansions_are_primitive_and_end_on_the_stated_formula() {
        let stated = Line {
            context: Default::default(),
            formula: parse("[s] (p & q) <-> ([s] p & [s] q)").unwrap(),
            justification: Justification::Macro {
                name: "dAand".into(),
                premises: vec![],
            },
        };
        let expansion = macros::expand_macro("dAand", &[], &[], &stated).unwrap();
        assert!(
            expansion.len() > 16,
            "expansions are primitive, so longer than the sketch"
        );
        assert!(expansion
            .iter()
            .all(|l| !matches!(l.justification, Justification::Macro { .. })));
        assert_eq!(expansion.last().unwrap().formula, stated.formula);
    }

    #[test]
    fn each_corrupted_line_is_the_reported_failure() {
        let src = "\
1. [CTX: p; ~p] p  BY assume
2. [CTX: p; ~p] ~p  BY assume
3. [CTX: p; ~p] p & ~p  BY rule:Adj 1,2
4. [CTX: p; ~p] q  BY macro:ECQ 3
5. [CTX: ~p] p -> q  BY macro:DT 4
6. ~p -> (p -> q)  BY macro:DT 5
";
        let good = parse_script(src).unwrap();
        for k in 0..good.lines.len() {
            let mut mutated = good.clone();
            mutated.lines[k].formula = mutated.lines[k].formula.clone().not();
            let e = check_derivation(&mutated).unwrap_err();
            // A corrupted assumption can still be assumable, but the damage
            // never passes unnoticed or gets blamed on an earlier line.
            assert!(
                e.line > k,
                "negating line {} reported too early: {e}",
                k + 1
            );
        }
    }

    #[test]
    fn premise_indices_must_point_backwards() {
        let src = "1. p -> p  BY rule:MP 1,1\n";
        let d = parse_script(src).unwrap();
        let e = check_derivation(&d).unwrap_err();
        assert_eq!(e.line, 1);
        assert!(e.reason.contains("not an earlier line"), "{e}");
    }
}
