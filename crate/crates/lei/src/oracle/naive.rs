//! A deliberately artless satisfiability search.
//!
//! This enumerator exists to cross-check the main search in
//! [`crate::oracle`]. It shares none of that module's machinery: no pin
//! propagation, no canonical shapes, no compiled formulas. It simply
//! materialises every candidate model up to the world bound, including
//! self-loops and every choice of point, and evaluates constraints with
//! the reference semantics. It is slow and it is supposed to be; its only
//! virtue is that it is too simple to share a bug with the fast path.

use std::collections::BTreeSet;

use crate::formula::Formula;
use crate::model::{KripkeModel, PointedModel, TruthValue};
use crate::oracle::{OracleError, SearchVerdict};
use crate::semantics;

/// Exhaustively searches pointed models with at most `max_worlds` worlds
/// for one making every formula in `needs_true` true and every formula in
/// `needs_not_true` not true. Gives up after `max_candidates` models.
pub fn naive_satisfiable(
    needs_true: &[Formula],
    needs_not_true: &[Formula],
    max_worlds: usize,
    max_candidates: u64,
) -> Result<SearchVerdict, OracleError> {
    let mut atoms: BTreeSet<String> = BTreeSet::new();
    for f in needs_true.iter().chain(needs_not_true) {
        if !f.is_static() {
            return Err(OracleError::DynamicFormula(f.clone()));
        }
        atoms.extend(f.atoms());
    }
    let atom_names: Vec<String> = atoms.into_iter().collect();
    let vec_count = 3usize.pow(atom_names.len() as u32);

    let mut seen: u64 = 0;
    for n in 1..=max_worlds {
        for point in 0..n {
            // Every function from worlds to valuation vectors, as digits
            // of a base-`vec_count` counter with world 0 least significant.
            let mut vals = vec![0usize; n];
            'vals: loop {
                let relation_bits = n * n;
                for mask in 0u64..(1u64 << relation_bits) {
                    if seen >= max_candidates {
                        return Ok(SearchVerdict::Unknown);
                    }
                    seen += 1;
                    let candidate = build(&atom_names, &vals, mask, n);
                    let point_id = format!("w{point}");
                    let ok = needs_true
                        .iter()
                        .all(|f| semantics::sat(&candidate, &point_id, f).unwrap())
                        && needs_not_true
                            .iter()
                            .all(|f| !semantics::sat(&candidate, &point_id, f).unwrap());
                    if ok {
                        let witness = PointedModel::new(candidate, point_id).expect("point exists");
                        return Ok(SearchVerdict::Sat(witness));
                    }
                }
                let mut w = 0;
                loop {
                    if w == n {
                        break 'vals;
                    }
                    vals[w] += 1;
                    if vals[w] < vec_count {
                        break;
                    }
                    vals[w] = 0;
                    w += 1;
                }
            }
        }
    }
    Ok(SearchVerdict::UnsatWithin)
}

fn build(atom_names: &[String], vals: &[usize], mask: u64, n: usize) -> KripkeModel {
    let mut m = KripkeModel::new("naive");
    for w in 0..n {
        m.add_world(format!("w{w}")).expect("generated id");
    }
    for (w, val) in vals.iter().enumerate() {
        let mut v = *val;
        for name in atom_names {
            let value = match v % 3 {
                0 => TruthValue::True,
                1 => TruthValue::False,
                _ => TruthValue::Gap,
            };
            v /= 3;
            if value != TruthValue::Gap {
                m.set_atom(&format!("w{w}"), name.clone(), value)
                    .expect("valid atom");
            }
        }
    }
    let mut bit = 0;
    for i in 0..n {
        for j in 0..n {
            if mask & (1 << bit) != 0 {
                m.add_edge(&format!("w{i}"), &format!("w{j}"))
                    .expect("edge");
            }
            bit += 1;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn finds_witnesses_and_contradictions() {
        let p = parse("p").unwrap();
        let not_p = parse("~p").unwrap();
        assert!(matches!(
            naive_satisfiable(std::slice::from_ref(&p), &[], 2, 1_000_000).unwrap(),
            SearchVerdict::Sat(_)
        ));
        assert_eq!(
            naive_satisfiable(&[p.clone(), not_p], &[], 2, 1_000_000).unwrap(),
            SearchVerdict::UnsatWithin
        );
        assert_eq!(
            naive_satisfiable(
                std::slice::from_ref(&p),
                std::slice::from_ref(&p),
                2,
                1_000_000
            )
            .unwrap(),
            SearchVerdict::UnsatWithin
        );
    }

    #[test]
    fn respects_the_candidate_cap() {
        let f = parse("~I p").unwrap();
        assert_eq!(
            naive_satisfiable(&[f], &[], 2, 1).unwrap(),
            SearchVerdict::Unknown
        );
    }

    #[test]
    fn self_loops_are_enumerated_but_harmless() {
        // `p & I p` needs no successor; the single-world model with a
        // self-loop appears in the space and still satisfies it.
        let f = parse("p & I p").unwrap();
        assert!(matches!(
            naive_satisfiable(&[f], &[], 1, 1_000_000).unwrap(),
            SearchVerdict::Sat(_)
        ));
    }
}
