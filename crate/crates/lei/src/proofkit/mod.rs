//! Axiom schemes, proof scripts, a line-by-line checker, and macro
//! expansion down to primitive inferences.
//!
//! A derivation is a numbered list of lines. Each line states a context
//! (a finite set of hypotheses), a formula, and a justification:
//!
//! - `assume`: the formula is one of the line's own hypotheses;
//! - `axiom:ID`, optionally with an explicit substitution;
//! - `rule:NAME i,j`: a primitive inference from earlier lines;
//! - `macro:NAME i,j`: a derived inference; the checker validates it by
//!   expanding it into primitive lines and checking those.
//!
//! Contexts make hypothetical reasoning explicit, so the deduction
//! theorem can be a macro (`macro:DT`) that really replays the argument:
//! the expansion rebuilds every line of the supporting derivation in a
//! `d -> _` lifted form. Rules that are only sound for theorems (`IR`,
//! `nec`, `intA1`, `intA2`, `intA2gen`) insist on empty premise
//! contexts, and the checker refuses to discharge a hypothesis across
//! `CN`, which is not closed under extra premises.
//!
//! The identity `phi -> phi` is not derivable from the axiom schemes
//! alone (every rule that could conclude it needs it first), so the
//! checker accepts it natively as the zero-premise `rule:t1`. Everything
//! else that scripts cite as a macro genuinely expands.

mod checker;
mod macros;
mod schemes;
mod script;

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::formula::Formula;

pub use checker::check_derivation;
pub use macros::{expand_macro, macro_names};
pub use schemes::{instantiate, match_axiom, scheme_ids, scheme_pattern};
pub use script::{parse_script, render_script};

/// Substitution instantiating an axiom scheme.
///
/// `formulas` binds the formula metavariables `phi`, `psi`, `chi`,
/// `rho`; `atoms` binds the schematic atom slots `p` and `q`, which only
/// match propositional atoms and must be distinct where a scheme uses
/// both.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Subst {
    /// Bindings for `phi`, `psi`, `chi`, `rho`.
    pub formulas: BTreeMap<String, Formula>,
    /// Bindings for the schematic atoms `p`, `q`.
    pub atoms: BTreeMap<String, String>,
}

/// How a single derivation line is justified.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    /// Instance of a named axiom scheme. The substitution is optional;
    /// when present it must reproduce the stated formula exactly.
    Axiom {
        /// Scheme identifier, e.g. `A11` or `fact`.
        scheme: String,
        /// Explicit instantiation, verified against the stated formula.
        subst: Option<Subst>,
    },
    /// The formula is one of the line's own hypotheses.
    Assume,
    /// Primitive rule applied to strictly earlier lines (1-based).
    Rule {
        /// Rule name, e.g. `MP` or `CN`.
        name: String,
        /// 1-based indices of the premise lines.
        premises: Vec<usize>,
    },
    /// Derived rule checked by expansion into primitive lines.
    Macro {
        /// Macro name, e.g. `Trans` or `DT`.
        name: String,
        /// 1-based indices of the premise lines.
        premises: Vec<usize>,
    },
}

/// One derivation line: hypotheses, stated formula, justification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    /// Hypotheses the line depends on.
    pub context: BTreeSet<Formula>,
    /// The formula the line asserts.
    pub formula: Formula,
    /// Why the line holds.
    pub justification: Justification,
}

/// A whole derivation, lines numbered from 1 in order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Derivation {
    /// The lines, index 0 holding line 1.
    pub lines: Vec<Line>,
}

/// First problem found while checking a derivation.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("line {line}: {reason}")]
pub struct CheckError {
    /// 1-based number of the offending line.
    pub line: usize,
    /// Human-readable description of the problem.
    pub reason: String,
}

/// Problem found while parsing a proof script.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("script line {line}: {message}")]
pub struct ScriptError {
    /// 1-based source line number (comments and blanks included).
    pub line: usize,
    /// What went wrong.
    pub message: String,
}

/// Names of the primitive rules the checker accepts.
pub fn rule_names() -> &'static [&'static str] {
    &[
        "MP", "Adj", "dMP", "dTrans", "dECQ", "t1", "IR", "nec", "intA1", "intA2", "intA2gen", "CN",
    ]
}
