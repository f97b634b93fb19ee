//! A three-valued modal logic of ignorance with additive public announcements.
//!
//! The object language has five primitive constructors: atoms, strong
//! negation `~`, conjunction `&`, a two-valued material implication `->`,
//! and an ignorance operator `I`. On top of the static fragment sits a
//! dynamic announcement operator `[f] g` ("after `f` is announced, `g`
//! holds") whose update semantics *adds* a world to the model instead of
//! deleting worlds, so that a truthful announcement of `p` leaves the
//! hearer non-ignorant of `p` rather than vacuously ignorant of it.
//!
//! The crate is organised in layers:
//!
//! - [`formula`]: syntax tree, parser, renderer, substitution.
//! - [`model`]: Kripke models with partial (gappy) valuations.
//! - [`semantics`]: static evaluation, both as a three-valued valuation
//!   and as a pair of satisfaction relations, plus theory slices.
//! - [`oracle`]: bounded countermodel search used to decide consequence
//!   and consistency questions during updates.
//! - [`update`]: the additive announcement transformer, dynamic
//!   evaluation, and the eliminative transformer kept for contrast.
//! - [`proofkit`]: axiom schemes, proof scripts, a checker, and macro
//!   expansion down to primitive inferences.
//! - [`extmodel`]: extended models that internalise announcements as
//!   extra transition relations, with the associated property checks.
//! - [`figures`]: small worked models and a claim gallery exercising the
//!   documented behaviour end to end.
//! - [`suites`]: seeded randomised validation suites.

pub mod extmodel;
pub mod figures;
pub mod formula;
pub mod model;
pub mod oracle;
pub mod proofkit;
pub mod semantics;
pub mod suites;
pub mod update;
