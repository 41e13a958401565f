//! Explicit-state LTL model checking for finite-state workflow models.
//!
//! The pipeline is the classic automata-theoretic one: a specification is
//! negated and rewritten to negation normal form ([`ltl`]), translated into a
//! generalized Büchi automaton by tableau expansion and degeneralized
//! ([`automata`]), and composed with a finite transition system ([`kripke`])
//! whose product is searched for an accepting lasso by nested depth-first
//! search ([`checker`]). A failed check yields an ultimately periodic
//! counterexample that can be re-validated against an independent semantics
//! oracle ([`ltl::eval_lasso`]).
//!
//! The [`claimchain`] module ships a ready-made model of a blockchain
//! insurance claims workflow together with five temporal specifications and a
//! suite runner that checks them all.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod automata;
pub mod checker;
pub mod claimchain;
pub mod cli;
pub mod kripke;
pub mod ltl;
pub mod oracle;

pub use checker::{check, CheckMode, Outcome, Verdict};
pub use kripke::{Model, State};
pub use ltl::{Formula, Lasso};
