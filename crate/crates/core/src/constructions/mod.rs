//! Compilers between multihead automata and finite-state verifiers.
//!
//! * [`serialize_heads`] rewrites a 2-head deterministic automaton so that every
//!   step moves exactly one head, starting with head 1.
//! * [`compile_rt_verifier`] turns such an automaton into a real-time verifier
//!   with one coin whose certificate describes the hand-over points between the
//!   two heads; [`generate_rt_certificate`] produces that certificate.
//! * [`compile_oneway_verifier`] turns a k-head nondeterministic automaton into
//!   a one-way verifier that follows one random head along a certified
//!   computation history; [`generate_history_certificate`] produces the history.
//! * [`verifier_to_nfa`] runs all `2^r` coin outcomes of a one-way verifier side
//!   by side on a `2^r`-head nondeterministic automaton that guesses the
//!   certificate.

mod hardwire;
mod history;
mod realtime;
mod serialize;

use thiserror::Error;

use crate::automaton::AutomatonError;
use crate::tabulate::TabulateError;

pub use hardwire::verifier_to_nfa;
pub use history::{compile_oneway_verifier, generate_history_certificate, history_symbol, HistorySymbol};
pub use realtime::{compile_rt_verifier, generate_rt_certificate, joint_symbol, JointSymbol};
pub use serialize::{serialize_heads, structural_violations, SerializedAutomaton};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("expected a deterministic automaton")]
    NotDeterministic,
    #[error("expected {expected} heads, found {found}")]
    HeadCount { expected: usize, found: usize },
    #[error("automaton does not move exactly one head per step: {0}")]
    NotSerialized(String),
    #[error("the input is not accepted, so no certificate exists")]
    NotAccepted,
    #[error("expected a one-way verifier")]
    NotOneWay,
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error(transparent)]
    Tabulate(#[from] TabulateError),
}
