//! One-way multihead finite automata, finite-state verifiers with constant
//! randomness, compilers between the two, and exhaustive checkers that certify
//! completeness and soundness with exact dyadic probabilities.

pub mod automaton;
pub mod checker;
pub mod constructions;
pub mod dyadic;
pub mod format;
pub mod search;
pub mod symbol;
pub mod tabulate;
pub mod verifier;
pub mod zoo;

pub use automaton::{
    validate_automaton, AutomatonDef, AutomatonError, ComputationHistory, Configuration, MultiheadAutomaton, Outcome,
};
pub use dyadic::DyadicProbability;
pub use symbol::{HeadMove, Symbol, Tape};
pub use verifier::{
    conformance_check, CertKey, CertSym, Certificate, ConformanceReport, InputMode, TransitionKey, Verdict, VerifierDef, VerifierError,
    VerifierSpec,
};
pub use zoo::{builtin_machine, builtin_verifier, LanguageId, ZooError};
pub use constructions::{
    compile_oneway_verifier, compile_rt_verifier, generate_history_certificate, generate_rt_certificate,
    serialize_heads, verifier_to_nfa, ConstructionError, SerializedAutomaton,
};
pub use checker::{completeness_check, language_equivalence, soundness_check, CertBound, CertSearch, CheckReport};
pub use format::{parse_machine_file, print_machine, FormatError, Machine};
