use std::fmt;
use std::path::Path;

use rtverify::checker::Membership;
use rtverify::{builtin_machine, builtin_verifier, parse_machine_file, LanguageId, Machine, MultiheadAutomaton, VerifierSpec};

/// Any failure that should end the program with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub fn fail<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

macro_rules! impl_from {
    ($($t:ty),*) => {$(
        impl From<$t> for UsageError {
            fn from(e: $t) -> Self {
                UsageError(e.to_string())
            }
        }
    )*};
}

impl_from!(
    std::io::Error,
    rtverify::FormatError,
    rtverify::ZooError,
    rtverify::VerifierError,
    rtverify::AutomatonError,
    rtverify::ConstructionError,
    rtverify::checker::CheckError
);

/// A machine named on the command line, with the language it belongs to when it is a built-in verifier.
pub struct Loaded {
    pub machine: Machine,
    pub language: Option<LanguageId>,
}

/// Reads a machine file, or falls back to a built-in identifier when no such file exists.
pub fn load(arg: &str) -> Result<Loaded, UsageError> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        let machine = parse_machine_file(&text).map_err(|e| UsageError(format!("{arg}: {e}")))?;
        return Ok(Loaded { machine, language: None });
    }
    if let Ok(m) = builtin_machine(arg) {
        return Ok(Loaded { machine: Machine::Automaton(m), language: None });
    }
    match builtin_verifier(arg) {
        Ok(v) => Ok(Loaded { machine: Machine::Verifier(v), language: verifier_language(arg) }),
        Err(_) => fail(format!("{arg}: neither a readable machine file nor a built-in (see `rtverify zoo --list`)")),
    }
}

fn verifier_language(id: &str) -> Option<LanguageId> {
    if let Some(n) = id.strip_prefix("ln-rt:") {
        return n.parse().ok().map(LanguageId::Mirror);
    }
    LanguageId::all_fixed().into_iter().find(|l| l.verifier_id().as_deref() == Some(id))
}

pub fn load_automaton(arg: &str) -> Result<MultiheadAutomaton, UsageError> {
    match load(arg)?.machine {
        Machine::Automaton(a) => Ok(a),
        Machine::Verifier(_) => fail(format!("{arg}: expected an automaton, found a verifier")),
    }
}

pub fn load_verifier(arg: &str) -> Result<(VerifierSpec, Option<LanguageId>), UsageError> {
    let l = load(arg)?;
    match l.machine {
        Machine::Verifier(v) => Ok((v, l.language)),
        Machine::Automaton(_) => fail(format!("{arg}: expected a verifier, found an automaton")),
    }
}

/// Membership reference: a language identifier, or any automaton.
pub enum Reference {
    Language(LanguageId),
    Automaton(MultiheadAutomaton),
}

impl Reference {
    pub fn parse(arg: &str) -> Result<Reference, UsageError> {
        if !Path::new(arg).is_file() {
            if let Ok(l) = arg.parse::<LanguageId>() {
                return Ok(Reference::Language(l));
            }
        }
        load_automaton(arg).map(Reference::Automaton).map_err(|e| UsageError(format!("{e}; not a language either")))
    }

    pub fn membership(&self) -> &dyn Membership {
        match self {
            Reference::Language(l) => l,
            Reference::Automaton(a) => a,
        }
    }
}
