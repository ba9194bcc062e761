//! One-way k-head finite automata, deterministic and nondeterministic.
//!
//! A machine starts with every head on the left end-marker of `▷ w ◁` and at each
//! step picks one of the moves listed for its current state and scanned symbols.
//! A run halts when it enters the accept or reject state, when a head moves past
//! the right end-marker, or when the listed set of moves is empty.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::symbol::{is_reserved_letter, scannable, HeadMove, Symbol, Tape};

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("unknown state: {0}")]
    UnknownState(String),
    #[error("duplicate state: {0}")]
    DuplicateState(String),
    #[error("accept and reject state must differ")]
    AcceptIsReject,
    #[error("machine must have at least one head")]
    NoHeads,
    #[error("letter {0:?} is reserved or repeated")]
    BadLetter(char),
    #[error("unknown symbol {0}")]
    UnknownSymbol(Symbol),
    #[error("arity mismatch: expected {expected} entries, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("halting state {0} has outgoing transitions")]
    TransitionFromHalt(String),
    #[error("nondeterministic entry for state {state} on {scanned}")]
    NondeterministicEntry { state: String, scanned: String },
    #[error("missing entry for state {state} on {scanned} in a deterministic machine")]
    MissingEntry { state: String, scanned: String },
    #[error("duplicate move for state {state} on {scanned}")]
    DuplicateMove { state: String, scanned: String },
    #[error("operation needs a deterministic machine")]
    NotDeterministic,
    #[error("input letter {0:?} is not in the alphabet")]
    LetterOutsideAlphabet(char),
}

/// Name-based description of a machine, as read from a file or assembled by a builder.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AutomatonDef {
    pub states: Vec<String>,
    pub alphabet: Vec<char>,
    pub heads: usize,
    pub start: String,
    pub accept: String,
    pub reject: String,
    pub deterministic: bool,
    pub transitions: Vec<TransitionDef>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionDef {
    pub from: String,
    pub scanned: Vec<Symbol>,
    pub to: String,
    pub moves: Vec<HeadMove>,
}

impl AutomatonDef {
    pub fn new(heads: usize, alphabet: &str, deterministic: bool) -> AutomatonDef {
        AutomatonDef {
            states: Vec::new(),
            alphabet: alphabet.chars().collect(),
            heads,
            start: String::new(),
            accept: String::new(),
            reject: String::new(),
            deterministic,
            transitions: Vec::new(),
        }
    }

    pub fn state(&mut self, name: &str) -> &mut Self {
        if !self.states.iter().any(|s| s == name) {
            self.states.push(name.to_string());
        }
        self
    }

    pub fn add(&mut self, from: &str, scanned: &[Symbol], to: &str, moves: &[HeadMove]) -> &mut Self {
        self.transitions.push(TransitionDef {
            from: from.to_string(),
            scanned: scanned.to_vec(),
            to: to.to_string(),
            moves: moves.to_vec(),
        });
        self
    }

    /// Sends every unlisted (state, scanned) pair of a non-halting state to the reject state.
    pub fn fill_missing_with_reject(&mut self) -> &mut Self {
        let listed: HashSet<(String, Vec<Symbol>)> =
            self.transitions.iter().map(|t| (t.from.clone(), t.scanned.clone())).collect();
        let symbols = scannable(&self.alphabet);
        let stay = vec![HeadMove::Stay; self.heads];
        let mut extra = Vec::new();
        for state in &self.states {
            if *state == self.accept || *state == self.reject {
                continue;
            }
            for scanned in symbol_tuples(&symbols, self.heads) {
                if !listed.contains(&(state.clone(), scanned.clone())) {
                    extra.push(TransitionDef {
                        from: state.clone(),
                        scanned,
                        to: self.reject.clone(),
                        moves: stay.clone(),
                    });
                }
            }
        }
        self.transitions.extend(extra);
        self
    }
}

/// All `k`-tuples over `symbols`, in lexicographic order.
pub fn symbol_tuples(symbols: &[Symbol], k: usize) -> Vec<Vec<Symbol>> {
    let mut out: Vec<Vec<Symbol>> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(out.len() * symbols.len());
        for prefix in &out {
            for &s in symbols {
                let mut t = prefix.clone();
                t.push(s);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Choice {
    pub target: StateId,
    pub moves: Vec<HeadMove>,
}

/// A validated machine. Construct it with [`validate_automaton`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiheadAutomaton {
    states: Vec<String>,
    alphabet: Vec<char>,
    heads: usize,
    start: StateId,
    accept: StateId,
    reject: StateId,
    deterministic: bool,
    transitions: BTreeMap<(StateId, Vec<Symbol>), Vec<Choice>>,
}

/// Checks every structural invariant and interns the state names.
pub fn validate_automaton(def: AutomatonDef) -> Result<MultiheadAutomaton, AutomatonError> {
    let mut index = HashMap::new();
    for (i, s) in def.states.iter().enumerate() {
        if index.insert(s.clone(), i).is_some() {
            return Err(AutomatonError::DuplicateState(s.clone()));
        }
    }
    let lookup = |name: &str| index.get(name).copied().ok_or_else(|| AutomatonError::UnknownState(name.to_string()));
    let start = lookup(&def.start)?;
    let accept = lookup(&def.accept)?;
    let reject = lookup(&def.reject)?;
    if accept == reject {
        return Err(AutomatonError::AcceptIsReject);
    }
    if def.heads == 0 {
        return Err(AutomatonError::NoHeads);
    }
    let mut seen = BTreeSet::new();
    for &c in &def.alphabet {
        if is_reserved_letter(c) || !seen.insert(c) {
            return Err(AutomatonError::BadLetter(c));
        }
    }

    let mut transitions: BTreeMap<(StateId, Vec<Symbol>), Vec<Choice>> = BTreeMap::new();
    for t in &def.transitions {
        let from = lookup(&t.from)?;
        let to = lookup(&t.to)?;
        for arity in [t.scanned.len(), t.moves.len()] {
            if arity != def.heads {
                return Err(AutomatonError::ArityMismatch { expected: def.heads, found: arity });
            }
        }
        for &s in &t.scanned {
            if let Symbol::Letter(c) = s {
                if !seen.contains(&c) {
                    return Err(AutomatonError::UnknownSymbol(s));
                }
            }
        }
        if from == accept || from == reject {
            return Err(AutomatonError::TransitionFromHalt(t.from.clone()));
        }
        let entry = transitions.entry((from, t.scanned.clone())).or_default();
        let choice = Choice { target: to, moves: t.moves.clone() };
        if entry.contains(&choice) {
            return Err(AutomatonError::DuplicateMove {
                state: t.from.clone(),
                scanned: render_symbols(&t.scanned),
            });
        }
        entry.push(choice);
    }

    if def.deterministic {
        let symbols = scannable(&def.alphabet);
        for (q, name) in def.states.iter().enumerate() {
            if q == accept || q == reject {
                continue;
            }
            for scanned in symbol_tuples(&symbols, def.heads) {
                match transitions.get(&(q, scanned.clone())).map(Vec::len) {
                    Some(1) => {}
                    Some(_) => {
                        return Err(AutomatonError::NondeterministicEntry {
                            state: name.clone(),
                            scanned: render_symbols(&scanned),
                        })
                    }
                    None => {
                        return Err(AutomatonError::MissingEntry {
                            state: name.clone(),
                            scanned: render_symbols(&scanned),
                        })
                    }
                }
            }
        }
    }

    Ok(MultiheadAutomaton {
        states: def.states,
        alphabet: def.alphabet,
        heads: def.heads,
        start,
        accept,
        reject,
        deterministic: def.deterministic,
        transitions,
    })
}

pub(crate) fn render_symbols(symbols: &[Symbol]) -> String {
    symbols.iter().map(Symbol::to_string).collect::<Vec<_>>().join(",")
}

/// State plus every head position; positions range over `0..=n+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: StateId,
    pub positions: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Accepted,
    Rejected,
    /// A deterministic run revisited a configuration.
    Looped,
    /// A head moved past the right end-marker without entering the accept state.
    FellOff,
    /// The set of available moves was empty.
    Stuck,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Outcome::Accepted => "Accepted",
            Outcome::Rejected => "Rejected",
            Outcome::Looped => "Looped",
            Outcome::FellOff => "FellOff",
            Outcome::Stuck => "Stuck",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Successor {
    Live(Configuration),
    /// `config` is the configuration entered, when one is formed (all heads still on the tape).
    Halt { outcome: Outcome, config: Option<Configuration> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComputationHistory {
    pub configs: Vec<Configuration>,
    pub outcome: Outcome,
}

/// One step of an accepting run: the configuration left and the index of the move taken.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunStep {
    pub config: Configuration,
    pub choice: usize,
}

impl MultiheadAutomaton {
    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name)
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn head_count(&self) -> usize {
        self.heads
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn accept(&self) -> StateId {
        self.accept
    }

    pub fn reject(&self) -> StateId {
        self.reject
    }

    pub fn is_deterministic(&self) -> bool {
        self.deterministic
    }

    pub fn is_halting(&self, q: StateId) -> bool {
        q == self.accept || q == self.reject
    }

    /// The listed moves for `(q, scanned)`; an unlisted pair has no moves.
    pub fn choices(&self, q: StateId, scanned: &[Symbol]) -> &[Choice] {
        self.transitions.get(&(q, scanned.to_vec())).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn transitions(&self) -> impl Iterator<Item = (&(StateId, Vec<Symbol>), &Vec<Choice>)> {
        self.transitions.iter()
    }

    /// Largest number of alternatives offered by any single entry.
    pub fn max_choices(&self) -> usize {
        self.transitions.values().map(Vec::len).max().unwrap_or(0)
    }

    pub fn to_def(&self) -> AutomatonDef {
        let name = |q: StateId| self.states[q].clone();
        let mut transitions = Vec::new();
        for ((q, scanned), choices) in &self.transitions {
            for c in choices {
                transitions.push(TransitionDef {
                    from: name(*q),
                    scanned: scanned.clone(),
                    to: name(c.target),
                    moves: c.moves.clone(),
                });
            }
        }
        AutomatonDef {
            states: self.states.clone(),
            alphabet: self.alphabet.clone(),
            heads: self.heads,
            start: name(self.start),
            accept: name(self.accept),
            reject: name(self.reject),
            deterministic: self.deterministic,
            transitions,
        }
    }

    /// Builds the input tape, rejecting letters outside the alphabet.
    pub fn tape(&self, word: &str) -> Result<Tape, AutomatonError> {
        let letters: Vec<char> = word.chars().collect();
        if let Some(&c) = letters.iter().find(|c| !self.alphabet.contains(c)) {
            return Err(AutomatonError::LetterOutsideAlphabet(c));
        }
        Ok(Tape::new(&letters))
    }

    pub fn initial(&self) -> Configuration {
        Configuration { state: self.start, positions: vec![0; self.heads] }
    }

    pub fn scanned(&self, tape: &Tape, c: &Configuration) -> Vec<Symbol> {
        c.positions.iter().map(|&p| tape.at(p)).collect()
    }

    /// Applies one move to a live configuration.
    pub fn apply(&self, tape: &Tape, c: &Configuration, choice: &Choice) -> Successor {
        let positions: Vec<usize> =
            c.positions.iter().zip(&choice.moves).map(|(&p, m)| p + m.offset()).collect();
        let off_tape = positions.iter().any(|&p| p > tape.last());
        if choice.target == self.accept {
            let config = (!off_tape).then_some(Configuration { state: choice.target, positions });
            return Successor::Halt { outcome: Outcome::Accepted, config };
        }
        if off_tape {
            return Successor::Halt { outcome: Outcome::FellOff, config: None };
        }
        let next = Configuration { state: choice.target, positions };
        if choice.target == self.reject {
            Successor::Halt { outcome: Outcome::Rejected, config: Some(next) }
        } else {
            Successor::Live(next)
        }
    }

    /// One result per listed move, or a single `Stuck` when there is none.
    pub fn successors(&self, tape: &Tape, c: &Configuration) -> Vec<Successor> {
        let scanned = self.scanned(tape, c);
        let choices = self.choices(c.state, &scanned);
        if choices.is_empty() {
            return vec![Successor::Halt { outcome: Outcome::Stuck, config: None }];
        }
        choices.iter().map(|ch| self.apply(tape, c, ch)).collect()
    }

    /// Follows the unique move until the run halts or a configuration repeats.
    pub fn run_deterministic(&self, tape: &Tape) -> Result<ComputationHistory, AutomatonError> {
        if !self.deterministic {
            return Err(AutomatonError::NotDeterministic);
        }
        Ok(self.trace_first_choice(tape))
    }

    /// Follows the first listed move at every step. For deterministic machines this
    /// is the run; the configuration space bounds its length by `|Q|·(n+2)^k + 1`.
    pub(crate) fn trace_first_choice(&self, tape: &Tape) -> ComputationHistory {
        let mut current = self.initial();
        if self.is_halting(current.state) {
            let outcome = if current.state == self.accept { Outcome::Accepted } else { Outcome::Rejected };
            return ComputationHistory { configs: vec![current], outcome };
        }
        let mut seen = HashSet::new();
        let mut configs = Vec::new();
        loop {
            if !seen.insert(current.clone()) {
                return ComputationHistory { configs, outcome: Outcome::Looped };
            }
            configs.push(current.clone());
            let scanned = self.scanned(tape, &current);
            let Some(choice) = self.choices(current.state, &scanned).first() else {
                return ComputationHistory { configs, outcome: Outcome::Stuck };
            };
            match self.apply(tape, &current, choice) {
                Successor::Live(next) => current = next,
                Successor::Halt { outcome, config } => {
                    configs.extend(config);
                    return ComputationHistory { configs, outcome };
                }
            }
        }
    }

    /// Existential acceptance: is the accept state reachable from the initial configuration?
    pub fn accepts(&self, word: &str) -> Result<bool, AutomatonError> {
        Ok(self.accepts_tape(&self.tape(word)?))
    }

    pub fn accepts_tape(&self, tape: &Tape) -> bool {
        self.find_accepting_run(tape).is_some()
    }

    /// Breadth-first search of the configuration graph. Returns a shortest accepting
    /// run as the list of (configuration, move index) pairs it passes through.
    pub fn find_accepting_run(&self, tape: &Tape) -> Option<Vec<RunStep>> {
        let init = self.initial();
        if init.state == self.accept {
            return Some(Vec::new());
        }
        if init.state == self.reject {
            return None;
        }
        let mut parent: HashMap<Configuration, Option<(Configuration, usize)>> = HashMap::new();
        parent.insert(init.clone(), None);
        let mut queue = VecDeque::from([init]);
        while let Some(c) = queue.pop_front() {
            let scanned = self.scanned(tape, &c);
            for (i, choice) in self.choices(c.state, &scanned).iter().enumerate() {
                match self.apply(tape, &c, choice) {
                    Successor::Live(next) => {
                        if !parent.contains_key(&next) {
                            parent.insert(next.clone(), Some((c.clone(), i)));
                            queue.push_back(next);
                        }
                    }
                    Successor::Halt { outcome: Outcome::Accepted, .. } => {
                        let mut steps = vec![RunStep { config: c.clone(), choice: i }];
                        let mut cur = c.clone();
                        while let Some(Some((prev, j))) = parent.get(&cur) {
                            steps.push(RunStep { config: prev.clone(), choice: *j });
                            cur = prev.clone();
                        }
                        steps.reverse();
                        return Some(steps);
                    }
                    Successor::Halt { .. } => {}
                }
            }
        }
        None
    }
}
