//! Materialises machines described by an abstract transition function.
//!
//! Hand-built protocols and compiled machines are easiest to state over a
//! structured state type. These helpers explore the states reachable from the
//! start state and emit an explicit, validated transition table.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use thiserror::Error;

use crate::automaton::{validate_automaton, AutomatonDef, MultiheadAutomaton, TransitionDef};
use crate::symbol::{scannable, HeadMove, Symbol};
use crate::verifier::{CertKey, CertSym, InputMode, VerifierDef, VerifierSpec};

/// Upper limit on materialised states.
pub const STATE_LIMIT: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TabulateError {
    #[error("construction needs more than {0} states")]
    TooManyStates(usize),
    #[error("two states share the name {0}")]
    NameClash(String),
    #[error("tabulated machine failed validation: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Target<S> {
    Accept,
    Reject,
    State(S),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VMove<S> {
    pub target: Target<S>,
    pub input: HeadMove,
    pub cert: HeadMove,
}

impl<S> VMove<S> {
    pub fn new(target: Target<S>, input: HeadMove, cert: HeadMove) -> Self {
        VMove { target, input, cert }
    }
}

/// Shape shared by every verifier a tabulation produces.
#[derive(Debug, Clone)]
pub struct VerifierShape {
    pub mode: InputMode,
    pub random_bits: u32,
    pub input_alphabet: Vec<char>,
    pub cert_alphabet: Vec<String>,
}

struct Interner<S> {
    ids: HashMap<S, usize>,
    order: Vec<S>,
    queue: VecDeque<usize>,
}

impl<S: Clone + Eq + Hash> Interner<S> {
    fn new() -> Self {
        Interner { ids: HashMap::new(), order: Vec::new(), queue: VecDeque::new() }
    }

    fn intern(&mut self, s: &S) -> Result<usize, TabulateError> {
        if let Some(&i) = self.ids.get(s) {
            return Ok(i);
        }
        if self.order.len() >= STATE_LIMIT {
            return Err(TabulateError::TooManyStates(STATE_LIMIT));
        }
        let i = self.order.len();
        self.ids.insert(s.clone(), i);
        self.order.push(s.clone());
        self.queue.push_back(i);
        Ok(i)
    }
}

fn unique_names<S>(order: &[S], name: &impl Fn(usize, &S) -> String, reserved: &[&str]) -> Result<Vec<String>, TabulateError> {
    let mut seen: std::collections::HashSet<String> = reserved.iter().map(|s| s.to_string()).collect();
    let mut out = Vec::with_capacity(order.len());
    for (i, s) in order.iter().enumerate() {
        let n = name(i, s);
        if !seen.insert(n.clone()) {
            return Err(TabulateError::NameClash(n));
        }
        out.push(n);
    }
    Ok(out)
}

/// Explores the states reachable from `start` and tabulates `delta` into a verifier.
/// States are named by `name`, which also receives the discovery index (0 for
/// `start`).
///
/// A `None` move (or a move into `Reject`) is left unlisted, which rejects. When all
/// certificate symbols, end-marker included, yield the same move, a single
/// wildcard entry is emitted instead of one per symbol.
pub fn tabulate_verifier<S, D, C, N>(
    shape: &VerifierShape,
    start: S,
    is_coin: C,
    delta: D,
    name: N,
) -> Result<VerifierSpec, TabulateError>
where
    S: Clone + Eq + Hash,
    D: Fn(&S, Symbol, CertSym, Option<bool>) -> Option<VMove<S>>,
    C: Fn(&S) -> bool,
    N: Fn(usize, &S) -> String,
{
    let symbols = scannable(&shape.input_alphabet);
    let cells: Vec<CertSym> =
        (0..shape.cert_alphabet.len()).map(CertSym::Sym).chain(std::iter::once(CertSym::End)).collect();
    let mut states = Interner::new();
    states.intern(&start)?;
    // (from, input, cert, bit, to-or-accept, moves); `to == None` means accept
    let mut rows: Vec<(usize, Symbol, CertKey, Option<bool>, Option<usize>, HeadMove, HeadMove)> = Vec::new();

    while let Some(id) = states.queue.pop_front() {
        let s = states.order[id].clone();
        let bits: &[Option<bool>] = if is_coin(&s) { &[Some(false), Some(true)] } else { &[None] };
        for &sym in &symbols {
            for &bit in bits {
                let moves: Vec<Option<VMove<S>>> = cells
                    .iter()
                    .map(|&c| delta(&s, sym, c, bit).filter(|m| m.target != Target::Reject))
                    .collect();
                let uniform = moves.windows(2).all(|w| w[0] == w[1]);
                let keyed: Vec<(CertKey, &VMove<S>)> = if uniform {
                    moves[0].iter().map(|m| (CertKey::Any, m)).collect()
                } else {
                    cells.iter().zip(&moves).filter_map(|(&c, m)| m.as_ref().map(|m| (c.into(), m))).collect()
                };
                for (key, m) in keyed {
                    let to = match &m.target {
                        Target::Accept => None,
                        Target::State(t) => Some(states.intern(t)?),
                        Target::Reject => unreachable!("filtered above"),
                    };
                    rows.push((id, sym, key, bit, to, m.input, m.cert));
                }
            }
        }
    }

    let names = unique_names(&states.order, &name, &["acc", "rej"])?;
    let mut def = VerifierDef::new(shape.mode, shape.random_bits, "", &[]);
    def.input_alphabet = shape.input_alphabet.clone();
    def.cert_alphabet = shape.cert_alphabet.clone();
    def.start = names[0].clone();
    for (s, n) in states.order.iter().zip(&names) {
        if is_coin(s) {
            def.coin_state(n);
        } else {
            def.det_state(n);
        }
    }
    def.halting_states();
    for (from, sym, key, bit, to, di, dc) in rows {
        let to = to.map_or("acc", |t| names[t].as_str());
        def.add(&names[from], sym, key, bit, to, di, dc);
    }
    VerifierSpec::new(&def).map_err(|r| TabulateError::Invalid(r.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AMove<S> {
    pub target: Target<S>,
    pub moves: Vec<HeadMove>,
}

/// Explores reachable states and tabulates a k-head automaton. Every listed move
/// is kept, including moves into the reject state.
pub fn tabulate_automaton<S, D, N>(
    heads: usize,
    alphabet: &[char],
    deterministic: bool,
    start: S,
    delta: D,
    name: N,
) -> Result<MultiheadAutomaton, TabulateError>
where
    S: Clone + Eq + Hash,
    D: Fn(&S, &[Symbol]) -> Vec<AMove<S>>,
    N: Fn(usize, &S) -> String,
{
    let symbols = scannable(alphabet);
    let tuples = crate::automaton::symbol_tuples(&symbols, heads);
    let mut states = Interner::new();
    states.intern(&start)?;
    let mut rows: Vec<(usize, Vec<Symbol>, Target<usize>, Vec<HeadMove>)> = Vec::new();
    while let Some(id) = states.queue.pop_front() {
        let s = states.order[id].clone();
        for scanned in &tuples {
            for m in delta(&s, scanned) {
                let to = match &m.target {
                    Target::Accept => Target::Accept,
                    Target::Reject => Target::Reject,
                    Target::State(t) => Target::State(states.intern(t)?),
                };
                rows.push((id, scanned.clone(), to, m.moves));
            }
        }
    }
    let names = unique_names(&states.order, &name, &["acc", "rej"])?;
    let mut def = AutomatonDef::new(heads, "", deterministic);
    def.alphabet = alphabet.to_vec();
    def.states = names.clone();
    def.states.push("acc".into());
    def.states.push("rej".into());
    def.start = names[0].clone();
    def.accept = "acc".into();
    def.reject = "rej".into();
    for (from, scanned, to, moves) in rows {
        let to = match to {
            Target::Accept => "acc".to_string(),
            Target::Reject => "rej".to_string(),
            Target::State(t) => names[t].clone(),
        };
        def.transitions.push(TransitionDef { from: names[from].clone(), scanned, to, moves });
    }
    if deterministic {
        def.fill_missing_with_reject();
    }
    validate_automaton(def).map_err(|e| TabulateError::Invalid(e.to_string()))
}
