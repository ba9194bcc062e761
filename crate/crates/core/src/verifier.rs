//! Finite-state verifiers with a one-way certificate tape and a fixed coin budget.
//!
//! Coin states consume one random bit per transition, in order; deterministic
//! states ignore the bits. The input head starts on `▷`; the certificate tape
//! holds `c ◁` and its head starts on the first certificate symbol. An unlisted
//! transition rejects. Moving either head past its right end-marker rejects
//! unless the move enters the accept state.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::automaton::StateId;
use crate::dyadic::DyadicProbability;
use crate::symbol::{is_reserved_letter, HeadMove, Symbol, Tape};

/// Largest coin budget accepted by the validator.
pub const MAX_RANDOM_BITS: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InputMode {
    /// The input head moves right on every transition.
    RealTime,
    /// The input head may pause.
    OneWay,
}

impl fmt::Display for InputMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InputMode::RealTime => "rt",
            InputMode::OneWay => "oneway",
        })
    }
}

/// What the certificate head scans: a symbol of Γ (by index) or the end-marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CertSym {
    Sym(usize),
    End,
}

/// Certificate column of a transition key. `Any` matches every scanned symbol
/// (end-marker included) that has no entry of its own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CertKey {
    Sym(usize),
    End,
    Any,
}

impl From<CertSym> for CertKey {
    fn from(c: CertSym) -> CertKey {
        match c {
            CertSym::Sym(i) => CertKey::Sym(i),
            CertSym::End => CertKey::End,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Action {
    pub target: StateId,
    pub input: HeadMove,
    pub cert: HeadMove,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VTransitionDef {
    pub from: String,
    pub input: Symbol,
    pub cert: CertKey,
    /// `Some` for coin-state transitions.
    pub bit: Option<bool>,
    pub to: String,
    pub input_move: HeadMove,
    pub cert_move: HeadMove,
}

/// Name-based verifier description. Certificate keys index into `cert_alphabet`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifierDef {
    pub states: Vec<String>,
    pub coin_states: Vec<String>,
    pub det_states: Vec<String>,
    pub start: String,
    pub accept: String,
    pub reject: String,
    pub input_alphabet: Vec<char>,
    pub cert_alphabet: Vec<String>,
    pub mode: InputMode,
    pub random_bits: u32,
    pub transitions: Vec<VTransitionDef>,
}

impl VerifierDef {
    pub fn new(mode: InputMode, random_bits: u32, alphabet: &str, cert_alphabet: &[&str]) -> VerifierDef {
        VerifierDef {
            states: Vec::new(),
            coin_states: Vec::new(),
            det_states: Vec::new(),
            start: String::new(),
            accept: "acc".into(),
            reject: "rej".into(),
            input_alphabet: alphabet.chars().collect(),
            cert_alphabet: cert_alphabet.iter().map(|s| s.to_string()).collect(),
            mode,
            random_bits,
            transitions: Vec::new(),
        }
    }

    fn declare(&mut self, name: &str) {
        if !self.states.iter().any(|s| s == name) {
            self.states.push(name.to_string());
        }
    }

    pub fn coin_state(&mut self, name: &str) -> &mut Self {
        self.declare(name);
        self.coin_states.push(name.to_string());
        self
    }

    pub fn det_state(&mut self, name: &str) -> &mut Self {
        self.declare(name);
        self.det_states.push(name.to_string());
        self
    }

    /// Declares the two halting states under their current names.
    pub fn halting_states(&mut self) -> &mut Self {
        let (a, r) = (self.accept.clone(), self.reject.clone());
        self.declare(&a);
        self.declare(&r);
        self
    }

    pub fn cert_index(&self, token: &str) -> Option<usize> {
        self.cert_alphabet.iter().position(|t| t == token)
    }

    #[allow(clippy::too_many_arguments)]
    pub fn add(
        &mut self,
        from: &str,
        input: Symbol,
        cert: CertKey,
        bit: Option<bool>,
        to: &str,
        input_move: HeadMove,
        cert_move: HeadMove,
    ) -> &mut Self {
        self.transitions.push(VTransitionDef {
            from: from.to_string(),
            input,
            cert,
            bit,
            to: to.to_string(),
            input_move,
            cert_move,
        });
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A state is listed as both coin and deterministic, or a halting state is listed as either.
    Partition(String),
    /// A non-halting state is neither coin nor deterministic.
    Unclassified(String),
    UnknownState(String),
    DuplicateState(String),
    AcceptIsReject,
    BadLetter(char),
    BadCertToken(String),
    UnknownSymbol(Symbol),
    UnknownCertIndex(usize),
    TransitionFromHalt(String),
    /// Coin transitions need a bit, deterministic ones must not carry one.
    BitMismatch(String),
    DuplicateTransition(String),
    /// Real-time verifier with a transition that leaves the input head in place.
    PausingTransition(String),
    BudgetTooLarge(u32),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Partition(s) => write!(f, "partition: state {s} is in more than one class"),
            Violation::Unclassified(s) => write!(f, "partition: state {s} is neither coin nor deterministic"),
            Violation::UnknownState(s) => write!(f, "unknown state: {s}"),
            Violation::DuplicateState(s) => write!(f, "duplicate state: {s}"),
            Violation::AcceptIsReject => write!(f, "accept and reject state must differ"),
            Violation::BadLetter(c) => write!(f, "letter {c:?} is reserved or repeated"),
            Violation::BadCertToken(t) => write!(f, "certificate token {t:?} is reserved or repeated"),
            Violation::UnknownSymbol(s) => write!(f, "unknown symbol {s}"),
            Violation::UnknownCertIndex(i) => write!(f, "unknown certificate symbol #{i}"),
            Violation::TransitionFromHalt(s) => write!(f, "halting state {s} has outgoing transitions"),
            Violation::BitMismatch(s) => write!(f, "bit column does not match the class of state {s}"),
            Violation::DuplicateTransition(s) => write!(f, "duplicate transition: {s}"),
            Violation::PausingTransition(s) => write!(f, "pausing transition in a real-time verifier: {s}"),
            Violation::BudgetTooLarge(r) => write!(f, "random budget {r} exceeds {MAX_RANDOM_BITS}"),
        }
    }
}

/// Result of a structural audit. Empty means the description is a valid verifier.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConformanceReport {
    pub violations: Vec<Violation>,
}

impl ConformanceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ConformanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return f.write_str("pass");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConformanceReport {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionKey {
    pub state: StateId,
    pub input: Symbol,
    pub cert: CertKey,
    pub bit: Option<bool>,
}

/// A validated verifier. Construct it with [`VerifierSpec::new`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifierSpec {
    states: Vec<String>,
    coin: Vec<bool>,
    start: StateId,
    accept: StateId,
    reject: StateId,
    input_alphabet: Vec<char>,
    cert_alphabet: Vec<String>,
    mode: InputMode,
    random_bits: u32,
    table: BTreeMap<TransitionKey, Action>,
    index: HashMap<TransitionKey, Action>,
}

/// Audits a description against every structural invariant of a verifier.
pub fn conformance_check(def: &VerifierDef) -> ConformanceReport {
    build(def).err().unwrap_or_default()
}

fn build(def: &VerifierDef) -> Result<VerifierSpec, ConformanceReport> {
    let mut v = Vec::new();
    let mut index = HashMap::new();
    for (i, s) in def.states.iter().enumerate() {
        if index.insert(s.as_str(), i).is_some() {
            v.push(Violation::DuplicateState(s.clone()));
        }
    }
    let id = |name: &str, v: &mut Vec<Violation>| -> Option<StateId> {
        let found = index.get(name).copied();
        if found.is_none() {
            v.push(Violation::UnknownState(name.to_string()));
        }
        found
    };
    let start = id(&def.start, &mut v);
    let accept = id(&def.accept, &mut v);
    let reject = id(&def.reject, &mut v);
    if def.accept == def.reject {
        v.push(Violation::AcceptIsReject);
    }
    if def.random_bits > MAX_RANDOM_BITS {
        v.push(Violation::BudgetTooLarge(def.random_bits));
    }

    let n = def.states.len();
    let mut class = vec![0u8; n];
    for h in [accept, reject].into_iter().flatten() {
        class[h] |= 4;
    }
    for (list, bit) in [(&def.coin_states, 1u8), (&def.det_states, 2u8)] {
        for s in list {
            if let Some(q) = id(s, &mut v) {
                if class[q] != 0 && !v.contains(&Violation::Partition(s.clone())) {
                    v.push(Violation::Partition(s.clone()));
                }
                class[q] |= bit;
            }
        }
    }
    for (q, s) in def.states.iter().enumerate() {
        if class[q] == 0 {
            v.push(Violation::Unclassified(s.clone()));
        }
    }

    let mut letters = BTreeSet::new();
    for &c in &def.input_alphabet {
        if is_reserved_letter(c) || !letters.insert(c) {
            v.push(Violation::BadLetter(c));
        }
    }
    let mut tokens = BTreeSet::new();
    for t in &def.cert_alphabet {
        let reserved = t.is_empty() || t == "$" || t == "*" || t.chars().any(char::is_whitespace);
        if reserved || !tokens.insert(t.as_str()) {
            v.push(Violation::BadCertToken(t.clone()));
        }
    }

    let mut table = BTreeMap::new();
    for t in &def.transitions {
        let (Some(from), Some(to)) = (id(&t.from, &mut v), id(&t.to, &mut v)) else {
            continue;
        };
        let describe = || format!("{} {} {:?} {:?}", t.from, t.input, t.cert, t.bit);
        if let Symbol::Letter(c) = t.input {
            if !letters.contains(&c) {
                v.push(Violation::UnknownSymbol(t.input));
            }
        }
        if let CertKey::Sym(i) = t.cert {
            if i >= def.cert_alphabet.len() {
                v.push(Violation::UnknownCertIndex(i));
            }
        }
        if class[from] & 4 != 0 {
            v.push(Violation::TransitionFromHalt(t.from.clone()));
            continue;
        }
        let is_coin = class[from] & 1 != 0;
        if is_coin != t.bit.is_some() {
            v.push(Violation::BitMismatch(t.from.clone()));
        }
        if def.mode == InputMode::RealTime && t.input_move == HeadMove::Stay {
            v.push(Violation::PausingTransition(describe()));
        }
        let key = TransitionKey { state: from, input: t.input, cert: t.cert, bit: t.bit };
        let action = Action { target: to, input: t.input_move, cert: t.cert_move };
        if table.insert(key, action).is_some() {
            v.push(Violation::DuplicateTransition(describe()));
        }
    }

    if !v.is_empty() {
        return Err(ConformanceReport { violations: v });
    }
    let index = table.iter().map(|(k, a)| (*k, *a)).collect();
    Ok(VerifierSpec {
        states: def.states.clone(),
        coin: class.iter().map(|c| c & 1 != 0).collect(),
        start: start.unwrap(),
        accept: accept.unwrap(),
        reject: reject.unwrap(),
        input_alphabet: def.input_alphabet.clone(),
        cert_alphabet: def.cert_alphabet.clone(),
        mode: def.mode,
        random_bits: def.random_bits,
        table,
        index,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifierError {
    #[error("input letter {0:?} is not in the alphabet")]
    LetterOutsideAlphabet(char),
    #[error("certificate symbol #{0} is not in the certificate alphabet")]
    CertSymbolOutOfRange(usize),
    #[error("cannot read a certificate symbol at {0:?}")]
    BadCertificateText(String),
    #[error("expected {expected} random bits, got {found}")]
    BitCountMismatch { expected: u32, found: usize },
}

/// A certificate: a finite sequence of indices into the certificate alphabet.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate(pub Vec<usize>);

impl Certificate {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Symbol under the head at `pos`: `◁` past the last symbol.
    pub fn at(&self, pos: usize) -> CertSym {
        self.0.get(pos).map_or(CertSym::End, |&i| CertSym::Sym(i))
    }
}

/// Renders certificate symbols, concatenated when every token is one character
/// and space-separated otherwise.
pub fn render_certificate(alphabet: &[String], cert: &Certificate) -> String {
    let compact = alphabet.iter().all(|t| t.chars().count() == 1);
    let parts: Vec<&str> = cert.0.iter().map(|&i| alphabet[i].as_str()).collect();
    if compact {
        parts.concat()
    } else {
        parts.join(" ")
    }
}

/// Splits text into certificate tokens by longest match, skipping whitespace.
pub fn parse_certificate(alphabet: &[String], text: &str) -> Result<Certificate, VerifierError> {
    let mut out = Vec::new();
    let mut rest = text.trim_start();
    while !rest.is_empty() {
        let best = alphabet
            .iter()
            .enumerate()
            .filter(|(_, t)| rest.starts_with(t.as_str()))
            .max_by_key(|(_, t)| t.len());
        match best {
            Some((i, t)) => {
                out.push(i);
                rest = rest[t.len()..].trim_start();
            }
            None => return Err(VerifierError::BadCertificateText(rest.chars().take(16).collect())),
        }
    }
    Ok(Certificate(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "Accept",
            Verdict::Reject => "Reject",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HaltReason {
    EnteredAccept,
    EnteredReject,
    NoTransition,
    InputPastEnd,
    CertificatePastEnd,
    BudgetExhausted,
    Loop,
}

impl fmt::Display for HaltReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HaltReason::EnteredAccept => "entered accept state",
            HaltReason::EnteredReject => "entered reject state",
            HaltReason::NoTransition => "no transition",
            HaltReason::InputPastEnd => "input head moved past the end-marker",
            HaltReason::CertificatePastEnd => "certificate head moved past the end-marker",
            HaltReason::BudgetExhausted => "random budget exhausted",
            HaltReason::Loop => "configuration repeated",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VerifierConfig {
    pub state: StateId,
    pub input_pos: usize,
    pub cert_pos: usize,
    pub bits_used: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifierRun {
    pub verdict: Verdict,
    pub reason: HaltReason,
    /// Configurations visited, starting with the initial one.
    pub trace: Vec<VerifierConfig>,
    /// Transitions executed (the final halting one included).
    pub steps: usize,
}

/// Outcome of executing one transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Step {
    Continue { state: StateId, input_pos: usize, bits_used: u32, cert_moved: bool },
    Halt(Verdict, HaltReason),
}

impl VerifierSpec {
    pub fn new(def: &VerifierDef) -> Result<VerifierSpec, ConformanceReport> {
        build(def)
    }

    /// Re-audits this verifier; always passes for a constructed value.
    pub fn conformance(&self) -> ConformanceReport {
        conformance_check(&self.to_def())
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.states[q]
    }

    pub fn is_coin(&self, q: StateId) -> bool {
        self.coin[q]
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

    pub fn input_alphabet(&self) -> &[char] {
        &self.input_alphabet
    }

    pub fn cert_alphabet(&self) -> &[String] {
        &self.cert_alphabet
    }

    pub fn mode(&self) -> InputMode {
        self.mode
    }

    pub fn random_bits(&self) -> u32 {
        self.random_bits
    }

    pub fn branch_count(&self) -> usize {
        1usize << self.random_bits
    }

    pub fn transitions(&self) -> impl Iterator<Item = (&TransitionKey, &Action)> {
        self.table.iter()
    }

    pub fn transition_count(&self) -> usize {
        self.table.len()
    }

    pub fn to_def(&self) -> VerifierDef {
        let name = |q: StateId| self.states[q].clone();
        let halting = |q: StateId| q == self.accept || q == self.reject;
        VerifierDef {
            states: self.states.clone(),
            coin_states: (0..self.states.len()).filter(|&q| self.coin[q]).map(name).collect(),
            det_states: (0..self.states.len()).filter(|&q| !self.coin[q] && !halting(q)).map(name).collect(),
            start: name(self.start),
            accept: name(self.accept),
            reject: name(self.reject),
            input_alphabet: self.input_alphabet.clone(),
            cert_alphabet: self.cert_alphabet.clone(),
            mode: self.mode,
            random_bits: self.random_bits,
            transitions: self
                .table
                .iter()
                .map(|(k, a)| VTransitionDef {
                    from: name(k.state),
                    input: k.input,
                    cert: k.cert,
                    bit: k.bit,
                    to: name(a.target),
                    input_move: a.input,
                    cert_move: a.cert,
                })
                .collect(),
        }
    }

    pub fn lookup(&self, state: StateId, input: Symbol, cert: CertSym, bit: Option<bool>) -> Option<Action> {
        let key = TransitionKey { state, input, cert: cert.into(), bit };
        self.index
            .get(&key)
            .or_else(|| self.index.get(&TransitionKey { cert: CertKey::Any, ..key }))
            .copied()
    }

    pub fn tape(&self, word: &str) -> Result<Tape, VerifierError> {
        let letters: Vec<char> = word.chars().collect();
        if let Some(&c) = letters.iter().find(|c| !self.input_alphabet.contains(c)) {
            return Err(VerifierError::LetterOutsideAlphabet(c));
        }
        Ok(Tape::new(&letters))
    }

    pub fn check_certificate(&self, cert: &Certificate) -> Result<(), VerifierError> {
        match cert.0.iter().find(|&&i| i >= self.cert_alphabet.len()) {
            Some(&i) => Err(VerifierError::CertSymbolOutOfRange(i)),
            None => Ok(()),
        }
    }

    pub fn parse_certificate(&self, text: &str) -> Result<Certificate, VerifierError> {
        parse_certificate(&self.cert_alphabet, text)
    }

    pub fn render_certificate(&self, cert: &Certificate) -> String {
        render_certificate(&self.cert_alphabet, cert)
    }

    /// The hardwired bit string of branch `pattern`, most significant bit consumed first.
    pub fn branch_bits(&self, pattern: usize) -> Vec<bool> {
        let r = self.random_bits;
        (0..r).map(|i| (pattern >> (r - 1 - i)) & 1 == 1).collect()
    }

    pub(crate) fn step(
        &self,
        tape: &Tape,
        state: StateId,
        input_pos: usize,
        bits_used: u32,
        bits: &[bool],
        cert: CertSym,
    ) -> Step {
        match self.step_on(state, tape.at(input_pos), bits_used, bits, cert) {
            Step::Continue { state, input_pos: moved, bits_used, cert_moved } => {
                Step::Continue { state, input_pos: input_pos + moved, bits_used, cert_moved }
            }
            halt => halt,
        }
    }

    /// One step on the scanned input symbol. A continuing step reports the input
    /// head's displacement (0 or 1) in `input_pos`.
    pub(crate) fn step_on(&self, state: StateId, input: Symbol, bits_used: u32, bits: &[bool], cert: CertSym) -> Step {
        let bit = if self.coin[state] {
            match bits.get(bits_used as usize) {
                Some(&b) if bits_used < self.random_bits => Some(b),
                _ => return Step::Halt(Verdict::Reject, HaltReason::BudgetExhausted),
            }
        } else {
            None
        };
        let Some(action) = self.lookup(state, input, cert, bit) else {
            return Step::Halt(Verdict::Reject, HaltReason::NoTransition);
        };
        if action.target == self.accept {
            return Step::Halt(Verdict::Accept, HaltReason::EnteredAccept);
        }
        let moved = action.input.offset();
        if moved == 1 && input == Symbol::RightEnd {
            return Step::Halt(Verdict::Reject, HaltReason::InputPastEnd);
        }
        let cert_moved = action.cert == HeadMove::Right;
        if cert_moved && cert == CertSym::End {
            return Step::Halt(Verdict::Reject, HaltReason::CertificatePastEnd);
        }
        if action.target == self.reject {
            return Step::Halt(Verdict::Reject, HaltReason::EnteredReject);
        }
        Step::Continue { state: action.target, input_pos: moved, bits_used: bits_used + bit.is_some() as u32, cert_moved }
    }

    pub(crate) fn run_tape(&self, tape: &Tape, cert: &Certificate, bits: &[bool], record: bool) -> VerifierRun {
        let mut cfg = VerifierConfig { state: self.start, input_pos: 0, cert_pos: 0, bits_used: 0 };
        let mut trace = Vec::new();
        if self.start == self.accept || self.start == self.reject {
            let (verdict, reason) = if self.start == self.accept {
                (Verdict::Accept, HaltReason::EnteredAccept)
            } else {
                (Verdict::Reject, HaltReason::EnteredReject)
            };
            return VerifierRun { verdict, reason, trace: vec![cfg], steps: 0 };
        }
        // Positions only grow, so a repeat can happen only while both heads rest.
        let mut resting: HashSet<(StateId, u32)> = HashSet::new();
        let mut steps = 0;
        loop {
            if record {
                trace.push(cfg);
            }
            if self.mode == InputMode::OneWay && !resting.insert((cfg.state, cfg.bits_used)) {
                return VerifierRun { verdict: Verdict::Reject, reason: HaltReason::Loop, trace, steps };
            }
            steps += 1;
            match self.step(tape, cfg.state, cfg.input_pos, cfg.bits_used, bits, cert.at(cfg.cert_pos)) {
                Step::Halt(verdict, reason) => return VerifierRun { verdict, reason, trace, steps },
                Step::Continue { state, input_pos, bits_used, cert_moved } => {
                    if input_pos != cfg.input_pos || cert_moved {
                        resting.clear();
                    }
                    cfg = VerifierConfig { state, input_pos, cert_pos: cfg.cert_pos + cert_moved as usize, bits_used };
                }
            }
        }
    }

    /// Runs the deterministic verifier obtained by fixing the coin outcomes to `bits`.
    pub fn run_fixed_bits(&self, word: &str, cert: &Certificate, bits: &[bool]) -> Result<VerifierRun, VerifierError> {
        let tape = self.tape(word)?;
        self.check_certificate(cert)?;
        if bits.len() != self.random_bits as usize {
            return Err(VerifierError::BitCountMismatch { expected: self.random_bits, found: bits.len() });
        }
        Ok(self.run_tape(&tape, cert, bits, true))
    }

    /// Number of accepting bit strings over `2^r`.
    pub fn acceptance_probability(&self, word: &str, cert: &Certificate) -> Result<DyadicProbability, VerifierError> {
        let tape = self.tape(word)?;
        self.check_certificate(cert)?;
        Ok(self.acceptance_on_tape(&tape, cert))
    }

    pub(crate) fn acceptance_on_tape(&self, tape: &Tape, cert: &Certificate) -> DyadicProbability {
        let accepted = (0..self.branch_count())
            .filter(|&p| self.run_tape(tape, cert, &self.branch_bits(p), false).verdict == Verdict::Accept)
            .count();
        DyadicProbability::new(accepted as u64, self.random_bits).expect("count is at most 2^r")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use HeadMove::{Right as R, Stay as S};

    fn immediate_accept() -> VerifierSpec {
        let mut d = VerifierDef::new(InputMode::RealTime, 0, "a", &["x"]);
        d.det_state("q0").halting_states();
        d.start = "q0".into();
        d.add("q0", Symbol::LeftEnd, CertKey::Any, None, "acc", R, S);
        VerifierSpec::new(&d).unwrap()
    }

    #[test]
    fn zero_budget_immediate_accept() {
        let v = immediate_accept();
        let p = v.acceptance_probability("aa", &Certificate::default()).unwrap();
        assert_eq!(p, DyadicProbability::one(0));
        assert_eq!(p.to_string(), "1/2^0");
    }

    #[test]
    fn pausing_transition_is_reported() {
        let mut d = immediate_accept().to_def();
        d.transitions[0].input_move = S;
        let report = conformance_check(&d);
        assert!(matches!(report.violations.as_slice(), [Violation::PausingTransition(_)]));
        assert!(report.to_string().contains("pausing transition"));
    }

    #[test]
    fn overlapping_classes_are_reported() {
        let mut d = immediate_accept().to_def();
        d.coin_states.push("q0".into());
        let report = conformance_check(&d);
        assert!(report.violations.contains(&Violation::Partition("q0".into())));
        assert!(report.to_string().contains("partition"));
    }

    #[test]
    fn malformed_inputs_are_errors_not_rejections() {
        let v = immediate_accept();
        assert_eq!(v.acceptance_probability("a", &Certificate(vec![3])), Err(VerifierError::CertSymbolOutOfRange(3)));
        assert_eq!(v.acceptance_probability("b", &Certificate::default()), Err(VerifierError::LetterOutsideAlphabet('b')));
        assert!(matches!(
            v.run_fixed_bits("a", &Certificate::default(), &[true]),
            Err(VerifierError::BitCountMismatch { .. })
        ));
    }

    #[test]
    fn certificate_tokens_use_longest_match() {
        let alphabet: Vec<String> = ["(a,b)", "(a,b)x", "y"].iter().map(|s| s.to_string()).collect();
        let c = parse_certificate(&alphabet, "(a,b)x (a,b) y").unwrap();
        assert_eq!(c, Certificate(vec![1, 0, 2]));
        assert_eq!(render_certificate(&alphabet, &c), "(a,b)x (a,b) y");
        assert!(parse_certificate(&alphabet, "z").is_err());
    }

    #[test]
    fn one_way_pause_loop_rejects() {
        let mut d = VerifierDef::new(InputMode::OneWay, 0, "a", &["x"]);
        d.det_state("q0").halting_states();
        d.start = "q0".into();
        d.add("q0", Symbol::LeftEnd, CertKey::Any, None, "q0", S, S);
        let v = VerifierSpec::new(&d).unwrap();
        let run = v.run_fixed_bits("a", &Certificate::default(), &[]).unwrap();
        assert_eq!((run.verdict, run.reason), (Verdict::Reject, HaltReason::Loop));
    }

    #[test]
    fn coin_overrun_rejects() {
        let mut d = VerifierDef::new(InputMode::RealTime, 1, "a", &["x"]);
        d.coin_state("c").halting_states();
        d.start = "c".into();
        for b in [false, true] {
            d.add("c", Symbol::LeftEnd, CertKey::Any, Some(b), "c", R, S);
            d.add("c", Symbol::Letter('a'), CertKey::Any, Some(b), "acc", R, S);
        }
        let v = VerifierSpec::new(&d).unwrap();
        let run = v.run_fixed_bits("a", &Certificate::default(), &[false]).unwrap();
        assert_eq!(run.reason, HaltReason::BudgetExhausted);
        assert_eq!(run.steps, 2);
    }
}
