//! Line-oriented text format for automata and verifiers.
//!
//! ```text
//! # twin words
//! kind 1dfa
//! heads 2
//! alphabet 0 1 #
//! states seek compare acc rej
//! start seek
//! accept acc
//! reject rej
//! trans seek ^,^ -> seek +1,0
//! ```
//!
//! Verifiers use `kind verifier`, `input rt|oneway`, `random-bits r`,
//! `cert-alphabet` (whitespace-separated tokens), `coin` (the coin-tossing
//! states) and the transition forms `ctrans q σ γ b -> q' di dc` and
//! `dtrans q σ γ -> q' di dc`. End-markers are `^` and `$`; `$` also ends the
//! certificate, and `*` as γ matches any certificate cell. Lines starting with
//! `#` are comments.
//!
//! [`print_machine`] writes a normalised form (fixed key order, sorted
//! transitions, no comments) that [`parse_machine_file`] reads back unchanged.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::automaton::{validate_automaton, AutomatonDef, AutomatonError, MultiheadAutomaton, TransitionDef};
use crate::symbol::{HeadMove, Symbol};
use crate::verifier::{CertKey, ConformanceReport, InputMode, VTransitionDef, VerifierDef, VerifierSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing key: {0}")]
    MissingKey(&'static str),
    #[error("invalid automaton: {0}")]
    Automaton(#[from] AutomatonError),
    #[error("invalid verifier: {0}")]
    Verifier(ConformanceReport),
}

#[derive(Debug, Clone)]
pub enum Machine {
    Automaton(MultiheadAutomaton),
    Verifier(VerifierSpec),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

struct Header {
    values: HashMap<&'static str, (usize, Vec<String>)>,
}

impl Header {
    fn get(&self, key: &'static str) -> Result<&(usize, Vec<String>), FormatError> {
        self.values.get(key).ok_or(FormatError::MissingKey(key))
    }

    fn single(&self, key: &'static str) -> Result<(usize, &str), FormatError> {
        let (line, v) = self.get(key)?;
        match v.as_slice() {
            [one] => Ok((*line, one.as_str())),
            _ => Err(syntax(*line, format!("{key} takes exactly one value"))),
        }
    }

    fn number(&self, key: &'static str) -> Result<usize, FormatError> {
        let (line, v) = self.single(key)?;
        v.parse().map_err(|_| syntax(line, format!("{key} must be a non-negative integer")))
    }
}

const AUTOMATON_KEYS: &[&str] = &["kind", "heads", "alphabet", "states", "start", "accept", "reject"];
const VERIFIER_KEYS: &[&str] =
    &["kind", "input", "random-bits", "alphabet", "cert-alphabet", "states", "coin", "start", "accept", "reject"];

fn symbol(line: usize, tok: &str) -> Result<Symbol, FormatError> {
    Symbol::parse(tok).ok_or_else(|| syntax(line, format!("bad symbol `{tok}`")))
}

fn head_move(line: usize, tok: &str) -> Result<HeadMove, FormatError> {
    HeadMove::parse(tok).ok_or_else(|| syntax(line, format!("bad move `{tok}`, expected 0 or +1")))
}

fn letters(line: usize, toks: &[String]) -> Result<Vec<char>, FormatError> {
    toks.iter()
        .map(|t| {
            let mut cs = t.chars();
            match (cs.next(), cs.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(syntax(line, format!("alphabet entries are single characters, got `{t}`"))),
            }
        })
        .collect()
}

/// Parses an automaton or verifier description and validates it.
pub fn parse_machine_file(text: &str) -> Result<Machine, FormatError> {
    let mut header = Header { values: HashMap::new() };
    let mut rows: Vec<(usize, Vec<&str>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        match toks[0] {
            "trans" | "ctrans" | "dtrans" => rows.push((line, toks)),
            key => {
                let Some(&key) = VERIFIER_KEYS.iter().chain(AUTOMATON_KEYS).find(|k| **k == key) else {
                    return Err(syntax(line, format!("unknown key `{key}`")));
                };
                let values = toks[1..].iter().map(|s| s.to_string()).collect();
                if header.values.insert(key, (line, values)).is_some() {
                    return Err(syntax(line, format!("duplicate key `{key}`")));
                }
            }
        }
    }
    let (line, kind) = header.single("kind")?;
    match kind {
        "1dfa" | "1nfa" => parse_automaton(&header, kind == "1dfa", &rows).map(Machine::Automaton),
        "verifier" => parse_verifier(&header, &rows).map(Machine::Verifier),
        other => Err(syntax(line, format!("unknown kind `{other}`, expected 1dfa, 1nfa or verifier"))),
    }
}

fn parse_automaton(h: &Header, deterministic: bool, rows: &[(usize, Vec<&str>)]) -> Result<MultiheadAutomaton, FormatError> {
    let heads = h.number("heads")?;
    let (aline, alpha) = h.get("alphabet")?;
    let mut def = AutomatonDef::new(heads, "", deterministic);
    def.alphabet = letters(*aline, alpha)?;
    def.states = h.get("states")?.1.clone();
    def.start = h.single("start")?.1.to_string();
    def.accept = h.single("accept")?.1.to_string();
    def.reject = h.single("reject")?.1.to_string();
    for (line, toks) in rows {
        let line = *line;
        match toks.as_slice() {
            ["trans", from, scanned, "->", to, moves] => {
                let scanned = scanned.split(',').map(|t| symbol(line, t)).collect::<Result<_, _>>()?;
                let moves = moves.split(',').map(|t| head_move(line, t)).collect::<Result<_, _>>()?;
                def.transitions.push(TransitionDef { from: from.to_string(), scanned, to: to.to_string(), moves });
            }
            [kw, ..] if *kw != "trans" => return Err(syntax(line, format!("`{kw}` lines belong to verifiers"))),
            _ => return Err(syntax(line, "expected `trans q x1,...,xk -> q' d1,...,dk`")),
        }
    }
    Ok(validate_automaton(def)?)
}

fn parse_verifier(h: &Header, rows: &[(usize, Vec<&str>)]) -> Result<VerifierSpec, FormatError> {
    let (mline, mode) = h.single("input")?;
    let mode = match mode {
        "rt" => InputMode::RealTime,
        "oneway" => InputMode::OneWay,
        other => return Err(syntax(mline, format!("input must be rt or oneway, got `{other}`"))),
    };
    let bits = h.number("random-bits")?;
    let bits_line = h.get("random-bits")?.0;
    let bits = u32::try_from(bits).map_err(|_| syntax(bits_line, "random-bits too large"))?;
    let (aline, alpha) = h.get("alphabet")?;
    let (cline, cert) = h.get("cert-alphabet")?;
    if let Some(bad) = cert.iter().find(|t| *t == "$" || *t == "*") {
        return Err(syntax(*cline, format!("`{bad}` is reserved and cannot be a certificate symbol")));
    }
    let mut def = VerifierDef::new(mode, bits, "", &[]);
    def.input_alphabet = letters(*aline, alpha)?;
    def.cert_alphabet = cert.clone();
    def.states = h.get("states")?.1.clone();
    def.start = h.single("start")?.1.to_string();
    def.accept = h.single("accept")?.1.to_string();
    def.reject = h.single("reject")?.1.to_string();
    def.coin_states = h.get("coin")?.1.clone();
    def.det_states = def
        .states
        .iter()
        .filter(|s| !def.coin_states.contains(s) && **s != def.accept && **s != def.reject)
        .cloned()
        .collect();
    let cert_key = |line: usize, tok: &str| -> Result<CertKey, FormatError> {
        match tok {
            "$" => Ok(CertKey::End),
            "*" => Ok(CertKey::Any),
            t => def
                .cert_alphabet
                .iter()
                .position(|c| c == t)
                .map(CertKey::Sym)
                .ok_or_else(|| syntax(line, format!("unknown certificate symbol `{t}`"))),
        }
    };
    let mut transitions = Vec::new();
    for (line, toks) in rows {
        let line = *line;
        let (from, sigma, gamma, bit, to, di, dc) = match toks.as_slice() {
            ["ctrans", q, s, g, b, "->", t, di, dc] => {
                let bit = match *b {
                    "0" => false,
                    "1" => true,
                    _ => return Err(syntax(line, format!("coin value must be 0 or 1, got `{b}`"))),
                };
                (q, s, g, Some(bit), t, di, dc)
            }
            ["dtrans", q, s, g, "->", t, di, dc] => (q, s, g, None, t, di, dc),
            ["trans", ..] => return Err(syntax(line, "`trans` lines belong to automata")),
            _ => return Err(syntax(line, "expected `ctrans q σ γ b -> q' di dc` or `dtrans q σ γ -> q' di dc`")),
        };
        transitions.push(VTransitionDef {
            from: from.to_string(),
            input: symbol(line, sigma)?,
            cert: cert_key(line, gamma)?,
            bit,
            to: to.to_string(),
            input_move: head_move(line, di)?,
            cert_move: head_move(line, dc)?,
        });
    }
    def.transitions = transitions;
    VerifierSpec::new(&def).map_err(FormatError::Verifier)
}

fn joined<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

fn line_with(key: &str, values: &[String]) -> String {
    if values.is_empty() {
        format!("{key}\n")
    } else {
        format!("{key} {}\n", values.join(" "))
    }
}

pub fn print_automaton(m: &MultiheadAutomaton) -> String {
    let mut out = String::new();
    out.push_str(if m.is_deterministic() { "kind 1dfa\n" } else { "kind 1nfa\n" });
    let _ = writeln!(out, "heads {}", m.head_count());
    out.push_str(&line_with("alphabet", &m.alphabet().iter().map(|c| c.to_string()).collect::<Vec<_>>()));
    out.push_str(&line_with("states", m.states()));
    let _ = writeln!(out, "start {}", m.state_name(m.start()));
    let _ = writeln!(out, "accept {}", m.state_name(m.accept()));
    let _ = writeln!(out, "reject {}", m.state_name(m.reject()));
    for ((q, scanned), choices) in m.transitions() {
        for c in choices {
            let _ = writeln!(
                out,
                "trans {} {} -> {} {}",
                m.state_name(*q),
                joined(scanned, ","),
                m.state_name(c.target),
                joined(&c.moves, ",")
            );
        }
    }
    out
}

pub fn print_verifier(v: &VerifierSpec) -> String {
    let mut out = String::from("kind verifier\n");
    let _ = writeln!(out, "input {}", v.mode());
    let _ = writeln!(out, "random-bits {}", v.random_bits());
    out.push_str(&line_with("alphabet", &v.input_alphabet().iter().map(|c| c.to_string()).collect::<Vec<_>>()));
    out.push_str(&line_with("cert-alphabet", v.cert_alphabet()));
    out.push_str(&line_with("states", v.states()));
    let coins: Vec<String> =
        (0..v.states().len()).filter(|&q| v.is_coin(q)).map(|q| v.state_name(q).to_string()).collect();
    out.push_str(&line_with("coin", &coins));
    let _ = writeln!(out, "start {}", v.state_name(v.start()));
    let _ = writeln!(out, "accept {}", v.state_name(v.accept()));
    let _ = writeln!(out, "reject {}", v.state_name(v.reject()));
    for (k, a) in v.transitions() {
        let gamma = match k.cert {
            CertKey::Sym(i) => v.cert_alphabet()[i].clone(),
            CertKey::End => "$".into(),
            CertKey::Any => "*".into(),
        };
        let head = match k.bit {
            Some(b) => format!("ctrans {} {} {} {}", v.state_name(k.state), k.input, gamma, u8::from(b)),
            None => format!("dtrans {} {} {}", v.state_name(k.state), k.input, gamma),
        };
        let _ = writeln!(out, "{head} -> {} {} {}", v.state_name(a.target), a.input, a.cert);
    }
    out
}

pub fn print_machine(m: &Machine) -> String {
    match m {
        Machine::Automaton(a) => print_automaton(a),
        Machine::Verifier(v) => print_verifier(v),
    }
}
