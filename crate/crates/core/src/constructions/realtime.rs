//! Real-time verification of 2-head deterministic automata with one coin.
//!
//! Split the run of a serialized automaton into maximal blocks `H_1, H_2, ...`
//! during which a single head moves (head 1 in odd blocks, head 2 in even ones).
//! Let `s_i` be the state at the end of `H_i` and `z_i` the symbol the moving
//! head of `H_i` scans there. The certificate is the sequence of tuples
//! `(s_1,z_1,s_2,z_2) (s_3,z_3,s_4,z_4) ...`; when the number of blocks is odd the
//! last tuple repeats `(s_m,z_m)`, and a run with a single block has the empty
//! certificate.
//!
//! With the coin showing 0 the verifier follows head 1 with its input head. At
//! the end of each odd block it checks the tuple's `(s_i, z_i)` against its own
//! state and symbol, then resumes at `s_{i+1}` with head 2 assumed on `z_{i+1}`.
//! With the coin showing 1 it follows head 2: it starts from `s_1` with head 1
//! assumed on `z_1`, and at the end of each even block checks `(s_i, z_i)` from
//! the previous tuple before reading the next. A resumed simulation whose first
//! step moves the wrong head rejects, as does a certificate that runs out where a
//! tuple is needed. Unread trailing tuples are ignored.

use crate::automaton::StateId;
use crate::symbol::{scannable, HeadMove, Symbol};
use crate::tabulate::{tabulate_verifier, Target, VMove, VerifierShape};
use crate::verifier::{CertSym, Certificate, InputMode, VerifierSpec};

use super::{ConstructionError, SerializedAutomaton};

use HeadMove::{Right as R, Stay as S};

/// One certificate cell: two (state, scanned symbol) hand-over points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct JointSymbol {
    pub first_state: StateId,
    pub first_symbol: Symbol,
    pub second_state: StateId,
    pub second_symbol: Symbol,
}

/// Index arithmetic for the tuple alphabet `Q × Σ⋈ × Q × Σ⋈`.
struct JointAlphabet {
    states: usize,
    symbols: Vec<Symbol>,
}

impl JointAlphabet {
    fn new(m: &SerializedAutomaton) -> Self {
        JointAlphabet { states: m.automaton().states().len(), symbols: scannable(m.automaton().alphabet()) }
    }

    fn size(&self) -> usize {
        (self.states * self.symbols.len()).pow(2)
    }

    fn sym_index(&self, s: Symbol) -> usize {
        self.symbols.iter().position(|&t| t == s).expect("symbol in alphabet")
    }

    fn encode(&self, j: &JointSymbol) -> usize {
        let half = |q: StateId, z: Symbol| q * self.symbols.len() + self.sym_index(z);
        half(j.first_state, j.first_symbol) * self.states * self.symbols.len()
            + half(j.second_state, j.second_symbol)
    }

    fn decode(&self, i: usize) -> JointSymbol {
        let w = self.symbols.len();
        let (a, b) = (i / (self.states * w), i % (self.states * w));
        JointSymbol {
            first_state: a / w,
            first_symbol: self.symbols[a % w],
            second_state: b / w,
            second_symbol: self.symbols[b % w],
        }
    }

    fn tokens(&self, names: &[String]) -> Vec<String> {
        (0..self.size())
            .map(|i| {
                let j = self.decode(i);
                format!(
                    "({},{},{},{})",
                    names[j.first_state], j.first_symbol, names[j.second_state], j.second_symbol
                )
            })
            .collect()
    }
}

/// Decodes a certificate cell of a verifier built by [`compile_rt_verifier`].
pub fn joint_symbol(m: &SerializedAutomaton, index: usize) -> JointSymbol {
    JointAlphabet::new(m).decode(index)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Tracker {
    Start,
    /// Following head 1 in state `q`; head 2 is believed to scan `other`.
    First { q: StateId, other: Symbol },
    /// Following head 2 in state `q`; head 1 is believed to scan `other`, and the
    /// next hand-over is claimed to happen in state `expect.0` on `expect.1`.
    Second { q: StateId, other: Symbol, expect: (StateId, Symbol) },
}

/// Builds the one-coin real-time verifier for a serialized automaton.
pub fn compile_rt_verifier(m: &SerializedAutomaton) -> Result<VerifierSpec, ConstructionError> {
    let a = m.automaton();
    let alpha = JointAlphabet::new(m);
    let shape = VerifierShape {
        mode: InputMode::RealTime,
        random_bits: 1,
        input_alphabet: a.alphabet().to_vec(),
        cert_alphabet: alpha.tokens(a.states()),
    };
    let (acc, rej) = (a.accept(), a.reject());
    let settle = |t: StateId, next: Tracker, cert: HeadMove| -> Option<VMove<Tracker>> {
        let target = if t == acc {
            Target::Accept
        } else if t == rej {
            Target::Reject
        } else {
            Target::State(next)
        };
        Some(VMove::new(target, R, cert))
    };
    let halted = |s: StateId| -> Option<Option<VMove<Tracker>>> {
        if s == acc {
            Some(Some(VMove::new(Target::Accept, R, S)))
        } else if s == rej {
            Some(None)
        } else {
            None
        }
    };

    // Head 1 resumes in `s` with head 2 on `z`, reading `x` itself.
    let resume_first = |s: StateId, x: Symbol, z: Symbol| -> Option<VMove<Tracker>> {
        if let Some(h) = halted(s) {
            return h;
        }
        match m.step(s, x, z)? {
            (t, 0) => settle(t, Tracker::First { q: t, other: z }, R),
            _ => None,
        }
    };
    // Head 2 resumes in `s` with head 1 on `z`, reading `y` itself.
    let resume_second = |j: JointSymbol, y: Symbol| -> Option<VMove<Tracker>> {
        if let Some(h) = halted(j.first_state) {
            return h;
        }
        let expect = (j.second_state, j.second_symbol);
        match m.step(j.first_state, j.first_symbol, y)? {
            (t, 1) => settle(t, Tracker::Second { q: t, other: j.first_symbol, expect }, R),
            _ => None,
        }
    };
    let follow_first = |q: StateId, x: Symbol, y: Symbol, cell: CertSym| -> Option<VMove<Tracker>> {
        match m.step(q, x, y)? {
            (t, 0) => settle(t, Tracker::First { q: t, other: y }, S),
            _ => {
                let CertSym::Sym(i) = cell else { return None };
                let j = alpha.decode(i);
                if j.first_state != q || j.first_symbol != x {
                    return None;
                }
                resume_first(j.second_state, x, j.second_symbol)
            }
        }
    };

    let delta = |q: &Tracker, x: Symbol, cell: CertSym, bit: Option<bool>| -> Option<VMove<Tracker>> {
        match *q {
            Tracker::Start if a.is_halting(a.start()) => halted(a.start()).flatten(),
            Tracker::Start => match bit {
                Some(false) => follow_first(a.start(), x, Symbol::LeftEnd, cell),
                _ => match cell {
                    CertSym::End => Some(VMove::new(Target::Accept, R, S)),
                    CertSym::Sym(i) => resume_second(alpha.decode(i), x),
                },
            },
            Tracker::First { q, other } => follow_first(q, x, other, cell),
            Tracker::Second { q, other, expect } => match m.step(q, other, x)? {
                (t, 1) => settle(t, Tracker::Second { q: t, other, expect }, S),
                _ => {
                    if (q, x) != expect {
                        return None;
                    }
                    let CertSym::Sym(i) = cell else { return None };
                    resume_second(alpha.decode(i), x)
                }
            },
        }
    };

    let spec = tabulate_verifier(
        &shape,
        Tracker::Start,
        |q| *q == Tracker::Start,
        delta,
        |i, _| if i == 0 { "start".to_string() } else { format!("s{i}") },
    )?;
    Ok(spec)
}

/// Produces the certificate that makes [`compile_rt_verifier`]'s verifier accept
/// `word` with probability 1.
pub fn generate_rt_certificate(m: &SerializedAutomaton, word: &str) -> Result<Certificate, ConstructionError> {
    let a = m.automaton();
    let tape = a.tape(word)?;
    let alpha = JointAlphabet::new(m);
    let mut q = a.start();
    let mut pos = [0usize; 2];
    // (moving head, state at end, symbol under that head at end) per block
    let mut blocks: Vec<(usize, StateId, Symbol)> = Vec::new();
    let limit = 2 * (tape.last() + 2);
    for _ in 0..=limit {
        if a.is_halting(q) {
            break;
        }
        let (t, head) = m.step(q, tape.at(pos[0]), tape.at(pos[1])).ok_or(ConstructionError::NotAccepted)?;
        pos[head] += 1;
        q = t;
        let z = if pos[head] > tape.last() { Symbol::RightEnd } else { tape.at(pos[head]) };
        match blocks.last_mut() {
            Some(b) if b.0 == head => *b = (head, q, z),
            _ => blocks.push((head, q, z)),
        }
        if pos[head] > tape.last() && q != a.accept() {
            break;
        }
    }
    if q != a.accept() {
        return Err(ConstructionError::NotAccepted);
    }
    if blocks.len() <= 1 {
        return Ok(Certificate(Vec::new()));
    }
    let mut cells = Vec::new();
    for pair in blocks.chunks(2) {
        let (_, s1, z1) = pair[0];
        let (_, s2, z2) = *pair.get(1).unwrap_or(&pair[0]);
        cells.push(alpha.encode(&JointSymbol { first_state: s1, first_symbol: z1, second_state: s2, second_symbol: z2 }));
    }
    Ok(Certificate(cells))
}
