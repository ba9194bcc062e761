//! One-way verification of k-head nondeterministic automata.
//!
//! The certificate is an accepting computation history, one cell per step: the
//! index of the move taken and the k symbols scanned before it. The verifier
//! spends `⌈log2 k⌉` coins to pick a head (patterns beyond `k` wrap around), then
//! replays the history with its input head standing in for the chosen head,
//! rejecting as soon as the claimed symbol for that head differs from the input.
//! Claims about the other heads are trusted. Every replayed step consumes a
//! certificate cell, so the verifier cannot loop.

use crate::automaton::{symbol_tuples, MultiheadAutomaton, StateId};
use crate::symbol::{scannable, HeadMove, Symbol};
use crate::tabulate::{tabulate_verifier, Target, VMove, VerifierShape};
use crate::verifier::{CertSym, Certificate, InputMode, VerifierSpec, MAX_RANDOM_BITS};

use super::ConstructionError;

use HeadMove::{Right as R, Stay as S};

/// One history cell: the move index and the symbols scanned by every head.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HistorySymbol {
    pub choice: usize,
    pub scanned: Vec<Symbol>,
}

struct HistoryAlphabet {
    choices: usize,
    tuples: Vec<Vec<Symbol>>,
}

impl HistoryAlphabet {
    fn new(n: &MultiheadAutomaton) -> Self {
        HistoryAlphabet {
            choices: n.max_choices().max(1),
            tuples: symbol_tuples(&scannable(n.alphabet()), n.head_count()),
        }
    }

    fn size(&self) -> usize {
        self.choices * self.tuples.len()
    }

    fn decode(&self, i: usize) -> HistorySymbol {
        HistorySymbol { choice: i / self.tuples.len(), scanned: self.tuples[i % self.tuples.len()].clone() }
    }

    fn encode(&self, h: &HistorySymbol) -> usize {
        h.choice * self.tuples.len() + self.tuples.iter().position(|t| *t == h.scanned).expect("tuple")
    }

    fn tokens(&self) -> Vec<String> {
        (0..self.size())
            .map(|i| {
                let h = self.decode(i);
                let syms: Vec<String> = h.scanned.iter().map(ToString::to_string).collect();
                format!("({},{})", h.choice, syms.join(","))
            })
            .collect()
    }
}

/// Decodes a certificate cell of a verifier built by [`compile_oneway_verifier`].
pub fn history_symbol(n: &MultiheadAutomaton, index: usize) -> HistorySymbol {
    HistoryAlphabet::new(n).decode(index)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Replay {
    Coin { drawn: u32, pattern: usize },
    Follow { q: StateId, head: usize },
}

/// Builds the one-way verifier with `⌈log2 k⌉` coins for a k-head automaton.
pub fn compile_oneway_verifier(n: &MultiheadAutomaton) -> Result<VerifierSpec, ConstructionError> {
    let k = n.head_count();
    let bits = k.next_power_of_two().trailing_zeros();
    if bits > MAX_RANDOM_BITS {
        return Err(ConstructionError::HeadCount { expected: 1 << MAX_RANDOM_BITS, found: k });
    }
    let alpha = HistoryAlphabet::new(n);
    let shape = VerifierShape {
        mode: InputMode::OneWay,
        random_bits: bits,
        input_alphabet: n.alphabet().to_vec(),
        cert_alphabet: alpha.tokens(),
    };
    let start = if bits == 0 { Replay::Follow { q: n.start(), head: 0 } } else { Replay::Coin { drawn: 0, pattern: 0 } };

    let delta = |st: &Replay, x: Symbol, cell: CertSym, bit: Option<bool>| -> Option<VMove<Replay>> {
        match *st {
            Replay::Coin { drawn, pattern } => {
                let (drawn, pattern) = (drawn + 1, 2 * pattern + usize::from(bit == Some(true)));
                let next = if drawn == bits {
                    Replay::Follow { q: n.start(), head: pattern % k }
                } else {
                    Replay::Coin { drawn, pattern }
                };
                Some(VMove::new(Target::State(next), S, S))
            }
            Replay::Follow { q, .. } if q == n.accept() => Some(VMove::new(Target::Accept, S, S)),
            Replay::Follow { q, head } => {
                let CertSym::Sym(i) = cell else { return None };
                let h = alpha.decode(i);
                if h.scanned[head] != x {
                    return None;
                }
                let c = n.choices(q, &h.scanned).get(h.choice)?;
                if c.target == n.accept() {
                    return Some(VMove::new(Target::Accept, S, R));
                }
                let falls_off = h.scanned.iter().zip(&c.moves).any(|(&s, &d)| s == Symbol::RightEnd && d == R);
                if falls_off || c.target == n.reject() {
                    return None;
                }
                Some(VMove::new(Target::State(Replay::Follow { q: c.target, head }), c.moves[head], R))
            }
        }
    };
    let spec = tabulate_verifier(
        &shape,
        start,
        |st| matches!(st, Replay::Coin { .. }),
        delta,
        |i, _| if i == 0 { "start".to_string() } else { format!("s{i}") },
    )?;
    Ok(spec)
}

/// Encodes a shortest accepting run of `n` on `word` as a history certificate.
pub fn generate_history_certificate(n: &MultiheadAutomaton, word: &str) -> Result<Certificate, ConstructionError> {
    let tape = n.tape(word)?;
    let run = n.find_accepting_run(&tape).ok_or(ConstructionError::NotAccepted)?;
    let alpha = HistoryAlphabet::new(n);
    let cells = run
        .iter()
        .map(|step| alpha.encode(&HistorySymbol { choice: step.choice, scanned: n.scanned(&tape, &step.config) }))
        .collect();
    Ok(Certificate(cells))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{validate_automaton, AutomatonDef};
    use crate::zoo::builtin_machine;

    #[test]
    fn nonpal_history_accepts_with_certainty() {
        let n = builtin_machine("nonpal-1nfa2").unwrap();
        let v = compile_oneway_verifier(&n).unwrap();
        assert_eq!(v.random_bits(), 1);
        let c = generate_history_certificate(&n, "01").unwrap();
        let run = n.find_accepting_run(&n.tape("01").unwrap()).unwrap();
        assert_eq!(c.len(), run.len());
        assert!(v.acceptance_probability("01", &c).unwrap().is_one());
        assert!(matches!(generate_history_certificate(&n, "010"), Err(ConstructionError::NotAccepted)));
    }

    #[test]
    fn single_head_needs_no_coins() {
        let mut d = AutomatonDef::new(1, "a", false);
        d.state("q").state("acc").state("rej");
        d.start = "q".into();
        d.accept = "acc".into();
        d.reject = "rej".into();
        d.add("q", &[Symbol::LeftEnd], "acc", &[S]);
        let n = validate_automaton(d).unwrap();
        let v = compile_oneway_verifier(&n).unwrap();
        assert_eq!(v.random_bits(), 0);
        let c = generate_history_certificate(&n, "aa").unwrap();
        assert_eq!(c.len(), 1);
        assert!(v.acceptance_probability("aa", &c).unwrap().is_one());
    }

    #[test]
    fn three_heads_use_two_coins() {
        let n = builtin_machine("lik-1dfa3").unwrap();
        let v = compile_oneway_verifier(&n).unwrap();
        assert_eq!(v.random_bits(), 2);
        let c = generate_history_certificate(&n, "abbcc").unwrap();
        assert!(v.acceptance_probability("abbcc", &c).unwrap().is_one());
    }
}
