//! From a verifier to a multihead automaton.
//!
//! Fixing the coins turns a verifier into `2^r` deterministic machines that read
//! the same certificate. The automaton gives each of them its own input head,
//! guesses the certificate one cell at a time, and advances every machine until
//! it consumes the cell or halts. It accepts when all of them accept, that is,
//! exactly on inputs that some certificate makes the verifier accept with
//! probability 1.
//!
//! Two counters keep every branch finite. A machine that neither moves its input
//! head nor consumes the cell for `|Q|·(r+1)` steps has repeated a configuration
//! and is looping. A run of rounds in which no input head moves longer than the
//! number of possible machine tuples has repeated a tuple, so a shorter
//! certificate does the same job; such branches are abandoned.

use crate::automaton::{MultiheadAutomaton, StateId};
use crate::symbol::{HeadMove, Symbol};
use crate::tabulate::{tabulate_automaton, AMove, Target};
use crate::verifier::{CertSym, Step, Verdict, VerifierSpec};

use super::ConstructionError;

use HeadMove::{Right as R, Stay as S};

/// Largest head count the construction will attempt.
pub const MAX_HEADS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Machine {
    Live { q: StateId, used: u32 },
    Accepted,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Product {
    Guess { machines: Vec<Machine>, idle: u64 },
    Run { machines: Vec<Machine>, cell: CertSym, j: usize, stall: u32, moved: bool, idle: u64 },
}

pub fn verifier_to_nfa(v: &VerifierSpec) -> Result<MultiheadAutomaton, ConstructionError> {
    let heads = v.branch_count();
    if heads > MAX_HEADS {
        return Err(ConstructionError::HeadCount { expected: MAX_HEADS, found: heads });
    }
    let bits: Vec<Vec<bool>> = (0..heads).map(|p| v.branch_bits(p)).collect();
    let configs = v.states().len() as u64 * (u64::from(v.random_bits()) + 1);
    let stall_limit = u32::try_from(configs).unwrap_or(u32::MAX);
    let idle_limit = (configs + 1).checked_pow(heads as u32).unwrap_or(u64::MAX);
    let cells: Vec<CertSym> =
        (0..v.cert_alphabet().len()).map(CertSym::Sym).chain(std::iter::once(CertSym::End)).collect();

    let initial = if v.start() == v.accept() {
        Machine::Accepted
    } else {
        Machine::Live { q: v.start(), used: 0 }
    };
    let start = Product::Guess { machines: vec![initial; heads], idle: 0 };
    let still = vec![S; heads];
    let halt = |t: Target<Product>| vec![AMove { target: t, moves: still.clone() }];
    let next_live = |ms: &[Machine], from: usize| (from..heads).find(|&i| matches!(ms[i], Machine::Live { .. }));

    let delta = |p: &Product, scanned: &[Symbol]| -> Vec<AMove<Product>> {
        if v.start() == v.reject() {
            return halt(Target::Reject);
        }
        match p {
            Product::Guess { machines, idle } => match next_live(machines, 0) {
                None => halt(Target::Accept),
                Some(j) => cells
                    .iter()
                    .map(|&cell| AMove {
                        target: Target::State(Product::Run {
                            machines: machines.clone(),
                            cell,
                            j,
                            stall: 0,
                            moved: false,
                            idle: *idle,
                        }),
                        moves: still.clone(),
                    })
                    .collect(),
            },
            Product::Run { machines, cell, j, stall, moved, idle } => {
                let Machine::Live { q, used } = machines[*j] else { unreachable!("only live machines run") };
                let mut machines = machines.clone();
                let mut moves = still.clone();
                let (mut stall, mut moved) = (*stall, *moved);
                let done_with_cell = match v.step_on(q, scanned[*j], used, &bits[*j], *cell) {
                    Step::Halt(Verdict::Accept, _) => {
                        machines[*j] = Machine::Accepted;
                        true
                    }
                    Step::Halt(Verdict::Reject, _) => return halt(Target::Reject),
                    Step::Continue { state, input_pos, bits_used, cert_moved } => {
                        machines[*j] = Machine::Live { q: state, used: bits_used };
                        if input_pos == 1 {
                            moves[*j] = R;
                            moved = true;
                            stall = 0;
                        } else if !cert_moved {
                            stall += 1;
                            if stall >= stall_limit {
                                return halt(Target::Reject);
                            }
                        }
                        cert_moved
                    }
                };
                let target = if !done_with_cell {
                    Product::Run { machines, cell: *cell, j: *j, stall, moved, idle: *idle }
                } else if let Some(next) = next_live(&machines, j + 1) {
                    Product::Run { machines, cell: *cell, j: next, stall: 0, moved, idle: *idle }
                } else if next_live(&machines, 0).is_none() {
                    return vec![AMove { target: Target::Accept, moves }];
                } else {
                    let idle = if moved { 0 } else { idle + 1 };
                    if idle > idle_limit {
                        return halt(Target::Reject);
                    }
                    Product::Guess { machines, idle }
                };
                vec![AMove { target: Target::State(target), moves }]
            }
        }
    };

    let nfa = tabulate_automaton(heads, v.input_alphabet(), false, start, delta, |i, p| match p {
        Product::Guess { .. } => format!("g{i}"),
        Product::Run { .. } => format!("t{i}"),
    })?;
    Ok(nfa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::{CertKey, InputMode, VerifierDef};
    use crate::zoo::{builtin_verifier, LanguageId};

    #[test]
    fn twin_protocol_becomes_two_heads() {
        let n = verifier_to_nfa(&builtin_verifier("twin-rt").unwrap()).unwrap();
        assert_eq!(n.head_count(), 2);
        for w in ["", "#", "0#0", "01#01", "01#10", "0#", "##"] {
            assert_eq!(n.accepts(w).unwrap(), LanguageId::Twin.oracle(w).unwrap(), "{w}");
        }
    }

    #[test]
    fn no_coins_gives_one_head() {
        let mut d = VerifierDef::new(InputMode::RealTime, 0, "ab", &["x"]);
        d.det_state("q").halting_states();
        d.start = "q".into();
        d.add("q", Symbol::LeftEnd, CertKey::Any, None, "acc", R, S);
        let n = verifier_to_nfa(&VerifierSpec::new(&d).unwrap()).unwrap();
        assert_eq!(n.head_count(), 1);
        for w in ["", "a", "abba", "bbb"] {
            assert!(n.accepts(w).unwrap());
        }
    }
}
