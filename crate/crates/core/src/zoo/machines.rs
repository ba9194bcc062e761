use crate::automaton::MultiheadAutomaton;
use crate::symbol::{HeadMove, Symbol};
use crate::tabulate::{tabulate_automaton, AMove, Target};

use super::ZooError;

use HeadMove::{Right as R, Stay as S};
use Symbol::{LeftEnd, Letter, RightEnd};

/// Hand-designed multihead automata, by identifier.
pub fn builtin_machine(id: &str) -> Result<MultiheadAutomaton, ZooError> {
    let m = match id {
        "twin-1dfa2" => twin(),
        "equal01-1dfa2" => equal01(),
        "nonpal-1nfa2" => nonpal(),
        "lik-1dfa3" => lik(),
        _ => return Err(ZooError::UnknownBuiltin(id.to_string())),
    };
    Ok(m.expect("built-in machines are well formed"))
}

fn mv<T>(target: Target<T>, moves: &[HeadMove]) -> Vec<AMove<T>> {
    vec![AMove { target, moves: moves.to_vec() }]
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Twin {
    SeekMark,
    Compare,
}

fn twin() -> Result<MultiheadAutomaton, crate::tabulate::TabulateError> {
    tabulate_automaton(
        2,
        &['0', '1', '#'],
        true,
        Twin::SeekMark,
        |q, s| match (q, s[0], s[1]) {
            (Twin::SeekMark, Letter('#'), LeftEnd) => mv(Target::State(Twin::Compare), &[R, R]),
            (Twin::SeekMark, LeftEnd | Letter(_), LeftEnd) => mv(Target::State(Twin::SeekMark), &[R, S]),
            (Twin::Compare, Letter(x), Letter(y)) if x == y && x != '#' => {
                mv(Target::State(Twin::Compare), &[R, R])
            }
            (Twin::Compare, RightEnd, Letter('#')) => mv(Target::Accept, &[S, S]),
            _ => vec![],
        },
        |_, q| match q {
            Twin::SeekMark => "seek".into(),
            Twin::Compare => "compare".into(),
        },
    )
}

/// Head 1 walks to each 0, head 2 to each 1; they advance together when both
/// sit on a match and accept when both run out at once.
fn equal01() -> Result<MultiheadAutomaton, crate::tabulate::TabulateError> {
    tabulate_automaton(
        2,
        &['0', '1', '#'],
        true,
        (),
        |_, s| match (s[0], s[1]) {
            (RightEnd, RightEnd) => mv(Target::Accept, &[S, S]),
            (LeftEnd | Letter('1' | '#'), _) => mv(Target::State(()), &[R, S]),
            (_, LeftEnd | Letter('0' | '#')) => mv(Target::State(()), &[S, R]),
            (Letter('0'), Letter('1')) => mv(Target::State(()), &[R, R]),
            _ => mv(Target::Reject, &[S, S]),
        },
        |_, _| "pair".into(),
    )
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Nonpal {
    Guess,
    Mirror(char),
}

/// Head 1 guesses a position and remembers its symbol; both heads then move in
/// lockstep, so when head 1 falls on the right end-marker head 2 is on the
/// mirrored position.
fn nonpal() -> Result<MultiheadAutomaton, crate::tabulate::TabulateError> {
    tabulate_automaton(
        2,
        &['0', '1'],
        false,
        Nonpal::Guess,
        |q, s| match (q, s[0], s[1]) {
            (Nonpal::Guess, LeftEnd, _) => mv(Target::State(Nonpal::Guess), &[R, S]),
            (Nonpal::Guess, Letter(x), _) => vec![
                AMove { target: Target::State(Nonpal::Guess), moves: vec![R, S] },
                AMove { target: Target::State(Nonpal::Mirror(x)), moves: vec![R, R] },
            ],
            (Nonpal::Mirror(x), Letter(_), _) => mv(Target::State(Nonpal::Mirror(*x)), &[R, R]),
            (Nonpal::Mirror(x), RightEnd, Letter(y)) if y != *x => mv(Target::Accept, &[S, S]),
            _ => vec![],
        },
        |_, q| match q {
            Nonpal::Guess => "guess".into(),
            Nonpal::Mirror(x) => format!("mirror{x}"),
        },
    )
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Lik {
    /// Head 2 walks to the start of the b-block.
    PlaceSecond,
    /// Head 3 walks to the start of the c-block.
    PlaceThird,
    /// Head 1 steps off the left end-marker.
    Launch,
    /// All heads run through their blocks; `done[h]` marks exhausted heads.
    Race { done: [bool; 3], tie: bool },
}

/// Heads 1..3 traverse the a-, b- and c-blocks in lockstep. Two blocks have
/// equal length exactly when their heads run out in the same step.
fn lik() -> Result<MultiheadAutomaton, crate::tabulate::TabulateError> {
    const OWN: [char; 3] = ['a', 'b', 'c'];
    tabulate_automaton(
        3,
        &OWN,
        true,
        Lik::PlaceSecond,
        |q, s| match q {
            Lik::PlaceSecond => match s[1] {
                LeftEnd | Letter('a') => mv(Target::State(Lik::PlaceSecond), &[S, R, S]),
                _ => mv(Target::State(Lik::PlaceThird), &[S, S, S]),
            },
            Lik::PlaceThird => match s[2] {
                LeftEnd | Letter('a' | 'b') => mv(Target::State(Lik::PlaceThird), &[S, S, R]),
                _ => mv(Target::State(Lik::Launch), &[S, S, S]),
            },
            Lik::Launch => mv(Target::State(Lik::Race { done: [false; 3], tie: false }), &[R, S, S]),
            Lik::Race { done, tie } => {
                let mut done2 = *done;
                let mut moves = [S; 3];
                let mut finished_now = 0;
                for h in 0..3 {
                    if done[h] {
                        continue;
                    }
                    if s[h] == Letter(OWN[h]) {
                        moves[h] = R;
                        continue;
                    }
                    // the block after b must be c's or the end; after c only the end
                    let well_formed = match h {
                        1 => matches!(s[h], Letter('c') | RightEnd),
                        2 => s[h] == RightEnd,
                        _ => true,
                    };
                    if !well_formed {
                        return mv(Target::Reject, &[S, S, S]);
                    }
                    done2[h] = true;
                    finished_now += 1;
                }
                let tie = *tie || finished_now >= 2;
                if done2.iter().all(|&d| d) {
                    mv(if tie { Target::Accept } else { Target::Reject }, &[S, S, S])
                } else {
                    mv(Target::State(Lik::Race { done: done2, tie }), &moves)
                }
            }
        },
        |_, q| match q {
            Lik::PlaceSecond => "place2".into(),
            Lik::PlaceThird => "place3".into(),
            Lik::Launch => "launch".into(),
            Lik::Race { done, tie } => {
                let d: String = done.iter().map(|&b| if b { '1' } else { '0' }).collect();
                format!("race{d}{}", if *tie { "t" } else { "" })
            }
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::LanguageId;

    fn words(alphabet: &[char], max_len: usize) -> Vec<String> {
        let mut all = vec![String::new()];
        let mut layer = vec![String::new()];
        for _ in 0..max_len {
            layer = layer.iter().flat_map(|w| alphabet.iter().map(move |c| format!("{w}{c}"))).collect();
            all.extend(layer.iter().cloned());
        }
        all
    }

    fn agrees(id: &str, lang: LanguageId, max_len: usize) {
        let m = builtin_machine(id).unwrap();
        for w in words(lang.alphabet(), max_len) {
            assert_eq!(m.accepts(&w).unwrap(), lang.oracle(&w).unwrap(), "{id} on {w:?}");
        }
    }

    #[test]
    fn twin_matches_oracle() {
        agrees("twin-1dfa2", LanguageId::Twin, 8);
    }

    #[test]
    fn equal01_matches_oracle() {
        agrees("equal01-1dfa2", LanguageId::Equal01, 7);
    }

    #[test]
    fn nonpal_matches_oracle() {
        agrees("nonpal-1nfa2", LanguageId::Nonpal, 8);
    }

    #[test]
    fn lik_matches_oracle() {
        agrees("lik-1dfa3", LanguageId::Lik, 7);
        assert_eq!(builtin_machine("lik-1dfa3").unwrap().head_count(), 3);
    }

    #[test]
    fn head_counts_and_determinism() {
        assert!(builtin_machine("twin-1dfa2").unwrap().is_deterministic());
        assert!(!builtin_machine("nonpal-1nfa2").unwrap().is_deterministic());
        assert!(builtin_machine("nope").is_err());
    }
}
