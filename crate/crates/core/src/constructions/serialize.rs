use std::collections::{BTreeSet, HashSet};

use crate::automaton::{validate_automaton, AutomatonDef, MultiheadAutomaton, StateId, TransitionDef};
use crate::symbol::{HeadMove, Symbol};

use super::ConstructionError;

use HeadMove::{Right as R, Stay as S};

/// A 2-head deterministic automaton that moves exactly one head per step and
/// whose first step moves head 1.
#[derive(Debug, Clone)]
pub struct SerializedAutomaton {
    automaton: MultiheadAutomaton,
    primed: BTreeSet<StateId>,
    swapped: bool,
}

impl SerializedAutomaton {
    /// Wraps an automaton that already has the serialized shape.
    pub fn new(automaton: MultiheadAutomaton) -> Result<Self, ConstructionError> {
        if automaton.head_count() != 2 {
            return Err(ConstructionError::HeadCount { expected: 2, found: automaton.head_count() });
        }
        if !automaton.is_deterministic() {
            return Err(ConstructionError::NotDeterministic);
        }
        if let Some(v) = structural_violations(&automaton).into_iter().next() {
            return Err(ConstructionError::NotSerialized(v));
        }
        Ok(SerializedAutomaton { automaton, primed: BTreeSet::new(), swapped: false })
    }

    pub fn automaton(&self) -> &MultiheadAutomaton {
        &self.automaton
    }

    pub fn into_automaton(self) -> MultiheadAutomaton {
        self.automaton
    }

    /// Intermediate states introduced to split simultaneous moves.
    pub fn primed_states(&self) -> &BTreeSet<StateId> {
        &self.primed
    }

    /// Whether the head roles were exchanged so that head 1 moves first.
    pub fn swapped(&self) -> bool {
        self.swapped
    }

    /// The unique move of `(q, x, y)`.
    pub(crate) fn step(&self, q: StateId, x: Symbol, y: Symbol) -> Option<(StateId, usize)> {
        let c = self.automaton.choices(q, &[x, y]).first()?;
        let head = if c.moves[0] == R { 0 } else { 1 };
        Some((c.target, head))
    }
}

/// Entries of a 2-head automaton that break the serialized shape, described in
/// words. Empty for a well-formed serialized automaton.
pub fn structural_violations(m: &MultiheadAutomaton) -> Vec<String> {
    let mut out = Vec::new();
    for ((q, scanned), choices) in m.transitions() {
        for c in choices {
            if c.moves.iter().filter(|&&d| d == R).count() != 1 {
                let moves: Vec<String> = c.moves.iter().map(ToString::to_string).collect();
                let syms: Vec<String> = scanned.iter().map(ToString::to_string).collect();
                out.push(format!("{} on ({}) moves ({})", m.state_name(*q), syms.join(","), moves.join(",")));
            }
        }
    }
    if !m.is_halting(m.start()) {
        let first = m.choices(m.start(), &[Symbol::LeftEnd, Symbol::LeftEnd]);
        if first.iter().any(|c| c.moves[0] != R) {
            out.push("the first step does not move head 1".into());
        }
    }
    out
}

enum Resolved {
    Halt(StateId),
    Loop,
    Move(StateId, [HeadMove; 2]),
}

/// Follows stationary steps from `q` on the fixed scanned pair.
fn resolve(m: &MultiheadAutomaton, q: StateId, scanned: &[Symbol]) -> Resolved {
    let mut seen = HashSet::new();
    let mut cur = q;
    loop {
        if m.is_halting(cur) {
            return Resolved::Halt(cur);
        }
        if !seen.insert(cur) {
            return Resolved::Loop;
        }
        let Some(c) = m.choices(cur, scanned).first() else {
            return Resolved::Halt(m.reject());
        };
        match (c.moves[0], c.moves[1]) {
            (S, S) => cur = c.target,
            (a, b) => return Resolved::Move(c.target, [a, b]),
        }
    }
}

/// Rewrites a 2-head deterministic automaton so that every step moves exactly
/// one head.
///
/// * A step moving both heads to `s` becomes a head-1 step into a fresh primed
///   state `s'`, from which every scanned pair moves head 2 into `s`. Steps into
///   a halting state need no split.
/// * A stationary step is replaced by the outcome of its stationary chain: a
///   halting state is entered with a head-1 step, a cycle becomes a head-1 step
///   into the reject state, and a chain ending in a move takes that move.
/// * If the start state's first step would move head 2, the heads are renamed.
///
/// The recognised language is unchanged.
pub fn serialize_heads(m: &MultiheadAutomaton) -> Result<SerializedAutomaton, ConstructionError> {
    if m.head_count() != 2 {
        return Err(ConstructionError::HeadCount { expected: 2, found: m.head_count() });
    }
    if !m.is_deterministic() {
        return Err(ConstructionError::NotDeterministic);
    }
    let names = m.states();
    let symbols = crate::symbol::scannable(m.alphabet());
    let pairs = crate::automaton::symbol_tuples(&symbols, 2);

    // (from, scanned, target, primed target?, moves)
    let mut rows: Vec<(StateId, Vec<Symbol>, StateId, bool, [HeadMove; 2])> = Vec::new();
    let mut primed: BTreeSet<StateId> = BTreeSet::new();
    for q in (0..names.len()).filter(|&q| !m.is_halting(q)) {
        for scanned in &pairs {
            let (to, split, moves) = match resolve(m, q, scanned) {
                Resolved::Halt(h) => (h, false, [R, S]),
                Resolved::Loop => (m.reject(), false, [R, S]),
                Resolved::Move(t, [R, R]) if m.is_halting(t) => (t, false, [R, S]),
                Resolved::Move(t, [R, R]) => {
                    primed.insert(t);
                    (t, true, [R, S])
                }
                Resolved::Move(t, moves) => (t, false, moves),
            };
            rows.push((q, scanned.clone(), to, split, moves));
        }
    }

    let swapped = !m.is_halting(m.start())
        && rows.iter().any(|(q, s, _, _, mv)| *q == m.start() && s[0] == Symbol::LeftEnd && s[1] == Symbol::LeftEnd && mv[0] != R);

    let mut taken: HashSet<String> = names.iter().cloned().collect();
    let mut primed_name = |q: StateId| {
        let mut n = format!("{}'", names[q]);
        while !taken.insert(n.clone()) {
            n.push('\'');
        }
        n
    };
    let primed_names: Vec<(StateId, String)> = primed.iter().map(|&q| (q, primed_name(q))).collect();
    let name_of = |q: StateId, split: bool| -> String {
        if split {
            primed_names.iter().find(|(p, _)| *p == q).expect("primed").1.clone()
        } else {
            names[q].clone()
        }
    };
    let orient = |scanned: &[Symbol], moves: [HeadMove; 2]| -> (Vec<Symbol>, Vec<HeadMove>) {
        if swapped {
            (vec![scanned[1], scanned[0]], vec![moves[1], moves[0]])
        } else {
            (scanned.to_vec(), moves.to_vec())
        }
    };

    let mut def = AutomatonDef::new(2, "", true);
    def.alphabet = m.alphabet().to_vec();
    def.states = names.to_vec();
    def.states.extend(primed_names.iter().map(|(_, n)| n.clone()));
    def.start = names[m.start()].clone();
    def.accept = names[m.accept()].clone();
    def.reject = names[m.reject()].clone();
    for (q, scanned, to, split, moves) in rows {
        let (scanned, moves) = orient(&scanned, moves);
        def.transitions.push(TransitionDef { from: names[q].clone(), scanned, to: name_of(to, split), moves });
    }
    for (q, name) in &primed_names {
        for scanned in &pairs {
            let (scanned, moves) = orient(scanned, [S, R]);
            def.transitions.push(TransitionDef { from: name.clone(), scanned, to: names[*q].clone(), moves });
        }
    }
    let automaton = validate_automaton(def)?;
    let primed = automaton.states().iter().enumerate().skip(names.len()).map(|(i, _)| i).collect();
    Ok(SerializedAutomaton { automaton, primed, swapped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::Symbol::{LeftEnd, Letter, RightEnd};
    use crate::zoo::builtin_machine;

    fn moves_of(m: &MultiheadAutomaton, q: &str, s: [Symbol; 2]) -> (String, Vec<HeadMove>) {
        let c = &m.choices(m.state_id(q).unwrap(), &s)[0];
        (m.state_name(c.target).to_string(), c.moves.clone())
    }

    fn machine(rows: &[(&str, [Symbol; 2], &str, [HeadMove; 2])]) -> MultiheadAutomaton {
        let mut d = AutomatonDef::new(2, "0", true);
        for s in ["q0", "q1", "acc", "rej"] {
            d.state(s);
        }
        d.start = "q0".into();
        d.accept = "acc".into();
        d.reject = "rej".into();
        for (f, s, t, mv) in rows {
            d.add(f, s, t, mv);
        }
        d.fill_missing_with_reject();
        validate_automaton(d).unwrap()
    }

    #[test]
    fn splits_double_moves() {
        let m = machine(&[("q0", [LeftEnd, LeftEnd], "q1", [R, R])]);
        let s = serialize_heads(&m).unwrap();
        let a = s.automaton();
        assert_eq!(moves_of(a, "q0", [LeftEnd, LeftEnd]), ("q1'".into(), vec![R, S]));
        for x in [LeftEnd, Letter('0'), RightEnd] {
            for y in [LeftEnd, Letter('0'), RightEnd] {
                assert_eq!(moves_of(a, "q1'", [x, y]), ("q1".into(), vec![S, R]));
            }
        }
        assert_eq!(s.primed_states().len(), 1);
    }

    #[test]
    fn stationary_cycle_rejects() {
        let m = machine(&[("q0", [LeftEnd, LeftEnd], "q0", [S, S])]);
        let a = serialize_heads(&m).unwrap().into_automaton();
        assert_eq!(moves_of(&a, "q0", [LeftEnd, LeftEnd]), ("rej".into(), vec![R, S]));
    }

    #[test]
    fn stationary_chain_takes_final_move() {
        let m = machine(&[
            ("q0", [LeftEnd, LeftEnd], "q1", [S, S]),
            ("q1", [LeftEnd, LeftEnd], "acc", [S, R]),
        ]);
        let s = serialize_heads(&m).unwrap();
        // the first move now belongs to head 2, so the heads are renamed
        assert!(s.swapped());
        assert_eq!(moves_of(s.automaton(), "q0", [LeftEnd, LeftEnd]), ("acc".into(), vec![R, S]));
    }

    #[test]
    fn builtins_serialize_cleanly() {
        for id in ["twin-1dfa2", "equal01-1dfa2"] {
            let s = serialize_heads(&builtin_machine(id).unwrap()).unwrap();
            assert!(structural_violations(s.automaton()).is_empty(), "{id}");
        }
    }

    #[test]
    fn rejects_wrong_inputs() {
        assert!(matches!(
            serialize_heads(&builtin_machine("nonpal-1nfa2").unwrap()),
            Err(ConstructionError::NotDeterministic)
        ));
        assert!(matches!(
            serialize_heads(&builtin_machine("lik-1dfa3").unwrap()),
            Err(ConstructionError::HeadCount { expected: 2, found: 3 })
        ));
    }
}
