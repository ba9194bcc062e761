//! Independent oracles and random machine generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use proptest::prelude::*;
use rtverify::{
    validate_automaton, AutomatonDef, CertKey, Certificate, HeadMove, InputMode, MultiheadAutomaton, Symbol,
    TransitionKey, VerifierDef, VerifierSpec,
};

pub const LETTERS: [char; 2] = ['a', 'b'];

fn tape(word: &str) -> Vec<Symbol> {
    let mut t = vec![Symbol::LeftEnd];
    t.extend(word.chars().map(Symbol::Letter));
    t.push(Symbol::RightEnd);
    t
}

fn scannable() -> Vec<Symbol> {
    let mut s = vec![Symbol::LeftEnd];
    s.extend(LETTERS.iter().map(|&c| Symbol::Letter(c)));
    s.push(Symbol::RightEnd);
    s
}

fn tuples(k: usize) -> Vec<Vec<Symbol>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t: Vec<Symbol>| {
                scannable().into_iter().map(move |s| {
                    let mut t = t.clone();
                    t.push(s);
                    t
                })
            })
            .collect();
    }
    out
}

/// Depth-first walk over every computation history of length at most
/// `|Q|·(n+2)^k`, the number of configurations. No configuration memo: each
/// history is followed on its own.
pub fn accepts_by_histories(m: &MultiheadAutomaton, word: &str) -> bool {
    let t = tape(word);
    let k = m.head_count();
    let limit = m.states().len() * t.len().pow(k as u32);
    fn walk(m: &MultiheadAutomaton, t: &[Symbol], q: usize, pos: &[usize], depth: usize, limit: usize) -> bool {
        if q == m.accept() {
            return true;
        }
        if q == m.reject() || depth == limit {
            return false;
        }
        let scanned: Vec<Symbol> = pos.iter().map(|&p| t[p]).collect();
        m.choices(q, &scanned).iter().any(|c| {
            let next: Vec<usize> = pos.iter().zip(&c.moves).map(|(&p, d)| p + usize::from(*d == HeadMove::Right)).collect();
            if next.iter().any(|&p| p >= t.len()) {
                return c.target == m.accept();
            }
            walk(m, t, c.target, &next, depth + 1, limit)
        })
    }
    walk(m, &t, m.start(), &vec![0; k], 0, limit)
}

/// Every word over `alphabet` of length at most `n`, shortlex.
pub fn all_words(alphabet: &[char], n: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..n {
        layer = layer
            .iter()
            .flat_map(|w| alphabet.iter().map(move |c| format!("{w}{c}")))
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// One hardwired run, simulated straight from the transition table.
/// Returns (accepted, steps taken).
pub fn simulate(v: &VerifierSpec, word: &str, cert: &Certificate, bits: &[bool]) -> (bool, usize) {
    let table: HashMap<TransitionKey, _> = v.transitions().map(|(k, a)| (*k, *a)).collect();
    let t = tape(word);
    let (mut q, mut i, mut c, mut used) = (v.start(), 0usize, 0usize, 0usize);
    if q == v.accept() {
        return (true, 0);
    }
    if q == v.reject() {
        return (false, 0);
    }
    let cap = v.states().len() * t.len() * (cert.len() + 2) * (bits.len() + 1) + 1;
    for step in 1..=cap {
        let bit = if v.is_coin(q) {
            let Some(&b) = bits.get(used) else { return (false, step) };
            used += 1;
            Some(b)
        } else {
            None
        };
        let cell = if c < cert.len() { CertKey::Sym(cert.0[c]) } else { CertKey::End };
        let key = TransitionKey { state: q, input: t[i], cert: cell, bit };
        let Some(a) = table.get(&key).or_else(|| table.get(&TransitionKey { cert: CertKey::Any, ..key })) else {
            return (false, step);
        };
        if a.target == v.accept() {
            return (true, step);
        }
        if a.input == HeadMove::Right {
            i += 1;
        }
        if a.cert == HeadMove::Right {
            c += 1;
        }
        if i >= t.len() || c > cert.len() || a.target == v.reject() {
            return (false, step);
        }
        q = a.target;
    }
    (false, cap)
}

pub fn bit_strings(r: u32) -> Vec<Vec<bool>> {
    (0..1usize << r).map(|p| (0..r).map(|j| (p >> (r - 1 - j)) & 1 == 1).collect()).collect()
}

/// Accepting bit strings, counted one by one.
pub fn accepting_count(v: &VerifierSpec, word: &str, cert: &Certificate) -> u64 {
    bit_strings(v.random_bits()).iter().filter(|b| simulate(v, word, cert, b).0).count() as u64
}

/// Every certificate over `g` symbols with at most `bound` cells.
pub fn all_certificates(g: usize, bound: usize) -> Vec<Certificate> {
    let mut out = vec![Certificate(Vec::new())];
    let mut layer = vec![Vec::new()];
    for _ in 0..bound {
        layer = layer
            .iter()
            .flat_map(|c: &Vec<usize>| {
                (0..g).map(move |s| {
                    let mut c = c.clone();
                    c.push(s);
                    c
                })
            })
            .collect();
        out.extend(layer.iter().cloned().map(Certificate));
    }
    out
}

/// Largest accepting fraction over every certificate with at most `bound` cells, as a numerator over `2^r`.
pub fn brute_force_worst(v: &VerifierSpec, word: &str, bound: usize) -> u64 {
    all_certificates(v.cert_alphabet().len(), bound).iter().map(|c| accepting_count(v, word, c)).max().unwrap_or(0)
}

#[derive(Debug, Clone)]
pub struct AutomatonRecipe {
    heads: usize,
    live: usize,
    deterministic: bool,
    /// Per (live state, scanned tuple): list of (target, moves as bit mask).
    entries: Vec<Vec<(usize, u8)>>,
}

impl AutomatonRecipe {
    pub fn build(&self) -> MultiheadAutomaton {
        let names: Vec<String> =
            (0..self.live).map(|i| format!("q{i}")).chain(["acc".to_string(), "rej".to_string()]).collect();
        let mut d = AutomatonDef::new(self.heads, "ab", self.deterministic);
        for n in &names {
            d.state(n);
        }
        d.start = "q0".into();
        d.accept = "acc".into();
        d.reject = "rej".into();
        let ts = tuples(self.heads);
        for q in 0..self.live {
            for (ti, t) in ts.iter().enumerate() {
                let mut seen = Vec::new();
                for &(target, mask) in &self.entries[q * ts.len() + ti] {
                    if seen.contains(&(target, mask)) {
                        continue;
                    }
                    seen.push((target, mask));
                    let moves: Vec<HeadMove> = (0..self.heads)
                        .map(|h| if mask >> h & 1 == 1 { HeadMove::Right } else { HeadMove::Stay })
                        .collect();
                    d.add(&names[q], t, &names[target % names.len()], &moves);
                }
            }
        }
        if self.deterministic {
            d.fill_missing_with_reject();
        }
        validate_automaton(d).expect("generated automaton is valid")
    }
}

/// Automata with at most six states, at most two heads, over `{a, b}`.
pub fn small_automaton() -> impl Strategy<Value = AutomatonRecipe> {
    (1usize..=2, 1usize..=4, any::<bool>()).prop_flat_map(|(heads, live, deterministic)| {
        let cells = live * 4usize.pow(heads as u32);
        let per = if deterministic { 0..=1usize } else { 0..=2usize };
        let entry = prop::collection::vec((0..live + 2, 0u8..(1 << heads)), per);
        prop::collection::vec(entry, cells)
            .prop_map(move |entries| AutomatonRecipe { heads, live, deterministic, entries })
    })
}

#[derive(Debug, Clone)]
pub struct VerifierRecipe {
    mode: InputMode,
    bits: u32,
    coins: Vec<bool>,
    /// Per (state, input symbol, cert key, bit): optional (target, input move, cert move).
    entries: Vec<Option<(usize, bool, bool)>>,
}

pub const CERT: [&str; 2] = ["x", "y"];

impl VerifierRecipe {
    pub fn build(&self) -> VerifierSpec {
        let live = self.coins.len();
        let names: Vec<String> =
            (0..live).map(|i| format!("v{i}")).chain(["acc".to_string(), "rej".to_string()]).collect();
        let mut d = VerifierDef::new(self.mode, self.bits, "ab", &CERT);
        for (i, &coin) in self.coins.iter().enumerate() {
            if coin {
                d.coin_state(&names[i]);
            } else {
                d.det_state(&names[i]);
            }
        }
        d.halting_states();
        d.start = "v0".into();
        let certs = [CertKey::Sym(0), CertKey::Sym(1), CertKey::End];
        let mut it = self.entries.iter();
        for q in 0..live {
            let bits: &[Option<bool>] = if self.coins[q] { &[Some(false), Some(true)] } else { &[None] };
            for s in scannable() {
                for &c in &certs {
                    for &b in bits {
                        let Some(Some((target, di, dc))) = it.next() else { continue };
                        let di = if self.mode == InputMode::RealTime || *di { HeadMove::Right } else { HeadMove::Stay };
                        let dc = if *dc { HeadMove::Right } else { HeadMove::Stay };
                        d.add(&names[q], s, c, b, &names[target % names.len()], di, dc);
                    }
                }
            }
        }
        VerifierSpec::new(&d).expect("generated verifier conforms")
    }
}

/// Verifiers with at most four working states, two coins and a two-symbol certificate alphabet.
pub fn small_verifier(mode: InputMode) -> impl Strategy<Value = VerifierRecipe> {
    (0u32..=2, prop::collection::vec(any::<bool>(), 1..=4)).prop_flat_map(move |(bits, coins)| {
        let live = coins.len();
        let cells = live * 4 * 3 * 2;
        let entry = prop::option::weighted(0.85, (0..live + 2, any::<bool>(), any::<bool>()));
        prop::collection::vec(entry, cells).prop_map(move |entries| VerifierRecipe {
            mode,
            bits,
            coins: coins.clone(),
            entries,
        })
    })
}
