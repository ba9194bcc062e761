//! Exhaustive completeness, soundness and equivalence sweeps with exact
//! probabilities.
//!
//! Inputs are enumerated in shortlex order over the verifier's alphabet. Each
//! input is checked independently (in parallel), and results are assembled in
//! enumeration order so reports are reproducible byte for byte.

use std::fmt::{self, Write as _};

use rayon::prelude::*;
use thiserror::Error;

use crate::automaton::MultiheadAutomaton;
use crate::dyadic::DyadicProbability;
use crate::search::max_acceptance;
use crate::verifier::{Certificate, InputMode, VerifierSpec};
use crate::zoo::LanguageId;

/// Default ceiling on `(input, certificate, coin outcome)` evaluations for
/// certificate enumeration.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("sweep needs {count} evaluations, above the ceiling of {ceiling}")]
    BudgetExceeded { count: u64, ceiling: u64 },
}

/// Longest certificate considered for an input of length `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertBound {
    Fixed(usize),
    /// `n + extra`.
    PlusLength(usize),
    /// Every certificate.
    Unbounded,
}

impl CertBound {
    /// `|w|+2` for real-time verifiers, whose runs read at most that many cells;
    /// no bound for one-way verifiers.
    pub fn default_for(mode: InputMode) -> CertBound {
        match mode {
            InputMode::RealTime => CertBound::PlusLength(2),
            InputMode::OneWay => CertBound::Unbounded,
        }
    }

    pub fn for_length(self, n: usize) -> Option<usize> {
        match self {
            CertBound::Fixed(b) => Some(b),
            CertBound::PlusLength(e) => Some(n + e),
            CertBound::Unbounded => None,
        }
    }
}

impl fmt::Display for CertBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertBound::Fixed(b) => write!(f, "{b}"),
            CertBound::PlusLength(e) => write!(f, "|w|+{e}"),
            CertBound::Unbounded => f.write_str("unbounded"),
        }
    }
}

/// How the worst certificate for a nonmember is found.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CertSearch {
    /// Exact maximisation over the joint configurations of all coin outcomes.
    #[default]
    Joint,
    /// Trying every certificate up to the bound; needs a finite bound.
    Enumerate { budget: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Completeness,
    Soundness,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckKind::Completeness => "completeness",
            CheckKind::Soundness => "soundness",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckRow {
    pub input: String,
    pub member: bool,
    /// Members: acceptance probability of the supplied (or best found)
    /// certificate. Nonmembers: the largest acceptance probability.
    pub probability: DyadicProbability,
    /// The certificate attaining `probability`, rendered; `None` when no
    /// certificate was available.
    pub witness: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckReport {
    pub kind: CheckKind,
    pub verifier: String,
    pub language: String,
    pub alphabet: Vec<char>,
    pub max_len: usize,
    pub cert_bound: CertBound,
    pub random_bits: u32,
    /// Only the strings the check applies to: members for completeness,
    /// nonmembers for soundness.
    pub rows: Vec<CheckRow>,
}

impl CheckReport {
    /// Worst acceptance probability over the nonmember rows.
    pub fn worst_error(&self) -> Option<&CheckRow> {
        // first maximum in enumeration order, so the shortest witness input wins ties
        self.rows.iter().filter(|r| !r.member).fold(None, |best, r| match best {
            Some(b) if b.probability >= r.probability => Some(b),
            _ => Some(r),
        })
    }

    pub fn epsilon(&self) -> DyadicProbability {
        self.worst_error().map_or(DyadicProbability::zero(self.random_bits), |r| r.probability)
    }

    /// Members not accepted with certainty.
    pub fn failures(&self) -> impl Iterator<Item = &CheckRow> {
        self.rows.iter().filter(|r| r.member && !r.probability.is_one())
    }

    /// Completeness: every member accepted with probability 1. Soundness: the
    /// worst error is strictly below 1.
    pub fn passed(&self) -> bool {
        match self.kind {
            CheckKind::Completeness => self.failures().next().is_none(),
            CheckKind::Soundness => !self.epsilon().is_one(),
        }
    }

    fn header(&self) -> Vec<(&'static str, String)> {
        let alphabet: Vec<String> = self.alphabet.iter().map(ToString::to_string).collect();
        let mut h = vec![
            ("check", self.kind.to_string()),
            ("verifier", self.verifier.clone()),
            ("language", self.language.clone()),
            ("alphabet", alphabet.join(",")),
            ("max-len", self.max_len.to_string()),
            ("cert-bound", self.cert_bound.to_string()),
            ("random-bits", self.random_bits.to_string()),
            ("strings", self.rows.len().to_string()),
        ];
        match self.kind {
            CheckKind::Completeness => h.push(("failures", self.failures().count().to_string())),
            CheckKind::Soundness => h.push(("worst-error", self.epsilon().to_string())),
        }
        h.push(("result", if self.passed() { "pass" } else { "fail" }.to_string()));
        h
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.header() {
            let _ = writeln!(out, "{k}: {v}");
        }
        if let (CheckKind::Soundness, Some(w)) = (self.kind, self.worst_error()) {
            let _ = writeln!(out, "worst-input: {}", show(&w.input));
            let _ = writeln!(out, "worst-certificate: {}", w.witness.as_deref().map_or("-".into(), show));
        }
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}",
                show(&r.input),
                if r.member { "member" } else { "nonmember" },
                r.probability,
                r.witness.as_deref().map_or("-".into(), show)
            );
        }
        out
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.header() {
            let _ = writeln!(out, "# {k}\t{v}");
        }
        out.push_str("input\tmember\tprobability\twitness\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}",
                r.input,
                r.member,
                r.probability,
                r.witness.as_deref().unwrap_or("-")
            );
        }
        out
    }
}

fn show(s: &str) -> String {
    if s.is_empty() {
        "ε".to_string()
    } else {
        s.to_string()
    }
}

/// All strings over `alphabet` of length at most `max_len`, shortest first and
/// lexicographic (in alphabet order) within a length.
pub fn words(alphabet: &[char], max_len: usize) -> Vec<String> {
    let mut all = vec![String::new()];
    let mut layer = vec![String::new()];
    for _ in 0..max_len {
        layer = layer.iter().flat_map(|w| alphabet.iter().map(move |c| format!("{w}{c}"))).collect();
        all.extend(layer.iter().cloned());
    }
    all
}

/// Checks what membership is measured against.
pub trait Membership: Sync {
    fn name(&self) -> String;
    fn contains(&self, word: &str) -> bool;
}

impl Membership for LanguageId {
    fn name(&self) -> String {
        self.to_string()
    }

    /// Words with letters outside the language's alphabet are not members.
    fn contains(&self, word: &str) -> bool {
        self.oracle(word).unwrap_or(false)
    }
}

impl Membership for MultiheadAutomaton {
    fn name(&self) -> String {
        format!("{}-head automaton", self.head_count())
    }

    fn contains(&self, word: &str) -> bool {
        self.accepts(word).unwrap_or(false)
    }
}

fn report(kind: CheckKind, v: &VerifierSpec, label: &str, lang: &dyn Membership, max_len: usize, bound: CertBound, rows: Vec<CheckRow>) -> CheckReport {
    CheckReport {
        kind,
        verifier: label.to_string(),
        language: lang.name(),
        alphabet: v.input_alphabet().to_vec(),
        max_len,
        cert_bound: bound,
        random_bits: v.random_bits(),
        rows,
    }
}

/// Certificate generator used by completeness checks.
pub type CertGen<'a> = dyn Fn(&str) -> Option<Certificate> + Sync + 'a;

/// Checks that every member up to `max_len` is accepted with probability 1.
///
/// With a generator each member is run on its generated certificate; without one
/// the best certificate within `bound` is searched for.
pub fn completeness_check(
    v: &VerifierSpec,
    label: &str,
    lang: &dyn Membership,
    certgen: Option<&CertGen<'_>>,
    max_len: usize,
    bound: CertBound,
) -> CheckReport {
    let members: Vec<String> = words(v.input_alphabet(), max_len).into_iter().filter(|w| lang.contains(w)).collect();
    let rows = members
        .into_par_iter()
        .map(|w| {
            let tape = v.tape(&w).expect("word over the verifier alphabet");
            let (probability, cert) = match certgen {
                Some(g) => match g(&w).filter(|c| v.check_certificate(c).is_ok()) {
                    Some(c) => (v.acceptance_on_tape(&tape, &c), Some(c)),
                    None => (DyadicProbability::zero(v.random_bits()), None),
                },
                None => {
                    let r = max_acceptance(v, &tape, bound.for_length(w.len()));
                    (r.best, Some(r.witness))
                }
            };
            CheckRow { input: w, member: true, probability, witness: cert.map(|c| v.render_certificate(&c)) }
        })
        .collect();
    report(CheckKind::Completeness, v, label, lang, max_len, bound, rows)
}

/// Finds, for every nonmember up to `max_len`, the largest acceptance
/// probability over certificates within `bound`.
pub fn soundness_check(
    v: &VerifierSpec,
    label: &str,
    lang: &dyn Membership,
    max_len: usize,
    bound: CertBound,
    method: CertSearch,
) -> Result<CheckReport, CheckError> {
    let nonmembers: Vec<String> =
        words(v.input_alphabet(), max_len).into_iter().filter(|w| !lang.contains(w)).collect();
    if let CertSearch::Enumerate { budget } = method {
        let count = enumeration_cost(v, &nonmembers, bound);
        if count > budget {
            return Err(CheckError::BudgetExceeded { count, ceiling: budget });
        }
    }
    let rows = nonmembers
        .into_par_iter()
        .map(|w| {
            let tape = v.tape(&w).expect("word over the verifier alphabet");
            let limit = bound.for_length(w.len());
            let (probability, cert) = match method {
                CertSearch::Joint => {
                    let r = max_acceptance(v, &tape, limit);
                    (r.best, r.witness)
                }
                CertSearch::Enumerate { .. } => enumerate_worst(v, &tape, limit.expect("finite bound")),
            };
            CheckRow { input: w, member: false, probability, witness: Some(v.render_certificate(&cert)) }
        })
        .collect();
    Ok(report(CheckKind::Soundness, v, label, lang, max_len, bound, rows))
}

/// Number of `(input, certificate, coin outcome)` runs certificate enumeration
/// would perform; saturates, and is `u64::MAX` for an unbounded sweep.
pub fn enumeration_cost(v: &VerifierSpec, inputs: &[String], bound: CertBound) -> u64 {
    let g = v.cert_alphabet().len() as u64;
    let branches = v.branch_count() as u64;
    inputs.iter().fold(0u64, |acc, w| {
        let Some(b) = bound.for_length(w.len()) else { return u64::MAX };
        let mut certs = 0u64;
        let mut layer = 1u64;
        for _ in 0..=b {
            certs = certs.saturating_add(layer);
            layer = layer.saturating_mul(g);
        }
        acc.saturating_add(certs.saturating_mul(branches))
    })
}

/// Tries every certificate of length at most `bound` in shortlex order; returns
/// the first one attaining the maximum.
pub fn enumerate_worst(v: &VerifierSpec, tape: &crate::symbol::Tape, bound: usize) -> (DyadicProbability, Certificate) {
    let g = v.cert_alphabet().len();
    let mut best = (v.acceptance_on_tape(tape, &Certificate::default()), Certificate::default());
    let mut cert: Vec<usize> = Vec::new();
    for len in 1..=bound {
        if g == 0 {
            break;
        }
        cert.clear();
        cert.resize(len, 0);
        loop {
            let c = Certificate(cert.clone());
            let p = v.acceptance_on_tape(tape, &c);
            if p > best.0 {
                best = (p, c);
                if best.0.is_one() {
                    return best;
                }
            }
            // odometer increment, last position fastest
            let mut i = len;
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                cert[i] += 1;
                if cert[i] < g {
                    break;
                }
                cert[i] = 0;
            }
            if cert.iter().all(|&s| s == 0) {
                break;
            }
        }
    }
    best
}

/// First string, in shortlex order over `a`'s alphabet, on which `a` and `b`
/// disagree.
pub fn language_equivalence(a: &MultiheadAutomaton, b: &dyn Membership, max_len: usize) -> Option<String> {
    words(a.alphabet(), max_len).into_par_iter().find_first(|w| a.contains(w) != b.contains(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::{HeadMove, Symbol};
    use crate::verifier::{CertKey, VerifierDef};
    use crate::zoo::{builtin_machine, builtin_verifier};

    fn always_reject() -> VerifierSpec {
        let mut d = VerifierDef::new(InputMode::RealTime, 1, "01#", &["0"]);
        d.coin_state("q").halting_states();
        d.start = "q".into();
        d.add("q", Symbol::LeftEnd, CertKey::Any, Some(false), "rej", HeadMove::Right, HeadMove::Stay);
        VerifierSpec::new(&d).unwrap()
    }

    #[test]
    fn words_are_shortlex() {
        assert_eq!(words(&['a', 'b'], 2), ["", "a", "b", "aa", "ab", "ba", "bb"]);
    }

    #[test]
    fn always_reject_fails_completeness_and_has_zero_error() {
        let v = always_reject();
        let c = completeness_check(&v, "reject", &LanguageId::Twin, None, 3, CertBound::PlusLength(2));
        assert!(!c.passed());
        assert_eq!(c.failures().count(), c.rows.len());
        let s = soundness_check(&v, "reject", &LanguageId::Twin, 3, CertBound::PlusLength(2), CertSearch::Joint).unwrap();
        assert!(s.epsilon().is_zero());
    }

    #[test]
    fn twin_protocol_small_sweep() {
        let v = builtin_verifier("twin-rt").unwrap();
        let gen = |w: &str| LanguageId::Twin.canonical_certificate(w).ok();
        let c = completeness_check(&v, "twin-rt", &LanguageId::Twin, Some(&gen), 5, CertBound::PlusLength(2));
        assert!(c.passed());
        let s = soundness_check(&v, "twin-rt", &LanguageId::Twin, 4, CertBound::PlusLength(2), CertSearch::Joint).unwrap();
        assert_eq!(s.epsilon(), DyadicProbability::new(1, 1).unwrap());
    }

    #[test]
    fn budget_guard_refuses_large_enumeration() {
        let v = builtin_verifier("twin-rt").unwrap();
        let r = soundness_check(&v, "twin-rt", &LanguageId::Twin, 6, CertBound::PlusLength(2), CertSearch::Enumerate { budget: 1000 });
        assert!(matches!(r, Err(CheckError::BudgetExceeded { ceiling: 1000, .. })));
    }

    #[test]
    fn first_disagreement() {
        let n = builtin_machine("nonpal-1nfa2").unwrap();
        assert_eq!(language_equivalence(&n, &LanguageId::Twin, 3).as_deref(), Some("01"));
        let t = builtin_machine("twin-1dfa2").unwrap();
        assert_eq!(language_equivalence(&t, &LanguageId::Twin, 6), None);
    }
}
