//! Built-in languages: membership oracles, example automata, hand-built
//! verification protocols and their intended certificates.

mod machines;
mod verifiers;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::automaton::MultiheadAutomaton;
use crate::verifier::{Certificate, VerifierSpec};

pub use machines::builtin_machine;
pub use verifiers::builtin_verifier;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZooError {
    #[error("unknown language `{0}`")]
    UnknownLanguage(String),
    #[error("unknown builtin `{0}`")]
    UnknownBuiltin(String),
    #[error("letter {letter:?} is outside the alphabet of {language}")]
    LetterOutsideAlphabet { language: LanguageId, letter: char },
    #[error("{word:?} is not a member of {language}")]
    NotAMember { language: LanguageId, word: String },
    #[error("{0} has no built-in verifier")]
    NoVerifier(LanguageId),
    #[error("bad parameter in `{0}`")]
    BadParameter(String),
}

/// Largest `n` accepted for the segment-mirror family.
pub const MAX_MIRROR_PAIRS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LanguageId {
    /// `w#w` over binary `w`.
    Twin,
    /// Binary strings that are not palindromes.
    Nonpal,
    /// As many 0s as 1s.
    Equal01,
    /// Odd-length strings with `#` exactly in the middle and binary elsewhere.
    Middlemark,
    /// `a^i b^j c^k` with two equal exponents.
    Lik,
    /// `y_1#...#y_2n` with `y_i = y_(2n+1-i)`.
    Mirror(usize),
    /// `x#y_1#...#y_k` with some `y_i = x`, all parts non-empty.
    Lmatch,
    /// `ww`.
    Lhalf,
    /// `xwx` with `|x| = |w|`.
    Ltwothirds,
}

impl LanguageId {
    pub fn all_fixed() -> [LanguageId; 8] {
        use LanguageId::*;
        [Twin, Nonpal, Equal01, Middlemark, Lik, Lmatch, Lhalf, Ltwothirds]
    }

    pub fn alphabet(self) -> &'static [char] {
        match self {
            LanguageId::Nonpal | LanguageId::Lhalf | LanguageId::Ltwothirds => &['0', '1'],
            LanguageId::Lik => &['a', 'b', 'c'],
            _ => &['0', '1', '#'],
        }
    }

    pub fn oracle(self, word: &str) -> Result<bool, ZooError> {
        let w: Vec<char> = word.chars().collect();
        if let Some(&letter) = w.iter().find(|c| !self.alphabet().contains(c)) {
            return Err(ZooError::LetterOutsideAlphabet { language: self, letter });
        }
        Ok(match self {
            LanguageId::Twin => twin(word).is_some(),
            LanguageId::Nonpal => nonpal_split(&w).is_some(),
            LanguageId::Equal01 => count(&w, '0') == count(&w, '1'),
            LanguageId::Middlemark => {
                w.len() % 2 == 1
                    && w.iter().enumerate().all(|(i, &c)| (i == w.len() / 2) == (c == '#'))
            }
            LanguageId::Lik => lik_split(word).is_some_and(|(i, j, k)| i == j || i == k || j == k),
            LanguageId::Mirror(n) => mirror_segments(word, n).is_some(),
            LanguageId::Lmatch => {
                let parts: Vec<&str> = word.split('#').collect();
                parts.len() >= 2 && parts.iter().all(|p| !p.is_empty()) && parts[1..].contains(&parts[0])
            }
            LanguageId::Lhalf => w.len().is_multiple_of(2) && w[..w.len() / 2] == w[w.len() / 2..],
            LanguageId::Ltwothirds => {
                let t = w.len() / 3;
                w.len().is_multiple_of(3) && w[..t] == w[2 * t..]
            }
        })
    }

    /// Identifier of the built-in verifier for this language, if any.
    pub fn verifier_id(self) -> Option<String> {
        match self {
            LanguageId::Twin => Some("twin-rt".into()),
            LanguageId::Nonpal => Some("nonpal-rt".into()),
            LanguageId::Lik => Some("lik-rt".into()),
            LanguageId::Mirror(n) => Some(format!("ln-rt:{n}")),
            _ => None,
        }
    }

    /// Certificate alphabet of the built-in verifier, in index order.
    pub fn cert_alphabet(self) -> Result<Vec<String>, ZooError> {
        let tokens: &[&str] = match self {
            LanguageId::Twin | LanguageId::Nonpal => &["0", "1"],
            LanguageId::Lik => &["A", "B", "C", "x"],
            LanguageId::Mirror(_) => &["0", "1", "#"],
            _ => return Err(ZooError::NoVerifier(self)),
        };
        Ok(tokens.iter().map(|t| t.to_string()).collect())
    }

    pub fn builtin_verifier(self) -> Result<VerifierSpec, ZooError> {
        let id = self.verifier_id().ok_or(ZooError::NoVerifier(self))?;
        builtin_verifier(&id)
    }

    /// The certificate the built-in verifier expects for a member.
    ///
    /// When several decompositions prove membership the first one in scan order is
    /// used (smallest prefix for non-palindromes; `i=j`, then `i=k`, then `j=k`).
    pub fn canonical_certificate(self, word: &str) -> Result<Certificate, ZooError> {
        let alphabet = self.cert_alphabet()?;
        if !self.oracle(word)? {
            return Err(ZooError::NotAMember { language: self, word: word.to_string() });
        }
        let text: String = match self {
            LanguageId::Twin => twin(word).expect("member").to_string(),
            LanguageId::Nonpal => {
                let w: Vec<char> = word.chars().collect();
                let x = nonpal_split(&w).expect("member");
                let y = w.len() - 2 * x - 2;
                format!("{}1{}", "0".repeat(x), "0".repeat(y))
            }
            LanguageId::Lik => {
                let (i, j, k) = lik_split(word).expect("member");
                let (marker, l) = if i == j {
                    ('A', i)
                } else if i == k {
                    ('B', i)
                } else {
                    ('C', j)
                };
                format!("{marker}{}", "x".repeat(l))
            }
            LanguageId::Mirror(n) => mirror_segments(word, n).expect("member")[..n].join("#"),
            _ => unreachable!("cert_alphabet rejected languages without verifiers"),
        };
        let symbols = text
            .chars()
            .map(|c| alphabet.iter().position(|t| t.starts_with(c)).expect("certificate letters are in the alphabet"))
            .collect();
        Ok(Certificate(symbols))
    }
}

fn count(w: &[char], c: char) -> usize {
    w.iter().filter(|&&x| x == c).count()
}

/// The `w` of a `w#w` word.
fn twin(word: &str) -> Option<&str> {
    let (l, r) = word.split_once('#')?;
    (l == r).then_some(l)
}

/// Length of the shortest prefix `x` such that the word is `x σ y σ' z` with
/// `|x| = |z|` and `σ ≠ σ'`.
fn nonpal_split(w: &[char]) -> Option<usize> {
    (0..w.len() / 2).find(|&i| w[i] != w[w.len() - 1 - i])
}

fn lik_split(word: &str) -> Option<(usize, usize, usize)> {
    let i = word.chars().take_while(|&c| c == 'a').count();
    let j = word[i..].chars().take_while(|&c| c == 'b').count();
    let k = word[i + j..].chars().take_while(|&c| c == 'c').count();
    (i + j + k == word.len()).then_some((i, j, k))
}

fn mirror_segments(word: &str, n: usize) -> Option<Vec<&str>> {
    let parts: Vec<&str> = word.split('#').collect();
    let ok = parts.len() == 2 * n && (0..n).all(|i| parts[i] == parts[2 * n - 1 - i]);
    ok.then_some(parts)
}

impl fmt::Display for LanguageId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LanguageId::Twin => f.write_str("twin"),
            LanguageId::Nonpal => f.write_str("nonpal"),
            LanguageId::Equal01 => f.write_str("equal01"),
            LanguageId::Middlemark => f.write_str("middlemark"),
            LanguageId::Lik => f.write_str("lik"),
            LanguageId::Mirror(n) => write!(f, "ln:{n}"),
            LanguageId::Lmatch => f.write_str("lmatch"),
            LanguageId::Lhalf => f.write_str("lhalf"),
            LanguageId::Ltwothirds => f.write_str("ltwothirds"),
        }
    }
}

impl FromStr for LanguageId {
    type Err = ZooError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(n) = s.strip_prefix("ln:").or_else(|| s.strip_prefix("ln")) {
            let n: usize = n.parse().map_err(|_| ZooError::BadParameter(s.to_string()))?;
            if n == 0 || n > MAX_MIRROR_PAIRS {
                return Err(ZooError::BadParameter(s.to_string()));
            }
            return Ok(LanguageId::Mirror(n));
        }
        LanguageId::all_fixed()
            .into_iter()
            .find(|l| l.to_string() == s)
            .ok_or_else(|| ZooError::UnknownLanguage(s.to_string()))
    }
}

/// What a built-in identifier names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinKind {
    Automaton,
    Verifier,
}

/// Catalogue entry for `zoo --list`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuiltinEntry {
    pub id: &'static str,
    pub kind: BuiltinKind,
    pub language: &'static str,
    pub summary: &'static str,
}

pub fn catalogue() -> Vec<BuiltinEntry> {
    use BuiltinKind::*;
    let e = |id, kind, language, summary| BuiltinEntry { id, kind, language, summary };
    vec![
        e("twin-1dfa2", Automaton, "twin", "2-head deterministic: skip to #, compare halves in lockstep"),
        e("equal01-1dfa2", Automaton, "equal01", "2-head deterministic: pair each 0 with a 1"),
        e("nonpal-1nfa2", Automaton, "nonpal", "2-head nondeterministic: guess a mismatched mirror pair"),
        e("lik-1dfa3", Automaton, "lik", "3-head deterministic: race the three segments"),
        e("twin-rt", Verifier, "twin", "real-time, 1 coin: compare a random half with the certificate"),
        e("nonpal-rt", Verifier, "nonpal", "real-time, 1 coin: certificate 0^i 1 0^j marks a mismatch"),
        e("lik-rt", Verifier, "lik", "real-time, 1 coin: certificate names two equal segments"),
        e("ln-rt:N", Verifier, "ln:N", "real-time, ceil(log2(N+1)) coins: certificate is the first half"),
    ]
}

/// Resolves a built-in automaton name.
pub fn lookup_machine(id: &str) -> Result<MultiheadAutomaton, ZooError> {
    builtin_machine(id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verifier::render_certificate;

    fn cert(l: LanguageId, w: &str) -> String {
        render_certificate(&l.cert_alphabet().unwrap(), &l.canonical_certificate(w).unwrap())
    }

    #[test]
    fn oracle_examples() {
        assert!(LanguageId::Twin.oracle("01#01").unwrap());
        assert!(!LanguageId::Nonpal.oracle("010").unwrap());
        assert!(LanguageId::Lik.oracle("aabbc").unwrap());
        assert!(LanguageId::Mirror(2).oracle("0#1#1#0").unwrap());
        assert!(!LanguageId::Mirror(2).oracle("0#1#0#1").unwrap());
        assert!(LanguageId::Middlemark.oracle("01#10").unwrap());
        assert!(!LanguageId::Middlemark.oracle("0##").unwrap());
        assert!(LanguageId::Lmatch.oracle("01#1#01").unwrap());
        assert!(!LanguageId::Lmatch.oracle("01#").unwrap());
        assert!(LanguageId::Ltwothirds.oracle("011101").unwrap());
    }

    #[test]
    fn oracle_rejects_foreign_letters() {
        assert!(matches!(LanguageId::Nonpal.oracle("0#"), Err(ZooError::LetterOutsideAlphabet { letter: '#', .. })));
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(cert(LanguageId::Twin, "01#01"), "01");
        assert_eq!(cert(LanguageId::Nonpal, "001"), "10");
        assert_eq!(cert(LanguageId::Lik, "aabbc"), "Axx");
        assert_eq!(cert(LanguageId::Lik, "abcc"), "Ax");
        assert_eq!(cert(LanguageId::Lik, "abbcc"), "Cxx");
        assert_eq!(cert(LanguageId::Lik, "aacc"), "Bxx");
        assert_eq!(cert(LanguageId::Mirror(2), "0#1#1#0"), "0#1");
        assert!(matches!(
            LanguageId::Twin.canonical_certificate("0#1"),
            Err(ZooError::NotAMember { .. })
        ));
    }

    #[test]
    fn ids_round_trip() {
        for l in LanguageId::all_fixed().into_iter().chain([LanguageId::Mirror(3)]) {
            assert_eq!(l.to_string().parse::<LanguageId>().unwrap(), l);
        }
        assert!("ln:0".parse::<LanguageId>().is_err());
        assert!("pal".parse::<LanguageId>().is_err());
    }
}
