use std::collections::VecDeque;

use crate::symbol::{HeadMove, Symbol};
use crate::tabulate::{tabulate_verifier, Target, VMove, VerifierShape};
use crate::verifier::{CertSym, InputMode, VerifierSpec};

use super::{LanguageId, ZooError};

use HeadMove::{Right as R, Stay as S};
use Symbol::{LeftEnd, Letter, RightEnd};

/// Hand-built real-time verification protocols, by identifier (`ln-rt:N` for the
/// mirror family).
pub fn builtin_verifier(id: &str) -> Result<VerifierSpec, ZooError> {
    let spec = match id {
        "twin-rt" => twin(),
        "nonpal-rt" => nonpal(),
        "lik-rt" => lik(),
        _ => {
            let n = id.strip_prefix("ln-rt:").ok_or_else(|| ZooError::UnknownBuiltin(id.to_string()))?;
            match n.parse::<LanguageId>().or_else(|_| format!("ln:{n}").parse()) {
                Ok(LanguageId::Mirror(n)) => mirror(n),
                _ => return Err(ZooError::BadParameter(id.to_string())),
            }
        }
    };
    Ok(spec.expect("built-in verifiers are well formed"))
}

fn shape(lang: LanguageId, random_bits: u32) -> VerifierShape {
    VerifierShape {
        mode: InputMode::RealTime,
        random_bits,
        input_alphabet: lang.alphabet().to_vec(),
        cert_alphabet: lang.cert_alphabet().expect("language has a verifier"),
    }
}

fn go<T>(target: T, cert: HeadMove) -> Option<VMove<T>> {
    Some(VMove::new(Target::State(target), R, cert))
}

fn accept<T>() -> Option<VMove<T>> {
    Some(VMove::new(Target::Accept, R, S))
}

/// Reads a certificate cell of a verifier whose certificate tokens are single
/// characters.
fn letter(alphabet: &[String], c: CertSym) -> Option<char> {
    match c {
        CertSym::Sym(i) => alphabet[i].chars().next(),
        CertSym::End => None,
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Twin {
    Start,
    /// Comparing the left half with the certificate.
    Left,
    /// Left half matched; skipping the right half.
    LeftDone,
    /// Skipping the left half.
    Right,
    /// Comparing the right half with the certificate.
    RightCmp,
}

/// A coin picks the half of `w#w` that is compared with the certificate.
fn twin() -> Result<VerifierSpec, crate::tabulate::TabulateError> {
    let sh = shape(LanguageId::Twin, 1);
    let alpha = sh.cert_alphabet.clone();
    tabulate_verifier(
        &sh,
        Twin::Start,
        |q| *q == Twin::Start,
        move |q, sym, cell, bit| {
            let c = letter(&alpha, cell);
            match (q, sym) {
                (Twin::Start, LeftEnd) => go(if bit == Some(true) { Twin::Right } else { Twin::Left }, S),
                (Twin::Left, Letter('#')) if c.is_none() => go(Twin::LeftDone, S),
                (Twin::Left, Letter(x)) if Some(x) == c => go(Twin::Left, R),
                (Twin::LeftDone, Letter('0' | '1')) => go(Twin::LeftDone, S),
                (Twin::LeftDone, RightEnd) => accept(),
                (Twin::Right, Letter('0' | '1')) => go(Twin::Right, S),
                (Twin::Right, Letter('#')) => go(Twin::RightCmp, S),
                (Twin::RightCmp, Letter(x)) if x != '#' && Some(x) == c => go(Twin::RightCmp, R),
                (Twin::RightCmp, RightEnd) if c.is_none() => accept(),
                _ => None,
            }
        },
        |_, q| {
            match q {
                Twin::Start => "start",
                Twin::Left => "left",
                Twin::LeftDone => "left-done",
                Twin::Right => "right",
                Twin::RightCmp => "right-cmp",
            }
            .into()
        },
    )
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Nonpal {
    Start,
    /// Length check, certificate at half speed before the marker; `odd` is the
    /// parity of input steps taken since the last certificate move.
    Halve { odd: bool },
    /// Length check, certificate at full speed after the marker.
    Tail,
    /// Symbol check, looking for the marker.
    Find,
    /// Symbol check, holding the symbol found under the marker.
    Hold(char),
}

/// For `x σ y σ' z` with `|x| = |z|` and `σ ≠ σ'` the certificate is
/// `0^|x| 1 0^|y|`. One branch checks that the marker position and the
/// certificate length are consistent with a mirrored pair; the other compares
/// the symbols at the two claimed positions.
fn nonpal() -> Result<VerifierSpec, crate::tabulate::TabulateError> {
    let sh = shape(LanguageId::Nonpal, 1);
    let alpha = sh.cert_alphabet.clone();
    tabulate_verifier(
        &sh,
        Nonpal::Start,
        |q| *q == Nonpal::Start,
        move |q, sym, cell, bit| {
            let c = letter(&alpha, cell);
            match (q, sym) {
                (Nonpal::Start, LeftEnd) => {
                    go(if bit == Some(true) { Nonpal::Find } else { Nonpal::Halve { odd: false } }, S)
                }
                (Nonpal::Halve { odd: false }, Letter(_)) if c.is_some() => go(Nonpal::Halve { odd: true }, S),
                (Nonpal::Halve { odd: true }, Letter(_)) => match c? {
                    '0' => go(Nonpal::Halve { odd: false }, R),
                    _ => go(Nonpal::Tail, R),
                },
                (Nonpal::Tail, Letter(_)) if c == Some('0') => go(Nonpal::Tail, R),
                (Nonpal::Tail, RightEnd) if c.is_none() => accept(),
                (Nonpal::Find, Letter(x)) => match c? {
                    '0' => go(Nonpal::Find, R),
                    _ => go(Nonpal::Hold(x), R),
                },
                (Nonpal::Hold(x), Letter(y)) => match c {
                    Some('0') => go(Nonpal::Hold(*x), R),
                    None if y != *x => accept(),
                    _ => None,
                },
                _ => None,
            }
        },
        |_, q| match q {
            Nonpal::Start => "start".into(),
            Nonpal::Halve { odd } => format!("halve{}", u8::from(*odd)),
            Nonpal::Tail => "tail".into(),
            Nonpal::Find => "find".into(),
            Nonpal::Hold(x) => format!("hold{x}"),
        },
    )
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Lik {
    Start,
    /// Matching block `target` against the x's; `last` is the last input letter
    /// read, used to check the block order.
    Match { target: char, last: Option<char> },
}

/// The certificate `σ x^l` names two blocks of `a^i b^j c^k` claimed to have
/// length `l`; the coin picks which of the two is measured.
fn lik() -> Result<VerifierSpec, crate::tabulate::TabulateError> {
    let sh = shape(LanguageId::Lik, 1);
    let alpha = sh.cert_alphabet.clone();
    tabulate_verifier(
        &sh,
        Lik::Start,
        |q| *q == Lik::Start,
        move |q, sym, cell, bit| {
            let c = letter(&alpha, cell);
            match (q, sym) {
                (Lik::Start, LeftEnd) => {
                    let pair = match c? {
                        'A' => ['a', 'b'],
                        'B' => ['a', 'c'],
                        'C' => ['b', 'c'],
                        _ => return None,
                    };
                    let target = pair[usize::from(bit == Some(true))];
                    go(Lik::Match { target, last: None }, R)
                }
                (Lik::Match { target, last }, Letter(x)) => {
                    if last.is_some_and(|l| x < l) {
                        return None;
                    }
                    let next = Lik::Match { target: *target, last: Some(x) };
                    if x == *target {
                        (c == Some('x')).then_some(())?;
                        go(next, R)
                    } else if x > *target {
                        c.is_none().then_some(())?;
                        go(next, S)
                    } else {
                        go(next, S)
                    }
                }
                (Lik::Match { .. }, RightEnd) if c.is_none() => accept(),
                _ => None,
            }
        },
        |_, q| match q {
            Lik::Start => "start".into(),
            Lik::Match { target, last } => format!("{target}{}", last.map_or('-', |l| l)),
        },
    )
}

/// Smallest `r` with `2^r ≥ m`.
pub(crate) fn ceil_log2(m: usize) -> u32 {
    m.next_power_of_two().trailing_zeros()
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Pending {
    Letter(char),
    /// End of the input region; the certificate must show the region terminator.
    Close,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct Path {
    path: usize,
    marks: usize,
    /// Certificate separators still to skip before this path's segment.
    skip: usize,
    /// Input-region symbols read but not yet compared with the certificate.
    queue: VecDeque<Pending>,
    closed: bool,
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Mirror {
    /// Still drawing coins; `pattern` holds the bits so far and `seen` the input
    /// letters read meanwhile.
    Coin { drawn: u32, pattern: usize, seen: Vec<char> },
    Check(Path),
}

struct MirrorRules {
    n: usize,
    bits: u32,
    cap: usize,
}

impl MirrorRules {
    /// Input segment (1-based) that path `p` compares.
    fn segment(&self, p: usize) -> usize {
        if p == 0 {
            0
        } else {
            2 * self.n + 1 - p
        }
    }

    fn terminator(&self, p: usize) -> Option<char> {
        if p == 0 || p == self.n {
            None
        } else {
            Some('#')
        }
    }

    fn push(&self, st: &mut Path, item: Pending) -> Option<()> {
        (st.queue.len() < self.cap).then(|| st.queue.push_back(item))
    }

    /// Feeds one input letter to a path; `None` rejects.
    fn read(&self, st: &mut Path, x: char) -> Option<()> {
        let before = st.marks;
        if x == '#' {
            st.marks += 1;
            if st.marks > 2 * self.n - 1 {
                return None;
            }
        }
        if st.path == 0 {
            if before + 1 == self.n && x == '#' {
                self.push(st, Pending::Close)?;
            } else if before < self.n {
                self.push(st, Pending::Letter(x))?;
            }
        } else if before + 1 == self.segment(st.path) {
            self.push(st, if x == '#' { Pending::Close } else { Pending::Letter(x) })?;
        }
        Some(())
    }

    /// Compares the oldest pending input symbol with the certificate cell.
    fn consume(&self, st: &mut Path, c: Option<char>) -> Option<HeadMove> {
        if st.skip > 0 {
            if c? == '#' {
                st.skip -= 1;
            }
            return Some(R);
        }
        match st.queue.front() {
            None => Some(S),
            Some(Pending::Letter(x)) => {
                (c == Some(*x)).then_some(())?;
                st.queue.pop_front();
                Some(R)
            }
            Some(Pending::Close) => {
                (c == self.terminator(st.path)).then_some(())?;
                st.queue.pop_front();
                st.closed = true;
                Some(S)
            }
        }
    }

    fn step(&self, st: &Path, x: Symbol, c: Option<char>) -> Option<VMove<Mirror>> {
        let mut st = st.clone();
        match x {
            Letter(x) => {
                self.read(&mut st, x)?;
                let dc = self.consume(&mut st, c)?;
                go(Mirror::Check(st), dc)
            }
            RightEnd => {
                (st.marks == 2 * self.n - 1).then_some(())?;
                if st.path == 1 {
                    self.push(&mut st, Pending::Close)?;
                }
                self.consume(&mut st, c)?;
                (st.closed && st.queue.is_empty()).then(accept)?
            }
            LeftEnd => None,
        }
    }

    fn delta(&self, q: &Mirror, x: Symbol, c: Option<char>, bit: Option<bool>) -> Option<VMove<Mirror>> {
        match q {
            Mirror::Check(st) => self.step(st, x, c),
            Mirror::Coin { drawn, pattern, seen } => {
                let drawn = drawn + 1;
                let pattern = 2 * pattern + usize::from(bit == Some(true));
                let mut seen = seen.clone();
                match x {
                    RightEnd => return None,
                    Letter(x) => seen.push(x),
                    LeftEnd => {}
                }
                if drawn < self.bits {
                    return go(Mirror::Coin { drawn, pattern, seen }, S);
                }
                let path = pattern % (self.n + 1);
                let mut st =
                    Path { path, marks: 0, skip: path.saturating_sub(1), queue: VecDeque::new(), closed: false };
                for x in seen {
                    self.read(&mut st, x)?;
                }
                let dc = self.consume(&mut st, c)?;
                go(Mirror::Check(st), dc)
            }
        }
    }
}

/// For `y_1#...#y_2n` the certificate is `y_1#...#y_n`. Path 0 checks that the
/// certificate spells the first half; path `i ≥ 1` checks certificate segment
/// `i` against input segment `2n+1-i`. The paths are chosen by `⌈log2(n+1)⌉`
/// coins read in the first steps, so each path keeps a short queue of input
/// symbols that arrived before it could compare them.
fn mirror(n: usize) -> Result<VerifierSpec, crate::tabulate::TabulateError> {
    let bits = ceil_log2(n + 1);
    let sh = shape(LanguageId::Mirror(n), bits);
    let alpha = sh.cert_alphabet.clone();
    let rules = MirrorRules { n, bits, cap: bits as usize + 1 };
    tabulate_verifier(
        &sh,
        Mirror::Coin { drawn: 0, pattern: 0, seen: Vec::new() },
        |q| matches!(q, Mirror::Coin { .. }),
        move |q, x, cell, bit| rules.delta(q, x, letter(&alpha, cell), bit),
        |_, q| match q {
            Mirror::Coin { drawn, pattern, seen } => {
                format!("coin{drawn}.{pattern}.{}", seen.iter().collect::<String>())
            }
            Mirror::Check(p) => {
                let queue: String = p
                    .queue
                    .iter()
                    .map(|i| match i {
                        Pending::Letter(c) => *c,
                        Pending::Close => '|',
                    })
                    .collect();
                format!("p{}.m{}.s{}.{}{}", p.path, p.marks, p.skip, queue, if p.closed { ".done" } else { "" })
            }
        },
    )
}
