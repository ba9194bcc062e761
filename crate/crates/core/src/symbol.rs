//! Tape symbols shared by automata and verifiers.

use std::fmt;

/// A symbol scanned by an input head: an input letter or one of the two end-markers.
///
/// The derived order puts `LeftEnd` first and `RightEnd` last, which is the order
/// used whenever transition tables are printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    LeftEnd,
    Letter(char),
    RightEnd,
}

impl Symbol {
    /// Machine-file spelling: `^` and `$` for the end-markers.
    pub fn parse(token: &str) -> Option<Symbol> {
        let mut chars = token.chars();
        let c = chars.next()?;
        if chars.next().is_some() {
            return None;
        }
        Some(match c {
            '^' => Symbol::LeftEnd,
            '$' => Symbol::RightEnd,
            c => Symbol::Letter(c),
        })
    }

    pub fn is_end_marker(self) -> bool {
        !matches!(self, Symbol::Letter(_))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::LeftEnd => f.write_str("^"),
            Symbol::RightEnd => f.write_str("$"),
            Symbol::Letter(c) => write!(f, "{c}"),
        }
    }
}

/// Characters that cannot be input letters because the machine-file syntax reserves them.
pub fn is_reserved_letter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '^' | '$' | ',' | '(' | ')' | '*')
}

/// A one-way head either stays put or moves one cell to the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HeadMove {
    Stay,
    Right,
}

impl HeadMove {
    pub fn offset(self) -> usize {
        match self {
            HeadMove::Stay => 0,
            HeadMove::Right => 1,
        }
    }

    pub fn parse(token: &str) -> Option<HeadMove> {
        match token {
            "0" => Some(HeadMove::Stay),
            "+1" | "1" => Some(HeadMove::Right),
            _ => None,
        }
    }
}

impl fmt::Display for HeadMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeadMove::Stay => f.write_str("0"),
            HeadMove::Right => f.write_str("+1"),
        }
    }
}

/// The input tape `▷ w ◁`: index 0 holds the left end-marker, index `n + 1` the right one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tape {
    cells: Vec<Symbol>,
}

impl Tape {
    pub fn new(word: &[char]) -> Tape {
        let mut cells = Vec::with_capacity(word.len() + 2);
        cells.push(Symbol::LeftEnd);
        cells.extend(word.iter().map(|&c| Symbol::Letter(c)));
        cells.push(Symbol::RightEnd);
        Tape { cells }
    }

    /// Length of the word between the end-markers.
    pub fn word_len(&self) -> usize {
        self.cells.len() - 2
    }

    /// Index of the right end-marker.
    pub fn last(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn at(&self, pos: usize) -> Symbol {
        self.cells[pos]
    }
}

/// Every symbol a head may scan, in table order: `^`, the letters, `$`.
pub fn scannable(alphabet: &[char]) -> Vec<Symbol> {
    let mut out = Vec::with_capacity(alphabet.len() + 2);
    out.push(Symbol::LeftEnd);
    out.extend(alphabet.iter().map(|&c| Symbol::Letter(c)));
    out.push(Symbol::RightEnd);
    out
}
