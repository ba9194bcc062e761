//! Exact probabilities of the form `m / 2^r`.

use std::cmp::Ordering;
use std::fmt;

/// An acceptance probability produced by `r` fair coin flips.
///
/// The exponent is kept as given (not reduced), so a verifier with budget `r`
/// always reports a denominator of exactly `2^r`. Equality and ordering compare
/// values, not representations.
#[derive(Debug, Clone, Copy)]
pub struct DyadicProbability {
    numerator: u64,
    exponent: u32,
}

pub const MAX_EXPONENT: u32 = 62;

impl DyadicProbability {
    /// Returns `None` when `numerator > 2^exponent` or the exponent is too large to represent.
    pub fn new(numerator: u64, exponent: u32) -> Option<Self> {
        if exponent > MAX_EXPONENT || numerator > (1u64 << exponent) {
            return None;
        }
        Some(DyadicProbability { numerator, exponent })
    }

    pub fn zero(exponent: u32) -> Self {
        DyadicProbability { numerator: 0, exponent }
    }

    pub fn one(exponent: u32) -> Self {
        DyadicProbability { numerator: 1u64 << exponent, exponent }
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn denominator(&self) -> u64 {
        1u64 << self.exponent
    }

    pub fn is_one(&self) -> bool {
        self.numerator == self.denominator()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator == 0
    }

    /// `1 - p`, with the same exponent.
    pub fn complement(&self) -> Self {
        DyadicProbability { numerator: self.denominator() - self.numerator, exponent: self.exponent }
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator() as f64
    }

    /// Parses `m/2^r`, `m/d` with `d` a power of two, `0` or `1`.
    pub fn parse(text: &str) -> Option<Self> {
        let text = text.trim();
        match text {
            "0" => return Some(Self::zero(0)),
            "1" => return Some(Self::one(0)),
            _ => {}
        }
        let (num, den) = text.split_once('/')?;
        let num: u64 = num.trim().parse().ok()?;
        let den = den.trim();
        let exponent = if let Some(exp) = den.strip_prefix("2^") {
            exp.parse().ok()?
        } else {
            let d: u64 = den.parse().ok()?;
            if !d.is_power_of_two() {
                return None;
            }
            d.trailing_zeros()
        };
        Self::new(num, exponent)
    }

    fn cross(&self, other: &Self) -> (u128, u128) {
        let a = (self.numerator as u128) << other.exponent;
        let b = (other.numerator as u128) << self.exponent;
        (a, b)
    }
}

impl PartialEq for DyadicProbability {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.cross(other);
        a == b
    }
}

impl Eq for DyadicProbability {}

impl PartialOrd for DyadicProbability {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DyadicProbability {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = self.cross(other);
        a.cmp(&b)
    }
}

impl fmt::Display for DyadicProbability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.numerator, self.exponent)
    }
}
