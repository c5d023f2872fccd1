//! Exact symbolic machinery over the digits {0,1,2}.
//!
//! A [`DigitWord`] is either a finite prefix observation or an exact
//! eventually periodic sequence `pre · period^∞`. Every comparison between
//! two eventually periodic words terminates; anything involving a finite
//! prefix may come back `Undecided` together with the depth that was
//! examined, so callers can retry with more symbols.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rational::{fmt_rational, parse_rational, Rational};

/// Largest digit of the alphabet.
pub const TOP_DIGIT: u8 = 2;

/// A word over {0,1,2}: finite when `period` is empty, otherwise the
/// infinite sequence `pre · period · period · …`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DigitWord {
    pre: Vec<u8>,
    period: Vec<u8>,
}

fn check_digits(ds: &[u8]) -> Result<()> {
    match ds.iter().find(|&&d| d > TOP_DIGIT) {
        Some(&d) => Err(Error::InvalidDigit(d)),
        None => Ok(()),
    }
}

impl DigitWord {
    pub fn finite(digits: Vec<u8>) -> Result<Self> {
        check_digits(&digits)?;
        Ok(Self {
            pre: digits,
            period: Vec::new(),
        })
    }

    pub fn periodic(block: Vec<u8>) -> Result<Self> {
        Self::eventually_periodic(Vec::new(), block)
    }

    pub fn eventually_periodic(pre: Vec<u8>, period: Vec<u8>) -> Result<Self> {
        if period.is_empty() {
            return domain("eventually periodic word needs a nonempty period");
        }
        check_digits(&pre)?;
        check_digits(&period)?;
        let mut w = Self { pre, period };
        w.canonicalize();
        Ok(w)
    }

    /// Minimal period, then the shortest preperiod.
    fn canonicalize(&mut self) {
        if self.period.is_empty() {
            return;
        }
        let p = smallest_period(&self.period);
        if self.period.len().is_multiple_of(p) {
            self.period.truncate(p);
        }
        while let (Some(&a), Some(&b)) = (self.pre.last(), self.period.last()) {
            if a != b {
                break;
            }
            self.pre.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.pre
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.pre.is_empty() && !self.period.is_empty()
    }

    /// Number of observable symbols; `None` for an infinite word.
    pub fn observable_len(&self) -> Option<usize> {
        if self.is_finite() {
            Some(self.pre.len())
        } else {
            None
        }
    }

    /// `pre.len() + period.len()`: shifts at or beyond this index repeat.
    pub fn cycle_bound(&self) -> usize {
        self.pre.len() + self.period.len()
    }

    pub fn digit(&self, i: usize) -> Option<u8> {
        if i < self.pre.len() {
            Some(self.pre[i])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(i - self.pre.len()) % self.period.len()])
        }
    }

    /// The first `n` symbols, or fewer if the word is a shorter finite prefix.
    pub fn prefix(&self, n: usize) -> Vec<u8> {
        (0..n).map_while(|i| self.digit(i)).collect()
    }

    /// The shift σ^r.
    pub fn shift(&self, r: usize) -> DigitWord {
        if r <= self.pre.len() {
            let mut w = Self {
                pre: self.pre[r..].to_vec(),
                period: self.period.clone(),
            };
            w.canonicalize();
            return w;
        }
        if self.period.is_empty() {
            return Self {
                pre: Vec::new(),
                period: Vec::new(),
            };
        }
        let k = (r - self.pre.len()) % self.period.len();
        let mut period = self.period.clone();
        period.rotate_left(k);
        Self {
            pre: Vec::new(),
            period,
        }
    }

    /// Truncation to a finite word of `n` symbols.
    pub fn truncate(&self, n: usize) -> DigitWord {
        Self {
            pre: self.prefix(n),
            period: Vec::new(),
        }
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.pre {
            write!(f, "{d}")?;
        }
        if !self.period.is_empty() {
            f.write_str("(")?;
            for d in &self.period {
                write!(f, "{d}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DigitWord({self})")
    }
}

fn parse_digits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0'..='2' => Ok(c as u8 - b'0'),
            _ => Err(Error::Parse(format!("bad digit {c:?} in word"))),
        })
        .collect()
}

impl FromStr for DigitWord {
    type Err = Error;

    /// `"21(1)"` is 2111…, `"(2)"` is 222…, `"2102"` is a finite word.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.find('(') {
            None => DigitWord::finite(parse_digits(s)?),
            Some(open) => {
                let rest = &s[open + 1..];
                let body = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("unclosed period in {s:?}")))?;
                DigitWord::eventually_periodic(parse_digits(&s[..open])?, parse_digits(body)?)
            }
        }
    }
}

impl Serialize for DigitWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DigitWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Length of the shortest period of a nonempty block (KMP border).
pub fn smallest_period(block: &[u8]) -> usize {
    let n = block.len();
    if n == 0 {
        return 0;
    }
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && block[i] != block[k] {
            k = fail[k - 1];
        }
        if block[i] == block[k] {
            k += 1;
        }
        fail[i] = k;
    }
    n - fail[n - 1]
}

/// Length of the longest proper border of `block`.
pub fn longest_border(block: &[u8]) -> usize {
    block.len() - smallest_period(block)
}

/// Lexicographically largest rotation of a block.
pub fn max_rotation(block: &[u8]) -> Vec<u8> {
    let n = block.len();
    (0..n)
        .map(|k| {
            let mut r = block.to_vec();
            r.rotate_left(k);
            r
        })
        .max()
        .unwrap_or_default()
}

/// All Lyndon words over {0,1,2} of length 1..=max_len, in lexicographic
/// order (Duval's generation).
pub fn lyndon_words(max_len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if max_len == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(w.clone());
        let n = w.len();
        while w.len() < max_len {
            let c = w[w.len() - n];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last == TOP_DIGIT {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
    }
    out
}

/// Outcome of a lexicographic comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LexOrder {
    Less,
    Equal,
    Greater,
    /// The words agree on the first `depth` symbols and one of them ends there.
    Undecided(usize),
}

impl LexOrder {
    fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Less => LexOrder::Less,
            Ordering::Equal => LexOrder::Equal,
            Ordering::Greater => LexOrder::Greater,
        }
    }

    pub fn is_le(self) -> bool {
        matches!(self, LexOrder::Less | LexOrder::Equal)
    }
}

/// Exact lexicographic order; `Undecided` only when a finite prefix runs out.
pub fn lex_cmp(a: &DigitWord, b: &DigitWord) -> LexOrder {
    let limit = match (a.observable_len(), b.observable_len()) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => {
            let lcm = a.period.len().lcm(&b.period.len());
            a.pre.len().max(b.pre.len()) + lcm
        }
    };
    for i in 0..limit {
        let (x, y) = (a.digit(i).unwrap_or(0), b.digit(i).unwrap_or(0));
        if x != y {
            return LexOrder::from_ordering(x.cmp(&y));
        }
    }
    if a.is_finite() || b.is_finite() {
        LexOrder::Undecided(limit)
    } else {
        LexOrder::Equal
    }
}

/// Verdict of [`is_maximal`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Maximality {
    Yes,
    /// σ^r of the word strictly exceeds it (r = 0 flags a leading digit ≠ 2).
    No(usize),
    Undecided(usize),
}

/// A word is maximal when it starts with 2 and dominates all of its shifts.
pub fn is_maximal(w: &DigitWord) -> Maximality {
    match w.digit(0) {
        Some(TOP_DIGIT) => {}
        Some(_) => return Maximality::No(0),
        None => return Maximality::Undecided(0),
    }
    if let Some(len) = w.observable_len() {
        let mut checker = PrefixChecker::default();
        for i in 0..len {
            if let Err(r) = checker.push(w.pre[i]) {
                return Maximality::No(r);
            }
        }
        return Maximality::Undecided(len);
    }
    for r in 1..w.cycle_bound() {
        if lex_cmp(&w.shift(r), w) == LexOrder::Greater {
            return Maximality::No(r);
        }
    }
    Maximality::Yes
}

/// Verdict of [`beta_member`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    In,
    /// σ^r(s) exceeds the reference word.
    Out(usize),
    Undecided(usize),
}

/// Tests whether every shift of `s` is ≤ `w`.
pub fn beta_member(s: &DigitWord, w: &DigitWord) -> Result<Membership> {
    if let Maximality::No(r) = is_maximal(w) {
        return Err(Error::NotMaximal(r));
    }
    let shifts = match s.observable_len() {
        Some(n) => n,
        None => s.cycle_bound(),
    };
    let mut undecided: Option<usize> = None;
    for r in 0..shifts {
        match lex_cmp(&s.shift(r), w) {
            LexOrder::Greater => return Ok(Membership::Out(r)),
            LexOrder::Undecided(d) => {
                undecided = Some(undecided.map_or(d, |u: usize| u.min(d)));
            }
            _ => {}
        }
    }
    if s.is_finite() {
        let depth = s.observable_len().unwrap_or(0);
        return Ok(Membership::Undecided(
            undecided.map_or(depth, |u| u.min(depth)),
        ));
    }
    Ok(match undecided {
        Some(d) => Membership::Undecided(d),
        None => Membership::In,
    })
}

/// Digit counts along an orbit segment: κ summed over r steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CocycleSum {
    pub counts: [u64; 3],
    pub len: u64,
}

impl CocycleSum {
    pub fn of_digits(ds: &[u8]) -> Self {
        let mut counts = [0u64; 3];
        for &d in ds {
            counts[d as usize] += 1;
        }
        Self {
            counts,
            len: ds.len() as u64,
        }
    }

    pub fn add(&self, other: &CocycleSum) -> CocycleSum {
        let mut counts = self.counts;
        for (c, o) in counts.iter_mut().zip(other.counts) {
            *c += o;
        }
        CocycleSum {
            counts,
            len: self.len + other.len,
        }
    }
}

/// Counts of each digit among the first `r` symbols of `s`.
pub fn kappa_cocycle(s: &DigitWord, r: usize) -> Result<CocycleSum> {
    if let Some(n) = s.observable_len() {
        if r > n {
            return Err(Error::TooShort {
                needed: r,
                available: n,
            });
        }
    }
    Ok(CocycleSum::of_digits(&s.prefix(r)))
}

/// A point of the standard 2-simplex with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreqVector([Rational; 3]);

impl FreqVector {
    pub fn new(a0: Rational, a1: Rational, a2: Rational) -> Result<Self> {
        let zero = Rational::zero();
        if a0 < zero || a1 < zero || a2 < zero {
            return domain("frequency vector has a negative coordinate");
        }
        if &a0 + &a1 + &a2 != Rational::one() {
            return domain("frequency vector coordinates must sum to 1");
        }
        Ok(Self([a0, a1, a2]))
    }

    pub fn from_counts(counts: [u64; 3]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return domain("empty digit count");
        }
        let r = |c: u64| Rational::new(BigInt::from(c), BigInt::from(total));
        Self::new(r(counts[0]), r(counts[1]), r(counts[2]))
    }

    /// Rebuilds a vector from its `(α₀, α₂)` chart coordinates.
    pub fn from_chart(a0: Rational, a2: Rational) -> Result<Self> {
        let a1 = Rational::one() - &a0 - &a2;
        Self::new(a0, a1, a2)
    }

    pub fn coords(&self) -> &[Rational; 3] {
        &self.0
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.0[i]
    }

    /// Chart coordinates `(α₀, α₂)`.
    pub fn chart(&self) -> (Rational, Rational) {
        (self.0[0].clone(), self.0[2].clone())
    }

    /// Least common denominator of the coordinates.
    pub fn denominator(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [0, 1, 2].map(|i| crate::rational::to_f64(&self.0[i]))
    }
}

impl fmt::Display for FreqVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{}",
            fmt_rational(&self.0[0]),
            fmt_rational(&self.0[1]),
            fmt_rational(&self.0[2])
        )
    }
}

impl fmt::Debug for FreqVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreqVector({self})")
    }
}

impl FromStr for FreqVector {
    type Err = Error;

    /// `"1/2,0,1/2"`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s
            .trim()
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected three coordinates in {s:?}")));
        }
        FreqVector::new(
            parse_rational(parts[0])?,
            parse_rational(parts[1])?,
            parse_rational(parts[2])?,
        )
    }
}

impl Serialize for FreqVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FreqVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Digit frequencies of a purely periodic word.
pub fn freq(s: &DigitWord) -> Result<FreqVector> {
    if !s.is_purely_periodic() {
        return domain(format!("frequency needs a purely periodic word, got {s}"));
    }
    FreqVector::from_counts(CocycleSum::of_digits(s.period()).counts)
}

/// Incremental check that a finite word is a prefix of some maximal word:
/// every suffix must be ≤ the prefix of the same length.
#[derive(Clone, Debug, Default)]
pub(crate) struct PrefixChecker {
    digits: Vec<u8>,
    /// Shifts r whose suffix currently equals the prefix of matching length.
    tight: Vec<usize>,
}

impl PrefixChecker {
    /// The shift that would be violated by appending `c`, if any.
    pub(crate) fn violation(&self, c: u8) -> Option<usize> {
        if self.digits.is_empty() {
            return (c != TOP_DIGIT).then_some(0);
        }
        let len = self.digits.len();
        self.tight
            .iter()
            .copied()
            .find(|&r| c > self.digits[len - r])
    }

    /// Appends `c`, or reports the violated shift and leaves the state unchanged.
    pub(crate) fn push(&mut self, c: u8) -> std::result::Result<(), usize> {
        if let Some(r) = self.violation(c) {
            return Err(r);
        }
        let len = self.digits.len();
        if len > 0 {
            let digits = &self.digits;
            self.tight.retain(|&r| c == digits[len - r]);
            if c == digits[0] {
                self.tight.push(len);
            }
        }
        self.digits.push(c);
        Ok(())
    }
}

/// The largest maximal word that starts with the admissible prefix `q`:
/// the periodic continuation along the shortest period of `q`.
fn largest_extension(q: &[u8]) -> Result<DigitWord> {
    let p = smallest_period(q);
    let w = DigitWord::periodic(q[..p].to_vec())?;
    if is_maximal(&w) != Maximality::Yes {
        return Err(Error::Internal(format!(
            "periodic continuation {w} of {q:?} is not maximal"
        )));
    }
    Ok(w)
}

/// The largest maximal word that is ≤ `theta`.
///
/// Exact for eventually periodic `theta`. For a finite prefix the answer is
/// exact when the prefix already violates maximality; otherwise the prefix
/// itself is returned as a certified prefix of the answer.
pub fn max_maximal_below(theta: &DigitWord) -> Result<DigitWord> {
    if theta.digit(0) != Some(TOP_DIGIT) {
        return domain(format!("{theta} lies below every maximal word"));
    }
    if !theta.is_finite() && is_maximal(theta) == Maximality::Yes {
        return Ok(theta.clone());
    }
    let limit = theta
        .observable_len()
        .unwrap_or(2 * theta.cycle_bound() + 2);

    // Walk the admissible prefixes of theta, remembering each checker state.
    let mut states = vec![PrefixChecker::default()];
    let mut violated_at = None;
    for i in 0..limit {
        let c = theta.digit(i).expect("within observable length");
        let mut next = states[i].clone();
        if next.push(c).is_err() {
            violated_at = Some(i);
            break;
        }
        states.push(next);
    }
    let Some(first_bad) = violated_at else {
        if theta.is_finite() {
            return Ok(theta.clone());
        }
        return Err(Error::Internal(format!(
            "no maximality violation found in {theta}"
        )));
    };

    for j in (1..=first_bad).rev() {
        let target = theta.digit(j).expect("observed");
        for c in (0..target).rev() {
            if states[j].violation(c).is_none() {
                let mut q = theta.prefix(j);
                q.push(c);
                return largest_extension(&q);
            }
        }
    }
    domain(format!("no maximal word lies below {theta}"))
}
