//! Finite and eventually periodic digit sequences, the alternating
//! lexicographic order, shifts and two-block decompositions.
//!
//! Sequences are written in a small text format: digits separated by spaces,
//! with the repeating part in parentheses. `"1 0 0 (1)"` is `1, 0, 0` followed
//! by `1` forever and `"(2 1 0)"` is purely periodic.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A single digit. The alphabet is not capped: the first digit of an
/// expansion is the integer part of the base.
pub type Digit = u64;

/// A finite word of digits.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DigitWord(Vec<Digit>);

impl DigitWord {
    pub fn new(digits: Vec<Digit>) -> Self {
        DigitWord(digits)
    }

    pub fn empty() -> Self {
        DigitWord(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Digit] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Digit> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Digit> {
        self.0.iter()
    }

    /// 1-based access, `None` past the end.
    pub fn digit(&self, n: usize) -> Option<Digit> {
        n.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }

    pub fn prefix(&self, n: usize) -> DigitWord {
        DigitWord(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn push(&mut self, d: Digit) {
        self.0.push(d);
    }

    pub fn concat(&self, other: &DigitWord) -> DigitWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        DigitWord(v)
    }
}

impl From<Vec<Digit>> for DigitWord {
    fn from(v: Vec<Digit>) -> Self {
        DigitWord(v)
    }
}

impl From<&[Digit]> for DigitWord {
    fn from(v: &[Digit]) -> Self {
        DigitWord(v.to_vec())
    }
}

impl std::ops::Deref for DigitWord {
    type Target = [Digit];
    fn deref(&self) -> &[Digit] {
        &self.0
    }
}

impl fmt::Display for DigitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_digits(f, &self.0)
    }
}

fn write_digits(f: &mut fmt::Formatter<'_>, digits: &[Digit]) -> fmt::Result {
    for (i, d) in digits.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{d}")?;
    }
    Ok(())
}

impl FromStr for DigitWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parsed = parse_sequence_text(s)?;
        match parsed.period {
            None => Ok(DigitWord(parsed.prefix)),
            Some(_) => Err(Error::Parse(format!(
                "expected a finite word without a period: {s:?}"
            ))),
        }
    }
}

/// An infinite digit sequence `pre per per per ...` in canonical form: the
/// period is primitive and the preperiod is as short as possible.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EvPeriodicSeq {
    pre: Vec<Digit>,
    per: Vec<Digit>,
}

impl EvPeriodicSeq {
    /// Builds the canonical representative of `pre (per)`.
    pub fn new(pre: impl Into<DigitWord>, per: impl Into<DigitWord>) -> Result<Self> {
        canonicalize(&pre.into(), &per.into())
    }

    /// The purely periodic sequence `(per)`.
    pub fn periodic(per: impl Into<DigitWord>) -> Result<Self> {
        canonicalize(&DigitWord::empty(), &per.into())
    }

    pub fn preperiod(&self) -> &[Digit] {
        &self.pre
    }

    pub fn period(&self) -> &[Digit] {
        &self.per
    }

    pub fn preperiod_len(&self) -> usize {
        self.pre.len()
    }

    pub fn period_len(&self) -> usize {
        self.per.len()
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.pre.is_empty()
    }

    /// The `n`-th digit, 1-based. Panics on `n == 0`.
    pub fn digit(&self, n: usize) -> Digit {
        assert!(n >= 1, "digits are indexed from 1");
        let i = n - 1;
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[(i - self.pre.len()) % self.per.len()]
        }
    }

    pub fn digits(&self) -> impl Iterator<Item = Digit> + '_ {
        self.pre.iter().chain(self.per.iter().cycle()).copied()
    }

    pub fn prefix(&self, n: usize) -> DigitWord {
        DigitWord(self.digits().take(n).collect())
    }

    /// The tail `s_{k+1} s_{k+2} ...`.
    pub fn shift(&self, k: usize) -> EvPeriodicSeq {
        let p = self.pre.len();
        if k <= p {
            // `pre[k..]` still ends differently from the period, so the form
            // stays canonical.
            return EvPeriodicSeq {
                pre: self.pre[k..].to_vec(),
                per: self.per.clone(),
            };
        }
        let mut per = self.per.clone();
        per.rotate_left((k - p) % self.per.len());
        EvPeriodicSeq {
            pre: Vec::new(),
            per,
        }
    }

    /// Every tail `shift(k)`, `k >= 1`, once, tagged with the least `k`
    /// producing it.
    pub fn distinct_tails(&self) -> Vec<(usize, EvPeriodicSeq)> {
        let mut out: Vec<(usize, EvPeriodicSeq)> = Vec::new();
        for k in 1..=self.pre.len() + self.per.len() {
            let t = self.shift(k);
            if !out.iter().any(|(_, u)| *u == t) {
                out.push((k, t));
            }
        }
        out
    }

    /// The sequence `w s_1 s_2 ...`.
    pub fn prepend(&self, w: &[Digit]) -> EvPeriodicSeq {
        let mut pre = w.to_vec();
        pre.extend_from_slice(&self.pre);
        canonicalize(&DigitWord(pre), &DigitWord(self.per.clone())).expect("period is non-empty")
    }

    /// Length after which two canonical sequences that still agree are equal.
    pub fn agreement_bound(&self, other: &EvPeriodicSeq) -> usize {
        let q = num_integer::lcm(self.per.len(), other.per.len());
        self.pre.len().max(other.pre.len()) + q
    }
}

impl fmt::Display for EvPeriodicSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.pre.is_empty() {
            write_digits(f, &self.pre)?;
            f.write_str(" ")?;
        }
        f.write_str("(")?;
        write_digits(f, &self.per)?;
        f.write_str(")")
    }
}

impl FromStr for EvPeriodicSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parsed = parse_sequence_text(s)?;
        match parsed.period {
            Some(per) => EvPeriodicSeq::new(parsed.prefix, per),
            None => Err(Error::Parse(format!(
                "expected a parenthesised period in {s:?}"
            ))),
        }
    }
}

impl Serialize for EvPeriodicSeq {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Either a finite word or an eventually periodic sequence, as read from text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SequenceInput {
    Finite(DigitWord),
    Periodic(EvPeriodicSeq),
}

impl FromStr for SequenceInput {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parsed = parse_sequence_text(s)?;
        match parsed.period {
            Some(per) => Ok(SequenceInput::Periodic(EvPeriodicSeq::new(
                parsed.prefix,
                per,
            )?)),
            None => Ok(SequenceInput::Finite(DigitWord(parsed.prefix))),
        }
    }
}

impl fmt::Display for SequenceInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceInput::Finite(w) => w.fmt(f),
            SequenceInput::Periodic(s) => s.fmt(f),
        }
    }
}

struct ParsedText {
    prefix: Vec<Digit>,
    period: Option<Vec<Digit>>,
}

fn parse_sequence_text(s: &str) -> Result<ParsedText> {
    let mut prefix = Vec::new();
    let mut period: Option<Vec<Digit>> = None;
    let mut in_period = false;
    let mut closed = false;
    let mut chars = s.char_indices().peekable();

    while let Some(&(i, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        if closed {
            return Err(Error::Parse(format!(
                "unexpected {c:?} after the period at offset {i} in {s:?}"
            )));
        }
        match c {
            '(' => {
                if in_period || period.is_some() {
                    return Err(Error::Parse(format!("nested or repeated '(' in {s:?}")));
                }
                in_period = true;
                period = Some(Vec::new());
                chars.next();
            }
            ')' => {
                if !in_period {
                    return Err(Error::Parse(format!("unmatched ')' in {s:?}")));
                }
                in_period = false;
                closed = true;
                chars.next();
            }
            '0'..='9' => {
                let mut end = i;
                while let Some(&(j, d)) = chars.peek() {
                    if d.is_ascii_digit() {
                        end = j + 1;
                        chars.next();
                    } else {
                        break;
                    }
                }
                let digit: Digit = s[i..end]
                    .parse()
                    .map_err(|_| Error::Parse(format!("digit {:?} out of range", &s[i..end])))?;
                match (&mut period, in_period) {
                    (Some(p), true) => p.push(digit),
                    _ => prefix.push(digit),
                }
            }
            '-' => {
                return Err(Error::Parse(format!("negative digit in {s:?}")));
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected character {other:?} at offset {i} in {s:?}"
                )));
            }
        }
    }
    if in_period {
        return Err(Error::Parse(format!("unterminated period in {s:?}")));
    }
    if let Some(p) = &period {
        if p.is_empty() {
            return Err(Error::Malformed("empty period".into()));
        }
    }
    Ok(ParsedText { prefix, period })
}

/// Minimal preperiod, primitive period.
pub fn canonicalize(pre: &DigitWord, per: &DigitWord) -> Result<EvPeriodicSeq> {
    if per.is_empty() {
        return Err(Error::Malformed("empty period".into()));
    }
    let mut per = primitive_root(per).to_vec();
    let mut pre = pre.0.clone();
    while let Some(&last) = pre.last() {
        if last != *per.last().expect("non-empty") {
            break;
        }
        pre.pop();
        per.rotate_right(1);
    }
    Ok(EvPeriodicSeq { pre, per })
}

fn primitive_root(w: &[Digit]) -> &[Digit] {
    let q = w.len();
    (1..=q)
        .filter(|d| q % d == 0)
        .find(|&d| w.chunks(d).all(|c| c == &w[..d]))
        .map(|d| &w[..d])
        .expect("d = q always works")
}

/// Order of two sequences that first differ at (1-based) position `k`.
#[inline]
pub fn alt_order_at(k: usize, x: Digit, y: Digit) -> Ordering {
    if k % 2 == 1 {
        x.cmp(&y)
    } else {
        y.cmp(&x)
    }
}

/// Alternating order decided at the first difference of two digit streams,
/// or `None` if the streams agree for as long as both run.
pub fn alt_cmp_streams<I, J>(x: I, y: J) -> Option<Ordering>
where
    I: IntoIterator<Item = Digit>,
    J: IntoIterator<Item = Digit>,
{
    x.into_iter()
        .zip(y)
        .enumerate()
        .find(|(_, (a, b))| a != b)
        .map(|(i, (a, b))| alt_order_at(i + 1, a, b))
}

/// Exact alternating lexicographic comparison of two infinite sequences.
pub fn alt_cmp(x: &EvPeriodicSeq, y: &EvPeriodicSeq) -> Ordering {
    let n = x.agreement_bound(y);
    alt_cmp_streams(x.digits().take(n), y.digits().take(n)).unwrap_or(Ordering::Equal)
}

/// Comparison of finite words on their common length; `None` when one is a
/// prefix of the other.
pub fn alt_cmp_prefix(x: &[Digit], y: &[Digit]) -> Option<Ordering> {
    alt_cmp_streams(x.iter().copied(), y.iter().copied())
}

/// Comparison of two finite words of equal length; agreement is `Equal`.
pub fn alt_cmp_equal_length(x: &[Digit], y: &[Digit]) -> Ordering {
    debug_assert_eq!(x.len(), y.len());
    alt_cmp_prefix(x, y).unwrap_or(Ordering::Equal)
}

/// Outcome of parsing a sequence into two kinds of blocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BlockParse {
    /// The sequence is an infinite concatenation of the two blocks.
    InOmegaLanguage,
    NotIn,
    /// The sequence is the first block repeated forever.
    OnlyPureA,
}

/// Decides membership of `s` in `{a, b}^ω` by a greedy parse.
///
/// The blocks have to differ at a position covered by both, so that at most
/// one of them can match at any point; otherwise the parse would branch.
pub fn block_parse(s: &EvPeriodicSeq, a: &[Digit], b: &[Digit]) -> Result<BlockParse> {
    let common = a.len().min(b.len());
    if a.is_empty() || b.is_empty() || a[..common] == b[..common] {
        return Err(Error::Unsupported(format!(
            "ambiguous block pair ({}) / ({})",
            DigitWord::from(a),
            DigitWord::from(b)
        )));
    }
    if EvPeriodicSeq::periodic(a)? == *s {
        return Ok(BlockParse::OnlyPureA);
    }
    let p = s.preperiod_len();
    let q = s.period_len();
    let normalize = |i: usize| if i < p { i } else { p + (i - p) % q };
    let matches_at = |pos: usize, block: &[Digit]| {
        block
            .iter()
            .enumerate()
            .all(|(j, &d)| s.digit(pos + j + 1) == d)
    };

    let mut seen = vec![false; p + q];
    let mut pos = 0usize;
    loop {
        if seen[pos] {
            return Ok(BlockParse::InOmegaLanguage);
        }
        seen[pos] = true;
        let next = if matches_at(pos, a) {
            pos + a.len()
        } else if matches_at(pos, b) {
            pos + b.len()
        } else {
            return Ok(BlockParse::NotIn);
        };
        pos = normalize(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> EvPeriodicSeq {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_forms() {
        let c = EvPeriodicSeq::new(vec![1, 0], vec![0, 0]).unwrap();
        assert_eq!(c.preperiod(), &[1]);
        assert_eq!(c.period(), &[0]);

        let c = EvPeriodicSeq::new(vec![], vec![2, 2]).unwrap();
        assert!(c.preperiod().is_empty());
        assert_eq!(c.period(), &[2]);

        let c = EvPeriodicSeq::new(vec![2], vec![1, 0]).unwrap();
        assert_eq!(c.preperiod(), &[2]);
        assert_eq!(c.period(), &[1, 0]);

        // absorption rotates the period
        let c = EvPeriodicSeq::new(vec![3, 0, 1], vec![0, 1]).unwrap();
        assert_eq!(c.preperiod(), &[3]);
        assert_eq!(c.period(), &[0, 1]);
    }

    #[test]
    fn empty_period_is_malformed() {
        assert!(matches!(
            EvPeriodicSeq::new(vec![1], vec![]),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            "1 ()".parse::<EvPeriodicSeq>(),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn text_format() {
        assert_eq!(seq("1 0 0 (1)").to_string(), "1 0 0 (1)");
        assert_eq!(seq("(2 1 0)").to_string(), "(2 1 0)");
        assert_eq!(seq("  1   (0 0) ").to_string(), "1 (0)");
        assert_eq!(seq("12 (3)").digit(1), 12);
        for bad in [
            "1 -2 (0)", "1 (0) 2", "(1", "1)", "a (1)", "((1))", "1,2 (3)", "(1)(2)",
        ] {
            assert!(bad.parse::<EvPeriodicSeq>().is_err(), "{bad}");
        }
        assert!("1 2 3".parse::<EvPeriodicSeq>().is_err());
        assert_eq!("1 2 3".parse::<DigitWord>().unwrap().as_slice(), &[1, 2, 3]);
        assert!("1 (2)".parse::<DigitWord>().is_err());
        assert!(matches!(
            "1 0".parse::<SequenceInput>().unwrap(),
            SequenceInput::Finite(_)
        ));
    }

    #[test]
    fn alt_cmp_examples() {
        assert_eq!(alt_cmp(&seq("(1 1)"), &seq("1 (0)")), Ordering::Less);
        assert_eq!(alt_cmp(&seq("0 (1)"), &seq("(2)")), Ordering::Less);
        assert_eq!(alt_cmp(&seq("(1 0 0 1 1)"), &seq("1 (0)")), Ordering::Less);
        assert_eq!(
            alt_cmp(&seq("1 (0)"), &seq("(1 0 0 1 1)")),
            Ordering::Greater
        );
        assert_eq!(alt_cmp(&seq("(1 0)"), &seq("1 0 (1 0)")), Ordering::Equal);
    }

    #[test]
    fn alt_cmp_prefix_examples() {
        // differ at k = 2 (even) with 1 > 0, so the first word is smaller
        assert_eq!(alt_cmp_prefix(&[2, 1], &[2, 0]), Some(Ordering::Less));
        assert_eq!(alt_cmp_prefix(&[1], &[1, 0]), None);
        assert_eq!(alt_cmp_prefix(&[1, 0, 0], &[2]), Some(Ordering::Less));
    }

    #[test]
    fn shifts() {
        assert_eq!(seq("1 (0)").shift(1), seq("(0)"));
        assert_eq!(seq("(2 1 0)").shift(2), seq("(0 2 1)"));
        // digits 2 1 0 1 0 are dropped; the tail starts 1 0 1 0 ...
        assert_eq!(seq("2 (1 0)").shift(5), seq("(1 0)"));
        assert_eq!(seq("2 (1 0)").shift(4), seq("(0 1)"));
        assert_eq!(seq("2 (1 0)").shift(0), seq("2 (1 0)"));
    }

    #[test]
    fn tails() {
        let t = seq("(2)").distinct_tails();
        assert_eq!(t, vec![(1, seq("(2)"))]);

        let t = seq("(2 1 0)").distinct_tails();
        assert_eq!(
            t,
            vec![
                (1, seq("(1 0 2)")),
                (2, seq("(0 2 1)")),
                (3, seq("(2 1 0)"))
            ]
        );

        let t = seq("1 (0)").distinct_tails();
        assert_eq!(t, vec![(1, seq("(0)"))]);
    }

    #[test]
    fn block_parses() {
        assert_eq!(
            block_parse(&seq("(2 1 0)"), &[2], &[1, 0]).unwrap(),
            BlockParse::InOmegaLanguage
        );
        assert_eq!(
            block_parse(&seq("(2)"), &[2], &[1, 0]).unwrap(),
            BlockParse::OnlyPureA
        );
        assert_eq!(
            block_parse(&seq("1 (0)"), &[1], &[0, 0]).unwrap(),
            BlockParse::InOmegaLanguage
        );
        assert_eq!(
            block_parse(&seq("1 0 (1)"), &[1, 0], &[2]).unwrap(),
            BlockParse::NotIn
        );
        // a parse that must use both blocks inside the period
        assert_eq!(
            block_parse(&seq("2 (2 1 0 1 0)"), &[2], &[1, 0]).unwrap(),
            BlockParse::InOmegaLanguage
        );
        assert!(matches!(
            block_parse(&seq("(1)"), &[1], &[1, 1]),
            Err(Error::Unsupported(_))
        ));
    }
}
