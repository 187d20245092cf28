//! Bases `β > 1`: exact rationals, real algebraic numbers given by a
//! polynomial and an isolating interval, or bare enclosures.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{to_decimal, RatInterval};
use crate::poly::{isolate_roots, QPoly, RealRoot};

/// Default cap on the working precision of interval evaluations.
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum BetaKind {
    Rational(BigRational),
    Algebraic(RealRoot),
    Enclosure(RatInterval),
}

/// A base `β > 1`.
///
/// Values are immutable; [`BetaValue::refined`] returns a sharper copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetaValue {
    kind: BetaKind,
    precision_cap: u32,
}

impl BetaValue {
    pub fn rational(q: BigRational) -> Result<Self> {
        if q <= BigRational::one() {
            return Err(Error::InvalidInput(format!(
                "base {q} is not greater than 1"
            )));
        }
        Ok(BetaValue {
            kind: BetaKind::Rational(q),
            precision_cap: DEFAULT_PRECISION_CAP,
        })
    }

    pub fn integer(n: u64) -> Result<Self> {
        BetaValue::rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        BetaValue::rational(BigRational::new(num.into(), den.into()))
    }

    /// The unique root `> 1` of `poly` in `[lo, hi]`.
    pub fn algebraic(poly: &QPoly, lo: BigRational, hi: BigRational) -> Result<Self> {
        if poly.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidInput(
                "defining polynomial must be non-constant".into(),
            ));
        }
        if lo > hi {
            return Err(Error::InvalidInput(format!("empty interval [{lo}, {hi}]")));
        }
        let sf = poly.squarefree();
        let mut roots = isolate_roots(&sf, &lo, &hi);
        if sf.sign_at(&lo).is_eq() {
            roots.insert(0, RealRoot::exact(sf.clone(), lo.clone()));
        }
        if roots.len() != 1 {
            return Err(Error::InvalidInput(format!(
                "{poly} has {} roots in [{lo}, {hi}], expected exactly one",
                roots.len()
            )));
        }
        BetaValue::from_root(roots.pop().expect("one root"))
    }

    /// Wraps an isolated root; rejects roots `<= 1`.
    pub fn from_root(mut root: RealRoot) -> Result<Self> {
        let one = BigRational::one();
        while root.enclosure().lo <= one {
            if root.enclosure().hi <= one {
                return Err(Error::InvalidInput("root is not greater than 1".into()));
            }
            if let Some(v) = root.exact_value() {
                return BetaValue::rational(v.clone());
            }
            root.bisect();
        }
        if let Some(v) = root.exact_value() {
            return BetaValue::rational(v.clone());
        }
        Ok(BetaValue {
            kind: BetaKind::Algebraic(root),
            precision_cap: DEFAULT_PRECISION_CAP,
        })
    }

    /// A base known only through an enclosure. Sign decisions that the
    /// enclosure cannot settle fail with a precision error.
    pub fn enclosure(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo <= BigRational::one() || lo > hi {
            return Err(Error::InvalidInput(format!(
                "bad enclosure [{lo}, {hi}] for a base > 1"
            )));
        }
        if lo == hi {
            return BetaValue::rational(lo);
        }
        Ok(BetaValue {
            kind: BetaKind::Enclosure(RatInterval::new(lo, hi)),
            precision_cap: DEFAULT_PRECISION_CAP,
        })
    }

    pub fn with_precision_cap(mut self, bits: u32) -> Self {
        self.precision_cap = bits.max(32);
        self
    }

    pub fn precision_cap(&self) -> u32 {
        self.precision_cap
    }

    pub(crate) fn kind(&self) -> &BetaKind {
        &self.kind
    }

    pub fn exact_rational(&self) -> Option<&BigRational> {
        match &self.kind {
            BetaKind::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_integer(&self) -> bool {
        self.exact_rational().is_some_and(|q| q.is_integer())
    }

    /// Defining polynomial, for rational bases `q·x - p`.
    pub fn min_poly(&self) -> Option<QPoly> {
        match &self.kind {
            BetaKind::Rational(q) => Some(QPoly::new(vec![-q.clone(), BigRational::one()])),
            BetaKind::Algebraic(r) => Some(r.poly().clone()),
            BetaKind::Enclosure(_) => None,
        }
    }

    pub fn as_root(&self) -> Option<RealRoot> {
        match &self.kind {
            BetaKind::Rational(q) => Some(RealRoot::exact(self.min_poly()?, q.clone())),
            BetaKind::Algebraic(r) => Some(r.clone()),
            BetaKind::Enclosure(_) => None,
        }
    }

    pub fn enclosure_interval(&self) -> RatInterval {
        match &self.kind {
            BetaKind::Rational(q) => RatInterval::point(q.clone()),
            BetaKind::Algebraic(r) => r.enclosure().clone(),
            BetaKind::Enclosure(iv) => iv.clone(),
        }
    }

    pub fn lo(&self) -> BigRational {
        self.enclosure_interval().lo
    }

    pub fn hi(&self) -> BigRational {
        self.enclosure_interval().hi
    }

    pub fn width(&self) -> BigRational {
        self.enclosure_interval().width()
    }

    /// A copy whose enclosure has width at most `2^-bits` (no-op for
    /// rational and enclosure-only bases).
    pub fn refined(&self, bits: u32) -> BetaValue {
        match &self.kind {
            BetaKind::Algebraic(r) => {
                let mut r = r.clone();
                r.refine_to(bits);
                let mut out = BetaValue::from_root(r).expect("refinement keeps the root above 1");
                out.precision_cap = self.precision_cap;
                out
            }
            _ => self.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match &self.kind {
            BetaKind::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
            _ => self.refined(64).enclosure_interval().to_f64_mid(),
        }
    }

    /// `⌊β⌋`, decided exactly when possible.
    pub fn floor(&self) -> Result<BigInt> {
        match &self.kind {
            BetaKind::Rational(q) => Ok(q.floor().to_integer()),
            BetaKind::Algebraic(r) => {
                let mut r = r.clone();
                loop {
                    let lo = r.enclosure().lo.floor();
                    if r.enclosure().hi < &lo + BigRational::one() {
                        return Ok(lo.to_integer());
                    }
                    r.bisect();
                }
            }
            BetaKind::Enclosure(iv) => {
                let lo = iv.lo.floor();
                if iv.hi < &lo + BigRational::one() {
                    Ok(lo.to_integer())
                } else {
                    Err(Error::Precision {
                        quantity: "integer part of the base".into(),
                        bits: 0,
                    })
                }
            }
        }
    }

    /// Exact comparison when both bases carry a polynomial or are rational.
    pub fn cmp_exact(&self, other: &BetaValue) -> Option<Ordering> {
        let (mut a, mut b) = (self.as_root()?, other.as_root()?);
        Some(a.cmp_root(&mut b))
    }

    /// Whether `q` lies in the current enclosure.
    pub fn encloses(&self, q: &BigRational) -> bool {
        self.enclosure_interval().contains(q)
    }

    pub fn summary(&self, digits: usize) -> BetaSummary {
        let iv = self.enclosure_interval();
        BetaSummary {
            beta_lo: to_decimal(&iv.lo, digits),
            beta_hi: decimal_ceil(&iv.hi, digits),
            exact: self.exact_rational().map(|q| q.to_string()),
            poly: self.min_poly().map(|p| {
                p.to_primitive_integer()
                    .iter()
                    .map(|c| c.to_string())
                    .collect()
            }),
        }
    }
}

fn decimal_ceil(q: &BigRational, digits: usize) -> String {
    let scale = BigRational::from_integer(num_traits::pow(BigInt::from(10), digits));
    let up = (q * &scale).ceil() / scale;
    to_decimal(&up, digits)
}

/// Serializable view of a base.
#[derive(Debug, Clone, Serialize)]
pub struct BetaSummary {
    pub beta_lo: String,
    pub beta_hi: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    /// Integer coefficients, constant term first.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poly: Option<Vec<String>>,
}

impl fmt::Display for BetaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            BetaKind::Rational(q) => write!(f, "rat:{q}"),
            BetaKind::Algebraic(r) => {
                let c: Vec<String> = r
                    .poly()
                    .to_primitive_integer()
                    .iter()
                    .map(|c| c.to_string())
                    .collect();
                write!(
                    f,
                    "alg:{}:{}:{}",
                    c.join(","),
                    r.enclosure().lo,
                    r.enclosure().hi
                )
            }
            BetaKind::Enclosure(iv) => write!(f, "enclosure:{}:{}", iv.lo, iv.hi),
        }
    }
}

/// Parses `p/q`, `p`, or a decimal `d.ddd` (optionally signed) exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    parse_decimal(s)
}

/// Parses a decimal literal such as `-1.250` or `3e-2` into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a decimal number: {s:?}"));
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty()
        || !int.chars().all(|c| c.is_ascii_digit())
        || !frac.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    let n: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let ten = BigInt::from(10);
    let scale = exp - frac.len() as i32;
    let mut q = BigRational::from_integer(n);
    if scale >= 0 {
        q *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num_traits::pow(ten, scale.unsigned_abs() as usize));
    }
    Ok(if neg { -q } else { q })
}

/// Base specifications:
///
/// * `rat:p/q` (or `rat:p`), an exact rational;
/// * `dec:d.ddd`, a decimal read as an exact rational;
/// * `alg:c0,c1,...,cn:lo:hi`, the root of `c0 + c1 x + ... + cn x^n` in `[lo, hi]`.
impl FromStr for BetaValue {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (tag, rest) = spec.split_once(':').ok_or_else(|| {
            Error::Parse(format!("base spec {spec:?} lacks a rat:/dec:/alg: tag"))
        })?;
        match tag {
            "rat" => BetaValue::rational(parse_rational(rest)?),
            "dec" => BetaValue::rational(parse_decimal(rest)?),
            "alg" => {
                let mut parts = rest.split(':');
                let (Some(cs), Some(lo), Some(hi), None) =
                    (parts.next(), parts.next(), parts.next(), parts.next())
                else {
                    return Err(Error::Parse(format!(
                        "expected alg:<c0,c1,...>:<lo>:<hi>, got {spec:?}"
                    )));
                };
                let coeffs = cs
                    .split(',')
                    .map(|c| {
                        c.trim()
                            .parse::<BigInt>()
                            .map(BigRational::from_integer)
                            .map_err(|_| Error::Parse(format!("bad coefficient {c:?}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                BetaValue::algebraic(
                    &QPoly::new(coeffs),
                    parse_rational(lo)?,
                    parse_rational(hi)?,
                )
            }
            other => Err(Error::Parse(format!("unknown base tag {other:?}"))),
        }
    }
}

/// A point of the interval on which a map acts, for a specific base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PointValue {
    Rational(BigRational),
    /// The value of a polynomial at the base; the enclosure is for display.
    Algebraic {
        value: QPoly,
        enclosure: RatInterval,
    },
    Interval(RatInterval),
}

impl PointValue {
    pub fn rational(q: BigRational) -> Self {
        PointValue::Rational(q)
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        PointValue::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            PointValue::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn enclosure(&self) -> RatInterval {
        match self {
            PointValue::Rational(q) => RatInterval::point(q.clone()),
            PointValue::Algebraic { enclosure, .. } => enclosure.clone(),
            PointValue::Interval(iv) => iv.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure().to_f64_mid()
    }

    /// Decimal rendering; enclosures show their midpoint.
    pub fn to_decimal(&self, digits: usize) -> String {
        match self {
            PointValue::Rational(q) => to_decimal(q, digits),
            other => to_decimal(&other.enclosure().midpoint(), digits),
        }
    }
}

impl fmt::Display for PointValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointValue::Rational(q) => write!(f, "{q}"),
            other => write!(f, "~{}", other.to_decimal(20)),
        }
    }
}
