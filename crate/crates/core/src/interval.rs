//! Closed intervals with rational endpoints.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    pub fn point(q: BigRational) -> Self {
        RatInterval {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Sign of every element, if all elements share one.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn add(&self, o: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &RatInterval) -> RatInterval {
        RatInterval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> RatInterval {
        RatInterval::new(-&self.hi, -&self.lo)
    }

    pub fn add_scalar(&self, q: &BigRational) -> RatInterval {
        RatInterval::new(&self.lo + q, &self.hi + q)
    }

    pub fn mul_scalar(&self, q: &BigRational) -> RatInterval {
        let a = &self.lo * q;
        let b = &self.hi * q;
        if a <= b {
            RatInterval::new(a, b)
        } else {
            RatInterval::new(b, a)
        }
    }

    pub fn mul(&self, o: &RatInterval) -> RatInterval {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().expect("four products").clone();
        let hi = c.iter().max().expect("four products").clone();
        RatInterval::new(lo, hi)
    }

    /// `None` if `o` contains zero.
    pub fn div(&self, o: &RatInterval) -> Option<RatInterval> {
        o.sign().filter(|s| *s != Ordering::Equal)?;
        let inv = RatInterval::new(o.hi.recip(), o.lo.recip());
        Some(self.mul(&inv))
    }

    /// Widens the interval to endpoints with denominator `2^bits`.
    pub fn round_outward(&self, bits: u32) -> RatInterval {
        RatInterval::new(dyadic_floor(&self.lo, bits), dyadic_ceil(&self.hi, bits))
    }

    pub fn to_f64_mid(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

/// `2^e` as a rational, `e` may be negative.
pub fn pow2(e: i64) -> BigRational {
    let p = BigInt::one() << e.unsigned_abs();
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// Largest `k / 2^bits <= q`.
pub fn dyadic_floor(q: &BigRational, bits: u32) -> BigRational {
    if q.denom().is_one() {
        return q.clone();
    }
    let scaled: BigInt = (q.numer() << bits as usize).div_floor(q.denom());
    BigRational::new(scaled, BigInt::one() << bits as usize)
}

/// Smallest `k / 2^bits >= q`.
pub fn dyadic_ceil(q: &BigRational, bits: u32) -> BigRational {
    if q.denom().is_one() {
        return q.clone();
    }
    let scaled: BigInt = (q.numer() << bits as usize).div_ceil(q.denom());
    BigRational::new(scaled, BigInt::one() << bits as usize)
}

/// Decimal rendering of a rational with `digits` fractional digits,
/// truncated toward zero.
pub fn to_decimal(q: &BigRational, digits: usize) -> String {
    let neg = q.is_negative();
    let a = q.abs();
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = (a.numer() * &scale) / a.denom();
    let (int, frac) = scaled.div_rem(&scale);
    let mut s = String::new();
    if neg && !scaled.is_zero() {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if digits > 0 {
        let f = frac.to_string();
        s.push('.');
        s.push_str(&"0".repeat(digits - f.len()));
        s.push_str(&f);
    }
    s
}
