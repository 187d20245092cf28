//! The maps `T_{-β}` and `T̃_{-β}`, digit generation, series values and the
//! polynomials `P_n`.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{with_base, Base};
use crate::beta::{BetaValue, PointValue};
use crate::digits::{Digit, DigitWord, EvPeriodicSeq};
use crate::error::{Error, Result};
use crate::interval::RatInterval;
use crate::poly::QPoly;

pub(crate) fn to_digit(d: BigInt) -> Result<Digit> {
    d.to_u64()
        .ok_or_else(|| Error::Domain(format!("digit {d} outside 0..2^64")))
}

/// `-β/(β+1)`.
pub(crate) fn left_end<B: Base>(b: &mut B) -> Result<B::Elem> {
    let beta = b.beta();
    let inv = b.inv(&b.add_int(&beta, 1))?;
    Ok(b.neg(&b.mul(&beta, &inv)))
}

/// `1/(β+1)`.
pub(crate) fn right_end<B: Base>(b: &mut B) -> Result<B::Elem> {
    let beta = b.beta();
    b.inv(&b.add_int(&beta, 1))
}

fn check_t_domain<B: Base>(b: &mut B, x: &B::Elem) -> Result<()> {
    let (l, r) = (left_end(b)?, right_end(b)?);
    let below = b.cmp(x, &l, "x against the left endpoint")? == Ordering::Less;
    let above = b.cmp(x, &r, "x against the right endpoint")? != Ordering::Less;
    if below || above {
        return Err(Error::Domain("point outside [-β/(β+1), 1/(β+1))".into()));
    }
    Ok(())
}

pub(crate) fn t_step<B: Base>(b: &mut B, x: &B::Elem) -> Result<(Digit, B::Elem)> {
    let beta = b.beta();
    let bx = b.mul(&beta, x);
    let l = left_end(b)?;
    let shift = b.neg(&l); // β/(β+1)
    let e = b.sub(&shift, &bx);
    let d = b.floor(&e, "β/(β+1) - βx")?;
    let next = b.sub(
        &b.neg(&bx),
        &b.rational(&BigRational::from_integer(d.clone())),
    );
    Ok((to_digit(d)?, next))
}

pub(crate) fn t_tilde_step<B: Base>(b: &mut B, y: &B::Elem) -> Result<(Digit, B::Elem)> {
    let beta = b.beta();
    let by = b.mul(&beta, y);
    let d = b.floor(&by, "βy")?;
    let next = b.add(
        &b.neg(&by),
        &b.rational(&BigRational::from_integer(d.clone() + 1)),
    );
    Ok((to_digit(d)?, next))
}

/// One step of `T_{-β}`: the digit `⌊β/(β+1) - βx⌋` and the image point.
pub fn step_t(beta: &BetaValue, x: &PointValue) -> Result<(Digit, PointValue)> {
    with_base!(beta, |b| {
        let x = b.embed_point(x)?;
        check_t_domain(b, &x)?;
        let (d, next) = t_step(b, &x)?;
        Ok((d, b.to_point(&next)))
    })
}

/// One step of `T̃_{-β}` on `(0, 1]`: the digit `⌊βy⌋` and `-βy + ⌊βy⌋ + 1`.
pub fn step_t_tilde(beta: &BetaValue, y: &PointValue) -> Result<(Digit, PointValue)> {
    with_base!(beta, |b| {
        let y = b.embed_point(y)?;
        let zero = b.zero();
        let one = b.one();
        if b.cmp(&y, &zero, "y")? != Ordering::Greater
            || b.cmp(&y, &one, "y - 1")? == Ordering::Greater
        {
            return Err(Error::Domain("point outside (0, 1]".into()));
        }
        let (d, next) = t_tilde_step(b, &y)?;
        Ok((d, b.to_point(&next)))
    })
}

/// Digits and visited points of an orbit of `T_{-β}`.
#[derive(Debug, Clone, Serialize)]
pub struct Orbit {
    pub digits: DigitWord,
    /// `x, T(x), …, T^n(x)`.
    #[serde(skip)]
    pub points: Vec<PointValue>,
}

/// `n` digits of the expansion of `x`, with the orbit.
pub fn expand_orbit(beta: &BetaValue, x: &PointValue, n: usize) -> Result<Orbit> {
    with_base!(beta, |b| {
        let mut x = b.embed_point(x)?;
        check_t_domain(b, &x)?;
        let mut digits = Vec::with_capacity(n);
        let mut points = vec![b.to_point(&x)];
        for _ in 0..n {
            let (d, next) = t_step(b, &x)?;
            digits.push(d);
            points.push(b.to_point(&next));
            x = next;
        }
        Ok(Orbit {
            digits: DigitWord::new(digits),
            points,
        })
    })
}

/// `ε_1(x) ⋯ ε_n(x)`.
pub fn expand(beta: &BetaValue, x: &PointValue, n: usize) -> Result<DigitWord> {
    with_base!(beta, |b| {
        let mut x = b.embed_point(x)?;
        check_t_domain(b, &x)?;
        let mut digits = Vec::with_capacity(n);
        for _ in 0..n {
            let (d, next) = t_step(b, &x)?;
            digits.push(d);
            x = next;
        }
        Ok(DigitWord::new(digits))
    })
}

/// The left endpoint `-β/(β+1)` as a point.
pub fn left_endpoint(beta: &BetaValue) -> Result<PointValue> {
    with_base!(beta, |b| {
        let l = left_end(b)?;
        Ok(b.to_point(&l))
    })
}

/// `a_1 ⋯ a_n`, the first digits of the expansion of `-β/(β+1)`.
///
/// Computed as the `T̃` itinerary of 1, which carries the same digits.
pub fn left_endpoint_expansion(beta: &BetaValue, n: usize) -> Result<DigitWord> {
    if let Some(q) = beta.exact_rational() {
        return Ok(DigitWord::new(
            RationalEndpointDigits::new(q).take(n).collect(),
        ));
    }
    with_base!(beta, |b| {
        let mut y = b.one();
        let mut digits = Vec::with_capacity(n);
        for _ in 0..n {
            let (d, next) = t_tilde_step(b, &y)?;
            digits.push(d);
            y = next;
        }
        Ok(DigitWord::new(digits))
    })
}

/// Outcome of following the orbit of the left endpoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EndpointOrbit {
    /// The orbit closed up; the expansion is exactly this sequence.
    Periodic(EvPeriodicSeq),
    /// No repetition within the digits computed.
    Aperiodic(DigitWord),
}

/// Follows the left-endpoint orbit for up to `max_len` steps, detecting a
/// cycle exactly. Enclosure-only bases never report a cycle.
pub fn left_endpoint_orbit(beta: &BetaValue, max_len: usize) -> Result<EndpointOrbit> {
    if let Some(q) = beta.exact_rational() {
        if q.is_integer() {
            let d = to_digit(q.to_integer())?;
            return Ok(EndpointOrbit::Periodic(EvPeriodicSeq::periodic(vec![d])?));
        }
        // P_n(β) has denominator exactly q^n, so the orbit never repeats
        let digits = RationalEndpointDigits::new(q).take(max_len).collect();
        return Ok(EndpointOrbit::Aperiodic(DigitWord::new(digits)));
    }
    with_base!(beta, |b| {
        let exact = b.exact();
        let mut seen: HashMap<_, usize> = HashMap::new();
        let mut y = b.one();
        let mut digits: Vec<Digit> = Vec::new();
        for i in 0..=max_len {
            if exact {
                if let Some(&j) = seen.get(&y) {
                    return Ok(EndpointOrbit::Periodic(EvPeriodicSeq::new(
                        digits[..j].to_vec(),
                        digits[j..i].to_vec(),
                    )?));
                }
                seen.insert(y.clone(), i);
            }
            if i == max_len {
                break;
            }
            let (d, next) = t_tilde_step(b, &y)?;
            digits.push(d);
            y = next;
        }
        Ok(EndpointOrbit::Aperiodic(DigitWord::new(digits)))
    })
}

/// Digits of the left-endpoint expansion for a rational base `p/q`, in
/// integer arithmetic: the `T̃` state after `n` steps is `N_n / q^n`.
#[derive(Debug, Clone)]
pub struct RationalEndpointDigits {
    p: BigInt,
    q: BigInt,
    num: BigInt,
    den: BigInt,
}

impl RationalEndpointDigits {
    pub fn new(beta: &BigRational) -> Self {
        RationalEndpointDigits {
            p: beta.numer().clone(),
            q: beta.denom().clone(),
            num: BigInt::one(),
            den: BigInt::one(),
        }
    }
}

impl Iterator for RationalEndpointDigits {
    type Item = Digit;

    fn next(&mut self) -> Option<Digit> {
        // y = num/den, βy = p·num / (q·den)
        let top = &self.p * &self.num;
        let den = &self.q * &self.den;
        let d = top.div_floor(&den);
        // y' = (d + 1) - βy
        self.num = (&d + 1u32) * &den - top;
        self.den = den;
        Some(d.to_u64().expect("digits of a rational base fit in u64"))
    }
}

/// `Σ_j s_j (-β)^{-j}` in closed form.
pub fn eval_series(s: &EvPeriodicSeq, beta: &BetaValue) -> Result<PointValue> {
    with_base!(beta, |b| {
        let v = series_value(b, s)?;
        Ok(b.to_point(&v))
    })
}

pub(crate) fn series_value<B: Base>(b: &mut B, s: &EvPeriodicSeq) -> Result<B::Elem> {
    let r = b.inv(&b.neg(&b.beta()))?;
    let horner = |b: &mut B, ds: &[Digit]| -> B::Elem {
        // Σ_{j=1}^{m} d_j r^j
        let mut acc = b.zero();
        for &d in ds.iter().rev() {
            acc = b.mul(&b.add(&acc, &b.int(d as i64)), &r);
        }
        acc
    };
    let pre = horner(b, s.preperiod());
    let per = horner(b, s.period());
    let mut rp = b.one();
    for _ in 0..s.preperiod_len() {
        rp = b.mul(&rp, &r);
    }
    let mut rq = b.one();
    for _ in 0..s.period_len() {
        rq = b.mul(&rq, &r);
    }
    let geo = b.inv(&b.sub(&b.one(), &rq))?;
    let tail = b.mul(&b.mul(&rp, &per), &geo);
    Ok(b.add(&pre, &tail))
}

/// `P_0, P_1, …, P_n` at one point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PnTrace {
    pub values: Vec<PointValue>,
}

/// The recurrence `P_0 = 1`, `P_j = a_j + 1 - x P_{j-1}` at a rational or
/// interval point.
pub fn pn_trace(digits: &[Digit], x: &PointValue) -> Result<PnTrace> {
    match x {
        PointValue::Rational(x) => {
            let mut p = BigRational::one();
            let mut values = vec![PointValue::Rational(p.clone())];
            for &d in digits {
                p = BigRational::from_integer(BigInt::from(d) + 1) - x * &p;
                values.push(PointValue::Rational(p.clone()));
            }
            Ok(PnTrace { values })
        }
        PointValue::Interval(x) => {
            let mut p = RatInterval::point(BigRational::one());
            let mut values = vec![PointValue::Interval(p.clone())];
            for &d in digits {
                p = x
                    .mul(&p)
                    .neg()
                    .add_scalar(&BigRational::from_integer(BigInt::from(d) + 1));
                values.push(PointValue::Interval(p.clone()));
            }
            Ok(PnTrace { values })
        }
        PointValue::Algebraic { .. } => Err(Error::Unsupported(
            "use pn_trace_at_beta for algebraic points".into(),
        )),
    }
}

/// `P_0(β), …, P_n(β)`, exact for rational and algebraic bases.
pub fn pn_trace_at_beta(digits: &[Digit], beta: &BetaValue) -> Result<PnTrace> {
    with_base!(beta, |b| {
        let x = b.beta();
        let mut p = b.one();
        let mut values = vec![b.to_point(&p)];
        for &d in digits {
            p = b.sub(&b.int(d as i64 + 1), &b.mul(&x, &p));
            values.push(b.to_point(&p));
        }
        Ok(PnTrace { values })
    })
}

/// The polynomials `P_0, …, P_n` for the given digits.
pub fn pn_polynomials(digits: &[Digit]) -> Vec<QPoly> {
    let x = QPoly::x();
    let mut out = vec![QPoly::one()];
    for &d in digits {
        let prev = out.last().expect("non-empty");
        let next = x
            .mul(prev)
            .neg()
            .add_constant(&BigRational::from_integer(BigInt::from(d) + 1));
        out.push(next);
    }
    out
}

/// Whether the interval trace stays inside `[0, 1]` (`None` if undecided).
pub fn trace_in_unit(trace: &PnTrace) -> Option<bool> {
    let (zero, one) = (BigRational::zero(), BigRational::one());
    let mut undecided = false;
    for v in &trace.values {
        let iv = v.enclosure();
        if iv.hi < zero || iv.lo > one {
            return Some(false);
        }
        if iv.lo.is_negative() || iv.hi > one {
            undecided = true;
        }
    }
    (!undecided).then_some(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn two() -> BetaValue {
        BetaValue::integer(2).unwrap()
    }

    fn golden() -> BetaValue {
        "alg:-1,-1,1:1:2".parse().unwrap()
    }

    fn plastic() -> BetaValue {
        "alg:-1,-1,0,1:1.3:1.4".parse().unwrap()
    }

    #[test]
    fn t_steps() {
        let (d, x) = step_t(&two(), &PointValue::ratio(-2, 3)).unwrap();
        assert_eq!((d, x), (2, PointValue::ratio(-2, 3)));
        let (d, x) = step_t(&two(), &PointValue::ratio(0, 1)).unwrap();
        assert_eq!((d, x), (0, PointValue::ratio(0, 1)));
        let g = golden();
        let l = left_endpoint(&g).unwrap();
        let (d, x) = step_t(&g, &l).unwrap();
        assert_eq!(d, 1);
        assert_eq!(x.enclosure(), RatInterval::point(rat(0, 1)));
        assert!(matches!(
            step_t(&two(), &PointValue::ratio(1, 3)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn t_tilde_steps() {
        let (d, y) = step_t_tilde(&two(), &PointValue::ratio(1, 1)).unwrap();
        assert_eq!((d, y), (2, PointValue::ratio(1, 1)));
        let (d, y) = step_t_tilde(&two(), &PointValue::ratio(1, 2)).unwrap();
        assert_eq!((d, y), (1, PointValue::ratio(1, 1)));
        let (d, y) = step_t_tilde(&golden(), &PointValue::ratio(1, 1)).unwrap();
        assert_eq!(d, 1);
        assert!((y.to_f64() - 0.381_966_011_250_105).abs() < 1e-9);
        assert!(step_t_tilde(&two(), &PointValue::ratio(0, 1)).is_err());
    }

    #[test]
    fn expansions() {
        let e = expand(&two(), &PointValue::ratio(-2, 3), 5).unwrap();
        assert_eq!(e.to_string(), "2 2 2 2 2");
        let e = expand(&two(), &PointValue::ratio(-1, 3), 4).unwrap();
        assert_eq!(e.to_string(), "1 1 1 1");
        let p = plastic();
        let e = expand(&p, &left_endpoint(&p).unwrap(), 6).unwrap();
        assert_eq!(e.to_string(), "1 0 0 1 1 1");
        assert_eq!(
            left_endpoint_expansion(&two(), 3).unwrap().to_string(),
            "2 2 2"
        );
        assert_eq!(
            left_endpoint_expansion(&golden(), 4).unwrap().to_string(),
            "1 0 0 0"
        );
        let three = BetaValue::integer(3).unwrap();
        assert_eq!(
            left_endpoint_expansion(&three, 3).unwrap().to_string(),
            "3 3 3"
        );
    }

    #[test]
    fn endpoint_orbits() {
        let seq = |s: &str| s.parse::<EvPeriodicSeq>().unwrap();
        assert_eq!(
            left_endpoint_orbit(&golden(), 50).unwrap(),
            EndpointOrbit::Periodic(seq("1 (0)"))
        );
        assert_eq!(
            left_endpoint_orbit(&plastic(), 50).unwrap(),
            EndpointOrbit::Periodic(seq("1 0 0 (1)"))
        );
        assert_eq!(
            left_endpoint_orbit(&two(), 50).unwrap(),
            EndpointOrbit::Periodic(seq("(2)"))
        );
        let b = BetaValue::ratio(5, 2).unwrap();
        assert!(
            matches!(left_endpoint_orbit(&b, 20).unwrap(), EndpointOrbit::Aperiodic(w) if w.len() == 20)
        );
    }

    #[test]
    fn rational_stream_matches_generic() {
        for (p, q) in [(5, 2), (9, 5), (33, 10), (7, 6)] {
            let beta = BetaValue::ratio(p, q).unwrap();
            let fast = left_endpoint_expansion(&beta, 30).unwrap();
            let slow = expand(&beta, &left_endpoint(&beta).unwrap(), 30).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn series() {
        let seq = |s: &str| s.parse::<EvPeriodicSeq>().unwrap();
        assert_eq!(
            eval_series(&seq("(2)"), &two()).unwrap(),
            PointValue::ratio(-2, 3)
        );
        assert_eq!(
            eval_series(&seq("(0 2 1)"), &two()).unwrap(),
            PointValue::ratio(1, 3)
        );
        assert_eq!(
            eval_series(&seq("(0)"), &golden()).unwrap().enclosure(),
            RatInterval::point(rat(0, 1))
        );
    }

    #[test]
    fn traces() {
        let t = pn_trace(&[2, 2], &PointValue::ratio(2, 1)).unwrap();
        assert_eq!(t.values, vec![PointValue::ratio(1, 1); 3]);
        let t = pn_trace(&[1, 0, 0, 1], &PointValue::ratio(2, 1)).unwrap();
        assert_eq!(t.values[4], PointValue::ratio(4, 1));
        let t = pn_trace(&[], &PointValue::ratio(7, 3)).unwrap();
        assert_eq!(t.values, vec![PointValue::ratio(1, 1)]);
        let p = pn_polynomials(&[1, 0, 0, 1]);
        assert_eq!(p[4], QPoly::from_ints(&[2, -1, 1, -2, 1]));
    }
}
