//! Arithmetic in `Q(β)` for the three kinds of base.
//!
//! Rational bases compute with exact rationals. Algebraic bases compute with
//! polynomials reduced modulo the defining polynomial; signs are read off an
//! interval evaluation on the isolating interval, refined with doubling
//! working precision up to the cap, and settled exactly through a gcd with
//! the defining polynomial when the value sits on zero. Enclosure-only bases
//! use interval arithmetic and report a precision error when a sign is
//! ambiguous.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::beta::{BetaKind, BetaValue, PointValue};
use crate::error::{Error, Result};
use crate::interval::RatInterval;
use crate::poly::{QPoly, RealRoot};

const START_BITS: u32 = 64;

pub(crate) trait Base {
    type Elem: Clone + Debug + PartialEq + Eq + Hash;

    fn rational(&self, q: &BigRational) -> Self::Elem;
    fn beta(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&mut self, a: &Self::Elem) -> Result<Self::Elem>;
    /// Sign of `a`; `what` names the quantity in precision errors.
    fn sign(&mut self, a: &Self::Elem, what: &str) -> Result<Ordering>;
    fn enclose(&mut self, a: &Self::Elem) -> RatInterval;
    /// Whether equal elements always denote equal values and the
    /// representation is canonical enough for cycle detection.
    fn exact(&self) -> bool;
    fn to_point(&mut self, a: &Self::Elem) -> PointValue;
    fn embed_point(&self, p: &PointValue) -> Result<Self::Elem>;

    fn int(&self, n: i64) -> Self::Elem {
        self.rational(&BigRational::from_integer(n.into()))
    }

    fn zero(&self) -> Self::Elem {
        self.int(0)
    }

    fn one(&self) -> Self::Elem {
        self.int(1)
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.sub(&self.zero(), a)
    }

    fn add_int(&self, a: &Self::Elem, n: i64) -> Self::Elem {
        self.add(a, &self.int(n))
    }

    fn cmp(&mut self, a: &Self::Elem, b: &Self::Elem, what: &str) -> Result<Ordering> {
        let d = self.sub(a, b);
        self.sign(&d, what)
    }

    /// `⌊a⌋`.
    fn floor(&mut self, a: &Self::Elem, what: &str) -> Result<BigInt> {
        let iv = self.enclose(a);
        let mut k = iv.hi.floor().to_integer();
        let lowest = iv.lo.floor().to_integer();
        loop {
            let shifted = self.sub(a, &self.rational(&BigRational::from_integer(k.clone())));
            if self.sign(&shifted, what)? != Ordering::Less {
                return Ok(k);
            }
            if k <= lowest {
                // the enclosure was too optimistic; keep walking down
                let below = self.sub(a, &self.rational(&BigRational::from_integer(&k - 1)));
                if self.sign(&below, what)? != Ordering::Less {
                    return Ok(k - 1);
                }
            }
            k -= 1;
        }
    }
}

/// Exact rational arithmetic.
pub(crate) struct RationalBase {
    beta: BigRational,
}

impl RationalBase {
    pub(crate) fn new(beta: BigRational) -> Self {
        RationalBase { beta }
    }
}

impl Base for RationalBase {
    type Elem = BigRational;

    fn rational(&self, q: &BigRational) -> BigRational {
        q.clone()
    }

    fn beta(&self) -> BigRational {
        self.beta.clone()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&mut self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::InvalidInput("division by zero".into()));
        }
        Ok(a.recip())
    }

    fn sign(&mut self, a: &BigRational, _what: &str) -> Result<Ordering> {
        Ok(a.cmp(&BigRational::zero()))
    }

    fn enclose(&mut self, a: &BigRational) -> RatInterval {
        RatInterval::point(a.clone())
    }

    fn exact(&self) -> bool {
        true
    }

    fn to_point(&mut self, a: &BigRational) -> PointValue {
        PointValue::Rational(a.clone())
    }

    fn embed_point(&self, p: &PointValue) -> Result<BigRational> {
        match p {
            PointValue::Rational(q) => Ok(q.clone()),
            PointValue::Algebraic { value, .. } => Ok(value.eval(&self.beta)),
            PointValue::Interval(_) => Err(Error::Unsupported(
                "an interval point cannot be used with an exact rational base".into(),
            )),
        }
    }

    fn floor(&mut self, a: &BigRational, _what: &str) -> Result<BigInt> {
        Ok(a.floor().to_integer())
    }
}

/// Arithmetic modulo the defining polynomial of an algebraic base.
pub(crate) struct AlgebraicBase {
    root: RealRoot,
    modulus: QPoly,
    cap: u32,
    bits: u32,
}

impl AlgebraicBase {
    pub(crate) fn new(root: RealRoot, cap: u32) -> Self {
        let modulus = root.poly().monic();
        AlgebraicBase {
            root,
            modulus,
            cap,
            bits: START_BITS,
        }
    }

    fn reduce(&self, p: &QPoly) -> QPoly {
        p.rem(&self.modulus)
    }

    fn ensure_width(&mut self, bits: u32) {
        self.root.refine_to(bits);
    }

    fn eval(&mut self, r: &QPoly) -> RatInterval {
        if let Some(v) = self.root.exact_value() {
            return RatInterval::point(r.eval(v));
        }
        self.ensure_width(self.bits);
        r.eval_interval(self.root.enclosure(), Some(self.bits + 32))
    }

    /// Whether `g`, a divisor of the modulus, vanishes at the base.
    fn vanishes(&mut self, g: &QPoly) -> bool {
        let mut probe = self.root.clone();
        probe.sign_of(g).is_eq()
    }

    /// Replaces the modulus by the factor that vanishes at the base.
    fn split(&mut self, g: &QPoly) {
        let keep = if self.vanishes(g) {
            g.clone()
        } else {
            self.modulus.div_exact(g).monic()
        };
        self.modulus = keep;
    }
}

impl Base for AlgebraicBase {
    type Elem = QPoly;

    fn rational(&self, q: &BigRational) -> QPoly {
        QPoly::constant(q.clone())
    }

    fn beta(&self) -> QPoly {
        self.reduce(&QPoly::x())
    }

    fn add(&self, a: &QPoly, b: &QPoly) -> QPoly {
        a.add(b)
    }

    fn sub(&self, a: &QPoly, b: &QPoly) -> QPoly {
        a.sub(b)
    }

    fn mul(&self, a: &QPoly, b: &QPoly) -> QPoly {
        self.reduce(&a.mul(b))
    }

    fn neg(&self, a: &QPoly) -> QPoly {
        a.neg()
    }

    fn inv(&mut self, a: &QPoly) -> Result<QPoly> {
        loop {
            let r = self.reduce(a);
            if r.is_zero() {
                return Err(Error::InvalidInput("division by zero in Q(β)".into()));
            }
            let (g, s) = r.gcd_cofactor(&self.modulus);
            if g.degree() == Some(0) {
                return Ok(self.reduce(&s));
            }
            if self.vanishes(&g) {
                return Err(Error::InvalidInput("division by zero in Q(β)".into()));
            }
            self.split(&g);
        }
    }

    fn sign(&mut self, a: &QPoly, what: &str) -> Result<Ordering> {
        let r = self.reduce(a);
        if r.is_zero() {
            return Ok(Ordering::Equal);
        }
        if let Some(c) = (r.degree() == Some(0)).then(|| r.coeff(0)) {
            return Ok(c.cmp(&BigRational::zero()));
        }
        loop {
            if let Some(s) = self.eval(&r).sign() {
                return Ok(s);
            }
            if self.bits >= self.cap {
                break;
            }
            self.bits = (self.bits * 2).min(self.cap);
        }
        // Straddling at the cap: either the value is zero, or more
        // precision will settle it.
        let g = r.gcd(&self.modulus);
        if g.degree().unwrap_or(0) > 0 && self.vanishes(&g) {
            self.split(&g);
            return Ok(Ordering::Equal);
        }
        let mut probe = self.root.clone();
        let s = probe.sign_of(&r);
        if s.is_eq() {
            return Err(Error::Inconsistent(format!("sign of {what}")));
        }
        self.root = probe;
        Ok(s)
    }

    fn enclose(&mut self, a: &QPoly) -> RatInterval {
        let r = self.reduce(a);
        self.eval(&r)
    }

    fn exact(&self) -> bool {
        true
    }

    fn to_point(&mut self, a: &QPoly) -> PointValue {
        let value = self.reduce(a);
        let enclosure = self.eval(&value);
        PointValue::Algebraic { value, enclosure }
    }

    fn embed_point(&self, p: &PointValue) -> Result<QPoly> {
        match p {
            PointValue::Rational(q) => Ok(QPoly::constant(q.clone())),
            PointValue::Algebraic { value, .. } => Ok(self.reduce(value)),
            PointValue::Interval(_) => Err(Error::Unsupported(
                "an interval point cannot be used with an algebraic base".into(),
            )),
        }
    }
}

/// Plain interval arithmetic on a fixed enclosure.
pub(crate) struct EnclosureBase {
    beta: RatInterval,
    bits: u32,
}

impl EnclosureBase {
    pub(crate) fn new(beta: RatInterval, cap: u32) -> Self {
        EnclosureBase { beta, bits: cap }
    }

    fn round(&self, iv: RatInterval) -> RatInterval {
        iv.round_outward(self.bits)
    }
}

impl Base for EnclosureBase {
    type Elem = RatInterval;

    fn rational(&self, q: &BigRational) -> RatInterval {
        RatInterval::point(q.clone())
    }

    fn beta(&self) -> RatInterval {
        self.beta.clone()
    }

    fn add(&self, a: &RatInterval, b: &RatInterval) -> RatInterval {
        self.round(a.add(b))
    }

    fn sub(&self, a: &RatInterval, b: &RatInterval) -> RatInterval {
        self.round(a.sub(b))
    }

    fn mul(&self, a: &RatInterval, b: &RatInterval) -> RatInterval {
        self.round(a.mul(b))
    }

    fn inv(&mut self, a: &RatInterval) -> Result<RatInterval> {
        RatInterval::point(BigRational::one())
            .div(a)
            .map(|iv| self.round(iv))
            .ok_or_else(|| Error::Precision {
                quantity: "a divisor enclosing zero".into(),
                bits: self.bits,
            })
    }

    fn sign(&mut self, a: &RatInterval, what: &str) -> Result<Ordering> {
        a.sign().ok_or_else(|| Error::Precision {
            quantity: what.to_string(),
            bits: self.bits,
        })
    }

    fn enclose(&mut self, a: &RatInterval) -> RatInterval {
        a.clone()
    }

    fn exact(&self) -> bool {
        false
    }

    fn to_point(&mut self, a: &RatInterval) -> PointValue {
        if a.is_point() {
            PointValue::Rational(a.lo.clone())
        } else {
            PointValue::Interval(a.clone())
        }
    }

    fn embed_point(&self, p: &PointValue) -> Result<RatInterval> {
        match p {
            PointValue::Rational(q) => Ok(RatInterval::point(q.clone())),
            PointValue::Interval(iv) => Ok(iv.clone()),
            PointValue::Algebraic { value, .. } => {
                Ok(self.round(value.eval_interval(&self.beta, Some(self.bits))))
            }
        }
    }
}

/// Runs `$body` with `$b` bound to the arithmetic matching `$beta`.
macro_rules! with_base {
    ($beta:expr, |$b:ident| $body:expr) => {{
        let beta: &$crate::beta::BetaValue = $beta;
        match beta.kind() {
            $crate::beta::BetaKind::Rational(q) => {
                let $b = &mut $crate::arith::RationalBase::new(q.clone());
                $body
            }
            $crate::beta::BetaKind::Algebraic(r) => {
                let $b = &mut $crate::arith::AlgebraicBase::new(r.clone(), beta.precision_cap());
                $body
            }
            $crate::beta::BetaKind::Enclosure(iv) => {
                let $b = &mut $crate::arith::EnclosureBase::new(iv.clone(), beta.precision_cap());
                $body
            }
        }
    }};
}
pub(crate) use with_base;

#[allow(dead_code)]
pub(crate) fn kind_name(beta: &BetaValue) -> &'static str {
    match beta.kind() {
        BetaKind::Rational(_) => "rational",
        BetaKind::Algebraic(_) => "algebraic",
        BetaKind::Enclosure(_) => "enclosure",
    }
}
