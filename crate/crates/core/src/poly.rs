//! Univariate polynomials with rational coefficients, Sturm sequences and
//! real root isolation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::interval::{pow2, RatInterval};

/// Coefficients from the constant term upward; no trailing zeros.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

fn rat(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_ints<I: Into<BigInt> + Clone>(c: &[I]) -> Self {
        QPoly::new(c.iter().cloned().map(rat).collect())
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        QPoly::from_ints(&[0, 1])
    }

    pub fn monomial(c: BigRational, k: usize) -> Self {
        let mut v = vec![BigRational::zero(); k];
        v.push(c);
        QPoly::new(v)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, q: &BigRational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c * q).collect())
    }

    pub fn add_constant(&self, q: &BigRational) -> QPoly {
        self.add(&QPoly::constant(q.clone()))
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        QPoly::new(v)
    }

    /// Multiplication by `x^k`.
    pub fn shift_up(&self, k: usize) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![BigRational::zero(); k];
        v.extend_from_slice(&self.coeffs);
        QPoly { coeffs: v }
    }

    pub fn pow(&self, e: usize) -> QPoly {
        (0..e).fold(QPoly::one(), |acc, _| acc.mul(self))
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat(i as u64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation over an interval, rounding outward to `bits` after
    /// each step when given.
    pub fn eval_interval(&self, x: &RatInterval, bits: Option<u32>) -> RatInterval {
        let mut acc = RatInterval::point(BigRational::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add_scalar(c);
            if let Some(b) = bits {
                acc = acc.round_outward(b);
            }
        }
        acc
    }

    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        self.eval(x).cmp(&BigRational::zero())
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let l = self.leading().recip();
        self.scale(&l)
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.leading().recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = r.last().expect("non-empty") * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        if self.degree() < d.degree() {
            return self.clone();
        }
        self.div_rem(d).1
    }

    /// Exact quotient; the remainder is discarded.
    pub fn div_exact(&self, d: &QPoly) -> QPoly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `(g, s)` with `g = gcd(self, m)` monic and `s * self ≡ g (mod m)`.
    pub fn gcd_cofactor(&self, m: &QPoly) -> (QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), m.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        let l = r0.leading().recip();
        (r0.scale(&l), s0.scale(&l))
    }

    /// Removes repeated factors.
    pub fn squarefree(&self) -> QPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).monic()
    }

    /// Divides out every factor `x`.
    pub fn strip_zero_roots(&self) -> QPoly {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        QPoly::new(self.coeffs[k..].to_vec())
    }

    /// Integer coefficients with content 1 and positive leading coefficient.
    pub fn to_primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * rat(den.clone())).to_integer())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().expect("non-zero").is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter().map(|c| c / &content * &sign).collect()
    }

    pub fn primitive(&self) -> QPoly {
        QPoly::new(self.to_primitive_integer().into_iter().map(rat).collect())
    }

    /// Upper bound on the absolute value of every real root (Cauchy).
    pub fn root_bound(&self) -> BigRational {
        let l = self.leading().abs();
        let m = self
            .coeffs
            .iter()
            .take(self.coeffs.len().saturating_sub(1))
            .map(|c| c.abs() / &l)
            .max()
            .unwrap_or_else(BigRational::zero);
        m + BigRational::one()
    }

    pub fn to_f64_eval(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = i == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Sturm sequence of a polynomial.
pub fn sturm_sequence(p: &QPoly) -> Vec<QPoly> {
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq.last().expect("non-empty").is_zero() {
        let n = seq.len();
        let r = seq[n - 2].rem(&seq[n - 1]).neg();
        seq.push(r);
    }
    seq.pop();
    seq
}

fn sign_changes_at(seq: &[QPoly], x: &BigRational) -> usize {
    let signs: Vec<Ordering> = seq
        .iter()
        .map(|p| p.sign_at(x))
        .filter(|s| *s != Ordering::Equal)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in `(a, b]`.
pub fn count_roots(seq: &[QPoly], a: &BigRational, b: &BigRational) -> usize {
    sign_changes_at(seq, a).saturating_sub(sign_changes_at(seq, b))
}

/// Isolating intervals for the distinct real roots of `p` in `(a, b]`, in
/// increasing order. Each is either an exact rational point or an open-ended
/// interval on whose endpoints the squarefree part changes sign.
pub fn isolate_roots(p: &QPoly, a: &BigRational, b: &BigRational) -> Vec<RealRoot> {
    let sf = p.squarefree();
    if sf.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let seq = sturm_sequence(&sf);
    let mut out = Vec::new();
    let mut stack = vec![(a.clone(), b.clone())];
    while let Some((lo, hi)) = stack.pop() {
        let n = count_roots(&seq, &lo, &hi);
        if n == 0 {
            continue;
        }
        if n == 1 {
            if sf.degree() == Some(1) {
                let r = -sf.coeff(0) / sf.coeff(1);
                out.push(RealRoot::exact(sf.clone(), r));
                continue;
            }
            if sf.sign_at(&hi).is_eq() {
                out.push(RealRoot::exact(sf.clone(), hi));
                continue;
            }
            if sf.sign_at(&lo).is_ne() {
                out.push(RealRoot {
                    poly: sf.clone(),
                    enclosure: RatInterval::new(lo, hi),
                });
                continue;
            }
        }
        let mid = (&lo + &hi) / rat(2);
        stack.push((mid.clone(), hi));
        stack.push((lo, mid));
    }
    out.sort_by(|x, y| x.enclosure.lo.cmp(&y.enclosure.lo));
    out
}

/// A real root of a squarefree polynomial together with an isolating
/// interval.
///
/// Invariant: either the interval is a single point at which the polynomial
/// vanishes, or the polynomial takes opposite non-zero signs at the two
/// endpoints and has exactly one root in between.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealRoot {
    poly: QPoly,
    enclosure: RatInterval,
}

impl RealRoot {
    pub fn exact(poly: QPoly, at: BigRational) -> Self {
        RealRoot {
            poly,
            enclosure: RatInterval::point(at),
        }
    }

    /// Builds an isolated root from an interval known to contain exactly one
    /// root of `poly` in `(lo, hi]`. Returns `None` otherwise.
    pub fn isolate(poly: &QPoly, lo: BigRational, hi: BigRational) -> Option<Self> {
        let roots = isolate_roots(poly, &lo, &hi);
        match roots.len() {
            1 => roots.into_iter().next(),
            _ => None,
        }
    }

    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    pub fn enclosure(&self) -> &RatInterval {
        &self.enclosure
    }

    pub fn exact_value(&self) -> Option<&BigRational> {
        self.enclosure.is_point().then_some(&self.enclosure.lo)
    }

    /// One bisection step.
    pub fn bisect(&mut self) {
        if self.enclosure.is_point() {
            return;
        }
        let mid = self.enclosure.midpoint();
        let s_mid = self.poly.sign_at(&mid);
        if s_mid.is_eq() {
            self.enclosure = RatInterval::point(mid);
            return;
        }
        let s_lo = self.poly.sign_at(&self.enclosure.lo);
        if s_lo == s_mid {
            self.enclosure.lo = mid;
        } else {
            self.enclosure.hi = mid;
        }
    }

    /// Refines until the width is at most `2^-bits`.
    pub fn refine_to(&mut self, bits: u32) {
        let target = pow2(-(bits as i64));
        while self.enclosure.width() > target {
            self.bisect();
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure.to_f64_mid()
    }

    /// Exact comparison of two real algebraic numbers.
    pub fn cmp_root(&mut self, other: &mut RealRoot) -> Ordering {
        let g = self.poly.gcd(&other.poly);
        let mut maybe_equal =
            g.degree().unwrap_or(0) > 0 && self.vanishes(&g) && other.vanishes(&g);
        if maybe_equal {
            self.poly = g.clone();
            other.poly = g.clone();
        }
        let seq = if maybe_equal {
            sturm_sequence(&g)
        } else {
            Vec::new()
        };
        loop {
            if self.enclosure.hi < other.enclosure.lo {
                return Ordering::Less;
            }
            if other.enclosure.hi < self.enclosure.lo {
                return Ordering::Greater;
            }
            if self.enclosure.is_point() && other.enclosure.is_point() {
                return self.enclosure.lo.cmp(&other.enclosure.lo);
            }
            if maybe_equal {
                // Both are roots of `g`; they coincide iff the hull of the
                // enclosures holds a single root of `g`.
                let lo = (&self.enclosure.lo).min(&other.enclosure.lo).clone();
                let hi = (&self.enclosure.hi).max(&other.enclosure.hi).clone();
                let n = count_roots(&seq, &lo, &hi) + usize::from(g.sign_at(&lo).is_eq());
                if n == 1 {
                    return Ordering::Equal;
                }
                maybe_equal = n > 1;
            }
            if self.enclosure.width() >= other.enclosure.width() {
                self.bisect();
            } else {
                other.bisect();
            }
        }
    }

    /// Whether a divisor `g` of the defining polynomial vanishes here.
    fn vanishes(&self, g: &QPoly) -> bool {
        match self.exact_value() {
            Some(v) => g.sign_at(v).is_eq(),
            None => {
                let seq = sturm_sequence(g);
                count_roots(&seq, &self.enclosure.lo, &self.enclosure.hi) > 0
            }
        }
    }

    /// Sign of `q` at this root, decided exactly.
    pub fn sign_of(&mut self, q: &QPoly) -> Ordering {
        if let Some(v) = self.exact_value() {
            return q.sign_at(v);
        }
        let r = q.rem(&self.poly);
        if r.is_zero() {
            return Ordering::Equal;
        }
        let g = r.gcd(&self.poly);
        if g.degree().unwrap_or(0) > 0 && self.vanishes(&g) {
            return Ordering::Equal;
        }
        loop {
            if let Some(s) = r.eval_interval(&self.enclosure, None).sign() {
                return s;
            }
            self.bisect();
            if let Some(v) = self.exact_value() {
                return r.sign_at(v);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x+2) / (x-1)
        let a = QPoly::from_ints(&[-2, 1, 1]);
        let b = QPoly::from_ints(&[-1, 1]);
        let (quo, r) = a.div_rem(&b);
        assert!(r.is_zero());
        assert_eq!(quo, QPoly::from_ints(&[2, 1]));
        let g = a.gcd(&QPoly::from_ints(&[-1, 0, 1]));
        assert_eq!(g, b);
    }

    #[test]
    fn cofactor_inverts_modulo() {
        let m = QPoly::from_ints(&[-1, -1, 1]); // x^2 - x - 1
        let a = QPoly::from_ints(&[1, 1]); // x + 1
        let (g, s) = a.gcd_cofactor(&m);
        assert_eq!(g, QPoly::one());
        assert_eq!(a.mul(&s).rem(&m), QPoly::one());
    }

    #[test]
    fn squarefree_and_primitive() {
        let p = QPoly::from_ints(&[1, -2, 1]).mul(&QPoly::from_ints(&[3, 1]));
        assert_eq!(p.squarefree(), QPoly::from_ints(&[-3, 2, 1]));
        let h = QPoly::new(vec![q(1, 2), q(-1, 3)]);
        assert_eq!(
            h.to_primitive_integer(),
            vec![BigInt::from(-3), BigInt::from(2)]
        );
    }

    #[test]
    fn display() {
        assert_eq!(QPoly::from_ints(&[-1, -1, 0, 1]).to_string(), "x^3 - x - 1");
        assert_eq!(QPoly::from_ints(&[2, 0, -3]).to_string(), "-3x^2 + 2");
    }

    #[test]
    fn sturm_counts_and_isolation() {
        // (x - 1/2)(x - 2)(x - 3)
        let p = QPoly::from_ints(&[-1, 2])
            .mul(&QPoly::from_ints(&[-2, 1]))
            .mul(&QPoly::from_ints(&[-3, 1]));
        let s = sturm_sequence(&p.squarefree());
        assert_eq!(count_roots(&s, &q(0, 1), &q(4, 1)), 3);
        assert_eq!(count_roots(&s, &q(1, 1), &q(2, 1)), 1);
        let roots = isolate_roots(&p, &q(0, 1), &q(4, 1));
        assert_eq!(roots.len(), 3);
        let vals: Vec<f64> = roots
            .into_iter()
            .map(|mut r| {
                r.refine_to(30);
                r.to_f64()
            })
            .collect();
        for (v, e) in vals.iter().zip([0.5, 2.0, 3.0]) {
            assert!((v - e).abs() < 1e-8, "{v} vs {e}");
        }
    }

    #[test]
    fn isolation_with_root_on_right_end() {
        // roots 1 and 2, the second at the right end of (0, 2]
        let p = QPoly::from_ints(&[2, -3, 1]);
        let roots = isolate_roots(&p, &q(0, 1), &q(2, 1));
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[1].exact_value(), Some(&q(2, 1)));
    }

    #[test]
    fn golden_ratio_root() {
        let p = QPoly::from_ints(&[-1, -1, 1]);
        let mut r = RealRoot::isolate(&p, q(1, 1), q(2, 1)).unwrap();
        r.refine_to(60);
        assert!((r.to_f64() - 1.618_033_988_749_895).abs() < 1e-15);
        // sign of x - 3/2 and x^2 - x - 1 at the root
        assert_eq!(
            r.sign_of(&QPoly::new(vec![q(-3, 2), q(1, 1)])),
            Ordering::Greater
        );
        assert_eq!(r.sign_of(&QPoly::from_ints(&[-1, -1, 1])), Ordering::Equal);
        // x^3 - 2x - 1 = (x + 1)(x^2 - x - 1)
        assert_eq!(
            r.sign_of(&QPoly::from_ints(&[-1, -2, 0, 1])),
            Ordering::Equal
        );
    }

    #[test]
    fn compare_roots() {
        let phi = QPoly::from_ints(&[-1, -1, 1]);
        let plastic = QPoly::from_ints(&[-1, -1, 0, 1]);
        let mut a = RealRoot::isolate(&phi, q(1, 1), q(2, 1)).unwrap();
        let mut b = RealRoot::isolate(&plastic, q(1, 1), q(2, 1)).unwrap();
        assert_eq!(a.cmp_root(&mut b), Ordering::Greater);
        // the same number through a different polynomial
        let phi2 = phi.mul(&QPoly::from_ints(&[1, 1]));
        let mut c = RealRoot::isolate(&phi2, q(3, 2), q(2, 1)).unwrap();
        assert_eq!(a.cmp_root(&mut c), Ordering::Equal);
    }
}
