//! Recovering the base from the expansion of its left endpoint.

use std::cmp::Ordering;
use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::admissibility::check_shift_condition;
use crate::arith::{AlgebraicBase, Base};
use crate::beta::{BetaValue, DEFAULT_PRECISION_CAP};
use crate::digits::{alt_cmp, alt_cmp_equal_length, alt_cmp_streams, Digit, EvPeriodicSeq};
use crate::dynamics::{left_end, pn_polynomials, right_end, series_value, RationalEndpointDigits};
use crate::error::{Error, Result};
use crate::interval::pow2;
use crate::morphism::{cmp_with_u, cmp_word_with_u, DEFAULT_U_DEPTH};
use crate::poly::{count_roots, isolate_roots, sturm_sequence, QPoly, RealRoot};

const START_DEPTH: usize = 64;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Target width of the enclosure.
    pub tol: BigRational,
    /// Most digits generated for one comparison.
    pub max_depth: usize,
    pub precision_bits: u32,
    pub u_depth: usize,
    pub deadline: Option<Instant>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: pow2(-40),
            max_depth: 4096,
            precision_bits: 256,
            u_depth: DEFAULT_U_DEPTH,
            deadline: None,
        }
    }
}

impl SolveOptions {
    /// Least `t` with `2^-t <= tol`.
    fn tol_bits(&self) -> u32 {
        let mut t = 0u32;
        while pow2(-i64::from(t)) > self.tol {
            t += 1;
        }
        t
    }

    fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::DeadlineExceeded),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SolveMethod {
    BisectOrder,
    JnRefine,
    PolyRoot,
}

impl fmt::Display for SolveMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveMethod::BisectOrder => "BISECT_ORDER",
            SolveMethod::JnRefine => "JN_REFINE",
            SolveMethod::PolyRoot => "POLY_ROOT",
        })
    }
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub beta: BetaValue,
    /// Largest number of digits generated for a single comparison.
    pub depth_used: usize,
    pub method: SolveMethod,
}

fn bracket(a1: Digit, t: u32) -> Result<(BigRational, BigRational)> {
    if a1 == 0 {
        return Err(Error::InvalidInput(
            "first digit 0: no base > 1 has this expansion".into(),
        ));
    }
    let lo = if a1 == 1 {
        BigRational::one() + pow2(-i64::from(t))
    } else {
        BigRational::from_integer(a1.into())
    };
    Ok((lo, BigRational::from_integer((a1 + 1).into())))
}

/// Compares the expansion at `m` with `a` using at most `depth` digits.
fn cmp_at(m: &BigRational, a: &EvPeriodicSeq, depth: usize) -> Option<Ordering> {
    if m.is_integer() {
        let d: Digit = m.to_integer().try_into().ok()?;
        let own = EvPeriodicSeq::periodic(vec![d]).ok()?;
        return Some(alt_cmp(&own, a));
    }
    alt_cmp_streams(RationalEndpointDigits::new(m).take(depth), a.digits())
}

fn ordered_cmp(
    m: &BigRational,
    a: &EvPeriodicSeq,
    opts: &SolveOptions,
    used: &mut usize,
) -> Result<Ordering> {
    let mut depth = START_DEPTH.min(opts.max_depth);
    loop {
        opts.check_deadline()?;
        *used = (*used).max(depth);
        if let Some(o) = cmp_at(m, a, depth) {
            return Ok(o);
        }
        if depth >= opts.max_depth {
            return Err(Error::DepthExhausted {
                depth,
                hint: "the expansion at a bisection point agrees with the input; for periodic input the polynomial root is used instead".into(),
            });
        }
        depth = (depth * 2).min(opts.max_depth);
    }
}

/// The unique `β > 1` whose left endpoint has expansion `a`.
///
/// Requires `a` to satisfy the shift condition and to exceed `u`. The
/// enclosure found by order bisection is sharpened to an exact algebraic
/// number through [`defining_polynomial`]. If the input is not the
/// expansion of any base (but satisfies the two conditions), bisection may
/// settle elsewhere; the root is then chosen by the conditions on the tails.
pub fn solve_beta(a: &EvPeriodicSeq, opts: &SolveOptions) -> Result<SolveResult> {
    let shift = check_shift_condition(a);
    if !shift.pass {
        return Err(Error::InvalidInput(format!(
            "shift condition fails at k = {}",
            shift.witness.unwrap_or(0)
        )));
    }
    match cmp_with_u(a, opts.u_depth) {
        Some(Ordering::Greater) => {}
        Some(_) => return Err(Error::InvalidInput("sequence is not above u".into())),
        None => {
            return Err(Error::DepthExhausted {
                depth: opts.u_depth,
                hint: "sequence agrees with u; raise the u depth".into(),
            })
        }
    }
    let t = opts.tol_bits();
    let (mut lo, mut hi) = bracket(a.digit(1), t)?;
    let mut used = 0;
    let mut bisected = true;
    while &hi - &lo > opts.tol {
        let m = (&lo + &hi) / BigRational::from_integer(2.into());
        match ordered_cmp(&m, a, opts, &mut used) {
            Ok(Ordering::Less) => lo = m,
            Ok(Ordering::Greater) => hi = m,
            Ok(Ordering::Equal) => {
                lo = m.clone();
                hi = m;
            }
            Err(Error::DepthExhausted { .. }) => {
                bisected = false;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let poly = defining_polynomial(a);
    let cap = DEFAULT_PRECISION_CAP.max(opts.precision_bits);
    let chosen = if bisected {
        select_root(&poly, a, &lo, &hi, opts)?
    } else {
        None
    };
    let root = match chosen {
        Some(r) => r,
        None => {
            let (blo, bhi) = bracket(a.digit(1), t)?;
            select_root(&poly, a, &BigRational::one(), &bhi.max(blo), opts)?.ok_or_else(|| {
                Error::InvariantViolation(format!(
                    "no root of {poly} satisfies the tail conditions"
                ))
            })?
        }
    };
    let beta = BetaValue::from_root(root)?
        .with_precision_cap(cap)
        .refined(t);
    Ok(SolveResult {
        beta,
        depth_used: used,
        method: SolveMethod::PolyRoot,
    })
}

/// Among the roots of `poly` in `[lo, hi]` (excluding 1), the one at which
/// every tail of `a` has its value in `[-β/(β+1), 1/(β+1)]`.
fn select_root(
    poly: &QPoly,
    a: &EvPeriodicSeq,
    lo: &BigRational,
    hi: &BigRational,
    opts: &SolveOptions,
) -> Result<Option<RealRoot>> {
    let sf = poly.squarefree();
    let mut roots = isolate_roots(&sf, lo, hi);
    if lo > &BigRational::one() && sf.sign_at(lo).is_eq() {
        roots.insert(0, RealRoot::exact(sf.clone(), lo.clone()));
    }
    let mut found: Option<RealRoot> = None;
    for r in roots {
        opts.check_deadline()?;
        if r.enclosure().hi <= BigRational::one() {
            continue;
        }
        if tails_in_interval(&r, a, opts.precision_bits)? {
            if found.is_some() {
                return Err(Error::InvariantViolation(format!(
                    "two roots of {poly} satisfy the tail conditions"
                )));
            }
            found = Some(r);
        }
    }
    Ok(found)
}

fn tails_in_interval(r: &RealRoot, a: &EvPeriodicSeq, bits: u32) -> Result<bool> {
    let mut b = AlgebraicBase::new(r.clone(), DEFAULT_PRECISION_CAP.max(bits));
    if let Some(v) = r.exact_value() {
        if v <= &BigRational::one() {
            return Ok(false);
        }
    }
    let l = left_end(&mut b)?;
    let rt = right_end(&mut b)?;
    let whole = series_value(&mut b, a)?;
    if b.cmp(&whole, &l, "series value against the left endpoint")? != Ordering::Equal {
        return Ok(false);
    }
    for (_, tail) in a.distinct_tails() {
        let v = series_value(&mut b, &tail)?;
        if b.cmp(&v, &l, "tail against the left endpoint")? == Ordering::Less
            || b.cmp(&v, &rt, "tail against the right endpoint")? == Ordering::Greater
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The bases whose left-endpoint expansion starts with `w`, as an
/// enclosure. Its width is at most `tol` plus the width of that set of
/// bases, which shrinks as `w` grows.
pub fn solve_beta_prefix(w: &[Digit], opts: &SolveOptions) -> Result<SolveResult> {
    let Some(&a1) = w.first() else {
        return Err(Error::InvalidInput("empty prefix".into()));
    };
    if cmp_word_with_u(w) == Some(Ordering::Less) {
        return Err(Error::InvalidInput("prefix lies below u".into()));
    }
    let t = opts.tol_bits();
    let (mut lo, mut hi) = bracket(a1, t)?;
    let n = w.len();
    let half = BigRational::from_integer(2.into());
    let cmp = |m: &BigRational| -> Ordering {
        let e: Vec<Digit> = RationalEndpointDigits::new(m).take(n).collect();
        alt_cmp_equal_length(&e, w)
    };
    // first find a point inside the set, then both of its ends
    let mut inside: Option<BigRational> = None;
    while &hi - &lo > opts.tol {
        opts.check_deadline()?;
        let m = (&lo + &hi) / &half;
        match cmp(&m) {
            Ordering::Less => lo = m,
            Ordering::Greater => hi = m,
            Ordering::Equal => {
                inside = Some(m);
                break;
            }
        }
    }
    if let Some(m) = inside {
        let (mut l1, mut h1) = (lo.clone(), m.clone());
        while &h1 - &l1 > opts.tol {
            opts.check_deadline()?;
            let c = (&l1 + &h1) / &half;
            if cmp(&c) == Ordering::Less {
                l1 = c;
            } else {
                h1 = c;
            }
        }
        let (mut l2, mut h2) = (m, hi.clone());
        while &h2 - &l2 > opts.tol {
            opts.check_deadline()?;
            let c = (&l2 + &h2) / &half;
            if cmp(&c) == Ordering::Greater {
                h2 = c;
            } else {
                l2 = c;
            }
        }
        lo = l1;
        hi = h2;
    }
    let beta = BetaValue::enclosure(lo.clone(), hi.clone())
        .or_else(|_| BetaValue::rational(lo))?
        .with_precision_cap(opts.precision_bits.max(32));
    Ok(SolveResult {
        beta,
        depth_used: n,
        method: SolveMethod::BisectOrder,
    })
}

/// An integer polynomial vanishing at the base of an eventually periodic
/// expansion, obtained by clearing denominators in the series identity.
/// Factors `x`, `x + 1` and `x - 1` are removed; the result is primitive with
/// positive leading coefficient.
pub fn defining_polynomial(a: &EvPeriodicSeq) -> QPoly {
    // in y = -x: sum a_j y^-j = y / (1 - y)
    let int = |d: Digit| BigRational::from_integer(BigInt::from(d));
    let p = a.preperiod_len();
    let q = a.period_len();
    let horner = |ds: &[Digit]| {
        ds.iter().fold(QPoly::zero(), |acc, &d| {
            acc.shift_up(1).add_constant(&int(d))
        })
    };
    let y = QPoly::x();
    let yq1 = y.pow(q).sub(&QPoly::one());
    let num = horner(a.preperiod()).mul(&yq1).add(&horner(a.period()));
    let f = num.mul(&QPoly::one().sub(&y)).sub(&y.pow(p + 1).mul(&yq1));
    let mut f = f.reflect().strip_zero_roots();
    // roots at -1 and 1 are never bases
    for lin in [QPoly::from_ints(&[1, 1]), QPoly::from_ints(&[-1, 1])] {
        loop {
            let (quo, r) = f.div_rem(&lin);
            if !r.is_zero() || f.degree().unwrap_or(0) == 0 {
                break;
            }
            f = quo;
        }
    }
    let mut f = f.primitive();
    if f.leading().is_negative() {
        f = f.neg();
    }
    f
}

/// `alt_cmp` read as a statement about bases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderComparison {
    #[serde(serialize_with = "ser_ordering")]
    pub ordering: Ordering,
    pub statement: String,
}

fn ser_ordering<S: serde::Serializer>(o: &Ordering, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(match o {
        Ordering::Less => "LESS",
        Ordering::Equal => "EQUAL",
        Ordering::Greater => "GREATER",
    })
}

/// For two left-endpoint expansions, the base order follows the
/// alternating order of the expansions.
pub fn order_compare(a: &EvPeriodicSeq, b: &EvPeriodicSeq) -> OrderComparison {
    let ordering = alt_cmp(a, b);
    let statement = match ordering {
        Ordering::Less => "a <_alt b ⇒ beta_a < beta_b",
        Ordering::Equal => "a =_alt b ⇒ beta_a = beta_b",
        Ordering::Greater => "a >_alt b ⇒ beta_a > beta_b",
    }
    .to_string();
    OrderComparison {
        ordering,
        statement,
    }
}

/// `J_n = {x > 1 : P_j(x) ∈ [0, 1] for j <= n}` for one `n`.
#[derive(Debug, Clone)]
pub struct JnInterval {
    pub n: usize,
    pub lo: RealRoot,
    pub hi: RealRoot,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl JnInterval {
    /// Whether the infimum exceeds 1.
    pub fn compact(&self) -> bool {
        self.lo.exact_value() != Some(&BigRational::one())
    }

    /// Enclosures of both ends refined to `2^-bits`.
    pub fn refined(
        &self,
        bits: u32,
    ) -> (crate::interval::RatInterval, crate::interval::RatInterval) {
        let (mut lo, mut hi) = (self.lo.clone(), self.hi.clone());
        lo.refine_to(bits);
        hi.refine_to(bits);
        (lo.enclosure().clone(), hi.enclosure().clone())
    }
}

impl fmt::Display for JnInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.refined(40);
        write!(
            f,
            "J_{} = {}{:.12}, {:.12}{}",
            self.n,
            if self.lo_closed { '[' } else { '(' },
            lo.to_f64_mid(),
            hi.to_f64_mid(),
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

#[derive(Debug, Clone)]
struct Component {
    lo: RealRoot,
    hi: RealRoot,
    lo_closed: bool,
    hi_closed: bool,
}

fn cmp_points(a: &RealRoot, b: &RealRoot) -> Ordering {
    let (mut a, mut b) = (a.clone(), b.clone());
    a.cmp_root(&mut b)
}

fn component_contains(c: &Component, x: &RealRoot) -> bool {
    let lo = cmp_points(&c.lo, x);
    let hi = cmp_points(x, &c.hi);
    (lo == Ordering::Less || (lo == Ordering::Equal && c.lo_closed))
        && (hi == Ordering::Less || (hi == Ordering::Equal && c.hi_closed))
}

fn unit_at(p: &QPoly, x: &RealRoot) -> bool {
    let mut r = x.clone();
    let s0 = r.sign_of(p);
    let s1 = r.sign_of(&p.add_constant(&-BigRational::one()));
    s0 != Ordering::Less && s1 != Ordering::Greater
}

/// A rational strictly between `a < b`.
fn between(a: &RealRoot, b: &RealRoot) -> BigRational {
    let (mut a, mut b) = (a.clone(), b.clone());
    while a.enclosure().hi >= b.enclosure().lo {
        if a.enclosure().width() >= b.enclosure().width() && !a.enclosure().is_point() {
            a.bisect();
        } else {
            b.bisect();
        }
    }
    (&a.enclosure().hi + &b.enclosure().lo) / BigRational::from_integer(2.into())
}

fn rational_root(q: BigRational) -> RealRoot {
    RealRoot::exact(QPoly::new(vec![-q.clone(), BigRational::one()]), q)
}

/// `J_1, …, J_n` for the given prefix, each checked to be a single
/// interval.
pub fn jn_refine(prefix: &[Digit], n: usize, precision_bits: u32) -> Result<Vec<JnInterval>> {
    if n == 0 || n > prefix.len() {
        return Err(Error::InvalidInput(format!(
            "n = {n} outside 1..={}",
            prefix.len()
        )));
    }
    let polys = pn_polynomials(&prefix[..n]);
    let top = BigRational::from_integer(BigInt::from(prefix[0]) + 2);
    let mut comps = vec![Component {
        lo: rational_root(BigRational::one()),
        hi: rational_root(top),
        lo_closed: false,
        hi_closed: false,
    }];
    let mut out = Vec::with_capacity(n);
    for (j, p) in polys.iter().enumerate().skip(1) {
        let lo_q = comps[0].lo.enclosure().lo.clone();
        let hi_q = comps.last().expect("non-empty").hi.enclosure().hi.clone();
        let mut pts: Vec<RealRoot> = Vec::new();
        for c in &comps {
            pts.push(c.lo.clone());
            pts.push(c.hi.clone());
        }
        for q in [p.clone(), p.add_constant(&-BigRational::one())] {
            if q.is_zero() {
                continue;
            }
            if q.sign_at(&lo_q).is_eq() {
                pts.push(RealRoot::exact(q.squarefree(), lo_q.clone()));
            }
            pts.extend(isolate_roots(&q, &lo_q, &hi_q));
        }
        pts.sort_by(cmp_points);
        pts.dedup_by(|b, a| cmp_points(a, b) == Ordering::Equal);
        let member = |x: &RealRoot| comps.iter().any(|c| component_contains(c, x)) && unit_at(p, x);
        // alternating point / gap membership
        let mut flags: Vec<bool> = Vec::with_capacity(2 * pts.len());
        for (i, x) in pts.iter().enumerate() {
            flags.push(member(x));
            if let Some(y) = pts.get(i + 1) {
                let s = rational_root(between(x, y));
                flags.push(member(&s));
            }
        }
        // runs of members; even indices are points, odd ones gaps
        let mut next: Vec<Component> = Vec::new();
        let mut i = 0;
        while i < flags.len() {
            if !flags[i] {
                i += 1;
                continue;
            }
            let s = i;
            while i + 1 < flags.len() && flags[i + 1] {
                i += 1;
            }
            let e = i;
            next.push(Component {
                lo: pts[s / 2].clone(),
                hi: pts[e.div_ceil(2)].clone(),
                lo_closed: s % 2 == 0,
                hi_closed: e % 2 == 0,
            });
            i += 1;
        }
        if next.len() != 1 {
            return Err(Error::InvariantViolation(format!(
                "J_{j} has {} components",
                next.len()
            )));
        }
        comps = next;
        let c = &comps[0];
        let (mut lo, mut hi) = (c.lo.clone(), c.hi.clone());
        lo.refine_to(precision_bits);
        hi.refine_to(precision_bits);
        out.push(JnInterval {
            n: j,
            lo,
            hi,
            lo_closed: c.lo_closed,
            hi_closed: c.hi_closed,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Extremum {
    Minimum,
    Maximum,
    Flat,
}

#[derive(Debug, Clone)]
pub struct CriticalPoint {
    pub at: RealRoot,
    pub kind: Extremum,
}

/// Critical points of `p` in `(lo, hi)`, classified by the sign change of
/// the derivative.
pub fn critical_points(p: &QPoly, lo: &BigRational, hi: &BigRational) -> Vec<CriticalPoint> {
    let d = p.derivative();
    if d.is_zero() {
        return Vec::new();
    }
    let sf = d.squarefree();
    let seq = sturm_sequence(&sf);
    let mut roots: Vec<RealRoot> = isolate_roots(&d, lo, hi)
        .into_iter()
        .filter(|r| r.exact_value() != Some(hi))
        .collect();
    let mut out = Vec::new();
    for r in roots.iter_mut() {
        // shrink until the enclosure holds no other root of p'
        let (mut l, mut h) = (r.enclosure().lo.clone(), r.enclosure().hi.clone());
        if let Some(v) = r.exact_value().cloned() {
            let mut eps = pow2(-8);
            loop {
                l = &v - &eps;
                h = &v + &eps;
                if count_roots(&seq, &l, &h) == 1 {
                    break;
                }
                eps /= BigRational::from_integer(2.into());
            }
        }
        let left = d.sign_at(&l);
        let right = d.sign_at(&h);
        let kind = match (left, right) {
            (Ordering::Less, Ordering::Greater) => Extremum::Minimum,
            (Ordering::Greater, Ordering::Less) => Extremum::Maximum,
            _ => Extremum::Flat,
        };
        let mut at = r.clone();
        at.refine_to(64);
        out.push(CriticalPoint { at, kind });
    }
    out
}

/// Critical points of `P_j` for the given digits on `(lo, hi)`.
pub fn pn_critical_points(
    prefix: &[Digit],
    j: usize,
    lo: &BigRational,
    hi: &BigRational,
) -> Vec<CriticalPoint> {
    let polys = pn_polynomials(&prefix[..j.min(prefix.len())]);
    critical_points(&polys[polys.len() - 1], lo, hi)
}
