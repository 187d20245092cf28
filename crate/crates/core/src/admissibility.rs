//! Which digit sequences are expansions, and which sequences are the
//! expansion of the left endpoint for some base.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::arith::{with_base, Base};
use crate::beta::{BetaSummary, BetaValue};
use crate::digits::{
    alt_cmp, alt_cmp_equal_length, alt_cmp_streams, block_parse, BlockParse, Digit, DigitWord,
    EvPeriodicSeq,
};
use crate::dynamics::{left_endpoint_orbit, right_end, series_value, EndpointOrbit};
use crate::error::{Error, Result};
use crate::morphism::cmp_with_u;
use crate::solver::{solve_beta, SolveOptions};

/// Whether `a` is purely periodic with an odd period, and the least such
/// period `2ℓ + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OddPeriodInfo {
    pub is_odd_periodic: bool,
    pub ell: Option<usize>,
}

pub fn min_odd_period(a: &EvPeriodicSeq) -> OddPeriodInfo {
    // every period of a purely periodic sequence is a multiple of the
    // primitive one
    let q = a.period_len();
    if a.is_purely_periodic() && q % 2 == 1 {
        OddPeriodInfo {
            is_odd_periodic: true,
            ell: Some(q / 2),
        }
    } else {
        OddPeriodInfo {
            is_odd_periodic: false,
            ell: None,
        }
    }
}

/// Result of a check that either passes or names the least failing index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Check {
    pub pass: bool,
    pub witness: Option<usize>,
}

impl Check {
    fn pass() -> Self {
        Check {
            pass: true,
            witness: None,
        }
    }

    fn fail(k: usize) -> Self {
        Check {
            pass: false,
            witness: Some(k),
        }
    }
}

/// The strict lower bound on tails of admissible sequences.
pub fn lower_bound(a: &EvPeriodicSeq) -> Result<EvPeriodicSeq> {
    let info = min_odd_period(a);
    match info.ell {
        None => Ok(a.prepend(&[0])),
        Some(ell) => {
            let mut w = vec![0];
            w.extend_from_slice(&a.period()[..2 * ell]);
            let last = a.period()[2 * ell];
            if last == 0 {
                return Err(Error::Malformed(
                    "odd period ends in 0; the lower bound would need digit -1".into(),
                ));
            }
            w.push(last - 1);
            EvPeriodicSeq::periodic(w)
        }
    }
}

/// Whether `b` is an expansion for the base whose left endpoint expands to
/// `a`: every tail `b_k b_{k+1} ⋯` lies between the lower bound (strictly)
/// and `a`.
pub fn is_admissible(b: &EvPeriodicSeq, a: &EvPeriodicSeq) -> Result<Check> {
    let lower = lower_bound(a)?;
    let n = b.preperiod_len() + b.period_len();
    for k in 1..=n {
        let t = b.shift(k - 1);
        if alt_cmp(&t, a) == Ordering::Greater || alt_cmp(&t, &lower) != Ordering::Greater {
            return Ok(Check::fail(k));
        }
    }
    Ok(Check::pass())
}

/// [`is_admissible`] against the expansion of `beta`'s left endpoint.
///
/// When the orbit does not close within `max_depth` steps, each tail of `b`
/// is compared with the computed digits; an eventually periodic `b` differs
/// from an aperiodic bound at a finite position, and `DepthExhausted` is
/// returned if that position lies beyond `max_depth`.
pub fn is_admissible_for_base(
    b: &EvPeriodicSeq,
    beta: &BetaValue,
    max_depth: usize,
) -> Result<Check> {
    let w = match left_endpoint_orbit(beta, max_depth)? {
        EndpointOrbit::Periodic(a) => return is_admissible(b, &a),
        EndpointOrbit::Aperiodic(w) => w,
    };
    let undecided = || Error::DepthExhausted {
        depth: max_depth,
        hint: "; the tail agrees with the left-endpoint digits computed so far".into(),
    };
    let n = b.preperiod_len() + b.period_len();
    for k in 1..=n {
        let t = b.shift(k - 1);
        let upper = alt_cmp_streams(t.digits(), w.iter().copied()).ok_or_else(undecided)?;
        let lower = alt_cmp_streams(t.digits(), std::iter::once(0).chain(w.iter().copied()))
            .ok_or_else(undecided)?;
        if upper == Ordering::Greater || lower != Ordering::Greater {
            return Ok(Check::fail(k));
        }
    }
    Ok(Check::pass())
}

/// Prefixes of the two bounds, for checking finite words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityBounds {
    pub upper: DigitWord,
    pub lower: DigitWord,
}

impl AdmissibilityBounds {
    pub fn from_sequence(a: &EvPeriodicSeq, n: usize) -> Result<Self> {
        Ok(AdmissibilityBounds {
            upper: a.prefix(n),
            lower: lower_bound(a)?.prefix(n),
        })
    }

    /// Bounds for a base, from its first `n` left-endpoint digits.
    pub fn for_base(beta: &BetaValue, n: usize) -> Result<Self> {
        match left_endpoint_orbit(beta, n)? {
            EndpointOrbit::Periodic(a) => AdmissibilityBounds::from_sequence(&a, n),
            EndpointOrbit::Aperiodic(w) => {
                let mut lower = vec![0];
                lower.extend_from_slice(&w[..n.saturating_sub(1)]);
                Ok(AdmissibilityBounds {
                    upper: w,
                    lower: DigitWord::new(lower),
                })
            }
        }
    }
}

/// Whether a finite word passes the bounds on all its suffixes, compared on
/// their own length with equality allowed. Necessary for the word to extend
/// to an admissible sequence.
pub fn is_admissible_prefix(w: &[Digit], bounds: &AdmissibilityBounds) -> Result<Check> {
    if bounds.upper.len() < w.len() || bounds.lower.len() < w.len() {
        return Err(Error::InvalidInput(format!(
            "bounds known to {} digits, word has {}",
            bounds.upper.len().min(bounds.lower.len()),
            w.len()
        )));
    }
    for k in 1..=w.len() {
        let t = &w[k - 1..];
        let m = t.len();
        if alt_cmp_equal_length(t, &bounds.upper[..m]) == Ordering::Greater
            || alt_cmp_equal_length(t, &bounds.lower[..m]) == Ordering::Less
        {
            return Ok(Check::fail(k));
        }
    }
    Ok(Check::pass())
}

/// `a_k a_{k+1} ⋯ <=_alt a` for every `k >= 2`; the witness is the least
/// failing `k`.
pub fn check_shift_condition(a: &EvPeriodicSeq) -> Check {
    let mut worst: Option<usize> = None;
    for (s, t) in a.distinct_tails() {
        if alt_cmp(&t, a) == Ordering::Greater {
            let k = s + 1;
            worst = Some(worst.map_or(k, |w| w.min(k)));
        }
    }
    match worst {
        Some(k) => Check::fail(k),
        None => Check::pass(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// A comparison with `u` was not settled within the depth limit.
    Undecided,
}

/// Outcome of a block-exclusion check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BlockCheck {
    pub status: CheckStatus,
    pub witness: Option<usize>,
}

fn block_scan(
    a: &EvPeriodicSeq,
    u_depth: usize,
    blocks: impl Fn(usize) -> Option<(Vec<Digit>, Vec<Digit>)>,
    counts: impl Fn(BlockParse) -> bool,
    guard: impl Fn(&[Digit], &[Digit]) -> Vec<Digit>,
) -> Result<BlockCheck> {
    let k_max = a.preperiod_len() + 2 * a.period_len();
    let mut undecided: Option<usize> = None;
    for k in 1..=k_max {
        let Some((x, y)) = blocks(k) else { continue };
        if !counts(block_parse(a, &x, &y)?) {
            continue;
        }
        let g = EvPeriodicSeq::periodic(guard(&x, &y))?;
        match cmp_with_u(&g, u_depth) {
            Some(Ordering::Greater) => {
                return Ok(BlockCheck {
                    status: CheckStatus::Fail,
                    witness: Some(k),
                })
            }
            Some(_) => {}
            None => {
                undecided.get_or_insert(k);
            }
        }
    }
    Ok(match undecided {
        Some(k) => BlockCheck {
            status: CheckStatus::Undecided,
            witness: Some(k),
        },
        None => BlockCheck {
            status: CheckStatus::Pass,
            witness: None,
        },
    })
}

/// `a` is not built from the blocks `a_1⋯a_k` and `a_1⋯a_{k-1}(a_k - 1)0`,
/// other than as the pure repetition of the first, whenever the repetition
/// of `a_1⋯a_k` lies above `u`.
pub fn check_ak1(a: &EvPeriodicSeq, u_depth: usize) -> Result<BlockCheck> {
    block_scan(
        a,
        u_depth,
        |k| {
            let ak = a.digit(k);
            if ak == 0 {
                return None;
            }
            let x = a.prefix(k).into_vec();
            let mut y = a.prefix(k - 1).into_vec();
            y.extend([ak - 1, 0]);
            Some((x, y))
        },
        |p| p == BlockParse::InOmegaLanguage,
        |x, _| x.to_vec(),
    )
}

/// `a` is not built from the blocks `a_1⋯a_k 0` and `a_1⋯a_{k-1}(a_k + 1)`
/// whenever the repetition of the second lies above `u`.
pub fn check_ak2(a: &EvPeriodicSeq, u_depth: usize) -> Result<BlockCheck> {
    block_scan(
        a,
        u_depth,
        |k| {
            let ak = a.digit(k);
            let mut x = a.prefix(k).into_vec();
            x.push(0);
            let mut y = a.prefix(k - 1).into_vec();
            y.push(ak.checked_add(1)?);
            Some((x, y))
        },
        |p| p != BlockParse::NotIn,
        |_, y| y.to_vec(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictStatus {
    Valid,
    Invalid,
    /// A comparison with `u` was not settled.
    Indeterminate,
    /// A tail came too close to `1/(β+1)` to be ruled out without an exact
    /// base.
    Suspect,
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictStatus::Valid => "VALID",
            VerdictStatus::Invalid => "INVALID",
            VerdictStatus::Indeterminate => "INDETERMINATE",
            VerdictStatus::Suspect => "SUSPECT",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UCheck {
    pub status: CheckStatus,
}

/// Every condition checked for a candidate expansion.
#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub sequence: EvPeriodicSeq,
    pub cond_shift: Check,
    pub cond_u: UCheck,
    pub cond_ak1: BlockCheck,
    pub cond_ak2: BlockCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<BetaSummary>,
    /// Least `k >= 1` with `Σ_j a_{k+j} (-β)^{-j} = 1/(β+1)`.
    pub tail_hit: Option<usize>,
    pub status: VerdictStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip)]
    pub beta_value: Option<BetaValue>,
}

#[derive(Debug, Clone)]
pub struct ValidateOptions {
    pub precision_bits: u32,
    pub u_depth: usize,
    pub solve: SolveOptions,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        let solve = SolveOptions::default();
        ValidateOptions {
            precision_bits: solve.precision_bits,
            u_depth: solve.u_depth,
            solve,
        }
    }
}

enum TailTest {
    Hit(usize),
    Clear,
    Near(usize),
}

fn tail_test(a: &EvPeriodicSeq, beta: &BetaValue) -> Result<TailTest> {
    with_base!(beta, |b| {
        let target = right_end(b)?;
        let exact = b.exact();
        let mut near = None;
        for (k, t) in a.distinct_tails() {
            let v = series_value(b, &t)?;
            let d = b.sub(&v, &target);
            match b.sign(&d, "tail minus 1/(β+1)") {
                Ok(Ordering::Equal) if exact => return Ok(TailTest::Hit(k)),
                Ok(Ordering::Equal) | Err(Error::Precision { .. }) => {
                    near.get_or_insert(k);
                }
                Ok(_) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(match near {
            Some(k) => TailTest::Near(k),
            None => TailTest::Clear,
        })
    })
}

/// Checks whether `a` is the expansion of the left endpoint for some base.
pub fn validate(a: &EvPeriodicSeq, opts: &ValidateOptions) -> Result<Verdict> {
    let cond_shift = check_shift_condition(a);
    let cond_u = UCheck {
        status: match cmp_with_u(a, opts.u_depth) {
            Some(Ordering::Greater) => CheckStatus::Pass,
            Some(_) => CheckStatus::Fail,
            None => CheckStatus::Undecided,
        },
    };
    let cond_ak1 = check_ak1(a, opts.u_depth)?;
    let cond_ak2 = check_ak2(a, opts.u_depth)?;
    let mut v = Verdict {
        sequence: a.clone(),
        cond_shift,
        cond_u,
        cond_ak1,
        cond_ak2,
        beta: None,
        tail_hit: None,
        status: VerdictStatus::Valid,
        reason: None,
        beta_value: None,
    };
    if !cond_shift.pass {
        v.status = VerdictStatus::Invalid;
        v.reason = Some(format!(
            "shift condition fails at k = {}",
            cond_shift.witness.unwrap_or(0)
        ));
        return Ok(v);
    }
    match cond_u.status {
        CheckStatus::Fail => {
            v.status = VerdictStatus::Invalid;
            v.reason = Some("sequence is not above u".into());
            return Ok(v);
        }
        CheckStatus::Undecided => {
            v.status = VerdictStatus::Indeterminate;
            v.reason = Some(format!("agrees with u on {} digits", opts.u_depth));
            return Ok(v);
        }
        CheckStatus::Pass => {}
    }

    let mut solve = opts.solve.clone();
    solve.u_depth = opts.u_depth;
    solve.precision_bits = opts.precision_bits;
    let beta = solve_beta(a, &solve)?.beta;
    let tails = tail_test(a, &beta)?;
    v.beta = Some(beta.summary(20));
    v.beta_value = Some(beta);

    let block_fail = [cond_ak1, cond_ak2]
        .iter()
        .find(|c| c.status == CheckStatus::Fail)
        .copied();
    let block_undecided = [cond_ak1, cond_ak2]
        .iter()
        .any(|c| c.status == CheckStatus::Undecided);

    match tails {
        TailTest::Hit(k) => {
            v.tail_hit = Some(k);
            if block_fail.is_none() && !block_undecided {
                return Err(Error::Inconsistent(format!(
                    "tail {k} equals 1/(β+1) but no block condition fails"
                )));
            }
        }
        TailTest::Clear => {
            if let Some(c) = block_fail {
                return Err(Error::Inconsistent(format!(
                    "block condition fails at k = {} but no tail equals 1/(β+1)",
                    c.witness.unwrap_or(0)
                )));
            }
        }
        TailTest::Near(k) => {
            if block_fail.is_none() {
                v.status = VerdictStatus::Suspect;
                v.reason = Some(format!("tail {k} is within the enclosure of 1/(β+1)"));
                return Ok(v);
            }
        }
    }
    if let Some(c) = block_fail {
        let which = if cond_ak1.status == CheckStatus::Fail {
            "first"
        } else {
            "second"
        };
        v.status = VerdictStatus::Invalid;
        v.reason = Some(format!(
            "{which} block condition fails at k = {}",
            c.witness.unwrap_or(0)
        ));
    } else if block_undecided {
        v.status = VerdictStatus::Indeterminate;
        v.reason = Some("a block comparison with u was not settled".into());
    }
    Ok(v)
}
