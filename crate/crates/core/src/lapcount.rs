//! Cylinder sets of `T_{-β}` and the lap numbers `L_{β,n}`, `L'_{β,n}`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::arith::{with_base, Base};
use crate::beta::{BetaKind, BetaValue, PointValue};
use crate::digits::{Digit, DigitWord};
use crate::dynamics::{left_end, right_end, to_digit};
use crate::error::{Error, Result};

/// Upper limit on `count · n` during refinement.
pub const BLOWUP_GUARD: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CylinderStatus {
    Empty,
    Point,
    Positive,
}

/// The set of points whose expansion starts with `label`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderInterval {
    pub label: DigitWord,
    pub lo: PointValue,
    pub hi: PointValue,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub status: CylinderStatus,
}

impl CylinderInterval {
    pub fn summary(&self, digits: usize) -> CylinderSummary {
        CylinderSummary {
            label: self.label.to_string(),
            lo: self.lo.to_decimal(digits),
            hi: self.hi.to_decimal(digits),
            lo_closed: self.lo_closed,
            hi_closed: self.hi_closed,
            status: self.status,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CylinderSummary {
    pub label: String,
    pub lo: String,
    pub hi: String,
    pub lo_closed: bool,
    pub hi_closed: bool,
    pub status: CylinderStatus,
}

#[derive(Debug, Clone)]
struct Ends<E> {
    lo: E,
    hi: E,
    lo_closed: bool,
    hi_closed: bool,
}

#[derive(Debug, Clone)]
struct Cell<E> {
    label: Vec<Digit>,
    /// The image under `T^n`.
    image: Ends<E>,
    /// `T^n(x) = s·x + c` on the cell.
    s: E,
    c: E,
    /// Whether `s > 0`.
    s_pos: bool,
}

fn intersect<B: Base>(
    b: &mut B,
    x: &Ends<B::Elem>,
    y: &Ends<B::Elem>,
) -> Result<Option<Ends<B::Elem>>> {
    let (lo, lo_closed) = match b.cmp(&x.lo, &y.lo, "cylinder endpoints")? {
        Ordering::Less => (y.lo.clone(), y.lo_closed),
        Ordering::Greater => (x.lo.clone(), x.lo_closed),
        Ordering::Equal => (x.lo.clone(), x.lo_closed && y.lo_closed),
    };
    let (hi, hi_closed) = match b.cmp(&x.hi, &y.hi, "cylinder endpoints")? {
        Ordering::Less => (x.hi.clone(), x.hi_closed),
        Ordering::Greater => (y.hi.clone(), y.hi_closed),
        Ordering::Equal => (x.hi.clone(), x.hi_closed && y.hi_closed),
    };
    Ok(match b.cmp(&lo, &hi, "cylinder endpoints")? {
        Ordering::Greater => None,
        Ordering::Equal if !(lo_closed && hi_closed) => None,
        _ => Some(Ends {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }),
    })
}

struct Refiner<B: Base> {
    domain: Ends<B::Elem>,
    shift: B::Elem,
    inv_beta: B::Elem,
    max_digit: Digit,
}

impl<B: Base> Refiner<B> {
    fn new(b: &mut B) -> Result<Self> {
        let lo = left_end(b)?;
        let hi = right_end(b)?;
        let shift = b.neg(&lo);
        let beta = b.beta();
        let inv_beta = b.inv(&beta)?;
        let max_digit = to_digit(b.floor(&beta, "β")?)?;
        Ok(Refiner {
            domain: Ends {
                lo,
                hi,
                lo_closed: true,
                hi_closed: false,
            },
            shift,
            inv_beta,
            max_digit,
        })
    }

    fn root(&self, b: &B) -> Cell<B::Elem> {
        Cell {
            label: Vec::new(),
            image: self.domain.clone(),
            s: b.one(),
            c: b.zero(),
            s_pos: true,
        }
    }

    /// `{x : ⌊β/(β+1) - βx⌋ = d}` within the domain.
    fn digit_set(&self, b: &mut B, d: Digit) -> Result<Option<Ends<B::Elem>>> {
        let d = b.rational(&BigRational::from_integer(BigInt::from(d)));
        let lo = b.mul(&b.sub(&b.sub(&self.shift, &d), &b.one()), &self.inv_beta);
        let hi = b.mul(&b.sub(&self.shift, &d), &self.inv_beta);
        let set = Ends {
            lo,
            hi,
            lo_closed: false,
            hi_closed: true,
        };
        intersect(b, &set, &self.domain)
    }

    fn child(&self, b: &mut B, cell: &Cell<B::Elem>, d: Digit) -> Result<Option<Cell<B::Elem>>> {
        let Some(set) = self.digit_set(b, d)? else {
            return Ok(None);
        };
        let Some(k) = intersect(b, &cell.image, &set)? else {
            return Ok(None);
        };
        let beta = b.beta();
        let dd = b.int(d as i64);
        let map = |b: &B, v: &B::Elem| b.sub(&b.neg(&b.mul(&beta, v)), &dd);
        let image = Ends {
            lo: map(b, &k.hi),
            hi: map(b, &k.lo),
            lo_closed: k.hi_closed,
            hi_closed: k.lo_closed,
        };
        let mut label = cell.label.clone();
        label.push(d);
        Ok(Some(Cell {
            label,
            image,
            s: b.neg(&b.mul(&beta, &cell.s)),
            c: map(b, &cell.c),
            s_pos: !cell.s_pos,
        }))
    }

    fn children(&self, b: &mut B, cell: &Cell<B::Elem>) -> Result<Vec<Cell<B::Elem>>> {
        let mut out = Vec::new();
        for d in 0..=self.max_digit {
            if let Some(c) = self.child(b, cell, d)? {
                out.push(c);
            }
        }
        Ok(out)
    }

    /// The cylinder in `x` coordinates.
    fn finish(&self, b: &mut B, cell: &Cell<B::Elem>) -> Result<CylinderInterval> {
        let inv_s = b.inv(&cell.s)?;
        let pre = |b: &B, v: &B::Elem| b.mul(&b.sub(v, &cell.c), &inv_s);
        let (lo, hi, lo_closed, hi_closed) = if cell.s_pos {
            (
                pre(b, &cell.image.lo),
                pre(b, &cell.image.hi),
                cell.image.lo_closed,
                cell.image.hi_closed,
            )
        } else {
            (
                pre(b, &cell.image.hi),
                pre(b, &cell.image.lo),
                cell.image.hi_closed,
                cell.image.lo_closed,
            )
        };
        let status = match b.cmp(&lo, &hi, "cylinder endpoints")? {
            Ordering::Equal => CylinderStatus::Point,
            _ => CylinderStatus::Positive,
        };
        Ok(CylinderInterval {
            label: DigitWord::new(cell.label.clone()),
            lo: b.to_point(&lo),
            hi: b.to_point(&hi),
            lo_closed,
            hi_closed,
            status,
        })
    }

    fn is_point(&self, b: &mut B, cell: &Cell<B::Elem>) -> Result<bool> {
        Ok(b.cmp(&cell.image.lo, &cell.image.hi, "cylinder endpoints")? == Ordering::Equal)
    }
}

fn require_exact(beta: &BetaValue) -> Result<()> {
    if let BetaKind::Enclosure(_) = beta.kind() {
        return Err(Error::Unsupported(
            "cylinders need a rational base or one with a defining polynomial".into(),
        ));
    }
    Ok(())
}

/// Refuses a level whose cells could exceed the guard, before building it.
fn guard(cells: usize, max_digit: Digit, n: usize) -> Result<()> {
    let branches = usize::try_from(max_digit)
        .unwrap_or(usize::MAX)
        .saturating_add(1);
    if cells.saturating_mul(branches).saturating_mul(n) > BLOWUP_GUARD {
        return Err(Error::Resource(format!(
            "up to {cells} × {branches} cylinders at length {n} exceed the refinement guard"
        )));
    }
    Ok(())
}

/// The non-empty cylinders of length `n`, ordered by label.
pub fn cylinders(beta: &BetaValue, n: usize) -> Result<Vec<CylinderInterval>> {
    require_exact(beta)?;
    if n == 0 {
        return Err(Error::InvalidInput(
            "cylinder length must be at least 1".into(),
        ));
    }
    with_base!(beta, |b| {
        let r = Refiner::new(b)?;
        let mut level = vec![r.root(b)];
        for j in 1..=n {
            guard(level.len(), r.max_digit, j)?;
            let mut next = Vec::new();
            for cell in &level {
                next.extend(r.children(b, cell)?);
            }
            level = next;
        }
        level.sort_by(|x, y| x.label.cmp(&y.label));
        level.iter().map(|c| r.finish(b, c)).collect()
    })
}

/// The cylinder of one label; `Empty` when no point has that expansion.
pub fn cylinder_of(beta: &BetaValue, label: &[Digit]) -> Result<CylinderInterval> {
    require_exact(beta)?;
    with_base!(beta, |b| {
        let r = Refiner::new(b)?;
        let mut cell = r.root(b);
        for &d in label {
            if d > r.max_digit {
                return Ok(empty(b, label));
            }
            match r.child(b, &cell, d)? {
                Some(c) => cell = c,
                None => return Ok(empty(b, label)),
            }
        }
        r.finish(b, &cell)
    })
}

fn empty<B: Base>(b: &mut B, label: &[Digit]) -> CylinderInterval {
    let z = b.zero();
    CylinderInterval {
        label: DigitWord::new(label.to_vec()),
        lo: b.to_point(&z),
        hi: b.to_point(&z),
        lo_closed: false,
        hi_closed: false,
        status: CylinderStatus::Empty,
    }
}

/// `(L_{β,n}, L'_{β,n})`: the number of non-empty cylinders of length `n`,
/// and of those with positive length.
pub fn lap_numbers(beta: &BetaValue, n: usize) -> Result<(usize, usize)> {
    lap_number_table(beta, n)?
        .pop()
        .ok_or_else(|| Error::InvalidInput("cylinder length must be at least 1".into()))
}

/// `(L_{β,j}, L'_{β,j})` for `j = 1..=n` in one pass.
pub fn lap_number_table(beta: &BetaValue, n: usize) -> Result<Vec<(usize, usize)>> {
    require_exact(beta)?;
    with_base!(beta, |b| {
        let r = Refiner::new(b)?;
        let mut level = vec![r.root(b)];
        let mut out = Vec::with_capacity(n);
        for j in 1..=n {
            guard(level.len(), r.max_digit, j)?;
            let mut next = Vec::new();
            for cell in &level {
                next.extend(r.children(b, cell)?);
            }
            let mut points = 0;
            for c in &next {
                if r.is_point(b, c)? {
                    points += 1;
                }
            }
            out.push((next.len(), next.len() - points));
            level = next;
        }
        Ok(out)
    })
}

/// `(1/n) log L'_{β,n}`.
pub fn entropy_estimate(beta: &BetaValue, n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidInput("entropy estimate needs n >= 2".into()));
    }
    let (_, positive) = lap_numbers(beta, n)?;
    Ok((positive as f64).ln() / n as f64)
}
