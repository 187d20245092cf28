//! The substitution `φ(1) = 100`, `φ(0) = 1`, its fixed point `u`, and the
//! small bases `γ_k`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::beta::BetaValue;
use crate::digits::{alt_cmp_streams, Digit, DigitWord, EvPeriodicSeq};
use crate::error::{Error, Result};
use crate::interval::pow2;
use crate::poly::QPoly;

/// Largest word `phi_apply` will build.
pub const PHI_SIZE_CAP: usize = 1 << 24;

/// Default number of digits compared against `u`.
pub const DEFAULT_U_DEPTH: usize = 256;

/// A finite word over `{0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MorphismWord(Vec<u8>);

impl MorphismWord {
    pub fn new(symbols: Vec<u8>) -> Result<Self> {
        if let Some(s) = symbols.iter().find(|&&s| s > 1) {
            return Err(Error::InvalidInput(format!("symbol {s} is not 0 or 1")));
        }
        Ok(MorphismWord(symbols))
    }

    pub fn one() -> Self {
        MorphismWord(vec![1])
    }

    pub fn zero() -> Self {
        MorphismWord(vec![0])
    }

    pub fn symbols(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_digits(&self) -> DigitWord {
        DigitWord::new(self.0.iter().map(|&s| Digit::from(s)).collect())
    }
}

impl fmt::Display for MorphismWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_digits().fmt(f)
    }
}

impl FromStr for MorphismWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!(
                    "unexpected {other:?} in a word over {{0, 1}}"
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(MorphismWord(symbols))
    }
}

fn phi_once(w: &[u8], cap: usize) -> Result<Vec<u8>> {
    let ones = w.iter().filter(|&&s| s == 1).count();
    let len = w.len() + 2 * ones;
    if len > cap {
        return Err(Error::Resource(format!(
            "φ-image of length {len} exceeds the cap of {cap} symbols"
        )));
    }
    let mut out = Vec::with_capacity(len);
    for &s in w {
        if s == 1 {
            out.extend_from_slice(&[1, 0, 0]);
        } else {
            out.push(1);
        }
    }
    Ok(out)
}

/// `φ^n(w)`.
pub fn phi_apply(w: &MorphismWord, n: usize) -> Result<MorphismWord> {
    let mut cur = w.0.clone();
    for _ in 0..n {
        cur = phi_once(&cur, PHI_SIZE_CAP)?;
    }
    Ok(MorphismWord(cur))
}

/// `(|φ^n(1)|, |φ^n(0)|)`, saturating.
pub fn phi_lengths(n: usize) -> (u64, u64) {
    let (mut one, mut zero) = (1u64, 1u64);
    for _ in 0..n {
        (one, zero) = (one.saturating_add(zero.saturating_mul(2)), one);
    }
    (one, zero)
}

/// The first `n` digits of `u = 1 0 0 1 1 1 0 0 1 …`.
///
/// # Panics
///
/// If `n` exceeds [`PHI_SIZE_CAP`].
pub fn u_prefix(n: usize) -> DigitWord {
    assert!(n <= PHI_SIZE_CAP, "prefix of u longer than the size cap");
    let mut w = vec![1u8];
    while w.len() < n {
        w = phi_once(&w, usize::MAX).expect("no cap");
    }
    w.truncate(n);
    DigitWord::new(w.into_iter().map(Digit::from).collect())
}

/// Alternating comparison of `s` with `u` on the first `max_depth` digits;
/// `None` when they agree that far.
pub fn cmp_with_u(s: &EvPeriodicSeq, max_depth: usize) -> Option<Ordering> {
    let u = u_prefix(max_depth.min(PHI_SIZE_CAP));
    alt_cmp_streams(s.digits(), u.iter().copied())
}

/// Like [`cmp_with_u`] for a finite word, which is compared on its length.
pub fn cmp_word_with_u(w: &[Digit]) -> Option<Ordering> {
    let u = u_prefix(w.len());
    alt_cmp_streams(w.iter().copied(), u.iter().copied())
}

/// `g_k = ⌊2^{k+1}/3⌋` and `γ_k`, the root `> 1` of `x^{g_k+1} = x + 1`.
#[derive(Debug, Clone)]
pub struct GammaBase {
    pub k: u32,
    pub g: u64,
    pub value: BetaValue,
}

pub fn g_k(k: u32) -> Result<u64> {
    if !(1..=40).contains(&k) {
        return Err(Error::InvalidInput(format!("k = {k} outside 1..=40")));
    }
    Ok((1u64 << (k + 1)) / 3)
}

/// `γ_k` with an enclosure of width at most `2^{1-precision_bits}`.
pub fn gamma_base(k: u32, precision_bits: u32) -> Result<GammaBase> {
    if precision_bits < 8 {
        return Err(Error::InvalidInput("precision below 8 bits".into()));
    }
    let g = g_k(k)?;
    let deg = usize::try_from(g + 1)
        .map_err(|_| Error::Resource(format!("degree {} too large", g + 1)))?;
    if deg > 1 << 16 {
        return Err(Error::Resource(format!("degree {deg} too large")));
    }
    let poly = QPoly::monomial(BigRational::one(), deg).sub(&QPoly::from_ints(&[1, 1]));
    // the root lies in (1, 2]; the polynomial is negative at 1
    let value = BetaValue::algebraic(
        &poly,
        BigRational::one(),
        BigRational::from_integer(BigInt::from(2)),
    )?;
    let value = value.refined(precision_bits.saturating_sub(1));
    debug_assert!(value.width() <= pow2(1 - i64::from(precision_bits)));
    Ok(GammaBase { k, g, value })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> MorphismWord {
        s.parse().unwrap()
    }

    #[test]
    fn substitution() {
        assert_eq!(phi_apply(&w("1"), 0).unwrap(), w("1"));
        assert_eq!(phi_apply(&w("1"), 1).unwrap(), w("100"));
        assert_eq!(phi_apply(&w("1"), 2).unwrap(), w("10011"));
        assert!(phi_apply(&w("1"), 40).is_err());
        assert!(MorphismWord::new(vec![0, 2]).is_err());
    }

    #[test]
    fn u_prefixes() {
        assert_eq!(u_prefix(1).to_string(), "1");
        assert_eq!(u_prefix(9).to_string(), "1 0 0 1 1 1 0 0 1");
        assert_eq!(
            u_prefix(21).to_string(),
            "1 0 0 1 1 1 0 0 1 0 0 1 0 0 1 1 1 0 0 1 1"
        );
    }

    #[test]
    fn against_u() {
        let s = |t: &str| t.parse::<EvPeriodicSeq>().unwrap();
        assert_eq!(cmp_with_u(&s("1 (0)"), 256), Some(Ordering::Greater));
        assert_eq!(cmp_with_u(&s("(2)"), 256), Some(Ordering::Greater));
        assert_eq!(cmp_with_u(&s("(0 1)"), 256), Some(Ordering::Less));
        // agrees with u on its first nine digits
        assert_eq!(cmp_with_u(&s("1 0 0 1 1 1 0 0 1 (0)"), 9), None);
    }

    #[test]
    fn gammas() {
        let g1 = gamma_base(1, 64).unwrap();
        assert_eq!(g1.g, 1);
        assert!((g1.value.to_f64() - 1.618_033_988_749_895).abs() < 1e-12);
        let g2 = gamma_base(2, 64).unwrap();
        assert_eq!(g2.g, 2);
        assert!((g2.value.to_f64() - 1.324_717_957_244_746).abs() < 1e-12);
        let g3 = gamma_base(3, 64).unwrap();
        assert_eq!(g3.g, 5);
        assert!((g3.value.to_f64() - 1.134_724_138).abs() < 1e-8);
        assert!(gamma_base(1, 4).is_err());
        assert!(gamma_base(0, 64).is_err());
    }
}
