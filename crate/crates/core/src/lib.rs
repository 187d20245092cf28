//! Expansions in negative real bases.
//!
//! For a base `β > 1` every point of `[-β/(β+1), 1/(β+1))` has a digit
//! expansion `x = Σ ε_n (-β)^{-n}` produced by iterating
//! `T(x) = -βx - ⌊β/(β+1) - βx⌋`. This crate generates such expansions
//! exactly, decides which digit sequences occur, and works backwards from
//! the expansion of the left endpoint to the base.
//!
//! ```
//! use negbeta::{solve_beta, validate, EvPeriodicSeq, SolveOptions, ValidateOptions, VerdictStatus};
//!
//! let a: EvPeriodicSeq = "1 0 0 (1)".parse()?;
//! let beta = solve_beta(&a, &SolveOptions::default())?.beta;
//! assert!((beta.to_f64() - 1.324_717_957_244_746).abs() < 1e-12);
//!
//! let v = validate(&"(2 1 0)".parse()?, &ValidateOptions::default())?;
//! assert_eq!(v.status, VerdictStatus::Invalid);
//! # Ok::<(), negbeta::Error>(())
//! ```
//!
//! Bases are rational, real algebraic (a polynomial with an isolating
//! interval) or known only through an enclosure; see [`BetaValue`]. The
//! first two are handled exactly throughout.

pub mod admissibility;
mod arith;
pub mod beta;
pub mod digits;
pub mod dynamics;
pub mod error;
pub mod interval;
pub mod lapcount;
pub mod morphism;
pub mod poly;
pub mod solver;

pub use admissibility::{
    check_ak1, check_ak2, check_shift_condition, is_admissible, is_admissible_for_base,
    is_admissible_prefix, min_odd_period, validate, AdmissibilityBounds, ValidateOptions, Verdict,
    VerdictStatus,
};
pub use beta::{BetaValue, PointValue};
pub use digits::{
    alt_cmp, alt_cmp_prefix, block_parse, Digit, DigitWord, EvPeriodicSeq, SequenceInput,
};
pub use dynamics::{
    eval_series, expand, left_endpoint, left_endpoint_expansion, pn_trace, step_t, step_t_tilde,
};
pub use error::{Error, Result};
pub use lapcount::{cylinders, entropy_estimate, lap_numbers, CylinderStatus};
pub use morphism::{cmp_with_u, gamma_base, phi_apply, u_prefix};
pub use solver::{
    defining_polynomial, jn_refine, order_compare, solve_beta, solve_beta_prefix, SolveOptions,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/sequences.md")]
    mod sequences {}
    #[doc = include_str!("../../../book/src/boundary-word.md")]
    mod boundary_word {}
    #[doc = include_str!("../../../book/src/expansions.md")]
    mod expansions {}
    #[doc = include_str!("../../../book/src/validation.md")]
    mod validation {}
    #[doc = include_str!("../../../book/src/solving.md")]
    mod solving {}
    #[doc = include_str!("../../../book/src/laps.md")]
    mod laps {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
