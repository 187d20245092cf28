mod common;

use std::cmp::Ordering;
use std::time::{Duration, Instant};

use negbeta::dynamics::{pn_trace_at_beta, RationalEndpointDigits};
use negbeta::solver::{pn_critical_points, Extremum, JnInterval, SolveMethod};
use negbeta::{
    alt_cmp, alt_cmp_prefix, jn_refine, pn_trace, solve_beta, solve_beta_prefix, BetaValue, Digit,
    Error, EvPeriodicSeq, PointValue, SolveOptions, VerdictStatus,
};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn seq(s: &str) -> EvPeriodicSeq {
    s.parse().unwrap()
}

fn inside(outer: &JnInterval, inner: &JnInterval) -> bool {
    let (mut olo, mut ohi) = (outer.lo.clone(), outer.hi.clone());
    let (mut ilo, mut ihi) = (inner.lo.clone(), inner.hi.clone());
    let lo_ok = match olo.cmp_root(&mut ilo) {
        Ordering::Less => true,
        Ordering::Equal => outer.lo_closed || !inner.lo_closed,
        Ordering::Greater => false,
    };
    let hi_ok = match ihi.cmp_root(&mut ohi) {
        Ordering::Less => true,
        Ordering::Equal => outer.hi_closed || !inner.hi_closed,
        Ordering::Greater => false,
    };
    lo_ok && hi_ok
}

fn member(j: &JnInterval, beta: &BetaValue) -> bool {
    let mut b = beta.as_root().expect("exact base");
    let (mut lo, mut hi) = (j.lo.clone(), j.hi.clone());
    let lo_ok = match lo.cmp_root(&mut b) {
        Ordering::Less => true,
        Ordering::Equal => j.lo_closed,
        Ordering::Greater => false,
    };
    let hi_ok = match b.cmp_root(&mut hi) {
        Ordering::Less => true,
        Ordering::Equal => j.hi_closed,
        Ordering::Greater => false,
    };
    lo_ok && hi_ok
}

#[test]
fn jn_sets_are_nested_and_contain_the_base() {
    let vs: Vec<_> = common::verdicts(3)
        .into_iter()
        .filter(|v| v.status == VerdictStatus::Valid)
        .collect();
    for v in vs.iter().step_by(3) {
        let prefix = v.sequence.prefix(6);
        let js = jn_refine(prefix.as_slice(), 6, 64).unwrap();
        assert_eq!(js.len(), 6);
        for w in js.windows(2) {
            assert!(
                inside(&w[0], &w[1]),
                "{}: {} not inside {}",
                v.sequence,
                w[1],
                w[0]
            );
        }
        let beta = v.beta_value.as_ref().unwrap();
        for j in &js {
            assert!(member(j, beta), "{}: base outside {j}", v.sequence);
        }
    }
}

#[test]
fn trace_at_solved_base_stays_in_unit_interval() {
    for v in common::verdicts(3)
        .into_iter()
        .filter(|v| v.status == VerdictStatus::Valid)
    {
        let beta = v.beta_value.as_ref().unwrap();
        let t = pn_trace_at_beta(v.sequence.prefix(40).as_slice(), beta).unwrap();
        for (j, p) in t.values.iter().enumerate() {
            let e = p.enclosure();
            let (lo, hi) = (e.lo.to_f64().unwrap(), e.hi.to_f64().unwrap());
            assert!(
                hi > 0.0 && lo <= 1.0 + 1e-12,
                "{}: P_{j} in [{lo}, {hi}]",
                v.sequence
            );
        }
    }
}

#[test]
fn prefixes_of_rational_bases_round_trip() {
    for b in [q(9, 5), q(5, 2), q(33, 10)] {
        let w: Vec<Digit> = RationalEndpointDigits::new(&b).take(40).collect();
        let r = solve_beta_prefix(&w, &SolveOptions::default()).unwrap();
        assert!(r.beta.encloses(&b), "{b}");
        assert!(
            r.beta.width() <= q(1, 100_000_000),
            "{b}: width {}",
            r.beta.width()
        );
        assert_eq!(r.method, SolveMethod::BisectOrder);
    }
}

#[test]
fn known_bases() {
    let cases = [
        ("1 (0)", 1.618_033_988_749_895),
        ("1 0 0 (1)", 1.324_717_957_244_746),
        ("(2)", 2.0),
    ];
    for (s, want) in cases {
        let r = solve_beta(&seq(s), &SolveOptions::default()).unwrap();
        assert_eq!(r.method, SolveMethod::PolyRoot);
        assert!(r.beta.width() <= q(1, 10_000_000_000));
        assert!((r.beta.to_f64() - want).abs() < 1e-12, "{s}");
    }
}

#[test]
fn expansion_order_never_reverses_base_order() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let a1: i64 = rng.gen_range(1..4);
        let den: i64 = rng.gen_range(2..200);
        let x = q(a1 * den + rng.gen_range(1..den), den);
        let y = q(a1 * den + rng.gen_range(1..den), den);
        let (lo, hi) = match x.cmp(&y) {
            Ordering::Less => (x, y),
            Ordering::Greater => (y, x),
            Ordering::Equal => continue,
        };
        let wl: Vec<Digit> = RationalEndpointDigits::new(&lo).take(64).collect();
        let wh: Vec<Digit> = RationalEndpointDigits::new(&hi).take(64).collect();
        assert_ne!(
            alt_cmp_prefix(&wl, &wh),
            Some(Ordering::Greater),
            "{lo} < {hi}"
        );
    }
}

#[test]
fn base_order_follows_expansion_order() {
    let vs: Vec<_> = common::verdicts(3)
        .into_iter()
        .filter(|v| v.status == VerdictStatus::Valid)
        .collect();
    for x in &vs {
        for y in &vs {
            let bx = x.beta_value.as_ref().unwrap();
            let by = y.beta_value.as_ref().unwrap();
            assert_eq!(bx.cmp_exact(by), Some(alt_cmp(&x.sequence, &y.sequence)));
        }
    }
}

#[test]
fn p4_has_an_interior_minimum() {
    let prefix = [1, 0, 0, 1];
    let x = PointValue::ratio(2, 1);
    assert_eq!(
        pn_trace(&prefix, &x).unwrap().values[4],
        PointValue::ratio(4, 1)
    );
    let cps = pn_critical_points(&prefix, 4, &q(1, 1), &q(2, 1));
    let minima: Vec<_> = cps.iter().filter(|c| c.kind == Extremum::Minimum).collect();
    assert_eq!(minima.len(), 1);
    assert!((minima[0].at.to_f64() - 1.261).abs() < 1e-2);
}

#[test]
fn j3_right_end_solves_the_cubic() {
    let js = jn_refine(&[1, 0, 0, 1], 3, 64).unwrap();
    let x = js[2].hi.to_f64();
    assert!((x.powi(3) - 2.0 * x * x + x - 1.0).abs() < 1e-9);
    assert!((x - 1.755).abs() < 1e-3);
}

#[test]
fn non_genuine_sequences_still_get_their_polynomial_root() {
    let r = solve_beta(&seq("(2 1 0)"), &SolveOptions::default()).unwrap();
    assert!(r.beta.encloses(&q(2, 1)));
}

#[test]
fn deadline_is_honoured() {
    let opts = SolveOptions {
        deadline: Some(Instant::now() - Duration::from_millis(1)),
        ..SolveOptions::default()
    };
    let err = solve_beta(&seq("1 0 0 (1)"), &opts).unwrap_err();
    assert!(matches!(err, Error::DeadlineExceeded));
}

#[test]
fn bad_inputs_are_refused() {
    let opts = SolveOptions::default();
    assert!(solve_beta(&seq("0 (1)"), &opts).is_err());
    assert!(solve_beta(&seq("1 (2)"), &opts).is_err());
    assert!(solve_beta_prefix(&[], &opts).is_err());
}
