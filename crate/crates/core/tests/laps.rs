mod common;

use std::collections::BTreeSet;

use negbeta::lapcount::{cylinder_of, lap_number_table};
use negbeta::{
    cylinders, entropy_estimate, is_admissible_prefix, lap_numbers, AdmissibilityBounds, BetaValue,
    CylinderStatus, PointValue,
};
use num_rational::BigRational;
use num_traits::{One, Zero};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn rat(p: &PointValue) -> BigRational {
    p.as_rational().unwrap().clone()
}

fn rational_bases() -> Vec<BigRational> {
    vec![q(2, 1), q(3, 1), q(5, 2), q(9, 5), q(33, 10), q(7, 4)]
}

#[test]
fn cylinders_tile_the_domain() {
    for b in rational_bases() {
        let beta = BetaValue::rational(b.clone()).unwrap();
        let left = -&b / (&b + BigRational::one());
        let right = BigRational::one() / (&b + BigRational::one());
        for n in 1..=6 {
            let mut cs = cylinders(&beta, n).unwrap();
            cs.sort_by(|x, y| {
                rat(&x.lo)
                    .cmp(&rat(&y.lo))
                    .then(rat(&x.hi).cmp(&rat(&y.hi)))
            });
            assert_eq!(rat(&cs[0].lo), left);
            assert!(cs[0].lo_closed);
            let last = cs.last().unwrap();
            assert_eq!(rat(&last.hi), right);
            assert!(!last.hi_closed || last.status == CylinderStatus::Point);
            for w in cs.windows(2) {
                // consecutive pieces meet, and exactly one of them owns the seam
                assert_eq!(rat(&w[0].hi), rat(&w[1].lo), "β = {b}, n = {n}");
                assert!(
                    w[0].hi_closed ^ w[1].lo_closed,
                    "β = {b}, n = {n}: {} {}",
                    w[0].label,
                    w[1].label
                );
            }
            let total = cs
                .iter()
                .fold(BigRational::zero(), |s, c| s + rat(&c.hi) - rat(&c.lo));
            assert_eq!(total, BigRational::one());
        }
    }
}

#[test]
fn cylinder_lengths_are_bounded() {
    for b in rational_bases() {
        let beta = BetaValue::rational(b.clone()).unwrap();
        for n in 1..=6 {
            let bound = BigRational::one() / num_traits::pow(b.clone(), n);
            for c in cylinders(&beta, n).unwrap() {
                assert!(rat(&c.hi) - rat(&c.lo) <= bound, "β = {b}: {}", c.label);
            }
        }
    }
}

#[test]
fn positive_cylinders_outnumber_powers_of_the_base() {
    for b in rational_bases() {
        let beta = BetaValue::rational(b.clone()).unwrap();
        for (i, (l, lp)) in lap_number_table(&beta, 7).unwrap().into_iter().enumerate() {
            let n = i + 1;
            assert!(l >= lp);
            let power = num_traits::pow(b.clone(), n);
            assert!(
                BigRational::from_integer(lp.into()) >= power,
                "β = {b}, n = {n}"
            );
        }
    }
}

fn labels_by_admissibility(beta: &BetaValue, n: usize) -> BTreeSet<Vec<u64>> {
    let bounds = AdmissibilityBounds::for_base(beta, n).unwrap();
    let top: u64 = beta.floor().unwrap().try_into().unwrap();
    common::words(top + 1, n, n)
        .into_iter()
        .filter(|w| is_admissible_prefix(w, &bounds).unwrap().pass)
        .collect()
}

fn labels_by_refinement(beta: &BetaValue, n: usize) -> BTreeSet<Vec<u64>> {
    cylinders(beta, n)
        .unwrap()
        .into_iter()
        .map(|c| c.label.into_vec())
        .collect()
}

#[test]
fn non_empty_labels_are_the_admissible_words() {
    let two = BetaValue::integer(2).unwrap();
    for n in 1..=10 {
        assert_eq!(
            labels_by_refinement(&two, n),
            labels_by_admissibility(&two, n),
            "n = {n}"
        );
    }
    let golden: BetaValue = "alg:-1,-1,1:1:2".parse().unwrap();
    for n in 1..=10 {
        assert_eq!(
            labels_by_refinement(&golden, n),
            labels_by_admissibility(&golden, n),
            "n = {n}"
        );
    }
    let b = BetaValue::ratio(5, 2).unwrap();
    for n in 1..=6 {
        assert_eq!(
            labels_by_refinement(&b, n),
            labels_by_admissibility(&b, n),
            "n = {n}"
        );
    }
}

#[test]
fn point_cylinders_need_an_odd_period() {
    let two = BetaValue::integer(2).unwrap();
    let (l, lp) = lap_numbers(&two, 3).unwrap();
    assert!(l > lp);
    let golden: BetaValue = "alg:-1,-1,1:1:2".parse().unwrap();
    for (l, lp) in lap_number_table(&golden, 10).unwrap() {
        assert_eq!(l, lp);
    }
    // the orbit of 5/2 never closes
    let b = BetaValue::ratio(5, 2).unwrap();
    for (l, lp) in lap_number_table(&b, 6).unwrap() {
        assert_eq!(l, lp);
    }
}

#[test]
fn base_two_counts() {
    let two = BetaValue::integer(2).unwrap();
    let table = lap_number_table(&two, 12).unwrap();
    assert_eq!(table[0], (3, 2));
    assert_eq!(table[1], (6, 4));
    for (i, &(_, lp)) in table.iter().enumerate() {
        assert!(lp >= 1 << (i + 1));
    }
    let e = entropy_estimate(&two, 12).unwrap();
    assert!(e >= 2f64.ln() && e <= 2f64.ln() + 0.15);
}

#[test]
fn single_cylinders() {
    let two = BetaValue::integer(2).unwrap();
    let c = cylinder_of(&two, &[2, 0]).unwrap();
    assert_eq!(c.status, CylinderStatus::Empty);
    let c = cylinder_of(&two, &[2, 2]).unwrap();
    assert_eq!(c.status, CylinderStatus::Point);
    assert_eq!(c.lo, PointValue::ratio(-2, 3));
    let c = cylinder_of(&two, &[0]).unwrap();
    assert_eq!(c.status, CylinderStatus::Positive);
    assert_eq!(
        (c.lo, c.hi),
        (PointValue::ratio(-1, 6), PointValue::ratio(1, 3))
    );
}

#[test]
fn enclosures_are_refused() {
    let b = BetaValue::enclosure(q(19, 10), q(21, 10)).unwrap();
    assert!(cylinders(&b, 2).is_err());
    assert!(lap_numbers(&b, 2).is_err());
}
