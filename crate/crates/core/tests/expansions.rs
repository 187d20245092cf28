use negbeta::dynamics::{left_endpoint_orbit, pn_polynomials, EndpointOrbit};
use negbeta::{
    eval_series, expand, is_admissible_prefix, left_endpoint_expansion, pn_trace, step_t,
    step_t_tilde, AdmissibilityBounds, BetaValue, Digit, PointValue,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn rational(p: &PointValue) -> BigRational {
    p.as_rational().expect("rational point").clone()
}

/// A rational base in (1, 6] as `num/den`.
fn beta_strategy() -> impl Strategy<Value = BigRational> {
    (1i64..12, 2i64..60).prop_filter_map("β > 1", |(d, n)| {
        let b = q(n, d);
        (b > BigRational::one() && b <= q(6, 1)).then_some(b)
    })
}

/// A point of `[-β/(β+1), 1/(β+1))` as a fraction of the interval.
fn point_in_domain(beta: &BigRational, t: u32) -> BigRational {
    let lo = -beta / (beta + BigRational::one());
    lo + q(i64::from(t), 1_000_003)
}

/// `P_n(x) = (-x)^n + Σ_{j=1}^{n} (a_j + 1)(-x)^{n-j}`, summed directly.
fn closed_form(digits: &[Digit], x: &BigRational) -> BigRational {
    let n = digits.len() as i32;
    let mx = -x.clone();
    let mut s = num_traits::pow(mx.clone(), n as usize);
    for (j, &a) in digits.iter().enumerate() {
        let e = (n - 1 - j as i32) as usize;
        s += BigRational::from_integer(BigInt::from(a) + 1) * num_traits::pow(mx.clone(), e);
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_duality(b in beta_strategy()) {
        let beta = BetaValue::rational(b.clone()).unwrap();
        let a = left_endpoint_expansion(&beta, 24).unwrap();
        let trace = pn_trace(a.as_slice(), &PointValue::rational(b.clone())).unwrap();
        for j in 0..a.len() {
            let p = rational(&trace.values[j]);
            prop_assert!(p > BigRational::zero() && p <= BigRational::one(), "P_{} = {}", j, p);
            let next = (&b * &p).floor().to_integer();
            prop_assert_eq!(next, BigInt::from(a.as_slice()[j]));
        }
    }

    #[test]
    fn conjugate_maps_give_the_same_digits(b in beta_strategy(), t in 0u32..1_000_003) {
        let beta = BetaValue::rational(b.clone()).unwrap();
        let right = BigRational::one() / (&b + BigRational::one());
        let mut x = PointValue::rational(point_in_domain(&b, t));
        let mut y = PointValue::rational(&right - rational(&x));
        for _ in 0..20 {
            let (dx, nx) = step_t(&beta, &x).unwrap();
            let (dy, ny) = step_t_tilde(&beta, &y).unwrap();
            prop_assert_eq!(dx, dy);
            prop_assert_eq!(rational(&ny), &right - rational(&nx));
            x = nx;
            y = ny;
        }
    }

    #[test]
    fn expansions_are_admissible(b in beta_strategy(), t in 0u32..1_000_003) {
        let beta = BetaValue::rational(b.clone()).unwrap();
        let x = PointValue::rational(point_in_domain(&b, t));
        let w = expand(&beta, &x, 30).unwrap();
        let bounds = AdmissibilityBounds::for_base(&beta, 30).unwrap();
        let c = is_admissible_prefix(w.as_slice(), &bounds).unwrap();
        prop_assert!(c.pass, "{} fails at {:?}", w, c.witness);
    }

    #[test]
    fn partial_sums_approach_the_left_endpoint(b in beta_strategy()) {
        let beta = BetaValue::rational(b.clone()).unwrap();
        let n = 30;
        let a = left_endpoint_expansion(&beta, n).unwrap();
        let mb = -b.clone();
        let sum = a.iter().enumerate().fold(BigRational::zero(), |s, (j, &d)| {
            s + BigRational::from_integer(d.into()) / num_traits::pow(mb.clone(), j + 1)
        });
        let target = -&b / (&b + BigRational::one());
        let err = (sum - target).abs();
        prop_assert!(err <= q(2, 1) / num_traits::pow(b.clone(), n));
    }
}

#[test]
fn recurrence_matches_closed_form() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..100 {
        let len = rng.gen_range(0..8);
        let digits: Vec<Digit> = (0..len).map(|_| rng.gen_range(0..4)).collect();
        let x = q(rng.gen_range(-50..50), rng.gen_range(1..20));
        let trace = pn_trace(&digits, &PointValue::rational(x.clone())).unwrap();
        let polys = pn_polynomials(&digits);
        for n in 0..=len {
            let want = closed_form(&digits[..n], &x);
            assert_eq!(rational(&trace.values[n]), want);
            assert_eq!(polys[n].eval(&x), want);
        }
    }
}

#[test]
fn series_of_closed_orbits_is_the_left_endpoint() {
    for n in 2..=6u64 {
        let beta = BetaValue::integer(n).unwrap();
        let EndpointOrbit::Periodic(a) = left_endpoint_orbit(&beta, 100).unwrap() else {
            panic!("integer bases have periodic orbits");
        };
        let want = q(-(n as i64), n as i64 + 1);
        assert_eq!(eval_series(&a, &beta).unwrap(), PointValue::rational(want));
    }
}

#[test]
fn series_of_algebraic_closed_orbits_encloses_the_left_endpoint() {
    let golden: BetaValue = "alg:-1,-1,1:1:2".parse().unwrap();
    let EndpointOrbit::Periodic(a) = left_endpoint_orbit(&golden, 100).unwrap() else {
        panic!("golden ratio orbit closes");
    };
    let v = eval_series(&a, &golden).unwrap().to_f64();
    let g = golden.to_f64();
    assert!((v + g / (g + 1.0)).abs() < 1e-12);
}

#[test]
fn domain_checks() {
    let two = BetaValue::integer(2).unwrap();
    assert!(step_t(&two, &PointValue::ratio(1, 3)).is_err());
    assert!(step_t(&two, &PointValue::ratio(-2, 3)).is_ok());
    assert!(step_t_tilde(&two, &PointValue::ratio(0, 1)).is_err());
    assert!(step_t_tilde(&two, &PointValue::ratio(1, 1)).is_ok());
}

#[test]
fn zero_expands_to_zeros() {
    let two = BetaValue::integer(2).unwrap();
    assert_eq!(
        expand(&two, &PointValue::ratio(0, 1), 3)
            .unwrap()
            .to_string(),
        "0 0 0"
    );
}
