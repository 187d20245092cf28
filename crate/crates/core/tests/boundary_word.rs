use std::cmp::Ordering;

use negbeta::dynamics::{left_endpoint_orbit, EndpointOrbit};
use negbeta::morphism::{g_k, phi_lengths, MorphismWord};
use negbeta::{cmp_with_u, gamma_base, phi_apply, u_prefix, EvPeriodicSeq};

fn phi_word(w: MorphismWord, n: usize) -> MorphismWord {
    phi_apply(&w, n).unwrap()
}

#[test]
fn iterates_are_nested_prefixes() {
    for n in 0..14 {
        let a = phi_word(MorphismWord::one(), n);
        let b = phi_word(MorphismWord::one(), n + 1);
        assert!(b.symbols().starts_with(a.symbols()), "n = {n}");
    }
}

#[test]
fn u_prefix_is_the_fixed_point() {
    for n in 0..=12 {
        let w = phi_word(MorphismWord::one(), n);
        assert_eq!(u_prefix(w.len()), w.to_digits(), "n = {n}");
    }
}

#[test]
fn lengths_follow_the_counting_recurrence() {
    let (mut ones, mut zeros) = (1u64, 1u64);
    for n in 1..30 {
        (ones, zeros) = (ones + 2 * zeros, ones);
        assert_eq!(phi_lengths(n), (ones, zeros), "n = {n}");
        if n <= 14 {
            assert_eq!(phi_word(MorphismWord::one(), n).len() as u64, ones);
            assert_eq!(phi_word(MorphismWord::zero(), n).len() as u64, zeros);
        }
    }
}

#[test]
fn u_prefix_matches_hand_expansion() {
    assert_eq!(
        u_prefix(21).to_string(),
        "1 0 0 1 1 1 0 0 1 0 0 1 0 0 1 1 1 0 0 1 1"
    );
}

fn bisect_gamma(g: u64) -> f64 {
    // x^{g+1} - x - 1 changes sign once on (1, 2)
    let f = |x: f64| x.powi(g as i32 + 1) - x - 1.0;
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

#[test]
fn gamma_matches_float_bisection() {
    for k in 1..=6 {
        let g = gamma_base(k, 80).unwrap();
        assert_eq!(g.g, (1u64 << (k + 1)) / 3);
        assert!(
            (g.value.to_f64() - bisect_gamma(g.g)).abs() < 1e-12,
            "k = {k}"
        );
    }
    assert!((gamma_base(2, 64).unwrap().value.to_f64() - 1.324_717_957_244_746).abs() < 1e-12);
    assert!((gamma_base(3, 64).unwrap().value.to_f64() - 1.134_724_138).abs() < 1e-8);
}

#[test]
fn gamma_decreases_toward_one() {
    let values: Vec<f64> = (1..=6)
        .map(|k| gamma_base(k, 64).unwrap().value.to_f64())
        .collect();
    assert!(values.windows(2).all(|w| w[0] > w[1]));
    assert!(values.iter().all(|&v| v > 1.0));
    assert!(values[5] < 1.02);
}

#[test]
fn gamma_expansion_is_phi_block_then_repeated_zero_block() {
    for m in 1..=4u32 {
        let beta = gamma_base(m, 128).unwrap().value;
        let head = phi_word(MorphismWord::one(), (m - 1) as usize).to_digits();
        let tail = phi_word(MorphismWord::zero(), (m - 1) as usize).to_digits();
        let expected = EvPeriodicSeq::new(head, tail).unwrap();
        match left_endpoint_orbit(&beta, 10_000).unwrap() {
            EndpointOrbit::Periodic(a) => assert_eq!(a, expected, "m = {m}"),
            EndpointOrbit::Aperiodic(_) => panic!("orbit of gamma_{m} should close"),
        }
        assert_eq!(cmp_with_u(&expected, 256), Some(Ordering::Greater));
    }
}

#[test]
fn g_k_rejects_out_of_range() {
    assert!(g_k(0).is_err());
    assert_eq!(g_k(1).unwrap(), 1);
    assert_eq!(g_k(3).unwrap(), 5);
}

#[test]
fn u_comparisons() {
    let s = |t: &str| t.parse::<EvPeriodicSeq>().unwrap();
    assert_eq!(cmp_with_u(&s("(2)"), 256), Some(Ordering::Greater));
    assert_eq!(cmp_with_u(&s("(1)"), 256), Some(Ordering::Less));
    // agrees with u on its first 21 digits, so a shallow search gives up
    let deep = u_prefix(21).into_vec();
    let close = EvPeriodicSeq::new(deep, vec![2]).unwrap();
    assert_eq!(cmp_with_u(&close, 10), None);
    assert!(cmp_with_u(&close, 256).is_some());
}
