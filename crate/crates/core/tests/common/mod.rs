#![allow(dead_code)]

use std::collections::BTreeSet;

use negbeta::{validate, Digit, EvPeriodicSeq, ValidateOptions, Verdict};

/// Every word over `0..alphabet` with length in `min..=max`.
pub fn words(alphabet: Digit, min: usize, max: usize) -> Vec<Vec<Digit>> {
    let mut out = vec![];
    for len in min..=max {
        let mut w = vec![0; len];
        loop {
            out.push(w.clone());
            let Some(i) = w.iter().rposition(|&d| d + 1 < alphabet) else {
                break;
            };
            w[i] += 1;
            w[i + 1..].iter_mut().for_each(|d| *d = 0);
        }
    }
    out
}

/// Distinct eventually periodic sequences with short preperiod and period,
/// first digit non-zero.
pub fn small_sequences(alphabet: Digit) -> Vec<EvPeriodicSeq> {
    let mut seen = BTreeSet::new();
    let mut out = vec![];
    for pre in words(alphabet, 0, 2) {
        for per in words(alphabet, 1, 3) {
            let s = EvPeriodicSeq::new(pre.clone(), per).unwrap();
            if s.digit(1) != 0 && seen.insert(s.to_string()) {
                out.push(s);
            }
        }
    }
    out
}

pub fn verdicts(alphabet: Digit) -> Vec<Verdict> {
    let opts = ValidateOptions::default();
    small_sequences(alphabet)
        .iter()
        .map(|s| validate(s, &opts).unwrap())
        .collect()
}
