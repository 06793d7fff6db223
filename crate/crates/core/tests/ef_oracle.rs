//! Validates the game-based elementarity check two independent ways.
//!
//! Completeness: the characteristic-formula oracle from `common` decides
//! round-limited distinguishability outright, so the game verdict must match
//! it on every pair. Soundness: any formula from the systematic enumeration
//! that transfers badly forces a Distinguished verdict, and every reported
//! witness must itself evaluate differently on the two sides.

mod common;

use std::collections::BTreeMap;

use common::{naive_eval, tuples_up_to, type_formula};
use hflab_core::hf::HfSet;
use hflab_core::model::{elementary_d, enumerate_formulas, EfOutcome, Structure};

const NAMES: [&str; 12] = [
    "a", "b", "c", "d", "e", "f", "y", "z", "w", "u", "t", "s",
];

fn stage(k: u32) -> Structure {
    let mut v = HfSet::empty();
    for _ in 0..k {
        v = v.powerset().unwrap();
    }
    Structure::from_set(&v)
}

/// Decides distinguishability by evaluating characteristic formulas, no
/// games involved.
fn oracle_distinguishable(left: &Structure, right: &Structure, depth: u32, max_params: u32) -> bool {
    for tuple in tuples_up_to(left.universe(), max_params) {
        let tau = type_formula(left.universe(), &tuple, depth, &NAMES);
        let mut env: Vec<(String, HfSet)> = tuple
            .iter()
            .enumerate()
            .map(|(i, x)| (NAMES[i].to_string(), x.clone()))
            .collect();
        if !naive_eval(right.universe(), &BTreeMap::new(), &tau, &mut env) {
            return true;
        }
    }
    false
}

#[test]
fn game_verdicts_match_the_type_oracle() {
    let pairs: Vec<(u32, u32)> = vec![
        (0, 0),
        (0, 1),
        (1, 1),
        (1, 2),
        (2, 2),
        (2, 3),
        (1, 3),
        (3, 3),
        (3, 4),
    ];
    for (lk, rk) in pairs {
        let (left, right) = (stage(lk), stage(rk));
        for depth in 0..=2 {
            for max_params in 0..=2 {
                let report =
                    elementary_d(&left, &right, depth, max_params, 500_000_000).unwrap();
                let oracle = oracle_distinguishable(&left, &right, depth, max_params);
                assert_eq!(
                    report.is_elementary(),
                    !oracle,
                    "stages {lk} vs {rk}, depth {depth}, params {max_params}"
                );
            }
        }
    }
}

#[test]
fn distinguished_witnesses_check_out() {
    let cases = [(0, 1, 1, 0), (1, 2, 1, 1), (2, 3, 1, 1), (3, 4, 1, 1), (2, 3, 2, 2)];
    for (lk, rk, depth, max_params) in cases {
        let (left, right) = (stage(lk), stage(rk));
        let report = elementary_d(&left, &right, depth, max_params, 500_000_000).unwrap();
        match report.outcome {
            EfOutcome::Distinguished {
                params,
                formula,
                left_value,
                right_value,
            } => {
                assert!(formula.quantifier_depth() <= depth);
                assert!(params.len() <= max_params as usize);
                let mut env: Vec<(String, HfSet)> = params.clone();
                let on_left =
                    naive_eval(left.universe(), &BTreeMap::new(), &formula, &mut env);
                let on_right =
                    naive_eval(right.universe(), &BTreeMap::new(), &formula, &mut env);
                assert_eq!(on_left, left_value, "stages {lk} vs {rk}: {formula}");
                assert_eq!(on_right, right_value, "stages {lk} vs {rk}: {formula}");
                assert_ne!(on_left, on_right, "stages {lk} vs {rk}: {formula}");
            }
            EfOutcome::Elementary => {
                panic!("stages {lk} vs {rk} at depth {depth} should be distinguishable")
            }
        }
    }
}

#[test]
fn transferring_formulas_never_contradict_an_elementary_verdict() {
    // Every enumerated formula whose truth value fails to transfer is a
    // counterexample to elementarity; check none exists when the game says
    // the extension is elementary, and that the sweep finds one when it says
    // distinguished.
    for (lk, rk, depth) in [(1u32, 2u32, 1u32), (2, 3, 1), (3, 4, 1)] {
        let (left, right) = (stage(lk), stage(rk));
        let report = elementary_d(&left, &right, depth, 1, 500_000_000).unwrap();
        let formulas = enumerate_formulas(depth, &["a"]);
        let mut found = None;
        'sweep: for f in &formulas {
            for x in left.universe() {
                let mut env = vec![("a".to_string(), x.clone())];
                let on_left = naive_eval(left.universe(), &BTreeMap::new(), f, &mut env);
                let on_right = naive_eval(right.universe(), &BTreeMap::new(), f, &mut env);
                if on_left != on_right {
                    found = Some((f.clone(), x.clone()));
                    break 'sweep;
                }
            }
        }
        match (&report.outcome, found) {
            (EfOutcome::Distinguished { .. }, Some(_)) => {}
            (EfOutcome::Elementary, None) => {}
            (EfOutcome::Distinguished { .. }, None) => panic!(
                "stages {lk} vs {rk}: game found a difference the sweep missed (fine in \
                 principle for the sweep's family, fatal here where both are complete)"
            ),
            (EfOutcome::Elementary, Some((f, x))) => panic!(
                "stages {lk} vs {rk}: {f} at a = {x} does not transfer, yet the game \
                 says elementary"
            ),
        }
    }
}

#[test]
fn enumeration_size_is_frozen_for_the_sweep() {
    assert_eq!(enumerate_formulas(1, &["a"]).len(), 396);
}

#[test]
fn empty_against_singleton_distinguishes_without_parameters() {
    let report = elementary_d(&stage(0), &stage(1), 1, 0, 1_000_000).unwrap();
    match report.outcome {
        EfOutcome::Distinguished {
            params,
            formula,
            left_value,
            right_value,
        } => {
            assert!(params.is_empty());
            assert_eq!(formula.to_string(), "exists y. y = y");
            assert!(!left_value);
            assert!(right_value);
        }
        EfOutcome::Elementary => panic!("an element is a depth-1 difference"),
    }
}
