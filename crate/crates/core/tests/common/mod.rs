//! Independent oracles for the integration suites.
//!
//! Everything here is deliberately separate from the library's evaluation
//! path: a plain recursive evaluator over explicit member lists (no budget,
//! no witness machinery, no binary-searched universes), a witness search that
//! enumerates assignments directly, and depth-d characteristic formulas that
//! decide round-limited distinguishability without playing games.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use hflab_core::formula::{Formula, Term};
use hflab_core::hf::HfSet;

/// Plain recursive satisfaction: quantifiers scan the universe list,
/// bounded quantifiers scan the members of the bound that lie in the
/// universe. Connectives evaluate both sides.
pub fn naive_eval(
    univ: &[HfSet],
    tiers: &BTreeMap<u32, HfSet>,
    f: &Formula,
    env: &mut Vec<(String, HfSet)>,
) -> bool {
    match f {
        Formula::Member(a, b) => {
            let (a, b) = (naive_term(tiers, a, env), naive_term(tiers, b, env));
            b.members().contains(&a)
        }
        Formula::Equal(a, b) => naive_term(tiers, a, env) == naive_term(tiers, b, env),
        Formula::Not(p) => !naive_eval(univ, tiers, p, env),
        Formula::And(p, q) => {
            let l = naive_eval(univ, tiers, p, env);
            let r = naive_eval(univ, tiers, q, env);
            l && r
        }
        Formula::Or(p, q) => {
            let l = naive_eval(univ, tiers, p, env);
            let r = naive_eval(univ, tiers, q, env);
            l || r
        }
        Formula::Implies(p, q) => {
            let l = naive_eval(univ, tiers, p, env);
            let r = naive_eval(univ, tiers, q, env);
            !l || r
        }
        Formula::Iff(p, q) => {
            let l = naive_eval(univ, tiers, p, env);
            let r = naive_eval(univ, tiers, q, env);
            l == r
        }
        Formula::ForAll(v, p) => univ.iter().all(|u| {
            env.push((v.clone(), u.clone()));
            let ok = naive_eval(univ, tiers, p, env);
            env.pop();
            ok
        }),
        Formula::Exists(v, p) => univ.iter().any(|u| {
            env.push((v.clone(), u.clone()));
            let ok = naive_eval(univ, tiers, p, env);
            env.pop();
            ok
        }),
        Formula::ForAllIn(v, t, p) => {
            let bound = naive_term(tiers, t, env);
            bound
                .members()
                .iter()
                .filter(|u| univ.contains(u))
                .all(|u| {
                    env.push((v.clone(), u.clone()));
                    let ok = naive_eval(univ, tiers, p, env);
                    env.pop();
                    ok
                })
        }
        Formula::ExistsIn(v, t, p) => {
            let bound = naive_term(tiers, t, env);
            bound
                .members()
                .iter()
                .filter(|u| univ.contains(u))
                .any(|u| {
                    env.push((v.clone(), u.clone()));
                    let ok = naive_eval(univ, tiers, p, env);
                    env.pop();
                    ok
                })
        }
    }
}

fn naive_term(tiers: &BTreeMap<u32, HfSet>, t: &Term, env: &[(String, HfSet)]) -> HfSet {
    match t {
        Term::Var(v) => env
            .iter()
            .rev()
            .find(|(name, _)| name == v)
            .unwrap_or_else(|| panic!("oracle: unbound variable {v}"))
            .1
            .clone(),
        Term::ConstC(n) => tiers
            .get(n)
            .unwrap_or_else(|| panic!("oracle: uninterpreted C{n}"))
            .clone(),
        Term::Literal(s) => s.clone(),
    }
}

/// Evaluates a closed formula.
pub fn naive_holds(univ: &[HfSet], f: &Formula) -> bool {
    naive_eval(univ, &BTreeMap::new(), f, &mut Vec::new())
}

/// Witness for a false formula: strips the leading universal prefix and finds
/// the lexicographically least assignment (in universe order) under which the
/// residual is false. Returns `None` when the formula is true.
pub fn naive_witness(
    univ: &[HfSet],
    f: &Formula,
) -> Option<(Vec<(String, HfSet)>, Formula)> {
    let tiers = BTreeMap::new();
    let mut env = Vec::new();
    if naive_eval(univ, &tiers, f, &mut env) {
        return None;
    }
    let mut current = f.clone();
    loop {
        match current {
            Formula::ForAll(v, body) => {
                let u = univ
                    .iter()
                    .find(|u| {
                        env.push((v.clone(), (*u).clone()));
                        let ok = naive_eval(univ, &tiers, &body, &mut env);
                        env.pop();
                        !ok
                    })
                    .expect("a false universal has a falsifying element")
                    .clone();
                env.push((v.clone(), u));
                current = *body;
            }
            Formula::ForAllIn(v, t, body) => {
                let bound = naive_term(&tiers, &t, &env);
                let u = bound
                    .members()
                    .iter()
                    .filter(|u| univ.contains(u))
                    .find(|u| {
                        env.push((v.clone(), (*u).clone()));
                        let ok = naive_eval(univ, &tiers, &body, &mut env);
                        env.pop();
                        !ok
                    })
                    .expect("a false bounded universal has a falsifying member")
                    .clone();
                env.push((v.clone(), u));
                current = *body;
            }
            other => return Some((env, other)),
        }
    }
}

/// Characteristic formula of `tuple` in `univ` at quantifier depth `depth`:
/// another structure satisfies it at an equally long tuple exactly when no
/// `depth`-round spoiler strategy separates the two positions. Variables are
/// named by `names[i]` for tuple position `i`; `names` must be long enough
/// for `tuple.len() + depth` positions.
pub fn type_formula(univ: &[HfSet], tuple: &[HfSet], depth: u32, names: &[&str]) -> Formula {
    let truth = Formula::equal(
        Term::Literal(HfSet::empty()),
        Term::Literal(HfSet::empty()),
    );
    let falsity = truth.clone().not();
    if depth == 0 {
        let mut parts = Vec::new();
        for (i, a) in tuple.iter().enumerate() {
            for (j, b) in tuple.iter().enumerate() {
                let atom = Formula::member(Term::var(names[i]), Term::var(names[j]));
                parts.push(if b.contains(a) { atom } else { atom.not() });
            }
        }
        for i in 0..tuple.len() {
            for j in (i + 1)..tuple.len() {
                let atom = Formula::equal(Term::var(names[i]), Term::var(names[j]));
                parts.push(if tuple[i] == tuple[j] { atom } else { atom.not() });
            }
        }
        return conjoin(parts, truth);
    }
    let fresh = names[tuple.len()];
    let mut subtypes = BTreeSet::new();
    for a in univ {
        let mut extended: Vec<HfSet> = tuple.to_vec();
        extended.push(a.clone());
        subtypes.insert(type_formula(univ, &extended, depth - 1, names));
    }
    let mut parts: Vec<Formula> = subtypes
        .iter()
        .map(|t| Formula::exists(fresh, t.clone()))
        .collect();
    let spread = disjoin(subtypes.into_iter().collect(), falsity);
    parts.push(Formula::forall(fresh, spread));
    conjoin(parts, truth)
}

fn conjoin(parts: Vec<Formula>, empty: Formula) -> Formula {
    let mut iter = parts.into_iter();
    match iter.next() {
        None => empty,
        Some(first) => iter.fold(first, |acc, f| acc.and(f)),
    }
}

fn disjoin(parts: Vec<Formula>, empty: Formula) -> Formula {
    let mut iter = parts.into_iter();
    match iter.next() {
        None => empty,
        Some(first) => iter.fold(first, |acc, f| acc.or(f)),
    }
}

/// All tuples (with repetition) over `univ` of length `0..=max_len`, in
/// length-then-lex order.
pub fn tuples_up_to(univ: &[HfSet], max_len: u32) -> Vec<Vec<HfSet>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<HfSet>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for t in &layer {
            for u in univ {
                let mut t2 = t.clone();
                t2.push(u.clone());
                next.push(t2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
