//! Round-limited elementarity via pebble games.
//!
//! `elementary_d(left, right, d, p)` decides whether every formula of
//! quantifier depth at most `d` with at most `p` parameters from `left`
//! transfers between the two structures. The search plays the d-round
//! back-and-forth game from every parameter tuple; when the spoiler wins, a
//! distinguishing formula is reconstructed from the winning strategy and
//! reported together with its truth value on each side.
//!
//! Parameters are named `a, b, c, d, e, f` and game rounds `y, z, w, u, t,
//! s`, so witnesses read as sentences about the parameters.

use std::collections::BTreeSet;

use serde_json::{json, Value};

use super::{satisfies_with_budget, Assignment, Budget, ModelError, Structure};
use crate::formula::{Formula, Term};
use crate::hf::HfSet;

const PARAM_NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];
const ROUND_NAMES: [&str; 6] = ["y", "z", "w", "u", "t", "s"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EfOutcome {
    Elementary,
    Distinguished {
        params: Vec<(String, HfSet)>,
        formula: Formula,
        left_value: bool,
        right_value: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EfReport {
    pub depth: u32,
    pub max_params: u32,
    pub tuples_checked: u64,
    pub outcome: EfOutcome,
}

impl EfReport {
    pub fn is_elementary(&self) -> bool {
        matches!(self.outcome, EfOutcome::Elementary)
    }

    pub fn to_json(&self) -> Value {
        let outcome = match &self.outcome {
            EfOutcome::Elementary => json!({ "status": "elementary" }),
            EfOutcome::Distinguished {
                params,
                formula,
                left_value,
                right_value,
            } => {
                let params: Vec<Value> = params
                    .iter()
                    .map(|(var, value)| json!({ "var": var, "value": value.to_string() }))
                    .collect();
                json!({
                    "status": "distinguished",
                    "params": params,
                    "formula": formula.to_string(),
                    "left_value": left_value,
                    "right_value": right_value,
                })
            }
        };
        json!({
            "depth": self.depth,
            "max_params": self.max_params,
            "tuples_checked": self.tuples_checked,
            "outcome": outcome,
        })
    }
}

/// A game position: pairs of pebbled elements, left component against right.
type Position = Vec<(HfSet, HfSet)>;

/// Whether extending the position by `new` keeps it a partial isomorphism.
/// Only the new pair needs checking; the rest is consistent by induction.
fn consistent(pos: &Position, new: &(HfSet, HfSet)) -> bool {
    pos.iter().all(|(a, b)| {
        ((a == &new.0) == (b == &new.1))
            && (a.contains(&new.0) == b.contains(&new.1))
            && (new.0.contains(a) == new.1.contains(b))
    })
}

fn duplicator_wins(
    left: &Structure,
    right: &Structure,
    pos: &mut Position,
    d: u32,
    budget: &mut Budget,
) -> Result<bool, ModelError> {
    budget.tick()?;
    if d == 0 {
        return Ok(true);
    }
    'left_moves: for a in left.universe() {
        for b in right.universe() {
            let new = (a.clone(), b.clone());
            if consistent(pos, &new) {
                pos.push(new);
                let won = duplicator_wins(left, right, pos, d - 1, budget);
                pos.pop();
                if won? {
                    continue 'left_moves;
                }
            }
        }
        return Ok(false);
    }
    'right_moves: for b in right.universe() {
        for a in left.universe() {
            let new = (a.clone(), b.clone());
            if consistent(pos, &new) {
                pos.push(new);
                let won = duplicator_wins(left, right, pos, d - 1, budget);
                pos.pop();
                if won? {
                    continue 'right_moves;
                }
            }
        }
        return Ok(false);
    }
    Ok(true)
}

fn pos_name(index: usize, params_len: usize) -> &'static str {
    if index < params_len {
        PARAM_NAMES[index]
    } else {
        ROUND_NAMES[index - params_len]
    }
}

/// Spoiler move check: does the extension lose for the duplicator in `d`
/// further rounds (either immediately, by breaking the partial isomorphism,
/// or down the game tree)?
fn losing_extension(
    left: &Structure,
    right: &Structure,
    pos: &mut Position,
    new: (HfSet, HfSet),
    d: u32,
    budget: &mut Budget,
) -> Result<bool, ModelError> {
    if !consistent(pos, &new) {
        return Ok(true);
    }
    pos.push(new);
    let won = duplicator_wins(left, right, pos, d, budget);
    pos.pop();
    Ok(!won?)
}

/// Reconstructs a distinguishing formula from a spoiler win at `pos` with `d`
/// rounds left. Returns the formula and its orientation: `true` means it
/// holds on the left side of the position and fails on the right.
fn distinguishing(
    left: &Structure,
    right: &Structure,
    pos: &mut Position,
    d: u32,
    params_len: usize,
    budget: &mut Budget,
) -> Result<(Formula, bool), ModelError> {
    // An inconsistent position is refuted by its least mismatched atom,
    // membership atoms scanned before equalities.
    for i in 0..pos.len() {
        for j in 0..pos.len() {
            let on_left = pos[j].0.contains(&pos[i].0);
            let on_right = pos[j].1.contains(&pos[i].1);
            if on_left != on_right {
                let atom = Formula::member(
                    Term::var(pos_name(i, params_len)),
                    Term::var(pos_name(j, params_len)),
                );
                return Ok((atom, on_left));
            }
        }
    }
    for i in 0..pos.len() {
        for j in (i + 1)..pos.len() {
            let on_left = pos[i].0 == pos[j].0;
            let on_right = pos[i].1 == pos[j].1;
            if on_left != on_right {
                let atom = Formula::equal(
                    Term::var(pos_name(i, params_len)),
                    Term::var(pos_name(j, params_len)),
                );
                return Ok((atom, on_left));
            }
        }
    }

    assert!(d > 0, "spoiler cannot win a zero-round game from a consistent position");
    let var = pos_name(pos.len(), params_len);

    // A winning spoiler move on the left yields an existential true on the
    // left: the conjunction collects one refutation per duplicator reply.
    for a in left.universe() {
        let mut all_lose = true;
        for b in right.universe() {
            if !losing_extension(left, right, pos, (a.clone(), b.clone()), d - 1, budget)? {
                all_lose = false;
                break;
            }
        }
        if all_lose {
            let mut parts = BTreeSet::new();
            for b in right.universe() {
                pos.push((a.clone(), b.clone()));
                let (f, true_on_left) =
                    distinguishing(left, right, pos, d - 1, params_len, budget)?;
                pos.pop();
                parts.insert(if true_on_left { f } else { f.not() });
            }
            return Ok((Formula::exists(var, conjoin(parts, var)), true));
        }
    }
    for b in right.universe() {
        let mut all_lose = true;
        for a in left.universe() {
            if !losing_extension(left, right, pos, (a.clone(), b.clone()), d - 1, budget)? {
                all_lose = false;
                break;
            }
        }
        if all_lose {
            let mut parts = BTreeSet::new();
            for a in left.universe() {
                pos.push((a.clone(), b.clone()));
                let (f, true_on_left) =
                    distinguishing(left, right, pos, d - 1, params_len, budget)?;
                pos.pop();
                parts.insert(if true_on_left { f.not() } else { f });
            }
            return Ok((Formula::exists(var, conjoin(parts, var)), false));
        }
    }
    unreachable!("a lost position admits a winning spoiler move");
}

/// No refutations means every reply fails outright (the other side has no
/// elements), so the bare existential carries the difference.
fn conjoin(parts: BTreeSet<Formula>, var: &str) -> Formula {
    let mut iter = parts.into_iter();
    match iter.next() {
        None => Formula::equal(Term::var(var), Term::var(var)),
        Some(first) => iter.fold(first, |acc, f| acc.and(f)),
    }
}

/// Round-limited elementarity of `left` inside `right`.
///
/// `left` must be a substructure of `right`. All parameter tuples over
/// `left` of length up to `max_params` are tried in length-then-lex order,
/// so a reported witness uses the least distinguishable tuple.
pub fn elementary_d(
    left: &Structure,
    right: &Structure,
    depth: u32,
    max_params: u32,
    budget_limit: u64,
) -> Result<EfReport, ModelError> {
    if let Some(missing) = left.universe().iter().find(|x| !right.contains(x)) {
        return Err(ModelError::NotSubstructure {
            element: missing.to_string(),
        });
    }
    if depth as usize > ROUND_NAMES.len() {
        return Err(ModelError::GameLimit {
            what: "depth",
            max: ROUND_NAMES.len() as u32,
            given: depth,
        });
    }
    if max_params as usize > PARAM_NAMES.len() {
        return Err(ModelError::GameLimit {
            what: "max_params",
            max: PARAM_NAMES.len() as u32,
            given: max_params,
        });
    }

    let mut budget = Budget::new(budget_limit);
    let mut tuples_checked = 0u64;
    for len in 0..=max_params as usize {
        if left.card() == 0 && len > 0 {
            break;
        }
        let mut indices = vec![0usize; len];
        loop {
            let tuple: Vec<HfSet> = indices
                .iter()
                .map(|&i| left.universe()[i].clone())
                .collect();
            tuples_checked += 1;
            let mut pos: Position = tuple.iter().map(|x| (x.clone(), x.clone())).collect();
            if !duplicator_wins(left, right, &mut pos, depth, &mut budget)? {
                let (formula, _) =
                    distinguishing(left, right, &mut pos, depth, len, &mut budget)?;
                let params: Vec<(String, HfSet)> = tuple
                    .iter()
                    .enumerate()
                    .map(|(i, x)| (PARAM_NAMES[i].to_string(), x.clone()))
                    .collect();
                let asg: Assignment = params
                    .iter()
                    .map(|(v, x)| (v.clone(), x.clone()))
                    .collect();
                let (left_value, _) =
                    satisfies_with_budget(left, &formula, &asg, budget_limit)?;
                let (right_value, _) =
                    satisfies_with_budget(right, &formula, &asg, budget_limit)?;
                debug_assert_ne!(left_value, right_value);
                return Ok(EfReport {
                    depth,
                    max_params,
                    tuples_checked,
                    outcome: EfOutcome::Distinguished {
                        params,
                        formula,
                        left_value,
                        right_value,
                    },
                });
            }
            // Advance the odometer over universe indices.
            let mut k = len;
            loop {
                if k == 0 {
                    break;
                }
                indices[k - 1] += 1;
                if indices[k - 1] < left.card() {
                    break;
                }
                indices[k - 1] = 0;
                k -= 1;
            }
            if k == 0 {
                break;
            }
        }
    }
    Ok(EfReport {
        depth,
        max_params,
        tuples_checked,
        outcome: EfOutcome::Elementary,
    })
}
