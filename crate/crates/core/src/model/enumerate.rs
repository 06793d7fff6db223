//! Systematic formula enumeration up to a quantifier depth.
//!
//! The enumeration is the normal form family used by the game tests: depth 0
//! contributes every membership and equality literal over the available
//! variables (positive and negated); each further depth prefixes a
//! quantifier over a fresh variable `q<depth>` to every formula of the layer
//! below, where the layer below is widened by binary conjunctions and
//! disjunctions of distinct literals. The result is cumulative and its order
//! is fixed, so counts and indices are stable across runs.

use crate::formula::{Formula, Term};

/// All enumerated formulas of quantifier depth at most `depth` over the free
/// variables `vars`. Bound variables are drawn from `q1, q2, ...` and must
/// not appear in `vars`.
pub fn enumerate_formulas(depth: u32, vars: &[&str]) -> Vec<Formula> {
    let owned: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
    for d in 1..=depth {
        let q = format!("q{d}");
        assert!(
            !owned.contains(&q),
            "variable name {q} is reserved for bound variables"
        );
    }
    enumerate(depth, &owned)
}

fn literals(vars: &[String]) -> Vec<Formula> {
    let mut out = Vec::new();
    for a in vars {
        for b in vars {
            let atom = Formula::member(Term::var(a), Term::var(b));
            out.push(atom.clone());
            out.push(atom.not());
        }
    }
    for (i, a) in vars.iter().enumerate() {
        for b in &vars[i..] {
            let atom = Formula::equal(Term::var(a), Term::var(b));
            out.push(atom.clone());
            out.push(atom.not());
        }
    }
    out
}

fn enumerate(depth: u32, vars: &[String]) -> Vec<Formula> {
    if depth == 0 {
        return literals(vars);
    }
    let mut out = enumerate(depth - 1, vars);
    let mut extended = vars.to_vec();
    extended.push(format!("q{depth}"));
    let mut bodies = enumerate(depth - 1, &extended);
    let lits = literals(&extended);
    for i in 0..lits.len() {
        for j in (i + 1)..lits.len() {
            bodies.push(lits[i].clone().and(lits[j].clone()));
        }
    }
    for i in 0..lits.len() {
        for j in (i + 1)..lits.len() {
            bodies.push(lits[i].clone().or(lits[j].clone()));
        }
    }
    let q = format!("q{depth}");
    for body in &bodies {
        out.push(Formula::forall(&q, body.clone()));
    }
    for body in bodies {
        out.push(Formula::exists(&q, body));
    }
    out
}
