//! First-order formulas over `∈` and `=` with tier constants and HF literals.
//!
//! Concrete syntax (parsed by [`parse`], emitted by `Display`):
//!
//! ```text
//! formula    := quantified | binary
//! quantified := ("forall" | "exists") var ["in" term] "." formula
//! binary     := unary (("&" | "|" | "->" | "<->") unary)*
//! unary      := "!" unary | atom | "(" formula ")"
//! atom       := term ("in" | "=") term
//! term       := var | "C" digits | hfset-literal | "#" digits
//! ```
//!
//! Precedence `!` > `&` > `|` > `->` > `<->`, with `->` right-associative.
//! Bounded quantifiers are sugar: `forall v in t. b` abbreviates
//! `forall v. (v in t -> b)` and `exists v in t. b` abbreviates
//! `exists v. (v in t & b)`; see [`Formula::desugar`].

mod axioms;
mod parser;

pub use axioms::{builtin, separation_instance, AxiomId};
pub use parser::parse;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::hf::HfSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("syntax error at byte {at}: {msg}")]
    Syntax { at: usize, msg: String },
    #[error("bound term variable '{var}' is captured by a quantifier in the formula")]
    BoundCapture { var: String },
}

/// A term: variable, tier constant `C_n`, or HF literal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    ConstC(u32),
    Literal(HfSet),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::ConstC(n) => write!(f, "C{n}"),
            Term::Literal(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Member(Term, Term),
    Equal(Term, Term),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    ForAll(String, Box<Formula>),
    Exists(String, Box<Formula>),
    /// `forall v in t. body`
    ForAllIn(String, Term, Box<Formula>),
    /// `exists v in t. body`
    ExistsIn(String, Term, Box<Formula>),
}

// Builder helpers; these keep the axiom constructions readable.
impl Formula {
    pub fn member(a: Term, b: Term) -> Formula {
        Formula::Member(a, b)
    }

    pub fn equal(a: Term, b: Term) -> Formula {
        Formula::Equal(a, b)
    }

    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn iff(self, other: Formula) -> Formula {
        Formula::Iff(Box::new(self), Box::new(other))
    }

    pub fn forall(v: impl Into<String>, body: Formula) -> Formula {
        Formula::ForAll(v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<String>, body: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(body))
    }

    pub fn forall_in(v: impl Into<String>, t: Term, body: Formula) -> Formula {
        Formula::ForAllIn(v.into(), t, Box::new(body))
    }

    pub fn exists_in(v: impl Into<String>, t: Term, body: Formula) -> Formula {
        Formula::ExistsIn(v.into(), t, Box::new(body))
    }
}

impl Formula {
    /// Parses the concrete syntax; see the module docs for the grammar.
    pub fn parse(text: &str) -> Result<Formula, FormulaError> {
        parser::parse(text)
    }

    /// Free variables, in name order.
    pub fn free_vars(&self) -> BTreeSet<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, acc: &mut BTreeSet<String>) {
            let term = |t: &Term, bound: &Vec<String>, acc: &mut BTreeSet<String>| {
                if let Term::Var(v) = t {
                    if !bound.contains(v) {
                        acc.insert(v.clone());
                    }
                }
            };
            match f {
                Formula::Member(a, b) | Formula::Equal(a, b) => {
                    term(a, bound, acc);
                    term(b, bound, acc);
                }
                Formula::Not(p) => walk(p, bound, acc),
                Formula::And(p, q)
                | Formula::Or(p, q)
                | Formula::Implies(p, q)
                | Formula::Iff(p, q) => {
                    walk(p, bound, acc);
                    walk(q, bound, acc);
                }
                Formula::ForAll(v, p) | Formula::Exists(v, p) => {
                    bound.push(v.clone());
                    walk(p, bound, acc);
                    bound.pop();
                }
                Formula::ForAllIn(v, t, p) | Formula::ExistsIn(v, t, p) => {
                    term(t, bound, acc);
                    bound.push(v.clone());
                    walk(p, bound, acc);
                    bound.pop();
                }
            }
        }
        let mut acc = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut acc);
        acc
    }

    /// Every variable name bound by some quantifier.
    pub fn bound_vars(&self) -> BTreeSet<String> {
        let mut acc = BTreeSet::new();
        self.visit(&mut |f| {
            match f {
                Formula::ForAll(v, _)
                | Formula::Exists(v, _)
                | Formula::ForAllIn(v, _, _)
                | Formula::ExistsIn(v, _, _) => {
                    acc.insert(v.clone());
                }
                _ => {}
            }
        });
        acc
    }

    /// Maximum quantifier nesting; bounded quantifiers count one.
    pub fn quantifier_depth(&self) -> u32 {
        match self {
            Formula::Member(_, _) | Formula::Equal(_, _) => 0,
            Formula::Not(p) => p.quantifier_depth(),
            Formula::And(p, q)
            | Formula::Or(p, q)
            | Formula::Implies(p, q)
            | Formula::Iff(p, q) => p.quantifier_depth().max(q.quantifier_depth()),
            Formula::ForAll(_, p)
            | Formula::Exists(_, p)
            | Formula::ForAllIn(_, _, p)
            | Formula::ExistsIn(_, _, p) => 1 + p.quantifier_depth(),
        }
    }

    /// Rewrites bounded quantifiers into their guarded unbounded forms.
    pub fn desugar(&self) -> Formula {
        match self {
            Formula::Member(_, _) | Formula::Equal(_, _) => self.clone(),
            Formula::Not(p) => p.desugar().not(),
            Formula::And(p, q) => p.desugar().and(q.desugar()),
            Formula::Or(p, q) => p.desugar().or(q.desugar()),
            Formula::Implies(p, q) => p.desugar().implies(q.desugar()),
            Formula::Iff(p, q) => p.desugar().iff(q.desugar()),
            Formula::ForAll(v, p) => Formula::forall(v.clone(), p.desugar()),
            Formula::Exists(v, p) => Formula::exists(v.clone(), p.desugar()),
            Formula::ForAllIn(v, t, p) => Formula::forall(
                v.clone(),
                Formula::member(Term::var(v.clone()), t.clone()).implies(p.desugar()),
            ),
            Formula::ExistsIn(v, t, p) => Formula::exists(
                v.clone(),
                Formula::member(Term::var(v.clone()), t.clone()).and(p.desugar()),
            ),
        }
    }

    /// Relativizes every quantifier to `bound`. Already-bounded quantifiers
    /// keep their old bound as a membership guard. Free variables are not
    /// rewritten; evaluate the result only under assignments into `bound`.
    ///
    /// Errors when `bound` is a variable that some quantifier binds, since the
    /// rewritten occurrences would be captured.
    pub fn relativize(&self, bound: &Term) -> Result<Formula, FormulaError> {
        if let Term::Var(v) = bound {
            if self.bound_vars().contains(v) {
                return Err(FormulaError::BoundCapture { var: v.clone() });
            }
        }
        Ok(self.relativize_unchecked(bound))
    }

    fn relativize_unchecked(&self, bound: &Term) -> Formula {
        match self {
            Formula::Member(_, _) | Formula::Equal(_, _) => self.clone(),
            Formula::Not(p) => p.relativize_unchecked(bound).not(),
            Formula::And(p, q) => p.relativize_unchecked(bound).and(q.relativize_unchecked(bound)),
            Formula::Or(p, q) => p.relativize_unchecked(bound).or(q.relativize_unchecked(bound)),
            Formula::Implies(p, q) => p
                .relativize_unchecked(bound)
                .implies(q.relativize_unchecked(bound)),
            Formula::Iff(p, q) => p.relativize_unchecked(bound).iff(q.relativize_unchecked(bound)),
            Formula::ForAll(v, p) => {
                Formula::forall_in(v.clone(), bound.clone(), p.relativize_unchecked(bound))
            }
            Formula::Exists(v, p) => {
                Formula::exists_in(v.clone(), bound.clone(), p.relativize_unchecked(bound))
            }
            Formula::ForAllIn(v, t, p) => Formula::forall_in(
                v.clone(),
                bound.clone(),
                Formula::member(Term::var(v.clone()), t.clone())
                    .implies(p.relativize_unchecked(bound)),
            ),
            Formula::ExistsIn(v, t, p) => Formula::exists_in(
                v.clone(),
                bound.clone(),
                Formula::member(Term::var(v.clone()), t.clone()).and(p.relativize_unchecked(bound)),
            ),
        }
    }

    /// Largest tier-constant index mentioned, if any.
    pub fn max_constant(&self) -> Option<u32> {
        let mut max = None;
        self.visit_terms(&mut |t| {
            if let Term::ConstC(n) = t {
                max = Some(max.map_or(*n, |m: u32| m.max(*n)));
            }
        });
        max
    }

    /// Largest rank among literal parameters, if any.
    pub fn max_literal_rank(&self) -> Option<u32> {
        let mut max = None;
        self.visit_terms(&mut |t| {
            if let Term::Literal(s) = t {
                let r = s.rank();
                max = Some(max.map_or(r, |m: u32| m.max(r)));
            }
        });
        max
    }

    /// True when no constant `C_m` with `m > n` occurs. Literal ranks are
    /// checked by the tier configuration, which knows the stage bounds.
    pub fn is_safe_above(&self, n: u32) -> bool {
        self.max_constant().map_or(true, |m| m <= n)
    }

    fn visit(&self, f: &mut impl FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Member(_, _) | Formula::Equal(_, _) => {}
            Formula::Not(p) => p.visit(f),
            Formula::And(p, q)
            | Formula::Or(p, q)
            | Formula::Implies(p, q)
            | Formula::Iff(p, q) => {
                p.visit(f);
                q.visit(f);
            }
            Formula::ForAll(_, p)
            | Formula::Exists(_, p)
            | Formula::ForAllIn(_, _, p)
            | Formula::ExistsIn(_, _, p) => p.visit(f),
        }
    }

    fn visit_terms(&self, f: &mut impl FnMut(&Term)) {
        self.visit(&mut |node| match node {
            Formula::Member(a, b) | Formula::Equal(a, b) => {
                f(a);
                f(b);
            }
            Formula::ForAllIn(_, t, _) | Formula::ExistsIn(_, t, _) => f(t),
            _ => {}
        });
    }

    /// Renames quantified variables so that no binder shadows an enclosing one
    /// and no binder reuses a free variable of the whole formula.
    pub fn freshen(&self) -> Formula {
        let free = self.free_vars();
        let mut used: BTreeSet<String> = free.clone();
        used.extend(self.bound_vars());
        let mut scope: Vec<(String, String)> = Vec::new();
        self.freshen_walk(&free, &mut used, &mut scope)
    }

    fn freshen_walk(
        &self,
        free: &BTreeSet<String>,
        used: &mut BTreeSet<String>,
        scope: &mut Vec<(String, String)>,
    ) -> Formula {
        let rename_term = |t: &Term, scope: &Vec<(String, String)>| -> Term {
            match t {
                Term::Var(v) => {
                    for (from, to) in scope.iter().rev() {
                        if from == v {
                            return Term::var(to.clone());
                        }
                    }
                    t.clone()
                }
                _ => t.clone(),
            }
        };
        let bind = |v: &str,
                    free: &BTreeSet<String>,
                    used: &mut BTreeSet<String>,
                    scope: &Vec<(String, String)>|
         -> String {
            let clash = free.contains(v) || scope.iter().any(|(from, _)| from == v);
            if !clash {
                return v.to_string();
            }
            let mut k = 1;
            loop {
                let candidate = format!("{v}_{k}");
                if !used.contains(&candidate) {
                    used.insert(candidate.clone());
                    return candidate;
                }
                k += 1;
            }
        };
        match self {
            Formula::Member(a, b) => {
                Formula::member(rename_term(a, scope), rename_term(b, scope))
            }
            Formula::Equal(a, b) => Formula::equal(rename_term(a, scope), rename_term(b, scope)),
            Formula::Not(p) => p.freshen_walk(free, used, scope).not(),
            Formula::And(p, q) => p
                .freshen_walk(free, used, scope)
                .and(q.freshen_walk(free, used, scope)),
            Formula::Or(p, q) => p
                .freshen_walk(free, used, scope)
                .or(q.freshen_walk(free, used, scope)),
            Formula::Implies(p, q) => p
                .freshen_walk(free, used, scope)
                .implies(q.freshen_walk(free, used, scope)),
            Formula::Iff(p, q) => p
                .freshen_walk(free, used, scope)
                .iff(q.freshen_walk(free, used, scope)),
            Formula::ForAll(v, p) => {
                let fresh = bind(v, free, used, scope);
                scope.push((v.clone(), fresh.clone()));
                let body = p.freshen_walk(free, used, scope);
                scope.pop();
                Formula::forall(fresh, body)
            }
            Formula::Exists(v, p) => {
                let fresh = bind(v, free, used, scope);
                scope.push((v.clone(), fresh.clone()));
                let body = p.freshen_walk(free, used, scope);
                scope.pop();
                Formula::exists(fresh, body)
            }
            Formula::ForAllIn(v, t, p) => {
                let t = rename_term(t, scope);
                let fresh = bind(v, free, used, scope);
                scope.push((v.clone(), fresh.clone()));
                let body = p.freshen_walk(free, used, scope);
                scope.pop();
                Formula::forall_in(fresh, t, body)
            }
            Formula::ExistsIn(v, t, p) => {
                let t = rename_term(t, scope);
                let fresh = bind(v, free, used, scope);
                scope.push((v.clone(), fresh.clone()));
                let body = p.freshen_walk(free, used, scope);
                scope.pop();
                Formula::exists_in(fresh, t, body)
            }
        }
    }
}

// Rendering with minimal parentheses. Quantified formulas bind loosest and are
// parenthesized whenever they sit inside a connective.
const PREC_QUANT: u8 = 0;
const PREC_IFF: u8 = 1;
const PREC_IMPLIES: u8 = 2;
const PREC_OR: u8 = 3;
const PREC_AND: u8 = 4;
const PREC_UNARY: u8 = 5;

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::ForAll(_, _)
        | Formula::Exists(_, _)
        | Formula::ForAllIn(_, _, _)
        | Formula::ExistsIn(_, _, _) => PREC_QUANT,
        Formula::Iff(_, _) => PREC_IFF,
        Formula::Implies(_, _) => PREC_IMPLIES,
        Formula::Or(_, _) => PREC_OR,
        Formula::And(_, _) => PREC_AND,
        Formula::Not(_) | Formula::Member(_, _) | Formula::Equal(_, _) => PREC_UNARY,
    }
}

fn render(f: &Formula, min: u8, out: &mut String) {
    let need_parens = prec(f) < min;
    if need_parens {
        out.push('(');
    }
    match f {
        Formula::Member(a, b) => {
            out.push_str(&format!("{a} in {b}"));
        }
        Formula::Equal(a, b) => {
            out.push_str(&format!("{a} = {b}"));
        }
        Formula::Not(p) => {
            out.push('!');
            render(p, PREC_UNARY, out);
        }
        Formula::And(p, q) => {
            render(p, PREC_AND, out);
            out.push_str(" & ");
            render(q, PREC_UNARY, out);
        }
        Formula::Or(p, q) => {
            render(p, PREC_OR, out);
            out.push_str(" | ");
            render(q, PREC_AND, out);
        }
        Formula::Implies(p, q) => {
            render(p, PREC_OR, out);
            out.push_str(" -> ");
            render(q, PREC_IMPLIES, out);
        }
        Formula::Iff(p, q) => {
            render(p, PREC_IFF, out);
            out.push_str(" <-> ");
            render(q, PREC_IMPLIES, out);
        }
        Formula::ForAll(v, p) => {
            out.push_str(&format!("forall {v}. "));
            render(p, PREC_QUANT, out);
        }
        Formula::Exists(v, p) => {
            out.push_str(&format!("exists {v}. "));
            render(p, PREC_QUANT, out);
        }
        Formula::ForAllIn(v, t, p) => {
            out.push_str(&format!("forall {v} in {t}. "));
            render(p, PREC_QUANT, out);
        }
        Formula::ExistsIn(v, t, p) => {
            out.push_str(&format!("exists {v} in {t}. "));
            render(p, PREC_QUANT, out);
        }
    }
    if need_parens {
        out.push(')');
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        render(self, PREC_QUANT, &mut out);
        f.write_str(&out)
    }
}
