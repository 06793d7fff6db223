//! The builtin axiom library.
//!
//! Every axiom is a closed formula over primitive `∈`/`=`; defined notions
//! (empty set, successor, ordered pair, function, domain, range) are expanded
//! at construction time. Quantifiers that range over members of an
//! already-quantified set use the bounded sugar, which evaluates over actual
//! members; this keeps the expansions tractable without changing truth values.
//!
//! Separation is a schema: [`separation_instance`] closes over the parameters
//! of the supplied predicate. Audits run it over a formula battery.

use std::collections::BTreeSet;
use std::fmt;

use super::{Formula, Term};

/// Identifiers for the closed builtin axioms.
///
/// Z5 carries two readings: the literal display with the spurious `∅ ∈ X`
/// conjunct dropped from its biconditional (`Z5Literal`), and the charitable
/// reading that folds the empty set into the biconditional (`Z5Charitable`).
/// Foundation likewise comes in the literal form, false at the empty set, and
/// the guarded form restricted to nonempty sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AxiomId {
    Z1,
    Z3,
    Z4,
    Z5Charitable,
    Z5Literal,
    Z6,
    Z7,
    F1Guarded,
    F1Literal,
}

impl AxiomId {
    pub const ALL: [AxiomId; 9] = [
        AxiomId::Z1,
        AxiomId::Z3,
        AxiomId::Z4,
        AxiomId::Z5Charitable,
        AxiomId::Z5Literal,
        AxiomId::Z6,
        AxiomId::Z7,
        AxiomId::F1Guarded,
        AxiomId::F1Literal,
    ];

    pub fn label(self) -> &'static str {
        match self {
            AxiomId::Z1 => "Z1",
            AxiomId::Z3 => "Z3",
            AxiomId::Z4 => "Z4",
            AxiomId::Z5Charitable => "Z5",
            AxiomId::Z5Literal => "Z5_literal",
            AxiomId::Z6 => "Z6",
            AxiomId::Z7 => "Z7",
            AxiomId::F1Guarded => "F1_guarded",
            AxiomId::F1Literal => "F1_literal",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            AxiomId::Z1 => "extensionality",
            AxiomId::Z3 => "pairing",
            AxiomId::Z4 => "union",
            AxiomId::Z5Charitable => "infinity (charitable reading)",
            AxiomId::Z5Literal => "infinity (literal display)",
            AxiomId::Z6 => "powercollection",
            AxiomId::Z7 => "choice",
            AxiomId::F1Guarded => "foundation (guarded)",
            AxiomId::F1Literal => "foundation (literal)",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

fn v(name: &str) -> Term {
    Term::var(name)
}

fn mem(a: &str, b: &str) -> Formula {
    Formula::member(v(a), v(b))
}

fn eq(a: &str, b: &str) -> Formula {
    Formula::equal(v(a), v(b))
}

/// `x` has no members: `forall w in x. !(w = w)`.
fn is_empty(x: &str, w: &str) -> Formula {
    Formula::forall_in(w, v(x), eq(w, w).not())
}

/// `y = S(z)`, i.e. `y = z ∪ {z}`, by two-sided containment.
fn is_successor(y: &str, z: &str, w: &str) -> Formula {
    mem(z, y)
        .and(Formula::forall_in(w, v(y), mem(w, z).or(eq(w, z))))
        .and(Formula::forall_in(w, v(z), mem(w, y)))
}

/// `q = {a}`.
fn is_singleton_of(q: &str, a: &str, r: &str) -> Formula {
    mem(a, q).and(Formula::forall_in(r, v(q), eq(r, a)))
}

/// `q = {a, b}`.
fn is_pair_of(q: &str, a: &str, b: &str, r: &str) -> Formula {
    mem(a, q)
        .and(mem(b, q))
        .and(Formula::forall_in(r, v(q), eq(r, a).or(eq(r, b))))
}

/// `p` is the Kuratowski pair `(a, b)`.
fn is_kuratowski(p: &str, a: &str, b: &str) -> Formula {
    Formula::exists_in("q", v(p), is_singleton_of("q", a, "r"))
        .and(Formula::exists_in("q", v(p), is_pair_of("q", a, b, "r")))
        .and(Formula::forall_in(
            "q",
            v(p),
            is_singleton_of("q", a, "r").or(is_pair_of("q", a, b, "r")),
        ))
}

/// `(y, val) ∈ f`.
fn pair_in(f: &str, y: &str, val: &str) -> Formula {
    Formula::exists_in("p", v(f), is_kuratowski("p", y, val))
}

/// Closed builtin axiom for `id`.
pub fn builtin(id: AxiomId) -> Formula {
    match id {
        // ∀x ∀y (x = y ↔ ∀z (z ∈ x ↔ z ∈ y))
        AxiomId::Z1 => Formula::forall(
            "x",
            Formula::forall(
                "y",
                eq("x", "y").iff(Formula::forall("z", mem("z", "x").iff(mem("z", "y")))),
            ),
        ),
        // ∀x ∀y ∃z ∀a (a ∈ z ↔ a = x ∨ a = y)
        AxiomId::Z3 => Formula::forall(
            "x",
            Formula::forall(
                "y",
                Formula::exists(
                    "z",
                    Formula::forall("a", mem("a", "z").iff(eq("a", "x").or(eq("a", "y")))),
                ),
            ),
        ),
        // ∀x ∃y ∀z (z ∈ y ↔ ∃a ∈ x. z ∈ a)
        AxiomId::Z4 => Formula::forall(
            "x",
            Formula::exists(
                "y",
                Formula::forall(
                    "z",
                    mem("z", "y").iff(Formula::exists_in("a", v("x"), mem("z", "a"))),
                ),
            ),
        ),
        // ∃x ∀y (y ∈ x ↔ y = ∅ ∨ ∃z ∈ x. y = S(z))
        AxiomId::Z5Charitable => Formula::exists(
            "x",
            Formula::forall(
                "y",
                mem("y", "x").iff(
                    is_empty("y", "w")
                        .or(Formula::exists_in("z", v("x"), is_successor("y", "z", "u"))),
                ),
            ),
        ),
        // ∃x (∅ ∈ x ∧ ∀y (y ∈ x ↔ ∃z ∈ x. y = S(z)))
        AxiomId::Z5Literal => Formula::exists(
            "x",
            Formula::exists_in("e", v("x"), is_empty("e", "w")).and(Formula::forall(
                "y",
                mem("y", "x")
                    .iff(Formula::exists_in("z", v("x"), is_successor("y", "z", "u"))),
            )),
        ),
        // ∀x ∃y ∀z (z ⊆ x ↔ z ∈ y)
        AxiomId::Z6 => Formula::forall(
            "x",
            Formula::exists(
                "y",
                Formula::forall(
                    "z",
                    Formula::forall_in("w", v("z"), mem("w", "x")).iff(mem("z", "y")),
                ),
            ),
        ),
        // ∀x (∅ ∉ x → ∃f (f a choice function on x)), with the function talk
        // expanded: every member of f pairs a member y of x with some v ∈ y
        // (so rng f ⊆ ⋃x and f(y) ∈ y), every y ∈ x is paired (dmn f = x),
        // and the pairing is single-valued.
        AxiomId::Z7 => {
            let covers = Formula::forall_in(
                "p",
                v("f"),
                Formula::exists_in(
                    "y",
                    v("x"),
                    Formula::exists_in("val", v("y"), is_kuratowski("p", "y", "val")),
                ),
            );
            let entire = Formula::forall_in(
                "y",
                v("x"),
                Formula::exists_in("val", v("y"), pair_in("f", "y", "val")),
            );
            let single_valued = Formula::forall_in(
                "y",
                v("x"),
                Formula::forall_in(
                    "val",
                    v("y"),
                    Formula::forall_in(
                        "val2",
                        v("y"),
                        pair_in("f", "y", "val")
                            .and(pair_in("f", "y", "val2"))
                            .implies(eq("val", "val2")),
                    ),
                ),
            );
            Formula::forall(
                "x",
                Formula::exists_in("e", v("x"), is_empty("e", "w"))
                    .not()
                    .implies(Formula::exists(
                        "f",
                        covers.and(entire).and(single_valued),
                    )),
            )
        }
        // ∀x (∃m ∈ x → ∃y ∈ x. y ∩ x = ∅)
        AxiomId::F1Guarded => Formula::forall(
            "x",
            Formula::exists_in("m", v("x"), eq("m", "m")).implies(Formula::exists_in(
                "y",
                v("x"),
                Formula::exists_in("w", v("y"), mem("w", "x")).not(),
            )),
        ),
        // ∀x ∃y ∈ x. y ∩ x = ∅ (false at x = ∅)
        AxiomId::F1Literal => Formula::forall(
            "x",
            Formula::exists_in(
                "y",
                v("x"),
                Formula::exists_in("w", v("y"), mem("w", "x")).not(),
            ),
        ),
    }
}

/// Separation instance for predicate `phi` with distinguished variable `var`:
/// `∀params ∀src ∃out ∀var (var ∈ out ↔ var ∈ src ∧ phi)`, where `params` are
/// the remaining free variables of `phi` in name order.
pub fn separation_instance(phi: &Formula, var: &str) -> Formula {
    let mut used: BTreeSet<String> = phi.free_vars();
    used.extend(phi.bound_vars());
    used.insert(var.to_string());
    let fresh = |base: &str, used: &mut BTreeSet<String>| -> String {
        if !used.contains(base) {
            used.insert(base.to_string());
            return base.to_string();
        }
        let mut k = 1;
        loop {
            let candidate = format!("{base}_{k}");
            if !used.contains(&candidate) {
                used.insert(candidate.clone());
                return candidate;
            }
            k += 1;
        }
    };
    let src = fresh("x", &mut used);
    let out = fresh("y", &mut used);
    let mut params: Vec<String> = phi.free_vars().into_iter().collect();
    params.retain(|p| p != var);

    let body = Formula::member(Term::var(var), Term::var(out.clone())).iff(
        Formula::member(Term::var(var), Term::var(src.clone())).and(phi.clone()),
    );
    let mut f = Formula::forall(
        src,
        Formula::exists(out, Formula::forall(var, body)),
    );
    for p in params.into_iter().rev() {
        f = Formula::forall(p, f);
    }
    f
}
