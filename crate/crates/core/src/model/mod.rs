//! Finite structures for the membership language and satisfaction over them.
//!
//! A [`Structure`] is a finite set of hereditarily finite sets with the
//! membership relation inherited from the ambient universe, plus an optional
//! interpretation of the tier constants `C0, C1, ...`. Satisfaction is the
//! usual Tarski recursion; unbounded quantifiers range over the whole
//! universe, bounded ones only over those members of the bound that belong to
//! the universe. Every connective and atom evaluated costs one node against
//! an explicit budget, so runaway instances surface as
//! [`ModelError::BudgetExceeded`] instead of wall-clock pain.

mod audit;
mod ef;
mod enumerate;

pub use audit::{
    axiom_audit, standard_battery, verdict, AuditOptions, AuditReport, AuditRow, BatteryItem,
    InstanceOutcome, Verdict, Witness,
};
pub use ef::{elementary_d, EfOutcome, EfReport};
pub use enumerate::enumerate_formulas;

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::formula::{Formula, Term};
use crate::hf::{HfError, HfSet};

/// Default cap on evaluation nodes for a single satisfaction query.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("variable '{var}' has no value in the assignment")]
    UnboundVariable { var: String },
    #[error("constant C{index} is not interpreted in this structure")]
    UninterpretedConstant { index: u32 },
    #[error("evaluation exceeded the budget of {budget} nodes")]
    BudgetExceeded { budget: u64 },
    #[error("'{element}' belongs to the left structure but not the right")]
    NotSubstructure { element: String },
    #[error("{what} is capped at {max} for game search, got {given}")]
    GameLimit {
        what: &'static str,
        max: u32,
        given: u32,
    },
    #[error("structure description: {msg}")]
    Description { msg: String },
    #[error(transparent)]
    Hf(#[from] HfError),
}

/// Variable assignment supplied by callers of [`satisfies`].
pub type Assignment = BTreeMap<String, HfSet>;

/// A finite membership structure with optional tier constants.
///
/// The universe is kept sorted in canonical set order, so membership queries
/// are binary searches and reports enumerate elements deterministically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    universe: Vec<HfSet>,
    tiers: BTreeMap<u32, HfSet>,
}

impl Structure {
    pub fn new(elements: Vec<HfSet>) -> Self {
        Structure::with_tiers(elements, BTreeMap::new())
    }

    pub fn with_tiers(mut elements: Vec<HfSet>, tiers: BTreeMap<u32, HfSet>) -> Self {
        elements.sort();
        elements.dedup();
        Structure {
            universe: elements,
            tiers,
        }
    }

    /// The universe of `x` viewed as a structure: the members of `x` form the
    /// domain and `x` itself supplies nothing else.
    pub fn from_set(x: &HfSet) -> Self {
        Structure::new(x.members().to_vec())
    }

    pub fn universe(&self) -> &[HfSet] {
        &self.universe
    }

    pub fn tiers(&self) -> &BTreeMap<u32, HfSet> {
        &self.tiers
    }

    pub fn set_tier(&mut self, index: u32, value: HfSet) {
        self.tiers.insert(index, value);
    }

    pub fn card(&self) -> usize {
        self.universe.len()
    }

    pub fn contains(&self, x: &HfSet) -> bool {
        self.universe.binary_search(x).is_ok()
    }

    /// The universe collected back into a single set.
    pub fn as_set(&self) -> HfSet {
        HfSet::from_members(self.universe.clone())
    }

    pub fn is_substructure_of(&self, other: &Structure) -> bool {
        self.universe.iter().all(|x| other.contains(x))
    }

    /// The substructure induced by `x`: those members of `x` that lie in the
    /// universe, with the tier interpretation carried over.
    pub fn induced(&self, x: &HfSet) -> Structure {
        let elements = x
            .members()
            .iter()
            .filter(|m| self.contains(m))
            .cloned()
            .collect();
        Structure::with_tiers(elements, self.tiers.clone())
    }

    /// Serializes as `{"universe": [...], "tiers": {"0": "...", ...}}` with
    /// every set in brace notation.
    pub fn to_json(&self) -> Value {
        let universe: Vec<Value> = self
            .universe
            .iter()
            .map(|x| Value::String(x.to_string()))
            .collect();
        let tiers: serde_json::Map<String, Value> = self
            .tiers
            .iter()
            .map(|(k, v)| (k.to_string(), Value::String(v.to_string())))
            .collect();
        json!({ "universe": universe, "tiers": tiers })
    }

    pub fn from_json(value: &Value) -> Result<Self, ModelError> {
        let obj = value.as_object().ok_or_else(|| ModelError::Description {
            msg: "expected a JSON object".into(),
        })?;
        let raw_universe = obj
            .get("universe")
            .and_then(Value::as_array)
            .ok_or_else(|| ModelError::Description {
                msg: "missing 'universe' array".into(),
            })?;
        let mut elements = Vec::with_capacity(raw_universe.len());
        for entry in raw_universe {
            let text = entry.as_str().ok_or_else(|| ModelError::Description {
                msg: "universe entries must be strings".into(),
            })?;
            elements.push(text.parse::<HfSet>()?);
        }
        let mut tiers = BTreeMap::new();
        if let Some(raw_tiers) = obj.get("tiers") {
            let map = raw_tiers.as_object().ok_or_else(|| ModelError::Description {
                msg: "'tiers' must be an object".into(),
            })?;
            for (key, entry) in map {
                let index: u32 = key.parse().map_err(|_| ModelError::Description {
                    msg: format!("tier key '{key}' is not an index"),
                })?;
                let text = entry.as_str().ok_or_else(|| ModelError::Description {
                    msg: "tier entries must be strings".into(),
                })?;
                tiers.insert(index, text.parse::<HfSet>()?);
            }
        }
        Ok(Structure::with_tiers(elements, tiers))
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.universe.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

pub(crate) struct Budget {
    limit: u64,
    used: u64,
}

impl Budget {
    pub(crate) fn new(limit: u64) -> Self {
        Budget { limit, used: 0 }
    }

    pub(crate) fn tick(&mut self) -> Result<(), ModelError> {
        self.used += 1;
        if self.used > self.limit {
            Err(ModelError::BudgetExceeded { budget: self.limit })
        } else {
            Ok(())
        }
    }

    pub(crate) fn used(&self) -> u64 {
        self.used
    }
}

/// Scoped environment: the caller's assignment underneath quantifier frames.
pub(crate) struct Env<'a> {
    base: &'a Assignment,
    frames: Vec<(String, HfSet)>,
}

impl<'a> Env<'a> {
    pub(crate) fn new(base: &'a Assignment) -> Self {
        Env {
            base,
            frames: Vec::new(),
        }
    }

    pub(crate) fn lookup(&self, var: &str) -> Option<&HfSet> {
        self.frames
            .iter()
            .rev()
            .find(|(name, _)| name == var)
            .map(|(_, value)| value)
            .or_else(|| self.base.get(var))
    }

    pub(crate) fn push(&mut self, var: &str, value: HfSet) {
        self.frames.push((var.to_string(), value));
    }

    pub(crate) fn pop(&mut self) {
        self.frames.pop();
    }
}

/// Evaluates `f` in `m` under `asg` with the default node budget.
pub fn satisfies(m: &Structure, f: &Formula, asg: &Assignment) -> Result<bool, ModelError> {
    satisfies_with_budget(m, f, asg, DEFAULT_NODE_BUDGET).map(|(value, _)| value)
}

/// Evaluates `f` and reports the number of nodes visited.
pub fn satisfies_with_budget(
    m: &Structure,
    f: &Formula,
    asg: &Assignment,
    limit: u64,
) -> Result<(bool, u64), ModelError> {
    for var in f.free_vars() {
        if !asg.contains_key(&var) {
            return Err(ModelError::UnboundVariable { var });
        }
    }
    let mut env = Env::new(asg);
    let mut budget = Budget::new(limit);
    let value = eval(m, f, &mut env, &mut budget)?;
    Ok((value, budget.used()))
}

pub(crate) fn eval_term(
    m: &Structure,
    t: &Term,
    env: &Env<'_>,
) -> Result<HfSet, ModelError> {
    match t {
        Term::Var(v) => env
            .lookup(v)
            .cloned()
            .ok_or_else(|| ModelError::UnboundVariable { var: v.clone() }),
        Term::ConstC(n) => m
            .tiers
            .get(n)
            .cloned()
            .ok_or(ModelError::UninterpretedConstant { index: *n }),
        Term::Literal(s) => Ok(s.clone()),
    }
}

pub(crate) fn eval(
    m: &Structure,
    f: &Formula,
    env: &mut Env<'_>,
    budget: &mut Budget,
) -> Result<bool, ModelError> {
    budget.tick()?;
    match f {
        Formula::Member(a, b) => {
            let a = eval_term(m, a, env)?;
            let b = eval_term(m, b, env)?;
            Ok(b.contains(&a))
        }
        Formula::Equal(a, b) => Ok(eval_term(m, a, env)? == eval_term(m, b, env)?),
        Formula::Not(p) => Ok(!eval(m, p, env, budget)?),
        Formula::And(p, q) => Ok(eval(m, p, env, budget)? && eval(m, q, env, budget)?),
        Formula::Or(p, q) => Ok(eval(m, p, env, budget)? || eval(m, q, env, budget)?),
        Formula::Implies(p, q) => Ok(!eval(m, p, env, budget)? || eval(m, q, env, budget)?),
        Formula::Iff(p, q) => Ok(eval(m, p, env, budget)? == eval(m, q, env, budget)?),
        Formula::ForAll(v, p) => {
            for u in &m.universe {
                env.push(v, u.clone());
                let ok = eval(m, p, env, budget);
                env.pop();
                if !ok? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Exists(v, p) => {
            for u in &m.universe {
                env.push(v, u.clone());
                let ok = eval(m, p, env, budget);
                env.pop();
                if ok? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::ForAllIn(v, t, p) => {
            let bound = eval_term(m, t, env)?;
            for u in bound.members() {
                if !m.contains(u) {
                    continue;
                }
                env.push(v, u.clone());
                let ok = eval(m, p, env, budget);
                env.pop();
                if !ok? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::ExistsIn(v, t, p) => {
            let bound = eval_term(m, t, env)?;
            for u in bound.members() {
                if !m.contains(u) {
                    continue;
                }
                env.push(v, u.clone());
                let ok = eval(m, p, env, budget);
                env.pop();
                if ok? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}
