//! Axiom audits with witness extraction.
//!
//! An audit evaluates every builtin axiom in a structure and, for each
//! failure, produces a replayable witness: the lexicographically least
//! assignment (in universe order) obtained by stripping the leading
//! universal prefix, together with the residual formula that is false under
//! it. Separation is audited as a schema over a formula battery; the report
//! carries one verdict per battery instance.

use serde_json::{json, Value};

use super::{
    eval, eval_term, satisfies_with_budget, Assignment, Budget, Env, ModelError, Structure,
};
use crate::formula::{builtin, separation_instance, AxiomId, Formula};
use crate::hf::HfSet;

/// A falsifying assignment plus the subformula it falsifies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub assignment: Vec<(String, HfSet)>,
    pub residual: Formula,
}

impl Witness {
    pub fn to_json(&self) -> Value {
        let assignment: Vec<Value> = self
            .assignment
            .iter()
            .map(|(var, value)| json!({ "var": var, "value": value.to_string() }))
            .collect();
        json!({ "assignment": assignment, "residual": self.residual.to_string() })
    }
}

/// Outcome of checking one sentence (or one schema row).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Witness),
    /// The budget ran out; `explored` nodes were evaluated without a verdict.
    Sampled {
        explored: u64,
    },
    NotExercised,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Fails(_) => "fails",
            Verdict::Sampled { .. } => "sampled",
            Verdict::NotExercised => "not_exercised",
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Verdict::Holds => json!({ "status": "holds" }),
            Verdict::Fails(w) => json!({ "status": "fails", "witness": w.to_json() }),
            Verdict::Sampled { explored } => {
                json!({ "status": "sampled", "explored": explored })
            }
            Verdict::NotExercised => json!({ "status": "not_exercised" }),
        }
    }
}

/// One separation instance: `phi` is separated along `var`.
#[derive(Debug, Clone)]
pub struct BatteryItem {
    pub id: String,
    pub var: String,
    pub phi: Formula,
}

impl BatteryItem {
    pub fn new(id: &str, var: &str, phi: &str) -> Self {
        BatteryItem {
            id: id.to_string(),
            var: var.to_string(),
            phi: Formula::parse(phi).expect("battery formulas are well formed"),
        }
    }
}

/// The default separation battery: a spread of definable conditions, with and
/// without parameters. Identifiers are stable and appear in reports.
pub fn standard_battery() -> Vec<BatteryItem> {
    vec![
        BatteryItem::new("all", "z", "z = z"),
        BatteryItem::new("none", "z", "!(z = z)"),
        BatteryItem::new("self_member", "z", "z in z"),
        BatteryItem::new("nonempty", "z", "exists w in z. w = w"),
        BatteryItem::new("empty", "z", "forall w in z. !(w = w)"),
        BatteryItem::new("transitive", "z", "forall w in z. forall u in w. u in z"),
        BatteryItem::new(
            "singleton",
            "z",
            "(exists w in z. w = w) & (forall w in z. forall u in z. w = u)",
        ),
        BatteryItem::new("at_least_two", "z", "exists w in z. exists u in z. !(w = u)"),
        BatteryItem::new("has_container", "z", "exists w. z in w"),
        BatteryItem::new("intersect_param", "z", "z in p"),
        BatteryItem::new("avoid_param", "z", "!(z in p)"),
        BatteryItem::new("members_outside", "z", "forall w in z. !(w in z)"),
    ]
}

#[derive(Debug, Clone, Copy)]
pub struct AuditOptions {
    pub budget: u64,
    /// Headline the literal foundation reading instead of the guarded one.
    pub literal_foundation: bool,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions {
            budget: super::DEFAULT_NODE_BUDGET,
            literal_foundation: false,
        }
    }
}

/// Verdict for one battery instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceOutcome {
    pub id: String,
    pub formula: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditRow {
    pub label: String,
    pub description: String,
    /// Rendered sentence for plain axioms, `None` for schema rows.
    pub formula: Option<String>,
    pub verdict: Verdict,
    pub instances: Vec<InstanceOutcome>,
}

impl AuditRow {
    pub fn to_json(&self) -> Value {
        let instances: Vec<Value> = self
            .instances
            .iter()
            .map(|i| {
                json!({ "id": i.id, "formula": i.formula, "verdict": i.verdict.to_json() })
            })
            .collect();
        json!({
            "label": self.label,
            "description": self.description,
            "formula": self.formula,
            "verdict": self.verdict.to_json(),
            "instances": instances,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub card: usize,
    pub rows: Vec<AuditRow>,
    pub foundation: String,
}

impl AuditReport {
    pub fn row(&self, label: &str) -> Option<&AuditRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self.rows.iter().map(AuditRow::to_json).collect();
        json!({ "card": self.card, "rows": rows, "foundation": self.foundation })
    }
}

/// Checks one sentence, extracting a witness on failure.
pub fn verdict(m: &Structure, f: &Formula, budget: u64) -> Result<Verdict, ModelError> {
    match satisfies_with_budget(m, f, &Assignment::new(), budget) {
        Ok((true, _)) => Ok(Verdict::Holds),
        Ok((false, _)) => Ok(Verdict::Fails(find_witness(m, f, budget)?)),
        Err(ModelError::BudgetExceeded { budget }) => Ok(Verdict::Sampled { explored: budget }),
        Err(e) => Err(e),
    }
}

/// Walks the leading universal prefix of a false sentence, binding each
/// variable to the least falsifying element. Bounded universals draw their
/// candidates from the bound's members inside the universe.
fn find_witness(m: &Structure, f: &Formula, budget: u64) -> Result<Witness, ModelError> {
    let base = Assignment::new();
    let mut frames: Vec<(String, HfSet)> = Vec::new();
    let mut current = f.clone();
    loop {
        let falsifier = |frames: &[(String, HfSet)],
                         var: &str,
                         candidates: &[HfSet],
                         body: &Formula|
         -> Result<Option<HfSet>, ModelError> {
            for u in candidates {
                let mut env = Env::new(&base);
                for (v, x) in frames {
                    env.push(v, x.clone());
                }
                env.push(var, u.clone());
                let mut probe = Budget::new(budget);
                if !eval(m, body, &mut env, &mut probe)? {
                    return Ok(Some(u.clone()));
                }
            }
            Ok(None)
        };
        match current {
            Formula::ForAll(var, body) => {
                let u = falsifier(&frames, &var, m.universe(), &body)?
                    .expect("a false universal has a falsifying element");
                frames.push((var, u));
                current = *body;
            }
            Formula::ForAllIn(var, bound, body) => {
                let mut env = Env::new(&base);
                for (v, x) in &frames {
                    env.push(v, x.clone());
                }
                let bound_val = eval_term(m, &bound, &env)?;
                let candidates: Vec<HfSet> = bound_val
                    .members()
                    .iter()
                    .filter(|u| m.contains(u))
                    .cloned()
                    .collect();
                let u = falsifier(&frames, &var, &candidates, &body)?
                    .expect("a false bounded universal has a falsifying member");
                frames.push((var, u));
                current = *body;
            }
            other => {
                return Ok(Witness {
                    assignment: frames,
                    residual: other,
                })
            }
        }
    }
}

/// Audits all builtin axioms plus the separation schema over `battery`.
///
/// Rows appear in the fixed order Z1, Z2, Z3, Z4, Z5, Z5_literal, Z6, Z7,
/// F1_guarded, F1_literal. The `foundation` field summarizes the two
/// foundation readings.
pub fn axiom_audit(
    m: &Structure,
    battery: &[BatteryItem],
    opts: &AuditOptions,
) -> Result<AuditReport, ModelError> {
    let mut rows = Vec::new();
    let axiom_row = |id: AxiomId| -> Result<AuditRow, ModelError> {
        let f = builtin(id);
        Ok(AuditRow {
            label: id.label().to_string(),
            description: id.description().to_string(),
            formula: Some(f.to_string()),
            verdict: verdict(m, &f, opts.budget)?,
            instances: Vec::new(),
        })
    };

    rows.push(axiom_row(AxiomId::Z1)?);

    let mut instances = Vec::new();
    for item in battery {
        let f = separation_instance(&item.phi, &item.var);
        instances.push(InstanceOutcome {
            id: item.id.clone(),
            formula: f.to_string(),
            verdict: verdict(m, &f, opts.budget)?,
        });
    }
    let schema_verdict = if instances.is_empty() {
        Verdict::NotExercised
    } else if let Some(bad) = instances
        .iter()
        .find(|i| matches!(i.verdict, Verdict::Fails(_)))
    {
        bad.verdict.clone()
    } else if let Some(out) = instances
        .iter()
        .find(|i| matches!(i.verdict, Verdict::Sampled { .. }))
    {
        out.verdict.clone()
    } else {
        Verdict::Holds
    };
    rows.push(AuditRow {
        label: "Z2".to_string(),
        description: "separation (schema)".to_string(),
        formula: None,
        verdict: schema_verdict,
        instances,
    });

    for id in [
        AxiomId::Z3,
        AxiomId::Z4,
        AxiomId::Z5Charitable,
        AxiomId::Z5Literal,
        AxiomId::Z6,
        AxiomId::Z7,
        AxiomId::F1Guarded,
        AxiomId::F1Literal,
    ] {
        rows.push(axiom_row(id)?);
    }

    let guarded = rows
        .iter()
        .find(|r| r.label == "F1_guarded")
        .map(|r| r.verdict.clone())
        .unwrap();
    let literal = rows
        .iter()
        .find(|r| r.label == "F1_literal")
        .map(|r| r.verdict.clone())
        .unwrap();
    let foundation = if opts.literal_foundation {
        match &literal {
            Verdict::Holds => "well-founded in the literal reading".to_string(),
            Verdict::Fails(_) => "not well-founded in the literal reading".to_string(),
            _ => "foundation undetermined within budget".to_string(),
        }
    } else {
        match (&guarded, &literal) {
            (Verdict::Holds, Verdict::Holds) => "well-founded in both readings".to_string(),
            (Verdict::Holds, Verdict::Fails(_)) => {
                "well-founded in the guarded reading; the literal reading fails".to_string()
            }
            (Verdict::Fails(_), _) => "not well-founded".to_string(),
            _ => "foundation undetermined within budget".to_string(),
        }
    };

    Ok(AuditReport {
        card: m.card(),
        rows,
        foundation,
    })
}
