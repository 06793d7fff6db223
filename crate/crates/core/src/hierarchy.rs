//! Cumulative stages and tiered universes.
//!
//! `build_stage(k)` materializes V_k (V_0 = empty, V_{k+1} = powerset of
//! V_k) behind a process-wide cache; stages are the carriers for every tier
//! check. A [`TierConfig`] picks strictly increasing stage indices
//! k_0 < k_1 < ... to play the role of the constant universes C_0, C_1, ...;
//! constant `Cn` in a formula denotes the stage set of tier `n`.
//!
//! The checks mirror a ladder of closure principles at finite scale:
//! completeness plus axiom audits per tier (A2), round-limited elementarity
//! between consecutive tiers (A3), building collections from safe formulas
//! one level up (A4) together with the lemma that `X = X` rebuilds the tier
//! itself, and closure of ranges of finite functions (A5). Failures are
//! expected at boundary ranks and always carry witnesses.

use std::collections::BTreeSet;
use std::sync::{Arc, Mutex, OnceLock};

use serde_json::{json, Value};
use thiserror::Error;

use crate::formula::Formula;
use crate::hf::{HfError, HfSet, DEFAULT_CARD_BOUND};
use crate::model::{
    axiom_audit, elementary_d, satisfies_with_budget, Assignment, AuditOptions, AuditReport,
    BatteryItem, EfReport, ModelError, Structure,
};

/// Largest stage that may be materialized; |V_5| = 65536.
pub const MAX_STAGE: u32 = 5;

/// Cap on functions enumerated by [`check_a5`].
pub const DEFAULT_FUNCTION_CAP: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HierarchyError {
    #[error("stage {k} exceeds the maximum materialized stage {max}")]
    StageTooLarge { k: u32, max: u32 },
    #[error("tier configuration: {msg}")]
    Config { msg: String },
    #[error("tier {n} out of range for a {len}-tier configuration")]
    TierOutOfRange { n: usize, len: usize },
    #[error("formula is not safe above tier {n}: {reason}")]
    UnsafeFormula { n: usize, reason: String },
    #[error("collection building needs exactly one free variable, found {found:?}")]
    FreeVariables { found: Vec<String> },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Hf(#[from] HfError),
}

/// A materialized cumulative stage.
#[derive(Debug)]
pub struct Stage {
    pub index: u32,
    /// V_k as a single set.
    pub set: HfSet,
    carrier: Structure,
}

impl Stage {
    /// The stage as a structure; no tier constants attached.
    pub fn carrier(&self) -> &Structure {
        &self.carrier
    }

    pub fn card(&self) -> usize {
        self.carrier.card()
    }
}

fn stage_cache() -> &'static Mutex<Vec<Arc<Stage>>> {
    static CACHE: OnceLock<Mutex<Vec<Arc<Stage>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(Vec::new()))
}

/// Builds (or fetches) V_k.
pub fn build_stage(k: u32) -> Result<Arc<Stage>, HierarchyError> {
    if k > MAX_STAGE {
        return Err(HierarchyError::StageTooLarge { k, max: MAX_STAGE });
    }
    let mut cache = stage_cache().lock().unwrap();
    while cache.len() <= k as usize {
        let set = match cache.last() {
            None => HfSet::empty(),
            Some(prev) => prev.set.powerset()?,
        };
        let carrier = Structure::from_set(&set);
        let index = cache.len() as u32;
        cache.push(Arc::new(Stage {
            index,
            set,
            carrier,
        }));
    }
    Ok(cache[k as usize].clone())
}

/// The ordinal members of a stage, collected into a set. For V_k this is the
/// von Neumann numeral k.
pub fn ordinals_of(s: &Stage) -> HfSet {
    s.set.separation(|x| x.is_ordinal())
}

/// Strictly increasing stage indices standing in for the constant tiers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TierConfig {
    ks: Vec<u32>,
}

impl TierConfig {
    pub fn new(ks: Vec<u32>) -> Result<Self, HierarchyError> {
        if ks.is_empty() {
            return Err(HierarchyError::Config {
                msg: "at least one tier is required".into(),
            });
        }
        for w in ks.windows(2) {
            if w[0] >= w[1] {
                return Err(HierarchyError::Config {
                    msg: format!("tier indices must strictly increase, got {} before {}", w[0], w[1]),
                });
            }
        }
        if let Some(&k) = ks.iter().find(|&&k| k > MAX_STAGE) {
            return Err(HierarchyError::StageTooLarge { k, max: MAX_STAGE });
        }
        Ok(TierConfig { ks })
    }

    /// Parses the CLI form `"2,3,4"`.
    pub fn parse(text: &str) -> Result<Self, HierarchyError> {
        let ks = text
            .split(',')
            .map(|part| {
                part.trim().parse::<u32>().map_err(|_| HierarchyError::Config {
                    msg: format!("'{}' is not a stage index", part.trim()),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        TierConfig::new(ks)
    }

    pub fn len(&self) -> usize {
        self.ks.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ks(&self) -> &[u32] {
        &self.ks
    }

    pub fn k(&self, n: usize) -> Result<u32, HierarchyError> {
        self.ks
            .get(n)
            .copied()
            .ok_or(HierarchyError::TierOutOfRange {
                n,
                len: self.ks.len(),
            })
    }

    /// Stage index of the next tier above `n`, synthesizing `k_n + 1` above
    /// the top of the configuration.
    pub(crate) fn next_k(&self, n: usize) -> Result<u32, HierarchyError> {
        match self.ks.get(n + 1) {
            Some(&k) => Ok(k),
            None => Ok(self.k(n)? + 1),
        }
    }

    /// Checks the safety discipline for evaluating `f` at tier `n`:
    /// constants stay at or below `Cn`, set literals stay within rank `k_n`.
    pub fn safety_violation(&self, f: &Formula, n: usize) -> Option<String> {
        if !f.is_safe_above(n as u32) {
            let c = f.max_constant().unwrap();
            return Some(format!("constant C{c} exceeds tier {n}"));
        }
        let k = *self.ks.get(n)?;
        if let Some(rank) = f.max_literal_rank() {
            if rank > k {
                return Some(format!(
                    "literal of rank {rank} exceeds the tier bound {k}"
                ));
            }
        }
        None
    }

    pub fn formula_safe(&self, f: &Formula, n: usize) -> bool {
        n < self.ks.len() && self.safety_violation(f, n).is_none()
    }

    /// The carrier of tier `n` with every interpretable constant attached:
    /// `Cm` maps to the stage set of tier `m` whenever that set is a member
    /// of this carrier.
    pub fn tiered_carrier(&self, n: usize) -> Result<Structure, HierarchyError> {
        let k = self.k(n)?;
        self.tiered_stage(k)
    }

    /// The structure in which tier-`n` formulas are evaluated: the carrier of
    /// tier `n + 1`, or the synthesized next stage above the top tier.
    pub fn evaluation_carrier(&self, n: usize) -> Result<Structure, HierarchyError> {
        self.k(n)?;
        let k = self.next_k(n)?;
        self.tiered_stage(k)
    }

    fn tiered_stage(&self, k: u32) -> Result<Structure, HierarchyError> {
        let stage = build_stage(k)?;
        let mut m = stage.carrier().clone();
        for (i, &ki) in self.ks.iter().enumerate() {
            if ki < k {
                m.set_tier(i as u32, build_stage(ki)?.set.clone());
            }
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A2Tier {
    pub n: usize,
    pub k: u32,
    pub complete: bool,
    pub audit: AuditReport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A2Report {
    pub tiers: Vec<A2Tier>,
    pub complete_everywhere: bool,
}

impl A2Report {
    pub fn to_json(&self) -> Value {
        let tiers: Vec<Value> = self
            .tiers
            .iter()
            .map(|t| {
                json!({
                    "tier": t.n,
                    "stage": t.k,
                    "complete": t.complete,
                    "audit": t.audit.to_json(),
                })
            })
            .collect();
        json!({ "tiers": tiers, "complete_everywhere": self.complete_everywhere })
    }
}

/// Completeness plus a full axiom audit of every tier carrier.
pub fn check_a2(
    t: &TierConfig,
    battery: &[BatteryItem],
    opts: &AuditOptions,
) -> Result<A2Report, HierarchyError> {
    let mut tiers = Vec::new();
    for n in 0..t.len() {
        let k = t.k(n)?;
        let stage = build_stage(k)?;
        let complete = stage.set.is_complete(DEFAULT_CARD_BOUND.max(stage.card()))?;
        let audit = axiom_audit(stage.carrier(), battery, opts)?;
        tiers.push(A2Tier {
            n,
            k,
            complete,
            audit,
        });
    }
    let complete_everywhere = tiers.iter().all(|t| t.complete);
    Ok(A2Report {
        tiers,
        complete_everywhere,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A3Pair {
    pub lower: usize,
    pub upper: usize,
    pub k_lower: u32,
    pub k_upper: u32,
    pub ef: EfReport,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A3Report {
    pub depth: u32,
    pub max_params: u32,
    pub pairs: Vec<A3Pair>,
    pub all_elementary: bool,
}

impl A3Report {
    pub fn to_json(&self) -> Value {
        let pairs: Vec<Value> = self
            .pairs
            .iter()
            .map(|p| {
                json!({
                    "lower": p.lower,
                    "upper": p.upper,
                    "k_lower": p.k_lower,
                    "k_upper": p.k_upper,
                    "ef": p.ef.to_json(),
                })
            })
            .collect();
        json!({
            "depth": self.depth,
            "max_params": self.max_params,
            "pairs": pairs,
            "all_elementary": self.all_elementary,
        })
    }
}

/// Round-limited elementarity for every consecutive tier pair.
pub fn check_a3(
    t: &TierConfig,
    depth: u32,
    max_params: u32,
    budget: u64,
) -> Result<A3Report, HierarchyError> {
    let mut pairs = Vec::new();
    for n in 0..t.len().saturating_sub(1) {
        let (k_lower, k_upper) = (t.k(n)?, t.k(n + 1)?);
        let lower = build_stage(k_lower)?;
        let upper = build_stage(k_upper)?;
        let ef = elementary_d(lower.carrier(), upper.carrier(), depth, max_params, budget)?;
        pairs.push(A3Pair {
            lower: n,
            upper: n + 1,
            k_lower,
            k_upper,
            ef,
        });
    }
    let all_elementary = pairs.iter().all(|p| p.ef.is_elementary());
    Ok(A3Report {
        depth,
        max_params,
        pairs,
        all_elementary,
    })
}

/// Result of building one collection from a safe formula.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuiltCollection {
    pub tier: usize,
    pub var: String,
    pub formula: String,
    pub set: HfSet,
    pub member_of_next: bool,
}

impl BuiltCollection {
    pub fn to_json(&self) -> Value {
        json!({
            "tier": self.tier,
            "var": self.var,
            "formula": self.formula,
            "set": self.set.to_string(),
            "card": self.set.card(),
            "member_of_next": self.member_of_next,
        })
    }
}

/// Builds `{Y in carrier(n) : f(Y)}` with `f` evaluated one tier up, and
/// records whether the result lands in that next carrier (it must, by the
/// rank bound, whenever the configuration is strictly increasing).
pub fn collection_build(
    t: &TierConfig,
    n: usize,
    f: &Formula,
    budget: u64,
) -> Result<BuiltCollection, HierarchyError> {
    let free: Vec<String> = f.free_vars().into_iter().collect();
    if free.len() != 1 {
        return Err(HierarchyError::FreeVariables { found: free });
    }
    let var = free.into_iter().next().unwrap();
    t.k(n)?;
    if let Some(reason) = t.safety_violation(f, n) {
        return Err(HierarchyError::UnsafeFormula { n, reason });
    }
    let tier_stage = build_stage(t.k(n)?)?;
    let eval_m = t.evaluation_carrier(n)?;
    let mut members = Vec::new();
    for y in tier_stage.carrier().universe() {
        let mut asg = Assignment::new();
        asg.insert(var.clone(), y.clone());
        let (holds, _) = satisfies_with_budget(&eval_m, f, &asg, budget)?;
        if holds {
            members.push(y.clone());
        }
    }
    let set = HfSet::from_members(members);
    let member_of_next = eval_m.contains(&set);
    Ok(BuiltCollection {
        tier: n,
        var,
        formula: f.to_string(),
        set,
        member_of_next,
    })
}

/// One formula of the collection-building battery; exactly one free
/// variable, `X` by convention.
#[derive(Debug, Clone)]
pub struct SafeBatteryItem {
    pub id: String,
    pub formula: Formula,
}

impl SafeBatteryItem {
    pub fn new(id: &str, text: &str) -> Self {
        SafeBatteryItem {
            id: id.to_string(),
            formula: Formula::parse(text).expect("battery formulas are well formed"),
        }
    }
}

/// Ten definable conditions on a collection `X`, all safe at every tier.
pub fn standard_safe_battery() -> Vec<SafeBatteryItem> {
    vec![
        SafeBatteryItem::new("all", "X = X"),
        SafeBatteryItem::new("none", "!(X = X)"),
        SafeBatteryItem::new("empty", "forall w in X. !(w = w)"),
        SafeBatteryItem::new("nonempty", "exists w in X. w = w"),
        SafeBatteryItem::new("transitive", "forall y in X. forall z in y. z in X"),
        SafeBatteryItem::new(
            "ordinal",
            "(forall y in X. forall z in y. z in X) & (forall y in X. forall z in y. forall w in z. w in y)",
        ),
        SafeBatteryItem::new("contains_empty", "{} in X"),
        SafeBatteryItem::new("at_most_one", "forall w in X. forall u in X. w = u"),
        SafeBatteryItem::new("at_least_two", "exists w in X. exists u in X. !(w = u)"),
        SafeBatteryItem::new("member_chain", "forall a in X. exists b in X. a in b"),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A4Report {
    pub items: Vec<BuiltCollection>,
    pub all_members: bool,
}

impl A4Report {
    pub fn to_json(&self) -> Value {
        let items: Vec<Value> = self.items.iter().map(BuiltCollection::to_json).collect();
        json!({ "items": items, "all_members": self.all_members })
    }
}

/// Runs the battery through [`collection_build`] at every tier.
pub fn check_a4(
    t: &TierConfig,
    battery: &[SafeBatteryItem],
    budget: u64,
) -> Result<A4Report, HierarchyError> {
    let mut items = Vec::new();
    for n in 0..t.len() {
        for item in battery {
            items.push(collection_build(t, n, &item.formula, budget)?);
        }
    }
    let all_members = items.iter().all(|i| i.member_of_next);
    Ok(A4Report { items, all_members })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A5Failure {
    pub function: HfSet,
    pub domain: HfSet,
    pub range: HfSet,
    pub range_rank: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct A5Report {
    pub tier: usize,
    pub k: u32,
    pub checked: u64,
    pub passed: u64,
    pub failed: u64,
    pub sampled: bool,
    pub failure_ranks: BTreeSet<u32>,
    pub first_failures: Vec<A5Failure>,
}

impl A5Report {
    pub fn to_json(&self) -> Value {
        let failures: Vec<Value> = self
            .first_failures
            .iter()
            .map(|f| {
                json!({
                    "function": f.function.to_string(),
                    "domain": f.domain.to_string(),
                    "range": f.range.to_string(),
                    "range_rank": f.range_rank,
                })
            })
            .collect();
        json!({
            "tier": self.tier,
            "stage": self.k,
            "checked": self.checked,
            "passed": self.passed,
            "failed": self.failed,
            "sampled": self.sampled,
            "failure_ranks": self.failure_ranks.iter().collect::<Vec<_>>(),
            "first_failures": failures,
        })
    }
}

const A5_WITNESS_LIMIT: usize = 5;

/// Enumerates every function whose domain is a tier-`n` collection and whose
/// values are tier-`n` collections, asking whether the range is one too.
/// Failures are the finite shadow of replacement: they occur exactly when
/// the range reaches rank k_n.
pub fn check_a5(t: &TierConfig, n: usize, cap: u64) -> Result<A5Report, HierarchyError> {
    let k = t.k(n)?;
    let stage = build_stage(k)?;
    let universe = stage.carrier().universe();
    let mut checked = 0u64;
    let mut passed = 0u64;
    let mut failed = 0u64;
    let mut sampled = false;
    let mut failure_ranks = BTreeSet::new();
    let mut first_failures = Vec::new();

    'domains: for dmn in universe {
        let arity = dmn.card();
        let mut indices = vec![0usize; arity];
        loop {
            if checked == cap {
                sampled = true;
                break 'domains;
            }
            checked += 1;
            let values: Vec<HfSet> = indices.iter().map(|&i| universe[i].clone()).collect();
            let range = HfSet::from_members(values.clone());
            if stage.carrier().contains(&range) {
                passed += 1;
            } else {
                failed += 1;
                failure_ranks.insert(range.rank());
                if first_failures.len() < A5_WITNESS_LIMIT {
                    first_failures.push(A5Failure {
                        function: crate::hf::function_graph(dmn.members(), &values),
                        domain: dmn.clone(),
                        range: range.clone(),
                        range_rank: range.rank(),
                    });
                }
            }
            // Odometer over value tuples.
            let mut pos = arity;
            loop {
                if pos == 0 {
                    break;
                }
                indices[pos - 1] += 1;
                if indices[pos - 1] < universe.len() {
                    break;
                }
                indices[pos - 1] = 0;
                pos -= 1;
            }
            if pos == 0 {
                break;
            }
        }
    }
    Ok(A5Report {
        tier: n,
        k,
        checked,
        passed,
        failed,
        sampled,
        failure_ranks,
        first_failures,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaTier {
    pub n: usize,
    pub k: u32,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaReport {
    pub tiers: Vec<LemmaTier>,
    pub all_match: bool,
}

impl LemmaReport {
    pub fn to_json(&self) -> Value {
        let tiers: Vec<Value> = self
            .tiers
            .iter()
            .map(|t| json!({ "tier": t.n, "stage": t.k, "matches": t.matches }))
            .collect();
        json!({ "tiers": tiers, "all_match": self.all_match })
    }
}

/// Confirms that building with `X = X` recovers each tier carrier exactly.
pub fn universe_lemma_check(t: &TierConfig, budget: u64) -> Result<LemmaReport, HierarchyError> {
    universe_lemma_check_with(t, budget, |set| set)
}

/// Fault-injection variant: `tweak` distorts each built set before the
/// comparison, so tests can prove the check is not vacuous.
pub fn universe_lemma_check_with(
    t: &TierConfig,
    budget: u64,
    tweak: impl Fn(HfSet) -> HfSet,
) -> Result<LemmaReport, HierarchyError> {
    let everything = Formula::parse("X = X").expect("fixed formula");
    let mut tiers = Vec::new();
    for n in 0..t.len() {
        let k = t.k(n)?;
        let built = collection_build(t, n, &everything, budget)?;
        let matches = tweak(built.set) == build_stage(k)?.set;
        tiers.push(LemmaTier { n, k, matches });
    }
    let all_match = tiers.iter().all(|t| t.matches);
    Ok(LemmaReport { tiers, all_match })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{standard_battery, Verdict, DEFAULT_NODE_BUDGET};

    #[test]
    fn stage_sizes_follow_the_powerset_recurrence() {
        assert_eq!(build_stage(0).unwrap().card(), 0);
        let mut prev = 0usize;
        for k in 1..=MAX_STAGE {
            let stage = build_stage(k).unwrap();
            assert_eq!(stage.card(), 1usize << prev, "stage {k}");
            prev = stage.card();
        }
        assert!(matches!(
            build_stage(6),
            Err(HierarchyError::StageTooLarge { k: 6, max: 5 })
        ));
    }

    #[test]
    fn stages_are_transitive_and_complete() {
        for k in 0..=4 {
            let stage = build_stage(k).unwrap();
            assert!(stage.set.is_transitive(), "V_{k} transitive");
            assert!(
                stage.set.is_complete(DEFAULT_CARD_BOUND).unwrap(),
                "V_{k} complete"
            );
            for m in stage.carrier().universe() {
                assert!(m.rank() < k.max(1), "rank of member below {k}");
            }
        }
        assert!(build_stage(5).unwrap().set.is_transitive());
    }

    #[test]
    fn stage_three_members_are_frozen() {
        let stage = build_stage(3).unwrap();
        let rendered: Vec<String> = stage
            .carrier()
            .universe()
            .iter()
            .map(|m| m.to_string())
            .collect();
        assert_eq!(rendered, vec!["{}", "{{}}", "{{{}}}", "{{},{{}}}"]);
    }

    #[test]
    fn ordinals_of_a_stage_form_the_von_neumann_numeral() {
        assert_eq!(ordinals_of(&build_stage(0).unwrap()), HfSet::empty());
        for k in 0..=4 {
            let stage = build_stage(k).unwrap();
            let ords = ordinals_of(&stage);
            assert_eq!(ords, HfSet::von_neumann(k as usize), "stage {k}");
            assert_eq!(ords.card(), k as usize);
            assert!(ords.is_ordinal());
            assert!(!stage.carrier().contains(&ords), "Ord escapes V_{k}");
            let next = build_stage(k + 1).unwrap();
            assert!(next.carrier().contains(&ords), "Ord lands in V_{}", k + 1);
        }
    }

    #[test]
    fn tier_configuration_is_validated() {
        assert_eq!(TierConfig::parse("2,3,4").unwrap().ks(), &[2, 3, 4]);
        assert_eq!(TierConfig::parse(" 1, 4 ").unwrap().ks(), &[1, 4]);
        assert!(matches!(
            TierConfig::parse("3,2"),
            Err(HierarchyError::Config { .. })
        ));
        assert!(matches!(
            TierConfig::parse("2,2"),
            Err(HierarchyError::Config { .. })
        ));
        assert!(matches!(
            TierConfig::parse(""),
            Err(HierarchyError::Config { .. })
        ));
        assert!(matches!(
            TierConfig::parse("2,x"),
            Err(HierarchyError::Config { .. })
        ));
        assert!(matches!(
            TierConfig::parse("2,9"),
            Err(HierarchyError::StageTooLarge { k: 9, .. })
        ));
    }

    #[test]
    fn tiered_carriers_interpret_constants() {
        let t = TierConfig::parse("2,3").unwrap();
        let m = t.tiered_carrier(1).unwrap();
        assert_eq!(m.tiers().get(&0), Some(&build_stage(2).unwrap().set));
        assert_eq!(m.tiers().get(&1), None, "a tier is not a member of itself");

        let eval = t.evaluation_carrier(1).unwrap();
        assert_eq!(eval.card(), 16);
        assert_eq!(eval.tiers().get(&0), Some(&build_stage(2).unwrap().set));
        assert_eq!(eval.tiers().get(&1), Some(&build_stage(3).unwrap().set));
    }

    #[test]
    fn safety_depends_on_constants_and_literal_ranks() {
        let t = TierConfig::parse("2,3").unwrap();
        let by_constant = Formula::parse("C1 = C1").unwrap();
        assert!(t.formula_safe(&by_constant, 1));
        assert!(!t.formula_safe(&by_constant, 0));
        let by_literal = Formula::parse("#65536 in X").unwrap();
        assert!(!t.formula_safe(&by_literal, 0), "rank 5 literal at k=2");
        let fine = Formula::parse("{} in X").unwrap();
        assert!(t.formula_safe(&fine, 0));
    }

    #[test]
    fn a2_completeness_and_audit_tables() {
        let t = TierConfig::parse("2,3,4").unwrap();
        let report = check_a2(&t, &standard_battery(), &AuditOptions::default()).unwrap();
        assert!(report.complete_everywhere);
        assert_eq!(report.tiers.len(), 3);
        let statuses = |n: usize| -> Vec<(String, String)> {
            report.tiers[n]
                .audit
                .rows
                .iter()
                .map(|r| (r.label.clone(), r.verdict.status().to_string()))
                .collect()
        };
        // V_2 satisfies choice vacuously (every nonempty member contains the
        // empty set); V_3 and V_4 do not.
        let expect = |z7: &str| -> Vec<(String, String)> {
            [
                ("Z1", "holds"),
                ("Z2", "holds"),
                ("Z3", "fails"),
                ("Z4", "holds"),
                ("Z5", "fails"),
                ("Z5_literal", "fails"),
                ("Z6", "fails"),
                ("Z7", z7),
                ("F1_guarded", "holds"),
                ("F1_literal", "fails"),
            ]
            .iter()
            .map(|(l, s)| (l.to_string(), s.to_string()))
            .collect()
        };
        assert_eq!(statuses(0), expect("holds"));
        assert_eq!(statuses(1), expect("fails"));
        assert_eq!(statuses(2), expect("fails"));
    }

    #[test]
    fn a2_with_an_empty_battery_reports_not_exercised() {
        let t = TierConfig::parse("2").unwrap();
        let report = check_a2(&t, &[], &AuditOptions::default()).unwrap();
        let z2 = report.tiers[0].audit.row("Z2").unwrap();
        assert_eq!(z2.verdict, Verdict::NotExercised);
    }

    #[test]
    fn a3_splits_the_first_two_stages_with_the_known_witness() {
        let t = TierConfig::parse("1,2").unwrap();
        let report = check_a3(&t, 1, 1, DEFAULT_NODE_BUDGET).unwrap();
        assert!(!report.all_elementary);
        assert_eq!(report.pairs.len(), 1);
        match &report.pairs[0].ef.outcome {
            crate::model::EfOutcome::Distinguished { formula, .. } => {
                assert_eq!(formula.to_string(), "exists y. a in y");
            }
            other => panic!("expected a distinguishing formula, got {other:?}"),
        }
    }

    #[test]
    fn a3_depth_zero_is_elementary() {
        let t = TierConfig::parse("2,3").unwrap();
        let report = check_a3(&t, 0, 1, DEFAULT_NODE_BUDGET).unwrap();
        assert!(report.all_elementary);
    }

    #[test]
    fn collection_build_examples() {
        let t = TierConfig::parse("2,3,4").unwrap();
        let all = Formula::parse("X = X").unwrap();
        let built = collection_build(&t, 0, &all, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(built.set, build_stage(2).unwrap().set);
        assert!(built.member_of_next);

        let none = Formula::parse("!(X = X)").unwrap();
        assert_eq!(
            collection_build(&t, 1, &none, DEFAULT_NODE_BUDGET).unwrap().set,
            HfSet::empty()
        );

        let ordinal = standard_safe_battery()
            .into_iter()
            .find(|i| i.id == "ordinal")
            .unwrap();
        let built = collection_build(&t, 1, &ordinal.formula, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(built.set, HfSet::von_neumann(3));
        assert_eq!(built.set, ordinals_of(&build_stage(3).unwrap()));
    }

    #[test]
    fn collection_build_rejects_bad_inputs() {
        let t = TierConfig::parse("2,3").unwrap();
        let closed = Formula::parse("forall x. x = x").unwrap();
        assert!(matches!(
            collection_build(&t, 0, &closed, DEFAULT_NODE_BUDGET),
            Err(HierarchyError::FreeVariables { .. })
        ));
        let two_free = Formula::parse("X in Y").unwrap();
        assert!(matches!(
            collection_build(&t, 0, &two_free, DEFAULT_NODE_BUDGET),
            Err(HierarchyError::FreeVariables { .. })
        ));
        let unsafe_const = Formula::parse("X in C1").unwrap();
        assert!(matches!(
            collection_build(&t, 0, &unsafe_const, DEFAULT_NODE_BUDGET),
            Err(HierarchyError::UnsafeFormula { n: 0, .. })
        ));
        assert!(matches!(
            collection_build(&t, 5, &Formula::parse("X = X").unwrap(), DEFAULT_NODE_BUDGET),
            Err(HierarchyError::TierOutOfRange { n: 5, len: 2 })
        ));
    }

    #[test]
    fn collection_build_with_constants_in_range() {
        // At tier 1 the constant C0 denotes V_2; members of V_3 that contain
        // V_2 as an element: V_2 = {{},{{}}} has rank 2, so only supersets
        // of rank 3 qualify, and V_3's only candidate is {{},{{}}} itself...
        // which does not contain itself. The build is empty but legal.
        let t = TierConfig::parse("2,3").unwrap();
        let f = Formula::parse("C0 in X").unwrap();
        let built = collection_build(&t, 1, &f, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(built.set, HfSet::empty());
        assert!(built.member_of_next);
    }

    #[test]
    fn a4_battery_lands_every_collection_in_the_next_tier() {
        let t = TierConfig::parse("2,3,4").unwrap();
        let report = check_a4(&t, &standard_safe_battery(), DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(report.items.len(), 30);
        assert!(report.all_members);
        for item in &report.items {
            let k = t.k(item.tier).unwrap();
            assert!(item.set.rank() <= k, "built set within tier rank");
        }
    }

    #[test]
    fn a5_counts_at_stage_three_are_frozen() {
        let t = TierConfig::parse("3,4").unwrap();
        let report = check_a5(&t, 0, DEFAULT_FUNCTION_CAP).unwrap();
        assert_eq!(report.checked, 25);
        assert_eq!(report.passed, 9);
        assert_eq!(report.failed, 16);
        assert!(!report.sampled);
        assert_eq!(
            report.failure_ranks.iter().copied().collect::<Vec<_>>(),
            vec![3],
            "failures exactly at the tier boundary rank"
        );
        assert_eq!(report.first_failures.len(), 5);
        for failure in &report.first_failures {
            assert_eq!(failure.range_rank, 3);
            assert!(failure.function.is_function());
        }
    }

    #[test]
    fn a5_empty_function_always_passes() {
        let t = TierConfig::parse("1,2").unwrap();
        let report = check_a5(&t, 0, DEFAULT_FUNCTION_CAP).unwrap();
        // V_1 = {∅}: only the empty function, whose range ∅ is... not a
        // member of V_1? It is: ∅ ∈ V_1. One function, one pass.
        assert_eq!(report.checked, 1);
        assert_eq!(report.passed, 1);
    }

    #[test]
    fn a5_cap_triggers_sampling() {
        let t = TierConfig::parse("3,4").unwrap();
        let report = check_a5(&t, 0, 10).unwrap();
        assert!(report.sampled);
        assert_eq!(report.checked, 10);
    }

    #[test]
    fn universe_lemma_holds_and_fault_injection_trips_it() {
        for config in ["2,3", "2,3,4"] {
            let t = TierConfig::parse(config).unwrap();
            let report = universe_lemma_check(&t, DEFAULT_NODE_BUDGET).unwrap();
            assert!(report.all_match, "config {config}");
            assert_eq!(report.tiers.len(), t.len());
        }
        let t = TierConfig::parse("2,3").unwrap();
        let sabotaged = universe_lemma_check_with(&t, DEFAULT_NODE_BUDGET, |set| {
            let members = set.members().to_vec();
            HfSet::from_members(members.into_iter().skip(1).collect())
        })
        .unwrap();
        assert!(!sabotaged.all_match);
    }
}
