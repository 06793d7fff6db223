//! Counting arguments at finite scale: the thinness obstruction to complete
//! small categories, and the powerset diagonal.
//!
//! The obstruction runs as follows. Suppose `f` and `g` are distinct
//! parallel arrows `X -> Y` and the category carries a product of one copy
//! of `Y` per morphism. Choosing `f` or `g` independently in each factor
//! yields `2^|Mor|` pairwise distinct tupling arrows out of `X`, which is
//! more arrows than the category has. A finite category can therefore never
//! exhibit both a distinct parallel pair and the matching power, and the
//! audit confirms this: it reports `Vacuous` for thin inputs, `Consistent`
//! when the power is absent, and would certify a `Contradiction` with
//! explicit tuplings if a table ever produced one.

use serde_json::{json, Value};

use crate::hf::{functions_between, HfSet};

use super::limits::{find_limit, Diagram};
use super::{ArrowData, CategoryError, FinCategory, ObjectData};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreydVerdict {
    /// Thin category; the premise never fires.
    Vacuous,
    /// A distinct parallel pair exists but the Hom-indexed power does not.
    Consistent,
    /// Pair and power both present; pairwise distinct tuplings witness the
    /// impossibility. Unreachable from a valid table.
    Contradiction,
}

impl FreydVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            FreydVerdict::Vacuous => "vacuous",
            FreydVerdict::Consistent => "consistent",
            FreydVerdict::Contradiction => "contradiction",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreydReport {
    pub thin: bool,
    /// First distinct parallel pair, by label.
    pub parallel_pair: Option<(String, String)>,
    /// Number of power factors searched for: the total morphism count.
    pub hom_size: usize,
    pub power_found: bool,
    /// Distinct tupling arrows certifying a contradiction.
    pub tuplings: Vec<String>,
    pub verdict: FreydVerdict,
}

impl FreydReport {
    pub fn to_json(&self) -> Value {
        json!({
            "thin": self.thin,
            "parallel_pair": self.parallel_pair.as_ref().map(|(f, g)| json!([f, g])),
            "hom_size": self.hom_size,
            "power_found": self.power_found,
            "tuplings": self.tuplings,
            "verdict": self.verdict.as_str(),
        })
    }
}

/// First pair of distinct arrows sharing both endpoints.
fn first_parallel_pair(c: &FinCategory) -> Option<(usize, usize)> {
    for f in 0..c.arrows.len() {
        for g in f + 1..c.arrows.len() {
            if c.arrows[f].dom == c.arrows[g].dom && c.arrows[f].cod == c.arrows[g].cod {
                return Some((f, g));
            }
        }
    }
    None
}

/// Runs the counting argument against a validated table.
pub fn freyd_audit(c: &FinCategory) -> Result<FreydReport, CategoryError> {
    let hom_size = c.arrows.len();
    let Some((f, g)) = first_parallel_pair(c) else {
        return Ok(FreydReport {
            thin: true,
            parallel_pair: None,
            hom_size,
            power_found: false,
            tuplings: Vec::new(),
            verdict: FreydVerdict::Vacuous,
        });
    };
    let pair_labels = (c.arrows[f].label.clone(), c.arrows[g].label.clone());
    let y = c.arrows[f].cod;
    let power = find_limit(c, &Diagram::Discrete(vec![y; hom_size]))?;
    let Some(cone) = power else {
        return Ok(FreydReport {
            thin: false,
            parallel_pair: Some(pair_labels),
            hom_size,
            power_found: false,
            tuplings: Vec::new(),
            verdict: FreydVerdict::Consistent,
        });
    };

    // The impossible branch: tuple a sample of f/g choice vectors and watch
    // the mediators come out pairwise distinct.
    let samples = 1u64 << hom_size.min(3);
    let mut tuplings = Vec::new();
    for bits in 0..samples {
        let wanted: Vec<usize> = (0..hom_size)
            .map(|i| if bits >> i & 1 == 1 { g } else { f })
            .collect();
        let mediators: Vec<usize> = c
            .hom(c.arrows[f].dom, cone.apex)
            .into_iter()
            .filter(|&m| {
                cone.legs
                    .iter()
                    .zip(&wanted)
                    .all(|(&leg, &want)| c.composite(leg, m) == Some(want))
            })
            .collect();
        if let [m] = mediators.as_slice() {
            tuplings.push(c.arrows[*m].label.clone());
        }
    }
    let mut distinct = tuplings.clone();
    distinct.sort();
    distinct.dedup();
    let verdict = if distinct.len() == tuplings.len() && tuplings.len() as u64 == samples {
        FreydVerdict::Contradiction
    } else {
        // The table lied about being a category; the power cannot mediate.
        FreydVerdict::Consistent
    };
    Ok(FreydReport {
        thin: false,
        parallel_pair: Some(pair_labels),
        hom_size,
        power_found: true,
        tuplings,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationReport {
    pub max_objects: usize,
    pub max_arrows: usize,
    pub candidates: u64,
    pub valid: u64,
    pub non_thin: u64,
    pub powers_found: u64,
    pub contradictions: u64,
}

impl EnumerationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "max_objects": self.max_objects,
            "max_arrows": self.max_arrows,
            "candidates": self.candidates,
            "valid": self.valid,
            "non_thin": self.non_thin,
            "powers_found": self.powers_found,
            "contradictions": self.contradictions,
        })
    }
}

/// Enumerates every category shape up to the bounds, in identity-canonical
/// labeling (object `i` owns arrow `i` as its identity), and audits each
/// valid one. The interesting output is the last field staying zero.
pub fn freyd_enumerate(
    max_objects: usize,
    max_arrows: usize,
) -> Result<EnumerationReport, CategoryError> {
    let mut report = EnumerationReport {
        max_objects,
        max_arrows,
        candidates: 0,
        valid: 0,
        non_thin: 0,
        powers_found: 0,
        contradictions: 0,
    };
    for objects in 0..=max_objects {
        for arrows in objects..=max_arrows {
            enumerate_shape(objects, arrows, &mut report)?;
        }
    }
    Ok(report)
}

fn enumerate_shape(
    objects: usize,
    arrows: usize,
    report: &mut EnumerationReport,
) -> Result<(), CategoryError> {
    let extra = arrows - objects;
    if objects == 0 {
        if arrows == 0 {
            audit_candidate(skeleton(0, &[], &Default::default()), report)?;
        }
        return Ok(());
    }
    // Endpoints for the non-identity arrows.
    let mut endpoints = vec![(0usize, 0usize); extra];
    loop {
        assign_compositions(objects, &endpoints, report)?;
        let mut pos = extra;
        loop {
            if pos == 0 {
                return Ok(());
            }
            let e = &mut endpoints[pos - 1];
            e.1 += 1;
            if e.1 < objects {
                break;
            }
            e.1 = 0;
            e.0 += 1;
            if e.0 < objects {
                break;
            }
            *e = (0, 0);
            pos -= 1;
        }
    }
}

fn skeleton(
    objects: usize,
    endpoints: &[(usize, usize)],
    compose: &std::collections::BTreeMap<(usize, usize), usize>,
) -> FinCategory {
    let mut object_data = Vec::new();
    let mut arrow_data = Vec::new();
    for i in 0..objects {
        object_data.push(ObjectData {
            label: format!("o{i}"),
            payload: None,
        });
        arrow_data.push(ArrowData {
            label: format!("a{i}"),
            dom: i,
            cod: i,
            payload: None,
        });
    }
    for (i, &(dom, cod)) in endpoints.iter().enumerate() {
        arrow_data.push(ArrowData {
            label: format!("a{}", objects + i),
            dom,
            cod,
            payload: None,
        });
    }
    FinCategory {
        objects: object_data,
        arrows: arrow_data,
        identity: (0..objects).collect(),
        compose: compose.clone(),
    }
}

/// Fills the composition table: identity composites are forced by the laws,
/// the remaining composable pairs range over every arrow with matching
/// endpoints.
fn assign_compositions(
    objects: usize,
    endpoints: &[(usize, usize)],
    report: &mut EnumerationReport,
) -> Result<(), CategoryError> {
    let arrows = objects + endpoints.len();
    let end = |a: usize| -> (usize, usize) {
        if a < objects {
            (a, a)
        } else {
            endpoints[a - objects]
        }
    };
    let mut forced = std::collections::BTreeMap::new();
    let mut free_pairs = Vec::new();
    for f in 0..arrows {
        for g in 0..arrows {
            if end(g).1 != end(f).0 {
                continue;
            }
            if f < objects {
                forced.insert((f, g), g);
            } else if g < objects {
                forced.insert((f, g), f);
            } else {
                let want = (end(g).0, end(f).1);
                let candidates: Vec<usize> = (0..arrows).filter(|&h| end(h) == want).collect();
                free_pairs.push(((f, g), candidates));
            }
        }
    }
    if free_pairs.iter().any(|(_, cands)| cands.is_empty()) {
        // A composable pair with no typable composite: no total table exists.
        return Ok(());
    }
    let mut picks = vec![0usize; free_pairs.len()];
    loop {
        let mut compose = forced.clone();
        for (i, &slot) in picks.iter().enumerate() {
            let (pair, candidates) = &free_pairs[i];
            compose.insert(*pair, candidates[slot]);
        }
        audit_candidate(skeleton(objects, endpoints, &compose), report)?;
        let mut pos = picks.len();
        loop {
            if pos == 0 {
                return Ok(());
            }
            picks[pos - 1] += 1;
            if picks[pos - 1] < free_pairs[pos - 1].1.len() {
                break;
            }
            picks[pos - 1] = 0;
            pos -= 1;
        }
    }
}

fn audit_candidate(
    c: FinCategory,
    report: &mut EnumerationReport,
) -> Result<(), CategoryError> {
    report.candidates += 1;
    if c.validate()?.is_some() {
        return Ok(());
    }
    report.valid += 1;
    if c.is_thin() {
        return Ok(());
    }
    report.non_thin += 1;
    let audit = freyd_audit(&c)?;
    if audit.power_found {
        report.powers_found += 1;
    }
    if audit.verdict == FreydVerdict::Contradiction {
        report.contradictions += 1;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CantorReport {
    pub size: usize,
    pub powerset_card: usize,
    pub functions_checked: u64,
    pub surjections: u64,
    /// Functions whose diagonal set falls outside their range; equals
    /// `functions_checked` exactly when no surjection exists.
    pub diagonals_missed: u64,
}

impl CantorReport {
    pub fn to_json(&self) -> Value {
        json!({
            "size": self.size,
            "powerset_card": self.powerset_card,
            "functions_checked": self.functions_checked,
            "surjections": self.surjections,
            "diagonals_missed": self.diagonals_missed,
        })
    }
}

/// Checks every function from `x` into its powerset against the diagonal:
/// `{a in x : a not in f(a)}` is never in the range, so no function is onto.
pub fn cantor_check(x: &HfSet, cap: usize) -> Result<CantorReport, CategoryError> {
    let power = x.powerset()?;
    let mut report = CantorReport {
        size: x.card(),
        powerset_card: power.card(),
        functions_checked: 0,
        surjections: 0,
        diagonals_missed: 0,
    };
    for graph in functions_between(x, &power, cap)? {
        report.functions_checked += 1;
        let view = graph.fn_view()?;
        let diagonal = x.separation(|a| {
            !view
                .apply(a)
                .expect("total on the domain")
                .contains(a)
        });
        let range: Vec<&HfSet> = view.pairs().iter().map(|(_, b)| b).collect();
        if !range.iter().any(|b| **b == diagonal) {
            report.diagonals_missed += 1;
        }
        let mut image: Vec<&HfSet> = range.clone();
        image.sort();
        image.dedup();
        if image.len() == power.card() {
            report.surjections += 1;
        }
    }
    Ok(report)
}
