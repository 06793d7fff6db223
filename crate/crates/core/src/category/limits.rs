//! Limits by exhaustive universal-property search, and the topos-shaped
//! feature audit built on top of them.
//!
//! Three diagram shapes cover everything the laboratory needs: the empty
//! diagram (terminal objects), finite discrete diagrams (products, including
//! the Hom-indexed powers of the thinness argument), and parallel pairs
//! (equalizers). A cone is a limit when every competing cone from every
//! object factors through it uniquely; we check exactly that.
//!
//! Candidate apexes are first screened by counting: composition with the
//! legs must biject `Hom(W, apex)` with the cones from `W`, so the hom-set
//! cardinalities have to match. This keeps the search honest on powers with
//! many factors, where the cone count explodes but no apex can keep up.

use serde_json::{json, Value};

use super::{CategoryError, FinCategory};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Diagram {
    Empty,
    /// Object indices; repetitions allowed (powers).
    Discrete(Vec<usize>),
    /// Two arrows with the same endpoints.
    ParallelPair { f: usize, g: usize },
}

impl Diagram {
    /// Node objects of the diagram, after index validation.
    fn nodes(&self, c: &FinCategory) -> Result<Vec<usize>, CategoryError> {
        match self {
            Diagram::Empty => Ok(Vec::new()),
            Diagram::Discrete(objs) => {
                if let Some(&bad) = objs.iter().find(|&&o| o >= c.objects.len()) {
                    return Err(CategoryError::Malformed {
                        msg: format!("diagram names object {bad} outside the category"),
                    });
                }
                Ok(objs.clone())
            }
            Diagram::ParallelPair { f, g } => {
                for &a in [f, g] {
                    if a >= c.arrows.len() {
                        return Err(CategoryError::Malformed {
                            msg: format!("diagram names arrow {a} outside the category"),
                        });
                    }
                }
                let (fa, ga) = (&c.arrows[*f], &c.arrows[*g]);
                if fa.dom != ga.dom || fa.cod != ga.cod {
                    return Err(CategoryError::Malformed {
                        msg: "parallel pair arrows do not share endpoints".to_string(),
                    });
                }
                Ok(vec![fa.dom, fa.cod])
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub apex: usize,
    /// One leg per diagram node.
    pub legs: Vec<usize>,
}

impl Cone {
    pub fn to_json(&self, c: &FinCategory) -> Value {
        json!({
            "apex": c.objects[self.apex].label,
            "legs": self.legs.iter().map(|&l| c.arrows[l].label.clone()).collect::<Vec<_>>(),
        })
    }
}

/// Legs from `w`, one per node, satisfying the diagram's equations.
fn cones_from(c: &FinCategory, d: &Diagram, nodes: &[usize], w: usize) -> Vec<Vec<usize>> {
    match d {
        Diagram::Empty => vec![Vec::new()],
        Diagram::Discrete(_) => {
            let choices: Vec<Vec<usize>> = nodes.iter().map(|&n| c.hom(w, n)).collect();
            let mut out = Vec::new();
            let mut picks = vec![0usize; choices.len()];
            if choices.iter().any(|ch| ch.is_empty()) {
                return Vec::new();
            }
            loop {
                out.push(
                    picks
                        .iter()
                        .zip(&choices)
                        .map(|(&p, ch)| ch[p])
                        .collect::<Vec<_>>(),
                );
                let mut pos = picks.len();
                loop {
                    if pos == 0 {
                        return out;
                    }
                    picks[pos - 1] += 1;
                    if picks[pos - 1] < choices[pos - 1].len() {
                        break;
                    }
                    picks[pos - 1] = 0;
                    pos -= 1;
                }
            }
        }
        Diagram::ParallelPair { f, g } => c
            .hom(w, nodes[0])
            .into_iter()
            .filter_map(|l0| {
                let l1 = c.composite(*f, l0)?;
                (c.composite(*g, l0) == Some(l1)).then(|| vec![l0, l1])
            })
            .collect(),
    }
}

/// Number of cones from `w`, saturating; used to screen apexes before any
/// cone is materialized.
fn cone_count_from(c: &FinCategory, d: &Diagram, nodes: &[usize], w: usize) -> u128 {
    match d {
        Diagram::Empty => 1,
        Diagram::Discrete(_) => nodes
            .iter()
            .map(|&n| c.hom(w, n).len() as u128)
            .fold(1u128, |acc, h| acc.saturating_mul(h)),
        Diagram::ParallelPair { .. } => cones_from(c, d, nodes, w).len() as u128,
    }
}

fn cone_is_valid(c: &FinCategory, d: &Diagram, nodes: &[usize], cone: &Cone) -> bool {
    if cone.legs.len() != nodes.len() {
        return false;
    }
    let typed = cone.legs.iter().zip(nodes).all(|(&l, &n)| {
        l < c.arrows.len() && c.arrows[l].dom == cone.apex && c.arrows[l].cod == n
    });
    if !typed {
        return false;
    }
    match d {
        Diagram::Empty | Diagram::Discrete(_) => true,
        Diagram::ParallelPair { f, g } => {
            c.composite(*f, cone.legs[0]) == Some(cone.legs[1])
                && c.composite(*g, cone.legs[0]) == Some(cone.legs[1])
        }
    }
}

/// Full universal-property check for a candidate limiting cone.
pub fn is_limit(c: &FinCategory, d: &Diagram, cone: &Cone) -> Result<bool, CategoryError> {
    let nodes = d.nodes(c)?;
    if !cone_is_valid(c, d, &nodes, cone) {
        return Ok(false);
    }
    for w in 0..c.objects.len() {
        if cone_count_from(c, d, &nodes, w) != c.hom(w, cone.apex).len() as u128 {
            return Ok(false);
        }
        for competing in cones_from(c, d, &nodes, w) {
            let mediators = c
                .hom(w, cone.apex)
                .into_iter()
                .filter(|&m| {
                    cone.legs
                        .iter()
                        .zip(&competing)
                        .all(|(&leg, &want)| c.composite(leg, m) == Some(want))
                })
                .count();
            if mediators != 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// First limiting cone in apex-then-leg scan order, if any.
pub fn find_limit(c: &FinCategory, d: &Diagram) -> Result<Option<Cone>, CategoryError> {
    let nodes = d.nodes(c)?;
    'apex: for apex in 0..c.objects.len() {
        for w in 0..c.objects.len() {
            if cone_count_from(c, d, &nodes, w) != c.hom(w, apex).len() as u128 {
                continue 'apex;
            }
        }
        for legs in cones_from(c, d, &nodes, apex) {
            let cone = Cone { apex, legs };
            if is_limit(c, d, &cone)? {
                return Ok(Some(cone));
            }
        }
    }
    Ok(None)
}

/// Product of two objects: `(apex, leg to x, leg to y)`.
pub fn binary_product(
    c: &FinCategory,
    x: usize,
    y: usize,
) -> Result<Option<(usize, usize, usize)>, CategoryError> {
    Ok(find_limit(c, &Diagram::Discrete(vec![x, y]))?
        .map(|cone| (cone.apex, cone.legs[0], cone.legs[1])))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeatureCheck {
    pub checked: u64,
    pub found: u64,
    pub first_missing: Option<String>,
}

impl FeatureCheck {
    fn record(&mut self, present: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if present {
            self.found += 1;
        } else if self.first_missing.is_none() {
            self.first_missing = Some(witness());
        }
    }

    pub fn complete(&self) -> bool {
        self.checked == self.found
    }

    pub fn to_json(&self) -> Value {
        json!({
            "checked": self.checked,
            "found": self.found,
            "first_missing": self.first_missing,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToposReport {
    pub terminal: Option<String>,
    pub binary_products: FeatureCheck,
    pub equalizers: FeatureCheck,
    pub exponentials: FeatureCheck,
    /// `(omega, truth arrow)` labels when a classifier exists.
    pub subobject_classifier: Option<(String, String)>,
    pub all_present: bool,
}

impl ToposReport {
    pub fn to_json(&self) -> Value {
        json!({
            "terminal": self.terminal,
            "binary_products": self.binary_products.to_json(),
            "equalizers": self.equalizers.to_json(),
            "exponentials": self.exponentials.to_json(),
            "subobject_classifier": self.subobject_classifier.as_ref().map(|(o, t)| json!({
                "omega": o,
                "truth": t,
            })),
            "all_present": self.all_present,
        })
    }
}

/// Checks the elementary-topos features one by one. Truncated collection
/// categories fail some of them at the boundary; the report says which and
/// where first.
pub fn topos_audit(c: &FinCategory) -> Result<ToposReport, CategoryError> {
    let terminal_cone = find_limit(c, &Diagram::Empty)?;
    let terminal = terminal_cone
        .as_ref()
        .map(|cone| c.objects[cone.apex].label.clone());

    let mut binary_products = FeatureCheck::default();
    for x in 0..c.objects.len() {
        for y in x..c.objects.len() {
            let present = binary_product(c, x, y)?.is_some();
            binary_products.record(present, || {
                format!("{} x {}", c.objects[x].label, c.objects[y].label)
            });
        }
    }

    let mut equalizers = FeatureCheck::default();
    for f in 0..c.arrows.len() {
        for g in f + 1..c.arrows.len() {
            if c.arrows[f].dom != c.arrows[g].dom || c.arrows[f].cod != c.arrows[g].cod {
                continue;
            }
            let present = find_limit(c, &Diagram::ParallelPair { f, g })?.is_some();
            equalizers.record(present, || {
                format!("{} = {}", c.arrows[f].label, c.arrows[g].label)
            });
        }
    }

    let mut exponentials = FeatureCheck::default();
    for base in 0..c.objects.len() {
        for result in 0..c.objects.len() {
            let present = exponential(c, base, result)?.is_some();
            exponentials.record(present, || {
                format!("{} ^ {}", c.objects[result].label, c.objects[base].label)
            });
        }
    }

    let subobject_classifier = match &terminal_cone {
        Some(t) => classifier(c, t.apex)?
            .map(|(omega, truth)| (c.objects[omega].label.clone(), c.arrows[truth].label.clone())),
        None => None,
    };

    let all_present = terminal.is_some()
        && binary_products.complete()
        && equalizers.complete()
        && exponentials.complete()
        && subobject_classifier.is_some();
    Ok(ToposReport {
        terminal,
        binary_products,
        equalizers,
        exponentials,
        subobject_classifier,
        all_present,
    })
}

/// The unique mediating arrow into a product cone, if the cone really is a
/// product and the legs exist.
fn mediate(
    c: &FinCategory,
    apex: usize,
    legs: (usize, usize),
    w: usize,
    want: (usize, usize),
) -> Option<usize> {
    let hits: Vec<usize> = c
        .hom(w, apex)
        .into_iter()
        .filter(|&m| {
            c.composite(legs.0, m) == Some(want.0) && c.composite(legs.1, m) == Some(want.1)
        })
        .collect();
    match hits.as_slice() {
        [m] => Some(*m),
        _ => None,
    }
}

/// An exponential object `result^base` with its evaluation arrow, by direct
/// search. A candidate needs a product with the base; test objects lacking
/// such a product impose no constraint, which is the honest reading inside
/// a truncated category.
fn exponential(
    c: &FinCategory,
    base: usize,
    result: usize,
) -> Result<Option<(usize, usize)>, CategoryError> {
    for e in 0..c.objects.len() {
        let Some((p, p_e, p_base)) = binary_product(c, e, base)? else {
            continue;
        };
        'evs: for ev in c.hom(p, result) {
            for z in 0..c.objects.len() {
                let Some((q, q_z, q_base)) = binary_product(c, z, base)? else {
                    continue;
                };
                for h in c.hom(q, result) {
                    let mut transposes = 0usize;
                    for u in c.hom(z, e) {
                        let uz = c.composite(u, q_z).expect("legs compose");
                        let Some(m) = mediate(c, p, (p_e, p_base), q, (uz, q_base)) else {
                            continue;
                        };
                        if c.composite(ev, m) == Some(h) {
                            transposes += 1;
                        }
                    }
                    if transposes != 1 {
                        continue 'evs;
                    }
                }
            }
            return Ok(Some((e, ev)));
        }
    }
    Ok(None)
}

/// Monomorphism test by cancellation.
fn is_mono(c: &FinCategory, m: usize) -> bool {
    let dom = c.arrows[m].dom;
    for w in 0..c.objects.len() {
        let probes = c.hom(w, dom);
        for &u in &probes {
            for &v in &probes {
                if u != v && c.composite(m, u) == c.composite(m, v) {
                    return false;
                }
            }
        }
    }
    true
}

/// Searches for a subobject classifier relative to the given terminal
/// object: an `omega` with a point `truth` such that every mono has exactly
/// one characteristic arrow forming a pullback square.
fn classifier(
    c: &FinCategory,
    terminal: usize,
) -> Result<Option<(usize, usize)>, CategoryError> {
    let monos: Vec<usize> = (0..c.arrows.len()).filter(|&m| is_mono(c, m)).collect();
    let bang = |w: usize| -> Option<usize> {
        match c.hom(w, terminal).as_slice() {
            [t] => Some(*t),
            _ => None,
        }
    };
    for omega in 0..c.objects.len() {
        'truth: for truth in c.hom(terminal, omega) {
            for &m in &monos {
                let sub = c.arrows[m].dom;
                let target = c.arrows[m].cod;
                let mut characteristics = 0usize;
                'chi: for chi in c.hom(target, omega) {
                    // Square: chi . m = truth . !_sub.
                    let left = c.composite(chi, m);
                    let right = bang(sub).and_then(|b| c.composite(truth, b));
                    if left.is_none() || left != right {
                        continue 'chi;
                    }
                    // Pullback: every w with chi . wx = truth . !_w factors
                    // through m uniquely.
                    for w in 0..c.objects.len() {
                        let b = bang(w).expect("the chosen object is terminal");
                        let truth_side = c.composite(truth, b);
                        for wx in c.hom(w, target) {
                            if c.composite(chi, wx) != truth_side {
                                continue;
                            }
                            let factors = c
                                .hom(w, sub)
                                .into_iter()
                                .filter(|&u| c.composite(m, u) == Some(wx))
                                .count();
                            if factors != 1 {
                                continue 'chi;
                            }
                        }
                    }
                    characteristics += 1;
                }
                if characteristics != 1 {
                    continue 'truth;
                }
            }
            return Ok(Some((omega, truth)));
        }
    }
    Ok(None)
}
