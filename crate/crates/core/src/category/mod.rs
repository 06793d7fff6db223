//! Finite categories over hereditarily finite carriers.
//!
//! A [`FinCategory`] is a plain table: objects, arrows with endpoints, an
//! identity arrow per object, and a total composition table over composable
//! pairs. Everything downstream (limits, the thinness argument, functor
//! categories, the size taxonomy) works by exhaustive search over these
//! tables, so every verdict is decidable and every failure carries a
//! witness.
//!
//! The central example is the collection category of a stage: objects are
//! the members of V_k, arrows are the set-theoretic functions between them,
//! encoded as Kuratowski graphs. Composition is function composition. The
//! stage bound keeps arrow counts tractable; V_3 already yields the
//! instructive case of four objects and eighteen arrows.

mod classify;
mod freyd;
mod functors;
mod limits;

pub use classify::{classify_size, SizeFlags, SizeReport};
pub use freyd::{
    cantor_check, freyd_audit, freyd_enumerate, CantorReport, EnumerationReport, FreydReport,
    FreydVerdict,
};
pub use functors::{
    check_embedding, enumerate_functors, functor_category, functor_valid, nat_trans_valid,
    EmbeddingReport, Functor, NatTrans,
};
pub use limits::{binary_product, find_limit, is_limit, topos_audit, Cone, Diagram, FeatureCheck, ToposReport};

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Value};
use thiserror::Error;

use crate::hf::{function_graph, functions_between, HfError, HfSet};
use crate::hierarchy::Stage;

/// Largest stage whose collection category is materialized; |arrows| grows
/// like sum of |Y|^|X| and is already 18 at stage 3.
pub const COLL_MAX_STAGE: u32 = 3;

/// Cap passed to function enumeration inside [`build_coll`].
const FUNCTION_CAP: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CategoryError {
    #[error("malformed category: {msg}")]
    Malformed { msg: String },
    #[error("stage {k} exceeds the collection-category bound {max}")]
    StageTooLarge { k: u32, max: u32 },
    #[error("{what} carries no set encoding")]
    MissingPayload { what: String },
    #[error("search space exceeds the cap: {msg}")]
    Capacity { msg: String },
    #[error("category description: {msg}")]
    Json { msg: String },
    #[error(transparent)]
    Hf(#[from] HfError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectData {
    pub label: String,
    /// Set encoding, present for collection categories and set-backed files.
    pub payload: Option<HfSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowData {
    pub label: String,
    pub dom: usize,
    pub cod: usize,
    /// Graph encoding for function arrows.
    pub payload: Option<HfSet>,
}

/// A finite category as explicit tables. `compose[(f, g)]` is the composite
/// `f` after `g`, present exactly when `cod(g) = dom(f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinCategory {
    pub objects: Vec<ObjectData>,
    pub arrows: Vec<ArrowData>,
    /// Identity arrow index per object.
    pub identity: Vec<usize>,
    pub compose: BTreeMap<(usize, usize), usize>,
}

/// A categorical law violated by a table, with the witnessing arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawFailure {
    IdentityType { object: String, arrow: String },
    CompositeType { f: String, g: String, composite: String },
    IdentityLeft { f: String },
    IdentityRight { f: String },
    Associativity { f: String, g: String, h: String },
}

impl std::fmt::Display for LawFailure {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LawFailure::IdentityType { object, arrow } => {
                write!(out, "identity {arrow} of {object} is not an endo-arrow of {object}")
            }
            LawFailure::CompositeType { f, g, composite } => {
                write!(out, "composite {composite} of {f} after {g} has the wrong endpoints")
            }
            LawFailure::IdentityLeft { f } => write!(out, "id . {f} differs from {f}"),
            LawFailure::IdentityRight { f } => write!(out, "{f} . id differs from {f}"),
            LawFailure::Associativity { f, g, h } => {
                write!(out, "({f} . {g}) . {h} differs from {f} . ({g} . {h})")
            }
        }
    }
}

impl LawFailure {
    pub fn to_json(&self) -> Value {
        match self {
            LawFailure::IdentityType { object, arrow } => {
                json!({ "law": "identity_type", "object": object, "arrow": arrow })
            }
            LawFailure::CompositeType { f, g, composite } => {
                json!({ "law": "composite_type", "f": f, "g": g, "composite": composite })
            }
            LawFailure::IdentityLeft { f } => json!({ "law": "identity_left", "f": f }),
            LawFailure::IdentityRight { f } => json!({ "law": "identity_right", "f": f }),
            LawFailure::Associativity { f, g, h } => {
                json!({ "law": "associativity", "f": f, "g": g, "h": h })
            }
        }
    }
}

impl FinCategory {
    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    /// Arrow indices from `x` to `y`, ascending.
    pub fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].dom == x && self.arrows[a].cod == y)
            .collect()
    }

    /// `f` after `g`, when composable.
    pub fn composite(&self, f: usize, g: usize) -> Option<usize> {
        self.compose.get(&(f, g)).copied()
    }

    pub fn is_thin(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.arrows
            .iter()
            .all(|a| seen.insert((a.dom, a.cod)))
    }

    /// Structural soundness, then the laws. Structural defects (dangling
    /// indices, duplicate labels, a non-total or spurious composition
    /// table) are errors; a well-formed table that breaks a law yields the
    /// first violation in scan order.
    pub fn validate(&self) -> Result<Option<LawFailure>, CategoryError> {
        let bad = |msg: String| Err(CategoryError::Malformed { msg });
        if self.identity.len() != self.objects.len() {
            return bad(format!(
                "{} objects but {} identity entries",
                self.objects.len(),
                self.identity.len()
            ));
        }
        let mut labels = BTreeSet::new();
        for o in &self.objects {
            if !labels.insert(&o.label) {
                return bad(format!("duplicate object label '{}'", o.label));
            }
        }
        let mut labels = BTreeSet::new();
        for a in &self.arrows {
            if !labels.insert(&a.label) {
                return bad(format!("duplicate arrow label '{}'", a.label));
            }
            if a.dom >= self.objects.len() || a.cod >= self.objects.len() {
                return bad(format!("arrow '{}' has a dangling endpoint", a.label));
            }
        }
        for (i, &id) in self.identity.iter().enumerate() {
            if id >= self.arrows.len() {
                return bad(format!("identity of '{}' is a dangling arrow", self.objects[i].label));
            }
        }
        for ((f, g), h) in &self.compose {
            if *f >= self.arrows.len() || *g >= self.arrows.len() || *h >= self.arrows.len() {
                return bad("composition table mentions a dangling arrow".to_string());
            }
            if self.arrows[*g].cod != self.arrows[*f].dom {
                return bad(format!(
                    "spurious composite of '{}' after '{}'",
                    self.arrows[*f].label, self.arrows[*g].label
                ));
            }
        }
        for f in 0..self.arrows.len() {
            for g in 0..self.arrows.len() {
                if self.arrows[g].cod == self.arrows[f].dom && !self.compose.contains_key(&(f, g)) {
                    return bad(format!(
                        "composition table is not total: missing '{}' after '{}'",
                        self.arrows[f].label, self.arrows[g].label
                    ));
                }
            }
        }

        for (i, &id) in self.identity.iter().enumerate() {
            if self.arrows[id].dom != i || self.arrows[id].cod != i {
                return Ok(Some(LawFailure::IdentityType {
                    object: self.objects[i].label.clone(),
                    arrow: self.arrows[id].label.clone(),
                }));
            }
        }
        for ((f, g), h) in &self.compose {
            if self.arrows[*h].dom != self.arrows[*g].dom
                || self.arrows[*h].cod != self.arrows[*f].cod
            {
                return Ok(Some(LawFailure::CompositeType {
                    f: self.arrows[*f].label.clone(),
                    g: self.arrows[*g].label.clone(),
                    composite: self.arrows[*h].label.clone(),
                }));
            }
        }
        for f in 0..self.arrows.len() {
            let right = self.identity[self.arrows[f].dom];
            if self.composite(f, right) != Some(f) {
                return Ok(Some(LawFailure::IdentityRight {
                    f: self.arrows[f].label.clone(),
                }));
            }
            let left = self.identity[self.arrows[f].cod];
            if self.composite(left, f) != Some(f) {
                return Ok(Some(LawFailure::IdentityLeft {
                    f: self.arrows[f].label.clone(),
                }));
            }
        }
        for h in 0..self.arrows.len() {
            for g in 0..self.arrows.len() {
                if self.arrows[h].cod != self.arrows[g].dom {
                    continue;
                }
                for f in 0..self.arrows.len() {
                    if self.arrows[g].cod != self.arrows[f].dom {
                        continue;
                    }
                    let gh = self.composite(g, h).unwrap();
                    let fg = self.composite(f, g).unwrap();
                    if self.composite(f, gh) != self.composite(fg, h) {
                        return Ok(Some(LawFailure::Associativity {
                            f: self.arrows[f].label.clone(),
                            g: self.arrows[g].label.clone(),
                            h: self.arrows[h].label.clone(),
                        }));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn to_json(&self) -> Value {
        let objects: Vec<Value> = self
            .objects
            .iter()
            .map(|o| match &o.payload {
                Some(set) => json!({ "label": o.label, "set": set.to_string() }),
                None => json!({ "label": o.label }),
            })
            .collect();
        let arrows: Vec<Value> = self
            .arrows
            .iter()
            .map(|a| {
                let mut entry = json!({
                    "id": a.label,
                    "dom": self.objects[a.dom].label,
                    "cod": self.objects[a.cod].label,
                });
                if let Some(set) = &a.payload {
                    entry["set"] = Value::String(set.to_string());
                }
                entry
            })
            .collect();
        let identity: BTreeMap<String, String> = self
            .identity
            .iter()
            .enumerate()
            .map(|(i, &id)| (self.objects[i].label.clone(), self.arrows[id].label.clone()))
            .collect();
        let compose: Vec<Value> = self
            .compose
            .iter()
            .map(|((f, g), h)| {
                json!([
                    self.arrows[*f].label,
                    self.arrows[*g].label,
                    self.arrows[*h].label,
                ])
            })
            .collect();
        json!({
            "objects": objects,
            "arrows": arrows,
            "identity": identity,
            "compose": compose,
        })
    }

    /// Reads the table form. Objects may be plain label strings or
    /// `{"label", "set"?}`; arrows are `{"id", "dom", "cod", "set"?}`;
    /// `identity` maps object labels to arrow ids; `compose` lists
    /// `[f, g, f_after_g]` triples.
    pub fn from_json(v: &Value) -> Result<FinCategory, CategoryError> {
        let err = |msg: &str| CategoryError::Json { msg: msg.to_string() };
        let top = v.as_object().ok_or_else(|| err("expected an object"))?;
        let mut objects = Vec::new();
        for entry in top
            .get("objects")
            .and_then(Value::as_array)
            .ok_or_else(|| err("'objects' must be an array"))?
        {
            let (label, payload) = match entry {
                Value::String(s) => (s.clone(), None),
                Value::Object(fields) => {
                    let label = fields
                        .get("label")
                        .and_then(Value::as_str)
                        .ok_or_else(|| err("object entry needs a 'label'"))?
                        .to_string();
                    let payload = match fields.get("set").and_then(Value::as_str) {
                        Some(text) => Some(HfSet::parse(text).map_err(|e| CategoryError::Json {
                            msg: format!("object '{label}': {e}"),
                        })?),
                        None => None,
                    };
                    (label, payload)
                }
                _ => return Err(err("object entries must be strings or objects")),
            };
            objects.push(ObjectData { label, payload });
        }
        let object_index: BTreeMap<&str, usize> = objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.label.as_str(), i))
            .collect();
        if object_index.len() != objects.len() {
            return Err(err("duplicate object labels"));
        }

        let mut arrows = Vec::new();
        for entry in top
            .get("arrows")
            .and_then(Value::as_array)
            .ok_or_else(|| err("'arrows' must be an array"))?
        {
            let fields = entry
                .as_object()
                .ok_or_else(|| err("arrow entries must be objects"))?;
            let label = fields
                .get("id")
                .and_then(Value::as_str)
                .ok_or_else(|| err("arrow entry needs an 'id'"))?
                .to_string();
            let endpoint = |key: &str| -> Result<usize, CategoryError> {
                let name = fields.get(key).and_then(Value::as_str).ok_or_else(|| {
                    CategoryError::Json {
                        msg: format!("arrow '{label}' needs a '{key}'"),
                    }
                })?;
                object_index
                    .get(name)
                    .copied()
                    .ok_or_else(|| CategoryError::Json {
                        msg: format!("arrow '{label}' {key} names unknown object '{name}'"),
                    })
            };
            let dom = endpoint("dom")?;
            let cod = endpoint("cod")?;
            let payload = match fields.get("set").and_then(Value::as_str) {
                Some(text) => Some(HfSet::parse(text).map_err(|e| CategoryError::Json {
                    msg: format!("arrow '{label}': {e}"),
                })?),
                None => None,
            };
            arrows.push(ArrowData {
                label,
                dom,
                cod,
                payload,
            });
        }
        let arrow_index: BTreeMap<&str, usize> = arrows
            .iter()
            .enumerate()
            .map(|(i, a)| (a.label.as_str(), i))
            .collect();
        if arrow_index.len() != arrows.len() {
            return Err(err("duplicate arrow ids"));
        }

        let identity_map = top
            .get("identity")
            .and_then(Value::as_object)
            .ok_or_else(|| err("'identity' must be an object"))?;
        let mut identity = vec![usize::MAX; objects.len()];
        for (obj, arrow) in identity_map {
            let &i = object_index
                .get(obj.as_str())
                .ok_or_else(|| CategoryError::Json {
                    msg: format!("identity names unknown object '{obj}'"),
                })?;
            let name = arrow
                .as_str()
                .ok_or_else(|| err("identity values must be arrow ids"))?;
            identity[i] = *arrow_index.get(name).ok_or_else(|| CategoryError::Json {
                msg: format!("identity of '{obj}' names unknown arrow '{name}'"),
            })?;
        }
        if let Some(i) = identity.iter().position(|&id| id == usize::MAX) {
            return Err(CategoryError::Json {
                msg: format!("object '{}' has no identity entry", objects[i].label),
            });
        }

        let mut compose = BTreeMap::new();
        for triple in top
            .get("compose")
            .and_then(Value::as_array)
            .ok_or_else(|| err("'compose' must be an array"))?
        {
            let parts = triple
                .as_array()
                .filter(|t| t.len() == 3)
                .ok_or_else(|| err("compose entries must be [f, g, h] triples"))?;
            let resolve = |slot: &Value| -> Result<usize, CategoryError> {
                let name = slot
                    .as_str()
                    .ok_or_else(|| err("compose entries must hold arrow ids"))?;
                arrow_index
                    .get(name)
                    .copied()
                    .ok_or_else(|| CategoryError::Json {
                        msg: format!("compose names unknown arrow '{name}'"),
                    })
            };
            let f = resolve(&parts[0])?;
            let g = resolve(&parts[1])?;
            let h = resolve(&parts[2])?;
            if compose.insert((f, g), h).is_some() {
                return Err(CategoryError::Json {
                    msg: format!(
                        "duplicate compose entry for '{}' after '{}'",
                        arrows[f].label, arrows[g].label
                    ),
                });
            }
        }

        Ok(FinCategory {
            objects,
            arrows,
            identity,
            compose,
        })
    }
}

/// The discrete category on `n` objects.
pub fn discrete(n: usize) -> FinCategory {
    let objects = (0..n)
        .map(|i| ObjectData {
            label: format!("o{i}"),
            payload: None,
        })
        .collect();
    let arrows = (0..n)
        .map(|i| ArrowData {
            label: format!("id{i}"),
            dom: i,
            cod: i,
            payload: None,
        })
        .collect();
    let compose = (0..n).map(|i| ((i, i), i)).collect();
    FinCategory {
        objects,
        arrows,
        identity: (0..n).collect(),
        compose,
    }
}

/// The collection category of a stage: members of V_k as objects, all
/// set functions between them as arrows, with graphs as payloads.
pub fn build_coll(stage: &Stage) -> Result<FinCategory, CategoryError> {
    if stage.index > COLL_MAX_STAGE {
        return Err(CategoryError::StageTooLarge {
            k: stage.index,
            max: COLL_MAX_STAGE,
        });
    }
    let elems = stage.carrier().universe();
    let objects: Vec<ObjectData> = elems
        .iter()
        .map(|x| ObjectData {
            label: x.to_string(),
            payload: Some(x.clone()),
        })
        .collect();

    let mut arrows = Vec::new();
    let mut by_graph: BTreeMap<(usize, usize, HfSet), usize> = BTreeMap::new();
    for (i, x) in elems.iter().enumerate() {
        for (j, y) in elems.iter().enumerate() {
            for graph in functions_between(x, y, FUNCTION_CAP)? {
                let idx = arrows.len();
                by_graph.insert((i, j, graph.clone()), idx);
                arrows.push(ArrowData {
                    label: format!("f{idx}"),
                    dom: i,
                    cod: j,
                    payload: Some(graph),
                });
            }
        }
    }

    let identity: Vec<usize> = elems
        .iter()
        .enumerate()
        .map(|(i, x)| by_graph[&(i, i, function_graph(x.members(), x.members()))])
        .collect();

    let mut compose = BTreeMap::new();
    for (gi, g) in arrows.iter().enumerate() {
        let g_view = g.payload.as_ref().unwrap().fn_view()?;
        for (fi, f) in arrows.iter().enumerate() {
            if f.dom != g.cod {
                continue;
            }
            let f_view = f.payload.as_ref().unwrap().fn_view()?;
            let composite = function_graph(
                &g_view
                    .pairs()
                    .iter()
                    .map(|(a, _)| a.clone())
                    .collect::<Vec<_>>(),
                &g_view
                    .pairs()
                    .iter()
                    .map(|(_, b)| f_view.apply(b).expect("codomain matches").clone())
                    .collect::<Vec<_>>(),
            );
            compose.insert((fi, gi), by_graph[&(g.dom, f.cod, composite)]);
        }
    }

    Ok(FinCategory {
        objects,
        arrows,
        identity,
        compose,
    })
}
