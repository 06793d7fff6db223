//! Functors, natural transformations, functor categories, and the stage
//! embeddings between collection categories.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::hierarchy::build_stage;

use super::limits::{find_limit, is_limit, Cone, Diagram};
use super::{build_coll, ArrowData, CategoryError, FinCategory, ObjectData, COLL_MAX_STAGE};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Functor {
    /// Image object per source object.
    pub object_map: Vec<usize>,
    /// Image arrow per source arrow.
    pub arrow_map: Vec<usize>,
}

/// Typing, identity, and composition preservation, checked exhaustively.
pub fn functor_valid(c: &FinCategory, d: &FinCategory, f: &Functor) -> bool {
    if f.object_map.len() != c.objects.len() || f.arrow_map.len() != c.arrows.len() {
        return false;
    }
    if f.object_map.iter().any(|&o| o >= d.objects.len())
        || f.arrow_map.iter().any(|&a| a >= d.arrows.len())
    {
        return false;
    }
    for (a, arrow) in c.arrows.iter().enumerate() {
        let image = &d.arrows[f.arrow_map[a]];
        if image.dom != f.object_map[arrow.dom] || image.cod != f.object_map[arrow.cod] {
            return false;
        }
    }
    for (i, &id) in c.identity.iter().enumerate() {
        if f.arrow_map[id] != d.identity[f.object_map[i]] {
            return false;
        }
    }
    c.compose.iter().all(|(&(p, q), &r)| {
        d.composite(f.arrow_map[p], f.arrow_map[q]) == Some(f.arrow_map[r])
    })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NatTrans {
    /// Component arrow in the target per source object.
    pub components: Vec<usize>,
}

/// Naturality of `t : f => g`, checked on every source arrow.
pub fn nat_trans_valid(
    c: &FinCategory,
    d: &FinCategory,
    f: &Functor,
    g: &Functor,
    t: &NatTrans,
) -> bool {
    if t.components.len() != c.objects.len() {
        return false;
    }
    for (i, &comp) in t.components.iter().enumerate() {
        if comp >= d.arrows.len()
            || d.arrows[comp].dom != f.object_map[i]
            || d.arrows[comp].cod != g.object_map[i]
        {
            return false;
        }
    }
    c.arrows.iter().enumerate().all(|(a, arrow)| {
        let left = d.composite(g.arrow_map[a], t.components[arrow.dom]);
        let right = d.composite(t.components[arrow.cod], f.arrow_map[a]);
        left.is_some() && left == right
    })
}

/// All functors `c -> d` in lexicographic object-map order.
pub fn enumerate_functors(
    c: &FinCategory,
    d: &FinCategory,
    cap: u64,
) -> Result<Vec<Functor>, CategoryError> {
    let object_maps = (d.objects.len() as u128).checked_pow(c.objects.len() as u32);
    match object_maps {
        Some(n) if n <= cap as u128 => {}
        _ => {
            return Err(CategoryError::Capacity {
                msg: format!(
                    "{} object maps exceed the cap {cap}",
                    object_maps.map_or("too many".to_string(), |n| n.to_string())
                ),
            })
        }
    }
    let mut out = Vec::new();
    if c.objects.is_empty() {
        out.push(Functor {
            object_map: Vec::new(),
            arrow_map: Vec::new(),
        });
        return Ok(out);
    }
    let mut object_map = vec![0usize; c.objects.len()];
    if d.objects.is_empty() {
        return Ok(out);
    }
    loop {
        collect_arrow_maps(c, d, &object_map, cap, &mut out)?;
        let mut pos = object_map.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            object_map[pos - 1] += 1;
            if object_map[pos - 1] < d.objects.len() {
                break;
            }
            object_map[pos - 1] = 0;
            pos -= 1;
        }
    }
}

fn collect_arrow_maps(
    c: &FinCategory,
    d: &FinCategory,
    object_map: &[usize],
    cap: u64,
    out: &mut Vec<Functor>,
) -> Result<(), CategoryError> {
    // Identity arrows are forced; the rest range over the typed hom-set.
    let identity_of: BTreeMap<usize, usize> =
        c.identity.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let mut choices: Vec<Vec<usize>> = Vec::with_capacity(c.arrows.len());
    let mut total = 1u128;
    for (a, arrow) in c.arrows.iter().enumerate() {
        let candidates = match identity_of.get(&a) {
            Some(&obj) => vec![d.identity[object_map[obj]]],
            None => d.hom(object_map[arrow.dom], object_map[arrow.cod]),
        };
        if candidates.is_empty() {
            return Ok(());
        }
        total = total.saturating_mul(candidates.len() as u128);
        choices.push(candidates);
    }
    if total > cap as u128 {
        return Err(CategoryError::Capacity {
            msg: format!("{total} arrow maps exceed the cap {cap}"),
        });
    }
    let mut picks = vec![0usize; choices.len()];
    loop {
        let candidate = Functor {
            object_map: object_map.to_vec(),
            arrow_map: picks
                .iter()
                .zip(&choices)
                .map(|(&p, ch)| ch[p])
                .collect(),
        };
        if functor_valid(c, d, &candidate) {
            out.push(candidate);
        }
        let mut pos = picks.len();
        loop {
            if pos == 0 {
                return Ok(());
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

/// The category of functors `c -> d` with natural transformations as
/// arrows, built by exhaustive enumeration and validated by construction.
pub fn functor_category(
    c: &FinCategory,
    d: &FinCategory,
    cap: u64,
) -> Result<FinCategory, CategoryError> {
    let functors = enumerate_functors(c, d, cap)?;
    let objects: Vec<ObjectData> = functors
        .iter()
        .enumerate()
        .map(|(i, _)| ObjectData {
            label: format!("F{i}"),
            payload: None,
        })
        .collect();

    let mut arrows = Vec::new();
    let mut transes: Vec<(usize, usize, NatTrans)> = Vec::new();
    let mut index: BTreeMap<(usize, usize, Vec<usize>), usize> = BTreeMap::new();
    for (fi, f) in functors.iter().enumerate() {
        for (gi, g) in functors.iter().enumerate() {
            collect_nat_transes(c, d, f, g, cap, &mut |t| {
                let idx = arrows.len();
                index.insert((fi, gi, t.components.clone()), idx);
                arrows.push(ArrowData {
                    label: format!("t{idx}"),
                    dom: fi,
                    cod: gi,
                    payload: None,
                });
                transes.push((fi, gi, t));
            })?;
        }
    }

    let identity: Vec<usize> = functors
        .iter()
        .enumerate()
        .map(|(fi, f)| {
            let components: Vec<usize> = f.object_map.iter().map(|&o| d.identity[o]).collect();
            index[&(fi, fi, components)]
        })
        .collect();

    let mut compose = BTreeMap::new();
    for (si, (s_dom, s_cod, s)) in transes.iter().enumerate() {
        for (ti, (t_dom, t_cod, t)) in transes.iter().enumerate() {
            if t_cod != s_dom {
                continue;
            }
            let components: Vec<usize> = s
                .components
                .iter()
                .zip(&t.components)
                .map(|(&a, &b)| d.composite(a, b).expect("components compose"))
                .collect();
            compose.insert((si, ti), index[&(*t_dom, *s_cod, components)]);
        }
    }

    Ok(FinCategory {
        objects,
        arrows,
        identity,
        compose,
    })
}

fn collect_nat_transes(
    c: &FinCategory,
    d: &FinCategory,
    f: &Functor,
    g: &Functor,
    cap: u64,
    sink: &mut impl FnMut(NatTrans),
) -> Result<(), CategoryError> {
    let choices: Vec<Vec<usize>> = (0..c.objects.len())
        .map(|i| d.hom(f.object_map[i], g.object_map[i]))
        .collect();
    if choices.iter().any(|ch| ch.is_empty()) {
        return Ok(());
    }
    let total = choices
        .iter()
        .fold(1u128, |acc, ch| acc.saturating_mul(ch.len() as u128));
    if total > cap as u128 {
        return Err(CategoryError::Capacity {
            msg: format!("{total} component tuples exceed the cap {cap}"),
        });
    }
    let mut picks = vec![0usize; choices.len()];
    loop {
        let t = NatTrans {
            components: picks
                .iter()
                .zip(&choices)
                .map(|(&p, ch)| ch[p])
                .collect(),
        };
        if nat_trans_valid(c, d, f, g, &t) {
            sink(t);
        }
        let mut pos = picks.len();
        loop {
            if pos == 0 {
                return Ok(());
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

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub lower: u32,
    pub upper: u32,
    pub functor_laws: bool,
    pub faithful: bool,
    pub full: bool,
    pub terminal_found: bool,
    pub terminal_preserved: bool,
    pub products_checked: u64,
    pub products_preserved: bool,
    pub embedding: bool,
}

impl EmbeddingReport {
    pub fn to_json(&self) -> Value {
        json!({
            "lower": self.lower,
            "upper": self.upper,
            "functor_laws": self.functor_laws,
            "faithful": self.faithful,
            "full": self.full,
            "terminal_found": self.terminal_found,
            "terminal_preserved": self.terminal_preserved,
            "products_checked": self.products_checked,
            "products_preserved": self.products_preserved,
            "embedding": self.embedding,
        })
    }
}

/// Audits the inclusion of one collection category into a higher one: it
/// should be a full and faithful functor preserving the terminal object and
/// every binary product the lower stage has.
pub fn check_embedding(lower: u32, upper: u32) -> Result<EmbeddingReport, CategoryError> {
    if lower >= upper {
        return Err(CategoryError::Malformed {
            msg: format!("embedding needs lower < upper, got {lower} and {upper}"),
        });
    }
    if upper > COLL_MAX_STAGE {
        return Err(CategoryError::StageTooLarge {
            k: upper,
            max: COLL_MAX_STAGE,
        });
    }
    let stage_err = |e: crate::hierarchy::HierarchyError| CategoryError::Malformed {
        msg: e.to_string(),
    };
    let source = build_coll(&*build_stage(lower).map_err(stage_err)?)?;
    let target = build_coll(&*build_stage(upper).map_err(stage_err)?)?;

    let target_objects: BTreeMap<_, usize> = target
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| (o.payload.clone().unwrap(), i))
        .collect();
    let target_arrows: BTreeMap<_, usize> = target
        .arrows
        .iter()
        .enumerate()
        .map(|(i, a)| ((a.dom, a.cod, a.payload.clone().unwrap()), i))
        .collect();

    let object_map: Vec<usize> = source
        .objects
        .iter()
        .map(|o| target_objects[o.payload.as_ref().unwrap()])
        .collect();
    let arrow_map: Vec<usize> = source
        .arrows
        .iter()
        .map(|a| {
            target_arrows[&(
                object_map[a.dom],
                object_map[a.cod],
                a.payload.clone().unwrap(),
            )]
        })
        .collect();
    let inclusion = Functor {
        object_map,
        arrow_map,
    };

    let functor_laws = functor_valid(&source, &target, &inclusion);
    let faithful = {
        let mut seen = inclusion.arrow_map.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len() == inclusion.arrow_map.len()
    };
    let full = (0..source.objects.len()).all(|x| {
        (0..source.objects.len()).all(|y| {
            source.hom(x, y).len()
                == target
                    .hom(inclusion.object_map[x], inclusion.object_map[y])
                    .len()
        })
    });

    let terminal = find_limit(&source, &Diagram::Empty)?;
    let terminal_found = terminal.is_some();
    let terminal_preserved = match &terminal {
        Some(cone) => is_limit(
            &target,
            &Diagram::Empty,
            &Cone {
                apex: inclusion.object_map[cone.apex],
                legs: Vec::new(),
            },
        )?,
        // Nothing to preserve.
        None => true,
    };

    let mut products_checked = 0u64;
    let mut products_preserved = true;
    for x in 0..source.objects.len() {
        for y in x..source.objects.len() {
            let Some(cone) = find_limit(&source, &Diagram::Discrete(vec![x, y]))? else {
                continue;
            };
            products_checked += 1;
            let mapped = Cone {
                apex: inclusion.object_map[cone.apex],
                legs: cone.legs.iter().map(|&l| inclusion.arrow_map[l]).collect(),
            };
            let image_diagram =
                Diagram::Discrete(vec![inclusion.object_map[x], inclusion.object_map[y]]);
            if !is_limit(&target, &image_diagram, &mapped)? {
                products_preserved = false;
            }
        }
    }

    let embedding = functor_laws
        && faithful
        && full
        && terminal_found
        && terminal_preserved
        && products_preserved;
    Ok(EmbeddingReport {
        lower,
        upper,
        functor_laws,
        faithful,
        full,
        terminal_found,
        terminal_preserved,
        products_checked,
        products_preserved,
        embedding,
    })
}
