//! The size taxonomy of a category relative to a tier configuration.
//!
//! Everything reduces to ranks. An encoded category has an object set (the
//! object payloads collected into one set), a morphism set (likewise for
//! arrow graphs), and one hom-set per object pair. Membership in a tier
//! carrier is a rank comparison, so each flag below is decided by pure
//! arithmetic on three numbers; no stage is materialized.
//!
//! Relative to tier `n` with stage index `k_n`:
//! small means both encodings sit inside the tier; locally small relaxes
//! the object set one tier up while every hom-set stays inside; tiny means
//! small at some strictly lower tier; large means small one tier up but not
//! here; very large means not even that. Above the configured top the next
//! tier is read as `k + 1`, matching the convention used when collections
//! are built at the top tier.
//!
//! Note the conflation inherent in the morphism encoding: arrows are
//! recorded by their graphs alone, so the empty functions out of the empty
//! set collapse to a single element. Ranks are unaffected, which is all the
//! taxonomy consumes.

use serde_json::{json, Value};

use crate::hf::HfSet;
use crate::hierarchy::TierConfig;

use super::{CategoryError, FinCategory};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeFlags {
    pub tier: usize,
    pub k: u32,
    pub small: bool,
    pub locally_small: bool,
    pub tiny: bool,
    pub large: bool,
    pub very_large: bool,
}

impl SizeFlags {
    pub fn to_json(&self) -> Value {
        json!({
            "tier": self.tier,
            "stage": self.k,
            "small": self.small,
            "locally_small": self.locally_small,
            "tiny": self.tiny,
            "large": self.large,
            "very_large": self.very_large,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeReport {
    pub ob_rank: u32,
    pub mor_rank: u32,
    pub max_homset_rank: u32,
    pub tiers: Vec<SizeFlags>,
}

impl SizeReport {
    pub fn to_json(&self) -> Value {
        json!({
            "ob_rank": self.ob_rank,
            "mor_rank": self.mor_rank,
            "max_homset_rank": self.max_homset_rank,
            "tiers": self.tiers.iter().map(SizeFlags::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Classifies an encoded category at every configured tier. Requires set
/// payloads on all objects and arrows.
pub fn classify_size(c: &FinCategory, t: &TierConfig) -> Result<SizeReport, CategoryError> {
    let mut ob_members = Vec::new();
    for o in &c.objects {
        ob_members.push(o.payload.clone().ok_or_else(|| CategoryError::MissingPayload {
            what: format!("object '{}'", o.label),
        })?);
    }
    let mut mor_members = Vec::new();
    for a in &c.arrows {
        mor_members.push(a.payload.clone().ok_or_else(|| CategoryError::MissingPayload {
            what: format!("arrow '{}'", a.label),
        })?);
    }
    let ob_rank = HfSet::from_members(ob_members).rank();
    let mor_rank = HfSet::from_members(mor_members).rank();
    let max_homset_rank = (0..c.objects.len())
        .flat_map(|x| (0..c.objects.len()).map(move |y| (x, y)))
        .map(|(x, y)| {
            HfSet::from_members(
                c.hom(x, y)
                    .into_iter()
                    .map(|a| c.arrows[a].payload.clone().unwrap())
                    .collect(),
            )
            .rank()
        })
        .max()
        .unwrap_or(0);

    let inside = |rank: u32, k: u32| rank < k;
    let mut tiers = Vec::new();
    for n in 0..t.len() {
        let k = t.k(n).expect("tier in range");
        let next = t.next_k(n).expect("tier in range");
        let small = inside(ob_rank, k) && inside(mor_rank, k);
        let small_next = inside(ob_rank, next) && inside(mor_rank, next);
        let locally_small = inside(ob_rank, next) && inside(max_homset_rank, k);
        let tiny = (0..n).any(|m| {
            let km = t.k(m).expect("tier in range");
            inside(ob_rank, km) && inside(mor_rank, km)
        });
        tiers.push(SizeFlags {
            tier: n,
            k,
            small,
            locally_small,
            tiny,
            large: small_next && !small,
            very_large: !small_next,
        });
    }
    Ok(SizeReport {
        ob_rank,
        mor_rank,
        max_homset_rank,
        tiers,
    })
}
