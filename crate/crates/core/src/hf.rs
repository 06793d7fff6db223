//! Hereditarily finite sets in canonical form.
//!
//! A set is stored as its member list sorted by Ackermann code and deduplicated,
//! so structural equality is extensional equality and rendering is canonical.
//! The Ackermann code of `x` is `Σ_{y ∈ x} 2^code(y)`; comparing two sets by
//! code is the same as comparing their member lists largest-first, which is how
//! [`Ord`] is implemented (no big integers needed).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Default cap on cardinalities fed to exponential-size operations
/// (powerset, completeness checks, cartesian products).
pub const DEFAULT_CARD_BOUND: usize = 20;

/// Default cap on how many function graphs an enumeration may produce.
pub const DEFAULT_FUNCTION_CAP: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HfError {
    #[error("{op}: cardinality {size} exceeds bound {bound}")]
    TooLarge {
        op: &'static str,
        size: usize,
        bound: usize,
    },
    #[error("Ackermann code does not fit in 64 bits")]
    CodeOverflow,
    #[error("not a function graph: {reason}")]
    NotAFunction { reason: String },
    #[error("set notation error at byte {at}: {msg}")]
    Notation { at: usize, msg: String },
}

/// A hereditarily finite set in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HfSet {
    members: Vec<HfSet>,
}

impl HfSet {
    /// The empty set.
    pub fn empty() -> Self {
        HfSet { members: Vec::new() }
    }

    /// Builds a set from arbitrary members: sorts by Ackermann order and
    /// drops duplicates.
    pub fn from_members(mut members: Vec<HfSet>) -> Self {
        members.sort();
        members.dedup();
        HfSet { members }
    }

    /// Members in ascending Ackermann order.
    pub fn members(&self) -> &[HfSet] {
        &self.members
    }

    pub fn card(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Membership test by binary search over the canonical member list.
    pub fn contains(&self, x: &HfSet) -> bool {
        self.members.binary_search(x).is_ok()
    }

    pub fn is_subset_of(&self, other: &HfSet) -> bool {
        self.members.iter().all(|m| other.contains(m))
    }

    /// `{x, y}` (collapses to `{x}` when `x = y`).
    pub fn pair_set(x: HfSet, y: HfSet) -> HfSet {
        HfSet::from_members(vec![x, y])
    }

    /// `{x}`.
    pub fn singleton(x: HfSet) -> HfSet {
        HfSet { members: vec![x] }
    }

    /// Kuratowski ordered pair `{{x}, {x, y}}`.
    pub fn ordered_pair(x: HfSet, y: HfSet) -> HfSet {
        let first = HfSet::singleton(x.clone());
        let both = HfSet::pair_set(x, y);
        HfSet::pair_set(first, both)
    }

    /// Decodes a Kuratowski pair; `None` when the set is not one.
    pub fn as_ordered_pair(&self) -> Option<(HfSet, HfSet)> {
        match self.members.as_slice() {
            [s] => match s.members.as_slice() {
                [a] => Some((a.clone(), a.clone())),
                _ => None,
            },
            [p, q] => {
                // One component must be {a}, the other {a, b} with b ≠ a.
                let (sing, pair) = match (p.card(), q.card()) {
                    (1, 2) => (p, q),
                    (2, 1) => (q, p),
                    _ => return None,
                };
                let a = &sing.members[0];
                if !pair.contains(a) {
                    return None;
                }
                let b = pair.members.iter().find(|m| *m != a)?;
                Some((a.clone(), b.clone()))
            }
            _ => None,
        }
    }

    /// Von Neumann successor `x ∪ {x}`.
    pub fn successor(&self) -> HfSet {
        let mut members = self.members.clone();
        members.push(self.clone());
        HfSet::from_members(members)
    }

    /// Von Neumann natural `n` = `{0, 1, …, n-1}`.
    pub fn von_neumann(n: usize) -> HfSet {
        let mut x = HfSet::empty();
        for _ in 0..n {
            x = x.successor();
        }
        x
    }

    pub fn binary_union(&self, other: &HfSet) -> HfSet {
        let mut members = self.members.clone();
        members.extend_from_slice(&other.members);
        HfSet::from_members(members)
    }

    pub fn binary_intersection(&self, other: &HfSet) -> HfSet {
        let members = self
            .members
            .iter()
            .filter(|m| other.contains(m))
            .cloned()
            .collect();
        // Filtering a sorted list keeps it sorted.
        HfSet { members }
    }

    /// Big union `⋃x`: the set of members of members.
    pub fn union(&self) -> HfSet {
        let mut members = Vec::new();
        for m in &self.members {
            members.extend_from_slice(&m.members);
        }
        HfSet::from_members(members)
    }

    /// `P(x)` under the default cardinality bound.
    pub fn powerset(&self) -> Result<HfSet, HfError> {
        self.powerset_bounded(DEFAULT_CARD_BOUND)
    }

    /// `P(x)`, refused when `|x| > bound`.
    ///
    /// Subsets are generated by ascending bitmask over the canonical member
    /// list; because spreading bits across larger positions is monotone, the
    /// resulting subsets are already in ascending Ackermann order.
    pub fn powerset_bounded(&self, bound: usize) -> Result<HfSet, HfError> {
        let n = self.members.len();
        if n > bound {
            return Err(HfError::TooLarge {
                op: "powerset",
                size: n,
                bound,
            });
        }
        let mut subsets = Vec::with_capacity(1usize << n);
        for mask in 0u64..(1u64 << n) {
            let mut sel = Vec::with_capacity(mask.count_ones() as usize);
            for (i, m) in self.members.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    sel.push(m.clone());
                }
            }
            subsets.push(HfSet { members: sel });
        }
        Ok(HfSet { members: subsets })
    }

    /// `{m ∈ x : pred(m)}`.
    pub fn separation(&self, mut pred: impl FnMut(&HfSet) -> bool) -> HfSet {
        let members = self.members.iter().filter(|m| pred(m)).cloned().collect();
        HfSet { members }
    }

    /// `x × y` as a set of Kuratowski pairs; both factors must fit the bound.
    pub fn cartesian_product(&self, other: &HfSet, bound: usize) -> Result<HfSet, HfError> {
        for (op, card) in [
            ("cartesian_product (left factor)", self.card()),
            ("cartesian_product (right factor)", other.card()),
        ] {
            if card > bound {
                return Err(HfError::TooLarge {
                    op,
                    size: card,
                    bound,
                });
            }
        }
        let mut pairs = Vec::with_capacity(self.card() * other.card());
        for a in &self.members {
            for b in &other.members {
                pairs.push(HfSet::ordered_pair(a.clone(), b.clone()));
            }
        }
        Ok(HfSet::from_members(pairs))
    }

    /// Von Neumann rank: 0 for ∅, else 1 + max member rank.
    pub fn rank(&self) -> u32 {
        self.members.iter().map(|m| m.rank() + 1).max().unwrap_or(0)
    }

    /// Members of members, transitively, excluding `self`.
    pub fn transitive_closure(&self) -> HfSet {
        let mut acc = Vec::new();
        fn walk(x: &HfSet, acc: &mut Vec<HfSet>) {
            for m in x.members() {
                acc.push(m.clone());
                walk(m, acc);
            }
        }
        walk(self, &mut acc);
        HfSet::from_members(acc)
    }

    /// Every member is a subset.
    pub fn is_transitive(&self) -> bool {
        self.members.iter().all(|m| m.is_subset_of(self))
    }

    /// Transitive and closed under subsets of members.
    pub fn is_complete(&self, bound: usize) -> Result<bool, HfError> {
        if !self.is_transitive() {
            return Ok(false);
        }
        for m in &self.members {
            if m.card() > bound {
                return Err(HfError::TooLarge {
                    op: "is_complete",
                    size: m.card(),
                    bound,
                });
            }
            let n = m.card();
            for mask in 0u64..(1u64 << n) {
                let sel: Vec<HfSet> = m
                    .members
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, s)| s.clone())
                    .collect();
                if !self.contains(&HfSet { members: sel }) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Hereditarily membership-transitive (a von Neumann natural, at HF scale).
    pub fn is_ordinal(&self) -> bool {
        self.is_transitive() && self.members.iter().all(|m| m.is_ordinal())
    }

    pub fn is_function(&self) -> bool {
        self.fn_view().is_ok()
    }

    /// All four classification flags at once.
    pub fn classify(&self, bound: usize) -> Result<SetFlags, HfError> {
        Ok(SetFlags {
            transitive: self.is_transitive(),
            complete: self.is_complete(bound)?,
            ordinal: self.is_ordinal(),
            function: self.is_function(),
        })
    }

    /// Reads the set as a function graph: every member a Kuratowski pair,
    /// first coordinates distinct.
    pub fn fn_view(&self) -> Result<FnView, HfError> {
        let mut pairs = Vec::with_capacity(self.card());
        for m in &self.members {
            match m.as_ordered_pair() {
                Some(p) => pairs.push(p),
                None => {
                    return Err(HfError::NotAFunction {
                        reason: format!("member {m} is not an ordered pair"),
                    })
                }
            }
        }
        let mut firsts: Vec<&HfSet> = pairs.iter().map(|(a, _)| a).collect();
        firsts.sort();
        for w in firsts.windows(2) {
            if w[0] == w[1] {
                return Err(HfError::NotAFunction {
                    reason: format!("first coordinate {} repeats", w[0]),
                });
            }
        }
        let domain = HfSet::from_members(pairs.iter().map(|(a, _)| a.clone()).collect());
        let range = HfSet::from_members(pairs.iter().map(|(_, b)| b.clone()).collect());
        Ok(FnView {
            graph: self.clone(),
            domain,
            range,
            pairs,
        })
    }

    /// Ackermann code, erroring once a member code reaches 64 bits.
    pub fn ackermann(&self) -> Result<u64, HfError> {
        let mut code: u64 = 0;
        for m in &self.members {
            let c = m.ackermann()?;
            if c >= 64 {
                return Err(HfError::CodeOverflow);
            }
            code |= 1u64 << c;
        }
        Ok(code)
    }

    /// Inverse of [`HfSet::ackermann`].
    pub fn decode(n: u64) -> HfSet {
        let mut members = Vec::with_capacity(n.count_ones() as usize);
        for bit in 0..64 {
            if n & (1u64 << bit) != 0 {
                members.push(HfSet::decode(bit));
            }
        }
        // Ascending bit positions give ascending codes: already canonical.
        HfSet { members }
    }

    /// Parses brace/`#` notation; see the module-level grammar note.
    pub fn parse(text: &str) -> Result<HfSet, HfError> {
        let trimmed_start = text.len() - text.trim_start().len();
        let (set, used) = parse_prefix(text, trimmed_start)?;
        let rest = text[used..].trim();
        if !rest.is_empty() {
            return Err(HfError::Notation {
                at: used,
                msg: format!("trailing input {rest:?}"),
            });
        }
        Ok(set)
    }
}

/// A function graph together with its projections.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FnView {
    pub graph: HfSet,
    pub domain: HfSet,
    pub range: HfSet,
    pairs: Vec<(HfSet, HfSet)>,
}

impl FnView {
    pub fn apply(&self, x: &HfSet) -> Option<&HfSet> {
        self.pairs.iter().find(|(a, _)| a == x).map(|(_, b)| b)
    }

    pub fn pairs(&self) -> &[(HfSet, HfSet)] {
        &self.pairs
    }
}

/// Builds the graph of the function sending `domain[i]` to `values[i]`.
pub fn function_graph(domain: &[HfSet], values: &[HfSet]) -> HfSet {
    debug_assert_eq!(domain.len(), values.len());
    HfSet::from_members(
        domain
            .iter()
            .zip(values)
            .map(|(a, b)| HfSet::ordered_pair(a.clone(), b.clone()))
            .collect(),
    )
}

/// All function graphs from `x` to `y`, in lexicographic value order.
///
/// Refuses when `|y|^|x|` would exceed `cap`.
pub fn functions_between(x: &HfSet, y: &HfSet, cap: usize) -> Result<Vec<HfSet>, HfError> {
    let n = x.card();
    let k = y.card();
    let total = if n == 0 {
        1usize
    } else if k == 0 {
        0
    } else {
        let mut t = 1usize;
        for _ in 0..n {
            t = t.checked_mul(k).filter(|t| *t <= cap).ok_or(HfError::TooLarge {
                op: "functions_between",
                size: n,
                bound: cap,
            })?;
        }
        t
    };
    let mut out = Vec::with_capacity(total);
    if total == 0 {
        return Ok(out);
    }
    let mut idx = vec![0usize; n];
    loop {
        let values: Vec<HfSet> = idx.iter().map(|&i| y.members()[i].clone()).collect();
        out.push(function_graph(x.members(), &values));
        // Odometer over value indices.
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < k {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Classification flags; completeness is relative to the cardinality bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SetFlags {
    pub transitive: bool,
    pub complete: bool,
    pub ordinal: bool,
    pub function: bool,
}

impl Ord for HfSet {
    /// Ackermann code order: compare member lists largest-first; the set that
    /// runs out first is smaller.
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.members.iter().rev();
        let mut b = other.members.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.cmp(y) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
            }
        }
    }
}

impl PartialOrd for HfSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for HfSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for HfSet {
    type Err = HfError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        HfSet::parse(s)
    }
}

/// Parses one set starting at byte `at` (after leading whitespace); returns the
/// set and the byte offset just past it. Accepts `{…}` notation (whitespace and
/// repeated members tolerated, output canonicalized) and `#n` Ackermann codes.
pub fn parse_prefix(text: &str, at: usize) -> Result<(HfSet, usize), HfError> {
    let bytes = text.as_bytes();
    let mut pos = at;
    while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
        pos += 1;
    }
    match bytes.get(pos) {
        Some(b'#') => {
            pos += 1;
            let start = pos;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                pos += 1;
            }
            if start == pos {
                return Err(HfError::Notation {
                    at: pos,
                    msg: "expected digits after '#'".into(),
                });
            }
            let code: u64 = text[start..pos].parse().map_err(|_| HfError::Notation {
                at: start,
                msg: "Ackermann code out of range".into(),
            })?;
            Ok((HfSet::decode(code), pos))
        }
        Some(b'{') => {
            pos += 1;
            let mut members = Vec::new();
            loop {
                while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                    pos += 1;
                }
                match bytes.get(pos) {
                    Some(b'}') => return Ok((HfSet::from_members(members), pos + 1)),
                    None => {
                        return Err(HfError::Notation {
                            at: pos,
                            msg: "unterminated '{'".into(),
                        })
                    }
                    _ => {}
                }
                let (m, next) = parse_prefix(text, pos)?;
                members.push(m);
                pos = next;
                while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                    pos += 1;
                }
                match bytes.get(pos) {
                    Some(b',') => pos += 1,
                    Some(b'}') => {}
                    _ => {
                        return Err(HfError::Notation {
                            at: pos,
                            msg: "expected ',' or '}'".into(),
                        })
                    }
                }
            }
        }
        _ => Err(HfError::Notation {
            at: pos,
            msg: "expected '{' or '#'".into(),
        }),
    }
}
