// SPDX-License-Identifier: Apache-2.0
//! Access structures (accept, reject) on a ground set [n], stored as
//! bitmasks. Bit i stands for player i+1.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const MAX_N: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AccessError {
    #[error("threshold needs n >= r > t >= 0, got r={0} t={1} n={2}")]
    BadThreshold(usize, usize, usize),
    #[error("ground set of size {0} exceeds the limit of 20")]
    TooLarge(usize),
    #[error("player {0} outside [1, {1}]")]
    BadPlayer(usize, usize),
    #[error("json: {0}")]
    Json(String),
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    /// From 1-based player labels.
    pub fn from_players(players: &[usize]) -> Subset {
        Subset(players.iter().fold(0, |m, &p| m | 1 << (p - 1)))
    }

    pub fn full(n: usize) -> Subset {
        Subset(((1u64 << n) - 1) as u32)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// 0-based indices.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|&i| self.contains(i)).collect()
    }

    /// 1-based labels.
    pub fn players(self) -> Vec<usize> {
        self.indices().into_iter().map(|i| i + 1).collect()
    }

    pub fn complement(self, n: usize) -> Subset {
        Subset(!self.0 & Subset::full(n).0)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.players().iter().map(|p| p.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// S -> {a, a+n : a in S}, as a subset of [2n].
pub fn symplectify(s: Subset, n: usize) -> Subset {
    Subset(s.0 | s.0 << n)
}

/// Inverse of `symplectify` on its image.
pub fn desymplectify(s: Subset, n: usize) -> Option<Subset> {
    let lo = s.0 & Subset::full(n).0;
    (symplectify(Subset(lo), n) == s).then_some(Subset(lo))
}

pub fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = Subset> {
    (0u32..1 << n).filter(move |m| m.count_ones() as usize == k).map(Subset)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// all sets of size >= r (accept) or <= r (reject)
    Threshold(usize),
    Explicit(Vec<Subset>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessStructure {
    pub n: usize,
    pub accept: Family,
    pub reject: Family,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Validation {
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

pub fn make_threshold(r: usize, t: usize, n: usize) -> Result<AccessStructure, AccessError> {
    if n > MAX_N {
        return Err(AccessError::TooLarge(n));
    }
    if !(n >= r && r > t) {
        return Err(AccessError::BadThreshold(r, t, n));
    }
    Ok(AccessStructure { n, accept: Family::Threshold(r), reject: Family::Threshold(t) })
}

fn sorted(mut v: Vec<Subset>) -> Vec<Subset> {
    v.sort_by_key(|s| (s.len(), s.0));
    v.dedup();
    v
}

impl AccessStructure {
    pub fn explicit(n: usize, accept: Vec<Subset>, reject: Vec<Subset>) -> Result<AccessStructure, AccessError> {
        if n > MAX_N {
            return Err(AccessError::TooLarge(n));
        }
        for s in accept.iter().chain(&reject) {
            if let Some(&bad) = s.players().iter().find(|&&p| p > n) {
                return Err(AccessError::BadPlayer(bad, n));
            }
        }
        Ok(AccessStructure { n, accept: Family::Explicit(sorted(accept)), reject: Family::Explicit(sorted(reject)) })
    }

    /// Build from 1-based player lists.
    pub fn from_lists(n: usize, accept: &[&[usize]], reject: &[&[usize]]) -> Result<AccessStructure, AccessError> {
        let a = accept.iter().map(|s| Subset::from_players(s)).collect();
        let b = reject.iter().map(|s| Subset::from_players(s)).collect();
        AccessStructure::explicit(n, a, b)
    }

    pub fn is_threshold(&self) -> bool {
        matches!((&self.accept, &self.reject), (Family::Threshold(_), Family::Threshold(_)))
    }

    pub fn accepts(&self, s: Subset) -> bool {
        match &self.accept {
            Family::Threshold(r) => s.len() >= *r,
            Family::Explicit(v) => v.contains(&s),
        }
    }

    pub fn rejects(&self, s: Subset) -> bool {
        match &self.reject {
            Family::Threshold(t) => s.len() <= *t,
            Family::Explicit(v) => v.contains(&s),
        }
    }

    pub fn accept_sets(&self) -> Vec<Subset> {
        match &self.accept {
            Family::Threshold(r) => (*r..=self.n).flat_map(|k| subsets_of_size(self.n, k)).collect(),
            Family::Explicit(v) => v.clone(),
        }
    }

    pub fn reject_sets(&self) -> Vec<Subset> {
        match &self.reject {
            Family::Threshold(t) => (0..=*t).flat_map(|k| subsets_of_size(self.n, k)).collect(),
            Family::Explicit(v) => v.clone(),
        }
    }

    /// Sets a predicate must be checked on: |A| = r and |B| = t for
    /// thresholds (monotonicity covers the rest), every listed set otherwise.
    pub fn accept_checks(&self) -> Vec<Subset> {
        match &self.accept {
            Family::Threshold(r) => subsets_of_size(self.n, *r).collect(),
            Family::Explicit(v) => v.clone(),
        }
    }

    pub fn reject_checks(&self) -> Vec<Subset> {
        match &self.reject {
            Family::Threshold(t) => subsets_of_size(self.n, *t).collect(),
            Family::Explicit(v) => v.clone(),
        }
    }

    pub fn materialize(&self) -> AccessStructure {
        AccessStructure {
            n: self.n,
            accept: Family::Explicit(sorted(self.accept_sets())),
            reject: Family::Explicit(sorted(self.reject_sets())),
        }
    }

    /// Monotone accept, monotone-decreasing reject, disjoint.
    pub fn validate(&self) -> Validation {
        self.validate_steps(&(0..self.n).map(|i| Subset(1 << i)).collect::<Vec<_>>())
    }

    /// Validation where sets grow by whole blocks (used for lifted structures).
    fn validate_steps(&self, steps: &[Subset]) -> Validation {
        let mut d = Vec::new();
        let acc = self.accept_sets();
        let rej = self.reject_sets();
        for a in &acc {
            for s in steps {
                let up = Subset(a.0 | s.0);
                if up != *a && !self.accepts(up) {
                    d.push(format!("accept not monotone: {a} in, {up} missing"));
                }
            }
            if self.rejects(*a) {
                d.push(format!("{a} both accepted and rejected"));
            }
        }
        for b in &rej {
            for s in steps {
                let down = Subset(b.0 & !s.0);
                if down != *b && !self.rejects(down) {
                    d.push(format!("reject not monotone: {b} in, {down} missing"));
                }
            }
        }
        Validation { ok: d.is_empty(), diagnostics: d }
    }

    /// The structure on [2n] whose sets are the symplectified sets.
    pub fn symplectify(&self) -> LiftedStructure {
        LiftedStructure { base: self.clone() }
    }
}

/// A symplectified structure: sets of [2n] of the form {a, a+n}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedStructure {
    pub base: AccessStructure,
}

impl LiftedStructure {
    pub fn n(&self) -> usize {
        self.base.n
    }

    pub fn explicit(&self) -> AccessStructure {
        let n = self.base.n;
        AccessStructure {
            n: 2 * n,
            accept: Family::Explicit(sorted(self.base.accept_sets().into_iter().map(|s| symplectify(s, n)).collect())),
            reject: Family::Explicit(sorted(self.base.reject_sets().into_iter().map(|s| symplectify(s, n)).collect())),
        }
    }

    pub fn validate(&self) -> Validation {
        let n = self.base.n;
        let steps: Vec<Subset> = (0..n).map(|i| symplectify(Subset(1 << i), n)).collect();
        self.explicit().validate_steps(&steps)
    }
}

pub fn symplectify_structure(fs: &AccessStructure) -> AccessStructure {
    fs.symplectify().explicit()
}

#[derive(Serialize, Deserialize)]
struct StructureJson {
    n: usize,
    accept: Value,
    reject: Value,
}

fn family_from_json(v: &Value, n: usize) -> Result<Family, AccessError> {
    match v {
        Value::Object(o) => {
            let t = o
                .get("threshold")
                .and_then(Value::as_u64)
                .ok_or_else(|| AccessError::Json("expected {\"threshold\": k}".into()))?;
            Ok(Family::Threshold(t as usize))
        }
        Value::Array(sets) => {
            let mut out = Vec::new();
            for s in sets {
                let players: Vec<usize> = s
                    .as_array()
                    .ok_or_else(|| AccessError::Json("sets must be arrays".into()))?
                    .iter()
                    .map(|p| p.as_u64().map(|p| p as usize))
                    .collect::<Option<_>>()
                    .ok_or_else(|| AccessError::Json("players must be integers".into()))?;
                if let Some(&bad) = players.iter().find(|&&p| p == 0 || p > n) {
                    return Err(AccessError::BadPlayer(bad, n));
                }
                out.push(Subset::from_players(&players));
            }
            Ok(Family::Explicit(sorted(out)))
        }
        _ => Err(AccessError::Json("family must be an object or array".into())),
    }
}

fn family_to_json(f: &Family) -> Value {
    match f {
        Family::Threshold(k) => serde_json::json!({ "threshold": k }),
        Family::Explicit(v) => Value::from(v.iter().map(|s| Value::from(s.players())).collect::<Vec<_>>()),
    }
}

impl AccessStructure {
    pub fn from_json_value(v: &Value) -> Result<AccessStructure, AccessError> {
        let raw: StructureJson = serde_json::from_value(v.clone()).map_err(|e| AccessError::Json(e.to_string()))?;
        if raw.n > MAX_N {
            return Err(AccessError::TooLarge(raw.n));
        }
        let accept = family_from_json(&raw.accept, raw.n)?;
        let reject = family_from_json(&raw.reject, raw.n)?;
        if let (Family::Threshold(r), Family::Threshold(t)) = (&accept, &reject) {
            return make_threshold(*r, *t, raw.n);
        }
        Ok(AccessStructure { n: raw.n, accept, reject })
    }

    pub fn to_json_value(&self) -> Value {
        serde_json::json!({
            "n": self.n,
            "accept": family_to_json(&self.accept),
            "reject": family_to_json(&self.reject),
        })
    }
}

impl Serialize for AccessStructure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json_value().serialize(s)
    }
}

impl<'de> Deserialize<'de> for AccessStructure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        AccessStructure::from_json_value(&v).map_err(serde::de::Error::custom)
    }
}
