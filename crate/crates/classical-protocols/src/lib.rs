// SPDX-License-Identifier: Apache-2.0
//! Linear classical secret sharing and the standard linear CSPIR protocol,
//! with audits that enumerate every message and every random seed.

mod css;
mod spir;

pub use css::{css_audit, css_decode, css_run, css_share, CssProtocol, CssReport, Decoder};
pub use spir::{
    spir_answer, spir_answers, spir_audit, spir_decode, spir_query, spir_query_secret, spir_run, SpirProtocol, SpirReport,
};

use field_tower::{Fe, Field};
use serde::Serialize;
use symplinalg::LinalgError;

/// Exhaustive audits refuse instances with more than this many cases.
pub const MAX_CASES: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProtocolError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("{0} is not an accept set")]
    NotQualified(String),
    #[error("file index {0} outside 1..={1}")]
    BadIndex(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("exhaustive audit needs {0} cases (limit {MAX_CASES})")]
    TooLarge(u128),
    #[error("access structure: {0}")]
    Access(String),
    #[error(transparent)]
    Mmsp(#[from] mmsp::MmspError),
}

pub type Result<T> = std::result::Result<T, ProtocolError>;

/// Who produced a transcript entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Dealer,
    User,
    Server,
    Player,
    Decoder,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub role: Role,
    pub label: String,
    pub values: Vec<u128>,
}

/// Everything exchanged in one seeded run; the same seed replays it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Transcript {
    pub seed: u64,
    pub steps: Vec<Step>,
}

impl Transcript {
    pub fn new(seed: u64) -> Transcript {
        Transcript { seed, steps: Vec::new() }
    }

    pub fn push(&mut self, role: Role, label: impl Into<String>, values: &[Fe]) {
        self.steps.push(Step { role, label: label.into(), values: values.iter().map(|x| x.0).collect() });
    }
}

pub(crate) fn case_count(f: &Field, len: usize) -> Result<u128> {
    f.q()
        .checked_pow(len as u32)
        .filter(|&c| c <= MAX_CASES)
        .ok_or(ProtocolError::TooLarge(f.q().saturating_pow(len.min(64) as u32)))
}

/// Every vector of F_q^len, in packed-index order.
pub(crate) fn all_vectors(f: &Field, len: usize) -> Result<Vec<Vec<Fe>>> {
    let total = case_count(f, len)?;
    let q = f.q();
    Ok((0..total)
        .map(|mut idx| {
            (0..len)
                .map(|_| {
                    let d = idx % q;
                    idx /= q;
                    f.elem(d).expect("digit below q")
                })
                .collect()
        })
        .collect())
}

pub(crate) fn add_vec(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub(crate) fn pick(v: &[Fe], idx: &[usize]) -> Vec<Fe> {
    idx.iter().map(|&i| v[i]).collect()
}
