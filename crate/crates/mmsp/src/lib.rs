// SPDX-License-Identifier: Apache-2.0
//! MMSP predicates. A pair (G, F) accepts a row set A when the columns of
//! P_A F stay independent modulo Im P_A G, and rejects B when every column
//! of P_B F lies in Im P_B G.

mod bundle;
pub mod fixtures;
mod rate;

use access::{symplectify, AccessStructure, Subset};
use field_tower::Fe;
use symplinalg::{is_mds, LinalgError, MatGF};

pub use bundle::{
    classify, classify_verdict, is_eamds, is_qqmds, BundleClass, BundleJson, ClassVerdict, MmspBundle, Params,
};
pub use rate::{rate, RateKind};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MmspError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("class invariant violated: {0}")]
    ClassInvariantViolated(String),
    #[error("parameters out of range: {0}")]
    OutOfRange(String),
    #[error("access structure: {0}")]
    Access(String),
    #[error("bundle json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, MmspError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Failure {
    NotAccepted(Subset),
    NotRejected(Subset),
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::NotAccepted(s) => write!(f, "accept set {s} does not recover the secret"),
            Failure::NotRejected(s) => write!(f, "reject set {s} learns something"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmspVerdict {
    pub ok: bool,
    /// first failing set, labelled in the base (unlifted) ground set
    pub counterexample: Option<Failure>,
}

fn check_rows(g: &MatGF, f: &MatGF) -> Result<()> {
    if g.rows() != f.rows() {
        return Err(LinalgError::DimensionMismatch(format!("G has {} rows, F has {}", g.rows(), f.rows())).into());
    }
    Ok(())
}

fn rows_of(s: Subset, rows: usize) -> Result<Vec<usize>> {
    let idx = s.indices();
    if let Some(&bad) = idx.iter().find(|&&i| i >= rows) {
        return Err(LinalgError::IndexOutOfRange(bad, rows).into());
    }
    Ok(idx)
}

/// (A1): rank(P_A G | P_A F) = rank(P_A G) + cols(F).
pub fn accepts_one(g: &MatGF, f: &MatGF, a: Subset) -> Result<bool> {
    check_rows(g, f)?;
    let idx = rows_of(a, g.rows())?;
    let pg = g.restrict(&idx)?;
    let pgf = pg.hcat(&f.restrict(&idx)?)?;
    Ok(pgf.rank() == pg.rank() + f.cols())
}

/// (B1): rank(P_B G | P_B F) = rank(P_B G).
pub fn rejects_one(g: &MatGF, f: &MatGF, b: Subset) -> Result<bool> {
    check_rows(g, f)?;
    let idx = rows_of(b, g.rows())?;
    let pg = g.restrict(&idx)?;
    let pgf = pg.hcat(&f.restrict(&idx)?)?;
    Ok(pgf.rank() == pg.rank())
}

fn e_block(g: &MatGF, f: &MatGF) -> MatGF {
    let y = g.cols();
    MatGF::from_fn(g.field(), f.cols(), y + f.cols(), |i, j| if j == y + i { Fe::ONE } else { Fe::ZERO })
}

/// (A2): the row space of (P_A G, P_A F) contains every unit vector of the F block.
pub fn a2_holds(g: &MatGF, f: &MatGF, a: Subset) -> Result<bool> {
    check_rows(g, f)?;
    let idx = rows_of(a, g.rows())?;
    let m = g.restrict(&idx)?.hcat(&f.restrict(&idx)?)?;
    let mt = m.transpose();
    let e = e_block(g, f);
    for i in 0..f.cols() {
        if !mt.in_span(e.row(i))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// (B2): the row space of (P_B G, P_B F) meets the F-block unit span only in 0.
pub fn b2_holds(g: &MatGF, f: &MatGF, b: Subset) -> Result<bool> {
    check_rows(g, f)?;
    let idx = rows_of(b, g.rows())?;
    let m = g.restrict(&idx)?.hcat(&f.restrict(&idx)?)?;
    let e = e_block(g, f);
    let stacked = m.vcat(&e)?;
    let meet = m.rank() + f.cols() - stacked.rank();
    Ok(meet == 0)
}

pub fn a1_a2_agree(g: &MatGF, f: &MatGF, a: Subset) -> Result<bool> {
    Ok(accepts_one(g, f, a)? == a2_holds(g, f, a)?)
}

pub fn b1_b2_agree(g: &MatGF, f: &MatGF, b: Subset) -> Result<bool> {
    Ok(rejects_one(g, f, b)? == b2_holds(g, f, b)?)
}

fn run_checks(
    g: &MatGF,
    f: &MatGF,
    fs: &AccessStructure,
    lift: impl Fn(Subset) -> Subset,
) -> Result<MmspVerdict> {
    for a in fs.accept_checks() {
        if !accepts_one(g, f, lift(a))? {
            return Ok(MmspVerdict { ok: false, counterexample: Some(Failure::NotAccepted(a)) });
        }
    }
    for b in fs.reject_checks() {
        if !rejects_one(g, f, lift(b))? {
            return Ok(MmspVerdict { ok: false, counterexample: Some(Failure::NotRejected(b)) });
        }
    }
    Ok(MmspVerdict { ok: true, counterexample: None })
}

/// (G, F) accepts every accept set and rejects every reject set of `fs`,
/// whose ground set indexes the rows directly.
pub fn is_mmsp(g: &MatGF, f: &MatGF, fs: &AccessStructure) -> Result<MmspVerdict> {
    check_rows(g, f)?;
    if fs.n != g.rows() {
        return Err(MmspError::Access(format!("structure on [{}] for {} rows", fs.n, g.rows())));
    }
    run_checks(g, f, fs, |s| s)
}

/// As `is_mmsp` against the symplectification of a structure on [n], n = rows/2.
pub fn is_mmsp_lifted(g: &MatGF, f: &MatGF, base: &AccessStructure) -> Result<MmspVerdict> {
    check_rows(g, f)?;
    if 2 * base.n != g.rows() {
        return Err(MmspError::Access(format!("structure on [{}] for {} rows", base.n, g.rows())));
    }
    let n = base.n;
    run_checks(g, f, base, |s| symplectify(s, n))
}

/// Threshold MMSP via MDS: (G, F) is an (nbar, r)-MDS code and G is an (nbar, t)-MDS code.
pub fn is_threshold_mmsp_via_mds(g: &MatGF, f: &MatGF, r: usize, t: usize) -> Result<bool> {
    check_rows(g, f)?;
    if g.cols() != t || f.cols() + t != r {
        return Err(LinalgError::DimensionMismatch(format!(
            "need cols(G) = t = {t} and cols(F) = r - t, got {} and {}",
            g.cols(),
            f.cols()
        ))
        .into());
    }
    Ok(is_mds(&g.hcat(f)?)? && is_mds(g)?)
}
