// SPDX-License-Identifier: Apache-2.0
//! MDS matrices from towers of quadratic extensions, the isotropic (A, B)
//! pair with its C extension, and the EA/CQ/QQ threshold MMSPs built from
//! them. Every output is checked before it is returned.
//!
//! Entry levels follow the staircase alpha_{i,j} at level i + j - 2 with
//! alpha_{1,1} = 1. When the staircase needs a tower too deep for u128
//! elements, the same shapes are filled with seeded random elements of a
//! field of a few thousand elements and the checks decide.

pub mod levels;
pub mod search;

use field_tower::{Fe, FieldError};
use mmsp::{classify, BundleClass, MmspBundle, MmspError, Params};
use symplinalg::{is_col_orth, is_mds, is_self_col_orth, LinalgError, MatGF};

pub use levels::{LevelSource, Mode};
pub use search::{mutate_negative, search_bundle, SearchSpec};

#[derive(Debug, thiserror::Error)]
pub enum ConstructionError {
    #[error("tower too shallow: level {needed} requested, depth is {available}")]
    TowerTooShallow { needed: usize, available: usize },
    #[error("construction failed verification: {0}")]
    ConstructionFailedVerification(String),
    #[error("parameters out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Mmsp(#[from] MmspError),
}

pub type Result<T> = std::result::Result<T, ConstructionError>;

fn out_of_range(msg: impl Into<String>) -> ConstructionError {
    ConstructionError::OutOfRange(msg.into())
}

/// Named boolean checks collected while verifying a construction.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<(String, bool)>,
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push((name.into(), ok));
    }

    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn first_failure(&self) -> Option<&str> {
        self.checks.iter().find(|(_, ok)| !ok).map(|(n, _)| n.as_str())
    }

    pub fn extend(&mut self, other: &Report) {
        self.checks.extend(other.checks.iter().cloned());
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (name, ok) in &self.checks {
            writeln!(f, "{} {name}", if *ok { "ok  " } else { "FAIL" })?;
        }
        Ok(())
    }
}

fn staircase(src: &mut LevelSource, rows: usize, cols: usize, base: usize) -> Result<MatGF> {
    let f = src.field().clone();
    let mut m = MatGF::zeros(&f, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            // 1-based i + j - 2
            m.set(i, j, src.fresh(base + i + j)?);
        }
    }
    Ok(m)
}

fn retrying<T>(src: &mut LevelSource, mut attempt: impl FnMut(&mut LevelSource) -> Result<std::result::Result<T, String>>) -> Result<T> {
    let mut last = String::new();
    for _ in 0..=src.retry_budget() {
        match attempt(src)? {
            Ok(v) => return Ok(v),
            Err(why) => last = why,
        }
        src.retry();
    }
    Err(ConstructionError::ConstructionFailedVerification(last))
}

/// (I_l ; alpha) with alpha_{i,j} fresh at level i + j - 2, checked MDS.
pub fn mds_pp8(l: usize, r_rows: usize, src: &mut LevelSource) -> Result<MatGF> {
    if l == 0 || l >= r_rows {
        return Err(out_of_range(format!("need 0 < l < r_rows, got l = {l}, r_rows = {r_rows}")));
    }
    staircase_mds(l, l, r_rows, src)
}

/// Identity on the first l rows, staircase below, k > l columns; checked MDS.
pub fn mds_l78(l: usize, k: usize, r_rows: usize, src: &mut LevelSource) -> Result<MatGF> {
    if !(0 < l && l < k && k < r_rows) {
        return Err(out_of_range(format!("need 0 < l < k < r_rows, got ({l},{k},{r_rows})")));
    }
    staircase_mds(l, k, r_rows, src)
}

fn staircase_mds(l: usize, k: usize, r_rows: usize, src: &mut LevelSource) -> Result<MatGF> {
    retrying(src, |src| {
        let f = src.field().clone();
        let alpha = staircase(src, r_rows - l, k, 0)?;
        let top = MatGF::from_fn(&f, l, k, |i, j| if i == j { Fe::ONE } else { Fe::ZERO });
        let m = top.vcat(&alpha)?;
        Ok(if is_mds(&m)? { Ok(m) } else { Err(format!("({r_rows},{k}) matrix is not MDS")) })
    })
}

/// The J-isotropic pair: A = (A2; A3; A1; I), B = ((I,0,0); (-A1^T,A2^T,A3^T); (0,I,0); (0,0,I)).
#[derive(Debug, Clone)]
pub struct AmtPair {
    pub a: usize,
    pub b: usize,
    pub a1: MatGF,
    pub a2: MatGF,
    pub a3: MatGF,
    pub mat_a: MatGF,
    pub mat_b: MatGF,
    /// highest staircase level used by the A blocks
    pub top_level: usize,
    pub report: Report,
}

#[derive(Debug, Clone)]
pub struct AmxExtension {
    pub c: usize,
    pub c1: MatGF,
    pub c2: MatGF,
    pub c3: MatGF,
    pub mat_c: MatGF,
    pub report: Report,
}

fn block(f: &field_tower::Field, rows: usize, cols: usize, parts: &[(usize, usize, &MatGF)]) -> MatGF {
    let mut m = MatGF::zeros(f, rows, cols);
    for &(r0, c0, blk) in parts {
        for i in 0..blk.rows() {
            for j in 0..blk.cols() {
                m.set(r0 + i, c0 + j, blk.get(i, j));
            }
        }
    }
    m
}

fn amt_once(a: usize, b: usize, src: &mut LevelSource) -> Result<AmtPair> {
    let f = src.field().clone();
    let d = b - a;
    // rows of (A1; A2; A3) are numbered 1..2b-a in that order
    let a1 = staircase(src, d, a, 0)?;
    let a2 = staircase(src, d, a, d)?;
    let mut a3 = MatGF::zeros(&f, a, a);
    for i in 0..a {
        for j in i..a {
            a3.set(i, j, src.fresh(2 * d + i + j)?);
        }
    }
    // A3 + A1^T A2 must be symmetric
    let m = a1.transpose().mul(&a2)?;
    for i in 0..a {
        for j in (i + 1)..a {
            let v = f.add(f.sub(a3.get(i, j), m.get(j, i)), m.get(i, j));
            a3.set(j, i, v);
        }
    }
    let eye_a = MatGF::identity(&f, a);
    let eye_d = MatGF::identity(&f, d);
    let mat_a = block(&f, 2 * b, a, &[(0, 0, &a2), (d, 0, &a3), (b, 0, &a1), (b + d, 0, &eye_a)]);
    let mat_b = block(
        &f,
        2 * b,
        2 * b - a,
        &[
            (0, 0, &eye_d),
            (d, 0, &a1.transpose().neg()),
            (d, d, &a2.transpose()),
            (d, 2 * d, &a3.transpose()),
            (b, d, &eye_d),
            (b + d, 2 * d, &eye_a),
        ],
    );
    let top_level = (2 * b).saturating_sub(2);
    Ok(AmtPair { a, b, a1, a2, a3, mat_a, mat_b, top_level, report: Report::default() })
}

/// N1-N4, plus the exact levels of the solved A3 entries in a literal tower.
pub fn verify_amt(pair: &AmtPair, src: &LevelSource) -> Result<Report> {
    let mut rep = Report::default();
    rep.push("N1 A^T J A = 0", is_self_col_orth(&pair.mat_a)?);
    rep.push("N2 A^T J B = 0", is_col_orth(&pair.mat_a, &pair.mat_b)?);
    rep.push(format!("N3 A is ({},{})-MDS", 2 * pair.b, pair.a), is_mds(&pair.mat_a)?);
    rep.push(format!("N4 B is ({},{})-MDS", 2 * pair.b, 2 * pair.b - pair.a), is_mds(&pair.mat_b)?);
    if src.mode() == Mode::Literal {
        let f = src.field();
        let d = pair.b - pair.a;
        let mut levels_ok = true;
        for i in 0..pair.a {
            for j in 0..i {
                levels_ok &= f.tower_level(pair.a3.get(i, j))? == 2 * d + i + j;
            }
        }
        rep.push("solved A3 entries sit at their staircase level", levels_ok);
    }
    Ok(rep)
}

pub(crate) fn amt_checked(a: usize, b: usize, src: &mut LevelSource) -> Result<AmtPair> {
    retrying(src, |src| {
        let mut pair = amt_once(a, b, src)?;
        let rep = verify_amt(&pair, src)?;
        if let Some(bad) = rep.first_failure() {
            return Ok(Err(bad.to_string()));
        }
        pair.report = rep;
        Ok(Ok(pair))
    })
}

/// The (A, B) pair for 0 < a <= b.
pub fn build_amt(a: usize, b: usize, src: &mut LevelSource) -> Result<AmtPair> {
    if a == 0 || a > b {
        return Err(out_of_range(format!("need 0 < a <= b, got a = {a}, b = {b}")));
    }
    amt_checked(a, b, src)
}

fn amx_once(pair: &AmtPair, c: usize, src: &mut LevelSource) -> Result<AmxExtension> {
    let f = src.field().clone();
    let (a, b) = (pair.a, pair.b);
    let d = b - a;
    // C rows numbered like A: C1, C2, C3; levels above those of A
    let base = pair.top_level + 1;
    let c1 = staircase(src, d, c, base)?;
    let c2 = staircase(src, d, c, base + d)?;
    let c3 = staircase(src, a, c, base + 2 * d)?;
    let mat_c = block(&f, 2 * b, c, &[(0, 0, &c2), (d, 0, &c3), (b, 0, &c1)]);
    Ok(AmxExtension { c, c1, c2, c3, mat_c, report: Report::default() })
}

/// N5, N6 and, when (B, C) has at most 2b columns, N7.
pub fn verify_amx(pair: &AmtPair, ext: &AmxExtension) -> Result<Report> {
    let mut rep = Report::default();
    let b2 = 2 * pair.b;
    let ac = pair.mat_a.hcat(&ext.mat_c)?;
    rep.push(format!("N5 (A,C) is ({b2},{})-MDS", pair.a + ext.c), is_mds(&ac)?);
    let prefixes = (1..ext.c).try_fold(true, |acc, s| -> Result<bool> {
        Ok(acc && is_mds(&ac.col_range(0, pair.a + s))?)
    })?;
    rep.push("N6 every prefix (A,C^(s)) is MDS", prefixes);
    if ext.c <= pair.a {
        let bc = pair.mat_b.hcat(&ext.mat_c)?;
        rep.push(format!("N7 (B,C) is ({b2},{})-MDS", bc.cols()), is_mds(&bc)?);
    }
    Ok(rep)
}

/// C = (C2; C3; C1; 0) extending a checked pair. The source must be the
/// one the pair was built from.
pub fn build_amx(pair: &AmtPair, c: usize, src: &mut LevelSource) -> Result<AmxExtension> {
    if c == 0 {
        return Err(out_of_range("need c > 0"));
    }
    if src.field() != pair.mat_a.field() {
        return Err(out_of_range("source field differs from the pair's field"));
    }
    retrying(src, |src| {
        let mut ext = amx_once(pair, c, src)?;
        let rep = verify_amx(pair, &ext)?;
        if let Some(bad) = rep.first_failure() {
            return Ok(Err(bad.to_string()));
        }
        ext.report = rep;
        Ok(Ok(ext))
    })
}

/// A checked bundle together with everything that was verified.
#[derive(Debug, Clone)]
pub struct Construction {
    pub bundle: MmspBundle,
    pub report: Report,
    pub mode: Mode,
}

/// Levels needed by an (a, b, c) construction.
pub fn depth_needed(a: usize, b: usize, c: usize) -> usize {
    let top = (2 * b).saturating_sub(2);
    if c == 0 {
        top
    } else {
        top + (2 * b - a) + c - 1
    }
}

fn seed_for(tag: u64, parts: &[usize], p: u32) -> u64 {
    parts.iter().fold(tag ^ ((p as u64) << 32), |h, &x| h.wrapping_mul(0x100_0000_01b3).wrapping_add(x as u64 + 1))
}

/// Build (A, B, C) for (a, b, c), then cut the bundle with `assemble` and
/// verify it; the whole pipeline is retried on any failure.
fn pipeline(
    p: u32,
    (a, b, c): (usize, usize, usize),
    seed: u64,
    assemble: impl Fn(&AmtPair, &MatGF) -> Result<MmspBundle>,
    extra: impl Fn(&MmspBundle) -> Result<Report>,
) -> Result<Construction> {
    let mut src = LevelSource::auto(p, depth_needed(a, b, c).max(1), seed)?;
    let mode = src.mode();
    retrying(&mut src, |src| {
        let pair = amt_once(a, b, src)?;
        let mut rep = verify_amt(&pair, src)?;
        let mat_c = if c > 0 {
            let ext = amx_once(&pair, c, src)?;
            rep.extend(&verify_amx(&pair, &ext)?);
            ext.mat_c
        } else {
            MatGF::zeros(src.field(), 2 * b, 0)
        };
        if rep.first_failure().is_some() {
            return Ok(Err(rep.first_failure().unwrap().to_string()));
        }
        let bundle = assemble(&pair, &mat_c)?;
        rep.extend(&extra(&bundle)?);
        let verdict = classify(&bundle)?;
        rep.push(format!("classify as {:?}", bundle.class), verdict.ok());
        Ok(match rep.first_failure() {
            Some(bad) => Err(bad.to_string()),
            None => Ok(Construction { bundle, report: rep.clone(), mode }),
        })
    })
}

fn mds_checks(bundle: &MmspBundle) -> Result<Report> {
    let mut rep = Report::default();
    let g = bundle.g();
    let all = g.hcat(&bundle.f)?;
    rep.push(format!("(G1,G2) is ({},{})-MDS", g.rows(), g.cols()), is_mds(&g)?);
    rep.push(format!("(G1,G2,F) is ({},{})-MDS", all.rows(), all.cols()), is_mds(&all)?);
    Ok(rep)
}

fn check_threshold(r: usize, t: usize, n: usize) -> Result<()> {
    if !(n >= r && r > t && t > 0) {
        return Err(out_of_range(format!("need n >= r > t > 0, got (r,t,n) = ({r},{t},{n})")));
    }
    if n > 8 {
        return Err(out_of_range(format!("n = {n} is beyond the brute-force checks")));
    }
    Ok(())
}

/// (r, t, n)-EAMMSP with y1 isotropic columns.
pub fn construct_eammsp(r: usize, t: usize, n: usize, y1: usize, p: u32) -> Result<Construction> {
    check_threshold(r, t, n)?;
    if y1 == 0 || y1 > 2 * t || y1 > n {
        return Err(out_of_range(format!("need 0 < y1 <= min(2t, n), got y1 = {y1}")));
    }
    let c = 2 * r - y1;
    let g2_cols = 2 * t - y1;
    pipeline(
        p,
        (y1, n, c),
        seed_for(0xea, &[r, t, n, y1], p),
        |pair, mat_c| {
            Ok(MmspBundle::new(
                BundleClass::Ea,
                pair.mat_a.clone(),
                mat_c.col_range(0, g2_cols),
                mat_c.col_range(g2_cols, c),
                Params::threshold(r, t, n),
            ))
        },
        mds_checks,
    )
}

/// (r, t, n)-CQMMSP: y1 = n, G2 of [2t - n]_+ columns.
pub fn construct_cqmmsp(r: usize, t: usize, n: usize, p: u32) -> Result<Construction> {
    check_threshold(r, t, n)?;
    if 2 * r <= n {
        return Err(out_of_range(format!("need r > n/2, got r = {r}, n = {n}")));
    }
    let c = 2 * r - n;
    let g2_cols = (2 * t).saturating_sub(n);
    pipeline(
        p,
        (n, n, c),
        seed_for(0xc9, &[r, t, n], p),
        |pair, mat_c| {
            Ok(MmspBundle::new(
                BundleClass::Cq,
                pair.mat_a.clone(),
                mat_c.col_range(0, g2_cols),
                mat_c.col_range(g2_cols, c),
                Params::threshold(r, t, n),
            ))
        },
        mds_checks,
    )
}

fn qq_construct(r: usize, t: usize, n: usize, p: u32) -> Result<Construction> {
    if 2 * r < n + 1 {
        return Err(out_of_range(format!("(n+1)/2 bound violated: r = {r}, n = {n}")));
    }
    let tp = t.max(n - r);
    let a = n - r + tp;
    let c = tp + r - n;
    let d = n - a;
    pipeline(
        p,
        (a, n, c),
        seed_for(0x99, &[r, t, n], p),
        |pair, mat_c| {
            Ok(MmspBundle::new(BundleClass::Qq, pair.mat_a.clone(), mat_c.clone(), pair.mat_b.col_range(0, 2 * d), Params::threshold(r, t, n)))
        },
        |bundle| {
            let mut rep = mds_checks(bundle)?;
            rep.push("F column-orthogonal to G1", is_col_orth(&bundle.f, &bundle.g1)?);
            Ok(rep)
        },
    )
}

/// (r, t, n)-QQMMSP with t' = max(t, n - r).
pub fn construct_qqmmsp(r: usize, t: usize, n: usize, p: u32) -> Result<Construction> {
    if 2 * r < n + 1 && n >= r && r > t {
        return Err(out_of_range(format!("(n+1)/2 bound violated: r = {r}, n = {n}")));
    }
    check_threshold(r, t, n)?;
    qq_construct(r, t, n, p)
}

/// (n, r)-QQMDS pair (G1, F): the QQ construction with t = n - r.
pub fn construct_qqmds(r: usize, n: usize, p: u32) -> Result<(MatGF, MatGF, Report)> {
    if !(n >= r && 2 * r > n) || n > 8 {
        return Err(out_of_range(format!("need n/2 < r <= n, got r = {r}, n = {n}")));
    }
    let c = qq_construct(r, n - r, n, p)?;
    let mut rep = c.report;
    rep.push("is_qqmds", mmsp::is_qqmds(&c.bundle.g1, &c.bundle.f)?);
    if let Some(bad) = rep.first_failure() {
        return Err(ConstructionError::ConstructionFailedVerification(bad.to_string()));
    }
    Ok((c.bundle.g1, c.bundle.f, rep))
}
