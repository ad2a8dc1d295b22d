// SPDX-License-Identifier: Apache-2.0
use std::collections::HashMap;

use access::{AccessStructure, Subset};
use field_tower::{Fe, Field};
use mmsp::is_mmsp;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use symplinalg::{quotient, MatGF};

use crate::{add_vec, all_vectors, case_count, pick, ProtocolError, Result, Role, Transcript};

/// Shares z = F m + G u, one field element per row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CssProtocol {
    pub g: MatGF,
    pub f: MatGF,
    pub access: AccessStructure,
}

impl CssProtocol {
    pub fn new(g: MatGF, f: MatGF, access: AccessStructure) -> Result<CssProtocol> {
        if g.rows() != f.rows() {
            return Err(ProtocolError::DimensionMismatch(format!("G has {} rows, F has {}", g.rows(), f.rows())));
        }
        if access.n != f.rows() {
            return Err(ProtocolError::Access(format!("structure on [{}] for {} shares", access.n, f.rows())));
        }
        if g.field() != f.field() {
            return Err(ProtocolError::DimensionMismatch("G and F over different fields".into()));
        }
        Ok(CssProtocol { g, f, access })
    }

    pub fn field(&self) -> &Field {
        self.f.field()
    }

    pub fn x(&self) -> usize {
        self.f.cols()
    }

    pub fn y(&self) -> usize {
        self.g.cols()
    }
}

pub fn css_share(p: &CssProtocol, m: &[Fe], u: &[Fe]) -> Result<Vec<Fe>> {
    if m.len() != p.x() || u.len() != p.y() {
        return Err(ProtocolError::DimensionMismatch(format!(
            "message {} / randomness {} for F with {} and G with {} columns",
            m.len(),
            u.len(),
            p.x(),
            p.y()
        )));
    }
    let fm = p.f.mul_vec(m)?;
    let gu = p.g.mul_vec(u)?;
    Ok(add_vec(p.field(), &fm, &gu))
}

/// Linear recovery of m from the shares of one set, if the set determines m.
#[derive(Debug, Clone)]
pub struct Decoder {
    rows: Vec<usize>,
    /// x x |A| matrix with L P_A F = I and L P_A G = 0
    left: MatGF,
}

impl Decoder {
    pub fn new(g: &MatGF, f: &MatGF, a: Subset) -> Result<Option<Decoder>> {
        let rows = a.indices();
        let fld = f.field();
        let ga = g.restrict(&rows)?;
        let fa = f.restrict(&rows)?;
        let pi = quotient(&ga);
        let k = pi.coords_matrix(&fa)?;
        let x = f.cols();
        if k.rank() < x {
            return Ok(None);
        }
        if x == 0 {
            return Ok(Some(Decoder { rows: rows.clone(), left: MatGF::zeros(fld, 0, rows.len()) }));
        }
        // x independent rows of K, then invert
        let (_, piv) = k.transpose().rref();
        let ks = k.restrict(&piv)?;
        let proj = pi.coords_matrix(&MatGF::identity(fld, rows.len()))?;
        let left = ks.inverse()?.mul(&proj.restrict(&piv)?)?;
        Ok(Some(Decoder { rows, left }))
    }

    pub fn decode(&self, z_a: &[Fe]) -> Result<Vec<Fe>> {
        if z_a.len() != self.rows.len() {
            return Err(ProtocolError::DimensionMismatch(format!("{} shares for a set of {}", z_a.len(), self.rows.len())));
        }
        Ok(self.left.mul_vec(z_a)?)
    }
}

/// The message from the shares z_a of an accept set (in row order), or
/// None when the set does not determine it.
pub fn css_decode(p: &CssProtocol, a: Subset, z_a: &[Fe]) -> Result<Option<Vec<Fe>>> {
    if !p.access.accepts(a) {
        return Err(ProtocolError::NotQualified(a.to_string()));
    }
    match Decoder::new(&p.g, &p.f, a)? {
        Some(d) => Ok(Some(d.decode(z_a)?)),
        None => Ok(None),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CssReport {
    pub correctness: bool,
    /// first accept set that fails, 1-based players
    pub correctness_failure: Option<Vec<usize>>,
    pub secrecy: bool,
    pub secrecy_failure: Option<Vec<usize>>,
    pub secure: bool,
    /// verdict of the rank-based MMSP test on the same matrices
    pub mmsp: bool,
    pub agrees: bool,
    pub cases: u128,
}

fn correct_on(p: &CssProtocol, a: Subset, msgs: &[Vec<Fe>], rands: &[Vec<Fe>]) -> Result<bool> {
    let Some(dec) = Decoder::new(&p.g, &p.f, a)? else { return Ok(false) };
    let rows = a.indices();
    for m in msgs {
        let fm = p.f.mul_vec(m)?;
        for u in rands {
            let z = add_vec(p.field(), &fm, &p.g.mul_vec(u)?);
            if dec.decode(&pick(&z, &rows))? != *m {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Multiset of P_B (F m + G u) over all u, as counts.
fn view_counts(p: &CssProtocol, rows: &[usize], m: &[Fe], rands: &[Vec<Fe>]) -> Result<HashMap<Vec<Fe>, u64>> {
    let fm = p.f.mul_vec(m)?;
    let mut out = HashMap::new();
    for u in rands {
        let z = add_vec(p.field(), &fm, &p.g.mul_vec(u)?);
        *out.entry(pick(&z, rows)).or_insert(0) += 1;
    }
    Ok(out)
}

fn secret_on(p: &CssProtocol, b: Subset, msgs: &[Vec<Fe>], rands: &[Vec<Fe>]) -> Result<bool> {
    let rows = b.indices();
    let reference = view_counts(p, &rows, &msgs[0], rands)?;
    for m in &msgs[1..] {
        if view_counts(p, &rows, m, rands)? != reference {
            return Ok(false);
        }
    }
    Ok(true)
}

fn first_failure(sets: &[Subset], check: impl Fn(Subset) -> Result<bool> + Sync) -> Result<Option<Subset>> {
    let results: Vec<Result<bool>> = sets.par_iter().map(|&s| check(s)).collect();
    for (s, r) in sets.iter().zip(results) {
        if !r? {
            return Ok(Some(*s));
        }
    }
    Ok(None)
}

/// Correctness on every accept set for every (m, u), exact secrecy on
/// every reject set, and the MMSP verdict for comparison.
pub fn css_audit(p: &CssProtocol) -> Result<CssReport> {
    let f = p.field();
    let cases = case_count(f, p.x() + p.y())?;
    let msgs = all_vectors(f, p.x())?;
    let rands = all_vectors(f, p.y())?;
    let bad_a = first_failure(&p.access.accept_sets(), |a| correct_on(p, a, &msgs, &rands))?;
    let bad_b = first_failure(&p.access.reject_sets(), |b| secret_on(p, b, &msgs, &rands))?;
    let mmsp = is_mmsp(&p.g, &p.f, &p.access)?.ok;
    let secure = bad_a.is_none() && bad_b.is_none();
    Ok(CssReport {
        correctness: bad_a.is_none(),
        correctness_failure: bad_a.map(|s| s.players()),
        secrecy: bad_b.is_none(),
        secrecy_failure: bad_b.map(|s| s.players()),
        secure,
        mmsp,
        agrees: secure == mmsp,
        cases,
    })
}

/// Share a message with seeded randomness and let every minimal accept set decode.
pub fn css_run(p: &CssProtocol, m: &[Fe], seed: u64) -> Result<Transcript> {
    let f = p.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u: Vec<Fe> = (0..p.y()).map(|_| f.random(&mut rng)).collect();
    let z = css_share(p, m, &u)?;
    let mut t = Transcript::new(seed);
    t.push(Role::Dealer, "message", m);
    t.push(Role::Dealer, "randomness", &u);
    for (j, zj) in z.iter().enumerate() {
        t.push(Role::Player, format!("share {}", j + 1), &[*zj]);
    }
    for a in p.access.accept_checks() {
        let out = css_decode(p, a, &pick(&z, &a.indices()))?;
        t.push(Role::Decoder, format!("decode {a}"), out.as_deref().unwrap_or(&[]));
    }
    Ok(t)
}
