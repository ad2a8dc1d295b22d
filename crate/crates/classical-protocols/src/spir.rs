// SPDX-License-Identifier: Apache-2.0
use std::collections::HashMap;

use access::{AccessStructure, Subset};
use field_tower::{Fe, Field};
use mmsp::is_mmsp;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use symplinalg::MatGF;

use crate::css::Decoder;
use crate::{add_vec, all_vectors, case_count, pick, ProtocolError, Result, Role, Transcript};

/// Query matrices with at most this many U_Q values are enumerated; larger
/// ones are sampled.
const UQ_EXHAUSTIVE: u128 = 1000;
const UQ_SAMPLES: usize = 48;

/// f files of x symbols each, shared randomness G U_S, and queries
/// Q^(k) = base_k + G U_Q. The standard form has base_k = F E_k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpirProtocol {
    pub g: MatGF,
    pub f: MatGF,
    pub files: usize,
    pub access: AccessStructure,
    base: Option<Vec<MatGF>>,
}

impl SpirProtocol {
    pub fn standard(g: MatGF, f: MatGF, files: usize, access: AccessStructure) -> Result<SpirProtocol> {
        if g.rows() != f.rows() {
            return Err(ProtocolError::DimensionMismatch(format!("G has {} rows, F has {}", g.rows(), f.rows())));
        }
        if access.n != f.rows() {
            return Err(ProtocolError::Access(format!("structure on [{}] for {} servers", access.n, f.rows())));
        }
        if files == 0 {
            return Err(ProtocolError::BadIndex(0, 0));
        }
        Ok(SpirProtocol { g, f, files, access, base: None })
    }

    /// Replace F E_k by arbitrary n x (x f) matrices, one per file index.
    pub fn with_base_queries(mut self, base: Vec<MatGF>) -> Result<SpirProtocol> {
        let w = self.f.cols() * self.files;
        if base.len() != self.files || base.iter().any(|b| b.rows() != self.f.rows() || b.cols() != w) {
            return Err(ProtocolError::DimensionMismatch(format!("need {} base queries of size {}x{w}", self.files, self.f.rows())));
        }
        self.base = Some(base);
        Ok(self)
    }

    pub fn is_standard(&self) -> bool {
        self.base.is_none()
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

    fn check_k(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.files {
            return Err(ProtocolError::BadIndex(k, self.files));
        }
        Ok(())
    }

    /// The deterministic part of the query for file k (1-based).
    pub fn base_query(&self, k: usize) -> Result<MatGF> {
        self.check_k(k)?;
        if let Some(b) = &self.base {
            return Ok(b[k - 1].clone());
        }
        let x = self.x();
        let fld = self.field();
        Ok(MatGF::from_fn(fld, self.f.rows(), x * self.files, |i, c| {
            if c / x == k - 1 {
                self.f.get(i, c % x)
            } else {
                Fe::ZERO
            }
        }))
    }
}

/// Q^(k) = base_k + G U_Q.
pub fn spir_query(p: &SpirProtocol, k: usize, u_q: &MatGF) -> Result<MatGF> {
    let base = p.base_query(k)?;
    if u_q.rows() != p.y() || u_q.cols() != p.x() * p.files {
        return Err(ProtocolError::DimensionMismatch(format!("U_Q must be {}x{}", p.y(), p.x() * p.files)));
    }
    Ok(base.add(&p.g.mul(u_q)?)?)
}

/// One server's answer Q_j . M + R_j.
pub fn spir_answer(f: &Field, q_j: &[Fe], files: &[Fe], r_j: Fe) -> Result<Fe> {
    if q_j.len() != files.len() {
        return Err(ProtocolError::DimensionMismatch(format!("query row {} vs {} file symbols", q_j.len(), files.len())));
    }
    Ok(q_j.iter().zip(files).fold(r_j, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
}

/// All answers Q M + G U_S.
pub fn spir_answers(p: &SpirProtocol, q: &MatGF, files: &[Fe], u_s: &[Fe]) -> Result<Vec<Fe>> {
    if u_s.len() != p.y() {
        return Err(ProtocolError::DimensionMismatch(format!("U_S has {} entries, G has {} columns", u_s.len(), p.y())));
    }
    let r = p.g.mul_vec(u_s)?;
    (0..q.rows()).map(|j| spir_answer(p.field(), q.row(j), files, r[j])).collect()
}

/// File k from the answers of an accept set, decoded with (G, F).
pub fn spir_decode(p: &SpirProtocol, a: Subset, answers_a: &[Fe]) -> Result<Option<Vec<Fe>>> {
    if !p.access.accepts(a) {
        return Err(ProtocolError::NotQualified(a.to_string()));
    }
    match Decoder::new(&p.g, &p.f, a)? {
        Some(d) => Ok(Some(d.decode(answers_a)?)),
        None => Ok(None),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpirReport {
    pub correctness: bool,
    /// (accept set, file index) of the first failure
    pub correctness_failure: Option<(Vec<usize>, usize)>,
    pub user_secrecy: bool,
    pub user_secrecy_failure: Option<Vec<usize>>,
    /// off-target query blocks lie in span(G)
    pub server_secrecy_structural: bool,
    /// the full answer vector depends on the files only through M_k
    pub server_secrecy_empirical: bool,
    pub secure: bool,
    pub mmsp: bool,
    pub standard_form: bool,
    pub agrees: bool,
    /// every U_Q was enumerated (otherwise a seeded sample)
    pub uq_exhaustive: bool,
}

fn query_randomness(p: &SpirProtocol) -> Result<(Vec<MatGF>, bool)> {
    let f = p.field();
    let (rows, cols) = (p.y(), p.x() * p.files);
    let fits = f.q().checked_pow((rows * cols) as u32).is_some_and(|c| c <= UQ_EXHAUSTIVE);
    if fits {
        let all = all_vectors(f, rows * cols)?;
        return Ok((all.into_iter().map(|v| MatGF::from_data(f, rows, cols, v).expect("sizes agree")).collect(), true));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5b1e);
    Ok(((0..UQ_SAMPLES).map(|_| MatGF::from_fn(f, rows, cols, |_, _| f.random(&mut rng))).collect(), false))
}

fn block_of(files: &[Fe], x: usize, k: usize) -> Vec<Fe> {
    files[(k - 1) * x..k * x].to_vec()
}

/// Distribution of P_B (c + G u) over u, as counts.
fn column_view(p: &SpirProtocol, rows: &[usize], c: &[Fe], rands: &[Vec<Fe>]) -> Result<HashMap<Vec<Fe>, u64>> {
    let mut out = HashMap::new();
    for u in rands {
        let v = add_vec(p.field(), c, &p.g.mul_vec(u)?);
        *out.entry(pick(&v, rows)).or_insert(0) += 1;
    }
    Ok(out)
}

/// The columns of U_Q are independent, so the query restricted to B has
/// the same law for every k iff each column does.
fn user_secret_on(p: &SpirProtocol, b: Subset, rands: &[Vec<Fe>]) -> Result<bool> {
    let rows = b.indices();
    let bases: Vec<MatGF> = (1..=p.files).map(|k| p.base_query(k)).collect::<Result<_>>()?;
    for c in 0..p.x() * p.files {
        let reference = column_view(p, &rows, &bases[0].col(c), rands)?;
        for base in &bases[1..] {
            if column_view(p, &rows, &base.col(c), rands)? != reference {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// User secrecy against the servers holding `rows`: the law of P_B Q^(k)
/// does not depend on k.
pub fn spir_query_secret(p: &SpirProtocol, rows: Subset) -> Result<bool> {
    case_count(p.field(), p.y())?;
    let rands = all_vectors(p.field(), p.y())?;
    user_secret_on(p, rows, &rands)
}

fn correct_on(p: &SpirProtocol, a: Subset, queries: &[MatGF], all_files: &[Vec<Fe>], rands: &[Vec<Fe>]) -> Result<Option<usize>> {
    let Some(dec) = Decoder::new(&p.g, &p.f, a)? else { return Ok(Some(1)) };
    let rows = a.indices();
    let gus: Vec<Vec<Fe>> = rands.iter().map(|u| p.g.mul_vec(u)).collect::<std::result::Result<_, _>>()?;
    for k in 1..=p.files {
        for uq in queries {
            let q = spir_query(p, k, uq)?;
            for m in all_files {
                let qm = q.mul_vec(m)?;
                let want = block_of(m, p.x(), k);
                for gu in &gus {
                    let d = add_vec(p.field(), &qm, gu);
                    if dec.decode(&pick(&d, &rows))? != want {
                        return Ok(Some(k));
                    }
                }
            }
        }
    }
    Ok(None)
}

fn server_structural(p: &SpirProtocol) -> Result<bool> {
    let x = p.x();
    for k in 1..=p.files {
        let base = p.base_query(k)?;
        for c in 0..x * p.files {
            if c / x != k - 1 && !p.g.in_span(&base.col(c))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn server_empirical(p: &SpirProtocol, queries: &[MatGF], all_files: &[Vec<Fe>], rands: &[Vec<Fe>]) -> Result<bool> {
    let gus: Vec<Vec<Fe>> = rands.iter().map(|u| p.g.mul_vec(u)).collect::<std::result::Result<_, _>>()?;
    let work: Vec<(usize, &MatGF)> = (1..=p.files).flat_map(|k| queries.iter().map(move |q| (k, q))).collect();
    let results: Vec<Result<bool>> = work
        .par_iter()
        .map(|&(k, uq)| {
            let q = spir_query(p, k, uq)?;
            let mut seen: HashMap<Vec<Fe>, Vec<Vec<Fe>>> = HashMap::new();
            for m in all_files {
                let qm = q.mul_vec(m)?;
                let mut view: Vec<Vec<Fe>> = gus.iter().map(|gu| add_vec(p.field(), &qm, gu)).collect();
                view.sort();
                match seen.entry(block_of(m, p.x(), k)) {
                    std::collections::hash_map::Entry::Occupied(e) => {
                        if *e.get() != view {
                            return Ok(false);
                        }
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(view);
                    }
                }
            }
            Ok(true)
        })
        .collect();
    for r in results {
        if !r? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn spir_audit(p: &SpirProtocol) -> Result<SpirReport> {
    let f = p.field();
    case_count(f, p.x() * p.files + p.y())?;
    let all_files = all_vectors(f, p.x() * p.files)?;
    let rands = all_vectors(f, p.y())?;
    let (queries, uq_exhaustive) = query_randomness(p)?;

    let accepts = p.access.accept_sets();
    let results: Vec<Result<Option<usize>>> = accepts.par_iter().map(|&a| correct_on(p, a, &queries, &all_files, &rands)).collect();
    let mut correctness_failure = None;
    for (a, r) in accepts.iter().zip(results) {
        if let Some(k) = r? {
            correctness_failure = Some((a.players(), k));
            break;
        }
    }

    let rejects = p.access.reject_sets();
    let results: Vec<Result<bool>> = rejects.par_iter().map(|&b| user_secret_on(p, b, &rands)).collect();
    let mut user_secrecy_failure = None;
    for (b, r) in rejects.iter().zip(results) {
        if !r? {
            user_secrecy_failure = Some(b.players());
            break;
        }
    }

    let server_secrecy_structural = server_structural(p)?;
    let server_secrecy_empirical = server_empirical(p, &queries, &all_files, &rands)?;
    let secure = correctness_failure.is_none() && user_secrecy_failure.is_none() && server_secrecy_structural && server_secrecy_empirical;
    let mmsp = is_mmsp(&p.g, &p.f, &p.access)?.ok;
    Ok(SpirReport {
        correctness: correctness_failure.is_none(),
        correctness_failure,
        user_secrecy: user_secrecy_failure.is_none(),
        user_secrecy_failure,
        server_secrecy_structural,
        server_secrecy_empirical,
        secure,
        mmsp,
        standard_form: p.is_standard(),
        agrees: secure == mmsp,
        uq_exhaustive,
    })
}

/// One seeded retrieval of file k, decoded by every minimal accept set.
pub fn spir_run(p: &SpirProtocol, k: usize, files: &[Fe], seed: u64) -> Result<Transcript> {
    p.check_k(k)?;
    if files.len() != p.x() * p.files {
        return Err(ProtocolError::DimensionMismatch(format!("{} file symbols, expected {}", files.len(), p.x() * p.files)));
    }
    let f = p.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u_q = MatGF::from_fn(f, p.y(), p.x() * p.files, |_, _| f.random(&mut rng));
    let u_s: Vec<Fe> = (0..p.y()).map(|_| f.random(&mut rng)).collect();
    let q = spir_query(p, k, &u_q)?;
    let d = spir_answers(p, &q, files, &u_s)?;
    let mut t = Transcript::new(seed);
    t.push(Role::User, "file index", &[f.from_int(k as i64)]);
    t.push(Role::User, "query randomness", u_q.data());
    for j in 0..q.rows() {
        t.push(Role::User, format!("query to server {}", j + 1), q.row(j));
    }
    t.push(Role::Server, "shared randomness", &u_s);
    for (j, dj) in d.iter().enumerate() {
        t.push(Role::Server, format!("answer {}", j + 1), &[*dj]);
    }
    for a in p.access.accept_checks() {
        let out = spir_decode(p, a, &pick(&d, &a.indices()))?;
        t.push(Role::Decoder, format!("decode {a}"), out.as_deref().unwrap_or(&[]));
    }
    Ok(t)
}
