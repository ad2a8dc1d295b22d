// SPDX-License-Identifier: Apache-2.0
//! Quantum SPIR: server j applies W(Q_j M + R_j u_S) to its share of the
//! resource and sends it on; the user measures like an accept set of the
//! sharing scheme. Queries are the classical ones for (G1, G2), F on the
//! lifted structure.
//!
//! Every state the audits compare is W(d) rho W(d)^dagger for one fixed rho,
//! and conjugation phases cancel, so correctness and server secrecy reduce
//! to displacements by differences Q Delta against the undisplaced state.

use std::collections::BTreeMap;

use access::{symplectify, symplectify_structure, Subset};
use classical_protocols::{spir_query, spir_query_secret, Role, SpirProtocol, Transcript};
use field_tower::Fe;
use mmsp::{classify_verdict, MmspBundle};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use symplinalg::MatGF;

use crate::dense::{czero, overlap, trace_distance_bound, Cx};
use crate::povm::measure;
use crate::protocols::{add, check_scheme, family_audit, fe_values, randomizer, Backend, EaSim, QuantumReport, Scheme, TOL};
use crate::stabilizer::all_vectors;
use crate::symp::{symp_decode, symp_track_spir};
use crate::{QuantumError, Result};

/// Query randomness is enumerated up to this many matrices, else sampled.
const MAX_QUERIES: u128 = 64;
const SAMPLED_QUERIES: usize = 6;
/// The SPIR-to-sharing conversion averages over the first query block up
/// to this many values.
const MAX_FLOW5: u128 = 59049;
const SAMPLED_FLOW5: usize = 32;
const AUDIT_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpirScheme {
    Feaspir,
    Easpir,
    Cqspir,
}

impl SpirScheme {
    /// The sharing scheme whose resource and randomizer it uses.
    pub fn ss(self) -> Scheme {
        match self {
            SpirScheme::Feaspir => Scheme::Feass,
            SpirScheme::Easpir => Scheme::Eass,
            SpirScheme::Cqspir => Scheme::Cqss,
        }
    }
}

pub(crate) fn lifted_protocol(bundle: &MmspBundle, files: usize) -> Result<SpirProtocol> {
    let fs = symplectify_structure(&bundle.structure()?);
    Ok(SpirProtocol::standard(bundle.g(), bundle.f.clone(), files, fs)?)
}

fn random_mat<R: Rng>(f: &field_tower::Field, rows: usize, cols: usize, rng: &mut R) -> MatGF {
    MatGF::from_fn(f, rows, cols, |_, _| f.random(rng))
}

#[derive(Debug, Clone)]
pub struct QSpir {
    pub sim: EaSim,
    pub scheme: SpirScheme,
    pub classical: SpirProtocol,
}

impl QSpir {
    pub fn new(bundle: &MmspBundle, scheme: SpirScheme, files: usize) -> Result<QSpir> {
        let sim = EaSim::new(bundle, scheme.ss())?;
        let classical = lifted_protocol(bundle, files)?;
        Ok(QSpir { sim, scheme, classical })
    }

    pub fn files(&self) -> usize {
        self.classical.files
    }

    /// Length of the file vector M.
    pub fn width(&self) -> usize {
        self.classical.x() * self.classical.files
    }

    pub fn query(&self, k: usize, u_q: &MatGF) -> Result<MatGF> {
        Ok(spir_query(&self.classical, k, u_q)?)
    }

    /// Q M + R u_S.
    pub fn displacement(&self, q: &MatGF, m: &[Fe], u_s: &[Fe]) -> Result<Vec<Fe>> {
        let r = randomizer(&self.sim.bundle, self.scheme.ss());
        Ok(add(self.sim.field(), &q.mul_vec(m)?, &r.mul_vec(u_s)?))
    }

    /// Every U_Q when there are few, else the zero matrix and a seeded sample.
    fn query_randomness(&self) -> (Vec<MatGF>, bool) {
        let f = self.sim.field();
        let (y, w) = (self.classical.y(), self.width());
        let count = f.q().checked_pow((y * w) as u32).unwrap_or(u128::MAX);
        if count <= MAX_QUERIES {
            let all = all_vectors(f, y * w).into_iter().map(|v| MatGF::from_data(f, y, w, v).expect("size")).collect();
            return (all, true);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(AUDIT_SEED);
        let mut out = vec![MatGF::zeros(f, y, w)];
        out.extend((0..SAMPLED_QUERIES).map(|_| random_mat(f, y, w, &mut rng)));
        (out, false)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumSpirReport {
    pub protocol: String,
    pub correctness: bool,
    /// (accept set, file index)
    pub correctness_failure: Option<(Vec<usize>, usize)>,
    pub user_secrecy: bool,
    pub user_secrecy_failure: Option<Vec<usize>>,
    pub server_secrecy: bool,
    pub server_secrecy_failure: Option<usize>,
    pub correctness_defect: f64,
    pub server_defect: f64,
    /// false when U_Q was sampled rather than enumerated
    pub uq_exhaustive: bool,
    pub secure: bool,
    pub mmsp: bool,
    pub agrees: bool,
}

/// Nonzero file differences, split by whether block k is touched.
fn differences(f: &field_tower::Field, x: usize, width: usize, k: usize) -> (Vec<Vec<Fe>>, Vec<Vec<Fe>>) {
    let block = (k - 1) * x..k * x;
    let mut hit = Vec::new();
    let mut miss = Vec::new();
    for d in all_vectors(f, width) {
        if d.iter().all(|v| *v == Fe::ZERO) {
            continue;
        }
        if d[block.clone()].iter().any(|v| *v != Fe::ZERO) {
            hit.push(d);
        } else {
            miss.push(d);
        }
    }
    (hit, miss)
}

pub fn audit_spir(bundle: &MmspBundle, scheme: SpirScheme, files: usize) -> Result<QuantumSpirReport> {
    let sp = QSpir::new(bundle, scheme, files)?;
    let sim = &sp.sim;
    let fs = sim.structure()?;
    let (queries, uq_exhaustive) = sp.query_randomness();
    let x = sp.classical.x();
    let mut rep = QuantumSpirReport {
        protocol: format!("{scheme:?}").to_lowercase(),
        correctness: true,
        correctness_failure: None,
        user_secrecy: true,
        user_secrecy_failure: None,
        server_secrecy: true,
        server_secrecy_failure: None,
        correctness_defect: 0.0,
        server_defect: 0.0,
        uq_exhaustive,
        secure: false,
        mmsp: classify_verdict(bundle)?,
        agrees: false,
    };
    let zero = vec![Fe::ZERO; 2 * sim.n];
    'acc: for a in fs.accept_sets() {
        let rho0 = sim.randomized(&sim.base_reduced(a)?, a, &zero)?;
        for k in 1..=files {
            let (hit, _) = differences(sim.field(), x, sp.width(), k);
            for u in &queries {
                let q = sp.query(k, u)?;
                for d in &hit {
                    let ov = overlap(&sim.displaced(&rho0, a, &q.mul_vec(d)?)?, &rho0).abs();
                    rep.correctness_defect = rep.correctness_defect.max(ov);
                    if ov > TOL {
                        rep.correctness = false;
                        rep.correctness_failure = Some((a.players(), k));
                        break 'acc;
                    }
                }
            }
        }
    }
    let full = Subset::full(sim.n);
    let rho_bar = sim.randomized(&sim.base_reduced(full)?, full, &zero)?;
    'srv: for k in 1..=files {
        let (_, miss) = differences(sim.field(), x, sp.width(), k);
        for u in &queries {
            let q = sp.query(k, u)?;
            for d in &miss {
                let dist = trace_distance_bound(&sim.displaced(&rho_bar, full, &q.mul_vec(d)?)?, &rho_bar);
                rep.server_defect = rep.server_defect.max(dist);
                if dist > TOL {
                    rep.server_secrecy = false;
                    rep.server_secrecy_failure = Some(k);
                    break 'srv;
                }
            }
        }
    }
    for b in fs.reject_sets() {
        if !spir_query_secret(&sp.classical, symplectify(b, sim.n))? {
            rep.user_secrecy = false;
            rep.user_secrecy_failure = Some(b.players());
            break;
        }
    }
    rep.secure = rep.correctness && rep.server_secrecy && rep.user_secrecy;
    rep.agrees = rep.secure == rep.mmsp;
    Ok(rep)
}

/// One seeded run: query, server displacements, and one measurement and
/// decoding per minimal accept set. `files` holds all file symbols.
pub fn run_spir(bundle: &MmspBundle, scheme: SpirScheme, files: &[Fe], k: usize, seed: u64, backend: Backend) -> Result<Transcript> {
    check_scheme(bundle, scheme.ss())?;
    let x = bundle.x();
    if x == 0 || files.is_empty() || !files.len().is_multiple_of(x) {
        return Err(QuantumError::DimensionMismatch(format!("{} file symbols for files of length {x}", files.len())));
    }
    let nfiles = files.len() / x;
    let classical = lifted_protocol(bundle, nfiles)?;
    let sim = match backend {
        Backend::Dense => Some(EaSim::new(bundle, scheme.ss())?),
        Backend::Symplectic => None,
    };
    let f = bundle.f.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u_q = random_mat(&f, classical.y(), files.len(), &mut rng);
    let q = spir_query(&classical, k, &u_q)?;
    let r = randomizer(bundle, scheme.ss());
    let u_s: Vec<Fe> = (0..r.cols()).map(|_| f.random(&mut rng)).collect();
    let d = add(&f, &q.mul_vec(files)?, &r.mul_vec(&u_s)?);
    let n = bundle.n();
    let mut t = Transcript::new(seed);
    t.push(Role::User, "file index", &[Fe(k as u128)]);
    for j in 0..n {
        let mut rows = q.row(j).to_vec();
        rows.extend_from_slice(q.row(n + j));
        t.push(Role::User, format!("query to server {}", j + 1), &rows);
    }
    t.push(Role::Server, "shared randomness", &u_s);
    t.push(Role::Server, "displacement", &d);
    for a in bundle.structure()?.accept_checks() {
        let z = match &sim {
            Some(sim) => {
                let rho = sim.displaced(&sim.base_reduced(a)?, a, &d)?;
                fe_values(&measure(&rho, &sim.povm(a)?, rng.gen())?.label)
            }
            None => symp_track_spir(bundle, scheme, nfiles, k, &u_q, files, &u_s, a)?.sample(&mut rng),
        };
        t.push(Role::User, format!("outcome {a}"), &z);
        let dec = symp_decode(bundle, a, &z)?;
        t.push(Role::Decoder, format!("file {k} from {a}"), dec.as_deref().unwrap_or(&[]));
    }
    Ok(t)
}

pub fn run_feaspir(bundle: &MmspBundle, files: &[Fe], k: usize, seed: u64, backend: Backend) -> Result<Transcript> {
    run_spir(bundle, SpirScheme::Feaspir, files, k, seed, backend)
}

pub fn run_easpir(bundle: &MmspBundle, files: &[Fe], k: usize, seed: u64, backend: Backend) -> Result<Transcript> {
    run_spir(bundle, SpirScheme::Easpir, files, k, seed, backend)
}

pub fn run_cqspir(bundle: &MmspBundle, files: &[Fe], k: usize, seed: u64, backend: Backend) -> Result<Transcript> {
    run_spir(bundle, SpirScheme::Cqspir, files, k, seed, backend)
}

/// A sharing scheme built from SPIR with two files: the dealer queries file
/// 1 of M = (m, 0) and the user's measurement becomes the decoder.
#[derive(Debug, Clone)]
pub struct ConvertedEass {
    pub spir: QSpir,
    blocks: Vec<MatGF>,
    pub exhaustive: bool,
}

pub fn convert_flow5(bundle: &MmspBundle, scheme: SpirScheme) -> Result<ConvertedEass> {
    let spir = QSpir::new(bundle, scheme, 2)?;
    let f = spir.sim.field().clone();
    let (y, x, w) = (spir.classical.y(), spir.classical.x(), spir.width());
    let count = f.q().checked_pow((y * x) as u32).unwrap_or(u128::MAX);
    let embed = |b: &MatGF| MatGF::from_fn(&f, y, w, |i, j| if j < x { b.get(i, j) } else { Fe::ZERO });
    let (blocks, exhaustive) = if count <= MAX_FLOW5 {
        (all_vectors(&f, y * x).into_iter().map(|v| embed(&MatGF::from_data(&f, y, x, v).expect("size"))).collect(), true)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(AUDIT_SEED);
        ((0..SAMPLED_FLOW5).map(|_| embed(&random_mat(&f, y, x, &mut rng))).collect(), false)
    };
    Ok(ConvertedEass { spir, blocks, exhaustive })
}

impl ConvertedEass {
    fn padded(&self, m: &[Fe]) -> Vec<Fe> {
        let mut v = m.to_vec();
        v.resize(self.spir.width(), Fe::ZERO);
        v
    }

    /// Reduced state of `a` for message m, averaged over the dealer's query
    /// randomness and the servers' shared randomness.
    pub fn reduced(&self, m: &[Fe], a: Subset) -> Result<DMatrix<Cx<f64>>> {
        let sim = &self.spir.sim;
        let base = sim.base_reduced(a)?;
        let mv = self.padded(m);
        // the state only sees the block through its displacement
        let mut counts: BTreeMap<Vec<Fe>, usize> = BTreeMap::new();
        for u in &self.blocks {
            *counts.entry(self.spir.query(1, u)?.mul_vec(&mv)?).or_default() += 1;
        }
        let mut acc = DMatrix::from_element(base.nrows(), base.ncols(), czero());
        for (d, c) in &counts {
            acc += sim.randomized(&base, a, d)? * Cx::new(*c as f64, 0.0);
        }
        Ok(acc.unscale(self.blocks.len() as f64))
    }

    pub fn outcome_distribution(&self, m: &[Fe], a: Subset) -> Result<Vec<f64>> {
        self.spir.sim.povm(a)?.probabilities(&self.reduced(m, a)?)
    }

    /// The sharing audit applied to the converted scheme.
    pub fn audit(&self) -> Result<QuantumReport> {
        let sim = &self.spir.sim;
        let fs = sim.structure()?;
        let msgs = all_vectors(sim.field(), sim.bundle.x());
        let fam = family_audit(&fs, &msgs, |m, a| self.reduced(m, a))?;
        QuantumReport::finish(&format!("flow5 {:?}", self.spir.scheme).to_lowercase(), &sim.bundle, fam, true)
    }
}

/// Largest gap between the converted scheme's outcome law and the direct
/// sharing scheme's, over every message and accept set.
pub fn flow5_agreement(conv: &ConvertedEass) -> Result<f64> {
    let sim = &conv.spir.sim;
    let mut worst: f64 = 0.0;
    for a in sim.structure()?.accept_sets() {
        let base = sim.base_reduced(a)?;
        let povm = sim.povm(a)?;
        for m in all_vectors(sim.field(), sim.bundle.x()) {
            let direct = povm.probabilities(&sim.randomized(&base, a, &sim.bundle.f.mul_vec(&m)?)?)?;
            let conv_p = conv.outcome_distribution(&m, a)?;
            for (p, r) in direct.iter().zip(&conv_p) {
                worst = worst.max((p - r).abs());
            }
        }
    }
    Ok(worst)
}
