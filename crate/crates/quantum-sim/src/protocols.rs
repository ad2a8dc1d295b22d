// SPDX-License-Identifier: Apache-2.0
//! The FEASS / EASS / CQSS family and its modified variant. Every scheme
//! prepares a resource on D (x) E, applies W(F m + R u) to D and lets a
//! set A measure D[A] together with its part of E.

use access::{symplectify, AccessStructure, Subset};
use classical_protocols::{Decoder, Role, Transcript};
use field_tower::{Fe, Field};
use mmsp::{classify_verdict, BundleClass, MmspBundle};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sha2::{Digest, Sha256};
use symplinalg::MatGF;

use crate::dense::{conj_monomial, czero, dim_of, overlap, trace_distance_bound, Cx, DensityMatrix, DenseState, Layout, Roots};
use crate::povm::{bell_povm, measure, Povm};
use crate::stabilizer::{all_vectors, ea_resource_from, halves, prime_of, CodeBasis};
use crate::symp::{symp_decode, symp_track};
use crate::{QuantumError, Result};

/// Randomness vectors beyond this count are not enumerated.
pub(crate) const MAX_RANDOMNESS: usize = 4096;
pub(crate) const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// |Phi> with one E register per player; G = (G1, G2) all random
    Feass,
    /// |Phi[0, G1]>, E holds the n - y1 code labels
    Eass,
    /// EASS with y1 = n: no user register
    Cqss,
    /// mixture over y of |Phi[y, G1]>, E holds (x, y)
    Modified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Dense,
    Symplectic,
}

pub(crate) fn check_scheme(b: &MmspBundle, scheme: Scheme) -> Result<()> {
    let ok = match scheme {
        Scheme::Feass | Scheme::Eass | Scheme::Modified => matches!(b.class, BundleClass::Ea | BundleClass::Cq),
        Scheme::Cqss => b.class == BundleClass::Cq && b.y1() == b.n(),
    };
    if !ok {
        return Err(QuantumError::ClassMismatch(format!("{:?} bundle for {scheme:?}", b.class)));
    }
    if b.f.rows() != 2 * b.n() {
        return Err(QuantumError::ClassMismatch(format!("{} rows for n = {}", b.f.rows(), b.n())));
    }
    Ok(())
}

/// The matrix R of the random displacement R u.
pub(crate) fn randomizer(b: &MmspBundle, scheme: Scheme) -> MatGF {
    match scheme {
        Scheme::Feass => b.g(),
        _ => b.g2.clone(),
    }
}

pub(crate) fn add(f: &Field, a: &[Fe], b: &[Fe]) -> Vec<Fe> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub(crate) fn fe_values(v: &[u32]) -> Vec<Fe> {
    v.iter().map(|&x| Fe(x as u128)).collect()
}

/// Dense simulator for one bundle and scheme.
#[derive(Debug, Clone)]
pub struct EaSim {
    pub bundle: MmspBundle,
    pub scheme: Scheme,
    pub q: u32,
    pub n: usize,
    pub code: CodeBasis,
    ensemble: Vec<DenseState<f64>>,
    shifts: Vec<Vec<Fe>>,
    roots: Roots<f64>,
}

impl EaSim {
    pub fn new(bundle: &MmspBundle, scheme: Scheme) -> Result<EaSim> {
        check_scheme(bundle, scheme)?;
        EaSim::build(bundle, scheme)
    }

    pub(crate) fn build(bundle: &MmspBundle, scheme: Scheme) -> Result<EaSim> {
        let f = bundle.f.field().clone();
        let q = prime_of(&f)?;
        let n = bundle.n();
        dim_of(q, 2 * n)?;
        let code = match scheme {
            Scheme::Feass => CodeBasis::new(&MatGF::zeros(&f, 2 * n, 0))?,
            _ => CodeBasis::new(&bundle.g1)?,
        };
        let ensemble = match scheme {
            Scheme::Modified => {
                all_vectors(&f, code.y1()).iter().map(|y| ea_resource_from(&code, y, true)).collect::<Result<Vec<_>>>()?
            }
            _ => vec![ea_resource_from(&code, &vec![Fe::ZERO; code.y1()], false)?],
        };
        let r = randomizer(bundle, scheme);
        let count = (q as u128).checked_pow(r.cols() as u32).unwrap_or(u128::MAX);
        if count > MAX_RANDOMNESS as u128 {
            return Err(QuantumError::TooLarge(count));
        }
        let shifts = all_vectors(&f, r.cols()).iter().map(|u| r.mul_vec(u)).collect::<std::result::Result<_, _>>()?;
        Ok(EaSim { bundle: bundle.clone(), scheme, q, n, code, ensemble, shifts, roots: Roots::new(q) })
    }

    pub fn field(&self) -> &Field {
        self.bundle.f.field()
    }

    pub fn roots(&self) -> &Roots<f64> {
        &self.roots
    }

    pub fn e_regs(&self) -> usize {
        self.ensemble[0].regs() - self.n
    }

    pub fn resource(&self) -> &[DenseState<f64>] {
        &self.ensemble
    }

    pub fn structure(&self) -> Result<AccessStructure> {
        Ok(self.bundle.structure()?)
    }

    /// Registers held by the set: D[A] and E (only E[A] for FEASS).
    pub fn keep(&self, a: Subset) -> Vec<usize> {
        let mut k = a.indices();
        match self.scheme {
            Scheme::Feass => k.extend(a.indices().iter().map(|i| self.n + i)),
            _ => k.extend(self.n..self.n + self.e_regs()),
        }
        k
    }

    /// F m + R u.
    pub fn displacement(&self, m: &[Fe], u: &[Fe]) -> Result<Vec<Fe>> {
        let fm = self.bundle.f.mul_vec(m)?;
        let ru = randomizer(&self.bundle, self.scheme).mul_vec(u)?;
        Ok(add(self.field(), &fm, &ru))
    }

    /// The undisplaced reduced state on `keep(a)`, averaged over the ensemble.
    pub fn base_reduced(&self, a: Subset) -> Result<DMatrix<Cx<f64>>> {
        let keep = self.keep(a);
        let mut acc: Option<DMatrix<Cx<f64>>> = None;
        for s in &self.ensemble {
            let r = s.partial_trace(&keep)?.mat;
            acc = Some(match acc {
                Some(x) => x + r,
                None => r,
            });
        }
        Ok(acc.expect("nonempty ensemble").unscale(self.ensemble.len() as f64))
    }

    pub fn kept_layout(&self, a: Subset) -> Result<Layout> {
        Layout::new(self.q, self.keep(a).len())
    }

    /// W_A(d_A) rho W_A(d_A)^dagger on the registers of `a`.
    pub fn displaced(&self, rho: &DMatrix<Cx<f64>>, a: Subset, d: &[Fe]) -> Result<DMatrix<Cx<f64>>> {
        let lay = self.kept_layout(a)?;
        let idx = symplectify(a, self.n).indices();
        let (x, z) = halves(&idx.iter().map(|&i| d[i]).collect::<Vec<_>>());
        let targets: Vec<usize> = (0..a.len()).collect();
        let (perm, phase) = lay.weyl_monomial(&targets, &x, &z);
        Ok(conj_monomial(&self.roots, rho, &perm, &phase))
    }

    /// Average of `displaced(rho, a, d + R u)` over every u.
    pub fn randomized(&self, rho: &DMatrix<Cx<f64>>, a: Subset, d: &[Fe]) -> Result<DMatrix<Cx<f64>>> {
        let mut acc = DMatrix::from_element(rho.nrows(), rho.ncols(), czero());
        for s in &self.shifts {
            acc += self.displaced(rho, a, &add(self.field(), d, s))?;
        }
        Ok(acc.unscale(self.shifts.len() as f64))
    }

    /// The decoding measurement of the set: the Weyl orbit of the base state.
    pub fn povm(&self, a: Subset) -> Result<Povm<f64>> {
        let keep = self.keep(a);
        let labels = keep.iter().map(|&r| self.ensemble[0].labels[r].clone()).collect();
        let sigma = DensityMatrix::new(self.q, labels, self.base_reduced(a)?)?;
        bell_povm(&sigma, &(0..a.len()).collect::<Vec<_>>())
    }

    /// Classical post-processing of an outcome z in F_q^{2|A|}.
    pub fn decoder(&self, a: Subset) -> Result<Option<Decoder>> {
        Ok(Decoder::new(&self.bundle.g(), &self.bundle.f, symplectify(a, self.n))?)
    }

    /// Exact outcome distribution for a fixed message and randomness.
    pub fn outcome_distribution(&self, m: &[Fe], u: &[Fe], a: Subset) -> Result<Vec<f64>> {
        let d = self.displacement(m, u)?;
        let rho = self.displaced(&self.base_reduced(a)?, a, &d)?;
        self.povm(a)?.probabilities(&rho)
    }

    /// The joint state W(d)|resource>, one member per ensemble element.
    pub fn shares(&self, d: &[Fe]) -> Vec<DenseState<f64>> {
        let targets: Vec<usize> = (0..self.n).collect();
        self.ensemble
            .iter()
            .map(|s| {
                let mut t = s.clone();
                crate::stabilizer::apply_weyl(&mut t, &self.roots, &targets, d);
                t
            })
            .collect()
    }
}

/// Decoder-agnostic audit result. Defects are the largest overlap (or
/// entropy gap) over accept sets and the largest trace-distance bound over
/// reject sets.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumReport {
    pub protocol: String,
    pub correctness: bool,
    pub correctness_failure: Option<Vec<usize>>,
    pub secrecy: bool,
    pub secrecy_failure: Option<Vec<usize>>,
    /// class-specific structural precondition (F spans the logical
    /// operators for QQ; always true otherwise)
    pub structural: bool,
    pub correctness_defect: f64,
    pub secrecy_defect: f64,
    pub secure: bool,
    pub mmsp: bool,
    pub agrees: bool,
}

impl QuantumReport {
    pub(crate) fn finish(
        protocol: &str,
        bundle: &MmspBundle,
        fam: FamilyResult,
        structural: bool,
    ) -> Result<QuantumReport> {
        let secure = fam.correctness_failure.is_none() && fam.secrecy_failure.is_none() && structural;
        let mmsp = classify_verdict(bundle)?;
        Ok(QuantumReport {
            protocol: protocol.into(),
            correctness: fam.correctness_failure.is_none(),
            correctness_failure: fam.correctness_failure.map(|s| s.players()),
            secrecy: fam.secrecy_failure.is_none(),
            secrecy_failure: fam.secrecy_failure.map(|s| s.players()),
            structural,
            correctness_defect: fam.correctness_defect,
            secrecy_defect: fam.secrecy_defect,
            secure,
            mmsp,
            agrees: secure == mmsp,
        })
    }
}

pub(crate) struct FamilyResult {
    pub correctness_failure: Option<Subset>,
    pub secrecy_failure: Option<Subset>,
    pub correctness_defect: f64,
    pub secrecy_defect: f64,
}

pub(crate) fn family_audit_none() -> FamilyResult {
    FamilyResult { correctness_failure: None, secrecy_failure: None, correctness_defect: 0.0, secrecy_defect: 0.0 }
}

/// Accept sets must hold mutually orthogonal states for distinct messages;
/// reject sets must hold the same state for every message.
pub(crate) fn family_audit(
    fs: &AccessStructure,
    msgs: &[Vec<Fe>],
    mut state: impl FnMut(&[Fe], Subset) -> Result<DMatrix<Cx<f64>>>,
) -> Result<FamilyResult> {
    let mut out = family_audit_none();
    for a in fs.accept_sets() {
        let states: Vec<_> = msgs.iter().map(|m| state(m, a)).collect::<Result<_>>()?;
        'pairs: for i in 0..states.len() {
            for j in i + 1..states.len() {
                let ov = overlap(&states[i], &states[j]).abs();
                out.correctness_defect = out.correctness_defect.max(ov);
                if ov > TOL {
                    out.correctness_failure.get_or_insert(a);
                    break 'pairs;
                }
            }
        }
        if out.correctness_failure.is_some() {
            break;
        }
    }
    for b in fs.reject_sets() {
        let reference = state(&msgs[0], b)?;
        for m in &msgs[1..] {
            let d = trace_distance_bound(&state(m, b)?, &reference);
            out.secrecy_defect = out.secrecy_defect.max(d);
            if d > TOL {
                out.secrecy_failure.get_or_insert(b);
                break;
            }
        }
        if out.secrecy_failure.is_some() {
            break;
        }
    }
    Ok(out)
}

/// Exhaustive dense audit over every message and every randomness value.
pub fn audit_ss(bundle: &MmspBundle, scheme: Scheme) -> Result<QuantumReport> {
    let sim = EaSim::new(bundle, scheme)?;
    let fs = sim.structure()?;
    let msgs = all_vectors(sim.field(), bundle.x());
    let mut cache: Vec<(Subset, DMatrix<Cx<f64>>)> = Vec::new();
    let fam = family_audit(&fs, &msgs, |m, a| {
        let base = match cache.iter().find(|(s, _)| *s == a) {
            Some((_, b)) => b.clone(),
            None => {
                let b = sim.base_reduced(a)?;
                cache.push((a, b.clone()));
                b
            }
        };
        let fm = sim.bundle.f.mul_vec(m)?;
        sim.randomized(&base, a, &fm)
    })?;
    QuantumReport::finish(&format!("{scheme:?}").to_lowercase(), bundle, fam, true)
}

/// Largest gap between the dense outcome distribution and the symplectic
/// prediction (uniform on P_A x + P_A Im G1) for one (m, u, A).
pub fn backend_agreement(sim: &EaSim, m: &[Fe], u: &[Fe], a: Subset) -> Result<f64> {
    let dense = sim.outcome_distribution(m, u, a)?;
    gap_to_track(sim, &dense, m, u, a)
}

/// `backend_agreement` for every (m, u) pair on one set, building the base
/// state and the measurement once.
pub fn backend_agreement_set(sim: &EaSim, a: Subset, msgs: &[Vec<Fe>], rands: &[Vec<Fe>]) -> Result<f64> {
    let base = sim.base_reduced(a)?;
    let povm = sim.povm(a)?;
    let mut worst: f64 = 0.0;
    for m in msgs {
        for u in rands {
            let rho = sim.displaced(&base, a, &sim.displacement(m, u)?)?;
            worst = worst.max(gap_to_track(sim, &povm.probabilities(&rho)?, m, u, a)?);
        }
    }
    Ok(worst)
}

fn gap_to_track(sim: &EaSim, dense: &[f64], m: &[Fe], u: &[Fe], a: Subset) -> Result<f64> {
    let pred = symp_track(&sim.bundle, sim.scheme, m, u, a)?;
    let size = pred.class_size() as f64;
    let mut worst: f64 = 0.0;
    for (i, &p) in dense.iter().enumerate() {
        let z = fe_values(&crate::povm::digits(i, sim.q, 2 * a.len()));
        let want = if pred.contains(&z)? { 1.0 / size } else { 0.0 };
        worst = worst.max((p - want).abs());
    }
    Ok(worst)
}

fn digest(states: &[DenseState<f64>]) -> Vec<Fe> {
    let mut h = Sha256::new();
    for s in states {
        for a in s.amps.iter() {
            h.update(format!("{:.12},{:.12};", a.re + 0.0, a.im + 0.0).as_bytes());
        }
    }
    let out = h.finalize();
    // 64-bit words keep the digest representable in JSON numbers
    out.chunks(8).map(|c| Fe(u64::from_be_bytes(c.try_into().expect("8 bytes")) as u128)).collect()
}

/// One seeded run: share generation, then one measurement and decoding per
/// minimal accept set.
pub fn run_ss(bundle: &MmspBundle, scheme: Scheme, m: &[Fe], seed: u64, backend: Backend) -> Result<Transcript> {
    check_scheme(bundle, scheme)?;
    if m.len() != bundle.x() {
        return Err(QuantumError::DimensionMismatch(format!("message of length {}, expected {}", m.len(), bundle.x())));
    }
    let f = bundle.f.field().clone();
    let sim = match backend {
        Backend::Dense => Some(EaSim::new(bundle, scheme)?),
        Backend::Symplectic => None,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = randomizer(bundle, scheme);
    let u: Vec<Fe> = (0..r.cols()).map(|_| f.random(&mut rng)).collect();
    let d = add(&f, &bundle.f.mul_vec(m)?, &r.mul_vec(&u)?);
    let mut t = Transcript::new(seed);
    t.push(Role::Dealer, "message", m);
    t.push(Role::Dealer, "randomness", &u);
    t.push(Role::Dealer, "displacement", &d);
    if let Some(sim) = &sim {
        t.push(Role::Dealer, "shares digest", &digest(&sim.shares(&d)));
    }
    for a in bundle.structure()?.accept_checks() {
        let z = match &sim {
            Some(sim) => {
                let rho = sim.displaced(&sim.base_reduced(a)?, a, &d)?;
                let out = measure(&rho, &sim.povm(a)?, rng.gen())?;
                fe_values(&out.label)
            }
            None => symp_track(bundle, scheme, m, &u, a)?.sample(&mut rng),
        };
        t.push(Role::Player, format!("outcome {a}"), &z);
        let dec = symp_decode(bundle, a, &z)?;
        t.push(Role::Decoder, format!("decoded {a}"), dec.as_deref().unwrap_or(&[]));
    }
    Ok(t)
}

pub fn run_feass(bundle: &MmspBundle, m: &[Fe], seed: u64, backend: Backend) -> Result<Transcript> {
    run_ss(bundle, Scheme::Feass, m, seed, backend)
}

pub fn run_eass(bundle: &MmspBundle, m: &[Fe], seed: u64, backend: Backend) -> Result<Transcript> {
    run_ss(bundle, Scheme::Eass, m, seed, backend)
}

pub fn run_cqss(bundle: &MmspBundle, m: &[Fe], seed: u64, backend: Backend) -> Result<Transcript> {
    run_ss(bundle, Scheme::Cqss, m, seed, backend)
}

pub fn run_modified_eass(bundle: &MmspBundle, m: &[Fe], seed: u64) -> Result<Transcript> {
    run_ss(bundle, Scheme::Modified, m, seed, Backend::Dense)
}
