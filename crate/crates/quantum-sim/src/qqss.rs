// SPDX-License-Identifier: Apache-2.0
//! Sharing a quantum state: |x> -> |x, 0> on D, then W(G2 u). The user
//! register E of the EASS resource serves as the reference, so the Choi
//! state of the restriction to A is the reduced EASS state at m = 0.

use std::collections::BTreeMap;

use access::Subset;
use classical_protocols::{Role, Transcript};
use field_tower::Fe;
use mmsp::{BundleClass, MmspBundle};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use symplinalg::MatGF;

use crate::channel::{gamma_bar, gamma_bar_branches, Channel};
use crate::dense::{czero, trace_distance_bound, Cx};
use crate::info::{entropy, reduce_pair};
use crate::povm::Povm;
use crate::protocols::{family_audit_none, fe_values, EaSim, FamilyResult, QuantumReport, Scheme, TOL};
use crate::stabilizer::digits_of;
use crate::{QuantumError, Result};

/// Tolerance on the coherent information, in bits.
pub const COHERENT_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct QqSim {
    pub sim: EaSim,
    /// number of shared qudits x'
    pub xp: usize,
    /// column i is the logical label (gamma | beta) of the unit message e_i
    logical: MatGF,
}

impl QqSim {
    pub fn new(bundle: &MmspBundle) -> Result<QqSim> {
        if bundle.class != BundleClass::Qq {
            return Err(QuantumError::ClassMismatch(format!("{:?} bundle for QQSS", bundle.class)));
        }
        let n = bundle.n();
        if bundle.x() % 2 == 1 || bundle.y1() + bundle.x() / 2 != n || bundle.f.rows() != 2 * n {
            return Err(QuantumError::ClassMismatch(format!("QQ needs y1 + x/2 = n, got y1 = {}, x = {}", bundle.y1(), bundle.x())));
        }
        let xp = bundle.x() / 2;
        let sim = EaSim::build(bundle, Scheme::Eass)?;
        let basis = sim.code.g1.hcat(&sim.code.gbar)?.hcat(&sim.code.hbar)?;
        let y1 = bundle.y1();
        let f = bundle.f.field();
        let mut logical = MatGF::zeros(f, 2 * xp, bundle.x());
        for i in 0..bundle.x() {
            let c = basis
                .solve(&bundle.f.col(i))?
                .ok_or_else(|| QuantumError::ClassMismatch("F is not column-orthogonal to G1".into()))?;
            for k in 0..xp {
                logical.set(k, i, c[y1 + xp + k]);
                logical.set(xp + k, i, c[y1 + k]);
            }
        }
        Ok(QqSim { sim, xp, logical })
    }

    pub fn input_dim(&self) -> usize {
        (self.sim.q as usize).pow(self.xp as u32)
    }

    /// W_logical label of F m, modulo the stabilizer.
    pub fn logical_label(&self, m: &[Fe]) -> Result<Vec<Fe>> {
        Ok(self.logical.mul_vec(m)?)
    }

    /// F spans the logical Weyl operators.
    pub fn f_is_logical_basis(&self) -> bool {
        self.logical.rank() == 2 * self.xp
    }

    /// Choi state of the restriction to `a`, ordered (D[A], E).
    pub fn choi(&self, a: Subset) -> Result<DMatrix<Cx<f64>>> {
        let zero = vec![Fe::ZERO; 2 * self.sim.n];
        self.sim.randomized(&self.sim.base_reduced(a)?, a, &zero)
    }

    /// The restriction rho -> Tr_{not A}(Enc(rho)).
    pub fn channel(&self, a: Subset) -> Result<Channel<f64>> {
        let j = self.choi(a)?;
        let din = self.input_dim();
        let dout = j.nrows() / din;
        let s = din as f64;
        let images = (0..din * din)
            .map(|k| {
                let (i, i2) = (k / din, k % din);
                DMatrix::from_fn(dout, dout, |b, b2| j[(b * din + i, b2 * din + i2)] * Cx::new(s, 0.0))
            })
            .collect();
        Channel::from_images(din, dout, images)
    }

    /// Decoding POVM on (D[A], E) grouped by the logical label of the
    /// decoded message.
    pub fn decoder_povm(&self, a: Subset) -> Result<Povm<f64>> {
        let dec = self.sim.decoder(a)?.ok_or_else(|| QuantumError::NotQualified(a.to_string()))?;
        let base = self.sim.povm(a)?;
        let mut groups: BTreeMap<Vec<u32>, DMatrix<Cx<f64>>> = BTreeMap::new();
        for lab in crate::stabilizer::all_vectors(self.sim.field(), 2 * self.xp) {
            groups.insert(digits_of(&lab), DMatrix::from_element(base.dim, base.dim, czero()));
        }
        for i in 0..base.len() {
            let m = dec.decode(&fe_values(&base.label(i)))?;
            let key = digits_of(&self.logical_label(&m)?);
            *groups.get_mut(&key).expect("every label present") += base.element(i);
        }
        let (labels, elems) = groups.into_iter().unzip();
        Povm::explicit(self.sim.q, labels, elems)
    }

    /// Gamma_bar[Pi] for the set, a map from D[A] to x' qudits.
    pub fn recovery(&self, a: Subset) -> Result<Channel<f64>> {
        gamma_bar(&self.decoder_povm(a)?, self.sim.q, self.xp)
    }

    /// Recovery after restriction; the identity on accept sets.
    pub fn round_trip(&self, a: Subset) -> Result<Channel<f64>> {
        self.channel(a)?.then(&self.recovery(a)?)
    }
}

/// Share `input`, hand D[A] to the decoder, sample its outcome, and return
/// the corrected state.
pub fn run_qqss(bundle: &MmspBundle, input: &DMatrix<Cx<f64>>, a: Subset, seed: u64) -> Result<(Transcript, DMatrix<Cx<f64>>)> {
    let qq = QqSim::new(bundle)?;
    if input.nrows() != qq.input_dim() || input.ncols() != qq.input_dim() {
        return Err(QuantumError::DimensionMismatch(format!("input of size {} for {} shared qudits", input.nrows(), qq.xp)));
    }
    let shares = qq.channel(a)?.apply(input)?;
    let povm = qq.decoder_povm(a)?;
    let branches = gamma_bar_branches(&povm, qq.sim.q, qq.xp, &shares)?;
    let probs: Vec<f64> = branches.iter().map(|b| b.trace().re.max(0.0)).collect();
    let total: f64 = probs.iter().sum();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r: f64 = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut pick = probs.len() - 1;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if r < acc {
            pick = i;
            break;
        }
    }
    let recovered = branches[pick].unscale(probs[pick]);
    let mut t = Transcript::new(seed);
    t.push(Role::Dealer, "shared qudits", &[Fe(qq.xp as u128)]);
    t.push(Role::Player, "set", &a.players().iter().map(|&i| Fe(i as u128)).collect::<Vec<_>>());
    t.push(Role::Decoder, "correction", &fe_values(&povm.label(pick)));
    Ok((t, recovered))
}

/// Accept sets must keep x' log2 q bits of coherent information with the
/// reference; reject sets must be uncorrelated with it.
pub fn audit_qqss(bundle: &MmspBundle) -> Result<QuantumReport> {
    let qq = QqSim::new(bundle)?;
    let fs = qq.sim.structure()?;
    let din = qq.input_dim();
    let want = qq.xp as f64 * (qq.sim.q as f64).log2();
    let mut fam = family_audit_none();
    for a in fs.accept_sets() {
        let j = qq.choi(a)?;
        let dd = j.nrows() / din;
        let ic = entropy(&reduce_pair(&j, dd, din, true))? - entropy(&j)?;
        let gap = (ic - want).abs();
        fam.correctness_defect = fam.correctness_defect.max(gap);
        if gap > COHERENT_TOL {
            fam.correctness_failure = Some(a);
            break;
        }
    }
    for b in fs.reject_sets() {
        let j = qq.choi(b)?;
        let dd = j.nrows() / din;
        let prod = reduce_pair(&j, dd, din, true).kronecker(&reduce_pair(&j, dd, din, false));
        let d = trace_distance_bound(&j, &prod);
        fam.secrecy_defect = fam.secrecy_defect.max(d);
        if d > TOL {
            fam.secrecy_failure = Some(b);
            break;
        }
    }
    let fam: FamilyResult = fam;
    QuantumReport::finish("qqss", bundle, fam, qq.f_is_logical_basis())
}
