// SPDX-License-Identifier: Apache-2.0
//! The symplectic track: follow only the Weyl displacement. An accept set
//! measuring D[A] (with its share of E) sees P_A d up to P_A Im G1, so the
//! outcome law is uniform on that coset. Works over any F_q.

use access::{symplectify, Subset};
use classical_protocols::Decoder;
use field_tower::Fe;
use mmsp::MmspBundle;
use rand::Rng;
use symplinalg::MatGF;

use crate::protocols::{add, check_scheme, randomizer, Scheme};
use crate::spir::{lifted_protocol, SpirScheme};
use crate::{QuantumError, Result};

/// A displacement vector (a | b) in F_q^{2n}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylIndex(pub Vec<Fe>);

impl WeylIndex {
    pub fn x_part(&self) -> &[Fe] {
        &self.0[..self.0.len() / 2]
    }

    pub fn z_part(&self) -> &[Fe] {
        &self.0[self.0.len() / 2..]
    }
}

/// The outcome of a set: the coset shift + span(ambiguity), in the
/// coordinates of symplectify(set).
#[derive(Debug, Clone)]
pub struct SympOutcome {
    pub set: Subset,
    pub displacement: WeylIndex,
    pub shift: Vec<Fe>,
    pub ambiguity: MatGF,
}

impl SympOutcome {
    pub fn class_size(&self) -> u128 {
        self.ambiguity.field().q().pow(self.ambiguity.rank() as u32)
    }

    pub fn contains(&self, z: &[Fe]) -> Result<bool> {
        if z.len() != self.shift.len() {
            return Err(QuantumError::DimensionMismatch(format!("outcome of length {}, expected {}", z.len(), self.shift.len())));
        }
        let f = self.ambiguity.field();
        let diff: Vec<Fe> = z.iter().zip(&self.shift).map(|(&a, &b)| f.sub(a, b)).collect();
        if self.ambiguity.cols() == 0 {
            return Ok(diff.iter().all(|v| *v == Fe::ZERO));
        }
        Ok(self.ambiguity.in_span(&diff)?)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Fe> {
        let f = self.ambiguity.field();
        let c: Vec<Fe> = (0..self.ambiguity.cols()).map(|_| f.random(rng)).collect();
        let amb = self.ambiguity.mul_vec(&c).expect("sizes agree");
        add(f, &self.shift, &amb)
    }
}

fn outcome(bundle: &MmspBundle, scheme: Scheme, d: Vec<Fe>, a: Subset) -> Result<SympOutcome> {
    let n = bundle.n();
    if a.indices().iter().any(|&i| i >= n) {
        return Err(QuantumError::BadRegisters(format!("{a} is not a set of players in [{n}]")));
    }
    let rows = symplectify(a, n).indices();
    let shift = rows.iter().map(|&i| d[i]).collect();
    let ambiguity = match scheme {
        Scheme::Feass => MatGF::zeros(bundle.f.field(), rows.len(), 0),
        _ => bundle.g1.restrict(&rows)?,
    };
    Ok(SympOutcome { set: a, displacement: WeylIndex(d), shift, ambiguity })
}

/// The outcome coset of set `a` for message m and randomness u.
pub fn symp_track(bundle: &MmspBundle, scheme: Scheme, m: &[Fe], u: &[Fe], a: Subset) -> Result<SympOutcome> {
    check_scheme(bundle, scheme)?;
    let r = randomizer(bundle, scheme);
    if m.len() != bundle.x() || u.len() != r.cols() {
        return Err(QuantumError::DimensionMismatch(format!(
            "message {} and randomness {} for x = {}, {} random columns",
            m.len(),
            u.len(),
            bundle.x(),
            r.cols()
        )));
    }
    let d = add(bundle.f.field(), &bundle.f.mul_vec(m)?, &r.mul_vec(u)?);
    outcome(bundle, scheme, d, a)
}

/// The outcome coset of `a` in a SPIR run: displacement Q M + R u_S.
#[allow(clippy::too_many_arguments)]
pub fn symp_track_spir(
    bundle: &MmspBundle,
    scheme: SpirScheme,
    files: usize,
    k: usize,
    u_q: &MatGF,
    m: &[Fe],
    u_s: &[Fe],
    a: Subset,
) -> Result<SympOutcome> {
    let ss = scheme.ss();
    check_scheme(bundle, ss)?;
    let p = lifted_protocol(bundle, files)?;
    let q = classical_protocols::spir_query(&p, k, u_q)?;
    let r = randomizer(bundle, ss);
    if m.len() != q.cols() || u_s.len() != r.cols() {
        return Err(QuantumError::DimensionMismatch(format!("{} file symbols and {} shared values", m.len(), u_s.len())));
    }
    let d = add(bundle.f.field(), &q.mul_vec(m)?, &r.mul_vec(u_s)?);
    outcome(bundle, ss, d, a)
}

/// Classical decoding of an outcome of `a` with (G, F); None when the set
/// cannot decode.
pub fn symp_decode(bundle: &MmspBundle, a: Subset, z: &[Fe]) -> Result<Option<Vec<Fe>>> {
    match Decoder::new(&bundle.g(), &bundle.f, symplectify(a, bundle.n()))? {
        Some(d) => Ok(Some(d.decode(z)?)),
        None => Ok(None),
    }
}
