// SPDX-License-Identifier: Apache-2.0
use nalgebra::{DMatrix, RealField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dense::{conj_monomial, czero, overlap, real, to_f64, Cx, DensityMatrix, Layout, Roots};
use crate::{QuantumError, Result};

#[derive(Debug, Clone)]
enum Kind<T: RealField + Copy> {
    Explicit { labels: Vec<Vec<u32>>, elems: Vec<DMatrix<Cx<T>>> },
    /// scale * W_T(z) sigma W_T(z)^dagger for every z in F_q^{2|T|}
    Covariant { layout: Layout, targets: Vec<usize>, sigma: DMatrix<Cx<T>>, support: Vec<(usize, usize)>, scale: T, roots: Roots<T> },
}

#[derive(Debug, Clone)]
pub struct Povm<T: RealField + Copy> {
    pub q: u32,
    pub dim: usize,
    kind: Kind<T>,
}

pub(crate) fn digits(mut idx: usize, q: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for k in (0..len).rev() {
        out[k] = (idx % q as usize) as u32;
        idx /= q as usize;
    }
    out
}

impl<T: RealField + Copy> Povm<T> {
    pub fn explicit(q: u32, labels: Vec<Vec<u32>>, elems: Vec<DMatrix<Cx<T>>>) -> Result<Povm<T>> {
        let dim = elems.first().map_or(0, |e| e.nrows());
        if labels.len() != elems.len() || elems.iter().any(|e| e.nrows() != dim || e.ncols() != dim) {
            return Err(QuantumError::DimensionMismatch("POVM elements disagree in size".into()));
        }
        let p = Povm { q, dim, kind: Kind::Explicit { labels, elems } };
        p.require_complete()?;
        Ok(p)
    }

    pub fn len(&self) -> usize {
        match &self.kind {
            Kind::Explicit { elems, .. } => elems.len(),
            Kind::Covariant { targets, .. } => (self.q as usize).pow(2 * targets.len() as u32),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn label(&self, i: usize) -> Vec<u32> {
        match &self.kind {
            Kind::Explicit { labels, .. } => labels[i].clone(),
            Kind::Covariant { targets, .. } => digits(i, self.q, 2 * targets.len()),
        }
    }

    pub fn element(&self, i: usize) -> DMatrix<Cx<T>> {
        match &self.kind {
            Kind::Explicit { elems, .. } => elems[i].clone(),
            Kind::Covariant { layout, targets, sigma, scale, roots, .. } => {
                let z = digits(i, self.q, 2 * targets.len());
                let (perm, phase) = layout.weyl_monomial(targets, &z[..targets.len()], &z[targets.len()..]);
                conj_monomial(roots, sigma, &perm, &phase).scale(*scale)
            }
        }
    }

    /// Largest entry of |sum of elements - I|.
    pub fn completeness_error(&self) -> T {
        let mut s = DMatrix::from_element(self.dim, self.dim, czero::<T>());
        for i in 0..self.len() {
            s += self.element(i);
        }
        s -= DMatrix::identity(self.dim, self.dim);
        s.iter().fold(nalgebra::zero::<T>(), |m, v| m.max(v.norm_sqr().sqrt()))
    }

    fn require_complete(&self) -> Result<()> {
        let e = self.completeness_error();
        if e > real(1e-10) {
            return Err(QuantumError::IncompletePovm(to_f64(e)));
        }
        Ok(())
    }

    /// Born probabilities Tr(Pi_i rho), in label order.
    pub fn probabilities(&self, rho: &DMatrix<Cx<T>>) -> Result<Vec<T>> {
        if rho.nrows() != self.dim {
            return Err(QuantumError::DimensionMismatch(format!("state of dimension {} for a POVM on {}", rho.nrows(), self.dim)));
        }
        Ok(match &self.kind {
            Kind::Explicit { elems, .. } => elems.iter().map(|e| overlap(e, rho)).collect(),
            Kind::Covariant { layout, targets, sigma, support, scale, roots } => {
                // Tr(W sigma W^dag rho) = sum_ij w_i sigma_ij conj(w_j) rho_{pj,pi}. The
                // permutation depends on the X part a only, and w_i conj(w_j) on the
                // Z part b only through b . (t_i - t_j), t = target digits. So bin
                // sigma_ij rho_{pj,pi} by t_i - t_j for each a, then sum over bins.
                let k = targets.len();
                let q = self.q as usize;
                let qk = q.pow(k as u32);
                let zero = vec![0u32; k];
                let tdig: Vec<Vec<u64>> = (0..k)
                    .map(|r| {
                        let mut e = zero.clone();
                        e[r] = 1;
                        layout.weyl_monomial(targets, &zero, &e).1
                    })
                    .collect();
                let bin: Vec<usize> = support
                    .iter()
                    .map(|&(i, j)| tdig.iter().fold(0, |acc, t| acc * q + ((t[i] + q as u64 - t[j]) % q as u64) as usize))
                    .collect();
                let deltas: Vec<Vec<u32>> = (0..qk).map(|d| digits(d, self.q, k)).collect();
                let mut out = vec![nalgebra::zero::<T>(); self.len()];
                for ai in 0..qk {
                    let (perm, _) = layout.weyl_monomial(targets, &digits(ai, self.q, k), &zero);
                    let mut acc = vec![czero::<T>(); qk];
                    for (&(i, j), &d) in support.iter().zip(&bin) {
                        acc[d] += sigma[(i, j)] * rho[(perm[j], perm[i])];
                    }
                    for bi in 0..qk {
                        let b = &deltas[bi];
                        let mut s = czero::<T>();
                        for (d, v) in acc.iter().enumerate() {
                            let ph: u64 = b.iter().zip(&deltas[d]).map(|(&x, &y)| x as u64 * y as u64).sum();
                            s += *v * roots.pow(ph);
                        }
                        out[ai * qk + bi] = s.re * *scale;
                    }
                }
                out
            }
        })
    }
}

/// The Weyl-covariant family generated by sigma over the registers
/// `targets`, scaled to sum to the identity. Needs the rest of sigma to be
/// maximally mixed.
pub fn bell_povm<T: RealField + Copy>(sigma: &DensityMatrix<T>, targets: &[usize]) -> Result<Povm<T>> {
    let layout = sigma.layout.clone();
    let q = layout.q;
    let rest: Vec<usize> = (0..layout.regs).filter(|r| !targets.contains(r)).collect();
    let red = sigma.partial_trace(&rest)?;
    let dr = red.dim();
    let want = DMatrix::<Cx<T>>::identity(dr, dr).unscale(real(dr as f64));
    let err = (&red.mat - want).iter().fold(nalgebra::zero::<T>(), |m, v| m.max(v.norm_sqr().sqrt()));
    if err > real(1e-10) {
        return Err(QuantumError::IncompletePovm(to_f64(err)));
    }
    let scale = real::<T>(dr as f64) / real::<T>((q as f64).powi(targets.len() as i32));
    // exact zeros of sigma contribute nothing to any trace
    let m = &sigma.mat;
    let support = (0..m.ncols()).flat_map(|j| (0..m.nrows()).map(move |i| (i, j))).filter(|&(i, j)| m[(i, j)] != czero()).collect();
    Ok(Povm {
        q,
        dim: layout.dim,
        kind: Kind::Covariant { roots: Roots::new(q), layout, targets: targets.to_vec(), sigma: sigma.mat.clone(), support, scale },
    })
}

#[derive(Debug, Clone)]
pub struct Measurement<T> {
    pub outcome: usize,
    pub label: Vec<u32>,
    pub distribution: Vec<T>,
}

/// Sample an outcome from the Born distribution with a seeded generator.
pub fn measure<T: RealField + Copy>(rho: &DMatrix<Cx<T>>, povm: &Povm<T>, seed: u64) -> Result<Measurement<T>> {
    let distribution = povm.probabilities(rho)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r: f64 = rng.gen();
    let total: f64 = distribution.iter().map(|&p| to_f64(p).max(0.0)).sum();
    let mut acc = 0.0;
    let mut outcome = distribution.len() - 1;
    for (i, &p) in distribution.iter().enumerate() {
        acc += to_f64(p).max(0.0) / total;
        if r < acc {
            outcome = i;
            break;
        }
    }
    Ok(Measurement { outcome, label: povm.label(outcome), distribution })
}
