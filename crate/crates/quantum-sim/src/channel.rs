// SPDX-License-Identifier: Apache-2.0
//! Linear maps stored by their images of the matrix units |i><j|.

use nalgebra::{DMatrix, DVector, RealField};

use crate::dense::{conj_monomial, cx, czero, dim_of, real, Cx, Layout, Roots};
use crate::info::{entropy, mutual_information};
use crate::povm::Povm;
use crate::{QuantumError, Result};

#[derive(Debug, Clone)]
pub struct Channel<T: RealField + Copy> {
    pub din: usize,
    pub dout: usize,
    /// images[i * din + j] = Lambda(|i><j|)
    images: Vec<DMatrix<Cx<T>>>,
}

impl<T: RealField + Copy> Channel<T> {
    pub fn from_images(din: usize, dout: usize, images: Vec<DMatrix<Cx<T>>>) -> Result<Channel<T>> {
        if images.len() != din * din || images.iter().any(|m| m.nrows() != dout || m.ncols() != dout) {
            return Err(QuantumError::DimensionMismatch(format!("need {} images of size {dout}", din * din)));
        }
        Ok(Channel { din, dout, images })
    }

    /// From a Choi matrix ordered (reference, output) with the reference
    /// normalised as (1/din) sum |i><j| (x) |i><j|.
    pub fn from_choi(choi: &DMatrix<Cx<T>>, din: usize, dout: usize) -> Result<Channel<T>> {
        if choi.nrows() != din * dout {
            return Err(QuantumError::DimensionMismatch(format!("Choi of size {} for {din} -> {dout}", choi.nrows())));
        }
        let s = real::<T>(din as f64);
        let images = (0..din * din)
            .map(|k| {
                let (i, j) = (k / din, k % din);
                DMatrix::from_fn(dout, dout, |a, b| choi[(i * dout + a, j * dout + b)] * cx(s))
            })
            .collect();
        Ok(Channel { din, dout, images })
    }

    pub fn identity(d: usize) -> Channel<T> {
        let images = (0..d * d)
            .map(|k| {
                let mut m = DMatrix::from_element(d, d, czero());
                m[(k / d, k % d)] = cx(nalgebra::one());
                m
            })
            .collect();
        Channel { din: d, dout: d, images }
    }

    /// rho -> Tr(rho) I/d.
    pub fn depolarizing(d: usize) -> Channel<T> {
        let mix = DMatrix::<Cx<T>>::identity(d, d).unscale(real(d as f64));
        let zero = DMatrix::from_element(d, d, czero());
        let images = (0..d * d).map(|k| if k / d == k % d { mix.clone() } else { zero.clone() }).collect();
        Channel { din: d, dout: d, images }
    }

    pub fn image(&self, i: usize, j: usize) -> &DMatrix<Cx<T>> {
        &self.images[i * self.din + j]
    }

    pub fn apply(&self, x: &DMatrix<Cx<T>>) -> Result<DMatrix<Cx<T>>> {
        if x.nrows() != self.din || x.ncols() != self.din {
            return Err(QuantumError::DimensionMismatch(format!("input {}x{} for a channel on {}", x.nrows(), x.ncols(), self.din)));
        }
        let mut out = DMatrix::from_element(self.dout, self.dout, czero());
        for i in 0..self.din {
            for j in 0..self.din {
                let c = x[(i, j)];
                if c.norm_sqr() > nalgebra::zero() {
                    out += self.image(i, j) * c;
                }
            }
        }
        Ok(out)
    }

    /// next after self.
    pub fn then(&self, next: &Channel<T>) -> Result<Channel<T>> {
        if next.din != self.dout {
            return Err(QuantumError::DimensionMismatch(format!("{} -> {} then {} -> {}", self.din, self.dout, next.din, next.dout)));
        }
        let images = self.images.iter().map(|m| next.apply(m)).collect::<Result<_>>()?;
        Ok(Channel { din: self.din, dout: next.dout, images })
    }

    /// (id (x) Lambda)(phi), reference first.
    pub fn choi(&self) -> DMatrix<Cx<T>> {
        let (din, dout) = (self.din, self.dout);
        let s = real::<T>(din as f64);
        DMatrix::from_fn(din * dout, din * dout, |r, c| self.image(r / dout, c / dout)[(r % dout, c % dout)].unscale(s))
    }

    /// <phi| Choi |phi>; equals 1 exactly for the identity channel.
    pub fn choi_fidelity(&self) -> Result<T> {
        if self.din != self.dout {
            return Err(QuantumError::DimensionMismatch("fidelity with the identity needs din = dout".into()));
        }
        Ok(crate::info::fidelity_pure(&max_entangled(self.din), &self.choi()))
    }
}

/// (1/sqrt d) sum |i>|i>.
pub fn max_entangled<T: RealField + Copy>(d: usize) -> DVector<Cx<T>> {
    let mut v = DVector::from_element(d * d, czero());
    let a = cx(real::<T>(1.0 / (d as f64).sqrt()));
    for i in 0..d {
        v[i * d + i] = a;
    }
    v
}

/// Teleportation-style decoder: a POVM {Pi_x} on B (x) R, with R the last
/// n_out qudits and labels x in F_q^{2 n_out}, becomes the map
/// rho_B -> sum_x W(x) Tr_{B,R}((rho_B (x) phi_{RA'}) Pi_x) W(x)^dagger.
pub fn gamma_bar<T: RealField + Copy>(povm: &Povm<T>, q: u32, n_out: usize) -> Result<Channel<T>> {
    let d = dim_of(q, n_out)?;
    if !povm.dim.is_multiple_of(d) {
        return Err(QuantumError::DimensionMismatch(format!("POVM on {} does not contain a {d}-dimensional R", povm.dim)));
    }
    if povm.completeness_error() > real(1e-10) {
        return Err(QuantumError::IncompletePovm(crate::dense::to_f64(povm.completeness_error())));
    }
    let db = povm.dim / d;
    let lay = Layout::new(q, n_out)?;
    let roots = Roots::<T>::new(q);
    let targets: Vec<usize> = (0..n_out).collect();
    let inv_d = real::<T>(1.0 / d as f64);
    let mut images = vec![DMatrix::from_element(d, d, czero()); db * db];
    for xi in 0..povm.len() {
        let x = povm.label(xi);
        if x.len() != 2 * n_out {
            return Err(QuantumError::DimensionMismatch(format!("label of length {} for {n_out} output qudits", x.len())));
        }
        let pi = povm.element(xi);
        let (perm, phase) = lay.weyl_monomial(&targets, &x[..n_out], &x[n_out..]);
        for b in 0..db {
            for b2 in 0..db {
                let m = DMatrix::from_fn(d, d, |a, a2| pi[(b2 * d + a2, b * d + a)].scale(inv_d));
                images[b * db + b2] += conj_monomial(&roots, &m, &perm, &phase);
            }
        }
    }
    Channel::from_images(db, d, images)
}

/// (I(X;BR), I(R;B)) for uniform Weyl dense coding through Lambda on
/// n_in qudits of dimension q.
pub fn lemma_l6_check<T: RealField + Copy>(ch: &Channel<T>, q: u32, n_in: usize) -> Result<(T, T)> {
    let d = dim_of(q, n_in)?;
    if ch.din != d {
        return Err(QuantumError::DimensionMismatch(format!("channel input {} is not q^{n_in}", ch.din)));
    }
    dim_of(q, 2 * n_in)?;
    let lay = Layout::new(q, n_in)?;
    let roots = Roots::<T>::new(q);
    let targets: Vec<usize> = (0..n_in).collect();
    let dout = ch.dout;
    let count = (q as usize).pow(2 * n_in as u32);
    let mut avg = DMatrix::from_element(d * dout, d * dout, czero::<T>());
    let mut avg_s = nalgebra::zero::<T>();
    for xi in 0..count {
        let x = crate::povm::digits(xi, q, 2 * n_in);
        let (perm, phase) = lay.weyl_monomial(&targets, &x[..n_in], &x[n_in..]);
        // (id (x) Lambda)(W phi W^dag) = (1/d) sum_ij |i><j| (x) w_i conj(w_j) Lambda(|pi i><pi j|)
        let rho = DMatrix::from_fn(d * dout, d * dout, |r, c| {
            let (i, j) = (r / dout, c / dout);
            let ph = (phase[i] + q as u64 - phase[j] % q as u64) % q as u64;
            ch.image(perm[i], perm[j])[(r % dout, c % dout)] * roots.pow(ph) * cx(real::<T>(1.0 / d as f64))
        });
        avg_s += entropy(&rho)?;
        avg += rho;
    }
    let n = real::<T>(count as f64);
    let avg = avg.unscale(n);
    let i_dc = entropy(&avg)? - avg_s / n;
    let i_ch = mutual_information(&ch.choi(), d, dout)?;
    Ok((i_dc, i_ch))
}

/// The unnormalised branches W(x) Tr_{B,R}((rho_B (x) phi) Pi_x) W(x)^dagger
/// of the same decoder, one per POVM outcome. Their traces are the outcome
/// probabilities and their sum is gamma_bar(rho_B).
pub fn gamma_bar_branches<T: RealField + Copy>(povm: &Povm<T>, q: u32, n_out: usize, rho_b: &DMatrix<Cx<T>>) -> Result<Vec<DMatrix<Cx<T>>>> {
    let d = dim_of(q, n_out)?;
    let db = povm.dim / d;
    if !povm.dim.is_multiple_of(d) || rho_b.nrows() != db {
        return Err(QuantumError::DimensionMismatch(format!("state on {} for a POVM on {} with R of {d}", rho_b.nrows(), povm.dim)));
    }
    let lay = Layout::new(q, n_out)?;
    let roots = Roots::<T>::new(q);
    let targets: Vec<usize> = (0..n_out).collect();
    let inv_d = real::<T>(1.0 / d as f64);
    (0..povm.len())
        .map(|xi| {
            let x = povm.label(xi);
            if x.len() != 2 * n_out {
                return Err(QuantumError::DimensionMismatch(format!("label of length {} for {n_out} output qudits", x.len())));
            }
            let pi = povm.element(xi);
            let m = DMatrix::from_fn(d, d, |a, a2| {
                let mut s = czero::<T>();
                for b in 0..db {
                    for b2 in 0..db {
                        s += rho_b[(b, b2)] * pi[(b2 * d + a2, b * d + a)];
                    }
                }
                s.scale(inv_d)
            });
            let (perm, phase) = lay.weyl_monomial(&targets, &x[..n_out], &x[n_out..]);
            Ok(conj_monomial(&roots, &m, &perm, &phase))
        })
        .collect()
}
