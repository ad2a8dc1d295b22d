// SPDX-License-Identifier: Apache-2.0
//! State vectors and operators on (C^q)^{(x)m}. Register 0 is the most
//! significant digit of a basis index.

use nalgebra::{Complex, DMatrix, DVector, RealField};

use crate::{QuantumError, Result};

pub type Cx<T> = Complex<T>;

/// Largest Hilbert-space dimension the dense oracle accepts.
pub const MAX_DIM: u128 = 1 << 14;

pub(crate) fn real<T: RealField + Copy>(x: f64) -> T {
    nalgebra::convert(x)
}

pub(crate) fn cx<T: RealField + Copy>(re: T) -> Cx<T> {
    Complex::new(re, nalgebra::zero())
}

pub(crate) fn czero<T: RealField + Copy>() -> Cx<T> {
    Complex::new(nalgebra::zero(), nalgebra::zero())
}

pub(crate) fn to_f64<T: RealField + Copy>(x: T) -> f64 {
    x.to_subset().unwrap_or(f64::NAN)
}

/// q^m, refusing anything above `MAX_DIM`.
pub fn dim_of(q: u32, m: usize) -> Result<usize> {
    let d = (q as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if d > MAX_DIM {
        return Err(QuantumError::TooLarge(d));
    }
    Ok(d as usize)
}

/// omega^k for omega = exp(2 pi i / p).
#[derive(Debug, Clone)]
pub struct Roots<T> {
    pub p: u32,
    table: Vec<Cx<T>>,
}

impl<T: RealField + Copy> Roots<T> {
    pub fn new(p: u32) -> Roots<T> {
        let table = (0..p)
            .map(|k| {
                let th = T::two_pi() * real::<T>(k as f64) / real::<T>(p as f64);
                Complex::new(th.cos(), th.sin())
            })
            .collect();
        Roots { p, table }
    }

    pub fn pow(&self, k: u64) -> Cx<T> {
        self.table[(k % self.p as u64) as usize]
    }
}

/// The q x q matrix sum_j omega^{bj} |j+a><j|.
pub fn weyl<T: RealField + Copy>(q: u32, a: u32, b: u32) -> Result<DMatrix<Cx<T>>> {
    if !field_tower::is_prime(q as u64) {
        return Err(QuantumError::NonPrimeLocalDim(q));
    }
    let w = Roots::<T>::new(q);
    let n = q as usize;
    let mut m = DMatrix::from_element(n, n, czero());
    for j in 0..n {
        m[((j + a as usize) % n, j)] = w.pow((b as u64) * j as u64);
    }
    Ok(m)
}

/// Digit bookkeeping for m registers of dimension q.
#[derive(Debug, Clone)]
pub struct Layout {
    pub q: u32,
    pub regs: usize,
    pub dim: usize,
    strides: Vec<usize>,
}

impl Layout {
    pub fn new(q: u32, regs: usize) -> Result<Layout> {
        let dim = dim_of(q, regs)?;
        let strides = (0..regs).map(|i| (q as usize).pow((regs - 1 - i) as u32)).collect();
        Ok(Layout { q, regs, dim, strides })
    }

    pub fn digit(&self, idx: usize, reg: usize) -> usize {
        idx / self.strides[reg] % self.q as usize
    }

    pub fn digits(&self, idx: usize) -> Vec<u32> {
        (0..self.regs).map(|r| self.digit(idx, r) as u32).collect()
    }

    pub fn index(&self, digits: &[u32]) -> usize {
        digits.iter().zip(&self.strides).map(|(&d, &s)| d as usize * s).sum()
    }

    /// The monomial W_T(a, b) = X(a)Z(b) on registers `targets`:
    /// basis index j goes to perm[j] with phase omega^{phase[j]}.
    pub fn weyl_monomial(&self, targets: &[usize], a: &[u32], b: &[u32]) -> (Vec<usize>, Vec<u64>) {
        let q = self.q as usize;
        let mut perm = Vec::with_capacity(self.dim);
        let mut phase = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            let mut to = j;
            let mut ph = 0u64;
            for (k, &t) in targets.iter().enumerate() {
                let d = self.digit(j, t);
                ph += b[k] as u64 * d as u64;
                let nd = (d + a[k] as usize) % q;
                to = to + nd * self.strides[t] - d * self.strides[t];
            }
            perm.push(to);
            phase.push(ph);
        }
        (perm, phase)
    }

    /// For each basis index, its index in the kept registers and in the rest.
    pub fn split(&self, keep: &[usize]) -> Result<(Vec<usize>, Vec<usize>, usize, usize)> {
        check_keep(keep, self.regs)?;
        let rest: Vec<usize> = (0..self.regs).filter(|r| !keep.contains(r)).collect();
        let q = self.q as usize;
        let dk = q.pow(keep.len() as u32);
        let dr = q.pow(rest.len() as u32);
        let mut ki = Vec::with_capacity(self.dim);
        let mut ri = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            ki.push(keep.iter().fold(0, |acc, &r| acc * q + self.digit(j, r)));
            ri.push(rest.iter().fold(0, |acc, &r| acc * q + self.digit(j, r)));
        }
        Ok((ki, ri, dk, dr))
    }
}

fn check_keep(keep: &[usize], regs: usize) -> Result<()> {
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&r| r >= regs) {
        return Err(QuantumError::BadRegisters(format!("{keep:?} of {regs} registers")));
    }
    Ok(())
}

/// A pure state with named registers.
#[derive(Debug, Clone)]
pub struct DenseState<T: RealField + Copy> {
    pub layout: Layout,
    pub labels: Vec<String>,
    pub amps: DVector<Cx<T>>,
}

impl<T: RealField + Copy> DenseState<T> {
    pub fn basis(q: u32, labels: Vec<String>, idx: usize) -> Result<DenseState<T>> {
        let layout = Layout::new(q, labels.len())?;
        let mut amps = DVector::from_element(layout.dim, czero());
        amps[idx] = cx(nalgebra::one());
        Ok(DenseState { layout, labels, amps })
    }

    pub fn from_amps(q: u32, labels: Vec<String>, amps: DVector<Cx<T>>) -> Result<DenseState<T>> {
        let layout = Layout::new(q, labels.len())?;
        if amps.len() != layout.dim {
            return Err(QuantumError::DimensionMismatch(format!("{} amplitudes for dimension {}", amps.len(), layout.dim)));
        }
        Ok(DenseState { layout, labels, amps })
    }

    pub fn q(&self) -> u32 {
        self.layout.q
    }

    pub fn regs(&self) -> usize {
        self.layout.regs
    }

    pub fn dim(&self) -> usize {
        self.layout.dim
    }

    pub fn norm(&self) -> T {
        self.amps.norm()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        self.amps.unscale_mut(n);
    }

    pub fn inner(&self, other: &DenseState<T>) -> Cx<T> {
        self.amps.dotc(&other.amps)
    }

    /// Apply X(a)Z(b) on `targets`, times omega^{extra}.
    pub fn apply_weyl(&mut self, roots: &Roots<T>, targets: &[usize], a: &[u32], b: &[u32], extra: u64) {
        let (perm, phase) = self.layout.weyl_monomial(targets, a, b);
        let mut out = DVector::from_element(self.dim(), czero());
        for j in 0..self.dim() {
            out[perm[j]] = self.amps[j] * roots.pow(phase[j] + extra);
        }
        self.amps = out;
    }

    pub fn density(&self) -> DensityMatrix<T> {
        DensityMatrix { layout: self.layout.clone(), labels: self.labels.clone(), mat: &self.amps * self.amps.adjoint() }
    }

    /// Reduced state on `keep` (ascending register indices).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix<T>> {
        let (ki, ri, dk, dr) = self.layout.split(keep)?;
        let mut m = DMatrix::from_element(dk, dr, czero());
        for j in 0..self.dim() {
            m[(ki[j], ri[j])] = self.amps[j];
        }
        Ok(DensityMatrix {
            layout: Layout::new(self.q(), keep.len())?,
            labels: keep.iter().map(|&r| self.labels[r].clone()).collect(),
            mat: &m * m.adjoint(),
        })
    }

    /// Amplitudes reshaped as (keep) x (rest); its singular values are the
    /// Schmidt coefficients.
    pub fn reshape(&self, keep: &[usize]) -> Result<DMatrix<Cx<T>>> {
        let (ki, ri, dk, dr) = self.layout.split(keep)?;
        let mut m = DMatrix::from_element(dk, dr, czero());
        for j in 0..self.dim() {
            m[(ki[j], ri[j])] = self.amps[j];
        }
        Ok(m)
    }
}

/// A mixed state with named registers.
#[derive(Debug, Clone)]
pub struct DensityMatrix<T: RealField + Copy> {
    pub layout: Layout,
    pub labels: Vec<String>,
    pub mat: DMatrix<Cx<T>>,
}

impl<T: RealField + Copy> DensityMatrix<T> {
    pub fn new(q: u32, labels: Vec<String>, mat: DMatrix<Cx<T>>) -> Result<DensityMatrix<T>> {
        let layout = Layout::new(q, labels.len())?;
        if mat.nrows() != layout.dim || mat.ncols() != layout.dim {
            return Err(QuantumError::DimensionMismatch(format!("{}x{} for dimension {}", mat.nrows(), mat.ncols(), layout.dim)));
        }
        Ok(DensityMatrix { layout, labels, mat })
    }

    pub fn dim(&self) -> usize {
        self.layout.dim
    }

    pub fn trace(&self) -> Cx<T> {
        self.mat.trace()
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix<T>> {
        let (ki, ri, dk, _) = self.layout.split(keep)?;
        let mut out = DMatrix::from_element(dk, dk, czero());
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if ri[i] == ri[j] {
                    out[(ki[i], ki[j])] += self.mat[(i, j)];
                }
            }
        }
        Ok(DensityMatrix {
            layout: Layout::new(self.layout.q, keep.len())?,
            labels: keep.iter().map(|&r| self.labels[r].clone()).collect(),
            mat: out,
        })
    }

    /// Unit trace within 1e-12 and no eigenvalue below -1e-10.
    pub fn check(&self) -> Result<()> {
        let tr = self.trace();
        if (tr.re - nalgebra::one()).abs() > real(1e-12) || tr.im.abs() > real(1e-12) {
            return Err(QuantumError::NotAState(format!("trace {}", to_f64(tr.re))));
        }
        let h = hermitian_part(&self.mat);
        let min = h.symmetric_eigenvalues().iter().fold(T::max_value().unwrap_or(real(1e300)), |m, &v| m.min(v));
        if min < real(-1e-10) {
            return Err(QuantumError::NotAState(format!("eigenvalue {}", to_f64(min))));
        }
        Ok(())
    }
}

pub(crate) fn hermitian_part<T: RealField + Copy>(m: &DMatrix<Cx<T>>) -> DMatrix<Cx<T>> {
    (m + m.adjoint()).unscale(real(2.0))
}

/// W rho W^dagger for the monomial (perm, phase).
pub fn conj_monomial<T: RealField + Copy>(roots: &Roots<T>, rho: &DMatrix<Cx<T>>, perm: &[usize], phase: &[u64]) -> DMatrix<Cx<T>> {
    let d = rho.nrows();
    let mut out = DMatrix::from_element(d, d, czero());
    let p = roots.p as u64;
    for j in 0..d {
        for i in 0..d {
            let ph = (phase[i] + (p - phase[j] % p)) % p;
            out[(perm[i], perm[j])] = rho[(i, j)] * roots.pow(ph);
        }
    }
    out
}

/// Tr(rho sigma) for Hermitian arguments.
pub fn overlap<T: RealField + Copy>(rho: &DMatrix<Cx<T>>, sigma: &DMatrix<Cx<T>>) -> T {
    let mut s = czero::<T>();
    for j in 0..rho.ncols() {
        for i in 0..rho.nrows() {
            s += rho[(i, j)] * sigma[(j, i)];
        }
    }
    s.re
}

/// A valid upper bound on the trace distance, (sqrt(d)/2) ||X||_F, capped at 1.
pub fn trace_distance_bound<T: RealField + Copy>(a: &DMatrix<Cx<T>>, b: &DMatrix<Cx<T>>) -> T {
    let d = real::<T>(a.nrows() as f64);
    (d.sqrt() * (a - b).norm() / real(2.0)).min(nalgebra::one())
}
