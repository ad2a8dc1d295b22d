// SPDX-License-Identifier: Apache-2.0
//! Stabilizer states and the entangled resources of the EASS family.
//!
//! Generators use the aligned operators
//! What(a, b) = omega^{(a.b)/2} X(a) Z(b), which satisfy
//! What(v) What(w) = omega^{-<v,w>/2} What(v + w); on an isotropic subspace
//! they form an honest representation, so the group average is a projector.

use field_tower::{Fe, Field};
use nalgebra::{DVector, RealField};
use symplinalg::{is_self_col_orth, symplectic_completion, MatGF};

use crate::dense::{czero, real, DenseState, Roots};
use crate::{QuantumError, Result};

/// The odd prime p of a prime field, or an error.
pub fn prime_of(f: &Field) -> Result<u32> {
    if f.r() != 1 || f.p() == 2 {
        return Err(QuantumError::NonPrimeLocalDim(f.q().min(u32::MAX as u128) as u32));
    }
    Ok(f.p())
}

pub(crate) fn digits_of(v: &[Fe]) -> Vec<u32> {
    v.iter().map(|x| x.0 as u32).collect()
}

/// (a, b) halves of a vector in F_q^{2m}, as digits.
pub(crate) fn halves(v: &[Fe]) -> (Vec<u32>, Vec<u32>) {
    let m = v.len() / 2;
    (digits_of(&v[..m]), digits_of(&v[m..]))
}

/// Apply X(a)Z(b) for v = (a | b) on `targets`.
pub fn apply_weyl<T: RealField + Copy>(s: &mut DenseState<T>, roots: &Roots<T>, targets: &[usize], v: &[Fe]) {
    let (a, b) = halves(v);
    s.apply_weyl(roots, targets, &a, &b, 0);
}

/// Apply the aligned What(v) on `targets`.
pub fn apply_aligned<T: RealField + Copy>(s: &mut DenseState<T>, roots: &Roots<T>, targets: &[usize], v: &[Fe]) {
    let p = roots.p as u64;
    let (a, b) = halves(v);
    let ab: u64 = a.iter().zip(&b).map(|(&x, &y)| x as u64 * y as u64).sum::<u64>() % p;
    let inv2 = p.div_ceil(2);
    s.apply_weyl(roots, targets, &a, &b, ab * inv2 % p);
}

fn scaled(f: &Field, k: u32, v: &[Fe]) -> Vec<Fe> {
    let c = f.from_int(k as i64);
    v.iter().map(|&x| f.mul(c, x)).collect()
}

/// G1 together with a symplectic completion (Gbar, H1, Hbar). With no
/// G1 columns the completion is the standard one, so |x,0> = |x>.
#[derive(Debug, Clone)]
pub struct CodeBasis {
    pub g1: MatGF,
    pub gbar: MatGF,
    pub h1: MatGF,
    pub hbar: MatGF,
}

impl CodeBasis {
    pub fn new(g1: &MatGF) -> Result<CodeBasis> {
        let f = g1.field();
        let m = g1.rows();
        if g1.cols() == 0 {
            let n = m / 2;
            let z = MatGF::from_fn(f, m, n, |i, j| if i == n + j { Fe::ONE } else { Fe::ZERO });
            let x = MatGF::from_fn(f, m, n, |i, j| if i == j { Fe::ONE } else { Fe::ZERO });
            return Ok(CodeBasis { g1: g1.clone(), gbar: z, h1: MatGF::zeros(f, m, 0), hbar: x });
        }
        let c = symplectic_completion(g1).map_err(|e| QuantumError::NotMaximalIsotropic(e.to_string()))?;
        Ok(CodeBasis { g1: c.g1, gbar: c.gbar, h1: c.h1, hbar: c.hbar })
    }

    pub fn n(&self) -> usize {
        self.g1.rows() / 2
    }

    pub fn y1(&self) -> usize {
        self.g1.cols()
    }

    /// (G1 | Gbar), a Lagrangian.
    pub fn lagrangian(&self) -> MatGF {
        self.g1.hcat(&self.gbar).expect("same rows")
    }
}

fn labels(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

/// The joint +1 eigenvector of What(g) for the columns g of a 2n x n
/// Lagrangian G, normalised; unique up to phase.
pub fn stabilizer_state<T: RealField + Copy>(g: &MatGF) -> Result<DenseState<T>> {
    let f = g.field();
    let p = prime_of(f)?;
    let m = g.rows();
    if m % 2 == 1 || g.cols() != m / 2 {
        return Err(QuantumError::NotMaximalIsotropic(format!("{}x{} is not 2n x n", m, g.cols())));
    }
    let n = m / 2;
    if !is_self_col_orth(g).map_err(|e| QuantumError::NotMaximalIsotropic(e.to_string()))? || g.rank() < n {
        return Err(QuantumError::NotMaximalIsotropic("columns are not a Lagrangian basis".into()));
    }
    let roots = Roots::<T>::new(p);
    let targets: Vec<usize> = (0..n).collect();
    let gens: Vec<Vec<Fe>> = (0..n).map(|j| g.col(j)).collect();
    let dim = crate::dense::dim_of(p, n)?;
    for seed in 0..dim {
        let mut psi = DenseState::<T>::basis(p, labels("D", n), seed)?;
        for gj in &gens {
            let mut acc = DVector::from_element(dim, czero());
            for k in 0..p {
                let mut t = psi.clone();
                apply_aligned(&mut t, &roots, &targets, &scaled(f, k, gj));
                acc += t.amps;
            }
            psi.amps = acc.unscale(real(p as f64));
        }
        if psi.norm() > real(1e-6) {
            psi.normalize();
            for gj in &gens {
                let mut t = psi.clone();
                apply_aligned(&mut t, &roots, &targets, gj);
                if (&t.amps - &psi.amps).norm() > real(1e-10) {
                    return Err(QuantumError::NoFixedVector);
                }
            }
            return Ok(psi);
        }
    }
    Err(QuantumError::NoFixedVector)
}

/// |x, y> = What(Hbar x + H1 y)|0, 0> on the n share registers.
pub(crate) fn code_vector<T: RealField + Copy>(
    code: &CodeBasis,
    zero: &DenseState<T>,
    roots: &Roots<T>,
    x: &[Fe],
    y: &[Fe],
) -> Result<DenseState<T>> {
    let f = code.g1.field();
    let hx = code.hbar.mul_vec(x)?;
    let hy = code.h1.mul_vec(y)?;
    let v: Vec<Fe> = hx.iter().zip(&hy).map(|(&a, &b)| f.add(a, b)).collect();
    let mut s = zero.clone();
    let targets: Vec<usize> = (0..code.n()).collect();
    apply_aligned(&mut s, roots, &targets, &v);
    Ok(s)
}

pub(crate) fn all_vectors(f: &Field, len: usize) -> Vec<Vec<Fe>> {
    let q = f.q() as usize;
    (0..q.pow(len as u32))
        .map(|mut idx| {
            let mut v = vec![Fe::ZERO; len];
            for k in (0..len).rev() {
                v[k] = f.elem((idx % q) as u128).expect("digit");
                idx /= q;
            }
            v
        })
        .collect()
}

/// q^{-(n-y1)/2} sum_x |x, y>_D |x>_E, with E holding n - y1 registers.
pub fn ea_resource<T: RealField + Copy>(g1: &MatGF, y: &[Fe]) -> Result<DenseState<T>> {
    let code = CodeBasis::new(g1)?;
    ea_resource_from(&code, y, false)
}

/// As `ea_resource`; with `tag_y` the user register also carries y
/// (n registers in all).
pub(crate) fn ea_resource_from<T: RealField + Copy>(code: &CodeBasis, y: &[Fe], tag_y: bool) -> Result<DenseState<T>> {
    let f = code.g1.field();
    let p = prime_of(f)?;
    let n = code.n();
    let y1 = code.y1();
    if y.len() != y1 {
        return Err(QuantumError::DimensionMismatch(format!("label of length {} for {y1} generators", y.len())));
    }
    let e = if tag_y { n } else { n - y1 };
    crate::dense::dim_of(p, n + e)?;
    let roots = Roots::<T>::new(p);
    let zero = stabilizer_state::<T>(&code.lagrangian())?;
    let mut lab = labels("D", n);
    lab.extend(labels("E", e));
    let mut out = DenseState::<T>::basis(p, lab, 0)?;
    out.amps.fill(czero());
    let de = (p as usize).pow(e as u32);
    let xs = all_vectors(f, n - y1);
    let amp = real::<T>(1.0 / (xs.len() as f64).sqrt());
    let ytag = y.iter().fold(0usize, |acc, v| acc * p as usize + v.0 as usize);
    for (xi, x) in xs.iter().enumerate() {
        let v = code_vector(code, &zero, &roots, x, y)?;
        let eidx = if tag_y { xi * (p as usize).pow(y1 as u32) + ytag } else { xi };
        for d in 0..v.dim() {
            out.amps[d * de + eidx] = v.amps[d].scale(amp);
        }
    }
    Ok(out)
}

/// The ensemble {|Phi[y]>}_y of the modified protocol, each with the user
/// register labelled by (x, y).
pub fn modified_resource<T: RealField + Copy>(g1: &MatGF) -> Result<Vec<DenseState<T>>> {
    let code = CodeBasis::new(g1)?;
    all_vectors(g1.field(), code.y1()).iter().map(|y| ea_resource_from(&code, y, true)).collect()
}
