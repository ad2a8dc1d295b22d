// SPDX-License-Identifier: Apache-2.0
//! Entropic quantities in bits. Eigenvalues below 1e-12 count as zero.

use nalgebra::{DMatrix, RealField};

use crate::dense::{czero, hermitian_part, real, Cx};
use crate::{QuantumError, Result};

pub const EIG_CUTOFF: f64 = 1e-12;

fn eigen<T: RealField + Copy>(rho: &DMatrix<Cx<T>>) -> (Vec<T>, DMatrix<Cx<T>>) {
    let e = hermitian_part(rho).symmetric_eigen();
    (e.eigenvalues.iter().copied().collect(), e.eigenvectors)
}

fn check_square<T: RealField + Copy>(rho: &DMatrix<Cx<T>>) -> Result<()> {
    if rho.nrows() != rho.ncols() || rho.nrows() == 0 {
        return Err(QuantumError::NotAState(format!("{}x{} operator", rho.nrows(), rho.ncols())));
    }
    let tr = rho.trace();
    if (tr.re - nalgebra::one()).abs() > real(1e-9) {
        return Err(QuantumError::NotAState("trace differs from 1".into()));
    }
    Ok(())
}

/// S(rho) = -Tr rho log2 rho.
pub fn entropy<T: RealField + Copy>(rho: &DMatrix<Cx<T>>) -> Result<T> {
    check_square(rho)?;
    let (vals, _) = eigen(rho);
    let cut = real::<T>(EIG_CUTOFF);
    let mut s = nalgebra::zero::<T>();
    for v in vals {
        if v > cut {
            s -= v * v.ln() / T::ln_2();
        }
    }
    Ok(s)
}

/// D(rho || sigma) in bits; None when supp rho is not inside supp sigma.
pub fn relative_entropy<T: RealField + Copy>(rho: &DMatrix<Cx<T>>, sigma: &DMatrix<Cx<T>>) -> Result<Option<T>> {
    check_square(rho)?;
    check_square(sigma)?;
    let (rv, rvec) = eigen(rho);
    let (sv, svec) = eigen(sigma);
    let cut = real::<T>(EIG_CUTOFF);
    let mut d = nalgebra::zero::<T>();
    for (i, &p) in rv.iter().enumerate() {
        if p <= cut {
            continue;
        }
        d += p * p.ln() / T::ln_2();
        let ri = rvec.column(i);
        for (j, &s) in sv.iter().enumerate() {
            let w = ri.dotc(&svec.column(j)).norm_sqr();
            if w <= cut {
                continue;
            }
            if s <= cut {
                return Ok(None);
            }
            d -= p * w * s.ln() / T::ln_2();
        }
    }
    Ok(Some(d))
}

/// Trace out the second (keep_first) or the first factor of a da x db split.
pub fn reduce_pair<T: RealField + Copy>(rho: &DMatrix<Cx<T>>, da: usize, db: usize, keep_first: bool) -> DMatrix<Cx<T>> {
    let (dk, dt) = if keep_first { (da, db) } else { (db, da) };
    let mut out = DMatrix::from_element(dk, dk, czero());
    for i in 0..dk {
        for j in 0..dk {
            let mut s = czero();
            for t in 0..dt {
                s += if keep_first { rho[(i * db + t, j * db + t)] } else { rho[(t * db + i, t * db + j)] };
            }
            out[(i, j)] = s;
        }
    }
    out
}

/// I(A;B) = S(A) + S(B) - S(AB) for rho on C^da (x) C^db.
pub fn mutual_information<T: RealField + Copy>(rho: &DMatrix<Cx<T>>, da: usize, db: usize) -> Result<T> {
    if rho.nrows() != da * db {
        return Err(QuantumError::DimensionMismatch(format!("{} is not {da} x {db}", rho.nrows())));
    }
    let a = reduce_pair(rho, da, db, true);
    let b = reduce_pair(rho, da, db, false);
    Ok(entropy(&a)? + entropy(&b)? - entropy(rho)?)
}

/// (1/2) ||rho - sigma||_1.
pub fn trace_distance<T: RealField + Copy>(rho: &DMatrix<Cx<T>>, sigma: &DMatrix<Cx<T>>) -> T {
    let (vals, _) = eigen(&(rho - sigma));
    vals.iter().fold(nalgebra::zero::<T>(), |s, v| s + v.abs()) / real(2.0)
}

/// <psi| rho |psi>.
pub fn fidelity_pure<T: RealField + Copy>(psi: &nalgebra::DVector<Cx<T>>, rho: &DMatrix<Cx<T>>) -> T {
    psi.dotc(&(rho * psi)).re
}
