// SPDX-License-Identifier: Apache-2.0
//! The symplectic form on F_q^{2n}. Coordinates 0..n are the X part and
//! n..2n the Z part.

use field_tower::{Fe, Field};

use crate::{LinalgError, MatGF, Result, VecGF};

/// tr(sum x_i y_i), valued in F_p.
pub fn bilinear(f: &Field, x: &[Fe], y: &[Fe]) -> Result<u32> {
    if x.len() != y.len() {
        return Err(LinalgError::DimensionMismatch(format!("{} vs {}", x.len(), y.len())));
    }
    let dot = x.iter().zip(y).fold(Fe::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
    Ok(f.trace(dot))
}

/// sum_i v_x[i] w_z[i] - w_x[i] v_z[i], valued in F_q.
pub fn symp_fq(f: &Field, v: &[Fe], w: &[Fe]) -> Result<Fe> {
    if v.len() != w.len() {
        return Err(LinalgError::DimensionMismatch(format!("{} vs {}", v.len(), w.len())));
    }
    if v.len() % 2 == 1 {
        return Err(LinalgError::OddLength(v.len()));
    }
    let n = v.len() / 2;
    let mut s = Fe::ZERO;
    for i in 0..n {
        s = f.add(s, f.mul(v[i], w[n + i]));
        s = f.sub(s, f.mul(w[i], v[n + i]));
    }
    Ok(s)
}

/// The trace of `symp_fq`: <v_x, w_z> - <w_x, v_z>.
pub fn symp(f: &Field, v: &[Fe], w: &[Fe]) -> Result<u32> {
    Ok(f.trace(symp_fq(f, v, w)?))
}

/// Matrix of F_q-valued symplectic products between the columns of a and b.
pub fn symp_gram(a: &MatGF, b: &MatGF) -> Result<MatGF> {
    if a.rows() % 2 == 1 {
        return Err(LinalgError::OddLength(a.rows()));
    }
    if a.rows() != b.rows() {
        return Err(LinalgError::DimensionMismatch(format!("{} vs {} rows", a.rows(), b.rows())));
    }
    let f = a.field();
    let ac: Vec<VecGF> = (0..a.cols()).map(|j| a.col(j)).collect();
    let bc: Vec<VecGF> = (0..b.cols()).map(|j| b.col(j)).collect();
    let mut out = MatGF::zeros(f, a.cols(), b.cols());
    for (i, x) in ac.iter().enumerate() {
        for (j, y) in bc.iter().enumerate() {
            out.set(i, j, symp_fq(f, x, y)?);
        }
    }
    Ok(out)
}

/// Columns span an isotropic subspace. Over F_q this is the same as every
/// F_q-multiple of every column pair being trace-orthogonal.
pub fn is_self_col_orth(g: &MatGF) -> Result<bool> {
    Ok(symp_gram(g, g)?.is_zero())
}

/// Every column of `fm` is orthogonal to every column of `g`.
pub fn is_col_orth(fm: &MatGF, g: &MatGF) -> Result<bool> {
    Ok(symp_gram(fm, g)?.is_zero())
}

/// A symplectic basis extending the columns of an isotropic G1:
/// symp(h_i, g_j) = delta_ij, all g and all h mutually isotropic,
/// (g1 | gbar) Lagrangian.
#[derive(Debug, Clone)]
pub struct Completion {
    pub g1: MatGF,
    pub gbar: MatGF,
    pub h1: MatGF,
    pub hbar: MatGF,
}

struct Pairs {
    f: Field,
    g: Vec<VecGF>,
    h: Vec<VecGF>,
}

impl Pairs {
    /// Remove the components along every stored (g, h) pair.
    fn project(&self, v: &[Fe]) -> VecGF {
        let f = &self.f;
        let mut out = v.to_vec();
        for (g, h) in self.g.iter().zip(&self.h) {
            let a = symp_fq(f, v, g).expect("lengths agree");
            let b = symp_fq(f, v, h).expect("lengths agree");
            for k in 0..out.len() {
                out[k] = f.sub(out[k], f.mul(a, h[k]));
                out[k] = f.add(out[k], f.mul(b, g[k]));
            }
        }
        out
    }
}

fn unit(len: usize, i: usize) -> VecGF {
    let mut e = vec![Fe::ZERO; len];
    e[i] = Fe::ONE;
    e
}

fn from_cols(f: &Field, rows: usize, cols: &[VecGF]) -> MatGF {
    MatGF::from_fn(f, rows, cols.len(), |i, j| cols[j][i])
}

pub fn symplectic_completion(g1: &MatGF) -> Result<Completion> {
    let f = g1.field().clone();
    let m = g1.rows();
    if m % 2 == 1 {
        return Err(LinalgError::OddLength(m));
    }
    let n = m / 2;
    let y1 = g1.cols();
    if !is_self_col_orth(g1)? {
        return Err(LinalgError::NotSelfOrthogonal);
    }
    if g1.rank() < y1 || y1 > n {
        return Err(LinalgError::RankDeficient);
    }
    let gs: Vec<VecGF> = (0..y1).map(|j| g1.col(j)).collect();
    // symp(h, g_j) = h . (g_j,z | -g_j,x)
    let constraint = MatGF::from_fn(&f, y1, m, |j, k| {
        if k < n {
            gs[j][n + k]
        } else {
            f.neg(gs[j][k - n])
        }
    });
    let mut hs: Vec<VecGF> = Vec::with_capacity(y1);
    for i in 0..y1 {
        let rhs = unit(y1, i);
        let h = constraint.solve(&rhs)?.ok_or(LinalgError::RankDeficient)?;
        hs.push(h);
    }
    for j in 0..y1 {
        for i in 0..j {
            let c = symp_fq(&f, &hs[i], &hs[j])?;
            for k in 0..m {
                hs[j][k] = f.sub(hs[j][k], f.mul(c, gs[i][k]));
            }
        }
    }
    let mut pairs = Pairs { f: f.clone(), g: gs.clone(), h: hs.clone() };
    let mut gbar = Vec::new();
    let mut hbar = Vec::new();
    for _ in y1..n {
        let gb = (0..m)
            .map(|i| pairs.project(&unit(m, i)))
            .find(|v| v.iter().any(|x| !x.is_zero()))
            .expect("complement is nonzero");
        let (hb, w) = (0..m)
            .map(|i| pairs.project(&unit(m, i)))
            .find_map(|v| {
                let w = symp_fq(&f, &v, &gb).expect("lengths agree");
                (!w.is_zero()).then_some((v, w))
            })
            .expect("complement is symplectic");
        let winv = f.inv(w).expect("nonzero");
        let hb: VecGF = hb.iter().map(|&x| f.mul(winv, x)).collect();
        pairs.g.push(gb.clone());
        pairs.h.push(hb.clone());
        gbar.push(gb);
        hbar.push(hb);
    }
    Ok(Completion {
        g1: g1.clone(),
        gbar: from_cols(&f, m, &gbar),
        h1: from_cols(&f, m, &hs),
        hbar: from_cols(&f, m, &hbar),
    })
}

/// (Gbar, H1) for a self-orthogonal full-rank G1.
pub fn dual_and_completion(g1: &MatGF) -> Result<(MatGF, MatGF)> {
    let c = symplectic_completion(g1)?;
    Ok((c.gbar, c.h1))
}
