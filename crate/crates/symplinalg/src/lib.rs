// SPDX-License-Identifier: Apache-2.0
//! Dense linear algebra over GF(q), the symplectic form on F_q^{2n},
//! row restriction, quotient coordinates and brute-force MDS checks.

mod json;
mod symplectic;

use std::fmt;

use field_tower::{Fe, Field};
use itertools::Itertools;

pub use json::{MatrixJson, ParseError};
pub use symplectic::{
    bilinear, dual_and_completion, is_col_orth, is_self_col_orth, symp, symp_fq, symp_gram,
    symplectic_completion, Completion,
};

pub type VecGF = Vec<Fe>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("row index {0} out of range for {1} rows")]
    IndexOutOfRange(usize, usize),
    #[error("symplectic form needs an even length, got {0}")]
    OddLength(usize),
    #[error("brute-force MDS check limited to 24 rows, got {0}")]
    TooManyColumns(usize),
    #[error("columns are not symplectically self-orthogonal")]
    NotSelfOrthogonal,
    #[error("columns are linearly dependent")]
    RankDeficient,
    #[error("matrices live over different fields")]
    FieldMismatch,
    #[error("matrix is singular")]
    Singular,
    #[error("codeword enumeration too large: q^k = {0}")]
    TooLarge(u128),
}

type Result<T> = std::result::Result<T, LinalgError>;

/// Row-major dense matrix over a field context.
#[derive(Clone, PartialEq, Eq)]
pub struct MatGF {
    f: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl fmt::Debug for MatGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatGF {}x{} over GF({}^{})", self.rows, self.cols, self.f.p(), self.f.r())?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|&x| self.f.fmt_elem(x)).collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl MatGF {
    pub fn zeros(f: &Field, rows: usize, cols: usize) -> MatGF {
        MatGF { f: f.clone(), rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(f: &Field, k: usize) -> MatGF {
        let mut m = MatGF::zeros(f, k, k);
        for i in 0..k {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn from_fn(f: &Field, rows: usize, cols: usize, mut g: impl FnMut(usize, usize) -> Fe) -> MatGF {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(g(i, j));
            }
        }
        MatGF { f: f.clone(), rows, cols, data }
    }

    pub fn from_data(f: &Field, rows: usize, cols: usize, data: Vec<Fe>) -> Result<MatGF> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} entries for {rows}x{cols}",
                data.len()
            )));
        }
        Ok(MatGF { f: f.clone(), rows, cols, data })
    }

    /// Prime-field entries given as integers (reduced mod p), row-major.
    pub fn from_ints(f: &Field, rows: usize, cols: usize, ints: &[i64]) -> MatGF {
        assert_eq!(ints.len(), rows * cols, "from_ints: wrong entry count");
        MatGF { f: f.clone(), rows, cols, data: ints.iter().map(|&k| f.from_int(k)).collect() }
    }

    pub fn from_rows(f: &Field, rows: &[Vec<i64>]) -> MatGF {
        let cols = rows.first().map_or(0, |r| r.len());
        let flat: Vec<i64> = rows.iter().flatten().copied().collect();
        MatGF::from_ints(f, rows.len(), cols, &flat)
    }

    /// A single column.
    pub fn column(f: &Field, v: &[Fe]) -> MatGF {
        MatGF { f: f.clone(), rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn field(&self) -> &Field {
        &self.f
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Fe] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> VecGF {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn same_field(&self, other: &MatGF) -> Result<()> {
        if *self.f != *other.f {
            return Err(LinalgError::FieldMismatch);
        }
        Ok(())
    }

    pub fn hcat(&self, other: &MatGF) -> Result<MatGF> {
        self.same_field(other)?;
        if self.rows != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "hcat rows {} vs {}",
                self.rows, other.rows
            )));
        }
        Ok(MatGF::from_fn(&self.f, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j)
            } else {
                other.get(i, j - self.cols)
            }
        }))
    }

    pub fn vcat(&self, other: &MatGF) -> Result<MatGF> {
        self.same_field(other)?;
        if self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "vcat cols {} vs {}",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(MatGF { f: self.f.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> MatGF {
        MatGF::from_fn(&self.f, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, other: &MatGF) -> Result<MatGF> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "mul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.f;
        let mut out = MatGF::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Fe]) -> Result<VecGF> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} for {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.f;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(Fe::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect())
    }

    fn zip_with(&self, other: &MatGF, op: impl Fn(Fe, Fe) -> Fe) -> Result<MatGF> {
        self.same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch("elementwise shapes differ".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| op(a, b)).collect();
        Ok(MatGF { f: self.f.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &MatGF) -> Result<MatGF> {
        self.zip_with(other, |a, b| self.f.add(a, b))
    }

    pub fn sub(&self, other: &MatGF) -> Result<MatGF> {
        self.zip_with(other, |a, b| self.f.sub(a, b))
    }

    pub fn scale(&self, c: Fe) -> MatGF {
        let data = self.data.iter().map(|&a| self.f.mul(c, a)).collect();
        MatGF { f: self.f.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> MatGF {
        self.scale(self.f.neg(Fe::ONE))
    }

    /// Rows indexed by `s` (0-based), in ascending order.
    pub fn restrict(&self, s: &[usize]) -> Result<MatGF> {
        let mut idx = s.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if let Some(&bad) = idx.iter().find(|&&i| i >= self.rows) {
            return Err(LinalgError::IndexOutOfRange(bad, self.rows));
        }
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in &idx {
            data.extend_from_slice(self.row(i));
        }
        Ok(MatGF { f: self.f.clone(), rows: idx.len(), cols: self.cols, data })
    }

    /// Rows whose bit is set in `mask`.
    pub fn restrict_mask(&self, mask: u64) -> MatGF {
        let idx: Vec<usize> = (0..self.rows).filter(|&i| mask >> i & 1 == 1).collect();
        self.restrict(&idx).expect("mask rows in range")
    }

    pub fn select_cols(&self, cols: &[usize]) -> MatGF {
        MatGF::from_fn(&self.f, self.rows, cols.len(), |i, j| self.get(i, cols[j]))
    }

    pub fn col_range(&self, start: usize, end: usize) -> MatGF {
        let cols: Vec<usize> = (start..end).collect();
        self.select_cols(&cols)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (MatGF, Vec<usize>) {
        let f = &self.f;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for c in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if pr != row {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, row * m.cols + j);
                }
            }
            let inv = f.inv(m.get(row, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = f.mul(inv, m.get(row, j));
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i == row {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(row, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.rref().1.len()
    }

    /// Some x with self * x = b; free variables are set to zero.
    pub fn solve(&self, b: &[Fe]) -> Result<Option<VecGF>> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "rhs of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let aug = self.hcat(&MatGF::column(&self.f, b))?;
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Fe::ZERO; self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = r.get(i, self.cols);
        }
        Ok(Some(x))
    }

    /// Whether v lies in the column span.
    pub fn in_span(&self, v: &[Fe]) -> Result<bool> {
        Ok(self.solve(v)?.is_some())
    }

    pub fn inverse(&self) -> Result<MatGF> {
        if self.rows != self.cols {
            return Err(LinalgError::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let (r, pivots) = self.hcat(&MatGF::identity(&self.f, n))?.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(LinalgError::Singular);
        }
        Ok(r.col_range(n, 2 * n))
    }

    /// Basis of the right kernel, as columns.
    pub fn nullspace(&self) -> MatGF {
        let f = &self.f;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = MatGF::zeros(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, Fe::ONE);
            for (i, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, f.neg(r.get(i, fc)));
            }
        }
        out
    }

    /// Columns at the pivot positions: a basis of the column space.
    pub fn column_basis(&self) -> MatGF {
        let (_, pivots) = self.rref();
        self.select_cols(&pivots)
    }
}

/// Every k-row submatrix invertible, k = number of columns.
pub fn is_mds(m: &MatGF) -> Result<bool> {
    let k = m.cols();
    if m.rows() > 24 {
        return Err(LinalgError::TooManyColumns(m.rows()));
    }
    if k > m.rows() {
        return Err(LinalgError::DimensionMismatch(format!("{} columns exceed {} rows", k, m.rows())));
    }
    if k == 0 {
        return Ok(true);
    }
    for s in (0..m.rows()).combinations(k) {
        if m.restrict(&s)?.rank() < k {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Minimum Hamming weight over the nonzero codewords of the column span.
pub fn min_distance(m: &MatGF) -> Result<Option<usize>> {
    let f = m.field();
    let k = m.cols() as u32;
    let total = f.q().checked_pow(k).filter(|&t| t <= 10_000).ok_or(LinalgError::TooLarge(f.q()))?;
    let mut best: Option<usize> = None;
    for idx in 1..total {
        let mut x = idx;
        let coeffs: Vec<Fe> = (0..k)
            .map(|_| {
                let c = Fe(x % f.q());
                x /= f.q();
                c
            })
            .collect();
        let w = m.mul_vec(&coeffs)?.iter().filter(|c| !c.is_zero()).count();
        if w > 0 {
            best = Some(best.map_or(w, |b| b.min(w)));
        }
    }
    Ok(best)
}

/// Coset coordinates for F_q^m / Im(G).
#[derive(Debug, Clone)]
pub struct QuotientMap {
    ambient: usize,
    rank: usize,
    complement: Vec<usize>,
    /// last (ambient - rank) rows of the inverse of [basis | complement units]
    proj: MatGF,
}

impl QuotientMap {
    pub fn new(g: &MatGF) -> QuotientMap {
        let f = g.field();
        let m = g.rows();
        let mut basis = if g.cols() == 0 { MatGF::zeros(f, m, 0) } else { g.column_basis() };
        let rank = basis.cols();
        let mut complement = Vec::new();
        for i in 0..m {
            if basis.cols() == m {
                break;
            }
            let mut e = vec![Fe::ZERO; m];
            e[i] = Fe::ONE;
            if !basis.in_span(&e).expect("lengths agree") {
                basis = basis.hcat(&MatGF::column(f, &e)).expect("rows agree");
                complement.push(i);
            }
        }
        let proj = if m == 0 {
            MatGF::zeros(f, 0, 0)
        } else {
            let inv = basis.inverse().expect("basis plus complement is invertible");
            let rows: Vec<usize> = (rank..m).collect();
            inv.restrict(&rows).expect("rows in range")
        };
        QuotientMap { ambient: m, rank, complement, proj }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn subspace_dim(&self) -> usize {
        self.rank
    }

    pub fn quotient_dim(&self) -> usize {
        self.ambient - self.rank
    }

    /// Unit vectors chosen to complete the subspace basis.
    pub fn complement(&self) -> &[usize] {
        &self.complement
    }

    pub fn coset_coords(&self, v: &[Fe]) -> Result<VecGF> {
        if v.len() != self.ambient {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} in ambient {}",
                v.len(),
                self.ambient
            )));
        }
        self.proj.mul_vec(v)
    }

    /// Coset coordinates of every column of m, as a (quotient_dim x cols) matrix.
    pub fn coords_matrix(&self, m: &MatGF) -> Result<MatGF> {
        self.proj.mul(m)
    }
}

pub fn quotient(g: &MatGF) -> QuotientMap {
    QuotientMap::new(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use field_tower::field_build;

    #[test]
    fn solve_picks_zero_free_variables() {
        let f = field_build(3, 1, None).unwrap();
        let m = MatGF::from_rows(&f, &[vec![1, 1, 0], vec![0, 0, 1]]);
        let x = m.solve(&[Fe(2), Fe(1)]).unwrap().unwrap();
        assert_eq!(x, vec![Fe(2), Fe(0), Fe(1)]);
    }

    #[test]
    fn nullspace_is_kernel() {
        let f = field_build(5, 1, None).unwrap();
        let m = MatGF::from_rows(&f, &[vec![1, 2, 3, 4], vec![2, 4, 1, 1]]);
        let k = m.nullspace();
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).unwrap().is_zero());
    }
}
