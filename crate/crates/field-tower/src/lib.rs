// SPDX-License-Identifier: Apache-2.0
//! Exact arithmetic in GF(p^r).
//!
//! Elements are packed base-p integers: the element with power-basis
//! coordinates (c_0, ..., c_{r-1}) is stored as sum c_i p^i. A context may
//! carry a subfield tower F_p = L_0 < L_1 < ... < L_K where L_j has degree
//! 2^j, with designated generators e_j of level exactly j.

mod poly;

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub type Field = Arc<FieldCtx>;

const MAX_DIGITS: usize = 128;
const TABLE_LIMIT: u128 = 1 << 17;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus polynomial is reducible over F_p")]
    ReduciblePolynomial,
    #[error("modulus polynomial must be monic of degree {0}")]
    BadPolynomial(usize),
    #[error("tower depth must be at least 1")]
    BadDepth,
    #[error("field order {0}^{1} exceeds the supported range")]
    TooLarge(u64, usize),
    #[error("context has no tower")]
    NoTower,
    #[error("division by zero")]
    DivisionByZero,
    #[error("coefficient vector does not encode an element: {0}")]
    BadElement(String),
}

/// A field element as a packed coefficient index. Only meaningful together
/// with the context that produced it.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Fe(pub u128);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct Tower {
    /// degrees d_0 = 1, d_1 = 2, ..., d_K = r
    pub degrees: Vec<usize>,
    /// gens[j] = e_j; gens[0] = 1
    pub gens: Vec<Fe>,
}

#[derive(Debug, Clone)]
pub struct FieldCtx {
    p: u32,
    r: usize,
    poly: Vec<u32>,
    q: u128,
    tables: Option<Tables>,
    tr_basis: Vec<u32>,
    tower: Option<Tower>,
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.poly == other.poly
    }
}

impl Eq for FieldCtx {}

/// JSON field descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u32,
    pub r: usize,
    pub poly: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tower: Option<Vec<usize>>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn factor(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Build GF(p^r). Without `poly` the lexicographically smallest monic
/// irreducible polynomial is used (lower coefficients compared as a base-p
/// integer with c_{r-1} most significant); r = 1 uses the modulus x.
pub fn field_build(p: u32, r: usize, poly: Option<&[u32]>) -> Result<Field, FieldError> {
    Ok(Arc::new(FieldCtx::new(p, r, poly)?))
}

/// Build the tower field of degree 2^k over F_p.
pub fn tower_build(p: u32, k: usize) -> Result<Field, FieldError> {
    if k == 0 {
        return Err(FieldError::BadDepth);
    }
    if k >= 8 {
        return Err(FieldError::TooLarge(p as u64, 1 << k.min(16)));
    }
    let mut ctx = FieldCtx::new(p, 1 << k, None)?;
    ctx.attach_tower()?;
    Ok(Arc::new(ctx))
}

impl FieldCtx {
    pub fn new(p: u32, r: usize, poly: Option<&[u32]>) -> Result<FieldCtx, FieldError> {
        if !is_prime(p as u64) || p >= 1 << 16 {
            return Err(FieldError::NotPrime(p as u64));
        }
        if r == 0 || r > MAX_DIGITS {
            return Err(FieldError::BadPolynomial(r));
        }
        let q = (p as u128)
            .checked_pow(r as u32)
            .filter(|q| q.checked_mul(p as u128).is_some())
            .ok_or(FieldError::TooLarge(p as u64, r))?;
        let poly: Vec<u32> = match poly {
            Some(f) => {
                if f.len() != r + 1 || f[r] != 1 || f.iter().any(|&c| c >= p) {
                    return Err(FieldError::BadPolynomial(r));
                }
                if !poly::is_irreducible(&f.to_vec(), p) {
                    return Err(FieldError::ReduciblePolynomial);
                }
                f.to_vec()
            }
            None if r == 1 => vec![0, 1],
            None => smallest_irreducible(p, r),
        };
        let mut ctx = FieldCtx { p, r, poly, q, tables: None, tr_basis: Vec::new(), tower: None };
        ctx.tr_basis = ctx.trace_basis();
        if r > 1 && q <= TABLE_LIMIT {
            ctx.tables = Some(ctx.build_tables());
        }
        Ok(ctx)
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Field, FieldError> {
        let mut ctx = FieldCtx::new(d.p, d.r, Some(&d.poly))?;
        if let Some(t) = &d.tower {
            if !t.is_empty() {
                ctx.attach_tower()?;
            }
        }
        Ok(Arc::new(ctx))
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            r: self.r,
            poly: self.poly.clone(),
            tower: self.tower.as_ref().map(|t| t.degrees[1..].to_vec()),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn q(&self) -> u128 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.poly
    }

    pub fn tower(&self) -> Option<&Tower> {
        self.tower.as_ref()
    }

    /// Number of tower levels above F_p (the K in degree 2^K).
    pub fn depth(&self) -> Option<usize> {
        self.tower.as_ref().map(|t| t.degrees.len() - 1)
    }

    /// e_j, the level-j generator; e_0 = 1.
    pub fn gen(&self, j: usize) -> Result<Fe, FieldError> {
        let t = self.tower.as_ref().ok_or(FieldError::NoTower)?;
        t.gens.get(j).copied().ok_or(FieldError::NoTower)
    }

    fn digits(&self, a: Fe) -> [u32; MAX_DIGITS] {
        let mut out = [0u32; MAX_DIGITS];
        let mut x = a.0;
        let p = self.p as u128;
        for d in out.iter_mut().take(self.r) {
            *d = (x % p) as u32;
            x /= p;
        }
        out
    }

    fn pack(&self, d: &[u32]) -> Fe {
        let p = self.p as u128;
        let mut x = 0u128;
        for &c in d.iter().take(self.r).rev() {
            x = x * p + c as u128;
        }
        Fe(x)
    }

    /// Power-basis coordinates, little-endian.
    pub fn coeffs(&self, a: Fe) -> Vec<u32> {
        self.digits(a)[..self.r].to_vec()
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<Fe, FieldError> {
        if c.len() > self.r || c.iter().any(|&x| x >= self.p) {
            return Err(FieldError::BadElement(format!("{c:?}")));
        }
        Ok(self.pack(c))
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, k: i64) -> Fe {
        Fe(k.rem_euclid(self.p as i64) as u128)
    }

    /// Packed index, checked against q.
    pub fn elem(&self, packed: u128) -> Result<Fe, FieldError> {
        if packed >= self.q {
            return Err(FieldError::BadElement(packed.to_string()));
        }
        Ok(Fe(packed))
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.q).map(Fe)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(0..self.q))
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Fe {
        Fe(rng.gen_range(1..self.q))
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.r == 1 {
            return Fe((a.0 + b.0) % self.p as u128);
        }
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        self.digitwise(a, b, |x, y, p| (x + y) % p)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        if self.r == 1 {
            let p = self.p as u128;
            return Fe((a.0 + p - b.0) % p);
        }
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        self.digitwise(a, b, |x, y, p| (x + p - y) % p)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        self.sub(Fe::ZERO, a)
    }

    fn digitwise(&self, a: Fe, b: Fe, op: impl Fn(u64, u64, u64) -> u64) -> Fe {
        let p = self.p as u64;
        if self.q <= u64::MAX as u128 {
            let (mut x, mut y) = (a.0 as u64, b.0 as u64);
            let mut out = 0u64;
            let mut m = 1u64;
            for _ in 0..self.r {
                out += op(x % p, y % p, p) * m;
                m = m.wrapping_mul(p);
                x /= p;
                y /= p;
            }
            return Fe(out as u128);
        }
        let da = self.digits(a);
        let db = self.digits(b);
        let mut dc = [0u32; MAX_DIGITS];
        for i in 0..self.r {
            dc[i] = op(da[i] as u64, db[i] as u64, p) as u32;
        }
        self.pack(&dc)
    }

    /// Multiply by an element of the prime field.
    pub fn scale(&self, c: u32, a: Fe) -> Fe {
        let c = c % self.p;
        if self.r == 1 {
            return Fe(a.0 * c as u128 % self.p as u128);
        }
        self.digitwise(a, Fe::ZERO, |x, _, p| x * c as u64 % p)
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.is_zero() || b.is_zero() {
            return Fe::ZERO;
        }
        if self.r == 1 {
            return Fe(a.0 * b.0 % self.p as u128);
        }
        if let Some(t) = &self.tables {
            let n = self.q as usize - 1;
            let s = t.log[a.0 as usize] as usize + t.log[b.0 as usize] as usize;
            return Fe(t.exp[if s >= n { s - n } else { s }] as u128);
        }
        self.poly_mul(a, b)
    }

    fn poly_mul(&self, a: Fe, b: Fe) -> Fe {
        let r = self.r;
        let p = self.p as u64;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = [0u64; 2 * MAX_DIGITS];
        for i in 0..r {
            if da[i] == 0 {
                continue;
            }
            for j in 0..r {
                prod[i + j] += da[i] as u64 * db[j] as u64;
            }
            if i % 16 == 15 {
                for c in prod.iter_mut().take(2 * r) {
                    *c %= p;
                }
            }
        }
        for c in prod.iter_mut().take(2 * r) {
            *c %= p;
        }
        for k in (r..2 * r - 1).rev() {
            let c = prod[k] % p;
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..r {
                let f = self.poly[i] as u64;
                if f != 0 {
                    prod[k - r + i] = (prod[k - r + i] + c * (p - f)) % p;
                }
            }
        }
        let mut out = [0u32; MAX_DIGITS];
        for i in 0..r {
            out[i] = (prod[i] % p) as u32;
        }
        self.pack(&out)
    }

    pub fn pow(&self, a: Fe, mut e: u128) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(base, base);
            }
        }
        acc
    }

    pub fn inv(&self, a: Fe) -> Result<Fe, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if let Some(t) = &self.tables {
            let n = self.q as usize - 1;
            let l = t.log[a.0 as usize] as usize;
            return Ok(Fe(t.exp[(n - l) % n] as u128));
        }
        Ok(self.pow(a, self.q - 2))
    }

    pub fn div(&self, a: Fe, b: Fe) -> Result<Fe, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// z -> z^p
    pub fn frobenius(&self, z: Fe) -> Fe {
        if self.r == 1 {
            return z;
        }
        self.pow(z, self.p as u128)
    }

    /// z -> z^(p^k)
    pub fn frobenius_k(&self, z: Fe, k: usize) -> Fe {
        (0..k % self.r).fold(z, |acc, _| self.frobenius(acc))
    }

    /// Trace of the multiplication-by-z map, an element of F_p.
    pub fn trace(&self, z: Fe) -> u32 {
        let d = self.digits(z);
        let p = self.p as u64;
        d.iter().zip(&self.tr_basis).fold(0u64, |s, (&a, &b)| (s + a as u64 * b as u64) % p) as u32
    }

    /// Tr(T_{x^i}) for each power-basis element.
    fn trace_basis(&self) -> Vec<u32> {
        let r = self.r;
        if r == 1 {
            return vec![1];
        }
        let p = self.p;
        let f = &self.poly;
        let mut xp: Vec<Vec<u32>> = Vec::with_capacity(2 * r);
        let mut cur: Vec<u32> = vec![1];
        for _ in 0..2 * r - 1 {
            let mut padded = cur.clone();
            padded.resize(r, 0);
            xp.push(padded);
            cur = poly::rem(&poly::mul(&cur, &vec![0, 1], p), f, p);
        }
        (0..r)
            .map(|i| {
                let mut s = 0u64;
                for j in 0..r {
                    s += xp[i + j][j] as u64;
                }
                (s % p as u64) as u32
            })
            .collect()
    }

    fn build_tables(&self) -> Tables {
        let n = self.q - 1;
        let primes = factor(n);
        let g = (2..self.q)
            .map(Fe)
            .find(|&g| primes.iter().all(|&l| self.poly_pow(g, n / l) != Fe::ONE))
            .expect("multiplicative group is cyclic");
        let n = n as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; self.q as usize];
        let mut x = Fe::ONE;
        for (i, slot) in exp.iter_mut().enumerate().take(n) {
            *slot = x.0 as u32;
            log[x.0 as usize] = i as u32;
            x = self.poly_mul(x, g);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        Tables { exp, log }
    }

    fn poly_pow(&self, a: Fe, mut e: u128) -> Fe {
        let mut base = a;
        let mut acc = Fe::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.poly_mul(acc, base);
            }
            e >>= 1;
            base = self.poly_mul(base, base);
        }
        acc
    }

    /// Install the 2^j subfield chain. Requires r to be a power of two.
    pub fn attach_tower(&mut self) -> Result<(), FieldError> {
        if !self.r.is_power_of_two() || self.r < 2 {
            return Err(FieldError::BadDepth);
        }
        let k = self.r.trailing_zeros() as usize;
        let degrees: Vec<usize> = (0..=k).map(|j| 1usize << j).collect();
        let qm1 = self.q - 1;
        let p = self.p as u128;
        // h is the smallest element whose norms to every level have exact level;
        // this avoids factoring q - 1 for large q.
        for h in 2..self.q {
            let h = Fe(h);
            let mut gens = vec![Fe::ONE];
            let mut ok = true;
            for j in 1..=k {
                let sub = p.pow(degrees[j] as u32) - 1;
                let e = self.pow(h, qm1 / sub);
                if self.frobenius_k(e, degrees[j - 1]) == e {
                    ok = false;
                    break;
                }
                gens.push(e);
            }
            if ok {
                self.tower = Some(Tower { degrees, gens });
                return Ok(());
            }
        }
        unreachable!("a generator of the full field always qualifies")
    }

    /// Smallest j with z^(p^(d_j)) = z.
    pub fn tower_level(&self, z: Fe) -> Result<usize, FieldError> {
        let t = self.tower.as_ref().ok_or(FieldError::NoTower)?;
        let mut w = z;
        let mut done = 0usize;
        for (j, &d) in t.degrees.iter().enumerate() {
            w = self.frobenius_k(w, d - done);
            done = d;
            if w == z {
                return Ok(j);
            }
            // z^(p^d) for the next level continues from here
        }
        Ok(t.degrees.len() - 1)
    }

    /// A uniformly random element of level exactly j (level 0 includes 0).
    pub fn random_at_level<R: Rng + ?Sized>(&self, j: usize, rng: &mut R) -> Result<Fe, FieldError> {
        let t = self.tower.as_ref().ok_or(FieldError::NoTower)?;
        if j >= t.degrees.len() {
            return Err(FieldError::NoTower);
        }
        if j == 0 {
            return Ok(Fe(rng.gen_range(0..self.p as u128)));
        }
        let e = t.gens[j];
        loop {
            let mut z = Fe::ZERO;
            let mut pw = Fe::ONE;
            for _ in 0..t.degrees[j] {
                let c = rng.gen_range(0..self.p);
                z = self.add(z, self.scale(c, pw));
                pw = self.mul(pw, e);
            }
            if self.tower_level(z)? == j {
                return Ok(z);
            }
        }
    }

    pub fn fmt_elem(&self, a: Fe) -> String {
        if self.r == 1 {
            a.0.to_string()
        } else {
            format!("{:?}", self.coeffs(a))
        }
    }
}

fn smallest_irreducible(p: u32, r: usize) -> Vec<u32> {
    let pr = (p as u128).pow(r as u32);
    for c in 0..pr {
        let mut f = Vec::with_capacity(r + 1);
        let mut x = c;
        for _ in 0..r {
            f.push((x % p as u128) as u32);
            x /= p as u128;
        }
        if f[0] == 0 {
            continue;
        }
        f.push(1);
        if poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_modulus_f9() {
        let f = field_build(3, 2, None).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn tables_agree_with_schoolbook() {
        let f = field_build(3, 3, None).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                assert_eq!(f.mul(a, b), if a.is_zero() || b.is_zero() { Fe::ZERO } else { f.poly_mul(a, b) });
            }
        }
    }
}
