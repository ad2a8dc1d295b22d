// SPDX-License-Identifier: Apache-2.0
//! Dense polynomials over F_p, little-endian coefficient vectors.

pub(crate) type Poly = Vec<u32>;

fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn deg(a: &Poly) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) works
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Remainder of `a` modulo monic-or-not `f` (f nonzero).
pub(crate) fn rem(a: &Poly, f: &Poly, p: u32) -> Poly {
    let mut a = a.clone();
    trim(&mut a);
    let df = deg(f).expect("division by zero polynomial");
    let lead_inv = inv_mod(f[df], p) as u64;
    let p64 = p as u64;
    while let Some(da) = deg(&a) {
        if da < df {
            break;
        }
        let c = a[da] as u64 * lead_inv % p64;
        let shift = da - df;
        for (i, &fi) in f.iter().enumerate().take(df + 1) {
            let sub = c * fi as u64 % p64;
            a[shift + i] = ((a[shift + i] as u64 + p64 - sub) % p64) as u32;
        }
        trim(&mut a);
    }
    a
}

pub(crate) fn mul(a: &Poly, b: &Poly, p: u32) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let p64 = p as u64;
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p64;
        }
    }
    let mut out: Poly = out.into_iter().map(|c| c as u32).collect();
    trim(&mut out);
    out
}

pub(crate) fn mulmod(a: &Poly, b: &Poly, f: &Poly, p: u32) -> Poly {
    rem(&mul(a, b, p), f, p)
}

pub(crate) fn powmod(a: &Poly, mut e: u128, f: &Poly, p: u32) -> Poly {
    let mut base = rem(a, f, p);
    let mut acc: Poly = vec![1];
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(&acc, &base, f, p);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(&base, &base, f, p);
        }
    }
    rem(&acc, f, p)
}

pub(crate) fn sub(a: &Poly, b: &Poly, p: u32) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| {
            let x = *a.get(i).unwrap_or(&0);
            let y = *b.get(i).unwrap_or(&0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn gcd(a: &Poly, b: &Poly, p: u32) -> Poly {
    let mut a = a.clone();
    let mut b = b.clone();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
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

/// x^(p^k) mod f by repeated p-th powering.
fn x_pow_p_k(k: usize, f: &Poly, p: u32) -> Poly {
    let mut h = rem(&vec![0, 1], f, p);
    for _ in 0..k {
        h = powmod(&h, p as u128, f, p);
    }
    h
}

/// Rabin's test: f of degree r is irreducible iff x^(p^r) = x mod f and
/// gcd(x^(p^(r/l)) - x, f) = 1 for every prime l dividing r.
pub(crate) fn is_irreducible(f: &Poly, p: u32) -> bool {
    let r = match deg(f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if r == 1 {
        return true;
    }
    if f[0] == 0 {
        return false;
    }
    let x: Poly = vec![0, 1];
    let top = x_pow_p_k(r, f, p);
    if sub(&top, &rem(&x, f, p), p).iter().any(|&c| c != 0) {
        return false;
    }
    for l in prime_factors(r) {
        let h = x_pow_p_k(r / l, f, p);
        let d = sub(&h, &x, p);
        let g = gcd(&d, f, p);
        if deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducible_quadratics_over_f3() {
        // x^2+1, x^2+x+2, x^2+2x+2 are the monic irreducible quadratics over F3
        let mut found = Vec::new();
        for c0 in 0..3 {
            for c1 in 0..3 {
                if is_irreducible(&vec![c0, c1, 1], 3) {
                    found.push((c0, c1));
                }
            }
        }
        assert_eq!(found, vec![(1, 0), (2, 1), (2, 2)]);
    }

    #[test]
    fn count_irreducible_quartics_over_f2() {
        let n = (0..16u32)
            .filter(|c| is_irreducible(&vec![c & 1, (c >> 1) & 1, (c >> 2) & 1, (c >> 3) & 1, 1], 2))
            .count();
        assert_eq!(n, 3);
    }
}
