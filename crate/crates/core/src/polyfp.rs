//! Dense polynomials over a prime field, just enough to factor cubics.
//!
//! Coefficient vectors are little-endian (`c[i]` multiplies `x^i`) and
//! always trimmed so the last entry is non-zero.

use crate::arith::{mul_mod_u64, pow_mod_u64};

pub type PolyFp = Vec<u64>;

const BRUTE_FORCE_LIMIT: u64 = 2048;

fn trim(mut a: PolyFp) -> PolyFp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv(a: u64, p: u64) -> u64 {
    pow_mod_u64(a, p - 2, p)
}

pub fn from_signed(coeffs: &[i128], p: u64) -> PolyFp {
    trim(
        coeffs
            .iter()
            .map(|&c| c.rem_euclid(p as i128) as u64)
            .collect(),
    )
}

pub fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter()
        .rev()
        .fold(0, |acc, &c| (mul_mod_u64(acc, x, p) + c) % p)
}

fn sub(a: &[u64], b: &[u64], p: u64) -> PolyFp {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn mul(a: &[u64], b: &[u64], p: u64) -> PolyFp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod_u64(x, y, p)) % p;
        }
    }
    trim(out)
}

/// Quotient and remainder.
pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (PolyFp, PolyFp) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "polynomial division by zero");
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lead_inv = inv(*b.last().unwrap(), p);
    let mut q = vec![0u64; r.len() - b.len() + 1];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = mul_mod_u64(*r.last().unwrap(), lead_inv, p);
        q[shift] = c;
        for (i, &bc) in b.iter().enumerate() {
            let t = mul_mod_u64(c, bc, p);
            r[i + shift] = (r[i + shift] + p - t) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn monic(a: PolyFp, p: u64) -> PolyFp {
    match a.last() {
        Some(&l) if l != 1 => {
            let li = inv(l, p);
            a.into_iter().map(|c| mul_mod_u64(c, li, p)).collect()
        }
        _ => a,
    }
}

pub fn gcd(a: &[u64], b: &[u64], p: u64) -> PolyFp {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(a, p)
}

fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> PolyFp {
    let mut acc: PolyFp = vec![1];
    let mut b = divrem(base, m, p).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = divrem(&mul(&acc, &b, p), m, p).1;
        }
        b = divrem(&mul(&b, &b, p), m, p).1;
        e >>= 1;
    }
    acc
}

fn split_roots(g: &[u64], p: u64, out: &mut Vec<u64>) {
    let g = monic(trim(g.to_vec()), p);
    match g.len() {
        0 | 1 => {}
        2 => out.push((p - g[0]) % p),
        _ => {
            let mut delta = 0u64;
            loop {
                let h = powmod(&[delta, 1], (p - 1) / 2, &g, p);
                let h = sub(&h, &[1], p);
                let d = gcd(&g, &h, p);
                if d.len() > 1 && d.len() < g.len() {
                    let (q, _) = divrem(&g, &d, p);
                    split_roots(&d, p, out);
                    split_roots(&q, p, out);
                    return;
                }
                delta += 1;
            }
        }
    }
}

/// Distinct roots in `[0, p)`, sorted.
pub fn roots(a: &[u64], p: u64) -> Vec<u64> {
    let a = trim(a.to_vec());
    if a.len() <= 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    if p <= BRUTE_FORCE_LIMIT {
        out.extend((0..p).filter(|&x| eval(&a, x, p) == 0));
        return out;
    }
    let xp = powmod(&[0, 1], p, &a, p);
    let g = gcd(&a, &sub(&xp, &[0, 1], p), p);
    split_roots(&g, p, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}

/// Factorisation of a monic polynomial of degree at most 3 into monic
/// irreducibles with multiplicities, linear factors first (by root).
pub fn factor_small(a: &[u64], p: u64) -> Vec<(PolyFp, u32)> {
    let mut rest = monic(trim(a.to_vec()), p);
    assert!(rest.len() <= 4, "factor_small handles degree <= 3");
    let mut out = Vec::new();
    for r in roots(&rest, p) {
        let lin = vec![(p - r) % p, 1];
        let mut e = 0;
        loop {
            let (q, rem) = divrem(&rest, &lin, p);
            if !rem.is_empty() {
                break;
            }
            rest = q;
            e += 1;
        }
        out.push((lin, e));
    }
    if rest.len() > 1 {
        out.push((rest, 1));
    }
    out
}

pub fn mul_all(fs: &[(PolyFp, u32)], p: u64) -> PolyFp {
    let mut acc: PolyFp = vec![1];
    for (f, e) in fs {
        for _ in 0..*e {
            acc = mul(&acc, f, p);
        }
    }
    acc
}

pub fn is_zero_mod(a: &[u64]) -> bool {
    trim(a.to_vec()).is_empty()
}
