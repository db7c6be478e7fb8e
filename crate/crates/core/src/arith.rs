//! Integer and modular arithmetic shared by the rest of the crate.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A residue `value mod modulus`, always stored in the canonical range.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NaturalResidue {
    value: BigUint,
    modulus: BigUint,
}

impl NaturalResidue {
    pub fn new(value: &BigInt, modulus: &BigInt) -> Result<Self> {
        if *modulus < BigInt::from(2) {
            return Err(Error::InvalidModulus(modulus.to_string()));
        }
        let v = value.mod_floor(modulus);
        Ok(NaturalResidue {
            value: v.to_biguint().expect("mod_floor is non-negative"),
            modulus: modulus.to_biguint().expect("modulus is positive"),
        })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn modulus(&self) -> &BigUint {
        &self.modulus
    }
}

/// `4f = L^2 + 27 M^2` with `L ≡ 1 (mod 3)` and `M > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodParameters {
    pub l: i64,
    pub m: i64,
}

/// `base^exponent mod modulus` in `[0, modulus)`.
pub fn mod_pow(base: &BigInt, exponent: &BigUint, modulus: &BigInt) -> Result<NaturalResidue> {
    if *modulus < BigInt::from(2) {
        return Err(Error::InvalidModulus(modulus.to_string()));
    }
    let b = base.mod_floor(modulus);
    let r = b.modpow(&BigInt::from_biguint(Sign::Plus, exponent.clone()), modulus);
    NaturalResidue::new(&r, modulus)
}

#[inline]
pub fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

const TRIAL_LIMIT: u64 = 1_000_000;
const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic primality for every `u64`: trial division below 10^6,
/// Miller–Rabin with the first twelve prime witnesses above.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < TRIAL_LIMIT {
        if n.is_multiple_of(2) {
            return n == 2;
        }
        let mut d = 3u64;
        while d * d <= n {
            if n.is_multiple_of(d) {
                return false;
            }
            d += 2;
        }
        return true;
    }
    for &p in &MR_WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn is_prime_bigint(n: &BigInt) -> bool {
    match n.to_u64() {
        Some(v) => is_prime(v),
        None => false,
    }
}

/// Iterator over primes in increasing order starting at 2.
pub fn primes() -> impl Iterator<Item = u64> {
    (2u64..).filter(|&n| is_prime(n))
}

fn pollard_rho(n: u64) -> u64 {
    if n.is_multiple_of(2) {
        return 2;
    }
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

fn factor_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

/// Prime factorisation as `(prime, exponent)` pairs with increasing primes.
pub fn factorize(n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize expects a positive integer");
    let mut n = n;
    let mut primes = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
    }
    factor_into(n, &mut primes);
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Euler's criterion for cubes: `p^((f-1)/3) ≡ 1 (mod f)`.
pub fn is_cubic_residue(p: &BigInt, f: u64) -> Result<bool> {
    if !is_prime(f) || f % 3 != 1 {
        return Err(Error::InvalidConductor(
            f.to_string(),
            "must be a prime congruent to 1 mod 3".into(),
        ));
    }
    let fb = BigInt::from(f);
    if p.mod_floor(&fb).is_zero() {
        return Err(Error::NotCoprime(p.to_string(), f.to_string()));
    }
    let r = mod_pow(p, &BigUint::from((f - 1) / 3), &fb)?;
    Ok(r.value().is_one())
}

/// Whether the rational prime `q` splits completely in the cyclic cubic
/// field of conductor `f` (prime `f ≡ 1 mod 3`, or `f = 9`).
pub fn splits_completely(q: u64, f: u64) -> bool {
    if f == 9 {
        let r = q % 9;
        return r == 1 || r == 8;
    }
    if q.is_multiple_of(f) {
        return false;
    }
    pow_mod_u64(q % f, (f - 1) / 3, f) == 1
}

/// The classical `(L, M)` for a prime `f ≡ 1 (mod 3)`.
pub fn decompose_conductor(f: u64) -> Result<PeriodParameters> {
    if !is_prime(f) || f % 3 != 1 {
        return Err(Error::InvalidConductor(
            f.to_string(),
            "must be a prime congruent to 1 mod 3".into(),
        ));
    }
    let four_f = 4 * f as i128;
    let mut m: i128 = 1;
    while 27 * m * m <= four_f {
        let rest = four_f - 27 * m * m;
        let l = rest.sqrt();
        if l * l == rest {
            let l = if l.rem_euclid(3) == 1 { l } else { -l };
            return Ok(PeriodParameters {
                l: l as i64,
                m: m as i64,
            });
        }
        m += 1;
    }
    Err(Error::Internal(format!("no (L, M) representation for {f}")))
}

/// Integer square root if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Multiplicative order of `x` modulo `m` given the group order and its
/// factorisation.
pub fn order_from_factored(x: u128, group_order: u64, factors: &[(u64, u32)], m: u128) -> u64 {
    let mut order = group_order;
    for &(p, e) in factors {
        for _ in 0..e {
            if pow_mod_u128(x, (order / p) as u128, m) == 1 {
                order /= p;
            } else {
                break;
            }
        }
    }
    order
}

#[inline]
pub fn mul_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    if let Some(p) = a.checked_mul(b) {
        return p % m;
    }
    // slow path for moduli beyond 2^64
    let mut result = 0u128;
    let mut a = a % m;
    let mut b = b % m;
    while b > 0 {
        if b & 1 == 1 {
            result = add_mod_u128(result, a, m);
        }
        a = add_mod_u128(a, a, m);
        b >>= 1;
    }
    result
}

#[inline]
fn add_mod_u128(a: u128, b: u128, m: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

pub fn pow_mod_u128(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u128(acc, base, m);
        }
        base = mul_mod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

/// A primitive root modulo the prime `p`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let fs = factorize(p - 1);
    (2..p)
        .find(|&g| fs.iter().all(|&(l, _)| pow_mod_u64(g, (p - 1) / l, p) != 1))
        .expect("every prime has a primitive root")
}
