//! Binary fixed-point reals backed by `BigInt`.
//!
//! A [`Real`] stores `m · 2^-bits`. All operands of a binary operation must
//! share the same `bits`; every operation truncates to that precision, so
//! each result carries an absolute error of at most a few units in the last
//! place.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct Real {
    m: BigInt,
    bits: u32,
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({:e}, {} bits)", self.to_f64(), self.bits)
    }
}

/// Bits needed for `digits` decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32
}

impl Real {
    pub fn zero(bits: u32) -> Self {
        Real {
            m: BigInt::zero(),
            bits,
        }
    }

    pub fn from_int(n: &BigInt, bits: u32) -> Self {
        Real { m: n << bits, bits }
    }

    pub fn from_i64(n: i64, bits: u32) -> Self {
        Self::from_int(&BigInt::from(n), bits)
    }

    pub fn from_rational(q: &BigRational, bits: u32) -> Self {
        let num: BigInt = q.numer() << bits;
        Real {
            m: num / q.denom(),
            bits,
        }
    }

    pub fn from_f64(x: f64, bits: u32) -> Self {
        assert!(x.is_finite());
        let q = BigRational::from_float(x).expect("finite float");
        Self::from_rational(&q, bits)
    }

    /// Raw mantissa and scale.
    pub fn from_parts(m: BigInt, bits: u32) -> Self {
        Real { m, bits }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn ulp(&self) -> f64 {
        (-(self.bits as f64)).exp2()
    }

    pub fn with_bits(&self, bits: u32) -> Self {
        let m = if bits >= self.bits {
            &self.m << (bits - self.bits)
        } else {
            &self.m >> (self.bits - bits)
        };
        Real { m, bits }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.m.clone(), BigInt::one() << self.bits)
    }

    pub fn to_f64(&self) -> f64 {
        let len = self.m.bits() as i64;
        let shift = (len - 64).max(0);
        let top = (&self.m >> shift as usize).to_f64().unwrap_or(0.0);
        top * ((shift - self.bits as i64) as f64).exp2()
    }

    pub fn is_negative(&self) -> bool {
        self.m.is_negative()
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn abs(&self) -> Self {
        Real {
            m: self.m.abs(),
            bits: self.bits,
        }
    }

    pub fn neg(&self) -> Self {
        Real {
            m: -&self.m,
            bits: self.bits,
        }
    }

    pub fn add(&self, o: &Real) -> Self {
        debug_assert_eq!(self.bits, o.bits);
        Real {
            m: &self.m + &o.m,
            bits: self.bits,
        }
    }

    pub fn sub(&self, o: &Real) -> Self {
        debug_assert_eq!(self.bits, o.bits);
        Real {
            m: &self.m - &o.m,
            bits: self.bits,
        }
    }

    pub fn mul(&self, o: &Real) -> Self {
        debug_assert_eq!(self.bits, o.bits);
        Real {
            m: (&self.m * &o.m) >> self.bits,
            bits: self.bits,
        }
    }

    pub fn mul_int(&self, n: &BigInt) -> Self {
        Real {
            m: &self.m * n,
            bits: self.bits,
        }
    }

    pub fn div(&self, o: &Real) -> Self {
        debug_assert_eq!(self.bits, o.bits);
        assert!(!o.m.is_zero(), "division by zero");
        Real {
            m: (&self.m << self.bits) / &o.m,
            bits: self.bits,
        }
    }

    /// Nearest integer.
    pub fn round(&self) -> BigInt {
        let half = BigInt::one() << (self.bits.max(1) - 1);
        if self.bits == 0 {
            return self.m.clone();
        }
        let shifted = &self.m + half;
        // arithmetic shift floors for negatives
        shifted >> self.bits
    }

    /// Decimal string rounded to `digits` places after the point.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scaled = Real {
            m: &self.m * BigInt::from(10u32).pow(digits),
            bits: self.bits,
        }
        .round();
        let neg = scaled.is_negative();
        let mut s = scaled.abs().to_string();
        let d = digits as usize;
        if s.len() <= d {
            s = "0".repeat(d + 1 - s.len()) + &s;
        }
        if d > 0 {
            s.insert(s.len() - d, '.');
        }
        if neg {
            s.insert(0, '-');
        }
        s
    }

    /// Distance to the nearest integer, as f64.
    pub fn frac_distance(&self) -> f64 {
        let r = Real::from_int(&self.round(), self.bits);
        self.sub(&r).abs().to_f64()
    }

    /// Natural logarithm of a positive value.
    pub fn ln(&self) -> Real {
        assert!(self.m.is_positive(), "ln of non-positive value");
        let guard = 32;
        let w = self.bits + guard;
        let x = self.with_bits(w);
        // x = y * 2^k with y in [1, 2)
        let k = x.m.bits() as i64 - 1 - w as i64;
        let y = if k >= 0 {
            Real {
                m: &x.m >> k as usize,
                bits: w,
            }
        } else {
            Real {
                m: &x.m << (-k) as usize,
                bits: w,
            }
        };
        let one = Real::from_i64(1, w);
        let z = y.sub(&one).div(&y.add(&one));
        let ln_y = atanh_series(&z).mul_int(&BigInt::from(2));
        let ln2 = ln2(w);
        ln_y.add(&ln2.mul_int(&BigInt::from(k)))
            .with_bits(self.bits)
    }
}

fn atanh_series(z: &Real) -> Real {
    let bits = z.bits;
    let z2 = z.mul(z);
    let mut term = z.clone();
    let mut sum = z.clone();
    let mut k = 1u64;
    loop {
        term = term.mul(&z2);
        if term.is_zero() {
            break;
        }
        k += 2;
        let t = Real {
            m: &term.m / BigInt::from(k),
            bits,
        };
        if t.is_zero() {
            break;
        }
        sum = sum.add(&t);
    }
    sum
}

/// `ln 2 = 2 atanh(1/3)`.
pub fn ln2(bits: u32) -> Real {
    let third = Real::from_rational(&BigRational::new(BigInt::one(), BigInt::from(3)), bits + 16);
    atanh_series(&third)
        .mul_int(&BigInt::from(2))
        .with_bits(bits)
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Real {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.bits == other.bits {
            self.m.cmp(&other.m)
        } else {
            let b = self.bits.max(other.bits);
            self.with_bits(b).m.cmp(&other.with_bits(b).m)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rendering() {
        assert_eq!(Real::from_f64(2.5, 64).to_decimal(3), "2.500");
        assert_eq!(Real::from_f64(-0.0625, 64).to_decimal(2), "-0.06");
        assert_eq!(Real::from_f64(0.001, 64).to_decimal(0), "0");
        let third = Real::from_rational(&BigRational::new(1.into(), 3.into()), 200);
        assert_eq!(third.to_decimal(30), format!("0.{}", "3".repeat(30)));
    }

    #[test]
    fn ln_matches_f64() {
        for x in [0.001, 0.5, 1.0, 2.0, 3.0, 10.0, 12345.678] {
            let r = Real::from_f64(x, 200).ln().to_f64();
            assert!((r - f64::ln(x)).abs() < 1e-14, "{x}: {r}");
        }
    }

    #[test]
    fn ln2_high_precision() {
        // 0.693147180559945309417232121458176568075500134360255254120680...
        let digits = "693147180559945309417232121458176568075500134360255254120680";
        let r = ln2(256);
        let scaled: BigInt = (r.mantissa() * BigInt::from(10).pow(60u32)) >> 256;
        assert_eq!(scaled.to_string(), digits);
    }

    #[test]
    fn log_product_rule() {
        let bits = 300;
        let a = Real::from_f64(3.75, bits);
        let b = Real::from_f64(1234.5, bits);
        let lhs = a.mul(&b).ln();
        let rhs = a.ln().add(&b.ln());
        assert!(lhs.sub(&rhs).abs().to_f64() < 1e-85);
    }

    #[test]
    fn rounding() {
        assert_eq!(Real::from_f64(2.5, 64).round(), BigInt::from(3));
        assert_eq!(Real::from_f64(-2.4, 64).round(), BigInt::from(-2));
        assert_eq!(Real::from_f64(-2.6, 64).round(), BigInt::from(-3));
        assert!(Real::from_f64(7.25, 64).frac_distance() - 0.25 < 1e-15);
    }
}
