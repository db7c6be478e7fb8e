//! Maximal order of a cubic field by p-maximalisation.
//!
//! At each prime `p` with `p^2 | disc`, the equation order is first tested
//! with Dedekind's criterion. If it fails, the order is enlarged to its
//! p-radical's ring of multipliers until it stabilises.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{factorize, mul_mod_u64};
use crate::error::{Error, Result};
use crate::linalg::{self, hnf, inverse_q, qint, qzero, IMat3, IVec3, QMat3};
use crate::polyfp;

/// Multiply two power-basis coordinate vectors modulo `x^3 + c2 x^2 + c1 x + c0`.
pub(crate) fn mul_power(
    c: &[BigInt; 3],
    x: &[BigRational; 3],
    y: &[BigRational; 3],
) -> [BigRational; 3] {
    let mut z: [BigRational; 5] = [qzero(), qzero(), qzero(), qzero(), qzero()];
    for i in 0..3 {
        if x[i].is_zero() {
            continue;
        }
        for j in 0..3 {
            if y[j].is_zero() {
                continue;
            }
            z[i + j] += &x[i] * &y[j];
        }
    }
    let [c0, c1, c2] = c.clone().map(BigRational::from_integer);
    // a^3 = -c0 - c1 a - c2 a^2 ; a^4 = c2 c0 + (c2 c1 - c0) a + (c2^2 - c1) a^2
    let a3 = [-c0.clone(), -c1.clone(), -c2.clone()];
    let a4 = [&c2 * &c0, &c2 * &c1 - &c0, &c2 * &c2 - &c1];
    let [z0, z1, z2, z3, z4] = z;
    [
        z0 + &z3 * &a3[0] + &z4 * &a4[0],
        z1 + &z3 * &a3[1] + &z4 * &a4[1],
        z2 + &z3 * &a3[2] + &z4 * &a4[2],
    ]
}

/// A full-rank order given by a rational basis (rows in power coordinates).
#[derive(Debug, Clone)]
pub(crate) struct Order {
    pub basis: QMat3,
    pub inv: QMat3,
    pub mult: [[IVec3; 3]; 3],
}

impl Order {
    pub fn new(coeffs: &[BigInt; 3], basis: QMat3) -> Result<Order> {
        let basis = normalize(&basis);
        let inv =
            inverse_q(&basis).ok_or_else(|| Error::Internal("singular order basis".into()))?;
        let mut mult: [[IVec3; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                let prod = mul_power(coeffs, &basis[i], &basis[j]);
                let coords = linalg::vec_mul_q(&prod, &inv);
                let mut v: IVec3 = Default::default();
                for k in 0..3 {
                    if !coords[k].is_integer() {
                        return Err(Error::Internal(
                            "basis is not closed under multiplication".into(),
                        ));
                    }
                    v[k] = coords[k].to_integer();
                }
                mult[i][j] = v;
            }
        }
        Ok(Order { basis, inv, mult })
    }

    pub fn equation_order(coeffs: &[BigInt; 3]) -> Result<Order> {
        let id = [
            [qint(1), qzero(), qzero()],
            [qzero(), qint(1), qzero()],
            [qzero(), qzero(), qint(1)],
        ];
        Order::new(coeffs, id)
    }

    /// `|det(basis)|` relative to the power basis, as `1/index`.
    pub fn index(&self) -> BigInt {
        let d = linalg::det3(&self.basis).abs();
        (BigRational::one() / d).to_integer()
    }

    fn mul_mod_p(&self, x: &[u64; 3], y: &[u64; 3], p: u64) -> [u64; 3] {
        let mut out = [0u64; 3];
        for i in 0..3 {
            if x[i] == 0 {
                continue;
            }
            for j in 0..3 {
                if y[j] == 0 {
                    continue;
                }
                let xy = mul_mod_u64(x[i], y[j], p);
                for k in 0..3 {
                    let c = self.mult[i][j][k]
                        .mod_floor(&BigInt::from(p))
                        .to_u64()
                        .unwrap();
                    out[k] = (out[k] + mul_mod_u64(xy, c, p)) % p;
                }
            }
        }
        out
    }

    fn pow_mod_p(&self, x: &[u64; 3], mut e: u64, p: u64) -> [u64; 3] {
        let mut acc = [1u64 % p, 0, 0];
        let mut b = *x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_mod_p(&acc, &b, p);
            }
            b = self.mul_mod_p(&b, &b, p);
            e >>= 1;
        }
        acc
    }

    /// Product of two elements in order coordinates.
    fn mul_coords(&self, x: &IVec3, y: &IVec3) -> IVec3 {
        let mut out: IVec3 = Default::default();
        for i in 0..3 {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..3 {
                if y[j].is_zero() {
                    continue;
                }
                let xy = &x[i] * &y[j];
                for k in 0..3 {
                    out[k] += &xy * &self.mult[i][j][k];
                }
            }
        }
        out
    }

    /// One Round-2 step at `p`: returns the enlarged order, or `None` when
    /// this order is already p-maximal.
    fn enlarge_at(&self, coeffs: &[BigInt; 3], p: u64) -> Result<Option<Order>> {
        // p-radical: kernel of Frobenius^j on O/pO with p^j >= 3
        let mut e = p;
        while e < 3 {
            e *= p;
        }
        let unit_vecs = [[1u64, 0, 0], [0, 1, 0], [0, 0, 1]];
        let frob: Vec<Vec<u64>> = unit_vecs
            .iter()
            .map(|v| self.pow_mod_p(v, e, p).to_vec())
            .collect();
        let ker = linalg::left_kernel_mod_p(&frob, p);
        let pb = BigInt::from(p);
        let mut gens: Vec<IVec3> = ker
            .iter()
            .map(|v| [BigInt::from(v[0]), BigInt::from(v[1]), BigInt::from(v[2])])
            .collect();
        gens.extend(linalg::identity().map(|r| r.map(|x| x * &pb)));
        let rad = hnf(&gens).ok_or_else(|| Error::Internal("radical has wrong rank".into()))?;

        // U = { x in O : x * rad ⊆ p * rad }
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(3);
        for i in 0..3 {
            let mut row = Vec::with_capacity(9);
            let mut ei: IVec3 = Default::default();
            ei[i] = BigInt::one();
            for beta in rad.iter() {
                let prod = self.mul_coords(&ei, beta);
                let c = linalg::solve_lower_integral(&rad, &prod)
                    .ok_or_else(|| Error::Internal("radical is not an ideal".into()))?;
                row.extend(c.iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()));
            }
            rows.push(row);
        }
        let ker = linalg::left_kernel_mod_p(&rows, p);
        if ker.is_empty() {
            return Ok(None);
        }
        let mut gens: Vec<IVec3> = ker
            .iter()
            .map(|v| [BigInt::from(v[0]), BigInt::from(v[1]), BigInt::from(v[2])])
            .collect();
        gens.extend(linalg::identity().map(|r| r.map(|x| x * &pb)));
        let u =
            hnf(&gens).ok_or_else(|| Error::Internal("multiplier ring has wrong rank".into()))?;
        let pq = BigRational::from_integer(pb);
        let new_basis =
            linalg::mat_mul_q(&linalg::to_q(&u), &self.basis).map(|r| r.map(|x| x / &pq));
        Ok(Some(Order::new(coeffs, new_basis)?))
    }
}

/// Rescale to a common denominator, take the Hermite form and scale back.
pub(crate) fn normalize(basis: &QMat3) -> QMat3 {
    let den = basis
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let rows: Vec<IVec3> = basis
        .iter()
        .map(|r| {
            r.clone()
                .map(|q| (q * BigRational::from_integer(den.clone())).to_integer())
        })
        .collect();
    let h: IMat3 = hnf(&rows).expect("order basis has full rank");
    let dq = BigRational::from_integer(den);
    h.map(|r| r.map(|x| BigRational::from_integer(x) / &dq))
}

/// Dedekind's criterion: is `Z[a]` maximal at `p`?
pub(crate) fn dedekind_is_maximal(coeffs: &[BigInt; 3], p: u64) -> bool {
    let ints: [i128; 4] = [
        coeffs[0].mod_floor(&BigInt::from(p)).to_i128().unwrap(),
        coeffs[1].mod_floor(&BigInt::from(p)).to_i128().unwrap(),
        coeffs[2].mod_floor(&BigInt::from(p)).to_i128().unwrap(),
        1,
    ];
    let fbar = polyfp::from_signed(&ints, p);
    let factors = polyfp::factor_small(&fbar, p);
    let g: Vec<(polyfp::PolyFp, u32)> = factors.iter().map(|(f, _)| (f.clone(), 1)).collect();
    let h: Vec<(polyfp::PolyFp, u32)> = factors
        .iter()
        .filter(|(_, e)| *e > 1)
        .map(|(f, e)| (f.clone(), e - 1))
        .collect();
    if h.is_empty() {
        return true;
    }
    let gbar = polyfp::mul_all(&g, p);
    let hbar = polyfp::mul_all(&h, p);
    // lift g*h to Z with coefficients in [0, p) and form (f - g h) / p
    let gh = mul_int_poly(&gbar, &hbar);
    let full: Vec<BigInt> = vec![
        coeffs[0].clone(),
        coeffs[1].clone(),
        coeffs[2].clone(),
        BigInt::one(),
    ];
    let pb = BigInt::from(p);
    let diff: Vec<i128> = (0..4)
        .map(|i| {
            let d = &full[i] - gh.get(i).cloned().unwrap_or_default();
            debug_assert!((&d % &pb).is_zero());
            (d / &pb).mod_floor(&pb).to_i128().unwrap()
        })
        .collect();
    let fq = polyfp::from_signed(&diff, p);
    let common = polyfp::gcd(&gbar, &hbar, p);
    let d = polyfp::gcd(&common, &fq, p);
    d.len() <= 1
}

fn mul_int_poly(a: &[u64], b: &[u64]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += BigInt::from(x) * BigInt::from(y);
        }
    }
    out
}

/// Maximal order for a monic irreducible cubic with discriminant `disc`.
pub(crate) fn maximal_order(coeffs: &[BigInt; 3], disc: &BigInt) -> Result<Order> {
    let d = disc
        .abs()
        .to_u64()
        .ok_or_else(|| Error::Internal(format!("discriminant {disc} is too large to factor")))?;
    let mut order = Order::equation_order(coeffs)?;
    for (p, e) in factorize(d) {
        if e < 2 || dedekind_is_maximal(coeffs, p) {
            continue;
        }
        while let Some(bigger) = order.enlarge_at(coeffs, p)? {
            order = bigger;
        }
    }
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(c0: i64, c1: i64, c2: i64) -> [BigInt; 3] {
        [BigInt::from(c0), BigInt::from(c1), BigInt::from(c2)]
    }

    #[test]
    fn dedekind_on_known_cases() {
        // x^3 - 3x + 1 is 3-maximal (conductor 9, index 1)
        assert!(dedekind_is_maximal(&coeffs(1, -3, 0), 3));
        // x^3 - x^2 - 24x + 27 has index 3
        assert!(!dedekind_is_maximal(&coeffs(27, -24, -1), 3));
    }

    #[test]
    fn index_of_conductor_73_polynomial() {
        let c = coeffs(27, -24, -1);
        let disc = BigInt::from(5329 * 9);
        let o = maximal_order(&c, &disc).unwrap();
        assert_eq!(o.index(), BigInt::from(3));
    }

    #[test]
    fn index_of_pure_cubic() {
        // x^3 - 10 with 10 ≡ 1 mod 9: (1 + a + a^2)/3 is integral, index 3
        let c = coeffs(-10, 0, 0);
        let o = maximal_order(&c, &BigInt::from(-2700)).unwrap();
        assert_eq!(o.index(), BigInt::from(3));
    }
}
