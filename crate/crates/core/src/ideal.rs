//! Integral ideals as Hermite-form lattices, prime decomposition and
//! residue rings modulo powers of degree-one primes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{factorize, is_prime, mul_mod_u128, order_from_factored, pow_mod_u128};
use crate::error::{Error, Result};
use crate::field::{CubicField, FieldElement};
use crate::linalg::{self, hnf, ivec, IMat3, IVec3};
use crate::polyfp;

/// An integral ideal, stored as the lower-triangular Hermite basis of its
/// lattice over the integral basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ideal {
    basis: IMat3,
}

impl Ideal {
    /// The unit ideal `(1)`.
    pub fn unit() -> Ideal {
        Ideal {
            basis: linalg::identity(),
        }
    }

    /// Ideal generated (as an `O_K`-module) by integral elements.
    pub fn from_generators(k: &CubicField, gens: &[IVec3]) -> Result<Ideal> {
        let rows: Vec<IVec3> = gens
            .iter()
            .flat_map(|g| k.mult_matrix_integral(g))
            .collect();
        let basis = hnf(&rows).ok_or_else(|| Error::Internal("zero ideal".into()))?;
        Ok(Ideal { basis })
    }

    pub fn principal(k: &CubicField, x: &IVec3) -> Result<Ideal> {
        Ideal::from_generators(k, std::slice::from_ref(x))
    }

    pub fn from_element(k: &CubicField, x: &FieldElement) -> Result<Ideal> {
        let v = k
            .to_integral(x)
            .ok_or_else(|| Error::NotIntegral(x.to_string()))?;
        Ideal::principal(k, &v)
    }

    /// `(q, alpha)`.
    pub fn two_element(k: &CubicField, q: &BigInt, alpha: &FieldElement) -> Result<Ideal> {
        let a = k
            .to_integral(alpha)
            .ok_or_else(|| Error::NotIntegral(alpha.to_string()))?;
        Ideal::from_generators(k, &[[q.clone(), BigInt::zero(), BigInt::zero()], a])
    }

    pub fn basis(&self) -> &IMat3 {
        &self.basis
    }

    /// Index of the lattice in `O_K`.
    pub fn norm(&self) -> BigInt {
        &self.basis[0][0] * &self.basis[1][1] * &self.basis[2][2]
    }

    pub fn contains_integral(&self, x: &IVec3) -> bool {
        linalg::solve_lower_integral(&self.basis, x).is_some()
    }

    pub fn contains(&self, k: &CubicField, x: &FieldElement) -> Result<bool> {
        let v = k
            .to_integral(x)
            .ok_or_else(|| Error::NotIntegral(x.to_string()))?;
        Ok(self.contains_integral(&v))
    }

    pub fn mul(&self, k: &CubicField, other: &Ideal) -> Ideal {
        let mut rows = Vec::with_capacity(9);
        for x in &self.basis {
            for y in &other.basis {
                rows.push(k.mul_integral(x, y));
            }
        }
        Ideal {
            basis: hnf(&rows).expect("product of non-zero ideals is non-zero"),
        }
    }

    pub fn pow(&self, k: &CubicField, e: u32) -> Ideal {
        let mut acc = Ideal::unit();
        for _ in 0..e {
            acc = acc.mul(k, self);
        }
        acc
    }

    /// Image under the generating automorphism.
    pub fn conjugate(&self, k: &CubicField) -> Ideal {
        let rows: Vec<IVec3> = self.basis.iter().map(|r| k.automorphism(r)).collect();
        Ideal {
            basis: hnf(&rows).expect("automorphism preserves rank"),
        }
    }

    /// Canonical representative of `x` modulo the ideal.
    pub fn reduce(&self, x: &IVec3) -> IVec3 {
        linalg::reduce_mod_hnf(&self.basis, x)
    }
}

/// How a rational prime decomposes in a cyclic cubic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

/// A prime ideal with its two-element representation `(p, alpha)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeIdeal {
    ideal: Ideal,
    p: u64,
    residue_degree: u32,
    ramification: u32,
    /// Second generator in integral coordinates.
    generator: IVec3,
}

impl PrimeIdeal {
    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn residue_char(&self) -> u64 {
        self.p
    }

    pub fn residue_degree(&self) -> u32 {
        self.residue_degree
    }

    pub fn ramification(&self) -> u32 {
        self.ramification
    }

    pub fn norm(&self) -> BigInt {
        self.ideal.norm()
    }

    pub fn generator_integral(&self) -> &IVec3 {
        &self.generator
    }

    pub fn two_element(&self, k: &CubicField) -> (BigInt, FieldElement) {
        (BigInt::from(self.p), k.from_integral(&self.generator))
    }

    /// Two-element `(p, alpha)` display.
    pub fn display<'a>(&'a self, k: &'a CubicField) -> impl fmt::Display + 'a {
        let (p, a) = self.two_element(k);
        crate::parse::format_ideal(&p, &a)
    }

    /// Build from a two-element form, checking that the ideal has prime norm.
    pub fn from_two_element(
        k: &CubicField,
        q: &BigInt,
        alpha: &FieldElement,
    ) -> Result<PrimeIdeal> {
        let ideal = Ideal::two_element(k, q, alpha)?;
        let generator = k
            .to_integral(alpha)
            .ok_or_else(|| Error::NotIntegral(alpha.to_string()))?;
        PrimeIdeal::from_ideal_of_prime_norm(k, ideal, generator)
    }

    /// A prime ideal from an ideal whose norm is a rational prime (such an
    /// ideal is automatically prime of degree one).
    pub fn from_ideal_of_prime_norm(
        k: &CubicField,
        ideal: Ideal,
        generator: IVec3,
    ) -> Result<PrimeIdeal> {
        let n = ideal.norm();
        let p = n
            .to_u64()
            .filter(|&p| is_prime(p))
            .ok_or_else(|| Error::UnsupportedModulus(format!("ideal norm {n} is not a prime")))?;
        let ramification = if k.discriminant().is_multiple_of(&BigInt::from(p)) {
            3
        } else {
            1
        };
        Ok(PrimeIdeal {
            ideal,
            p,
            residue_degree: 1,
            ramification,
            generator,
        })
    }
}

/// Characteristic polynomial of an integer matrix, little-endian.
fn charpoly(m: &IMat3) -> [BigInt; 4] {
    let tr = &m[0][0] + &m[1][1] + &m[2][2];
    let minor = |i: usize, j: usize| &m[i][i] * &m[j][j] - &m[i][j] * &m[j][i];
    let s2 = minor(0, 1) + minor(0, 2) + minor(1, 2);
    let det = linalg::det3(m);
    [-det, s2, -tr, BigInt::one()]
}

fn mod_u64(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p))
        .to_u64()
        .expect("residue fits")
}

/// All ring homomorphisms `O_K -> F_p`, as images of the integral basis,
/// sorted by their Hermite kernels.
fn residue_maps(k: &CubicField, p: u64) -> Vec<[u64; 3]> {
    let e1 = k.mult_matrix_integral(&ivec(0, 1, 0));
    let e2 = k.mult_matrix_integral(&ivec(0, 0, 1));
    let to_fp = |c: [BigInt; 4]| -> polyfp::PolyFp {
        let v: Vec<i128> = c.iter().map(|x| mod_u64(x, p) as i128).collect();
        polyfp::from_signed(&v, p)
    };
    let r1 = polyfp::roots(&to_fp(charpoly(&e1)), p);
    let r2 = polyfp::roots(&to_fp(charpoly(&e2)), p);
    let mult = k.structure_constants();
    let m: Vec<Vec<Vec<u64>>> = (0..3)
        .map(|i| {
            (0..3)
                .map(|j| (0..3).map(|l| mod_u64(&mult[i][j][l], p)).collect())
                .collect()
        })
        .collect();
    let pm = p as u128;
    let mut out = Vec::new();
    for &t1 in &r1 {
        for &t2 in &r2 {
            let t = [1 % p, t1, t2];
            let ok = (0..3).all(|i| {
                (0..3).all(|j| {
                    let lhs = (t[i] as u128 * t[j] as u128) % pm;
                    let rhs = (0..3).fold(0u128, |acc, l| {
                        (acc + m[i][j][l] as u128 * t[l] as u128) % pm
                    });
                    lhs == rhs
                })
            });
            if ok {
                out.push(t);
            }
        }
    }
    // kernel rows are ((p - t1) mod p, 1, 0), ((p - t2) mod p, 0, 1)
    out.sort_by_key(|t| ((p - t[1]) % p, (p - t[2]) % p));
    out
}

fn kernel_ideal(p: u64, t: &[u64; 3]) -> Ideal {
    let neg = |x: u64| BigInt::from((p - x % p) % p);
    Ideal {
        basis: [
            [BigInt::from(p), BigInt::zero(), BigInt::zero()],
            [neg(t[1]), BigInt::one(), BigInt::zero()],
            [neg(t[2]), BigInt::zero(), BigInt::one()],
        ],
    }
}

/// A second generator for a degree-one prime `𝔭 | p`: an element of `𝔭`
/// whose norm is divisible by `p` exactly once.
fn second_generator(k: &CubicField, p: u64, t: &[u64; 3], ideal: &Ideal) -> Result<IVec3> {
    let pb = BigInt::from(p);
    let p2 = &pb * &pb;
    let good = |v: &IVec3| -> bool {
        !linalg::is_zero_vec(v)
            && ideal.contains_integral(v)
            && !k.norm_integral(v).is_multiple_of(&p2)
            && Ideal::from_generators(
                k,
                &[[pb.clone(), BigInt::zero(), BigInt::zero()], v.clone()],
            )
            .map(|i| &i == ideal)
            .unwrap_or(false)
    };
    // prefer a - r + j p in power-basis form, the classical Kummer generator
    if let Some(a) = k.to_integral(&FieldElement::generator()) {
        let r = (0..3).fold(0u128, |acc, i| {
            (acc + mod_u64(&a[i], p) as u128 * t[i] as u128) % p as u128
        }) as i64;
        let r_centered = if r > (p / 2) as i64 { r - p as i64 } else { r };
        for j in [0i64, 1, -1] {
            let shift = BigInt::from(r_centered) + BigInt::from(j) * &pb;
            let mut v = a.clone();
            v[0] -= &shift;
            if good(&v) {
                return Ok(v);
            }
        }
    }
    let centered = |x: BigInt| -> BigInt {
        let r = x.mod_floor(&pb);
        if &r * 2 > pb {
            r - &pb
        } else {
            r
        }
    };
    for radius in 1i64..=8 {
        for c1 in -radius..=radius {
            for c2 in -radius..=radius {
                if c1.abs().max(c2.abs()) != radius {
                    continue;
                }
                let lin =
                    BigInt::from(c1) * BigInt::from(t[1]) + BigInt::from(c2) * BigInt::from(t[2]);
                let c0 = centered(-lin);
                for j in [0i64, 1, -1] {
                    let v = [
                        &c0 + BigInt::from(j) * &pb,
                        BigInt::from(c1),
                        BigInt::from(c2),
                    ];
                    if good(&v) {
                        return Ok(v);
                    }
                }
            }
        }
    }
    Err(Error::Internal(format!(
        "no two-element form found for a prime above {p}"
    )))
}

/// Splitting type of `p` and the primes above it. Split primes are returned
/// in lexicographic order of their Hermite bases.
pub fn decompose_prime(k: &CubicField, p: u64) -> Result<(Splitting, Vec<PrimeIdeal>)> {
    if !is_prime(p) {
        return Err(Error::InvalidModulus(format!("{p} is not prime")));
    }
    let maps = residue_maps(k, p);
    match maps.len() {
        0 => {
            let pb = BigInt::from(p);
            let ideal = Ideal {
                basis: linalg::identity().map(|r| r.map(|x| x * &pb)),
            };
            Ok((
                Splitting::Inert,
                vec![PrimeIdeal {
                    ideal,
                    p,
                    residue_degree: 3,
                    ramification: 1,
                    generator: ivec(0, 0, 0),
                }],
            ))
        }
        1 | 3 => {
            let ramified = maps.len() == 1;
            let mut out = Vec::with_capacity(maps.len());
            for t in &maps {
                let ideal = kernel_ideal(p, t);
                let generator = second_generator(k, p, t, &ideal)?;
                out.push(PrimeIdeal {
                    ideal,
                    p,
                    residue_degree: 1,
                    ramification: if ramified { 3 } else { 1 },
                    generator,
                });
            }
            let kind = if ramified {
                Splitting::Ramified
            } else {
                Splitting::Split
            };
            Ok((kind, out))
        }
        n => Err(Error::Internal(format!(
            "{p} has {n} residue maps, impossible in a cyclic cubic field"
        ))),
    }
}

/// `O_K / 𝔮^k` for a degree-one unramified prime `𝔮`, identified with
/// `Z / q^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueRing {
    modulus_ideal: Ideal,
    q: u64,
    exponent: u32,
    modulus: u128,
    /// Images of the integral basis in `Z / q^k`.
    images: [u128; 3],
}

impl ResidueRing {
    pub fn new(k: &CubicField, prime: &PrimeIdeal, exponent: u32) -> Result<ResidueRing> {
        if prime.residue_degree != 1 || prime.ramification != 1 {
            return Err(Error::UnsupportedModulus(format!(
                "residue rings need a degree-one unramified prime (got degree {}, ramification {} above {})",
                prime.residue_degree, prime.ramification, prime.p
            )));
        }
        if exponent == 0 {
            return Err(Error::UnsupportedModulus(
                "exponent must be positive".into(),
            ));
        }
        let q = prime.p;
        let modulus = (q as u128)
            .checked_pow(exponent)
            .filter(|m| *m < 1u128 << 63)
            .ok_or_else(|| Error::UnsupportedModulus(format!("{q}^{exponent} is too large")))?;
        let ideal = prime.ideal.pow(k, exponent);
        let b = ideal.basis();
        if b[0][0] != BigInt::from(modulus) || !b[1][1].is_one() || !b[2][2].is_one() {
            return Err(Error::Internal(format!(
                "unexpected Hermite shape for a power of a prime above {q}"
            )));
        }
        let m = BigInt::from(modulus);
        let img = |x: &BigInt| (-x).mod_floor(&m).to_u128().expect("fits");
        Ok(ResidueRing {
            images: [1 % modulus, img(&b[1][0]), img(&b[2][0])],
            modulus_ideal: ideal,
            q,
            exponent,
            modulus,
        })
    }

    pub fn modulus_ideal(&self) -> &Ideal {
        &self.modulus_ideal
    }

    pub fn prime(&self) -> u64 {
        self.q
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// `q^k`, the number of residue classes.
    pub fn size(&self) -> u128 {
        self.modulus
    }

    /// `q^(k-1) (q - 1)`.
    pub fn unit_group_order(&self) -> u64 {
        (self.modulus / self.q as u128 * (self.q as u128 - 1)) as u64
    }

    pub fn reduce_integral(&self, x: &IVec3) -> u128 {
        let m = BigInt::from(self.modulus);
        let mut acc = 0u128;
        for i in 0..3 {
            let c = x[i].mod_floor(&m).to_u128().expect("fits");
            acc = (acc + mul_mod_u128(c, self.images[i], self.modulus)) % self.modulus;
        }
        acc
    }

    /// Canonical representative in `[0, q^k)`.
    pub fn reduce(&self, k: &CubicField, x: &FieldElement) -> Result<u128> {
        let v = k
            .to_integral(x)
            .ok_or_else(|| Error::NotIntegral(x.to_string()))?;
        Ok(self.reduce_integral(&v))
    }

    pub fn mul(&self, a: u128, b: u128) -> u128 {
        mul_mod_u128(a, b, self.modulus)
    }

    pub fn pow(&self, a: u128, e: u128) -> u128 {
        pow_mod_u128(a, e, self.modulus)
    }

    pub fn is_unit(&self, r: u128) -> bool {
        !r.is_multiple_of(self.q as u128)
    }

    fn group_factors(&self) -> Vec<(u64, u32)> {
        let mut f = factorize(self.q - 1);
        if self.exponent > 1 {
            f.push((self.q, self.exponent - 1));
            f.sort_unstable();
        }
        f
    }

    /// Multiplicative order of a residue, via the factorisation of the
    /// unit-group order.
    pub fn order_of_residue(&self, r: u128) -> Result<u64> {
        if !self.is_unit(r) {
            return Err(Error::NotAUnit);
        }
        Ok(order_from_factored(
            r,
            self.unit_group_order(),
            &self.group_factors(),
            self.modulus,
        ))
    }

    pub fn multiplicative_order(&self, k: &CubicField, x: &FieldElement) -> Result<u64> {
        self.order_of_residue(self.reduce(k, x)?)
    }

    /// Order of the subgroup generated by the given unit residues.
    pub fn subgroup_order(&self, gens: &[u128]) -> Result<u64> {
        // the unit group is cyclic (q odd), so the subgroup order is the lcm
        let mut acc = 1u64;
        for &g in gens {
            acc = acc.lcm(&self.order_of_residue(g)?);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CubicPolynomial;
    use crate::parse::parse_element;

    fn k73() -> CubicField {
        CubicField::build(&CubicPolynomial::new(-1, -24, 27)).unwrap()
    }

    #[test]
    fn three_splits_in_73() {
        let k = k73();
        let (kind, ps) = decompose_prime(&k, 3).unwrap();
        assert_eq!(kind, Splitting::Split);
        assert_eq!(ps.len(), 3);
        let prod = ps
            .iter()
            .fold(Ideal::unit(), |acc, p| acc.mul(&k, p.ideal()));
        let three = Ideal::principal(&k, &ivec(3, 0, 0)).unwrap();
        assert_eq!(prod, three);
        // the displayed factors generate the three primes
        let mut worked: Vec<Ideal> = ["1/3a^2+2/3a-11", "-1/3a^2+1/3a+6", "2/3a^2+1/3a-17"]
            .iter()
            .map(|s| Ideal::from_element(&k, &parse_element(s).unwrap()).unwrap())
            .collect();
        worked.sort();
        let mut ours: Vec<Ideal> = ps.iter().map(|p| p.ideal().clone()).collect();
        ours.sort();
        assert_eq!(worked, ours);
        for p in &ps {
            let (q, a) = p.two_element(&k);
            assert_eq!(&Ideal::two_element(&k, &q, &a).unwrap(), p.ideal());
        }
    }

    #[test]
    fn conductor_ramifies_and_inert_primes() {
        let k = k73();
        let (kind, ps) = decompose_prime(&k, 73).unwrap();
        assert_eq!(kind, Splitting::Ramified);
        assert_eq!(ps[0].ramification(), 3);
        let cube = ps[0].ideal().pow(&k, 3);
        assert_eq!(cube, Ideal::principal(&k, &ivec(73, 0, 0)).unwrap());
        // 2 is not a cube mod 73
        let (kind, ps) = decompose_prime(&k, 2).unwrap();
        assert_eq!(kind, Splitting::Inert);
        assert_eq!(ps[0].norm(), BigInt::from(8));
    }

    #[test]
    fn residue_ring_matches_worked_example() {
        let k = k73();
        let eps1 = parse_element("2/3a^2-14/3a+7").unwrap();
        let pi = Ideal::from_element(&k, &parse_element("1/3a^2+2/3a-11").unwrap()).unwrap();
        let (_, ps) = decompose_prime(&k, 3).unwrap();
        let p = ps.iter().find(|p| p.ideal() == &pi).unwrap();
        let r1 = ResidueRing::new(&k, p, 1).unwrap();
        let r2 = ResidueRing::new(&k, p, 2).unwrap();
        assert_eq!(r1.reduce(&k, &eps1).unwrap(), 2);
        let sq = k.mul(&eps1, &eps1);
        assert_eq!(r2.reduce(&k, &sq).unwrap(), 7);
        assert_eq!(r1.multiplicative_order(&k, &eps1).unwrap(), 2);
        assert_eq!(r2.multiplicative_order(&k, &eps1).unwrap(), 6);
        assert_eq!(r2.unit_group_order(), 6);
        assert_eq!(r2.reduce(&k, &FieldElement::zero()).unwrap(), 0);
        assert!(pi.contains(&k, &eps1.add(&FieldElement::one())).unwrap());
        assert_eq!(r2.order_of_residue(3), Err(Error::NotAUnit));
    }

    #[test]
    fn residue_ring_rejects_inert_and_ramified() {
        let k = k73();
        let (_, inert) = decompose_prime(&k, 2).unwrap();
        assert!(matches!(
            ResidueRing::new(&k, &inert[0], 1),
            Err(Error::UnsupportedModulus(_))
        ));
        let (_, ram) = decompose_prime(&k, 73).unwrap();
        assert!(matches!(
            ResidueRing::new(&k, &ram[0], 2),
            Err(Error::UnsupportedModulus(_))
        ));
    }

    #[test]
    fn conjugation_permutes_primes() {
        let k = k73();
        let (_, ps) = decompose_prime(&k, 3).unwrap();
        let c = ps[0].ideal().conjugate(&k);
        assert_ne!(&c, ps[0].ideal());
        assert!(ps.iter().any(|p| p.ideal() == &c));
    }
}
