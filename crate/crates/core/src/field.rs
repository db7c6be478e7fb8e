//! Cyclic cubic fields: construction, maximal order, element arithmetic
//! and real embeddings.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{decompose_conductor, exact_sqrt, is_prime};
use crate::error::{Error, Result};
use crate::hp::{bits_for_digits, Real};
use crate::linalg::{self, det3, qint, qzero, IMat3, IVec3, QMat3};
use crate::order::{self, mul_power};

/// Working precision (bits) of the cached roots and embedding matrices.
pub const HP_BITS: u32 = 512;

/// Monic cubic `x^3 + c2 x^2 + c1 x + c0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CubicPolynomial {
    pub c2: BigInt,
    pub c1: BigInt,
    pub c0: BigInt,
}

impl CubicPolynomial {
    pub fn new(c2: i64, c1: i64, c0: i64) -> Self {
        CubicPolynomial {
            c2: c2.into(),
            c1: c1.into(),
            c0: c0.into(),
        }
    }

    pub fn from_big(c2: BigInt, c1: BigInt, c0: BigInt) -> Self {
        CubicPolynomial { c2, c1, c0 }
    }

    /// Coefficients from the constant term up: `[c0, c1, c2]`.
    pub fn low_coeffs(&self) -> [BigInt; 3] {
        [self.c0.clone(), self.c1.clone(), self.c2.clone()]
    }

    pub fn discriminant(&self) -> BigInt {
        let (b, c, d) = (&self.c2, &self.c1, &self.c0);
        let b2 = b * b;
        let c2 = c * c;
        &b2 * &c2
            - BigInt::from(4) * &c2 * c
            - BigInt::from(4) * &b2 * b * d
            - BigInt::from(27) * d * d
            + BigInt::from(18) * b * c * d
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        ((x + &self.c2) * x + &self.c1) * x + &self.c0
    }

    pub fn eval_q(&self, x: &BigRational) -> BigRational {
        let c = |v: &BigInt| BigRational::from_integer(v.clone());
        ((x + c(&self.c2)) * x + c(&self.c1)) * x + c(&self.c0)
    }

    /// `2^(3b) · p(m / 2^b)`, whose sign is the sign of `p` at that point.
    fn eval_dyadic(&self, m: &BigInt, b: u32) -> BigInt {
        let s = BigInt::one() << b;
        let s2 = &s * &s;
        m * m * m + &self.c2 * m * m * &s + &self.c1 * m * &s2 + &self.c0 * &s2 * &s
    }

    fn eval_real(&self, x: &Real) -> Real {
        let bits = x.bits();
        let c = |v: &BigInt| Real::from_int(v, bits);
        x.add(&c(&self.c2))
            .mul(x)
            .add(&c(&self.c1))
            .mul(x)
            .add(&c(&self.c0))
    }

    fn deriv_real(&self, x: &Real) -> Real {
        let bits = x.bits();
        let three_x = x.mul_int(&BigInt::from(3));
        let two_c2 = Real::from_int(&(&self.c2 * 2), bits);
        three_x
            .add(&two_c2)
            .mul(x)
            .add(&Real::from_int(&self.c1, bits))
    }

    /// Whether the polynomial has an integer (equivalently, rational) root.
    pub fn has_integer_root(&self) -> bool {
        if self.c0.is_zero() {
            return true;
        }
        let bound = BigInt::one() + self.c2.abs().max(self.c1.abs()).max(self.c0.abs());
        // every real root lies in (-bound, bound); bisect the real roots
        // numerically and test the neighbouring integers exactly
        let approx = real_root_approximations(self);
        for r in approx {
            let base = BigInt::from(r.floor() as i128);
            for d in -2..=3 {
                let x: BigInt = &base + d;
                if x.abs() <= bound && self.eval_int(&x).is_zero() {
                    return true;
                }
            }
        }
        false
    }

    /// Real roots in increasing order at `bits` of precision, verified by
    /// exact sign changes. Requires three distinct real roots.
    pub fn real_roots(&self, bits: u32) -> Result<[Real; 3]> {
        if !self.discriminant().is_positive() {
            return Err(Error::Internal(format!(
                "{self} does not have three distinct real roots"
            )));
        }
        let w = bits + 32;
        let intervals = self.isolating_intervals(w);
        let mut out: Vec<Real> = Vec::with_capacity(3);
        for (lo, hi) in intervals {
            let r = self.refine_root(lo, hi, w)?;
            out.push(r.with_bits(bits));
        }
        Ok([out[0].clone(), out[1].clone(), out[2].clone()])
    }

    fn isolating_intervals(&self, w: u32) -> Vec<(Real, Real)> {
        // critical points of p: (-c2 ± sqrt(c2^2 - 3 c1)) / 3
        let disc_d: BigInt = &self.c2 * &self.c2 - BigInt::from(3) * &self.c1;
        let sq = Real::from_parts((disc_d << (2 * w)).sqrt(), w);
        let mc2 = Real::from_int(&-&self.c2, w);
        let three = Real::from_i64(3, w);
        let xm = mc2.sub(&sq).div(&three);
        let xp = mc2.add(&sq).div(&three);
        let bound = BigInt::one() + self.c2.abs().max(self.c1.abs()).max(self.c0.abs());
        let b = Real::from_int(&bound, w);
        vec![(b.neg(), xm.clone()), (xm, xp.clone()), (xp, b)]
    }

    fn refine_root(&self, mut lo: Real, mut hi: Real, w: u32) -> Result<Real> {
        let two = BigInt::from(2);
        let neg_at_lo = self.eval_real(&lo).is_negative();
        for _ in 0..96 {
            let mid = Real::from_parts((lo.mantissa() + hi.mantissa()) / &two, w);
            let v = self.eval_real(&mid);
            if v.is_zero() {
                lo = mid.clone();
                hi = mid;
                break;
            }
            if v.is_negative() == neg_at_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut x = Real::from_parts((lo.mantissa() + hi.mantissa()) / &two, w);
        for _ in 0..64 {
            let d = self.deriv_real(&x);
            if d.is_zero() {
                break;
            }
            let step = self.eval_real(&x).div(&d);
            x = x.sub(&step);
            if step.mantissa().bits() <= 4 {
                break;
            }
        }
        // exact enclosure check at +- 2^-(w-24)
        let eps = BigInt::one() << 24;
        let s_lo = self.eval_dyadic(&(x.mantissa() - &eps), w).signum();
        let s_hi = self.eval_dyadic(&(x.mantissa() + &eps), w).signum();
        if s_lo == s_hi && !s_lo.is_zero() {
            return Err(Error::Internal(format!(
                "root refinement failed for {self}"
            )));
        }
        Ok(x)
    }
}

/// Double-precision approximations of the real roots (one or three).
fn real_root_approximations(p: &CubicPolynomial) -> Vec<f64> {
    let b = p.c2.to_f64().unwrap_or(f64::MAX);
    let c = p.c1.to_f64().unwrap_or(f64::MAX);
    let d = p.c0.to_f64().unwrap_or(f64::MAX);
    let pp = c - b * b / 3.0;
    let qq = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let shift = -b / 3.0;
    let disc = -(4.0 * pp * pp * pp + 27.0 * qq * qq);
    let mut roots = if disc > 0.0 && pp < 0.0 {
        let m = 2.0 * (-pp / 3.0).sqrt();
        let theta = ((3.0 * qq / (2.0 * pp)) * (-3.0 / pp).sqrt())
            .clamp(-1.0, 1.0)
            .acos()
            / 3.0;
        (0..3)
            .map(|k| m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift)
            .collect::<Vec<_>>()
    } else {
        let s = (qq * qq / 4.0 + pp * pp * pp / 27.0).max(0.0).sqrt();
        vec![(-qq / 2.0 + s).cbrt() + (-qq / 2.0 - s).cbrt() + shift]
    };
    // polish
    for r in roots.iter_mut() {
        for _ in 0..8 {
            let f = ((*r + b) * *r + c) * *r + d;
            let df = (3.0 * *r + 2.0 * b) * *r + c;
            if df == 0.0 {
                break;
            }
            *r -= f / df;
        }
    }
    roots
}

impl fmt::Display for CubicPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^3")?;
        for (c, var) in [(&self.c2, "x^2"), (&self.c1, "x"), (&self.c0, "")] {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { " - " } else { " + " };
            let mag = c.abs();
            if mag.is_one() && !var.is_empty() {
                write!(f, "{sign}{var}")?;
            } else {
                write!(f, "{sign}{mag}{var}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for CubicPolynomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        crate::parse::parse_polynomial(s)
    }
}

/// An element of the field in power-basis coordinates `c0 + c1 a + c2 a^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    coords: [BigRational; 3],
}

impl FieldElement {
    pub fn new(coords: [BigRational; 3]) -> Self {
        FieldElement { coords }
    }

    pub fn from_ints(c0: i64, c1: i64, c2: i64) -> Self {
        FieldElement::new([qint(c0), qint(c1), qint(c2)])
    }

    pub fn from_int(n: i64) -> Self {
        FieldElement::from_ints(n, 0, 0)
    }

    pub fn from_bigint(n: BigInt) -> Self {
        FieldElement::new([BigRational::from_integer(n), qzero(), qzero()])
    }

    pub fn zero() -> Self {
        FieldElement::from_int(0)
    }

    pub fn one() -> Self {
        FieldElement::from_int(1)
    }

    /// The distinguished root `a`.
    pub fn generator() -> Self {
        FieldElement::from_ints(0, 1, 0)
    }

    pub fn coords(&self) -> &[BigRational; 3] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1].is_zero() && self.coords[2].is_zero()
    }

    pub fn add(&self, o: &FieldElement) -> FieldElement {
        FieldElement::new([
            &self.coords[0] + &o.coords[0],
            &self.coords[1] + &o.coords[1],
            &self.coords[2] + &o.coords[2],
        ])
    }

    pub fn sub(&self, o: &FieldElement) -> FieldElement {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement::new(self.coords.clone().map(|c| -c))
    }

    pub fn scale(&self, k: &BigRational) -> FieldElement {
        FieldElement::new(self.coords.clone().map(|c| c * k))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::format_element(self))
    }
}

/// A cyclic cubic field with its maximal order and cached embedding data.
#[derive(Debug, Clone)]
pub struct CubicField {
    poly: CubicPolynomial,
    conductor: u64,
    poly_disc: BigInt,
    field_disc: BigInt,
    index: BigInt,
    basis: QMat3,
    basis_inv: QMat3,
    mult: [[IVec3; 3]; 3],
    roots: [Real; 3],
    /// `emb[i][j] = σ_j(ω_i)`.
    emb: [[Real; 3]; 3],
    emb_inv: [[Real; 3]; 3],
    /// Rows are the images of the integral basis under the automorphism
    /// `τ` with `σ_j ∘ τ = σ_(j+1)`.
    tau: IMat3,
}

impl CubicField {
    /// Build the field defined by `poly`, computing its maximal order.
    pub fn build(poly: &CubicPolynomial) -> Result<CubicField> {
        let disc = poly.discriminant();
        if disc.is_zero() || poly.has_integer_root() {
            return Err(Error::NotAField(poly.to_string()));
        }
        if exact_sqrt(&disc).is_none() {
            return Err(Error::NotCyclic(poly.to_string(), disc.to_string()));
        }
        let coeffs = poly.low_coeffs();
        let ord = order::maximal_order(&coeffs, &disc)?;
        let index = ord.index();
        let field_disc = &disc / (&index * &index);
        let conductor = exact_sqrt(&field_disc)
            .and_then(|f| f.to_u64())
            .ok_or_else(|| Error::NotCyclic(poly.to_string(), field_disc.to_string()))?;

        let roots = poly.real_roots(HP_BITS)?;
        let emb: [[Real; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|j| eval_power_real(&ord.basis[i], &roots[j]))
        });
        let emb_inv = invert_real(&emb)?;
        let mut field = CubicField {
            poly: poly.clone(),
            conductor,
            poly_disc: disc,
            field_disc,
            index,
            basis: ord.basis,
            basis_inv: ord.inv,
            mult: ord.mult,
            roots,
            emb,
            emb_inv,
            tau: linalg::identity(),
        };
        field.tau = field.compute_automorphism()?;
        Ok(field)
    }

    /// The cyclic cubic field of conductor `f` (`f = 9` or a prime
    /// `f ≡ 1 mod 6`), defined by its Gaussian-period polynomial.
    pub fn from_conductor(f: u64) -> Result<CubicField> {
        let poly = period_polynomial(f)?;
        let k = CubicField::build(&poly)?;
        if k.conductor != f {
            return Err(Error::Internal(format!(
                "period polynomial for {f} produced conductor {}",
                k.conductor
            )));
        }
        Ok(k)
    }

    pub fn polynomial(&self) -> &CubicPolynomial {
        &self.poly
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn poly_discriminant(&self) -> &BigInt {
        &self.poly_disc
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.field_disc
    }

    pub fn index(&self) -> &BigInt {
        &self.index
    }

    /// Integral basis, rows in power-basis coordinates.
    pub fn integral_basis(&self) -> &QMat3 {
        &self.basis
    }

    pub fn integral_basis_elements(&self) -> [FieldElement; 3] {
        self.basis.clone().map(FieldElement::new)
    }

    pub fn structure_constants(&self) -> &[[IVec3; 3]; 3] {
        &self.mult
    }

    pub fn roots(&self) -> &[Real; 3] {
        &self.roots
    }

    // --- element arithmetic -------------------------------------------------

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement::new(mul_power(&self.poly.low_coeffs(), &x.coords, &y.coords))
    }

    /// Multiplication matrix of `x` on the power basis (rows `x`, `x a`, `x a^2`).
    fn mult_matrix_power(&self, x: &FieldElement) -> QMat3 {
        let c = self.poly.low_coeffs();
        let r0 = x.coords.clone();
        let r1 = mul_power(&c, &r0, &[qzero(), qint(1), qzero()]);
        let r2 = mul_power(&c, &r1, &[qzero(), qint(1), qzero()]);
        [r0, r1, r2]
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // solve y · M_x = 1 where M_x is the multiplication matrix
        let m = self.mult_matrix_power(x);
        let mi = linalg::inverse_q(&m).ok_or(Error::DivisionByZero)?;
        Ok(FieldElement::new(mi[0].clone()))
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(x, &self.inv(y)?))
    }

    pub fn pow(&self, x: &FieldElement, e: i64) -> Result<FieldElement> {
        let mut base = if e < 0 { self.inv(x)? } else { x.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = FieldElement::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        Ok(acc)
    }

    pub fn norm(&self, x: &FieldElement) -> BigRational {
        det3(&self.mult_matrix_power(x))
    }

    pub fn trace(&self, x: &FieldElement) -> BigRational {
        let m = self.mult_matrix_power(x);
        &m[0][0] + &m[1][1] + &m[2][2]
    }

    // --- integral coordinates ----------------------------------------------

    /// Coordinates over the integral basis, if `x` is integral.
    pub fn to_integral(&self, x: &FieldElement) -> Option<IVec3> {
        let c = linalg::vec_mul_q(&x.coords, &self.basis_inv);
        if c.iter().all(|q| q.is_integer()) {
            Some(c.map(|q| q.to_integer()))
        } else {
            None
        }
    }

    pub fn is_integral(&self, x: &FieldElement) -> bool {
        self.to_integral(x).is_some()
    }

    pub fn from_integral(&self, v: &IVec3) -> FieldElement {
        let q = v.clone().map(BigRational::from_integer);
        FieldElement::new(linalg::vec_mul_q(&q, &self.basis))
    }

    pub fn mul_integral(&self, x: &IVec3, y: &IVec3) -> IVec3 {
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
                    if !self.mult[i][j][k].is_zero() {
                        out[k] += &xy * &self.mult[i][j][k];
                    }
                }
            }
        }
        out
    }

    /// Rows `x · ω_i` in integral coordinates.
    pub fn mult_matrix_integral(&self, x: &IVec3) -> IMat3 {
        std::array::from_fn(|i| {
            let mut e: IVec3 = Default::default();
            e[i] = BigInt::one();
            self.mul_integral(x, &e)
        })
    }

    pub fn norm_integral(&self, x: &IVec3) -> BigInt {
        det3(&self.mult_matrix_integral(x))
    }

    /// Exact inverse of a unit given in integral coordinates.
    pub fn unit_inverse(&self, x: &IVec3) -> Option<IVec3> {
        let inv = self.inv(&self.from_integral(x)).ok()?;
        self.to_integral(&inv)
    }

    pub fn pow_integral(&self, x: &IVec3, e: i64) -> Option<IVec3> {
        let mut base = if e < 0 {
            self.unit_inverse(x)?
        } else {
            x.clone()
        };
        let mut e = e.unsigned_abs();
        let mut acc = linalg::ivec(1, 0, 0);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_integral(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_integral(&base, &base);
            }
        }
        Some(acc)
    }

    // --- embeddings ------------------------------------------------------------

    /// The three real embeddings of `x`, ordered by the embedded root `a`,
    /// each accurate to `digits` decimal digits.
    pub fn real_embeddings(&self, x: &FieldElement, digits: u32) -> Result<[Real; 3]> {
        let bits = bits_for_digits(digits.max(10)) + 64 + coord_bits(x);
        let roots = if bits <= HP_BITS {
            self.roots.clone().map(|r| r.with_bits(bits))
        } else {
            self.poly.real_roots(bits)?
        };
        Ok(roots.map(|r| eval_power_real(&x.coords, &r)))
    }

    /// Embeddings of an integral element at the cached precision.
    pub fn embed_integral(&self, x: &IVec3) -> [Real; 3] {
        std::array::from_fn(|j| {
            let mut acc = Real::zero(HP_BITS);
            for i in 0..3 {
                if !x[i].is_zero() {
                    acc = acc.add(&self.emb[i][j].mul_int(&x[i]));
                }
            }
            acc
        })
    }

    pub fn embed_integral_f64(&self, x: &IVec3) -> [f64; 3] {
        self.embed_integral(x).map(|r| r.to_f64())
    }

    /// `log |σ_j(x)|` in double precision (accurate relative to the value).
    pub fn log_embedding(&self, x: &IVec3) -> [f64; 3] {
        self.embed_integral(x).map(|r| {
            let f = r.to_f64().abs();
            if f.is_normal() {
                f.ln()
            } else {
                r.abs().ln().to_f64()
            }
        })
    }

    /// High-precision `log |σ_j(x)|`.
    pub fn log_embedding_hp(&self, x: &IVec3) -> [Real; 3] {
        self.embed_integral(x).map(|r| r.abs().ln())
    }

    /// Rounded integral coordinates of the element whose embeddings
    /// approximate `targets`. The caller verifies the candidate exactly.
    pub fn recognize(&self, targets: &[Real; 3]) -> IVec3 {
        std::array::from_fn(|i| {
            let mut acc = Real::zero(HP_BITS);
            for j in 0..3 {
                acc = acc.add(&targets[j].with_bits(HP_BITS).mul(&self.emb_inv[j][i]));
            }
            acc.round()
        })
    }

    /// Apply the generating automorphism `τ` to an integral element.
    pub fn automorphism(&self, x: &IVec3) -> IVec3 {
        linalg::vec_mul_i(x, &self.tau)
    }

    fn compute_automorphism(&self) -> Result<IMat3> {
        let target = [
            self.roots[1].clone(),
            self.roots[2].clone(),
            self.roots[0].clone(),
        ];
        let theta_int = self.recognize(&target);
        let theta = self.from_integral(&theta_int);
        if !self.poly_eval_element(&self.poly, &theta).is_zero() {
            return Err(Error::Internal(format!(
                "{} has no automorphism cycling the roots",
                self.poly
            )));
        }
        let rows: Vec<IVec3> = self
            .basis
            .iter()
            .map(|b| {
                let img = self.eval_power_at(b, &theta);
                self.to_integral(&img)
                    .ok_or_else(|| Error::Internal("automorphism leaves the order".into()))
            })
            .collect::<Result<_>>()?;
        Ok([rows[0].clone(), rows[1].clone(), rows[2].clone()])
    }

    /// `c0 + c1 θ + c2 θ^2` for power coordinates `c`.
    fn eval_power_at(&self, c: &[BigRational; 3], theta: &FieldElement) -> FieldElement {
        let t2 = self.mul(theta, theta);
        FieldElement::new([c[0].clone(), qzero(), qzero()])
            .add(&theta.scale(&c[1]))
            .add(&t2.scale(&c[2]))
    }

    fn poly_eval_element(&self, p: &CubicPolynomial, x: &FieldElement) -> FieldElement {
        let q = |v: &BigInt| {
            FieldElement::new([BigRational::from_integer(v.clone()), qzero(), qzero()])
        };
        let t = self.mul(&x.add(&q(&p.c2)), x).add(&q(&p.c1));
        self.mul(&t, x).add(&q(&p.c0))
    }

    /// Whether `other` has a root in this field (i.e. defines the same
    /// field, since cubic fields have no proper intermediate fields).
    pub fn is_same_field(&self, other: &CubicPolynomial) -> bool {
        let disc = other.discriminant();
        if !disc.is_positive() || other.has_integer_root() {
            return false;
        }
        // disc(other) = disc(K) * index^2
        let (q, r) = disc.div_rem(&self.field_disc);
        if !r.is_zero() || exact_sqrt(&q).is_none() {
            return false;
        }
        let Ok(roots) = other.real_roots(HP_BITS) else {
            return false;
        };
        for perm in [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ] {
            let target = perm.map(|k| roots[k].clone());
            let cand = self.from_integral(&self.recognize(&target));
            if self.poly_eval_element(other, &cand).is_zero() {
                return true;
            }
        }
        false
    }
}

fn coord_bits(x: &FieldElement) -> u32 {
    x.coords
        .iter()
        .map(|c| (c.numer().bits() + c.denom().bits()) as u32)
        .max()
        .unwrap_or(0)
}

fn eval_power_real(c: &[BigRational; 3], r: &Real) -> Real {
    let bits = r.bits();
    let r2 = r.mul(r);
    Real::from_rational(&c[0], bits)
        .add(&r.mul(&Real::from_rational(&c[1], bits)))
        .add(&r2.mul(&Real::from_rational(&c[2], bits)))
}

fn invert_real(m: &[[Real; 3]; 3]) -> Result<[[Real; 3]; 3]> {
    let c = |i: usize, j: usize| &m[i][j];
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| {
        c(r0, c0).mul(c(r1, c1)).sub(&c(r0, c1).mul(c(r1, c0)))
    };
    let adj = [
        [cof(1, 2, 1, 2), cof(0, 2, 1, 2).neg(), cof(0, 1, 1, 2)],
        [
            cof(1, 2, 0, 2).neg(),
            cof(0, 2, 0, 2),
            cof(0, 1, 0, 2).neg(),
        ],
        [cof(1, 2, 0, 1), cof(0, 2, 0, 1).neg(), cof(0, 1, 0, 1)],
    ];
    let det = c(0, 0)
        .mul(&adj[0][0])
        .add(&c(0, 1).mul(&adj[1][0]))
        .add(&c(0, 2).mul(&adj[2][0]));
    if det.is_zero() {
        return Err(Error::Internal("singular embedding matrix".into()));
    }
    Ok(adj.map(|row| row.map(|x| x.div(&det))))
}

/// Gaussian-period polynomial of the cyclic cubic field of conductor `f`.
pub fn period_polynomial(f: u64) -> Result<CubicPolynomial> {
    if f == 9 {
        return Ok(CubicPolynomial::new(0, -3, 1));
    }
    if !is_prime(f) || f % 6 != 1 {
        return Err(Error::InvalidConductor(
            f.to_string(),
            "must be 9 or a prime congruent to 1 mod 6".into(),
        ));
    }
    let pp = decompose_conductor(f)?;
    let f_i = f as i64;
    let c0 = (f_i * (pp.l + 3) - 1) / 27;
    debug_assert_eq!((f_i * (pp.l + 3) - 1) % 27, 0);
    Ok(CubicPolynomial::new(-1, -(f_i - 1) / 3, c0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k73() -> CubicField {
        CubicField::build(&CubicPolynomial::new(-1, -24, 27)).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn builds_conductor_73() {
        let k = k73();
        assert_eq!(k.conductor(), 73);
        assert_eq!(k.discriminant(), &BigInt::from(5329));
        assert_eq!(k.index(), &BigInt::from(3));
        assert_eq!(k.poly_discriminant(), &BigInt::from(5329 * 9));
    }

    #[test]
    fn builds_conductor_79_and_rejects_bad_input() {
        let k = CubicField::build(&CubicPolynomial::new(-1, -26, -41)).unwrap();
        assert_eq!(k.conductor(), 79);
        assert!(matches!(
            CubicField::build(&CubicPolynomial::new(0, 0, -2)),
            Err(Error::NotCyclic(..))
        ));
        // (x-1)(x-2)(x-3)
        assert!(matches!(
            CubicField::build(&CubicPolynomial::new(-6, 11, -6)),
            Err(Error::NotAField(..))
        ));
    }

    #[test]
    fn conductor_constructor() {
        let k9 = CubicField::from_conductor(9).unwrap();
        assert_eq!(k9.polynomial(), &CubicPolynomial::new(0, -3, 1));
        assert_eq!(k9.discriminant(), &BigInt::from(81));
        let k = CubicField::from_conductor(73).unwrap();
        assert!(k.is_same_field(&CubicPolynomial::new(-1, -24, 27)));
        assert!(!k.is_same_field(&CubicPolynomial::new(-1, -26, -41)));
        assert!(matches!(
            CubicField::from_conductor(11),
            Err(Error::InvalidConductor(..))
        ));
    }

    #[test]
    fn element_arithmetic() {
        let k = k73();
        let a = FieldElement::generator();
        let x = FieldElement::new([q(7, 1), q(-14, 3), q(2, 3)]);
        assert_eq!(k.mul(&FieldElement::one(), &x), x);
        assert_eq!(k.mul(&a, &a), FieldElement::from_ints(0, 0, 1));
        let xi = k.inv(&x).unwrap();
        assert!(k.mul(&x, &xi).is_one());
        assert_eq!(k.inv(&FieldElement::zero()), Err(Error::DivisionByZero));
        assert_eq!(k.norm(&x).abs(), q(1, 1));
        assert_eq!(k.norm(&a), q(-27, 1));
        assert_eq!(k.trace(&a), q(1, 1));
    }

    #[test]
    fn norm_of_a_plus_one_in_79() {
        let k = CubicField::build(&CubicPolynomial::new(-1, -26, -41)).unwrap();
        let x = FieldElement::from_ints(1, 1, 0);
        // N(a + 1) = -p(-1) = -(-1 - 1 + 26 - 41)
        assert_eq!(k.norm(&x), q(17, 1));
    }

    #[test]
    fn embeddings_are_roots() {
        let k = k73();
        let e = k.real_embeddings(&FieldElement::generator(), 30).unwrap();
        let p = k.polynomial();
        for r in &e {
            let v = p.eval_real(&r.with_bits(200)).to_f64();
            assert!(v.abs() < 1e-40);
        }
        assert!(e[0] < e[1] && e[1] < e[2]);
        let ones = k.real_embeddings(&FieldElement::one(), 20).unwrap();
        for r in ones {
            assert!((r.to_f64() - 1.0).abs() < 1e-30);
        }
    }

    #[test]
    fn automorphism_has_order_three() {
        let k = k73();
        let a = k.to_integral(&FieldElement::generator()).unwrap();
        let t1 = k.automorphism(&a);
        let t3 = k.automorphism(&k.automorphism(&t1));
        assert_eq!(t3, a);
        assert_ne!(t1, a);
        let img = k.from_integral(&t1);
        assert!(k.poly_eval_element(k.polynomial(), &img).is_zero());
    }

    #[test]
    fn integral_basis_closure() {
        let k = k73();
        let b = k.integral_basis_elements();
        for x in &b {
            for y in &b {
                assert!(k.is_integral(&k.mul(x, y)));
            }
        }
        // 1/3 a^2 + 2/3 a - 11 is integral, a/3 is not
        assert!(k.is_integral(&FieldElement::new([q(-11, 1), q(2, 3), q(1, 3)])));
        assert!(!k.is_integral(&FieldElement::new([q(0, 1), q(1, 3), q(0, 1)])));
    }
}
