//! Unit group discovery and regulators.
//!
//! The log-unit lattice of a cyclic cubic field is stable under the
//! cyclic shift of coordinates induced by `τ`, a rotation by 120°, so it
//! is hexagonal. For such a lattice the shortest non-zero vector `l` and
//! its rotation `τ l` form a basis. The finder therefore looks for a unit
//! of smallest log length by scanning log cells outward from the origin;
//! once every cell that could hold a shorter unit has been scanned, the
//! unit found together with its conjugate is a fundamental system.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::enumerate::{cell_norm2, cells_in_shell, CellScanner, CELL_REACH};
use crate::error::{Error, Result};
use crate::field::{CubicField, FieldElement};
use crate::hp::{bits_for_digits, Real};
use crate::linalg::{identity, ivec, IVec3};

/// Search effort for [`find_units`]: cells are scanned in shells of
/// doubling log radius, starting at `initial_radius`, until a unit is
/// certified shortest or `max_radius` is exhausted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSearch {
    pub initial_radius: f64,
    pub max_radius: f64,
}

impl Default for UnitSearch {
    fn default() -> Self {
        UnitSearch {
            initial_radius: 8.0,
            max_radius: 512.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FundamentalStatus {
    Verified,
    Unverified,
}

impl FundamentalStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            FundamentalStatus::Verified => "verified",
            FundamentalStatus::Unverified => "unverified",
        }
    }
}

/// Two independent units (plus the torsion unit `-1`).
#[derive(Debug, Clone)]
pub struct UnitSystem {
    units: [IVec3; 2],
    elements: [FieldElement; 2],
    logs: [[f64; 3]; 2],
    shortest: f64,
    regulator: f64,
    status: FundamentalStatus,
}

/// A regulator value with an absolute error bound.
#[derive(Debug, Clone)]
pub struct Regulator {
    pub value: Real,
    pub error: f64,
}

impl UnitSystem {
    /// Build from two given units, checking unithood and independence.
    pub fn from_units(k: &CubicField, u1: &FieldElement, u2: &FieldElement) -> Result<UnitSystem> {
        let a = unit_coords(k, u1)?;
        let b = unit_coords(k, u2)?;
        let logs = [k.log_embedding(&a), k.log_embedding(&b)];
        let reg = (logs[0][0] * logs[1][1] - logs[0][1] * logs[1][0]).abs();
        if reg < 1e-9 {
            return Err(Error::Internal("units are not independent".into()));
        }
        let len = |l: &[f64; 3]| l.iter().map(|x| x * x).sum::<f64>().sqrt();
        Ok(UnitSystem {
            shortest: len(&logs[0]).min(len(&logs[1])),
            units: [a, b],
            elements: [u1.clone(), u2.clone()],
            logs,
            regulator: reg,
            status: FundamentalStatus::Unverified,
        })
    }

    pub fn units(&self) -> &[FieldElement; 2] {
        &self.elements
    }

    pub fn units_integral(&self) -> &[IVec3; 2] {
        &self.units
    }

    /// `log |σ_j(u_i)|` in double precision.
    pub fn log_matrix(&self) -> &[[f64; 3]; 2] {
        &self.logs
    }

    /// Log length of the shorter unit (the minimum of the log lattice when
    /// found by [`find_units`]).
    pub fn shortest_log_length(&self) -> f64 {
        self.shortest
    }

    /// Double-precision regulator.
    pub fn regulator_f64(&self) -> f64 {
        self.regulator
    }

    pub fn status(&self) -> FundamentalStatus {
        self.status
    }

    pub fn set_status(&mut self, status: FundamentalStatus) {
        self.status = status;
    }

    /// `|det|` of the log matrix over the first two embeddings, to
    /// `digits` decimal digits.
    pub fn regulator(&self, k: &CubicField, digits: u32) -> Result<Regulator> {
        let work = digits.max(20) + 20;
        let bits = bits_for_digits(work);
        let mut l = Vec::with_capacity(2);
        for u in &self.elements {
            let e = k.real_embeddings(u, work)?;
            l.push([
                e[0].abs().ln().with_bits(bits),
                e[1].abs().ln().with_bits(bits),
            ]);
        }
        let det = l[0][0].mul(&l[1][1]).sub(&l[0][1].mul(&l[1][0])).abs();
        let mag: f64 = l.iter().flatten().map(|x| x.to_f64().abs()).sum::<f64>() + 1.0;
        Ok(Regulator {
            value: det,
            error: mag * mag * (-(bits as f64) + 8.0).exp2(),
        })
    }

    /// Write `x` as `±u1^e1 u2^e2`, if it is a unit in the group generated.
    pub fn express(&self, k: &CubicField, x: &FieldElement) -> Option<(i8, i64, i64)> {
        let v = k.to_integral(x)?;
        if !k.norm_integral(&v).abs().is_one() {
            return None;
        }
        let l = k.log_embedding(&v);
        let a = &self.logs;
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        let e1 = ((l[0] * a[1][1] - l[1] * a[1][0]) / det).round() as i64;
        let e2 = ((a[0][0] * l[1] - a[0][1] * l[0]) / det).round() as i64;
        let p = self.power_product(k, e1, e2)?;
        if p == v {
            Some((1, e1, e2))
        } else if p.iter().zip(&v).all(|(a, b)| a == &-b) {
            Some((-1, e1, e2))
        } else {
            None
        }
    }

    /// `u1^e1 u2^e2` in integral coordinates.
    pub fn power_product(&self, k: &CubicField, e1: i64, e2: i64) -> Option<IVec3> {
        let a = k.pow_integral(&self.units[0], e1)?;
        let b = k.pow_integral(&self.units[1], e2)?;
        Some(k.mul_integral(&a, &b))
    }

    /// All `±u1^e1 u2^e2` with `|e_i| ≤ depth`, excluding `±1`.
    pub fn candidate_units(&self, k: &CubicField, depth: u32) -> Vec<FieldElement> {
        candidate_exponents(depth)
            .into_iter()
            .filter_map(|(s, e1, e2)| {
                let v = self.power_product(k, e1, e2)?;
                let x = k.from_integral(&v);
                Some(if s < 0 { x.neg() } else { x })
            })
            .collect()
    }
}

fn unit_coords(k: &CubicField, u: &FieldElement) -> Result<IVec3> {
    let v = k
        .to_integral(u)
        .ok_or_else(|| Error::NotIntegral(u.to_string()))?;
    if !k.norm_integral(&v).abs().is_one() {
        return Err(Error::NotAUnit);
    }
    if v == ivec(1, 0, 0) || v == ivec(-1, 0, 0) {
        return Err(Error::Internal("±1 has finite order".into()));
    }
    Ok(v)
}

/// Exponent triples `(sign, e1, e2)` with `|e_i| ≤ depth`, excluding
/// `e1 = e2 = 0`. Ordered by `max(|e1|, |e2|)`, then `(e1, e2)`, then sign
/// (`+` first), so that the candidates of depth `d` extend those of `d-1`.
pub fn candidate_exponents(depth: u32) -> Vec<(i8, i64, i64)> {
    let d = depth as i64;
    let mut out = Vec::new();
    for e1 in -d..=d {
        for e2 in -d..=d {
            if e1 == 0 && e2 == 0 {
                continue;
            }
            for s in [1i8, -1] {
                out.push((s, e1, e2));
            }
        }
    }
    out.sort_by_key(|&(s, e1, e2)| (e1.abs().max(e2.abs()), e1, e2, -s));
    out
}

fn log_len(l: &[f64; 3]) -> f64 {
    l.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Find a fundamental system of units by locating a shortest vector of the
/// log-unit lattice.
pub fn find_units(k: &CubicField, effort: &UnitSearch) -> Result<UnitSystem> {
    let mut scanner = CellScanner::new(k, &identity(), 0.0, true);
    let one = ivec(1, 0, 0);
    let mut best: Option<(f64, IVec3)> = None;
    let mut done2: i64 = -1;
    let mut radius = effort.initial_radius.min(effort.max_radius);
    let certified = |best: &Option<(f64, IVec3)>, r2: i64| {
        best.as_ref()
            .is_some_and(|(len, _)| (len + CELL_REACH).powi(2) <= r2 as f64)
    };
    'outer: loop {
        let hi2 = (radius * radius).floor() as i64;
        for c in cells_in_shell(done2, hi2, true) {
            if certified(&best, cell_norm2(c) - 1) {
                break 'outer;
            }
            for p in scanner.scan(c)? {
                let prod = (p.scaled[0] * p.scaled[1] * p.scaled[2]).abs();
                if (prod - 1.0).abs() > 1e-6 || p.coords == one {
                    continue;
                }
                if !k.norm_integral(&p.coords).abs().is_one() {
                    continue;
                }
                let len = log_len(&k.log_embedding(&p.coords));
                // -1 is the only other torsion unit
                if len < 1e-6 {
                    continue;
                }
                if best.as_ref().is_none_or(|(b, _)| len < *b - 1e-9) {
                    best = Some((len, p.coords));
                }
            }
            done2 = cell_norm2(c);
        }
        done2 = done2.max(hi2);
        if certified(&best, done2) {
            break;
        }
        if radius >= effort.max_radius {
            return Err(Error::InsufficientEffort(radius));
        }
        radius = (radius * 2.0).min(effort.max_radius);
    }
    let (_, u) = best.expect("certified implies found");
    let u1 = canonical_shortest(k, &u)?;
    let u2 = positive_first(k, k.automorphism(&u1));
    let mut sys = UnitSystem::from_units(k, &k.from_integral(&u1), &k.from_integral(&u2))?;
    sys.shortest = log_len(&sys.logs[0]);
    Ok(sys)
}

/// Flip the sign so that the first embedding is positive.
fn positive_first(k: &CubicField, v: IVec3) -> IVec3 {
    if k.embed_integral(&v)[0].is_negative() {
        v.map(|x| -x)
    } else {
        v
    }
}

/// Deterministic representative of the six shortest log vectors
/// `±τ^i l`: the one with the largest first coordinate.
fn canonical_shortest(k: &CubicField, u: &IVec3) -> Result<IVec3> {
    let inv = k
        .unit_inverse(u)
        .ok_or_else(|| Error::Internal("unit has no integral inverse".into()))?;
    let mut cands = Vec::with_capacity(6);
    for start in [u.clone(), inv] {
        let mut x = start;
        for _ in 0..3 {
            cands.push(x.clone());
            x = k.automorphism(&x);
        }
    }
    let key = |v: &IVec3| k.log_embedding(v)[0];
    let best = cands
        .into_iter()
        .max_by(|a, b| {
            key(a)
                .partial_cmp(&key(b))
                .unwrap_or(std::cmp::Ordering::Equal)
                .then_with(|| a.cmp(b))
        })
        .expect("non-empty");
    Ok(positive_first(k, best))
}

/// Index-free sanity check that `x` is a unit: integral with norm `±1`.
pub fn is_unit(k: &CubicField, x: &FieldElement) -> bool {
    k.to_integral(x)
        .is_some_and(|v| !v.iter().all(BigInt::is_zero) && k.norm_integral(&v).abs().is_one())
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
    fn candidate_counts() {
        assert!(candidate_exponents(0).is_empty());
        assert_eq!(candidate_exponents(1).len(), 16);
        assert_eq!(candidate_exponents(2).len(), 48);
        let d1 = candidate_exponents(1);
        assert_eq!(&candidate_exponents(2)[..16], &d1[..]);
    }

    #[test]
    fn units_of_73_contain_worked_example_units() {
        let k = k73();
        let u = find_units(&k, &UnitSearch::default()).unwrap();
        for e in u.units() {
            assert!(is_unit(&k, e));
        }
        let e1 = parse_element("2/3a^2-14/3a+7").unwrap();
        let e2 = parse_element("4/3a^2+14/3a-7").unwrap();
        let x1 = u.express(&k, &e1).unwrap();
        let x2 = u.express(&k, &e2).unwrap();
        // the worked-example pair is itself a basis: unimodular exponent matrix
        assert_eq!((x1.1 * x2.2 - x1.2 * x2.1).abs(), 1);
        let cands = u.candidate_units(&k, 1);
        assert_eq!(cands.len(), 16);
        let worked = UnitSystem::from_units(&k, &e1, &e2).unwrap();
        let r1 = u.regulator(&k, 40).unwrap().value;
        let r2 = worked.regulator(&k, 40).unwrap().value;
        assert!(r1.sub(&r2).abs().to_f64() < 1e-35);
    }

    #[test]
    fn regulator_basis_invariance() {
        let k = k73();
        let u = find_units(&k, &UnitSearch::default()).unwrap();
        let [a, b] = u.units().clone();
        let ab = k.mul(&a, &b);
        let ainv = k.inv(&a).unwrap();
        let r = u.regulator(&k, 60).unwrap().value;
        for (x, y) in [(a.clone(), ab), (ainv, b.clone())] {
            let v = UnitSystem::from_units(&k, &x, &y).unwrap();
            let r2 = v.regulator(&k, 60).unwrap().value;
            let rel = r.sub(&r2).abs().to_f64() / r.to_f64();
            assert!(rel < 1e-20, "{rel}");
        }
    }

    #[test]
    fn smallest_fields_skip_torsion() {
        for f in [7u64, 9, 13] {
            let k = CubicField::from_conductor(f).unwrap();
            let u = find_units(&k, &UnitSearch::default()).unwrap();
            assert!(u.shortest_log_length() > 0.1, "f = {f}");
        }
    }

    #[test]
    fn rejects_non_units() {
        let k = k73();
        let a = FieldElement::generator();
        assert!(matches!(
            UnitSystem::from_units(&k, &a, &a),
            Err(Error::NotAUnit)
        ));
    }
}
