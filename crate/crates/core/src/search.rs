//! Admissible primes: a degree-one prime `𝔮` of odd norm `q` such that a
//! unit generates `(O_K / 𝔮^2)^×`. A unit does so exactly when it is a
//! primitive root modulo `𝔮` and `𝔮` is not a Wieferich prime for it.

use crate::arith::{primes, splits_completely};
use crate::error::{Error, Result};
use crate::field::{CubicField, FieldElement};
use crate::ideal::{decompose_prime, PrimeIdeal, ResidueRing, Splitting};
use crate::units::{candidate_exponents, UnitSystem};

/// Default search cutoff on the rational prime `q`.
pub const DEFAULT_Q_MAX: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub q_max: u64,
    /// Candidate units `±u1^e1 u2^e2` are tried with `|e_i| ≤ depth` for
    /// `depth = 1, ..., max_depth`.
    pub max_depth: u32,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            q_max: DEFAULT_Q_MAX,
            max_depth: 2,
        }
    }
}

fn check_prime(p: &PrimeIdeal) -> Result<()> {
    if p.residue_degree() != 1 || p.ramification() != 1 || p.residue_char() == 2 {
        return Err(Error::UnsupportedModulus(format!(
            "admissibility needs a degree-one unramified prime of odd norm (got norm {})",
            p.norm()
        )));
    }
    Ok(())
}

fn unit_residue(k: &CubicField, eps: &FieldElement, ring: &ResidueRing) -> Result<u128> {
    let r = ring.reduce(k, eps)?;
    if !ring.is_unit(r) {
        return Err(Error::NotCoprime(
            eps.to_string(),
            format!("prime above {}", ring.prime()),
        ));
    }
    Ok(r)
}

/// `ε` has order `q - 1` modulo `𝔮`.
pub fn primitive_root_test(k: &CubicField, eps: &FieldElement, p: &PrimeIdeal) -> Result<bool> {
    check_prime(p)?;
    let ring = ResidueRing::new(k, p, 1)?;
    let r = unit_residue(k, eps, &ring)?;
    Ok(is_primitive_mod_q(&ring, r))
}

fn is_primitive_mod_q(ring1: &ResidueRing, r: u128) -> bool {
    ring1
        .order_of_residue(r)
        .map(|o| o == ring1.prime() - 1)
        .unwrap_or(false)
}

/// `ε^(q-1) ≢ 1 (mod 𝔮^2)`.
pub fn non_wieferich_test(k: &CubicField, eps: &FieldElement, p: &PrimeIdeal) -> Result<bool> {
    check_prime(p)?;
    let ring = ResidueRing::new(k, p, 2)?;
    let r = unit_residue(k, eps, &ring)?;
    Ok(ring.pow(r, (ring.prime() - 1) as u128) != 1)
}

/// `ε` generates `(O_K / 𝔮^2)^×`.
pub fn generates_quotient(k: &CubicField, eps: &FieldElement, p: &PrimeIdeal) -> Result<bool> {
    Ok(primitive_root_test(k, eps, p)? && non_wieferich_test(k, eps, p)?)
}

/// An admissible prime together with the unit that certifies it.
#[derive(Debug, Clone)]
pub struct AdmissibleWitness {
    pub prime: PrimeIdeal,
    pub unit: FieldElement,
    /// `(sign, e1, e2)` with `unit = sign · u1^e1 u2^e2`, when known.
    pub exponents: Option<(i8, i64, i64)>,
    /// Order of the unit modulo `𝔮`, equal to `q - 1`.
    pub order_mod_q: u64,
    /// Canonical residue of `unit^(q-1)` modulo `𝔮^2`, different from 1.
    pub residue_mod_q2: u128,
}

impl AdmissibleWitness {
    pub fn q(&self) -> u64 {
        self.prime.residue_char()
    }
}

#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(Box<AdmissibleWitness>),
    Exhausted { q_max: u64 },
}

/// Residues of `-1`, `u1`, `u2` modulo `𝔮^2`.
fn unit_residues(units: &UnitSystem, ring: &ResidueRing) -> Result<[u128; 3]> {
    let [u1, u2] = units.units_integral();
    let r1 = ring.reduce_integral(u1);
    let r2 = ring.reduce_integral(u2);
    if !ring.is_unit(r1) || !ring.is_unit(r2) {
        return Err(Error::Internal(format!(
            "unit reduces to a non-unit modulo a prime above {}",
            ring.prime()
        )));
    }
    Ok([ring.size() - 1, r1, r2])
}

fn residue_of(ring: &ResidueRing, res: &[u128; 3], (s, e1, e2): (i8, i64, i64)) -> u128 {
    let n = ring.unit_group_order() as u128;
    let pw = |r: u128, e: i64| {
        let e = e.rem_euclid(n as i64) as u128;
        ring.pow(r, e)
    };
    let mut x = ring.mul(pw(res[1], e1), pw(res[2], e2));
    if s < 0 {
        x = ring.mul(x, res[0]);
    }
    x
}

/// Search odd primes `q ≠ f` in increasing order for an admissible prime.
///
/// Only primes splitting completely are considered. For each, the three
/// primes above it are tried in their canonical order, and for each prime
/// the candidate units in the order of [`candidate_exponents`].
pub fn admissible_search(
    k: &CubicField,
    units: &UnitSystem,
    opts: &SearchOptions,
) -> Result<SearchOutcome> {
    let f = k.conductor();
    let all = candidate_exponents(opts.max_depth);
    for q in primes().take_while(|&q| q <= opts.q_max) {
        if q == 2 || q == f || f.is_multiple_of(q) || !splits_completely(q, f) {
            continue;
        }
        let (kind, ps) = decompose_prime(k, q)?;
        if kind != Splitting::Split {
            return Err(Error::Internal(format!(
                "{q} passed the splitting filter but decomposes as {kind:?}"
            )));
        }
        for p in ps {
            let ring1 = ResidueRing::new(k, &p, 1)?;
            let ring2 = ResidueRing::new(k, &p, 2)?;
            let res = unit_residues(units, &ring2)?;
            for &ex in &all {
                let r = residue_of(&ring2, &res, ex);
                if !is_primitive_mod_q(&ring1, r % q as u128) {
                    continue;
                }
                let w = ring2.pow(r, (q - 1) as u128);
                if w == 1 {
                    continue;
                }
                let v = units
                    .power_product(k, ex.1, ex.2)
                    .ok_or_else(|| Error::Internal("unit power failed".into()))?;
                let mut unit = k.from_integral(&v);
                if ex.0 < 0 {
                    unit = unit.neg();
                }
                return Ok(SearchOutcome::Found(Box::new(AdmissibleWitness {
                    order_mod_q: q - 1,
                    residue_mod_q2: w,
                    prime: p,
                    unit,
                    exponents: Some(ex),
                })));
            }
        }
    }
    Ok(SearchOutcome::Exhausted { q_max: opts.q_max })
}

/// First prime `𝔮` (ascending `q`, canonical order above each `q`) for
/// which the given unit generates `(O_K / 𝔮^2)^×`.
pub fn search_for_unit(
    k: &CubicField,
    eps: &FieldElement,
    opts: &SearchOptions,
) -> Result<Option<AdmissibleWitness>> {
    let f = k.conductor();
    let v = k
        .to_integral(eps)
        .ok_or_else(|| Error::NotIntegral(eps.to_string()))?;
    for q in primes().take_while(|&q| q <= opts.q_max) {
        if q == 2 || f.is_multiple_of(q) || !splits_completely(q, f) {
            continue;
        }
        let (_, ps) = decompose_prime(k, q)?;
        for p in ps {
            let ring1 = ResidueRing::new(k, &p, 1)?;
            let ring2 = ResidueRing::new(k, &p, 2)?;
            let r = ring2.reduce_integral(&v);
            if !ring2.is_unit(r) || !is_primitive_mod_q(&ring1, r % q as u128) {
                continue;
            }
            let w = ring2.pow(r, (q - 1) as u128);
            if w != 1 {
                return Ok(Some(AdmissibleWitness {
                    prime: p,
                    unit: eps.clone(),
                    exponents: None,
                    order_mod_q: q - 1,
                    residue_mod_q2: w,
                }));
            }
        }
    }
    Ok(None)
}

/// Admissibility of `𝔮` for the whole unit group: the images of `-1`,
/// `u1` and `u2` generate `(O_K / 𝔮^2)^×`. Returns the order of the
/// generated subgroup and the full group order.
pub fn unit_group_image(k: &CubicField, units: &UnitSystem, p: &PrimeIdeal) -> Result<(u64, u64)> {
    check_prime(p)?;
    let ring = ResidueRing::new(k, p, 2)?;
    let res = unit_residues(units, &ring)?;
    Ok((ring.subgroup_order(&res)?, ring.unit_group_order()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CubicPolynomial;
    use crate::ideal::Ideal;
    use crate::parse::parse_element;
    use crate::units::{find_units, UnitSearch};

    fn setup() -> (CubicField, UnitSystem, PrimeIdeal) {
        let k = CubicField::build(&CubicPolynomial::new(-1, -24, 27)).unwrap();
        let u = find_units(&k, &UnitSearch::default()).unwrap();
        let pi = Ideal::from_element(&k, &parse_element("1/3a^2+2/3a-11").unwrap()).unwrap();
        let (_, ps) = decompose_prime(&k, 3).unwrap();
        let p = ps.into_iter().find(|p| p.ideal() == &pi).unwrap();
        (k, u, p)
    }

    #[test]
    fn worked_example_tests() {
        let (k, _, p) = setup();
        let e1 = parse_element("2/3a^2-14/3a+7").unwrap();
        assert!(primitive_root_test(&k, &e1, &p).unwrap());
        assert!(non_wieferich_test(&k, &e1, &p).unwrap());
        assert!(generates_quotient(&k, &e1, &p).unwrap());
        let one = FieldElement::one();
        assert!(!primitive_root_test(&k, &one, &p).unwrap());
        assert!(!non_wieferich_test(&k, &one, &p).unwrap());
        let sq = k.mul(&e1, &e1);
        assert!(!primitive_root_test(&k, &sq, &p).unwrap());
        let sixth = k.pow(&e1, 6).unwrap();
        assert!(!non_wieferich_test(&k, &sixth, &p).unwrap());
    }

    #[test]
    fn search_finds_three_for_73() {
        let (k, u, _) = setup();
        match admissible_search(&k, &u, &SearchOptions::default()).unwrap() {
            SearchOutcome::Found(w) => {
                assert_eq!(w.q(), 3);
                assert_eq!(w.order_mod_q, 2);
                assert_ne!(w.residue_mod_q2, 1);
                assert!(generates_quotient(&k, &w.unit, &w.prime).unwrap());
            }
            SearchOutcome::Exhausted { .. } => panic!("no admissible prime"),
        }
    }

    #[test]
    fn cutoff_exhausts() {
        let k = CubicField::from_conductor(79).unwrap();
        let u = find_units(&k, &UnitSearch::default()).unwrap();
        let opts = SearchOptions {
            q_max: 2,
            max_depth: 2,
        };
        assert!(matches!(
            admissible_search(&k, &u, &opts).unwrap(),
            SearchOutcome::Exhausted { q_max: 2 }
        ));
    }

    #[test]
    fn element_in_prime_is_rejected() {
        let (k, _, p) = setup();
        let x = parse_element("1/3a^2+2/3a-11").unwrap();
        assert!(matches!(
            primitive_root_test(&k, &x, &p),
            Err(Error::NotCoprime(..))
        ));
    }
}
