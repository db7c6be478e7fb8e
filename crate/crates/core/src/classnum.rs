//! Class number one decision: conductor pre-checks, a principality sweep
//! below the Minkowski bound and an analytic `h·R` cross-check.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::arith::{factorize, is_prime, pow_mod_u64, primes, primitive_root};
use crate::enumerate::{cells_in_shell, CellScanner, ROUNDING_REACH};
use crate::error::{Error, Result};
use crate::field::{CubicField, FieldElement};
use crate::ideal::{decompose_prime, Ideal, Splitting};
use crate::units::{FundamentalStatus, UnitSystem};

/// Relative tolerance on `analytic h·R / regulator`.
pub const ANALYTIC_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum ConductorCheck {
    Pass,
    Fail(String),
}

impl ConductorCheck {
    pub fn passed(&self) -> bool {
        matches!(self, ConductorCheck::Pass)
    }
}

/// Whether `f` is a valid conductor of some cyclic cubic field:
/// `f = ∏ p_i` or `9 ∏ p_i` with distinct primes `p_i ≡ 1 mod 3`.
/// Returns the number of distinct prime factors when valid.
pub fn cyclic_cubic_conductor_factors(f: u64) -> Option<usize> {
    if f < 7 {
        return None;
    }
    let fac = factorize(f);
    for &(p, e) in &fac {
        let ok = if p == 3 { e == 2 } else { e == 1 && p % 3 == 1 };
        if !ok {
            return None;
        }
    }
    Some(fac.len())
}

/// Class-number-one pre-check on the conductor.
pub fn conductor_precheck(f: u64) -> ConductorCheck {
    if f == 9 || (is_prime(f) && f % 6 == 1) {
        return ConductorCheck::Pass;
    }
    match cyclic_cubic_conductor_factors(f) {
        Some(t) => ConductorCheck::Fail(format!(
            "composite conductor with t = {t} distinct prime factors, so 3^{} divides the class number",
            t - 1
        )),
        None => ConductorCheck::Fail(format!(
            "{f} is not the conductor of any cyclic cubic field (must be 9 or a prime congruent to 1 mod 6 for class number one)"
        )),
    }
}

/// Minkowski bound `(3!/3^3) sqrt(f^2) = 2f/9`.
pub fn minkowski_bound(k: &CubicField) -> BigRational {
    BigRational::new(BigInt::from(2 * k.conductor()), BigInt::from(9))
}

/// Outcome of a principality test.
#[derive(Debug, Clone, PartialEq)]
pub enum Principality {
    Generator(FieldElement),
    /// No generator exists: every cell within `radius` of the centre was
    /// scanned without finding an element of the right norm.
    Absent {
        radius: f64,
        cells: usize,
    },
}

/// Decide whether `ideal` is principal.
///
/// A generator, if one exists, can be multiplied by units until its
/// centred log vector lies in the Voronoi cell of the log-unit lattice,
/// whose circumradius is `λ/√3` for the hexagonal lattice of minimum `λ`.
/// All cells within that distance (plus the rounding reach) are scanned.
/// This is exhaustive when `units` is a fundamental system.
pub fn is_principal(k: &CubicField, units: &UnitSystem, ideal: &Ideal) -> Result<Principality> {
    let n = ideal.norm();
    if n == BigInt::from(1) {
        return Ok(Principality::Generator(FieldElement::one()));
    }
    let nf = n
        .to_f64()
        .ok_or_else(|| Error::Internal("ideal norm too large".into()))?;
    let radius = units.shortest_log_length() / 3f64.sqrt() + ROUNDING_REACH + 0.05;
    if !radius.is_finite() || radius <= 0.0 {
        return Err(Error::Internal(format!(
            "inconsistent search radius {radius}"
        )));
    }
    let mut scanner = CellScanner::new(k, ideal.basis(), nf.ln() / 3.0, false);
    let cells = cells_in_shell(-1, (radius * radius).floor() as i64, false);
    for &c in &cells {
        for p in scanner.scan(c)? {
            let prod = (p.scaled[0] * p.scaled[1] * p.scaled[2]).abs();
            if (prod - 1.0).abs() > 1e-6 {
                continue;
            }
            if k.norm_integral(&p.coords).abs() != n {
                continue;
            }
            if &Ideal::principal(k, &p.coords)? != ideal {
                return Err(Error::Internal(
                    "generator does not reproduce the ideal".into(),
                ));
            }
            return Ok(Principality::Generator(k.from_integral(&p.coords)));
        }
    }
    Ok(Principality::Absent {
        radius,
        cells: cells.len(),
    })
}

/// `h·R` from the class number formula, with an error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AnalyticHr {
    pub value: f64,
    pub error: f64,
}

/// `h R = |Σ_a χ(a) log|2 sin(π a / f)||^2 / 4` for a primitive cubic
/// character `χ` of conductor `f` (prime, or 9).
pub fn analytic_hr(f: u64) -> Result<AnalyticHr> {
    if !(f == 9 || (is_prime(f) && f % 3 == 1)) {
        return Err(Error::InvalidConductor(
            f.to_string(),
            "analytic h·R needs a prime conductor or 9".into(),
        ));
    }
    // (Z/fZ)^x is cyclic in both cases; bucket log terms by index mod 3
    let g = if f == 9 { 2 } else { primitive_root(f) };
    let mut sums = [0.0f64; 3];
    let mut x = 1u64;
    let group = if f == 9 { 6 } else { f - 1 };
    for i in 0..group {
        let t = (2.0 * (PI * x as f64 / f as f64).sin()).abs().ln();
        sums[(i % 3) as usize] += t;
        x = x * g % f;
    }
    debug_assert_eq!(pow_mod_u64(g, group, f), 1);
    let [a0, a1, a2] = sums;
    let s2 = a0 * a0 + a1 * a1 + a2 * a2 - a0 * a1 - a1 * a2 - a2 * a0;
    let value = s2 / 4.0;
    let scale: f64 = sums.iter().map(|s| s.abs()).sum::<f64>() + (f as f64).ln() * group as f64;
    Ok(AnalyticHr {
        value,
        error: scale * scale * 1e-15,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PrimeOutcome {
    /// `(p)` itself is prime.
    Inert,
    Principal {
        generator: String,
    },
    NotPrincipal {
        radius: f64,
        cells: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TestedPrime {
    pub p: u64,
    pub ideal: String,
    pub outcome: PrimeOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "snake_case")]
pub enum ClassVerdict {
    HIsOne,
    HGreaterOne(String),
    Undecided(String),
}

impl std::fmt::Display for ClassVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ClassVerdict::HIsOne => f.write_str("h = 1"),
            ClassVerdict::HGreaterOne(w) => write!(f, "h > 1 ({w})"),
            ClassVerdict::Undecided(r) => write!(f, "undecided ({r})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassNumberReport {
    pub conductor: u64,
    pub conductor_check: ConductorCheck,
    pub minkowski_bound: String,
    pub tested_primes: Vec<TestedPrime>,
    pub analytic_hr: AnalyticHr,
    pub regulator: f64,
    pub ratio: f64,
    pub verdict: ClassVerdict,
}

impl ClassNumberReport {
    /// A report for a conductor rejected by the pre-check.
    pub fn precheck_failure(f: u64, check: ConductorCheck) -> ClassNumberReport {
        let reason = match &check {
            ConductorCheck::Fail(r) => r.clone(),
            ConductorCheck::Pass => String::new(),
        };
        ClassNumberReport {
            conductor: f,
            conductor_check: check,
            minkowski_bound: String::new(),
            tested_primes: Vec::new(),
            analytic_hr: AnalyticHr {
                value: f64::NAN,
                error: f64::NAN,
            },
            regulator: f64::NAN,
            ratio: f64::NAN,
            verdict: ClassVerdict::HGreaterOne(reason),
        }
    }

    /// Canonical text of the exact parts of the report (no floating-point
    /// values), used for the digest.
    pub fn canonical_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "conductor\t{}", self.conductor);
        let check = match &self.conductor_check {
            ConductorCheck::Pass => "pass".to_string(),
            ConductorCheck::Fail(r) => format!("fail\t{r}"),
        };
        let _ = writeln!(s, "conductor_check\t{check}");
        let _ = writeln!(s, "minkowski_bound\t{}", self.minkowski_bound);
        for t in &self.tested_primes {
            let o = match &t.outcome {
                PrimeOutcome::Inert => "inert".to_string(),
                PrimeOutcome::Principal { generator } => format!("principal\t{generator}"),
                PrimeOutcome::NotPrincipal { .. } => "not_principal".to_string(),
            };
            let _ = writeln!(s, "prime\t{}\t{}\t{o}", t.p, t.ideal);
        }
        let v = match &self.verdict {
            ClassVerdict::HIsOne => "h_is_one".to_string(),
            ClassVerdict::HGreaterOne(w) => format!("h_greater_one\t{w}"),
            ClassVerdict::Undecided(r) => format!("undecided\t{r}"),
        };
        let _ = writeln!(s, "verdict\t{v}");
        s
    }

    /// SHA-256 of [`Self::canonical_text`], hex encoded.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_text().as_bytes()))
    }
}

/// Sweep all prime ideals of norm up to the Minkowski bound and combine
/// with the analytic check. Marks `units` as verified fundamental when
/// the verdict is `h = 1`.
pub fn class_number_one(k: &CubicField, units: &mut UnitSystem) -> Result<ClassNumberReport> {
    let f = k.conductor();
    let check = conductor_precheck(f);
    if !check.passed() {
        return Ok(ClassNumberReport::precheck_failure(f, check));
    }
    let bound = minkowski_bound(k);
    let limit = bound.floor().to_integer().to_u64().unwrap_or(0);
    let mut tested = Vec::new();
    let mut witness: Option<String> = None;
    for p in primes().take_while(|&p| p <= limit) {
        let (kind, ps) = decompose_prime(k, p)?;
        match kind {
            Splitting::Inert => tested.push(TestedPrime {
                p,
                ideal: format!("({p})"),
                outcome: PrimeOutcome::Inert,
            }),
            Splitting::Ramified | Splitting::Split => {
                // conjugate primes share principality: test one, transport
                // its generator with the automorphism
                let first = &ps[0];
                let res = is_principal(k, units, first.ideal())?;
                for q in &ps {
                    let outcome = match &res {
                        Principality::Generator(g) => {
                            let gi = k.to_integral(g).expect("generator is integral");
                            let mut h = gi.clone();
                            let mut found = None;
                            for _ in 0..3 {
                                if &Ideal::principal(k, &h)? == q.ideal() {
                                    found = Some(h.clone());
                                    break;
                                }
                                h = k.automorphism(&h);
                            }
                            let h = found.ok_or_else(|| {
                                Error::Internal("conjugate generator not found".into())
                            })?;
                            PrimeOutcome::Principal {
                                generator: k.from_integral(&h).to_string(),
                            }
                        }
                        Principality::Absent { radius, cells } => {
                            if witness.is_none() {
                                witness = Some(q.display(k).to_string());
                            }
                            PrimeOutcome::NotPrincipal {
                                radius: *radius,
                                cells: *cells,
                            }
                        }
                    };
                    tested.push(TestedPrime {
                        p,
                        ideal: q.display(k).to_string(),
                        outcome,
                    });
                }
            }
        }
    }
    let hr = analytic_hr(f)?;
    let regulator = units.regulator_f64();
    let ratio = hr.value / regulator;
    let near_one = (ratio - 1.0).abs() <= ANALYTIC_TOLERANCE;
    let verdict = match (&witness, near_one) {
        (None, true) => ClassVerdict::HIsOne,
        (Some(w), false) if ratio > 1.0 + ANALYTIC_TOLERANCE => {
            ClassVerdict::HGreaterOne(w.clone())
        }
        (None, false) => ClassVerdict::Undecided(format!(
            "all ideals below the Minkowski bound are principal but h·R / R = {ratio:.4}"
        )),
        (Some(w), _) => {
            ClassVerdict::Undecided(format!("{w} is not principal but h·R / R = {ratio:.4}"))
        }
    };
    if verdict == ClassVerdict::HIsOne {
        units.set_status(FundamentalStatus::Verified);
    }
    Ok(ClassNumberReport {
        conductor: f,
        conductor_check: check,
        minkowski_bound: format_rational(&bound),
        tested_primes: tested,
        analytic_hr: hr,
        regulator,
        ratio,
        verdict,
    })
}

fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
