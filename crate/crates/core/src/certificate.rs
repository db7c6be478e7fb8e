//! Portable Euclidean certificates: JSON export, strict parsing and
//! independent re-verification.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::arith::is_prime;
use crate::classnum::{class_number_one, ClassNumberReport, ClassVerdict};
use crate::error::{Error, Result};
use crate::field::{CubicField, CubicPolynomial, FieldElement};
use crate::ideal::{decompose_prime, Ideal, PrimeIdeal, ResidueRing, Splitting};
use crate::search::AdmissibleWitness;
use crate::units::{find_units, is_unit, UnitSearch};

/// Version string written into and required of every certificate.
pub const TOOL_VERSION: &str = concat!("cubic-euclid ", env!("CARGO_PKG_VERSION"));

/// On-disk form: every number is a string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    conductor: String,
    polynomial: [String; 3],
    unit: [String; 3],
    prime_q: String,
    prime_ideal_second_generator: [String; 3],
    order_mod_q: String,
    residue_mod_q2: String,
    class_report_digest: String,
    tool_version: String,
}

/// An admissible-prime certificate. Parsing only checks syntax; use
/// [`verify_certificate`] for the mathematics.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub conductor: u64,
    pub polynomial: CubicPolynomial,
    pub unit: FieldElement,
    pub prime_q: u64,
    pub prime_ideal_second_generator: FieldElement,
    pub order_mod_q: u64,
    pub residue_mod_q2: u128,
    pub class_report_digest: String,
    pub tool_version: String,
}

fn rational_text(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

fn coords_text(x: &FieldElement) -> [String; 3] {
    let c = x.coords();
    [
        rational_text(&c[0]),
        rational_text(&c[1]),
        rational_text(&c[2]),
    ]
}

fn is_decimal(s: &str) -> bool {
    let d = s.strip_prefix('-').unwrap_or(s);
    !d.is_empty()
        && d.bytes().all(|b| b.is_ascii_digit())
        && (d == "0" || !d.starts_with('0'))
        && s != "-0"
}

fn parse_decimal(s: &str) -> Option<BigInt> {
    if is_decimal(s) {
        s.parse().ok()
    } else {
        None
    }
}

fn parse_unsigned<T: std::str::FromStr>(s: &str) -> Option<T> {
    if is_decimal(s) && !s.starts_with('-') {
        s.parse().ok()
    } else {
        None
    }
}

/// `num/den` in lowest terms with `den > 0`.
fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = s.split_once('/')?;
    let n = parse_decimal(n)?;
    let d = parse_decimal(d)?;
    if !d.is_positive() || !n.gcd(&d).is_one() {
        return None;
    }
    Some(BigRational::new_raw(n, d))
}

fn parse_coords(s: &[String; 3]) -> Option<FieldElement> {
    Some(FieldElement::new([
        parse_rational(&s[0])?,
        parse_rational(&s[1])?,
        parse_rational(&s[2])?,
    ]))
}

/// Byte offset of the value of `key` in `src`, for error locations.
fn key_offset(src: &str, key: &str) -> usize {
    src.find(&format!("\"{key}\"")).unwrap_or(0)
}

fn line_col_offset(src: &str, line: usize, column: usize) -> usize {
    let start: usize = src
        .split_inclusive('\n')
        .take(line.saturating_sub(1))
        .map(str::len)
        .sum();
    (start + column.saturating_sub(1)).min(src.len())
}

impl Certificate {
    /// Assemble a certificate from a search result.
    pub fn new(k: &CubicField, w: &AdmissibleWitness, report: &ClassNumberReport) -> Certificate {
        Certificate {
            conductor: k.conductor(),
            polynomial: k.polynomial().clone(),
            unit: w.unit.clone(),
            prime_q: w.q(),
            prime_ideal_second_generator: k.from_integral(w.prime.generator_integral()),
            order_mod_q: w.order_mod_q,
            residue_mod_q2: w.residue_mod_q2,
            class_report_digest: report.digest(),
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        let p = &self.polynomial;
        let wire = Wire {
            conductor: self.conductor.to_string(),
            polynomial: [p.c2.to_string(), p.c1.to_string(), p.c0.to_string()],
            unit: coords_text(&self.unit),
            prime_q: self.prime_q.to_string(),
            prime_ideal_second_generator: coords_text(&self.prime_ideal_second_generator),
            order_mod_q: self.order_mod_q.to_string(),
            residue_mod_q2: self.residue_mod_q2.to_string(),
            class_report_digest: self.class_report_digest.clone(),
            tool_version: self.tool_version.clone(),
        };
        let mut s = serde_json::to_string_pretty(&wire).expect("certificate serializes");
        s.push('\n');
        s
    }

    /// Strict parse. Every failure is an [`Error::Parse`] with a byte offset.
    pub fn from_json(src: &str) -> Result<Certificate> {
        let wire: Wire = serde_json::from_str(src)
            .map_err(|e| Error::parse(line_col_offset(src, e.line(), e.column()), e.to_string()))?;
        let bad =
            |key: &str, what: &str| Error::parse(key_offset(src, key), format!("{key}: {what}"));
        let conductor = parse_unsigned(&wire.conductor)
            .ok_or_else(|| bad("conductor", "expected a decimal integer"))?;
        let poly: Vec<BigInt> = wire
            .polynomial
            .iter()
            .map(|c| parse_decimal(c))
            .collect::<Option<_>>()
            .ok_or_else(|| bad("polynomial", "expected three decimal integers"))?;
        let polynomial =
            CubicPolynomial::from_big(poly[0].clone(), poly[1].clone(), poly[2].clone());
        let unit = parse_coords(&wire.unit)
            .ok_or_else(|| bad("unit", "expected three reduced fractions num/den"))?;
        let prime_q = parse_unsigned(&wire.prime_q)
            .ok_or_else(|| bad("prime_q", "expected a decimal integer"))?;
        let gen = parse_coords(&wire.prime_ideal_second_generator).ok_or_else(|| {
            bad(
                "prime_ideal_second_generator",
                "expected three reduced fractions num/den",
            )
        })?;
        let order_mod_q = parse_unsigned(&wire.order_mod_q)
            .ok_or_else(|| bad("order_mod_q", "expected a decimal integer"))?;
        let residue_mod_q2 = parse_unsigned(&wire.residue_mod_q2)
            .ok_or_else(|| bad("residue_mod_q2", "expected a decimal integer"))?;
        let d = &wire.class_report_digest;
        if d.len() != 64
            || !d
                .bytes()
                .all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b))
        {
            return Err(bad(
                "class_report_digest",
                "expected 64 lowercase hex digits",
            ));
        }
        Ok(Certificate {
            conductor,
            polynomial,
            unit,
            prime_q,
            prime_ideal_second_generator: gen,
            order_mod_q,
            residue_mod_q2,
            class_report_digest: d.clone(),
            tool_version: wire.tool_version,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VerifyOptions {
    /// Accept the recorded class report digest instead of recomputing `h`.
    pub trust_class_number: bool,
    pub units: UnitSearch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{}\t{}\t{}",
                if c.passed { "ok" } else { "FAIL" },
                c.name,
                c.detail
            );
        }
        let _ = writeln!(s, "result\t{}", if self.passed() { "pass" } else { "fail" });
        s
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check {
            name,
            passed,
            detail: detail.into(),
        });
        passed
    }
}

/// Re-derive every claim of a certificate from scratch.
pub fn verify_certificate(cert: &Certificate, opts: &VerifyOptions) -> VerificationReport {
    let mut r = VerificationReport { checks: Vec::new() };
    r.push(
        "tool_version",
        cert.tool_version == TOOL_VERSION,
        format!("{:?}", cert.tool_version),
    );
    let k = match CubicField::build(&cert.polynomial) {
        Ok(k) => {
            r.push(
                "field",
                true,
                format!("{} defines a cyclic cubic field", cert.polynomial),
            );
            k
        }
        Err(e) => {
            r.push("field", false, e.to_string());
            return r;
        }
    };
    r.push(
        "conductor",
        k.conductor() == cert.conductor,
        format!("computed {}, claimed {}", k.conductor(), cert.conductor),
    );
    let unit_ok = is_unit(&k, &cert.unit);
    r.push(
        "unit",
        unit_ok,
        format!("{} has norm {}", cert.unit, k.norm(&cert.unit)),
    );
    let prime = match check_prime(&k, cert) {
        Ok(p) => {
            r.push(
                "prime_ideal",
                true,
                format!("{} is a degree-one unramified prime", p.display(&k)),
            );
            Some(p)
        }
        Err(e) => {
            r.push("prime_ideal", false, e);
            None
        }
    };
    if let (Some(p), true) = (&prime, unit_ok) {
        match residue_evidence(&k, &cert.unit, p) {
            Ok((order, residue)) => {
                let q = cert.prime_q;
                r.push(
                    "primitive_root",
                    order == q - 1 && cert.order_mod_q == order,
                    format!(
                        "order modulo the prime {order}, claimed {}, needed {}",
                        cert.order_mod_q,
                        q - 1
                    ),
                );
                r.push(
                    "non_wieferich",
                    residue != 1 && cert.residue_mod_q2 == residue,
                    format!(
                        "unit^(q-1) mod prime^2 is {residue}, claimed {}",
                        cert.residue_mod_q2
                    ),
                );
            }
            Err(e) => {
                r.push("residues", false, e.to_string());
            }
        }
    } else {
        r.push("residues", false, "skipped: unit or prime ideal invalid");
    }
    if opts.trust_class_number {
        r.push(
            "class_number",
            true,
            format!("trusted digest {}", cert.class_report_digest),
        );
    } else {
        match recompute_class_number(&k, opts) {
            Ok(report) => {
                let h1 = report.verdict == ClassVerdict::HIsOne;
                let digest = report.digest();
                r.push("class_number", h1, format!("verdict {}", report.verdict));
                r.push(
                    "class_report_digest",
                    digest == cert.class_report_digest,
                    format!("computed {digest}"),
                );
            }
            Err(e) => {
                r.push("class_number", false, e.to_string());
            }
        }
    }
    r
}

fn recompute_class_number(k: &CubicField, opts: &VerifyOptions) -> Result<ClassNumberReport> {
    let mut units = find_units(k, &opts.units)?;
    class_number_one(k, &mut units)
}

fn check_prime(k: &CubicField, cert: &Certificate) -> std::result::Result<PrimeIdeal, String> {
    let q = cert.prime_q;
    if q == 2 || !is_prime(q) {
        return Err(format!("prime_q = {q} is not an odd prime"));
    }
    if k.discriminant().is_multiple_of(&BigInt::from(q)) {
        return Err(format!("{q} ramifies"));
    }
    let gen = &cert.prime_ideal_second_generator;
    let ideal = Ideal::two_element(k, &BigInt::from(q), gen).map_err(|e| e.to_string())?;
    if ideal.norm() != BigInt::from(q) {
        return Err(format!("ideal has norm {}, not {q}", ideal.norm()));
    }
    let (kind, ps) = decompose_prime(k, q).map_err(|e| e.to_string())?;
    if kind != Splitting::Split {
        return Err(format!("{q} does not split completely"));
    }
    let p = ps
        .into_iter()
        .find(|p| p.ideal() == &ideal)
        .ok_or_else(|| "ideal is not among the primes above q".to_string())?;
    let canonical = k.from_integral(p.generator_integral());
    if &canonical != gen {
        return Err(format!("second generator is not the canonical {canonical}"));
    }
    Ok(p)
}

/// Order of `unit` modulo `𝔮` and the residue of `unit^(q-1)` modulo `𝔮^2`.
fn residue_evidence(k: &CubicField, unit: &FieldElement, p: &PrimeIdeal) -> Result<(u64, u128)> {
    let q = p.residue_char();
    let ring1 = ResidueRing::new(k, p, 1)?;
    let ring2 = ResidueRing::new(k, p, 2)?;
    let order = ring1.multiplicative_order(k, unit)?;
    let r = ring2.reduce(k, unit)?;
    Ok((order, ring2.pow(r, (q - 1) as u128)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_syntax() {
        assert!(parse_rational("7/1").is_some());
        assert!(parse_rational("-2/3").is_some());
        assert!(parse_rational("0/1").is_some());
        assert!(parse_rational("7").is_none());
        assert!(parse_rational("2/4").is_none());
        assert!(parse_rational("2/-3").is_none());
        assert!(parse_rational("02/3").is_none());
        assert!(parse_rational("-0/1").is_none());
        assert!(parse_rational("0/2").is_none());
    }

    #[test]
    fn garbage_is_a_parse_error() {
        assert!(matches!(
            Certificate::from_json("\u{1}\u{2}xyz"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            Certificate::from_json("{}"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn offsets_point_into_the_document() {
        let src = "{\n  \"conductor\": [\n}";
        match Certificate::from_json(src) {
            Err(Error::Parse { offset, .. }) => assert!(offset <= src.len()),
            other => panic!("{other:?}"),
        }
    }
}
