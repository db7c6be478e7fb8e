//! Shared fixtures, brute-force oracles and property bodies for the
//! integration tests and the acceptance run.

#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use cubic_euclid::arith::{is_cubic_residue, is_prime};
use cubic_euclid::catalog::{bundled_rows, parse_witness};
use cubic_euclid::certificate::{verify_certificate, Certificate, VerifyOptions};
use cubic_euclid::ideal::{decompose_prime, Ideal, PrimeIdeal, Splitting};
use cubic_euclid::linalg::IVec3;
use cubic_euclid::parse::{format_element, parse_element};
use cubic_euclid::verdict::{euclidean_verdict, FieldInput, PipelineOptions, Verdict};
use cubic_euclid::{CubicField, FieldElement};

/// Prime conductors `f ≤ 500` of cyclic cubic fields.
pub fn small_conductors() -> Vec<u64> {
    (7..=500).filter(|&f| is_prime(f) && f % 3 == 1).collect()
}

pub fn fields() -> &'static Vec<CubicField> {
    static F: OnceLock<Vec<CubicField>> = OnceLock::new();
    F.get_or_init(|| {
        small_conductors()
            .into_iter()
            .map(|f| CubicField::from_conductor(f).expect("field builds"))
            .collect()
    })
}

pub fn small_primes(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&q| is_prime(q)).collect()
}

/// Order of `x` modulo `m` by walking its powers with exact field
/// arithmetic and canonical reduction.
pub fn brute_order(k: &CubicField, x: &IVec3, m: &Ideal, cap: u64) -> Option<u64> {
    let one = m.reduce(&k.to_integral(&FieldElement::one()).unwrap());
    let x = m.reduce(x);
    let mut y = x.clone();
    for n in 1..=cap {
        if y == one {
            return Some(n);
        }
        y = m.reduce(&k.mul_integral(&y, &x));
    }
    None
}

/// All residue classes of `O_K / m`, from the diagonal of the Hermite basis.
pub fn residue_classes(m: &Ideal) -> Vec<IVec3> {
    let b = m.basis();
    let d: Vec<i64> = (0..3).map(|i| i64::try_from(&b[i][i]).unwrap()).collect();
    let mut out = Vec::new();
    for i in 0..d[0] {
        for j in 0..d[1] {
            for l in 0..d[2] {
                out.push([BigInt::from(i), BigInt::from(j), BigInt::from(l)]);
            }
        }
    }
    out
}

/// `|(O_K/𝔮^2)^×|` by enumeration: classes not in `𝔮`, checked distinct.
pub fn brute_unit_count(k: &CubicField, p: &PrimeIdeal) -> usize {
    let m = p.ideal().pow(k, 2);
    let classes = residue_classes(&m);
    let distinct: HashSet<IVec3> = classes.iter().map(|c| m.reduce(c)).collect();
    assert_eq!(
        distinct.len(),
        classes.len(),
        "class representatives collide"
    );
    classes
        .iter()
        .filter(|c| !p.ideal().contains_integral(c))
        .count()
}

/// All units of `O_K/𝔮^2`, as canonical representatives.
pub fn brute_units(k: &CubicField, p: &PrimeIdeal) -> HashSet<IVec3> {
    let m = p.ideal().pow(k, 2);
    residue_classes(&m)
        .into_iter()
        .filter(|c| !p.ideal().contains_integral(c))
        .map(|c| m.reduce(&c))
        .collect()
}

/// Does `eps` generate `(O_K/𝔮^2)^×`? Decided by comparing the orbit of
/// `eps` with the enumerated unit group.
pub fn brute_generates(k: &CubicField, eps: &FieldElement, p: &PrimeIdeal) -> bool {
    let m = p.ideal().pow(k, 2);
    let x = m.reduce(&k.to_integral(eps).unwrap());
    let mut orbit = HashSet::new();
    let mut y = x.clone();
    while orbit.insert(y.clone()) {
        y = m.reduce(&k.mul_integral(&y, &x));
    }
    orbit == brute_units(k, p)
}

pub fn rational() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=6).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

pub fn element() -> impl Strategy<Value = FieldElement> {
    (rational(), rational(), rational()).prop_map(|(a, b, c)| FieldElement::new([a, b, c]))
}

pub fn prop_norm_multiplicative(
    fi: usize,
    x: &FieldElement,
    y: &FieldElement,
) -> Result<(), TestCaseError> {
    let k = &fields()[fi % fields().len()];
    let lhs = k.norm(&k.mul(x, y));
    let rhs = k.norm(x) * k.norm(y);
    prop_assert_eq!(lhs, rhs);
    Ok(())
}

pub fn prop_split_shape(fi: usize, q: u64) -> Result<(), TestCaseError> {
    let k = &fields()[fi % fields().len()];
    let f = k.conductor();
    let (kind, ps) = decompose_prime(k, q).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let expected = if q == f {
        Splitting::Ramified
    } else if is_cubic_residue(&BigInt::from(q), f).unwrap() {
        Splitting::Split
    } else {
        Splitting::Inert
    };
    prop_assert_eq!(kind, expected, "q = {}, f = {}", q, f);
    let n = match kind {
        Splitting::Split => 3,
        _ => 1,
    };
    prop_assert_eq!(ps.len(), n);
    Ok(())
}

/// Split primes `q ≤ 13` (odd, not the conductor) for field `k`.
pub fn split_primes_13(k: &CubicField) -> Vec<PrimeIdeal> {
    let mut out = Vec::new();
    for q in small_primes(13) {
        if q == 2 || q == k.conductor() {
            continue;
        }
        let (kind, ps) = decompose_prime(k, q).unwrap();
        if kind == Splitting::Split {
            out.extend(ps);
        }
    }
    out
}

pub fn prop_unit_group_size(fi: usize, pi: usize) -> Result<(), TestCaseError> {
    let k = &fields()[fi % fields().len()];
    let ps = split_primes_13(k);
    if ps.is_empty() {
        return Ok(());
    }
    let p = &ps[pi % ps.len()];
    let q = p.residue_char() as usize;
    prop_assert_eq!(brute_unit_count(k, p), q * (q - 1));
    Ok(())
}

pub fn prop_parser_round_trip(x: &FieldElement) -> Result<(), TestCaseError> {
    let s = format_element(x);
    let y = parse_element(&s).map_err(|e| TestCaseError::fail(format!("{s}: {e}")))?;
    prop_assert_eq!(&y, x);
    Ok(())
}

/// Every witness expression of the bundled table survives print and parse.
pub fn table_expressions_round_trip() -> Result<(), String> {
    for row in bundled_rows() {
        let printed = row.witness.to_string();
        let again = parse_witness(&printed).map_err(|e| format!("{printed}: {e}"))?;
        if again != row.witness {
            return Err(format!(
                "row {}: {printed} re-parses differently",
                row.conductor
            ));
        }
    }
    Ok(())
}

/// Certificates for a few fields, computed once.
pub fn base_certificates() -> &'static Vec<Certificate> {
    static C: OnceLock<Vec<Certificate>> = OnceLock::new();
    C.get_or_init(|| {
        [73u64, 79, 97]
            .iter()
            .map(|&f| {
                match euclidean_verdict(&FieldInput::Conductor(f), &PipelineOptions::default())
                    .unwrap()
                {
                    Verdict::Euclidean { certificate, .. } => *certificate,
                    other => panic!("{f}: {}", other.label()),
                }
            })
            .collect()
    })
}

pub const CERT_KEYS: [&str; 9] = [
    "conductor",
    "polynomial",
    "unit",
    "prime_q",
    "prime_ideal_second_generator",
    "order_mod_q",
    "residue_mod_q2",
    "class_report_digest",
    "tool_version",
];

fn bump_integer(s: &str, delta: i64) -> String {
    (s.parse::<BigInt>().unwrap() + delta).to_string()
}

fn bump_numerator(s: &str, delta: i64) -> String {
    let (n, d) = s.split_once('/').unwrap();
    format!("{}/{d}", bump_integer(n, delta))
}

/// Change exactly one field of a certificate document.
pub fn mutate(json: &str, key: usize, slot: usize, delta: i64) -> String {
    let mut v: serde_json::Value = serde_json::from_str(json).unwrap();
    let name = CERT_KEYS[key % CERT_KEYS.len()];
    let field = v.get_mut(name).unwrap();
    let delta = if delta == 0 { 1 } else { delta };
    match name {
        "polynomial" | "unit" | "prime_ideal_second_generator" => {
            let arr = field.as_array_mut().unwrap();
            let i = slot % 3;
            let s = arr[i].as_str().unwrap().to_string();
            arr[i] = if name == "polynomial" {
                bump_integer(&s, delta)
            } else {
                bump_numerator(&s, delta)
            }
            .into();
        }
        "class_report_digest" => {
            let mut s: Vec<u8> = field.as_str().unwrap().bytes().collect();
            let i = slot % s.len();
            s[i] = if s[i] == b'0' { b'1' } else { b'0' };
            *field = String::from_utf8(s).unwrap().into();
        }
        "tool_version" => {
            *field = format!("{}.{}", field.as_str().unwrap(), delta.unsigned_abs()).into();
        }
        _ => {
            let s = field.as_str().unwrap().to_string();
            *field = bump_integer(&s, delta).into();
        }
    }
    serde_json::to_string_pretty(&v).unwrap()
}

/// A mutated certificate must fail to parse or fail verification.
pub fn prop_mutation_rejected(
    ci: usize,
    key: usize,
    slot: usize,
    delta: i64,
) -> Result<(), TestCaseError> {
    let certs = base_certificates();
    let json = certs[ci % certs.len()].to_json();
    let bad = mutate(&json, key, slot, delta);
    prop_assert_ne!(&bad, &json);
    if let Ok(c) = Certificate::from_json(&bad) {
        let r = verify_certificate(&c, &VerifyOptions::default());
        prop_assert!(
            !r.passed(),
            "mutation of {} accepted:\n{}",
            CERT_KEYS[key % 9],
            bad
        );
    }
    Ok(())
}

pub fn is_one(x: &BigRational) -> bool {
    x.abs().is_one()
}
