use std::time::{Duration, Instant};

use num_bigint::BigInt;

use cubic_euclid::classnum::ClassVerdict;
use cubic_euclid::ideal::{decompose_prime, Ideal, ResidueRing, Splitting};
use cubic_euclid::parse::{parse_element, parse_polynomial};
use cubic_euclid::search::{generates_quotient, non_wieferich_test, primitive_root_test};
use cubic_euclid::units::{is_unit, UnitSearch};
use cubic_euclid::verdict::{analyze, euclidean_verdict, FieldInput, PipelineOptions, Verdict};
use cubic_euclid::{CubicField, FieldElement};

fn field() -> CubicField {
    CubicField::build(&parse_polynomial("x^3-x^2-24x+27").unwrap()).unwrap()
}

#[test]
fn f73_end_to_end() {
    let t = Instant::now();
    let k = field();
    assert_eq!(k.conductor(), 73);
    assert_eq!(k.discriminant(), &BigInt::from(73 * 73));

    let a = analyze(k.clone(), &PipelineOptions::default()).unwrap();
    assert_eq!(a.report.verdict, ClassVerdict::HIsOne);

    let (kind, ps) = decompose_prime(&k, 3).unwrap();
    assert_eq!(kind, Splitting::Split);
    assert_eq!(ps.len(), 3);
    let mut product = Ideal::unit();
    for p in &ps {
        assert_eq!(p.residue_degree(), 1);
        assert_eq!(p.norm(), BigInt::from(3));
        product = product.mul(&k, p.ideal());
    }
    let three = Ideal::from_element(&k, &FieldElement::from_int(3)).unwrap();
    assert_eq!(product, three);

    let eps = parse_element("2/3a^2-14/3a+7").unwrap();
    assert!(is_unit(&k, &eps));
    assert!(
        a.units.express(&k, &eps).is_some(),
        "unit outside the computed group"
    );
    let pi = Ideal::from_element(&k, &parse_element("1/3a^2+2/3a-11").unwrap()).unwrap();
    let p = ps
        .iter()
        .find(|p| p.ideal() == &pi)
        .expect("pi lies above 3");

    // eps = -1 mod pi
    let r1 = ResidueRing::new(&k, p, 1).unwrap();
    assert_eq!(r1.reduce(&k, &eps).unwrap(), 2);
    assert!(primitive_root_test(&k, &eps, p).unwrap());
    assert_eq!(r1.multiplicative_order(&k, &eps).unwrap(), 2);

    // eps^2 = 7 mod pi^2
    let r2 = ResidueRing::new(&k, p, 2).unwrap();
    let sq = k.mul(&eps, &eps);
    assert_eq!(r2.reduce(&k, &sq).unwrap(), 7);
    assert!(non_wieferich_test(&k, &eps, p).unwrap());
    assert!(generates_quotient(&k, &eps, p).unwrap());

    let v = euclidean_verdict(
        &FieldInput::Polynomial(k.polynomial().clone()),
        &PipelineOptions::default(),
    )
    .unwrap();
    assert!(matches!(v, Verdict::Euclidean { .. }), "{}", v.label());
    if cfg!(not(debug_assertions)) {
        assert!(t.elapsed() < Duration::from_secs(5));
    }
}

#[test]
fn unit_search_radius_does_not_change_report() {
    let k = field();
    let a = analyze(k.clone(), &PipelineOptions::default()).unwrap();
    let wide = PipelineOptions {
        units: UnitSearch {
            initial_radius: 2.0,
            ..UnitSearch::default()
        },
        ..PipelineOptions::default()
    };
    let b = analyze(k, &wide).unwrap();
    assert_eq!(a.report.digest(), b.report.digest());
}
