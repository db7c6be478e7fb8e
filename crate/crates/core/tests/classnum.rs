use cubic_euclid::arith::primitive_root;
use cubic_euclid::classnum::{analytic_hr, conductor_precheck, ClassVerdict, ConductorCheck};
use cubic_euclid::verdict::{analyze, PipelineOptions};
use cubic_euclid::CubicField;

/// `hR = f/4 |L(1, χ)|^2` with `L(1, χ)` summed directly over `n < N`.
fn partial_sum_hr(f: u64, n_max: u64) -> f64 {
    let g = primitive_root(f);
    let mut index = vec![0u64; f as usize];
    let mut x = 1u64;
    for i in 0..f - 1 {
        index[x as usize] = i % 3;
        x = x * g % f;
    }
    let w = 2.0 * std::f64::consts::PI / 3.0;
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for n in 1..n_max {
        let r = n % f;
        if r == 0 {
            continue;
        }
        let t = w * index[r as usize] as f64;
        re += t.cos() / n as f64;
        im += t.sin() / n as f64;
    }
    f as f64 / 4.0 * (re * re + im * im)
}

#[test]
fn small_prime_conductors_have_h_one() {
    for f in [73u64, 79, 97, 103, 109, 127] {
        let k = CubicField::from_conductor(f).unwrap();
        let a = analyze(k, &PipelineOptions::default()).unwrap();
        assert_eq!(a.report.verdict, ClassVerdict::HIsOne, "f = {f}");
        assert!(
            (0.99..=1.01).contains(&a.report.ratio),
            "f = {f}: {}",
            a.report.ratio
        );
        let oracle = partial_sum_hr(f, 2_000_000);
        let hr = analytic_hr(f).unwrap().value;
        assert!(
            (oracle / hr - 1.0).abs() < 1e-3,
            "f = {f}: {oracle} vs {hr}"
        );
        assert!((oracle / a.report.regulator - 1.0).abs() < 1e-2, "f = {f}");
    }
}

#[test]
fn composite_conductors_fail_precheck() {
    for (f, t) in [(63u64, 2), (91, 2), (117, 2)] {
        match conductor_precheck(f) {
            ConductorCheck::Fail(reason) => {
                assert!(reason.contains(&format!("3^{}", t - 1)), "{f}: {reason}")
            }
            ConductorCheck::Pass => panic!("{f} passed"),
        }
    }
}

#[test]
fn conductor_163_has_h_greater_than_one() {
    let k = CubicField::from_conductor(163).unwrap();
    let a = analyze(k, &PipelineOptions::default()).unwrap();
    assert!(
        matches!(a.report.verdict, ClassVerdict::HGreaterOne(_)),
        "{}",
        a.report.verdict
    );
    // h = 4 for this field
    assert!((a.report.ratio - 4.0).abs() < 0.04, "{}", a.report.ratio);
}
