mod support;

use cubic_euclid::search::generates_quotient;
use cubic_euclid::units::{find_units, UnitSearch};
use cubic_euclid::CubicField;

use support::{brute_generates, split_primes_13};

fn compare(f: u64) -> usize {
    let k = CubicField::from_conductor(f).unwrap();
    let units = find_units(&k, &UnitSearch::default()).unwrap();
    let mut checked = 0;
    for p in split_primes_13(&k) {
        for eps in units.candidate_units(&k, 1) {
            let fast = generates_quotient(&k, &eps, &p).unwrap();
            let slow = brute_generates(&k, &eps, &p);
            assert_eq!(fast, slow, "f = {f}, q = {}, eps = {eps}", p.residue_char());
            checked += 1;
        }
    }
    checked
}

#[test]
fn generates_quotient_matches_enumeration() {
    let mut total = 0;
    for f in [73u64, 79, 97] {
        total += compare(f);
    }
    assert!(total > 0);
}

#[test]
fn generates_quotient_matches_enumeration_up_to_200() {
    for f in support::small_conductors()
        .into_iter()
        .filter(|&f| f <= 200)
    {
        compare(f);
    }
}
