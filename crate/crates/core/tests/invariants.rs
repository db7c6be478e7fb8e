mod support;

use proptest::prelude::*;

use support::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn norm_is_multiplicative(fi in 0usize..1000, x in element(), y in element()) {
        prop_norm_multiplicative(fi, &x, &y)?;
    }

    #[test]
    fn split_shape_matches_cubic_residue(fi in 0usize..1000, qi in 0usize..1000) {
        let qs = small_primes(500);
        prop_split_shape(fi, qs[qi % qs.len()])?;
    }

    #[test]
    fn unit_group_mod_square_has_q_q_minus_1_elements(fi in 0usize..1000, pi in 0usize..100) {
        prop_unit_group_size(fi, pi)?;
    }

    #[test]
    fn single_field_mutations_are_rejected(
        ci in 0usize..3,
        key in 0usize..9,
        slot in 0usize..64,
        delta in -5i64..=5,
    ) {
        prop_mutation_rejected(ci, key, slot, delta)?;
    }

    #[test]
    fn printed_elements_parse_back(x in element()) {
        prop_parser_round_trip(&x)?;
    }
}

#[test]
fn table_expressions_round_trip() {
    support::table_expressions_round_trip().unwrap();
}
