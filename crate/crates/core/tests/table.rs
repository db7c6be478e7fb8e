use std::collections::BTreeSet;

use cubic_euclid::catalog::{bundled_rows, check_table, BUNDLED_TABLE};
use cubic_euclid::verdict::PipelineOptions;
use cubic_euclid::CubicField;

#[test]
fn rows_have_their_conductor() {
    for row in bundled_rows() {
        let k = CubicField::build(&row.polynomial).unwrap();
        assert_eq!(k.conductor(), row.conductor);
        let reference = CubicField::from_conductor(row.conductor).unwrap();
        assert!(
            reference.is_same_field(&row.polynomial),
            "row {}",
            row.conductor
        );
    }
}

#[test]
fn failing_rows_are_the_known_ones() {
    let rows = check_table(BUNDLED_TABLE, &PipelineOptions::default());
    assert_eq!(rows.len(), 77);
    let failing: BTreeSet<u64> = rows
        .iter()
        .filter(|r| !r.passed)
        .filter_map(|r| r.conductor)
        .collect();
    assert_eq!(failing, BTreeSet::from([79, 367, 691]));
    let r79 = rows.iter().find(|r| r.conductor == Some(79)).unwrap();
    assert_eq!(r79.generated_order, Some(136));
    assert_eq!(r79.group_order, Some(272));
}
