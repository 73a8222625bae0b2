//! Shared builders for the benchmark suite.

use std::sync::Arc;

use cmhodge::{CMGaloisDatum, FiniteGroup, Subgroup};

/// Cyclic datum of the given even degree with conjugation at half a turn.
pub fn cyclic_datum(degree: usize) -> Arc<CMGaloisDatum> {
    assert!(degree % 2 == 0 && degree >= 2);
    let table: Vec<Vec<usize>> = (0..degree)
        .map(|a| (0..degree).map(|b| (a + b) % degree).collect())
        .collect();
    let group = FiniteGroup::from_table(&table).unwrap();
    let fixing = Subgroup::trivial(&group);
    CMGaloisDatum::new(&group, fixing, degree / 2).unwrap()
}

/// A staircase type function of the given weight: values descend from the
/// weight to zero and climb back, satisfying the weight relation.
pub fn staircase_values(degree: usize, weight: i64) -> Vec<i64> {
    let half = degree / 2;
    (0..degree)
        .map(|s| {
            if s < half {
                weight * (half - s) as i64 / half as i64
            } else {
                weight - weight * (degree - s) as i64 / half as i64
            }
        })
        .collect()
}
