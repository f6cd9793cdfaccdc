//! Regressions against the published dependency-count table beyond the
//! acceptance battery.

use hforge_core::lindep::{
    exhaustive_search, predicted_point_sets, predicted_sets, EigLabel, OrbitContext,
};

#[test]
fn d6_middle_eigenspace_counts() {
    // exhaustive count 635,052 with prediction 75,342
    let ctx = OrbitContext::random(6, EigLabel::HEta, 3).unwrap();
    let sets = exhaustive_search(&ctx, 1e-10, false).unwrap();
    assert_eq!(sets.len(), 635_052);
    assert_eq!(predicted_point_sets(6, EigLabel::HEta).len(), 75_342);
}

#[test]
fn d9_largest_eigenspace_prediction() {
    // the d = 9 scan itself is out of desk scope, but the combinatorial
    // prediction (78,795 of the observed 79,767) is cheap and exact
    let ctx = OrbitContext::random(9, EigLabel::H1, 3).unwrap();
    let sets = predicted_sets(&ctx, 1e-10).unwrap();
    assert_eq!(sets.len(), 78_795);
}
