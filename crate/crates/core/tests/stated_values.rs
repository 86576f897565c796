//! Values quoted in the source description that the implementation does not
//! reproduce. Run with `--ignored` to see them fail.

use qschur::flagvar::{enumerate_x, QuiverShape};
use qschur::reptheory::{nat_matrices_with_sum, necessary_condition};

#[test]
#[ignore = "the forward direction is false: nu = (1,1,1) is realized at m = 1, d = 1"]
fn every_realized_weight_satisfies_the_necessary_condition() {
    let flags = enumerate_x(QuiverShape::new(1).unwrap(), 1, 2, 1_000_000).unwrap();
    for nu in flags.realized_nus() {
        assert!(necessary_condition(&nu.0, 1, 1), "{:?}", nu.0);
    }
}

#[test]
#[ignore = "3x3 matrices over N with entry sum 2 number 45, not 21"]
fn stated_dimension_of_s_q_3_2() {
    assert_eq!(nat_matrices_with_sum(3, 2), 21);
}

#[test]
fn realized_violator_exists() {
    let flags = enumerate_x(QuiverShape::new(1).unwrap(), 1, 2, 1_000_000).unwrap();
    let violators: Vec<_> = flags.realized_nus().into_iter().filter(|nu| !necessary_condition(&nu.0, 1, 1)).collect();
    assert!(violators.iter().any(|nu| nu.0 == [1, 1, 1]));
    assert_eq!(nat_matrices_with_sum(3, 2), 45);
}
