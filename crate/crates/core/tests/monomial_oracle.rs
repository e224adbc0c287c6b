mod common;

use common::{check_monomial_case, monomial_case};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn monomial_operations_match_lattice_oracles(case in monomial_case()) {
        if let Err(e) = check_monomial_case(&case) {
            return Err(TestCaseError::fail(format!("{e} in {case:?}")));
        }
    }
}

#[test]
fn fixed_plane_instance() {
    let case = common::MonomialCase { nvars: 2, a: vec![vec![2, 0], vec![1, 1]], b: vec![vec![0, 3], vec![1, 0]], powers: vec![3, 2] };
    check_monomial_case(&case).unwrap();
    let ctx = common::general_ring(2);
    let a = common::ideal_of(&ctx, &[vec![3, 0], vec![1, 1], vec![0, 2]]);
    assert_eq!(a.colength().unwrap(), 4);
}
