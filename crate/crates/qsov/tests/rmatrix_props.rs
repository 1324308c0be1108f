mod common;

use common::{q75, rational};
use proptest::prelude::*;
use qsov::rmatrix::RMatrix;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn yang_baxter_rank_two_and_three(x in rational(), y in rational(), z in rational()) {
        for m in [2, 3] {
            let rm = RMatrix::new(m, &q75());
            prop_assert!(rm.ybe_residual(&x, &y, &z).is_zero());
        }
    }

    #[test]
    fn unitarity_scalar(x in rational(), y in rational()) {
        for m in [2, 3] {
            let rm = RMatrix::new(m, &q75());
            prop_assert!(rm.unitarity_residual(&x, &y).is_zero());
        }
    }

    #[test]
    fn degenerate_point_is_rank_deficient(x in rational()) {
        // r(x, xq^{-2}) drops rank on the antisymmetric line.
        let q = q75();
        let rm = RMatrix::new(2, &q);
        let r = rm.eval(&x, &(&x * q.pow(-2)));
        prop_assert_eq!(qsov::tensorspace::rank(&r), 3);
    }
}
