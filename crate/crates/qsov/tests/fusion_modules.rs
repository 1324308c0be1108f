mod common;

use common::{q75, rational, resonant};
use proptest::prelude::*;
use qsov::exactnum::{frac, rho};
use qsov::fusion::{antisymmetrizer, antisymmetrizer_raw, Fusion};
use qsov::rmatrix::RMatrix;
use qsov::tensorspace::{rank, Mat};

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn antisymmetrizer_ranks_are_binomial() {
    for m in 1..=3 {
        let rm = RMatrix::new(m, &q75());
        for k in 1..=m {
            let p = antisymmetrizer(k, &rm).unwrap();
            assert_eq!(p.rank, binomial(m, k), "M = {m}, k = {k}");
            assert_eq!(p.projector.matmul(&p.projector), p.projector);
        }
    }
}

#[test]
fn raw_antisymmetrizer_does_not_depend_on_x() {
    let rm = RMatrix::new(3, &q75());
    for k in 2..=3 {
        let a = antisymmetrizer_raw(k, &rm, &frac(1, 1)).unwrap();
        let b = antisymmetrizer_raw(k, &rm, &frac(-13, 4)).unwrap();
        assert_eq!(a, b);
        assert_eq!(rank(&a), binomial(3, k));
    }
}

#[test]
fn top_module_is_a_line() {
    for m in 1..=3 {
        let f = Fusion::new(m, &q75()).unwrap();
        assert_eq!(f.module(m).dim(), 1);
        assert!(f.top_vector().iter().any(|v| *v != frac(0, 1)));
    }
}

#[test]
fn r_on_rank_three_top_module_is_rho() {
    let q = q75();
    let (y, x) = (frac(17, 10), frac(-23, 10));
    let f = Fusion::new(3, &q).unwrap();
    for l in 1..=3 {
        let r = f.r_ww(l, &y, 3, &x).unwrap();
        assert_eq!(r.clone(), Mat::scalar_identity(r.rows(), &rho(l, &y, &x, 4, &q)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn r_on_top_module_is_rho(y in rational(), x in rational()) {
        let q = q75();
        prop_assume!(!resonant(&x, &y, &q));
        for m in [1, 2] {
            let f = Fusion::new(m, &q).unwrap();
            for l in 1..=m {
                let r = f.r_ww(l, &y, m, &x).unwrap();
                prop_assert_eq!(r.clone(), Mat::scalar_identity(r.rows(), &rho(l, &y, &x, m + 1, &q)));
            }
        }
    }
}
