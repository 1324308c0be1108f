mod common;

use common::{build, cyclic_one, n3_sym2, q75, rational, resonant, FUNDAMENTAL};
use proptest::prelude::*;
use qsov::exactnum::int;
use qsov::monodromy::{comm_check, BlockSource, Dressed, LOperator, ModelConfig, Site};
use qsov::Error;

fn models() -> Vec<LOperator> {
    let mut v: Vec<LOperator> = FUNDAMENTAL.iter().map(|&(n, s)| build(&ModelConfig::standard(n, s))).collect();
    v.push(cyclic_one(3));
    v.push(n3_sym2());
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3))]

    #[test]
    fn rtt_and_exchange_relations(x in rational(), y in rational()) {
        prop_assume!(!resonant(&x, &y, &q75()));
        for op in models() {
            prop_assert_eq!(op.rtt_residual(&x, &y), 0);
            let r = comm_check(&op, &x, &y).unwrap();
            prop_assert!(r.is_zero(), "{:?} on {:?}", r, op.config().sites);
        }
    }

    #[test]
    fn dressing_preserves_relations(x in rational(), y in rational(), z in rational()) {
        let q = q75();
        prop_assume!(!resonant(&x, &y, &q) && !resonant(&x, &z, &q) && !resonant(&y, &z, &q));
        let op = cyclic_one(3);
        let d = Dressed::vector(&op, z);
        prop_assert_eq!(d.dim(), 3 * 2);
        prop_assert!(comm_check(&d, &x, &y).unwrap().is_zero());
    }
}

#[test]
fn site_dimensions() {
    assert_eq!(n3_sym2().site_dims(), vec![6]);
    assert_eq!(build(&ModelConfig::standard(3, 2)).dim(), 9);
}

#[test]
fn resonant_inhomogeneities_rejected() {
    let q = q75();
    let y2 = int(2) * q.pow(4);
    let cfg = ModelConfig::with_sites(3, vec![Site::eval(int(2)), Site::eval(y2)]);
    assert!(matches!(LOperator::build(&cfg), Err(Error::Config(_))));
}
