#![allow(dead_code)]

use proptest::prelude::*;
use qsov::exactnum::{int, QParam, Scalar};
use qsov::monodromy::{LOperator, ModelConfig, Site};

pub fn q75() -> QParam {
    QParam::generic(Scalar::new(7.into(), 5.into())).unwrap()
}

/// Nonzero rationals with small numerators and denominators.
pub fn rational() -> impl Strategy<Value = Scalar> {
    (prop_oneof![-40i64..=-1, 1i64..=40], 1i64..=12).prop_map(|(n, d)| Scalar::new(n.into(), d.into()))
}

/// Whether `x/y` lies on a short q-orbit (`q^{2m}`, `|m| ≤ 8`).
pub fn resonant(x: &Scalar, y: &Scalar, q: &QParam) -> bool {
    let r = x / y;
    (-8..=8).any(|m| q.pow(2 * m) == r)
}

pub fn build(cfg: &ModelConfig) -> LOperator {
    LOperator::build(cfg).unwrap()
}

/// One cyclic site at `y = 2` for rank `n`.
pub fn cyclic_one(n: usize) -> LOperator {
    build(&ModelConfig::with_sites(n, vec![Site::cyclic(int(2))]))
}

/// The N = 2 model with a cyclic site at 2 and an evaluation site at 3.
pub fn n2_mixed() -> LOperator {
    build(&ModelConfig::with_sites(2, vec![Site::cyclic(int(2)), Site::eval(int(3))]))
}

/// N = 3 with one evaluation site on Sym² at 3.
pub fn n3_sym2() -> LOperator {
    let mut s = Site::eval(int(3));
    s.sym = 2;
    build(&ModelConfig::with_sites(3, vec![s]))
}

/// The fundamental models used for the relation checks.
pub const FUNDAMENTAL: [(usize, usize); 5] = [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1)];
