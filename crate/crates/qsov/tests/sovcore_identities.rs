mod common;

use common::{build, cyclic_one, n2_mixed, n3_sym2, q75};
use qsov::exactnum::{frac, int};
use qsov::monodromy::{BlockSource, ModelConfig, Site};
use qsov::sovcore::{
    check_corollary_van, check_lemma1, check_lemma2, check_lemma3, check_theorem2_structure, exchange_factor,
    lemma3_coefficient, phi_ratio, q_power, theorem1_commutator, vanishing_tensor, BFused, Separator,
};
use qsov::tensorspace::{determinant_is_zero, Mat};
use qsov::Error;

#[test]
fn lemma1_and_corollary_on_small_models() {
    let x = frac(17, 10);
    for (n, sites) in [(2usize, 1usize), (2, 2), (3, 1), (3, 2), (4, 1)] {
        let op = build(&ModelConfig::standard(n, sites));
        assert!(check_lemma1(&op, &x).unwrap(), "({n},{sites})");
        for l in 1..n - 1 {
            for k in 0..l {
                assert!(check_corollary_van(&op, k, l, &x).unwrap(), "({n},{sites}) k={k} l={l}");
            }
        }
    }
}

#[test]
fn vanishing_needs_the_special_point() {
    let op = cyclic_one(4);
    let x = frac(17, 10);
    assert!(vanishing_tensor(&op, 0, 1, &x, &frac(-5, 3)).unwrap().iter().any(|m| !m.is_zero()));
    // k = l falls outside the corollary.
    assert!(!check_corollary_van(&op, 1, 1, &x).unwrap());
    assert!(!check_corollary_van(&op, 2, 2, &x).unwrap());
}

#[test]
fn covector_slots_lie_in_projector_image() {
    let op = cyclic_one(4);
    for k in 1..=3 {
        let bf = BFused::build(&op, k, &frac(5, 3)).unwrap();
        bf.check_projector(op.fusion()).unwrap();
        assert_eq!(bf.coordinates(op.fusion()).len(), [0, 3, 3, 1][k]);
    }
    assert!(matches!(BFused::build(&op, 1, &frac(0, 1)), Err(Error::ResonanceDetected(_))));
}

#[test]
fn lemma2_rank_three_all_pairs() {
    let op = build(&ModelConfig::with_sites(3, vec![Site::eval(int(3)), Site::cyclic(int(2))]));
    for (x, y) in [(frac(17, 10), frac(29, 10)), (frac(-3, 4), frac(11, 5)), (frac(5, 2), frac(-7, 3))] {
        for k in 1..=2 {
            for l in 1..=2 {
                let out = check_lemma2(&op, k, l, &x, &y).unwrap();
                assert!(out.holds && !out.lhs_zero, "k={k} l={l} x={x} y={y}");
            }
        }
    }
}

#[test]
fn theorem1_commuting_family() {
    for op in [cyclic_one(3), n3_sym2(), n2_mixed()] {
        for (x, y) in [(frac(17, 10), frac(29, 10)), (frac(-3, 4), frac(11, 5))] {
            assert_eq!(theorem1_commutator(&op, &x, &y).unwrap(), 0);
        }
    }
}

#[test]
fn lemma3_sign_and_sanity_inversion() {
    let op = cyclic_one(3);
    let q = q75();
    let (x, y) = (frac(-3, 4), frac(11, 5));
    for k in 1..=2 {
        let c = lemma3_coefficient(k, &x, &y, &q).unwrap();
        assert!(check_lemma3(&op, k, &x, &y, &c).unwrap());
        assert!(!check_lemma3(&op, k, &x, &y, &(c.clone() * frac(11, 10))).unwrap());
    }
    // Without the (−1)^k sign the odd case fails.
    let s = qsov::exactnum::sigma(1, &x, &y, &q).unwrap();
    assert!(!check_lemma3(&op, 1, &x, &y, &s).unwrap());
}

#[test]
fn phi_scalar_up_to_fixed_q_power() {
    // The dressed-by-top-module covector is λ·b with λ = q^{k(k+1)} φ_k(x,y)
    // under our normalisation of the top vector; the power is model independent.
    let (x, y) = (frac(17, 10), frac(-29, 10));
    for op in [n2_mixed(), cyclic_one(3), cyclic_one(4)] {
        for k in 1..op.aux_rank() + 1 {
            let r = phi_ratio(&op, k, &x, &y).unwrap().expect("proportional");
            assert_eq!(q_power(&r, op.q(), 40), Some((k * (k + 1)) as i64));
        }
    }
}

#[test]
fn separator_reduces_to_d_block_for_rank_two() {
    let op = n2_mixed();
    let sep = Separator::new(&op, vec![int(4)]).unwrap();
    let x = frac(7, 3);
    let (y, _) = sep.y_x(&x).unwrap();
    assert_eq!(y, Mat::scalar_identity(op.dim(), &int(4)));
    assert_eq!(sep.d(&x).unwrap(), op.bd(&x).unwrap().d[0][0]);
}

#[test]
fn separator_invertible_for_rank_three() {
    let op = cyclic_one(3);
    let sep = Separator::new(&op, vec![int(2), int(5)]).unwrap();
    let (y, _) = sep.y_x(&frac(7, 3)).unwrap();
    assert!(!determinant_is_zero(&y));
}

#[test]
fn theorem2_on_kernel_of_b() {
    // z = 3 and z = 75/49 are exact roots of det B for this model.
    let op = n2_mixed();
    let sep = Separator::new(&op, vec![int(1)]).unwrap();
    for y in [int(3), frac(75, 49)] {
        let out = check_theorem2_structure(&sep, &frac(17, 10), &y).unwrap();
        assert!(out.kernel_dim > 0 && out.holds);
    }
    let q = q75();
    let (x, y) = (frac(17, 10), frac(5, 2));
    let lam = exchange_factor(&x, &y, &q).unwrap();
    assert_eq!(lam, (&x * q.value() - &y * q.inv()) / (&x - &y));
    assert!(matches!(exchange_factor(&x, &x, &q), Err(Error::PoleAtEqualArguments(_))));
}
