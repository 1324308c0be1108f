mod common;

use common::{build, cyclic_one, n2_mixed, n3_sym2};
use num_complex::Complex64;
use qsov::monodromy::{BlockSource, ModelConfig};
use qsov::spectra::{analyze, certify_degree, joint_diagonalize, CommutingFamily, SeparatorEvaluator, WClass, CHECK_TOL};
use qsov::exactnum::int;

/// `(β, z)` per joint eigenvector of the N = 2 mixed model, from an
/// independent floating-point construction of T(x) and B(x).
const ORACLE: [(f64, f64); 4] = [(5.0 / 7.0, 3.0), (1.0, 75.0 / 49.0), (1.0, 3.0), (1.4, 75.0 / 49.0)];

#[test]
fn joint_spectrum_matches_oracle() {
    let op = n2_mixed();
    let cert = certify_degree(&op, 1).unwrap();
    assert!(cert.holds());
    let fam = CommutingFamily::from_certificate(&cert).unwrap();
    assert_eq!(fam.commutation_defects(), 0);
    let eig = joint_diagonalize(&fam, 1).unwrap();
    assert_eq!(eig.len(), 4);
    let mut got: Vec<(f64, f64)> = eig.iter().map(|e| (e.beta_val.re, e.zroots[0].re)).collect();
    got.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for ((b, z), (ob, oz)) in got.iter().zip(ORACLE) {
        assert!((b - ob).abs() < 1e-9 && (z - oz).abs() < 1e-9, "{got:?}");
    }
    for e in &eig {
        assert!(e.residual < 1e-8 && e.zroots.iter().all(|z| z.im.abs() < 1e-9));
    }
}

#[test]
fn w_shifts_roots_down_by_q_squared() {
    let op = n2_mixed();
    let fam = CommutingFamily::from_certificate(&certify_degree(&op, 1).unwrap()).unwrap();
    let rep = analyze(&op, &fam, 1, CHECK_TOL).unwrap();
    assert!(rep.exchange_pass() && rep.xi_pass(CHECK_TOL));
    // w annihilates the eigenvectors whose root is already the lower point of the orbit.
    assert_eq!((rep.counts.ok, rep.counts.annihilated), (2, 2));
    for e in &rep.eigenvectors {
        for a in e.actions.iter().filter(|a| a.class == WClass::Ok) {
            assert!((a.beta_ratio - Complex64::new(1.4, 0.0)).norm() < 1e-9);
            assert!((e.eigen.zroots[a.j].re - 3.0).abs() < 1e-9);
        }
    }
}

#[test]
fn genus_zero_is_vacuous() {
    let op = cyclic_one(2);
    let cert = certify_degree(&op, 0).unwrap();
    assert!(cert.holds());
    let fam = CommutingFamily::from_certificate(&cert).unwrap();
    let rep = analyze(&op, &fam, 1, CHECK_TOL).unwrap();
    assert_eq!(rep.eigenvectors.len(), 2);
    assert!(rep.eigenvectors.iter().all(|e| e.eigen.zroots.is_empty()));
    assert!(rep.exchange_pass() && rep.w_commute_pass(CHECK_TOL) && rep.xi_pass(CHECK_TOL));
}

#[test]
fn degree_certificates() {
    assert!(certify_degree(&build(&ModelConfig::standard(2, 2)), 1).unwrap().holds());
    assert!(certify_degree(&n3_sym2(), 1).unwrap().holds());
    assert!(certify_degree(&build(&ModelConfig::standard(3, 2)), 4).unwrap().holds());
    // A single fundamental cyclic site gives a constant B for N = 3.
    let c = certify_degree(&cyclic_one(3), 1).unwrap();
    assert_eq!(c.found, Some(0));
    assert!(!c.holds());
}

#[test]
fn separator_evaluator_agrees_with_exact_d() {
    let op = cyclic_one(3);
    let ev = SeparatorEvaluator::new(&op, vec![int(2), int(7)], 40).unwrap();
    let v = qsov::spectra::CVec::from_fn(op.dim(), |i, _| Complex64::new(1.0 + i as f64, 0.5));
    let z = Complex64::new(std::f64::consts::E, 0.3);
    let got = ev.apply_d(z, &v).unwrap();
    let (y, x) = ev.eval_float(z);
    let want = y.lu().solve(&(x * &v)).unwrap();
    assert!((got - &want).norm() < 1e-12 * want.norm());
    let exact = ev.apply_d(Complex64::new(1.75, 0.0), &v).unwrap();
    let d = qsov::spectra::to_cmat(&ev.separator().d(&qsov::exactnum::frac(7, 4)).unwrap());
    assert!((exact - d * &v).norm() < 1e-12);
}
