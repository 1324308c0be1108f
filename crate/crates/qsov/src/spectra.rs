//! Spectral side of the separation: exact interpolation of `B(x)`, joint
//! eigenvectors of its coefficients, separated roots `z_j`, and the action
//! of `w_j` via `D(z_j)`.
//!
//! Everything up to the coefficients of `B` and of the `Y`, `X` evaluators
//! is exact; eigenvectors and roots are `f64` complex.

use nalgebra::{DMatrix, DVector, Schur};
use num::Zero;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exactnum::{frac, rationalize, to_f64, Scalar};
use crate::monodromy::BlockSource;
use crate::sovcore::{build_b, Separator};
use crate::tensorspace::{evaluate_polynomial, lagrange_coefficients, Mat};
use crate::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Relative tolerance for eigenvector validation against each coefficient.
pub const EIGEN_TOL: f64 = 1e-8;
/// Default relative tolerance for the exchange, w-commutation and ξ checks.
pub const CHECK_TOL: f64 = 1e-6;
/// Condition-number ceiling for `Y(z_j)`.
pub const COND_MAX: f64 = 1e10;

pub fn to_cmat(m: &Mat) -> CMat {
    CMat::from_fn(m.rows(), m.cols(), |i, j| Complex64::new(to_f64(m.get(i, j)), 0.0))
}

/// Deterministic admissible sample points: nonzero, pairwise distinct, and
/// distinct from everything in `avoid`.
pub fn sample_points(count: usize, avoid: &[Scalar]) -> Vec<Scalar> {
    let mut out: Vec<Scalar> = Vec::with_capacity(count);
    let mut i: i64 = 0;
    while out.len() < count {
        let sign = if i % 2 == 0 { 1 } else { -1 };
        let p = frac(sign * (i + 2), i + 5);
        i += 1;
        if p.is_zero() || avoid.contains(&p) || out.contains(&p) {
            continue;
        }
        out.push(p);
    }
    out
}

/// Exact coefficients `B₀..B_d` of `B(x)` with their degree certificate.
#[derive(Clone, Debug)]
pub struct DegreeCertificate {
    pub expected: usize,
    /// Degree read from the interpolation (highest nonzero coefficient).
    pub found: Option<usize>,
    /// Whether the interpolant reproduced `B` at the extra verification point.
    pub verified: bool,
    pub coeffs: Vec<Mat>,
}

impl DegreeCertificate {
    pub fn holds(&self) -> bool {
        self.verified && self.found == Some(self.expected)
    }
}

/// Interpolates `B` through `g + 2` points, checks that the coefficient of
/// degree `g + 1` vanishes and that `B_g ≠ 0`, and confirms the result at
/// one more point.
pub fn certify_degree(src: &dyn BlockSource, g: usize) -> Result<DegreeCertificate> {
    let xs = sample_points(g + 3, &[]);
    let vals = xs.iter().map(|x| build_b(src, x)).collect::<Result<Vec<_>>>()?;
    let coeffs = lagrange_coefficients(&xs[..g + 2], &vals[..g + 2]);
    let found = coeffs.iter().rposition(|c| !c.is_zero());
    let verified = evaluate_polynomial(&coeffs, &xs[g + 2]) == vals[g + 2];
    Ok(DegreeCertificate { expected: g, found, verified, coeffs })
}

#[derive(Clone, Debug)]
pub struct CommutingFamily {
    /// `B₀..B_g`; `β = B_g`.
    pub coeffs: Vec<Mat>,
}

impl CommutingFamily {
    /// Exact Lagrange interpolation through `xs` (at least `g + 2` points).
    pub fn interpolate(xs: &[Scalar], vals: &[Mat], g: usize) -> Result<Self> {
        if xs.len() < g + 2 || xs.len() != vals.len() {
            return Err(Error::ShapeMismatch(format!("need at least {} samples, got {}", g + 2, xs.len())));
        }
        let coeffs = lagrange_coefficients(xs, vals);
        match coeffs.iter().rposition(|c| !c.is_zero()) {
            Some(d) if d == g => Ok(CommutingFamily { coeffs: coeffs[..=g].to_vec() }),
            Some(d) => Err(Error::DegreeMismatch { expected: g, found: d.to_string() }),
            None => Err(Error::DegreeMismatch { expected: g, found: "B ≡ 0".into() }),
        }
    }

    /// From a certificate, whatever degree it found (used to keep analysing
    /// models whose certificate failed).
    pub fn from_certificate(cert: &DegreeCertificate) -> Option<Self> {
        cert.found.map(|d| CommutingFamily { coeffs: cert.coeffs[..=d].to_vec() })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn beta(&self) -> &Mat {
        self.coeffs.last().expect("nonempty family")
    }

    /// Number of coefficient pairs `(k, l)`, `k < l`, with `[B_k, B_l] ≠ 0`.
    pub fn commutation_defects(&self) -> usize {
        let c = &self.coeffs;
        let mut bad = 0;
        for k in 0..c.len() {
            for l in k + 1..c.len() {
                if !c[k].commutator(&c[l]).is_zero() {
                    bad += 1;
                }
            }
        }
        bad
    }

    pub fn float_coeffs(&self) -> Vec<CMat> {
        self.coeffs.iter().map(to_cmat).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct JointEigenvector {
    #[serde(skip)]
    pub v: CVec,
    #[serde(skip)]
    pub lambdas: Vec<Complex64>,
    #[serde(serialize_with = "ser_cvec")]
    pub zroots: Vec<Complex64>,
    #[serde(serialize_with = "ser_c")]
    pub beta_val: Complex64,
    /// Largest relative residual `‖B_k v − λ_k v‖ / (‖B_k‖ ‖v‖)`.
    #[serde(serialize_with = "ser_f")]
    pub residual: f64,
    /// `β` vanishes on this vector; no roots extracted.
    pub beta_zero: bool,
}

/// 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn ser_f<S: serde::Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_f64(*v))
}

fn ser_c<S: serde::Serializer>(v: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&fmt_f64(v.re))?;
    t.serialize_element(&fmt_f64(v.im))?;
    t.end()
}

fn ser_cvec<S: serde::Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[fmt_f64(z.re), fmt_f64(z.im)])?;
    }
    seq.end()
}

fn frob(m: &CMat) -> f64 {
    m.norm()
}

/// Eigenvalues of a square complex matrix (diagonal of its Schur form).
pub fn eigenvalues(m: &CMat) -> Vec<Complex64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let (_, t) = Schur::new(m.clone()).unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Unit vector spanning the (numerical) kernel of `m`.
fn null_vector(m: &CMat) -> CVec {
    let svd = m.clone().svd(false, true);
    let vt = svd.v_t.expect("requested v_t");
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
    vt.row(imin).adjoint()
}

/// Rayleigh quotients of `v` against each coefficient, and the largest
/// relative residual.
pub fn eigen_data(coeffs: &[CMat], v: &CVec) -> (Vec<Complex64>, f64) {
    let vv = v.dotc(v);
    let nv = v.norm();
    let mut lams = Vec::with_capacity(coeffs.len());
    let mut worst: f64 = 0.0;
    for c in coeffs {
        let cv = c * v;
        let lam = v.dotc(&cv) / vv;
        let res = (cv - v * lam).norm();
        let scale = frob(c) * nv;
        let rel = if scale > 0.0 { res / scale } else { res };
        worst = worst.max(rel);
        lams.push(lam);
    }
    (lams, worst)
}

/// Roots of `Σ λ_k x^k` via the companion matrix, refined by Newton steps.
pub fn polynomial_roots(lams: &[Complex64]) -> Vec<Complex64> {
    let g = lams.len().saturating_sub(1);
    if g == 0 {
        return Vec::new();
    }
    let lead = lams[g];
    let mut comp = CMat::zeros(g, g);
    for i in 1..g {
        comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for k in 0..g {
        comp[(k, g - 1)] = -lams[k] / lead;
    }
    let mut roots = eigenvalues(&comp);
    for z in roots.iter_mut() {
        for _ in 0..3 {
            let (mut p, mut dp) = (Complex64::zero(), Complex64::zero());
            for c in lams.iter().rev() {
                dp = dp * *z + p;
                p = p * *z + c;
            }
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if !step.is_finite() {
                break;
            }
            *z -= step;
        }
    }
    roots
}

fn simple_indices(ev: &[Complex64]) -> Vec<usize> {
    let scale = ev.iter().map(|z| z.norm()).fold(1.0, f64::max);
    (0..ev.len())
        .filter(|&i| (0..ev.len()).all(|j| j == i || (ev[i] - ev[j]).norm() > 1e-6 * scale))
        .collect()
}

/// Joint eigenvectors of the family through a seeded random combination of
/// the coefficients. The combination is re-drawn (up to three times) until
/// its spectrum is simple; the best draw is returned.
pub fn joint_diagonalize(fam: &CommutingFamily, seed: u64) -> Result<Vec<JointEigenvector>> {
    let coeffs = fam.float_coeffs();
    let h = coeffs[0].nrows();
    let g = fam.degree();
    let beta_scale = frob(&coeffs[g]);
    let mut best: Vec<JointEigenvector> = Vec::new();
    for attempt in 0..4u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        let mut comb = CMat::zeros(h, h);
        for c in &coeffs {
            let w: f64 = rng.gen_range(-1.0..1.0);
            comb += c * Complex64::new(w, 0.0);
        }
        let ev = eigenvalues(&comb);
        let simple = simple_indices(&ev);
        let mut found = Vec::new();
        for &i in &simple {
            let shifted = &comb - CMat::identity(h, h) * ev[i];
            let v = null_vector(&shifted);
            let (lambdas, residual) = eigen_data(&coeffs, &v);
            if residual > EIGEN_TOL {
                continue;
            }
            let beta_val = lambdas[g];
            let beta_zero = beta_val.norm() <= 1e-10 * beta_scale.max(1e-300);
            let zroots = if beta_zero { Vec::new() } else { polynomial_roots(&lambdas) };
            found.push(JointEigenvector { v, lambdas, zroots, beta_val, residual, beta_zero });
        }
        let complete = simple.len() == h && found.len() == h;
        if found.len() > best.len() {
            best = found;
        }
        if complete {
            break;
        }
    }
    if best.is_empty() {
        return Err(Error::DegenerateSpectrum);
    }
    Ok(best)
}

/// Float evaluator for `Y(x)`, `X(x)` from the exact polynomials
/// `x^E Y(x)`, `x^E X(x)`, plus the exact separator for rational points.
pub struct SeparatorEvaluator<'a> {
    exact: Separator<'a>,
    ycoef: Vec<CMat>,
    xcoef: Vec<CMat>,
}

/// `E = Σ_{k<M} k(k−1)/2`, the total inverse power of `x` from the
/// prefactors inside `Y` and `X`.
pub fn laurent_shift(m: usize) -> usize {
    (1..m).map(|k| k * (k - 1) / 2).sum()
}

impl<'a> SeparatorEvaluator<'a> {
    /// Probes the degree of `x^E Y`, `x^E X` by interpolating on a growing
    /// sample set until two extra exact evaluations agree.
    pub fn new(src: &'a dyn BlockSource, xi: Vec<Scalar>, max_degree: usize) -> Result<Self> {
        let exact = Separator::new(src, xi)?;
        let e = laurent_shift(src.aux_rank()) as u32;
        let xs = sample_points(max_degree + 3, &[]);
        let mut ys = Vec::new();
        let mut xv = Vec::new();
        let eval = |i: usize, ys: &mut Vec<Mat>, xv: &mut Vec<Mat>| -> Result<()> {
            while ys.len() <= i {
                let x = &xs[ys.len()];
                let (y, xo) = exact.y_x(x)?;
                let f = num::pow(x.clone(), e as usize);
                ys.push(y.scale(&f));
                xv.push(xo.scale(&f));
            }
            Ok(())
        };
        for d in 0..=max_degree {
            eval(d + 2, &mut ys, &mut xv)?;
            let yc = lagrange_coefficients(&xs[..=d], &ys[..=d]);
            let xc = lagrange_coefficients(&xs[..=d], &xv[..=d]);
            let ok = (d + 1..=d + 2).all(|i| {
                evaluate_polynomial(&yc, &xs[i]) == ys[i] && evaluate_polynomial(&xc, &xs[i]) == xv[i]
            });
            if ok {
                return Ok(SeparatorEvaluator {
                    exact,
                    ycoef: yc.iter().map(to_cmat).collect(),
                    xcoef: xc.iter().map(to_cmat).collect(),
                });
            }
        }
        Err(Error::DegreeMismatch { expected: max_degree, found: "Y/X degree above probe limit".into() })
    }

    pub fn separator(&self) -> &Separator<'a> {
        &self.exact
    }

    /// `z^E Y(z)`, `z^E X(z)`; the common factor cancels in `Y⁻¹X`.
    pub fn eval_float(&self, z: Complex64) -> (CMat, CMat) {
        let horner = |c: &[CMat]| {
            let mut acc = CMat::zeros(c[0].nrows(), c[0].ncols());
            for m in c.iter().rev() {
                acc = acc * z + m;
            }
            acc
        };
        (horner(&self.ycoef), horner(&self.xcoef))
    }

    /// `D(z) ψ`. Uses exact `D` when `z` is (numerically) a small rational.
    pub fn apply_d(&self, z: Complex64, v: &CVec) -> Result<CVec> {
        if let Some(r) = rational_point(z) {
            match self.exact.d(&r) {
                Ok(d) => return Ok(to_cmat(&d) * v),
                Err(Error::SingularY(s)) => return Err(Error::IllConditioned(format!("Y singular at {s}"))),
                Err(e) => return Err(e),
            }
        }
        let (y, x) = self.eval_float(z);
        let sv = y.clone().singular_values();
        let (smax, smin) = (sv.max(), sv.min());
        if !(smin > 0.0) || smax / smin > COND_MAX {
            return Err(Error::IllConditioned(format!("cond Y = {:.3e}", smax / smin)));
        }
        let rhs = x * v;
        y.lu().solve(&rhs).ok_or_else(|| Error::IllConditioned("LU solve failed".into()))
    }
}

/// Small-denominator rational within 1e−13 relative of a real `z`.
pub fn rational_point(z: Complex64) -> Option<Scalar> {
    let scale = z.norm().max(1e-300);
    if z.im.abs() > 1e-12 * scale {
        return None;
    }
    let r = rationalize(z.re, 10_000)?;
    if r.is_zero() || (to_f64(&r) - z.re).abs() > 1e-13 * scale {
        return None;
    }
    Some(r)
}

/// Outcome of `w_j` on one eigenvector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WClass {
    /// Roots shift `z_j → q⁻² z_j`, `β → q β`.
    Ok,
    /// `w_j ψ = 0`.
    Annihilated,
    /// `z_j` is not simple among the roots.
    NonSimple,
    /// `Y(z_j)` singular or badly conditioned.
    IllConditioned,
    /// The result matches `q⁺²` / `q⁻¹` instead.
    ConventionFlip,
    Bad,
}

#[derive(Clone, Debug, Serialize)]
pub struct WAction {
    pub j: usize,
    pub class: WClass,
    /// Relative distance of the new root multiset to the expected one.
    #[serde(serialize_with = "ser_f")]
    pub root_error: f64,
    #[serde(serialize_with = "ser_c")]
    pub beta_ratio: Complex64,
    /// `‖w_j^{ξ₁}ψ − w_j^{ξ₂}ψ‖ / ‖w_j^{ξ₁}ψ‖`.
    #[serde(serialize_with = "ser_f")]
    pub xi_difference: f64,
    /// Eigen-residual of `w_j ψ` against the family.
    #[serde(serialize_with = "ser_f")]
    pub eigen_residual: f64,
}

/// Greedy multiset distance, relative to the largest expected modulus.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let scale = b.iter().map(|z| z.norm()).fold(1e-300, f64::max);
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for z in a {
        let (k, d) = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, w)| (i, (z - w).norm()))
            .fold((usize::MAX, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        if k == usize::MAX {
            return f64::INFINITY;
        }
        used[k] = true;
        worst = worst.max(d);
    }
    worst / scale
}

fn is_simple_root(roots: &[Complex64], j: usize) -> bool {
    let z = roots[j];
    roots.iter().enumerate().all(|(i, w)| i == j || (z - w).norm() > 1e-3 * z.norm())
}

/// Compares `w_j ψ` with the expected joint eigenvector: roots
/// `{z_i}_{i≠j} ∪ {q⁻² z_j}` and `β → qβ`.
pub fn check_exchange(coeffs: &[CMat], psi: &JointEigenvector, j: usize, w: &CVec, q: f64, tol: f64) -> (WClass, f64, Complex64, f64) {
    let nw = w.norm();
    if nw <= 1e-9 * psi.v.norm() {
        return (WClass::Annihilated, 0.0, Complex64::zero(), 0.0);
    }
    let (lams, res) = eigen_data(coeffs, &(w / Complex64::new(nw, 0.0)));
    let g = lams.len() - 1;
    let ratio = lams[g] / psi.beta_val;
    let new_roots = polynomial_roots(&lams);
    let shifted = |f: f64| -> Vec<Complex64> {
        psi.zroots.iter().enumerate().map(|(i, z)| if i == j { z * f } else { *z }).collect()
    };
    let err = multiset_distance(&new_roots, &shifted(q.powi(-2)));
    let beta_ok = (ratio - q).norm() <= tol * q;
    if res <= tol && err <= tol && beta_ok {
        return (WClass::Ok, err, ratio, res);
    }
    let flip_err = multiset_distance(&new_roots, &shifted(q.powi(2)));
    if res <= tol && flip_err <= tol && (ratio - 1.0 / q).norm() <= tol / q {
        return (WClass::ConventionFlip, err, ratio, res);
    }
    (WClass::Bad, err, ratio, res)
}

/// `‖w_i w_j ψ − w_j w_i ψ‖` relative to the larger side; `None` when either
/// application is ill-conditioned or both sides vanish.
pub fn check_w_commute(ev: &SeparatorEvaluator<'_>, psi: &JointEigenvector, i: usize, j: usize) -> Result<Option<f64>> {
    let (zi, zj) = (psi.zroots[i], psi.zroots[j]);
    let ij = ev.apply_d(zi, &ev.apply_d(zj, &psi.v)?)?;
    let ji = ev.apply_d(zj, &ev.apply_d(zi, &psi.v)?)?;
    let scale = ij.norm().max(ji.norm());
    if scale <= 1e-9 * psi.v.norm() {
        return Ok(None);
    }
    Ok(Some((ij - ji).norm() / scale))
}

/// Relative difference of `D(z_j)ψ` for two choices of `ξ`.
pub fn check_xi_independence(e1: &SeparatorEvaluator<'_>, e2: &SeparatorEvaluator<'_>, psi: &JointEigenvector, j: usize) -> Result<f64> {
    let z = psi.zroots[j];
    let a = e1.apply_d(z, &psi.v)?;
    let b = e2.apply_d(z, &psi.v)?;
    Ok((&a - &b).norm() / a.norm().max(1e-300))
}

/// Seeded covector with entries in `1..=9`.
pub fn random_xi(m: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    (0..m).map(|_| Scalar::from_integer(rng.gen_range(1..=9i64).into())).collect()
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct WCounts {
    pub ok: usize,
    pub annihilated: usize,
    pub non_simple: usize,
    pub ill_conditioned: usize,
    pub convention_flip: usize,
    pub bad: usize,
    /// Eigenvectors skipped because `β` vanishes on them.
    pub beta_zero: usize,
}

impl WCounts {
    fn add(&mut self, c: WClass) {
        match c {
            WClass::Ok => self.ok += 1,
            WClass::Annihilated => self.annihilated += 1,
            WClass::NonSimple => self.non_simple += 1,
            WClass::IllConditioned => self.ill_conditioned += 1,
            WClass::ConventionFlip => self.convention_flip += 1,
            WClass::Bad => self.bad += 1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenReport {
    #[serde(flatten)]
    pub eigen: JointEigenvector,
    pub actions: Vec<WAction>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub degree: usize,
    pub dim: usize,
    pub eigenvectors: Vec<EigenReport>,
    pub counts: WCounts,
    /// Largest `w_i w_j` commutator residual over tested pairs.
    #[serde(serialize_with = "ser_opt_f")]
    pub w_commute_max: Option<f64>,
    pub w_commute_pairs: usize,
    /// Largest ξ-difference over `Ok` actions.
    #[serde(serialize_with = "ser_opt_f")]
    pub xi_difference_max: Option<f64>,
}

fn ser_opt_f<S: serde::Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_str(&fmt_f64(*x)),
        None => s.serialize_none(),
    }
}

impl SpectralReport {
    /// Exchange law: at least one `Ok` action and no `Bad` or flipped ones;
    /// vacuous when there are no roots.
    pub fn exchange_pass(&self) -> bool {
        if self.degree == 0 {
            return true;
        }
        self.counts.ok > 0 && self.counts.bad == 0 && self.counts.convention_flip == 0
    }

    pub fn w_commute_pass(&self, tol: f64) -> bool {
        if self.degree < 2 {
            return true;
        }
        matches!(self.w_commute_max, Some(r) if r <= tol)
    }

    pub fn xi_pass(&self, tol: f64) -> bool {
        if self.degree == 0 {
            return true;
        }
        matches!(self.xi_difference_max, Some(r) if r <= tol)
    }
}

/// Full spectral analysis of a family: joint eigenvectors, `w_j` on each
/// simple root, exchange classification, w-commutation and ξ-independence.
pub fn analyze(src: &dyn BlockSource, fam: &CommutingFamily, seed: u64, tol: f64) -> Result<SpectralReport> {
    let coeffs = fam.float_coeffs();
    let g = fam.degree();
    let eig = joint_diagonalize(fam, seed)?;
    let q = src.q().to_f64();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f_c0fe);
    let m = src.aux_rank();
    let probe = 4 * (src.dim() + m) + 8;
    let mk = |rng: &mut ChaCha8Rng| -> Result<SeparatorEvaluator<'_>> { SeparatorEvaluator::new(src, random_xi(m, rng), probe) };
    let e1 = if g > 0 { Some(mk(&mut rng)?) } else { None };
    let e2 = if g > 0 { Some(mk(&mut rng)?) } else { None };

    let mut counts = WCounts::default();
    let mut reports = Vec::with_capacity(eig.len());
    let mut w_max: Option<f64> = None;
    let mut pairs = 0;
    let mut xi_max: Option<f64> = None;
    for psi in eig {
        let mut actions = Vec::new();
        if psi.beta_zero {
            counts.beta_zero += 1;
            reports.push(EigenReport { eigen: psi, actions });
            continue;
        }
        let (Some(e1), Some(e2)) = (&e1, &e2) else {
            reports.push(EigenReport { eigen: psi, actions });
            continue;
        };
        let mut usable = Vec::new();
        for j in 0..psi.zroots.len() {
            let mut act = WAction {
                j,
                class: WClass::NonSimple,
                root_error: f64::NAN,
                beta_ratio: Complex64::zero(),
                xi_difference: f64::NAN,
                eigen_residual: f64::NAN,
            };
            if is_simple_root(&psi.zroots, j) {
                match e1.apply_d(psi.zroots[j], &psi.v) {
                    Ok(w) => {
                        let (c, err, ratio, res) = check_exchange(&coeffs, &psi, j, &w, q, tol);
                        act.class = c;
                        act.root_error = err;
                        act.beta_ratio = ratio;
                        act.eigen_residual = res;
                        if c == WClass::Ok {
                            usable.push(j);
                            match check_xi_independence(e1, e2, &psi, j) {
                                Ok(d) => {
                                    act.xi_difference = d;
                                    xi_max = Some(xi_max.map_or(d, |x: f64| x.max(d)));
                                }
                                Err(Error::IllConditioned(_)) => {}
                                Err(e) => return Err(e),
                            }
                        }
                    }
                    Err(Error::IllConditioned(_)) => act.class = WClass::IllConditioned,
                    Err(e) => return Err(e),
                }
            }
            counts.add(act.class);
            actions.push(act);
        }
        for a in 0..usable.len() {
            for b in a + 1..usable.len() {
                match check_w_commute(e1, &psi, usable[a], usable[b]) {
                    Ok(Some(r)) => {
                        pairs += 1;
                        w_max = Some(w_max.map_or(r, |x: f64| x.max(r)));
                    }
                    Ok(None) | Err(Error::IllConditioned(_)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        reports.push(EigenReport { eigen: psi, actions });
    }
    Ok(SpectralReport {
        degree: g,
        dim: src.dim(),
        eigenvectors: reports,
        counts,
        w_commute_max: w_max,
        w_commute_pairs: pairs,
        xi_difference_max: xi_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::int;

    #[test]
    fn constant_family_has_degree_zero() {
        let b = Mat::from_i64(2, 2, &[1, 2, 0, 3]);
        let xs = [int(1), int(2)];
        let fam = CommutingFamily::interpolate(&xs, &[b.clone(), b.clone()], 0).unwrap();
        assert_eq!(fam.degree(), 0);
        let eig = joint_diagonalize(&fam, 1).unwrap();
        assert_eq!(eig.len(), 2);
        assert!(eig.iter().all(|e| e.zroots.is_empty()));
    }

    #[test]
    fn degree_mismatch_reported() {
        let xs = [int(1), int(2), int(3)];
        let vals: Vec<Mat> = xs.iter().map(|x| Mat::scalar_identity(1, &(x * x))).collect();
        assert!(matches!(CommutingFamily::interpolate(&xs, &vals, 1), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn companion_roots() {
        // (x − 2)(x + 3) = x² + x − 6
        let c = |v: f64| Complex64::new(v, 0.0);
        let mut r = polynomial_roots(&[c(-6.0), c(1.0), c(1.0)]);
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] - c(-3.0)).norm() < 1e-12 && (r[1] - c(2.0)).norm() < 1e-12);
    }

    #[test]
    fn diagonal_pair_joint_eigenvectors() {
        // B(x) = diag(1, 2) + x diag(3, 5): roots −1/3 and −2/5.
        let b0 = Mat::from_i64(2, 2, &[1, 0, 0, 2]);
        let b1 = Mat::from_i64(2, 2, &[3, 0, 0, 5]);
        let fam = CommutingFamily { coeffs: vec![b0, b1] };
        let eig = joint_diagonalize(&fam, 7).unwrap();
        let mut roots: Vec<f64> = eig.iter().map(|e| e.zroots[0].re).collect();
        roots.sort_by(f64::total_cmp);
        assert!((roots[0] + 0.4).abs() < 1e-12 && (roots[1] + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rational_points_detected() {
        assert_eq!(rational_point(Complex64::new(0.75, 0.0)), Some(frac(3, 4)));
        assert_eq!(rational_point(Complex64::new(std::f64::consts::PI, 0.0)), None);
        assert_eq!(rational_point(Complex64::new(1.0, 0.5)), None);
    }

    #[test]
    fn multiset_distance_ignores_order() {
        let c = |v: f64| Complex64::new(v, 0.0);
        assert_eq!(multiset_distance(&[c(1.0), c(2.0)], &[c(2.0), c(1.0)]), 0.0);
        assert!(multiset_distance(&[c(1.0)], &[c(1.5)]) > 0.1);
    }
}
