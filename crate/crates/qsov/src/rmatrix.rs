//! Trigonometric R-matrix `r(x,y) = x R₁₂(q) − y R₂₁(q)⁻¹` on `Cᴹ ⊗ Cᴹ`.
//!
//! Index layout: basis `e_i ⊗ e_j` sits at `i*M + j`; the first factor is
//! slot "1".

use num::{One, Zero};
use std::sync::Arc;

use crate::exactnum::{QParam, Scalar};
use crate::tensorspace::{embed_two, inverse, LabeledSpace, Mat, OpTensor, Slot, Variance};
use crate::Result;

/// `R₁₂(q) = Σ_j q^{E^{jj}} ⊗ q^{E^{jj}} + (q − q⁻¹) Σ_{j>i} E^{ji} ⊗ E^{ij}`.
pub fn r12_constant(m: usize, q: &QParam) -> Mat {
    let mut r = Mat::zeros(m * m, m * m);
    for i in 0..m {
        for j in 0..m {
            let v = if i == j { q.value().clone() } else { Scalar::one() };
            r.set(i * m + j, i * m + j, v);
        }
    }
    let w = q.value() - q.inv();
    for i in 0..m {
        for j in i + 1..m {
            // E^{ji} ⊗ E^{ij} sends e_i ⊗ e_j to e_j ⊗ e_i.
            r.set(j * m + i, i * m + j, w.clone());
        }
    }
    r
}

/// The flip `P(e_i ⊗ e_j) = e_j ⊗ e_i`.
pub fn flip(m: usize) -> Mat {
    let mut p = Mat::zeros(m * m, m * m);
    for i in 0..m {
        for j in 0..m {
            p.set(j * m + i, i * m + j, Scalar::one());
        }
    }
    p
}

/// `R₁₂(q)` and `R₂₁(q)⁻¹ = (P R₁₂ P)⁻¹` for one rank, built once.
#[derive(Clone, Debug)]
pub struct RMatrix {
    m: usize,
    q: QParam,
    r12: Arc<Mat>,
    r21_inv: Arc<Mat>,
}

impl RMatrix {
    pub fn new(m: usize, q: &QParam) -> Self {
        let r12 = r12_constant(m, q);
        let p = flip(m);
        let r21 = p.matmul(&r12).matmul(&p);
        let r21_inv = inverse(&r21).expect("R21 is triangular with nonzero diagonal");
        RMatrix { m, q: q.clone(), r12: Arc::new(r12), r21_inv: Arc::new(r21_inv) }
    }

    pub fn rank(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> &QParam {
        &self.q
    }

    pub fn r12(&self) -> &Mat {
        &self.r12
    }

    pub fn r21_inv(&self) -> &Mat {
        &self.r21_inv
    }

    /// `x R₁₂ − y R₂₁⁻¹`.
    pub fn eval(&self, x: &Scalar, y: &Scalar) -> Mat {
        let mut out = self.r12.scale(x);
        out.axpy(&-y.clone(), &self.r21_inv);
        out
    }

    /// `r(x,y)` embedded on slots `(s1, s2)` of `(Cᴹ)^{⊗k}`.
    pub fn eval_on(&self, x: &Scalar, y: &Scalar, k: usize, s1: usize, s2: usize) -> Mat {
        embed_two(&self.eval(x, y), &vec![self.m; k], s1, s2)
    }

    /// `r(x,y)` as a labeled operator on `v1 ⊗ v2`.
    pub fn tensor(&self, v1: &LabeledSpace, v2: &LabeledSpace, x: &Scalar, y: &Scalar) -> Result<OpTensor> {
        OpTensor::operator(&[v1.clone(), v2.clone()], &self.eval(x, y))
    }

    /// `r₁₂(x,y) r₁₃(x,z) r₂₃(y,z) − r₂₃(y,z) r₁₃(x,z) r₁₂(x,y)` on `(Cᴹ)^{⊗3}`.
    pub fn ybe_residual(&self, x: &Scalar, y: &Scalar, z: &Scalar) -> Mat {
        let r12 = self.eval_on(x, y, 3, 0, 1);
        let r13 = self.eval_on(x, z, 3, 0, 2);
        let r23 = self.eval_on(y, z, 3, 1, 2);
        &r12.matmul(&r13).matmul(&r23) - &r23.matmul(&r13).matmul(&r12)
    }

    /// Scalar `c(x,y)` with `r(x,y)·P r(y,x) P = c·Id`.
    pub fn unitarity_scalar(&self, x: &Scalar, y: &Scalar) -> Scalar {
        let (q, qi) = (self.q.value(), self.q.inv());
        (x * q - y * qi) * (y * q - x * qi)
    }

    pub fn unitarity_residual(&self, x: &Scalar, y: &Scalar) -> Mat {
        let p = flip(self.m);
        let prod = self.eval(x, y).matmul(&p.matmul(&self.eval(y, x)).matmul(&p));
        &prod - &Mat::scalar_identity(self.m * self.m, &self.unitarity_scalar(x, y))
    }
}

/// One-shot `r(x,y)`; prefer [`RMatrix::eval`] in loops.
pub fn r_trig(x: &Scalar, y: &Scalar, m: usize, q: &QParam) -> Mat {
    RMatrix::new(m, q).eval(x, y)
}

/// Pairing tensor `s = Σ_j e_j* ⊗ e_j` between a covector slot on `v_star`
/// and an output slot on `v`.
pub fn s_matrix(m: usize, v_star: &LabeledSpace, v: &LabeledSpace) -> Result<OpTensor> {
    let slots = vec![
        Slot { space: v_star.clone(), variance: Variance::Covector },
        Slot { space: v.clone(), variance: Variance::Out },
    ];
    let mut data = vec![Scalar::zero(); m * m];
    for j in 0..m {
        data[j * m + j] = Scalar::one();
    }
    OpTensor::new(slots, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{frac, int};

    fn q75() -> QParam {
        QParam::generic(frac(7, 5)).unwrap()
    }

    #[test]
    fn r12_m2_layout() {
        let q = q75();
        let r = r12_constant(2, &q);
        let w = q.value() - q.inv();
        let mut expect = Mat::zeros(4, 4);
        expect.set(0, 0, q.value().clone());
        expect.set(1, 1, int(1));
        expect.set(2, 2, int(1));
        expect.set(3, 3, q.value().clone());
        expect.set(2, 1, w);
        assert_eq!(r, expect);
    }

    #[test]
    fn r12_m1_is_q() {
        let q = q75();
        assert_eq!(r12_constant(1, &q), Mat::column(&[q.value().clone()]));
    }

    #[test]
    fn rank_one_scalar() {
        let q = q75();
        let (x, y) = (frac(3, 2), frac(-2, 7));
        let r = r_trig(&x, &y, 1, &q);
        assert_eq!(r.get(0, 0), &(&x * q.value() - &y * q.inv()));
    }

    #[test]
    fn homogeneous_degree_one() {
        let rm = RMatrix::new(3, &q75());
        let (x, y, l) = (frac(5, 3), frac(-1, 4), frac(9, 2));
        assert_eq!(rm.eval(&(&x * &l), &(&y * &l)), rm.eval(&x, &y).scale(&l));
    }

    #[test]
    fn ybe_and_unitarity_m2() {
        let rm = RMatrix::new(2, &q75());
        let (x, y, z) = (frac(3, 2), frac(-5, 7), int(4));
        assert!(rm.ybe_residual(&x, &y, &z).is_zero());
        assert!(rm.unitarity_residual(&x, &y).is_zero());
    }

    #[test]
    fn s_pairs_basis() {
        let vs = LabeledSpace::vector("v*", int(1), 2);
        let v = LabeledSpace::vector("v", int(2), 2);
        let s = s_matrix(2, &vs, &v).unwrap();
        // Rows: the v slot; columns: the covector slot. Pairing e_1* selects e_1.
        let m = s.as_matrix();
        assert_eq!(m.col(1), vec![int(0), int(1)]);
        let g = Mat::from_vec(2, 2, vec![int(2), int(1), frac(1, 3), int(-1)]);
        assert_eq!(g.matmul(&m).matmul(&inverse(&g).unwrap()), m);
    }
}
