//! q-antisymmetrizers `p^k`, the fused modules `w^k(x) ⊂ v(xq^{−2(k−1)}) ⊗ ⋯ ⊗ v(x)`
//! and R-matrices with fused slots.
//!
//! A `k`-fold chain `(Cᴹ)^{⊗k}` is indexed lexicographically with slot 0
//! most significant; slot `j` carries the point `x q^{−2(k−1−j)}`.

use num::{One, Zero};

use crate::exactnum::{QParam, Scalar};
use crate::rmatrix::RMatrix;
use crate::tensorspace::{image_basis, left_inverse, rank, Mat};
use crate::{Error, Result};

/// Evaluation points of the constituent vector slots of `w^k(x)`.
pub fn points(k: usize, x: &Scalar, q: &QParam) -> Vec<Scalar> {
    (0..k).map(|j| x * q.pow(-2 * (k - 1 - j) as i64)).collect()
}

/// `Π_{j≥1} r_{0,j}(p₀, p_j) · (Id ⊗ chain(p₁, …))` over the given slot points.
pub fn chain_product(rm: &RMatrix, pts: &[Scalar]) -> Mat {
    let m = rm.rank();
    let k = pts.len();
    if k <= 1 {
        return Mat::identity(m.pow(k as u32));
    }
    let mut prod = Mat::identity(m.pow(k as u32));
    for j in 1..k {
        prod = prod.matmul(&rm.eval_on(&pts[0], &pts[j], k, 0, j));
    }
    prod.matmul(&Mat::identity(m).kron(&chain_product(rm, &pts[1..])))
}

/// The recurrence `p^k = (x^{−(k−1)} r_{v(xq^{−2(k−1)}),v(xq^{−2(k−2)})} ⋯ r_{v(xq^{−2(k−1)}),v(x)}) p^{k−1}`
/// evaluated at `x`, without rescaling.
pub fn antisymmetrizer_raw(k: usize, rm: &RMatrix, x: &Scalar) -> Result<Mat> {
    if x.is_zero() {
        return Err(Error::ResonanceDetected("antisymmetrizer at x = 0".into()));
    }
    let c = chain_product(rm, &points(k, x, rm.q()));
    let e = (k * k.saturating_sub(1) / 2) as i64;
    Ok(c.scale(&num::pow(x.recip(), e as usize)))
}

/// `p^k` with its idempotent normalization.
#[derive(Clone, Debug)]
pub struct Antisymmetrizer {
    pub k: usize,
    pub raw: Mat,
    pub projector: Mat,
    /// `projector = scale · raw`; `1` when the image is zero.
    pub scale: Scalar,
    pub rank: usize,
}

/// Builds `p^k` at two evaluation points, requires them to agree, and rescales
/// to an idempotent.
pub fn antisymmetrizer(k: usize, rm: &RMatrix) -> Result<Antisymmetrizer> {
    let m = rm.rank();
    if k == 0 || k > m + 1 {
        return Err(Error::ShapeMismatch(format!("antisymmetrizer needs 1 ≤ k ≤ {}, got {k}", m + 1)));
    }
    let raw = antisymmetrizer_raw(k, rm, &Scalar::one())?;
    let other = antisymmetrizer_raw(k, rm, &Scalar::new(5.into(), 3.into()))?;
    if raw != other {
        return Err(Error::NonProjector { k, m });
    }
    let sq = raw.matmul(&raw);
    let Some((i, v)) = raw.data().iter().enumerate().find(|(_, v)| !v.is_zero()) else {
        return Ok(Antisymmetrizer { k, projector: raw.clone(), raw, scale: Scalar::one(), rank: 0 });
    };
    let lambda = &sq.data()[i] / v;
    if lambda.is_zero() || sq != raw.scale(&lambda) {
        return Err(Error::NonProjector { k, m });
    }
    let scale = lambda.recip();
    let projector = raw.scale(&scale);
    let rank = rank(&projector);
    Ok(Antisymmetrizer { k, raw, projector, scale, rank })
}

/// Exact coordinates on a subspace given by a full-column-rank basis `u`.
#[derive(Clone, Debug)]
pub struct Restriction {
    u: Mat,
    rows: Vec<usize>,
    inv: Mat,
}

impl Restriction {
    pub fn new(u: Mat) -> Result<Self> {
        let (rows, inv) = left_inverse(&u)?;
        Ok(Restriction { u, rows, inv })
    }

    pub fn basis(&self) -> &Mat {
        &self.u
    }

    pub fn dim(&self) -> usize {
        self.u.cols()
    }

    /// Coordinates of the columns of `v`; `ProjectorLeak` when a column is
    /// outside the span.
    pub fn coords(&self, v: &Mat) -> Result<Mat> {
        let sel = Mat::from_fn(self.rows.len(), v.cols(), |i, j| v.get(self.rows[i], j).clone());
        let c = self.inv.matmul(&sel);
        if &self.u.matmul(&c) != v {
            return Err(Error::ProjectorLeak("vector outside the fused image".into()));
        }
        Ok(c)
    }

    /// `X` with `A·U = U·X`; `ProjectorLeak` when `A` does not preserve the span.
    pub fn restrict(&self, a: &Mat) -> Result<Mat> {
        self.coords(&a.matmul(&self.u))
    }
}

/// `w^k` as a subspace of `(Cᴹ)^{⊗k}`; the basis is x-independent.
#[derive(Clone, Debug)]
pub struct FusedModule {
    pub k: usize,
    pub m: usize,
    pub antisym: Antisymmetrizer,
    restriction: Restriction,
}

impl FusedModule {
    fn new(k: usize, rm: &RMatrix) -> Result<Self> {
        let m = rm.rank();
        let antisym = if k == 0 {
            let id = Mat::identity(1);
            Antisymmetrizer { k, raw: id.clone(), projector: id, scale: Scalar::one(), rank: 1 }
        } else {
            antisymmetrizer(k, rm)?
        };
        let restriction = Restriction::new(image_basis(&antisym.projector))?;
        Ok(FusedModule { k, m, antisym, restriction })
    }

    pub fn dim(&self) -> usize {
        self.restriction.dim()
    }

    /// Column basis, one column per basis vector, in reduced form.
    pub fn basis(&self) -> &Mat {
        self.restriction.basis()
    }

    pub fn projector(&self) -> &Mat {
        &self.antisym.projector
    }

    pub fn restriction(&self) -> &Restriction {
        &self.restriction
    }
}

/// All fused modules `w^0 … w^M` for one `(M, q)`, plus restriction data for
/// the fused R-matrices. Built once, read-only afterwards.
#[derive(Clone, Debug)]
pub struct Fusion {
    rm: RMatrix,
    modules: Vec<FusedModule>,
    vw: Vec<Restriction>,
    ww: Vec<Vec<Restriction>>,
}

impl Fusion {
    pub fn new(m: usize, q: &QParam) -> Result<Self> {
        let rm = RMatrix::new(m, q);
        let modules: Vec<FusedModule> = (0..=m).map(|k| FusedModule::new(k, &rm)).collect::<Result<_>>()?;
        let vw = modules
            .iter()
            .map(|w| Restriction::new(Mat::identity(m).kron(w.basis())))
            .collect::<Result<_>>()?;
        let ww = modules
            .iter()
            .map(|wl| modules.iter().map(|wk| Restriction::new(wl.basis().kron(wk.basis()))).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        Ok(Fusion { rm, modules, vw, ww })
    }

    pub fn rank(&self) -> usize {
        self.rm.rank()
    }

    pub fn q(&self) -> &QParam {
        self.rm.q()
    }

    pub fn rmatrix(&self) -> &RMatrix {
        &self.rm
    }

    pub fn module(&self, k: usize) -> &FusedModule {
        &self.modules[k]
    }

    /// Normalized spanning vector of the one-dimensional `w^M`: its first
    /// nonzero coordinate is 1.
    pub fn top_vector(&self) -> Vec<Scalar> {
        self.modules[self.rank()].basis().col(0)
    }

    /// Dual functional of [`Fusion::top_vector`] on `w^M`.
    pub fn top_functional(&self) -> Vec<Scalar> {
        let u = self.top_vector();
        let lead = u.iter().position(|v| !v.is_zero()).expect("w^M is nonzero");
        (0..u.len()).map(|i| if i == lead { Scalar::one() } else { Scalar::zero() }).collect()
    }

    /// `r_{v(x'),w^k(z)} = r_{0,1} r_{0,2} ⋯ r_{0,k}` on `(Cᴹ)^{⊗(k+1)}`.
    pub fn r_vw_raw(&self, xp: &Scalar, k: usize, z: &Scalar) -> Mat {
        let m = self.rank();
        let p = points(k, z, self.q());
        let mut a = Mat::identity(m.pow(k as u32 + 1));
        for j in 1..=k {
            a = a.matmul(&self.rm.eval_on(xp, &p[j - 1], k + 1, 0, j));
        }
        a
    }

    /// [`Fusion::r_vw_raw`] restricted to `v ⊗ w^k`; index `i*dim(w^k) + α`.
    pub fn r_vw(&self, xp: &Scalar, k: usize, z: &Scalar) -> Result<Mat> {
        self.vw[k].restrict(&self.r_vw_raw(xp, k, z))
    }

    /// `r_{w^l(y),w^k(x)} = Π_{a=l−1…0} Π_{b=0…k−1} r_{a,l+b}` on `(Cᴹ)^{⊗(l+k)}`.
    pub fn r_ww_raw(&self, l: usize, y: &Scalar, k: usize, x: &Scalar) -> Mat {
        let m = self.rank();
        let pa = points(l, y, self.q());
        let pb = points(k, x, self.q());
        let n = l + k;
        let mut a = Mat::identity(m.pow(n as u32));
        for ia in (0..l).rev() {
            for (ib, xb) in pb.iter().enumerate() {
                a = a.matmul(&self.rm.eval_on(&pa[ia], xb, n, ia, l + ib));
            }
        }
        a
    }

    /// [`Fusion::r_ww_raw`] restricted to `w^l ⊗ w^k`; index `β*dim(w^k) + α`.
    pub fn r_ww(&self, l: usize, y: &Scalar, k: usize, x: &Scalar) -> Result<Mat> {
        self.ww[l][k].restrict(&self.r_ww_raw(l, y, k, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{frac, int, rho};

    fn q75() -> QParam {
        QParam::generic(frac(7, 5)).unwrap()
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn p1_is_identity() {
        let rm = RMatrix::new(3, &q75());
        assert_eq!(antisymmetrizer(1, &rm).unwrap().projector, Mat::identity(3));
    }

    #[test]
    fn ranks_are_binomial() {
        for m in 1..=3 {
            let rm = RMatrix::new(m, &q75());
            for k in 1..=m + 1 {
                let p = antisymmetrizer(k, &rm).unwrap();
                assert_eq!(p.rank, binom(m, k), "M = {m}, k = {k}");
                if p.rank > 0 {
                    assert_eq!(p.projector.matmul(&p.projector), p.projector);
                }
            }
        }
    }

    #[test]
    fn top_vector_m2_is_q_antisymmetric() {
        let f = Fusion::new(2, &q75()).unwrap();
        let u = f.top_vector();
        // Support only on e1⊗e2 and e2⊗e1, leading coefficient 1.
        assert!(u[0].is_zero() && u[3].is_zero());
        assert_eq!(u[1], int(1));
        assert!(!u[2].is_zero() && u[2] != int(-1));
        let pair: Scalar = f.top_functional().iter().zip(&u).map(|(a, b)| a * b).sum();
        assert_eq!(pair, int(1));
    }

    #[test]
    fn k1_reduces_to_r() {
        let f = Fusion::new(2, &q75()).unwrap();
        let (x, z) = (frac(3, 2), frac(-4, 3));
        assert_eq!(f.r_vw(&x, 1, &z).unwrap(), f.rmatrix().eval(&x, &z));
    }

    #[test]
    fn top_r_is_rho() {
        let q = q75();
        let f = Fusion::new(2, &q).unwrap();
        let (y, x) = (frac(17, 10), frac(-23, 10));
        for l in 1..=2 {
            let r = f.r_ww(l, &y, 2, &x).unwrap();
            let s = rho(l, &y, &x, 3, &q);
            assert_eq!(r, Mat::scalar_identity(r.rows(), &s), "l = {l}");
        }
    }

    #[test]
    fn restriction_detects_leak() {
        let r = Restriction::new(Mat::column(&[int(1), int(0)])).unwrap();
        let a = Mat::from_i64(2, 2, &[0, 0, 1, 0]);
        assert!(matches!(r.restrict(&a), Err(Error::ProjectorLeak(_))));
    }
}
