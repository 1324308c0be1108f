//! Concrete quantum spaces and the monodromy `T(x)` on `V(x) ⊗ H`.
//!
//! `T(x) = twist · L_n(x) ⋯ L_1(x)` where each site contributes an N×N
//! matrix of operators on its local space:
//!
//! - `Eval` sites: `x L⁺ − y L⁻`, with `L⁺`, `L⁻` the blocks of `R₁₂(q)` and
//!   `R₂₁(q)⁻¹` chained over `sym` copies and restricted to the q-symmetric
//!   subspace of `V^{⊗sym}`. For `sym = 1` this is `r(x, y)` itself.
//! - `Cyclic` sites: `σ(x/y) L⁻` with `σ(t) = Σ_{i<N−1} c_i E^{i,i+1} + t c_{N−1} E^{N−1,0}`.
//!
//! Blocks follow `T = [[a, b], [c, d]]` with `b_j = T[0][j+1]`,
//! `c_i = T[i+1][0]`, `d_ij = T[i+1][j+1]`.

use num::{One, Zero};

use crate::exactnum::{fmt_scalar, QParam, Scalar};
use crate::fusion::{chain_product, Fusion, Restriction};
use crate::rmatrix::RMatrix;
use crate::tensorspace::{image_basis, lagrange_coefficients, Mat};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SiteKind {
    Eval,
    Cyclic,
}

impl SiteKind {
    pub fn name(self) -> &'static str {
        match self {
            SiteKind::Eval => "eval",
            SiteKind::Cyclic => "cyclic",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "eval" => Ok(SiteKind::Eval),
            "cyclic" => Ok(SiteKind::Cyclic),
            other => Err(Error::Config(format!("unknown site kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Site {
    pub kind: SiteKind,
    /// Number of vector copies symmetrized into the site.
    pub sym: usize,
    pub y: Scalar,
}

impl Site {
    pub fn eval(y: Scalar) -> Self {
        Site { kind: SiteKind::Eval, sym: 1, y }
    }

    pub fn cyclic(y: Scalar) -> Self {
        Site { kind: SiteKind::Cyclic, sym: 1, y }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModelConfig {
    pub n_rank: usize,
    pub q: Scalar,
    pub sites: Vec<Site>,
    pub twist: Vec<Scalar>,
    pub cyclic: Vec<Scalar>,
    pub seed: u64,
}

impl ModelConfig {
    /// `n` fundamental evaluation sites at `2, 3, 5, …`, twist `diag(1, t, t², …)`
    /// with `t = 3/2`, `q = 7/5`.
    pub fn standard(n_rank: usize, n_sites: usize) -> Self {
        const PRIMES: [i64; 6] = [2, 3, 5, 7, 11, 13];
        let sites = PRIMES.iter().take(n_sites).map(|&p| Site::eval(Scalar::from_integer(p.into()))).collect();
        ModelConfig {
            n_rank,
            q: Scalar::new(7.into(), 5.into()),
            sites,
            twist: default_twist(n_rank),
            cyclic: default_cyclic(n_rank),
            seed: 1,
        }
    }

    pub fn with_sites(n_rank: usize, sites: Vec<Site>) -> Self {
        ModelConfig { sites, ..Self::standard(n_rank, 0) }
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    /// `g = (N−1)(N·n − 2)/2`.
    pub fn genus(&self) -> usize {
        let (nr, n) = (self.n_rank, self.n_sites());
        ((nr - 1) * (nr * n).saturating_sub(2)) / 2
    }

    pub fn validate(&self) -> Result<QParam> {
        let nr = self.n_rank;
        if !(2..=6).contains(&nr) {
            return Err(Error::Config(format!("N = {nr} outside 2..=6")));
        }
        if self.sites.is_empty() {
            return Err(Error::Config("at least one site is required".into()));
        }
        let q = QParam::new(self.q.clone(), nr, self.n_sites())?;
        for (i, s) in self.sites.iter().enumerate() {
            if s.y.is_zero() {
                return Err(Error::Config(format!("inhomogeneity {i} is zero")));
            }
            if s.sym == 0 {
                return Err(Error::Config(format!("site {i} has sym = 0")));
            }
        }
        let orbit = 2 * nr as i64;
        for i in 0..self.sites.len() {
            for j in i + 1..self.sites.len() {
                let ratio = &self.sites[i].y / &self.sites[j].y;
                if let Some(m) = (-orbit..=orbit).find(|&m| q.pow(2 * m) == ratio) {
                    return Err(Error::Config(format!(
                        "inhomogeneities {} and {} differ by q^{}",
                        fmt_scalar(&self.sites[i].y),
                        fmt_scalar(&self.sites[j].y),
                        2 * m
                    )));
                }
            }
        }
        if self.twist.len() != nr {
            return Err(Error::Config(format!("twist needs {nr} entries, got {}", self.twist.len())));
        }
        for (i, t) in self.twist.iter().enumerate() {
            if t.is_zero() || self.twist[..i].contains(t) {
                return Err(Error::Config("twist entries must be distinct and nonzero".into()));
            }
        }
        if self.cyclic.len() != nr || self.cyclic.iter().any(Zero::is_zero) {
            return Err(Error::Config(format!("cyclic needs {nr} nonzero entries")));
        }
        Ok(q)
    }
}

pub fn default_twist(n_rank: usize) -> Vec<Scalar> {
    let t = Scalar::new(3.into(), 2.into());
    (0..n_rank).map(|a| num::pow(t.clone(), a)).collect()
}

pub fn default_cyclic(n_rank: usize) -> Vec<Scalar> {
    (0..n_rank).map(|i| Scalar::new((2 + i as i64).into(), 2.into())).collect()
}

/// `b` and `d` blocks at one point; operators on the current quantum space.
#[derive(Clone, Debug, PartialEq)]
pub struct BD {
    pub b: Vec<Mat>,
    pub d: Vec<Vec<Mat>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Blocks {
    pub a: Mat,
    pub b: Vec<Mat>,
    pub c: Vec<Mat>,
    pub d: Vec<Vec<Mat>>,
}

/// Anything that yields `b(x)`, `d(x)` over some space: the bare model or a
/// model dressed by auxiliary slots.
pub trait BlockSource {
    /// Quantum space dimension including dressing slots.
    fn dim(&self) -> usize;
    fn fusion(&self) -> &Fusion;
    fn bd(&self, x: &Scalar) -> Result<BD>;

    /// `M = N − 1`.
    fn aux_rank(&self) -> usize {
        self.fusion().rank()
    }

    fn q(&self) -> &QParam {
        self.fusion().q()
    }
}

struct SiteData {
    kind: SiteKind,
    y: Scalar,
    dim: usize,
    /// `N × N` blocks, index `a*N + b`.
    lp: Vec<Mat>,
    lm: Vec<Mat>,
}

pub struct LOperator {
    cfg: ModelConfig,
    q: QParam,
    sites: Vec<SiteData>,
    h: usize,
    fusion: Fusion,
}

/// Aux-row-major product of `copies` site R-matrix blocks on `V^{⊗copies}`.
fn chain_blocks(r: &Mat, n: usize, copies: usize) -> Vec<Mat> {
    let h = n.pow(copies as u32);
    let mut t: Vec<Mat> = (0..n * n).map(|ab| if ab / n == ab % n { Mat::identity(h) } else { Mat::zeros(h, h) }).collect();
    for c in 0..copies {
        let emb = |a: &Mat| Mat::identity(n.pow(c as u32)).kron(a).kron(&Mat::identity(n.pow((copies - c - 1) as u32)));
        let mut next = vec![Mat::zeros(h, h); n * n];
        for a in 0..n {
            for e in 0..n {
                let blk = Mat::from_fn(n, n, |i, j| r.get(a * n + i, e * n + j).clone());
                if blk.is_zero() {
                    continue;
                }
                let eb = emb(&blk);
                for b in 0..n {
                    let prod = eb.matmul(&t[e * n + b]);
                    next[a * n + b].add_assign_ref(&prod);
                }
            }
        }
        t = next;
    }
    t
}

impl LOperator {
    pub fn build(cfg: &ModelConfig) -> Result<Self> {
        let q = cfg.validate()?;
        let n = cfg.n_rank;
        let rm = RMatrix::new(n, &q);
        let mut sites = Vec::with_capacity(cfg.n_sites());
        for s in &cfg.sites {
            let pts: Vec<Scalar> = (0..s.sym).map(|j| q.pow(2 * (s.sym - 1 - j) as i64)).collect();
            let sym = chain_product(&rm, &pts);
            let restr = Restriction::new(image_basis(&sym.transpose()))?;
            let leak = |_| Error::DegeneracyDetected(format!("site with sym = {} is not an invariant subspace", s.sym));
            let lp = chain_blocks(rm.r12(), n, s.sym).iter().map(|a| restr.restrict(a).map_err(leak)).collect::<Result<Vec<_>>>()?;
            let lm = chain_blocks(rm.r21_inv(), n, s.sym).iter().map(|a| restr.restrict(a).map_err(leak)).collect::<Result<Vec<_>>>()?;
            sites.push(SiteData { kind: s.kind, y: s.y.clone(), dim: restr.dim(), lp, lm });
        }
        let h = sites.iter().map(|s| s.dim).product();
        let fusion = Fusion::new(n - 1, &q)?;
        let op = LOperator { cfg: cfg.clone(), q, sites, h, fusion };
        op.check_degree_pattern()?;
        Ok(op)
    }

    pub fn config(&self) -> &ModelConfig {
        &self.cfg
    }

    pub fn n_rank(&self) -> usize {
        self.cfg.n_rank
    }

    pub fn site_dims(&self) -> Vec<usize> {
        self.sites.iter().map(|s| s.dim).collect()
    }

    fn site_l(&self, s: &SiteData, x: &Scalar) -> Vec<Mat> {
        let n = self.cfg.n_rank;
        match s.kind {
            SiteKind::Eval => (0..n * n)
                .map(|ab| {
                    let mut m = s.lp[ab].scale(x);
                    m.axpy(&-s.y.clone(), &s.lm[ab]);
                    m
                })
                .collect(),
            SiteKind::Cyclic => {
                let t = x / &s.y;
                let c = &self.cfg.cyclic;
                (0..n * n)
                    .map(|ab| {
                        let (a, b) = (ab / n, ab % n);
                        // Row a of σ(t) has one entry: column a+1, or column 0 for the last row.
                        if a + 1 < n {
                            s.lm[(a + 1) * n + b].scale(&c[a])
                        } else {
                            s.lm[b].scale(&(&t * &c[n - 1]))
                        }
                    })
                    .collect()
            }
        }
    }

    /// `T(x)` as `N × N` blocks of `End(H)`, index `a*N + b`.
    pub fn t(&self, x: &Scalar) -> Vec<Mat> {
        let n = self.cfg.n_rank;
        let h = self.h;
        let mut t: Vec<Mat> = (0..n * n).map(|ab| if ab / n == ab % n { Mat::identity(h) } else { Mat::zeros(h, h) }).collect();
        let mut off = 1;
        for s in &self.sites {
            let rest = h / off / s.dim;
            let l = self.site_l(s, x);
            let mut next = vec![Mat::zeros(h, h); n * n];
            for a in 0..n {
                for e in 0..n {
                    if l[a * n + e].is_zero() {
                        continue;
                    }
                    let emb = Mat::identity(off).kron(&l[a * n + e]).kron(&Mat::identity(rest));
                    for b in 0..n {
                        let prod = emb.matmul(&t[e * n + b]);
                        next[a * n + b].add_assign_ref(&prod);
                    }
                }
            }
            t = next;
            off *= s.dim;
        }
        for (ab, m) in t.iter_mut().enumerate() {
            let tw = &self.cfg.twist[ab / n];
            if !tw.is_one() {
                *m = m.scale(tw);
            }
        }
        t
    }

    pub fn blocks(&self, x: &Scalar) -> Blocks {
        let n = self.cfg.n_rank;
        let mut t = self.t(x).into_iter().map(Some).collect::<Vec<_>>();
        let mut take = |a: usize, b: usize| t[a * n + b].take().expect("block taken once");
        let a = take(0, 0);
        let b = (1..n).map(|j| take(0, j)).collect();
        let c = (1..n).map(|i| take(i, 0)).collect();
        let d = (1..n).map(|i| (1..n).map(|j| take(i, j)).collect()).collect();
        Blocks { a, b, c, d }
    }

    /// Interpolates every block of `T` and enforces: total degree ≤ n, upper
    /// blocks of degree ≤ n−1, lower blocks vanishing at `x = 0`.
    fn check_degree_pattern(&self) -> Result<()> {
        let n = self.cfg.n_rank;
        let deg = self.cfg.n_sites();
        let xs: Vec<Scalar> = (1..=deg as i64 + 2).map(|v| Scalar::from_integer(v.into())).collect();
        let samples: Vec<Vec<Mat>> = xs.iter().map(|x| self.t(x)).collect();
        let t0 = self.t(&Scalar::zero());
        for a in 0..n {
            for b in 0..n {
                let vals: Vec<Mat> = samples.iter().map(|s| s[a * n + b].clone()).collect();
                let co = lagrange_coefficients(&xs, &vals);
                if !co[deg + 1].is_zero() {
                    return Err(Error::DegeneracyDetected(format!("T[{a}][{b}] has degree > {deg}")));
                }
                if a < b && !co[deg].is_zero() {
                    return Err(Error::DegeneracyDetected(format!("upper block T[{a}][{b}] has degree {deg}")));
                }
                if a > b && !t0[a * n + b].is_zero() {
                    return Err(Error::DegeneracyDetected(format!("lower block T[{a}][{b}] is nonzero at x = 0")));
                }
            }
        }
        Ok(())
    }

    /// Number of nonzero entries of `R T₁(x) T₂(y) − T₂(y) T₁(x) R` on `V ⊗ V ⊗ H`.
    pub fn rtt_residual(&self, x: &Scalar, y: &Scalar) -> usize {
        let n = self.cfg.n_rank;
        let r = RMatrix::new(n, &self.q).eval(x, y);
        let (tx, ty) = (self.t(x), self.t(y));
        let mut nonzero = 0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let mut acc = Mat::zeros(self.h, self.h);
                        for e in 0..n {
                            for f in 0..n {
                                let rl = r.get(a * n + b, e * n + f);
                                if !rl.is_zero() {
                                    acc.axpy(rl, &tx[e * n + c].matmul(&ty[f * n + d]));
                                }
                                let rr = r.get(e * n + f, c * n + d);
                                if !rr.is_zero() {
                                    acc.axpy(&-rr.clone(), &ty[b * n + f].matmul(&tx[a * n + e]));
                                }
                            }
                        }
                        nonzero += acc.nnz();
                    }
                }
            }
        }
        nonzero
    }
}

impl BlockSource for LOperator {
    fn dim(&self) -> usize {
        self.h
    }

    fn fusion(&self) -> &Fusion {
        &self.fusion
    }

    fn bd(&self, x: &Scalar) -> Result<BD> {
        let bl = self.blocks(x);
        Ok(BD { b: bl.b, d: bl.d })
    }
}

/// Auxiliary slot appended to the quantum space by dressing.
#[derive(Clone, Debug, PartialEq)]
pub enum AuxSlot {
    Vector(Scalar),
    Fused(usize, Scalar),
}

/// `b_{v(x),H⊗w(z)} = b_{v(x)} r_{v(x),w(z)}`, `d` likewise. The new slot is
/// the minor tensor factor: index `h·s_dim + s`.
pub struct Dressed<'a> {
    base: &'a dyn BlockSource,
    slot: AuxSlot,
    sdim: usize,
}

impl<'a> Dressed<'a> {
    pub fn new(base: &'a dyn BlockSource, slot: AuxSlot) -> Self {
        let sdim = match &slot {
            AuxSlot::Vector(_) => base.aux_rank(),
            AuxSlot::Fused(k, _) => base.fusion().module(*k).dim(),
        };
        Dressed { base, slot, sdim }
    }

    pub fn vector(base: &'a dyn BlockSource, z: Scalar) -> Self {
        Self::new(base, AuxSlot::Vector(z))
    }

    pub fn slot_dim(&self) -> usize {
        self.sdim
    }
}

impl BlockSource for Dressed<'_> {
    fn dim(&self) -> usize {
        self.base.dim() * self.sdim
    }

    fn fusion(&self) -> &Fusion {
        self.base.fusion()
    }

    fn bd(&self, x: &Scalar) -> Result<BD> {
        let inner = self.base.bd(x)?;
        let m = self.aux_rank();
        let s = self.sdim;
        let r = match &self.slot {
            AuxSlot::Vector(z) => self.fusion().rmatrix().eval(x, z),
            AuxSlot::Fused(k, z) => self.fusion().r_vw(x, *k, z)?,
        };
        let rb: Vec<Mat> = (0..m * m).map(|li| Mat::from_fn(s, s, |a, c| r.get((li / m) * s + a, (li % m) * s + c).clone())).collect();
        let h2 = self.dim();
        let dress = |row: &[Mat], i: usize| {
            let mut acc = Mat::zeros(h2, h2);
            for (l, op) in row.iter().enumerate() {
                let blk = &rb[l * m + i];
                if !blk.is_zero() && !op.is_zero() {
                    acc.add_assign_ref(&op.kron(blk));
                }
            }
            acc
        };
        let b = (0..m).map(|i| dress(&inner.b, i)).collect();
        let d = inner.d.iter().map(|row| (0..m).map(|j| dress(row, j)).collect()).collect();
        Ok(BD { b, d })
    }
}

/// Operator-valued matrix; entries are `End(H)` elements.
struct OpMat {
    rows: usize,
    cols: usize,
    e: Vec<Mat>,
}

impl OpMat {
    fn covector(b: &[Mat]) -> Self {
        OpMat { rows: 1, cols: b.len(), e: b.to_vec() }
    }

    fn matrix(d: &[Vec<Mat>]) -> Self {
        OpMat { rows: d.len(), cols: d[0].len(), e: d.iter().flatten().cloned().collect() }
    }

    /// Entry `((r1,r2),(c1,c2))` is `A[r1,c1]·B[r2,c2]`, or the reversed
    /// operator product `B[r2,c2]·A[r1,c1]` when `reversed`.
    fn kron(a: &OpMat, b: &OpMat, reversed: bool) -> Self {
        let (rows, cols) = (a.rows * b.rows, a.cols * b.cols);
        let mut e = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let x = &a.e[(r / b.rows) * a.cols + c / b.cols];
                let y = &b.e[(r % b.rows) * b.cols + c % b.cols];
                e.push(if reversed { y.matmul(x) } else { x.matmul(y) });
            }
        }
        OpMat { rows, cols, e }
    }

    fn scale(mut self, s: &Scalar) -> Self {
        for m in &mut self.e {
            *m = m.scale(s);
        }
        self
    }

    /// `self · r` for a scalar matrix `r`.
    fn times(&self, r: &Mat) -> Self {
        let h = self.e[0].rows();
        let mut e = vec![Mat::zeros(h, h); self.rows * r.cols()];
        for i in 0..self.rows {
            for k in 0..self.cols {
                for j in 0..r.cols() {
                    let v = r.get(k, j);
                    if !v.is_zero() {
                        e[i * r.cols() + j].axpy(v, &self.e[i * self.cols + k]);
                    }
                }
            }
        }
        OpMat { rows: self.rows, cols: r.cols(), e }
    }

    /// `r · self` for a scalar matrix `r`.
    fn times_left(r: &Mat, a: &OpMat) -> Self {
        let h = a.e[0].rows();
        let mut e = vec![Mat::zeros(h, h); r.rows() * a.cols];
        for i in 0..r.rows() {
            for k in 0..a.rows {
                let v = r.get(i, k);
                if v.is_zero() {
                    continue;
                }
                for j in 0..a.cols {
                    e[i * a.cols + j].axpy(v, &a.e[k * a.cols + j]);
                }
            }
        }
        OpMat { rows: r.rows(), cols: a.cols, e }
    }

    fn sub_nnz(&self, other: &OpMat) -> usize {
        self.e.iter().zip(&other.e).map(|(a, b)| (a - b).nnz()).sum()
    }

    fn add(mut self, other: &OpMat) -> Self {
        for (a, b) in self.e.iter_mut().zip(&other.e) {
            a.add_assign_ref(b);
        }
        self
    }
}

/// Nonzero-entry counts of the residuals of the `b`/`d` exchange relations.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CommResiduals {
    pub bb: usize,
    pub dd: usize,
    pub bd: usize,
    pub component: usize,
}

impl CommResiduals {
    pub fn is_zero(&self) -> bool {
        self.bb == 0 && self.dd == 0 && self.bd == 0 && self.component == 0
    }

    pub fn total(&self) -> usize {
        self.bb + self.dd + self.bd + self.component
    }
}

/// Evaluates, with `r = r_{v(x),v(y)}`:
///
/// - `(xq − yq⁻¹) b(x)⊗b(y) = [b(y)b(x)] r`
/// - `r d(x)⊗d(y) = [d(y)d(x)] r`
/// - `(x−y) b(x)d(y) + y(q−q⁻¹) s d(x)b(y) = [d(y)b(x)] r`
///
/// in operator-matrix form, and the last relation once more entry by entry:
/// `(x−y) b_i(x) d_j^k(y) + y(q−q⁻¹) d_i^k(x) b_j(y) = d_m^k(y) b_l(x) r_{ij}^{lm}`
/// with `d_j^k = d[k][j]` and `r_{ij}^{lm} = r[(l,m),(i,j)]`.
pub fn comm_check(src: &dyn BlockSource, x: &Scalar, y: &Scalar) -> Result<CommResiduals> {
    let q = src.q();
    let m = src.aux_rank();
    let r = src.fusion().rmatrix().eval(x, y);
    let (bdx, bdy) = (src.bd(x)?, src.bd(y)?);
    let (bx, by) = (OpMat::covector(&bdx.b), OpMat::covector(&bdy.b));
    let (dx, dy) = (OpMat::matrix(&bdx.d), OpMat::matrix(&bdy.d));
    let w = q.value() - q.inv();

    let bb_l = OpMat::kron(&bx, &by, false).scale(&(x * q.value() - y * q.inv()));
    let bb_r = OpMat::kron(&bx, &by, true).times(&r);
    let dd_l = OpMat::times_left(&r, &OpMat::kron(&dx, &dy, false));
    let dd_r = OpMat::kron(&dx, &dy, true).times(&r);
    let bd_l = OpMat::kron(&bx, &dy, false).scale(&(x - y)).add(&OpMat::kron(&dx, &by, false).scale(&(y * &w)));
    let bd_r = OpMat::kron(&bx, &dy, true).times(&r);

    let mut component = 0;
    let h = src.dim();
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let mut acc = bdx.b[i].matmul(&bdy.d[k][j]).scale(&(x - y));
                acc.axpy(&(y * &w), &bdx.d[k][i].matmul(&bdy.b[j]));
                let mut rhs = Mat::zeros(h, h);
                for l in 0..m {
                    for mm in 0..m {
                        let v = r.get(l * m + mm, i * m + j);
                        if !v.is_zero() {
                            rhs.axpy(v, &bdy.d[k][mm].matmul(&bdx.b[l]));
                        }
                    }
                }
                component += (&acc - &rhs).nnz();
            }
        }
    }
    Ok(CommResiduals {
        bb: bb_l.sub_nnz(&bb_r),
        dd: dd_l.sub_nnz(&dd_r),
        bd: bd_l.sub_nnz(&bd_r),
        component,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{frac, int};

    #[test]
    fn n2_single_site_shape_and_degree() {
        let op = LOperator::build(&ModelConfig::standard(2, 1)).unwrap();
        assert_eq!(op.dim(), 2);
        let t = op.t(&frac(3, 2));
        assert_eq!(t.len(), 4);
    }

    #[test]
    fn lower_block_vanishes_at_origin() {
        let op = LOperator::build(&ModelConfig::standard(3, 1)).unwrap();
        let bl = op.blocks(&Scalar::zero());
        assert!(bl.c.iter().all(Mat::is_zero));
    }

    #[test]
    fn rtt_n3_two_sites() {
        let op = LOperator::build(&ModelConfig::standard(3, 2)).unwrap();
        assert_eq!(op.rtt_residual(&frac(7, 3), &frac(-2, 5)), 0);
    }

    #[test]
    fn comm_relations_n2_and_n3() {
        for nr in [2, 3] {
            let op = LOperator::build(&ModelConfig::standard(nr, 1)).unwrap();
            let res = comm_check(&op, &frac(5, 2), &frac(-1, 3)).unwrap();
            assert!(res.is_zero(), "N = {nr}: {res:?}");
        }
    }

    #[test]
    fn bb_relation_at_coinciding_points() {
        let op = LOperator::build(&ModelConfig::standard(3, 1)).unwrap();
        let x = frac(4, 3);
        let res = comm_check(&op, &x, &x).unwrap();
        assert_eq!(res.bb, 0);
    }

    #[test]
    fn dressed_relations_hold() {
        let op = LOperator::build(&ModelConfig::with_sites(3, vec![Site::cyclic(int(2))])).unwrap();
        let dressed = Dressed::vector(&op, frac(-7, 4));
        let res = comm_check(&dressed, &frac(5, 2), &frac(1, 3)).unwrap();
        assert!(res.is_zero(), "{res:?}");
    }

    #[test]
    fn sym2_site_is_invariant() {
        let cfg = ModelConfig::with_sites(3, vec![Site { kind: SiteKind::Eval, sym: 2, y: int(3) }]);
        let op = LOperator::build(&cfg).unwrap();
        assert_eq!(op.dim(), 6);
        assert_eq!(op.rtt_residual(&frac(2, 3), &int(5)), 0);
    }

    #[test]
    fn config_rejects_orbit_collision() {
        let mut cfg = ModelConfig::standard(2, 2);
        cfg.sites[1].y = &cfg.sites[0].y * frac(49, 25);
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        let mut cfg = ModelConfig::standard(2, 1);
        cfg.twist = vec![int(1), int(1)];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn genus_values() {
        assert_eq!(ModelConfig::standard(2, 1).genus(), 0);
        assert_eq!(ModelConfig::standard(2, 2).genus(), 1);
        assert_eq!(ModelConfig::standard(3, 1).genus(), 1);
        assert_eq!(ModelConfig::standard(3, 2).genus(), 4);
    }
}
