use num::{One, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::exactnum::{int, Scalar};

/// Dense row-major exact matrix.
///
/// Multiplication skips zero entries on both sides; R-matrix embeddings and
/// monodromy blocks are mostly zeros, so this is where the speed comes from.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    pub fn scalar_identity(n: usize, s: &Scalar) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = s.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length does not match shape");
        Mat { rows, cols, data }
    }

    pub fn from_i64(rows: usize, cols: usize, vals: &[i64]) -> Self {
        Mat::from_vec(rows, cols, vals.iter().map(|&v| int(v)).collect())
    }

    pub fn column(v: &[Scalar]) -> Self {
        Mat::from_vec(v.len(), 1, v.to_vec())
    }

    pub fn row_vector(v: &[Scalar]) -> Self {
        Mat::from_vec(1, v.len(), v.to_vec())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn into_data(self) -> Vec<Scalar> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        if s.is_zero() {
            return Mat::zeros(self.rows, self.cols);
        }
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| if v.is_zero() { v.clone() } else { v * s }).collect(),
        }
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn add_assign_ref(&mut self, other: &Mat) {
        self.check_same(other);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }

    /// `self += s · other`.
    pub fn axpy(&mut self, s: &Scalar, other: &Mat) {
        self.check_same(other);
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += s * b;
            }
        }
    }

    fn check_same(&self, other: &Mat) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let nz_rows: Vec<Vec<(usize, &Scalar)>> = (0..other.rows)
            .map(|k| {
                other.row(k).iter().enumerate().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let base = i * other.cols;
            for (k, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for &(j, b) in &nz_rows[k] {
                    out.data[base + j] += a * b;
                }
            }
        }
        out
    }

    pub fn kron(&self, other: &Mat) -> Mat {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Mat::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = other.get(k, l);
                        if !b.is_zero() {
                            out.set(i * other.rows + k, j * other.cols + l, a * b);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Mat {
        Mat::from_fn(nr, nc, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Horizontal concatenation `[A | B | …]`.
    pub fn hcat(parts: &[Mat]) -> Mat {
        let rows = parts[0].rows;
        let cols: usize = parts.iter().map(|p| p.cols).sum();
        let mut out = Mat::zeros(rows, cols);
        let mut off = 0;
        for p in parts {
            assert_eq!(p.rows, rows);
            for i in 0..rows {
                for j in 0..p.cols {
                    out.set(i, off + j, p.get(i, j).clone());
                }
            }
            off += p.cols;
        }
        out
    }

    pub fn vcat(parts: &[Mat]) -> Mat {
        let cols = parts[0].cols;
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            assert_eq!(p.cols, cols);
            data.extend_from_slice(&p.data);
            rows += p.rows;
        }
        Mat { rows, cols, data }
    }

    /// Block `(i, j)` of size `bs × bs` in the interleaved layout where the
    /// composite index is `outer · bs_outer + inner`. Used for an operator on
    /// `H ⊗ S` viewed as an `S`-indexed matrix of `End(H)` entries: entry
    /// `(h, s), (h', s')` sits at row `h·s_dim + s`.
    pub fn aux_block(&self, h: usize, s_dim: usize, s: usize, s2: usize) -> Mat {
        Mat::from_fn(h, h, |i, j| self.get(i * s_dim + s, j * s_dim + s2).clone())
    }

    pub fn commutator(&self, other: &Mat) -> Mat {
        &self.matmul(other) - &other.matmul(self)
    }

    pub fn max_abs_f64(&self) -> f64 {
        self.data.iter().map(|v| crate::exactnum::to_f64(v).abs()).fold(0.0, f64::max)
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        self.check_same(rhs);
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.matmul(rhs)
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| -v).collect() }
    }
}

/// Embeds an operator `a` on two tensor slots `(s1, s2)` of a product space
/// with slot dimensions `dims`. `a` is indexed as `[(i1, i2), (j1, j2)]`
/// with `s1` major.
pub fn embed_two(a: &Mat, dims: &[usize], s1: usize, s2: usize) -> Mat {
    let total: usize = dims.iter().product();
    let (d1, d2) = (dims[s1], dims[s2]);
    assert_eq!(a.rows(), d1 * d2);
    let strides: Vec<usize> = (0..dims.len())
        .map(|s| dims[s + 1..].iter().product())
        .collect();
    let mut out = Mat::zeros(total, total);
    for col in 0..total {
        let j1 = (col / strides[s1]) % d1;
        let j2 = (col / strides[s2]) % d2;
        let rest = col - j1 * strides[s1] - j2 * strides[s2];
        for i1 in 0..d1 {
            for i2 in 0..d2 {
                let v = a.get(i1 * d2 + i2, j1 * d2 + j2);
                if !v.is_zero() {
                    out.set(rest + i1 * strides[s1] + i2 * strides[s2], col, v.clone());
                }
            }
        }
    }
    out
}
