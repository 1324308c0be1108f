//! Fraction-free (Bareiss) elimination over the integers, with rational
//! back-substitution.

use num::{BigInt, BigRational, Integer, One, Zero};

use super::Mat;
use crate::exactnum::Scalar;
use crate::{Error, Result};

/// Row-echelon data produced by Bareiss elimination.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

/// Clears denominators row by row (scaling a row leaves its span unchanged).
fn integer_rows(m: &Mat) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| {
            let row = m.row(i);
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect()
}

fn bareiss(mut a: Vec<Vec<BigInt>>, ncols: usize, pivot_limit: usize) -> Echelon {
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..pivot_limit {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let piv_row = &top[r];
        let pv = piv_row[col].clone();
        for row in rest.iter_mut() {
            let f = row[col].clone();
            for j in col + 1..ncols {
                let v = &pv * &row[j] - &f * &piv_row[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[col] = BigInt::zero();
        }
        // Entries left of the pivot in later rows are already zero; entries in
        // skipped columns were scaled consistently, so the exact division holds.
        prev = pv;
        pivots.push(col);
        r += 1;
    }
    a.truncate(nrows);
    Echelon { rows: a, pivots }
}

pub fn rank(m: &Mat) -> usize {
    if m.rows() == 0 || m.cols() == 0 {
        return 0;
    }
    bareiss(integer_rows(m), m.cols(), m.cols()).pivots.len()
}

/// Reduced row-echelon form of the echelon rows restricted to the pivot rows.
fn rref(e: &Echelon, ncols: usize) -> Vec<Vec<Scalar>> {
    let k = e.pivots.len();
    let mut rows: Vec<Vec<Scalar>> = e.rows[..k]
        .iter()
        .map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect())
        .collect();
    for (i, &pc) in e.pivots.iter().enumerate().rev() {
        let inv = rows[i][pc].recip();
        for v in rows[i].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = rows[i].clone();
        for row in rows.iter_mut().take(i) {
            let f = row[pc].clone();
            if f.is_zero() {
                continue;
            }
            for j in pc..ncols {
                if !pivot_row[j].is_zero() {
                    row[j] -= &f * &pivot_row[j];
                }
            }
        }
    }
    rows
}

/// Exact column-reduced basis of the image of `p`, one column per basis
/// vector, in the canonical reduced form (each basis vector has a 1 in its
/// own pivot coordinate and 0 in the other pivot coordinates).
pub fn image_basis(p: &Mat) -> Mat {
    let pt = p.transpose();
    if pt.rows() == 0 {
        return Mat::zeros(p.rows(), 0);
    }
    let e = bareiss(integer_rows(&pt), pt.cols(), pt.cols());
    let r = rref(&e, pt.cols());
    let k = r.len();
    Mat::from_fn(p.rows(), k, |i, j| r[j][i].clone())
}

/// Column basis of `{v : A v = 0}` from the reduced row-echelon form.
pub fn kernel_basis(a: &Mat) -> Mat {
    let n = a.cols();
    if a.rows() == 0 {
        return Mat::identity(n);
    }
    let e = bareiss(integer_rows(a), n, n);
    let r = rref(&e, n);
    let free: Vec<usize> = (0..n).filter(|c| !e.pivots.contains(c)).collect();
    let mut out = Mat::zeros(n, free.len());
    for (t, &f) in free.iter().enumerate() {
        out.set(f, t, Scalar::one());
        for (i, &pc) in e.pivots.iter().enumerate() {
            out.set(pc, t, -r[i][f].clone());
        }
    }
    out
}

/// Coordinates map for a full-column-rank basis `u`: returns the row indices
/// of an invertible square submatrix and its inverse, so that
/// `coords(v) = inv · v[rows]` for any `v` in the column span of `u`.
pub fn left_inverse(u: &Mat) -> Result<(Vec<usize>, Mat)> {
    let ut = u.transpose();
    let e = bareiss(integer_rows(&ut), ut.cols(), ut.cols());
    if e.pivots.len() < u.cols() {
        return Err(Error::Singular);
    }
    let rows = e.pivots.clone();
    let sq = Mat::from_fn(u.cols(), u.cols(), |i, j| u.get(rows[i], j).clone());
    Ok((rows, inverse(&sq)?))
}

pub fn inverse(a: &Mat) -> Result<Mat> {
    if !a.is_square() {
        return Err(Error::ShapeMismatch(format!("inverse of {}x{}", a.rows(), a.cols())));
    }
    let n = a.rows();
    let aug = Mat::hcat(&[a.clone(), Mat::identity(n)]);
    let e = bareiss(integer_rows(&aug), 2 * n, n);
    if e.pivots.len() < n {
        return Err(Error::Singular);
    }
    let r = rref(&e, 2 * n);
    Ok(Mat::from_fn(n, n, |i, j| r[i][n + j].clone()))
}

pub fn determinant_is_zero(a: &Mat) -> bool {
    rank(a) < a.rows()
}

/// Solves `X · A = B` exactly; `Inconsistent` when `B`'s rows are not in the
/// row space of `A`. Free variables are set to zero.
pub fn solve_exact(a: &Mat, b: &Mat) -> Result<Mat> {
    if a.cols() != b.cols() {
        return Err(Error::ShapeMismatch(format!(
            "solve: A has {} columns, B has {}",
            a.cols(),
            b.cols()
        )));
    }
    // Transposed system Aᵀ Xᵀ = Bᵀ with augmented columns.
    let at = a.transpose();
    let bt = b.transpose();
    let (n_eq, n_var, n_rhs) = (at.rows(), at.cols(), bt.cols());
    if n_eq == 0 {
        return Ok(Mat::zeros(b.rows(), a.rows()));
    }
    let aug = Mat::hcat(&[at, bt]);
    let e = bareiss(integer_rows(&aug), n_var + n_rhs, n_var);
    let k = e.pivots.len();
    for row in &e.rows[k..] {
        if row[n_var..].iter().any(|v| !v.is_zero()) {
            return Err(Error::Inconsistent);
        }
    }
    let r = rref(&e, n_var + n_rhs);
    let mut xt = Mat::zeros(n_var, n_rhs);
    for (i, &pc) in e.pivots.iter().enumerate() {
        for j in 0..n_rhs {
            xt.set(pc, j, r[i][n_var + j].clone());
        }
    }
    Ok(xt.transpose())
}

/// Scalar `λ` with `a = λ·b` when one exists (`b ≠ 0`).
pub fn proportionality(a: &Mat, b: &Mat) -> Option<Scalar> {
    let (i, bv) = b.data().iter().enumerate().find(|(_, v)| !v.is_zero())?;
    let lambda = &a.data()[i] / bv;
    if &b.scale(&lambda) == a {
        Some(lambda)
    } else {
        None
    }
}

pub fn is_scalar_multiple_of_identity(a: &Mat) -> Option<Scalar> {
    if !a.is_square() || a.rows() == 0 {
        return None;
    }
    let s = a.get(0, 0).clone();
    if *a == Mat::scalar_identity(a.rows(), &s) {
        Some(s)
    } else {
        None
    }
}
