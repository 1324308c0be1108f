//! Matrix-valued polynomial interpolation over exact rationals.

use num::{One, Zero};

use super::Mat;
use crate::exactnum::Scalar;

/// Coefficients `C_0 … C_{n−1}` of the unique polynomial of degree `< n`
/// with `Σ_t C_t x_i^t = vals[i]` at `n` distinct nodes.
pub fn lagrange_coefficients(xs: &[Scalar], vals: &[Mat]) -> Vec<Mat> {
    assert_eq!(xs.len(), vals.len());
    let n = xs.len();
    let (r, c) = (vals[0].rows(), vals[0].cols());
    let mut coeffs = vec![Mat::zeros(r, c); n];
    for i in 0..n {
        // Basis polynomial Π_{j≠i} (x − x_j) / (x_i − x_j), low degree first.
        let mut num = vec![Scalar::one()];
        let mut den = Scalar::one();
        for (j, xj) in xs.iter().enumerate() {
            if j == i {
                continue;
            }
            let mut next = vec![Scalar::zero(); num.len() + 1];
            for (t, v) in num.iter().enumerate() {
                next[t + 1] += v;
                next[t] -= xj * v;
            }
            num = next;
            den *= &xs[i] - xj;
        }
        let inv = den.recip();
        for (t, v) in num.iter().enumerate() {
            coeffs[t].axpy(&(v * &inv), &vals[i]);
        }
    }
    coeffs
}

/// Horner evaluation of a matrix polynomial.
pub fn evaluate(coeffs: &[Mat], x: &Scalar) -> Mat {
    let mut acc = Mat::zeros(coeffs[0].rows(), coeffs[0].cols());
    for c in coeffs.iter().rev() {
        acc = acc.scale(x);
        acc.add_assign_ref(c);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{frac, int};

    #[test]
    fn recovers_quadratic() {
        let c0 = Mat::from_i64(1, 2, &[1, -2]);
        let c1 = Mat::from_i64(1, 2, &[0, 3]);
        let c2 = Mat::from_vec(1, 2, vec![frac(1, 2), int(0)]);
        let coeffs = vec![c0, c1, c2];
        let xs = vec![int(-1), frac(1, 3), int(2), int(5)];
        let vals: Vec<Mat> = xs.iter().map(|x| evaluate(&coeffs, x)).collect();
        let got = lagrange_coefficients(&xs, &vals);
        assert_eq!(&got[..3], &coeffs[..]);
        assert!(got[3].is_zero());
    }

    #[test]
    fn constant_has_degree_zero() {
        let k = Mat::from_i64(2, 2, &[3, 1, 0, 7]);
        let xs = vec![int(1), int(2), int(3)];
        let got = lagrange_coefficients(&xs, &vec![k.clone(); 3]);
        assert_eq!(got[0], k);
        assert!(got[1].is_zero() && got[2].is_zero());
    }
}
