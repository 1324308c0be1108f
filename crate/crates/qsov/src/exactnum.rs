//! Exact rationals and the C-number structure functions of the separation
//! construction (`κ`, `φ_k`, `χ_{k,l}`, `ψ_{l,k}`, `ρ_l`, `σ_k`).

use num::{BigInt, BigRational, One, Signed, Zero};
use std::str::FromStr;

use crate::{Error, Result};

/// Ground field element. Backed by `num::BigRational`, which keeps values
/// reduced with a positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`, with surrounding whitespace allowed.
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let t = s.trim();
    let bad = || Error::Config(format!("not a rational: `{s}`"));
    match t.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(t).map_err(|_| bad())?,
        )),
    }
}

/// Always `"p/q"` form, `"0"` for zero and `"p"` for integers.
pub fn fmt_scalar(x: &Scalar) -> String {
    x.to_string()
}

pub fn to_f64(x: &Scalar) -> f64 {
    use num::ToPrimitive;
    x.to_f64().unwrap_or_else(|| {
        // Huge numerators: scale by a power of two first.
        let n = x.numer().bits() as i64;
        let d = x.denom().bits() as i64;
        let shift = (n - d).clamp(-1000, 1000);
        let scaled = if shift >= 0 {
            x / BigRational::from_integer(BigInt::one() << shift as usize)
        } else {
            x * BigRational::from_integer(BigInt::one() << (-shift) as usize)
        };
        scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
    })
}

/// Best rational approximation with denominator at most `max_den`, by
/// continued fractions.
pub fn rationalize(v: f64, max_den: i64) -> Option<Scalar> {
    if !v.is_finite() {
        return None;
    }
    let neg = v < 0.0;
    let mut x = v.abs();
    let (mut h0, mut h1) = (BigInt::zero(), BigInt::one());
    let (mut k0, mut k1) = (BigInt::one(), BigInt::zero());
    for _ in 0..64 {
        let a = x.floor();
        let ai = BigInt::from(a as i64);
        let h2 = &ai * &h1 + &h0;
        let k2 = &ai * &k1 + &k0;
        if k2 > BigInt::from(max_den) {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let f = x - a;
        if f < 1e-15 {
            break;
        }
        x = 1.0 / f;
    }
    if k1.is_zero() {
        return None;
    }
    let r = BigRational::new(h1, k1);
    Some(if neg { -r } else { r })
}

/// Deformation parameter with its genericity window checked at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct QParam {
    q: Scalar,
    qinv: Scalar,
    window: usize,
}

impl QParam {
    /// Requires `q ∉ {0, 1, -1}` and `q^m ≠ 1` for `2 ≤ m ≤ 2N(n+2)`.
    pub fn new(q: Scalar, n_rank: usize, sites: usize) -> Result<Self> {
        if q.is_zero() || q.abs().is_one() {
            return Err(Error::InvalidQ(format!("q = {q} is degenerate")));
        }
        let window = 2 * n_rank * (sites + 2);
        let mut p = q.clone();
        for m in 2..=window.max(2) {
            p = &p * &q;
            if p.is_one() {
                return Err(Error::InvalidQ(format!("q^{m} = 1 for q = {q}")));
            }
        }
        let qinv = q.recip();
        Ok(QParam { q, qinv, window })
    }

    /// Window sized for the largest desk-scale model, N = 4 and n = 2.
    pub fn generic(q: Scalar) -> Result<Self> {
        Self::new(q, 4, 2)
    }

    pub fn value(&self) -> &Scalar {
        &self.q
    }

    pub fn inv(&self) -> &Scalar {
        &self.qinv
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn pow(&self, e: i64) -> Scalar {
        let base = if e >= 0 { &self.q } else { &self.qinv };
        num::pow(base.clone(), e.unsigned_abs() as usize)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.q)
    }
}

/// `κ(x,y) = (xq² − y)(xq⁻² − y)/(x − y)`.
pub fn kappa(x: &Scalar, y: &Scalar, q: &QParam) -> Result<Scalar> {
    if x == y {
        return Err(Error::PoleAtEqualArguments(fmt_scalar(x)));
    }
    let a = x * q.pow(2) - y;
    let b = x * q.pow(-2) - y;
    Ok(a * b / (x - y))
}

/// Quantum-determinant dressing factor
/// `φ_k(x,y) = Π_{j<k} [(xq^{−(2j+1)} − yq^{1−2N}) Π_{i≤N−3}(xq^{−2j} − yq^{−2i})]^{k−j}`.
pub fn phi(k: usize, x: &Scalar, y: &Scalar, n_rank: usize, q: &QParam) -> Scalar {
    let n = n_rank as i64;
    let mut acc = Scalar::one();
    for j in 0..k as i64 {
        let mut f = x * q.pow(-(2 * j + 1)) - y * q.pow(1 - 2 * n);
        for i in 0..(n - 2).max(0) {
            f *= x * q.pow(-2 * j) - y * q.pow(-2 * i);
        }
        acc *= num::pow(f, (k as i64 - j) as usize);
    }
    acc
}

/// `χ_{k,l}(x,y) = Π_{j<k} [Π_{i<l} κ(xq^{−2j}, yq^{−2i})]^{k−j}`.
pub fn chi(k: usize, l: usize, x: &Scalar, y: &Scalar, q: &QParam) -> Result<Scalar> {
    let mut acc = Scalar::one();
    for j in 0..k as i64 {
        let mut f = Scalar::one();
        for i in 0..l as i64 {
            f *= kappa(&(x * q.pow(-2 * j)), &(y * q.pow(-2 * i)), q)?;
        }
        acc *= num::pow(f, (k as i64 - j) as usize);
    }
    Ok(acc)
}

/// `ψ_{l,k}(y,x) = Π_{j<k} Π_{i<l} (yq^{−2i−1} − xq^{−2j+1})^{−1}`.
pub fn psi(l: usize, k: usize, y: &Scalar, x: &Scalar, q: &QParam) -> Result<Scalar> {
    let mut acc = Scalar::one();
    for j in 0..k as i64 {
        for i in 0..l as i64 {
            let f = y * q.pow(-2 * i - 1) - x * q.pow(-2 * j + 1);
            if f.is_zero() {
                return Err(Error::PoleInPsi(format!("i = {i}, j = {j}")));
            }
            acc /= f;
        }
    }
    Ok(acc)
}

/// Scalar by which `r_{w^l(y), w^{N−1}(x)}` acts:
/// `ρ_l(y,x) = Π_{i<l} (yq^{−2i+1} − xq^{3−2N}) Π_{j≤N−3} (yq^{−2i} − xq^{−2j})`.
pub fn rho(l: usize, y: &Scalar, x: &Scalar, n_rank: usize, q: &QParam) -> Scalar {
    let n = n_rank as i64;
    let mut acc = Scalar::one();
    for i in 0..l as i64 {
        acc *= y * q.pow(-2 * i + 1) - x * q.pow(3 - 2 * n);
        for j in 0..(n - 2).max(0) {
            acc *= y * q.pow(-2 * i) - x * q.pow(-2 * j);
        }
    }
    acc
}

/// `σ_k(x,y) = Π_{j<k} κ(xq^{−2j}, y)`.
pub fn sigma(k: usize, x: &Scalar, y: &Scalar, q: &QParam) -> Result<Scalar> {
    let mut acc = Scalar::one();
    for j in 0..k as i64 {
        acc *= kappa(&(x * q.pow(-2 * j)), y, q)?;
    }
    Ok(acc)
}

/// Scalar identity behind commutativity of the `B(x)` family:
/// `χ(x,y) φ(y,x) = χ(y,x) φ(x,y) ψ(y,x) ρ(y,x)` at level `N − 1`.
pub fn theorem1_scalar_identity(n_rank: usize, x: &Scalar, y: &Scalar, q: &QParam) -> Result<bool> {
    let k = n_rank - 1;
    let lhs = chi(k, k, x, y, q)? * phi(k, y, x, n_rank, q);
    let rhs = chi(k, k, y, x, q)? * phi(k, x, y, n_rank, q) * psi(k, k, y, x, q)? * rho(k, y, x, n_rank, q);
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q75() -> QParam {
        QParam::generic(frac(7, 5)).unwrap()
    }

    #[test]
    fn kappa_hand_value() {
        let q = QParam::generic(int(2)).unwrap();
        // (4 - 2)(1/4 - 2)/(1 - 2) = 7/2
        assert_eq!(kappa(&int(1), &int(2), &q).unwrap(), frac(7, 2));
    }

    #[test]
    fn kappa_at_zero_second_argument() {
        let q = q75();
        let x = frac(-13, 4);
        assert_eq!(kappa(&x, &Scalar::zero(), &q).unwrap(), x);
    }

    #[test]
    fn kappa_pole() {
        assert!(matches!(
            kappa(&int(3), &int(3), &q75()),
            Err(Error::PoleAtEqualArguments(_))
        ));
    }

    #[test]
    fn phi_n2_closed_form() {
        let q = q75();
        let (x, y) = (frac(3, 2), frac(-5, 7));
        assert_eq!(phi(1, &x, &y, 2, &q), &x * q.pow(-1) - &y * q.pow(-3));
    }

    #[test]
    fn phi_vanishes_at_origin() {
        let z = Scalar::zero();
        assert!(phi(1, &z, &z, 3, &q75()).is_zero());
    }

    #[test]
    fn small_index_reductions() {
        let q = q75();
        let (x, y) = (frac(2, 3), frac(9, 4));
        let k = kappa(&x, &y, &q).unwrap();
        assert_eq!(chi(1, 1, &x, &y, &q).unwrap(), k);
        assert_eq!(sigma(1, &x, &y, &q).unwrap(), k);
        assert_eq!(rho(1, &y, &x, 2, &q), &y * q.pow(1) - &x * q.pow(-1));
    }

    #[test]
    fn psi_pole_reported() {
        let q = q75();
        // y q^{-1} = x q  at i = j = 0
        let x = int(1);
        let y = q.pow(2);
        assert!(matches!(psi(1, 1, &y, &x, &q), Err(Error::PoleInPsi(_))));
    }

    #[test]
    fn theorem1_identity_small_cases() {
        let q = q75();
        assert!(theorem1_scalar_identity(2, &int(1), &int(2), &q).unwrap());
        assert!(theorem1_scalar_identity(2, &int(2), &int(2), &q).is_err());
    }

    #[test]
    fn qparam_rejects_unit() {
        assert!(QParam::generic(int(1)).is_err());
        assert!(QParam::generic(int(-1)).is_err());
        assert!(QParam::generic(int(0)).is_err());
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_scalar(" -7/5 ").unwrap(), frac(-7, 5));
        assert_eq!(parse_scalar("4").unwrap(), int(4));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
        assert_eq!(fmt_scalar(&frac(6, 4)), "3/2");
    }

    #[test]
    fn rationalize_recovers_simple_fraction() {
        assert_eq!(rationalize(75.0 / 49.0, 1_000_000), Some(frac(75, 49)));
        assert_eq!(rationalize(-0.125, 1000), Some(frac(-1, 8)));
    }

    #[test]
    fn huge_values_convert_to_float() {
        let big = num::pow(int(10), 400) / num::pow(int(10), 399);
        assert!((to_f64(&big) - 10.0).abs() < 1e-9);
    }
}
