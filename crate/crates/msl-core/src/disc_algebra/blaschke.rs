//! Blaschke factors and finite products, pseudohyperbolic geometry, and the
//! Carleson separation constant for simple zero sets.

use num_complex::Complex64;

use crate::{MslError, Result};

/// Single factor `b_l(z) = (|l|/l) (l - z) / (1 - conj(l) z)` for `l != 0`,
/// and `b_0(z) = z`. Finite on the closed disc whenever `|l| < 1`, with
/// `|b_l| <= 1` there and `|b_l| = 1` on the circle.
pub fn blaschke_factor(lambda: Complex64, z: Complex64) -> Complex64 {
    if lambda == Complex64::ZERO {
        z
    } else {
        (lambda.norm() / lambda) * (lambda - z) / (Complex64::ONE - lambda.conj() * z)
    }
}

/// Pseudohyperbolic distance `|b_a(b)|`.
pub fn pseudohyperbolic(a: Complex64, b: Complex64) -> f64 {
    blaschke_factor(a, b).norm()
}

/// Finite Blaschke product: a zero list plus a unimodular constant.
///
/// A product flagged `simple` has pairwise distinct zeros; repeated zeros are
/// allowed only through [`BlaschkeProduct::general`].
#[derive(Debug, Clone, PartialEq)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    constant: Complex64,
    simple: bool,
}

impl BlaschkeProduct {
    /// Simple-zero product with constant 1. Zeros must be pairwise distinct
    /// and strictly inside the disc.
    pub fn new(zeros: Vec<Complex64>) -> Result<Self> {
        for (i, z) in zeros.iter().enumerate() {
            if z.norm() >= 1.0 {
                return Err(MslError::ZeroOutsideDisc(*z));
            }
            if zeros[..i].contains(z) {
                return Err(MslError::DuplicateZero(*z));
            }
        }
        Ok(BlaschkeProduct {
            zeros,
            constant: Complex64::ONE,
            simple: true,
        })
    }

    /// General product: repeated zeros allowed.
    pub fn general(zeros: Vec<Complex64>) -> Result<Self> {
        for z in &zeros {
            if z.norm() >= 1.0 {
                return Err(MslError::ZeroOutsideDisc(*z));
            }
        }
        let simple = zeros
            .iter()
            .enumerate()
            .all(|(i, z)| !zeros[..i].contains(z));
        Ok(BlaschkeProduct {
            zeros,
            constant: Complex64::ONE,
            simple,
        })
    }

    pub fn with_constant(mut self, c: Complex64) -> Result<Self> {
        if (c.norm() - 1.0).abs() > 1e-12 {
            return Err(MslError::InvalidParameter(format!(
                "constant {c} is not unimodular"
            )));
        }
        self.constant = c;
        Ok(self)
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn constant(&self) -> Complex64 {
        self.constant
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .fold(self.constant, |acc, &l| acc * blaschke_factor(l, z))
    }

    /// Product of two products (zero lists concatenate).
    pub fn multiply(&self, other: &BlaschkeProduct) -> Result<BlaschkeProduct> {
        let mut zeros = self.zeros.clone();
        zeros.extend_from_slice(&other.zeros);
        BlaschkeProduct::general(zeros)
            .and_then(|b| b.with_constant(self.constant * other.constant))
    }
}

/// Carleson separation constant of a finite set of pairwise distinct zeros:
/// `inf_n prod_{k != n} |b_{l_k}(l_n)|`. The empty product makes a singleton
/// return 1. Products are accumulated factor by factor in index order, so the
/// value agrees bit for bit with a plain double loop.
pub fn carleson_constant(zeros: &[Complex64]) -> Result<f64> {
    for (i, z) in zeros.iter().enumerate() {
        if z.norm() >= 1.0 {
            return Err(MslError::ZeroOutsideDisc(*z));
        }
        if zeros[..i].contains(z) {
            return Err(MslError::DuplicateZero(*z));
        }
    }
    let mut inf = 1.0_f64;
    for (n, &ln) in zeros.iter().enumerate() {
        let mut prod = 1.0_f64;
        for (k, &lk) in zeros.iter().enumerate() {
            if k != n {
                prod *= blaschke_factor(lk, ln).norm();
            }
        }
        if prod < inf {
            inf = prod;
        }
    }
    Ok(inf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn factor_at_zero_center_is_identity() {
        let z = c(0.3, 0.1);
        assert_eq!(blaschke_factor(Complex64::ZERO, z), z);
    }

    #[test]
    fn factor_vanishes_at_its_zero() {
        let v = blaschke_factor(c(0.5, 0.0), c(0.5, 0.0));
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn factor_at_origin_is_modulus_of_zero() {
        let v = blaschke_factor(c(0.5, 0.0), Complex64::ZERO);
        assert!((v - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn factor_unimodular_on_circle() {
        let l = c(0.4, -0.3);
        for k in 0..16 {
            let t = std::f64::consts::TAU * k as f64 / 16.0;
            let z = c(t.cos(), t.sin());
            assert!((blaschke_factor(l, z).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn carleson_single_zero_is_one() {
        assert_eq!(carleson_constant(&[c(0.3, 0.0)]).unwrap(), 1.0);
    }

    #[test]
    fn carleson_pair_origin_and_half() {
        // |b_0(0.5)| = 0.5 and |b_{0.5}(0)| = 0.5, so the infimum is 0.5
        let v = carleson_constant(&[c(0.0, 0.0), c(0.5, 0.0)]).unwrap();
        assert!((v - 0.5).abs() < 1e-15);
    }

    #[test]
    fn carleson_rejects_duplicates() {
        let err = carleson_constant(&[c(0.2, 0.1), c(0.2, 0.1)]);
        assert!(matches!(err, Err(MslError::DuplicateZero(_))));
    }

    #[test]
    fn product_vanishes_at_each_zero() {
        let b = BlaschkeProduct::new(vec![c(0.1, 0.2), c(-0.4, 0.0), c(0.0, 0.6)]).unwrap();
        for &z in b.zeros() {
            assert!(b.eval(z).norm() < 1e-14);
        }
    }

    #[test]
    fn simple_constructor_rejects_repeats_and_outside() {
        assert!(BlaschkeProduct::new(vec![c(0.5, 0.0), c(0.5, 0.0)]).is_err());
        assert!(BlaschkeProduct::new(vec![c(1.0, 0.0)]).is_err());
        assert!(BlaschkeProduct::general(vec![c(0.5, 0.0), c(0.5, 0.0)]).is_ok());
    }
}
