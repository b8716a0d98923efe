//! Boundary grid and coefficient/value transforms.

use std::f64::consts::TAU;

use num_complex::Complex64;
use num_rational::Ratio;
use rustfft::FftPlanner;

use crate::{MslError, Result};

/// Uniform sampling grid on the unit circle: `G` points `exp(2 pi i j / G)`,
/// `G` a power of two, `G >= 16`. Grid point `j` is the left endpoint of the
/// half-open cell `[j/G, (j+1)/G)` in turn coordinates, so the cells tile the
/// circle exactly and each grid point belongs to exactly one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundaryGrid {
    size: usize,
}

impl BoundaryGrid {
    pub fn new(size: usize) -> Result<Self> {
        if size < 16 || !size.is_power_of_two() {
            return Err(MslError::InvalidGrid(size));
        }
        Ok(BoundaryGrid { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Grid point `exp(2 pi i j / G)`.
    pub fn point(&self, j: usize) -> Complex64 {
        let theta = TAU * (j as f64) / (self.size as f64);
        Complex64::new(theta.cos(), theta.sin())
    }

    /// Angle of grid point `j` in turns, as an exact rational `j/G`.
    pub fn turn(&self, j: usize) -> Ratio<i64> {
        Ratio::new(j as i64, self.size as i64)
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.size).map(move |j| self.point(j))
    }
}

impl Default for BoundaryGrid {
    fn default() -> Self {
        BoundaryGrid { size: 4096 }
    }
}

/// Values `v_j = sum_k c_k zeta_j^k` at all grid points, via an unnormalized
/// inverse FFT. Coefficients beyond the grid size are folded modulo `G`
/// (callers keep polynomial degrees below the grid size).
pub fn values_from_coeffs(coeffs: &[Complex64], grid: &BoundaryGrid) -> Vec<Complex64> {
    let g = grid.size();
    let mut buf = vec![Complex64::new(0.0, 0.0); g];
    for (k, c) in coeffs.iter().enumerate() {
        buf[k % g] += c;
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(g).process(&mut buf);
    buf
}

/// Coefficients `c_k = (1/G) sum_j v_j zeta_j^{-k}` for `k = 0..G-1`.
/// Indices above `G/2` represent negative frequencies `k - G`.
pub fn coeffs_from_values(values: &[Complex64]) -> Vec<Complex64> {
    let g = values.len();
    let mut buf = values.to_vec();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(g).process(&mut buf);
    let scale = 1.0 / g as f64;
    for c in &mut buf {
        *c *= scale;
    }
    buf
}

/// Horner evaluation of `sum_k c_k z^k`.
pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transforms_round_trip() {
        let grid = BoundaryGrid::new(64).unwrap();
        let coeffs: Vec<Complex64> = (0..10)
            .map(|k| Complex64::new(1.0 / (k as f64 + 1.0), 0.3 * k as f64))
            .collect();
        let values = values_from_coeffs(&coeffs, &grid);
        for (j, v) in values.iter().enumerate() {
            let direct = horner(&coeffs, grid.point(j));
            assert!((v - direct).norm() < 1e-12);
        }
        let back = coeffs_from_values(&values);
        for k in 0..10 {
            assert!((back[k] - coeffs[k]).norm() < 1e-12);
        }
        for k in 10..64 {
            assert!(back[k].norm() < 1e-12);
        }
    }

    #[test]
    fn grid_validation() {
        assert!(BoundaryGrid::new(8).is_err());
        assert!(BoundaryGrid::new(48).is_err());
        assert!(BoundaryGrid::new(16).is_ok());
    }
}
