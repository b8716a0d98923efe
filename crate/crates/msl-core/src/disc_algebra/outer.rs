//! Outer functions from boundary modulus data.
//!
//! An outer function is stored as the exponential of the analytic completion
//! of its boundary log-modulus: sampling `u = log w` on the grid, taking FFT
//! coefficients and keeping the analytic half (doubling positive frequencies)
//! gives a polynomial `L` of degree `G/2` with `Re L(zeta_j) = u_j` at every
//! grid point. Then `O = exp(L)` is zero-free on the closed disc, satisfies
//! `|O(zeta_j)| = w_j` up to FFT roundoff, and `O(0) = exp(mean of log w)` is
//! the geometric mean. Quotients and products of outer functions stay in this
//! representation by adding or negating log-coefficient vectors.

use num_complex::Complex64;

use super::function::DiscFunction;
use super::grid::{self, BoundaryGrid};
use crate::{MslError, Result};

/// Zero-free analytic function `exp(L(z))` with `L` a polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterFunction {
    log_coeffs: Vec<Complex64>,
}

impl OuterFunction {
    pub fn constant(value: f64) -> Result<Self> {
        if !(value > 0.0) {
            return Err(MslError::InvalidParameter(format!(
                "outer constant must be positive, got {value}"
            )));
        }
        Ok(OuterFunction {
            log_coeffs: vec![Complex64::new(value.ln(), 0.0)],
        })
    }

    pub fn from_log_coeffs(log_coeffs: Vec<Complex64>) -> Self {
        OuterFunction { log_coeffs }
    }

    pub fn log_coeffs(&self) -> &[Complex64] {
        &self.log_coeffs
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        grid::horner(&self.log_coeffs, z).exp()
    }

    /// Boundary samples at all grid points, via FFT when the grid is large
    /// enough to hold the log-polynomial without folding.
    pub fn sample(&self, g: &BoundaryGrid) -> Vec<Complex64> {
        if self.log_coeffs.len() <= g.size() {
            grid::values_from_coeffs(&self.log_coeffs, g)
                .into_iter()
                .map(|l| l.exp())
                .collect()
        } else {
            g.points().map(|z| self.eval(z)).collect()
        }
    }

    /// Value at the origin: `exp(l_0)`, the geometric mean of the boundary
    /// modulus (times a unimodular factor when `l_0` has an imaginary part).
    pub fn at_origin(&self) -> Complex64 {
        self.log_coeffs
            .first()
            .copied()
            .unwrap_or(Complex64::ZERO)
            .exp()
    }

    /// Reciprocal: negate the log-coefficients.
    pub fn recip(&self) -> OuterFunction {
        OuterFunction {
            log_coeffs: self.log_coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Product: add log-coefficients.
    pub fn multiply(&self, other: &OuterFunction) -> OuterFunction {
        let n = self.log_coeffs.len().max(other.log_coeffs.len());
        let mut coeffs = vec![Complex64::ZERO; n];
        for (k, c) in self.log_coeffs.iter().enumerate() {
            coeffs[k] += c;
        }
        for (k, c) in other.log_coeffs.iter().enumerate() {
            coeffs[k] += c;
        }
        OuterFunction { log_coeffs: coeffs }
    }
}

/// Diagnostics attached to an outer construction.
#[derive(Debug, Clone, Copy, Default)]
pub struct OuterDiagnostics {
    /// Grid points where the modulus was clamped up to the floor.
    pub clamped_points: usize,
}

/// Builds the outer function with prescribed boundary modulus `w` (sampled on
/// the grid). `log w` is replaced by `log(max(w, clamp))`, which keeps the
/// discrete integral finite; the number of clamped points is reported.
/// Fails when `w` vanishes at every grid point.
pub fn outer_from_log_modulus(
    w: &[f64],
    g: &BoundaryGrid,
    clamp: f64,
) -> Result<(OuterFunction, OuterDiagnostics)> {
    let n = g.size();
    if w.len() != n {
        return Err(MslError::DimensionMismatch(format!(
            "modulus has {} samples, grid has {}",
            w.len(),
            n
        )));
    }
    if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
        return Err(MslError::InvalidParameter(
            "boundary modulus must be finite and nonnegative".into(),
        ));
    }
    if w.iter().all(|&x| x == 0.0) {
        return Err(MslError::AllZeroModulus);
    }
    let mut clamped = 0usize;
    let u: Vec<Complex64> = w
        .iter()
        .map(|&x| {
            let v = if x < clamp {
                clamped += 1;
                clamp
            } else {
                x
            };
            Complex64::new(v.ln(), 0.0)
        })
        .collect();
    let c = grid::coeffs_from_values(&u);
    let half = n / 2;
    let mut log_coeffs = vec![Complex64::ZERO; half + 1];
    log_coeffs[0] = Complex64::new(c[0].re, 0.0);
    for k in 1..half {
        log_coeffs[k] = 2.0 * c[k];
    }
    log_coeffs[half] = Complex64::new(c[half].re, 0.0);
    Ok((
        OuterFunction::from_log_coeffs(log_coeffs),
        OuterDiagnostics {
            clamped_points: clamped,
        },
    ))
}

/// Result of an inner/outer factorization of a grid-sampled function.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub inner: DiscFunction,
    pub outer: DiscFunction,
    /// Smallest boundary modulus of the input on the grid.
    pub min_modulus: f64,
    /// Points where the modulus fell below the clamp; the unimodularity of
    /// the inner part is certified only off those points.
    pub clamped_points: usize,
}

/// Splits `f` into inner and outer parts: the outer part is rebuilt from the
/// boundary modulus of `f`, the inner part is `f` divided by it. `f` must be
/// evaluable at every grid point and not vanish almost everywhere there.
pub fn inner_outer_factorize(
    f: &DiscFunction,
    g: &BoundaryGrid,
    clamp: f64,
) -> Result<Factorization> {
    let samples = f.sample_grid(g)?;
    let w: Vec<f64> = samples.iter().map(|v| v.norm()).collect();
    let min_modulus = w.iter().cloned().fold(f64::INFINITY, f64::min);
    let (outer, diag) = outer_from_log_modulus(&w, g, clamp)?;
    let inner = DiscFunction::product(vec![f.clone(), DiscFunction::Outer(outer.recip())]);
    Ok(Factorization {
        inner,
        outer: DiscFunction::Outer(outer),
        min_modulus,
        clamped_points: diag.clamped_points,
    })
}
