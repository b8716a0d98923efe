//! Column-to-inner matrix construction.
//!
//! Input: bounded analytic functions `phi_1..phi_N` with `||phi_n|| <= 1` and
//! a joint boundary lower bound `ess inf sum |phi_n|^2 = c^2 > 0`. Output: an
//! invertible matrix function `Psi` and inner functions `theta_n` with
//! `Psi [phi_n] = [theta_n]`.
//!
//! The construction: threshold sets `tau_n = {|phi_n| >= delta_n}` are
//! refined into disjoint positive-measure sets `sigma_n`; outer functions
//! `kappa_nk` take a two-valued boundary modulus (`a` or `b` off `sigma_k`,
//! `1` on it); each row sum `sum_k kappa_nk phi_k` is bounded below on the
//! boundary, so its outer part `eta_n` is invertible and the inner part is
//! `theta_n`. Then `Psi = [kappa_nk / eta_n]` and `det Psi =
//! det[kappa_nk] / prod eta_n` is bounded away from zero. Every inequality
//! used is certified numerically on the grid or at interior sample points.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::config::Tolerances;
use crate::disc_algebra::{
    outer_from_log_modulus, refine_disjoint, ArcSet, BoundaryGrid, DiscFunction, OuterFunction,
};
use crate::{MslError, Result};

/// A validated column of functions with cached grid samples.
#[derive(Debug, Clone)]
pub struct ColumnData {
    funcs: Vec<DiscFunction>,
    samples: Vec<Vec<Complex64>>,
    grid: BoundaryGrid,
    sup_mods: Vec<f64>,
    c_squared: f64,
}

impl ColumnData {
    /// Samples the column and checks the two standing hypotheses: each entry
    /// bounded by 1 (within the inner tolerance) and the joint boundary lower
    /// bound positive. Entries must be evaluable at every grid point.
    pub fn new(funcs: Vec<DiscFunction>, grid: BoundaryGrid, tol: &Tolerances) -> Result<Self> {
        if funcs.is_empty() {
            return Err(MslError::InvalidParameter("empty column".into()));
        }
        let mut samples = Vec::with_capacity(funcs.len());
        let mut sup_mods = Vec::with_capacity(funcs.len());
        for (i, f) in funcs.iter().enumerate() {
            let s = f.sample_grid(&grid)?;
            let sup = s.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if sup > 1.0 + tol.inner {
                return Err(MslError::EntryNotBounded { index: i, sup });
            }
            samples.push(s);
            sup_mods.push(sup);
        }
        let c_squared = (0..grid.size())
            .map(|j| samples.iter().map(|s| s[j].norm_sqr()).sum::<f64>())
            .fold(f64::INFINITY, f64::min);
        if !(c_squared > 0.0) {
            return Err(MslError::InfeasibleColumn(c_squared));
        }
        Ok(ColumnData {
            funcs,
            samples,
            grid,
            sup_mods,
            c_squared,
        })
    }

    pub fn len(&self) -> usize {
        self.funcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.funcs.is_empty()
    }

    pub fn funcs(&self) -> &[DiscFunction] {
        &self.funcs
    }

    pub fn samples(&self) -> &[Vec<Complex64>] {
        &self.samples
    }

    pub fn grid(&self) -> &BoundaryGrid {
        &self.grid
    }

    pub fn sup_mods(&self) -> &[f64] {
        &self.sup_mods
    }

    /// The boundary lower bound `c^2 = min_j sum_n |phi_n(zeta_j)|^2`.
    pub fn c_squared(&self) -> f64 {
        self.c_squared
    }

    pub fn c(&self) -> f64 {
        self.c_squared.sqrt()
    }
}

/// The positive parameters of the construction.
#[derive(Debug, Clone)]
pub struct PsiParameters {
    pub delta: Vec<f64>,
    pub delta_min: f64,
    pub a: f64,
    pub b: f64,
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0_f64, |acc, k| acc * k as f64)
}

/// Deterministic parameter rule with at least a factor-2 margin in every
/// strict inequality:
/// `delta_n = min(0.9 ||phi_n||, c / sqrt(2N))`, `a = delta/2`,
/// `b = min(a^{N-1}/(2 N!), delta/(4 max(1, N-2)), delta/(2(N-1)))`.
pub fn choose_parameters(col: &ColumnData) -> Result<PsiParameters> {
    if !(col.c_squared() > 0.0) {
        return Err(MslError::InfeasibleColumn(col.c_squared()));
    }
    let n = col.len();
    let c = col.c();
    let delta: Vec<f64> = col
        .sup_mods()
        .iter()
        .map(|&s| (0.9 * s).min(c / (2.0 * n as f64).sqrt()))
        .collect();
    let delta_min = delta.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(delta_min > 0.0) {
        return Err(MslError::InvalidParameter(
            "a column entry vanishes on the grid; normalize the column first".into(),
        ));
    }
    let a = delta_min / 2.0;
    let mut b = (a.powi(n as i32 - 1) / (2.0 * factorial(n)))
        .min(delta_min / (4.0 * 1.0_f64.max(n as f64 - 2.0)));
    if n >= 2 {
        b = b.min(delta_min / (2.0 * (n as f64 - 1.0)));
    }
    let params = PsiParameters {
        delta,
        delta_min,
        a,
        b,
    };
    validate_parameters(col, &params)?;
    Ok(params)
}

/// Checks every inequality the construction relies on.
pub fn validate_parameters(col: &ColumnData, p: &PsiParameters) -> Result<()> {
    let n = col.len();
    if p.delta.len() != n {
        return Err(MslError::DimensionMismatch(format!(
            "{} thresholds for a column of {}",
            p.delta.len(),
            n
        )));
    }
    let fail = |msg: String| Err(MslError::InvalidParameter(msg));
    if !(p.a > 0.0 && p.b > 0.0) {
        return fail(format!("a = {}, b = {} must be positive", p.a, p.b));
    }
    for (i, (&d, &s)) in p.delta.iter().zip(col.sup_mods()).enumerate() {
        if !(d > 0.0 && d < s) {
            return fail(format!(
                "delta_{i} = {d} must lie strictly between 0 and the sup {s}"
            ));
        }
    }
    let sum_sq: f64 = p.delta.iter().map(|d| d * d).sum();
    if !(sum_sq < col.c_squared()) {
        return fail(format!(
            "sum of delta^2 = {sum_sq} must be below c^2 = {}",
            col.c_squared()
        ));
    }
    if !(p.a.powi(n as i32 - 1) > factorial(n) * p.b) {
        return fail(format!(
            "a^(N-1) = {} must exceed N! b = {}",
            p.a.powi(n as i32 - 1),
            factorial(n) * p.b
        ));
    }
    if !(p.delta_min > p.a + (n as f64 - 2.0) * p.b) {
        return fail(format!(
            "delta = {} must exceed a + (N-2) b = {}",
            p.delta_min,
            p.a + (n as f64 - 2.0) * p.b
        ));
    }
    Ok(())
}

/// Threshold sets `tau_n = {zeta : |phi_n(zeta)| >= delta_n}`, converted to
/// exact arc sets by marking grid cells at their left endpoints.
pub fn build_tau_sets(col: &ColumnData, params: &PsiParameters) -> Result<Vec<ArcSet>> {
    let g = col.grid().size();
    let mut out = Vec::with_capacity(col.len());
    for (n, s) in col.samples().iter().enumerate() {
        let marked: Vec<bool> = (0..g).map(|j| s[j].norm() >= params.delta[n]).collect();
        if !marked.iter().any(|&m| m) {
            return Err(MslError::ResolutionError {
                index: n,
                delta: params.delta[n],
            });
        }
        out.push(cells_to_arcset(&marked, col.grid())?);
    }
    Ok(out)
}

fn cells_to_arcset(marked: &[bool], grid: &BoundaryGrid) -> Result<ArcSet> {
    let g = marked.len();
    let mut pairs = Vec::new();
    let mut run_start: Option<usize> = None;
    for j in 0..=g {
        let m = j < g && marked[j];
        match (run_start, m) {
            (None, true) => run_start = Some(j),
            (Some(s), false) => {
                let end = if j == g {
                    crate::disc_algebra::Turn::new(1, 1)
                } else {
                    grid.turn(j)
                };
                pairs.push((grid.turn(s), end));
                run_start = None;
            }
            _ => {}
        }
    }
    ArcSet::from_pairs(&pairs)
}

/// Numeric certificates attached to a built matrix.
#[derive(Debug, Clone)]
pub struct PsiCertificates {
    /// Largest grid deviation of any `|theta_n|` from 1.
    pub theta_unimodular_dev: f64,
    /// Largest grid deviation of any `|sum_k Psi_nk phi_k|` from 1, computed
    /// from independently sampled `Psi` entries.
    pub row_identity_dev: f64,
    /// Grid lower bound on `|det Psi|` (the invertibility certificate).
    pub det_psi_grid_min: f64,
    /// Grid lower bound on the row-sum outer parts `|eta_n|`.
    pub eta_grid_min: f64,
    /// Grid cells on which some `|phi_n|` crosses its threshold; the arc
    /// conversion can misclassify only these.
    pub threshold_crossing_cells: usize,
}

/// The built matrix: thresholds, refinement, outer entries, inner column,
/// and the assembled `Psi` with certificates.
#[derive(Debug, Clone)]
pub struct PsiMatrix {
    n: usize,
    grid: BoundaryGrid,
    pub params: PsiParameters,
    pub tau: Vec<ArcSet>,
    pub sigma: Vec<ArcSet>,
    /// `kappa[n][k]`, all outer.
    pub kappa: Vec<Vec<DiscFunction>>,
    kappa_raw: Vec<Vec<OuterFunction>>,
    /// Row-sum outer parts `eta_n`.
    pub eta: Vec<DiscFunction>,
    eta_raw: Vec<OuterFunction>,
    /// The inner column `theta_n`.
    pub theta: Vec<DiscFunction>,
    /// `Psi[n][k] = kappa_nk / eta_n`, all outer.
    pub psi: Vec<Vec<DiscFunction>>,
    pub certificates: PsiCertificates,
}

impl PsiMatrix {
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn grid(&self) -> &BoundaryGrid {
        &self.grid
    }

    /// `det [kappa_nk(z)]`.
    pub fn kappa_det_at(&self, z: Complex64) -> Complex64 {
        let n = self.n;
        DMatrix::from_fn(n, n, |r, c| self.kappa_raw[r][c].eval(z)).determinant()
    }

    /// `Psi(z)` as a dense matrix.
    pub fn psi_at(&self, z: Complex64) -> DMatrix<Complex64> {
        let n = self.n;
        DMatrix::from_fn(n, n, |r, c| {
            self.kappa_raw[r][c].eval(z) / self.eta_raw[r].eval(z)
        })
    }

    pub fn det_psi_at(&self, z: Complex64) -> Complex64 {
        self.psi_at(z).determinant()
    }

    /// `prod_n eta_n(z)`.
    pub fn eta_product_at(&self, z: Complex64) -> Complex64 {
        self.eta_raw
            .iter()
            .fold(Complex64::ONE, |acc, e| acc * e.eval(z))
    }

    /// Grid samples of every `Psi` entry (row-major).
    pub fn psi_samples(&self) -> Vec<Vec<Vec<Complex64>>> {
        self.kappa_raw
            .iter()
            .zip(&self.eta_raw)
            .map(|(row, eta)| {
                let recip = eta.recip();
                row.iter()
                    .map(|k| k.multiply(&recip).sample(&self.grid))
                    .collect()
            })
            .collect()
    }
}

/// Builds the matrix with automatically chosen parameters.
pub fn build_psi(col: &ColumnData, tol: &Tolerances) -> Result<PsiMatrix> {
    let params = choose_parameters(col)?;
    build_psi_with(col, params, tol)
}

/// Builds the matrix with explicit (re-validated) parameters.
pub fn build_psi_with(
    col: &ColumnData,
    params: PsiParameters,
    tol: &Tolerances,
) -> Result<PsiMatrix> {
    validate_parameters(col, &params)?;
    let n = col.len();
    let grid = *col.grid();
    let g = grid.size();
    for (i, sup) in col.sup_mods().iter().enumerate() {
        if *sup <= tol.algebraic {
            return Err(MslError::DegenerateColumnEntry(i));
        }
    }

    let tau = build_tau_sets(col, &params)?;
    let sigma = refine_disjoint(&tau)?;

    // two-valued outer: modulus `base` off sigma, 1 on sigma
    let two_valued = |sig: &ArcSet, base: f64| -> Result<OuterFunction> {
        let w: Vec<f64> = (0..g)
            .map(|j| if sig.contains(grid.turn(j)) { 1.0 } else { base })
            .collect();
        Ok(outer_from_log_modulus(&w, &grid, tol.clamp)?.0)
    };
    let diag: Vec<OuterFunction> = sigma
        .iter()
        .map(|s| two_valued(s, params.a))
        .collect::<Result<_>>()?;
    let off: Vec<OuterFunction> = sigma
        .iter()
        .map(|s| two_valued(s, params.b))
        .collect::<Result<_>>()?;

    let kappa_raw: Vec<Vec<OuterFunction>> = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| if r == c { diag[r].clone() } else { off[c].clone() })
                .collect()
        })
        .collect();

    // row sums f_n = sum_k kappa_nk phi_k, their outer and inner parts
    let diag_samples: Vec<Vec<Complex64>> = diag.iter().map(|o| o.sample(&grid)).collect();
    let off_samples: Vec<Vec<Complex64>> = off.iter().map(|o| o.sample(&grid)).collect();
    let phi_samples = col.samples();

    let mut eta_raw = Vec::with_capacity(n);
    let mut theta = Vec::with_capacity(n);
    let mut theta_dev = 0.0_f64;
    let mut eta_grid_min = f64::INFINITY;
    for r in 0..n {
        let mut f_samples = vec![Complex64::ZERO; g];
        for k in 0..n {
            let ks = if r == k { &diag_samples[r] } else { &off_samples[k] };
            for j in 0..g {
                f_samples[j] += ks[j] * phi_samples[k][j];
            }
        }
        let w: Vec<f64> = f_samples.iter().map(|v| v.norm()).collect();
        let (eta, _) = outer_from_log_modulus(&w, &grid, tol.clamp)?;
        let eta_samples = eta.sample(&grid);
        for j in 0..g {
            let e = eta_samples[j].norm();
            if e < eta_grid_min {
                eta_grid_min = e;
            }
            let dev = ((f_samples[j] / eta_samples[j]).norm() - 1.0).abs();
            if dev > theta_dev {
                theta_dev = dev;
            }
        }
        let f_fn = DiscFunction::sum(
            (0..n)
                .map(|k| {
                    DiscFunction::product(vec![
                        DiscFunction::Outer(kappa_raw[r][k].clone()),
                        col.funcs()[k].clone(),
                    ])
                })
                .collect(),
        );
        theta.push(DiscFunction::product(vec![
            f_fn,
            DiscFunction::Outer(eta.recip()),
        ]));
        eta_raw.push(eta);
    }

    // Psi entries and the independent grid certificates
    let psi_raw: Vec<Vec<OuterFunction>> = (0..n)
        .map(|r| {
            let recip = eta_raw[r].recip();
            (0..n).map(|c| kappa_raw[r][c].multiply(&recip)).collect()
        })
        .collect();
    let psi_samples: Vec<Vec<Vec<Complex64>>> = psi_raw
        .iter()
        .map(|row| row.iter().map(|o| o.sample(&grid)).collect())
        .collect();

    let mut row_identity_dev = 0.0_f64;
    let mut det_psi_grid_min = f64::INFINITY;
    for j in 0..g {
        for r in 0..n {
            let mut acc = Complex64::ZERO;
            for k in 0..n {
                acc += psi_samples[r][k][j] * phi_samples[k][j];
            }
            let dev = (acc.norm() - 1.0).abs();
            if dev > row_identity_dev {
                row_identity_dev = dev;
            }
        }
        let m = DMatrix::from_fn(n, n, |r, c| psi_samples[r][c][j]);
        let d = m.determinant().norm();
        if d < det_psi_grid_min {
            det_psi_grid_min = d;
        }
    }

    let threshold_crossing_cells = (0..n)
        .map(|r| {
            (0..g)
                .filter(|&j| {
                    let here = phi_samples[r][j].norm() >= params.delta[r];
                    let next = phi_samples[r][(j + 1) % g].norm() >= params.delta[r];
                    here != next
                })
                .count()
        })
        .sum();

    let kappa = kappa_raw
        .iter()
        .map(|row| row.iter().map(|o| DiscFunction::Outer(o.clone())).collect())
        .collect();
    let eta = eta_raw
        .iter()
        .map(|o| DiscFunction::Outer(o.clone()))
        .collect();
    let psi = psi_raw
        .iter()
        .map(|row| row.iter().map(|o| DiscFunction::Outer(o.clone())).collect())
        .collect();

    Ok(PsiMatrix {
        n,
        grid,
        params,
        tau,
        sigma,
        kappa,
        kappa_raw,
        eta,
        eta_raw,
        theta,
        psi,
        certificates: PsiCertificates {
            theta_unimodular_dev: theta_dev,
            row_identity_dev,
            det_psi_grid_min,
            eta_grid_min,
            threshold_crossing_cells,
        },
    })
}

/// Report of the two displayed lower bounds, checked at interior sample
/// points and on the grid.
#[derive(Debug, Clone)]
pub struct KappaBoundsReport {
    /// Smallest `|det kappa(z)|` over the interior sample points.
    pub interior_min: f64,
    /// The bound `a^{N-1} - N! b`.
    pub interior_bound: f64,
    pub interior_argmin: Complex64,
    /// Smallest `|sum_k kappa_nk phi_k|` on the grid, per row.
    pub row_sum_min: Vec<f64>,
    /// The bound `delta - a - (N-2) b`.
    pub row_sum_bound: f64,
    pub interior_points: usize,
}

/// Low-discrepancy interior sample points (Halton bases 2 and 3, mapped to
/// the disc of radius 0.98; at that radius the discrete boundary completion
/// is exponentially close to the true one, so boundary bounds carry inside).
pub fn interior_halton_points(count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|i| {
            let r = 0.98 * halton(i as u64 + 1, 2).sqrt();
            let t = std::f64::consts::TAU * halton(i as u64 + 1, 3);
            Complex64::new(r * t.cos(), r * t.sin())
        })
        .collect()
}

fn halton(mut index: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while index > 0 {
        f /= base as f64;
        r += f * (index % base) as f64;
        index /= base;
    }
    r
}

/// Certifies the two displayed inequalities: `|det kappa(z)| >= a^{N-1} - N! b`
/// at interior sample points, and the grid row-sum bound
/// `|sum_k kappa_nk phi_k| >= delta - a - (N-2) b`. A violation beyond `tol`
/// is an error; it indicates a numerics bug, not a failure of the bounds.
pub fn verify_kappa_bounds(
    psi: &PsiMatrix,
    col: &ColumnData,
    interior_points: usize,
    tol: f64,
) -> Result<KappaBoundsReport> {
    let n = psi.size();
    let p = &psi.params;
    let interior_bound = p.a.powi(n as i32 - 1) - factorial(n) * p.b;
    let mut interior_min = f64::INFINITY;
    let mut interior_argmin = Complex64::ZERO;
    for z in interior_halton_points(interior_points) {
        let v = psi.kappa_det_at(z).norm();
        if v < interior_min {
            interior_min = v;
            interior_argmin = z;
        }
    }
    if interior_min < interior_bound - tol {
        return Err(MslError::BoundViolation {
            quantity: "|det kappa|".into(),
            value: interior_min,
            bound: interior_bound,
            location: format!("z = {interior_argmin}"),
        });
    }

    let row_sum_bound = p.delta_min - p.a - (n as f64 - 2.0) * p.b;
    let g = psi.grid.size();
    let mut row_sum_min = vec![f64::INFINITY; n];
    for r in 0..n {
        let row_samples: Vec<Vec<Complex64>> = psi.kappa_raw[r]
            .iter()
            .map(|o| o.sample(&psi.grid))
            .collect();
        for j in 0..g {
            let mut acc = Complex64::ZERO;
            for k in 0..n {
                acc += row_samples[k][j] * col.samples()[k][j];
            }
            let v = acc.norm();
            if v < row_sum_min[r] {
                row_sum_min[r] = v;
            }
        }
        if row_sum_min[r] < row_sum_bound - tol {
            return Err(MslError::BoundViolation {
                quantity: format!("|sum_k kappa_{r}k phi_k|"),
                value: row_sum_min[r],
                bound: row_sum_bound,
                location: format!("grid row {r}"),
            });
        }
    }

    Ok(KappaBoundsReport {
        interior_min,
        interior_bound,
        interior_argmin,
        row_sum_min,
        row_sum_bound,
        interior_points,
    })
}

/// Removes identically-zero entries from a column: returns the constant
/// invertible matrix `(I + A2) A1` (a permutation moving nonzero entries
/// first, then copies of the first nonzero entry into the vacated slots) and
/// the reduced column with no zero entries.
pub fn normalize_column(
    funcs: &[DiscFunction],
    grid: &BoundaryGrid,
    zero_tol: f64,
) -> Result<(DMatrix<Complex64>, Vec<DiscFunction>)> {
    let n = funcs.len();
    let sups: Vec<f64> = funcs.iter().map(|f| f.sup_on_grid(grid)).collect();
    let nonzero: Vec<usize> = (0..n).filter(|&i| sups[i] > zero_tol).collect();
    let zero: Vec<usize> = (0..n).filter(|&i| sups[i] <= zero_tol).collect();
    if nonzero.is_empty() {
        return Err(MslError::AllZeroColumn);
    }
    let m = nonzero.len();
    let perm: Vec<usize> = nonzero.iter().chain(zero.iter()).copied().collect();

    let mut a1 = DMatrix::<Complex64>::zeros(n, n);
    for (row, &src) in perm.iter().enumerate() {
        a1[(row, src)] = Complex64::ONE;
    }
    let mut i_plus_a2 = DMatrix::<Complex64>::identity(n, n);
    for row in m..n {
        i_plus_a2[(row, 0)] += Complex64::ONE;
    }
    let pre = &i_plus_a2 * &a1;

    let reduced: Vec<DiscFunction> = (0..n)
        .map(|i| {
            if i < m {
                funcs[perm[i]].clone()
            } else {
                funcs[nonzero[0]].clone()
            }
        })
        .collect();
    Ok((pre, reduced))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc_algebra::Turn;

    const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn tols() -> Tolerances {
        Tolerances::default()
    }

    fn grid() -> BoundaryGrid {
        BoundaryGrid::new(512).unwrap()
    }

    fn constant_column() -> ColumnData {
        let f = DiscFunction::real_constant(SQRT_HALF);
        ColumnData::new(vec![f.clone(), f], grid(), &tols()).unwrap()
    }

    /// The worked column (1/sqrt2, -chi/sqrt2).
    fn worked_column() -> ColumnData {
        let f1 = DiscFunction::real_constant(SQRT_HALF);
        let f2 = DiscFunction::Chi.scaled(Complex64::new(-SQRT_HALF, 0.0));
        ColumnData::new(vec![f1, f2], grid(), &tols()).unwrap()
    }

    #[test]
    fn parameters_for_constant_pair() {
        // c^2 = 1, sup = 1/sqrt2: delta_n = min(0.9/sqrt2, 1/2) = 1/2,
        // a = 1/4, b = min(1/16, 1/8, 1/4) = 1/16
        let col = constant_column();
        let p = choose_parameters(&col).unwrap();
        assert!((p.delta[0] - 0.5).abs() < 1e-12);
        assert!((p.delta[1] - 0.5).abs() < 1e-12);
        assert!((p.a - 0.25).abs() < 1e-12);
        assert!((p.b - 0.0625).abs() < 1e-12);
    }

    #[test]
    fn parameter_rule_is_always_feasible() {
        for n in 1..=5usize {
            let f = DiscFunction::real_constant(1.0 / (n as f64).sqrt());
            let col = ColumnData::new(vec![f; n], grid(), &tols()).unwrap();
            let p = choose_parameters(&col).unwrap();
            validate_parameters(&col, &p).unwrap();
        }
    }

    #[test]
    fn tau_sets_for_constants_cover_circle() {
        let col = constant_column();
        let p = choose_parameters(&col).unwrap();
        let tau = build_tau_sets(&col, &p).unwrap();
        assert_eq!(tau[0], ArcSet::full_circle());
        assert_eq!(tau[1], ArcSet::full_circle());
    }

    #[test]
    fn tau_thresholding_splits_at_level_set() {
        // |phi| = 1 on the upper half circle, 0.01 on the lower; delta = 0.3
        let g = grid();
        let upper = ArcSet::from_pairs(&[(Turn::new(0, 1), Turn::new(1, 2))]).unwrap();
        let w: Vec<f64> = (0..g.size())
            .map(|j| if upper.contains(g.turn(j)) { 1.0 } else { 0.01 })
            .collect();
        let (o, _) = outer_from_log_modulus(&w, &g, 1e-12).unwrap();
        let col = ColumnData::new(vec![DiscFunction::Outer(o)], g, &tols()).unwrap();
        let p = PsiParameters {
            delta: vec![0.3],
            delta_min: 0.3,
            a: 0.15,
            b: 0.01,
        };
        let tau = build_tau_sets(&col, &p).unwrap();
        assert_eq!(tau[0], upper);
    }

    #[test]
    fn union_of_tau_sets_is_full_circle() {
        let col = worked_column();
        let p = choose_parameters(&col).unwrap();
        let tau = build_tau_sets(&col, &p).unwrap();
        let union = tau.iter().fold(ArcSet::empty(), |acc, t| acc.union(t));
        assert_eq!(union.measure(), Turn::new(1, 1));
    }

    #[test]
    fn constant_column_closed_forms() {
        // with sigma = two half circles, kappa_11 kappa_22 = a and
        // kappa_12 kappa_21 = b exactly, so det kappa = a - b
        let col = constant_column();
        let psi = build_psi(&col, &tols()).unwrap();
        let (a, b) = (psi.params.a, psi.params.b);
        for z in [
            Complex64::ZERO,
            Complex64::new(0.5, 0.3),
            Complex64::new(-0.7, 0.1),
        ] {
            let det = psi.kappa_det_at(z);
            assert!(
                (det - Complex64::new(a - b, 0.0)).norm() < 1e-9,
                "det kappa at {z} = {det}"
            );
        }
        assert!(psi.certificates.theta_unimodular_dev < 1e-8);
        assert!(psi.certificates.det_psi_grid_min > 0.0);
        // |det Psi| = (a-b)/|eta_1 eta_2| with |eta_n| <= 1 + b
        assert!(psi.certificates.det_psi_grid_min >= (a - 2.0 * b) / (1.0 + b).powi(2));
    }

    #[test]
    fn worked_column_builds_with_certificates() {
        let col = worked_column();
        let psi = build_psi(&col, &tols()).unwrap();
        assert!(psi.certificates.theta_unimodular_dev < 1e-5);
        assert!(psi.certificates.row_identity_dev < 1e-5);
        assert!(psi.certificates.det_psi_grid_min > 1e-3);
        let report = verify_kappa_bounds(&psi, &col, 200, 1e-6).unwrap();
        assert!(report.interior_min >= report.interior_bound - 1e-6);
        assert!(psi.certificates.eta_grid_min >= report.row_sum_bound - 1e-6);
    }

    #[test]
    fn det_psi_factorizes_through_eta() {
        // det Psi = det kappa / prod eta_n at interior points
        let col = worked_column();
        let psi = build_psi(&col, &tols()).unwrap();
        for z in interior_halton_points(50) {
            let lhs = psi.det_psi_at(z);
            let rhs = psi.kappa_det_at(z) / psi.eta_product_at(z);
            assert!((lhs - rhs).norm() <= 1e-6 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn normalize_identity_when_no_zeros() {
        let col = worked_column();
        let (pre, reduced) = normalize_column(col.funcs(), col.grid(), 1e-8).unwrap();
        assert_eq!(pre, DMatrix::identity(2, 2));
        assert_eq!(reduced.len(), 2);
    }

    #[test]
    fn normalize_copies_first_entry_over_trailing_zero() {
        // N = 3, phi_3 = 0: A1 = I, A2 has a single 1 at row 3 column 1
        let g = grid();
        let f1 = DiscFunction::real_constant(SQRT_HALF);
        let f2 = DiscFunction::Chi.scaled(Complex64::new(SQRT_HALF, 0.0));
        let f3 = DiscFunction::real_constant(0.0);
        let (pre, reduced) = normalize_column(&[f1.clone(), f2, f3], &g, 1e-8).unwrap();
        let mut expect = DMatrix::<Complex64>::identity(3, 3);
        expect[(2, 0)] = Complex64::ONE;
        assert_eq!(pre, expect);
        let z = Complex64::new(0.3, 0.2);
        assert_eq!(reduced[2].eval(z).unwrap(), f1.eval(z).unwrap());
    }

    #[test]
    fn normalize_swaps_then_copies() {
        // N = 2, phi_1 = 0: the permutation swaps, then the copy fills slot 2
        let g = grid();
        let f2 = DiscFunction::real_constant(0.7);
        let (pre, reduced) =
            normalize_column(&[DiscFunction::real_constant(0.0), f2.clone()], &g, 1e-8).unwrap();
        let mut expect = DMatrix::<Complex64>::zeros(2, 2);
        expect[(0, 1)] = Complex64::ONE;
        expect[(1, 1)] = Complex64::ONE;
        expect[(1, 0)] = Complex64::ONE;
        assert_eq!(pre, expect);
        let z = Complex64::new(0.1, 0.0);
        assert_eq!(reduced[0].eval(z).unwrap(), f2.eval(z).unwrap());
        assert_eq!(reduced[1].eval(z).unwrap(), f2.eval(z).unwrap());
    }

    #[test]
    fn normalize_rejects_all_zero() {
        let g = grid();
        let err = normalize_column(&[DiscFunction::real_constant(0.0)], &g, 1e-8);
        assert!(matches!(err, Err(MslError::AllZeroColumn)));
    }

    #[test]
    fn degenerate_entry_rejected_by_build() {
        let g = grid();
        let col = ColumnData::new(
            vec![
                DiscFunction::real_constant(0.9),
                DiscFunction::real_constant(0.0),
            ],
            g,
            &tols(),
        )
        .unwrap();
        assert!(build_psi(&col, &tols()).is_err());
    }

    #[test]
    fn unbounded_entry_rejected() {
        let err = ColumnData::new(vec![DiscFunction::real_constant(1.5)], grid(), &tols());
        assert!(matches!(err, Err(MslError::EntryNotBounded { .. })));
    }
}
