//! Evaluable functions on the closed unit disc.
//!
//! [`DiscFunction`] is a small expression tree over the variants the rest of
//! the crate needs: Blaschke products, the singular inner exponential
//! `exp(a (z+1)/(z-1))`, outer functions, the identity `chi(z) = z`,
//! constants, finite products and sums, and division by `chi` with a
//! removable singularity at the origin. Every variant is evaluable at any
//! `|z| < 1` and at every boundary grid point away from declared
//! singularities (`z = 1` for the singular exponential).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::arcs::ArcSet;
use super::blaschke::BlaschkeProduct;
use super::grid::BoundaryGrid;
use super::outer::{outer_from_log_modulus, OuterFunction};
use crate::{MslError, Result};

/// Threshold below which `f(z)/z` switches to the series evaluation.
const CHI_DIVISION_SWITCH: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub enum DiscFunction {
    Const(Complex64),
    /// The identity function `chi(z) = z`.
    Chi,
    Blaschke(BlaschkeProduct),
    /// `exp(a (z+1)/(z-1))`, inner, zero-free, singular at `z = 1`.
    SingularExp { a: f64 },
    Outer(OuterFunction),
    Product(Vec<DiscFunction>),
    Sum(Vec<DiscFunction>),
    /// `f(z)/z` for an `f` vanishing at the origin; the singularity is
    /// removable and handled by a short Taylor expansion near 0.
    DivChi(Box<DiscFunction>),
}

impl DiscFunction {
    pub fn constant(value: Complex64) -> Self {
        DiscFunction::Const(value)
    }

    pub fn real_constant(value: f64) -> Self {
        DiscFunction::Const(Complex64::new(value, 0.0))
    }

    pub fn singular_exp(a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(MslError::InvalidParameter(format!(
                "singular exponential needs a > 0, got {a}"
            )));
        }
        Ok(DiscFunction::SingularExp { a })
    }

    pub fn product(factors: Vec<DiscFunction>) -> Self {
        DiscFunction::Product(factors)
    }

    pub fn sum(terms: Vec<DiscFunction>) -> Self {
        DiscFunction::Sum(terms)
    }

    /// Scalar multiple.
    pub fn scaled(self, c: Complex64) -> Self {
        DiscFunction::Product(vec![DiscFunction::Const(c), self])
    }

    /// `f(z)/z`; fails unless `f` vanishes at the origin (within 1e-8), which
    /// makes the quotient analytic.
    pub fn div_chi(f: DiscFunction) -> Result<Self> {
        let at0 = f.eval(Complex64::ZERO)?;
        if at0.norm() > 1e-8 {
            return Err(MslError::InvalidChiDivision(at0.norm()));
        }
        Ok(DiscFunction::DivChi(Box::new(f)))
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self {
            DiscFunction::Const(c) => Ok(*c),
            DiscFunction::Chi => Ok(z),
            DiscFunction::Blaschke(b) => Ok(b.eval(z)),
            DiscFunction::SingularExp { a } => {
                if z == Complex64::ONE {
                    return Err(MslError::EvaluationAtSingularity(z));
                }
                Ok(((z + 1.0) / (z - 1.0) * a).exp())
            }
            DiscFunction::Outer(o) => Ok(o.eval(z)),
            DiscFunction::Product(fs) => {
                let mut acc = Complex64::ONE;
                for f in fs {
                    acc *= f.eval(z)?;
                }
                Ok(acc)
            }
            DiscFunction::Sum(fs) => {
                let mut acc = Complex64::ZERO;
                for f in fs {
                    acc += f.eval(z)?;
                }
                Ok(acc)
            }
            DiscFunction::DivChi(f) => {
                if z.norm() >= CHI_DIVISION_SWITCH {
                    Ok(f.eval(z)? / z)
                } else {
                    eval_quotient_near_origin(f, z)
                }
            }
        }
    }

    /// Boundary points where evaluation fails.
    pub fn boundary_singularities(&self) -> Vec<Complex64> {
        let mut out = Vec::new();
        self.collect_singularities(&mut out);
        out.dedup_by(|a, b| (*a - *b).norm() < 1e-14);
        out
    }

    fn collect_singularities(&self, out: &mut Vec<Complex64>) {
        match self {
            DiscFunction::SingularExp { .. } => out.push(Complex64::ONE),
            DiscFunction::Product(fs) | DiscFunction::Sum(fs) => {
                for f in fs {
                    f.collect_singularities(out);
                }
            }
            DiscFunction::DivChi(f) => f.collect_singularities(out),
            _ => {}
        }
    }

    /// Samples at all grid points; fails if any grid point is singular.
    pub fn sample_grid(&self, g: &BoundaryGrid) -> Result<Vec<Complex64>> {
        match self {
            DiscFunction::Outer(o) => Ok(o.sample(g)),
            DiscFunction::Product(fs) => {
                let mut acc = vec![Complex64::ONE; g.size()];
                for f in fs {
                    for (a, v) in acc.iter_mut().zip(f.sample_grid(g)?) {
                        *a *= v;
                    }
                }
                Ok(acc)
            }
            DiscFunction::Sum(fs) => {
                let mut acc = vec![Complex64::ZERO; g.size()];
                for f in fs {
                    for (a, v) in acc.iter_mut().zip(f.sample_grid(g)?) {
                        *a += v;
                    }
                }
                Ok(acc)
            }
            _ => g.points().map(|z| self.eval(z)).collect(),
        }
    }

    /// Samples with a validity mask: grid points that hit a singularity are
    /// marked invalid instead of failing the whole sweep.
    pub fn sample_grid_masked(&self, g: &BoundaryGrid) -> MaskedSamples {
        let mut values = Vec::with_capacity(g.size());
        let mut valid = Vec::with_capacity(g.size());
        for z in g.points() {
            match self.eval(z) {
                Ok(v) => {
                    values.push(v);
                    valid.push(true);
                }
                Err(_) => {
                    values.push(Complex64::ZERO);
                    valid.push(false);
                }
            }
        }
        MaskedSamples { values, valid }
    }

    /// Largest modulus over valid grid points.
    pub fn sup_on_grid(&self, g: &BoundaryGrid) -> f64 {
        let samples = self.sample_grid_masked(g);
        samples
            .values
            .iter()
            .zip(&samples.valid)
            .filter(|(_, ok)| **ok)
            .map(|(v, _)| v.norm())
            .fold(0.0, f64::max)
    }

    /// JSON descriptor of this function. Grid-built outer parts are emitted
    /// through their log-coefficients.
    pub fn to_spec(&self) -> FunctionSpec {
        match self {
            DiscFunction::Const(c) => FunctionSpec::Const {
                value: [c.re, c.im],
            },
            DiscFunction::Chi => FunctionSpec::Chi,
            DiscFunction::Blaschke(b) => FunctionSpec::Blaschke {
                zeros: b.zeros().iter().map(|z| [z.re, z.im]).collect(),
                constant: Some([b.constant().re, b.constant().im]),
                simple: Some(b.is_simple()),
            },
            DiscFunction::SingularExp { a } => FunctionSpec::SingularExp { a: *a },
            DiscFunction::Outer(o) => FunctionSpec::OuterCoeffs {
                coeffs: trim_trailing(o.log_coeffs()),
            },
            DiscFunction::Product(fs) => FunctionSpec::Product {
                factors: fs.iter().map(DiscFunction::to_spec).collect(),
            },
            DiscFunction::Sum(fs) => FunctionSpec::Sum {
                terms: fs.iter().map(DiscFunction::to_spec).collect(),
            },
            DiscFunction::DivChi(f) => FunctionSpec::DivChi {
                numerator: Box::new(f.to_spec()),
            },
        }
    }
}

fn trim_trailing(coeffs: &[Complex64]) -> Vec<[f64; 2]> {
    let mut end = coeffs.len();
    while end > 1 && coeffs[end - 1].norm() < 1e-14 {
        end -= 1;
    }
    coeffs[..end].iter().map(|c| [c.re, c.im]).collect()
}

/// Taylor evaluation of `f(z)/z` for `|z|` below the switch radius: the
/// first eight Taylor coefficients of the quotient are recovered by a DFT on
/// a circle of radius 1e-2, where the direct quotient is well conditioned.
fn eval_quotient_near_origin(f: &DiscFunction, z: Complex64) -> Result<Complex64> {
    const M: usize = 8;
    const R: f64 = 1e-2;
    let mut gvals = [Complex64::ZERO; M];
    for (j, gv) in gvals.iter_mut().enumerate() {
        let t = std::f64::consts::TAU * j as f64 / M as f64;
        let w = Complex64::new(R * t.cos(), R * t.sin());
        *gv = f.eval(w)? / w;
    }
    let mut acc = Complex64::ZERO;
    let mut zk = Complex64::ONE;
    let mut rk = 1.0;
    for k in 0..M {
        let mut gk = Complex64::ZERO;
        for (j, gv) in gvals.iter().enumerate() {
            let t = -std::f64::consts::TAU * (j * k % M) as f64 / M as f64;
            gk += gv * Complex64::new(t.cos(), t.sin());
        }
        gk /= M as f64 * rk;
        acc += gk * zk;
        zk *= z;
        rk *= R;
    }
    Ok(acc)
}

/// Grid samples with a per-point validity mask.
#[derive(Debug, Clone)]
pub struct MaskedSamples {
    pub values: Vec<Complex64>,
    pub valid: Vec<bool>,
}

/// Serializable descriptor of a [`DiscFunction`].
///
/// Inputs use the `blaschke`, `singular_exp`, `outer` (piecewise-constant
/// modulus over arc sets), `product`, `chi` and `const` kinds; computed
/// outputs may additionally contain `sum`, `div_chi` and `outer_coeffs`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    Blaschke {
        zeros: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        constant: Option<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        simple: Option<bool>,
    },
    SingularExp {
        a: f64,
    },
    /// Outer function with piecewise-constant boundary modulus: `base` off
    /// all listed arc sets, each piece's `value` on its arcs (later pieces
    /// override earlier ones).
    Outer {
        base: f64,
        pieces: Vec<OuterPieceSpec>,
    },
    /// Outer function given directly by the analytic completion of its
    /// boundary log-modulus.
    OuterCoeffs {
        coeffs: Vec<[f64; 2]>,
    },
    Product {
        factors: Vec<FunctionSpec>,
    },
    Sum {
        terms: Vec<FunctionSpec>,
    },
    DivChi {
        numerator: Box<FunctionSpec>,
    },
    Chi,
    Const {
        value: [f64; 2],
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OuterPieceSpec {
    pub arcs: ArcSet,
    pub value: f64,
}

impl FunctionSpec {
    /// Materializes the descriptor. Piecewise outer data is sampled on the
    /// given grid and completed to an analytic log-polynomial.
    pub fn to_function(&self, g: &BoundaryGrid, clamp: f64) -> Result<DiscFunction> {
        match self {
            FunctionSpec::Blaschke {
                zeros,
                constant,
                simple,
            } => {
                let zs: Vec<Complex64> =
                    zeros.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
                let mut b = if simple.unwrap_or(true) {
                    BlaschkeProduct::new(zs)?
                } else {
                    BlaschkeProduct::general(zs)?
                };
                if let Some([re, im]) = constant {
                    b = b.with_constant(Complex64::new(*re, *im))?;
                }
                Ok(DiscFunction::Blaschke(b))
            }
            FunctionSpec::SingularExp { a } => DiscFunction::singular_exp(*a),
            FunctionSpec::Outer { base, pieces } => {
                let w: Vec<f64> = (0..g.size())
                    .map(|j| {
                        let t = g.turn(j);
                        pieces
                            .iter()
                            .rev()
                            .find(|p| p.arcs.contains(t))
                            .map(|p| p.value)
                            .unwrap_or(*base)
                    })
                    .collect();
                let (o, _) = outer_from_log_modulus(&w, g, clamp)?;
                Ok(DiscFunction::Outer(o))
            }
            FunctionSpec::OuterCoeffs { coeffs } => Ok(DiscFunction::Outer(
                OuterFunction::from_log_coeffs(
                    coeffs.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
                ),
            )),
            FunctionSpec::Product { factors } => Ok(DiscFunction::Product(
                factors
                    .iter()
                    .map(|f| f.to_function(g, clamp))
                    .collect::<Result<_>>()?,
            )),
            FunctionSpec::Sum { terms } => Ok(DiscFunction::Sum(
                terms
                    .iter()
                    .map(|f| f.to_function(g, clamp))
                    .collect::<Result<_>>()?,
            )),
            FunctionSpec::DivChi { numerator } => {
                DiscFunction::div_chi(numerator.to_function(g, clamp)?)
            }
            FunctionSpec::Chi => Ok(DiscFunction::Chi),
            FunctionSpec::Const { value: [re, im] } => {
                Ok(DiscFunction::Const(Complex64::new(*re, *im)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc_algebra::arcs::Turn;

    #[test]
    fn singular_exp_at_origin() {
        // exp(a (0+1)/(0-1)) = exp(-a)
        let f = DiscFunction::singular_exp(1.7).unwrap();
        let v = f.eval(Complex64::ZERO).unwrap();
        assert!((v - Complex64::new((-1.7_f64).exp(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn singular_exp_decays_along_radius() {
        let f = DiscFunction::singular_exp(1.0).unwrap();
        let mut prev = 1.0;
        for l in 1..=8 {
            let r = 1.0 - 2.0_f64.powi(-l);
            let v = f.eval(Complex64::new(r, 0.0)).unwrap().norm();
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < 1e-100);
    }

    #[test]
    fn singular_exp_errors_at_one() {
        let f = DiscFunction::singular_exp(1.0).unwrap();
        assert!(matches!(
            f.eval(Complex64::ONE),
            Err(MslError::EvaluationAtSingularity(_))
        ));
        assert_eq!(f.boundary_singularities(), vec![Complex64::ONE]);
    }

    #[test]
    fn singular_exp_unimodular_on_circle() {
        let f = DiscFunction::singular_exp(2.0).unwrap();
        let g = BoundaryGrid::new(64).unwrap();
        let samples = f.sample_grid_masked(&g);
        assert!(!samples.valid[0]); // z = 1
        for j in 1..64 {
            assert!(samples.valid[j]);
            assert!((samples.values[j].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constants_and_chi() {
        let c = DiscFunction::constant(Complex64::new(1.0, -2.0));
        assert_eq!(c.eval(Complex64::new(0.5, 0.5)).unwrap(), Complex64::new(1.0, -2.0));
        assert_eq!(
            DiscFunction::Chi.eval(Complex64::new(0.25, -0.5)).unwrap(),
            Complex64::new(0.25, -0.5)
        );
    }

    #[test]
    fn div_chi_requires_vanishing_numerator() {
        assert!(DiscFunction::div_chi(DiscFunction::Chi).is_ok());
        assert!(matches!(
            DiscFunction::div_chi(DiscFunction::real_constant(1.0)),
            Err(MslError::InvalidChiDivision(_))
        ));
    }

    #[test]
    fn div_chi_matches_direct_quotient() {
        // f = z^2 + 3z, f/z = z + 3 exactly, including near the origin
        let f = DiscFunction::sum(vec![
            DiscFunction::product(vec![DiscFunction::Chi, DiscFunction::Chi]),
            DiscFunction::Chi.scaled(Complex64::new(3.0, 0.0)),
        ]);
        let q = DiscFunction::div_chi(f).unwrap();
        for z in [
            Complex64::new(0.5, 0.2),
            Complex64::new(1e-5, 2e-5),
            Complex64::new(-3e-7, 0.0),
            Complex64::ZERO,
        ] {
            let got = q.eval(z).unwrap();
            assert!((got - (z + 3.0)).norm() < 1e-11, "at {z}: {got}");
        }
    }

    #[test]
    fn spec_round_trip() {
        let g = BoundaryGrid::new(64).unwrap();
        let src = r#"{
            "kind": "product",
            "factors": [
                {"kind": "blaschke", "zeros": [[0.5, 0.0], [0.0, -0.3]]},
                {"kind": "const", "value": [0.0, 1.0]},
                {"kind": "chi"}
            ]
        }"#;
        let spec: FunctionSpec = serde_json::from_str(src).unwrap();
        let f = spec.to_function(&g, 1e-12).unwrap();
        let spec2 = f.to_spec();
        let f2 = spec2.to_function(&g, 1e-12).unwrap();
        let z = Complex64::new(0.4, 0.1);
        assert!((f.eval(z).unwrap() - f2.eval(z).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn piecewise_outer_spec_builds() {
        let g = BoundaryGrid::new(128).unwrap();
        let arcs = ArcSet::from_pairs(&[(Turn::new(0, 1), Turn::new(1, 2))]).unwrap();
        let spec = FunctionSpec::Outer {
            base: 0.25,
            pieces: vec![OuterPieceSpec { arcs, value: 1.0 }],
        };
        let f = spec.to_function(&g, 1e-12).unwrap();
        let samples = f.sample_grid(&g).unwrap();
        for (j, s) in samples.iter().enumerate() {
            let expect = if j < 64 { 1.0 } else { 0.25 };
            assert!((s.norm() - expect).abs() < 1e-10);
        }
    }
}
