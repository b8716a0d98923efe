//! Scalar function algebra on the unit disc and circle.
//!
//! Submodules:
//! - [`grid`]: the boundary sampling grid and FFT transforms between
//!   polynomial coefficients and grid values;
//! - [`arcs`]: exact finite unions of half-open circular arcs with rational
//!   endpoints, including the disjoint refinement used to separate threshold
//!   sets;
//! - [`blaschke`]: Blaschke factors and products, pseudohyperbolic distance,
//!   Carleson separation constants;
//! - [`function`]: the [`DiscFunction`] evaluation tree and its JSON
//!   descriptor form;
//! - [`outer`]: outer functions recovered from boundary modulus data and
//!   inner/outer factorization of grid-sampled functions.

pub mod arcs;
pub mod blaschke;
pub mod function;
pub mod grid;
pub mod outer;

pub use arcs::{refine_disjoint, Arc, ArcSet, Turn};
pub use blaschke::{blaschke_factor, carleson_constant, pseudohyperbolic, BlaschkeProduct};
pub use function::{DiscFunction, FunctionSpec, MaskedSamples};
pub use grid::BoundaryGrid;
pub use outer::{inner_outer_factorize, outer_from_log_modulus, Factorization, OuterFunction};
