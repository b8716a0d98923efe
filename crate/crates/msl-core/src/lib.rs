//! Constructive function theory on the unit disc and the operator theory it feeds.
//!
//! The crate is organized around a handful of concrete objects:
//!
//! - exact arc subsets of the circle with rational endpoints ([`disc_algebra::ArcSet`])
//!   and a disjoint-refinement algorithm that preserves measures exactly;
//! - evaluable scalar functions on the closed disc ([`disc_algebra::DiscFunction`]):
//!   Blaschke products, singular inner exponentials, outer functions recovered
//!   from boundary modulus data, and their products/sums;
//! - the column-to-inner matrix construction ([`psi_builder`]): given bounded
//!   analytic functions with a joint boundary lower bound, an invertible matrix
//!   function mapping the column to a column of inner functions, with numeric
//!   certificates for every inequality used along the way;
//! - finite-dimensional model spaces and compressed shifts ([`model_space`]);
//! - dense-matrix operator theory ([`operator_lab`]): Blaschke functional
//!   calculus, defects, multiplicity, intertwiners, triangulation and a
//!   similarity pipeline producing contractions with finite defects;
//! - shift-type subspace decompositions on truncated Hardy spaces
//!   ([`decomposition`]) and the unicellular 2x2 demonstration ([`unicellular`]).
//!
//! Everything is certified numerically: each construction reports the residuals
//! and lower bounds it achieved, against tolerances fixed in [`config`].

pub mod config;
pub mod decomposition;
pub mod disc_algebra;
pub mod error;
pub mod model_space;
pub mod operator_lab;
pub mod psi_builder;
pub mod unicellular;

pub use config::{RunConfig, Tolerances};
pub use error::MslError;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, MslError>;
