//! Run configuration: grid size, truncation degree, tolerances, seeding.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Numeric tolerances used by certified checks.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    /// Boundary tolerance: inner functions must have |f| within this of 1 on the grid.
    pub inner: f64,
    /// Interior algebraic tolerance for identities checked at sample points.
    pub algebraic: f64,
    /// Singular-value cut for numerical rank decisions (scaled by matrix norm).
    pub rank_cut: f64,
    /// Boundary modulus clamp: log w is replaced by log(max(w, clamp)).
    pub clamp: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            inner: 1e-6,
            algebraic: 1e-8,
            rank_cut: 1e-8,
            clamp: 1e-12,
        }
    }
}

/// Configuration shared by the CLI and the library entry points.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    /// Boundary grid size; a power of two, at least 16.
    pub grid: usize,
    /// Truncation degree for Hardy-space computations; at least 8.
    pub trunc: usize,
    pub tol: Tolerances,
    /// Base seed; all randomized searches derive their streams from it.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid: 4096,
            trunc: 256,
            tol: Tolerances::default(),
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if self.grid < 16 || !self.grid.is_power_of_two() {
            return Err(crate::MslError::InvalidGrid(self.grid));
        }
        if self.trunc < 8 {
            return Err(crate::MslError::InvalidParameter(format!(
                "truncation degree {} is below the minimum of 8",
                self.trunc
            )));
        }
        Ok(())
    }
}

/// Deterministic per-stage generator: one base seed, one stream per stage.
///
/// Every randomized search in the crate draws from one of these, so a run is
/// reproducible from the single configured seed.
pub fn stage_rng(seed: u64, stage: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stage);
    rng
}

/// Stage identifiers for seeded randomness, kept in one place so streams
/// never collide across modules.
pub mod stages {
    pub const SIMILARITY_SEARCH: u64 = 1;
    pub const LOWER_BOUND_FAMILY: u64 = 2;
    pub const DECOMPOSE_FALLBACK: u64 = 3;
}
