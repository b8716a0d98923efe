//! Error type shared by all modules.

use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by constructions and certified checks.
///
/// Input-shaped problems (bad data, shapes, unsupported classes) and failed
/// certified checks (a bound that was supposed to hold numerically did not)
/// are distinguished by [`MslError::is_check_failure`]; the CLI maps the two
/// classes to different exit codes.
#[derive(Debug, Error)]
pub enum MslError {
    #[error("invalid grid size {0}: must be a power of two, at least 16")]
    InvalidGrid(usize),

    #[error("invalid arc endpoints: {0}")]
    InvalidArc(String),

    #[error("input set {0} has zero measure")]
    ZeroMeasureInput(usize),

    #[error("zero {0} is not inside the open unit disc")]
    ZeroOutsideDisc(Complex64),

    #[error("duplicate zero {0} in a simple-zero product")]
    DuplicateZero(Complex64),

    #[error("evaluation at boundary singularity z = {0}")]
    EvaluationAtSingularity(Complex64),

    #[error("boundary modulus vanishes at every grid point")]
    AllZeroModulus,

    #[error("numerator of a z-division must vanish at 0; |f(0)| = {0:.3e}")]
    InvalidChiDivision(f64),

    #[error("column entry {index} exceeds the unit bound: grid sup = {sup:.6}")]
    EntryNotBounded { index: usize, sup: f64 },

    #[error("column is degenerate: entry {0} vanishes identically on the grid")]
    DegenerateColumnEntry(usize),

    #[error("all column entries vanish identically on the grid")]
    AllZeroColumn,

    #[error("column lower bound failed: min_j sum_n |phi_n|^2 = {0:.3e}")]
    InfeasibleColumn(f64),

    #[error("threshold set {index} captures no grid cell (delta = {delta:.6})")]
    ResolutionError { index: usize, delta: f64 },

    #[error("{quantity} = {value:.6e} violates the lower bound {bound:.6e} at {location}")]
    BoundViolation {
        quantity: String,
        value: f64,
        bound: f64,
        location: String,
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("operator is not a contraction: norm = {0:.6}")]
    NotAContraction(f64),

    #[error("resolvent solve failed for factor at {0}: matrix numerically singular")]
    ResolventFailure(Complex64),

    #[error("operator is not diagonalizable over the given points: kernel dims sum to {found}, dimension is {dim}")]
    NonDiagonalizable { found: usize, dim: usize },

    #[error("Carleson separation too small: constant = {0:.3e}")]
    CarlesonViolation(f64),

    #[error("annihilation failed: residual {residual:.3e} exceeds {allowed:.3e}")]
    AnnihilationFailure { residual: f64, allowed: f64 },

    #[error("lift equation unsolvable at model scale: residual {residual:.3e} exceeds {allowed:.3e}")]
    LiftUnsolvable { residual: f64, allowed: f64 },

    #[error("combined transformation range is rank deficient: rank {rank}, expected {expected}")]
    RankDeficientRange { rank: usize, expected: usize },

    #[error("inverse ill-conditioned: grid min |det| = {0:.3e}")]
    IllConditionedInverse(f64),

    #[error("lower bound violated: min ||Y h||/||h|| = {found:.8} < {required:.8} (truncation likely too small, retry with doubled degree)")]
    LowerBoundViolation { found: f64, required: f64 },

    #[error("certified check failed: {0}")]
    CertificateFailure(String),

    #[error("unsupported entry class: {0}")]
    UnsupportedEntryClass(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("truncated grid too small: need grid >= 2 * truncation ({grid} < 2 * {trunc})")]
    GridTooSmall { grid: usize, trunc: usize },
}

impl MslError {
    /// True when the error reports a failed certified check rather than a
    /// malformed input. Used to pick the process exit code.
    pub fn is_check_failure(&self) -> bool {
        matches!(
            self,
            MslError::BoundViolation { .. }
                | MslError::AnnihilationFailure { .. }
                | MslError::LiftUnsolvable { .. }
                | MslError::RankDeficientRange { .. }
                | MslError::LowerBoundViolation { .. }
                | MslError::CertificateFailure(_)
                | MslError::IllConditionedInverse(_)
                | MslError::CarlesonViolation(_)
        )
    }
}
