use thiserror::Error;

/// Errors produced by the phase-space routines.
///
/// Numeric payloads are reported as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "grid [{grid_min}, {grid_max}] does not cover required support [{need_min}, {need_max}]"
    )]
    GridTooNarrow {
        need_min: f64,
        need_max: f64,
        grid_min: f64,
        grid_max: f64,
    },

    #[error("non-finite sample at x = {x}")]
    NonFiniteSample { x: f64 },

    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    #[error("operands live on different grids")]
    GridMismatch,

    #[error("|Im z| = {im} exceeds the unscaled erf range; use scaled_erf_re")]
    OverflowRisk { im: f64 },

    #[error("half-shifted arguments leave the position grid: {0}")]
    SupportExceeded(String),

    #[error("kernel is not hermitian (relative defect {defect})")]
    NotHermitian { defect: f64 },

    #[error("projection probability {probability} is negligible")]
    ZeroProbability { probability: f64 },

    #[error("seed {index} is degenerate (residual norm {residual})")]
    DegenerateSeed { index: usize, residual: f64 },

    #[error("truncated mass {mass} is negligible")]
    ZeroMass { mass: f64 },

    #[error("moments diverge for window-projected fields (discontinuous wavefunction)")]
    DivergentMoments,

    #[error("spectrum is empty")]
    EmptySpectrum,

    #[error("expected a {expected} field, found {found}")]
    WrongFieldKind {
        expected: &'static str,
        found: &'static str,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
