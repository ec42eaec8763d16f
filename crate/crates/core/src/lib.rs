//! Phase-space representation of position measurements.
//!
//! Pure states and operators on a sampled position axis are mapped to
//! Wigner functions and Weyl symbols on a `(q, p)` grid, with `ħ = 1` and
//! the phase-space measure `dq dp/(2π)`. All numerics are generic over
//! [`Real`] (`f32` or `f64`); the `*F64` and `*F32` aliases fix the scalar.

// `!(x > 0)` rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod field;
pub mod grid;
pub mod kernel;
pub mod measurement;
mod real;
pub mod special;
pub mod state;
pub mod tolerance;
pub mod wigner;

pub use num_complex::Complex;

pub use analysis::{
    hudson_check, marginal_q, moments, negativity_report, normalization, phase_space_expectation,
    properness_report, HudsonVerdict, Integrated, MomentReport, NegativityReport, PropernessReport,
    TailStatus, Verdict,
};
pub use error::{Error, Result};
pub use field::{FieldKind, TailDecay, WignerField, NORMALIZATION_CONVENTION};
pub use grid::{PhaseSpaceGrid, PositionGrid};
pub use kernel::{
    compose_kernels, diagonal_observable_kernel, rank_one_kernel, window_projector_kernel,
    OperatorKernel,
};
pub use measurement::{
    apply_projector, apply_rank_one_gaussian, apply_window_projector, build_rank_n_projector,
    expectation_hilbert, hermite_seeds, naive_classical_truncation, projected_wigner_analytic,
    ClassicalTruncation, ProjectedGaussianParams, RankNProjector,
};
pub use real::Real;
pub use special::{cerf, scaled_erf_re, ComplexPoint};
pub use state::{sample_gaussian, GaussianState, SampledState};
pub use wigner::{
    pointwise_product, symbol_of_diagonal, symbol_of_kernel, symbol_of_kernel_with,
    symbol_of_rank_one_gaussian, symbol_of_window, wigner_numeric, wigner_numeric_with,
    wigner_of_gaussian, TransformOptions,
};

pub type PositionGridF64 = PositionGrid<f64>;
pub type PhaseSpaceGridF64 = PhaseSpaceGrid<f64>;
pub type GaussianStateF64 = GaussianState<f64>;
pub type SampledStateF64 = SampledState<f64>;
pub type OperatorKernelF64 = OperatorKernel<f64>;
pub type WignerFieldF64 = WignerField<f64>;

pub type PositionGridF32 = PositionGrid<f32>;
pub type PhaseSpaceGridF32 = PhaseSpaceGrid<f32>;
pub type GaussianStateF32 = GaussianState<f32>;
pub type SampledStateF32 = SampledState<f32>;
pub type OperatorKernelF32 = OperatorKernel<f32>;
pub type WignerFieldF32 = WignerField<f32>;
