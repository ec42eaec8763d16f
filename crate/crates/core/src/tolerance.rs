//! Tolerance tiers shared by the library, its tests and the verification suite.

/// Exact or analytic identities (hermiticity, idempotence of diagonal kernels).
pub const EXACT: f64 = 1e-12;

/// Well-resolved single quadrature passes (norms, moments, Gaussian oracles).
pub const QUADRATURE: f64 = 1e-8;

/// Chains of composed kernels and transforms of sampled states.
pub const CHAIN: f64 = 1e-6;

/// Samples below `-NEGATIVITY` count as genuine negativity.
pub const NEGATIVITY: f64 = 1e-12;

/// Properness tolerance for closed-form symbols.
pub const PROPER_ANALYTIC: f64 = 1e-9;

/// Properness tolerance for numerically transformed kernels.
pub const PROPER_NUMERIC: f64 = 0.05;

/// Allowed deviation of a normalized input state from unit norm.
pub const NORMALIZED: f64 = 1e-6;

/// Below this a projection probability or a truncated mass is treated as zero.
pub const NEGLIGIBLE_MASS: f64 = 1e-12;

/// Gram-Schmidt deficiency threshold.
pub const DEGENERATE_SEED: f64 = 1e-10;
