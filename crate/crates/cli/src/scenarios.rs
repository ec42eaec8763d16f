//! Numerical recipes behind the figure, the demos and the verify suite.

use serde::Serialize;
use wigner_lab::tolerance;
use wigner_lab::*;

use crate::config::Config;

/// Symbol values at the rank-one Gaussian witness point.
pub const GAUSSIAN_SYMBOL_PEAK: f64 = 2.0;

pub fn fig1_grid(cfg: &Config) -> Result<PhaseSpaceGrid> {
    PhaseSpaceGrid::new(
        cfg.q_range[0],
        cfg.q_range[1],
        cfg.grid.n_q,
        cfg.p_range[0],
        cfg.p_range[1],
        cfg.grid.n_p,
    )
}

pub fn fig1_field(cfg: &Config) -> Result<WignerField> {
    let params = ProjectedGaussianParams::new(cfg.sigma, cfg.a)?;
    Ok(projected_wigner_analytic(&params, &fig1_grid(cfg)?))
}

/// Position grid with the window edges halfway between nodes.
fn window_grid(sigma: f64, a: f64, half_extent: f64, max_dx: f64) -> Result<PositionGrid> {
    PositionGrid::window_aligned(a, half_extent * sigma, max_dx)
}

/// Variance of a centred normal with width `sigma` restricted to
/// `|x| <= a/2`: `σ²(1 - 2cφ(c)/erf(c/√2))` with `c = a/(2σ)`.
pub fn truncated_normal_variance(sigma: f64, a: f64) -> f64 {
    let c = a / (2.0 * sigma);
    let phi = (-c * c / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mass = scaled_erf_re(c / std::f64::consts::SQRT_2, 0.0);
    sigma * sigma * (1.0 - 2.0 * c * phi / mass)
}

#[derive(Debug, Clone, Serialize)]
pub struct Uncertainty {
    pub original: MomentReport,
    pub truncated: MomentReport,
    pub renormalization_factor: f64,
    pub truncated_var_q_reference: f64,
    pub var_q_error: f64,
}

/// Moments of the Gaussian WF before and after naive classical truncation.
pub fn uncertainty(sigma: f64, a: f64) -> Result<Uncertainty> {
    let xg = window_grid(sigma, a, 8.0, sigma.min(a) / 750.0)?;
    let p_reach = 4.0 / sigma;
    let grid =
        PhaseSpaceGrid::reflection_aligned(&xg, 8.0 * sigma, xg.dx(), -p_reach, p_reach, 81)?;
    let w = wigner_of_gaussian(&GaussianState::centered(sigma)?, &grid);
    let original = moments(&w)?;
    let t = naive_classical_truncation(&w, a)?;
    let truncated = moments(&t.field)?;
    let reference = truncated_normal_variance(sigma, a);
    Ok(Uncertainty {
        original,
        truncated,
        renormalization_factor: t.factor,
        truncated_var_q_reference: reference,
        var_q_error: (truncated.var_q - reference).abs(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Nonfactor {
    pub probability: f64,
    /// `max |W_{PρP}/⟨ψ|P|ψ⟩ - W_P W_ψ|` with the numerical symbol.
    pub max_gap: f64,
    pub argmax: (f64, f64),
    /// Same gap with the closed-form projected WF in place of the symbol.
    pub analytic_gap: f64,
    /// `max |W_{PρP}/⟨ψ|P|ψ⟩ - W'|` against the closed form.
    pub composed_vs_analytic: f64,
}

/// Compares the symbol of the composed operator `P ρ P` with the product
/// of the separate symbols over the configured region.
pub fn nonfactor(cfg: &Config) -> Result<Nonfactor> {
    let (sigma, a) = (cfg.sigma, cfg.a);
    let grid = fig1_grid(cfg)?;
    let xg = window_grid(sigma, a, 8.0, sigma.min(a) / 1000.0)?;
    let psi = sample_gaussian(&GaussianState::centered(sigma)?, &xg)?;
    let p = window_projector_kernel(a, &xg)?;
    let prp = compose_kernels(&compose_kernels(&p, &rank_one_kernel(&psi)?)?, &p)?;
    let probability = expectation_hilbert(&psi, &p)?;
    let composed = symbol_of_kernel(&prp, &grid)?;
    let product = pointwise_product(
        &symbol_of_window(a, &grid)?,
        &wigner_of_gaussian(&GaussianState::centered(sigma)?, &grid),
    )?;
    let analytic = projected_wigner_analytic(&ProjectedGaussianParams::new(sigma, a)?, &grid);

    let mut max_gap = f64::NEG_INFINITY;
    let mut arg = (0, 0);
    let mut analytic_gap: f64 = 0.0;
    let mut composed_vs_analytic: f64 = 0.0;
    for ((i, j), &v) in composed.values().indexed_iter() {
        let v = v / probability;
        let gap = (v - product.value(i, j)).abs();
        if gap > max_gap {
            max_gap = gap;
            arg = (i, j);
        }
        analytic_gap = analytic_gap.max((analytic.value(i, j) - product.value(i, j)).abs());
        composed_vs_analytic = composed_vs_analytic.max((v - analytic.value(i, j)).abs());
    }
    Ok(Nonfactor {
        probability,
        max_gap,
        argmax: (grid.q(arg.0), grid.p(arg.1)),
        analytic_gap,
        composed_vs_analytic,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Properness {
    pub window: PropernessReport,
    pub rank_one_gaussian: PropernessReport,
    pub window_from_kernel: PropernessReport,
    pub rank_one_gaussian_from_kernel: PropernessReport,
    /// Minimum of the WF after the window projection.
    pub window_projected_min: f64,
    /// Minimum of the WF after projection onto a Gaussian.
    pub gaussian_projected_min: f64,
}

pub fn properness(sigma: f64, a: f64) -> Result<Properness> {
    let spectrum = [0.0, 1.0];
    let reach = (a / 2.0 + 1.5 * sigma).max(3.0 * sigma);
    let grid = PhaseSpaceGrid::new(-reach, reach, 61, -3.0 / sigma, 3.0 / sigma, 61)?;
    let g = GaussianState::centered(sigma)?;
    let window = properness_report(
        &symbol_of_window(a, &grid)?,
        &spectrum,
        tolerance::PROPER_ANALYTIC,
    )?;
    let rank_one_gaussian = properness_report(
        &symbol_of_rank_one_gaussian(&g, &grid),
        &spectrum,
        tolerance::PROPER_ANALYTIC,
    )?;

    let xg = window_grid(sigma, a, 12.0, sigma.min(a) / 200.0)?;
    let kgrid = PhaseSpaceGrid::reflection_aligned(
        &xg,
        reach,
        2.0 * reach / 60.0,
        -3.0 / sigma,
        3.0 / sigma,
        61,
    )?;
    let psi = sample_gaussian(&g, &xg)?;
    let window_from_kernel = properness_report(
        &symbol_of_kernel(&window_projector_kernel(a, &xg)?, &kgrid)?,
        &spectrum,
        tolerance::PROPER_NUMERIC,
    )?;
    let rank_one_gaussian_from_kernel = properness_report(
        &symbol_of_kernel(&rank_one_kernel(&psi)?, &kgrid)?,
        &spectrum,
        tolerance::PROPER_NUMERIC,
    )?;

    let wgrid = PhaseSpaceGrid::reflection_aligned(&xg, a / 2.0, a / 60.0, 0.0, 6.0 / sigma, 61)?;
    let windowed = apply_window_projector(&psi, a)?;
    let window_projected_min = wigner_numeric(&windowed, &wgrid)?.min_value();
    let target = GaussianState::new(0.8 * sigma, 0.2 * sigma, 0.5 / sigma)?;
    let gaussian = apply_rank_one_gaussian(&target, &psi)?;
    let gaussian_projected_min = wigner_numeric(&gaussian, &wgrid)?.min_value();
    Ok(Properness {
        window,
        rank_one_gaussian,
        window_from_kernel,
        rank_one_gaussian_from_kernel,
        window_projected_min,
        gaussian_projected_min,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HudsonCase {
    pub state: &'static str,
    pub expect_gaussian: bool,
    pub verdict: HudsonVerdict,
}

pub fn hudson(sigma: f64, a: f64) -> Result<Vec<HudsonCase>> {
    // the position grid reaches far enough that the cut-off tails sit at roundoff
    let xg = window_grid(sigma, a, 12.0, sigma.min(a) / 100.0)?;
    let reach = a / 2.0 + sigma;
    let grid = PhaseSpaceGrid::reflection_aligned(
        &xg,
        reach,
        reach / 30.0,
        -2.0 / sigma,
        6.0 / sigma,
        81,
    )?;
    let g = sample_gaussian(&GaussianState::centered(sigma)?, &xg)?;
    let boosted = sample_gaussian(&GaussianState::new(sigma, 0.0, 2.0 / sigma)?, &xg)?;
    let windowed = apply_window_projector(&g, a)?;
    let cases = [
        ("gaussian", true, g),
        ("window-projected gaussian", false, windowed),
        ("boosted gaussian", true, boosted),
    ];
    cases
        .into_iter()
        .map(|(state, expect_gaussian, psi)| {
            Ok(HudsonCase {
                state,
                expect_gaussian,
                verdict: hudson_check(&psi, &grid)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct RankNCase {
    pub n: usize,
    pub gram_defect: f64,
    pub idempotence_defect: f64,
    /// `|⟨ψ_G2|Pψ_G1⟩|²` after renormalization.
    pub target_fidelity: f64,
    /// Exploratory: properness of the numerical symbol against `{0, 1}`.
    pub properness: PropernessReport,
}

/// Projectors `|ψ_G2⟩⟨ψ_G2| + Σ_k |ψ_k⟩⟨ψ_k|` built from `x^k ψ_G1` seeds.
pub fn rank_n(sigma: f64, max_n: usize) -> Result<Vec<RankNCase>> {
    let xg = PositionGrid::symmetric(12.0 * sigma, 1201)?;
    let g1 = sample_gaussian(&GaussianState::centered(sigma)?, &xg)?;
    let g2 = sample_gaussian(&GaussianState::new(0.7 * sigma, 0.3 * sigma, 0.0)?, &xg)?;
    let grid = PhaseSpaceGrid::reflection_aligned(
        &xg,
        3.0 * sigma,
        0.1 * sigma,
        -3.0 / sigma,
        3.0 / sigma,
        61,
    )?;
    (0..=max_n)
        .map(|n| {
            let proj = build_rank_n_projector(&g2, &hermite_seeds(&g1, n)?, &g1)?;
            let k = proj.kernel();
            let idempotence_defect = compose_kernels(&k, &k)?.max_deviation(&k)?;
            let target_fidelity = proj.apply(&g1)?.fidelity(&g2)?;
            let properness = properness_report(
                &symbol_of_kernel(&k, &grid)?,
                &[0.0, 1.0],
                tolerance::PROPER_NUMERIC,
            )?;
            Ok(RankNCase {
                n,
                gram_defect: proj.gram_defect(),
                idempotence_defect,
                target_fidelity,
                properness,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ExpectationCase {
    pub observable: &'static str,
    pub phase_space: f64,
    pub hilbert: f64,
    pub difference: f64,
}

/// `∫∫ W_ψ W_A` against `⟨ψ|A|ψ⟩` for a Gaussian and a set of observables.
pub fn expectations(sigma: f64, a: f64) -> Result<Vec<ExpectationCase>> {
    let xg = window_grid(sigma, a, 9.0, sigma.min(a) / 750.0)?;
    let g = GaussianState::centered(sigma)?;
    let psi = sample_gaussian(&g, &xg)?;
    let grid = PhaseSpaceGrid::reflection_aligned(
        &xg,
        8.0 * sigma,
        xg.dx(),
        -5.0 / sigma,
        5.0 / sigma,
        101,
    )?;
    let w = wigner_of_gaussian(&g, &grid);
    let p = window_projector_kernel(a, &xg)?;
    let x2 = diagonal_observable_kernel(|x| x * x, &xg)?;
    let pap = compose_kernels(&compose_kernels(&p, &x2)?, &p)?;
    let cases = [
        ("identity", OperatorKernel::identity(xg)),
        ("x", diagonal_observable_kernel(|x| x, &xg)?),
        ("x^2", x2),
        ("P", p),
        ("P x^2 P", pap),
    ];
    cases
        .into_iter()
        .map(|(observable, k)| {
            let phase_space = phase_space_expectation(&w, &symbol_of_kernel(&k, &grid)?)?;
            let hilbert = expectation_hilbert(&psi, &k)?;
            Ok(ExpectationCase {
                observable,
                phase_space,
                hilbert,
                difference: (phase_space - hilbert).abs(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct Equivalence {
    pub sigma: f64,
    pub a: f64,
    pub position_dx: f64,
    pub max_error: f64,
    pub imag_residue: f64,
}

/// Closed-form projected WF against the transform of the masked state on
/// `|q| <= a/2 - 2dx`, `|p| <= 5`.
pub fn equivalence(sigma: f64, a: f64, max_dx: f64) -> Result<Equivalence> {
    let xg = window_grid(sigma, a, 8.0, max_dx)?;
    let psi = sample_gaussian(&GaussianState::centered(sigma)?, &xg)?;
    let projected = apply_window_projector(&psi, a)?;
    let limit = a / 2.0 - 2.0 * xg.dx();
    let grid = PhaseSpaceGrid::reflection_aligned(&xg, limit, a / 100.0, -5.0, 5.0, 101)?;
    let numeric = wigner_numeric(&projected, &grid)?;
    let analytic = projected_wigner_analytic(&ProjectedGaussianParams::new(sigma, a)?, &grid);
    Ok(Equivalence {
        sigma,
        a,
        position_dx: xg.dx(),
        max_error: numeric.max_abs_diff(&analytic)?,
        imag_residue: numeric.imag_residue(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GaussianOracle {
    pub sigma: f64,
    pub max_error: f64,
    pub peak: f64,
    pub normalization: f64,
    pub uncertainty_product: f64,
}

/// Transform of a sampled Gaussian against the closed form.
pub fn gaussian_oracle(sigma: f64) -> Result<GaussianOracle> {
    let xg = PositionGrid::symmetric(9.0 * sigma, 1441)?;
    let g = GaussianState::centered(sigma)?;
    let psi = sample_gaussian(&g, &xg)?;
    let grid = PhaseSpaceGrid::reflection_aligned(
        &xg,
        7.0 * sigma,
        sigma / 8.0,
        -3.5 / sigma,
        3.5 / sigma,
        57,
    )?;
    let w = wigner_numeric(&psi, &grid)?;
    Ok(GaussianOracle {
        sigma,
        max_error: w.max_abs_diff(&wigner_of_gaussian(&g, &grid))?,
        peak: w.max_value(),
        normalization: normalization(&w)?.value,
        uncertainty_product: moments(&w)?.uncertainty_product,
    })
}
