//! Selective projective measurements and their phase-space images.

use ndarray::Array2;
use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldKind, TailDecay, WignerField};
use crate::grid::{positive, PhaseSpaceGrid};
use crate::kernel::{rank_one_kernel, window_indicator, OperatorKernel};
use crate::special::scaled_erf_re;
use crate::state::{sample_gaussian, GaussianState, SampledState};
use crate::tolerance;
use crate::Real;

/// Width of the pre-measurement Gaussian and of the position window.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ProjectedGaussianParams<T = f64> {
    sigma: T,
    a: T,
}

impl<T: Real> ProjectedGaussianParams<T> {
    pub fn new(sigma: T, a: T) -> Result<Self> {
        positive("sigma", sigma)?;
        positive("a", a)?;
        Ok(Self { sigma, a })
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn a(&self) -> T {
        self.a
    }

    /// `⟨ψ|P|ψ⟩ = erf(a / (2√2 σ))`.
    pub fn probability(&self) -> T {
        scaled_erf_re(self.a / (T::two() * T::SQRT_2() * self.sigma), T::zero())
    }

    /// Closed-form projected Wigner function at one point; see
    /// [`projected_wigner_analytic`].
    pub fn wigner_at(&self, q: T, p: T) -> T {
        match self.row(q, self.probability()) {
            Some((alpha, env)) => scaled_erf_re(alpha, T::SQRT_2() * self.sigma * p) * env,
            None => T::zero(),
        }
    }

    /// `(α, 2 e^{-q²/(2σ²)} / norm)` inside the window, `None` outside.
    fn row(&self, q: T, norm: T) -> Option<(T, T)> {
        if !window_indicator(q, self.a) {
            return None;
        }
        let two = T::two();
        let s2 = T::SQRT_2() * self.sigma;
        let alpha = ((self.a * T::half() - q.abs()) / s2).max(T::zero());
        let env = two * (-(q * q) / (two * self.sigma * self.sigma)).exp() / norm;
        Some((alpha, env))
    }
}

/// Projector `|ψ_G2⟩⟨ψ_G2| + Σ_k |ψ_k⟩⟨ψ_k|` with orthonormal members.
#[derive(Debug, Clone, PartialEq)]
pub struct RankNProjector<T = f64> {
    members: Vec<SampledState<T>>,
}

impl<T: Real> RankNProjector<T> {
    /// `ψ_G2` followed by the `N` complements.
    pub fn members(&self) -> &[SampledState<T>] {
        &self.members
    }

    pub fn n_extra(&self) -> usize {
        self.members.len() - 1
    }

    pub fn kernel(&self) -> OperatorKernel<T> {
        OperatorKernel::from_members(*self.members[0].grid(), &self.members)
    }

    pub fn gram(&self) -> Array2<Complex<T>> {
        let n = self.members.len();
        Array2::from_shape_fn((n, n), |(i, j)| {
            self.members[i]
                .inner(&self.members[j])
                .expect("members share a grid")
        })
    }

    /// `max |G - I|` over the Gram matrix.
    pub fn gram_defect(&self) -> T {
        self.gram()
            .indexed_iter()
            .map(|((i, j), z)| {
                let id = if i == j { T::one() } else { T::zero() };
                (z - Complex::new(id, T::zero())).norm()
            })
            .fold(T::zero(), T::max)
    }

    /// Selective measurement `Pψ / √⟨ψ|P|ψ⟩`.
    pub fn apply(&self, psi: &SampledState<T>) -> Result<SampledState<T>> {
        apply_projector(&self.kernel(), psi)
    }
}

/// Normalized image of `psi` under a projector kernel.
pub fn apply_projector<T: Real>(
    p: &OperatorKernel<T>,
    psi: &SampledState<T>,
) -> Result<SampledState<T>> {
    let out = p.apply(psi)?;
    let prob = psi.inner(&out)?.re;
    if !(prob.as_f64() > tolerance::NEGLIGIBLE_MASS) {
        return Err(Error::ZeroProbability {
            probability: prob.as_f64(),
        });
    }
    Ok(out.scaled(Complex::new(prob.sqrt().recip(), T::zero())))
}

/// Selects `|x| <= a/2` and renormalizes: `ψ' = Pψ / √⟨ψ|P|ψ⟩`.
///
/// A window that covers the whole grid returns `psi` unchanged.
pub fn apply_window_projector<T: Real>(psi: &SampledState<T>, a: T) -> Result<SampledState<T>> {
    positive("a", a)?;
    let grid = *psi.grid();
    let keep: Vec<bool> = grid.nodes().map(|x| window_indicator(x, a)).collect();
    if keep.iter().all(|&k| k) {
        return Ok(psi.clone());
    }
    let w = grid.weights();
    let amps = psi.amplitudes();
    let prob: T = keep
        .iter()
        .zip(amps.iter().zip(&w))
        .filter(|(&k, _)| k)
        .map(|(_, (z, &wi))| z.norm_sqr() * wi)
        .sum();
    if !(prob.as_f64() > tolerance::NEGLIGIBLE_MASS) {
        return Err(Error::ZeroProbability {
            probability: prob.as_f64(),
        });
    }
    let scale = prob.sqrt().recip();
    let zero = Complex::new(T::zero(), T::zero());
    let projected: Vec<_> = keep
        .iter()
        .zip(amps)
        .map(|(&k, z)| if k { z * scale } else { zero })
        .collect();
    let peak = amps.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    // a jump exists where a kept node with sizeable amplitude borders a dropped one
    let jumps = (1..keep.len()).any(|i| {
        keep[i] != keep[i - 1] && {
            let kept = if keep[i] { i } else { i - 1 };
            amps[kept].norm() > T::lit(1e-8) * peak
        }
    });
    Ok(SampledState::from_amplitudes(grid, projected)?.with_jumps(jumps))
}

/// Closed-form Wigner function of the window-projected Gaussian,
///
/// `W'(q, p) = g(α, β) / erf(a/(2√2σ)) · 2 e^{-q²/(2σ²)} θ(a/2 - |q|)`
///
/// with `α = (a/2 - |q|)/(√2σ)`, `β = √2σp` and `g` = [`scaled_erf_re`],
/// which absorbs the `e^{-2σ²p²}` momentum envelope.
pub fn projected_wigner_analytic<T: Real>(
    params: &ProjectedGaussianParams<T>,
    grid: &PhaseSpaceGrid<T>,
) -> WignerField<T> {
    let s2 = T::SQRT_2() * params.sigma;
    let norm = params.probability();
    let rows: Vec<Vec<T>> = (0..grid.n_q())
        .into_par_iter()
        .map(|i| match params.row(grid.q(i), norm) {
            Some((alpha, env)) => (0..grid.n_p())
                .map(|j| scaled_erf_re(alpha, s2 * grid.p(j)) * env)
                .collect(),
            None => vec![T::zero(); grid.n_p()],
        })
        .collect();
    let values = Array2::from_shape_fn(grid.shape(), |(i, j)| rows[i][j]);
    WignerField::new(*grid, values, FieldKind::StateWf).with_tail(TailDecay::SlowOscillatory)
}

/// Projects onto the Gaussian `target`: the result is the sampled target up
/// to a global phase.
pub fn apply_rank_one_gaussian<T: Real>(
    target: &GaussianState<T>,
    psi_in: &SampledState<T>,
) -> Result<SampledState<T>> {
    let phi = sample_gaussian(target, psi_in.grid())?;
    let overlap = phi.inner(psi_in)?.norm();
    if !(overlap.as_f64() > 1e-12) {
        return Err(Error::ZeroProbability {
            probability: (overlap * overlap).as_f64(),
        });
    }
    apply_projector(&rank_one_kernel(&phi)?, psi_in)
}

/// Default complements: `x^k ψ_G1` for `k = 1..=n`.
pub fn hermite_seeds<T: Real>(psi_g1: &SampledState<T>, n: usize) -> Result<Vec<SampledState<T>>> {
    let grid = *psi_g1.grid();
    (1..=n)
        .map(|k| {
            let amps = grid
                .nodes()
                .zip(psi_g1.amplitudes())
                .map(|(x, z)| z * x.powi(k as i32))
                .collect();
            SampledState::from_amplitudes(grid, amps)
        })
        .collect()
}

/// Builds `|ψ_G2⟩⟨ψ_G2| + Σ_k |ψ_k⟩⟨ψ_k|` where each `ψ_k` is a seed
/// orthogonalized against `ψ_G1`, `ψ_G2` and the previous complements
/// (modified Gram–Schmidt with one re-orthogonalization pass).
///
/// Because every complement is orthogonal to `ψ_G1`, the projector still maps
/// `ψ_G1` onto `ψ_G2`.
pub fn build_rank_n_projector<T: Real>(
    psi_g2: &SampledState<T>,
    seeds: &[SampledState<T>],
    psi_g1: &SampledState<T>,
) -> Result<RankNProjector<T>> {
    psi_g2.require_normalized()?;
    psi_g1.require_normalized()?;
    if psi_g1.grid() != psi_g2.grid() || seeds.iter().any(|s| s.grid() != psi_g2.grid()) {
        return Err(Error::GridMismatch);
    }
    let psi_g2 = psi_g2.normalize()?;
    let threshold = T::lit(tolerance::DEGENERATE_SEED);

    // orthonormal basis of span{ψ_G2, ψ_G1}
    let mut basis = vec![psi_g2.clone()];
    let g1_perp = orthogonalize(psi_g1, &basis)?;
    if g1_perp.norm() > threshold {
        basis.push(g1_perp.normalize()?);
    }

    let mut members = vec![psi_g2];
    for (index, seed) in seeds.iter().enumerate() {
        let norm = seed.norm();
        if !(norm > T::zero()) {
            return Err(Error::DegenerateSeed {
                index,
                residual: 0.0,
            });
        }
        let unit = seed.scaled(Complex::new(norm.recip(), T::zero()));
        let against: Vec<_> = basis.iter().chain(&members[1..]).cloned().collect();
        let residual = orthogonalize(&unit, &against)?;
        let r = residual.norm();
        if r < threshold {
            return Err(Error::DegenerateSeed {
                index,
                residual: r.as_f64(),
            });
        }
        members.push(residual.normalize()?);
    }
    Ok(RankNProjector { members })
}

/// Removes the components along an orthonormal set, two passes.
fn orthogonalize<T: Real>(
    v: &SampledState<T>,
    basis: &[SampledState<T>],
) -> Result<SampledState<T>> {
    let grid = *v.grid();
    let mut amps = v.amplitudes().to_vec();
    for _ in 0..2 {
        for e in basis {
            let cur = SampledState::from_amplitudes(grid, amps.clone())?;
            let c = e.inner(&cur)?;
            for (a, b) in amps.iter_mut().zip(e.amplitudes()) {
                *a -= b * c;
            }
        }
    }
    SampledState::from_amplitudes(grid, amps)
}

/// Restricts a state Wigner function to `|q| <= a/2` and renormalizes it
/// under `dq dp/(2π)`: the classical conditioning on a position window.
///
/// This is *not* how a quantum measurement acts; the output is flagged as
/// classically truncated.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalTruncation<T = f64> {
    pub field: WignerField<T>,
    /// Renormalization factor `1 / ∫∫_{|q|<=a/2} W dq dp/(2π)`.
    pub factor: T,
}

pub fn naive_classical_truncation<T: Real>(
    w: &WignerField<T>,
    a: T,
) -> Result<ClassicalTruncation<T>> {
    positive("a", a)?;
    w.require_kind(FieldKind::StateWf)?;
    let grid = *w.grid();
    let mut values = w.values().clone();
    for (i, mut row) in values.rows_mut().into_iter().enumerate() {
        if !window_indicator(grid.q(i), a) {
            row.fill(T::zero());
        }
    }
    let kept = WignerField::new(grid, values, FieldKind::StateWf);
    let mass = kept.phase_space_integral();
    if !(mass.as_f64() > tolerance::NEGLIGIBLE_MASS) {
        return Err(Error::ZeroMass {
            mass: mass.as_f64(),
        });
    }
    let factor = mass.recip();
    let values = kept.values().mapv(|v| v * factor);
    let field = WignerField::new(grid, values, FieldKind::StateWf)
        .with_tail(w.tail())
        .mark_classically_truncated();
    Ok(ClassicalTruncation { field, factor })
}

/// `⟨ψ|A|ψ⟩` by quadrature.
pub fn expectation_hilbert<T: Real>(psi: &SampledState<T>, a: &OperatorKernel<T>) -> Result<T> {
    if psi.grid() != a.grid() {
        return Err(Error::GridMismatch);
    }
    if !a.is_hermitian() {
        return Err(Error::NotHermitian {
            defect: a.hermitian_defect().as_f64(),
        });
    }
    let v = psi.inner(&a.apply(psi)?)?;
    if v.im.abs() > T::lit(1e-10) * T::one().max(v.re.abs()) {
        return Err(Error::NotHermitian {
            defect: v.im.abs().as_f64(),
        });
    }
    Ok(v.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::PositionGrid;
    use crate::kernel::{diagonal_observable_kernel, window_projector_kernel};

    const ERF_C0: f64 = 0.866_385_597_462_283_9; // erf(3/(2√2))

    fn gaussian_on(grid: &PositionGrid, sigma: f64) -> SampledState {
        sample_gaussian(&GaussianState::centered(sigma).unwrap(), grid).unwrap()
    }

    #[test]
    fn window_projection_normalizes() {
        let grid = PositionGrid::window_aligned(3.0, 8.0, 1e-3).unwrap();
        let psi = gaussian_on(&grid, 1.0);
        let out = apply_window_projector(&psi, 3.0).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-10);
        assert!(out.has_jumps());
        for (x, z) in grid.nodes().zip(out.amplitudes()) {
            if x.abs() > 1.5 {
                assert_eq!(z.norm(), 0.0);
            }
        }
        let p = window_projector_kernel(3.0, &grid).unwrap();
        let prob = expectation_hilbert(&psi, &p).unwrap();
        assert!((prob - ERF_C0).abs() < 1e-6);
    }

    #[test]
    fn wide_window_is_identity() {
        let grid = PositionGrid::symmetric(8.0, 513).unwrap();
        let psi = gaussian_on(&grid, 1.0);
        let out = apply_window_projector(&psi, 100.0).unwrap();
        assert_eq!(out, psi);
        assert!(!out.has_jumps());
    }

    #[test]
    fn empty_window_is_zero_probability() {
        let grid = PositionGrid::symmetric(20.0, 2001).unwrap();
        let far = sample_gaussian(&GaussianState::new(0.5, 12.0, 0.0).unwrap(), &grid).unwrap();
        assert!(matches!(
            apply_window_projector(&far, 1.0),
            Err(Error::ZeroProbability { .. })
        ));
    }

    #[test]
    fn analytic_origin_value_is_two() {
        let params = ProjectedGaussianParams::new(1.0, 3.0).unwrap();
        assert!((params.probability() - ERF_C0).abs() < 1e-15);
        let grid = PhaseSpaceGrid::new(-1.5, 1.5, 31, -1.5, 1.5, 31).unwrap();
        let w = projected_wigner_analytic(&params, &grid);
        assert!((w.value(15, 15) - 2.0).abs() < 1e-10);
        assert_eq!(w.tail(), TailDecay::SlowOscillatory);
    }

    #[test]
    fn analytic_is_zero_outside_window_and_even() {
        let params = ProjectedGaussianParams::<f64>::new(1.0, 3.0).unwrap();
        let grid = PhaseSpaceGrid::new(-2.0, 2.0, 41, -3.0, 3.0, 31).unwrap();
        let w = projected_wigner_analytic(&params, &grid);
        for i in 0..41 {
            for j in 0..31 {
                if grid.q(i).abs() > 1.5 + 1e-9 {
                    assert_eq!(w.value(i, j), 0.0);
                }
                assert!((w.value(i, j) - w.value(40 - i, 30 - j)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn rank_one_gaussian_returns_target() {
        let grid = PositionGrid::symmetric(16.0, 2049).unwrap();
        let target = GaussianState::centered(2.0).unwrap();
        let psi = gaussian_on(&grid, 1.0);
        let out = apply_rank_one_gaussian(&target, &psi).unwrap();
        let phi = sample_gaussian(&target, &grid).unwrap();
        assert!((out.fidelity(&phi).unwrap() - 1.0).abs() < 1e-8);
        let same = apply_rank_one_gaussian(&target, &phi).unwrap();
        assert!((same.fidelity(&phi).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_gaussian_rejects_orthogonal_input() {
        let grid = PositionGrid::symmetric(10.0, 1001).unwrap();
        let psi = gaussian_on(&grid, 1.0);
        let odd = hermite_seeds(&psi, 1)
            .unwrap()
            .remove(0)
            .normalize()
            .unwrap();
        let err =
            apply_rank_one_gaussian(&GaussianState::centered(1.0).unwrap(), &odd).unwrap_err();
        assert!(matches!(err, Error::ZeroProbability { .. }));
    }

    #[test]
    fn rank_zero_projector_equals_rank_one_kernel() {
        let grid = PositionGrid::symmetric(16.0, 1025).unwrap();
        let g1 = gaussian_on(&grid, 1.0);
        let g2 = gaussian_on(&grid, 2.0);
        let p = build_rank_n_projector(&g2, &[], &g1).unwrap();
        assert_eq!(p.n_extra(), 0);
        let dev = p
            .kernel()
            .max_deviation(&rank_one_kernel(&g2).unwrap())
            .unwrap();
        assert!(dev < 1e-14, "{dev}");
    }

    #[test]
    fn odd_seed_gram_and_action() {
        let grid = PositionGrid::symmetric(16.0, 2049).unwrap();
        let g1 = gaussian_on(&grid, 1.0);
        let g2 = gaussian_on(&grid, 2.0);
        let seeds = hermite_seeds(&g1, 1).unwrap();
        let p = build_rank_n_projector(&g2, &seeds, &g1).unwrap();
        // oracle: direct inner products of the members
        let m = p.members();
        for i in 0..2 {
            for j in 0..2 {
                let z = m[i].inner(&m[j]).unwrap();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((z.re - expect).abs() < 1e-8 && z.im.abs() < 1e-8);
            }
        }
        assert!(m[1].inner(&g1).unwrap().norm() < 1e-12);
        let out = p.apply(&g1).unwrap();
        assert!((out.fidelity(&g2).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn degenerate_seed_is_rejected() {
        let grid = PositionGrid::symmetric(16.0, 1025).unwrap();
        let g1 = gaussian_on(&grid, 1.0);
        let g2 = gaussian_on(&grid, 2.0);
        let err = build_rank_n_projector(&g2, std::slice::from_ref(&g1), &g1).unwrap_err();
        assert!(matches!(err, Error::DegenerateSeed { index: 0, .. }));
    }

    #[test]
    fn naive_truncation_factor() {
        let grid = PhaseSpaceGrid::<f64>::new(-8.0, 8.0, 321, -4.0, 4.0, 161).unwrap();
        let w = crate::wigner::wigner_of_gaussian(&GaussianState::centered(1.0).unwrap(), &grid);
        let wide = naive_classical_truncation(&w, 40.0).unwrap();
        assert!((wide.factor - 1.0).abs() < 1e-8);
        assert!(wide.field.is_classically_truncated());
        assert!(wide.field.min_value() >= 0.0);
        assert!((wide.field.phase_space_integral() - 1.0).abs() < 1e-12);
        let sym = crate::wigner::symbol_of_window(3.0, &grid).unwrap();
        assert!(matches!(
            naive_classical_truncation(&sym, 3.0),
            Err(Error::WrongFieldKind { .. })
        ));
    }

    #[test]
    fn expectation_requires_hermitian_and_matching_grid() {
        let grid = PositionGrid::symmetric(8.0, 64).unwrap();
        let psi = gaussian_on(&grid, 1.0);
        let other = PositionGrid::symmetric(8.0, 65).unwrap();
        let id = OperatorKernel::identity(other);
        assert_eq!(
            expectation_hilbert(&psi, &id).unwrap_err(),
            Error::GridMismatch
        );
        let mut m = Array2::from_elem((64, 64), Complex::new(0.0, 0.0));
        m[(3, 4)] = Complex::new(0.0, 1.0);
        let k = OperatorKernel::from_dense(grid, m).unwrap();
        assert!(matches!(
            expectation_hilbert(&psi, &k),
            Err(Error::NotHermitian { .. })
        ));
        let x2 = diagonal_observable_kernel(|x| x * x, &grid).unwrap();
        assert!((expectation_hilbert(&psi, &x2).unwrap() - 1.0).abs() < 1e-8);
    }
}
