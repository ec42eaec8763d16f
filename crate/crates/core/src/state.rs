use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{positive, PositionGrid};
use crate::tolerance;
use crate::Real;

/// Number of widths on each side of the centre a grid must span before a
/// Gaussian is sampled on it.
pub const GAUSSIAN_SUPPORT_WIDTHS: f64 = 8.0;

/// Minimum-uncertainty wave packet
/// `(2πσ²)^(-1/4) exp(-(x-q0)²/(4σ²)) exp(i p0 x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianState<T = f64> {
    sigma: T,
    q0: T,
    p0: T,
}

impl<T: Real> GaussianState<T> {
    pub fn new(sigma: T, q0: T, p0: T) -> Result<Self> {
        positive("sigma", sigma)?;
        if !(q0.is_finite() && p0.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "offset",
                reason: "q0 and p0 must be finite".into(),
            });
        }
        Ok(Self { sigma, q0, p0 })
    }

    pub fn centered(sigma: T) -> Result<Self> {
        Self::new(sigma, T::zero(), T::zero())
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }
    pub fn q0(&self) -> T {
        self.q0
    }
    pub fn p0(&self) -> T {
        self.p0
    }

    pub fn amplitude(&self, x: T) -> Complex<T> {
        let s2 = self.sigma * self.sigma;
        let pref = (T::TAU() * s2).powf(T::lit(-0.25));
        let d = x - self.q0;
        let env = pref * (-(d * d) / (T::lit(4.0) * s2)).exp();
        Complex::from_polar(env, self.p0 * x)
    }
}

/// Complex wavefunction samples `ψ(x_i)` on a position grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledState<T = f64> {
    grid: PositionGrid<T>,
    amplitudes: Vec<Complex<T>>,
    discontinuous: bool,
}

impl<T: Real> SampledState<T> {
    pub fn from_amplitudes(grid: PositionGrid<T>, amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        if let Some(i) = amplitudes
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::NonFiniteSample {
                x: grid.x(i).as_f64(),
            });
        }
        Ok(Self {
            grid,
            amplitudes,
            discontinuous: false,
        })
    }

    pub fn from_fn(grid: PositionGrid<T>, f: impl Fn(T) -> Complex<T>) -> Result<Self> {
        let amps = grid.nodes().map(f).collect();
        Self::from_amplitudes(grid, amps)
    }

    pub(crate) fn with_jumps(mut self, discontinuous: bool) -> Self {
        self.discontinuous = discontinuous;
        self
    }

    pub fn grid(&self) -> &PositionGrid<T> {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    /// Whether the wavefunction has jump discontinuities (e.g. after a sharp
    /// position window). Such states have divergent `⟨p²⟩`.
    pub fn has_jumps(&self) -> bool {
        self.discontinuous
    }

    /// `∫ |ψ|² dx` by the trapezoid rule.
    pub fn norm_sqr(&self) -> T {
        self.grid
            .weights()
            .iter()
            .zip(&self.amplitudes)
            .map(|(&w, z)| w * z.norm_sqr())
            .sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if !(n > T::zero()) {
            return Err(Error::NotNormalized { norm: n.as_f64() });
        }
        Ok(self.scaled(Complex::new(n.recip(), T::zero())))
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        let n = self.norm();
        if (n - T::one()).abs().as_f64() > tolerance::NORMALIZED {
            return Err(Error::NotNormalized { norm: n.as_f64() });
        }
        Ok(())
    }

    pub fn scaled(&self, c: Complex<T>) -> Self {
        Self {
            grid: self.grid,
            amplitudes: self.amplitudes.iter().map(|z| z * c).collect(),
            discontinuous: self.discontinuous,
        }
    }

    /// `⟨self|other⟩` by the trapezoid rule.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .grid
            .weights()
            .iter()
            .zip(self.amplitudes.iter().zip(&other.amplitudes))
            .map(|(&w, (a, b))| a.conj() * b * w)
            .sum())
    }

    /// `|⟨self|other⟩|`, the overlap modulo global phase.
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        Ok(self.inner(other)?.norm())
    }

    /// `∫ x^k |ψ|² dx`.
    pub fn position_moment(&self, k: i32) -> T {
        self.grid
            .weights()
            .iter()
            .zip(self.grid.nodes())
            .zip(&self.amplitudes)
            .map(|((&w, x), z)| w * x.powi(k) * z.norm_sqr())
            .sum()
    }

    /// Linear interpolation of the samples; zero outside the grid.
    pub fn value_at(&self, x: T) -> Complex<T> {
        match self.grid.locate(x) {
            Some((i, t)) => lerp(self.amplitudes[i], self.amplitudes[i + 1], t),
            None => Complex::new(T::zero(), T::zero()),
        }
    }

    /// Index range `[first, last]` of samples that are not exactly zero.
    pub(crate) fn nonzero_range(&self) -> Option<(usize, usize)> {
        let nz = |z: &Complex<T>| z.re != T::zero() || z.im != T::zero();
        let first = self.amplitudes.iter().position(nz)?;
        let last = self.amplitudes.iter().rposition(nz)?;
        Some((first, last))
    }

    /// Largest amplitude modulus at the two grid ends relative to the peak.
    pub(crate) fn edge_ratio(&self) -> T {
        let peak = self
            .amplitudes
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), T::max);
        if peak == T::zero() {
            return T::zero();
        }
        let n = self.amplitudes.len();
        self.amplitudes[0].norm().max(self.amplitudes[n - 1].norm()) / peak
    }
}

#[inline]
pub(crate) fn lerp<T: Real>(a: Complex<T>, b: Complex<T>, t: T) -> Complex<T> {
    a * (T::one() - t) + b * t
}

/// Samples a Gaussian state; the grid must span `q0 ± 8σ`.
pub fn sample_gaussian<T: Real>(
    g: &GaussianState<T>,
    grid: &PositionGrid<T>,
) -> Result<SampledState<T>> {
    let reach = T::lit(GAUSSIAN_SUPPORT_WIDTHS) * g.sigma();
    let (lo, hi) = (g.q0() - reach, g.q0() + reach);
    if !grid.covers(lo, hi) {
        return Err(Error::GridTooNarrow {
            need_min: lo.as_f64(),
            need_max: hi.as_f64(),
            grid_min: grid.x_min().as_f64(),
            grid_max: grid.x_max().as_f64(),
        });
    }
    SampledState::from_fn(*grid, |x| g.amplitude(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(half: f64, n: usize) -> PositionGrid {
        PositionGrid::symmetric(half, n).unwrap()
    }

    #[test]
    fn amplitude_at_origin() {
        let g = GaussianState::centered(1.0).unwrap();
        let psi = sample_gaussian(&g, &grid(8.0, 1025)).unwrap();
        let mid = psi.amplitudes()[512];
        assert!((mid.re - 0.631_618_78).abs() < 1e-8);
        assert_eq!(mid.im, 0.0);
    }

    #[test]
    fn sampled_gaussian_is_normalized() {
        for sigma in [0.5, 1.0, 2.0] {
            let g = GaussianState::new(sigma, 0.3, -1.2).unwrap();
            let psi = sample_gaussian(&g, &grid(17.0, 2049)).unwrap();
            assert!((psi.norm_sqr() - 1.0).abs() < 1e-10, "sigma {sigma}");
        }
    }

    #[test]
    fn second_moment_is_variance() {
        // closed form of ∫ x² |ψ|² for a centred Gaussian is σ²
        for sigma in [0.5, 1.0, 2.0] {
            let g = GaussianState::centered(sigma).unwrap();
            let psi = sample_gaussian(&g, &grid(8.0 * sigma, 1025)).unwrap();
            assert!((psi.position_moment(2) - sigma * sigma).abs() < 1e-8);
        }
    }

    #[test]
    fn narrow_grid_is_rejected() {
        let g = GaussianState::centered(1.0).unwrap();
        let err = sample_gaussian(&g, &grid(7.9, 256)).unwrap_err();
        assert!(matches!(err, Error::GridTooNarrow { .. }));
        let shifted = GaussianState::new(1.0, 1.0, 0.0).unwrap();
        assert!(sample_gaussian(&shifted, &grid(8.5, 256)).is_err());
    }

    #[test]
    fn invalid_sigma() {
        assert!(GaussianState::centered(0.0).is_err());
        assert!(GaussianState::centered(-1.0f32).is_err());
        assert!(GaussianState::new(1.0, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn non_finite_amplitudes_rejected() {
        let err =
            SampledState::from_fn(grid(1.0, 16), |x| Complex::new(1.0 / x.abs().min(0.0), 0.0))
                .unwrap_err();
        assert!(matches!(err, Error::NonFiniteSample { .. }));
    }

    #[test]
    fn single_precision_gaussian() {
        let g = GaussianState::<f32>::centered(1.0).unwrap();
        let psi = sample_gaussian(&g, &PositionGrid::symmetric(8.0f32, 513).unwrap()).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-5);
    }
}
