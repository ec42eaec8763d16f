//! Verdicts on phase-space fields: normalization, marginals, moments,
//! negativity, properness of symbols and the Hudson consistency check.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{FieldKind, TailDecay, WignerField};
use crate::grid::PhaseSpaceGrid;
use crate::state::SampledState;
use crate::tolerance;
use crate::wigner::wigner_numeric;
use crate::Real;

/// Reliability of a grid integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum TailStatus<T> {
    Converged,
    /// The field decays only as an oscillatory `1/p`; the value is an
    /// estimate and `error_estimate` is its half-width.
    SlowTail {
        error_estimate: T,
    },
}

/// A grid integral together with its [`TailStatus`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Integrated<V, T> {
    pub value: V,
    pub tail: TailStatus<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NegativityReport<T = f64> {
    pub min_value: T,
    pub argmin: (T, T),
    pub argmin_index: (usize, usize),
    /// `∫∫_{W < -tol} |W| dq dp/(2π)`.
    pub negative_mass: T,
    pub tol: T,
}

impl<T: Real> NegativityReport<T> {
    pub fn has_negativity(&self) -> bool {
        self.min_value < -self.tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentReport<T = f64> {
    pub mean_q: T,
    pub mean_p: T,
    pub var_q: T,
    pub var_p: T,
    pub uncertainty_product: T,
    /// Set when the field is not negligible on the grid border or takes
    /// negative values, so the moments depend on the grid truncation.
    pub caveat: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Proper,
    Improper,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropernessReport<T = f64> {
    pub spectrum: Vec<T>,
    /// Largest distance from a symbol value to the spectrum.
    pub max_distance: T,
    pub verdict: Verdict,
    pub witness: (T, T),
    pub witness_value: T,
    pub tolerance: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HudsonVerdict<T = f64> {
    /// Whether `ln ψ` is a quadratic polynomial on the support and the
    /// support is not cut off.
    pub classified_gaussian: bool,
    pub fit_residual: T,
    pub negativity: NegativityReport<T>,
    /// Gaussian with no negativity, or non-Gaussian with negativity.
    pub consistent: bool,
}

/// Trapezoid integral of `W` over `p` rows `j_lo..=j_hi`, for every `q`.
fn p_integrals<T: Real>(w: &WignerField<T>, j_lo: usize, j_hi: usize) -> Vec<T> {
    let dp = w.grid().dp();
    w.values()
        .rows()
        .into_iter()
        .map(|row| {
            let inner: T = (j_lo..=j_hi).map(|j| row[j]).sum();
            (inner - (row[j_lo] + row[j_hi]) * T::half()) * dp / T::TAU()
        })
        .collect()
}

/// Integrates over `p` on the full grid and, for slow tails, on the inner
/// three quarters of the `p` range; the difference is the error estimate.
fn marginal_with_tail<T: Real>(w: &WignerField<T>) -> (Vec<T>, Vec<T>) {
    let n_p = w.grid().n_p();
    let full = p_integrals(w, 0, n_p - 1);
    if w.tail() == TailDecay::Rapid {
        return (full, Vec::new());
    }
    let cut = n_p / 8;
    let inner = p_integrals(w, cut, n_p - 1 - cut);
    let err = full
        .iter()
        .zip(&inner)
        .map(|(a, b)| (*a - *b).abs())
        .collect();
    (full, err)
}

/// `∫∫ W dq dp/(2π)`.
pub fn normalization<T: Real>(w: &WignerField<T>) -> Result<Integrated<T, T>> {
    w.require_kind(FieldKind::StateWf)?;
    let value = w.phase_space_integral();
    let tail = match w.tail() {
        TailDecay::Rapid => TailStatus::Converged,
        TailDecay::SlowOscillatory => {
            let (_, err) = marginal_with_tail(w);
            let wq = w.grid().q_weights();
            let e = err.iter().zip(&wq).map(|(e, &a)| *e * a).sum();
            TailStatus::SlowTail { error_estimate: e }
        }
    };
    Ok(Integrated { value, tail })
}

/// Position marginal `∫ W dp/(2π)` at every grid `q`.
pub fn marginal_q<T: Real>(w: &WignerField<T>) -> Result<Integrated<Vec<T>, T>> {
    w.require_kind(FieldKind::StateWf)?;
    let (value, err) = marginal_with_tail(w);
    let tail = if err.is_empty() {
        TailStatus::Converged
    } else {
        TailStatus::SlowTail {
            error_estimate: err.into_iter().fold(T::zero(), T::max),
        }
    };
    Ok(Integrated { value, tail })
}

/// Grid scan for negative values. Ties in the minimum resolve to the lowest
/// `q` index, then the lowest `p` index.
pub fn negativity_report<T: Real>(w: &WignerField<T>, tol: T) -> NegativityReport<T> {
    let grid = w.grid();
    let wq = grid.q_weights();
    let wp = grid.p_weights();
    let mut min_value = T::infinity();
    let mut arg = (0, 0);
    let mut mass = T::zero();
    for ((i, j), &v) in w.values().indexed_iter() {
        if v < min_value {
            min_value = v;
            arg = (i, j);
        }
        if v < -tol {
            mass += v.abs() * wq[i] * wp[j];
        }
    }
    NegativityReport {
        min_value,
        argmin: (grid.q(arg.0), grid.p(arg.1)),
        argmin_index: arg,
        negative_mass: mass / T::TAU(),
        tol,
    }
}

/// First and second central moments under `dq dp/(2π)`.
pub fn moments<T: Real>(w: &WignerField<T>) -> Result<MomentReport<T>> {
    w.require_kind(FieldKind::StateWf)?;
    if w.tail() == TailDecay::SlowOscillatory {
        return Err(Error::DivergentMoments);
    }
    let grid = w.grid();
    let wq = grid.q_weights();
    let wp = grid.p_weights();
    let vals = w.values();
    let integrate = |f: &dyn Fn(T, T) -> T| -> T {
        let mut s = T::zero();
        for ((i, j), &v) in vals.indexed_iter() {
            s += f(grid.q(i), grid.p(j)) * v * wq[i] * wp[j];
        }
        s / T::TAU()
    };
    let norm = integrate(&|_, _| T::one());
    if !(norm > T::zero()) {
        return Err(Error::ZeroMass {
            mass: norm.as_f64(),
        });
    }
    let mean_q = integrate(&|q, _| q) / norm;
    let mean_p = integrate(&|_, p| p) / norm;
    let var_q = integrate(&|q, _| (q - mean_q) * (q - mean_q)) / norm;
    let var_p = integrate(&|_, p| (p - mean_p) * (p - mean_p)) / norm;

    let peak = vals.iter().map(|v| v.abs()).fold(T::zero(), T::max);
    let (n_q, n_p) = grid.shape();
    let border = vals
        .indexed_iter()
        .filter(|((i, j), _)| *i == 0 || *j == 0 || *i == n_q - 1 || *j == n_p - 1)
        .map(|(_, v)| v.abs())
        .fold(T::zero(), T::max);
    let caveat = border > T::lit(1e-10) * peak || w.min_value() < -T::lit(tolerance::NEGATIVITY);
    Ok(MomentReport {
        mean_q,
        mean_p,
        var_q,
        var_p,
        uncertainty_product: var_q * var_p,
        caveat,
    })
}

/// Distance of a symbol's values from the operator spectrum.
pub fn properness_report<T: Real>(
    w: &WignerField<T>,
    spectrum: &[T],
    tolerance: T,
) -> Result<PropernessReport<T>> {
    w.require_kind(FieldKind::OperatorSymbol)?;
    if spectrum.is_empty() {
        return Err(Error::EmptySpectrum);
    }
    let mut sorted = spectrum.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite spectrum"));
    sorted.dedup();
    let distance = |v: T| -> T {
        let k = sorted.partition_point(|&s| s < v);
        let mut d = T::infinity();
        if k < sorted.len() {
            d = d.min((sorted[k] - v).abs());
        }
        if k > 0 {
            d = d.min((v - sorted[k - 1]).abs());
        }
        d
    };
    let mut max_distance = T::neg_infinity();
    let mut arg = (0, 0);
    for ((i, j), &v) in w.values().indexed_iter() {
        let d = distance(v);
        if d > max_distance {
            max_distance = d;
            arg = (i, j);
        }
    }
    let grid = w.grid();
    Ok(PropernessReport {
        spectrum: sorted,
        max_distance,
        verdict: if max_distance <= tolerance {
            Verdict::Proper
        } else {
            Verdict::Improper
        },
        witness: (grid.q(arg.0), grid.p(arg.1)),
        witness_value: w.value(arg.0, arg.1),
        tolerance,
    })
}

/// `∫∫ W_state W_obs dq dp/(2π)`.
pub fn phase_space_expectation<T: Real>(state: &WignerField<T>, obs: &WignerField<T>) -> Result<T> {
    state.require_kind(FieldKind::StateWf)?;
    obs.require_kind(FieldKind::OperatorSymbol)?;
    if state.grid() != obs.grid() {
        return Err(Error::GridMismatch);
    }
    let product = WignerField::new(
        *state.grid(),
        state.values() * obs.values(),
        FieldKind::StateWf,
    );
    Ok(product.phase_space_integral())
}

/// Relative amplitude below which a sample counts as outside the support.
const HUDSON_SUPPORT: f64 = 1e-6;
/// Largest fit residual of `ln ψ` accepted as Gaussian.
const HUDSON_FIT: f64 = 1e-6;

/// Classifies `psi` as Gaussian or not and checks the outcome against the
/// negativity of its Wigner function on `grid`.
pub fn hudson_check<T: Real>(
    psi: &SampledState<T>,
    grid: &PhaseSpaceGrid<T>,
) -> Result<HudsonVerdict<T>> {
    psi.require_normalized()?;
    let (classified_gaussian, fit_residual) = classify_gaussian(psi);
    let w = wigner_numeric(psi, grid)?;
    let negativity = negativity_report(&w, T::lit(tolerance::NEGATIVITY));
    let consistent = classified_gaussian != negativity.has_negativity();
    Ok(HudsonVerdict {
        classified_gaussian,
        fit_residual,
        negativity,
        consistent,
    })
}

/// Fits `ln|ψ|` and the unwrapped phase with quadratics on the support.
fn classify_gaussian<T: Real>(psi: &SampledState<T>) -> (bool, T) {
    let amps = psi.amplitudes();
    let xs: Vec<T> = psi.grid().nodes().collect();
    let peak = amps.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let floor = T::lit(HUDSON_SUPPORT) * peak;
    let inside: Vec<usize> = (0..amps.len())
        .filter(|&i| amps[i].norm() > floor)
        .collect();
    if inside.len() < 3 {
        return (false, T::infinity());
    }
    // a Gaussian has a single contiguous support interval
    if inside.windows(2).any(|w| w[1] != w[0] + 1) {
        return (false, T::infinity());
    }
    let sx: Vec<T> = inside.iter().map(|&i| xs[i]).collect();
    let log_mod: Vec<T> = inside.iter().map(|&i| amps[i].norm().ln()).collect();
    let mut phase: Vec<T> = Vec::with_capacity(inside.len());
    for &i in &inside {
        let a = amps[i].arg();
        let v = match phase.last() {
            Some(&prev) => {
                let mut d = a - prev;
                while d > T::PI() {
                    d -= T::TAU();
                }
                while d < -T::PI() {
                    d += T::TAU();
                }
                prev + d
            }
            None => a,
        };
        phase.push(v);
    }
    let (Some(fm), Some(fp)) = (quadratic_fit(&sx, &log_mod), quadratic_fit(&sx, &phase)) else {
        return (false, T::infinity());
    };
    let residual = fm.residual.max(fp.residual);
    let decays = fm.c2 < T::zero();
    // outside the support the fitted envelope must itself be negligible
    let ln_floor = (floor * T::lit(10.0)).ln();
    let cut_off = (0..amps.len())
        .filter(|&i| amps[i].norm() <= floor)
        .any(|i| fm.eval(xs[i]) > ln_floor);
    (
        decays && !cut_off && residual < T::lit(HUDSON_FIT),
        residual,
    )
}

struct Quadratic<T> {
    c0: T,
    c1: T,
    c2: T,
    center: T,
    scale: T,
    residual: T,
}

impl<T: Real> Quadratic<T> {
    fn eval(&self, x: T) -> T {
        let t = (x - self.center) / self.scale;
        self.c0 + t * (self.c1 + t * self.c2)
    }
}

/// Least-squares `y ≈ c0 + c1 t + c2 t²` in the scaled variable
/// `t = (x - center)/scale`; returns the max residual.
fn quadratic_fit<T: Real>(x: &[T], y: &[T]) -> Option<Quadratic<T>> {
    let n = T::from_usize_lossy(x.len());
    let center = x.iter().copied().sum::<T>() / n;
    let scale = x
        .iter()
        .map(|&v| (v - center).abs())
        .fold(T::zero(), T::max)
        .max(T::min_positive_value());
    let mut m = [[T::zero(); 3]; 3];
    let mut b = [T::zero(); 3];
    for (&xi, &yi) in x.iter().zip(y) {
        let t = (xi - center) / scale;
        let basis = [T::one(), t, t * t];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] += basis[r] * basis[c];
            }
            b[r] += basis[r] * yi;
        }
    }
    let sol = solve3(m, b)?;
    let mut q = Quadratic {
        c0: sol[0],
        c1: sol[1],
        c2: sol[2],
        center,
        scale,
        residual: T::zero(),
    };
    q.residual = x
        .iter()
        .zip(y)
        .map(|(&xi, &yi)| (q.eval(xi) - yi).abs())
        .fold(T::zero(), T::max);
    Some(q)
}

/// Gaussian elimination with partial pivoting.
fn solve3<T: Real>(mut m: [[T; 3]; 3], mut b: [T; 3]) -> Option<[T; 3]> {
    for col in 0..3 {
        let piv = (col..3).max_by(|&a, &c| {
            m[a][col]
                .abs()
                .partial_cmp(&m[c][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[piv][col].abs() <= T::epsilon() {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..3 {
            let f = m[r][col] / m[col][col];
            let pivot_row = m[col];
            for (dst, &src) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                *dst -= f * src;
            }
            let v = b[col];
            b[r] -= f * v;
        }
    }
    let mut out = [T::zero(); 3];
    for r in (0..3).rev() {
        let mut s = b[r];
        for c in r + 1..3 {
            s -= m[r][c] * out[c];
        }
        out[r] = s / m[r][r];
    }
    Some(out)
}
