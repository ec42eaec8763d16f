//! Wigner transforms of states and Weyl symbols of operators.
//!
//! Numerical transforms use the substitution `x = q + y/2`,
//!
//! ```text
//! W(q, p) = 2 ∫ e^{-2ip(x-q)} F(x, 2q - x) dx,
//! ```
//!
//! with `F(x, x') = ψ(x) conj(ψ(x'))` for states and `F = K` for kernels.
//! `x` runs over grid nodes (trapezoid weights) and the reflected argument
//! `2q - x` is linearly interpolated. When `q` lies on the half-node lattice
//! `x_min + k dx/2` the reflected argument is itself a node, no interpolation
//! happens and the imaginary parts cancel pairwise to rounding.

use ndarray::Array2;
use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldKind, TailDecay, WignerField};
use crate::grid::{positive, PhaseSpaceGrid, PositionGrid};
use crate::kernel::{window_indicator, OperatorKernel};
use crate::state::{GaussianState, SampledState};
use crate::Real;

/// Amplitude at the grid ends, relative to the peak, above which a state or
/// kernel is considered clipped by its grid.
pub const EDGE_RATIO: f64 = 1e-6;

/// Options for the numerical transforms.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TransformOptions<T> {
    /// Integration window `|y| <= Y`. `None` integrates over the whole
    /// overlap of the function's support with its reflection.
    pub y_window: Option<T>,
}

/// `2 exp(-(q-q0)²/(2σ²)) exp(-2σ²(p-p0)²)`.
fn gaussian_wigner_values<T: Real>(g: &GaussianState<T>, grid: &PhaseSpaceGrid<T>) -> Array2<T> {
    let s2 = g.sigma() * g.sigma();
    let two = T::two();
    let qf: Vec<T> = (0..grid.n_q())
        .map(|i| {
            let d = grid.q(i) - g.q0();
            (-(d * d) / (two * s2)).exp()
        })
        .collect();
    let pf: Vec<T> = (0..grid.n_p())
        .map(|j| {
            let d = grid.p(j) - g.p0();
            (-two * s2 * d * d).exp()
        })
        .collect();
    Array2::from_shape_fn(grid.shape(), |(i, j)| two * qf[i] * pf[j])
}

/// Closed-form Wigner function of a Gaussian state.
pub fn wigner_of_gaussian<T: Real>(
    g: &GaussianState<T>,
    grid: &PhaseSpaceGrid<T>,
) -> WignerField<T> {
    WignerField::new(*grid, gaussian_wigner_values(g, grid), FieldKind::StateWf)
}

/// Closed-form Weyl symbol of the rank-one projector `|ψ_G⟩⟨ψ_G|`. Same
/// function as the state's Wigner function, tagged as an operator symbol.
pub fn symbol_of_rank_one_gaussian<T: Real>(
    g: &GaussianState<T>,
    grid: &PhaseSpaceGrid<T>,
) -> WignerField<T> {
    WignerField::new(
        *grid,
        gaussian_wigner_values(g, grid),
        FieldKind::OperatorSymbol,
    )
}

/// Symbol of the position window: `θ(a/2 - |q|)`, independent of `p`.
pub fn symbol_of_window<T: Real>(a: T, grid: &PhaseSpaceGrid<T>) -> Result<WignerField<T>> {
    positive("a", a)?;
    let values = Array2::from_shape_fn(grid.shape(), |(i, _)| {
        if window_indicator(grid.q(i), a) {
            T::one()
        } else {
            T::zero()
        }
    });
    Ok(WignerField::new(*grid, values, FieldKind::OperatorSymbol))
}

/// Symbol of a multiplication operator: `f(q)`, independent of `p`.
pub fn symbol_of_diagonal<T: Real>(
    f: impl Fn(T) -> T,
    grid: &PhaseSpaceGrid<T>,
) -> Result<WignerField<T>> {
    let mut col = Vec::with_capacity(grid.n_q());
    for i in 0..grid.n_q() {
        let q = grid.q(i);
        let v = f(q);
        if !v.is_finite() {
            return Err(Error::NonFiniteSample { x: q.as_f64() });
        }
        col.push(v);
    }
    let values = Array2::from_shape_fn(grid.shape(), |(i, _)| col[i]);
    Ok(WignerField::new(*grid, values, FieldKind::OperatorSymbol))
}

/// Wigner function of a sampled pure state by direct quadrature.
pub fn wigner_numeric<T: Real>(
    psi: &SampledState<T>,
    grid: &PhaseSpaceGrid<T>,
) -> Result<WignerField<T>> {
    wigner_numeric_with(psi, grid, TransformOptions::default())
}

pub fn wigner_numeric_with<T: Real>(
    psi: &SampledState<T>,
    grid: &PhaseSpaceGrid<T>,
    opts: TransformOptions<T>,
) -> Result<WignerField<T>> {
    psi.require_normalized()?;
    let xg = *psi.grid();
    check_window(&xg, grid, opts.y_window)?;
    if opts.y_window.is_none() && psi.edge_ratio() > T::lit(EDGE_RATIO) {
        return Err(Error::SupportExceeded(format!(
            "state amplitude at the grid edge is {:e} of its peak",
            psi.edge_ratio()
        )));
    }
    let (first, last) = psi
        .nonzero_range()
        .ok_or(Error::NotNormalized { norm: 0.0 })?;
    let amps = psi.amplitudes();
    let (values, residue) = weyl_quadrature(&xg, grid, (first, last), opts.y_window, |k, r| {
        amps[k] * psi.value_at(r).conj()
    });
    let tail = if psi.has_jumps() {
        TailDecay::SlowOscillatory
    } else {
        TailDecay::Rapid
    };
    Ok(WignerField::new(*grid, values, FieldKind::StateWf)
        .with_tail(tail)
        .with_imag_residue(residue))
}

/// Weyl symbol of an operator kernel.
///
/// Multiplication operators are mapped exactly (their symbol is the
/// linearly interpolated diagonal `d(q)`); every other kernel goes through
/// the quadrature described in the module docs.
pub fn symbol_of_kernel<T: Real>(
    kernel: &OperatorKernel<T>,
    grid: &PhaseSpaceGrid<T>,
) -> Result<WignerField<T>> {
    symbol_of_kernel_with(kernel, grid, TransformOptions::default())
}

pub fn symbol_of_kernel_with<T: Real>(
    kernel: &OperatorKernel<T>,
    grid: &PhaseSpaceGrid<T>,
    opts: TransformOptions<T>,
) -> Result<WignerField<T>> {
    if !kernel.is_hermitian() {
        return Err(Error::NotHermitian {
            defect: kernel.hermitian_defect().as_f64(),
        });
    }
    let xg = *kernel.grid();
    if let Some(d) = kernel.diagonal() {
        if !xg.covers(grid.q_min(), grid.q_max()) {
            return Err(Error::SupportExceeded(
                "phase-space q range exceeds the position grid".into(),
            ));
        }
        let col: Vec<T> = (0..grid.n_q())
            .map(|i| {
                let (k, t) = xg.locate(grid.q(i)).expect("checked by covers");
                d[k].re * (T::one() - t) + d[k + 1].re * t
            })
            .collect();
        let values = Array2::from_shape_fn(grid.shape(), |(i, _)| col[i]);
        return Ok(WignerField::new(*grid, values, FieldKind::OperatorSymbol));
    }
    check_window(&xg, grid, opts.y_window)?;
    let (range, edge) = kernel_support(kernel);
    if opts.y_window.is_none() && edge > T::lit(EDGE_RATIO) {
        return Err(Error::SupportExceeded(format!(
            "kernel at the grid edge is {edge:e} of its peak"
        )));
    }
    let Some(range) = range else {
        let values = Array2::zeros(grid.shape());
        return Ok(WignerField::new(*grid, values, FieldKind::OperatorSymbol));
    };
    let (values, residue) = weyl_quadrature(&xg, grid, range, opts.y_window, |k, r| {
        kernel.row_value(k, r)
    });
    Ok(WignerField::new(*grid, values, FieldKind::OperatorSymbol).with_imag_residue(residue))
}

/// Elementwise product of two fields on the same grid.
pub fn pointwise_product<T: Real>(
    a: &WignerField<T>,
    b: &WignerField<T>,
) -> Result<WignerField<T>> {
    if a.grid() != b.grid() {
        return Err(Error::GridMismatch);
    }
    let values = a.values() * b.values();
    let kind = if a.kind() == FieldKind::StateWf || b.kind() == FieldKind::StateWf {
        FieldKind::StateWf
    } else {
        FieldKind::OperatorSymbol
    };
    let tail = if a.tail() == TailDecay::SlowOscillatory || b.tail() == TailDecay::SlowOscillatory {
        TailDecay::SlowOscillatory
    } else {
        TailDecay::Rapid
    };
    Ok(WignerField::new(*a.grid(), values, kind).with_tail(tail))
}

fn check_window<T: Real>(
    xg: &PositionGrid<T>,
    grid: &PhaseSpaceGrid<T>,
    y_window: Option<T>,
) -> Result<()> {
    match y_window {
        Some(y) => {
            positive("y_window", y)?;
            let (lo, hi) = (grid.q_min() - y * T::half(), grid.q_max() + y * T::half());
            if !xg.covers(lo, hi) {
                return Err(Error::SupportExceeded(format!(
                    "need [{lo}, {hi}] but the position grid is [{}, {}]",
                    xg.x_min(),
                    xg.x_max()
                )));
            }
        }
        None => {
            if !xg.covers(grid.q_min(), grid.q_max()) {
                return Err(Error::SupportExceeded(
                    "phase-space q range exceeds the position grid".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Nonzero row range of a non-diagonal kernel and its edge-to-peak ratio.
fn kernel_support<T: Real>(kernel: &OperatorKernel<T>) -> (Option<(usize, usize)>, T) {
    let n = kernel.grid().len();
    let row_peak: Vec<T> = match kernel.factors() {
        Some((left, right)) => (0..n)
            .map(|i| {
                left.iter()
                    .chain(right)
                    .map(|v| v[i].norm())
                    .fold(T::zero(), T::max)
            })
            .collect(),
        None => (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| kernel.entry(i, j).norm().max(kernel.entry(j, i).norm()))
                    .fold(T::zero(), T::max)
            })
            .collect(),
    };
    let peak = row_peak.iter().copied().fold(T::zero(), T::max);
    let first = row_peak.iter().position(|&v| v > T::zero());
    let last = row_peak.iter().rposition(|&v| v > T::zero());
    let edge = if peak > T::zero() {
        row_peak[0].max(row_peak[n - 1]) / peak
    } else {
        T::zero()
    };
    (first.zip(last), edge)
}

/// `W(q_i, p_j) = 2 Σ_k w_k F(x_k, 2q_i - x_k) e^{-2ip_j(x_k - q_i)}` over
/// nodes `k` in `support` whose reflection also falls in `support` (and,
/// with a window, `|x_k - q_i| <= Y/2`). Rows are evaluated in parallel, each
/// with a fixed summation order. Returns the real part and the largest
/// discarded imaginary part.
fn weyl_quadrature<T, F>(
    xg: &PositionGrid<T>,
    grid: &PhaseSpaceGrid<T>,
    support: (usize, usize),
    y_window: Option<T>,
    pair: F,
) -> (Array2<T>, T)
where
    T: Real,
    F: Fn(usize, T) -> Complex<T> + Sync,
{
    let (first, last) = support;
    let w = xg.weights();
    let dx = xg.dx();
    let (n_q, n_p) = grid.shape();
    let (p_min, dp) = (grid.p_min(), grid.dp());
    let lo = xg.x(first);
    let hi = xg.x(last);
    let two = T::two();

    let rows: Vec<(Vec<T>, T)> = (0..n_q)
        .into_par_iter()
        .map(|i| {
            let q = grid.q(i);
            // x and 2q - x must both lie in [lo, hi]
            let mut x_lo = lo.max(two * q - hi);
            let mut x_hi = hi.min(two * q - lo);
            if let Some(y) = y_window {
                x_lo = x_lo.max(q - y * T::half());
                x_hi = x_hi.min(q + y * T::half());
            }
            let mut acc = vec![Complex::new(T::zero(), T::zero()); n_p];
            if x_hi >= x_lo {
                let slack = T::lit(1e-9);
                let k_lo = ((x_lo - xg.x_min()) / dx - slack).ceil().max(T::zero());
                let k_hi = ((x_hi - xg.x_min()) / dx + slack).floor();
                let k_lo = k_lo.to_usize().unwrap_or(0).max(first);
                let k_hi = k_hi.to_usize().unwrap_or(0).min(last);
                for (k, &wk) in w.iter().enumerate().take(k_hi + 1).skip(k_lo) {
                    let x = xg.x(k);
                    let f = pair(k, two * q - x) * (two * wk);
                    if f.re == T::zero() && f.im == T::zero() {
                        continue;
                    }
                    let phase = -two * (x - q);
                    let step = Complex::from_polar(T::one(), phase * dp);
                    let mut rot = Complex::from_polar(T::one(), phase * p_min);
                    for a in acc.iter_mut() {
                        *a += f * rot;
                        rot *= step;
                    }
                }
            }
            let residue = acc.iter().map(|z| z.im.abs()).fold(T::zero(), T::max);
            (acc.into_iter().map(|z| z.re).collect(), residue)
        })
        .collect();

    let mut values = Array2::zeros((n_q, n_p));
    let mut residue = T::zero();
    for (i, (row, r)) in rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            values[(i, j)] = v;
        }
        residue = residue.max(r);
    }
    (values, residue)
}
