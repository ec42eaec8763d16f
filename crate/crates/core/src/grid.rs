use serde::Serialize;

use crate::error::{Error, Result};
use crate::Real;

/// Minimum number of samples along any grid axis.
pub const MIN_POINTS: usize = 16;

/// Uniform one-dimensional position lattice `x_i = x_min + i dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositionGrid<T = f64> {
    x_min: T,
    x_max: T,
    n: usize,
}

impl<T: Real> PositionGrid<T> {
    pub fn new(x_min: T, x_max: T, n: usize) -> Result<Self> {
        check_axis("x", x_min, x_max, n)?;
        Ok(Self { x_min, x_max, n })
    }

    /// Grid on `[-half_width, half_width]` with `n` samples.
    pub fn symmetric(half_width: T, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n)
    }

    /// Symmetric grid whose nodes are integer multiples of `dx`, with `dx`
    /// chosen so that `±a/2` fall exactly halfway between two nodes.
    ///
    /// Sums over nodes then act as a midpoint rule on cells whose edges
    /// coincide with the window edges, which keeps every quadrature that
    /// involves the window projector second-order accurate. The grid spans at
    /// least `[-half_extent, half_extent]` and `dx <= max_dx`.
    pub fn window_aligned(a: T, half_extent: T, max_dx: T) -> Result<Self> {
        positive("a", a)?;
        positive("half_extent", half_extent)?;
        positive("max_dx", max_dx)?;
        let edge = a * T::half();
        let cells = (edge / max_dx - T::half()).ceil().max(T::zero());
        let dx = edge / (cells + T::half());
        let k = (half_extent / dx).ceil();
        let k = k
            .to_usize()
            .ok_or_else(|| Error::InvalidGrid("window-aligned grid too large".into()))?;
        let span = T::from_usize_lossy(k) * dx;
        Self::new(-span, span, 2 * k + 1)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn x_min(&self) -> T {
        self.x_min
    }

    #[inline]
    pub fn x_max(&self) -> T {
        self.x_max
    }

    #[inline]
    pub fn dx(&self) -> T {
        (self.x_max - self.x_min) / T::from_usize_lossy(self.n - 1)
    }

    #[inline]
    pub fn x(&self, i: usize) -> T {
        self.x_min + T::from_usize_lossy(i) * self.dx()
    }

    pub fn nodes(&self) -> impl Iterator<Item = T> + '_ {
        let dx = self.dx();
        (0..self.n).map(move |i| self.x_min + T::from_usize_lossy(i) * dx)
    }

    /// Whether `[lo, hi]` lies inside the grid.
    pub fn covers(&self, lo: T, hi: T) -> bool {
        lo >= self.x_min && hi <= self.x_max
    }

    /// Composite trapezoid weights.
    pub fn weights(&self) -> Vec<T> {
        trapezoid_weights(self.n, self.dx())
    }

    /// Cell index and fractional offset of `x` for linear interpolation, or
    /// `None` if `x` lies outside the grid.
    pub(crate) fn locate(&self, x: T) -> Option<(usize, T)> {
        let u = (x - self.x_min) / self.dx();
        let last = T::from_usize_lossy(self.n - 1);
        // tolerate rounding right at the edges
        let slack = T::lit(1e-9);
        if u < -slack || u > last + slack {
            return None;
        }
        let u = u.max(T::zero()).min(last);
        let i = u.floor().to_usize().unwrap_or(0).min(self.n - 2);
        Some((i, u - T::from_usize_lossy(i)))
    }
}

/// Rectangular `(q, p)` lattice; field values are stored with `q` as the row
/// index and `p` as the column index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseSpaceGrid<T = f64> {
    q_min: T,
    q_max: T,
    n_q: usize,
    p_min: T,
    p_max: T,
    n_p: usize,
}

impl<T: Real> PhaseSpaceGrid<T> {
    pub fn new(q_min: T, q_max: T, n_q: usize, p_min: T, p_max: T, n_p: usize) -> Result<Self> {
        check_axis("q", q_min, q_max, n_q)?;
        check_axis("p", p_min, p_max, n_p)?;
        Ok(Self {
            q_min,
            q_max,
            n_q,
            p_min,
            p_max,
            n_p,
        })
    }

    /// Grid whose `q` nodes sit on the half-node lattice of `x`, so that every
    /// reflected point `2q - x_k` is itself a node of `x` and the numerical
    /// transforms need no interpolation. The `q` axis is centred on the
    /// middle of `x`, reaches at most `q_limit` from it and has spacing at
    /// most `max_dq`.
    pub fn reflection_aligned(
        x: &PositionGrid<T>,
        q_limit: T,
        max_dq: T,
        p_min: T,
        p_max: T,
        n_p: usize,
    ) -> Result<Self> {
        positive("q_limit", q_limit)?;
        positive("max_dq", max_dq)?;
        let half = x.dx() * T::half();
        let stride = (max_dq / half).floor().max(T::one());
        let step = stride * half;
        let k = (q_limit / step)
            .floor()
            .to_usize()
            .ok_or_else(|| Error::InvalidGrid("q axis too large".into()))?;
        let centre = (x.x_min() + x.x_max()) * T::half();
        let reach = T::from_usize_lossy(k) * step;
        Self::new(centre - reach, centre + reach, 2 * k + 1, p_min, p_max, n_p)
    }

    pub fn q_min(&self) -> T {
        self.q_min
    }
    pub fn q_max(&self) -> T {
        self.q_max
    }
    pub fn p_min(&self) -> T {
        self.p_min
    }
    pub fn p_max(&self) -> T {
        self.p_max
    }
    pub fn n_q(&self) -> usize {
        self.n_q
    }
    pub fn n_p(&self) -> usize {
        self.n_p
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.n_q, self.n_p)
    }

    pub fn dq(&self) -> T {
        (self.q_max - self.q_min) / T::from_usize_lossy(self.n_q - 1)
    }

    pub fn dp(&self) -> T {
        (self.p_max - self.p_min) / T::from_usize_lossy(self.n_p - 1)
    }

    #[inline]
    pub fn q(&self, i: usize) -> T {
        self.q_min + T::from_usize_lossy(i) * self.dq()
    }

    #[inline]
    pub fn p(&self, j: usize) -> T {
        self.p_min + T::from_usize_lossy(j) * self.dp()
    }

    pub fn q_weights(&self) -> Vec<T> {
        trapezoid_weights(self.n_q, self.dq())
    }

    pub fn p_weights(&self) -> Vec<T> {
        trapezoid_weights(self.n_p, self.dp())
    }
}

pub(crate) fn trapezoid_weights<T: Real>(n: usize, h: T) -> Vec<T> {
    let mut w = vec![h; n];
    w[0] = h * T::half();
    w[n - 1] = h * T::half();
    w
}

fn check_axis<T: Real>(axis: &str, lo: T, hi: T, n: usize) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidGrid(format!("{axis} bounds must be finite")));
    }
    if hi <= lo {
        return Err(Error::InvalidGrid(format!(
            "{axis}_max ({hi}) must exceed {axis}_min ({lo})"
        )));
    }
    if n < MIN_POINTS {
        return Err(Error::InvalidGrid(format!(
            "{axis} axis needs at least {MIN_POINTS} samples, got {n}"
        )));
    }
    Ok(())
}

pub(crate) fn positive<T: Real>(name: &'static str, v: T) -> Result<()> {
    if v.is_finite() && v > T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: format!("must be positive and finite, got {v}"),
        })
    }
}
