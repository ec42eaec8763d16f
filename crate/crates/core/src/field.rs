use ndarray::Array2;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::PhaseSpaceGrid;
use crate::Real;

/// Measure under which state Wigner functions integrate to one.
pub const NORMALIZATION_CONVENTION: &str = "dq·dp/(2π)";

/// What a phase-space field represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    /// Wigner function of a state.
    StateWf,
    /// Weyl symbol of an operator.
    OperatorSymbol,
}

impl FieldKind {
    pub fn label(self) -> &'static str {
        match self {
            FieldKind::StateWf => "state-WF",
            FieldKind::OperatorSymbol => "operator-symbol",
        }
    }
}

/// Large-`p` behaviour of a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailDecay {
    /// Gaussian or faster; grid integrals converge.
    Rapid,
    /// Oscillatory `1/p` decay of window-projected states; grid integrals
    /// are only conditionally convergent.
    SlowOscillatory,
}

/// Real field on a [`PhaseSpaceGrid`], `values[(i, j)] = W(q_i, p_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WignerField<T = f64> {
    grid: PhaseSpaceGrid<T>,
    values: Array2<T>,
    kind: FieldKind,
    tail: TailDecay,
    classically_truncated: bool,
    imag_residue: T,
}

impl<T: Real> WignerField<T> {
    pub fn from_values(
        grid: PhaseSpaceGrid<T>,
        values: Array2<T>,
        kind: FieldKind,
    ) -> Result<Self> {
        if values.dim() != grid.shape() {
            return Err(Error::GridMismatch);
        }
        if let Some(((i, _), _)) = values.indexed_iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFiniteSample {
                x: grid.q(i).as_f64(),
            });
        }
        Ok(Self::new(grid, values, kind))
    }

    pub(crate) fn new(grid: PhaseSpaceGrid<T>, values: Array2<T>, kind: FieldKind) -> Self {
        debug_assert_eq!(values.dim(), grid.shape());
        Self {
            grid,
            values,
            kind,
            tail: TailDecay::Rapid,
            classically_truncated: false,
            imag_residue: T::zero(),
        }
    }

    pub(crate) fn with_tail(mut self, tail: TailDecay) -> Self {
        self.tail = tail;
        self
    }

    pub(crate) fn with_imag_residue(mut self, r: T) -> Self {
        self.imag_residue = r;
        self
    }

    pub(crate) fn mark_classically_truncated(mut self) -> Self {
        self.classically_truncated = true;
        self
    }

    pub fn grid(&self) -> &PhaseSpaceGrid<T> {
        &self.grid
    }

    pub fn values(&self) -> &Array2<T> {
        &self.values
    }

    pub fn value(&self, i: usize, j: usize) -> T {
        self.values[(i, j)]
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn tail(&self) -> TailDecay {
        self.tail
    }

    /// Set on the output of the naive phase-space truncation: such a field is
    /// not the Wigner function of any quantum state.
    pub fn is_classically_truncated(&self) -> bool {
        self.classically_truncated
    }

    /// Largest imaginary part discarded by a numerical transform.
    pub fn imag_residue(&self) -> T {
        self.imag_residue
    }

    pub fn normalization_convention(&self) -> &'static str {
        NORMALIZATION_CONVENTION
    }

    pub fn min_value(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max_value(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    /// `max |W - V|` over the grid.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max))
    }

    pub(crate) fn require_kind(&self, kind: FieldKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::WrongFieldKind {
                expected: kind.label(),
                found: self.kind.label(),
            })
        }
    }
}

impl<T: Real> WignerField<T> {
    /// `∫∫ W dq dp/(2π)` by the trapezoid rule on the grid.
    pub fn phase_space_integral(&self) -> T {
        let wq = self.grid.q_weights();
        let wp = self.grid.p_weights();
        let sum: T = self
            .values
            .rows()
            .into_iter()
            .zip(&wq)
            .map(|(row, &a)| a * row.iter().zip(&wp).map(|(&v, &b)| v * b).sum::<T>())
            .sum();
        sum / T::TAU()
    }
}
