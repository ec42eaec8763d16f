use ndarray::Array2;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::grid::{positive, PositionGrid};
use crate::state::{lerp, SampledState};
use crate::tolerance;
use crate::Real;

/// Internal storage of an operator kernel `K(x, x') = ⟨x|A|x'⟩`.
///
/// Every variant represents the same mathematical object, an `n × n` matrix
/// on the position grid; the structured forms exist so that multiplication
/// operators and low-rank projectors never have to be materialized.
#[derive(Debug, Clone, PartialEq)]
enum Repr<T> {
    /// Multiplication operator `ψ(x) ↦ d(x) ψ(x)`. As a matrix this is the
    /// discrete delta `d_i δ_ij / dx`.
    Diagonal(Vec<Complex<T>>),
    /// `Σ_k |u_k⟩⟨v_k|`, i.e. `K(x, x') = Σ_k u_k(x) conj(v_k(x'))`.
    Factored {
        left: Vec<Vec<Complex<T>>>,
        right: Vec<Vec<Complex<T>>>,
    },
    Dense(Array2<Complex<T>>),
}

/// Left and right factor vectors of a low-rank kernel.
pub(crate) type Factors<'a, T> = (&'a [Vec<Complex<T>>], &'a [Vec<Complex<T>>]);

/// Position-space kernel of an observable or projector.
///
/// Composition and application use the trapezoid rule on the grid, so that
/// `apply(compose(A, B), ψ) == apply(A, apply(B, ψ))` up to rounding.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorKernel<T = f64> {
    grid: PositionGrid<T>,
    repr: Repr<T>,
    hermitian: bool,
}

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

fn real<T: Real>(v: T) -> Complex<T> {
    Complex::new(v, T::zero())
}

/// `θ(a/2 - |x|)` with `θ(0) = 1`; nodes within rounding of the edge are kept.
pub(crate) fn window_indicator<T: Real>(x: T, a: T) -> bool {
    let edge = a * T::half();
    x.abs() - edge <= edge * T::lit(1e-12)
}

/// Weighted inner product `Σ w_j conj(a_j) b_j`.
fn dot<T: Real>(w: &[T], a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    w.iter()
        .zip(a.iter().zip(b))
        .map(|(&w, (x, y))| x.conj() * y * w)
        .sum()
}

impl<T: Real> OperatorKernel<T> {
    fn with_repr(grid: PositionGrid<T>, repr: Repr<T>) -> Self {
        let mut k = Self {
            grid,
            repr,
            hermitian: false,
        };
        k.hermitian = k.hermitian_defect() <= T::lit(tolerance::EXACT);
        k
    }

    pub fn identity(grid: PositionGrid<T>) -> Self {
        Self {
            grid,
            repr: Repr::Diagonal(vec![real(T::one()); grid.len()]),
            hermitian: true,
        }
    }

    /// Kernel from an explicit matrix of values `K(x_i, x_j)`.
    pub fn from_dense(grid: PositionGrid<T>, kernel: Array2<Complex<T>>) -> Result<Self> {
        if kernel.dim() != (grid.len(), grid.len()) {
            return Err(Error::GridMismatch);
        }
        if let Some(((i, _), _)) = kernel
            .indexed_iter()
            .find(|(_, z)| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(Error::NonFiniteSample {
                x: grid.x(i).as_f64(),
            });
        }
        Ok(Self::with_repr(grid, Repr::Dense(kernel)))
    }

    /// `Σ_k |members_k⟩⟨members_k|`.
    pub(crate) fn from_members(grid: PositionGrid<T>, members: &[SampledState<T>]) -> Self {
        let vecs: Vec<_> = members.iter().map(|m| m.amplitudes().to_vec()).collect();
        Self {
            grid,
            repr: Repr::Factored {
                left: vecs.clone(),
                right: vecs,
            },
            hermitian: true,
        }
    }

    pub fn grid(&self) -> &PositionGrid<T> {
        &self.grid
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Multiplication-operator values `d(x_i)` when the kernel is diagonal.
    pub fn diagonal(&self) -> Option<&[Complex<T>]> {
        match &self.repr {
            Repr::Diagonal(d) => Some(d),
            _ => None,
        }
    }

    /// Number of outer-product terms when stored in factored form.
    pub fn rank(&self) -> Option<usize> {
        match &self.repr {
            Repr::Factored { left, .. } => Some(left.len()),
            _ => None,
        }
    }

    /// Matrix element `K(x_i, x_j)`; diagonal kernels carry the discrete
    /// delta weight `1/dx`.
    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        match &self.repr {
            Repr::Diagonal(d) => {
                if i == j {
                    d[i] / self.grid.dx()
                } else {
                    zero()
                }
            }
            Repr::Factored { left, right } => left
                .iter()
                .zip(right)
                .map(|(u, v)| u[i] * v[j].conj())
                .sum(),
            Repr::Dense(m) => m[(i, j)],
        }
    }

    /// `K(x_i, x)` with linear interpolation in the second argument; zero
    /// outside the grid.
    pub(crate) fn row_value(&self, i: usize, x: T) -> Complex<T> {
        let Some((j, t)) = self.grid.locate(x) else {
            return zero();
        };
        match &self.repr {
            Repr::Diagonal(_) => lerp(self.entry(i, j), self.entry(i, j + 1), t),
            Repr::Factored { left, right } => left
                .iter()
                .zip(right)
                .map(|(u, v)| u[i] * lerp(v[j], v[j + 1], t).conj())
                .sum(),
            Repr::Dense(m) => lerp(m[(i, j)], m[(i, j + 1)], t),
        }
    }

    pub(crate) fn factors(&self) -> Option<Factors<'_, T>> {
        match &self.repr {
            Repr::Factored { left, right } => Some((left, right)),
            _ => None,
        }
    }

    pub fn to_dense(&self) -> Array2<Complex<T>> {
        let n = self.grid.len();
        Array2::from_shape_fn((n, n), |(i, j)| self.entry(i, j))
    }

    /// `max |K|` over all matrix elements.
    pub fn max_entry(&self) -> T {
        let n = self.grid.len();
        match &self.repr {
            Repr::Diagonal(d) => {
                d.iter().map(|z| z.norm()).fold(T::zero(), T::max) / self.grid.dx()
            }
            Repr::Dense(m) => m.iter().map(|z| z.norm()).fold(T::zero(), T::max),
            Repr::Factored { .. } => (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| self.entry(i, j).norm())
                .fold(T::zero(), T::max),
        }
    }

    /// `max |K(x,x') - conj(K(x',x))| / max |K|`.
    pub fn hermitian_defect(&self) -> T {
        match &self.repr {
            Repr::Diagonal(d) => {
                let peak = d.iter().map(|z| z.norm()).fold(T::zero(), T::max);
                if peak == T::zero() {
                    return T::zero();
                }
                d.iter().map(|z| z.im.abs()).fold(T::zero(), T::max) / peak
            }
            Repr::Factored { left, right } if left == right => T::zero(),
            _ => {
                let n = self.grid.len();
                let mut defect = T::zero();
                let mut peak = T::zero();
                for i in 0..n {
                    for j in i..n {
                        let a = self.entry(i, j);
                        let b = self.entry(j, i);
                        defect = defect.max((a - b.conj()).norm());
                        peak = peak.max(a.norm()).max(b.norm());
                    }
                }
                if peak == T::zero() {
                    T::zero()
                } else {
                    defect / peak
                }
            }
        }
    }

    /// `(Kψ)(x) = ∫ K(x, x') ψ(x') dx'`.
    pub fn apply(&self, psi: &SampledState<T>) -> Result<SampledState<T>> {
        if psi.grid() != &self.grid {
            return Err(Error::GridMismatch);
        }
        let amps = self.apply_vec(psi.amplitudes());
        SampledState::from_amplitudes(self.grid, amps)
    }

    fn apply_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let w = self.grid.weights();
        match &self.repr {
            Repr::Diagonal(d) => d.iter().zip(v).map(|(a, b)| a * b).collect(),
            Repr::Factored { left, right } => {
                let mut out = vec![zero(); v.len()];
                for (u, r) in left.iter().zip(right) {
                    let c = dot(&w, r, v);
                    for (o, x) in out.iter_mut().zip(u) {
                        *o += x * c;
                    }
                }
                out
            }
            Repr::Dense(m) => m
                .rows()
                .into_iter()
                .map(|row| {
                    row.iter()
                        .zip(v.iter().zip(&w))
                        .map(|(k, (x, &wj))| k * x * wj)
                        .sum()
                })
                .collect(),
        }
    }

    /// `∫ K(x, x) dx`. For multiplication operators this is the discrete
    /// delta sum `Σ w_i d_i / dx`.
    pub fn trace(&self) -> Complex<T> {
        let w = self.grid.weights();
        (0..self.grid.len()).map(|i| self.entry(i, i) * w[i]).sum()
    }

    /// `max |K - L|` over matrix elements.
    pub fn max_deviation(&self, other: &Self) -> Result<T> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        if let (Repr::Diagonal(a), Repr::Diagonal(b)) = (&self.repr, &other.repr) {
            return Ok(a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).norm())
                .fold(T::zero(), T::max)
                / self.grid.dx());
        }
        let n = self.grid.len();
        let mut dev = T::zero();
        for i in 0..n {
            for j in 0..n {
                dev = dev.max((self.entry(i, j) - other.entry(i, j)).norm());
            }
        }
        Ok(dev)
    }
}

/// Position window `P = ∫_{-a/2}^{a/2} |x⟩⟨x| dx` as a multiplication operator.
pub fn window_projector_kernel<T: Real>(a: T, grid: &PositionGrid<T>) -> Result<OperatorKernel<T>> {
    positive("a", a)?;
    let edge = a * T::half();
    if !grid.covers(-edge, edge) {
        return Err(Error::GridTooNarrow {
            need_min: (-edge).as_f64(),
            need_max: edge.as_f64(),
            grid_min: grid.x_min().as_f64(),
            grid_max: grid.x_max().as_f64(),
        });
    }
    let d = grid
        .nodes()
        .map(|x| {
            real(if window_indicator(x, a) {
                T::one()
            } else {
                T::zero()
            })
        })
        .collect();
    Ok(OperatorKernel {
        grid: *grid,
        repr: Repr::Diagonal(d),
        hermitian: true,
    })
}

/// `A = ∫ |x⟩ f(x) ⟨x| dx`.
pub fn diagonal_observable_kernel<T: Real>(
    f: impl Fn(T) -> T,
    grid: &PositionGrid<T>,
) -> Result<OperatorKernel<T>> {
    let mut d = Vec::with_capacity(grid.len());
    for x in grid.nodes() {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFiniteSample { x: x.as_f64() });
        }
        d.push(real(v));
    }
    Ok(OperatorKernel {
        grid: *grid,
        repr: Repr::Diagonal(d),
        hermitian: true,
    })
}

/// `|φ⟩⟨φ|` for a normalized state.
pub fn rank_one_kernel<T: Real>(phi: &SampledState<T>) -> Result<OperatorKernel<T>> {
    phi.require_normalized()?;
    Ok(OperatorKernel::from_members(
        *phi.grid(),
        std::slice::from_ref(phi),
    ))
}

/// Operator product `A ∘ B`, `K_AB(x, x') = ∫ A(x, y) B(y, x') dy`.
pub fn compose_kernels<T: Real>(
    a: &OperatorKernel<T>,
    b: &OperatorKernel<T>,
) -> Result<OperatorKernel<T>> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let grid = a.grid;
    let w = grid.weights();
    let repr = match (&a.repr, &b.repr) {
        (Repr::Diagonal(da), Repr::Diagonal(db)) => {
            Repr::Diagonal(da.iter().zip(db).map(|(x, y)| x * y).collect())
        }
        (Repr::Diagonal(d), Repr::Factored { left, right }) => Repr::Factored {
            left: left
                .iter()
                .map(|u| u.iter().zip(d).map(|(x, s)| x * s).collect())
                .collect(),
            right: right.clone(),
        },
        (Repr::Factored { left, right }, Repr::Diagonal(d)) => Repr::Factored {
            left: left.clone(),
            right: right
                .iter()
                .map(|v| v.iter().zip(d).map(|(x, s)| x * s.conj()).collect())
                .collect(),
        },
        (
            Repr::Factored {
                left: l1,
                right: r1,
            },
            Repr::Factored {
                left: l2,
                right: r2,
            },
        ) => {
            // (Σ_k u_k v_k†)(Σ_l u'_l v'_l†) = Σ_l (Σ_k u_k ⟨v_k|u'_l⟩) v'_l†
            let n = grid.len();
            let left = l2
                .iter()
                .map(|ul| {
                    let mut acc = vec![zero(); n];
                    for (uk, vk) in l1.iter().zip(r1) {
                        let c = dot(&w, vk, ul);
                        for (o, x) in acc.iter_mut().zip(uk) {
                            *o += x * c;
                        }
                    }
                    acc
                })
                .collect();
            Repr::Factored {
                left,
                right: r2.clone(),
            }
        }
        (Repr::Diagonal(d), Repr::Dense(m)) => {
            let mut out = m.clone();
            for (mut row, s) in out.rows_mut().into_iter().zip(d) {
                row.mapv_inplace(|z| z * s);
            }
            Repr::Dense(out)
        }
        (Repr::Dense(m), Repr::Diagonal(d)) => {
            let mut out = m.clone();
            for (mut col, s) in out.columns_mut().into_iter().zip(d) {
                col.mapv_inplace(|z| z * s);
            }
            Repr::Dense(out)
        }
        (Repr::Dense(_), Repr::Factored { left, right }) => Repr::Factored {
            left: left.iter().map(|u| a.apply_vec(u)).collect(),
            right: right.clone(),
        },
        (Repr::Factored { left, right }, Repr::Dense(m)) => {
            // ⟨v| M  =  ⟨v'|  with  v'_j = Σ_i w_i v_i conj(M_ij)
            let right = right
                .iter()
                .map(|v| {
                    (0..grid.len())
                        .map(|j| {
                            m.column(j)
                                .iter()
                                .zip(v.iter().zip(&w))
                                .map(|(mij, (vi, &wi))| vi * mij.conj() * wi)
                                .sum()
                        })
                        .collect()
                })
                .collect();
            Repr::Factored {
                left: left.clone(),
                right,
            }
        }
        (Repr::Dense(ma), Repr::Dense(mb)) => {
            let n = grid.len();
            let mut scaled = mb.clone();
            for (mut row, &wj) in scaled.rows_mut().into_iter().zip(&w) {
                row.mapv_inplace(|z| z * wj);
            }
            let mut out = Array2::from_elem((n, n), zero());
            for i in 0..n {
                for j in 0..n {
                    let aij = ma[(i, j)];
                    if aij == zero() {
                        continue;
                    }
                    for (o, bjk) in out.row_mut(i).iter_mut().zip(scaled.row(j)) {
                        *o += aij * bjk;
                    }
                }
            }
            Repr::Dense(out)
        }
    };
    Ok(OperatorKernel::with_repr(grid, repr))
}
