//! Complex error function and its overflow-free scaled real part.
//!
//! `cerf` covers `|Im z| <= 12`, where `erf` itself is still representable.
//! `scaled_erf_re` evaluates `Re[erf(α + iβ)] e^{-β²}` for arbitrary `β`, which
//! is the only combination the projected Wigner function needs: the growth of
//! `erf` along the imaginary direction is cancelled by the Gaussian momentum
//! envelope.
//!
//! Three evaluation routes are used:
//!
//! * Maclaurin series of `erf` for `|z| <= 3`;
//! * the Faddeeva function `w(z) = e^{-z²} erfc(-iz)` (Poppe–Wijers
//!   algorithm: power series near the origin, Gautschi's continued fraction
//!   with Taylor stepping elsewhere) for larger arguments;
//! * Gauss–Legendre quadrature of `(2/√π) ∫_0^α e^{-u²} cos(2βu) du`, which
//!   equals the scaled real part exactly, when `α(α+β)` is small. This avoids
//!   the cancellation of the Faddeeva route as `α → 0`.

use std::sync::OnceLock;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::Real;

/// A point of the complex plane.
pub type ComplexPoint<T = f64> = Complex<T>;

/// Largest `|Im z|` accepted by [`cerf`].
pub const CERF_MAX_IMAG: f64 = 12.0;

const SERIES_RADIUS: f64 = 3.0;
const QUADRATURE_LIMIT: f64 = 4.0;
const GL_ORDER: usize = 32;

/// `erf(z) = (2/√π) ∫_0^z e^{-t²} dt` for `|Im z| <= 12`.
///
/// Odd and conjugate-symmetric by construction: the value is computed in the
/// first quadrant and mapped.
pub fn cerf<T: Real>(z: ComplexPoint<T>) -> Result<ComplexPoint<T>> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "z",
            reason: "must be finite".into(),
        });
    }
    if z.im.abs() > T::lit(CERF_MAX_IMAG) {
        return Err(Error::OverflowRisk { im: z.im.as_f64() });
    }
    let re_neg = z.re < T::zero();
    let im_neg = z.im < T::zero();
    let e = erf_first_quadrant(z.re.abs(), z.im.abs());
    let e = if re_neg != im_neg { e.conj() } else { e };
    Ok(if re_neg { -e } else { e })
}

fn erf_first_quadrant<T: Real>(x: T, y: T) -> Complex<T> {
    let z = Complex::new(x, y);
    if z.norm() <= T::lit(SERIES_RADIUS) {
        return erf_series(z);
    }
    // erf(z) = 1 - e^{-z²} w(iz), and w(iz) = w(-y + ix) = conj(w(y + ix))
    let w = faddeeva_first_quadrant(y, x).conj();
    let z2 = z * z;
    let ez = Complex::from_polar((-z2.re).exp(), -z2.im);
    Complex::new(T::one(), T::zero()) - ez * w
}

fn erf_series<T: Real>(z: Complex<T>) -> Complex<T> {
    let two_over_sqrt_pi = T::FRAC_2_SQRT_PI();
    let mz2 = -(z * z);
    let mut term = z;
    let mut sum = z;
    for n in 1..200 {
        let nf = T::from_usize_lossy(n);
        term = term * mz2 / nf;
        let add = term / (T::two() * nf + T::one());
        sum += add;
        if add.norm() <= T::epsilon() * T::lit(0.25) * sum.norm() {
            break;
        }
    }
    sum * two_over_sqrt_pi
}

/// Faddeeva function `w(x + iy)` for `x, y >= 0`.
///
/// Algorithm of Poppe & Wijers (ACM TOMS 680), about 14 significant digits in
/// double precision.
pub(crate) fn faddeeva_first_quadrant<T: Real>(x: T, y: T) -> Complex<T> {
    let factor = T::FRAC_2_SQRT_PI();
    let xs = x / T::lit(6.3);
    let ys = y / T::lit(4.4);
    let mut qrho = xs * xs + ys * ys;
    let xquad = x * x - y * y;
    let yquad = T::two() * x * y;

    if qrho < T::lit(0.085264) {
        // power series for e^{-z²} (1 + (2/√π) i z Σ z^{2n}/(n!(2n+1)))
        qrho = (T::one() - T::lit(0.85) * ys) * qrho.sqrt();
        let n = (T::lit(6.0) + T::lit(72.0) * qrho)
            .round()
            .to_usize()
            .unwrap_or(6);
        let mut j = 2 * n + 1;
        let mut xsum = T::from_usize_lossy(j).recip();
        let mut ysum = T::zero();
        for i in (1..=n).rev() {
            j -= 2;
            let fi = T::from_usize_lossy(i);
            let xaux = (xsum * xquad - ysum * yquad) / fi;
            ysum = (xsum * yquad + ysum * xquad) / fi;
            xsum = xaux + T::from_usize_lossy(j).recip();
        }
        let u1 = T::one() - factor * (xsum * y + ysum * x);
        let v1 = factor * (xsum * x - ysum * y);
        let daux = (-xquad).exp();
        let u2 = daux * yquad.cos();
        let v2 = -daux * yquad.sin();
        return Complex::new(u1 * u2 - v1 * v2, u1 * v2 + v1 * u2);
    }

    let (h, kapn, nu) = if qrho > T::one() {
        let r = qrho.sqrt();
        let nu = (T::lit(3.0) + T::lit(1442.0) / (T::lit(26.0) * r + T::lit(77.0)))
            .floor()
            .to_usize()
            .unwrap_or(3);
        (T::zero(), 0usize, nu)
    } else {
        let r = (T::one() - ys) * (T::one() - qrho).sqrt();
        let kapn = (T::lit(7.0) + T::lit(34.0) * r)
            .round()
            .to_usize()
            .unwrap_or(7);
        let nu = (T::lit(16.0) + T::lit(26.0) * r)
            .round()
            .to_usize()
            .unwrap_or(16);
        (T::lit(1.88) * r, kapn, nu)
    };
    let stepping = h > T::zero();
    let h2 = T::two() * h;
    let mut qlambda = if stepping {
        h2.powi(kapn as i32)
    } else {
        T::zero()
    };
    let (mut rx, mut ry, mut sx, mut sy) = (T::zero(), T::zero(), T::zero(), T::zero());
    for n in (0..=nu).rev() {
        let np1 = T::from_usize_lossy(n + 1);
        let tx = y + h + np1 * rx;
        let ty = x - np1 * ry;
        let c = T::half() / (tx * tx + ty * ty);
        rx = c * tx;
        ry = c * ty;
        if stepping && n <= kapn {
            let tx = qlambda + sx;
            sx = rx * tx - ry * sy;
            sy = ry * tx + rx * sy;
            qlambda /= h2;
        }
    }
    let (mut u, v) = if stepping {
        (factor * sx, factor * sy)
    } else {
        (factor * rx, factor * ry)
    };
    if y == T::zero() {
        u = (-x * x).exp();
    }
    Complex::new(u, v)
}

/// `g(α, β) = Re[erf(α + iβ)] · e^{-β²}`, free of intermediate overflow.
///
/// Even in `β`, odd in `α`, `g(α, 0) = erf(α)` and `g(0, β) = 0`. Returns NaN
/// for non-finite input.
pub fn scaled_erf_re<T: Real>(alpha: T, beta: T) -> T {
    if !(alpha.is_finite() && beta.is_finite()) {
        return T::nan();
    }
    let beta = beta.abs();
    if alpha < T::zero() {
        return -scaled_erf_re(-alpha, beta);
    }
    if alpha == T::zero() {
        return T::zero();
    }
    if alpha * (alpha + beta) <= T::lit(QUADRATURE_LIMIT) {
        return cosine_gauss_integral(alpha, beta);
    }
    // g = e^{-β²} - e^{-α²} Re[e^{2iαβ} w(β + iα)]
    let w = faddeeva_first_quadrant(beta, alpha);
    let theta = T::two() * alpha * beta;
    let rot = theta.cos() * w.re - theta.sin() * w.im;
    (-beta * beta).exp() - (-alpha * alpha).exp() * rot
}

/// `(2/√π) ∫_0^α e^{-u²} cos(2βu) du` by 32-point Gauss–Legendre.
fn cosine_gauss_integral<T: Real>(alpha: T, beta: T) -> T {
    let half = alpha * T::half();
    let sum: T = gauss_legendre()
        .iter()
        .map(|&(node, weight)| {
            let u = half * (T::lit(node) + T::one());
            T::lit(weight) * (-u * u).exp() * (T::two() * beta * u).cos()
        })
        .sum();
    T::FRAC_2_SQRT_PI() * half * sum
}

/// Nodes and weights on `[-1, 1]`, computed once by Newton iteration on the
/// Legendre polynomial.
fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut rule = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
        }
        rule
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = gauss_legendre();
        let total: f64 = rule.iter().map(|&(_, w)| w).sum();
        assert!((total - 2.0).abs() < 1e-14);
        let x62: f64 = rule.iter().map(|&(x, w)| w * x.powi(62)).sum();
        assert!((x62 - 2.0 / 63.0).abs() < 1e-14);
    }

    #[test]
    fn cerf_trivial_points() {
        let z = cerf(Complex::new(0.0, 0.0)).unwrap();
        assert_eq!(z, Complex::new(0.0, 0.0));
        let e1 = cerf(Complex::new(1.0_f64, 0.0)).unwrap();
        assert!((e1.re - 0.842_700_792_9).abs() < 1e-9);
        assert_eq!(e1.im, 0.0);
    }

    #[test]
    fn cerf_overflow_guard() {
        assert!(matches!(
            cerf(Complex::new(0.0, 12.5)),
            Err(Error::OverflowRisk { .. })
        ));
        assert!(cerf(Complex::new(0.0, -12.0)).is_ok());
        assert!(cerf(Complex::new(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn scaled_trivial_points() {
        assert_eq!(scaled_erf_re(0.0, 3.7), 0.0);
        assert!((scaled_erf_re(1.0_f64, 0.0) - 0.842_700_792_949_714_9).abs() < 1e-15);
        assert!(scaled_erf_re(f64::INFINITY, 1.0).is_nan());
    }

    #[test]
    fn faddeeva_on_real_axis_has_gaussian_real_part() {
        for x in [0.5_f64, 3.0, 7.0] {
            let w = faddeeva_first_quadrant(x, 0.0);
            assert!((w.re - (-x * x).exp()).abs() < 1e-15);
        }
        let w0 = faddeeva_first_quadrant(0.0_f64, 0.0);
        assert!((w0.re - 1.0).abs() < 1e-15 && w0.im.abs() < 1e-15);
    }

    #[test]
    fn single_precision_runs_the_same_paths() {
        let e = cerf(Complex::new(1.0f32, 0.0)).unwrap();
        assert!((e.re - 0.842_700_8).abs() < 1e-6);
        let g = scaled_erf_re(1.0606601f32, 4.2426407);
        assert!((g - 0.027_100_826).abs() < 1e-6);
    }
}
