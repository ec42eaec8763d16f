use proptest::prelude::*;
use wigner_lab::*;

proptest! {
    #[test]
    fn cerf_is_odd_and_conjugate_symmetric(x in -6.0f64..6.0, y in -11.0f64..11.0) {
        let z = Complex::new(x, y);
        let e = cerf(z).unwrap();
        let neg = cerf(-z).unwrap();
        let conj = cerf(z.conj()).unwrap();
        let scale = e.norm().max(1e-300);
        prop_assert!((neg + e).norm() <= 1e-14 * scale);
        prop_assert!((conj - e.conj()).norm() <= 1e-14 * scale);
    }

    #[test]
    fn scaled_real_part_symmetries(alpha in 0.0f64..8.0, beta in 0.0f64..60.0) {
        let g = scaled_erf_re(alpha, beta);
        prop_assert_eq!(scaled_erf_re(alpha, -beta), g);
        prop_assert_eq!(scaled_erf_re(-alpha, beta), -g);
        // |∫_0^α e^{-u²} cos(2βu) du| <= min(α, √π/2)
        prop_assert!(g.abs() <= (2.0 / std::f64::consts::PI.sqrt() * alpha).min(1.0) + 1e-15);
    }

    #[test]
    fn scaled_real_part_agrees_with_cerf(alpha in 0.0f64..5.0, beta in 0.0f64..5.0) {
        let direct = cerf(Complex::new(alpha, beta)).unwrap().re * (-beta * beta).exp();
        let g = scaled_erf_re(alpha, beta);
        prop_assert!((g - direct).abs() <= 1e-12 + 1e-10 * direct.abs());
    }

    #[test]
    fn window_projection_is_idempotent(a in 0.5f64..6.0, q0 in -1.0f64..1.0) {
        let xg = PositionGridF64::window_aligned(a, 10.0, 2e-2).unwrap();
        let psi = sample_gaussian(&GaussianState::new(1.0, q0, 0.7).unwrap(), &xg).unwrap();
        let once = apply_window_projector(&psi, a).unwrap();
        let twice = apply_window_projector(&once, a).unwrap();
        for (u, v) in once.amplitudes().iter().zip(twice.amplitudes()) {
            prop_assert!((u - v).norm() < 1e-12);
        }
    }

    #[test]
    fn window_kernel_composes_to_itself(a in 0.5f64..3.0) {
        let xg = PositionGridF64::symmetric(2.0, 41).unwrap();
        let p = window_projector_kernel(a, &xg).unwrap();
        let pp = compose_kernels(&p, &p).unwrap();
        prop_assert!(pp.max_deviation(&p).unwrap() < 1e-12);
        prop_assert!(pp.is_hermitian());
    }

    #[test]
    fn gaussian_wigner_is_point_symmetric(sigma in 0.3f64..3.0, q0 in -2.0f64..2.0, p0 in -2.0f64..2.0,
                                          u in 0.0f64..2.0, v in 0.0f64..2.0) {
        let g = GaussianState::new(sigma, q0, p0).unwrap();
        let grid = PhaseSpaceGridF64::new(q0 - u, q0 + u + 1e-9, 16, p0 - v, p0 + v + 1e-9, 16).unwrap();
        let w = wigner_of_gaussian(&g, &grid);
        let mirrored = (w.value(0, 0) - w.value(15, 15)).abs();
        prop_assert!(mirrored < 1e-8);
        prop_assert!(w.max_value() <= 2.0);
        prop_assert!(w.min_value() >= 0.0);
    }

    #[test]
    fn negativity_report_finds_the_minimum(values in proptest::collection::vec(-1.0f64..1.0, 256)) {
        let grid = PhaseSpaceGridF64::new(0.0, 1.0, 16, 0.0, 1.0, 16).unwrap();
        let arr = ndarray::Array2::from_shape_vec((16, 16), values.clone()).unwrap();
        let w = WignerField::from_values(grid, arr, FieldKind::StateWf).unwrap();
        let r = negativity_report(&w, 1e-12);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        prop_assert_eq!(r.min_value, min);
        let first = values.iter().position(|&v| v == min).unwrap();
        prop_assert_eq!(r.argmin_index, (first / 16, first % 16));
        prop_assert!(r.negative_mass >= 0.0);
    }

    #[test]
    fn window_symbol_is_proper_at_any_tolerance(a in 0.1f64..5.0, tol in 0.0f64..1.0) {
        let grid = PhaseSpaceGridF64::new(-3.0, 3.0, 31, -2.0, 2.0, 16).unwrap();
        let r = properness_report(&symbol_of_window(a, &grid).unwrap(), &[0.0, 1.0], tol).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Proper);
    }

    #[test]
    fn gaussian_projector_symbol_is_improper_below_one(sigma in 0.2f64..4.0, tol in 0.0f64..0.999) {
        let grid = PhaseSpaceGridF64::new(-2.0, 2.0, 21, -2.0, 2.0, 21).unwrap();
        let sym = symbol_of_rank_one_gaussian(&GaussianState::centered(sigma).unwrap(), &grid);
        let r = properness_report(&sym, &[0.0, 1.0], tol).unwrap();
        prop_assert_eq!(r.verdict, Verdict::Improper);
        prop_assert!((r.witness_value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_weights_integrate_constants(lo in -5.0f64..0.0, span in 0.1f64..10.0, n in 16usize..200) {
        let g = PositionGridF64::new(lo, lo + span, n).unwrap();
        let total: f64 = g.weights().iter().sum();
        prop_assert!((total - span).abs() < 1e-12 * span.max(1.0));
    }
}
