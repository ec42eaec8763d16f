use wigner_lab::*;

fn gaussian_setup(sigma: f64) -> (SampledState, PhaseSpaceGrid) {
    let xg = PositionGridF64::symmetric(9.0 * sigma, 1441).unwrap();
    let psi = sample_gaussian(&GaussianState::centered(sigma).unwrap(), &xg).unwrap();
    let grid = PhaseSpaceGrid::reflection_aligned(
        &xg,
        7.0 * sigma,
        sigma / 8.0,
        -3.5 / sigma,
        3.5 / sigma,
        57,
    )
    .unwrap();
    (psi, grid)
}

#[test]
fn numeric_gaussian_matches_closed_form() {
    for sigma in [0.5, 1.0, 2.0] {
        let (psi, grid) = gaussian_setup(sigma);
        let w = wigner_numeric(&psi, &grid).unwrap();
        let exact = wigner_of_gaussian(&GaussianState::centered(sigma).unwrap(), &grid);
        let err = w.max_abs_diff(&exact).unwrap();
        assert!(err < 1e-6, "sigma {sigma}: {err:e}");
        assert!((w.max_value() - 2.0).abs() < 1e-8);
        assert!(w.imag_residue() < 1e-10, "{:e}", w.imag_residue());
        assert_eq!(w.tail(), TailDecay::Rapid);
    }
}

#[test]
fn numeric_gaussian_normalization_and_moments() {
    for sigma in [0.5, 1.0, 2.0] {
        let (psi, grid) = gaussian_setup(sigma);
        let w = wigner_numeric(&psi, &grid).unwrap();
        let n = normalization(&w).unwrap();
        assert_eq!(n.tail, TailStatus::Converged);
        assert!((n.value - 1.0).abs() < 1e-8, "{}", n.value);
        let m = moments(&w).unwrap();
        assert!((m.var_q - sigma * sigma).abs() < 1e-8 * sigma * sigma);
        assert!((m.uncertainty_product - 0.25).abs() < 1e-8);
    }
}

#[test]
fn boosted_gaussian_is_translated_in_momentum() {
    let xg = PositionGridF64::symmetric(9.0, 2401).unwrap();
    let g = GaussianState::new(1.0, 0.5, 2.0).unwrap();
    let psi = sample_gaussian(&g, &xg).unwrap();
    let grid = PhaseSpaceGrid::reflection_aligned(&xg, 4.0, 0.1, -1.0, 5.0, 61).unwrap();
    let w = wigner_numeric(&psi, &grid).unwrap();
    let err = w.max_abs_diff(&wigner_of_gaussian(&g, &grid)).unwrap();
    assert!(err < 1e-6, "{err:e}");
}

fn window_setup(sigma: f64, a: f64) -> (SampledState, PhaseSpaceGrid) {
    let xg = PositionGridF64::window_aligned(a, 8.0 * sigma + 1.0, 5e-4).unwrap();
    let psi = sample_gaussian(&GaussianState::centered(sigma).unwrap(), &xg).unwrap();
    let limit = a / 2.0 - 2.0 * xg.dx();
    let grid = PhaseSpaceGrid::reflection_aligned(&xg, limit, a / 100.0, -5.0, 5.0, 101).unwrap();
    (apply_window_projector(&psi, a).unwrap(), grid)
}

#[test]
fn window_projected_numeric_matches_analytic() {
    for (sigma, a) in [(1.0, 3.0), (1.0, 1.0), (2.0, 3.0)] {
        let (projected, grid) = window_setup(sigma, a);
        let numeric = wigner_numeric(&projected, &grid).unwrap();
        let analytic =
            projected_wigner_analytic(&ProjectedGaussianParams::new(sigma, a).unwrap(), &grid);
        let err = numeric.max_abs_diff(&analytic).unwrap();
        assert!(err < 1e-6, "sigma {sigma}, a {a}: {err:e}");
        assert_eq!(numeric.tail(), TailDecay::SlowOscillatory);
    }
}

#[test]
fn projected_wigner_equals_two_at_origin() {
    for (sigma, a) in [(1.0, 3.0), (0.3, 0.2), (5.0, 40.0)] {
        let grid = PhaseSpaceGridF64::new(-1.0, 1.0, 21, -1.0, 1.0, 21).unwrap();
        let w = projected_wigner_analytic(&ProjectedGaussianParams::new(sigma, a).unwrap(), &grid);
        assert!((w.value(10, 10) - 2.0).abs() < 1e-10);
    }
}

#[test]
fn projected_wigner_spot_values() {
    let grid = PhaseSpaceGridF64::new(0.3, 1.2, 16, 2.5, 3.0, 16).unwrap();
    let w = projected_wigner_analytic(&ProjectedGaussianParams::new(1.0, 3.0).unwrap(), &grid);
    assert!((w.value(15, 15) - 0.144_709_533_417_251_2).abs() < 1e-12);
    assert!((w.value(0, 0) + 0.088_759_598_633_358_99).abs() < 1e-12);
}

#[test]
fn composed_projection_symbol_matches_analytic() {
    // P ρ P / <ψ|P|ψ> is the density operator of the projected state
    let a = 3.0;
    let xg = PositionGridF64::window_aligned(a, 9.0, 2e-3).unwrap();
    let psi = sample_gaussian(&GaussianState::centered(1.0).unwrap(), &xg).unwrap();
    let p = window_projector_kernel(a, &xg).unwrap();
    let rho = rank_one_kernel(&psi).unwrap();
    let prp = compose_kernels(&compose_kernels(&p, &rho).unwrap(), &p).unwrap();
    let grid = PhaseSpaceGrid::reflection_aligned(&xg, 1.4, 0.05, 1.5, 5.0, 36).unwrap();
    let sym = symbol_of_kernel(&prp, &grid).unwrap();
    let prob = ProjectedGaussianParams::new(1.0, a).unwrap().probability();
    let analytic = projected_wigner_analytic(&ProjectedGaussianParams::new(1.0, a).unwrap(), &grid);
    let mut err: f64 = 0.0;
    for ((i, j), &v) in sym.values().indexed_iter() {
        err = err.max((v / prob - analytic.value(i, j)).abs());
    }
    assert!(err < 1e-5, "{err:e}");
}

#[test]
fn diagonal_symbols_are_exact() {
    let xg = PositionGridF64::symmetric(4.0, 401).unwrap();
    let k = diagonal_observable_kernel(|x| x * x, &xg).unwrap();
    let grid = PhaseSpaceGrid::reflection_aligned(&xg, 3.0, 0.02, -2.0, 2.0, 17).unwrap();
    let sym = symbol_of_kernel(&k, &grid).unwrap();
    let direct = symbol_of_diagonal(|x| x * x, &grid).unwrap();
    assert!(sym.max_abs_diff(&direct).unwrap() < 1e-12);
    assert_eq!(sym.kind(), FieldKind::OperatorSymbol);
}

#[test]
fn clipped_state_is_rejected() {
    let xg = PositionGridF64::symmetric(2.0, 201).unwrap();
    let psi = SampledState::from_fn(xg, |x: f64| Complex::new((-x * x / 4.0).exp(), 0.0))
        .unwrap()
        .normalize()
        .unwrap();
    let grid = PhaseSpaceGridF64::new(-1.0, 1.0, 21, -1.0, 1.0, 21).unwrap();
    assert!(matches!(
        wigner_numeric(&psi, &grid),
        Err(Error::SupportExceeded(_))
    ));
}

#[test]
fn single_precision_gaussian_transform() {
    let xg = PositionGridF32::symmetric(9.0, 721).unwrap();
    let psi = sample_gaussian(&GaussianStateF32::centered(1.0).unwrap(), &xg).unwrap();
    let grid = PhaseSpaceGridF32::reflection_aligned(&xg, 3.0, 0.25, -2.0, 2.0, 17).unwrap();
    let w = wigner_numeric(&psi, &grid).unwrap();
    let exact = wigner_of_gaussian(&GaussianStateF32::centered(1.0).unwrap(), &grid);
    assert!(w.max_abs_diff(&exact).unwrap() < 1e-4);
}
