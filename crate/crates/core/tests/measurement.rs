use wigner_lab::*;

struct Pair {
    g1: SampledState,
    g2: SampledState,
}

fn pair() -> Pair {
    let xg = PositionGridF64::symmetric(12.0, 1201).unwrap();
    let g1 = sample_gaussian(&GaussianState::centered(1.0).unwrap(), &xg).unwrap();
    let g2 = sample_gaussian(&GaussianState::new(0.7, 0.3, 0.0).unwrap(), &xg).unwrap();
    Pair { g1, g2 }
}

#[test]
fn rank_n_projectors_are_orthonormal_idempotent_and_preserve_the_target() {
    let Pair { g1, g2 } = pair();
    for n in 0..=2 {
        let seeds = hermite_seeds(&g1, n).unwrap();
        let proj = build_rank_n_projector(&g2, &seeds, &g1).unwrap();
        assert_eq!(proj.n_extra(), n);
        assert!(
            proj.gram_defect() < 1e-8,
            "N = {n}: {:e}",
            proj.gram_defect()
        );

        let k = proj.kernel();
        let k2 = compose_kernels(&k, &k).unwrap();
        let defect = k2.max_deviation(&k).unwrap();
        assert!(defect < 1e-6, "N = {n}: {defect:e}");
        assert!((k.trace().re - (n + 1) as f64).abs() < 1e-8);

        let out = proj.apply(&g1).unwrap();
        assert!(out.fidelity(&g2).unwrap() >= 1.0 - 1e-6);
    }
}

#[test]
fn complements_are_orthogonal_to_both_gaussians() {
    let Pair { g1, g2 } = pair();
    let proj = build_rank_n_projector(&g2, &hermite_seeds(&g1, 2).unwrap(), &g1).unwrap();
    for m in &proj.members()[1..] {
        assert!(m.inner(&g1).unwrap().norm() < 1e-10);
        assert!(m.inner(&g2).unwrap().norm() < 1e-10);
    }
}

#[test]
fn degenerate_seed_is_reported_with_its_index() {
    let Pair { g1, g2 } = pair();
    let mut seeds = hermite_seeds(&g1, 1).unwrap();
    seeds.push(seeds[0].scaled(Complex::new(0.0, 2.0)));
    match build_rank_n_projector(&g2, &seeds, &g1) {
        Err(Error::DegenerateSeed { index, residual }) => {
            assert_eq!(index, 1);
            assert!(residual < 1e-10);
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn window_projection_creates_negativity_gaussian_projection_does_not() {
    let xg = PositionGridF64::window_aligned(3.0, 12.0, 1e-2).unwrap();
    let grid = PhaseSpaceGrid::reflection_aligned(&xg, 2.0, 0.05, -1.0, 5.0, 61).unwrap();
    let psi = sample_gaussian(&GaussianState::centered(1.0).unwrap(), &xg).unwrap();

    let windowed = apply_window_projector(&psi, 3.0).unwrap();
    assert!(windowed.has_jumps());
    let w = wigner_numeric(&windowed, &grid).unwrap();
    assert!(negativity_report(&w, tolerance::NEGATIVITY).has_negativity());

    let target = GaussianState::new(0.8, 0.2, 0.5).unwrap();
    let gaussian = apply_rank_one_gaussian(&target, &psi).unwrap();
    assert!(!gaussian.has_jumps());
    let w = wigner_numeric(&gaussian, &grid).unwrap();
    assert!(w.min_value() >= -1e-9);
}

#[test]
fn window_projection_probability_matches_erf() {
    let xg = PositionGridF64::window_aligned(3.0, 9.0, 1e-3).unwrap();
    let psi = sample_gaussian(&GaussianState::centered(1.0).unwrap(), &xg).unwrap();
    let p = window_projector_kernel(3.0, &xg).unwrap();
    let prob = expectation_hilbert(&psi, &p).unwrap();
    let exact = ProjectedGaussianParams::new(1.0, 3.0)
        .unwrap()
        .probability();
    assert!((prob - exact).abs() < 1e-6);
    assert!((exact - 0.866_385_597_462_283_9).abs() < 1e-14);
}

#[test]
fn projector_kernel_matches_window_masking() {
    let xg = PositionGridF64::window_aligned(2.0, 9.0, 1e-2).unwrap();
    let psi = sample_gaussian(&GaussianState::new(1.0, 0.4, 1.0).unwrap(), &xg).unwrap();
    let by_kernel = apply_projector(&window_projector_kernel(2.0, &xg).unwrap(), &psi).unwrap();
    let by_mask = apply_window_projector(&psi, 2.0).unwrap();
    assert!(by_kernel.fidelity(&by_mask).unwrap() > 1.0 - 1e-12);
}

#[test]
fn projection_onto_empty_region_fails() {
    let xg = PositionGridF64::symmetric(40.0, 4001).unwrap();
    let far = sample_gaussian(&GaussianState::new(0.5, 30.0, 0.0).unwrap(), &xg).unwrap();
    assert!(matches!(
        apply_window_projector(&far, 2.0),
        Err(Error::ZeroProbability { .. })
    ));
}
