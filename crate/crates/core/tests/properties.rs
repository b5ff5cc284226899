use std::path::Path;

use approx::assert_relative_eq;
use proptest::prelude::*;

use cdw_ring::random::{random_cases, CaseBounds};
use cdw_ring::rotating::DERIVATIVE_STEP;
use cdw_ring::steady::uniform_current;
use cdw_ring::{
    compute_averages, effective_alpha, equilibrium_amplitude, minimize_phase_energy_with,
    oracle_compare, solve_steady, DensityProfile, LabFrame, LandauParams, OracleSettings,
    RingConfig,
};

fn terms_strategy() -> impl Strategy<Value = Vec<(usize, f64, f64)>> {
    prop::collection::vec((1usize..=8, 0.01f64..0.08, 0.0f64..std::f64::consts::TAU), 1..=5)
}

fn ring() -> impl Strategy<Value = RingConfig> {
    (-2.0f64..2.0, 0.5f64..2.0, 0.5f64..3.0, 0.5f64..2.0).prop_map(|(flux, radius, n0, mass)| {
        RingConfig {
            radius,
            base_density: n0,
            mass,
            ..RingConfig::default()
        }
        .with_flux_quanta(flux)
    })
}

fn profile(config: &RingConfig, terms: &[(usize, f64, f64)], grid: usize) -> DensityProfile {
    let scaled: Vec<_> = terms
        .iter()
        .map(|&(k, a, p)| (k, a * config.base_density, p))
        .collect();
    DensityProfile::harmonics(config.base_density, &scaled, grid).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn harmonic_mean_never_exceeds_arithmetic(config in ring(), terms in terms_strategy()) {
        let p = profile(&config, &terms, 256);
        let avg = compute_averages(&config, &p).unwrap();
        prop_assert!(avg.inv_density_mean * config.base_density >= 1.0 - 1e-14);
        prop_assert!(p.mean().abs() <= 1e-12 * config.base_density);
    }

    #[test]
    fn modulation_suppresses_current_and_energy(
        config in ring(),
        terms in terms_strategy(),
        winding in -2i64..=2,
    ) {
        let p = profile(&config, &terms, 256);
        let modulated = solve_steady(&config, &p, winding).unwrap();
        let uniform = solve_steady(&config, &DensityProfile::uniform(256).unwrap(), winding).unwrap();
        prop_assert!(modulated.current.abs() <= uniform.current.abs() * (1.0 + 1e-14));
        prop_assert!(modulated.energy <= uniform.energy * (1.0 + 1e-14));
        prop_assert!(modulated.energy >= 0.0);
        assert_relative_eq!(uniform.current, uniform_current(&config, winding), max_relative = 1e-12, epsilon = 1e-14);
    }

    #[test]
    fn whole_flux_quantum_is_a_winding_shift(
        config in ring(),
        terms in terms_strategy(),
        winding in -2i64..=2,
    ) {
        let p = profile(&config, &terms, 128);
        let a = config.flux_quanta();
        let shifted = solve_steady(&config.with_flux_quanta(a + 1.0), &p, winding + 1).unwrap();
        let plain = solve_steady(&config, &p, winding).unwrap();
        assert_relative_eq!(shifted.current, plain.current, epsilon = 1e-12, max_relative = 1e-10);
        assert_relative_eq!(shifted.energy, plain.energy, epsilon = 1e-12, max_relative = 1e-10);
    }

    #[test]
    fn lab_energy_is_even_with_no_linear_term(
        config in ring(),
        terms in terms_strategy(),
        winding in -1i64..=1,
        omega in 0.0f64..0.5,
    ) {
        let p = profile(&config, &terms, 256);
        let frame = LabFrame::new(&config, &p, winding).unwrap();
        let scale = frame.energy(0.0).max(1.0);
        prop_assert!((frame.energy(omega) - frame.energy(-omega)).abs() <= 1e-12 * scale.max(frame.energy(omega)));
        prop_assert!(frame.derivative_at_zero(DERIVATIVE_STEP).abs() < 1e-8 * scale);
        prop_assert!((frame.energy(omega) - frame.energy_direct(omega)).abs() <= 1e-10 * scale.max(frame.energy(omega)));
        prop_assert!(frame.stiffness() >= -1e-10);
    }

    #[test]
    fn effective_coefficient_and_amplitude_grow_with_mismatch(
        alpha in -0.5f64..0.2,
        beta in 0.1f64..2.0,
        a1 in 0.0f64..0.5,
        a2 in 0.0f64..0.5,
    ) {
        let params = LandauParams::new(alpha, beta).unwrap();
        let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
        let base = RingConfig::default();
        let e_lo = effective_alpha(&base.with_flux_quanta(lo), &params, 0);
        let e_hi = effective_alpha(&base.with_flux_quanta(hi), &params, 0);
        prop_assert!(e_lo >= alpha - 1e-15);
        prop_assert!(e_hi >= e_lo);
        let n_lo = equilibrium_amplitude(e_lo, beta, 1.0).unwrap().value;
        let n_hi = equilibrium_amplitude(e_hi, beta, 1.0).unwrap().value;
        prop_assert!(n_hi >= n_lo);
    }

    #[test]
    fn profile_table_round_trips(terms in terms_strategy(), grid in 8usize..200) {
        let grid = grid.max(16);
        let p = profile(&RingConfig::default(), &terms, grid);
        let back = DensityProfile::parse_table(&p.to_table(), 1.0, Path::new("mem")).unwrap();
        prop_assert_eq!(back.grid_size(), p.grid_size());
        for (a, b) in p.samples().iter().zip(back.samples()) {
            prop_assert!((a - b).abs() <= 1e-15);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn oracle_is_insensitive_to_its_starting_point(
        terms in terms_strategy(),
        flux in -0.5f64..0.5,
        winding in -1i64..=2,
        seed in any::<u64>(),
    ) {
        let config = RingConfig::default().with_flux_quanta(flux);
        let p = profile(&config, &terms, 128);
        let exact = solve_steady(&config, &p, winding).unwrap();
        let mut state = seed;
        let start: Vec<f64> = (0..128)
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect();
        let result = minimize_phase_energy_with(&config, &p, winding, &OracleSettings::default(), Some(&start)).unwrap();
        assert_relative_eq!(result.current(&config), exact.current, epsilon = 1e-10, max_relative = 1e-8);
        assert_relative_eq!(result.energy, exact.energy, epsilon = 1e-10, max_relative = 1e-8);
    }
}

#[test]
fn oracle_agrees_on_seeded_cases() {
    let bounds = CaseBounds {
        max_epsilon: 0.6,
        grid_size: 512,
        windings: vec![-2, 0, 3],
        ..CaseBounds::default()
    };
    for case in random_cases(3, 20, &RingConfig::default(), &bounds).unwrap() {
        oracle_compare(&case.config, &case.profile, case.winding)
            .unwrap()
            .ensure(1e-8)
            .unwrap();
    }
}

#[test]
fn seeded_cases_are_deterministic() {
    let bounds = CaseBounds::default();
    let a = random_cases(42, 10, &RingConfig::default(), &bounds).unwrap();
    let b = random_cases(42, 10, &RingConfig::default(), &bounds).unwrap();
    let c = random_cases(43, 10, &RingConfig::default(), &bounds).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.terms, y.terms);
        assert_eq!(x.flux.to_bits(), y.flux.to_bits());
        assert_eq!(x.winding, y.winding);
    }
    assert_ne!(a[0].terms, c[0].terms);
}
