use jc_core::*;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn grid(t_end: f64, points: usize) -> Vec<f64> {
    (0..points).map(|k| t_end * k as f64 / (points - 1) as f64).collect()
}

fn density_rows(states: &[AtomDensityMatrix]) -> Vec<Vec<f64>> {
    states
        .iter()
        .map(|r| vec![r.rho_ee, r.rho_gg, r.rho_eg.re, r.rho_eg.im])
        .collect()
}

fn closed_form_rows(
    atom: &AtomDensityMatrix,
    field: &PhotonDistribution,
    profile: &CouplingProfile,
    times: &[f64],
) -> Vec<AtomDensityMatrix> {
    times
        .iter()
        .map(|&t| evolve_mixed(atom, field, profile, t).unwrap())
        .collect()
}

#[test]
fn coherent_amplitudes_match_oracle() {
    let atom = AtomState::excited();
    let field = PhotonDistribution::coherent(c(5.0, 0.0), 1e-12).unwrap();
    let profile = CouplingProfile::constant(1.0).unwrap();
    let exact = evolve_pure(&atom, &field, &profile, 1.7).unwrap();
    let oracle = oracle_evolve_pure(&atom, &field, &profile, &[0.0, 1.7], &IntegratorConfig::default()).unwrap();
    let last = &oracle[1];
    assert_eq!(last.amps_e.len(), exact.amps_e.len());
    for (x, y) in exact
        .amps_e
        .iter()
        .chain(&exact.amps_g)
        .zip(last.amps_e.iter().chain(&last.amps_g))
    {
        assert!((x - y).norm() < 1e-8, "{x} vs {y}");
    }
}

#[test]
fn sigma_x_thermal_density_matches_oracle() {
    let atom = AtomState::plus_x().density();
    let field = PhotonDistribution::thermal(0.5, 1e-12).unwrap();
    let profile = CouplingProfile::sinusoidal(1.0, 1.0, 1).unwrap();
    let exact = evolve_mixed(&atom, &field, &profile, 1.2).unwrap();
    let oracle = oracle_evolve_mixed(&atom, &field, &profile, &[0.0, 1.2], &IntegratorConfig::default()).unwrap();
    let o = oracle[1];
    assert!((exact.rho_ee - o.rho_ee).abs() < 1e-8);
    assert!((exact.rho_gg - o.rho_gg).abs() < 1e-8);
    assert!((exact.rho_eg - o.rho_eg).norm() < 1e-8);
}

#[test]
fn bloch_components_match_series_and_oracle() {
    let atom = AtomState::plus_x().density();
    let field = PhotonDistribution::thermal(0.5, 1e-12).unwrap();
    let profile = CouplingProfile::sinusoidal(1.0, 1.0, 1).unwrap();
    let t = 1.0;
    let b = bloch_vector(&evolve_mixed(&atom, &field, &profile, t).unwrap());

    // Direct thermal series for the sigma_x eigenstate.
    let area = 2.0 * (0.5f64).sin().powi(2);
    let (mut rx, mut rz) = (0.0, 0.0);
    for (n, p) in field.weights().iter().enumerate() {
        let up = area * ((n + 1) as f64).sqrt();
        let down = area * (n as f64).sqrt();
        rx += p * up.cos() * down.cos();
        rz += 0.5 * p * ((up.cos().powi(2) + down.sin().powi(2)) - (up.sin().powi(2) + down.cos().powi(2)));
    }
    assert!((b.r_x - rx).abs() < 1e-12);
    assert!((b.r_z - rz).abs() < 1e-12);
    assert!(b.r_y.abs() < 1e-12);

    let o = oracle_evolve_mixed(&atom, &field, &profile, &[0.0, t], &IntegratorConfig::default()).unwrap();
    let ob = bloch_vector(&o[1]);
    for (x, y) in [(b.r_x, ob.r_x), (b.r_y, ob.r_y), (b.r_z, ob.r_z)] {
        assert!((x - y).abs() < 1e-8);
    }
}

#[test]
fn coherent_inversion_curve_matches_oracle() {
    let atom = AtomState::excited();
    let field = PhotonDistribution::coherent(c(5.0, 0.0), 1e-12).unwrap();
    let profile = CouplingProfile::constant(1.0).unwrap();
    let times = grid(50.0, 501);
    let oracle = oracle_evolve_pure(&atom, &field, &profile, &times, &IntegratorConfig::default()).unwrap();
    let a: Vec<Vec<f64>> = times
        .iter()
        .map(|&t| vec![inversion_closed_form(&field, &profile, t).unwrap()])
        .collect();
    let b: Vec<Vec<f64>> = oracle
        .iter()
        .map(|s| vec![population_inversion(&s.reduced())])
        .collect();
    let report = compare_trajectories(&a, &b, &times).unwrap();
    assert!(report.max_abs < 1e-8, "{report:?}");
}

#[test]
fn oracle_shows_linear_revival() {
    let atom = AtomState::excited();
    let field = PhotonDistribution::coherent(c(5.0, 0.0), 1e-12).unwrap();
    let profile = CouplingProfile::linear(1.0, 0.16).unwrap();
    let predicted = revival_time(&field, &profile).unwrap();
    let times: Vec<f64> = (0..=3000)
        .map(|k| 0.8 * predicted + k as f64 * 0.4 * predicted / 3000.0)
        .collect();
    let mut with_origin = vec![0.0];
    with_origin.extend(&times);
    let oracle = oracle_evolve_pure(&atom, &field, &profile, &with_origin, &IntegratorConfig::default()).unwrap();
    let (peak, _) = oracle[1..]
        .iter()
        .map(|s| (s.time, population_inversion(&s.reduced()).abs()))
        .fold((0.0, -1.0), |best, x| if x.1 > best.1 { x } else { best });
    assert!(
        (peak - predicted).abs() < 0.05 * predicted,
        "peak {peak} vs {predicted}"
    );
}

#[test]
fn thermal_sinusoidal_inversion_matches_oracle() {
    let atom = AtomDensityMatrix::excited();
    let field = PhotonDistribution::thermal(25.0, 1e-12).unwrap();
    let profile = CouplingProfile::sinusoidal(1.0, 1.0, 1).unwrap();
    let times = grid(20.0, 201);
    let oracle = oracle_evolve_mixed(&atom, &field, &profile, &times, &IntegratorConfig::default()).unwrap();
    for (t, o) in times.iter().zip(&oracle) {
        let w = inversion_closed_form(&field, &profile, *t).unwrap();
        assert!((w - population_inversion(o)).abs() < 1e-7, "t = {t}");
    }
}

#[test]
fn slow_sinusoidal_bloch_trajectory_matches_oracle() {
    let atom = AtomState::plus_x().density();
    let field = PhotonDistribution::thermal(0.5, 1e-12).unwrap();
    let profile = CouplingProfile::sinusoidal(1.0, 0.25, 1).unwrap();
    let times = grid(8.0 * std::f64::consts::PI, 400);
    let oracle = oracle_evolve_mixed(&atom, &field, &profile, &times, &IntegratorConfig::default()).unwrap();
    let exact = closed_form_rows(&atom, &field, &profile, &times);
    let report = compare_trajectories(&density_rows(&exact), &density_rows(&oracle), &times).unwrap();
    assert!(report.max_abs < 1e-7, "{report:?}");
}

#[test]
fn excitation_number_is_conserved() {
    let atom = AtomState::excited();
    let field = PhotonDistribution::coherent(c(5.0, 0.0), 1e-12).unwrap();
    let profile = CouplingProfile::constant(1.0).unwrap();
    let start = evolve_pure(&atom, &field, &profile, 0.0).unwrap();
    let end = evolve_pure(&atom, &field, &profile, 3.0).unwrap();
    assert!((start.excitation_expectation() - end.excitation_expectation()).abs() < 1e-9);
}

fn builtin_profile() -> impl Strategy<Value = CouplingProfile> {
    prop_oneof![
        (0.2..2.0f64).prop_map(|l| CouplingProfile::constant(l).unwrap()),
        (0.2..2.0f64, 0.01..0.3f64).prop_map(|(l, z)| CouplingProfile::linear(l, z).unwrap()),
        (0.2..2.0f64, 0.05..1.0f64).prop_map(|(l, z)| CouplingProfile::sech(l, z).unwrap()),
        (0.2..2.0f64, 0.1..2.0f64, 1u32..4).prop_map(|(l, z, p)| CouplingProfile::sinusoidal(l, z, p).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_scenarios_agree_with_oracle(
        profile in builtin_profile(),
        mean in 0.0..9.0f64,
        theta in 0.0..std::f64::consts::PI,
        phi in 0.0..std::f64::consts::TAU,
        mixed in any::<bool>(),
    ) {
        let atom = AtomState::new(
            c((theta / 2.0).cos(), 0.0),
            Complex64::from_polar((theta / 2.0).sin(), phi),
        ).unwrap();
        let times = grid(12.0, 25);
        let cfg = IntegratorConfig::default();
        let (exact, oracle) = if mixed {
            let field = PhotonDistribution::thermal(mean, 1e-12).unwrap();
            let rho = atom.density();
            (
                closed_form_rows(&rho, &field, &profile, &times),
                oracle_evolve_mixed(&rho, &field, &profile, &times, &cfg).unwrap(),
            )
        } else {
            let field = PhotonDistribution::coherent(c(mean.sqrt(), 0.0), 1e-12).unwrap();
            let exact = times
                .iter()
                .map(|&t| evolve_pure(&atom, &field, &profile, t).unwrap().reduced())
                .collect();
            let oracle = oracle_evolve_pure(&atom, &field, &profile, &times, &cfg)
                .unwrap()
                .iter()
                .map(JointPureState::reduced)
                .collect();
            (exact, oracle)
        };
        let report = compare_trajectories(&density_rows(&exact), &density_rows(&oracle), &times).unwrap();
        prop_assert!(report.max_abs < 1e-8, "{:?}", report);
    }
}
