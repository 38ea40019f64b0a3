use proptest::prelude::*;
use qcycle::ermakov::{integrate_at, wkb_init};
use qcycle::kzm::symmetric_grid;
use qcycle::spherical::{build_dispersion, SphericalParams, SphericalSystem};
use qcycle::{DriveSpec, Error};

fn system(sites: usize, g: f64, delta: f64) -> SphericalSystem {
    SphericalSystem::new(SphericalParams {
        sites,
        alpha: 0.5,
        g,
        coupling: 1.0,
        drive: DriveSpec::power_law(0.5, delta).unwrap(),
    })
    .unwrap()
}

#[test]
fn decoupled_chain_matches_single_modes() {
    let sys = system(32, 0.0, 0.05);
    let times = symmetric_grid(60.0, 241);
    let ev = sys.evolve(-60.0, &times, 1e-12).unwrap();
    for q in 0..32 {
        let drive = sys.decoupled_mode_drive(q).unwrap();
        let traj = integrate_at(&drive, wkb_init(&drive, -60.0).unwrap(), &times, 1e-12).unwrap();
        for (a, b) in traj.samples.iter().zip(&ev.modes[q]) {
            assert!((a.xi - b.xi).abs() <= 1e-8 * b.xi, "q={q} t={}", a.t);
        }
    }
}

#[test]
fn decoupled_drive_needs_free_linear_ramp() {
    let sys = system(16, 0.1, 0.05);
    assert!(matches!(
        sys.decoupled_mode_drive(1),
        Err(Error::UnsupportedProtocol(_))
    ));
    let free = system(16, 0.0, 0.05);
    assert!(free.decoupled_mode_drive(16).is_err());
}

#[test]
fn mass_is_self_consistent_along_the_run() {
    let sys = system(64, 0.1, 0.05);
    let times = symmetric_grid(80.0, 161);
    let ev = sys.evolve(-120.0, &times, 1e-10).unwrap();
    assert!(ev.self_consistency_residual() <= 1e-10);
    assert!(ev.min_mu_eff > 0.0);
    // the interacting chain starts in its equilibrium state
    let eq = sys.equilibrium(-120.0).unwrap();
    let m = sys.mu_eff(-120.0, &eq.iter().map(|s| s.xi).collect::<Vec<_>>());
    assert!((m - sys.solve_mu_eff(sys.mu_bare(-120.0)).unwrap()).abs() < 1e-6 * m);
}

#[test]
fn zero_mode_reaches_the_single_mode_plateau() {
    let cycle = system(64, 0.1, 0.02)
        .run_cycle(40.0, 2001, 1e-3, 0.25, 1e-10)
        .unwrap();
    assert!((cycle.zero_mode.mean / cycle.reference - 1.0).abs() < 0.05);
    assert!(cycle.deviation_at_zero > 0.0 && cycle.deviation_at_zero < 1e-5);
    assert!(cycle.t_start <= -cycle.horizon);
}

#[test]
fn pushing_into_the_ordered_phase_is_reported() {
    let mut sys = system(16, 0.1, 0.05);
    // lowering the bare mass far below critical drives μ_eff negative
    sys.mu_c -= 1.0;
    let times = symmetric_grid(100.0, 101);
    let err = sys.evolve(-100.0, &times, 1e-10).unwrap_err();
    assert!(
        matches!(err, Error::SymmetricPhaseViolation { mu_eff, .. } if mu_eff < 0.0),
        "{err:?}"
    );
}

#[test]
fn evolve_validates_its_inputs() {
    let sys = system(16, 0.1, 0.05);
    assert!(sys.evolve(-10.0, &[-5.0, -6.0], 1e-10).is_err());
    assert!(sys.evolve(-10.0, &[-11.0], 1e-10).is_err());
    assert!(sys.evolve(-10.0, &[0.0], 1e-2).is_err());
    assert!(sys.run_cycle(-1.0, 101, 1e-3, 0.25, 1e-10).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dispersion_is_reflection_symmetric(half in 2usize..200, alpha in 0.1f64..3.0) {
        let l = 2 * half;
        let j = build_dispersion(l, alpha, 1.0).unwrap();
        for k in 1..l {
            prop_assert!((j[k] - j[l - k]).abs() <= 1e-12);
            prop_assert!(j[k] <= j[0] + 1e-12);
        }
    }

    #[test]
    fn gap_equation_root_is_increasing(mu in 0.0f64..5.0, dmu in 0.01f64..1.0) {
        let sys = system(32, 0.2, 0.1);
        let a = sys.solve_mu_eff(mu).unwrap();
        let b = sys.solve_mu_eff(mu + dmu).unwrap();
        prop_assert!(b > a && a > 0.0);
    }
}
