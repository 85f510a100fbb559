use approx::assert_relative_eq;
use proptest::prelude::*;

use susy_radial::analytic::{
    goldman_krivchenkov_energy, ip_ground_state, kratzer_ground_wavefunction, pseudoharmonic_energy,
};
use susy_radial::oracle::{
    eigen_lowest, node_count, plan_grid, residual_check, shoot_numerov, solve_auto, solve_radial,
    GridPlan, Method, RadialGrid, SolverConfig, SymTridiagonal,
};
use susy_radial::{InversePowerPotential, KratzerPotential, PseudoharmonicPotential, QuantumFrame};

fn frame(n: i64, l: i64) -> QuantumFrame {
    QuantumFrame::new(n, l).unwrap()
}

#[test]
fn gk_levels_are_equally_spaced() {
    let p = PseudoharmonicPotential::goldman_krivchenkov(1.0).unwrap();
    let f = frame(3, 0);
    let hint = goldman_krivchenkov_energy(1.0, &f, 2).unwrap();
    let s = solve_auto(&p, &f, &SolverConfig::default(), 3, hint, &GridPlan::default()).unwrap();
    let e = s.energies();
    for w in e.windows(2) {
        assert_relative_eq!(w[1] - w[0], 2.0 * std::f64::consts::SQRT_2, max_relative = 1e-7);
    }
}

#[test]
fn gk_third_excited_state_has_three_nodes() {
    let p = PseudoharmonicPotential::goldman_krivchenkov(1.0).unwrap();
    let f = frame(4, 0);
    let hint = goldman_krivchenkov_energy(1.0, &f, 3).unwrap();
    let s = solve_auto(&p, &f, &SolverConfig::default(), 4, hint, &GridPlan::default()).unwrap();
    assert_eq!(node_count(&s.entries[3].wavefunction), 3);
}

#[test]
fn worked_inverse_power_instance() {
    let f = frame(3, 0);
    let sol = ip_ground_state(-1.0, 0.0, 0.5, &f).unwrap();
    assert_relative_eq!(sol.required_coefficient, -1.0, max_relative = 1e-14);
    let p = InversePowerPotential { a1: -1.0, a2: -1.0, a3: 0.0, a4: 0.5 };
    for method in [Method::FiniteDifference, Method::NumerovShooting] {
        let s = solve_auto(&p, &f, &SolverConfig::with_method(method), 1, -0.5, &GridPlan::default()).unwrap();
        assert_relative_eq!(s.entries[0].energy, -0.5, max_relative = 1e-6);
    }
    let g = plan_grid(&p, &f, -0.5, Method::FiniteDifference, &GridPlan::default()).unwrap();
    let psi = sol.wavefunction();
    assert!(residual_check(&p, &f, &psi, -0.5, &g).unwrap() <= 1e-10);
    assert!(residual_check(&p, &f, &psi, -0.49, &g).unwrap() >= 1e-3);
}

#[test]
fn pseudoharmonic_well_levels() {
    let p = PseudoharmonicPotential::from_well(1.0, 1.0).unwrap();
    let f = frame(3, 0);
    assert_relative_eq!(pseudoharmonic_energy(&p, &f, 0), 1.535534, epsilon = 1e-6);
    assert_relative_eq!(pseudoharmonic_energy(&p, &f, 1), 4.363961, epsilon = 1e-6);
    let s = solve_auto(&p, &f, &SolverConfig::default(), 2, 4.4, &GridPlan::default()).unwrap();
    assert_relative_eq!(s.entries[0].energy, 1.535534, epsilon = 1e-6);
    assert_relative_eq!(s.entries[1].energy, 4.363961, epsilon = 1e-6);
}

#[test]
fn hydrogen_on_a_uniform_grid() {
    let p = KratzerPotential::new(0.0, 1.0).unwrap();
    let g = RadialGrid::new(1e-6, 40.0, 4000).unwrap();
    let s = solve_radial(&p, &frame(3, 0), &SolverConfig::default(), &g, 1).unwrap();
    assert_relative_eq!(s.entries[0].energy, -0.5, max_relative = 1e-6);
    let psi = kratzer_ground_wavefunction(&p, &frame(3, 0));
    assert!(residual_check(&p, &frame(3, 0), &psi, -0.5, &g).unwrap() <= 1e-12);
}

#[test]
fn domain_insensitivity() {
    let f = frame(3, 1);
    let cases: Vec<(Box<dyn susy_radial::RadialPotential>, f64)> = vec![
        (Box::new(InversePowerPotential { a1: -1.0, a2: -1.0, a3: 0.0, a4: 0.5 }), -0.3),
        (Box::new(KratzerPotential::new(1.0, 2.0).unwrap()), -0.2),
        (Box::new(susy_radial::EvenPowerPotential { b1: 1.0, b2: -4.0, b3: 0.0, b4: 4.0 }), 4.0),
    ];
    for (p, e) in cases {
        let cfg = SolverConfig::default();
        let g = plan_grid(p.as_ref(), &f, e, Method::FiniteDifference, &GridPlan::default()).unwrap();
        let wide = RadialGrid::new(0.5 * g.r_min(), 1.5 * g.r_max(), (1.5 * g.points() as f64) as usize).unwrap();
        let a = solve_radial(p.as_ref(), &f, &cfg, &g, 1).unwrap().entries[0].energy;
        let b = solve_radial(p.as_ref(), &f, &cfg, &wide, 1).unwrap().entries[0].energy;
        assert!((a - b).abs() <= 1e-7 * a.abs(), "{a} vs {b}");
    }
}

#[test]
fn shooting_defect_vanishes_at_levels_only() {
    let p = KratzerPotential::new(0.0, 1.0).unwrap();
    let f = frame(3, 0);
    let coarse = RadialGrid::new(1e-9, 60.0, 2000).unwrap();
    let fine = RadialGrid::new(1e-9, 60.0, 8000).unwrap();
    let d1 = shoot_numerov(&p, &f, &coarse, -0.5).unwrap().wronskian.abs();
    let d2 = shoot_numerov(&p, &f, &fine, -0.5).unwrap().wronskian.abs();
    assert!(d2 < d1 || d2 < 1e-12);
    assert!(d2 < 1e-6);
    let between = shoot_numerov(&p, &f, &fine, -0.3).unwrap();
    assert!(between.wronskian.abs() > 1e-2);
    let lo = shoot_numerov(&p, &f, &fine, -0.2).unwrap();
    let hi = shoot_numerov(&p, &f, &fine, -0.08).unwrap();
    assert_eq!(hi.outward_nodes, lo.outward_nodes + 1);
}

#[test]
fn solver_failures_are_signalled() {
    let p = KratzerPotential::new(0.0, 1.0).unwrap();
    // a domain too short to hold two levels breaks the node sequence or converges elsewhere
    let g = RadialGrid::new(1e-6, 40.0, 200).unwrap();
    let cfg = SolverConfig {
        max_bisections: 2,
        ..SolverConfig::default()
    };
    let err = solve_radial(&p, &frame(3, 0), &cfg, &g, 1).unwrap_err();
    assert!(err.is_solver_failure(), "{err}");
}

proptest! {
    #[test]
    fn eigenvalues_interlace_sturm_counts(
        diag in proptest::collection::vec(-5.0f64..5.0, 3..40),
        seed in 0u64..1000,
    ) {
        let n = diag.len();
        let off: Vec<f64> = (0..n - 1).map(|i| ((i as u64 * 7919 + seed) % 13) as f64 / 6.0 - 1.0).collect();
        let t = SymTridiagonal::new(diag.clone(), off.clone()).unwrap();
        let pairs = eigen_lowest(&t, n).unwrap();
        let trace: f64 = diag.iter().sum();
        let sum: f64 = pairs.iter().map(|p| p.value).sum();
        prop_assert!((trace - sum).abs() <= 1e-9 * (1.0 + trace.abs()));
        for w in pairs.windows(2) {
            prop_assert!(w[0].value <= w[1].value);
        }
        for (j, p) in pairs.iter().enumerate() {
            prop_assert!(t.sturm_count(p.value + 1e-7) >= j + 1);
        }
    }
}
