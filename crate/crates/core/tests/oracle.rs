use num_complex::Complex64 as C64;

use emosc::fixtures::{generic_fixtures, Fixture};
use emosc::normal_modes::NormalModes;
use emosc::oracle::{
    discretize, discretize_unchecked, lowest_eigenpairs, propagate, solve_1d, Gauge, Grid1D, GridField, GridSpec,
    PlanarHamiltonian, Potential1D, PropagationOptions, StencilOrder,
};
use emosc::params::PhysicalSystem;
use emosc::spectrum::planar_energy;
use emosc::states::PolyGaussianState;

fn decoupled() -> PhysicalSystem {
    PhysicalSystem::default()
}

#[test]
fn isotropic_ground_energy() {
    let h = PlanarHamiltonian::lab(&decoupled(), Gauge::Symmetric, 0.0);
    let op = discretize(&h, &GridSpec::square(128, 8.0).unwrap(), StencilOrder::Fourth).unwrap();
    let (e, _) = &lowest_eigenpairs(&op, 1).unwrap()[0];
    assert!((e - 1.0).abs() < 1e-4, "{e}");
}

#[test]
fn second_order_richardson() {
    let s = PhysicalSystem {
        omega_y: 1.5,
        ..decoupled()
    };
    let h = PlanarHamiltonian::lab(&s, Gauge::Symmetric, 0.0);
    let exact = planar_energy(&s, 0, 0).unwrap().value;
    let err = |n: usize| {
        let op = discretize_unchecked(&h, &GridSpec::square(n, 7.0).unwrap(), StencilOrder::Second);
        (lowest_eigenpairs(&op, 1).unwrap()[0].0 - exact).abs()
    };
    let ratio = err(49) / err(97);
    assert!((ratio - 4.0).abs() < 0.2, "{ratio}");
}

fn ground_sample(f: &Fixture, grid: GridSpec) -> GridField {
    let modes = f.modes().unwrap();
    let g = PolyGaussianState::ground(&modes, f.system.hbar)
        .unwrap()
        .with_center(f.center().unwrap());
    f.sample(grid, |x, y| g.eval(x, y)).unwrap()
}

#[test]
fn ground_state_overlap() {
    let f = generic_fixtures()[0];
    let op = f.discretize(128, 8.0).unwrap();
    let (_, psi) = &lowest_eigenpairs(&op, 1).unwrap()[0];
    let mut analytic = ground_sample(&f, op.grid);
    analytic.normalize();
    let overlap = psi.inner(&analytic).norm();
    assert!(overlap > 0.9999, "{overlap}");
}

#[test]
fn gauge_term_expectation_converges() {
    let f = generic_fixtures()[2];
    let exact = planar_energy(&f.system, 0, 0).unwrap().value;
    let err = |n: usize| {
        let grid = f.grid(n, 8.0).unwrap();
        let op = discretize_unchecked(&f.lab_hamiltonian(), &grid, StencilOrder::Second);
        (op.expectation(&ground_sample(&f, grid)) - exact).abs()
    };
    let (coarse, fine) = (err(65), err(129));
    assert!(fine < 1e-2 * exact, "{fine}");
    let ratio = coarse / fine;
    assert!((ratio - 4.0).abs() < 0.3, "{ratio}");
}

#[test]
fn stationary_state_stays_put() {
    let f = generic_fixtures()[2];
    let op = f.discretize(80, 6.5).unwrap();
    let (_, psi) = lowest_eigenpairs(&op, 1).unwrap().remove(0);
    let mut opts = PropagationOptions::new(0.002, 1000);
    opts.record_every = 50;
    opts.origin = f.center().unwrap();
    let run = propagate(&op, &psi, &opts).unwrap();
    let first = run.records[0].moments.mean;
    for r in &run.records {
        assert!((r.moments.mean - first).amax() < 1e-8, "{}", r.step);
    }
}

#[test]
fn long_run_unitarity() {
    let f = generic_fixtures()[0];
    let modes: NormalModes = f.modes().unwrap();
    let op = f.discretize(80, 6.5).unwrap();
    let excited = PolyGaussianState::number_state(&modes, 1.0, 1, 1).unwrap();
    let mut psi = f.sample(op.grid, |x, y| excited.eval(x, y) + 0.3 * C64::i() * x).unwrap();
    psi.normalize();
    let mut opts = PropagationOptions::new(0.002, 10_000);
    opts.record_every = 10_000;
    let run = propagate(&op, &psi, &opts).unwrap();
    let norm = run.records.last().unwrap().norm;
    assert!((norm - 1.0).abs() < 1e-6, "{norm}");
    assert!(run.max_step_drift < 1e-10);
}

#[test]
fn z_axis_levels() {
    let s = PhysicalSystem {
        omega_z: 1.3,
        e_z: 0.4,
        ..decoupled()
    };
    let pot = Potential1D::z_axis(&s);
    let lambda = s.omega_z.sqrt();
    let grid = Grid1D::new(501, 10.0 / lambda, pot.center().unwrap()).unwrap();
    let offset = -(s.e_z * s.e_z) / (2.0 * s.omega_z * s.omega_z);
    for (n, (e, _)) in solve_1d(&pot, 1.0, 1.0, grid, 3).unwrap().iter().enumerate() {
        let exact = s.omega_z * (n as f64 + 0.5) + offset;
        assert!(((e - exact) / exact).abs() < 1e-5, "{n}: {e} vs {exact}");
    }
}
