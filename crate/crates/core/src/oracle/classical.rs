use nalgebra::{Matrix4, Vector4};

use crate::normal_modes::{symplectic_form, QuadraticHamiltonian};

/// Hamilton's equations `Ẋ = J ℋ X` for the reduced quadratic Hamiltonian,
/// integrated with classical RK4 at `substeps` steps between consecutive
/// sample times. `times` must be ascending and start at the initial time.
pub fn classical_trajectory(
    h: &QuadraticHamiltonian,
    x0: Vector4<f64>,
    times: &[f64],
    substeps: usize,
) -> Vec<Vector4<f64>> {
    let a: Matrix4<f64> = symplectic_form() * h.matrix;
    let substeps = substeps.max(1);
    let mut out = Vec::with_capacity(times.len());
    let mut x = x0;
    let mut prev = times.first().copied().unwrap_or(0.0);
    for &t in times {
        let dt = (t - prev) / substeps as f64;
        if dt != 0.0 {
            for _ in 0..substeps {
                let k1 = a * x;
                let k2 = a * (x + 0.5 * dt * k1);
                let k3 = a * (x + 0.5 * dt * k2);
                let k4 = a * (x + dt * k3);
                x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        }
        out.push(x);
        prev = t;
    }
    out
}
