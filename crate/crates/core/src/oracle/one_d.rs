//! One-dimensional finite-difference solver for the separated axes.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::PhysicalSystem;

use super::eigen::lowest_eigenpairs_op;
use super::operator::{Operator, StencilOrder};

/// `x_i = center − L + i h`, `h = 2L/(n − 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    pub n: usize,
    pub half_width: f64,
    pub center: f64,
}

impl Grid1D {
    pub fn new(n: usize, half_width: f64, center: f64) -> Result<Self> {
        if n < 32 {
            return Err(Error::Resolution(format!("1D grid of {n} points is below 32")));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Resolution(format!("half-width must be positive, got {half_width}")));
        }
        Ok(Self {
            n,
            half_width,
            center,
        })
    }

    pub fn h(&self) -> f64 {
        2.0 * self.half_width / (self.n - 1) as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.center - self.half_width + i as f64 * self.h()
    }
}

/// `V = xx·x² + x·x + c`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Potential1D {
    pub xx: f64,
    pub x: f64,
    pub c: f64,
}

impl Potential1D {
    pub fn eval(&self, s: f64) -> f64 {
        (self.xx * s + self.x) * s + self.c
    }

    /// `(ħk − qB_z x/c)²/2M + ½Mω_x²x² − qE_x x`: the x equation left after
    /// fixing `p_y = ħk` in the gauge `A = (0, B_z x, 0)`.
    pub fn landau(system: &PhysicalSystem, k: f64) -> Self {
        let s = system;
        let m = s.mass;
        let a = s.charge * s.b_z / s.light_speed;
        let hk = s.hbar * k;
        Self {
            xx: a * a / (2.0 * m) + 0.5 * m * s.omega_x.powi(2),
            x: -hk * a / m - s.charge * s.e_x,
            c: hk * hk / (2.0 * m),
        }
    }

    /// `½Mω_z²z² − qE_z z`.
    pub fn z_axis(system: &PhysicalSystem) -> Self {
        Self {
            xx: 0.5 * system.mass * system.omega_z.powi(2),
            x: -system.charge * system.e_z,
            c: 0.0,
        }
    }

    /// Position of the minimum.
    pub fn center(&self) -> Option<f64> {
        (self.xx > 0.0).then(|| -self.x / (2.0 * self.xx))
    }
}

#[derive(Debug, Clone)]
pub struct Hamiltonian1D {
    pub grid: Grid1D,
    pub mass: f64,
    pub hbar: f64,
    pub order: StencilOrder,
    diag: Vec<f64>,
    kin: f64,
}

impl Hamiltonian1D {
    pub fn new(potential: &Potential1D, mass: f64, hbar: f64, grid: Grid1D, order: StencilOrder) -> Self {
        let h = grid.h();
        let kin = -hbar * hbar / (2.0 * mass * h * h);
        let (_, c0) = order.laplacian();
        let diag = (0..grid.n).map(|i| potential.eval(grid.x(i)) + c0 * kin).collect();
        Self {
            grid,
            mass,
            hbar,
            order,
            diag,
            kin,
        }
    }
}

impl Operator for Hamiltonian1D {
    fn dim(&self) -> usize {
        self.grid.n
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let n = self.grid.n;
        let (lap, _) = self.order.laplacian();
        for i in 0..n {
            let mut acc = x[i] * self.diag[i];
            for (d, w) in lap.iter().enumerate() {
                let o = d + 1;
                let mut s = C64::from(0.0);
                if i >= o {
                    s += x[i - o];
                }
                if i + o < n {
                    s += x[i + o];
                }
                acc += s * (w * self.kin);
            }
            y[i] = acc;
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        self.diag.clone()
    }
}

/// The `m` lowest `(energy, samples)` pairs, samples real, normalized with
/// `Σ|ψ|²h = 1` and with a positive largest lobe.
pub fn solve_1d(
    potential: &Potential1D,
    mass: f64,
    hbar: f64,
    grid: Grid1D,
    m: usize,
) -> Result<Vec<(f64, Vec<f64>)>> {
    let op = Hamiltonian1D::new(potential, mass, hbar, grid, StencilOrder::Fourth);
    let pairs = lowest_eigenpairs_op(&op, m)?;
    let h = grid.h();
    Ok(pairs
        .into_iter()
        .map(|p| {
            let peak = p
                .vector
                .iter()
                .copied()
                .max_by(|a, b| a.norm().total_cmp(&b.norm()))
                .unwrap_or(C64::from(1.0));
            let phase = peak.conj() / peak.norm();
            let mut v: Vec<f64> = p.vector.iter().map(|z| (z * phase).re).collect();
            let s = (v.iter().map(|a| a * a).sum::<f64>() * h).sqrt();
            v.iter_mut().for_each(|a| *a /= s);
            (p.value, v)
        })
        .collect())
}
