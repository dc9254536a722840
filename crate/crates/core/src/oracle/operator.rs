use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::PhysicalSystem;

use super::grid::{GridField, GridSpec};

/// A Hermitian linear operator acting on flat complex vectors.
pub trait Operator {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[C64], y: &mut [C64]);
    /// Real diagonal, used as a Jacobi preconditioner.
    fn diagonal(&self) -> Vec<f64>;
}

/// `a + b·s`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Linear {
    pub a: f64,
    pub b: f64,
}

impl Linear {
    pub fn eval(&self, s: f64) -> f64 {
        self.a + self.b * s
    }
}

/// `V = xx·x² + xy·xy + yy·y² + x·x + y·y + c`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QuadraticPotential {
    pub xx: f64,
    pub xy: f64,
    pub yy: f64,
    pub x: f64,
    pub y: f64,
    pub c: f64,
}

impl QuadraticPotential {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.xx * x * x + self.xy * x * y + self.yy * y * y + self.x * x + self.y * y + self.c
    }
}

/// Vector potential choice for the lab-frame Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gauge {
    /// `A = (−B_z y/2, B_z x/2, B_x y)`.
    Symmetric,
    /// `A = (0, B_z x, B_x y)`.
    Landau,
}

/// `H = (p_x² + p_y²)/2M + V(x, y) + f(x) p_y + h(y) p_x`.
///
/// `f` depends on x only and `h` on y only, so both coupling products are
/// Hermitian without symmetrization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanarHamiltonian {
    pub mass: f64,
    pub hbar: f64,
    pub potential: QuadraticPotential,
    pub py_coupling: Linear,
    pub px_coupling: Linear,
}

impl PlanarHamiltonian {
    /// The planar lab Hamiltonian `(p − qA/c)²/2M + ½M(ω_x²x² + ω_y²y²) −
    /// qE_x x − qE_y y`, built from the vector potential of `gauge`. The
    /// conserved `p_z = ħ k_z` enters through `A_z = B_x y`; the z trap is
    /// not part of the plane.
    pub fn lab(system: &PhysicalSystem, gauge: Gauge, kz: f64) -> Self {
        let s = system;
        let m = s.mass;
        let qc = s.charge / s.light_speed;
        // A_x = ax·y, A_y = ay·x, A_z = az·y
        let (ax, ay) = match gauge {
            Gauge::Symmetric => (-0.5 * s.b_z, 0.5 * s.b_z),
            Gauge::Landau => (0.0, s.b_z),
        };
        let az = s.b_x;
        let hk = s.hbar * kz;
        let potential = QuadraticPotential {
            xx: 0.5 * m * s.omega_x.powi(2) + (qc * ay).powi(2) / (2.0 * m),
            xy: 0.0,
            yy: 0.5 * m * s.omega_y.powi(2) + ((qc * ax).powi(2) + (qc * az).powi(2)) / (2.0 * m),
            x: -s.charge * s.e_x,
            y: -s.charge * s.e_y - hk * qc * az / m,
            c: hk * hk / (2.0 * m),
        };
        Self {
            mass: m,
            hbar: s.hbar,
            potential,
            py_coupling: Linear { a: 0.0, b: -qc * ay / m },
            px_coupling: Linear { a: 0.0, b: -qc * ax / m },
        }
    }

    /// `(λ_x, λ_y)` of the harmonic confinement along each axis, from the
    /// quadratic potential coefficients. `None` for an unconfined axis.
    pub fn lambda_scales(&self) -> (Option<f64>, Option<f64>) {
        let l = |k: f64| (k > 0.0).then(|| (2.0 * k * self.mass).powf(0.25) / self.hbar.sqrt());
        (l(self.potential.xx), l(self.potential.yy))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StencilOrder {
    Second,
    #[default]
    Fourth,
    Sixth,
    Eighth,
}

impl StencilOrder {
    /// Off-center weights of the second derivative (times `h²`) and its
    /// center weight.
    pub(crate) fn laplacian(self) -> (&'static [f64], f64) {
        match self {
            StencilOrder::Second => (&[1.0], -2.0),
            StencilOrder::Fourth => (&[4.0 / 3.0, -1.0 / 12.0], -2.5),
            StencilOrder::Sixth => (&[1.5, -3.0 / 20.0, 1.0 / 90.0], -49.0 / 18.0),
            StencilOrder::Eighth => (&[1.6, -0.2, 8.0 / 315.0, -1.0 / 560.0], -205.0 / 72.0),
        }
    }

    /// Antisymmetric first-derivative weights (times `h`) for offsets 1, 2, ...
    fn gradient(self) -> &'static [f64] {
        match self {
            StencilOrder::Second => &[0.5],
            StencilOrder::Fourth => &[2.0 / 3.0, -1.0 / 12.0],
            StencilOrder::Sixth => &[0.75, -0.15, 1.0 / 60.0],
            StencilOrder::Eighth => &[0.8, -0.2, 4.0 / 105.0, -1.0 / 280.0],
        }
    }
}

/// Finite-difference discretization of a [`PlanarHamiltonian`] with zero
/// (Dirichlet) values outside the grid.
#[derive(Debug, Clone)]
pub struct DiscreteHamiltonian {
    pub grid: GridSpec,
    pub order: StencilOrder,
    pub hamiltonian: PlanarHamiltonian,
    diag: Vec<f64>,
    f_x: Vec<f64>,
    h_y: Vec<f64>,
    kin_x: f64,
    kin_y: f64,
}

/// Checks `h ≤ 0.25/λ` and `L ≥ 6/λ` on every confined axis.
pub fn check_resolution(h: &PlanarHamiltonian, grid: &GridSpec) -> Result<()> {
    let (lx, ly) = h.lambda_scales();
    for (axis, lam, step, half) in [("x", lx, grid.hx(), grid.lx), ("y", ly, grid.hy(), grid.ly)] {
        if let Some(l) = lam {
            if step > 0.25 / l {
                return Err(Error::Resolution(format!(
                    "{axis} spacing {step} exceeds 0.25/lambda = {}",
                    0.25 / l
                )));
            }
            if half < 6.0 / l {
                return Err(Error::Resolution(format!(
                    "{axis} half-width {half} is below 6/lambda = {}",
                    6.0 / l
                )));
            }
        }
    }
    Ok(())
}

pub fn discretize(
    h: &PlanarHamiltonian,
    grid: &GridSpec,
    order: StencilOrder,
) -> Result<DiscreteHamiltonian> {
    check_resolution(h, grid)?;
    Ok(discretize_unchecked(h, grid, order))
}

/// As [`discretize`] without the resolution test.
pub fn discretize_unchecked(
    h: &PlanarHamiltonian,
    grid: &GridSpec,
    order: StencilOrder,
) -> DiscreteHamiltonian {
    let g = *grid;
    let kin = -h.hbar * h.hbar / (2.0 * h.mass);
    let kin_x = kin / (g.hx() * g.hx());
    let kin_y = kin / (g.hy() * g.hy());
    let (_, c0) = order.laplacian();
    let mut diag = Vec::with_capacity(g.len());
    for iy in 0..g.ny {
        let y = g.y(iy);
        for ix in 0..g.nx {
            diag.push(h.potential.eval(g.x(ix), y) + c0 * (kin_x + kin_y));
        }
    }
    DiscreteHamiltonian {
        grid: g,
        order,
        hamiltonian: *h,
        diag,
        f_x: (0..g.nx).map(|ix| h.py_coupling.eval(g.x(ix))).collect(),
        h_y: (0..g.ny).map(|iy| h.px_coupling.eval(g.y(iy))).collect(),
        kin_x,
        kin_y,
    }
}

impl DiscreteHamiltonian {
    pub fn apply_field(&self, f: &GridField) -> GridField {
        let mut out = GridField::zeros(self.grid);
        self.apply(&f.data, &mut out.data);
        out
    }

    /// `⟨ψ|H|ψ⟩ / ⟨ψ|ψ⟩`.
    pub fn expectation(&self, f: &GridField) -> f64 {
        let hf = self.apply_field(f);
        (f.inner(&hf) / f.inner(f)).re
    }
}

impl Operator for DiscreteHamiltonian {
    fn dim(&self) -> usize {
        self.grid.len()
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let g = &self.grid;
        let (nx, ny) = (g.nx, g.ny);
        let (lap, _) = self.order.laplacian();
        let grad = self.order.gradient();
        let mih = C64::new(0.0, -self.hamiltonian.hbar);
        let gx = mih / g.hx();
        let gy = mih / g.hy();
        for iy in 0..ny {
            let row = iy * nx;
            let hy = self.h_y[iy];
            for ix in 0..nx {
                let k = row + ix;
                let mut acc = x[k] * self.diag[k];
                let mut dx = C64::from(0.0);
                let mut dy = C64::from(0.0);
                for (s, (&w, &d)) in lap.iter().zip(grad).enumerate() {
                    let s = s + 1;
                    let left = if ix >= s { x[k - s] } else { C64::from(0.0) };
                    let right = if ix + s < nx { x[k + s] } else { C64::from(0.0) };
                    let down = if iy >= s { x[k - s * nx] } else { C64::from(0.0) };
                    let up = if iy + s < ny { x[k + s * nx] } else { C64::from(0.0) };
                    acc += (left + right) * (w * self.kin_x) + (down + up) * (w * self.kin_y);
                    dx += (right - left) * d;
                    dy += (up - down) * d;
                }
                acc += dx * gx * hy + dy * gy * self.f_x[ix];
                y[k] = acc;
            }
        }
    }

    fn diagonal(&self) -> Vec<f64> {
        self.diag.clone()
    }
}
