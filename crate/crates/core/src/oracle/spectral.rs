//! FFT derivatives and phase-space moments of grid fields.
//!
//! Fields are treated as periodic for differentiation. That is harmless for
//! states that have decayed to round-off at the grid edge, which the
//! resolution rule guarantees for the Gaussians used here.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::normal_modes::CRow4;
use crate::states::Moments;

use super::grid::{dot, norm_sqr, GridField, GridSpec};

pub struct SpectralDerivative {
    grid: GridSpec,
    fwd_x: Arc<dyn Fft<f64>>,
    inv_x: Arc<dyn Fft<f64>>,
    fwd_y: Arc<dyn Fft<f64>>,
    inv_y: Arc<dyn Fft<f64>>,
    kx: Vec<f64>,
    ky: Vec<f64>,
}

/// `2πj/(n h)` in FFT order, with the Nyquist entry zeroed so that the
/// derivative of a real field stays real.
fn wavenumbers(n: usize, h: f64) -> Vec<f64> {
    let scale = 2.0 * PI / (n as f64 * h);
    (0..n)
        .map(|j| {
            if n.is_multiple_of(2) && j == n / 2 {
                0.0
            } else if j <= n / 2 {
                j as f64 * scale
            } else {
                (j as f64 - n as f64) * scale
            }
        })
        .collect()
}

impl SpectralDerivative {
    pub fn new(grid: GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            grid,
            fwd_x: planner.plan_fft_forward(grid.nx),
            inv_x: planner.plan_fft_inverse(grid.nx),
            fwd_y: planner.plan_fft_forward(grid.ny),
            inv_y: planner.plan_fft_inverse(grid.ny),
            kx: wavenumbers(grid.nx, grid.hx()),
            ky: wavenumbers(grid.ny, grid.hy()),
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// `∂ψ/∂x` on the grid.
    pub fn dx(&self, data: &[C64]) -> Vec<C64> {
        let nx = self.grid.nx;
        let mut out = data.to_vec();
        let norm = 1.0 / nx as f64;
        for row in out.chunks_mut(nx) {
            self.fwd_x.process(row);
            for (z, k) in row.iter_mut().zip(&self.kx) {
                *z *= C64::new(0.0, k * norm);
            }
            self.inv_x.process(row);
        }
        out
    }

    /// `∂ψ/∂y` on the grid.
    pub fn dy(&self, data: &[C64]) -> Vec<C64> {
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let mut out = data.to_vec();
        let mut col = vec![C64::from(0.0); ny];
        let norm = 1.0 / ny as f64;
        for ix in 0..nx {
            for iy in 0..ny {
                col[iy] = out[iy * nx + ix];
            }
            self.fwd_y.process(&mut col);
            for (z, k) in col.iter_mut().zip(&self.ky) {
                *z *= C64::new(0.0, k * norm);
            }
            self.inv_y.process(&mut col);
            for iy in 0..ny {
                out[iy * nx + ix] = col[iy];
            }
        }
        out
    }

    /// `X_α ψ` for `X = (x − c_x, p_x, y − c_y, p_y)`, canonical momenta in
    /// whatever gauge the field is expressed in.
    pub fn phase_space_images(&self, f: &GridField, origin: [f64; 2], hbar: f64) -> [Vec<C64>; 4] {
        let g = &self.grid;
        let mih = C64::new(0.0, -hbar);
        let mut xs = f.data.clone();
        let mut ys = f.data.clone();
        for iy in 0..g.ny {
            let y = g.y(iy) - origin[1];
            for ix in 0..g.nx {
                let i = g.index(ix, iy);
                xs[i] *= g.x(ix) - origin[0];
                ys[i] *= y;
            }
        }
        let mut px = self.dx(&f.data);
        px.iter_mut().for_each(|z| *z *= mih);
        let mut py = self.dy(&f.data);
        py.iter_mut().for_each(|z| *z *= mih);
        [xs, px, ys, py]
    }

    /// Normalized first and symmetrized second moments of
    /// `(x − c_x, p_x, y − c_y, p_y)`.
    pub fn moments(&self, f: &GridField, origin: [f64; 2], hbar: f64) -> Moments {
        let imgs = self.phase_space_images(f, origin, hbar);
        let nrm = norm_sqr(&f.data);
        let mean = Vector4::from_fn(|a, _| dot(&f.data, &imgs[a]).re / nrm);
        let mut second = Matrix4::zeros();
        for a in 0..4 {
            for b in a..4 {
                let v = dot(&imgs[a], &imgs[b]).re / nrm;
                second[(a, b)] = v;
                second[(b, a)] = v;
            }
        }
        Moments {
            norm: nrm * self.grid.cell(),
            mean,
            second,
            covariance: second - mean * mean.transpose(),
        }
    }

    /// `(c·X) ψ` split into its position and momentum parts.
    pub fn apply_row(
        &self,
        f: &GridField,
        row: &CRow4,
        origin: [f64; 2],
        hbar: f64,
    ) -> (Vec<C64>, Vec<C64>) {
        let [xs, px, ys, py] = self.phase_space_images(f, origin, hbar);
        let pos = xs.iter().zip(&ys).map(|(a, b)| row[0] * a + row[2] * b).collect();
        let mom = px.iter().zip(&py).map(|(a, b)| row[1] * a + row[3] * b).collect();
        (pos, mom)
    }
}

/// `‖(c·X)ψ‖ / max(‖position part‖, ‖momentum part‖)`: zero for an exact
/// annihilator, and insensitive to the overall scale of `c`.
pub fn annihilation_residual(
    spectral: &SpectralDerivative,
    f: &GridField,
    row: &CRow4,
    origin: [f64; 2],
    hbar: f64,
) -> f64 {
    let (pos, mom) = spectral.apply_row(f, row, origin, hbar);
    let total: Vec<C64> = pos.iter().zip(&mom).map(|(a, b)| a + b).collect();
    let scale = norm_sqr(&pos).max(norm_sqr(&mom)).sqrt();
    norm_sqr(&total).sqrt() / scale
}
