use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Uniform 2D grid `x_i = c_x − L_x + i h_x`, `h_x = 2L_x/(n_x − 1)`, stored
/// row-major (`index = iy * nx + ix`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub center: [f64; 2],
}

impl GridSpec {
    pub const MIN_POINTS: usize = 32;

    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64) -> Result<Self> {
        if nx < Self::MIN_POINTS || ny < Self::MIN_POINTS {
            return Err(Error::Resolution(format!(
                "grid {nx}x{ny} is below the minimum of {} points per axis",
                Self::MIN_POINTS
            )));
        }
        if !(lx > 0.0 && ly > 0.0 && lx.is_finite() && ly.is_finite()) {
            return Err(Error::Resolution(format!("half-widths must be positive, got {lx}, {ly}")));
        }
        Ok(Self {
            nx,
            ny,
            lx,
            ly,
            center: [0.0, 0.0],
        })
    }

    pub fn square(n: usize, l: f64) -> Result<Self> {
        Self::new(n, n, l, l)
    }

    pub fn centered(mut self, center: [f64; 2]) -> Self {
        self.center = center;
        self
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn hx(&self) -> f64 {
        2.0 * self.lx / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        2.0 * self.ly / (self.ny - 1) as f64
    }

    pub fn cell(&self) -> f64 {
        self.hx() * self.hy()
    }

    pub fn x(&self, ix: usize) -> f64 {
        self.center[0] - self.lx + ix as f64 * self.hx()
    }

    pub fn y(&self, iy: usize) -> f64 {
        self.center[1] - self.ly + iy as f64 * self.hy()
    }

    #[inline]
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }
}

/// Complex samples on a [`GridSpec`]. Inner products are plain sums times
/// the cell area, the quadrature under which the discrete operators are
/// Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub grid: GridSpec,
    pub data: Vec<C64>,
}

impl GridField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            grid,
            data: vec![C64::from(0.0); grid.len()],
        }
    }

    pub fn sample(grid: GridSpec, mut f: impl FnMut(f64, f64) -> C64) -> Self {
        let mut data = Vec::with_capacity(grid.len());
        for iy in 0..grid.ny {
            let y = grid.y(iy);
            for ix in 0..grid.nx {
                data.push(f(grid.x(ix), y));
            }
        }
        Self { grid, data }
    }

    pub fn inner(&self, other: &Self) -> C64 {
        dot(&self.data, &other.data) * self.grid.cell()
    }

    pub fn norm(&self) -> f64 {
        (norm_sqr(&self.data) * self.grid.cell()).sqrt()
    }

    pub fn normalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            self.data.iter_mut().for_each(|z| *z /= n);
        }
    }

    /// Multiplies pointwise by `f(x, y)`.
    pub fn map_points(&self, f: impl Fn(f64, f64) -> C64) -> Self {
        let g = &self.grid;
        let mut out = self.clone();
        for iy in 0..g.ny {
            let y = g.y(iy);
            for ix in 0..g.nx {
                out.data[g.index(ix, iy)] *= f(g.x(ix), y);
            }
        }
        out
    }

    /// Normalized mean and second moment of the lab positions.
    pub fn position_moments(&self) -> (Vector2<f64>, Matrix2<f64>) {
        let g = &self.grid;
        let mut n = 0.0;
        let mut m = Vector2::zeros();
        let mut s = Matrix2::zeros();
        for iy in 0..g.ny {
            let y = g.y(iy);
            for ix in 0..g.nx {
                let x = g.x(ix);
                let p = self.data[g.index(ix, iy)].norm_sqr();
                n += p;
                m += Vector2::new(x, y) * p;
                s += Matrix2::new(x * x, x * y, x * y, y * y) * p;
            }
        }
        (m / n, s / n)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub(crate) fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// `y += alpha * x`
pub(crate) fn axpy(alpha: C64, x: &[C64], y: &mut [C64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}
