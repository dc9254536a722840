//! Lowest eigenpairs of a Hermitian [`Operator`].
//!
//! A search subspace is grown with shift-inverted Ritz residuals
//! `(H − σ)⁻¹ (H − θ_i) x_i`, which span the same space as the shift-inverted
//! Ritz vectors but keep the inner-solve error proportional to the residual.
//! σ sits below the spectrum, so `H − σ` is positive definite and the inner
//! solves are preconditioned CG. The basis is kept orthonormal by repeated
//! Gram–Schmidt and projected with `H` itself, so loose inner solves only
//! slow convergence and never bias the eigenvalues.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::grid::{axpy, dot, norm_sqr};
use super::grid::GridField;
use super::operator::{DiscreteHamiltonian, Operator};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenOptions {
    /// Required `‖Hψ − Eψ‖ / ‖ψ‖`.
    pub tolerance: f64,
    /// Outer iteration cap.
    pub max_iterations: usize,
    /// Relative residual of the inner CG solves.
    pub inner_tolerance: f64,
    pub inner_max: usize,
    /// Extra Ritz vectors carried along beyond the requested count.
    pub guard: usize,
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            max_iterations: 10_000,
            inner_tolerance: 1e-8,
            inner_max: 50_000,
            guard: 3,
            seed: 0x5eed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    /// Unit Euclidean norm.
    pub vector: Vec<C64>,
    pub residual: f64,
}

/// Statistics of a solve, for reporting.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EigenStats {
    pub outer_iterations: usize,
    pub inner_iterations: usize,
    pub shift: f64,
}

fn apply_vec<O: Operator>(op: &O, x: &[C64]) -> Vec<C64> {
    let mut y = vec![C64::from(0.0); x.len()];
    op.apply(x, &mut y);
    y
}

/// Solves `(H − σ) x = b` by Jacobi-preconditioned CG. Fails with
/// `IndefiniteShift` on non-positive curvature.
pub fn shifted_cg<O: Operator>(
    op: &O,
    shift: f64,
    precond: &[f64],
    b: &[C64],
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<C64>, usize)> {
    let n = b.len();
    let bnorm = norm_sqr(b).sqrt();
    let mut x = vec![C64::from(0.0); n];
    if bnorm == 0.0 {
        return Ok((x, 0));
    }
    let mut r = b.to_vec();
    let mut z: Vec<C64> = r.iter().zip(precond).map(|(ri, d)| ri / (d - shift)).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z).re;
    let mut ap = vec![C64::from(0.0); n];
    for it in 1..=max_iter {
        op.apply(&p, &mut ap);
        axpy(C64::from(-shift), &p, &mut ap);
        let pap = dot(&p, &ap).re;
        if pap.is_nan() || pap <= 0.0 {
            return Err(Error::IndefiniteShift { shift });
        }
        let alpha = rz / pap;
        axpy(C64::from(alpha), &p, &mut x);
        axpy(C64::from(-alpha), &ap, &mut r);
        let rn = norm_sqr(&r).sqrt();
        if rn <= tol * bnorm {
            return Ok((x, it));
        }
        for ((zi, ri), d) in z.iter_mut().zip(&r).zip(precond) {
            *zi = ri / (d - shift);
        }
        let rz_new = dot(&r, &z).re;
        let beta = rz_new / rz;
        rz = rz_new;
        for (pi, zi) in p.iter_mut().zip(&z) {
            *pi = zi + *pi * beta;
        }
    }
    let rn = norm_sqr(&r).sqrt() / bnorm;
    Err(Error::SolverStall {
        iterations: max_iter,
        residual: rn,
    })
}

/// Ritz values of `steps` Lanczos steps with full reorthogonalization,
/// ascending, and the residual bound of the lowest one.
fn lanczos_ritz<O: Operator>(op: &O, steps: usize, rng: &mut ChaCha8Rng) -> (Vec<f64>, f64) {
    let n = op.dim();
    let steps = steps.min(n);
    let mut q: Vec<C64> = (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), 0.0)).collect();
    let nq = norm_sqr(&q).sqrt();
    q.iter_mut().for_each(|z| *z /= nq);
    let mut basis: Vec<Vec<C64>> = vec![q];
    let mut alpha = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    for j in 0..steps {
        let mut w = apply_vec(op, &basis[j]);
        let a = dot(&basis[j], &w).re;
        alpha.push(a);
        for _ in 0..2 {
            for v in &basis {
                let c = dot(v, &w);
                axpy(-c, v, &mut w);
            }
        }
        let b = norm_sqr(&w).sqrt();
        if j + 1 == steps || b < 1e-12 {
            beta.push(b);
            break;
        }
        beta.push(b);
        w.iter_mut().for_each(|z| *z /= b);
        basis.push(w);
    }
    let k = alpha.len();
    let t = DMatrix::from_fn(k, k, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(t);
    let mut idx: Vec<usize> = (0..k).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals: Vec<f64> = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let res = (beta[k - 1] * eig.eigenvectors[(k - 1, idx[0])]).abs();
    (vals, res)
}

struct Subspace {
    v: Vec<Vec<C64>>,
    hv: Vec<Vec<C64>>,
    g: Vec<Vec<C64>>,
}

impl Subspace {
    fn new() -> Self {
        Self {
            v: Vec::new(),
            hv: Vec::new(),
            g: Vec::new(),
        }
    }

    fn len(&self) -> usize {
        self.v.len()
    }

    /// Orthonormalizes `w` against the basis and appends it; `false` if it
    /// was (numerically) already contained.
    fn push<O: Operator>(&mut self, op: &O, mut w: Vec<C64>) -> bool {
        let before = norm_sqr(&w).sqrt();
        if before == 0.0 {
            return false;
        }
        for _ in 0..2 {
            for v in &self.v {
                let c = dot(v, &w);
                axpy(-c, v, &mut w);
            }
        }
        let after = norm_sqr(&w).sqrt();
        if after < 1e-10 * before {
            return false;
        }
        w.iter_mut().for_each(|z| *z /= after);
        let hw = apply_vec(op, &w);
        let col: Vec<C64> = self.v.iter().map(|v| dot(v, &hw)).collect();
        for (row, c) in self.g.iter_mut().zip(&col) {
            row.push(*c);
        }
        let mut last: Vec<C64> = col.iter().map(|c| c.conj()).collect();
        last.push(C64::from(dot(&w, &hw).re));
        self.g.push(last);
        self.v.push(w);
        self.hv.push(hw);
        true
    }

    /// Ritz values (ascending) and coefficient vectors.
    fn rayleigh_ritz(&self) -> (Vec<f64>, Vec<Vec<C64>>) {
        let k = self.len();
        let g = DMatrix::from_fn(k, k, |i, j| {
            if i == j {
                C64::from(self.g[i][i].re)
            } else {
                0.5 * (self.g[i][j] + self.g[j][i].conj())
            }
        });
        let eig = SymmetricEigen::new(g);
        let mut idx: Vec<usize> = (0..k).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vecs = idx
            .iter()
            .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
            .collect();
        (vals, vecs)
    }

    fn combine(&self, y: &[C64]) -> (Vec<C64>, Vec<C64>) {
        let n = self.v[0].len();
        let mut x = vec![C64::from(0.0); n];
        let mut hx = vec![C64::from(0.0); n];
        for (j, c) in y.iter().enumerate() {
            axpy(*c, &self.v[j], &mut x);
            axpy(*c, &self.hv[j], &mut hx);
        }
        (x, hx)
    }
}

/// The `m` lowest eigenpairs of `op`, ascending.
pub fn lowest_eigenpairs_with<O: Operator>(
    op: &O,
    m: usize,
    opts: &EigenOptions,
) -> Result<(Vec<EigenPair>, EigenStats)> {
    let n = op.dim();
    if m == 0 || m > n {
        return Err(Error::ConvergenceFailure {
            iterations: 0,
            residual: f64::NAN,
        });
    }
    let p = (m + opts.guard).min(n);
    let max_basis = (6 * p).max(48).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let precond = op.diagonal();

    let (ritz, res) = lanczos_ritz(op, 120, &mut rng);
    let theta1 = ritz[0];
    let theta_m = ritz[(m - 1).min(ritz.len() - 1)];
    let mut margin = (0.5 * (theta_m - theta1))
        .max(2.0 * res)
        .max(1e-3 * theta1.abs().max(1.0));
    let mut shift = theta1 - margin;

    let mut stats = EigenStats::default();
    let mut space = Subspace::new();
    let mut pending: Vec<Vec<C64>> = (0..p)
        .map(|_| (0..n).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
        .collect();

    let mut worst = f64::INFINITY;
    for outer in 1..=opts.max_iterations {
        stats.outer_iterations = outer;
        for b in pending.drain(..) {
            let w = loop {
                match shifted_cg(op, shift, &precond, &b, opts.inner_tolerance, opts.inner_max) {
                    Ok((w, its)) => {
                        stats.inner_iterations += its;
                        break w;
                    }
                    Err(Error::IndefiniteShift { .. }) => {
                        margin *= 4.0;
                        shift = theta1 - margin;
                    }
                    Err(e) => return Err(e),
                }
            };
            space.push(op, w);
        }

        let (vals, vecs) = space.rayleigh_ritz();
        if vals[0] <= shift {
            margin = margin.max(2.0 * (shift - vals[0]));
            shift = vals[0] - margin;
        }
        let count = p.min(vals.len());
        let mut ritz_vectors = Vec::with_capacity(count);
        let mut converged = Vec::with_capacity(count);
        worst = 0.0;
        for i in 0..count {
            let (x, hx) = space.combine(&vecs[i]);
            let mut r = hx;
            axpy(C64::from(-vals[i]), &x, &mut r);
            let rn = norm_sqr(&r).sqrt() / norm_sqr(&x).sqrt();
            if i < m {
                worst = worst.max(rn);
            }
            converged.push(rn < opts.tolerance);
            ritz_vectors.push((vals[i], x, r, rn));
        }
        if count >= m && converged[..m].iter().all(|&c| c) {
            stats.shift = shift;
            let pairs = ritz_vectors
                .into_iter()
                .take(m)
                .map(|(value, x, _, residual)| {
                    let nx = norm_sqr(&x).sqrt();
                    EigenPair {
                        value,
                        vector: x.into_iter().map(|z| z / nx).collect(),
                        residual,
                    }
                })
                .collect();
            return Ok((pairs, stats));
        }

        pending = ritz_vectors
            .iter()
            .zip(&converged)
            .filter(|(_, &c)| !c)
            .map(|((_, _, r, _), _)| r.clone())
            .collect();
        if space.len() + pending.len() > max_basis {
            let keep = (2 * p).min(space.len());
            let mut fresh = Subspace::new();
            for y in vecs.iter().take(keep) {
                let (x, _) = space.combine(y);
                fresh.push(op, x);
            }
            space = fresh;
        }
    }
    Err(Error::ConvergenceFailure {
        iterations: opts.max_iterations,
        residual: worst,
    })
}

pub fn lowest_eigenpairs_op<O: Operator>(op: &O, m: usize) -> Result<Vec<EigenPair>> {
    Ok(lowest_eigenpairs_with(op, m, &EigenOptions::default())?.0)
}

/// The `m` lowest `(energy, state)` pairs of a discretized Hamiltonian, each
/// state normalized under the grid inner product.
pub fn lowest_eigenpairs(h: &DiscreteHamiltonian, m: usize) -> Result<Vec<(f64, GridField)>> {
    let pairs = lowest_eigenpairs_op(h, m)?;
    Ok(pairs
        .into_iter()
        .map(|p| {
            let mut f = GridField {
                grid: h.grid,
                data: p.vector,
            };
            f.normalize();
            (p.value, f)
        })
        .collect())
}
