//! Crank–Nicolson time stepping.
//!
//! Each step solves `(I + iτH')ψ_{n+1} = (I − iτH')ψ_n` with `τ = dt/2ħ` and
//! `H' = H − E_ref`, where `E_ref = ⟨ψ_0|H|ψ_0⟩`. The reference energy only
//! removes a global phase from the exact evolution and keeps the Cayley
//! phases small. The linear system is solved by CG on the normal equations
//! `(I + τ²H'²)ψ_{n+1} = (I − iτH')²ψ_n`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::states::Moments;

use super::grid::{axpy, norm_sqr, GridField};
use super::operator::{DiscreteHamiltonian, Operator};
use super::spectral::SpectralDerivative;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationOptions {
    pub dt: f64,
    pub steps: usize,
    /// Moments are recorded every this many steps, and after the last one.
    pub record_every: usize,
    /// Relative residual of each implicit solve.
    pub tolerance: f64,
    pub max_inner: usize,
    /// Origin of the recorded positions.
    pub origin: [f64; 2],
}

impl PropagationOptions {
    pub fn new(dt: f64, steps: usize) -> Self {
        Self {
            dt,
            steps,
            record_every: 1,
            tolerance: 1e-12,
            max_inner: 10_000,
            origin: [0.0, 0.0],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationRecord {
    pub step: usize,
    pub time: f64,
    /// Grid norm `‖ψ‖`.
    pub norm: f64,
    pub moments: Moments,
}

#[derive(Debug, Clone)]
pub struct Propagation {
    pub records: Vec<PropagationRecord>,
    pub final_state: GridField,
    /// Largest `|‖ψ_{n+1}‖ − ‖ψ_n‖|` over all steps.
    pub max_step_drift: f64,
    pub inner_iterations: usize,
}

/// Largest `|H_ii|`; `dt` times this should stay below ½ for accuracy.
pub fn diagonal_scale(h: &DiscreteHamiltonian) -> f64 {
    h.diagonal().iter().fold(0.0, |m, d| m.max(d.abs()))
}

struct Shifted<'a> {
    h: &'a DiscreteHamiltonian,
    e_ref: f64,
}

impl Shifted<'_> {
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        self.h.apply(x, y);
        axpy(C64::from(-self.e_ref), x, y);
    }
}

fn normal_cg(
    op: &Shifted,
    tau: f64,
    rhs: &[C64],
    x: &mut [C64],
    tol: f64,
    max_iter: usize,
) -> Result<usize> {
    let n = rhs.len();
    let mut t = vec![C64::from(0.0); n];
    let mut nx = vec![C64::from(0.0); n];
    let tau2 = C64::from(tau * tau);
    let mut normal = |v: &[C64], out: &mut [C64]| {
        op.apply(v, &mut t);
        op.apply(&t, out);
        for (o, vi) in out.iter_mut().zip(v) {
            *o = vi + tau2 * *o;
        }
    };
    normal(x, &mut nx);
    let mut r: Vec<C64> = rhs.iter().zip(&nx).map(|(b, a)| b - a).collect();
    let bnorm = norm_sqr(rhs).sqrt();
    let mut rr = norm_sqr(&r);
    if rr.sqrt() <= tol * bnorm {
        return Ok(0);
    }
    let mut p = r.clone();
    let mut ap = vec![C64::from(0.0); n];
    for it in 1..=max_iter {
        normal(&p, &mut ap);
        let pap = super::grid::dot(&p, &ap).re;
        let alpha = rr / pap;
        axpy(C64::from(alpha), &p, x);
        axpy(C64::from(-alpha), &ap, &mut r);
        let rr_new = norm_sqr(&r);
        if rr_new.sqrt() <= tol * bnorm {
            return Ok(it);
        }
        let beta = rr_new / rr;
        rr = rr_new;
        for (pi, ri) in p.iter_mut().zip(&r) {
            *pi = ri + *pi * beta;
        }
    }
    Err(Error::SolverStall {
        iterations: max_iter,
        residual: rr.sqrt() / bnorm,
    })
}

pub fn propagate(
    h: &DiscreteHamiltonian,
    initial: &GridField,
    opts: &PropagationOptions,
) -> Result<Propagation> {
    let hbar = h.hamiltonian.hbar;
    let spectral = SpectralDerivative::new(h.grid);
    let tau = opts.dt / (2.0 * hbar);
    let e_ref = h.expectation(initial);
    let op = Shifted { h, e_ref };
    let n = initial.data.len();
    let every = opts.record_every.max(1);

    let record = |step: usize, f: &GridField| PropagationRecord {
        step,
        time: step as f64 * opts.dt,
        norm: f.norm(),
        moments: spectral.moments(f, opts.origin, hbar),
    };

    let mut psi = initial.clone();
    let mut prev = initial.data.clone();
    let mut records = vec![record(0, &psi)];
    let mut hw = vec![C64::from(0.0); n];
    let mut rhs = vec![C64::from(0.0); n];
    let mut max_step_drift: f64 = 0.0;
    let mut inner_iterations = 0;
    let mit = C64::new(0.0, -tau);
    let mut norm_prev = psi.norm();
    for step in 1..=opts.steps {
        // rhs = (I − iτH')² ψ
        op.apply(&psi.data, &mut hw);
        let w: Vec<C64> = psi.data.iter().zip(&hw).map(|(p, h)| p + mit * h).collect();
        op.apply(&w, &mut hw);
        for ((r, wi), h) in rhs.iter_mut().zip(&w).zip(&hw) {
            *r = wi + mit * h;
        }
        let mut next: Vec<C64> = if step == 1 {
            w
        } else {
            psi.data.iter().zip(&prev).map(|(a, b)| 2.0 * a - b).collect()
        };
        inner_iterations += normal_cg(&op, tau, &rhs, &mut next, opts.tolerance, opts.max_inner)?;
        prev = std::mem::replace(&mut psi.data, next);
        let norm = psi.norm();
        max_step_drift = max_step_drift.max((norm - norm_prev).abs());
        norm_prev = norm;
        if step % every == 0 || step == opts.steps {
            records.push(record(step, &psi));
        }
    }
    Ok(Propagation {
        records,
        final_state: psi,
        max_step_drift,
        inner_iterations,
    })
}
