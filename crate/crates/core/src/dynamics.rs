//! Displaced (coherent) and squeezed states and their time evolution.
//!
//! Everything is expressed through the normal-mode vectors: with
//! `X = √ħ Σ_j (v_j a_j + v_j* a_j†)` a displacement shifts the phase-space
//! center by `√ħ(α_j v_j + c.c.)`, and squeezing mode `j` reshapes its
//! contribution to the covariance.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::normal_modes::NormalModes;
use crate::states::PolyGaussianState;

const I: C64 = C64::new(0.0, 1.0);

/// Displacement amplitudes `α₁`, `α₂`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoherentSpec {
    pub alpha: [C64; 2],
}

impl CoherentSpec {
    pub fn new(alpha1: C64, alpha2: C64) -> Self {
        Self { alpha: [alpha1, alpha2] }
    }
}

/// Squeeze parameters `ζ_i = ρ_i e^{iφ_i}`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SqueezeSpec {
    pub zeta: [C64; 2],
}

impl SqueezeSpec {
    pub fn new(zeta1: C64, zeta2: C64) -> Self {
        Self { zeta: [zeta1, zeta2] }
    }

    pub fn rho(&self, i: usize) -> f64 {
        self.zeta[i].norm()
    }

    pub fn phi(&self, i: usize) -> f64 {
        self.zeta[i].arg()
    }
}

/// Position and momentum shift of a displacement, `(x^D, y^D)` and
/// `(p^D_x, p^D_y)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Displacement {
    pub x: [f64; 2],
    pub p: [f64; 2],
}

impl Displacement {
    /// As a phase-space vector `(x, p_x, y, p_y)`.
    pub fn phase_space(&self) -> Vector4<f64> {
        Vector4::new(self.x[0], self.p[0], self.x[1], self.p[1])
    }
}

/// Sampled packet centers and, for squeezed states, uncertainties.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub centers: Vec<Vector4<f64>>,
    pub uncertainties: Option<Vec<Vector4<f64>>>,
}

/// `x^D_i = −2√ħ Im(α_j η*_ji)`, `p^D_i = 2√ħ Im(α_j ξ*_ji)`.
pub fn displacement_shift(spec: &CoherentSpec, modes: &NormalModes, hbar: f64) -> Displacement {
    let xi = modes.xi();
    let eta = modes.eta();
    let sh = hbar.sqrt();
    let mut d = Displacement::default();
    for i in 0..2 {
        let mut ex = C64::from(0.0);
        let mut ep = C64::from(0.0);
        for j in 0..2 {
            ex += spec.alpha[j] * eta[(j, i)].conj();
            ep += spec.alpha[j] * xi[(j, i)].conj();
        }
        d.x[i] = -2.0 * sh * ex.im;
        d.p[i] = 2.0 * sh * ep.im;
    }
    d
}

/// Amplitude of the displaced state at a lab point:
/// `exp(−i x^D·p^D / 2ħ) exp(i p^D·x̃ / ħ) φ(x̃ − x^D)`.
pub fn displaced_wavefunction(
    base: &PolyGaussianState,
    shift: &Displacement,
    hbar: f64,
    x: f64,
    y: f64,
) -> C64 {
    let xt = x - base.form.center[0];
    let yt = y - base.form.center[1];
    let xp = shift.x[0] * shift.p[0] + shift.x[1] * shift.p[1];
    let phase = (-0.5 * xp + shift.p[0] * xt + shift.p[1] * yt) / hbar;
    (I * phase).exp() * base.eval_relative(xt - shift.x[0], yt - shift.x[1])
}

/// `α_i → e^{−iσ_i t} α_i`.
pub fn evolve_coherent(spec: &CoherentSpec, sigmas: (f64, f64), t: f64) -> CoherentSpec {
    let s = [sigmas.0, sigmas.1];
    CoherentSpec {
        alpha: [0, 1].map(|i| spec.alpha[i] * (-I * s[i] * t).exp()),
    }
}

/// `ζ_i → e^{−2iσ_i t} ζ_i`.
pub fn evolve_squeeze(spec: &SqueezeSpec, sigmas: (f64, f64), t: f64) -> SqueezeSpec {
    let s = [sigmas.0, sigmas.1];
    SqueezeSpec {
        zeta: [0, 1].map(|i| spec.zeta[i] * (-2.0 * I * s[i] * t).exp()),
    }
}

/// `x^c(t) = √ħ Σ_j (e^{−iσ_j t} α_j v_j + c.c.)`.
pub fn center_at(spec: &CoherentSpec, modes: &NormalModes, hbar: f64, t: f64) -> Vector4<f64> {
    let a = evolve_coherent(spec, modes.sigmas(), t);
    let sh = hbar.sqrt();
    Vector4::from_fn(|k, _| {
        let z: C64 = (0..2).map(|j| a.alpha[j] * modes.v[j][k]).sum();
        2.0 * sh * z.re
    })
}

pub fn center_trajectory(
    spec: &CoherentSpec,
    modes: &NormalModes,
    hbar: f64,
    times: &[f64],
) -> Trajectory {
    Trajectory {
        times: times.to_vec(),
        centers: times.iter().map(|&t| center_at(spec, modes, hbar, t)).collect(),
        uncertainties: None,
    }
}

/// Symmetrized covariance of the squeezed number state `|n₁n₂, ζ⟩` at time
/// `t`:
/// `C_αβ = ħ Σ_j (2n_j+1)[Re(v_jα v_jβ*) cosh 2ρ_j + Re(v_jα v_jβ e^{iφ_j − 2iσ_j t}) sinh 2ρ_j]`.
pub fn squeezed_covariance(
    spec: &SqueezeSpec,
    modes: &NormalModes,
    hbar: f64,
    n: [u32; 2],
    t: f64,
) -> Matrix4<f64> {
    let s = modes.sigmas();
    let s = [s.0, s.1];
    let mut c = Matrix4::zeros();
    for j in 0..2 {
        let rho = spec.rho(j);
        let phase = (I * (spec.phi(j) - 2.0 * s[j] * t)).exp();
        let w = hbar * f64::from(2 * n[j] + 1);
        let v = &modes.v[j];
        for a in 0..4 {
            for b in 0..4 {
                let direct = (v[a] * v[b].conj()).re * (2.0 * rho).cosh();
                let anomalous = (v[a] * v[b] * phase).re * (2.0 * rho).sinh();
                c[(a, b)] += w * (direct + anomalous);
            }
        }
    }
    c
}

/// `Δ_t X_α`, the square roots of the diagonal of [`squeezed_covariance`].
/// The centers stay at the origin.
pub fn squeezed_uncertainties(
    spec: &SqueezeSpec,
    modes: &NormalModes,
    hbar: f64,
    n: [u32; 2],
    t: f64,
) -> Result<Vector4<f64>> {
    let c = squeezed_covariance(spec, modes, hbar, n, t);
    let mut out = Vector4::zeros();
    for a in 0..4 {
        let r = c[(a, a)];
        if r < -1e-12 {
            return Err(Error::NegativeRadicand { component: a, value: r });
        }
        out[a] = r.max(0.0).sqrt();
    }
    Ok(out)
}

pub fn squeezed_trajectory(
    spec: &SqueezeSpec,
    modes: &NormalModes,
    hbar: f64,
    n: [u32; 2],
    times: &[f64],
) -> Result<Trajectory> {
    let unc = times
        .iter()
        .map(|&t| squeezed_uncertainties(spec, modes, hbar, n, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory {
        times: times.to_vec(),
        centers: vec![Vector4::zeros(); times.len()],
        uncertainties: Some(unc),
    })
}

/// `samples` equally spaced times on `[0, duration]`.
pub fn time_grid(duration: f64, samples: usize) -> Vec<f64> {
    if samples < 2 {
        return vec![0.0];
    }
    (0..samples)
        .map(|i| duration * i as f64 / (samples - 1) as f64)
        .collect()
}

/// Default sampling: 512 points per `2π/σ₂`.
pub fn default_times(modes: &NormalModes, periods: f64) -> Vec<f64> {
    let period = 2.0 * std::f64::consts::PI / modes.sigma2;
    let samples = (512.0 * periods).ceil() as usize + 1;
    time_grid(period * periods, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::PhysicalSystem;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn modes(wx: f64, wy: f64, b: f64) -> NormalModes {
        let s = PhysicalSystem {
            omega_x: wx,
            omega_y: wy,
            b_z: b,
            ..Default::default()
        };
        NormalModes::generic(&s.derive(), 1.0).unwrap()
    }

    fn rk4(omega: &Matrix4<f64>, x0: Vector4<f64>, t: f64, steps: usize) -> Vector4<f64> {
        let h = t / steps as f64;
        let mut x = x0;
        for _ in 0..steps {
            let k1 = omega * x;
            let k2 = omega * (x + 0.5 * h * k1);
            let k3 = omega * (x + 0.5 * h * k2);
            let k4 = omega * (x + h * k3);
            x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        x
    }

    #[test]
    fn zero_displacement() {
        let m = modes(1.0, 2.0, 1.4);
        let d = displacement_shift(&CoherentSpec::default(), &m, 1.0);
        assert_eq!(d, Displacement::default());
        assert_eq!(center_at(&CoherentSpec::default(), &m, 1.0, 3.0), Vector4::zeros());
    }

    #[test]
    fn shift_matches_center_at_zero() {
        let m = modes(1.0, 2.0, 1.4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let spec = CoherentSpec::new(
                C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
                C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)),
            );
            let d = displacement_shift(&spec, &m, 1.3).phase_space();
            let c = center_at(&spec, &m, 1.3, 0.0);
            assert!((d - c).amax() < 1e-12);
        }
    }

    #[test]
    fn displaced_modulus_is_translated() {
        let m = modes(1.0, 2.0, 1.4);
        let g = PolyGaussianState::number_state(&m, 1.0, 1, 0).unwrap();
        let spec = CoherentSpec::new(C64::new(0.4, -0.3), C64::new(-0.2, 0.5));
        let d = displacement_shift(&spec, &m, 1.0);
        for (x, y) in [(0.2, 0.1), (-0.7, 0.4), (1.1, -0.9)] {
            let a = displaced_wavefunction(&g, &d, 1.0, x, y).norm();
            let b = g.eval(x - d.x[0], y - d.x[1]).norm();
            assert!((a - b).abs() < 1e-12);
        }
        let zero = displaced_wavefunction(&g, &Displacement::default(), 1.0, 0.3, 0.2);
        assert_eq!(zero, g.eval(0.3, 0.2));
    }

    #[test]
    fn coherent_phase_rotation() {
        let spec = CoherentSpec::new(C64::new(0.5, 0.5), C64::new(1.0, -1.0));
        assert_eq!(evolve_coherent(&spec, (2.0, 1.0), 0.0), spec);
        let t = 2.0 * std::f64::consts::PI / 2.0;
        let e = evolve_coherent(&spec, (2.0, 0.7), t);
        assert!((e.alpha[0] - spec.alpha[0]).norm() < 1e-14);
        let rot = (-I * 2.0 * std::f64::consts::PI * 0.7 / 2.0).exp();
        assert!((e.alpha[1] - spec.alpha[1] * rot).norm() < 1e-14);
    }

    #[test]
    fn squeeze_phase_rotation() {
        let spec = SqueezeSpec::new(C64::new(0.3, 0.1), C64::new(-0.2, 0.4));
        assert_eq!(evolve_squeeze(&spec, (2.0, 1.0), 0.0), spec);
        let a = evolve_squeeze(&spec, (2.0, 1.0), 0.37);
        let c = evolve_coherent(&CoherentSpec { alpha: spec.zeta }, (4.0, 2.0), 0.37);
        for i in 0..2 {
            assert_relative_eq!(a.rho(i), spec.rho(i), epsilon = 1e-15);
            assert!((a.zeta[i] - c.alpha[i]).norm() < 1e-15);
        }
    }

    #[test]
    fn center_obeys_linear_flow() {
        let m = modes(1.0, 2.0, 1.4);
        let spec = CoherentSpec::new(C64::new(0.7, 0.2), C64::new(-0.4, 0.9));
        let dt = 1e-4;
        for t in [0.0, 0.8, 3.1] {
            let d = (center_at(&spec, &m, 1.0, t + dt) - center_at(&spec, &m, 1.0, t - dt)) / (2.0 * dt);
            let f = m.omega.matrix * center_at(&spec, &m, 1.0, t);
            assert!((d - f).amax() < 1e-6 * f.amax());
        }
    }

    #[test]
    fn center_matches_classical_rk4() {
        let m = modes(1.0, 2.0, 1.4);
        let spec = CoherentSpec::new(C64::new(0.7, 0.2), C64::new(-0.4, 0.9));
        let x0 = center_at(&spec, &m, 1.0, 0.0);
        let period = 2.0 * std::f64::consts::PI / m.sigma2;
        let x = rk4(&m.omega.matrix, x0, period, 20_000);
        assert!((x - center_at(&spec, &m, 1.0, period)).amax() < 1e-8);
    }

    #[test]
    fn unsqueezed_ground_matches_state_moments() {
        let m = modes(1.0, 2.0, 1.4);
        let c = squeezed_covariance(&SqueezeSpec::default(), &m, 1.0, [0, 0], 0.0);
        let g = PolyGaussianState::ground(&m, 1.0).unwrap().moments(1.0).unwrap();
        assert!((c - g.covariance).amax() < 1e-12);
        let c = squeezed_covariance(&SqueezeSpec::default(), &m, 1.0, [2, 1], 0.0);
        let s = PolyGaussianState::number_state(&m, 1.0, 2, 1).unwrap().moments(1.0).unwrap();
        assert!((c - s.covariance).amax() < 1e-10);
    }

    #[test]
    fn squeezed_half_period() {
        let m = modes(1.0, 2.0, 1.4);
        let spec = SqueezeSpec::new(C64::new(0.5, 0.0), C64::from(0.0));
        let a = squeezed_uncertainties(&spec, &m, 1.0, [0, 0], 0.3).unwrap();
        let b = squeezed_uncertainties(&spec, &m, 1.0, [0, 0], 0.3 + std::f64::consts::PI / m.sigma1).unwrap();
        assert!((a - b).amax() < 1e-12);
    }

    #[test]
    fn squeezed_covariance_is_physical() {
        // Squeezing is a symplectic map, so the state stays pure: the
        // symplectic eigenvalues of C are still ħ/2.
        let m = modes(1.0, 2.0, 1.4);
        let spec = SqueezeSpec::new(C64::new(0.3, 0.4), C64::new(-0.6, 0.1));
        let c = squeezed_covariance(&spec, &m, 1.0, [0, 0], 0.9);
        let j = crate::normal_modes::symplectic_form();
        let k = j * c;
        let k2 = k * k;
        // tr((JC)²) = −2 Σ ν_i² with ν = ħ/2 for both modes.
        assert_relative_eq!(k2.trace(), -1.0, epsilon = 1e-12);
    }

    #[test]
    fn default_sampling() {
        let m = modes(1.0, 2.0, 1.4);
        let t = default_times(&m, 1.0);
        assert_eq!(t.len(), 513);
        assert_relative_eq!(*t.last().unwrap(), 2.0 * std::f64::consts::PI / m.sigma2);
    }

    proptest! {
        #[test]
        fn shifts_are_real_and_moduli_kept(ar in -2.0f64..2.0, ai in -2.0f64..2.0, t in 0.0f64..50.0) {
            let m = modes(1.3, 0.7, -0.9);
            let spec = CoherentSpec::new(C64::new(ar, ai), C64::new(ai, -ar));
            let e = evolve_coherent(&spec, m.sigmas(), t);
            prop_assert!((e.alpha[0].norm() - spec.alpha[0].norm()).abs() < 1e-14);
            let d = displacement_shift(&spec, &m, 1.0).phase_space();
            prop_assert!((d - center_at(&spec, &m, 1.0, 0.0)).amax() < 1e-12);
        }

        #[test]
        fn squeezed_radicand_positive(r1 in 0.0f64..1.5, p1 in -3.0f64..3.0, r2 in 0.0f64..1.5, t in 0.0f64..10.0) {
            let m = modes(1.0, 2.0, 1.4);
            let spec = SqueezeSpec::new(C64::from_polar(r1, p1), C64::from_polar(r2, -p1));
            prop_assert!(squeezed_uncertainties(&spec, &m, 1.0, [1, 0], t).is_ok());
        }
    }
}
