//! Exact wave functions.
//!
//! Excited states of the two-mode oscillator are kept as a bivariate
//! polynomial times the ground-state Gaussian. The ladder operators map this
//! family into itself, and inner products and moments reduce to Gaussian
//! moment integrals, so nothing here involves numerical differentiation.

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::normal_modes::{CRow4, Coupling, ModeParameters, NormalModes, QuadraticHamiltonian};
use crate::params::{classify, ConfigurationTag, PhysicalSystem, ZERO_TOL};
use crate::spectrum::landau_frame;

/// Largest total polynomial degree a state may reach.
pub const DEGREE_CAP: usize = 32;

const I: C64 = C64::new(0.0, 1.0);

/// Normalized oscillator eigenfunction `ψ_n` of frequency `omega` centered
/// at `center`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hermite1D {
    pub n: u32,
    pub omega: f64,
    pub mass: f64,
    pub hbar: f64,
    pub center: f64,
}

impl Hermite1D {
    pub fn new(n: u32, omega: f64, mass: f64, hbar: f64, center: f64) -> Self {
        Self {
            n,
            omega,
            mass,
            hbar,
            center,
        }
    }

    /// Three-term recurrence on the normalized functions, so no factorials
    /// or raw Hermite polynomials are formed.
    pub fn eval(&self, x: f64) -> f64 {
        let a = (self.mass * self.omega / self.hbar).sqrt();
        let xi = a * (x - self.center);
        let mut prev = 0.0;
        let mut cur = (a / std::f64::consts::PI.sqrt()).sqrt() * (-0.5 * xi * xi).exp();
        for k in 0..self.n {
            let k = f64::from(k);
            let next = (2.0 / (k + 1.0)).sqrt() * xi * cur - (k / (k + 1.0)).sqrt() * prev;
            prev = cur;
            cur = next;
        }
        cur
    }
}

/// Real-valued amplitude of a 1D oscillator eigenfunction.
pub fn hermite_eval(h: &Hermite1D, x: f64) -> f64 {
    h.eval(x)
}

/// `exp(−½ x̃ᵀ Γ x̃)` with complex symmetric `Γ` (`Γ = Λ/ħ`) and positive
/// definite real part. `center` is the lab position of the `x̃` origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianForm {
    pub gamma: Matrix2<C64>,
    pub center: [f64; 2],
}

impl GaussianForm {
    pub fn new(gamma: Matrix2<C64>, center: [f64; 2]) -> Result<Self> {
        let g = Matrix2::new(
            gamma[(0, 0)],
            0.5 * (gamma[(0, 1)] + gamma[(1, 0)]),
            0.5 * (gamma[(0, 1)] + gamma[(1, 0)]),
            gamma[(1, 1)],
        );
        let re = g.map(|z| z.re);
        if !(re[(0, 0)] > 0.0 && re.determinant() > 0.0) || !g.iter().all(|z| z.is_finite()) {
            return Err(Error::NonNormalizable);
        }
        Ok(Self { gamma: g, center })
    }

    /// `Γ = [[λ_x², iλ_xy], [iλ_xy, λ_y²]]`.
    pub fn from_lambdas(lambda_x2: f64, lambda_y2: f64, lambda_xy: f64) -> Result<Self> {
        Self::new(
            Matrix2::new(
                C64::from(lambda_x2),
                I * lambda_xy,
                I * lambda_xy,
                C64::from(lambda_y2),
            ),
            [0.0, 0.0],
        )
    }

    /// The pure centered Gaussian whose symmetrized covariance in
    /// `(x̃, p_x, ỹ, p_y)` is `cov`. Only the position block and the
    /// position-momentum block are read; for a pure state they fix the rest.
    pub fn from_covariance(cov: &Matrix4<f64>, hbar: f64) -> Result<Self> {
        let sxx = Matrix2::new(cov[(0, 0)], cov[(0, 2)], cov[(2, 0)], cov[(2, 2)]);
        let sxp = Matrix2::new(cov[(0, 1)], cov[(0, 3)], cov[(2, 1)], cov[(2, 3)]);
        let inv = sxx.try_inverse().ok_or(Error::NonNormalizable)?;
        let a = 0.5 * inv;
        let b = -(inv * sxp) / hbar;
        let b = 0.5 * (b + b.transpose());
        Self::new(
            Matrix2::from_fn(|i, j| C64::new(a[(i, j)], b[(i, j)])),
            [0.0, 0.0],
        )
    }

    pub fn with_center(mut self, center: [f64; 2]) -> Self {
        self.center = center;
        self
    }

    pub fn lambda_x2(&self) -> f64 {
        self.gamma[(0, 0)].re
    }

    pub fn lambda_y2(&self) -> f64 {
        self.gamma[(1, 1)].re
    }

    pub fn lambda_xy(&self) -> f64 {
        self.gamma[(0, 1)].im
    }

    /// `(det Re Γ)^{1/4} / √π`, which normalizes the bare Gaussian.
    pub fn norm_const(&self) -> f64 {
        self.gamma.map(|z| z.re).determinant().powf(0.25) / std::f64::consts::PI.sqrt()
    }

    /// Position covariance `½ (Re Γ)⁻¹` of the bare Gaussian.
    pub fn position_covariance(&self) -> Matrix2<f64> {
        0.5 * self.gamma.map(|z| z.re).try_inverse().unwrap_or_else(Matrix2::zeros)
    }

    pub fn exponent(&self, xt: f64, yt: f64) -> C64 {
        let g = &self.gamma;
        -0.5 * (g[(0, 0)] * xt * xt + 2.0 * g[(0, 1)] * xt * yt + g[(1, 1)] * yt * yt)
    }

    /// Smallest `λ` of the two axes, `sqrt(min Re Γ_ii)`.
    pub fn lambda_min(&self) -> f64 {
        self.lambda_x2().min(self.lambda_y2()).sqrt()
    }
}

/// Closed-form ground-state Gaussian of the reduced Hamiltonian.
pub fn ground_form(params: &ModeParameters, sigmas: (f64, f64), hbar: f64) -> Result<GaussianForm> {
    let (s1, s2) = sigmas;
    let wx = params.omega_x;
    let wy = params.omega_y;
    if wx <= ZERO_TOL || wy <= ZERO_TOL {
        return Err(Error::ZeroMode(format!("omega_x = {wx}, omega_y = {wy}")));
    }
    let m = params.mass;
    let wb = params.omega_b;
    let lx2 = m * wx * (s1 + s2) / (hbar * (wx + wy));
    let ly2 = m * wy * (s1 + s2) / (hbar * (wx + wy));
    let lxy = match params.coupling {
        Coupling::Symmetric => m * wb * (wx - wy) / (hbar * (wx + wy)),
        Coupling::Landau => -2.0 * m * wb * wy / (hbar * (wx + wy)),
    };
    GaussianForm::from_lambdas(lx2, ly2, lxy)
}

/// `Γ = iη⁻¹ξ / ħ` straight from the eigenvectors.
pub fn ground_gamma_from_modes(modes: &NormalModes, hbar: f64) -> Result<Matrix2<C64>> {
    let eta_inv = modes
        .eta()
        .try_inverse()
        .ok_or_else(|| Error::DegenerateMode("eta is singular".into()))?;
    Ok(eta_inv * modes.xi() * (I / hbar))
}

/// Dense bivariate polynomial `Σ c_ij x^i y^j` with `i + j <= degree`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly2 {
    degree: usize,
    c: Vec<C64>,
}

impl Poly2 {
    pub fn zero(degree: usize) -> Self {
        Self {
            degree,
            c: vec![C64::from(0.0); (degree + 1) * (degree + 1)],
        }
    }

    pub fn constant(v: C64) -> Self {
        Self { degree: 0, c: vec![v] }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeff(&self, i: usize, j: usize) -> C64 {
        if i + j <= self.degree {
            self.c[i * (self.degree + 1) + j]
        } else {
            C64::from(0.0)
        }
    }

    fn add(&mut self, i: usize, j: usize, v: C64) {
        let side = self.degree + 1;
        self.c[i * side + j] += v;
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        let d = self.degree;
        (0..=d).flat_map(move |i| (0..=d - i).map(move |j| (i, j, self.coeff(i, j))))
    }

    /// Total degree of the largest nonzero coefficient.
    pub fn effective_degree(&self) -> usize {
        self.terms()
            .filter(|t| t.2 != C64::from(0.0))
            .map(|t| t.0 + t.1)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: f64, y: f64) -> C64 {
        let d = self.degree;
        let mut acc = C64::from(0.0);
        for i in (0..=d).rev() {
            let mut row = C64::from(0.0);
            for j in (0..=d - i).rev() {
                row = row * y + self.coeff(i, j);
            }
            acc = acc * x + row;
        }
        acc
    }

    pub fn scale(&mut self, f: C64) {
        self.c.iter_mut().for_each(|z| *z *= f);
    }
}

/// First and second moments of `X = (x̃, p_x, ỹ, p_y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub norm: f64,
    pub mean: Vector4<f64>,
    /// `Re ⟨X_α X_β⟩`, i.e. the symmetrized second moment.
    pub second: Matrix4<f64>,
    pub covariance: Matrix4<f64>,
}

impl Moments {
    /// `(Δx̃, Δp_x, Δỹ, Δp_y)`.
    pub fn uncertainties(&self) -> Vector4<f64> {
        Vector4::from_fn(|i, _| self.covariance[(i, i)].max(0.0).sqrt())
    }
}

/// `P(x̃, ỹ) · exp(−½ x̃ᵀ Γ x̃)`; the polynomial carries the normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyGaussianState {
    pub poly: Poly2,
    pub form: GaussianForm,
    pub quanta: Option<(u32, u32)>,
}

impl PolyGaussianState {
    /// The normalized bare Gaussian.
    pub fn gaussian(form: GaussianForm) -> Self {
        Self {
            poly: Poly2::constant(C64::from(form.norm_const())),
            form,
            quanta: None,
        }
    }

    pub fn ground(modes: &NormalModes, hbar: f64) -> Result<Self> {
        let form = ground_form(&modes.params, modes.sigmas(), hbar)?;
        Ok(Self {
            quanta: Some((0, 0)),
            ..Self::gaussian(form)
        })
    }

    /// `(a₁†)^{n₁} (a₂†)^{n₂} |00⟩ / √(n₁! n₂!)`.
    pub fn number_state(modes: &NormalModes, hbar: f64, n1: u32, n2: u32) -> Result<Self> {
        let total = (n1 + n2) as usize;
        if total > DEGREE_CAP {
            return Err(Error::DegreeCap {
                degree: total,
                cap: DEGREE_CAP,
            });
        }
        let mut st = Self::ground(modes, hbar)?;
        for _ in 0..n2 {
            st = st.raise(modes, 2, hbar)?;
        }
        for _ in 0..n1 {
            st = st.raise(modes, 1, hbar)?;
        }
        Ok(st)
    }

    pub fn with_center(mut self, center: [f64; 2]) -> Self {
        self.form.center = center;
        self
    }

    /// Amplitude at relative coordinates `(x̃, ỹ)`.
    pub fn eval_relative(&self, xt: f64, yt: f64) -> C64 {
        self.poly.eval(xt, yt) * self.form.exponent(xt, yt).exp()
    }

    /// Amplitude at a lab point.
    pub fn eval(&self, x: f64, y: f64) -> C64 {
        self.eval_relative(x - self.form.center[0], y - self.form.center[1])
    }

    /// `(c · X) ψ` for a complex row `c` over `(x̃, p_x, ỹ, p_y)`.
    pub fn apply(&self, c: &CRow4, hbar: f64) -> Result<Self> {
        let d = self.poly.degree() + 1;
        if d > DEGREE_CAP + 2 {
            return Err(Error::DegreeCap {
                degree: d,
                cap: DEGREE_CAP,
            });
        }
        let g = &self.form.gamma;
        let ih = I * hbar;
        // −iħ ∂ of the Gaussian folds into multiplication by iħΓx̃.
        let ax = c[0] + ih * (c[1] * g[(0, 0)] + c[3] * g[(0, 1)]);
        let ay = c[2] + ih * (c[1] * g[(0, 1)] + c[3] * g[(1, 1)]);
        let dx = -ih * c[1];
        let dy = -ih * c[3];
        let mut out = Poly2::zero(d);
        for (i, j, v) in self.poly.terms() {
            if v == C64::from(0.0) {
                continue;
            }
            out.add(i + 1, j, v * ax);
            out.add(i, j + 1, v * ay);
            if i > 0 {
                out.add(i - 1, j, v * dx * i as f64);
            }
            if j > 0 {
                out.add(i, j - 1, v * dy * j as f64);
            }
        }
        Ok(Self {
            poly: out,
            form: self.form,
            quanta: None,
        })
    }

    /// `a_i† ψ / √(n_i + 1)` with `a_i† = u_i* X / √ħ`; `mode` is 1 or 2.
    pub fn raise(&self, modes: &NormalModes, mode: usize, hbar: f64) -> Result<Self> {
        let u = modes.u[mode - 1].conjugate();
        let n = match (self.quanta, mode) {
            (Some((n1, _)), 1) => Some(n1),
            (Some((_, n2)), _) => Some(n2),
            _ => None,
        };
        let factor = 1.0 / (hbar.sqrt() * f64::from(n.unwrap_or(0) + 1).sqrt());
        let mut out = self.apply(&u, hbar)?;
        out.poly.scale(C64::from(factor));
        out.quanta = self.quanta.map(|(a, b)| if mode == 1 { (a + 1, b) } else { (a, b + 1) });
        Ok(out)
    }

    /// `a_i ψ` with `a_i = u_i X / √ħ` (no normalization factor).
    pub fn lower(&self, modes: &NormalModes, mode: usize, hbar: f64) -> Result<Self> {
        let mut out = self.apply(&modes.u[mode - 1], hbar)?;
        out.poly.scale(C64::from(1.0 / hbar.sqrt()));
        Ok(out)
    }

    /// `⟨self | other⟩`, exact.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.form.center != other.form.center {
            return Err(Error::IncompatibleForms("different centers".into()));
        }
        let a = self.form.gamma.conjugate() + other.form.gamma;
        let table = GaussianMoments::new(&a, self.poly.degree() + other.poly.degree())?;
        let mut acc = C64::from(0.0);
        for (i, j, p) in self.poly.terms() {
            if p == C64::from(0.0) {
                continue;
            }
            let pc = p.conj();
            for (k, l, q) in other.poly.terms() {
                if q == C64::from(0.0) || (i + j + k + l) % 2 == 1 {
                    continue;
                }
                acc += pc * q * table.integral(i + k, j + l);
            }
        }
        Ok(acc)
    }

    pub fn norm_sqr(&self) -> Result<f64> {
        Ok(self.inner(self)?.re)
    }

    pub fn moments(&self, hbar: f64) -> Result<Moments> {
        let norm = self.norm_sqr()?;
        let basis: Vec<Self> = (0..4)
            .map(|a| {
                let mut c = CRow4::zeros();
                c[a] = C64::from(1.0);
                self.apply(&c, hbar)
            })
            .collect::<Result<_>>()?;
        let mut mean = Vector4::zeros();
        let mut second = Matrix4::zeros();
        for a in 0..4 {
            mean[a] = self.inner(&basis[a])?.re / norm;
            for b in a..4 {
                let v = basis[a].inner(&basis[b])?.re / norm;
                second[(a, b)] = v;
                second[(b, a)] = v;
            }
        }
        let covariance = second - mean * mean.transpose();
        Ok(Moments {
            norm,
            mean,
            second,
            covariance,
        })
    }

    /// `⟨H⟩ = ½ tr(ℋ ⟨X Xᵀ⟩)`.
    pub fn energy(&self, h: &QuadraticHamiltonian, hbar: f64) -> Result<f64> {
        let m = self.moments(hbar)?;
        Ok(0.5 * (h.matrix.component_mul(&m.second)).sum())
    }
}

/// Raises `state` in `mode` (1 or 2).
pub fn apply_raising(
    state: &PolyGaussianState,
    modes: &NormalModes,
    mode: usize,
    hbar: f64,
) -> Result<PolyGaussianState> {
    state.raise(modes, mode, hbar)
}

pub fn moments(state: &PolyGaussianState, hbar: f64) -> Result<Moments> {
    state.moments(hbar)
}

/// `∫ x^a y^b exp(−½ xᵀ A x)` for complex symmetric `A` with positive
/// definite real part, through the Gaussian moment recurrence with the
/// (complex) covariance `A⁻¹`.
struct GaussianMoments {
    side: usize,
    m: Vec<C64>,
    prefactor: C64,
}

impl GaussianMoments {
    fn new(a: &Matrix2<C64>, max_degree: usize) -> Result<Self> {
        let re = a.map(|z| z.re);
        if !(re[(0, 0)] > 0.0 && re.determinant() > 0.0) {
            return Err(Error::NonNormalizable);
        }
        let c = a.try_inverse().ok_or(Error::NonNormalizable)?;
        // Eigenvalues of A have positive real parts, so the principal root
        // of each one gives the analytic continuation of sqrt(det A).
        let half_tr = 0.5 * (a[(0, 0)] + a[(1, 1)]);
        let disc = (half_tr * half_tr - a.determinant()).sqrt();
        let sqrt_det = (half_tr + disc).sqrt() * (half_tr - disc).sqrt();
        let side = max_degree + 1;
        let mut m = vec![C64::from(0.0); side * side];
        m[0] = C64::from(1.0);
        for t in 1..=max_degree {
            for p in 0..=t {
                let q = t - p;
                let v = if p > 0 {
                    let mut v = C64::from(0.0);
                    if p >= 2 {
                        v += c[(0, 0)] * (p - 1) as f64 * m[(p - 2) * side + q];
                    }
                    if q >= 1 {
                        v += c[(0, 1)] * q as f64 * m[(p - 1) * side + q - 1];
                    }
                    v
                } else if q >= 2 {
                    c[(1, 1)] * (q - 1) as f64 * m[q - 2]
                } else {
                    C64::from(0.0)
                };
                m[p * side + q] = v;
            }
        }
        Ok(Self {
            side,
            m,
            prefactor: 2.0 * std::f64::consts::PI / sqrt_det,
        })
    }

    fn integral(&self, a: usize, b: usize) -> C64 {
        self.prefactor * self.m[a * self.side + b]
    }
}

/// Maps lab coordinates into the frame used by [`landau_frame`].
fn landau_coordinates(system: &PhysicalSystem, x: f64, y: f64) -> (f64, f64) {
    match classify(system) {
        ConfigurationTag::LandauY { mirrored: true } => (y, x),
        ConfigurationTag::BothPlanarFree { rotation } => {
            let (s, c) = rotation.sin_cos();
            (c * x + s * y, -s * x + c * y)
        }
        _ => (x, y),
    }
}

/// `e^{iky} ψ_{n₁}^{ω̃₁}(x − x_k) / √(2π)` in the Landau gauge `A_y = Bx`.
pub fn landau_wavefunction(system: &PhysicalSystem, n1: u32, k: f64, x: f64, y: f64) -> Result<C64> {
    let s = landau_frame(system)?;
    let df = s.derive();
    if df.tilde_omega_1 <= ZERO_TOL {
        return Err(Error::ZeroMode(
            "omega_x and B_z both vanish: free planar motion".into(),
        ));
    }
    let (xf, yf) = landau_coordinates(system, x, y);
    let xk = (s.charge * s.e_x + 2.0 * k * s.hbar * df.omega_b)
        / (s.mass * df.tilde_omega_1.powi(2));
    let h = Hermite1D::new(n1, df.tilde_omega_1, s.mass, s.hbar, xk);
    let plane = (I * k * yf).exp() / (2.0 * std::f64::consts::PI).sqrt();
    Ok(plane * h.eval(xf))
}

/// `ψ_{n₃}^{ω_z}(z − z₀)`.
pub fn z_wavefunction(system: &PhysicalSystem, n3: u32, z: f64) -> Result<f64> {
    if system.omega_z <= ZERO_TOL {
        return Err(Error::ZeroMode("omega_z = 0: z motion is not bound".into()));
    }
    let z0 = system.charge * system.e_z / (system.mass * system.omega_z.powi(2));
    Ok(Hermite1D::new(n3, system.omega_z, system.mass, system.hbar, z0).eval(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::DerivedFrequencies;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn df(wx: f64, wy: f64, wb: f64) -> DerivedFrequencies {
        PhysicalSystem {
            omega_x: wx,
            omega_y: wy,
            b_z: 2.0 * wb,
            ..Default::default()
        }
        .derive()
    }

    fn modes(wx: f64, wy: f64, wb: f64) -> NormalModes {
        NormalModes::generic(&df(wx, wy, wb), 1.0).unwrap()
    }

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn hermite_values() {
        let h0 = Hermite1D::new(0, 2.0, 1.5, 0.7, 0.3);
        assert_relative_eq!(h0.eval(0.3), (1.5 * 2.0 / (std::f64::consts::PI * 0.7)).powf(0.25));
        assert_eq!(Hermite1D::new(1, 1.0, 1.0, 1.0, 0.3).eval(0.3), 0.0);
        // n = 2 against the explicit polynomial (4x² − 2)/√8 · ψ₀.
        let x = 0.8;
        let expect = (4.0 * x * x - 2.0) / 8f64.sqrt()
            * std::f64::consts::PI.powf(-0.25)
            * (-x * x / 2.0).exp();
        assert_relative_eq!(Hermite1D::new(2, 1.0, 1.0, 1.0, 0.0).eval(x), expect, epsilon = 1e-15);
    }

    #[test]
    fn hermite_norm() {
        for n in [0, 3, 5, 9] {
            let h = Hermite1D::new(n, 1.0, 1.0, 1.0, 0.0);
            let norm = simpson(|x| h.eval(x).powi(2), -12.0, 12.0, 2000);
            assert!((norm - 1.0).abs() < 1e-10, "n = {n}: {norm}");
        }
        let a = Hermite1D::new(2, 1.0, 1.0, 1.0, 0.0);
        let b = Hermite1D::new(4, 1.0, 1.0, 1.0, 0.0);
        assert!(simpson(|x| a.eval(x) * b.eval(x), -12.0, 12.0, 2000).abs() < 1e-10);
    }

    #[test]
    fn ground_form_limits() {
        let m = modes(1.0, 2.0, 0.0);
        let f = ground_form(&m.params, m.sigmas(), 1.0).unwrap();
        assert_relative_eq!(f.lambda_x2(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(f.lambda_y2(), 2.0, epsilon = 1e-14);
        assert_eq!(f.lambda_xy(), 0.0);

        let m = modes(1.3, 1.3, 0.6);
        let f = ground_form(&m.params, m.sigmas(), 1.0).unwrap();
        let w1 = 1.3f64.hypot(0.6);
        assert_relative_eq!(f.lambda_x2(), w1, epsilon = 1e-14);
        assert_relative_eq!(f.lambda_y2(), w1, epsilon = 1e-14);
        assert_eq!(f.lambda_xy(), 0.0);
        assert_relative_eq!(f.norm_const(), (w1 / std::f64::consts::PI).sqrt(), epsilon = 1e-14);
    }

    #[test]
    fn closed_form_matches_eigenvectors() {
        for (wx, wy, wb) in [(1.0, 2.0, 0.7), (2.5, 0.4, -1.1), (1.0, 1.0, 0.3), (0.7, 1.9, 0.0)] {
            for tilted in [false, true] {
                let d = df(wx, wy, wb);
                let m = if tilted {
                    NormalModes::tilted(&d, 1.0).unwrap()
                } else {
                    NormalModes::generic(&d, 1.0).unwrap()
                };
                let f = ground_form(&m.params, m.sigmas(), 1.0).unwrap();
                let g = ground_gamma_from_modes(&m, 1.0).unwrap();
                let err = (g - f.gamma).iter().map(|z| z.norm()).fold(0.0, f64::max);
                assert!(err < 1e-12, "{wx} {wy} {wb} tilted={tilted}: {err}");
            }
        }
    }

    #[test]
    fn ground_is_annihilated() {
        let m = modes(1.0, 2.0, 0.7);
        let g = PolyGaussianState::ground(&m, 1.0).unwrap();
        for mode in [1, 2] {
            let a = g.lower(&m, mode, 1.0).unwrap();
            assert!(a.norm_sqr().unwrap() < 1e-26);
        }
        assert_relative_eq!(g.norm_sqr().unwrap(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn first_excited_closed_form() {
        let (wx, wy, wb) = (1.0, 2.0, 0.7);
        let m = modes(wx, wy, wb);
        let st = PolyGaussianState::number_state(&m, 1.0, 1, 0).unwrap();
        let f = ground_form(&m.params, m.sigmas(), 1.0).unwrap();
        let s1 = m.sigma1;
        let k1 = 1.0 / (2.0 * s1 * ((s1 * s1 - wy * wy).powi(2) + 4.0 * wb * wb * wy * wy)).sqrt();
        let (lx2, ly2, lxy) = (f.lambda_x2(), f.lambda_y2(), f.lambda_xy());
        let n0 = f.norm_const();
        for (x, y) in [(0.3, -0.2), (-1.1, 0.4), (0.9, 0.9), (0.05, -1.3)] {
            let pre = C64::new(-2.0 * lx2 * (s1 * s1 - wy * wy) * x, 4.0 * wb * s1 * ly2 * y);
            let gauss = (-0.5 * lx2 * x * x - 0.5 * ly2 * y * y - I * lxy * x * y).exp();
            let expect = -I * n0 * k1 * pre * gauss;
            let got = st.eval(x, y);
            assert!((got - expect).norm() < 1e-12 * expect.norm(), "{got} vs {expect}");
        }
    }

    #[test]
    fn degree_bookkeeping() {
        let m = modes(1.0, 2.0, 0.7);
        let st = PolyGaussianState::number_state(&m, 1.0, 2, 1).unwrap();
        assert_eq!(st.quanta, Some((2, 1)));
        assert_eq!(st.poly.effective_degree(), 3);
        assert!(matches!(
            PolyGaussianState::number_state(&m, 1.0, 20, 13),
            Err(Error::DegreeCap { .. })
        ));
    }

    fn gram_deviation(m: &NormalModes, hbar: f64) -> f64 {
        let mut states = Vec::new();
        for n1 in 0..=3u32 {
            for n2 in 0..=(3 - n1) {
                states.push(PolyGaussianState::number_state(m, hbar, n1, n2).unwrap());
            }
        }
        let mut worst = 0f64;
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let d = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.inner(b).unwrap() - d).norm());
            }
        }
        worst
    }

    #[test]
    fn orthonormal_low_states() {
        assert!(gram_deviation(&modes(1.0, 2.0, 0.7), 1.0) < 1e-10);
        assert!(gram_deviation(&modes(1.0, 1.0, 0.0), 1.0) < 1e-10);
        let t = NormalModes::tilted(&df(1.2, 0.8, 0.5), 1.0).unwrap();
        assert!(gram_deviation(&t, 1.0) < 1e-10);
    }

    #[test]
    fn number_state_energy() {
        let m = modes(1.0, 2.0, 0.7);
        for (n1, n2) in [(0, 0), (1, 0), (0, 2), (2, 1)] {
            let st = PolyGaussianState::number_state(&m, 1.0, n1, n2).unwrap();
            let e = st.energy(&m.hamiltonian, 1.0).unwrap();
            let expect = m.sigma1 * (f64::from(n1) + 0.5) + m.sigma2 * (f64::from(n2) + 0.5);
            assert_relative_eq!(e, expect, epsilon = 1e-10);
        }
    }

    fn uncertainty_products(m: &NormalModes) -> (f64, f64) {
        let u = PolyGaussianState::ground(m, 1.0).unwrap().moments(1.0).unwrap().uncertainties();
        (u[0] * u[1], u[2] * u[3])
    }

    #[test]
    fn uncertainty_relation() {
        let m = modes(1.0, 2.0, 0.7);
        let f = ground_form(&m.params, m.sigmas(), 1.0).unwrap();
        let expect = 0.5
            * (1.0 + f.lambda_xy().powi(2) / (f.lambda_x2() * f.lambda_y2())).sqrt();
        let (px, py) = uncertainty_products(&m);
        assert_relative_eq!(px, expect, epsilon = 1e-12);
        assert_relative_eq!(py, expect, epsilon = 1e-12);
        assert!(px - 0.5 > 1e-3);

        for m in [modes(1.0, 2.0, 0.0), modes(1.4, 1.4, 0.9)] {
            let (px, py) = uncertainty_products(&m);
            assert!((px - 0.5).abs() < 1e-12 && (py - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn tilted_ground_is_not_minimal() {
        let t = NormalModes::tilted(&df(1.2, 0.8, 0.5), 1.0).unwrap();
        let (px, _) = uncertainty_products(&t);
        assert!(px > 0.5 + 1e-3);
        let t0 = NormalModes::tilted(&df(1.2, 0.8, 0.0), 1.0).unwrap();
        let (px, _) = uncertainty_products(&t0);
        assert!((px - 0.5).abs() < 1e-12);
    }

    #[test]
    fn moments_match_quadrature() {
        let m = modes(1.0, 2.0, 0.7);
        let st = PolyGaussianState::number_state(&m, 1.0, 1, 1).unwrap();
        let an = st.moments(1.0).unwrap();
        let n = 256;
        let l = 7.0;
        let h = 2.0 * l / (n - 1) as f64;
        let (mut n0, mut xx, mut yy, mut xy) = (0.0, 0.0, 0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let x = -l + i as f64 * h;
                let y = -l + j as f64 * h;
                let p = st.eval(x, y).norm_sqr();
                n0 += p;
                xx += x * x * p;
                yy += y * y * p;
                xy += x * y * p;
            }
        }
        let w = h * h;
        assert!((n0 * w - 1.0).abs() < 1e-6);
        assert!((xx * w - an.second[(0, 0)]).abs() < 1e-6);
        assert!((yy * w - an.second[(2, 2)]).abs() < 1e-6);
        assert!((xy * w - an.second[(0, 2)]).abs() < 1e-6);
    }

    #[test]
    fn covariance_roundtrip() {
        let m = modes(1.0, 2.0, 0.7);
        let g = PolyGaussianState::ground(&m, 1.0).unwrap();
        let cov = g.moments(1.0).unwrap().covariance;
        let f = GaussianForm::from_covariance(&cov, 1.0).unwrap();
        let err = (f.gamma - g.form.gamma).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn non_normalizable_rejected() {
        assert!(matches!(
            GaussianForm::from_lambdas(-1.0, 1.0, 0.0),
            Err(Error::NonNormalizable)
        ));
    }

    #[test]
    fn landau_wavefunction_shape() {
        let s = PhysicalSystem {
            omega_x: 1.0,
            omega_y: 0.0,
            b_z: 1.0,
            ..Default::default()
        };
        let w1 = 2f64.sqrt();
        let a = landau_wavefunction(&s, 0, 0.0, 0.0, 0.0).unwrap();
        assert_relative_eq!(
            a.re,
            (w1 / std::f64::consts::PI).powf(0.25) / (2.0 * std::f64::consts::PI).sqrt(),
            epsilon = 1e-14
        );
        let p = landau_wavefunction(&s, 2, 0.7, 0.4, 0.0).unwrap().norm();
        for y in [-3.0, 1.0, 10.0] {
            let q = landau_wavefunction(&s, 2, 0.7, 0.4, y).unwrap().norm();
            assert_relative_eq!(p, q, epsilon = 1e-14);
        }
    }

    #[test]
    fn landau_orthogonality_window() {
        // On a y window of length W the overlap of two plane waves is the
        // sinc envelope W·sinc((k−k')W/2)/2π; the x parts are orthonormal.
        let s = PhysicalSystem {
            omega_x: 0.0,
            omega_y: 0.0,
            b_z: 1.0,
            ..Default::default()
        };
        let (k, kp, w) = (0.3, 0.5, 20.0);
        let nx = 800;
        let ny = 800;
        let overlap = |n: u32, k: f64, np: u32, kp: f64| -> C64 {
            let hx = 24.0 / nx as f64;
            let hy = w / ny as f64;
            let mut acc = C64::from(0.0);
            for i in 0..nx {
                let x = -12.0 + (i as f64 + 0.5) * hx;
                for j in 0..ny {
                    let y = -w / 2.0 + (j as f64 + 0.5) * hy;
                    acc += landau_wavefunction(&s, np, kp, x, y).unwrap().conj()
                        * landau_wavefunction(&s, n, k, x, y).unwrap();
                }
            }
            acc * hx * hy
        };
        let xo = {
            let xk = landau_center_of(&s, k);
            let xkp = landau_center_of(&s, kp);
            let a = Hermite1D::new(0, 1.0, 1.0, 1.0, xk);
            let b = Hermite1D::new(0, 1.0, 1.0, 1.0, xkp);
            simpson(|x| a.eval(x) * b.eval(x), -12.0, 12.0, 2000)
        };
        let dk = k - kp;
        let sinc = w * ((dk * w / 2.0).sin() / (dk * w / 2.0)) / (2.0 * std::f64::consts::PI);
        let got = overlap(0, k, 0, kp).norm();
        assert!((got - xo * sinc.abs()).abs() < 1e-4, "{got} vs {}", xo * sinc.abs());
        assert!(overlap(1, k, 0, k).norm() < 1e-4);
        assert!((overlap(1, k, 1, k).norm() - w / (2.0 * std::f64::consts::PI)).abs() < 1e-4);
    }

    fn landau_center_of(s: &PhysicalSystem, k: f64) -> f64 {
        crate::spectrum::landau_center(s, k).unwrap()
    }

    #[test]
    fn z_wavefunction_values() {
        let s = PhysicalSystem {
            omega_z: 2.0,
            e_z: 1.0,
            ..Default::default()
        };
        let z0 = 0.25;
        assert_relative_eq!(
            z_wavefunction(&s, 0, z0).unwrap(),
            (2.0 / std::f64::consts::PI).powf(0.25)
        );
        assert_eq!(z_wavefunction(&s, 3, z0).unwrap(), 0.0);
        let norm = simpson(|z| z_wavefunction(&s, 4, z).unwrap().powi(2), -10.0, 10.0, 2000);
        assert!((norm - 1.0).abs() < 1e-10);
        let free = PhysicalSystem { omega_z: 0.0, ..s };
        assert!(z_wavefunction(&free, 0, 0.0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn uncertainty_never_below_bound(wx in 0.2f64..3.0, wy in 0.2f64..3.0, wb in -2.0f64..2.0) {
            let (px, py) = uncertainty_products(&modes(wx, wy, wb));
            prop_assert!(px >= 0.5 - 1e-12 && py >= 0.5 - 1e-12);
            if wb.abs() > 0.05 && (wx - wy).abs() > 0.05 {
                prop_assert!(px > 0.5);
            }
        }

        #[test]
        fn gram_random(wx in 0.3f64..2.5, wy in 0.3f64..2.5, wb in -1.5f64..1.5) {
            prop_assert!(gram_deviation(&modes(wx, wy, wb), 1.0) < 1e-10);
        }
    }
}
