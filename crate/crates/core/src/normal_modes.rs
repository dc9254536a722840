//! Symplectic diagonalization of the reduced planar Hamiltonian.
//!
//! The reduced Hamiltonian is `H = ½ Xᵀ ℋ X` in the phase-space basis
//! `X = (x̃, p_x, ỹ, p_y)`. Its Heisenberg evolution matrix `Ω = iΣ_y ℋ` has
//! the purely imaginary spectrum `{∓iσ₁, ∓iσ₂}`. The left eigenvectors `u_i`
//! (belonging to `−iσ_i`) define the annihilation operators `a_i = u_i X / √ħ`,
//! and the right eigenvectors follow from them as `v_i = −ε_i Σ_y u_i†`.
//!
//! Both supported Hamiltonians are handled by one closed form. The tilted
//! field case is the symmetric-gauge problem with `ω_y → ω̃₂` written in the
//! Landau gauge, so its eigenvectors are obtained from the symmetric-gauge
//! ones by the linear map that the gauge phase `exp(iMω_B x̃ỹ/ħ)` induces on
//! the momenta.

use nalgebra::{Matrix2, Matrix4, RowVector4, Vector4};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::{DerivedFrequencies, ZERO_TOL};

pub type CMatrix4 = Matrix4<C64>;
pub type CRow4 = RowVector4<C64>;
pub type CColumn4 = Vector4<C64>;

const I: C64 = C64::new(0.0, 1.0);

/// Residual tolerance accepted for the closed-form eigenvectors.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-10;
/// Tolerance on `u_i v_i = 1`.
pub const NORMALIZATION_TOL: f64 = 1e-8;

/// `Σ_y = diag(σ_y, σ_y)`.
pub fn sigma_y() -> CMatrix4 {
    let z = C64::new(0.0, 0.0);
    Matrix4::new(
        z, -I, z, z, //
        I, z, z, z, //
        z, z, z, -I, //
        z, z, I, z,
    )
}

/// `Σ_z = diag(σ_z, σ_z)`.
pub fn sigma_z() -> CMatrix4 {
    CMatrix4::from_diagonal(&Vector4::new(1.0, -1.0, 1.0, -1.0).map(C64::from))
}

/// `iΣ_y`, which is real.
pub fn symplectic_form() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        0.0, 0.0, -1.0, 0.0,
    )
}

/// Largest entry modulus of a complex matrix.
pub fn max_abs<R: nalgebra::Dim, Cc: nalgebra::Dim, S: nalgebra::RawStorage<C64, R, Cc>>(
    m: &nalgebra::Matrix<C64, R, Cc, S>,
) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn to_complex(m: &Matrix4<f64>) -> CMatrix4 {
    m.map(C64::from)
}

/// Real symmetric `ℋ` with `H = ½ Xᵀ ℋ X`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticHamiltonian {
    pub matrix: Matrix4<f64>,
}

impl QuadraticHamiltonian {
    pub fn new(matrix: Matrix4<f64>) -> Result<Self> {
        let scale = matrix.amax().max(f64::MIN_POSITIVE);
        if (matrix - matrix.transpose()).amax() > 1e-14 * scale {
            return Err(Error::InvalidSystem("Hamiltonian matrix is not symmetric".into()));
        }
        Ok(Self { matrix })
    }

    pub fn omega(&self) -> OmegaMatrix {
        OmegaMatrix {
            matrix: symplectic_form() * self.matrix,
        }
    }

    /// `½ Xᵀ ℋ X` for a real phase-space point.
    pub fn energy(&self, x: &Vector4<f64>) -> f64 {
        0.5 * x.dot(&(self.matrix * x))
    }
}

/// `Ω = iΣ_y ℋ`, real with zero trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaMatrix {
    pub matrix: Matrix4<f64>,
}

/// `H = (p_x²+p_y²)/2M + Mω₁²x̃²/2 + Mω₂²ỹ²/2 − ω_B(x̃p_y − ỹp_x)`.
pub fn build_hamiltonian_generic(df: &DerivedFrequencies, mass: f64) -> QuadraticHamiltonian {
    ModeParameters::generic(df, mass).hamiltonian()
}

/// `H = (p_x²+p_y²)/2M + Mω̃₁²x̃²/2 + Mω̃₂²ỹ²/2 − 2ω_B x̃p_y`.
pub fn build_hamiltonian_tilted(df: &DerivedFrequencies, mass: f64) -> QuadraticHamiltonian {
    ModeParameters::tilted(df, mass).hamiltonian()
}

/// How the magnetic coupling enters the reduced Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coupling {
    /// `−ω_B L̃_z` (symmetric gauge).
    Symmetric,
    /// `−2ω_B x̃ p_y` (Landau gauge, tilted field).
    Landau,
}

/// The four numbers the closed-form solution depends on.
///
/// For the tilted field `omega_y` holds `ω̃₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParameters {
    pub omega_x: f64,
    pub omega_y: f64,
    pub omega_b: f64,
    pub mass: f64,
    pub coupling: Coupling,
}

impl ModeParameters {
    pub fn generic(df: &DerivedFrequencies, mass: f64) -> Self {
        Self {
            omega_x: df.omega_x,
            omega_y: df.omega_y,
            omega_b: df.omega_b,
            mass,
            coupling: Coupling::Symmetric,
        }
    }

    pub fn tilted(df: &DerivedFrequencies, mass: f64) -> Self {
        Self {
            omega_x: df.omega_x,
            omega_y: df.tilde_omega_2,
            omega_b: df.omega_b,
            mass,
            coupling: Coupling::Landau,
        }
    }

    pub fn hamiltonian(&self) -> QuadraticHamiltonian {
        let m = self.mass;
        let wb = self.omega_b;
        let mut h = Matrix4::<f64>::zeros();
        h[(1, 1)] = 1.0 / m;
        h[(3, 3)] = 1.0 / m;
        match self.coupling {
            Coupling::Symmetric => {
                h[(0, 0)] = m * (self.omega_x.powi(2) + wb * wb);
                h[(2, 2)] = m * (self.omega_y.powi(2) + wb * wb);
                // −ω_B x̃p_y + ω_B ỹp_x
                h[(0, 3)] = -wb;
                h[(3, 0)] = -wb;
                h[(1, 2)] = wb;
                h[(2, 1)] = wb;
            }
            Coupling::Landau => {
                h[(0, 0)] = m * (self.omega_x.powi(2) + 4.0 * wb * wb);
                h[(2, 2)] = m * self.omega_y.powi(2);
                h[(0, 3)] = -2.0 * wb;
                h[(3, 0)] = -2.0 * wb;
            }
        }
        QuadraticHamiltonian { matrix: h }
    }

    /// Coefficients `b`, `c` and discriminant `Δ` of `λ⁴ + bλ² + c`.
    pub fn quartic(&self) -> (f64, f64, f64) {
        let wx2 = self.omega_x.powi(2);
        let wy2 = self.omega_y.powi(2);
        let wb2 = self.omega_b.powi(2);
        let b = wx2 + wy2 + 4.0 * wb2;
        let c = wx2 * wy2;
        let delta = (wx2 - wy2).powi(2) + 8.0 * wb2 * (wx2 + wy2 + 2.0 * wb2);
        (b, c, delta)
    }

    /// `(σ₁, σ₂)` from the closed-form discriminant. `σ₂` is taken as
    /// `ω_x ω_y / σ₁`, which avoids the cancellation in `b − √Δ`.
    pub fn sigmas(&self) -> Result<(f64, f64)> {
        if self.omega_x <= ZERO_TOL || self.omega_y <= ZERO_TOL {
            return Err(Error::ZeroMode(format!(
                "omega_x = {}, omega_y = {}",
                self.omega_x, self.omega_y
            )));
        }
        let (b, _, delta) = self.quartic();
        let s1 = ((b + delta.sqrt()) / 2.0).sqrt();
        Ok((s1, self.omega_x * self.omega_y / s1))
    }
}

/// `(σ₁, σ₂)` read off the characteristic polynomial of a numeric `Ω`.
///
/// `b` is the sum of principal 2×2 minors and `c = det Ω`; the odd
/// coefficients vanish for both supported Hamiltonians.
pub fn characteristic_roots(omega: &OmegaMatrix) -> Result<(f64, f64)> {
    let m = &omega.matrix;
    let mut b = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            b += m[(i, i)] * m[(j, j)] - m[(i, j)] * m[(j, i)];
        }
    }
    let c = m.determinant();
    if c <= 1e-14 * b * b || b <= 0.0 {
        return Err(Error::ZeroMode(format!(
            "characteristic polynomial has a vanishing root (b = {b:e}, c = {c:e})"
        )));
    }
    let delta = (b * b - 4.0 * c).max(0.0);
    let s1 = ((b + delta.sqrt()) / 2.0).sqrt();
    Ok((s1, c.sqrt() / s1))
}

/// Left eigenvectors `u₁`, `u₂` of `Ω` for `−iσ₁`, `−iσ₂`, normalized so
/// that `−u_i Σ_y u_i† = 1` with a real positive normalization constant.
pub fn left_eigenvectors(p: &ModeParameters, sigmas: (f64, f64)) -> Result<[CRow4; 2]> {
    let (s1, s2) = sigmas;
    let m = p.mass;
    let wy = p.omega_y;
    let wb = p.omega_b;

    let symmetric = if wb.abs() < ZERO_TOL {
        // Decoupled axes. The larger frequency belongs to mode 1.
        let x_mode = |sign: f64| {
            let k = sign / (2.0 * m * p.omega_x).sqrt();
            CRow4::new(-I * m * p.omega_x * k, C64::from(k), C64::from(0.0), C64::from(0.0))
        };
        let y_mode = {
            let k = 1.0 / (2.0 * m * wy).sqrt();
            CRow4::new(C64::from(0.0), C64::from(0.0), -I * m * wy * k, C64::from(k))
        };
        let sign = if p.omega_x >= wy { 1.0 } else { -1.0 };
        if p.omega_x >= wy {
            [x_mode(sign), y_mode]
        } else {
            [y_mode, x_mode(sign)]
        }
    } else {
        // g_i = σ_i² − ω_y². The product g₁g₂ = −4ω_B²ω_y² recovers the
        // smaller one without cancellation.
        let mut g1 = s1 * s1 - wy * wy;
        let mut g2 = s2 * s2 - wy * wy;
        let prod = -4.0 * wb * wb * wy * wy;
        if g1.abs() >= g2.abs() {
            g2 = prod / g1;
        } else {
            g1 = prod / g2;
        }
        let build = |s: f64, g: f64| -> Result<CRow4> {
            let denom = 2.0 * m * s * (g * g + 4.0 * wb * wb * wy * wy);
            if !denom.is_finite() || denom <= 0.0 {
                return Err(Error::DegenerateMode(format!(
                    "normalization constant undefined at sigma = {s}"
                )));
            }
            let k = denom.powf(-0.5);
            Ok(CRow4::new(
                -I * (m * s * (g - 2.0 * wb * wb) * k),
                C64::from(g * k),
                C64::from(m * wb * (g + 2.0 * wy * wy) * k),
                I * (2.0 * wb * s * k),
            ))
        };
        [build(s1, g1)?, build(s2, g2)?]
    };

    Ok(match p.coupling {
        Coupling::Symmetric => symmetric,
        Coupling::Landau => symmetric.map(|u| landau_gauge_map(&u, m * wb)),
    })
}

/// Conjugation by `exp(i m_wb x̃ỹ/ħ)` sends `p_x → p_x − m_wb ỹ` and
/// `p_y → p_y − m_wb x̃`.
fn landau_gauge_map(u: &CRow4, m_wb: f64) -> CRow4 {
    CRow4::new(u[0] - u[3] * m_wb, u[1], u[2] - u[1] * m_wb, u[3])
}

/// Diagonalizing data for the reduced planar Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalModes {
    pub params: ModeParameters,
    pub hamiltonian: QuadraticHamiltonian,
    pub omega: OmegaMatrix,
    pub sigma1: f64,
    pub sigma2: f64,
    /// Left eigenvectors (rows).
    pub u: [CRow4; 2],
    /// Right eigenvectors (columns).
    pub v: [CColumn4; 2],
    pub q: CMatrix4,
    pub q_inv: CMatrix4,
    /// `+1` when `v_i = −Σ_y u_i†` is the consistent choice.
    pub epsilon: [i8; 2],
}

impl NormalModes {
    pub fn new(params: ModeParameters) -> Result<Self> {
        let sigmas = params.sigmas()?;
        let u = left_eigenvectors(&params, sigmas)?;
        assemble(u, params, sigmas)
    }

    pub fn generic(df: &DerivedFrequencies, mass: f64) -> Result<Self> {
        Self::new(ModeParameters::generic(df, mass))
    }

    pub fn tilted(df: &DerivedFrequencies, mass: f64) -> Result<Self> {
        Self::new(ModeParameters::tilted(df, mass))
    }

    pub fn sigmas(&self) -> (f64, f64) {
        (self.sigma1, self.sigma2)
    }

    pub fn sigma(&self, mode: usize) -> f64 {
        [self.sigma1, self.sigma2][mode]
    }

    /// `ξ_ij = (u_i)_{x̃, ỹ}`: position components.
    pub fn xi(&self) -> Matrix2<C64> {
        Matrix2::new(self.u[0][0], self.u[0][2], self.u[1][0], self.u[1][2])
    }

    /// `η_ij = (u_i)_{p_x, p_y}`: momentum components.
    pub fn eta(&self) -> Matrix2<C64> {
        Matrix2::new(self.u[0][1], self.u[0][3], self.u[1][1], self.u[1][3])
    }

    pub fn residuals(&self) -> IdentityResiduals {
        IdentityResiduals::compute(self)
    }
}

/// Builds `v_i`, `Q` and `Q⁻¹` from the left eigenvectors.
pub fn assemble(u: [CRow4; 2], params: ModeParameters, sigmas: (f64, f64)) -> Result<NormalModes> {
    let hamiltonian = params.hamiltonian();
    let omega = hamiltonian.omega();
    let om = to_complex(&omega.matrix);
    let h = to_complex(&hamiltonian.matrix);
    let sy = sigma_y();
    let s = [sigmas.0, sigmas.1];

    let mut epsilon = [1i8; 2];
    let mut v = [CColumn4::zeros(); 2];
    for i in 0..2 {
        let lhs = u[i] * om;
        let res = max_abs(&(lhs + u[i] * (I * s[i])));
        let scale = max_abs(&u[i]) * max_abs(&om);
        if res > EIGEN_RESIDUAL_TOL * scale {
            return Err(Error::EigenResidual {
                mode: i + 1,
                residual: res / scale,
                tolerance: EIGEN_RESIDUAL_TOL,
            });
        }
        let w = u[i] * sy;
        let n = (w * h * w.adjoint())[(0, 0)].re / s[i];
        epsilon[i] = if n >= 0.0 { 1 } else { -1 };
        v[i] = (sy * u[i].adjoint()) * C64::from(-f64::from(epsilon[i]));
        let dev = ((u[i] * v[i])[(0, 0)] - 1.0).norm();
        if dev > NORMALIZATION_TOL {
            return Err(Error::NormalizationFailure { mode: i + 1, deviation: dev });
        }
    }

    let q = CMatrix4::from_columns(&[v[0], v[0].conjugate(), v[1], v[1].conjugate()]);
    let q_inv = CMatrix4::from_rows(&[u[0], u[0].conjugate(), u[1], u[1].conjugate()]);
    Ok(NormalModes {
        params,
        hamiltonian,
        omega,
        sigma1: s[0],
        sigma2: s[1],
        u,
        v,
        q,
        q_inv,
        epsilon,
    })
}

/// Max-abs residuals of the identities the normal modes must satisfy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResiduals {
    /// `u_i Ω + iσ_i u_i`
    pub left_eigen: f64,
    /// `Ω v_i + iσ_i v_i`
    pub right_eigen: f64,
    /// `u_i v_j − δ_ij` and `u_i v_j*`
    pub biorthogonality: f64,
    /// `Q⁻¹ Q − I`
    pub inverse: f64,
    /// `Q⁻¹ Ω Q − diag(−iσ₁, iσ₁, −iσ₂, iσ₂)`
    pub diagonalization: f64,
    /// `Q† + Σ_z Q⁻¹ Σ_y`
    pub adjoint_relation: f64,
    /// `−Q⁻¹ Σ_y Q⁻¹ᵀ − iΣ_y`, i.e. `[A_α, A_β]` against the ladder pattern.
    pub commutators: f64,
    /// `Q† ℋ Q − diag(σ₁, σ₁, σ₂, σ₂)`
    pub hamiltonian: f64,
}

impl IdentityResiduals {
    pub fn compute(m: &NormalModes) -> Self {
        let om = to_complex(&m.omega.matrix);
        let h = to_complex(&m.hamiltonian.matrix);
        let s = [m.sigma1, m.sigma2];
        let mut left_eigen = 0f64;
        let mut right_eigen = 0f64;
        let mut biorthogonality = 0f64;
        for (i, &si) in s.iter().enumerate() {
            left_eigen = left_eigen.max(max_abs(&(m.u[i] * om + m.u[i] * (I * si))));
            right_eigen = right_eigen.max(max_abs(&(om * m.v[i] + m.v[i] * (I * si))));
            for j in 0..2 {
                let d = if i == j { 1.0 } else { 0.0 };
                biorthogonality = biorthogonality
                    .max(((m.u[i] * m.v[j])[(0, 0)] - d).norm())
                    .max((m.u[i] * m.v[j].conjugate())[(0, 0)].norm());
            }
        }
        let inverse = max_abs(&(m.q_inv * m.q - CMatrix4::identity()));
        let diag = CMatrix4::from_diagonal(&CColumn4::new(-I * s[0], I * s[0], -I * s[1], I * s[1]));
        let diagonalization = max_abs(&(m.q_inv * om * m.q - diag));
        let adjoint_relation = max_abs(&(m.q.adjoint() + sigma_z() * m.q_inv * sigma_y()));
        let commutators =
            max_abs(&(-(m.q_inv * sigma_y() * m.q_inv.transpose()) - to_complex(&symplectic_form())));
        let sig = CMatrix4::from_diagonal(&CColumn4::new(s[0].into(), s[0].into(), s[1].into(), s[1].into()));
        let hamiltonian = max_abs(&(m.q.adjoint() * h * m.q - sig));
        Self {
            left_eigen,
            right_eigen,
            biorthogonality,
            inverse,
            diagonalization,
            adjoint_relation,
            commutators,
            hamiltonian,
        }
    }

    pub fn max(&self) -> f64 {
        [
            self.left_eigen,
            self.right_eigen,
            self.biorthogonality,
            self.inverse,
            self.diagonalization,
            self.adjoint_relation,
            self.commutators,
            self.hamiltonian,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::PhysicalSystem;
    use approx::assert_relative_eq;
    use nalgebra::DMatrix;

    fn df(wx: f64, wy: f64, wb: f64) -> DerivedFrequencies {
        PhysicalSystem {
            omega_x: wx,
            omega_y: wy,
            b_z: 2.0 * wb,
            ..Default::default()
        }
        .derive()
    }

    fn tilted_df(wx: f64, wy: f64, wb: f64, wbp: f64) -> DerivedFrequencies {
        PhysicalSystem {
            omega_x: wx,
            omega_y: wy,
            omega_z: 0.0,
            b_z: 2.0 * wb,
            b_x: 2.0 * wbp,
            ..Default::default()
        }
        .derive()
    }

    /// Imaginary parts of the eigenvalues of a real 4×4 matrix, via the
    /// general (non-symmetric) Schur route in nalgebra.
    fn numeric_frequencies(m: &Matrix4<f64>) -> Vec<f64> {
        let d = DMatrix::from_iterator(4, 4, m.iter().copied());
        let mut f: Vec<f64> = d
            .complex_eigenvalues()
            .iter()
            .map(|z| z.im.abs())
            .collect();
        f.sort_by(|a, b| b.partial_cmp(a).unwrap());
        f.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
        f
    }

    #[test]
    fn decoupled_hamiltonian_is_block_diagonal() {
        let h = build_hamiltonian_generic(&df(1.0, 2.0, 0.0), 1.0).matrix;
        for (i, j) in [(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert_eq!(h[(i, j)], 0.0);
            assert_eq!(h[(j, i)], 0.0);
        }
    }

    #[test]
    fn coupling_entries() {
        let h = build_hamiltonian_generic(&df(1.0, 1.0, 0.5), 1.0).matrix;
        assert_eq!(h[(0, 3)], -0.5);
        assert_eq!(h[(3, 0)], -0.5);
        assert_eq!(h[(1, 2)], 0.5);
        assert_eq!(h[(2, 1)], 0.5);
        let t = build_hamiltonian_tilted(&tilted_df(1.0, 1.0, 0.5, 0.3), 1.0).matrix;
        assert_eq!(t[(0, 3)], -1.0);
        assert_eq!(t[(3, 0)], -1.0);
        assert_eq!(t[(1, 2)], 0.0);
        assert_eq!(t[(2, 1)], 0.0);
    }

    #[test]
    fn omega_matches_closed_form_layout() {
        let d = df(1.3, 0.7, 0.4);
        let m = 1.7;
        let om = build_hamiltonian_generic(&d, m).omega().matrix;
        let expect = Matrix4::new(
            0.0, 1.0 / m, d.omega_b, 0.0,
            -m * d.omega_1.powi(2), 0.0, 0.0, d.omega_b,
            -d.omega_b, 0.0, 0.0, 1.0 / m,
            0.0, -d.omega_b, -m * d.omega_2.powi(2), 0.0,
        );
        assert!((om - expect).amax() < 1e-15);
        assert_eq!(om.trace(), 0.0);
    }

    /// `½ Xᵀ ℋ X` against the polynomial Hamiltonian evaluated directly on a
    /// small stencil of phase-space points.
    #[test]
    fn quadratic_form_reproduces_polynomial() {
        let d = df(1.1, 0.6, -0.35);
        let m = 0.8;
        let h = build_hamiltonian_generic(&d, m);
        let ht = build_hamiltonian_tilted(&tilted_df(1.1, 0.6, -0.35, 0.2), m);
        let dt = tilted_df(1.1, 0.6, -0.35, 0.2);
        let pts = [-1.0, 0.0, 1.0];
        for &x in &pts {
            for &px in &pts {
                for &y in &pts {
                    for &py in &pts {
                        let xv = Vector4::new(x, px, y, py);
                        let poly = (px * px + py * py) / (2.0 * m)
                            + 0.5 * m * d.omega_1.powi(2) * x * x
                            + 0.5 * m * d.omega_2.powi(2) * y * y
                            - d.omega_b * (x * py - y * px);
                        assert_relative_eq!(h.energy(&xv), poly, epsilon = 1e-14);
                        let poly_t = (px * px + py * py) / (2.0 * m)
                            + 0.5 * m * dt.tilde_omega_1.powi(2) * x * x
                            + 0.5 * m * dt.tilde_omega_2.powi(2) * y * y
                            - 2.0 * dt.omega_b * x * py;
                        assert_relative_eq!(ht.energy(&xv), poly_t, epsilon = 1e-14);
                    }
                }
            }
        }
    }

    #[test]
    fn roots_decoupled() {
        let om = build_hamiltonian_generic(&df(3.0, 1.0, 0.0), 1.0).omega();
        let (s1, s2) = characteristic_roots(&om).unwrap();
        assert_relative_eq!(s1, 3.0, epsilon = 1e-14);
        assert_relative_eq!(s2, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn roots_isotropic_with_field() {
        let p = ModeParameters::generic(&df(1.0, 1.0, 0.5), 1.0);
        let (s1, s2) = characteristic_roots(&p.hamiltonian().omega()).unwrap();
        let w1 = 1.25f64.sqrt();
        assert_relative_eq!(s1, w1 + 0.5, epsilon = 1e-12);
        assert_relative_eq!(s2, w1 - 0.5, epsilon = 1e-12);
        assert_relative_eq!(s1, 1.618_033_988_749_895, epsilon = 1e-12);
        let f = numeric_frequencies(&p.hamiltonian().omega().matrix);
        assert_relative_eq!(f[0], s1, epsilon = 1e-10);
        assert_relative_eq!(f[1], s2, epsilon = 1e-10);
        let (c1, c2) = p.sigmas().unwrap();
        assert_relative_eq!(c1, s1, epsilon = 1e-13);
        assert_relative_eq!(c2, s2, epsilon = 1e-13);
    }

    #[test]
    fn zero_mode_is_reported() {
        let om = build_hamiltonian_generic(&df(1.0, 0.0, 0.3), 1.0).omega();
        assert!(matches!(characteristic_roots(&om), Err(Error::ZeroMode(_))));
        assert!(matches!(
            ModeParameters::generic(&df(0.0, 1.0, 0.3), 1.0).sigmas(),
            Err(Error::ZeroMode(_))
        ));
    }

    #[test]
    fn tilted_spectrum_uses_substituted_frequency() {
        for (wx, wy, wb, wbp) in [
            (1.0, 0.5, 0.3, 0.4),
            (2.0, 1.5, -0.7, 0.2),
            (0.6, 0.2, 0.9, -0.5),
            (1.3, 1.3, 0.1, 0.8),
            (0.9, 2.2, -0.4, -0.6),
        ] {
            let d = tilted_df(wx, wy, wb, wbp);
            let p = ModeParameters::tilted(&d, 1.3);
            let numeric = numeric_frequencies(&p.hamiltonian().omega().matrix);
            // closed form with omega_y replaced by tilde omega_2.
            let w2 = d.tilde_omega_2;
            let b = wx * wx + w2 * w2 + 4.0 * wb * wb;
            let delta = (b * b - 4.0 * wx * wx * w2 * w2).sqrt();
            let s1 = ((b + delta) / 2.0).sqrt();
            let s2 = ((b - delta) / 2.0).sqrt();
            assert_relative_eq!(numeric[0], s1, epsilon = 1e-9);
            assert_relative_eq!(numeric[1], s2, epsilon = 1e-9);
        }
    }

    #[test]
    fn decoupled_eigenvector_components() {
        // omega_B = 0: the x mode has no y components and vice versa.
        let m = NormalModes::generic(&df(3.0, 1.0, 0.0), 1.0).unwrap();
        assert_eq!(m.u[0][2], C64::from(0.0));
        assert_eq!(m.u[0][3], C64::from(0.0));
        assert_eq!(m.u[1][0], C64::from(0.0));
        assert_eq!(m.u[1][1], C64::from(0.0));
        assert!(m.residuals().max() < 1e-12);
        let m = NormalModes::generic(&df(1.0, 3.0, 0.0), 1.0).unwrap();
        assert_eq!(m.u[0][0], C64::from(0.0));
        assert_eq!(m.u[1][3], C64::from(0.0));
        assert!(m.residuals().max() < 1e-12);
    }

    #[test]
    fn isotropic_free_is_handled() {
        let m = NormalModes::generic(&df(1.0, 1.0, 0.0), 2.0).unwrap();
        assert_eq!(m.sigma1, m.sigma2);
        assert!(m.residuals().max() < 1e-12);
    }

    #[test]
    fn residuals_generic() {
        let m = NormalModes::generic(&df(1.0, 2.0, 0.7), 1.0).unwrap();
        assert_eq!(m.epsilon, [1, 1]);
        let r = m.residuals();
        assert!(r.max() < 1e-12, "{r:?}");
    }

    #[test]
    fn residuals_tilted() {
        let m = NormalModes::tilted(&tilted_df(1.0, 0.8, 0.6, 0.45), 1.2).unwrap();
        assert_eq!(m.epsilon, [1, 1]);
        let r = m.residuals();
        assert!(r.max() < 1e-12, "{r:?}");
    }

    #[test]
    fn near_decoupled_field_is_stable() {
        for wb in [1e-11, 1e-9, 1e-6, 1e-3] {
            let m = NormalModes::generic(&df(1.5, 1.0, wb), 1.0).unwrap();
            assert!(m.residuals().max() < 1e-10, "wb = {wb}: {:?}", m.residuals());
        }
    }

    #[test]
    fn assemble_rejects_bad_eigenvector() {
        let p = ModeParameters::generic(&df(1.0, 2.0, 0.7), 1.0);
        let s = p.sigmas().unwrap();
        let mut u = left_eigenvectors(&p, s).unwrap();
        u[0][1] += C64::new(0.1, 0.0);
        assert!(matches!(assemble(u, p, s), Err(Error::EigenResidual { mode: 1, .. })));
        let mut u = left_eigenvectors(&p, s).unwrap();
        u[1] *= C64::from(1.1);
        assert!(matches!(
            assemble(u, p, s),
            Err(Error::NormalizationFailure { mode: 2, .. })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn discriminant_nonnegative(wx in 0.01f64..5.0, wy in 0.01f64..5.0, wb in -5.0f64..5.0) {
                let (b, c, delta) = ModeParameters::generic(&df(wx, wy, wb), 1.0).quartic();
                prop_assert!(delta >= 0.0);
                prop_assert!((delta - (b * b - 4.0 * c)).abs() <= 1e-10 * b * b);
            }

            #[test]
            fn sigma_product_and_order(wx in 0.05f64..4.0, wy in 0.05f64..4.0, wb in -3.0f64..3.0) {
                let (s1, s2) = ModeParameters::generic(&df(wx, wy, wb), 1.0).sigmas().unwrap();
                prop_assert!(s1 >= s2 && s2 > 0.0);
                prop_assert!((s1 * s2 - wx * wy).abs() < 1e-12 * (1.0 + wx * wy));
            }

            #[test]
            fn numeric_roots_agree(wx in 0.2f64..3.0, wy in 0.2f64..3.0, wb in -2.0f64..2.0, m in 0.3f64..3.0) {
                let p = ModeParameters::generic(&df(wx, wy, wb), m);
                let (a1, a2) = p.sigmas().unwrap();
                let (n1, n2) = characteristic_roots(&p.hamiltonian().omega()).unwrap();
                // The matrix route loses digits through √Δ when Δ is tiny.
                let (b, _, delta) = p.quartic();
                let tol = 1e-12 + 1e-14 * b / delta.max(1e-300).sqrt();
                prop_assert!((a1 - n1).abs() < tol * a1 * 1e2, "{a1} vs {n1}");
                prop_assert!((a2 - n2).abs() < tol * a1 * 1e2, "{a2} vs {n2}");
            }
        }
    }
}
