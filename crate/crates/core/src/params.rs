//! Physical inputs and every scalar derived from them.
//!
//! A [`PhysicalSystem`] carries the particle constants (mass, charge, ħ, c),
//! the three trap frequencies and the static field components. Everything
//! downstream (normal modes, spectra, states) reads its frequencies from
//! [`DerivedFrequencies`], so this module is the one place where the field
//! strengths are turned into angular frequencies.

use std::fmt;

use crate::error::{Error, Result};

/// Absolute tolerance used when deciding whether a parameter is zero.
pub const ZERO_TOL: f64 = 1e-12;

#[inline]
pub(crate) fn is_zero(v: f64) -> bool {
    v.abs() < ZERO_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Charged particle in an anisotropic trap with homogeneous static fields
/// `E = (E_x, E_y, E_z)` and `B = B_x e_x + B_z e_z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalSystem {
    pub mass: f64,
    pub charge: f64,
    pub hbar: f64,
    pub light_speed: f64,
    pub omega_x: f64,
    pub omega_y: f64,
    pub omega_z: f64,
    pub e_x: f64,
    pub e_y: f64,
    pub e_z: f64,
    pub b_z: f64,
    /// Only legal together with `omega_z = 0` and `E_z = 0`.
    pub b_x: f64,
}

impl Default for PhysicalSystem {
    fn default() -> Self {
        Self {
            mass: 1.0,
            charge: 1.0,
            hbar: 1.0,
            light_speed: 1.0,
            omega_x: 1.0,
            omega_y: 1.0,
            omega_z: 1.0,
            e_x: 0.0,
            e_y: 0.0,
            e_z: 0.0,
            b_z: 0.0,
            b_x: 0.0,
        }
    }
}

impl PhysicalSystem {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("mass", self.mass),
            ("charge", self.charge),
            ("hbar", self.hbar),
            ("light_speed", self.light_speed),
            ("omega_x", self.omega_x),
            ("omega_y", self.omega_y),
            ("omega_z", self.omega_z),
            ("E_x", self.e_x),
            ("E_y", self.e_y),
            ("E_z", self.e_z),
            ("B_z", self.b_z),
            ("B_x", self.b_x),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(Error::InvalidSystem(format!("{name} is not finite")));
            }
        }
        for (name, v) in [
            ("mass", self.mass),
            ("hbar", self.hbar),
            ("light_speed", self.light_speed),
        ] {
            if v <= 0.0 {
                return Err(Error::InvalidSystem(format!("{name} must be positive, got {v}")));
            }
        }
        for (name, v) in [
            ("omega_x", self.omega_x),
            ("omega_y", self.omega_y),
            ("omega_z", self.omega_z),
        ] {
            if v < 0.0 {
                return Err(Error::InvalidSystem(format!("{name} must be non-negative, got {v}")));
            }
        }
        if !is_zero(self.b_x) && !(is_zero(self.omega_z) && is_zero(self.e_z)) {
            return Err(Error::InvalidSystem(
                "B_x != 0 requires omega_z = 0 and E_z = 0".into(),
            ));
        }
        Ok(())
    }

    /// Relabels x <-> y. The in-plane orientation flips, so `B_z` (and,
    /// to keep the frame right-handed, `E_z`) change sign.
    pub fn with_swapped_axes(&self) -> Self {
        Self {
            omega_x: self.omega_y,
            omega_y: self.omega_x,
            e_x: self.e_y,
            e_y: self.e_x,
            e_z: -self.e_z,
            b_z: -self.b_z,
            ..*self
        }
    }

    /// Rotates the planar axes by `angle` (counter-clockwise) so that the new
    /// x axis points along `(cos angle, sin angle)`. Only meaningful for an
    /// isotropic (here: vanishing) planar trap.
    pub fn with_rotated_plane(&self, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self {
            e_x: c * self.e_x + s * self.e_y,
            e_y: -s * self.e_x + c * self.e_y,
            ..*self
        }
    }

    pub fn derive(&self) -> DerivedFrequencies {
        DerivedFrequencies::from_system(self)
    }
}

/// Frequencies computed from a [`PhysicalSystem`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedFrequencies {
    pub omega_x: f64,
    pub omega_y: f64,
    pub omega_z: f64,
    /// `qB_z / 2Mc`, signed.
    pub omega_b: f64,
    /// `qB_x / 2Mc`, signed.
    pub omega_bp: f64,
    /// `sqrt(omega_x² + omega_b²)`
    pub omega_1: f64,
    /// `sqrt(omega_y² + omega_b²)`
    pub omega_2: f64,
    /// `sqrt(omega_x² + 4 omega_b²)`
    pub tilde_omega_1: f64,
    /// `sqrt(omega_y² + 4 omega_bp²)`
    pub tilde_omega_2: f64,
}

impl DerivedFrequencies {
    pub fn from_system(s: &PhysicalSystem) -> Self {
        let omega_b = s.charge * s.b_z / (2.0 * s.mass * s.light_speed);
        let omega_bp = s.charge * s.b_x / (2.0 * s.mass * s.light_speed);
        Self {
            omega_x: s.omega_x,
            omega_y: s.omega_y,
            omega_z: s.omega_z,
            omega_b,
            omega_bp,
            omega_1: s.omega_x.hypot(omega_b),
            omega_2: s.omega_y.hypot(omega_b),
            tilde_omega_1: s.omega_x.hypot(2.0 * omega_b),
            tilde_omega_2: s.omega_y.hypot(2.0 * omega_bp),
        }
    }
}

/// Which analytic treatment applies to a system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConfigurationTag {
    /// Both planar frequencies positive, field along z, bound z motion.
    Generic,
    /// Generic planar motion, `omega_z = 0`, `E_z = 0`: free z motion.
    FreeZ,
    /// Generic planar motion, `omega_z = 0`, `E_z != 0`: z motion in a uniform field.
    LinearZ,
    /// `omega_y = 0`, `E_y = 0` (Landau gauge, plane wave along y). With
    /// `mirrored` the roles of x and y are exchanged (`omega_x = 0`, `E_x = 0`).
    LandauY { mirrored: bool },
    /// `omega_y = 0` with `E_y != 0` (or the mirrored case). No analytic solution.
    Unsolvable { mirrored: bool },
    /// `omega_x = omega_y = 0`; rotating the plane by `rotation` removes `E_y`.
    BothPlanarFree { rotation: f64 },
    /// `B_x != 0` with `omega_z = 0`, `E_z = 0`.
    TiltedB,
}

impl ConfigurationTag {
    pub fn name(&self) -> &'static str {
        match self {
            ConfigurationTag::Generic => "Generic",
            ConfigurationTag::FreeZ => "FreeZ",
            ConfigurationTag::LinearZ => "LinearZ",
            ConfigurationTag::LandauY { .. } => "LandauY",
            ConfigurationTag::Unsolvable { .. } => "Unsolvable",
            ConfigurationTag::BothPlanarFree { .. } => "BothPlanarFree",
            ConfigurationTag::TiltedB => "TiltedB",
        }
    }

    /// Planar motion is the two-mode oscillator of the generic case.
    pub fn has_generic_plane(&self) -> bool {
        matches!(
            self,
            ConfigurationTag::Generic | ConfigurationTag::FreeZ | ConfigurationTag::LinearZ
        )
    }
}

/// Precedence: tilted field, then planar degeneracies, then the z axis.
pub fn classify(system: &PhysicalSystem) -> ConfigurationTag {
    let s = system;
    if !is_zero(s.b_x) {
        return ConfigurationTag::TiltedB;
    }
    let wx0 = is_zero(s.omega_x);
    let wy0 = is_zero(s.omega_y);
    if wx0 && wy0 {
        let rotation = if is_zero(s.e_x) && is_zero(s.e_y) {
            0.0
        } else {
            s.e_y.atan2(s.e_x)
        };
        return ConfigurationTag::BothPlanarFree { rotation };
    }
    if wy0 {
        return if is_zero(s.e_y) {
            ConfigurationTag::LandauY { mirrored: false }
        } else {
            ConfigurationTag::Unsolvable { mirrored: false }
        };
    }
    if wx0 {
        return if is_zero(s.e_x) {
            ConfigurationTag::LandauY { mirrored: true }
        } else {
            ConfigurationTag::Unsolvable { mirrored: true }
        };
    }
    if is_zero(s.omega_z) {
        return if is_zero(s.e_z) {
            ConfigurationTag::FreeZ
        } else {
            ConfigurationTag::LinearZ
        };
    }
    ConfigurationTag::Generic
}

/// Equilibrium displacements produced by the electric field and the constant
/// energy they contribute. Axes without a restoring force stay `None`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CenterShift {
    pub x0: Option<f64>,
    pub y0: Option<f64>,
    pub z0: Option<f64>,
    pub energy_offset: f64,
}

impl CenterShift {
    pub fn x0_or_zero(&self) -> f64 {
        self.x0.unwrap_or(0.0)
    }

    pub fn y0_or_zero(&self) -> f64 {
        self.y0.unwrap_or(0.0)
    }
}

/// `(q E / M ω², −q² E² / 2 M ω²)` for one axis.
pub(crate) fn axis_shift(s: &PhysicalSystem, field: f64, omega: f64) -> (f64, f64) {
    let w2 = omega * omega;
    (
        s.charge * field / (s.mass * w2),
        -(s.charge * field).powi(2) / (2.0 * s.mass * w2),
    )
}

pub fn center_shift(system: &PhysicalSystem, config: ConfigurationTag) -> Result<CenterShift> {
    let s = system;
    let mut out = CenterShift::default();
    let add = |slot: &mut Option<f64>, field: f64, omega: f64, axis: Axis| -> Result<f64> {
        if omega > ZERO_TOL {
            let (d, e) = axis_shift(s, field, omega);
            *slot = Some(d);
            Ok(e)
        } else if is_zero(field) {
            Ok(0.0)
        } else {
            Err(Error::DegenerateAxis { axis })
        }
    };

    let mut offset = 0.0;
    match config {
        ConfigurationTag::Unsolvable { mirrored } => {
            return Err(Error::DegenerateAxis {
                axis: if mirrored { Axis::X } else { Axis::Y },
            });
        }
        ConfigurationTag::Generic | ConfigurationTag::FreeZ | ConfigurationTag::LinearZ => {
            offset += add(&mut out.x0, s.e_x, s.omega_x, Axis::X)?;
            offset += add(&mut out.y0, s.e_y, s.omega_y, Axis::Y)?;
        }
        ConfigurationTag::TiltedB => {
            // The y equilibrium depends on the conserved p_z and is not a
            // property of the system alone.
            offset += add(&mut out.x0, s.e_x, s.omega_x, Axis::X)?;
        }
        ConfigurationTag::LandauY { .. } | ConfigurationTag::BothPlanarFree { .. } => {}
    }
    if s.omega_z > ZERO_TOL {
        let (d, e) = axis_shift(s, s.e_z, s.omega_z);
        out.z0 = Some(d);
        offset += e;
    }
    out.energy_offset = offset;
    Ok(out)
}
