//! Energy levels for every configuration with a discrete analytic spectrum.
//!
//! Each result carries its decomposition into named contributions (mode
//! terms, field offsets, plane-wave kinetic terms); the total is the sum of
//! those entries.

use crate::error::{Error, Result};
use crate::normal_modes::NormalModes;
use crate::params::{axis_shift, center_shift, classify, ConfigurationTag, PhysicalSystem, ZERO_TOL};

/// Quantum numbers of a level. `k` is the plane-wave number of the free
/// direction (y for Landau levels, z for the tilted field) and is ignored
/// elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LevelIndex {
    pub n1: u32,
    pub n2: u32,
    pub n3: u32,
    pub k: f64,
}

impl LevelIndex {
    pub fn planar(n1: u32, n2: u32) -> Self {
        Self { n1, n2, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contribution {
    pub name: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyResult {
    pub value: f64,
    pub contributions: Vec<Contribution>,
}

impl EnergyResult {
    /// Sums named parts into a total.
    pub fn from_parts(parts: &[(&'static str, f64)]) -> Self {
        let contributions: Vec<_> = parts
            .iter()
            .map(|&(name, value)| Contribution { name, value })
            .collect();
        let value = contributions.iter().map(|c| c.value).sum();
        Self { value, contributions }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.contributions.iter().find(|c| c.name == name).map(|c| c.value)
    }
}

/// z motion without a restoring force has a continuous spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContinuumTag {
    /// `omega_z = 0`, `E_z = 0`: free motion, `E_z >= 0`.
    FreeZ,
    /// `omega_z = 0`, `E_z != 0`: uniform force `qE_z`, any real `E_z`.
    LinearZ { force: f64 },
}

/// `None` when the z spectrum is discrete.
pub fn z_continuum(system: &PhysicalSystem) -> Option<ContinuumTag> {
    if system.omega_z > ZERO_TOL {
        None
    } else if system.e_z.abs() < ZERO_TOL {
        Some(ContinuumTag::FreeZ)
    } else {
        Some(ContinuumTag::LinearZ {
            force: system.charge * system.e_z,
        })
    }
}

/// `ħσ₁(n₁+½) + ħσ₂(n₂+½)`.
pub fn planar_levels(modes: &NormalModes, idx: &LevelIndex, hbar: f64) -> EnergyResult {
    EnergyResult::from_parts(&[
        ("mode1", hbar * modes.sigma1 * (f64::from(idx.n1) + 0.5)),
        ("mode2", hbar * modes.sigma2 * (f64::from(idx.n2) + 0.5)),
    ])
}

/// The `count` lowest `(n₁, n₂, E)` of the planar spectrum, ascending.
pub fn lowest_planar(modes: &NormalModes, hbar: f64, count: usize) -> Vec<(u32, u32, f64)> {
    let n = count as u32;
    let mut all: Vec<_> = (0..n)
        .flat_map(|n1| (0..n).map(move |n2| (n1, n2)))
        .map(|(n1, n2)| (n1, n2, planar_levels(modes, &LevelIndex::planar(n1, n2), hbar).value))
        .collect();
    all.sort_by(|a, b| a.2.total_cmp(&b.2).then((a.0, a.1).cmp(&(b.0, b.1))));
    all.truncate(count);
    all
}

fn require(system: &PhysicalSystem, expected: &'static str, ok: bool) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::WrongConfiguration {
            expected,
            found: classify(system),
        })
    }
}

/// Planar energy in the lab frame: the mode terms plus the in-plane electric
/// offsets. Defined whenever the plane is the two-mode oscillator.
pub fn planar_energy(system: &PhysicalSystem, n1: u32, n2: u32) -> Result<EnergyResult> {
    let tag = classify(system);
    require(system, "Generic, FreeZ or LinearZ", tag.has_generic_plane())?;
    let modes = NormalModes::generic(&system.derive(), system.mass)?;
    let planar = planar_levels(&modes, &LevelIndex::planar(n1, n2), system.hbar);
    let (_, ox) = axis_shift(system, system.e_x, system.omega_x);
    let (_, oy) = axis_shift(system, system.e_y, system.omega_y);
    let mut parts: Vec<_> = planar.contributions.iter().map(|c| (c.name, c.value)).collect();
    parts.push(("offset_x", ox));
    parts.push(("offset_y", oy));
    Ok(EnergyResult::from_parts(&parts))
}

/// Total energy of a fully bound system: planar modes, z oscillator and the
/// three electric offsets.
pub fn full_levels(system: &PhysicalSystem, idx: &LevelIndex) -> Result<EnergyResult> {
    let tag = classify(system);
    require(system, "Generic", tag == ConfigurationTag::Generic)?;
    center_shift(system, tag)?;
    let planar = planar_energy(system, idx.n1, idx.n2)?;
    let (_, oz) = axis_shift(system, system.e_z, system.omega_z);
    let mut parts: Vec<_> = planar.contributions.iter().map(|c| (c.name, c.value)).collect();
    parts.push(("z_mode", system.hbar * system.omega_z * (f64::from(idx.n3) + 0.5)));
    parts.push(("offset_z", oz));
    Ok(EnergyResult::from_parts(&parts))
}

/// Brings a Landau-type system to the frame with `omega_y = 0`, `E_y = 0`.
///
/// The mirrored case swaps the axes (so `k` labels the plane wave along the
/// original x); two free planar axes are rotated until the field lies along x.
pub fn landau_frame(system: &PhysicalSystem) -> Result<PhysicalSystem> {
    match classify(system) {
        ConfigurationTag::LandauY { mirrored: false } => Ok(*system),
        ConfigurationTag::LandauY { mirrored: true } => Ok(system.with_swapped_axes()),
        ConfigurationTag::BothPlanarFree { rotation } => Ok(system.with_rotated_plane(rotation)),
        found => Err(Error::WrongConfiguration {
            expected: "LandauY",
            found,
        }),
    }
}

/// `ħω̃₁(n₁+½) − (qE_x + 2kħω_B)²/2Mω̃₁² + ħ²k²/2M`.
pub fn landau_levels(system: &PhysicalSystem, n1: u32, k: f64) -> Result<EnergyResult> {
    let s = landau_frame(system)?;
    let df = s.derive();
    let w1 = df.tilde_omega_1;
    if w1 <= ZERO_TOL {
        return Err(Error::ZeroMode(
            "omega_x and B_z both vanish: free planar motion".into(),
        ));
    }
    let hbar = s.hbar;
    let m = s.mass;
    let drive = s.charge * s.e_x + 2.0 * k * hbar * df.omega_b;
    Ok(EnergyResult::from_parts(&[
        ("mode1", hbar * w1 * (f64::from(n1) + 0.5)),
        ("shift_x", -drive * drive / (2.0 * m * w1 * w1)),
        ("plane_wave", hbar * hbar * k * k / (2.0 * m)),
    ]))
}

/// Tilted field `B_x e_x + B_z e_z`: the planar modes with `ω_y → ω̃₂`, the
/// x offset and the `k`-dependent y offset.
pub fn tilted_levels(system: &PhysicalSystem, idx: &LevelIndex) -> Result<EnergyResult> {
    let tag = classify(system);
    require(system, "TiltedB", tag == ConfigurationTag::TiltedB)?;
    let df = system.derive();
    if df.omega_x <= ZERO_TOL || df.tilde_omega_2 <= ZERO_TOL {
        return Err(Error::ZeroMode(format!(
            "omega_x = {}, tilde omega_2 = {}",
            df.omega_x, df.tilde_omega_2
        )));
    }
    let modes = NormalModes::tilted(&df, system.mass)?;
    let hbar = system.hbar;
    let m = system.mass;
    let k = idx.k;
    let (_, ox) = axis_shift(system, system.e_x, system.omega_x);
    let drive = system.charge * system.e_y + 2.0 * k * hbar * df.omega_bp;
    let w2 = df.tilde_omega_2;
    let planar = planar_levels(&modes, idx, hbar);
    let mut parts: Vec<_> = planar.contributions.iter().map(|c| (c.name, c.value)).collect();
    parts.push(("offset_x", ox));
    parts.push(("shift_y", -drive * drive / (2.0 * m * w2 * w2)));
    parts.push(("plane_wave", hbar * hbar * k * k / (2.0 * m)));
    Ok(EnergyResult::from_parts(&parts))
}

/// Equilibrium `y_k` of the tilted-field problem.
pub fn tilted_y_center(system: &PhysicalSystem, k: f64) -> f64 {
    let df = system.derive();
    (system.charge * system.e_y + 2.0 * k * system.hbar * df.omega_bp)
        / (system.mass * df.tilde_omega_2.powi(2))
}

/// Center `x_k` of the Landau-gauge oscillator (in the Landau frame).
pub fn landau_center(system: &PhysicalSystem, k: f64) -> Result<f64> {
    let s = landau_frame(system)?;
    let df = s.derive();
    Ok((s.charge * s.e_x + 2.0 * k * s.hbar * df.omega_b) / (s.mass * df.tilde_omega_1.powi(2)))
}
