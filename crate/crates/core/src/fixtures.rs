//! Named parameter sets used by the oracle comparisons, the acceptance suite
//! and the `oracle`/`compare` subcommands.
//!
//! | name | M | q | ω_x | ω_y | B_z | B_x | E_x | E_y | k |
//! |---|---|---|---|---|---|---|---|---|---|
//! | `anisotropic` | 1 | 1 | 1 | 2 | 1.4 | 0 | 0 | 0 | |
//! | `isotropic` | 1 | 1 | 1 | 1 | 1 | 0 | 0 | 0 | |
//! | `fielded` | 1 | 1 | 1.5 | 1 | −0.6 | 0 | 0.3 | −0.2 | |
//! | `unmagnetized` | 1 | 1 | 1 | 1.3 | 0 | 0 | 0 | 0.5 | |
//! | `heavy` | 2 | −1 | 0.8 | 1.6 | 2 | 0 | 0 | 0 | |
//! | `tilted` | 1 | 1 | 1 | 1.2 | 1 | 0.8 | 0 | 0 | 0 |
//! | `tilted-k` | 1 | 1 | 1.3 | 0.7 | −0.8 | 1.1 | 0.2 | 0.3 | 0.6 |
//! | `landau` | 1 | 1 | 1 | 0 | 1 | 0 | 0.3 | 0 | 0.8 |
//! | `landau-free` | 1 | 1 | 0 | 0 | 1.4 | 0 | 0 | 0 | |
//!
//! `ħ = c = 1` and `ω_z = 1` throughout, except `ω_z = 0` for the tilted
//! fixtures, where the z trap must vanish.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::normal_modes::{ModeParameters, NormalModes};
use crate::oracle::{
    discretize, DiscreteHamiltonian, Gauge, GridField, GridSpec, PlanarHamiltonian, SpectralDerivative,
    StencilOrder,
};
use crate::params::{center_shift, classify, ConfigurationTag, PhysicalSystem};
use crate::spectrum::{lowest_planar, planar_energy, tilted_levels, tilted_y_center, LevelIndex};
use crate::states::{ground_form, GaussianForm, Moments};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fixture {
    pub name: &'static str,
    pub system: PhysicalSystem,
    /// `p_z = ħk` for the tilted case, the Landau plane-wave number otherwise.
    pub k: f64,
}

fn system(mass: f64, charge: f64, wx: f64, wy: f64, bz: f64, ex: f64, ey: f64) -> PhysicalSystem {
    PhysicalSystem {
        mass,
        charge,
        omega_x: wx,
        omega_y: wy,
        omega_z: 1.0,
        b_z: bz,
        e_x: ex,
        e_y: ey,
        ..Default::default()
    }
}

fn tilted(wx: f64, wy: f64, bz: f64, bx: f64, ex: f64, ey: f64) -> PhysicalSystem {
    PhysicalSystem {
        omega_z: 0.0,
        b_x: bx,
        ..system(1.0, 1.0, wx, wy, bz, ex, ey)
    }
}

pub fn generic_fixtures() -> [Fixture; 5] {
    [
        Fixture {
            name: "anisotropic",
            system: system(1.0, 1.0, 1.0, 2.0, 1.4, 0.0, 0.0),
            k: 0.0,
        },
        Fixture {
            name: "isotropic",
            system: system(1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0),
            k: 0.0,
        },
        Fixture {
            name: "fielded",
            system: system(1.0, 1.0, 1.5, 1.0, -0.6, 0.3, -0.2),
            k: 0.0,
        },
        Fixture {
            name: "unmagnetized",
            system: system(1.0, 1.0, 1.0, 1.3, 0.0, 0.0, 0.5),
            k: 0.0,
        },
        Fixture {
            name: "heavy",
            system: system(2.0, -1.0, 0.8, 1.6, 2.0, 0.0, 0.0),
            k: 0.0,
        },
    ]
}

pub fn tilted_fixtures() -> [Fixture; 2] {
    [
        Fixture {
            name: "tilted",
            system: tilted(1.0, 1.2, 1.0, 0.8, 0.0, 0.0),
            k: 0.0,
        },
        Fixture {
            name: "tilted-k",
            system: tilted(1.3, 0.7, -0.8, 1.1, 0.2, 0.3),
            k: 0.6,
        },
    ]
}

/// Landau configuration with a confined x axis, so the levels depend on `k`.
pub fn landau_fixture() -> Fixture {
    Fixture {
        name: "landau",
        system: system(1.0, 1.0, 1.0, 0.0, 1.0, 0.3, 0.0),
        k: 0.8,
    }
}

/// No planar trap and no planar field: the `k`-degenerate Landau levels.
pub fn degenerate_landau_fixture() -> Fixture {
    Fixture {
        name: "landau-free",
        system: system(1.0, 1.0, 0.0, 0.0, 1.4, 0.0, 0.0),
        k: 0.0,
    }
}

pub fn all_fixtures() -> Vec<Fixture> {
    let mut v: Vec<Fixture> = generic_fixtures().into();
    v.extend(tilted_fixtures());
    v.push(landau_fixture());
    v.push(degenerate_landau_fixture());
    v
}

pub fn fixture(name: &str) -> Option<Fixture> {
    all_fixtures().into_iter().find(|f| f.name == name)
}

impl Fixture {
    pub fn tag(&self) -> ConfigurationTag {
        classify(&self.system)
    }

    fn is_tilted(&self) -> bool {
        self.tag() == ConfigurationTag::TiltedB
    }

    fn mode_parameters(&self) -> Result<ModeParameters> {
        let df = self.system.derive();
        let m = self.system.mass;
        match self.tag() {
            ConfigurationTag::TiltedB => Ok(ModeParameters::tilted(&df, m)),
            t if t.has_generic_plane() => Ok(ModeParameters::generic(&df, m)),
            found => Err(Error::WrongConfiguration {
                expected: "a planar-oscillator configuration",
                found,
            }),
        }
    }

    /// Normal modes of the reduced planar Hamiltonian.
    pub fn modes(&self) -> Result<NormalModes> {
        NormalModes::new(self.mode_parameters()?)
    }

    pub fn ground_form(&self) -> Result<GaussianForm> {
        let p = self.mode_parameters()?;
        ground_form(&p, p.sigmas()?, self.system.hbar)
    }

    /// Lab position of the planar equilibrium.
    pub fn center(&self) -> Result<[f64; 2]> {
        let tag = self.tag();
        if tag == ConfigurationTag::TiltedB {
            let s = &self.system;
            let x0 = s.charge * s.e_x / (s.mass * s.omega_x.powi(2));
            return Ok([x0, tilted_y_center(s, self.k)]);
        }
        let c = center_shift(&self.system, tag)?;
        Ok([c.x0_or_zero(), c.y0_or_zero()])
    }

    /// The `count` lowest planar levels, offsets included, ascending.
    pub fn lowest_levels(&self, count: usize) -> Result<Vec<(u32, u32, f64)>> {
        let modes = self.modes()?;
        lowest_planar(&modes, self.system.hbar, count)
            .into_iter()
            .map(|(n1, n2, _)| {
                let e = if self.is_tilted() {
                    tilted_levels(&self.system, &LevelIndex { n1, n2, n3: 0, k: self.k })?.value
                } else {
                    planar_energy(&self.system, n1, n2)?.value
                };
                Ok((n1, n2, e))
            })
            .collect()
    }

    /// Lab Hamiltonian for the grid: symmetric gauge for a planar magnetic
    /// field, Landau gauge with `p_z = ħk` when the field is tilted.
    pub fn lab_hamiltonian(&self) -> PlanarHamiltonian {
        if self.is_tilted() {
            PlanarHamiltonian::lab(&self.system, Gauge::Landau, self.k)
        } else {
            PlanarHamiltonian::lab(&self.system, Gauge::Symmetric, 0.0)
        }
    }

    /// Square grid of `n` points per axis around the equilibrium with
    /// half-width `padding / λ_min` of the analytic ground state.
    pub fn grid(&self, n: usize, padding: f64) -> Result<GridSpec> {
        let l = padding / self.ground_form()?.lambda_min();
        Ok(GridSpec::square(n, l)?.centered(self.center()?))
    }

    /// Momentum shift `(q/c)(A_lab − A_reduced)` between the grid gauge and
    /// the reduced gauge centered on the equilibrium. It is constant because
    /// both vector potentials are linear with the same curl.
    pub fn momentum_offset(&self) -> Result<[f64; 2]> {
        let s = &self.system;
        let [x0, y0] = self.center()?;
        let a = s.charge * s.b_z / s.light_speed;
        if self.is_tilted() {
            Ok([0.0, a * x0])
        } else {
            Ok([-0.5 * a * y0, 0.5 * a * x0])
        }
    }

    /// Phase `exp(i p_off·r/ħ)` taking a reduced-gauge wave function to the
    /// grid gauge.
    pub fn gauge_phase(&self, x: f64, y: f64) -> Result<C64> {
        let [px, py] = self.momentum_offset()?;
        Ok(C64::from_polar(1.0, (px * x + py * y) / self.system.hbar))
    }

    /// Samples a reduced-gauge wave function, given in lab coordinates, as a
    /// grid-gauge field.
    pub fn sample(&self, grid: GridSpec, f: impl Fn(f64, f64) -> C64) -> Result<GridField> {
        let [px, py] = self.momentum_offset()?;
        let hbar = self.system.hbar;
        Ok(GridField::sample(grid, |x, y| {
            f(x, y) * C64::from_polar(1.0, (px * x + py * y) / hbar)
        }))
    }

    /// Moments of `(x̃, p_x, ỹ, p_y)` in the reduced gauge for a grid-gauge
    /// field.
    pub fn reduced_moments(&self, spectral: &SpectralDerivative, f: &GridField) -> Result<Moments> {
        let m = spectral.moments(f, self.center()?, self.system.hbar);
        self.to_reduced(m)
    }

    /// Shifts the momentum means of grid-gauge moments into the reduced
    /// gauge; covariances are unchanged.
    pub fn to_reduced(&self, mut m: Moments) -> Result<Moments> {
        let [px, py] = self.momentum_offset()?;
        let old = m.mean;
        m.mean[1] -= px;
        m.mean[3] -= py;
        m.second += m.mean * m.mean.transpose() - old * old.transpose();
        Ok(m)
    }

    /// The fourth-order grid operator on [`Fixture::grid`].
    pub fn discretize(&self, n: usize, padding: f64) -> Result<DiscreteHamiltonian> {
        self.discretize_with(n, padding, StencilOrder::Fourth)
    }

    pub fn discretize_with(&self, n: usize, padding: f64, order: StencilOrder) -> Result<DiscreteHamiltonian> {
        discretize(&self.lab_hamiltonian(), &self.grid(n, padding)?, order)
    }
}
