//! Exact quantum solution of a charged anisotropic harmonic oscillator in
//! static, homogeneous electric and magnetic fields: normal-mode spectra,
//! eigenfunctions, coherent and squeezed dynamics, and a finite-difference
//! oracle to check them against.

pub mod config;
pub mod dynamics;
pub mod error;
pub mod fixtures;
pub mod normal_modes;
pub mod oracle;
pub mod params;
pub mod spectrum;
pub mod states;

pub use error::{Error, Result};
pub use normal_modes::NormalModes;
pub use params::{classify, ConfigurationTag, PhysicalSystem};
