//! Finite-difference reference solutions for the reduced Hamiltonians.

pub mod classical;
pub mod eigen;
pub mod grid;
pub mod one_d;
pub mod operator;
pub mod propagate;
pub mod spectral;

pub use classical::classical_trajectory;
pub use eigen::{lowest_eigenpairs, lowest_eigenpairs_op, lowest_eigenpairs_with, EigenOptions, EigenPair, EigenStats};
pub use grid::{GridField, GridSpec};
pub use one_d::{solve_1d, Grid1D, Hamiltonian1D, Potential1D};
pub use operator::{
    check_resolution, discretize, discretize_unchecked, DiscreteHamiltonian, Gauge, Linear, Operator,
    PlanarHamiltonian, QuadraticPotential, StencilOrder,
};
pub use propagate::{diagonal_scale, propagate, Propagation, PropagationOptions, PropagationRecord};
pub use spectral::{annihilation_residual, SpectralDerivative};
