//! Exact dynamics of the resonant Jaynes-Cummings model with a
//! time-dependent coupling `lambda(t)`.
//!
//! Because the resonant interaction commutes with itself at different times,
//! the evolution is the constant-coupling solution with `lambda t` replaced
//! by the coupling area `A(t)`. The crate builds initial field statistics
//! ([`photon`]), coupling profiles and their areas ([`coupling`]), evolves
//! pure and mixed initial states block by block ([`dynamics`]), evaluates
//! observables ([`observables`]), and carries an independent ODE integrator
//! for cross-checking ([`oracle`]).

// Negated comparisons are how NaN inputs get rejected throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coupling;
pub mod dynamics;
pub mod error;
pub mod observables;
pub mod oracle;
pub mod photon;
pub mod quadrature;

pub use num_complex::Complex64;

pub use coupling::{CouplingProfile, CouplingTable};
pub use dynamics::{
    block_angle, evolve_mixed, evolve_mixed_with_area, evolve_pure, evolve_pure_with_area, AtomDensityMatrix,
    AtomState, JointPureState,
};
pub use error::{Error, Result};
pub use observables::{
    atom_eigensystem, atom_eigenvalues, bloch_vector, coherence_xi, inversion_closed_form, population_inversion,
    revival_time, schmidt_state, von_neumann_entropy, BlochVector, SchmidtData, SchmidtDecomposition,
};
pub use oracle::{
    compare_trajectories, integrate_block, oracle_evolve_mixed, oracle_evolve_pure, DeviationReport, IntegratorConfig,
    IntegratorMethod,
};
pub use photon::{mean_n_from_temperature, FieldKind, PhotonDistribution, DEFAULT_TAIL_EPSILON};
