//! Discretizations of the projected self-similar measure and dimension estimates.

pub mod entropy;
pub mod export;
pub mod integrate;
pub mod lattice;
pub mod monte_carlo;

pub use entropy::{
    dimension_profile, dimension_profile_partial, entropy_dimension, DimensionEntry,
    DimensionEstimate, EntropySource,
};
pub use integrate::{integrate_test_function, phi_lipschitz_bound, phi_probe, PiecewiseLinear};
pub use lattice::{brute_force_measure, exact_level_measure, LatticeMeasure, LevelMeasures};
pub use monte_carlo::{bin_lattice_measure, monte_carlo_binned, BinnedMeasure, Binning, Mwc64};
