//! Exact and numerical analysis of one-parameter families of self-similar
//! iterated function systems on the line.
//!
//! The crate covers four areas:
//!
//! * [`ifs`], [`presets`], [`class`]: exact families `x -> r_i(u) x + t_i(u)`
//!   with rational polynomial coefficients, composition, and class checks.
//! * [`overlap`]: exact overlaps, cylinder separation and the rank test.
//! * [`measure`]: exact lattice discretizations of the projected measures,
//!   Monte-Carlo binning, entropy dimension estimates, test-function integrals.
//! * [`sweep`], [`report`]: batch runs over parameter sets and their reports.

pub mod class;
pub mod error;
pub mod format;
pub mod ifs;
pub mod lattice;
mod linalg;
pub mod measure;
pub mod overlap;
pub mod param;
pub mod poly;
pub mod presets;
pub mod rational;
pub mod report;
pub mod sweep;

pub use class::{validate_rational_class, ClassCheck, ClassReport};
pub use error::{Error, Result};
pub use ifs::{
    attractor_similarity_dimension, compose, compose_word, cylinder_point, similarity_dimension,
    similarity_dimension_f64, AffineMapSpec, CylinderPoint, FamilySpec, Word,
};
pub use overlap::{
    exact_overlap_at, exact_overlap_identically, nondegeneracy_rank, overlap_search,
    separation_profile, OverlapKind, OverlapWitness, SeparationProfile,
};
pub use param::Param;
pub use poly::ParamPoly;
pub use presets::{carpet_family, carpet_family_on, poly4_family, preset_by_name, sandor_family};
pub use rational::RationalScalar;
pub use sweep::{farey_slopes, run_sweep, Metric, SweepPlan, SweepRecord};
