//! Finite-box Anderson Hamiltonians, resolvents and disorder averages.

pub mod criterion;
pub mod geometry;
pub mod hamiltonian;
pub mod iterative;
pub mod ldl;
pub mod moments;
pub mod potential;
pub mod resolvent;
pub mod xi;

pub use criterion::{finite_volume_criterion, CriterionParams, CriterionReport};
pub use geometry::LatticeBox;
pub use hamiltonian::{build_hamiltonian, BoxHamiltonian};
pub use ldl::{LdlFactor, LdlSymbolic};
pub use moments::{
    fractional_moment, moment_difference, DisorderSettings, FractionalMomentEstimate, MomentDifference, Pair,
    PairDifference, DEFAULT_ETA_SCHEDULE,
};
pub use potential::sample_potential;
pub use resolvent::{resolvent_column, Resolvent, ResolventColumn, SolverKind};
pub use xi::{correlation_length_fit, DecayPoint, XiFit};
