//! Graph values, pairing integrals and bound assembly.

pub mod bound;
pub mod graph_value;
pub mod mc;
pub mod pairing;
pub mod propagator;

pub use bound::{assemble_an_bound, bound_profile, ratio_exponent, stopping_inequality_exact, BoundAssembly};
pub use graph_value::{bubble_value_radial, graph_value, graph_value_lines, GraphValueEstimate, ValueMethod};
pub use mc::{run_mc, run_mc_indexed, run_mc_vec, McEstimate, McParams};
pub use pairing::{continuum_scaling_check, torus_pairing_integral, ScalingCheck, TorusPairingEstimate};
