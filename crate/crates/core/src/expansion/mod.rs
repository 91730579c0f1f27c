//! Renormalized resolvent expansion: symbolic terms, the finite-box identity,
//! tadpole cancellation and decay of the explicit kernels.

pub mod decay;
pub mod identity;
pub mod lattice_sum;
pub mod tadpole;
pub mod terms;

pub use decay::{check_decay_envelope, DecayReport};
pub use identity::{evaluate_decomposition, IdentityContext, IdentityReport};
pub use tadpole::{mc_moment_al_squared, TadpoleComparison};
pub use terms::{generate_terms, generate_terms_direct, Decomposition, ExpansionTerm, Insertion, Terminal};
