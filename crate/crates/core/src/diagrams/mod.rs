//! Even-block partitions, their momentum graphs and power counting.

pub mod census;
pub mod cumulant;
pub mod graph;
pub mod linalg;
pub mod partition;

pub use census::{classify_superficial_convergence, divergence_degree, CensusReport, Clause, Shape};
pub use cumulant::{cumulant_coefficient, cumulant_coefficient_f64, cumulants_from_moments};
pub use graph::{build_feynman_graph, build_feynman_graph_for, DeltaSystem, Edge, FeynmanGraph, SpanningTree};
pub use partition::{enumerate_partitions, IndexSet, Partition};

use num_rational::Ratio;

/// `ε = 1/10`.
pub fn default_epsilon() -> Ratio<i64> {
    Ratio::new(1, 10)
}
