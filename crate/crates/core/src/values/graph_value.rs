//! Values `|G|` of momentum graphs with the propagator `F`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::mc::{run_mc, McParams};
use super::propagator::{ln_f_log, norm2, LogRadialProposal};
use crate::diagrams::census::{classify_superficial_convergence, DEFAULT_SUBGRAPH_BUDGET};
use crate::diagrams::graph::spanning_tree_of;
use crate::diagrams::{default_epsilon, Edge, FeynmanGraph};
use crate::error::{invalid, Error, Result};
use crate::quad::integrate_half_line;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValueMethod {
    ImportanceMc,
    RadialQuadrature,
}

impl ValueMethod {
    pub fn name(&self) -> &'static str {
        match self {
            ValueMethod::ImportanceMc => "importance-mc",
            ValueMethod::RadialQuadrature => "radial-quadrature",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphValueEstimate {
    pub graph_id: String,
    pub value: f64,
    pub stderr: f64,
    pub samples: usize,
    pub method: ValueMethod,
}

/// Line momenta as integer combinations of loop momenta.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopParametrization {
    pub loops: usize,
    /// One row per line: `(loop, coefficient)` pairs.
    pub lines: Vec<Vec<(usize, i64)>>,
}

impl LoopParametrization {
    pub fn new(vertex_count: usize, edges: &[Edge]) -> Result<Self> {
        let tree = spanning_tree_of(vertex_count, edges)?;
        let mut lines = vec![Vec::new(); edges.len()];
        for (j, &k) in tree.loop_edges.iter().enumerate() {
            lines[k] = vec![(j, 1)];
        }
        for (i, &k) in tree.tree_edges.iter().enumerate() {
            lines[k] = tree.a[i]
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(j, &c)| (j, c))
                .collect();
        }
        Ok(LoopParametrization {
            loops: tree.loop_edges.len(),
            lines,
        })
    }

    /// Momentum of line `k` given the loop momenta.
    pub fn momentum(&self, k: usize, w: &[[f64; 3]]) -> [f64; 3] {
        let mut p = [0.0; 3];
        for &(j, c) in &self.lines[k] {
            for a in 0..3 {
                p[a] += c as f64 * w[j][a];
            }
        }
        p
    }
}

/// Importance-sampled `∫ Π_loops d³w Π_lines F(p_line)` over `ℝ^{3L}`.
///
/// No integrability check is made; see [`graph_value`].
pub fn graph_value_lines(
    graph_id: &str,
    vertex_count: usize,
    edges: &[Edge],
    mc: &McParams,
) -> Result<GraphValueEstimate> {
    let param = LoopParametrization::new(vertex_count, edges)?;
    if param.loops == 0 {
        return Err(invalid("graph has no loop momenta"));
    }
    let proposal = LogRadialProposal;
    let stream = format!("graph-value/{graph_id}");
    let est = run_mc(mc, &stream, |rng| {
        let mut w = vec![[0.0; 3]; param.loops];
        let mut ln_g = 0.0;
        for wj in w.iter_mut() {
            match proposal.sample(rng) {
                Some((q, lg)) => {
                    *wj = q;
                    ln_g += lg;
                }
                None => return 0.0,
            }
        }
        let ln_f: f64 = (0..param.lines.len())
            .map(|k| ln_f_log(norm2(param.momentum(k, &w))))
            .sum();
        (ln_f - ln_g).exp()
    })?;
    if !est.mean.is_finite() || !est.stderr.is_finite() {
        return Err(Error::NonIntegrable(format!("{graph_id}: non-finite estimate")));
    }
    Ok(GraphValueEstimate {
        graph_id: graph_id.to_string(),
        value: est.mean,
        stderr: est.stderr,
        samples: est.samples,
        method: ValueMethod::ImportanceMc,
    })
}

/// `|G|` for the momentum graph of a partition; refuses graphs that fail power counting.
pub fn graph_value(graph: &FeynmanGraph, mc: &McParams) -> Result<GraphValueEstimate> {
    let census = classify_superficial_convergence(graph, default_epsilon(), DEFAULT_SUBGRAPH_BUDGET);
    if !census.summary.superficially_convergent {
        return Err(Error::NonIntegrable(format!(
            "{}: {} power-counting violations",
            census.partition, census.summary.violations
        )));
    }
    graph_value_lines(&graph.partition.to_string(), graph.vertex_count, &graph.edges, mc)
}

/// Two vertices joined by two lines: `∫_{ℝ³} F(q)² d³q = 4π ∫ r² F(r²)² dr`.
pub fn bubble_value_radial() -> Result<GraphValueEstimate> {
    let (v, e) = integrate_half_line(
        |r: f64, out: &mut [f64]| {
            let f = 1.0 / ((r * r + 1.0) * (r * r + 2.0).ln().powi(4));
            out[0] = 4.0 * PI * r * r * f * f;
        },
        1,
        |t: f64| {
            if t <= 2.0 {
                f64::INFINITY
            } else {
                4.0 * PI / (t * (t * t).ln().powi(8))
            }
        },
        1e-10,
        1e-300,
    )?;
    Ok(GraphValueEstimate {
        graph_id: "bubble".into(),
        value: v[0],
        stderr: e[0],
        samples: 0,
        method: ValueMethod::RadialQuadrature,
    })
}

/// Lines of the two-vertex bubble.
pub fn bubble_edges() -> Vec<Edge> {
    (1..=2)
        .map(|id| Edge {
            id,
            tail: 0,
            head: 1,
            special: false,
        })
        .collect()
}

/// Lines of graph F: two vertices, three lines.
pub fn graph_f_edges() -> Vec<Edge> {
    (1..=3)
        .map(|id| Edge {
            id,
            tail: 0,
            head: 1,
            special: false,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::{build_feynman_graph, Partition};

    #[test]
    fn parametrization_respects_conservation() {
        let p = Partition::new(vec![vec![1, 4], vec![2, 5]]).unwrap();
        let g = build_feynman_graph(&p).unwrap();
        let lp = LoopParametrization::new(g.vertex_count, &g.edges).unwrap();
        assert_eq!(lp.loops, g.edges.len() + 1 - g.vertex_count);
        let w: Vec<[f64; 3]> = (0..lp.loops)
            .map(|j| [j as f64 + 0.3, 1.0 - j as f64, 0.5 * j as f64])
            .collect();
        for v in 0..g.vertex_count {
            let mut net = [0.0; 3];
            for (k, e) in g.edges.iter().enumerate() {
                let p = lp.momentum(k, &w);
                let s = f64::from(i8::from(e.head == v) - i8::from(e.tail == v));
                for a in 0..3 {
                    net[a] += s * p[a];
                }
            }
            assert!(norm2(net) < 1e-20, "vertex {v}");
        }
    }

    #[test]
    fn radial_bubble_is_stable() {
        let b = bubble_value_radial().unwrap();
        assert!(b.value > 0.0 && b.value.is_finite());
        assert!(b.stderr < 1e-8 * b.value);
    }

    #[test]
    fn gate_graph_is_rejected() {
        let p = Partition::new(vec![vec![1, 2], vec![4, 5]]).unwrap();
        let g = build_feynman_graph(&p).unwrap();
        assert!(matches!(
            graph_value(&g, &McParams::new(100, 1)),
            Err(Error::NonIntegrable(_))
        ));
    }
}
