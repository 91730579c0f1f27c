//! Power counting over connected subgraphs.
//!
//! A subgraph is a set of lines; its vertices are their endpoints. With
//! `deg` the degree in the whole graph, the external legs number
//! `E = Σ_v deg(v) − 2I`, and `Λ = I − rank(incidence)` counts independent loops.

use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::graph::{components, Edge, FeynmanGraph};
use super::linalg::rank;

/// Default subgraph budget.
pub const DEFAULT_SUBGRAPH_BUDGET: usize = 1_000_000;

/// `(div, l-div) = (3Λ − 2I, Λ − 4I)`.
pub fn divergence_degree(loops: i64, internal: i64) -> (i64, i64) {
    (3 * loops - 2 * internal, loops - 4 * internal)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clause {
    /// `div < −2εE`.
    DivBelowExternal,
    /// `div = 0` and `l-div ≤ −ε`.
    LogConvergent,
    Violated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Tadpole,
    GraphF,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgraphRecord {
    /// Line labels `p_j` of the subgraph.
    pub lines: Vec<usize>,
    pub n_vertices: i64,
    pub internal: i64,
    pub loops: i64,
    pub external: i64,
    pub div: i64,
    pub l_div: i64,
    pub clause: Clause,
    /// Connected, not one-line reducible, and not the whole graph.
    pub proper: bool,
    pub whole: bool,
    pub shape: Shape,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub subgraphs: usize,
    pub proper: usize,
    pub violations: usize,
    pub proper_nonnegative_div: usize,
    pub proper_nonnegative_div_not_f: usize,
    pub superficially_convergent: bool,
    pub incomplete: bool,
    pub epsilon: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub partition: String,
    pub records: Vec<SubgraphRecord>,
    pub summary: CensusSummary,
}

/// Loop number of the chosen lines via the rank of their incidence matrix.
pub fn loop_number(vertex_count: usize, edges: &[Edge], chosen: &[usize]) -> i64 {
    let rows: Vec<Vec<i64>> = (0..vertex_count)
        .map(|v| {
            chosen
                .iter()
                .map(|&k| {
                    let e = edges[k];
                    (e.head == v) as i64 - (e.tail == v) as i64
                })
                .collect()
        })
        .collect();
    chosen.len() as i64 - rank(&rows) as i64
}

fn vertices_of(edges: &[Edge], chosen: &[usize]) -> BTreeSet<usize> {
    chosen.iter().flat_map(|&k| [edges[k].tail, edges[k].head]).collect()
}

fn one_line_reducible(vertex_count: usize, edges: &[Edge], chosen: &[usize]) -> bool {
    let verts = vertices_of(edges, chosen);
    for skip in 0..chosen.len() {
        let rest: Vec<usize> = chosen
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, &k)| k)
            .collect();
        // Vertices left without lines count as their own components.
        let covered = vertices_of(edges, &rest);
        let isolated = verts.len() - covered.len();
        if components(vertex_count, edges, &rest) + isolated > 1 {
            return true;
        }
    }
    false
}

/// Canonical adjacency form of an undirected multigraph (loops on the diagonal).
pub fn canonical_form(n_vertices: usize, pairs: &[(usize, usize)]) -> Vec<u32> {
    let mut adj = vec![vec![0u32; n_vertices]; n_vertices];
    for &(a, b) in pairs {
        adj[a][b] += 1;
        if a != b {
            adj[b][a] += 1;
        }
    }
    let mut perm: Vec<usize> = (0..n_vertices).collect();
    let mut best: Option<Vec<u32>> = None;
    loop {
        let mut code = Vec::with_capacity(n_vertices * (n_vertices + 1) / 2);
        for i in 0..n_vertices {
            for j in i..n_vertices {
                code.push(adj[perm[i]][perm[j]]);
            }
        }
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Canonical form of the graph F (two vertices, three parallel lines).
pub fn graph_f_form() -> Vec<u32> {
    canonical_form(2, &[(0, 1), (0, 1), (0, 1)])
}

pub fn tadpole_form() -> Vec<u32> {
    canonical_form(1, &[(0, 0)])
}

/// Canonical form of the chosen lines, relabelling vertices densely.
pub fn subgraph_form(edges: &[Edge], chosen: &[usize]) -> Vec<u32> {
    let verts: Vec<usize> = vertices_of(edges, chosen).into_iter().collect();
    let idx = |v: usize| verts.iter().position(|&u| u == v).unwrap();
    let pairs: Vec<(usize, usize)> = chosen
        .iter()
        .map(|&k| (idx(edges[k].tail), idx(edges[k].head)))
        .collect();
    canonical_form(verts.len(), &pairs)
}

fn clause(div: i64, l_div: i64, external: i64, eps: Ratio<i64>) -> Clause {
    let div_r = Ratio::from_integer(div);
    if div_r < -Ratio::from_integer(2 * external) * eps {
        Clause::DivBelowExternal
    } else if div == 0 && Ratio::from_integer(l_div) <= -eps {
        Clause::LogConvergent
    } else {
        Clause::Violated
    }
}

/// Record for the chosen lines of `g` (assumed connected).
pub fn subgraph_record(g: &FeynmanGraph, chosen: &[usize], eps: Ratio<i64>) -> SubgraphRecord {
    let edges = &g.edges;
    let verts = vertices_of(edges, chosen);
    let internal = chosen.len() as i64;
    let degree_sum: i64 = verts.iter().map(|&v| g.degree(v) as i64).sum();
    let external = degree_sum - 2 * internal;
    let loops = loop_number(g.vertex_count, edges, chosen);
    let (div, l_div) = divergence_degree(loops, internal);
    let whole = chosen.len() == edges.len();
    let proper = !whole && !one_line_reducible(g.vertex_count, edges, chosen);
    let form = subgraph_form(edges, chosen);
    let shape = if form == tadpole_form() {
        Shape::Tadpole
    } else if form == graph_f_form() {
        Shape::GraphF
    } else {
        Shape::Other
    };
    SubgraphRecord {
        lines: chosen.iter().map(|&k| edges[k].id).collect(),
        n_vertices: verts.len() as i64,
        internal,
        loops,
        external,
        div,
        l_div,
        clause: clause(div, l_div, external, eps),
        proper,
        whole,
        shape,
    }
}

/// All connected subgraphs of `g` with their power counting.
pub fn classify_superficial_convergence(g: &FeynmanGraph, eps: Ratio<i64>, budget: usize) -> CensusReport {
    let m = g.edges.len();
    let mut records = Vec::new();
    let mut incomplete = false;
    let total: u128 = 1u128 << m.min(127);
    let mut visited: u128 = 0;
    for mask in 1u128..total {
        visited += 1;
        if visited as usize > budget {
            incomplete = true;
            break;
        }
        let chosen: Vec<usize> = (0..m).filter(|k| mask >> k & 1 == 1).collect();
        if components(g.vertex_count, &g.edges, &chosen) != 1 {
            continue;
        }
        records.push(subgraph_record(g, &chosen, eps));
    }
    let proper: Vec<&SubgraphRecord> = records.iter().filter(|r| r.proper).collect();
    let nonneg: Vec<&&SubgraphRecord> = proper.iter().filter(|r| r.div >= 0).collect();
    let violations = records.iter().filter(|r| r.clause == Clause::Violated).count();
    let summary = CensusSummary {
        subgraphs: records.len(),
        proper: proper.len(),
        violations,
        proper_nonnegative_div: nonneg.len(),
        proper_nonnegative_div_not_f: nonneg.iter().filter(|r| r.shape != Shape::GraphF).count(),
        superficially_convergent: violations == 0 && !incomplete,
        incomplete,
        epsilon: eps.to_string(),
    };
    CensusReport {
        partition: g.partition.to_string(),
        records,
        summary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_degrees() {
        assert_eq!(divergence_degree(1, 1).0, 1);
        assert_eq!(divergence_degree(2, 3).0, 0);
        for n in 2..8 {
            let n = n as i64;
            assert_eq!(divergence_degree(n + 2, 2 * n + 2).0, 2 - n);
        }
    }

    #[test]
    fn forms() {
        assert_ne!(graph_f_form(), canonical_form(2, &[(0, 1), (0, 1)]));
        assert_eq!(
            canonical_form(3, &[(0, 1), (1, 2), (2, 2)]),
            canonical_form(3, &[(2, 1), (1, 0), (0, 0)])
        );
        let mut p = vec![0, 1, 2];
        let mut count = 1;
        while next_permutation(&mut p) {
            count += 1;
        }
        assert_eq!(count, 6);
    }
}
