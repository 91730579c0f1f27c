//! Momentum graphs of partitions.
//!
//! Insertion `i` of a chain sits between lines `p_i` (incoming) and `p_{i+1}`
//! (outgoing). Indices of one block are identified into a single vertex, and
//! the chain endpoints `x`, `y` are merged into the vertex `o` (index 0),
//! which carries the forced delta.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::linalg::{rank, same_span};
use super::partition::{IndexSet, Partition};
use crate::error::{invalid, Result};

/// Directed momentum line `p_id` from `tail` to `head`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    /// 1-based line label.
    pub id: usize,
    pub tail: usize,
    pub head: usize,
    /// `p_1` and `p_{N+2}`, which carry the external phase.
    pub special: bool,
}

impl Edge {
    pub fn is_zero_loop(&self) -> bool {
        self.tail == self.head
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeynmanGraph {
    pub index_set: IndexSet,
    pub partition: Partition,
    /// Vertex 0 is the merged endpoint vertex; vertex `b + 1` is block `b`.
    pub vertex_count: usize,
    pub edges: Vec<Edge>,
}

/// Homogeneous integer linear forms in `p_1, …, p_m`, each set to zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaSystem {
    pub constraints: Vec<Vec<i64>>,
}

impl DeltaSystem {
    pub fn rank(&self) -> usize {
        rank(&self.constraints)
    }

    /// Same affine (here linear) solution set.
    pub fn equivalent(&self, other: &DeltaSystem) -> bool {
        same_span(&self.constraints, &other.constraints)
    }

    /// Whether `form = 0` holds on the solution set.
    pub fn implies(&self, form: &[i64]) -> bool {
        let mut rows = self.constraints.clone();
        rows.push(form.to_vec());
        rank(&rows) == self.rank()
    }

    /// Sum of all constraints.
    pub fn sum(&self) -> Vec<i64> {
        let m = self.constraints.first().map_or(0, |r| r.len());
        let mut s = vec![0; m];
        for r in &self.constraints {
            for (a, b) in s.iter_mut().zip(r) {
                *a += b;
            }
        }
        s
    }
}

/// Tree/loop split with `u_i = Σ_j a_{ij} w_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningTree {
    /// Positions (0-based) of tree lines in `FeynmanGraph::edges`.
    pub tree_edges: Vec<usize>,
    /// Positions of loop lines; the two special lines come first.
    pub loop_edges: Vec<usize>,
    /// `a[i][j]` for tree line `i` and loop line `j`.
    pub a: Vec<Vec<i64>>,
}

impl FeynmanGraph {
    pub fn n_lines(&self) -> usize {
        self.edges.len()
    }

    /// Vertex of index `i`, or `None` for positions outside the index set.
    fn vertex_of(&self, i: usize) -> Option<usize> {
        self.partition.block_of(i).map(|b| b + 1)
    }

    /// One constraint per block: `Σ_{i∈S} (p_i − p_{i+1}) = 0`.
    pub fn delta_system(&self) -> DeltaSystem {
        let m = self.n_lines();
        let constraints = self
            .partition
            .blocks()
            .iter()
            .map(|b| {
                let mut row = vec![0i64; m];
                for &i in b {
                    row[i - 1] += 1;
                    row[i] -= 1;
                }
                row
            })
            .collect();
        DeltaSystem { constraints }
    }

    /// `p_1 − p_{N+1} + p_{N+2} − p_{N+N′+2}`.
    pub fn forced_delta(&self) -> Vec<i64> {
        let n = self.index_set.n_left;
        let m = self.n_lines();
        let mut row = vec![0i64; m];
        row[0] += 1;
        row[n] -= 1;
        row[n + 1] += 1;
        row[m - 1] -= 1;
        row
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.tail == v) as usize + (e.head == v) as usize)
            .sum()
    }

    pub fn zero_loops(&self) -> Vec<usize> {
        self.edges.iter().filter(|e| e.is_zero_loop()).map(|e| e.id).collect()
    }

    pub fn is_connected(&self) -> bool {
        let all: Vec<usize> = (0..self.edges.len()).collect();
        components(self.vertex_count, &self.edges, &all) == 1
    }

    /// Signed momentum balance (in minus out) at vertex `v` as a linear form.
    pub fn kirchhoff_form(&self, v: usize) -> Vec<i64> {
        let mut row = vec![0i64; self.n_lines()];
        for (k, e) in self.edges.iter().enumerate() {
            if e.head == v {
                row[k] += 1;
            }
            if e.tail == v {
                row[k] -= 1;
            }
        }
        row
    }

    /// Spanning tree avoiding the special lines, with fundamental-cycle coefficients.
    pub fn spanning_tree(&self) -> Result<SpanningTree> {
        let t = spanning_tree_of(self.vertex_count, &self.edges)?;
        if t.tree_edges.iter().any(|&k| self.edges[k].special) {
            return Err(invalid("special lines are forced into every spanning tree"));
        }
        Ok(t)
    }

    /// `u_i − Σ_j a_{ij} w_j = 0` as forms in the original line momenta.
    pub fn reduced_system(&self, tree: &SpanningTree) -> DeltaSystem {
        let m = self.n_lines();
        let constraints = tree
            .tree_edges
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let mut row = vec![0i64; m];
                row[t] = 1;
                for (j, &l) in tree.loop_edges.iter().enumerate() {
                    row[l] -= tree.a[i][j];
                }
                row
            })
            .collect();
        DeltaSystem { constraints }
    }
}

/// Spanning tree of a connected multigraph that avoids special lines where
/// possible, with `a_{ij}` from the fundamental cycles.
pub fn spanning_tree_of(vertex_count: usize, edges: &[Edge]) -> Result<SpanningTree> {
    let mut uf = UnionFind::new(vertex_count);
    let mut tree_edges = Vec::new();
    for (k, e) in edges.iter().enumerate() {
        if e.special || e.is_zero_loop() {
            continue;
        }
        if uf.union(e.tail, e.head) {
            tree_edges.push(k);
        }
    }
    for (k, e) in edges.iter().enumerate() {
        if e.special && !e.is_zero_loop() && uf.union(e.tail, e.head) {
            tree_edges.push(k);
        }
    }
    if tree_edges.len() + 1 != vertex_count {
        return Err(invalid("graph is not connected"));
    }
    let mut loop_edges: Vec<usize> = edges
        .iter()
        .enumerate()
        .filter(|(k, e)| e.special && !tree_edges.contains(k))
        .map(|(k, _)| k)
        .collect();
    loop_edges.extend((0..edges.len()).filter(|k| !edges[*k].special && !tree_edges.contains(k)));

    // Tree adjacency: (neighbour, edge position).
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); vertex_count];
    for &k in &tree_edges {
        let e = edges[k];
        adj[e.tail].push((e.head, k));
        adj[e.head].push((e.tail, k));
    }
    let mut a = vec![vec![0i64; loop_edges.len()]; tree_edges.len()];
    for (j, &lk) in loop_edges.iter().enumerate() {
        let w = edges[lk];
        // Walk from the head of w back to its tail through the tree.
        for (from, to, k) in tree_path(&adj, w.head, w.tail) {
            let e = edges[k];
            let sign = if e.tail == from && e.head == to { 1 } else { -1 };
            let i = tree_edges.iter().position(|&t| t == k).unwrap();
            a[i][j] = sign;
        }
    }
    Ok(SpanningTree {
        tree_edges,
        loop_edges,
        a,
    })
}

/// Builds the momentum graph of `partition` over `set`.
pub fn build_feynman_graph_for(set: IndexSet, partition: &Partition) -> Result<FeynmanGraph> {
    partition.validate_for(&set)?;
    let n = set.n_left;
    let lines = set.n_left + set.n_right + 2;
    let mut g = FeynmanGraph {
        index_set: set,
        partition: partition.clone(),
        vertex_count: partition.blocks().len() + 1,
        edges: Vec::with_capacity(lines),
    };
    for j in 1..=lines {
        let tail = if j >= 2 { g.vertex_of(j - 1).unwrap_or(0) } else { 0 };
        let head = g.vertex_of(j).unwrap_or(0);
        g.edges.push(Edge {
            id: j,
            tail,
            head,
            special: j == 1 || j == n + 2,
        });
    }
    Ok(g)
}

/// Momentum graph of a partition of `Υ_{n,n}` (`n` inferred from the blocks).
pub fn build_feynman_graph(partition: &Partition) -> Result<FeynmanGraph> {
    let size: usize = partition.blocks().iter().map(|b| b.len()).sum();
    if !size.is_multiple_of(2) {
        return Err(invalid("partition of an odd number of indices"));
    }
    build_feynman_graph_for(IndexSet::symmetric(size / 2), partition)
}

fn tree_path(adj: &[Vec<(usize, usize)>], from: usize, to: usize) -> Vec<(usize, usize, usize)> {
    let n = adj.len();
    let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut q = VecDeque::new();
    seen[from] = true;
    q.push_back(from);
    while let Some(v) = q.pop_front() {
        if v == to {
            break;
        }
        for &(u, k) in &adj[v] {
            if !seen[u] {
                seen[u] = true;
                prev[u] = Some((v, k));
                q.push_back(u);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, k) = prev[cur].expect("tree is connected");
        path.push((p, cur, k));
        cur = p;
    }
    path.reverse();
    path
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// Number of connected components spanned by the chosen edges (over their endpoints).
pub(crate) fn components(vertex_count: usize, edges: &[Edge], chosen: &[usize]) -> usize {
    let mut touched = vec![false; vertex_count];
    let mut uf = UnionFind::new(vertex_count);
    for &k in chosen {
        let e = edges[k];
        touched[e.tail] = true;
        touched[e.head] = true;
        uf.union(e.tail, e.head);
    }
    let mut roots: Vec<usize> = (0..vertex_count).filter(|&v| touched[v]).map(|v| uf.find(v)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::partition::enumerate_partitions;

    fn fig1() -> FeynmanGraph {
        let p = Partition::new(vec![vec![1, 3], vec![4, 9], vec![2, 6], vec![7, 8]]).unwrap();
        build_feynman_graph(&p).unwrap()
    }

    fn form(m: usize, terms: &[(usize, i64)]) -> Vec<i64> {
        let mut r = vec![0; m];
        for &(i, c) in terms {
            r[i - 1] += c;
        }
        r
    }

    #[test]
    fn figure_one_deltas() {
        let g = fig1();
        let sys = g.delta_system();
        let m = 10;
        let want = [
            form(m, &[(1, 1), (2, -1), (3, 1), (4, -1)]),
            form(m, &[(4, 1), (5, -1), (9, 1), (10, -1)]),
            form(m, &[(2, 1), (3, -1), (6, 1), (7, -1)]),
            form(m, &[(7, 1), (9, -1)]),
        ];
        for w in &want {
            assert!(sys.constraints.contains(w), "{w:?}");
        }
        let forced = form(m, &[(1, 1), (5, -1), (6, 1), (10, -1)]);
        assert_eq!(sys.sum(), forced);
        assert_eq!(g.forced_delta(), forced);
        assert_eq!(g.zero_loops(), vec![8]);
    }

    #[test]
    fn pairing_graphs_are_four_regular_with_n_plus_two_loops() {
        for n in 1..=4 {
            for p in enumerate_partitions(&IndexSet::symmetric(n), true, false).unwrap() {
                let g = build_feynman_graph(&p).unwrap();
                assert!((0..g.vertex_count).all(|v| g.degree(v) == 4));
                let t = g.spanning_tree().unwrap();
                assert_eq!(t.tree_edges.len(), n);
                assert_eq!(t.loop_edges.len(), n + 2);
                assert_eq!(t.tree_edges.len(), g.delta_system().constraints.len());
                assert_eq!(&t.loop_edges[..2], &[0, n + 1]);
            }
        }
    }
}
