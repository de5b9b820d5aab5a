//! Undirected weighted graph with sparse adjacency, plus the graph Laplacian.
//!
//! Node ids are 0-based contiguous. Each undirected edge is stored once in a
//! canonical (u < v) order and is visible from both endpoints' adjacency
//! lists. Adjacency lists are sorted by neighbor id.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use crate::error::{Error, Result};

/// One undirected edge with a positive weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Adjacency entry: the neighbor id and the index of the shared edge.
#[derive(Debug, Clone, Copy)]
pub struct Incidence {
    pub neighbor: usize,
    pub edge: usize,
}

/// Undirected sparse graph with positive edge weights.
///
/// Immutable after construction; safe to share across threads.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<Incidence>>,
}

/// Accumulates raw (possibly duplicated, possibly directed) edge records and
/// produces a canonical [`WeightedGraph`]. Self-loops are dropped and counted;
/// parallel records of the same node pair are merged by weight summation,
/// which also symmetrizes directed inputs.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    max_node: Option<usize>,
    weights: BTreeMap<(usize, usize), f64>,
    self_loops_dropped: usize,
    records_merged: usize,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add one edge record. Non-positive weights are rejected.
    pub fn add(&mut self, u: usize, v: usize, w: f64) -> Result<()> {
        if !w.is_finite() || w <= 0.0 {
            return Err(Error::invalid(format!(
                "edge ({u}, {v}) has non-positive weight {w}"
            )));
        }
        self.max_node = Some(self.max_node.map_or(u.max(v), |m| m.max(u).max(v)));
        if u == v {
            self.self_loops_dropped += 1;
            return Ok(());
        }
        let key = (u.min(v), u.max(v));
        match self.weights.get_mut(&key) {
            Some(acc) => {
                *acc += w;
                self.records_merged += 1;
            }
            None => {
                self.weights.insert(key, w);
            }
        }
        Ok(())
    }

    pub fn self_loops_dropped(&self) -> usize {
        self.self_loops_dropped
    }

    pub fn records_merged(&self) -> usize {
        self.records_merged
    }

    /// Finish, producing a graph over `0..=max_seen_node` (or `n` if larger).
    pub fn build(self, min_nodes: usize) -> Result<WeightedGraph> {
        let n = self
            .max_node
            .map_or(min_nodes, |m| (m + 1).max(min_nodes));
        let edges = self
            .weights
            .into_iter()
            .map(|((u, v), w)| (u, v, w))
            .collect::<Vec<_>>();
        WeightedGraph::from_edges(n, edges)
    }
}

impl WeightedGraph {
    /// Build from canonical edges. Duplicates are merged by summation and
    /// self-loops rejected; weights must be positive.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut canon: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) endpoint outside node range 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::invalid(format!("self-loop at node {u}")));
            }
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::invalid(format!(
                    "edge ({u}, {v}) has non-positive weight {w}"
                )));
            }
            *canon.entry((u.min(v), u.max(v))).or_insert(0.0) += w;
        }
        let edges: Vec<Edge> = canon
            .into_iter()
            .map(|((u, v), w)| Edge { u, v, w })
            .collect();
        let mut adj = vec![Vec::new(); n];
        for (idx, e) in edges.iter().enumerate() {
            adj[e.u].push(Incidence { neighbor: e.v, edge: idx });
            adj[e.v].push(Incidence { neighbor: e.u, edge: idx });
        }
        // BTreeMap iteration order already leaves each list sorted by
        // neighbor id; keep the sort as a guard for future construction paths.
        for list in &mut adj {
            list.sort_by_key(|inc| inc.neighbor);
        }
        Ok(Self { n, edges, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weight(&self, edge: usize) -> f64 {
        self.edges[edge].w
    }

    /// Neighbors of `i` with the connecting edge index, sorted by neighbor id.
    pub fn adj(&self, i: usize) -> &[Incidence] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn weighted_degree(&self, i: usize) -> f64 {
        self.adj[i].iter().map(|inc| self.edges[inc.edge].w).sum()
    }

    pub fn average_degree(&self) -> f64 {
        if self.n == 0 {
            return 0.0;
        }
        2.0 * self.edges.len() as f64 / self.n as f64
    }

    pub fn total_edge_weight(&self) -> f64 {
        self.edges.iter().map(|e| e.w).sum()
    }

    /// Transmission probabilities derived from weights: normalized inverses,
    /// `p_e = min_w / w_e`. The weakest (lightest) link gets p = 1 and all
    /// values lie in (0, 1].
    pub fn p_from_weights(&self) -> Vec<f64> {
        let min_w = self
            .edges
            .iter()
            .map(|e| e.w)
            .fold(f64::INFINITY, f64::min);
        self.edges.iter().map(|e| min_w / e.w).collect()
    }

    /// Connected components as node sets, discovered by BFS from ascending
    /// node ids.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = Vec::new();
            let mut queue = VecDeque::new();
            queue.push_back(start);
            seen[start] = true;
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for inc in &self.adj[u] {
                    if !seen[inc.neighbor] {
                        seen[inc.neighbor] = true;
                        queue.push_back(inc.neighbor);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    /// Induced subgraph on the largest connected component. Size ties go to
    /// the component containing the smallest original node id. Returns the
    /// subgraph and the old-to-new id remapping.
    pub fn largest_component(&self) -> Result<(WeightedGraph, ComponentMap)> {
        if self.n == 0 {
            return Err(Error::EmptyGraph);
        }
        let comps = self.components();
        // components() emits in ascending order of smallest member, so the
        // first maximum realizes the tie rule.
        let best = comps
            .iter()
            .enumerate()
            .max_by(|(ia, a), (ib, b)| a.len().cmp(&b.len()).then(ib.cmp(ia)))
            .map(|(i, _)| i)
            .unwrap();
        let members = &comps[best];
        let mut old_to_new = vec![None; self.n];
        for (new_id, &old_id) in members.iter().enumerate() {
            old_to_new[old_id] = Some(new_id);
        }
        let edges = self.edges.iter().filter_map(|e| {
            match (old_to_new[e.u], old_to_new[e.v]) {
                (Some(u), Some(v)) => Some((u, v, e.w)),
                _ => None,
            }
        });
        let sub = WeightedGraph::from_edges(members.len(), edges)?;
        Ok((
            sub,
            ComponentMap {
                old_to_new,
                new_to_old: members.clone(),
            },
        ))
    }

    /// Graph Laplacian: d_ii = sum of incident weights, off-diagonal -w_ij.
    pub fn laplacian(&self) -> Laplacian {
        let mut rows = vec![Vec::new(); self.n];
        for i in 0..self.n {
            let mut row: Vec<(usize, f64)> = self.adj[i]
                .iter()
                .map(|inc| (inc.neighbor, -self.edges[inc.edge].w))
                .collect();
            row.push((i, self.weighted_degree(i)));
            row.sort_by_key(|&(j, _)| j);
            rows[i] = row;
        }
        Laplacian { rows }
    }
}

/// Node-id remapping produced by component extraction.
#[derive(Debug, Clone)]
pub struct ComponentMap {
    /// `old_to_new[old] = Some(new)` for retained nodes.
    pub old_to_new: Vec<Option<usize>>,
    /// `new_to_old[new] = old`.
    pub new_to_old: Vec<usize>,
}

/// Sparse symmetric graph Laplacian with zero row sums.
#[derive(Debug, Clone)]
pub struct Laplacian {
    rows: Vec<Vec<(usize, f64)>>,
}

impl Laplacian {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.rows[i].iter().map(|&(_, v)| v).sum()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.rows[i]
            .iter()
            .find(|&&(col, _)| col == j)
            .map_or(0.0, |&(_, v)| v)
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.rows.len();
        let mut m = vec![vec![0.0; n]; n];
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[i][j] = v;
            }
        }
        m
    }
}
