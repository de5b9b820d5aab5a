//! Algebraic distance between nodes: relax random test vectors with a Jacobi
//! over-relaxation iterator and measure per-edge differences. Small distance
//! means strong coupling.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::rng::rng_from_seed;

/// Floor used when inverting distances into coupling strengths.
pub const MIN_DISTANCE: f64 = 1e-12;

/// Exponent for the per-edge distance norm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormP {
    Finite(f64),
    Infinity,
}

#[derive(Debug, Clone, Copy)]
pub struct AlgDistParams {
    /// JOR relaxation factor, in (0, 1).
    pub omega: f64,
    /// Number of random test vectors (R).
    pub num_vectors: usize,
    /// Relaxation iterations per vector (k).
    pub num_iters: usize,
    pub norm_p: NormP,
}

impl Default for AlgDistParams {
    fn default() -> Self {
        Self { omega: 0.5, num_vectors: 10, num_iters: 20, norm_p: NormP::Finite(2.0) }
    }
}

impl AlgDistParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega < 1.0) {
            return Err(Error::invalid("omega must be in (0, 1)"));
        }
        if self.num_vectors == 0 || self.num_iters == 0 {
            return Err(Error::invalid("need at least one vector and one iteration"));
        }
        if let NormP::Finite(p) = self.norm_p {
            if !(p >= 1.0) {
                return Err(Error::invalid("norm exponent must be >= 1"));
            }
        }
        Ok(())
    }
}

/// Per-edge algebraic distances, indexed like the graph's edge list.
#[derive(Debug, Clone)]
pub struct EdgeDistances {
    rho: Vec<f64>,
}

impl EdgeDistances {
    pub fn rho(&self, edge: usize) -> f64 {
        self.rho[edge]
    }

    pub fn values(&self) -> &[f64] {
        &self.rho
    }

    /// Coupling strength 1/rho, floored so exact-zero distances mean
    /// "infinitely strong" without dividing by zero.
    pub fn coupling(&self, edge: usize) -> f64 {
        1.0 / self.rho[edge].max(MIN_DISTANCE)
    }

    /// Uniform distances for testing and degenerate graphs.
    pub fn uniform(num_edges: usize) -> Self {
        Self { rho: vec![1.0; num_edges] }
    }

    /// Wrap explicit per-edge distances.
    pub fn from_values(rho: Vec<f64>) -> Self {
        Self { rho }
    }
}

/// One JOR step: chi' = (1 - omega) chi + omega D^{-1} W chi, evaluated in
/// the equivalent difference form chi_i + omega sum_j w_ij (chi_j - chi_i) / d_i
/// so that constant vectors are exact fixed points. Isolated nodes (zero
/// weighted degree) keep their value.
pub fn jor_iterate(g: &WeightedGraph, chi: &[f64], omega: f64) -> Vec<f64> {
    assert_eq!(chi.len(), g.n(), "vector length must match node count");
    let mut out = Vec::with_capacity(g.n());
    for i in 0..g.n() {
        let d: f64 = g.weighted_degree(i);
        if d <= 0.0 {
            out.push(chi[i]);
            continue;
        }
        let mut delta = 0.0;
        for inc in g.adj(i) {
            delta += g.weight(inc.edge) * (chi[inc.neighbor] - chi[i]);
        }
        out.push(chi[i] + omega * delta / d);
    }
    out
}

fn relax(g: &WeightedGraph, mut chi: Vec<f64>, omega: f64, iters: usize) -> Vec<f64> {
    for _ in 0..iters {
        chi = jor_iterate(g, &chi, omega);
    }
    chi
}

/// Distances from explicitly supplied initial test vectors. Each vector is
/// relaxed `num_iters` times; per-edge differences are combined with the
/// configured norm.
pub fn algebraic_distances_with_vectors(
    g: &WeightedGraph,
    params: &AlgDistParams,
    initial: &[Vec<f64>],
) -> Result<EdgeDistances> {
    params.validate()?;
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if initial.is_empty() || initial.iter().any(|v| v.len() != g.n()) {
        return Err(Error::invalid("need nonempty test vectors of length n"));
    }
    // Vectors are independent; relax them in parallel and fold per-edge
    // contributions in vector order so results do not depend on scheduling.
    let relaxed: Vec<Vec<f64>> = initial
        .par_iter()
        .map(|v| relax(g, v.clone(), params.omega, params.num_iters))
        .collect();

    let rho = g
        .edges()
        .iter()
        .map(|e| match params.norm_p {
            NormP::Finite(p) => {
                let mut acc = 0.0;
                for chi in &relaxed {
                    acc += (chi[e.u] - chi[e.v]).abs().powf(p);
                }
                acc.powf(1.0 / p)
            }
            NormP::Infinity => relaxed
                .iter()
                .map(|chi| (chi[e.u] - chi[e.v]).abs())
                .fold(0.0, f64::max),
        })
        .collect();
    Ok(EdgeDistances { rho })
}

/// Distances from seeded random test vectors: entries i.i.d. uniform on
/// [-0.5, 0.5]. Deterministic per seed.
pub fn algebraic_distances(
    g: &WeightedGraph,
    params: &AlgDistParams,
    seed: u64,
) -> Result<EdgeDistances> {
    params.validate()?;
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let mut rng = rng_from_seed(seed);
    let initial: Vec<Vec<f64>> = (0..params.num_vectors)
        .map(|_| (0..g.n()).map(|_| rng.gen_range(-0.5..=0.5)).collect())
        .collect();
    algebraic_distances_with_vectors(g, params, &initial)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jor_fixed_point_on_constants() {
        let g = WeightedGraph::from_edges(4, [(0, 1, 2.0), (1, 2, 1.0), (2, 3, 5.0)]).unwrap();
        let chi = vec![3.25; 4];
        assert_eq!(jor_iterate(&g, &chi, 0.5), chi);
    }

    #[test]
    fn jor_single_edge_hand_values() {
        let g = WeightedGraph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        assert_eq!(jor_iterate(&g, &[1.0, 0.0], 0.5), vec![0.5, 0.5]);
    }

    #[test]
    fn jor_triangle_hand_values() {
        let g = WeightedGraph::from_edges(3, [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap();
        assert_eq!(jor_iterate(&g, &[1.0, 0.0, 0.0], 0.5), vec![0.5, 0.25, 0.25]);
    }

    #[test]
    fn jor_keeps_isolated_nodes() {
        let g = WeightedGraph::from_edges(3, [(0, 1, 1.0)]).unwrap();
        let out = jor_iterate(&g, &[1.0, 0.0, 0.7], 0.5);
        assert_eq!(out[2], 0.7);
    }

    #[test]
    fn constant_vectors_give_zero_distance() {
        let g = WeightedGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 4.0)]).unwrap();
        let params = AlgDistParams::default();
        let vectors = vec![vec![1.0; 3], vec![-2.0; 3]];
        let dist = algebraic_distances_with_vectors(&g, &params, &vectors).unwrap();
        assert!(dist.values().iter().all(|&r| r == 0.0));
        // floored inversion still finite
        assert!(dist.coupling(0).is_finite());
    }

    #[test]
    fn single_edge_distance_decreases_with_iterations() {
        let g = WeightedGraph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        let start = vec![vec![0.5, -0.5]];
        let mut prev = f64::INFINITY;
        for k in 1..8 {
            let params = AlgDistParams { num_iters: k, num_vectors: 1, ..Default::default() };
            let dist = algebraic_distances_with_vectors(&g, &params, &start).unwrap();
            assert!(dist.rho(0) <= prev);
            prev = dist.rho(0);
        }
        assert!(prev < 0.01);
    }

    #[test]
    fn single_vector_l2_reduces_to_absolute_difference() {
        let g = WeightedGraph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        let params = AlgDistParams { num_vectors: 1, num_iters: 1, ..Default::default() };
        let dist = algebraic_distances_with_vectors(&g, &params, &[vec![0.8, 0.2]]).unwrap();
        let relaxed = jor_iterate(&g, &[0.8, 0.2], params.omega);
        assert!((dist.rho(0) - (relaxed[0] - relaxed[1]).abs()).abs() < 1e-15);
    }

    #[test]
    fn symmetric_positions_get_equal_distances() {
        // star: all leaf edges are automorphic images of each other
        let g = WeightedGraph::from_edges(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]).unwrap();
        let params = AlgDistParams::default();
        // identical initial values at automorphic positions
        let vectors = vec![vec![0.3, -0.1, -0.1, -0.1], vec![-0.4, 0.2, 0.2, 0.2]];
        let dist = algebraic_distances_with_vectors(&g, &params, &vectors).unwrap();
        assert!((dist.rho(0) - dist.rho(1)).abs() < 1e-15);
        assert!((dist.rho(1) - dist.rho(2)).abs() < 1e-15);
    }

    #[test]
    fn determinism_and_symmetry() {
        let g = WeightedGraph::from_edges(5, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0), (3, 4, 3.0), (0, 4, 1.0)])
            .unwrap();
        let params = AlgDistParams::default();
        let a = algebraic_distances(&g, &params, 99).unwrap();
        let b = algebraic_distances(&g, &params, 99).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
        assert!(a.values().iter().all(|&r| r >= 0.0 && r.is_finite()));
    }

    #[test]
    fn max_norm_supported() {
        let g = WeightedGraph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        let params = AlgDistParams {
            norm_p: NormP::Infinity,
            num_vectors: 2,
            num_iters: 1,
            ..Default::default()
        };
        let vectors = vec![vec![1.0, 0.0], vec![0.0, 0.25]];
        let dist = algebraic_distances_with_vectors(&g, &params, &vectors).unwrap();
        let r0 = jor_iterate(&g, &vectors[0], params.omega);
        let r1 = jor_iterate(&g, &vectors[1], params.omega);
        let expect = (r0[0] - r0[1]).abs().max((r1[0] - r1[1]).abs());
        assert!((dist.rho(0) - expect).abs() < 1e-15);
    }

    #[test]
    fn relabeling_invariance() {
        // relabel nodes with a permutation and permute the initial vectors the
        // same way; distances on corresponding edges must match.
        let edges = [(0usize, 1usize, 1.5), (1, 2, 0.5), (2, 3, 2.0), (0, 3, 1.0)];
        let g = WeightedGraph::from_edges(4, edges).unwrap();
        let perm = [2usize, 0, 3, 1]; // old -> new
        let relabeled: Vec<(usize, usize, f64)> =
            edges.iter().map(|&(u, v, w)| (perm[u], perm[v], w)).collect();
        let h = WeightedGraph::from_edges(4, relabeled).unwrap();

        let params = AlgDistParams { num_vectors: 3, ..Default::default() };
        let base: Vec<Vec<f64>> = vec![
            vec![0.1, -0.3, 0.4, 0.0],
            vec![-0.2, 0.2, -0.1, 0.3],
            vec![0.05, 0.45, -0.25, -0.15],
        ];
        let permuted: Vec<Vec<f64>> = base
            .iter()
            .map(|v| {
                let mut w = vec![0.0; 4];
                for (old, &val) in v.iter().enumerate() {
                    w[perm[old]] = val;
                }
                w
            })
            .collect();

        let dg = algebraic_distances_with_vectors(&g, &params, &base).unwrap();
        let dh = algebraic_distances_with_vectors(&h, &params, &permuted).unwrap();
        for (idx, e) in g.edges().iter().enumerate() {
            let (pu, pv) = (perm[e.u].min(perm[e.v]), perm[e.u].max(perm[e.v]));
            let h_idx = h
                .edges()
                .iter()
                .position(|f| (f.u, f.v) == (pu, pv))
                .unwrap();
            let rel = (dg.rho(idx) - dh.rho(h_idx)).abs() / dg.rho(idx).max(1e-30);
            assert!(rel < 1e-9, "edge {idx}: {} vs {}", dg.rho(idx), dh.rho(h_idx));
        }
    }
}
