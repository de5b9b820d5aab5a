//! The optimal response problem: maximize the weighted number of alive links
//! subject to per-node infection-exposure caps. One instance type serves both
//! the finest level (linear coefficients all zero) and coarse levels (linear
//! coefficients accumulate intra-aggregate weight).

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Absolute tolerance for declaring a node constraint satisfied.
pub const FEASIBILITY_TOL: f64 = 1e-12;

/// A response-problem instance over a weighted graph.
#[derive(Debug, Clone)]
pub struct ResponseInstance {
    graph: WeightedGraph,
    /// Per-edge transmission probability, indexed like `graph.edges()`.
    p: Vec<f64>,
    /// Per-node infection probability.
    phi: Vec<f64>,
    /// Per-node exposure threshold.
    b: Vec<f64>,
    /// Per-node linear objective coefficient.
    a: Vec<f64>,
    /// Whether `p` was derived from edge weights (affects coarse-level
    /// aggregation of p).
    p_derived_from_w: bool,
}

impl ResponseInstance {
    /// Build with an explicit transmission-probability vector.
    pub fn new(
        graph: WeightedGraph,
        p: Vec<f64>,
        phi: Vec<f64>,
        b: Vec<f64>,
        a: Vec<f64>,
    ) -> Result<Self> {
        Self::validated(graph, p, phi, b, a, false)
    }

    /// Build with transmission probabilities derived from edge weights
    /// (normalized inverses).
    pub fn with_derived_p(
        graph: WeightedGraph,
        phi: Vec<f64>,
        b: Vec<f64>,
        a: Vec<f64>,
    ) -> Result<Self> {
        let p = graph.p_from_weights();
        Self::validated(graph, p, phi, b, a, true)
    }

    pub(crate) fn validated(
        graph: WeightedGraph,
        p: Vec<f64>,
        phi: Vec<f64>,
        b: Vec<f64>,
        a: Vec<f64>,
        p_derived_from_w: bool,
    ) -> Result<Self> {
        let n = graph.n();
        if phi.len() != n || b.len() != n || a.len() != n {
            return Err(Error::invalid(format!(
                "attribute lengths ({}, {}, {}) do not match node count {n}",
                phi.len(),
                b.len(),
                a.len()
            )));
        }
        if p.len() != graph.num_edges() {
            return Err(Error::invalid(format!(
                "p length {} does not match edge count {}",
                p.len(),
                graph.num_edges()
            )));
        }
        if let Some(bad) = p.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::invalid(format!("p[{bad}] outside [0, 1]")));
        }
        if let Some(bad) = phi.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::invalid(format!("phi[{bad}] outside [0, 1]")));
        }
        if let Some(bad) = b.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::invalid(format!("b[{bad}] must be >= 0")));
        }
        if let Some(bad) = a.iter().position(|v| !v.is_finite()) {
            return Err(Error::invalid(format!("a[{bad}] must be finite")));
        }
        Ok(Self { graph, p, phi, b, a, p_derived_from_w })
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn p_derived_from_w(&self) -> bool {
        self.p_derived_from_w
    }

    /// Replace phi (e.g. with a simulated outbreak state).
    pub fn with_phi(mut self, phi: Vec<f64>) -> Result<Self> {
        if phi.len() != self.n() {
            return Err(Error::invalid("phi length mismatch"));
        }
        if let Some(bad) = phi.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::invalid(format!("phi[{bad}] outside [0, 1]")));
        }
        self.phi = phi;
        Ok(self)
    }

    /// Subtract each node's weighted degree from its linear coefficient,
    /// biasing solutions toward closing high-degree nodes. Coefficients go
    /// negative; the solvers handle that.
    pub fn with_degree_penalty(mut self) -> Self {
        for i in 0..self.n() {
            self.a[i] -= self.graph.weighted_degree(i);
        }
        self
    }
}

/// A binary open/closed assignment with cached evaluation data.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// true = open (functioning), false = closed.
    pub x: Vec<bool>,
    pub objective: f64,
    pub feasible: bool,
    /// Node ids with violated constraints, ascending.
    pub violated: Vec<usize>,
}

impl Solution {
    pub fn open_count(&self) -> usize {
        self.x.iter().filter(|&&v| v).count()
    }

    pub fn closed_count(&self) -> usize {
        self.x.len() - self.open_count()
    }
}

/// Objective value: sum of alive-link weights plus linear terms, each edge
/// counted once. Summation order is canonical (edges in index order, then
/// linear terms in node order) so identical assignments always produce
/// identical floats.
pub fn evaluate_objective(inst: &ResponseInstance, x: &[bool]) -> Result<f64> {
    if x.len() != inst.n() {
        return Err(Error::invalid(format!(
            "solution length {} does not match node count {}",
            x.len(),
            inst.n()
        )));
    }
    let mut acc = 0.0;
    for e in inst.graph.edges() {
        if x[e.u] && x[e.v] {
            acc += e.w;
        }
    }
    for (i, &ai) in inst.a.iter().enumerate() {
        if x[i] {
            acc += ai;
        }
    }
    Ok(acc)
}

/// Probability that node `i` is not infected by its open neighbors:
/// product of (1 - p_ij phi_j x_j) over neighbors. Empty product is 1.
pub fn non_infection_probability(inst: &ResponseInstance, x: &[bool], i: usize) -> f64 {
    let mut h = 1.0;
    for inc in inst.graph.adj(i) {
        if x[inc.neighbor] {
            h *= 1.0 - inst.p[inc.edge] * inst.phi[inc.neighbor];
        }
    }
    h
}

/// Amount by which node `i`'s exposure constraint is exceeded; zero when
/// satisfied.
pub fn constraint_violation(inst: &ResponseInstance, x: &[bool], i: usize) -> f64 {
    let xi = if x[i] { 1.0 } else { 0.0 };
    (xi - non_infection_probability(inst, x, i) - inst.b[i]).max(0.0)
}

/// Evaluate a full assignment: cached objective, violated set, feasibility.
pub fn is_feasible(inst: &ResponseInstance, x: &[bool]) -> Result<Solution> {
    let objective = evaluate_objective(inst, x)?;
    let violated: Vec<usize> = (0..inst.n())
        .filter(|&i| constraint_violation(inst, x, i) > FEASIBILITY_TOL)
        .collect();
    Ok(Solution { x: x.to_vec(), objective, feasible: violated.is_empty(), violated })
}

/// Close violated open nodes, most violated first, until no constraint is
/// violated. Closing a node never creates a new violation, so this always
/// terminates with a feasible assignment. Returns the number of nodes closed.
pub fn repair_by_closing(inst: &ResponseInstance, x: &mut [bool]) -> usize {
    let mut closed = 0;
    loop {
        let mut worst: Option<(usize, f64)> = None;
        for i in 0..inst.n() {
            if !x[i] {
                continue;
            }
            let v = constraint_violation(inst, x, i);
            if v > FEASIBILITY_TOL {
                match worst {
                    Some((_, best)) if best >= v => {}
                    _ => worst = Some((i, v)),
                }
            }
        }
        match worst {
            Some((i, _)) => {
                x[i] = false;
                closed += 1;
            }
            None => return closed,
        }
    }
}
