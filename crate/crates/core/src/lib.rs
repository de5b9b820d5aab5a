//! Multiscale solver for the optimal infection-response problem on weighted
//! networks: given per-node infection probabilities, choose which nodes to
//! close so every open node's exposure stays under its threshold while the
//! weighted number of alive links is maximized.
//!
//! The solver coarsens the network with algebraic-distance-based aggregation,
//! solves the coarsest problem exactly, and interpolates back up with flip
//! relaxation and localized exact refinement at every scale. An iterated
//! local search baseline is included for comparisons.

pub mod algdist;
pub mod coarsen;
pub mod epidemic;
pub mod error;
pub mod generate;
pub mod graph;
pub mod ils;
pub mod instance;
pub mod io;
pub mod refine;
pub mod rng;
pub mod subsolver;
pub mod vcycle;

pub use algdist::{
    algebraic_distances, algebraic_distances_with_vectors, jor_iterate, AlgDistParams,
    EdgeDistances, NormP,
};
pub use coarsen::{AggregateMap, FCSplit, HierarchyLevel, PhiOrder, ScalarAgg};
pub use error::{Error, Result};
pub use generate::{erdos_renyi_instance, ErConfig, ValueRange};
pub use graph::{Laplacian, WeightedGraph};
pub use ils::{ils_solve, ILSConfig};
pub use instance::{
    constraint_violation, evaluate_objective, is_feasible, non_infection_probability,
    ResponseInstance, Solution, FEASIBILITY_TOL,
};
pub use refine::{build_refine_plan, gauss_seidel_sweep, interpolate, localized_refine, RefinePlan};
pub use subsolver::{
    reduce_with_boundary, solve_exact, BoundaryCondition, ExactSolution, ReducedInstance,
    SolveBudget,
};
pub use vcycle::{build_hierarchy, ms_solve, Hierarchy, SolveReport, VCycleConfig};
