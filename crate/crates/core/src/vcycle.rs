//! The full multiscale solve: coarsen until the problem is small, solve it
//! exactly, then interpolate back up with relaxation and localized
//! refinement at every level.

use std::time::{Duration, Instant};

use crate::algdist::{algebraic_distances, AlgDistParams};
use crate::coarsen::{aggregate, coarse_instance, fc_split, HierarchyLevel, PhiOrder, ScalarAgg};
use crate::error::Result;
use crate::instance::{is_feasible, ResponseInstance, Solution};
use crate::refine::{
    build_refine_plan, gauss_seidel_sweep, interpolate, localized_refine, RefineConfig,
};
use crate::rng::derive_seed;
use crate::subsolver::{solve_exact, ReducedInstance, SolveBudget};

/// Coarsening proceeds only while it shrinks the level below this fraction.
const STALL_FRACTION: f64 = 0.95;
const STALL_THETA_STEP: f64 = 0.1;
const STALL_RETRIES: usize = 3;

/// All multiscale-solve tunables.
#[derive(Debug, Clone)]
pub struct VCycleConfig {
    pub algdist: AlgDistParams,
    /// Coupling threshold for the seed/non-seed split.
    pub theta: f64,
    /// Maximum node count solved exactly at the coarsest level.
    pub coarsest_size: usize,
    /// Maximum refinement subset size.
    pub subset_cap: usize,
    /// Flip-relaxation sweeps after each interpolation.
    pub gs_sweeps: usize,
    /// Localized-refinement passes per level.
    pub refine_passes: usize,
    pub rng_seed: u64,
    /// Wall-clock cap for the whole solve; budget exhaustion degrades the
    /// remaining ascent to interpolation only (results stay feasible but are
    /// no longer reproducible run to run).
    pub time_budget: Option<Duration>,
    pub phi_order: PhiOrder,
    pub scalar_agg: ScalarAgg,
    /// Solve same-color refinement subsets concurrently.
    pub parallel_refine: bool,
    /// Deterministic work cap per exact subsolve (branch-and-bound
    /// expansions / enumerated assignments).
    pub subsolve_max_steps: u64,
}

impl Default for VCycleConfig {
    fn default() -> Self {
        Self {
            algdist: AlgDistParams::default(),
            theta: 0.5,
            coarsest_size: 40,
            subset_cap: 15,
            gs_sweeps: 3,
            refine_passes: 5,
            rng_seed: 0,
            time_budget: None,
            phi_order: PhiOrder::Descending,
            scalar_agg: ScalarAgg::Mean,
            parallel_refine: true,
            subsolve_max_steps: 500_000,
        }
    }
}

impl VCycleConfig {
    pub fn validate(&self) -> Result<()> {
        self.algdist.validate()?;
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(crate::error::Error::invalid("theta must be in (0, 1)"));
        }
        if self.subset_cap < 2 || self.coarsest_size < self.subset_cap {
            return Err(crate::error::Error::invalid(
                "need coarsest_size >= subset_cap >= 2",
            ));
        }
        Ok(())
    }

    fn subsolve_budget(&self) -> SolveBudget {
        SolveBudget::steps(self.subsolve_max_steps)
    }
}

/// The coarsening hierarchy. Level `i` maps instance `i` (fine) to instance
/// `i + 1` (coarse); the finest instance lives with the caller.
#[derive(Debug)]
pub struct Hierarchy {
    pub levels: Vec<HierarchyLevel>,
    /// True when coarsening stopped because it stalled rather than reaching
    /// the target size.
    pub stalled: bool,
}

impl Hierarchy {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn instance_at<'a>(
        &'a self,
        finest: &'a ResponseInstance,
        level: usize,
    ) -> &'a ResponseInstance {
        if level == 0 {
            finest
        } else {
            &self.levels[level - 1].coarse
        }
    }

    pub fn coarsest<'a>(&'a self, finest: &'a ResponseInstance) -> &'a ResponseInstance {
        self.instance_at(finest, self.levels.len())
    }
}

/// Coarsen repeatedly until the instance fits the exact solver or the
/// process stalls. Fresh algebraic distances are computed on every level, and
/// each level's infection vector orders the next split. A stalled level
/// retries with a lowered coupling threshold before giving up.
pub fn build_hierarchy(inst: &ResponseInstance, cfg: &VCycleConfig) -> Result<Hierarchy> {
    cfg.validate()?;
    let mut levels: Vec<HierarchyLevel> = Vec::new();
    let mut stalled = false;
    loop {
        let cur = levels.last().map(|l| &l.coarse).unwrap_or(inst);
        let n = cur.n();
        if n <= cfg.coarsest_size {
            break;
        }
        let dist_seed = derive_seed(cfg.rng_seed, 4 * levels.len() as u64);
        let dist = algebraic_distances(cur.graph(), &cfg.algdist, dist_seed)?;

        let mut theta = cfg.theta;
        let mut built: Option<HierarchyLevel> = None;
        for _ in 0..=STALL_RETRIES {
            if theta <= 0.0 {
                break;
            }
            let split = fc_split(cur.graph(), &dist, cur.phi(), theta, cfg.phi_order);
            let agg = aggregate(cur.graph(), &split, &dist);
            if (agg.coarse_count() as f64) < STALL_FRACTION * n as f64 {
                let coarse = coarse_instance(cur, &agg, cfg.scalar_agg)?;
                built = Some(HierarchyLevel { agg, coarse, fine_n: n, theta_used: theta });
                break;
            }
            theta -= STALL_THETA_STEP;
        }
        match built {
            Some(level) => levels.push(level),
            None => {
                stalled = true;
                break;
            }
        }
    }
    Ok(Hierarchy { levels, stalled })
}

/// How the coarsest level was handled.
#[derive(Debug, Clone)]
pub struct CoarsestInfo {
    pub n: usize,
    pub objective: f64,
    /// Whether the exact solve proved optimality (false for the heuristic
    /// fallback on stall-oversized coarsest levels).
    pub optimal: bool,
    pub exact: bool,
    pub wall: Duration,
}

/// Per-level ascent diagnostics.
#[derive(Debug, Clone)]
pub struct LevelTrace {
    /// 0 = finest.
    pub level: usize,
    pub n: usize,
    pub coarse_n: usize,
    pub theta_used: f64,
    pub obj_after_interpolate: f64,
    pub obj_after_gs: f64,
    /// Objective after each refinement pass; non-decreasing.
    pub refine_pass_objectives: Vec<f64>,
    pub subproblems: usize,
    pub splices: usize,
    pub boundary_infeasible: usize,
    pub wall: Duration,
}

/// One point of an incumbent-objective trace (used by the iterated-local-
/// search baseline; the multiscale path reports per-level data instead).
#[derive(Debug, Clone, Copy)]
pub struct TracePoint {
    pub seconds: f64,
    pub objective: f64,
    pub iteration: usize,
}

/// Everything a solve produced: the solution plus per-phase diagnostics.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solution: Solution,
    pub coarsest: Option<CoarsestInfo>,
    pub levels: Vec<LevelTrace>,
    pub trace: Vec<TracePoint>,
    pub total_subproblems: usize,
    pub wall_total: Duration,
    pub budget_exhausted: bool,
}

/// Refinement passes for one level. Every pass rebuilds the subset plan with
/// a fresh seed; reusing one plan reaches a fixed point after the first pass,
/// while shifting the subset boundaries keeps exposing joint moves the
/// previous subsets could not see. The pass trace is exactly non-decreasing.
fn refine_rounds(
    inst: &ResponseInstance,
    start: Solution,
    level_idx: usize,
    cfg: &VCycleConfig,
) -> Result<(Solution, crate::refine::RefineStats)> {
    let refine_cfg = RefineConfig {
        parallel: cfg.parallel_refine,
        subsolve_budget: cfg.subsolve_budget(),
    };
    let mut sol = start;
    let mut total = crate::refine::RefineStats::default();
    for pass in 0..cfg.refine_passes {
        let plan_seed = derive_seed(
            cfg.rng_seed,
            0x100 * (level_idx as u64 + 1) + pass as u64,
        );
        let plan = build_refine_plan(inst, &sol, cfg.subset_cap, plan_seed)?;
        let (next, stats) = localized_refine(inst, &sol, &plan, 1, &refine_cfg)?;
        total.subproblems += stats.subproblems;
        total.splices += stats.splices;
        total.boundary_infeasible += stats.boundary_infeasible;
        total.pass_objectives.push(next.objective);
        sol = next;
    }
    Ok((sol, total))
}

/// Run the full multiscale solve. Deterministic for a fixed (instance,
/// config, seed) triple as long as no wall-clock budget interferes.
pub fn ms_solve(inst: &ResponseInstance, cfg: &VCycleConfig) -> Result<SolveReport> {
    cfg.validate()?;
    let t0 = Instant::now();
    let deadline = cfg.time_budget.map(|d| t0 + d);
    let mut budget_exhausted = false;

    let hierarchy = build_hierarchy(inst, cfg)?;

    // coarsest level
    let coarsest_start = Instant::now();
    let coarsest_inst = hierarchy.coarsest(inst);
    let (mut current, coarsest_info) = if coarsest_inst.n() <= cfg.coarsest_size {
        let red = ReducedInstance::from_instance(coarsest_inst)?;
        let mut budget = cfg.subsolve_budget();
        budget.time_limit = deadline.map(|d| d.saturating_duration_since(Instant::now()));
        let exact = solve_exact(&red, cfg.coarsest_size, &budget, None)?;
        let sol = is_feasible(coarsest_inst, &exact.x)?;
        let info = CoarsestInfo {
            n: coarsest_inst.n(),
            objective: sol.objective,
            optimal: exact.optimal,
            exact: true,
            wall: coarsest_start.elapsed(),
        };
        (sol, info)
    } else {
        // stalled hierarchy left an oversized coarsest level; fall back to
        // the refinement machinery from the all-closed solution
        let all_closed = is_feasible(coarsest_inst, &vec![false; coarsest_inst.n()])?;
        let swept = gauss_seidel_sweep(coarsest_inst, &all_closed, cfg.gs_sweeps)?;
        let (sol, _) = refine_rounds(coarsest_inst, swept, hierarchy.depth(), cfg)?;
        let info = CoarsestInfo {
            n: coarsest_inst.n(),
            objective: sol.objective,
            optimal: false,
            exact: false,
            wall: coarsest_start.elapsed(),
        };
        (sol, info)
    };

    // ascent
    let mut levels_out = Vec::new();
    let mut total_subproblems = coarsest_info.exact as usize;
    for level_idx in (0..hierarchy.depth()).rev() {
        let level_start = Instant::now();
        let fine = hierarchy.instance_at(inst, level_idx);
        let level = &hierarchy.levels[level_idx];

        let interpolated = interpolate(fine, &level.agg, &current)?;
        if deadline.is_some_and(|d| Instant::now() >= d) {
            // out of budget: keep cascading the solution down without
            // refinement so the caller still gets a finest-level answer
            budget_exhausted = true;
            current = interpolated;
            continue;
        }
        let obj_after_interpolate = interpolated.objective;
        let swept = gauss_seidel_sweep(fine, &interpolated, cfg.gs_sweeps)?;
        let obj_after_gs = swept.objective;

        let (refined, stats) = refine_rounds(fine, swept, level_idx, cfg)?;

        total_subproblems += stats.subproblems;
        levels_out.push(LevelTrace {
            level: level_idx,
            n: level.fine_n,
            coarse_n: level.agg.coarse_count(),
            theta_used: level.theta_used,
            obj_after_interpolate,
            obj_after_gs,
            refine_pass_objectives: stats.pass_objectives,
            subproblems: stats.subproblems,
            splices: stats.splices,
            boundary_infeasible: stats.boundary_infeasible,
            wall: level_start.elapsed(),
        });
        current = refined;
    }

    if deadline.is_some_and(|d| Instant::now() >= d) {
        budget_exhausted = true;
    }
    Ok(SolveReport {
        solution: current,
        coarsest: Some(coarsest_info),
        levels: levels_out,
        trace: Vec::new(),
        total_subproblems,
        wall_total: t0.elapsed(),
        budget_exhausted,
    })
}
