//! Solver configuration plumbing: CLI flag > config file > built-in default.
//! The resolved values are recorded in the run manifest.

use std::path::PathBuf;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::Args;
use netresponse::{AlgDistParams, ILSConfig, NormP, PhiOrder, ScalarAgg, VCycleConfig};
use serde::{Deserialize, Serialize};

/// Solver tunables accepted by every solver-bearing subcommand.
#[derive(Args, Debug, Clone)]
pub struct SolverOpts {
    /// TOML config file; CLI flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Coupling threshold for the seed split, in (0, 1)
    #[arg(long)]
    pub theta: Option<f64>,
    /// Maximum size solved exactly at the coarsest level
    #[arg(long)]
    pub coarsest_size: Option<usize>,
    /// Maximum localized-refinement subset size
    #[arg(long)]
    pub subset_cap: Option<usize>,
    /// Flip-relaxation sweeps per level
    #[arg(long)]
    pub gs_sweeps: Option<usize>,
    /// Localized-refinement passes per level
    #[arg(long)]
    pub refine_passes: Option<usize>,
    /// Jacobi over-relaxation factor, in (0, 1)
    #[arg(long)]
    pub omega: Option<f64>,
    /// Number of algebraic-distance test vectors
    #[arg(long)]
    pub test_vectors: Option<usize>,
    /// Relaxation iterations per test vector
    #[arg(long)]
    pub jor_iters: Option<usize>,
    /// Distance norm exponent: a number >= 1, or "inf"
    #[arg(long)]
    pub norm_p: Option<String>,
    /// Split traversal order over infection levels: descending | ascending
    #[arg(long)]
    pub phi_order: Option<String>,
    /// Aggregation of phi/b into coarse nodes: mean | sum | max
    #[arg(long)]
    pub scalar_agg: Option<String>,
    /// Deterministic work cap per exact subsolve
    #[arg(long)]
    pub subsolve_max_steps: Option<u64>,
    /// Wall-clock budget in seconds for the whole solve
    #[arg(long)]
    pub time_budget_secs: Option<f64>,
    /// Run same-color refinement subsets sequentially
    #[arg(long)]
    pub sequential: bool,
}

/// Optional config-file counterpart of [`SolverOpts`].
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub theta: Option<f64>,
    pub coarsest_size: Option<usize>,
    pub subset_cap: Option<usize>,
    pub gs_sweeps: Option<usize>,
    pub refine_passes: Option<usize>,
    pub omega: Option<f64>,
    pub test_vectors: Option<usize>,
    pub jor_iters: Option<usize>,
    pub norm_p: Option<String>,
    pub phi_order: Option<String>,
    pub scalar_agg: Option<String>,
    pub subsolve_max_steps: Option<u64>,
    pub time_budget_secs: Option<f64>,
    pub sequential: Option<bool>,
    pub perturb_fraction: Option<f64>,
    pub max_iterations: Option<usize>,
    pub ils_gs_sweeps: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&PathBuf>) -> Result<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading config file {}", p.display()))?;
                toml::from_str(&text)
                    .with_context(|| format!("parsing config file {}", p.display()))
            }
        }
    }
}

/// Fully resolved solver configuration, serialized into the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedSolver {
    pub theta: f64,
    pub coarsest_size: usize,
    pub subset_cap: usize,
    pub gs_sweeps: usize,
    pub refine_passes: usize,
    pub omega: f64,
    pub test_vectors: usize,
    pub jor_iters: usize,
    pub norm_p: String,
    pub phi_order: String,
    pub scalar_agg: String,
    pub subsolve_max_steps: u64,
    pub time_budget_secs: Option<f64>,
    pub sequential: bool,
}

impl ResolvedSolver {
    pub fn resolve(opts: &SolverOpts) -> Result<Self> {
        let file = FileConfig::load(opts.config.as_ref())?;
        let defaults = VCycleConfig::default();
        let norm_p = opts
            .norm_p
            .clone()
            .or(file.norm_p)
            .unwrap_or_else(|| "2".to_string());
        let phi_order = opts
            .phi_order
            .clone()
            .or(file.phi_order)
            .unwrap_or_else(|| "descending".to_string());
        let scalar_agg = opts
            .scalar_agg
            .clone()
            .or(file.scalar_agg)
            .unwrap_or_else(|| "mean".to_string());
        Ok(Self {
            theta: opts.theta.or(file.theta).unwrap_or(defaults.theta),
            coarsest_size: opts
                .coarsest_size
                .or(file.coarsest_size)
                .unwrap_or(defaults.coarsest_size),
            subset_cap: opts.subset_cap.or(file.subset_cap).unwrap_or(defaults.subset_cap),
            gs_sweeps: opts.gs_sweeps.or(file.gs_sweeps).unwrap_or(defaults.gs_sweeps),
            refine_passes: opts
                .refine_passes
                .or(file.refine_passes)
                .unwrap_or(defaults.refine_passes),
            omega: opts.omega.or(file.omega).unwrap_or(defaults.algdist.omega),
            test_vectors: opts
                .test_vectors
                .or(file.test_vectors)
                .unwrap_or(defaults.algdist.num_vectors),
            jor_iters: opts
                .jor_iters
                .or(file.jor_iters)
                .unwrap_or(defaults.algdist.num_iters),
            norm_p,
            phi_order,
            scalar_agg,
            subsolve_max_steps: opts
                .subsolve_max_steps
                .or(file.subsolve_max_steps)
                .unwrap_or(defaults.subsolve_max_steps),
            time_budget_secs: opts.time_budget_secs.or(file.time_budget_secs),
            sequential: opts.sequential || file.sequential.unwrap_or(false),
        })
    }

    pub fn to_vcycle(&self, rng_seed: u64) -> Result<VCycleConfig> {
        let norm_p = match self.norm_p.as_str() {
            "inf" | "infinity" | "max" => NormP::Infinity,
            other => {
                let p: f64 = other
                    .parse()
                    .with_context(|| format!("invalid norm_p value {other:?}"))?;
                NormP::Finite(p)
            }
        };
        let phi_order = match self.phi_order.as_str() {
            "descending" => PhiOrder::Descending,
            "ascending" => PhiOrder::Ascending,
            other => bail!("invalid phi_order {other:?} (expected descending|ascending)"),
        };
        let scalar_agg = match self.scalar_agg.as_str() {
            "mean" => ScalarAgg::Mean,
            "sum" => ScalarAgg::Sum,
            "max" => ScalarAgg::Max,
            other => bail!("invalid scalar_agg {other:?} (expected mean|sum|max)"),
        };
        let cfg = VCycleConfig {
            algdist: AlgDistParams {
                omega: self.omega,
                num_vectors: self.test_vectors,
                num_iters: self.jor_iters,
                norm_p,
            },
            theta: self.theta,
            coarsest_size: self.coarsest_size,
            subset_cap: self.subset_cap,
            gs_sweeps: self.gs_sweeps,
            refine_passes: self.refine_passes,
            rng_seed,
            time_budget: self.time_budget_secs.map(Duration::from_secs_f64),
            phi_order,
            scalar_agg,
            parallel_refine: !self.sequential,
            subsolve_max_steps: self.subsolve_max_steps,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Baseline tunables.
#[derive(Args, Debug, Clone)]
pub struct IlsOpts {
    /// Fraction of nodes flipped per perturbation
    #[arg(long)]
    pub perturb_fraction: Option<f64>,
    /// Iteration cap
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Relaxation sweeps per descent
    #[arg(long)]
    pub ils_gs_sweeps: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolvedIls {
    pub perturb_fraction: f64,
    pub max_iterations: usize,
    pub gs_sweeps: usize,
    pub time_budget_secs: Option<f64>,
}

impl ResolvedIls {
    pub fn resolve(
        opts: &IlsOpts,
        file: &FileConfig,
        time_budget_secs: Option<f64>,
    ) -> Self {
        let defaults = ILSConfig::default();
        Self {
            perturb_fraction: opts
                .perturb_fraction
                .or(file.perturb_fraction)
                .unwrap_or(defaults.perturb_fraction),
            max_iterations: opts
                .max_iterations
                .or(file.max_iterations)
                .unwrap_or(defaults.max_iterations),
            gs_sweeps: opts
                .ils_gs_sweeps
                .or(file.ils_gs_sweeps)
                .unwrap_or(defaults.gs_sweeps),
            time_budget_secs,
        }
    }

    pub fn to_ils(&self, rng_seed: u64) -> ILSConfig {
        ILSConfig {
            perturb_fraction: self.perturb_fraction,
            max_iterations: self.max_iterations,
            time_budget: self.time_budget_secs.map(Duration::from_secs_f64),
            rng_seed,
            gs_sweeps: self.gs_sweeps,
        }
    }
}

/// Parse a "lo,hi" range argument.
pub fn parse_range(raw: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected lo,hi but got {raw:?}"));
    }
    let lo: f64 = parts[0].trim().parse().map_err(|e| format!("bad lower bound: {e}"))?;
    let hi: f64 = parts[1].trim().parse().map_err(|e| format!("bad upper bound: {e}"))?;
    if lo > hi {
        return Err(format!("empty range {raw:?}"));
    }
    Ok((lo, hi))
}
