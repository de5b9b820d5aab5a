use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::Args;
use netresponse::rng::derive_seed;
use netresponse::{ils_solve, ms_solve, solve_exact, ReducedInstance, SolveBudget};
use serde_json::json;

use crate::commands::{load_instance, InstanceOpts};
use crate::config::{FileConfig, IlsOpts, ResolvedIls, ResolvedSolver, SolverOpts};
use crate::manifest::{manifest_path, RunManifest};
use crate::report::write_file;
use crate::Outcome;

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Directory of instance pairs (*.edges with matching *.attrs)
    #[arg(long)]
    pub dir: PathBuf,
    /// Reference solver: ils | exact | ma (self-comparison)
    #[arg(long, default_value = "ils")]
    pub against: String,
    #[command(flatten)]
    pub instance: InstanceOpts,
    #[command(flatten)]
    pub solver: SolverOpts,
    #[command(flatten)]
    pub ils: IlsOpts,
    /// ILS wall-clock budget as a multiple of the multiscale solve's time
    #[arg(long, default_value_t = 10.0)]
    pub ils_budget_factor: f64,
    /// Node-count cap for the exact reference
    #[arg(long, default_value_t = 25)]
    pub exact_limit: usize,
    /// Work cap for the exact reference
    #[arg(long, default_value_t = 100_000_000)]
    pub exact_max_steps: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output CSV file
    #[arg(long)]
    pub out: PathBuf,
}

struct SideResult {
    objective: f64,
    wall: Duration,
    closed: usize,
    flag: String,
}

pub fn run(args: CompareArgs) -> Result<Outcome> {
    if !matches!(args.against.as_str(), "ils" | "exact" | "ma") {
        bail!("--against must be one of ils, exact, ma");
    }
    let resolved = ResolvedSolver::resolve(&args.solver)?;
    let file_cfg = FileConfig::load(args.solver.config.as_ref())?;

    let mut pairs: Vec<(PathBuf, PathBuf)> = Vec::new();
    for entry in std::fs::read_dir(&args.dir)
        .with_context(|| format!("reading {}", args.dir.display()))?
    {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "edges") {
            pairs.push((path.clone(), path.with_extension("attrs")));
        }
    }
    pairs.sort();
    if pairs.is_empty() {
        bail!("no *.edges files found in {}", args.dir.display());
    }

    let mut csv = String::from(
        "instance,n,edges,ma_objective,ref_objective,ratio,ma_wall_ms,ref_wall_ms,ma_closed,ref_closed,flag\n",
    );
    for (idx, (edges_path, attrs_path)) in pairs.iter().enumerate() {
        let name = edges_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let row = compare_one(&args, &resolved, &file_cfg, idx as u64, edges_path, attrs_path);
        match row {
            Ok((n, m, ma, reference)) => {
                let ratio = if reference.objective.abs() <= 1e-12 {
                    if ma.objective.abs() <= 1e-12 {
                        1.0
                    } else {
                        f64::INFINITY
                    }
                } else {
                    ma.objective / reference.objective
                };
                let flag = [ma.flag.as_str(), reference.flag.as_str()]
                    .iter()
                    .filter(|f| !f.is_empty())
                    .cloned()
                    .collect::<Vec<_>>()
                    .join(";");
                let _ = writeln!(
                    csv,
                    "{name},{n},{m},{},{},{ratio},{:.3},{:.3},{},{},{flag}",
                    ma.objective,
                    reference.objective,
                    ma.wall.as_secs_f64() * 1e3,
                    reference.wall.as_secs_f64() * 1e3,
                    ma.closed,
                    reference.closed,
                );
            }
            Err(err) => {
                let _ = writeln!(csv, "{name},,,,,,,,,,error: {err:#}");
            }
        }
    }
    write_file(&args.out, &csv)?;

    let mut manifest = RunManifest::new(
        "compare",
        args.seed,
        json!({
            "against": args.against,
            "solver": resolved,
            "ils_budget_factor": args.ils_budget_factor,
            "exact_limit": args.exact_limit,
            "instances": pairs.len(),
        }),
    );
    for (edges_path, attrs_path) in &pairs {
        manifest.record_input(edges_path)?;
        manifest.record_input(attrs_path)?;
    }
    manifest.record_output(&args.out);
    manifest.write(&manifest_path(&args.out))?;
    println!("compared {} instance(s) -> {}", pairs.len(), args.out.display());
    Ok(Outcome::Done)
}

fn compare_one(
    args: &CompareArgs,
    resolved: &ResolvedSolver,
    file_cfg: &FileConfig,
    idx: u64,
    edges_path: &PathBuf,
    attrs_path: &PathBuf,
) -> Result<(usize, usize, SideResult, SideResult)> {
    let inst = load_instance(edges_path, attrs_path, &args.instance)?;
    let run_seed = derive_seed(args.seed, idx);

    let cfg = resolved.to_vcycle(run_seed)?;
    let ma_report = ms_solve(&inst, &cfg)?;
    let ma = SideResult {
        objective: ma_report.solution.objective,
        wall: ma_report.wall_total,
        closed: ma_report.solution.closed_count(),
        flag: if ma_report.budget_exhausted {
            "ma-budget".to_string()
        } else {
            String::new()
        },
    };

    let reference = match args.against.as_str() {
        "ma" => {
            let again = ms_solve(&inst, &cfg)?;
            SideResult {
                objective: again.solution.objective,
                wall: again.wall_total,
                closed: again.solution.closed_count(),
                flag: String::new(),
            }
        }
        "ils" => {
            let budget = ma_report.wall_total.mul_f64(args.ils_budget_factor.max(0.0));
            let ils_cfg = ResolvedIls::resolve(
                &args.ils,
                file_cfg,
                Some(budget.as_secs_f64().max(1e-3)),
            )
            .to_ils(derive_seed(args.seed, 1_000_000 + idx));
            let mut ils_cfg = ils_cfg;
            ils_cfg.max_iterations = usize::MAX;
            let ils_report = ils_solve(&inst, &ils_cfg)?;
            SideResult {
                objective: ils_report.solution.objective,
                wall: ils_report.wall_total,
                closed: ils_report.solution.closed_count(),
                flag: String::new(),
            }
        }
        _ => {
            let start = std::time::Instant::now();
            let red = ReducedInstance::from_instance(&inst)?;
            let exact = solve_exact(
                &red,
                args.exact_limit,
                &SolveBudget::steps(args.exact_max_steps),
                None,
            )?;
            SideResult {
                objective: exact.objective,
                wall: start.elapsed(),
                closed: exact.x.iter().filter(|&&v| !v).count(),
                flag: if exact.optimal {
                    String::new()
                } else {
                    "ref-inexact".to_string()
                },
            }
        }
    };
    Ok((inst.n(), inst.graph().num_edges(), ma, reference))
}
