use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use netresponse::ms_solve;
use serde_json::json;

use crate::commands::{load_instance, InstanceOpts};
use crate::config::{ResolvedSolver, SolverOpts};
use crate::manifest::{manifest_path, RunManifest};
use crate::report;
use crate::Outcome;

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Input edge list
    #[arg(long)]
    pub graph: PathBuf,
    /// Input node attribute file
    #[arg(long)]
    pub attrs: PathBuf,
    #[command(flatten)]
    pub instance: InstanceOpts,
    #[command(flatten)]
    pub solver: SolverOpts,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output prefix; writes <prefix>.solution.txt, .report.txt, .trace.csv
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: SolveArgs) -> Result<Outcome> {
    let resolved = ResolvedSolver::resolve(&args.solver)?;
    let cfg = resolved.to_vcycle(args.seed)?;
    let inst = load_instance(&args.graph, &args.attrs, &args.instance)?;
    let solve = ms_solve(&inst, &cfg)?;

    let solution_path = args.out.with_extension("solution.txt");
    let report_path = args.out.with_extension("report.txt");
    let trace_path = args.out.with_extension("trace.csv");
    report::write_file(&solution_path, &report::solution_text(&solve.solution.x))?;
    report::write_file(&report_path, &report::report_text(&solve, &[]))?;
    report::write_file(&trace_path, &report::multiscale_trace_csv(&solve))?;

    let mut manifest = RunManifest::new(
        "solve",
        args.seed,
        json!({
            "solver": resolved,
            "directed": args.instance.directed,
            "largest_component": args.instance.largest_component,
            "degree_penalty": args.instance.degree_penalty,
        }),
    );
    manifest.record_input(&args.graph)?;
    manifest.record_input(&args.attrs)?;
    manifest.record_output(&solution_path);
    manifest.record_output(&report_path);
    manifest.record_output(&trace_path);
    manifest.write(&manifest_path(&args.out))?;

    println!(
        "objective {} ({} closed of {}), {:.3}s",
        solve.solution.objective,
        solve.solution.closed_count(),
        inst.n(),
        solve.wall_total.as_secs_f64()
    );
    Ok(if solve.budget_exhausted {
        Outcome::BudgetExhausted
    } else {
        Outcome::Done
    })
}
