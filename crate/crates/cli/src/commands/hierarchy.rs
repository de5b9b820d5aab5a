use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use clap::Args;
use netresponse::build_hierarchy;
use serde_json::json;

use crate::commands::{load_instance, InstanceOpts};
use crate::config::{ResolvedSolver, SolverOpts};
use crate::manifest::{manifest_path, RunManifest};
use crate::report::write_file;
use crate::Outcome;

#[derive(Args, Debug)]
pub struct HierarchyArgs {
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
    /// Output CSV file
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: HierarchyArgs) -> Result<Outcome> {
    let resolved = ResolvedSolver::resolve(&args.solver)?;
    let cfg = resolved.to_vcycle(args.seed)?;
    let inst = load_instance(&args.graph, &args.attrs, &args.instance)?;
    let hierarchy = build_hierarchy(&inst, &cfg)?;

    let mut csv =
        String::from("level,fine_n,coarse_n,theta,agg_size_min,agg_size_mean,agg_size_max,agg_size_histogram\n");
    for (idx, level) in hierarchy.levels.iter().enumerate() {
        let sizes: Vec<usize> = level.agg.members().iter().map(|m| m.len()).collect();
        let min = sizes.iter().min().copied().unwrap_or(0);
        let max = sizes.iter().max().copied().unwrap_or(0);
        let mean = sizes.iter().sum::<usize>() as f64 / sizes.len().max(1) as f64;
        let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
        for s in sizes {
            *hist.entry(s).or_insert(0) += 1;
        }
        let hist_str = hist
            .iter()
            .map(|(size, count)| format!("{size}:{count}"))
            .collect::<Vec<_>>()
            .join(";");
        let _ = writeln!(
            csv,
            "{idx},{},{},{},{min},{mean},{max},{hist_str}",
            level.fine_n,
            level.agg.coarse_count(),
            level.theta_used,
        );
    }
    write_file(&args.out, &csv)?;

    let mut manifest = RunManifest::new(
        "hierarchy",
        args.seed,
        json!({
            "solver": resolved,
            "stalled": hierarchy.stalled,
            "levels": hierarchy.levels.len(),
        }),
    );
    manifest.record_input(&args.graph)?;
    manifest.record_input(&args.attrs)?;
    manifest.record_output(&args.out);
    manifest.write(&manifest_path(&args.out))?;
    println!(
        "{} level(s){} -> {}",
        hierarchy.levels.len(),
        if hierarchy.stalled { " (stalled)" } else { "" },
        args.out.display()
    );
    Ok(Outcome::Done)
}
