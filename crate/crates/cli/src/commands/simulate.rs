use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use netresponse::epidemic::{seed_outbreak, spread_iterate};
use netresponse::generate::sample_uniform;
use netresponse::io::{load_edge_list, save_attributes, NodeAttrs};
use netresponse::rng::derive_seed;
use netresponse::{ResponseInstance, ValueRange};
use serde_json::json;

use crate::config::parse_range;
use crate::manifest::{manifest_path, RunManifest};
use crate::Outcome;

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Input edge list
    #[arg(long)]
    pub graph: PathBuf,
    /// Treat the edge list as directed
    #[arg(long)]
    pub directed: bool,
    /// Restrict to the largest connected component first
    #[arg(long)]
    pub largest_component: bool,
    /// Fraction of nodes seeded with high infection
    #[arg(long, default_value_t = 0.05)]
    pub fraction: f64,
    /// Infection level range for seeded nodes
    #[arg(long = "phi-range", default_value = "0.8,1.0", value_parser = parse_range)]
    pub phi_range: (f64, f64),
    /// Spread iterations after seeding
    #[arg(long, default_value_t = 5)]
    pub iterations: usize,
    /// Threshold range sampled per node
    #[arg(long = "b-range", default_value = "0.2,0.8", value_parser = parse_range)]
    pub b_range: (f64, f64),
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output attribute file
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(args: SimulateArgs) -> Result<Outcome> {
    let loaded = load_edge_list(&args.graph, args.directed)
        .with_context(|| format!("loading graph {}", args.graph.display()))?;
    if loaded.self_loops_dropped > 0 {
        eprintln!("dropped {} self-loop record(s)", loaded.self_loops_dropped);
    }
    let graph = if args.largest_component {
        loaded.graph.largest_component()?.0
    } else {
        loaded.graph
    };
    let n = graph.n();

    let b = sample_uniform(
        n,
        ValueRange::new(args.b_range.0, args.b_range.1)?,
        derive_seed(args.seed, 1),
    );
    let inst = ResponseInstance::with_derived_p(graph, vec![0.0; n], b, vec![0.0; n])?;

    let phi_range = ValueRange::new(args.phi_range.0, args.phi_range.1)?;
    let seeded = seed_outbreak(&inst, args.fraction, phi_range, derive_seed(args.seed, 2))?;
    let phi = spread_iterate(&inst, &seeded, args.iterations)?;

    save_attributes(
        &NodeAttrs { phi, b: inst.b().to_vec(), a: vec![0.0; n] },
        &args.out,
    )?;

    let mut manifest = RunManifest::new(
        "simulate",
        args.seed,
        json!({
            "fraction": args.fraction,
            "phi_range": args.phi_range,
            "iterations": args.iterations,
            "b_range": args.b_range,
            "directed": args.directed,
            "largest_component": args.largest_component,
        }),
    );
    manifest.record_input(&args.graph)?;
    manifest.record_output(&args.out);
    manifest.write(&manifest_path(&args.out))?;
    println!(
        "simulated outbreak on {n} node(s); attributes written to {}",
        args.out.display()
    );
    Ok(Outcome::Done)
}
