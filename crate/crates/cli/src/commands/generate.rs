use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Args;
use netresponse::io::{save_attributes, save_edge_list, NodeAttrs};
use netresponse::rng::derive_seed;
use netresponse::{erdos_renyi_instance, ErConfig, ValueRange};
use rayon::prelude::*;
use serde_json::json;

use crate::config::parse_range;
use crate::manifest::RunManifest;
use crate::Outcome;

#[derive(Args, Debug)]
pub struct GenerateArgs {
    /// Nodes per instance
    #[arg(long)]
    pub n: usize,
    /// Edge probability
    #[arg(long = "edge-prob", short = 'p')]
    pub edge_prob: f64,
    /// Number of instances
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Master seed; instance i derives its own seed from (seed, i)
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Edge-weight range, a sub-interval of (0, 1]
    #[arg(long = "w-range", default_value = "0.1,1.0", value_parser = parse_range)]
    pub w_range: (f64, f64),
    /// Infection-level range, a sub-interval of [0, 1]
    #[arg(long = "phi-range", default_value = "0.0,1.0", value_parser = parse_range)]
    pub phi_range: (f64, f64),
    /// Threshold range, a sub-interval of [0, 1]
    #[arg(long = "b-range", default_value = "0.0,1.0", value_parser = parse_range)]
    pub b_range: (f64, f64),
    #[arg(long = "out-dir")]
    pub out_dir: PathBuf,
}

pub fn run(args: GenerateArgs) -> Result<Outcome> {
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let cfg = ErConfig {
        n: args.n,
        edge_prob: args.edge_prob,
        weight_range: ValueRange::new(args.w_range.0, args.w_range.1)?,
        phi_range: ValueRange::new(args.phi_range.0, args.phi_range.1)?,
        b_range: ValueRange::new(args.b_range.0, args.b_range.1)?,
    };

    let paths: Vec<(PathBuf, PathBuf)> = (0..args.count)
        .into_par_iter()
        .map(|i| -> Result<(PathBuf, PathBuf)> {
            let inst = erdos_renyi_instance(&cfg, derive_seed(args.seed, i as u64))?;
            let edges_path = args.out_dir.join(format!("inst_{i:04}.edges"));
            let attrs_path = args.out_dir.join(format!("inst_{i:04}.attrs"));
            save_edge_list(inst.graph(), &edges_path)?;
            save_attributes(
                &NodeAttrs {
                    phi: inst.phi().to_vec(),
                    b: inst.b().to_vec(),
                    a: inst.a().to_vec(),
                },
                &attrs_path,
            )?;
            Ok((edges_path, attrs_path))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut manifest = RunManifest::new(
        "generate",
        args.seed,
        json!({
            "n": args.n,
            "edge_prob": args.edge_prob,
            "count": args.count,
            "w_range": args.w_range,
            "phi_range": args.phi_range,
            "b_range": args.b_range,
        }),
    );
    for (edges, attrs) in &paths {
        manifest.record_output(edges);
        manifest.record_output(attrs);
    }
    manifest.write(&args.out_dir.join("manifest.json"))?;
    println!("generated {} instance(s) in {}", args.count, args.out_dir.display());
    Ok(Outcome::Done)
}
