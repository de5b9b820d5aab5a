pub mod baseline;
pub mod compare;
pub mod generate;
pub mod hierarchy;
pub mod simulate;
pub mod solve;

use std::path::Path;

use anyhow::{Context, Result};
use clap::Args;
use netresponse::io::{load_attributes, load_edge_list};
use netresponse::ResponseInstance;

/// Instance-loading flags shared by solve/baseline/compare/hierarchy.
#[derive(Args, Debug, Clone)]
pub struct InstanceOpts {
    /// Treat the edge list as directed (reverse records merge by summation)
    #[arg(long)]
    pub directed: bool,
    /// Restrict to the largest connected component before solving
    #[arg(long)]
    pub largest_component: bool,
    /// Subtract each node's weighted degree from its linear coefficient
    #[arg(long)]
    pub degree_penalty: bool,
}

/// Load a graph + attribute pair into an instance. Transmission
/// probabilities are derived from edge weights.
pub fn load_instance(
    graph_path: &Path,
    attrs_path: &Path,
    opts: &InstanceOpts,
) -> Result<ResponseInstance> {
    let loaded = load_edge_list(graph_path, opts.directed)
        .with_context(|| format!("loading graph {}", graph_path.display()))?;
    let graph = if opts.largest_component {
        loaded.graph.largest_component()?.0
    } else {
        loaded.graph
    };
    let attrs = load_attributes(attrs_path, graph.n())
        .with_context(|| format!("loading attributes {}", attrs_path.display()))?;
    let inst = ResponseInstance::with_derived_p(graph, attrs.phi, attrs.b, attrs.a)?;
    Ok(if opts.degree_penalty {
        inst.with_degree_penalty()
    } else {
        inst
    })
}
