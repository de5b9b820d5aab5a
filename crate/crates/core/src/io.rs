//! Text formats: whitespace-separated edge lists (`i j [w]`, `#` comments)
//! and node attribute files (`id phi b [a]`). Node ids are compacted to
//! 0-based contiguous integers on load.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, WeightedGraph};

/// Result of loading an edge list, with diagnostics about raw records.
#[derive(Debug)]
pub struct LoadedGraph {
    pub graph: WeightedGraph,
    /// For each compact node id, the id used in the input file.
    pub original_ids: Vec<u64>,
    pub self_loops_dropped: usize,
    pub records_merged: usize,
}

fn io_err(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.to_path_buf(), source }
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { path: path.to_path_buf(), line, msg: msg.into() }
}

/// Load a whitespace-separated edge list. Lines are `i j [w]` with weight
/// defaulting to 1.0; `#`-prefixed lines are comments. A leading `# nodes N`
/// comment (as written by [`save_edge_list`]) declares the node count so
/// isolated nodes survive the round trip; without it, node ids are compacted
/// in sorted order. Duplicate records of a node pair are merged by weight
/// summation (this also symmetrizes directed inputs); self-loops are dropped
/// and counted. The `directed_input` flag documents the file's intent;
/// reverse-direction records merge by summation either way.
pub fn load_edge_list(path: &Path, directed_input: bool) -> Result<LoadedGraph> {
    let _ = directed_input;
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;

    let mut declared_n: Option<usize> = None;
    let mut raw: Vec<(u64, u64, f64)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            if declared_n.is_none() {
                if let Some(rest) = line.strip_prefix("# nodes ") {
                    declared_n = rest.trim().parse().ok();
                }
            }
            continue;
        }
        let mut fields = line.split_whitespace();
        let i: u64 = fields
            .next()
            .ok_or_else(|| parse_err(path, lineno + 1, "missing source node"))?
            .parse()
            .map_err(|e| parse_err(path, lineno + 1, format!("bad source node: {e}")))?;
        let j: u64 = fields
            .next()
            .ok_or_else(|| parse_err(path, lineno + 1, "missing target node"))?
            .parse()
            .map_err(|e| parse_err(path, lineno + 1, format!("bad target node: {e}")))?;
        let w: f64 = match fields.next() {
            Some(tok) => tok
                .parse()
                .map_err(|e| parse_err(path, lineno + 1, format!("bad weight: {e}")))?,
            None => 1.0,
        };
        if fields.next().is_some() {
            return Err(parse_err(path, lineno + 1, "too many fields"));
        }
        if !w.is_finite() || w <= 0.0 {
            return Err(Error::invalid(format!(
                "{}:{}: edge weight must be positive, got {w}",
                path.display(),
                lineno + 1
            )));
        }
        raw.push((i, j, w));
    }

    if let Some(n) = declared_n {
        // declared node count: ids are taken as-is, gaps are isolated nodes
        let mut builder = GraphBuilder::new();
        for &(i, j, w) in &raw {
            if i as usize >= n || j as usize >= n {
                return Err(Error::invalid(format!(
                    "{}: edge ({i}, {j}) outside declared node count {n}",
                    path.display()
                )));
            }
            builder.add(i as usize, j as usize, w)?;
        }
        let self_loops_dropped = builder.self_loops_dropped();
        let records_merged = builder.records_merged();
        let graph = builder.build(n)?;
        return Ok(LoadedGraph {
            graph,
            original_ids: (0..n as u64).collect(),
            self_loops_dropped,
            records_merged,
        });
    }

    // Compact ids: sorted distinct original ids map to 0..n.
    let mut ids: Vec<u64> = raw.iter().flat_map(|&(i, j, _)| [i, j]).collect();
    ids.sort_unstable();
    ids.dedup();
    let compact = |id: u64| ids.binary_search(&id).unwrap();

    let mut builder = GraphBuilder::new();
    for &(i, j, w) in &raw {
        builder.add(compact(i), compact(j), w)?;
    }
    let self_loops_dropped = builder.self_loops_dropped();
    let records_merged = builder.records_merged();
    let graph = builder.build(ids.len())?;
    Ok(LoadedGraph { graph, original_ids: ids, self_loops_dropped, records_merged })
}

/// Write an edge list in the canonical `i j w` form with a `# nodes N`
/// directive so isolated nodes and weights round-trip exactly through
/// [`load_edge_list`].
pub fn save_edge_list(graph: &WeightedGraph, path: &Path) -> Result<()> {
    let mut out = format!("# nodes {}\n", graph.n());
    for e in graph.edges() {
        out.push_str(&format!("{} {} {}\n", e.u, e.v, e.w));
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

/// Per-node problem attributes as stored in attribute files.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeAttrs {
    pub phi: Vec<f64>,
    pub b: Vec<f64>,
    pub a: Vec<f64>,
}

/// Load a node attribute file: lines `id phi b [a]`, `#` comments, one line
/// per node id in `0..n`. Missing `a` defaults to 0.
pub fn load_attributes(path: &Path, n: usize) -> Result<NodeAttrs> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut phi = vec![None; n];
    let mut b = vec![None; n];
    let mut a = vec![0.0; n];
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 3 || fields.len() > 4 {
            return Err(parse_err(path, lineno + 1, "expected `id phi b [a]`"));
        }
        let id: usize = fields[0]
            .parse()
            .map_err(|e| parse_err(path, lineno + 1, format!("bad node id: {e}")))?;
        if id >= n {
            return Err(parse_err(
                path,
                lineno + 1,
                format!("node id {id} out of range 0..{n}"),
            ));
        }
        let phi_v: f64 = fields[1]
            .parse()
            .map_err(|e| parse_err(path, lineno + 1, format!("bad phi: {e}")))?;
        let b_v: f64 = fields[2]
            .parse()
            .map_err(|e| parse_err(path, lineno + 1, format!("bad b: {e}")))?;
        if phi[id].is_some() {
            return Err(parse_err(path, lineno + 1, format!("duplicate node id {id}")));
        }
        phi[id] = Some(phi_v);
        b[id] = Some(b_v);
        if fields.len() == 4 {
            a[id] = fields[3]
                .parse()
                .map_err(|e| parse_err(path, lineno + 1, format!("bad a: {e}")))?;
        }
    }
    let phi = phi
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::invalid(format!("missing attributes for node {i}"))))
        .collect::<Result<Vec<_>>>()?;
    let b = b.into_iter().map(Option::unwrap).collect();
    Ok(NodeAttrs { phi, b, a })
}

pub fn save_attributes(attrs: &NodeAttrs, path: &Path) -> Result<()> {
    let mut file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut out = String::new();
    for i in 0..attrs.phi.len() {
        out.push_str(&format!("{} {} {} {}\n", i, attrs.phi[i], attrs.b[i], attrs.a[i]));
    }
    file.write_all(out.as_bytes()).map_err(|e| io_err(path, e))
}
