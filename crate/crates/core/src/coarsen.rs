//! One level of coarsening: split nodes into seeds (C) and others (F) by
//! algebraic coupling, aggregate F nodes into seed-led clusters, and build
//! the aggregated coarse instance whose objective matches the fine one under
//! prolongation.

use std::collections::BTreeMap;

use crate::algdist::EdgeDistances;
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::instance::ResponseInstance;

/// Traversal order over infection levels during the F-C split.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiOrder {
    /// Highly infected nodes first (default).
    Descending,
    Ascending,
}

/// How per-node scalars (phi, b) are accumulated into coarse nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarAgg {
    Mean,
    Sum,
    Max,
}

/// Seed/non-seed node partition.
#[derive(Debug, Clone)]
pub struct FCSplit {
    pub is_seed: Vec<bool>,
}

impl FCSplit {
    pub fn seed_count(&self) -> usize {
        self.is_seed.iter().filter(|&&s| s).count()
    }

    pub fn seeds(&self) -> impl Iterator<Item = usize> + '_ {
        self.is_seed.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| i)
    }
}

/// Fine-to-coarse assignment: each fine node belongs to exactly one
/// aggregate, and each aggregate is led by one seed node.
#[derive(Debug, Clone)]
pub struct AggregateMap {
    /// aggregate_of[fine] = coarse id.
    pub aggregate_of: Vec<usize>,
    /// seed_of[coarse] = the seed fine node leading that aggregate.
    pub seed_of: Vec<usize>,
    /// F nodes promoted to seeds because they could not be attached.
    pub promoted: Vec<usize>,
}

impl AggregateMap {
    pub fn coarse_count(&self) -> usize {
        self.seed_of.len()
    }

    /// Members of each aggregate, ascending fine ids.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.coarse_count()];
        for (fine, &coarse) in self.aggregate_of.iter().enumerate() {
            out[coarse].push(fine);
        }
        out
    }

    /// Prolong a coarse assignment to fine variables.
    pub fn prolong(&self, coarse_x: &[bool]) -> Vec<bool> {
        self.aggregate_of.iter().map(|&c| coarse_x[c]).collect()
    }
}

/// One fine-to-coarse hierarchy step.
#[derive(Debug, Clone)]
pub struct HierarchyLevel {
    pub agg: AggregateMap,
    pub coarse: ResponseInstance,
    pub fine_n: usize,
    pub theta_used: f64,
}

/// Split nodes into seeds and non-seeds. Nodes are traversed in order of
/// infection level (ties by node id); a node becomes a seed when its coupling
/// to the current seed set is below `theta`:
///   sum_{j in N(i) ∩ C} rho_ij^{-1} / sum_{j in N(i)} rho_ij^{-1} < theta.
/// Nodes with no neighbors always become seeds.
pub fn fc_split(
    g: &WeightedGraph,
    dist: &EdgeDistances,
    phi: &[f64],
    theta: f64,
    order: PhiOrder,
) -> FCSplit {
    assert_eq!(phi.len(), g.n());
    assert!(theta > 0.0 && theta < 1.0, "theta must be in (0, 1)");
    let mut visit: Vec<usize> = (0..g.n()).collect();
    visit.sort_by(|&a, &b| match order {
        PhiOrder::Descending => phi[b].partial_cmp(&phi[a]).unwrap().then(a.cmp(&b)),
        PhiOrder::Ascending => phi[a].partial_cmp(&phi[b]).unwrap().then(a.cmp(&b)),
    });

    let mut is_seed = vec![false; g.n()];
    for &i in &visit {
        if g.degree(i) == 0 {
            is_seed[i] = true;
            continue;
        }
        let mut to_seeds = 0.0;
        let mut total = 0.0;
        for inc in g.adj(i) {
            let c = dist.coupling(inc.edge);
            total += c;
            if is_seed[inc.neighbor] {
                to_seeds += c;
            }
        }
        if to_seeds / total < theta {
            is_seed[i] = true;
        }
    }
    FCSplit { is_seed }
}

/// Attach each non-seed node to the aggregate of its strongest-coupled seed
/// neighbor (ties by smallest seed id). Non-seed nodes without a seed
/// neighbor resolve through their strongest-coupled non-seed neighbor,
/// iteratively; anything still unattached is promoted to a seed.
pub fn aggregate(g: &WeightedGraph, split: &FCSplit, dist: &EdgeDistances) -> AggregateMap {
    let n = g.n();
    let mut owner: Vec<Option<usize>> = vec![None; n]; // fine node -> owning seed
    for s in split.seeds() {
        owner[s] = Some(s);
    }

    // direct attachment to the strongest-coupled seed neighbor
    for i in 0..n {
        if split.is_seed[i] {
            continue;
        }
        let mut best: Option<(f64, usize)> = None;
        for inc in g.adj(i) {
            if !split.is_seed[inc.neighbor] {
                continue;
            }
            let c = dist.coupling(inc.edge);
            best = match best {
                Some((bc, bj)) if bc > c || (bc == c && bj < inc.neighbor) => Some((bc, bj)),
                _ => Some((c, inc.neighbor)),
            };
        }
        if let Some((_, seed)) = best {
            owner[i] = Some(seed);
        }
    }

    // iterative resolution through strongest-coupled non-seed neighbors
    loop {
        let mut changed = false;
        for i in 0..n {
            if owner[i].is_some() {
                continue;
            }
            let mut best: Option<(f64, usize)> = None;
            for inc in g.adj(i) {
                if split.is_seed[inc.neighbor] {
                    continue;
                }
                let c = dist.coupling(inc.edge);
                best = match best {
                    Some((bc, bj)) if bc > c || (bc == c && bj < inc.neighbor) => Some((bc, bj)),
                    _ => Some((c, inc.neighbor)),
                };
            }
            if let Some((_, via)) = best {
                if let Some(seed) = owner[via] {
                    owner[i] = Some(seed);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }

    // promote anything left over
    let mut promoted = Vec::new();
    for i in 0..n {
        if owner[i].is_none() {
            owner[i] = Some(i);
            promoted.push(i);
        }
    }

    // coarse ids in ascending seed order
    let mut seed_of: Vec<usize> = owner
        .iter()
        .enumerate()
        .filter(|&(i, &o)| o == Some(i))
        .map(|(i, _)| i)
        .collect();
    seed_of.sort_unstable();
    let mut coarse_id = vec![usize::MAX; n];
    for (cid, &s) in seed_of.iter().enumerate() {
        coarse_id[s] = cid;
    }
    let aggregate_of = owner.into_iter().map(|o| coarse_id[o.unwrap()]).collect();
    AggregateMap { aggregate_of, seed_of, promoted }
}

/// Build the aggregated coarse instance. Inter-aggregate edge weights sum the
/// crossing fine weights; the coarse linear coefficient of an aggregate is its
/// internal fine edge weight plus its members' fine coefficients, so the
/// objective is exactly preserved under prolongation. Transmission
/// probabilities are re-derived from coarse weights when the fine ones were
/// derived from fine weights, and are averaged over crossing edges otherwise.
pub fn coarse_instance(
    fine: &ResponseInstance,
    agg: &AggregateMap,
    scalar: ScalarAgg,
) -> Result<ResponseInstance> {
    let big_n = agg.coarse_count();
    if agg.aggregate_of.len() != fine.n() {
        return Err(Error::invalid("aggregate map does not cover the fine instance"));
    }
    if agg.aggregate_of.iter().any(|&c| c >= big_n) {
        return Err(Error::invalid("aggregate map references unknown coarse node"));
    }

    let g = fine.graph();
    let mut coarse_w: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut p_sum: BTreeMap<(usize, usize), (f64, usize)> = BTreeMap::new();
    let mut lin = vec![0.0; big_n];

    for (idx, e) in g.edges().iter().enumerate() {
        let (cu, cv) = (agg.aggregate_of[e.u], agg.aggregate_of[e.v]);
        if cu == cv {
            lin[cu] += e.w;
        } else {
            let key = (cu.min(cv), cu.max(cv));
            *coarse_w.entry(key).or_insert(0.0) += e.w;
            let entry = p_sum.entry(key).or_insert((0.0, 0));
            entry.0 += fine.p()[idx];
            entry.1 += 1;
        }
    }
    for (i, &ai) in fine.a().iter().enumerate() {
        lin[agg.aggregate_of[i]] += ai;
    }

    let members = agg.members();
    let fold = |values: &[f64], ids: &[usize]| -> f64 {
        let picked: Vec<f64> = ids.iter().map(|&i| values[i]).collect();
        match scalar {
            ScalarAgg::Mean => picked.iter().sum::<f64>() / picked.len() as f64,
            ScalarAgg::Sum => picked.iter().sum(),
            ScalarAgg::Max => picked.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)),
        }
    };
    let phi: Vec<f64> = members
        .iter()
        .map(|ids| fold(fine.phi(), ids).clamp(0.0, 1.0))
        .collect();
    let b: Vec<f64> = members.iter().map(|ids| fold(fine.b(), ids).max(0.0)).collect();

    let edges: Vec<(usize, usize, f64)> =
        coarse_w.iter().map(|(&(u, v), &w)| (u, v, w)).collect();
    let coarse_graph = WeightedGraph::from_edges(big_n, edges)?;

    let derived = fine.p_derived_from_w();
    let p: Vec<f64> = if derived {
        coarse_graph.p_from_weights()
    } else {
        coarse_w
            .keys()
            .map(|key| {
                let (sum, count) = p_sum[key];
                (sum / count as f64).clamp(0.0, 1.0)
            })
            .collect()
    };
    ResponseInstance::validated(coarse_graph, p, phi, b, lin, derived)
}

/// Identity aggregation (every node its own aggregate), for tests and
/// degenerate levels.
pub fn identity_aggregation(n: usize) -> AggregateMap {
    AggregateMap {
        aggregate_of: (0..n).collect(),
        seed_of: (0..n).collect(),
        promoted: Vec::new(),
    }
}
