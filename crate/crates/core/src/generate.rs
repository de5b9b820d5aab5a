//! Random instance generation: Erdős–Rényi graphs with uniformly sampled
//! weights, infection levels, and thresholds.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::instance::ResponseInstance;
use crate::rng::rng_from_seed;

/// A closed interval to sample uniformly from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValueRange {
    pub lo: f64,
    pub hi: f64,
}

impl ValueRange {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() || lo > hi {
            return Err(Error::invalid(format!("bad range [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    fn sample(&self, rng: &mut impl Rng) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            rng.gen_range(self.lo..=self.hi)
        }
    }

    fn within(&self, lo: f64, hi: f64) -> bool {
        self.lo >= lo && self.hi <= hi
    }
}

/// Parameters for one generated instance.
#[derive(Debug, Clone)]
pub struct ErConfig {
    pub n: usize,
    pub edge_prob: f64,
    /// Edge weights; must lie in (0, 1].
    pub weight_range: ValueRange,
    /// Infection probabilities; must lie in [0, 1].
    pub phi_range: ValueRange,
    /// Exposure thresholds; must lie in [0, 1].
    pub b_range: ValueRange,
}

impl Default for ErConfig {
    fn default() -> Self {
        Self {
            n: 20,
            edge_prob: 0.3,
            weight_range: ValueRange { lo: 0.1, hi: 1.0 },
            phi_range: ValueRange { lo: 0.0, hi: 1.0 },
            b_range: ValueRange { lo: 0.0, hi: 1.0 },
        }
    }
}

/// Sample `n` values uniformly from a range, deterministically per seed.
pub fn sample_uniform(n: usize, range: ValueRange, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    (0..n).map(|_| range.sample(&mut rng)).collect()
}

/// Generate a G(n, p) instance. Transmission probabilities are derived from
/// the sampled weights; linear coefficients are zero. Bitwise reproducible
/// for a fixed seed.
pub fn erdos_renyi_instance(cfg: &ErConfig, seed: u64) -> Result<ResponseInstance> {
    if cfg.n < 2 {
        return Err(Error::invalid("need at least 2 nodes"));
    }
    if !(0.0..=1.0).contains(&cfg.edge_prob) {
        return Err(Error::invalid("edge_prob must be in [0, 1]"));
    }
    if !cfg.weight_range.within(f64::MIN_POSITIVE, 1.0) {
        return Err(Error::invalid("weight_range must lie in (0, 1]"));
    }
    if !cfg.phi_range.within(0.0, 1.0) {
        return Err(Error::invalid("phi_range must lie in [0, 1]"));
    }
    if !cfg.b_range.within(0.0, 1.0) {
        return Err(Error::invalid("b_range must lie in [0, 1]"));
    }

    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for i in 0..cfg.n {
        for j in (i + 1)..cfg.n {
            if rng.gen_bool(cfg.edge_prob) {
                edges.push((i, j, cfg.weight_range.sample(&mut rng)));
            }
        }
    }
    if edges.is_empty() {
        return Err(Error::invalid(
            "generated graph has no edges; increase edge_prob or n",
        ));
    }
    let phi: Vec<f64> = (0..cfg.n).map(|_| cfg.phi_range.sample(&mut rng)).collect();
    let b: Vec<f64> = (0..cfg.n).map(|_| cfg.b_range.sample(&mut rng)).collect();
    let graph = WeightedGraph::from_edges(cfg.n, edges)?;
    ResponseInstance::with_derived_p(graph, phi, b, vec![0.0; cfg.n])
}
