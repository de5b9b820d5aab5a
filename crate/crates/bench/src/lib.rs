//! Shared fixtures for the benchmark suite.

use netresponse::rng::derive_seed;
use netresponse::{erdos_renyi_instance, ErConfig, ResponseInstance};

/// Deterministic sparse instance of the requested size.
pub fn fixture(n: usize, avg_degree: f64, seed: u64) -> ResponseInstance {
    let cfg = ErConfig {
        n,
        edge_prob: (avg_degree / (n as f64 - 1.0)).min(1.0),
        ..ErConfig::default()
    };
    erdos_renyi_instance(&cfg, derive_seed(0xBE7C, seed)).unwrap()
}
