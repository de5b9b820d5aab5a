//! SIS dynamics: the two-population mean-field ODE, node-level probabilistic
//! dynamics, and the synchronous outbreak-spread iteration used to build
//! optimization inputs.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::generate::ValueRange;
use crate::instance::ResponseInstance;
use crate::rng::rng_from_seed;

/// Mean-field SIS parameters.
#[derive(Debug, Clone, Copy)]
pub struct SISParams {
    /// Infection transmission rate.
    pub beta: f64,
    /// Recovery rate.
    pub delta: f64,
    /// Average node degree.
    pub k_avg: f64,
}

/// One explicit-Euler step of the susceptible/infected population ODE.
/// Returns the clamped-nonnegative (S', I'). S + I is conserved exactly
/// before clamping because the two derivatives are exact negatives.
pub fn mean_field_step(s: f64, i: f64, params: &SISParams, dt: f64) -> Result<(f64, f64)> {
    if dt <= 0.0 || !dt.is_finite() {
        return Err(Error::invalid(format!("dt must be positive, got {dt}")));
    }
    if s < 0.0 || i < 0.0 || s + i <= 0.0 {
        return Err(Error::invalid("need S, I >= 0 with S + I > 0"));
    }
    let lambda = params.beta * params.k_avg * i / (s + i);
    let flow = (lambda * s - params.delta * i) * dt; // dI = -dS
    Ok(((s - flow).max(0.0), (i + flow).max(0.0)))
}

/// One step of the node-level SIS dynamics: each node's next infection
/// probability from its neighbors' previous ones, with recovery rate
/// `delta`. Output clamped to [0, 1].
pub fn node_sis_step(inst: &ResponseInstance, phi_prev: &[f64], delta: f64) -> Result<Vec<f64>> {
    if phi_prev.len() != inst.n() {
        return Err(Error::invalid("phi length mismatch"));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::invalid("delta must be in [0, 1]"));
    }
    let g = inst.graph();
    let mut next = Vec::with_capacity(inst.n());
    for i in 0..inst.n() {
        let mut h = 1.0;
        for inc in g.adj(i) {
            h *= 1.0 - inst.p()[inc.edge] * phi_prev[inc.neighbor];
        }
        // 1 - phi_t = (1 - phi_{t-1}) h + delta phi_{t-1} h
        let susceptible = (1.0 - phi_prev[i]) * h + delta * phi_prev[i] * h;
        next.push((1.0 - susceptible).clamp(0.0, 1.0));
    }
    Ok(next)
}

/// Seed an outbreak: ceil(fraction * n) nodes chosen uniformly at random get
/// an infection level drawn from `phi_high_range`; everyone else gets 0.
pub fn seed_outbreak(
    inst: &ResponseInstance,
    fraction: f64,
    phi_high_range: ValueRange,
    seed: u64,
) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&fraction) || fraction == 0.0 {
        return Err(Error::invalid("fraction must be in (0, 1]"));
    }
    if phi_high_range.lo < 0.0 || phi_high_range.hi > 1.0 {
        return Err(Error::invalid("phi_high_range must lie in [0, 1]"));
    }
    let n = inst.n();
    let count = ((fraction * n as f64).ceil() as usize).clamp(1, n);
    let mut rng = rng_from_seed(seed);
    let mut ids: Vec<usize> = (0..n).collect();
    ids.shuffle(&mut rng);
    let mut phi = vec![0.0; n];
    for &i in ids.iter().take(count) {
        phi[i] = if phi_high_range.lo == phi_high_range.hi {
            phi_high_range.lo
        } else {
            rng.gen_range(phi_high_range.lo..=phi_high_range.hi)
        };
    }
    Ok(phi)
}

/// Synchronous infection spread: every node releases its infection to its
/// neighbors in proportion to transmission probability, clamped at 1.
/// Isolated nodes (or nodes whose incident p sum to zero) are unchanged.
pub fn spread_iterate(inst: &ResponseInstance, phi: &[f64], iterations: usize) -> Result<Vec<f64>> {
    if phi.len() != inst.n() {
        return Err(Error::invalid("phi length mismatch"));
    }
    let g = inst.graph();
    let p_sum: Vec<f64> = (0..inst.n())
        .map(|i| g.adj(i).iter().map(|inc| inst.p()[inc.edge]).sum())
        .collect();
    let mut cur = phi.to_vec();
    for _ in 0..iterations {
        let mut next = Vec::with_capacity(inst.n());
        for i in 0..inst.n() {
            if p_sum[i] <= 0.0 {
                next.push(cur[i]);
                continue;
            }
            let mut incoming = 0.0;
            for inc in g.adj(i) {
                incoming += inst.p()[inc.edge] / p_sum[i] * cur[inc.neighbor];
            }
            next.push((cur[i] + incoming).min(1.0));
        }
        cur = next;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;

    fn single_edge_instance(p: f64, phi: [f64; 2]) -> ResponseInstance {
        let g = WeightedGraph::from_edges(2, [(0, 1, 1.0)]).unwrap();
        ResponseInstance::new(g, vec![p], phi.to_vec(), vec![1.0; 2], vec![0.0; 2]).unwrap()
    }

    fn three_node_instance() -> ResponseInstance {
        // edge (0,1); node 2 isolated
        let g = WeightedGraph::from_edges(3, [(0, 1, 1.0)]).unwrap();
        ResponseInstance::new(g, vec![1.0], vec![0.0; 3], vec![1.0; 3], vec![0.0; 3]).unwrap()
    }

    #[test]
    fn mean_field_disease_free_fixed_point() {
        let params = SISParams { beta: 2.0, delta: 0.5, k_avg: 4.0 };
        let (s, i) = mean_field_step(100.0, 0.0, &params, 0.1).unwrap();
        assert_eq!((s, i), (100.0, 0.0));
    }

    #[test]
    fn mean_field_hand_step() {
        let params = SISParams { beta: 0.0, delta: 1.0, k_avg: 4.0 };
        let (s, i) = mean_field_step(90.0, 10.0, &params, 0.1).unwrap();
        assert_eq!((s, i), (91.0, 9.0));
    }

    #[test]
    fn mean_field_conserves_total() {
        let params = SISParams { beta: 1.3, delta: 0.7, k_avg: 6.0 };
        let (s, i) = mean_field_step(55.5, 44.5, &params, 0.01).unwrap();
        assert!(((s + i) - 100.0).abs() < 1e-12);
        assert!(mean_field_step(1.0, 1.0, &params, 0.0).is_err());
        assert!(mean_field_step(1.0, 1.0, &params, -0.5).is_err());
    }

    #[test]
    fn node_sis_disease_free_stays() {
        let inst = three_node_instance();
        let next = node_sis_step(&inst, &[0.0; 3], 0.3).unwrap();
        assert_eq!(next, vec![0.0; 3]);
    }

    #[test]
    fn node_sis_isolated_full_recovery() {
        let inst = three_node_instance();
        // isolated node 2 with phi = 0.5 and delta = 1: h = 1, so
        // 1 - phi' = 0.5 + 0.5 = 1, i.e. phi' = 0.
        let next = node_sis_step(&inst, &[0.0, 0.0, 0.5], 1.0).unwrap();
        assert_eq!(next[2], 0.0);
    }

    #[test]
    fn node_sis_certain_transmission() {
        let inst = single_edge_instance(1.0, [1.0, 0.0]);
        let next = node_sis_step(&inst, &[1.0, 0.0], 0.0).unwrap();
        // node 1 sees h = 1 - 1*1 = 0, so phi' = 1
        assert_eq!(next[1], 1.0);
    }

    #[test]
    fn node_sis_stays_in_unit_interval() {
        let inst = single_edge_instance(0.8, [0.9, 0.7]);
        let mut phi = vec![0.9, 0.7];
        for _ in 0..50 {
            phi = node_sis_step(&inst, &phi, 0.2).unwrap();
            assert!(phi.iter().all(|&v| (0.0..=1.0).contains(&v)));
        }
    }

    #[test]
    fn outbreak_seeding_counts_and_determinism() {
        let inst = three_node_instance();
        let range = ValueRange::new(0.8, 1.0).unwrap();
        let phi = seed_outbreak(&inst, 0.34, range, 5).unwrap();
        assert_eq!(phi.iter().filter(|&&v| v > 0.0).count(), 2);
        assert!(phi.iter().all(|&v| v == 0.0 || (0.8..=1.0).contains(&v)));

        let again = seed_outbreak(&inst, 0.34, range, 5).unwrap();
        assert_eq!(phi, again);

        // fraction covering everything
        let all = seed_outbreak(&inst, 1.0, range, 5).unwrap();
        assert!(all.iter().all(|&v| (0.8..=1.0).contains(&v)));
    }

    #[test]
    fn spread_isolated_unchanged() {
        let inst = three_node_instance();
        let phi = spread_iterate(&inst, &[0.0, 0.0, 0.3], 10).unwrap();
        assert_eq!(phi[2], 0.3);
    }

    #[test]
    fn spread_single_edge_hand_values() {
        let inst = single_edge_instance(0.6, [0.4, 0.2]);
        // single neighbor means the ratio is 1 regardless of p
        let phi = spread_iterate(&inst, &[0.4, 0.2], 1).unwrap();
        assert!((phi[0] - 0.6).abs() < 1e-15);
        assert!((phi[1] - 0.6).abs() < 1e-15);

        // saturation at 1
        let sat = spread_iterate(&inst, &[1.0, 1.0], 1).unwrap();
        assert_eq!(sat, vec![1.0, 1.0]);
    }

    #[test]
    fn spread_is_monotone() {
        let g = WeightedGraph::from_edges(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5)]).unwrap();
        let inst = ResponseInstance::with_derived_p(g, vec![0.0; 4], vec![1.0; 4], vec![0.0; 4])
            .unwrap();
        let start = vec![0.3, 0.0, 0.1, 0.0];
        let mut prev = start.clone();
        for iters in 1..5 {
            let cur = spread_iterate(&inst, &start, iters).unwrap();
            for (a, b) in prev.iter().zip(&cur) {
                assert!(b >= a);
            }
            prev = cur;
        }
    }
}
