//! Shared inputs for the benchmarks.

use dmcsched::generate::{generate_instance, GeneratorConfig};
use dmcsched::model::{NetworkInstance, RoutingMatrices};
use dmcsched::routing::{metric_closure, DirectedCostGraph};

pub fn instance(n: usize, seed: u64) -> NetworkInstance {
    generate_instance(n, seed, &GeneratorConfig::default()).expect("default generator is valid")
}

/// Closed movement-energy graph on the base station and the first `n - 1` node positions.
pub fn routing_graph(n: usize, seed: u64) -> DirectedCostGraph {
    let inst = instance(n.max(2) - 1, seed);
    let mut pts = vec![inst.bs_pos];
    pts.extend(inst.node_positions());
    let mats = RoutingMatrices::build(pts, &inst.asym, &inst.dmc);
    metric_closure(&DirectedCostGraph::new(mats.energy_matrix()).expect("finite costs"))
}
