//! Fixed workloads shared by the benchmarks.

use qanneal_core::{random_graph, random_local_cost, CostFunction};

/// Random 2-local cost on `n` variables with a fixed seed.
pub fn local_cost(n: usize) -> CostFunction {
    random_local_cost(n, 2, 0.3, 17).expect("valid generator parameters")
}

/// Balanced-partition cost of a seeded random graph with `p = 0.5`.
pub fn graph_cost(v: usize) -> CostFunction {
    random_graph(v, 0.5, 17)
        .and_then(|g| g.with_penalty(1.0))
        .and_then(|g| g.cost())
        .expect("valid generator parameters")
}
