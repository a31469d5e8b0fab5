#![allow(dead_code)]

use qanneal_core::{CostFunction, GraphPartitionInstance, LocalTerm};

/// One bit with `C(0) = 0`, `C(1) = 1` and bounds `(-0.5, 1.5)`, so the
/// normalized costs are `0.25` and `0.75`.
pub fn one_bit_cost() -> CostFunction {
    let t = LocalTerm::new(vec![0], vec![0.0, 1.0]).unwrap();
    CostFunction::with_bounds(1, 0.0, vec![t], -0.5, 1.5).unwrap()
}

pub fn k4(lambda: f64) -> GraphPartitionInstance {
    let edges = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    GraphPartitionInstance::new(4, edges, 1.0, lambda, 1.0).unwrap()
}

/// `(C(x) - c_min) / (c_max - c_min)` from the public evaluation routine.
pub fn c_nor(cost: &CostFunction, x: u64) -> f64 {
    (cost.evaluate_index(x) - cost.c_min()) / (cost.c_max() - cost.c_min())
}

/// Deterministic list of `(n, m, seed)` covering small registers.
pub fn instance_grid(count: usize) -> Vec<(usize, usize, u64)> {
    (0..count)
        .map(|i| {
            let n = 2 + i % 7;
            let m = 1 + (i / 7) % 3;
            (n, m.min(n), 1000 + i as u64)
        })
        .collect()
}
