//! Deterministic reductions and seed derivation.
//!
//! Sums over exponentially large index ranges are split at fixed block
//! boundaries and combined pairwise, so the rounding pattern depends only on
//! the range length and never on how many worker threads rayon happens to use.

const BLOCK: usize = 4096;

/// Pairwise tree sum of `f(i)` for `i` in `0..len`.
pub fn tree_sum<F>(len: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    tree_sum_range(0, len, &f)
}

fn tree_sum_range<F>(start: usize, end: usize, f: &F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let len = end - start;
    if len <= BLOCK {
        return (start..end).map(f).sum();
    }
    // split on a block boundary so the tree shape is fixed by `len` alone
    let blocks = len.div_ceil(BLOCK);
    let mid = start + (blocks / 2) * BLOCK;
    let (a, b) = rayon::join(|| tree_sum_range(start, mid, f), || tree_sum_range(mid, end, f));
    a + b
}

/// Tree sum over a slice.
pub fn tree_sum_slice(values: &[f64]) -> f64 {
    tree_sum(values.len(), |i| values[i])
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial seed derived from a master seed and the trial index.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_sum_is_independent_of_thread_count() {
        let f = |i: usize| ((i as f64) * 0.37).sin() * 1e-3 + 1.0 / (i as f64 + 1.0);
        let n = 100_003;
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| tree_sum(n, f));
        let many = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| tree_sum(n, f));
        assert_eq!(one.to_bits(), many.to_bits());
        let naive: f64 = (0..n).map(f).sum();
        assert!((one - naive).abs() < 1e-9);
    }

    #[test]
    fn tree_sum_empty_and_small() {
        assert_eq!(tree_sum(0, |_| 1.0), 0.0);
        assert_eq!(tree_sum_slice(&[1.0, 2.0, 3.5]), 6.5);
    }

    #[test]
    fn derived_seeds_differ() {
        let a = derive_seed(7, 0);
        let b = derive_seed(7, 1);
        let c = derive_seed(8, 0);
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, derive_seed(7, 0));
    }
}
