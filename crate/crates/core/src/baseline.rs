//! Exhaustive minimization and single-flip simulated annealing, with exact
//! cost-evaluation counts for load comparisons.

use std::cell::Cell;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::cost::{format_bitstring, CostFunction};
use crate::ensemble::Ensemble;
use crate::error::{invalid, Result};
use crate::limits::Limits;
use crate::numeric::derive_seed;

/// States within this fraction of the bound span of the minimum are treated
/// as tied for the minimum.
pub const ARGMIN_TOLERANCE: f64 = 1e-9;

/// Load accounting used in every comparison record.
pub const LOAD_ACCOUNTING: &str = "quantum load counts one unit per execution of the deterministic \
part (the cost is evaluated on all states in parallel), so its expected load is 1/P0_b; \
classical load counts one unit per single-state cost evaluation";

/// Wraps a cost function and counts every evaluation.
#[derive(Debug)]
pub struct CountingCost<'a> {
    cost: &'a CostFunction,
    count: Cell<u64>,
}

impl<'a> CountingCost<'a> {
    pub fn new(cost: &'a CostFunction) -> Self {
        Self {
            cost,
            count: Cell::new(0),
        }
    }

    pub fn evaluate(&self, x: u64) -> f64 {
        self.count.set(self.count.get() + 1);
        self.cost.evaluate_index(x)
    }

    pub fn evaluations(&self) -> u64 {
        self.count.get()
    }
}

/// Exact minimum and every assignment attaining it.
pub fn brute_force_min(cost: &CostFunction, limits: &Limits) -> Result<(Vec<u64>, f64)> {
    limits.check_enumeration(cost.n())?;
    let values: Vec<f64> = (0..1u64 << cost.n())
        .into_par_iter()
        .map(|x| cost.evaluate_index(x))
        .collect();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = ARGMIN_TOLERANCE * cost.span();
    let argmin = (0u64..)
        .zip(&values)
        .filter(|&(_, &v)| v <= min + tol)
        .map(|(x, _)| x)
        .collect();
    Ok((argmin, min))
}

/// Geometric cooling: step `k` runs at `max(t_start * ratio^k, t_end)`.
/// A zero temperature accepts only moves that do not raise the cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SaParams {
    pub t_start: f64,
    pub ratio: f64,
    pub t_end: f64,
    pub n_steps: u64,
}

impl Default for SaParams {
    fn default() -> Self {
        Self::geometric(2.0, 0.01, 2000).expect("default schedule is valid")
    }
}

impl SaParams {
    /// Schedule whose temperature reaches `t_end` on the last step.
    pub fn geometric(t_start: f64, t_end: f64, n_steps: u64) -> Result<Self> {
        let ratio = if n_steps > 1 && t_start > 0.0 && t_end > 0.0 {
            (t_end / t_start).powf(1.0 / (n_steps - 1) as f64)
        } else {
            1.0
        };
        let params = Self {
            t_start,
            ratio,
            t_end,
            n_steps,
        };
        params.validate()?;
        Ok(params)
    }

    /// Strict descent: every step at zero temperature.
    pub fn zero_temperature(n_steps: u64) -> Self {
        Self {
            t_start: 0.0,
            ratio: 1.0,
            t_end: 0.0,
            n_steps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.t_start, self.ratio, self.t_end].iter().all(|v| v.is_finite());
        if !finite || self.t_start < 0.0 || self.t_end < 0.0 {
            return Err(invalid("temperatures must be finite and non-negative"));
        }
        if self.t_end > self.t_start {
            return Err(invalid(format!(
                "final temperature {} exceeds initial temperature {}",
                self.t_end, self.t_start
            )));
        }
        if !(self.ratio > 0.0 && self.ratio <= 1.0) {
            return Err(invalid(format!("cooling ratio {} outside (0, 1]", self.ratio)));
        }
        Ok(())
    }

    pub fn temperature(&self, step: u64) -> f64 {
        let exp = i32::try_from(step).unwrap_or(i32::MAX);
        (self.t_start * self.ratio.powi(exp)).max(self.t_end)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineReport {
    pub method: &'static str,
    pub seed: u64,
    pub best_bitstring: String,
    #[serde(skip)]
    pub best_index: u64,
    pub best_cost: f64,
    /// Cost evaluations performed, `n_steps + 1` for annealing.
    pub evaluations: u64,
    /// Evaluation count at which the best cost first reached the target.
    pub evaluations_to_target: Option<u64>,
}

/// Single-flip Metropolis annealing from a uniformly random start.
/// Each step proposes flipping one uniformly chosen bit.
pub fn simulated_annealing(
    cost: &CostFunction,
    params: &SaParams,
    seed: u64,
    target: Option<f64>,
) -> Result<BaselineReport> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counted = CountingCost::new(cost);
    let n = cost.n();
    let tol = ARGMIN_TOLERANCE * cost.span();
    let reached = |c: f64| target.is_some_and(|t| c <= t + tol);

    let mut x: u64 = rng.random_range(0..1u64 << n);
    let mut current = counted.evaluate(x);
    let (mut best, mut best_cost) = (x, current);
    let mut hit = reached(current).then_some(1);

    for step in 0..params.n_steps {
        let y = x ^ 1 << rng.random_range(0..n);
        let proposed = counted.evaluate(y);
        let delta = proposed - current;
        let temperature = params.temperature(step);
        let accept = delta <= 0.0 || (temperature > 0.0 && rng.random::<f64>() < (-delta / temperature).exp());
        if accept {
            x = y;
            current = proposed;
            if current < best_cost {
                best = x;
                best_cost = current;
                if hit.is_none() && reached(best_cost) {
                    hit = Some(counted.evaluations());
                }
            }
        }
    }

    Ok(BaselineReport {
        method: "simulated_annealing",
        seed,
        best_bitstring: format_bitstring(best, n),
        best_index: best,
        best_cost,
        evaluations: counted.evaluations(),
        evaluations_to_target: hit,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumLoad {
    pub b: usize,
    pub p0b: f64,
    pub expected_repetitions: f64,
    /// Effective cost at `t = 1/b`; the quality the classical runs must match.
    pub matched_cost: f64,
    pub accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalLoad {
    pub params: SaParams,
    pub trials: u64,
    pub master_seed: u64,
    pub runs: Vec<BaselineReport>,
    /// Mean of `evaluations_to_target` over runs that reached the matched cost.
    pub mean_evaluations_to_match: Option<f64>,
    pub match_fraction: Option<f64>,
    pub optimum_fraction: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoadComparison {
    pub accounting: &'static str,
    pub optimum: f64,
    pub c_eff_infinite_t: f64,
    pub quantum: QuantumLoad,
    pub classical: ClassicalLoad,
}

/// Quantum expected repetitions at `b` against the evaluations annealing
/// needs to reach the same effective cost.
///
/// Run `i` uses seed `derive_seed(master_seed, i)`.
pub fn compare_loads(
    cost: &CostFunction,
    b: usize,
    params: &SaParams,
    trials: u64,
    master_seed: u64,
    limits: &Limits,
) -> Result<LoadComparison> {
    if b == 0 {
        return Err(invalid("b must be at least 1"));
    }
    params.validate()?;
    let ens = Ensemble::new(cost, limits)?;
    let point = ens.thermo_point(1.0 / b as f64)?;
    let optimum = ens.optimum();
    let matched_cost = point.c_eff;

    let runs = (0..trials)
        .into_par_iter()
        .map(|i| simulated_annealing(cost, params, derive_seed(master_seed, i), Some(matched_cost)))
        .collect::<Result<Vec<_>>>()?;

    let tol = ARGMIN_TOLERANCE * cost.span();
    let hits: Vec<u64> = runs.iter().filter_map(|r| r.evaluations_to_target).collect();
    let fraction = |count: usize| (trials > 0).then(|| count as f64 / trials as f64);
    let classical = ClassicalLoad {
        params: *params,
        trials,
        master_seed,
        mean_evaluations_to_match: (!hits.is_empty()).then(|| hits.iter().sum::<u64>() as f64 / hits.len() as f64),
        match_fraction: fraction(hits.len()),
        optimum_fraction: fraction(runs.iter().filter(|r| r.best_cost <= optimum + tol).count()),
        runs,
    };

    Ok(LoadComparison {
        accounting: LOAD_ACCOUNTING,
        optimum,
        c_eff_infinite_t: ens.effective_cost_infinite_t(),
        quantum: QuantumLoad {
            b,
            p0b: point.p0b,
            expected_repetitions: point.expected_repetitions,
            matched_cost,
            accuracy: point.accuracy,
        },
        classical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::{GraphPartitionInstance, LocalTerm};
    use itertools::Itertools;

    #[test]
    fn k4_with_penalty_minimizers_are_the_balanced_cuts() {
        let edges = (0..4).tuple_combinations().collect();
        let cost = GraphPartitionInstance::new(4, edges, 1.0, 1.0, 1.0)
            .unwrap()
            .cost()
            .unwrap();
        let (argmin, min) = brute_force_min(&cost, &Limits::default()).unwrap();
        assert!((min - 4.0).abs() < 1e-12);
        assert_eq!(argmin, vec![0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
    }

    #[test]
    fn constant_and_separable_minima() {
        let cost = CostFunction::new(3, 0.7, vec![]).unwrap();
        assert_eq!(brute_force_min(&cost, &Limits::default()).unwrap().0.len(), 8);
        let terms = (0..4)
            .map(|i| LocalTerm::new(vec![i], vec![0.0, 1.0]).unwrap())
            .collect();
        let cost = CostFunction::new(4, 0.0, terms).unwrap();
        assert_eq!(brute_force_min(&cost, &Limits::default()).unwrap(), (vec![0], 0.0));
    }

    #[test]
    fn evaluation_count_is_steps_plus_one() {
        let cost = crate::cost::random_local_cost(6, 2, 0.5, 4).unwrap();
        for steps in [0, 1, 37, 500] {
            let params = SaParams::geometric(1.0, 0.05, steps).unwrap();
            let r = simulated_annealing(&cost, &params, 3, None).unwrap();
            assert_eq!(r.evaluations, steps + 1);
            assert!(r.best_cost >= brute_force_min(&cost, &Limits::default()).unwrap().1);
            assert!(cost.c_min() < r.best_cost && r.best_cost < cost.c_max());
        }
    }

    #[test]
    fn zero_temperature_never_goes_uphill() {
        // replay the chain and check every accepted move is downhill
        let cost = crate::cost::random_local_cost(8, 2, 0.6, 12).unwrap();
        let params = SaParams::zero_temperature(300);
        let seed = 99;
        let report = simulated_annealing(&cost, &params, seed, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut x: u64 = rng.random_range(0..1u64 << 8);
        let mut c = cost.evaluate_index(x);
        for _ in 0..300 {
            let y = x ^ 1 << rng.random_range(0..8);
            let cy = cost.evaluate_index(y);
            if cy <= c {
                x = y;
                c = cy;
            }
        }
        assert_eq!(report.best_cost, c);
    }

    #[test]
    fn annealing_is_deterministic() {
        let cost = crate::cost::random_local_cost(7, 3, 0.4, 2).unwrap();
        let p = SaParams::default();
        assert_eq!(
            simulated_annealing(&cost, &p, 5, None).unwrap(),
            simulated_annealing(&cost, &p, 5, None).unwrap()
        );
    }

    #[test]
    fn schedule_validation() {
        assert!(SaParams::geometric(1.0, 2.0, 10).is_err());
        assert!(SaParams::geometric(-1.0, 0.0, 10).is_err());
        let bad = SaParams {
            ratio: 1.5,
            ..SaParams::default()
        };
        assert!(bad.validate().is_err());
        let p = SaParams::geometric(2.0, 0.01, 2000).unwrap();
        assert!((p.temperature(1999) - 0.01).abs() < 1e-12);
        assert_eq!(p.temperature(0), 2.0);
        assert_eq!(p.temperature(u64::MAX), 0.01);
    }

    #[test]
    fn compare_with_no_trials_is_empty() {
        let cost = crate::cost::random_local_cost(4, 2, 0.5, 1).unwrap();
        let rec = compare_loads(&cost, 2, &SaParams::default(), 0, 1, &Limits::default()).unwrap();
        assert!(rec.classical.runs.is_empty());
        assert_eq!(rec.classical.mean_evaluations_to_match, None);
        assert_eq!(rec.classical.match_fraction, None);
        let ens = Ensemble::new(&cost, &Limits::default()).unwrap();
        let p0 = ens.post_selection_probability(2.0).unwrap();
        assert!((rec.quantum.expected_repetitions - 1.0 / p0).abs() < 1e-12 * rec.quantum.expected_repetitions);
        assert!(compare_loads(&cost, 0, &SaParams::default(), 0, 1, &Limits::default()).is_err());
    }
}
