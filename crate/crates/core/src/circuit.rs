//! The optimization circuit, post-selection, and the repeat-until-success
//! sampling protocol.
//!
//! Starting from `|S>|0...0>`, each control qubit `c` receives
//! `H_c U±_{cS} H_c`. The final state has amplitude
//! `i^k cos^{b-k}(pi/2 C_nor(x)) sin^k(pi/2 C_nor(x)) / sqrt(N)` on `|x; J>`
//! where `k` is the number of set bits of the control pattern `J`. The
//! `i^k` comes from the second Hadamard acting on `e^{+i theta}` and
//! `e^{-i theta}` branches; it is a fixed phase per control pattern and
//! leaves every control and search probability unchanged.
//! A run repeats the circuit until the control register reads all zeros,
//! then measures the search register.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Geometric;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::CostFunction;
use crate::ensemble::Ensemble;
use crate::error::{invalid, Error, Result};
use crate::limits::Limits;
use crate::numeric::derive_seed;
use crate::statevec::{build_phase_tables, DiagonalGate, QuantumState};

pub const DEFAULT_MAX_REPETITIONS: u64 = 1_000_000;

/// Point in the circuit at which an observer is called.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// `|psi_0>`: uniform search register, control register cleared.
    Initial,
    /// After the first Hadamard on control qubit `c` (0-based).
    FirstHadamard(usize),
    /// After `U±` controlled by qubit `c`.
    PhaseSeparation(usize),
    /// After the second Hadamard on control qubit `c`.
    SecondHadamard(usize),
}

/// Builds `|psi_fin>` gate by gate.
pub fn run_circuit(cost: &CostFunction, b: usize, limits: &Limits) -> Result<QuantumState> {
    let gates = build_phase_tables(cost, 1.0);
    run_circuit_with(&gates, cost.n(), b, limits, |_, _| {})
}

/// [`run_circuit`] with explicit gate factors and a per-stage observer.
pub fn run_circuit_with<F>(
    gates: &[DiagonalGate],
    n: usize,
    b: usize,
    limits: &Limits,
    mut observe: F,
) -> Result<QuantumState>
where
    F: FnMut(Stage, &QuantumState),
{
    if b == 0 {
        return Err(invalid("the circuit needs at least one control qubit"));
    }
    let mut state = QuantumState::uniform_superposition(n, b, limits)?;
    observe(Stage::Initial, &state);
    for c in 0..b {
        let q = state.control_qubit(c);
        state.apply_hadamard(q)?;
        observe(Stage::FirstHadamard(c), &state);
        state.apply_u_pm(q, gates)?;
        observe(Stage::PhaseSeparation(c), &state);
        state.apply_hadamard(q)?;
        observe(Stage::SecondHadamard(c), &state);
    }
    Ok(state)
}

/// `|psi_fin>` written down directly from the cost values, including the
/// `i^k` control-pattern phase. `b = 0` gives `|S>`.
pub fn closed_form_final_state(cost: &CostFunction, b: usize, limits: &Limits) -> Result<QuantumState> {
    let n = cost.n();
    limits.check_state(n + b)?;
    let n_states = 1usize << n;
    let scale = 1.0 / (n_states as f64).sqrt();
    let trig: Vec<(f64, f64)> = (0..n_states as u64)
        .map(|x| {
            let theta = FRAC_PI_2 * cost.normalized_index(x);
            (theta.cos(), theta.sin())
        })
        .collect();
    let amplitudes = (0..n_states << b)
        .into_par_iter()
        .map(|index| {
            let (cos, sin) = trig[index & (n_states - 1)];
            let ones = (index >> n).count_ones() as i32;
            let magnitude = cos.powi(b as i32 - ones) * sin.powi(ones) * scale;
            match ones % 4 {
                0 => Complex64::new(magnitude, 0.0),
                1 => Complex64::new(0.0, magnitude),
                2 => Complex64::new(-magnitude, 0.0),
                _ => Complex64::new(0.0, -magnitude),
            }
        })
        .collect();
    QuantumState::from_amplitudes(n, b, amplitudes)
}

/// Projects onto the all-zero control register. Returns the renormalized
/// search state and the acceptance probability `P0_b`.
pub fn postselect_zero(state: &QuantumState) -> Result<(QuantumState, f64)> {
    state.project_control(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// Simulate the circuit on amplitudes and measure the control register.
    #[serde(rename = "gate")]
    GateLevel,
    /// Sample the repetition count and outcome from their exact laws.
    #[serde(rename = "closed")]
    ClosedForm,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::GateLevel => "gate",
            Mode::ClosedForm => "closed",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gate" => Ok(Mode::GateLevel),
            "closed" => Ok(Mode::ClosedForm),
            other => Err(invalid(format!("unknown mode {other:?}, expected gate or closed"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunOutcome {
    /// Executions of the deterministic part, including the accepted one.
    pub repetitions: u64,
    /// Measured search string, packed with `q_0` in bit 0.
    pub result: u64,
    pub cost_value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    pub max_repetitions: u64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            max_repetitions: DEFAULT_MAX_REPETITIONS,
        }
    }
}

/// Precomputed sampling tables for repeated runs at fixed `b`.
///
/// The deterministic part of the protocol produces the same state on every
/// repetition, so gate-level mode simulates it once and then draws control
/// outcomes (jointly, one `b`-bit pattern per repetition) from its marginal.
/// Closed-form mode never builds amplitudes: the repetition count is
/// geometric with success probability `P0_b` and the outcome follows `P_b`.
#[derive(Debug, Clone)]
pub struct Sampler<'a> {
    cost: &'a CostFunction,
    mode: Mode,
    b: usize,
    p0b: f64,
    distribution: Vec<f64>,
    search: WeightedIndex<f64>,
    control: Option<WeightedIndex<f64>>,
    geometric: Option<Geometric>,
    config: SamplerConfig,
}

impl<'a> Sampler<'a> {
    pub fn new(cost: &'a CostFunction, b: usize, mode: Mode, limits: &Limits, config: SamplerConfig) -> Result<Self> {
        if config.max_repetitions == 0 {
            return Err(invalid("repetition cutoff must be at least 1"));
        }
        let (p0b, distribution, control, geometric) = match mode {
            Mode::GateLevel => {
                let state = run_circuit(cost, b, limits)?;
                let control = WeightedIndex::new(state.control_marginal())
                    .map_err(|e| invalid(format!("control distribution: {e}")))?;
                let (post, p0b) = postselect_zero(&state)?;
                (p0b, post.probabilities(), Some(control), None)
            }
            Mode::ClosedForm => {
                let ens = Ensemble::new(cost, limits)?;
                let p0b = ens.log_post_selection(b as f64)?.exp();
                if p0b.is_nan() || p0b <= 0.0 {
                    return Err(Error::DegeneratePostselection);
                }
                let geometric = Geometric::new(p0b).map_err(|e| invalid(format!("geometric law: {e}")))?;
                (p0b, ens.boltzmann_distribution(b as f64)?, None, Some(geometric))
            }
        };
        let search = WeightedIndex::new(&distribution).map_err(|e| invalid(format!("search distribution: {e}")))?;
        Ok(Self {
            cost,
            mode,
            b,
            p0b,
            distribution,
            search,
            control,
            geometric,
            config,
        })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn post_selection_probability(&self) -> f64 {
        self.p0b
    }

    /// Exact distribution of accepted outcomes.
    pub fn distribution(&self) -> &[f64] {
        &self.distribution
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<RunOutcome> {
        let max = self.config.max_repetitions;
        let repetitions = match (&self.control, &self.geometric) {
            (Some(control), _) => {
                let mut reps = 0;
                loop {
                    reps += 1;
                    if control.sample(rng) == 0 {
                        break reps;
                    }
                    if reps >= max {
                        return Err(Error::RepetitionCutoff(max));
                    }
                }
            }
            (None, Some(geometric)) => {
                let failures = geometric.sample(rng);
                if failures >= max {
                    return Err(Error::RepetitionCutoff(max));
                }
                failures + 1
            }
            (None, None) => unreachable!("sampler has no repetition law"),
        };
        let result = self.search.sample(rng) as u64;
        Ok(RunOutcome {
            repetitions,
            result,
            cost_value: self.cost.evaluate_index(result),
        })
    }
}

/// One run of the protocol with a caller-provided RNG.
pub fn sample_run<R: Rng + ?Sized>(
    cost: &CostFunction,
    b: usize,
    rng: &mut R,
    mode: Mode,
    limits: &Limits,
    config: SamplerConfig,
) -> Result<RunOutcome> {
    Sampler::new(cost, b, mode, limits, config)?.sample(rng)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub index: u64,
    pub seed: u64,
    pub outcome: Result<RunOutcome>,
}

/// Runs `trials` independent runs in parallel. Trial `i` draws from its own
/// generator seeded with `derive_seed(master_seed, i)`, so the output is
/// the same for any thread count.
pub fn sample_many(sampler: &Sampler<'_>, trials: u64, master_seed: u64) -> Vec<Trial> {
    (0..trials)
        .into_par_iter()
        .map(|index| {
            let seed = derive_seed(master_seed, index);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Trial {
                index,
                seed,
                outcome: sampler.sample(&mut rng),
            }
        })
        .collect()
}
