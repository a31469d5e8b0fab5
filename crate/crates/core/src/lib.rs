//! Simulation toolkit for a post-selected quantum annealing heuristic.
//!
//! A search register holding every n-bit assignment in uniform superposition
//! is coupled to `b` control qubits through phases `exp(±i pi/2 C_nor(x))`.
//! Accepting only runs whose control register reads all zeros yields search
//! outcomes distributed as a Boltzmann law at effective temperature `1/b`.
//!
//! - [`cost`]: k-local cost functions, strict bounds, graph partitioning.
//! - [`statevec`]: dense state vectors and the diagonal phase gates.
//! - [`circuit`]: the full circuit, post-selection, repeat-until-success sampling.
//! - [`ensemble`]: free energy, entropy, effective cost and accuracy.
//! - [`baseline`]: exhaustive minimum and simulated annealing.

pub mod baseline;
pub mod circuit;
pub mod cost;
pub mod ensemble;
mod error;
mod limits;
pub mod numeric;
pub mod statevec;

pub use num_complex;

pub use baseline::{brute_force_min, compare_loads, simulated_annealing, BaselineReport, LoadComparison, SaParams};
pub use circuit::{
    closed_form_final_state, postselect_zero, run_circuit, sample_many, sample_run, Mode, RunOutcome, Sampler,
    SamplerConfig,
};
pub use cost::{random_graph, random_local_cost, CostFunction, GraphPartitionInstance, LocalTerm};
pub use ensemble::{Ensemble, EnsembleSummary, ThermoPoint};
pub use error::{Error, Result};
pub use limits::{Limits, DEFAULT_MAX_ENUMERATION_BITS, DEFAULT_MAX_QUBITS};
pub use statevec::{build_phase_tables, DiagonalGate, PhaseTable, QuantumState};
