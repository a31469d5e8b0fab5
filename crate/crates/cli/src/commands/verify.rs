use std::f64::consts::FRAC_PI_2;

use anyhow::Result;
use qanneal_core::circuit::run_circuit_with;
use qanneal_core::num_complex::Complex64;
use qanneal_core::{build_phase_tables, closed_form_final_state, postselect_zero, DiagonalGate, Ensemble, Limits};
use serde::Serialize;

use crate::args::{Common, VerifyArgs};
use crate::instance;
use crate::output::{write_json, Header};

#[derive(Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: &'static str, residual: f64, threshold: f64) -> Self {
        Self {
            name,
            residual,
            threshold,
            pass: residual.is_finite() && residual < threshold,
        }
    }
}

#[derive(Serialize)]
struct Report<'a> {
    #[serde(flatten)]
    header: Header<'a, VerifyArgs>,
    kind: &'static str,
    n: usize,
    b: u64,
    checks: Vec<Check>,
    pass: bool,
}

/// Largest error of the composed gate phases against `exp(i pi/2 C_nor(x))`.
fn product_residual(gates: &[DiagonalGate], c_nor: &[f64]) -> f64 {
    c_nor
        .iter()
        .enumerate()
        .map(|(x, &c)| {
            let product = gates.iter().fold(Complex64::new(1.0, 0.0), |acc, g| {
                let local = g
                    .qubits
                    .iter()
                    .enumerate()
                    .fold(0usize, |l, (j, &q)| l | (x >> q & 1) << j);
                acc * g.table.phases()[local]
            });
            (product - Complex64::from_polar(1.0, FRAC_PI_2 * c)).norm()
        })
        .fold(0.0, f64::max)
}

/// Returns whether every check passed; the report is written either way.
pub fn run(common: &Common, args: &VerifyArgs, limits: &Limits) -> Result<bool> {
    let instance = instance::load(&args.instance)?;
    let cost = instance.cost()?;
    let b = usize::try_from(args.b)?;
    let tol = args.tolerance;

    let mut gates = build_phase_tables(&cost, 1.0);
    if args.corrupt_phase {
        if let Some(g) = gates.last_mut() {
            g.table.perturb(0, 0.1);
        }
    }
    let gate_state = run_circuit_with(&gates, cost.n(), b, limits, |_, _| {})?;
    let closed = closed_form_final_state(&cost, b, limits)?;
    let ens = Ensemble::new(&cost, limits)?;
    let (post, p0_gate) = postselect_zero(&gate_state)?;
    let exact = ens.boltzmann_distribution(b as f64)?;
    let dist_residual = post
        .probabilities()
        .iter()
        .zip(&exact)
        .map(|(a, e)| (a - e).abs())
        .fold(0.0, f64::max);

    let checks = vec![
        Check::new("gate_vs_closed_form", gate_state.max_deviation(&closed), tol),
        Check::new(
            "product_decomposition",
            product_residual(&gates, ens.normalized_costs()),
            tol,
        ),
        Check::new("norm", (gate_state.norm_sqr() - 1.0).abs(), tol),
        Check::new(
            "postselection_probability",
            (p0_gate - ens.post_selection_probability(b as f64)?).abs(),
            tol,
        ),
        Check::new("postselected_distribution", dist_residual, tol),
        Check::new("effective_cost_consistency", ens.consistency_p0b(b as f64)?, tol),
    ];
    let pass = checks.iter().all(|c| c.pass);
    let report = Report {
        header: Header::new("verify", common.seed, args, common.no_timestamp),
        kind: instance.kind(),
        n: cost.n(),
        b: args.b,
        checks,
        pass,
    };
    write_json(common.out.as_deref(), &report)?;
    Ok(pass)
}
