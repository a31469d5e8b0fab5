use std::io::Write;

use anyhow::{bail, Result};
use qanneal_core::{Ensemble, Limits};

use crate::args::{Common, SweepArgs};
use crate::instance;
use crate::output::{float, sink, Header};

const IDENTITY_TOLERANCE: f64 = 1e-9;
const ENTROPY_TOLERANCE: f64 = 1e-6;
const CONSISTENCY_TOLERANCE: f64 = 1e-10;

const COLUMNS: [&str; 12] = [
    "b",
    "t",
    "F",
    "U",
    "S",
    "C_eff",
    "C_eff_nor",
    "Delta",
    "accuracy",
    "P0b",
    "expected_repetitions",
    "checks",
];

/// False for NaN residuals as well as large ones.
fn passes(residual: f64, tolerance: f64) -> bool {
    residual < tolerance
}

pub fn run(common: &Common, args: &SweepArgs, limits: &Limits) -> Result<()> {
    if let Some(b) = args.b_list.iter().find(|b| !(b.is_finite() && **b > 0.0)) {
        bail!("b values must be positive, got {b}");
    }
    let cost = instance::load(&args.instance)?.cost()?;
    let ens = Ensemble::new(&cost, limits)?;
    let points = ens.sweep(&args.b_list)?;

    let mut out = sink(common.out.as_deref())?;
    let header = Header::new("sweep", common.seed, args, common.no_timestamp);
    writeln!(out, "# {} {} sweep", header.tool, header.version)?;
    writeln!(out, "# seed={}", header.seed)?;
    writeln!(out, "# config={}", serde_json::to_string(args)?)?;
    writeln!(
        out,
        "# C_inf={} C_0={} degenerate={}",
        float(ens.effective_cost_infinite_t()),
        float(ens.optimum()),
        ens.is_degenerate()
    )?;
    if let Some(ts) = header.timestamp {
        writeln!(out, "# timestamp={ts}")?;
    }

    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(COLUMNS)?;
    for p in &points {
        let mut failed = Vec::new();
        if !passes(p.identity_residual(), IDENTITY_TOLERANCE) {
            failed.push("identity");
        }
        if !passes(p.entropy_mismatch(), ENTROPY_TOLERANCE) {
            failed.push("entropy");
        }
        if !passes(ens.consistency_p0b(p.b)?, CONSISTENCY_TOLERANCE) {
            failed.push("consistency");
        }
        let checks = if failed.is_empty() {
            "ok".to_string()
        } else {
            format!("fail:{}", failed.join("|"))
        };
        csv.write_record([
            float(p.b),
            float(p.t),
            float(p.f),
            float(p.u),
            float(p.s),
            float(p.c_eff),
            float(p.c_eff_nor),
            float(p.delta),
            p.accuracy.map(float).unwrap_or_default(),
            float(p.p0b),
            float(p.expected_repetitions),
            checks,
        ])?;
    }
    csv.flush()?;
    Ok(())
}
