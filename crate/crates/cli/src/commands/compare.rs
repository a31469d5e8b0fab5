use anyhow::Result;
use qanneal_core::cost::format_bitstring;
use qanneal_core::{brute_force_min, compare_loads, Limits, LoadComparison, SaParams};
use serde::Serialize;

use crate::args::{Common, CompareArgs};
use crate::instance;
use crate::output::{write_json, Header};

/// Minimizers listed by bitstring; the count is always reported.
const MAX_LISTED_MINIMIZERS: usize = 64;

#[derive(Serialize)]
struct Optimum {
    cost: f64,
    minimizers: usize,
    bitstrings: Vec<String>,
}

#[derive(Serialize)]
struct Report<'a> {
    #[serde(flatten)]
    header: Header<'a, CompareArgs>,
    kind: &'static str,
    n: usize,
    brute_force: Optimum,
    comparison: LoadComparison,
}

pub fn run(common: &Common, args: &CompareArgs, limits: &Limits) -> Result<()> {
    let instance = instance::load(&args.instance)?;
    let cost = instance.cost()?;
    let params = SaParams::geometric(args.t_start, args.t_end, args.steps)?;
    let (argmin, min) = brute_force_min(&cost, limits)?;
    let mut comparison = compare_loads(
        &cost,
        usize::try_from(args.b)?,
        &params,
        args.trials,
        common.seed,
        limits,
    )?;
    if !args.runs {
        comparison.classical.runs.clear();
    }
    let report = Report {
        header: Header::new("compare", common.seed, args, common.no_timestamp),
        kind: instance.kind(),
        n: cost.n(),
        brute_force: Optimum {
            cost: min,
            minimizers: argmin.len(),
            bitstrings: argmin
                .iter()
                .take(MAX_LISTED_MINIMIZERS)
                .map(|&x| format_bitstring(x, cost.n()))
                .collect(),
        },
        comparison,
    };
    write_json(common.out.as_deref(), &report)
}
