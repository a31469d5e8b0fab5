use std::io::{self, Write};

use anyhow::Result;
use qanneal_core::cost::format_bitstring;
use qanneal_core::{sample_many, Limits, Mode, Sampler, SamplerConfig};
use serde::Serialize;

use crate::args::{Common, SampleArgs};
use crate::instance;
use crate::output::{sink, write_json, Header};

/// Distributions are listed state by state only up to this many qubits.
const MAX_LISTED_QUBITS: usize = 10;

#[derive(Serialize)]
struct Record {
    trial: u64,
    seed: u64,
    b: u64,
    mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    repetitions: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    result: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cost: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Serialize)]
struct StateRow {
    state: String,
    exact: f64,
    empirical: f64,
}

#[derive(Serialize)]
struct Config<'a> {
    #[serde(flatten)]
    args: &'a SampleArgs,
    mode: Mode,
}

#[derive(Serialize)]
struct Summary<'a> {
    #[serde(flatten)]
    header: Header<'a, Config<'a>>,
    n: usize,
    trials: u64,
    completed: u64,
    failures: u64,
    p0b: f64,
    expected_repetitions: f64,
    mean_repetitions: Option<f64>,
    /// Standard error of the mean repetition count under the geometric law.
    repetitions_standard_error: Option<f64>,
    tv_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    distribution: Option<Vec<StateRow>>,
}

pub fn run(common: &Common, args: &SampleArgs, limits: &Limits) -> Result<()> {
    let instance = instance::load(&args.instance)?;
    let cost = instance.cost()?;
    let n = cost.n();
    let b = usize::try_from(args.b)?;
    let sampler_config = SamplerConfig {
        max_repetitions: args.max_repetitions,
    };
    let sampler = Sampler::new(&cost, b, common.mode, limits, sampler_config)?;
    let trials = sample_many(&sampler, args.trials, common.seed);

    let mut counts = vec![0u64; 1 << n];
    let (mut completed, mut repetitions) = (0u64, 0u64);
    let mut out = sink(common.out.as_deref())?;
    for t in &trials {
        let mut record = Record {
            trial: t.index,
            seed: t.seed,
            b: args.b,
            mode: common.mode,
            repetitions: None,
            result: None,
            cost: None,
            error: None,
        };
        match &t.outcome {
            Ok(o) => {
                completed += 1;
                repetitions += o.repetitions;
                counts[o.result as usize] += 1;
                record.repetitions = Some(o.repetitions);
                record.result = Some(format_bitstring(o.result, n));
                record.cost = Some(o.cost_value);
            }
            Err(e) => record.error = Some(e.to_string()),
        }
        serde_json::to_writer(&mut out, &record)?;
        writeln!(out)?;
    }
    out.flush()?;

    let exact = sampler.distribution();
    let p0b = sampler.post_selection_probability();
    let done = completed > 0;
    let empirical = |x: usize| counts[x] as f64 / completed as f64;
    let tv = done.then(|| (0..exact.len()).map(|x| (exact[x] - empirical(x)).abs()).sum::<f64>() / 2.0);
    let config = Config {
        args,
        mode: common.mode,
    };
    let summary = Summary {
        header: Header::new("sample", common.seed, &config, common.no_timestamp),
        n,
        trials: args.trials,
        completed,
        failures: args.trials - completed,
        p0b,
        expected_repetitions: 1.0 / p0b,
        mean_repetitions: done.then(|| repetitions as f64 / completed as f64),
        repetitions_standard_error: done.then(|| ((1.0 - p0b) / (p0b * p0b) / completed as f64).sqrt()),
        tv_distance: tv,
        distribution: (done && n <= MAX_LISTED_QUBITS).then(|| {
            (0..exact.len())
                .map(|x| StateRow {
                    state: format_bitstring(x as u64, n),
                    exact: exact[x],
                    empirical: empirical(x),
                })
                .collect()
        }),
    };
    match &args.summary {
        Some(path) => write_json(Some(path), &summary),
        None => {
            let mut err = io::stderr().lock();
            serde_json::to_writer_pretty(&mut err, &summary)?;
            writeln!(err)?;
            Ok(())
        }
    }
}
