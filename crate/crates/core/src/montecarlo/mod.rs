//! Experiment presets, parallel trial orchestration, aggregation and
//! theory-vs-empirical reports.

mod aggregate;
mod config;
mod emit;
mod presets;
mod report;

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{trial_rng, TrialRng};

pub use aggregate::{
    compare_pmf, empirical_pmf, Aggregate, EventCount, HistStats, PmfVerdict, TrialOutcome,
};
pub use config::{ExperimentConfig, Preset};
pub use emit::{emit, emit_csv, emit_json, parse_csv, OutputFormat, CSV_HEADER};
pub use presets::chi2_homogeneity;
pub use report::{Check, ComparisonReport, Rule, Runtime, Verdict, MIN_TRIALS_FOR_VERDICT};

/// Version of the emitted JSON and CSV layouts.
pub const SCHEMA_VERSION: u32 = 1;

/// Output of [`run_experiment`].
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub aggregate: Aggregate,
    pub report: ComparisonReport,
    pub runtime: Runtime,
}

/// Runs a preset. The result depends only on the config and its seed, not
/// on the number of worker threads.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    let start = Instant::now();
    let run = || -> Result<(Aggregate, ComparisonReport, usize)> {
        let mut report = ComparisonReport::new(config.preset, config.seed, config.trials);
        let agg = presets::run(config, &mut report)?;
        Ok((agg, report, rayon::current_num_threads()))
    };
    let (aggregate, report, threads) = match config.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    Ok(ExperimentResult {
        config: config.clone(),
        aggregate,
        report,
        runtime: Runtime {
            wall_ms: start.elapsed().as_millis() as u64,
            threads,
        },
    })
}

/// Random stream of trial `t` in part `part` of a preset.
pub fn part_rng(seed: u64, part: u64, t: u64) -> TrialRng {
    trial_rng(seed, (part << 48) | t)
}

fn keep_first(a: Option<(u64, Error)>, b: Option<(u64, Error)>) -> Option<(u64, Error)> {
    match (a, b) {
        (Some(x), Some(y)) => Some(if y.0 < x.0 { y } else { x }),
        (x, y) => x.or(y),
    }
}

/// Runs `count` independent trials of `f` in parallel and merges their
/// counts. On failure reports the error of the lowest failing trial, so the
/// outcome does not depend on scheduling. Budget errors carry the trial index.
pub(crate) fn run_trials<F>(seed: u64, part: u64, count: u64, f: F) -> Result<Aggregate>
where
    F: Fn(&mut TrialRng, u64) -> Result<TrialOutcome> + Sync,
{
    let (agg, err) = (0..count)
        .into_par_iter()
        .map(|t| (t, f(&mut part_rng(seed, part, t), t)))
        .fold(
            || (Aggregate::default(), None),
            |(mut a, e), (t, r)| match r {
                Ok(o) => {
                    a.add(&o);
                    (a, e)
                }
                Err(x) => (a, keep_first(e, Some((t, x)))),
            },
        )
        .reduce(
            || (Aggregate::default(), None),
            |(a, e1), (b, e2)| (a.merge(b), keep_first(e1, e2)),
        );
    match err {
        None => Ok(agg),
        Some((t, e)) if e.is_budget() => Err(Error::Trial {
            trial: t,
            source: Box::new(e),
        }),
        Some((_, e)) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worker_count_does_not_matter() {
        let mut c = ExperimentConfig::for_preset(Preset::E1);
        c.n = 6;
        c.m = Some(6);
        c.trials = 2000;
        c.threads = Some(1);
        let a = run_experiment(&c).unwrap();
        c.threads = Some(4);
        let b = run_experiment(&c).unwrap();
        assert_eq!(a.aggregate, b.aggregate);
        assert_eq!(a.report, b.report);
        assert_eq!(a.aggregate.trials, 2000);
    }

    #[test]
    fn single_trial_is_flagged() {
        let mut c = ExperimentConfig::for_preset(Preset::E1);
        c.trials = 1;
        let r = run_experiment(&c).unwrap();
        assert_eq!(r.aggregate.trials, 1);
        assert!(r.report.insufficient);
    }

    #[test]
    fn lowest_failing_trial_is_reported() {
        let res = run_trials(1, 0, 100, |_, t| {
            if t % 7 == 3 {
                Err(Error::budget("test", 2, 1))
            } else {
                Ok(TrialOutcome::default())
            }
        });
        match res {
            Err(Error::Trial { trial, .. }) => assert_eq!(trial, 3),
            other => panic!("unexpected {other:?}"),
        }
    }
}
