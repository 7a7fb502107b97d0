use serde::Serialize;

use super::config::Preset;

/// Below this many trials a statistical check is reported but not judged.
pub const MIN_TRIALS_FOR_VERDICT: u64 = 30;

/// How a check's statistic is judged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rule {
    AtMost { limit: f64 },
    AtLeast { limit: f64 },
    Between { lo: f64, hi: f64 },
    /// Open interval.
    Inside { lo: f64, hi: f64 },
    /// `|statistic| <= limit`, used for z-scores and absolute errors.
    AbsAtMost { limit: f64 },
    /// Informational; never fails.
    Report,
}

impl Rule {
    pub fn holds(&self, x: f64) -> bool {
        match *self {
            Rule::AtMost { limit } => x <= limit,
            Rule::AtLeast { limit } => x >= limit,
            Rule::Between { lo, hi } => lo <= x && x <= hi,
            Rule::Inside { lo, hi } => lo < x && x < hi,
            Rule::AbsAtMost { limit } => x.abs() <= limit,
            Rule::Report => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Insufficient,
    Info,
}

/// One theory-vs-empirical comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// Predictor value, when the check compares against one.
    pub predicted: Option<f64>,
    pub empirical: Option<f64>,
    /// What `statistic` measures: `z`, `sup_distance`, `abs_error`, `value`, `p_value`, ...
    pub metric: &'static str,
    pub statistic: f64,
    pub rule: Rule,
    /// Samples behind the empirical value; `None` for exact checks.
    pub samples: Option<u64>,
    pub verdict: Verdict,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

/// Predictors, empirical values and verdicts of one run. Contains no
/// wall-clock data, so equal seeds give equal reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub schema_version: u32,
    pub preset: Preset,
    pub seed: u64,
    pub trials: u64,
    pub checks: Vec<Check>,
    /// Set when some statistical check had too few samples to be judged.
    pub insufficient: bool,
    pub notes: Vec<String>,
}

impl ComparisonReport {
    pub fn new(preset: Preset, seed: u64, trials: u64) -> ComparisonReport {
        ComparisonReport {
            schema_version: super::SCHEMA_VERSION,
            preset,
            seed,
            trials,
            checks: Vec::new(),
            insufficient: false,
            notes: Vec::new(),
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    /// An exact check, judged regardless of trial count.
    pub fn exact(
        &mut self,
        name: &str,
        predicted: Option<f64>,
        empirical: Option<f64>,
        metric: &'static str,
        statistic: f64,
        rule: Rule,
    ) {
        self.push(name, predicted, empirical, metric, statistic, rule, None);
    }

    /// A check on `samples` random samples.
    #[allow(clippy::too_many_arguments)]
    pub fn sampled(
        &mut self,
        name: &str,
        predicted: Option<f64>,
        empirical: Option<f64>,
        metric: &'static str,
        statistic: f64,
        rule: Rule,
        samples: u64,
    ) {
        self.push(name, predicted, empirical, metric, statistic, rule, Some(samples));
    }

    /// A frequency against a target probability, judged by `|z| <= z_max`.
    pub fn frequency_z(&mut self, name: &str, hits: u64, total: u64, p: f64, z_max: f64) {
        let phat = hits as f64 / total as f64;
        let sd = (p * (1.0 - p) / total as f64).sqrt();
        let z = if sd > 0.0 {
            (phat - p) / sd
        } else if phat == p {
            0.0
        } else {
            f64::INFINITY
        };
        self.sampled(
            name,
            Some(p),
            Some(phat),
            "z",
            z,
            Rule::AbsAtMost { limit: z_max },
            total,
        );
    }

    pub fn info(&mut self, name: &str, predicted: Option<f64>, empirical: Option<f64>, value: f64) {
        self.exact(name, predicted, empirical, "value", value, Rule::Report);
    }

    pub fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    #[allow(clippy::too_many_arguments)]
    fn push(
        &mut self,
        name: &str,
        predicted: Option<f64>,
        empirical: Option<f64>,
        metric: &'static str,
        statistic: f64,
        rule: Rule,
        samples: Option<u64>,
    ) {
        let verdict = if rule == Rule::Report {
            Verdict::Info
        } else if samples.is_some_and(|s| s < MIN_TRIALS_FOR_VERDICT) {
            self.insufficient = true;
            Verdict::Insufficient
        } else if rule.holds(statistic) {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        self.checks.push(Check {
            name: name.to_string(),
            predicted,
            empirical,
            metric,
            statistic,
            rule,
            samples,
            verdict,
        });
    }
}

/// Wall-clock data, kept apart from the report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Runtime {
    pub wall_ms: u64,
    pub threads: usize,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        let mut r = ComparisonReport::new(Preset::E1, 1, 10);
        r.frequency_z("few", 5, 10, 0.5, 3.0);
        assert!(r.insufficient);
        assert_eq!(r.checks[0].verdict, Verdict::Insufficient);
        r.frequency_z("many", 500, 1000, 0.5, 3.0);
        assert_eq!(r.checks[1].verdict, Verdict::Pass);
        r.exact("exact", Some(1.0), Some(2.0), "abs_error", 1.0, Rule::AtMost { limit: 0.5 });
        assert_eq!(r.checks[2].verdict, Verdict::Fail);
        assert!(!r.all_passed());
        assert!(Rule::Between { lo: 0.0, hi: 1.0 }.holds(1.0));
    }
}
