use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::theory::Pmf;

/// Hits out of the trials where the event was observed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventCount {
    pub hits: u64,
    pub total: u64,
}

impl EventCount {
    pub fn frequency(&self) -> f64 {
        if self.total == 0 {
            f64::NAN
        } else {
            self.hits as f64 / self.total as f64
        }
    }
}

/// What one trial contributes.
#[derive(Debug, Clone, Default)]
pub struct TrialOutcome {
    pub values: Vec<(&'static str, i64)>,
    pub events: Vec<(&'static str, bool)>,
}

impl TrialOutcome {
    pub fn value(&mut self, name: &'static str, v: i64) -> &mut Self {
        self.values.push((name, v));
        self
    }

    pub fn event(&mut self, name: &'static str, hit: bool) -> &mut Self {
        self.events.push((name, hit));
        self
    }
}

/// Integer counts over trials. Merging is associative and commutative, so
/// the result does not depend on trial order or worker count.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Aggregate {
    pub trials: u64,
    pub histograms: BTreeMap<String, BTreeMap<i64, u64>>,
    pub events: BTreeMap<String, EventCount>,
}

impl Aggregate {
    pub fn add(&mut self, o: &TrialOutcome) {
        self.trials += 1;
        for &(name, v) in &o.values {
            *self
                .histograms
                .entry(name.to_string())
                .or_default()
                .entry(v)
                .or_insert(0) += 1;
        }
        for &(name, hit) in &o.events {
            let e = self.events.entry(name.to_string()).or_default();
            e.total += 1;
            e.hits += hit as u64;
        }
    }

    pub fn merge(mut self, other: Aggregate) -> Aggregate {
        self.trials += other.trials;
        for (name, h) in other.histograms {
            let mine = self.histograms.entry(name).or_default();
            for (k, c) in h {
                *mine.entry(k).or_insert(0) += c;
            }
        }
        for (name, e) in other.events {
            let mine = self.events.entry(name).or_default();
            mine.hits += e.hits;
            mine.total += e.total;
        }
        self
    }

    pub fn histogram(&self, name: &str) -> Option<&BTreeMap<i64, u64>> {
        self.histograms.get(name)
    }

    pub fn event(&self, name: &str) -> EventCount {
        self.events.get(name).copied().unwrap_or_default()
    }

    pub fn stats(&self, name: &str) -> Option<HistStats> {
        self.histogram(name).map(HistStats::of)
    }
}

/// Summary statistics of an integer histogram.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistStats {
    pub count: u64,
    pub mean: f64,
    pub variance: f64,
    pub median: i64,
    pub min: i64,
    pub max: i64,
}

impl HistStats {
    pub fn of(h: &BTreeMap<i64, u64>) -> HistStats {
        let count: u64 = h.values().sum();
        assert!(count > 0, "empty histogram");
        // sums in i128 so the mean is exact before the final division
        let s1: i128 = h.iter().map(|(&k, &c)| k as i128 * c as i128).sum();
        let mean = s1 as f64 / count as f64;
        let var = h
            .iter()
            .map(|(&k, &c)| c as f64 * (k as f64 - mean).powi(2))
            .sum::<f64>()
            / if count > 1 { (count - 1) as f64 } else { 1.0 };
        let half = count.div_ceil(2);
        let mut acc = 0;
        let mut median = 0;
        for (&k, &c) in h {
            acc += c;
            if acc >= half {
                median = k;
                break;
            }
        }
        HistStats {
            count,
            mean,
            variance: var,
            median,
            min: *h.keys().next().unwrap(),
            max: *h.keys().next_back().unwrap(),
        }
    }
}

/// Empirical pmf of a histogram.
pub fn empirical_pmf(h: &BTreeMap<i64, u64>) -> Pmf {
    let total: u64 = h.values().sum();
    let lo = *h.keys().next().expect("empty histogram");
    let hi = *h.keys().next_back().unwrap();
    Pmf::from_fn(lo, hi, |k| {
        h.get(&k).copied().unwrap_or(0) as f64 / total as f64
    })
}

/// Verdict of [`compare_pmf`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PmfVerdict {
    pub sup_distance: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Sup-distance between two pmfs on the integers and whether it is within `tolerance`.
pub fn compare_pmf(empirical: &Pmf, predicted: &Pmf, tolerance: f64) -> PmfVerdict {
    let d = empirical.sup_distance(predicted);
    PmfVerdict {
        sup_distance: d,
        tolerance,
        pass: d <= tolerance,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_is_order_independent() {
        let outs: Vec<TrialOutcome> = (0..20)
            .map(|i| {
                let mut o = TrialOutcome::default();
                o.value("x", i % 3).event("e", i % 2 == 0);
                o
            })
            .collect();
        let mut a = Aggregate::default();
        for o in &outs {
            a.add(o);
        }
        let mut left = Aggregate::default();
        let mut right = Aggregate::default();
        for (i, o) in outs.iter().enumerate().rev() {
            if i % 2 == 0 {
                left.add(o)
            } else {
                right.add(o)
            }
        }
        assert_eq!(a, right.merge(left));
        assert_eq!(a.event("e"), EventCount { hits: 10, total: 20 });
        let total: u64 = a.histogram("x").unwrap().values().sum();
        assert_eq!(total, a.trials);
    }

    #[test]
    fn stats_and_pmf_distance() {
        let h = BTreeMap::from([(1, 1), (2, 2), (10, 1)]);
        let s = HistStats::of(&h);
        assert_eq!((s.count, s.median, s.min, s.max), (4, 2, 1, 10));
        assert!((s.mean - 3.75).abs() < 1e-12);
        let p = empirical_pmf(&h);
        assert_eq!(compare_pmf(&p, &p, 0.0).sup_distance, 0.0);
        let a = Pmf::new(3, vec![1.0]);
        let b = Pmf::new(4, vec![1.0]);
        let v = compare_pmf(&a, &b, 0.5);
        assert_eq!(v.sup_distance, 1.0);
        assert!(!v.pass);
    }
}
