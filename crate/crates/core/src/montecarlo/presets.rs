//! Per-preset trials and the comparisons made from their counts.
//!
//! Default tolerances follow the acceptance sizes; at other sizes the same
//! rules are applied and should be read as indicative.

use std::collections::{BTreeMap, HashSet};

use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::{random_uniform_matrix, FqMatrix};
use crate::matroid::{covers_all_points, Extended, RepMatroid};
use crate::process::{
    run_trackers, sample_m1_simple, sample_m2, sample_m3, ConnectivityTracker, CorankTracker,
    CriticalTracker, KCircuitTracker, MinorKind, MinorTracker, ProcessState,
};
use crate::selfcheck::{self, dp_limit_distance, limit_pmf, SelfcheckOptions};
use crate::theory::{
    b_of_a, b_prime, check_inequality, conn_limit_prob, crt_predictors, expected_k_circuits_exact,
    gamma_qc, gaussian_binomial_f64, limit_cck, mu_k, no_kcircuit_prob_approx, rank_full_prob,
    rank_full_prob_exact, corank_pmf, Pmf,
};

use super::aggregate::{compare_pmf, empirical_pmf, Aggregate, HistStats, TrialOutcome};
use super::config::{ExperimentConfig, Preset};
use super::report::{ComparisonReport, Rule};
use super::run_trials;

pub(super) fn run(cfg: &ExperimentConfig, rep: &mut ComparisonReport) -> Result<Aggregate> {
    match cfg.preset {
        Preset::E0 => e0(cfg, rep),
        Preset::E1 => e1(cfg, rep),
        Preset::E2 => e2(cfg, rep),
        Preset::E3 => e3(cfg, rep),
        Preset::E4 => e4(cfg, rep),
        Preset::E5 => e5(cfg, rep),
        Preset::E6 => e6(cfg, rep),
        Preset::E7 => e7(cfg, rep),
        Preset::E8 => e8(cfg, rep),
        Preset::E9 => e9(cfg, rep),
        Preset::E10 => e10(cfg, rep),
        Preset::E11 => e11(cfg, rep),
    }
}

fn mean_of(agg: &Aggregate, name: &str) -> Option<HistStats> {
    agg.stats(name)
}

/// Folds a secondary part into the main aggregate without changing its trial count.
fn absorb(main: &mut Aggregate, part: Aggregate) {
    let trials = main.trials;
    *main = std::mem::take(main).merge(part);
    main.trials = trials;
}

/// Chi-square test that two integer samples come from one distribution.
/// Returns the statistic, degrees of freedom and p-value.
pub fn chi2_homogeneity(a: &BTreeMap<i64, u64>, b: &BTreeMap<i64, u64>) -> (f64, u64, f64) {
    let cats: Vec<i64> = a
        .keys()
        .chain(b.keys())
        .copied()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let na: u64 = a.values().sum();
    let nb: u64 = b.values().sum();
    let n = (na + nb) as f64;
    if cats.len() < 2 || na == 0 || nb == 0 {
        return (0.0, 0, 1.0);
    }
    let mut stat = 0.0;
    for k in &cats {
        let oa = a.get(k).copied().unwrap_or(0) as f64;
        let ob = b.get(k).copied().unwrap_or(0) as f64;
        let col = oa + ob;
        for (o, row) in [(oa, na as f64), (ob, nb as f64)] {
            let e = row * col / n;
            stat += (o - e).powi(2) / e;
        }
    }
    let df = (cats.len() - 1) as u64;
    let p = ChiSquared::new(df as f64).map_or(f64::NAN, |d| d.sf(stat));
    (stat, df, p)
}

fn e0(cfg: &ExperimentConfig, rep: &mut ComparisonReport) -> Result<Aggregate> {
    let opts = SelfcheckOptions {
        max_n: cfg.n,
        seed: cfg.seed,
        corrupt_field_table: false,
    };
    for s in selfcheck::run_all(&opts) {
        rep.exact(
            &format!("selfcheck.{}", s.name),
            Some(0.0),
            Some(s.cases as f64),
            "failures",
            s.failed as f64,
            Rule::AtMost { limit: 0.0 },
        );
        for m in s.messages {
            rep.note(format!("{}: {m}", s.name));
        }
    }
    Ok(Aggregate::default())
}

fn e1(cfg: &ExperimentConfig, rep: &mut ComparisonReport) -> Result<Aggregate> {
    let f = cfg.field()?;
    let (n, m, q) = (cfg.n, cfg.m.unwrap_or(cfg.n), cfg.q as u64);
    // all 2x2 matrices over F_2
    let f2 = Field::new(2)?;
    let full = (0u32..16)
        .filter(|bits| {
            let rows = vec![
                vec![(bits & 1) as Elem, (bits >> 1 & 1) as Elem],
                vec![(bits >> 2 & 1) as Elem, (bits >> 3 & 1) as Elem],
            ];
            FqMatrix::from_rows(&f2, &rows).unwrap().rank() == 2
        })
        .count();
    let frac = full as f64 / 16.0;
    let exact = rank_full_prob_exact(2, 2, 2);
    let exact = num_traits::ToPrimitive::to_f64(&exact).unwrap();
    rep.exact(
        "enumeration_2x2_q2",
        Some(exact),
        Some(frac),
        "abs_error",
        (frac - 0.375).abs(),
        Rule::AtMost { limit: 0.0 },
    );
    let agg = run_trials(cfg.seed, 0, cfg.trials, |rng, _| {
        let r = random_uniform_matrix(n, m, &f, rng).rank();
        let mut o = TrialOutcome::default();
        o.value("corank", (m - r) as i64).event("full_rank", r == m);
        Ok(o)
    })?;
    let e = agg.event("full_rank");
    rep.frequency_z("p_full_rank", e.hits, e.total, rank_full_prob(n as u64, m as u64, q), 3.0);
    if let Some(h) = agg.histogram("corank") {
        let pred = Pmf::new(0, corank_pmf(n as u64, q, m as u64));
        let v = compare_pmf(&empirical_pmf(h), &pred, 0.01);
        rep.sampled(
            "corank_pmf",
            None,
            None,
            "sup_distance",
            v.sup_distance,
            Rule::Report,
            agg.trials,
        );
    }
    Ok(agg)
}

fn e2(cfg: &ExperimentConfig, rep: &mut ComparisonReport) -> Result<Aggregate> {
    let f = cfg.field()?;
    let (n, q, c) = (cfg.n, cfg.q as u64, cfg.c.unwrap_or(1));
    for cc in [1u64, 2] {
        let d = dp_limit_distance(n as u64, q, cc);
        rep.exact(
            &format!("dp_vs_limit_c{cc}"),
            None,
            None,
            "sup_distance",
            d,
            Rule::AtMost { limit: 0.01 },
        );
    }
    for cc in [1u64, 2, c as u64] {
        let (a, g) = (limit_cck(q, cc, cc as i64), gamma_qc(q, cc));
        let name = format!("cck_diagonal_c{cc}");
        if rep.check(&name).is_none() {
            rep.exact(&name, Some(g), Some(a), "abs_error", (a - g).abs(), Rule::AtMost { limit: 1e-12 });
        }
    }
    let budget = cfg.budget;
    let agg = run_trials(cfg.seed, 0, cfg.trials, |_, t| {
        let mut st = ProcessState::new(&f, n, cfg.seed, t);
        let mut crk = CorankTracker::new(c);
        let mut u12 = MinorTracker::new(MinorKind::U12, budget);
        let ht = run_trackers(&mut st, &mut [&mut crk, &mut u12], n + c + 200)?;
        let mut o = TrialOutcome::default();
        if let Some(&tau) = ht.tau_crk.get(&c) {
            o.value("tau_crk_minus_n", tau as i64 - n as i64);
        }
        match ht.tau_minor.get("U12") {
            Some(&tau) => o.value("tau_u12_minus_n", tau as i64 - n as i64),
            None => o.event("u12_censored", true),
        };
        Ok(o)
    })?;
    if let Some(h) = agg.histogram("tau_u12_minus_n") {
        let v = compare_pmf(&empirical_pmf(h), &limit_pmf(q, 1), 0.02);
        rep.sampled("u12_vs_limit", None, None, "sup_distance", v.sup_distance, Rule::AtMost { limit: 0.02 }, agg.trials);
    }
    if let Some(h) = agg.histogram("tau_crk_minus_n") {
        let v = compare_pmf(&empirical_pmf(h), &limit_pmf(q, c as u64), 0.02);
        rep.sampled(
            &format!("crk_c{c}_vs_limit"),
            None,
            None,
            "sup_distance",
            v.sup_distance,
            Rule::AtMost { limit: 0.02 },
            agg.trials,
        );
    }
    Ok(agg)
}

fn e3(cfg: &ExperimentConfig, rep: &mut ComparisonReport) -> Result<Aggregate> {
    let f = cfg.field()?;
    let n = cfg.n;
    let kind = MinorKind::parse(cfg.minor.as_deref().unwrap_or("U23"))?;
    let id = kind.id();
    let budget = cfg.budget;
    let agg = run_trials(cfg.seed, 0, cfg.trials, |_, t| {
        let mut st = ProcessState::new(&f, n, cfg.seed, t);
        let mut crk = CorankTracker::new(1);
        let mut minor = MinorTracker::new(kind.clone(), budget);
        let ht = run_trackers(&mut st, &mut [&mut crk, &mut minor], n + 200)?;
        let tau = ht.tau_minor.get(&id).copied();
        let first = ht.tau_crk.get(&1).copied();
        let mut o = TrialOutcome::default();
        o.event("minor_at_first_dependency", tau.is_some() && tau == first)
            .event("minor_by_n_plus_1", tau.is_some_and(|x| x <= n + 1))
            .event("minor_at_n_plus_1", tau == Some(n + 1));
        if let Some(x) = tau {
            o.value("tau_minor_minus_n", x as i64 - n as i64);
        }
        Ok(o)
    })?;
    let e = agg.event("minor_at_first_dependency");
    rep.sampled(
        "p_minor_at_first_dependency",
        None,
        Some(e.frequency()),
        "frequency",
        e.frequency(),
        Rule::AtLeast { limit: 0.95 },
        e.total,
    );
    let e = agg.event("minor_by_n_plus_1");
    rep.sampled("p_minor_by_n_plus_1", None, Some(e.frequency()), "frequency", e.frequency(), Rule::AtLeast { limit: 0.99 }, e.total);
    let e = agg.event("minor_at_n_plus_1");
    let g = gamma_qc(cfg.q as u64, 1);
    rep.sampled(
        "p_minor_at_n_plus_1",
        Some(g),
        Some(e.frequency()),
        "abs_error",
        e.frequency() - g,
        Rule::AbsAtMost { limit: 0.03 },
        e.total,
    );
    Ok(agg)
}

/// Number of k-circuits. Loops and parallel classes are counted directly.
fn count_k_circuits(a: &FqMatrix, k: usize, cfg: &ExperimentConfig) -> Result<u64> {
    let f = a.field();
    match k {
        1 => Ok(a.columns().filter(|c| c.iter().all(|&x| x == 0)).count() as u64),
        2 => {
            let mut classes: BTreeMap<Vec<Elem>, u64> = BTreeMap::new();
            for c in a.columns() {
                let mut v = c.to_vec();
                if f.normalize(&mut v) {
                    *classes.entry(v).or_insert(0) += 1;
                }
            }
            Ok(classes.values().map(|&s| s * s.saturating_sub(1) / 2).sum())
        }
        _ => Ok(RepMatroid::new(a.clone())
            .circuit_spectrum(&cfg.budget)?
            .get(&k)
            .copied()
            .unwrap_or(0)),
    }
}

fn e4(cfg: &ExperimentConfig, rep: &mut ComparisonReport) -> Result<Aggregate> {
    let f = cfg.field()?;
    let q = cfg.q as u64;
    let (n, m, k) = (cfg.n, cfg.m.unwrap_or(4), cfg.k.unwrap_or(2));
    let (n2, m2) = (cfg.n2.unwrap_or(10), cfg.m2.unwrap_or(40));
    let mut agg = run_trials(cfg.seed, 0, cfg.trials, |rng, _| {
        let a = random_uniform_matrix(n, m, &f, rng);
        let mut o = TrialOutcome::default();
        o.value("k_circuits", count_k_circuits(&a, k, cfg)? as i64);
        Ok(o)
    })?;
    if let Some(s) = mean_of(&agg, "k_circuits") {
        let se = (s.variance / s.count as f64).sqrt();
        let z = |target: f64| if se > 0.0 { (s.mean - target) / se } else { 0.0 };
        let mu = mu_k(m as u64, k as u64, q, n as u64);
        rep.sampled("mean_k_circuits_vs_mu", Some(mu), Some(s.mean), "z", z(mu), Rule::AbsAtMost { limit: 3.0 }, s.count);
        let exact = expected_k_circuits_exact(m as u64, k as u64, q, n as u64);
        rep.sampled(
            "mean_k_circuits_vs_exact",
            Some(exact),
            Some(s.mean),
            "z",
            z(exact),
            Rule::AbsAtMost { limit: 3.0 },
            s.count,
        );
    }
    let part = run_trials(cfg.seed, 1, cfg.trials, |rng, _| {
        let a = random_uniform_matrix(n2, m2, &f, rng);
        let mut o = TrialOutcome::default();
        o.event("no_k_circuit", count_k_circuits(&a, k, cfg)? == 0);
        Ok(o)
    })?;
    absorb(&mut agg, part);
    let e = agg.event("no_k_circuit");
    let p = no_kcircuit_prob_approx(m2 as u64, k as u64, q, n2 as u64);
    rep.sampled(
        "p_no_k_circuit",
        Some(p),
        Some(e.frequency()),
        "abs_error",
        e.frequency() - p,
        Rule::AbsAtMost { limit: 0.05 },
        e.total,
    );
    Ok(agg)
}

fn e5(cfg: &ExperimentConfig, rep: &mut ComparisonReport) -> Result<Aggregate> {
    let f = cfg.field()?;
    let n = cfg.n;
    let agg = run_trials(cfg.seed, 0, cfg.trials, |_, t| {
        let mut st = ProcessState::new(&f, n, cfg.seed, t);
        let (_, len) = st.track_first_circuit();
        let mut o = TrialOutcome::default();
        o.value("first_circuit_length", len as i64);
        Ok(o)
    })?;
    let a_star = 1.0 - 1.0 / cfg.q as f64;
    let (lo, hi) = match cfg.q {
        2 => (0.45, 0.55),
        3 => (0.61, 0.72),
        _ => (a_star - 0.05, a_star + 0.05),
    };
    if let Some(s) = mean_of(&agg, "first_circuit_length") {
        let r = s.mean / n as f64;
        rep.sampled("mean_first_circuit_over_n", Some(a_star), Some(r), "ratio", r, Rule::Between { lo, hi }, s.count);
    }
    Ok(agg)
}

fn e6(cfg: &ExperimentConfig, rep: &mut ComparisonReport) -> Result<Aggregate> {
    let f = cfg.field()?;
    let n = cfg.n;
    // censored just past 2n: both statistics only need to know whether tau < 2n
    let cap = 2 * n + 1;
    let budget = cfg.budget;
    let agg = run_trials(cfg.seed, 0, cfg.trials, |_, t| {
        let mut st = ProcessState::new(&f, n, cfg.seed, t);
        let mut ham = KCircuitTracker::hamilton(n, budget);
        let ht = run_trackers(&mut st, &mut [&mut ham], cap)?;
        let tau = ht.tau_hamilton;
        let mut o = TrialOutcome::default();
        o.value("tau_hamilton_capped", tau.unwrap_or(cap + 1) as i64)
            .event("hamilton_before_2n", tau.is_some_and(|x| x < 2 * n))
            .event("censored", tau.is_none());
        Ok(o)
    })?;
    let b1 = b_of_a(cfg.q as u64, 1.0);
    if let Some(s) = mean_of(&agg, "tau_hamilton_capped") {
        let r = s.median as f64 / n as f64;
        rep.sampled("median_tau_hamilton_over_n", Some(b1), Some(r), "ratio", r, Rule::Between { lo: 1.1, hi: 1.7 }, s.count);
    }
    let e = agg.event("hamilton_before_2n");
    rep.sampled(
        "p_hamilton_before_2n",
        None,
        Some(e.frequency()),
        "frequency",
        e.frequency(),
        Rule::AtLeast { limit: 0.85 },
        e.total,
    );
    Ok(agg)
}

fn e7(cfg: &ExperimentConfig, rep: &mut ComparisonReport) -> Result<Aggregate> {
    let q = cfg.q as u64;
    let a_star = 1.0 - 1.0 / q as f64;
    let b_star = b_of_a(q, a_star);
    rep.exact("b_at_a_star", Some(1.0), Some(b_star), "abs_error", b_star - 1.0, Rule::AbsAtMost { limit: 1e-9 });
    let b1 = b_of_a(q, 1.0);
    rep.exact("b_at_1", None, Some(b1), "value", b1, Rule::Inside { lo: 1.0, hi: 2.0 });
    let grid: Vec<f64> = (1..=100).map(|i| i as f64 / 100.0).collect();
    let vals: Vec<f64> = grid.iter().map(|&a| b_of_a(q, a)).collect();
    let min_d2 = vals
        .windows(3)
        .map(|w| w[0] - 2.0 * w[1] + w[2])
        .fold(f64::INFINITY, f64::min);
    rep.exact("min_second_difference", None, None, "value", min_d2, Rule::AtLeast { limit: -1e-6 });
    // five-point stencil with a step proportional to a; b blows up like q^{1/a}
    // near 0, so the comparison starts at a = 0.05
    let mut worst: f64 = 0.0;
    for &a in grid.iter().filter(|&&a| (0.05..=0.99).contains(&a)) {
        let h = 1e-4 * a;
        let fd = (-b_of_a(q, a + 2.0 * h) + 8.0 * b_of_a(q, a + h) - 8.0 * b_of_a(q, a - h)
            + b_of_a(q, a - 2.0 * h))
            / (12.0 * h);
        let bp = b_prime(q, a);
        worst = worst.max((bp - fd).abs() / bp.abs().max(1.0));
    }
    rep.exact("b_prime_vs_finite_difference", None, None, "rel_error", worst, Rule::AtMost { limit: 1e-4 });
    let bp = b_prime(q, a_star);
    rep.exact("b_prime_at_a_star", Some(0.0), Some(bp), "abs_error", bp, Rule::AbsAtMost { limit: 1e-6 });
    Ok(Aggregate::default())
}

fn e8(cfg: &ExperimentConfig, rep: &mut ComparisonReport) -> Result<Aggregate> {
    let f = cfg.field()?;
    let q = cfg.q as u64;
    let budget = cfg.budget;
    let pg = RepMatroid::projective_geometry(&f, 2);
    let kappa = pg.vertical_connectivity(&budget)?.value;
    rep.exact(
        "kappa_pg_line_infinite",
        None,
        None,
        "finite",
        (!kappa.is_infinite()) as u8 as f64,
        Rule::AtMost { limit: 0.0 },
    );

    // t = min(kappa, girth) on small random instances, skipping the uniform
    // matroids U_{r,m} with m >= 2r - 1 where the identity needs not hold
    let sub = cfg.sub_trials.unwrap_or(1000);
    let fields = [Field::new(2)?, Field::new(3)?];
    let mut agg_id = run_trials(cfg.seed, 1, sub, |rng, _| {
        let fld = &fields[rng.gen_range(0..2)];
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=8);
        let mat = RepMatroid::new(random_uniform_matrix(n, m, fld, rng));
        let mut o = TrialOutcome::default();
        if let Some((r, mm)) = mat.is_uniform() {
            if mm + 1 >= 2 * r {
                o.event("excluded_uniform", true);
                return Ok(o);
            }
        }
        o.event("excluded_uniform", false);
        let t = mat.tutte_connectivity(&budget)?.value;
        let k = mat.vertical_connectivity(&budget)?.value;
        let g = mat.girth(&budget)?;
        o.event("tutte_identity", t == k.min(g));
        Ok(o)
    })?;
    let e = agg_id.event("tutte_identity");
    rep.sampled(
        "tutte_identity_mismatches",
        Some(0.0),
        Some((e.total - e.hits) as f64),
        "count",
        (e.total - e.hits) as f64,
        Rule::AtMost { limit: 0.0 },
        e.total,
    );

    let (n, k) = (cfg.n, cfg.k.unwrap_or(2));
    let m = cfg.conn_columns();
    let agg = run_trials(cfg.seed, 0, cfg.trials, |rng, _| {
        let mat = RepMatroid::new(random_uniform_matrix(n, m, &f, rng));
        let kappa = mat.vertical_connectivity(&budget)?.value;
        let mut o = TrialOutcome::default();
        o.event("vertically_k_connected", kappa >= Extended::Finite(k))
            .value("kappa", kappa.finite().map_or(-1, |x| x as i64));
        Ok(o)
    })?;
    let e = agg.event("vertically_k_connected");
    let target = conn_limit_prob(q, k as u64, 0.0);
    rep.sampled(
        "p_k_connected",
        Some(target),
        Some(e.frequency()),
        "abs_error",
        e.frequency() - target,
        Rule::AbsAtMost { limit: 0.1 },
        e.total,
    );
    let c_eff = m as f64 - n as f64 - (k - 1) as f64 * (n as f64).ln() / (q as f64).ln();
    rep.info("p_k_connected_at_offset", Some(conn_limit_prob(q, k as u64, c_eff)), Some(e.frequency()), c_eff);

    let n2 = cfg.n2.unwrap_or(12);
    let until = cfg.m2.unwrap_or(n2 + 6);
    let mon = cfg.monitor_trials.unwrap_or(200);
    let agg_mon = run_trials(cfg.seed, 2, mon, |_, t| {
        let mut st = ProcessState::new(&f, n2, cfg.seed, (2 << 48) | t);
        let mut tr = ConnectivityTracker::new(0, budget).with_monitor(until);
        let ht = run_trackers(&mut st, &mut [&mut tr], until)?;
        let mut o = TrialOutcome::default();
        o.event("kappa_monotone", ht.kappa_decreases.is_empty());
        Ok(o)
    })?;
    let e = agg_mon.event("kappa_monotone");
    let viol = 1.0 - e.frequency();
    rep.sampled("kappa_violation_rate", Some(0.0), Some(viol), "frequency", viol, Rule::AtMost { limit: 0.05 }, e.total);

    let mut out = agg;
    absorb(&mut agg_id, agg_mon);
    absorb(&mut out, agg_id);
    Ok(out)
}

fn e9(cfg: &ExperimentConfig, rep: &mut ComparisonReport) -> Result<Aggregate> {
    let f = cfg.field()?;
    let q = cfg.q as u64;
    let r = cfg.r.unwrap_or(cfg.n);
    let zeta = gaussian_binomial_f64(r as u64, 1, q);
    let b = (zeta * zeta.ln()).ceil() as usize + 3 * zeta as usize;
    let agg = run_trials(cfg.seed, 0, cfg.trials, |rng, _| {
        let a = random_uniform_matrix(r, b, &f, rng);
        let mut seen = HashSet::new();
        for c in a.columns() {
            let mut v = c.to_vec();
            if f.normalize(&mut v) {
                seen.insert(v);
            }
        }
        let mut o = TrialOutcome::default();
        o.event("covered", covers_all_points(&a))
            .value("missed_points", zeta as i64 - seen.len() as i64);
        Ok(o)
    })?;
    let e = agg.event("covered");
    rep.sampled("p_cover", None, Some(e.frequency()), "frequency", e.frequency(), Rule::AtLeast { limit: 0.9 }, e.total);
    let miss = 1.0 - e.frequency();
    // zero columns hit no point, so only a (1 - q^-r) share of the b columns are balls
    let lambda = b as f64 * (1.0 - (q as f64).powi(-(r as i32))) / zeta;
    let bound = 2.0 * zeta * (-lambda).exp();
    rep.sampled("miss_rate_vs_poisson_bound", Some(bound), Some(miss), "excess", miss - bound, Rule::AtMost { limit: 0.0 }, e.total);
    let literal = 2.0 * zeta * (-(b as f64) / zeta).exp();
    rep.info("poisson_bound_all_columns", Some(literal), Some(miss), b as f64);
    Ok(agg)
}

fn e10(cfg: &ExperimentConfig, rep: &mut ComparisonReport) -> Result<Aggregate> {
    let f = cfg.field()?;
    let budget = cfg.budget;
    let mut bad = 0;
    for q in [2u32, 3] {
        let fq = Field::new(q)?;
        for n in 1..=4 {
            if RepMatroid::projective_geometry(&fq, n).critical_number(&budget)? != n {
                bad += 1;
            }
        }
    }
    rep.exact("chi_pg_mismatches", Some(0.0), Some(bad as f64), "count", bad as f64, Rule::AtMost { limit: 0.0 });
    let mut bad = 0;
    for q in [2u64, 3, 4, 5] {
        for k in 1..=10 {
            if check_inequality(q, k) != ((q, k) != (2, 1)) {
                bad += 1;
            }
        }
    }
    rep.exact("inequality_table_mismatches", Some(0.0), Some(bad as f64), "count", bad as f64, Rule::AtMost { limit: 0.0 });

    let n2 = cfg.n2.unwrap_or(8);
    let sub = cfg.sub_trials.unwrap_or(1000);
    let skips = run_trials(cfg.seed, 1, sub, |_, t| {
        let mut st = ProcessState::new(&f, n2, cfg.seed, (1 << 48) | t);
        let mut tr = CriticalTracker::new(n2 - 1, budget);
        let ht = run_trackers(&mut st, &mut [&mut tr], 3 * n2)?;
        let mut o = TrialOutcome::default();
        o.event("chi_skipped", !ht.chi_skips.is_empty())
            .event("halted_on_loop", ht.loop_at.is_some());
        Ok(o)
    })?;
    let e = skips.event("chi_skipped");
    rep.sampled("chi_skip_trials", Some(0.0), Some(e.hits as f64), "count", e.hits as f64, Rule::AtMost { limit: 0.0 }, e.total);

    let (n, k) = (cfg.n, cfg.k.unwrap_or(1));
    let mut agg = run_trials(cfg.seed, 0, cfg.trials, |_, t| {
        let mut st = ProcessState::new(&f, n, cfg.seed, t);
        let mut tr = CriticalTracker::new(k, budget);
        let ht = run_trackers(&mut st, &mut [&mut tr], 40 * n)?;
        let mut o = TrialOutcome::default();
        o.event("loop", ht.loop_at.is_some());
        if ht.loop_at.is_none() {
            match ht.tau_k_crt.get(&k) {
                Some(&tau) => o.value("tau_k_crt", tau as i64),
                None => o.event("censored", true),
            };
        }
        Ok(o)
    })?;
    let pred = crt_predictors(cfg.q as u64, k as u64, n as u64, n as u64).tau_asym / n as f64;
    if let Some(s) = mean_of(&agg, "tau_k_crt") {
        let r = s.mean / n as f64;
        // the default window [0.8, 1.3] around the prediction (n-1)/n at q=2, k=1, n=10
        rep.sampled(
            "mean_tau_k_crt_over_n",
            Some(pred),
            Some(r),
            "ratio",
            r,
            Rule::Between { lo: pred - 0.1, hi: pred + 0.4 },
            s.count,
        );
    }
    absorb(&mut agg, skips);
    Ok(agg)
}

fn e11(cfg: &ExperimentConfig, rep: &mut ComparisonReport) -> Result<Aggregate> {
    let f = cfg.field()?;
    let (n, m) = (cfg.n, cfg.m.unwrap_or(3));
    let zeta = gaussian_binomial_f64(n as u64, 1, cfg.q as u64);
    let p = m as f64 / zeta;
    let agg = run_trials(cfg.seed, 0, cfg.trials, |rng, _| {
        let mut o = TrialOutcome::default();
        o.value("rank_m2", sample_m2(n, &f, m, rng)?.rank() as i64);
        o.value("rank_m1_simple", sample_m1_simple(n, &f, m, rng, 100_000)?.rank() as i64);
        let mut tries = 0;
        let s3 = loop {
            let s = sample_m3(n, &f, p, rng)?;
            if s.matrix.m() == m {
                break s;
            }
            tries += 1;
            if tries == 100_000 {
                return Err(Error::InvalidParam(format!("M3 never selected exactly {m} points")));
            }
        };
        o.value("rank_m3_conditioned", s3.rank() as i64);
        Ok(o)
    })?;
    let h = |name| agg.histogram(name).cloned().unwrap_or_default();
    for (name, a, b) in [
        ("m2_vs_m1_simple", "rank_m2", "rank_m1_simple"),
        ("m3_conditioned_vs_m2", "rank_m3_conditioned", "rank_m2"),
    ] {
        let (stat, df, pval) = chi2_homogeneity(&h(a), &h(b));
        rep.sampled(name, None, Some(stat), "p_value", pval, Rule::AtLeast { limit: 0.01 }, agg.trials);
        rep.note(format!("{name}: chi-square {stat:.4} on {df} degrees of freedom"));
    }
    Ok(agg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi2_identical_and_disjoint() {
        let a = BTreeMap::from([(1, 50), (2, 50)]);
        let (s, df, p) = chi2_homogeneity(&a, &a);
        assert_eq!((s, df), (0.0, 1));
        assert!((p - 1.0).abs() < 1e-12);
        let b = BTreeMap::from([(3, 100)]);
        let (_, df, p) = chi2_homogeneity(&a, &b);
        assert_eq!(df, 2);
        assert!(p < 1e-10);
    }

    #[test]
    fn k_circuit_counts_match_spectrum() {
        let cfg = ExperimentConfig::for_preset(Preset::E4);
        let mut rng = crate::rng::trial_rng(4, 0);
        for q in [2u32, 3] {
            let f = Field::new(q).unwrap();
            for _ in 0..200 {
                let a = random_uniform_matrix(3, 6, &f, &mut rng);
                let spec = RepMatroid::new(a.clone()).circuit_spectrum(&cfg.budget).unwrap();
                for k in 1..=2 {
                    assert_eq!(
                        count_k_circuits(&a, k, &cfg).unwrap(),
                        spec.get(&k).copied().unwrap_or(0)
                    );
                }
            }
        }
    }
}
