//! Acceptance criteria E0-E11 at their stated sizes. Each test prints one
//! `E<i>: PASS|FAIL` line with the measured values, and thresholds are
//! applied here rather than taken from the library's report.
//!
//! E4's first half compares the mean number of 2-circuits with the
//! asymptotic mu_2; at (n, m, q) = (3, 4, 2) the exact mean is 42/64, so
//! that line reports FAIL by construction. See the README.

use std::time::Instant;

use fqmatroid::matroid::RepMatroid;
use fqmatroid::montecarlo::{run_experiment, Aggregate, ExperimentConfig, ExperimentResult, Preset};
use fqmatroid::process::{run_trackers, KCircuitTracker, ProcessState};

/// Criteria that cannot hold as stated. Their line still says FAIL, but the
/// test does not abort on them.
const KNOWN_UNATTAINABLE: &[&str] = &["E4.mean_2_circuits"];

struct Line {
    id: &'static str,
    parts: Vec<(String, bool, String)>,
    started: Instant,
}

impl Line {
    fn new(id: &'static str) -> Line {
        Line {
            id,
            parts: Vec::new(),
            started: Instant::now(),
        }
    }

    fn part(&mut self, name: &str, ok: bool, detail: String) {
        self.parts.push((name.to_string(), ok, detail));
    }

    fn finish(self, limit_secs: u64) {
        let secs = self.started.elapsed().as_secs_f64();
        let ok = self.parts.iter().all(|p| p.1);
        let detail: Vec<String> = self
            .parts
            .iter()
            .map(|(n, ok, d)| format!("{n}={} ({d})", if *ok { "ok" } else { "FAIL" }))
            .collect();
        println!(
            "{}: {} [{secs:.1}s, budget {limit_secs}s] {}",
            self.id,
            if ok { "PASS" } else { "FAIL" },
            detail.join("; ")
        );
        let hard: Vec<&String> = self
            .parts
            .iter()
            .filter(|(n, ok, _)| !ok && !KNOWN_UNATTAINABLE.contains(&format!("{}.{n}", self.id).as_str()))
            .map(|(n, _, _)| n)
            .collect();
        assert!(hard.is_empty(), "{} failed: {hard:?}", self.id);
    }
}

fn run(cfg: &ExperimentConfig) -> ExperimentResult {
    run_experiment(cfg).unwrap_or_else(|e| panic!("{} failed to run: {e}", cfg.preset))
}

fn freq(agg: &Aggregate, name: &str) -> (f64, u64) {
    let e = agg.event(name);
    assert!(e.total > 0, "no samples for {name}");
    (e.hits as f64 / e.total as f64, e.total)
}

fn stat(res: &ExperimentResult, name: &str) -> f64 {
    res.report
        .check(name)
        .unwrap_or_else(|| panic!("missing check {name}"))
        .statistic
}

/// `prod_{j >= j0} (1 - q^-j)`.
fn tail(q: f64, j0: i32) -> f64 {
    (j0..200).map(|j| 1.0 - q.powi(-j)).product()
}

#[test]
fn e0_exhaustive_oracles() {
    let mut line = Line::new("E0");
    let res = run(&ExperimentConfig::for_preset(Preset::E0));
    for c in &res.report.checks {
        line.part(&c.name, c.statistic == 0.0, format!("{} failures", c.statistic));
    }
    assert!(res.report.checks.len() >= 6);
    let secs = line.started.elapsed().as_secs();
    line.part("runtime", secs < 120, format!("{secs}s"));
    line.finish(120);
}

#[test]
fn e1_rank_law() {
    let mut line = Line::new("E1");
    let cfg = ExperimentConfig::for_preset(Preset::E1);
    assert_eq!((cfg.n, cfg.m, cfg.q, cfg.trials), (16, Some(16), 2, 100_000));
    let res = run(&cfg);
    let e = stat(&res, "enumeration_2x2_q2");
    line.part("enumeration_3/8", e == 0.0, format!("|frac - 3/8| = {e}"));
    let p: f64 = (0..16).map(|i| 1.0 - 2f64.powi(i - 16)).product();
    let (phat, t) = freq(&res.aggregate, "full_rank");
    let z = (phat - p) / (p * (1.0 - p) / t as f64).sqrt();
    line.part("z", z.abs() <= 3.0, format!("p={p:.6} phat={phat:.6} z={z:.2}"));
    line.finish(60);
}

#[test]
fn e2_point_probabilities() {
    let mut line = Line::new("E2");
    let cfg = ExperimentConfig::for_preset(Preset::E2);
    assert_eq!((cfg.n, cfg.q, cfg.trials), (60, 2, 100_000));
    let res = run(&cfg);
    for c in ["dp_vs_limit_c1", "dp_vs_limit_c2"] {
        let d = stat(&res, c);
        line.part(c, d <= 0.01, format!("sup={d:.2e}"));
    }
    let d = stat(&res, "u12_vs_limit");
    line.part("u12_sim", d <= 0.02, format!("sup={d:.4}"));
    for c in ["cck_diagonal_c1", "cck_diagonal_c2"] {
        let d = stat(&res, c);
        line.part(c, d <= 1e-12, format!("err={d:.1e}"));
    }
    // independent check of the one point with a closed form: C_{1,1} = gamma_{2,1}
    let g = tail(2.0, 1);
    let h = res.aggregate.histogram("tau_u12_minus_n").unwrap();
    let p1 = h.get(&1).copied().unwrap_or(0) as f64 / res.aggregate.trials as f64;
    line.part("p(tau=n+1)", (p1 - g).abs() < 0.01, format!("{p1:.4} vs {g:.4}"));
    line.finish(300);
}

#[test]
fn e3_very_small_minor() {
    let mut line = Line::new("E3");
    let cfg = ExperimentConfig::for_preset(Preset::E3);
    assert_eq!((cfg.n, cfg.q, cfg.trials, cfg.minor.as_deref()), (200, 2, 10_000, Some("U23")));
    let res = run(&cfg);
    let (f1, _) = freq(&res.aggregate, "minor_at_first_dependency");
    line.part("tau=tau_crk1", f1 >= 0.95, format!("{f1:.4}"));
    let (f2, _) = freq(&res.aggregate, "minor_by_n_plus_1");
    line.part("tau<=n+1", f2 >= 0.99, format!("{f2:.4}"));
    let (f3, _) = freq(&res.aggregate, "minor_at_n_plus_1");
    let g = tail(2.0, 1);
    line.part("tau=n+1", (f3 - g).abs() <= 0.03, format!("{f3:.4} vs gamma={g:.4}"));
    line.finish(300);
}

#[test]
fn e4_circuit_counts() {
    let mut line = Line::new("E4");
    let cfg = ExperimentConfig::for_preset(Preset::E4);
    assert_eq!((cfg.n, cfg.m, cfg.k, cfg.q), (3, Some(4), Some(2), 2));
    assert_eq!((cfg.n2, cfg.m2, cfg.trials), (Some(10), Some(40), 100_000));
    let res = run(&cfg);
    let s = res.aggregate.stats("k_circuits").unwrap();
    let se = (s.variance / s.count as f64).sqrt();
    // mu_2 = C(4,2) (q-1) / q^n
    let mu = 6.0 / 8.0;
    let z = (s.mean - mu) / se;
    line.part("mean_2_circuits", z.abs() <= 3.0, format!("mean={:.5} mu2={mu} z={z:.1}", s.mean));
    // a pair is a 2-circuit iff both columns are equal and nonzero: 7/64 per pair
    let exact = 6.0 * 7.0 / 64.0;
    let ze = (s.mean - exact) / se;
    line.part("mean_vs_exact", ze.abs() <= 3.0, format!("exact={exact} z={ze:.2}"));
    let (p0, _) = freq(&res.aggregate, "no_k_circuit");
    let approx = (-(40.0 * 39.0 / 2.0) / 1024.0f64).exp();
    line.part("p_no_2_circuit", (p0 - approx).abs() <= 0.05, format!("{p0:.4} vs {approx:.4}"));
    line.finish(120);
}

#[test]
fn e5_first_circuit_length() {
    let mut line = Line::new("E5");
    for (q, lo, hi) in [(2u32, 0.45, 0.55), (3, 0.61, 0.72)] {
        let mut cfg = ExperimentConfig::for_preset(Preset::E5);
        cfg.q = q;
        assert_eq!((cfg.n, cfg.trials), (100, 10_000));
        let res = run(&cfg);
        let r = res.aggregate.stats("first_circuit_length").unwrap().mean / 100.0;
        line.part(&format!("q={q}"), (lo..=hi).contains(&r), format!("{r:.4} in [{lo},{hi}]"));
    }
    line.finish(180);
}

#[test]
fn e6_hamilton_circuit() {
    let mut line = Line::new("E6");
    let cfg = ExperimentConfig::for_preset(Preset::E6);
    assert_eq!((cfg.n, cfg.q, cfg.trials, cfg.budget.kernel_sweep), (16, 2, 1000, 1 << 24));
    let res = run(&cfg);
    let s = res.aggregate.stats("tau_hamilton_capped").unwrap();
    let med = s.median as f64 / 16.0;
    line.part("median", (1.1..=1.7).contains(&med), format!("{med:.4}"));
    let (f, _) = freq(&res.aggregate, "hamilton_before_2n");
    line.part("tau<2n", f >= 0.85, format!("{f:.3}"));
    // replay a few trials and recount length-n circuits from scratch
    let field = cfg.field().unwrap();
    let mut agree = 0;
    for t in 0..20 {
        let mut st = ProcessState::new(&field, 16, cfg.seed, t);
        let mut first = None;
        while first.is_none() && st.m() < 33 {
            st.step();
            let spec = RepMatroid::new(st.matrix().clone()).circuit_spectrum(&cfg.budget).unwrap();
            if spec.get(&16).is_some_and(|&c| c > 0) {
                first = Some(st.m());
            }
        }
        let mut st = ProcessState::new(&field, 16, cfg.seed, t);
        let mut ham = KCircuitTracker::hamilton(16, cfg.budget);
        let ht = run_trackers(&mut st, &mut [&mut ham], 33).unwrap();
        agree += (ht.tau_hamilton == first) as u32;
    }
    line.part("replay", agree == 20, format!("{agree}/20 trials agree"));
    line.finish(600);
}

#[test]
fn e7_b_of_a() {
    let mut line = Line::new("E7");
    let res = run(&ExperimentConfig::for_preset(Preset::E7));
    let d = stat(&res, "b_at_a_star");
    line.part("b(1/2)=1", d.abs() <= 1e-9, format!("{d:.1e}"));
    let b1 = stat(&res, "b_at_1");
    line.part("b(1)", b1 > 1.0 && b1 < 2.0, format!("{b1:.6}"));
    let c = stat(&res, "min_second_difference");
    line.part("convex", c >= -1e-6, format!("{c:.2e}"));
    let r = stat(&res, "b_prime_vs_finite_difference");
    line.part("b_prime", r <= 1e-4, format!("{r:.1e}"));
    let z = stat(&res, "b_prime_at_a_star");
    line.part("b'(a*)", z.abs() <= 1e-6, format!("{z:.1e}"));
    // independent: g_a(b) = 0 at a = 1/2, b = 1 for q = 2
    let b = fqmatroid::theory::b_of_a(2, 0.5);
    line.part("root", (b - 1.0).abs() < 1e-9, format!("{b}"));
    line.finish(10);
}

#[test]
fn e8_connectivity() {
    let mut line = Line::new("E8");
    let cfg = ExperimentConfig::for_preset(Preset::E8);
    assert_eq!((cfg.n, cfg.q, cfg.trials, cfg.conn_columns()), (10, 2, 10_000, 14));
    assert_eq!((cfg.sub_trials, cfg.n2), (Some(1000), Some(12)));
    let res = run(&cfg);
    line.part("kappa(PG(1,2))", stat(&res, "kappa_pg_line_infinite") == 0.0, "infinite".into());
    let e = res.aggregate.event("tutte_identity");
    let x = res.aggregate.event("excluded_uniform");
    line.part(
        "t=min(kappa,girth)",
        e.hits == e.total && x.total == 1000,
        format!("{} mismatches in {} ({} uniform excluded)", e.total - e.hits, e.total, x.hits),
    );
    let (p, _) = freq(&res.aggregate, "vertically_k_connected");
    let target = (-1.0f64).exp();
    line.part("P(2-conn)", (p - target).abs() <= 0.1, format!("{p:.4} vs e^-1={target:.4}"));
    let (mono, t) = freq(&res.aggregate, "kappa_monotone");
    line.part("monotone", 1.0 - mono <= 0.05, format!("violations {:.3} over {t}", 1.0 - mono));
    line.finish(900);
}

#[test]
fn e9_pg_coverage() {
    let mut line = Line::new("E9");
    let cfg = ExperimentConfig::for_preset(Preset::E9);
    assert_eq!((cfg.r, cfg.q, cfg.trials), (Some(3), 2, 10_000));
    let res = run(&cfg);
    // zeta = 7, b = ceil(7 ln 7) + 21 = 35
    let b = (7.0 * 7f64.ln()).ceil() + 21.0;
    assert_eq!(b, 35.0);
    let (p, _) = freq(&res.aggregate, "covered");
    line.part("cover", p >= 0.9, format!("{p:.4}"));
    let lambda = b * (1.0 - 1.0 / 8.0) / 7.0;
    let bound = 2.0 * 7.0 * (-lambda).exp();
    line.part("miss<=2k e^-lambda", 1.0 - p <= bound, format!("{:.4} <= {bound:.4}", 1.0 - p));
    line.finish(60);
}

#[test]
fn e10_critical_number() {
    let mut line = Line::new("E10");
    let cfg = ExperimentConfig::for_preset(Preset::E10);
    assert_eq!((cfg.n, cfg.k, cfg.n2, cfg.q), (10, Some(1), Some(8), 2));
    assert_eq!((cfg.trials, cfg.sub_trials), (1000, Some(1000)));
    let res = run(&cfg);
    line.part("chi(PG)=n", stat(&res, "chi_pg_mismatches") == 0.0, "n<=4, q in {2,3}".into());
    line.part("inequality", stat(&res, "inequality_table_mismatches") == 0.0, "q<=5, k<=10".into());
    let e = res.aggregate.event("chi_skipped");
    line.part("no_skips", e.hits == 0 && e.total == 1000, format!("{} of {}", e.hits, e.total));
    let r = res.aggregate.stats("tau_k_crt").unwrap().mean / 10.0;
    line.part("tau_1crt/n", (0.8..=1.3).contains(&r), format!("{r:.4}"));
    line.finish(600);
}

#[test]
fn e11_model_equivalence() {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let mut line = Line::new("E11");
    let cfg = ExperimentConfig::for_preset(Preset::E11);
    assert_eq!((cfg.n, cfg.q, cfg.m, cfg.trials), (4, 2, Some(3), 100_000));
    let res = run(&cfg);
    // 2x2 table: rank 2 (three points on a line) or rank 3
    let count = |name: &str, r: i64| {
        res.aggregate.histogram(name).unwrap().get(&r).copied().unwrap_or(0) as f64
    };
    for (label, a, b) in [
        ("M2~M1|simple", "rank_m2", "rank_m1_simple"),
        ("M3|m~M2", "rank_m3_conditioned", "rank_m2"),
    ] {
        let t = [[count(a, 2), count(a, 3)], [count(b, 2), count(b, 3)]];
        let n: f64 = t.iter().flatten().sum();
        let mut chi = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let e = (t[i][0] + t[i][1]) * (t[0][j] + t[1][j]) / n;
                chi += (t[i][j] - e).powi(2) / e;
            }
        }
        let p = ChiSquared::new(1.0).unwrap().sf(chi);
        line.part(label, p > 0.01, format!("p={p:.3}"));
    }
    // 35 lines of PG(3,2) among C(15,3) = 455 triples
    let p2 = count("rank_m2", 2) / res.aggregate.trials as f64;
    line.part("P(rank 2)", (p2 - 35.0 / 455.0).abs() < 0.005, format!("{p2:.4} vs {:.4}", 35.0 / 455.0));
    line.finish(120);
}
