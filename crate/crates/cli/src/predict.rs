use clap::{Args, ValueEnum};
use fqmatroid::field::prime_power;
use fqmatroid::theory::{
    self, b_of_a, b_prime, conn_limit_prob, corank_pmf, corank_pmf_exact, crt_predictors,
    expected_k_circuits_exact, gamma_qc, gaussian_binomial, ko_alpha_bound, ko_t_upper_bound,
    lb_alpha, limit_cck, mu_k, no_kcircuit_prob_approx, pg_tau_window, q_integer,
    rank_full_prob, rank_full_prob_exact,
};
use serde_json::{Map, Value};

use crate::{CliResult, Failure};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum What {
    /// b(a): needs --q, --a.
    Bofa,
    /// b'(a): needs --q, --a.
    Bprime,
    /// Gaussian binomial [n, k]_q: needs --n, --k, --q.
    Gbinom,
    /// [n]_q, the number of points of PG(n-1, q): needs --n, --q.
    Qint,
    /// Limiting P(tau_{crk=c} - n = k): needs --q, --c, --k.
    Cck,
    /// gamma_{q,c}: needs --q, --c.
    Gamma,
    /// P(n x m matrix has full rank n): needs --n, --m, --q.
    Fullrank,
    /// Corank distribution of an n x m matrix: needs --n, --m, --q.
    Corank,
    /// k-circuit counts at m columns: needs --n, --m, --k, --q.
    Circuits,
    /// Limiting P(vertically k-connected) at offset --x: needs --q, --k, --x.
    Conn,
    /// Bounds on tau_{k-conn}/n - 1 for k = t n: needs --q, --t.
    Bounds,
    /// Critical-number predictors: needs --n, --k, --m, --q.
    Crt,
    /// Offset over n for PG(r-1, q): needs --q, --r; --x is the omega factor.
    Pg,
}

#[derive(Args)]
pub struct PredictArgs {
    #[arg(long, value_enum)]
    what: What,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<i64>,
    #[arg(long)]
    c: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    /// Offset for `conn`, omega factor for `pg`.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    /// `text` (name=value lines) or `json`.
    #[arg(long, default_value = "text")]
    format: String,
}

fn need<T: Copy>(v: Option<T>, flag: &str, what: What) -> CliResult<T> {
    v.ok_or_else(|| Failure::Usage(format!("predict --what {what:?} needs --{flag}").to_lowercase()))
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Field order from --q; must be a prime power.
pub fn field_order(q: Option<u64>, what: impl std::fmt::Debug) -> CliResult<u64> {
    let q = q.ok_or_else(|| usage(format!("{what:?} needs --q").to_lowercase()))?;
    if q > u32::MAX as u64 || prime_power(q as u32).is_none() {
        return Err(usage(format!("--q {q} is not a prime power")));
    }
    Ok(q)
}

/// Shortest decimal that round-trips at 12 significant digits.
pub fn num(x: f64) -> Value {
    let r: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    serde_json::Number::from_f64(r).map(Value::Number).unwrap_or(Value::String(x.to_string()))
}

fn text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn run(p: &PredictArgs) -> CliResult<()> {
    let w = p.what;
    let mut out: Vec<(String, Value)> = Vec::new();
    let mut put = |k: &str, v: Value| out.push((k.to_string(), v));
    let nonneg_k = |k: i64| -> CliResult<u64> {
        u64::try_from(k).map_err(|_| usage("--k must be non-negative"))
    };
    match w {
        What::Bofa | What::Bprime => {
            let q = field_order(p.q, w)?;
            let a = need(p.a, "a", w)?;
            if !(a > 0.0 && a <= 1.0) {
                return Err(usage("--a must lie in (0, 1]"));
            }
            if matches!(w, What::Bofa) {
                put("b_of_a", num(b_of_a(q, a)));
            } else {
                put("b_prime", num(b_prime(q, a)));
            }
        }
        What::Gbinom => {
            let q = field_order(p.q, w)?;
            let n = need(p.n, "n", w)?;
            let k = nonneg_k(need(p.k, "k", w)?)?;
            if k > n {
                return Err(usage("need k <= n"));
            }
            put("gbinom", Value::String(gaussian_binomial(n, k, q).to_string()));
        }
        What::Qint => {
            let q = field_order(p.q, w)?;
            let n = need(p.n, "n", w)?;
            put("q_integer", Value::String(q_integer(n, q).to_string()));
        }
        What::Cck => {
            let q = field_order(p.q, w)?;
            let c = need(p.c, "c", w)?;
            let k = need(p.k, "k", w)?;
            if c == 0 {
                return Err(usage("--c must be at least 1"));
            }
            put("cck", num(limit_cck(q, c, k)));
        }
        What::Gamma => {
            let q = field_order(p.q, w)?;
            let c = need(p.c, "c", w)?;
            if c == 0 {
                return Err(usage("--c must be at least 1"));
            }
            put("gamma", num(gamma_qc(q, c)));
        }
        What::Fullrank => {
            let q = field_order(p.q, w)?;
            let n = need(p.n, "n", w)?;
            let m = need(p.m, "m", w)?;
            put("p_full_rank", num(rank_full_prob(n, m, q)));
            if n <= 64 && m <= 64 {
                put("p_full_rank_exact", Value::String(rank_full_prob_exact(n, m, q).to_string()));
            }
        }
        What::Corank => {
            let q = field_order(p.q, w)?;
            let n = need(p.n, "n", w)?;
            let m = need(p.m, "m", w)?;
            let exact = (n <= 64 && m <= 64).then(|| corank_pmf_exact(n, q, m));
            for (c, x) in corank_pmf(n, q, m).into_iter().enumerate() {
                if x > 0.0 {
                    put(&format!("corank_{c}"), num(x));
                    if let Some(e) = &exact {
                        put(&format!("corank_{c}_exact"), Value::String(e[c].to_string()));
                    }
                }
            }
        }
        What::Circuits => {
            let q = field_order(p.q, w)?;
            let n = need(p.n, "n", w)?;
            let m = need(p.m, "m", w)?;
            let k = nonneg_k(need(p.k, "k", w)?)?;
            if k == 0 || k > m {
                return Err(usage("need 1 <= k <= m"));
            }
            put("mu_k", num(mu_k(m, k, q, n)));
            put("expected_k_circuits", num(expected_k_circuits_exact(m, k, q, n)));
            put("p_no_k_circuit", num(no_kcircuit_prob_approx(m, k, q, n)));
        }
        What::Conn => {
            let q = field_order(p.q, w)?;
            let k = nonneg_k(need(p.k, "k", w)?)?;
            let x = need(p.x, "x", w)?;
            if k < 2 {
                return Err(usage("--k must be at least 2"));
            }
            put("p_vertically_k_connected", num(conn_limit_prob(q, k, x)));
        }
        What::Bounds => {
            let q = field_order(p.q, w)?;
            let t = need(p.t, "t", w)?;
            if !(t > 0.0 && t < 1.0) {
                return Err(usage("--t must lie in (0, 1)"));
            }
            put("lb_alpha", num(lb_alpha(q, t)));
            put("ko_upper", num(ko_t_upper_bound(q, t)));
            put("ko_alpha_bound", num(ko_alpha_bound(q)));
        }
        What::Crt => {
            let q = field_order(p.q, w)?;
            let n = need(p.n, "n", w)?;
            let m = need(p.m, "m", w)?;
            let k = nonneg_k(need(p.k, "k", w)?)?;
            if k == 0 || k >= n {
                return Err(usage("need 1 <= k < n"));
            }
            let c = crt_predictors(q, k, n, m);
            put("tau_asym", num(c.tau_asym));
            put("tau_asym_over_n", num(c.tau_asym / n as f64));
            put("mu", num(c.mu));
            put("expected_avoiding", num(c.ex()));
            put("second_moment_ratio", num(c.second_moment_ratio));
            put("inequality_holds", Value::Bool(theory::check_inequality(q, k)));
        }
        What::Pg => {
            let q = field_order(p.q, w)?;
            let r = need(p.r, "r", w)?;
            if r == 0 {
                return Err(usage("--r must be at least 1"));
            }
            put("offset", num(pg_tau_window(q, r, p.x.unwrap_or(1.0))));
        }
    }
    match p.format.as_str() {
        "text" => {
            for (k, v) in &out {
                println!("{k}={}", text(v));
            }
        }
        "json" => {
            let map: Map<String, Value> = out.into_iter().collect();
            println!("{}", Value::Object(map));
        }
        other => return Err(usage(format!("unknown format {other:?} (expected text or json)"))),
    }
    Ok(())
}
