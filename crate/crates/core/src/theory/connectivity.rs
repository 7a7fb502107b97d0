//! Vertical connectivity predictors: limit law, upper and lower bounds.

use statrs::function::factorial::ln_binomial;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// `exp(-(q-1)^{k-2} q^{-c} / (k-1)!)`, the limiting probability of vertical
/// k-connectivity at `m = n + (k-1) log_q n + c`.
pub fn conn_limit_prob(q: u64, k: u64, c: f64) -> f64 {
    assert!(k >= 2, "need k >= 2");
    let qf = q as f64;
    let ln_rate = (k as f64 - 2.0) * (qf - 1.0).ln() - c * qf.ln() - ln_gamma(k as f64);
    (-ln_rate.exp()).exp()
}

/// `log(2q-1) / (2 log q - log(2q-1))`: above `(1+alpha) n` columns there is
/// a.a.s. no vertical separation at all.
pub fn ko_alpha_bound(q: u64) -> f64 {
    let qf = q as f64;
    let l = (2.0 * qf - 1.0).ln();
    l / (2.0 * qf.ln() - l)
}

fn ko_gap(q: u64, t: f64, alpha: f64) -> f64 {
    let lq = (q as f64).ln();
    t * ((1.0 + t) * alpha / (t * t)).ln() - ((alpha - t) * lq - 2.0 * t)
}

/// `t log((1+t) alpha / t^2) < (alpha - t) ln q - 2t`.
pub fn ko_condition(q: u64, t: f64, alpha: f64) -> bool {
    assert!(t > 0.0 && t < 1.0 && alpha > 0.0);
    ko_gap(q, t, alpha) < 0.0
}

/// Upper bound on `tau_{k-conn}/n - 1` for `k ~ tn`: the smaller of the
/// part (a) constant and the least alpha beyond which the part (b)
/// condition holds.
pub fn ko_t_upper_bound(q: u64, t: f64) -> f64 {
    assert!(t > 0.0 && t < 1.0);
    // ko_gap is concave in alpha with its peak at t / ln q
    let peak = t / (q as f64).ln();
    let b_root = if ko_gap(q, t, peak) < 0.0 {
        peak
    } else {
        let mut lo = peak;
        let mut hi = 2.0 * peak.max(1.0);
        while ko_gap(q, t, hi) >= 0.0 {
            lo = hi;
            hi *= 2.0;
        }
        bisect(lo, hi, 1e-12, |a| ko_gap(q, t, a) < 0.0)
    };
    b_root.min(ko_alpha_bound(q))
}

/// Left-hand side of the lower-bound condition for `k ~ tn`:
/// `t log((1+a)/t) + (1+a-t) log((1+a)/(1+a-t)) + t log(q-1) - a log q`.
pub fn lb_connect_lhs(q: u64, t: f64, alpha: f64) -> f64 {
    let qf = q as f64;
    let s = 1.0 + alpha;
    t * (s / t).ln() + (s - t) * (s / (s - t)).ln() + t * (qf - 1.0).ln() - alpha * qf.ln()
}

/// Supremum of alpha with `lb_connect_lhs > 0`: the lower bound on
/// `tau_{k-conn}/n - 1` for `k ~ tn`.
pub fn lb_alpha(q: u64, t: f64) -> f64 {
    assert!(t > 0.0 && t < 1.0, "need 0 < t < 1");
    // The LHS is concave in alpha, increasing up to q t/(q-1) - 1.
    let qf = q as f64;
    let start = (qf * t / (qf - 1.0) - 1.0).max(0.0);
    let mut lo = start;
    let mut hi = start + 1.0;
    while lb_connect_lhs(q, t, hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    bisect(lo, hi, 1e-12, |a| lb_connect_lhs(q, t, a) <= 0.0)
}

/// Smallest point of `[lo, hi]` where `pred` holds, assuming `pred` is
/// false at `lo`, true at `hi` and monotone.
fn bisect(mut lo: f64, mut hi: f64, tol: f64, pred: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Natural log of `b(l,j) = C(m-|D|, n+l-1-|D|) C(n+l-1, j)
/// ((q^j + q^{n+l-1-j} - q^{l-1}) / q^n)^{m-(n+l-1)}`.
pub fn kelly_oxley_ln_b(ell: u64, j: u64, n: u64, m: u64, q: u64, d_size: u64) -> Result<f64> {
    let top = n + ell - 1;
    if ell == 0 || d_size > top || d_size > m || top > m || j > top {
        return Err(Error::InvalidParam(format!(
            "b(l={ell}, j={j}) undefined for n={n}, m={m}, |D|={d_size}"
        )));
    }
    let lq = (q as f64).ln();
    // base = q^{j-n} + q^{l-1-j} - q^{l-1-n}, factored around its largest term
    let e1 = j as f64 - n as f64;
    let e2 = ell as f64 - 1.0 - j as f64;
    let e3 = ell as f64 - 1.0 - n as f64;
    let emax = e1.max(e2);
    let rest = ((e1 - emax) * lq).exp() + ((e2 - emax) * lq).exp() - ((e3 - emax) * lq).exp();
    let ln_base = emax * lq + rest.ln();
    Ok(ln_binomial(m - d_size, top - d_size)
        + ln_binomial(top, j)
        + (m - top) as f64 * ln_base)
}

pub fn kelly_oxley_b(ell: u64, j: u64, n: u64, m: u64, q: u64, d_size: u64) -> Result<f64> {
    kelly_oxley_ln_b(ell, j, n, m, q, d_size).map(f64::exp)
}

/// First-moment quantities for the separation count: `mu = (q-1)^{k-1} q^{-m}`
/// and `E X = C(m, k-1) [n]_q mu`, returned as natural logs.
pub fn first_moment_sep_ln(q: u64, k: u64, n: u64, m: u64) -> (f64, f64) {
    assert!(k >= 1 && k - 1 <= m);
    let qf = q as f64;
    let ln_mu = (k as f64 - 1.0) * (qf - 1.0).ln() - m as f64 * qf.ln();
    // [n]_q = (q^n - 1)/(q - 1)
    let ln_pts = n as f64 * qf.ln() + (-qf.powi(-(n as i32))).ln_1p() - (qf - 1.0).ln();
    let ln_ex = ln_binomial(m, k - 1) + ln_pts + ln_mu;
    (ln_mu, ln_ex)
}

/// `(mu, E X)`; see [`first_moment_sep_ln`].
pub fn first_moment_sep(q: u64, k: u64, n: u64, m: u64) -> (f64, f64) {
    let (a, b) = first_moment_sep_ln(q, k, n, m);
    (a.exp(), b.exp())
}

/// `n + k log_q(n/k)`.
pub fn tau_conn_asymptotic(q: u64, k: u64, n: u64) -> f64 {
    assert!(k >= 1 && k <= n);
    n as f64 + k as f64 * (n as f64 / k as f64).ln() / (q as f64).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kordecki_luczak_values() {
        assert!((conn_limit_prob(2, 2, 0.0) - (-1f64).exp()).abs() < 1e-15);
        assert!(conn_limit_prob(2, 3, 40.0) > 0.999_999);
        assert!(conn_limit_prob(3, 2, -40.0) < 1e-12);
    }

    #[test]
    fn ko_constant() {
        assert!((ko_alpha_bound(2) - 3.818_841_2).abs() < 1e-6);
        let v: Vec<f64> = (2..=5).map(ko_alpha_bound).collect();
        assert!(v.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn ko_condition_flips_at_threshold() {
        for t in [0.1, 0.5, 0.9] {
            let a = ko_t_upper_bound(2, t);
            if a < ko_alpha_bound(2) {
                assert!(ko_condition(2, t, a * (1.0 + 1e-6)));
                assert!(!ko_condition(2, t, a * (1.0 - 1e-6)));
            }
        }
    }

    #[test]
    fn lower_bound_below_upper_bound() {
        for q in [2u64, 3, 4] {
            for i in 1..100 {
                let t = i as f64 / 100.0;
                let lhs0 = lb_connect_lhs(q, t, 0.0);
                assert!(lhs0 > 0.0);
                let a = lb_alpha(q, t);
                assert!(lb_connect_lhs(q, t, a).abs() < 1e-8);
                assert!(a <= ko_t_upper_bound(q, t) + 1e-9, "q={q} t={t}");
            }
        }
    }

    #[test]
    fn b_dominant_term_and_claim_ordering() {
        let n = 400;
        let ln_b = kelly_oxley_ln_b(1, 1, n, n + 10, 2, n - 5).unwrap();
        let rest = ln_b - ln_binomial(15, 5) - ln_binomial(n, 1);
        assert!((rest / 10.0 - 0.5f64.ln()).abs() < 1e-6);

        // Regime m = n + (1 + 2 eps) k log_q(n/k).
        for (n, k) in [(200u64, 4u64), (400, 6), (1000, 8)] {
            let m = n + (1.4 * k as f64 * (n as f64 / k as f64).log2()).ceil() as u64;
            let d = n - 3;
            let top_b = kelly_oxley_ln_b(k - 1, k - 1, n, m, 2, d).unwrap();
            for ell in 1..k {
                let jmax = (n + ell - 1) / 2;
                let mut prev = kelly_oxley_ln_b(ell, ell, n, m, 2, d).unwrap();
                assert!(prev <= top_b + 1e-9);
                for j in ell + 1..=jmax {
                    let cur = kelly_oxley_ln_b(ell, j, n, m, 2, d).unwrap();
                    assert!(cur <= prev + 1e-9, "n={n} l={ell} j={j}");
                    prev = cur;
                }
            }
        }
        assert!(kelly_oxley_b(1, 1, 10, 5, 2, 3).is_err());
    }

    #[test]
    fn first_moment() {
        for m in [1u64, 5, 20] {
            let (mu, ex) = first_moment_sep(2, 1, 7, m);
            assert!((mu - 2f64.powi(-(m as i32))).abs() < 1e-15);
            assert!((ex - 127.0 * mu).abs() < 1e-12);
        }
        // log E X grows below n + k log_q(n/k) and shrinks well above it
        let (n, k) = (10_000u64, 20u64);
        let center = k as f64 * (n as f64 / k as f64).log2();
        let below = n + (0.5 * center) as u64;
        let above = n + (2.0 * center) as u64;
        assert!(first_moment_sep_ln(2, k, n, below).1 > 0.0);
        assert!(first_moment_sep_ln(2, k, n, above).1 < 0.0);
    }

    #[test]
    fn asymptotic_center() {
        assert_eq!(tau_conn_asymptotic(2, 7, 7), 7.0);
        let d = tau_conn_asymptotic(2, 3, 200) - tau_conn_asymptotic(2, 3, 100);
        assert!((d - 100.0 - 3.0).abs() < 1e-9);
    }
}
