//! Closed-form predictors and exact finite-n oracles.

pub mod circuits;
pub mod connectivity;
pub mod coverage;
pub mod critical;
pub mod gbinom;
pub mod limit;
pub mod rank_law;

pub use circuits::{
    b_of_a, b_prime, expected_k_circuits_exact, g_a, mu_k, no_kcircuit_prob_approx,
};
pub use connectivity::{
    conn_limit_prob, first_moment_sep, kelly_oxley_b, ko_alpha_bound, ko_condition,
    ko_t_upper_bound, lb_alpha, lb_connect_lhs, tau_conn_asymptotic,
};
pub use coverage::{pg_tau_window, poisson_bounds};
pub use critical::{check_inequality, crt_predictors, CrtPredictors};
pub use gbinom::{
    gaussian_binomial, gaussian_binomial_f64, gbinom_asymptotic_check, q_integer, subspace_count,
};
pub use limit::{gamma_qc, limit_cck};
pub use rank_law::{
    corank_pmf, corank_pmf_exact, rank_full_prob, rank_full_prob_exact, tau_crk_exact_pmf,
};

use serde::{Deserialize, Serialize};

/// A probability mass function on the integers `start, start+1, ...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pmf {
    pub start: i64,
    pub probs: Vec<f64>,
}

impl Pmf {
    pub fn new(start: i64, probs: Vec<f64>) -> Pmf {
        Pmf { start, probs }
    }

    /// Tabulates `f` over `lo..=hi`.
    pub fn from_fn(lo: i64, hi: i64, f: impl Fn(i64) -> f64) -> Pmf {
        Pmf::new(lo, (lo..=hi).map(f).collect())
    }

    pub fn get(&self, k: i64) -> f64 {
        if k < self.start {
            return 0.0;
        }
        self.probs.get((k - self.start) as usize).copied().unwrap_or(0.0)
    }

    pub fn end(&self) -> i64 {
        self.start + self.probs.len() as i64
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn shifted(&self, by: i64) -> Pmf {
        Pmf::new(self.start + by, self.probs.clone())
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, p)| (self.start + i as i64) as f64 * p)
            .sum()
    }

    /// Largest pointwise gap between the two mass functions.
    pub fn sup_distance(&self, other: &Pmf) -> f64 {
        let lo = self.start.min(other.start);
        let hi = self.end().max(other.end());
        (lo..hi)
            .map(|k| (self.get(k) - other.get(k)).abs())
            .fold(0.0, f64::max)
    }
}
