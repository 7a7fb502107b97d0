//! Critical-number predictors.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::gbinom::{gaussian_binomial, ln_gaussian_binomial, subspace_count};

/// First- and second-moment data for the number X of (n-k)-dim subspaces
/// avoiding m uniform columns.
#[derive(Debug, Clone)]
pub struct CrtPredictors {
    /// `-k(n-k) log q / log(1 - q^{-k})`.
    pub tau_asym: f64,
    /// `(1 - q^{-k})^m`.
    pub mu: f64,
    /// `log E X = log gbinom(n,k)_q + m log(1 - q^{-k})`.
    pub ln_ex: f64,
    /// `(h, pi_h)` with `pi_h = (1 - 2q^{-k} + q^{-2k+h})^m`.
    pub pi: Vec<(u64, f64)>,
    /// `(h, N_h)`: number of (n-k)-dim subspaces meeting a fixed one in
    /// dimension n-2k+h.
    pub n_h: Vec<(u64, BigUint)>,
    /// `E X(X-1) / (E X)^2`.
    pub second_moment_ratio: f64,
}

impl CrtPredictors {
    pub fn ex(&self) -> f64 {
        self.ln_ex.exp()
    }
}

pub fn crt_predictors(q: u64, k: u64, n: u64, m: u64) -> CrtPredictors {
    assert!(k >= 1 && k < n, "need 1 <= k < n");
    let qf = q as f64;
    let lq = qf.ln();
    let l1 = (-qf.powi(-(k as i32))).ln_1p();
    let tau_asym = -(k as f64) * (n - k) as f64 * lq / l1;
    let mu = (m as f64 * l1).exp();
    let ln_ex = ln_gaussian_binomial(n, k, q) + m as f64 * l1;
    let h_lo = (2 * k).saturating_sub(n);
    let pi: Vec<(u64, f64)> = (h_lo..=k)
        .map(|h| {
            let base = 1.0 - 2.0 * qf.powi(-(k as i32)) + qf.powf(h as f64 - 2.0 * k as f64);
            (h, base.powf(m as f64))
        })
        .collect();
    let n_h: Vec<(u64, BigUint)> = (h_lo..=k)
        .map(|h| (h, subspace_count(n, n - k, n - k, n + h - 2 * k, q)))
        .collect();
    let r = gaussian_binomial(n, k, q).to_f64().unwrap();
    let s: f64 = pi
        .iter()
        .zip(&n_h)
        .filter(|((h, _), _)| *h < k)
        .map(|((_, p), (_, c))| c.to_f64().unwrap() * p)
        .sum();
    CrtPredictors {
        tau_asym,
        mu,
        ln_ex,
        pi,
        n_h,
        second_moment_ratio: s / (r * mu * mu),
    }
}

/// `(1 - q^{-k})^2 > k q^{-k}`, decided exactly as `(q^k - 1)^2 > k q^k`.
pub fn check_inequality(q: u64, k: u64) -> bool {
    let qk = BigUint::from(q).pow(k as u32);
    let lhs = (&qk - 1u32) * (&qk - 1u32);
    lhs > qk * k
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_values() {
        let p = crt_predictors(2, 1, 10, 20);
        assert!((p.tau_asym - 9.0).abs() < 1e-12);
        let p = crt_predictors(2, 2, 10, 20);
        assert!((p.tau_asym - 38.55).abs() < 0.01, "{}", p.tau_asym);
    }

    #[test]
    fn pi_zero_is_mu_squared() {
        let p = crt_predictors(3, 2, 9, 40);
        assert_eq!(p.pi[0].0, 0);
        assert!((p.pi[0].1 - p.mu * p.mu).abs() < 1e-15);
        let total: BigUint = p.n_h.iter().map(|(_, c)| c.clone()).sum();
        assert_eq!(total, gaussian_binomial(9, 2, 3));
    }

    #[test]
    fn inequality_table() {
        assert!(!check_inequality(2, 1));
        assert!(check_inequality(2, 2));
        assert!(check_inequality(3, 1));
        for q in 2..=5 {
            for k in 1..=10 {
                assert_eq!(check_inequality(q, k), (q, k) != (2, 1));
            }
        }
    }
}
