//! Balls-into-bins bounds and the projective-geometry window.

use num_traits::ToPrimitive;

use super::gbinom::q_integer;

/// Upper bounds for `b` balls in `k` bins with `lambda = b/k`:
/// `P(all bins hit) <= 2 (1 - e^{-lambda})^k` and
/// `P(some bin empty) <= 2k e^{-lambda}`. Not clamped to 1.
pub fn poisson_bounds(balls: u64, bins: u64) -> (f64, f64) {
    assert!(bins >= 1);
    let k = bins as f64;
    let lambda = balls as f64 / k;
    let all = 2.0 * (k * (-(-lambda).exp()).ln_1p()).exp();
    let missed = 2.0 * k * (-lambda).exp();
    (all, missed)
}

/// Offset over n by which PG(r-1,q) is a.a.s. a minor:
/// `zeta log zeta + omega_factor * zeta` with `zeta = [r]_q`.
pub fn pg_tau_window(q: u64, r: u64, omega_factor: f64) -> f64 {
    assert!(r >= 1);
    let zeta = q_integer(r, q).to_f64().unwrap();
    zeta * zeta.ln() + omega_factor * zeta
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds() {
        assert_eq!(poisson_bounds(0, 10).0, 0.0);
        assert!((poisson_bounds(0, 10).1 - 20.0).abs() < 1e-12);
        assert!(poisson_bounds(5, 1000).1 > 1.0);
    }

    #[test]
    fn window() {
        assert!((pg_tau_window(2, 1, 2.5) - 2.5).abs() < 1e-15);
        assert!((pg_tau_window(2, 3, 0.0) - 7.0 * 7f64.ln()).abs() < 1e-12);
        assert!((pg_tau_window(2, 3, 0.0) - 13.62).abs() < 0.01);
    }
}
