//! Circuit counts and the threshold function g_a.

use statrs::function::factorial::ln_binomial;
use statrs::function::gamma::ln_gamma;

/// `mu_k = C(m,k) (q-1)^k q^{-n}`, evaluated in log space.
pub fn mu_k(m: u64, k: u64, q: u64, n: u64) -> f64 {
    assert!(k >= 1 && k <= m, "need 1 <= k <= m");
    let qf = q as f64;
    (ln_binomial(m, k) + k as f64 * (qf - 1.0).ln() - n as f64 * qf.ln()).exp()
}

/// Exact expected number of k-circuits in a uniform n x m matrix:
/// `C(m,k) (q-1)^{k-1} q^{-n} prod_{i=0}^{k-2} (1 - q^{i-n})`.
///
/// A k-set is a circuit when its first k-1 columns are independent and the
/// last is a combination of them with every coefficient nonzero.
pub fn expected_k_circuits_exact(m: u64, k: u64, q: u64, n: u64) -> f64 {
    assert!(k >= 1 && k <= m);
    if k > n + 1 {
        return 0.0;
    }
    let qf = q as f64;
    let indep: f64 = (0..k - 1)
        .map(|i| (-qf.powf(i as f64 - n as f64)).ln_1p())
        .sum();
    (ln_binomial(m, k) + (k - 1) as f64 * (qf - 1.0).ln() - n as f64 * qf.ln() + indep).exp()
}

/// `exp(-(q-1)^{k-1} / k! * m^k / q^n)`.
pub fn no_kcircuit_prob_approx(m: u64, k: u64, q: u64, n: u64) -> f64 {
    let qf = q as f64;
    let ln_rate = (k as f64 - 1.0) * (qf - 1.0).ln() - ln_gamma(k as f64 + 1.0)
        + k as f64 * (m as f64).ln()
        - n as f64 * qf.ln();
    (-ln_rate.exp()).exp()
}

fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `g_a(y) = y log y + a log(q-1) - a log a - (y-a) log(y-a) - log q` for `y >= a`.
pub fn g_a(q: u64, a: f64, y: f64) -> f64 {
    let qf = q as f64;
    // y log y - (y-a) log(y-a), without cancellation for y >> a
    let diff = if y > a {
        a * y.ln() - (y - a) * (-a / y).ln_1p()
    } else {
        xlogx(y)
    };
    diff + a * (qf - 1.0).ln() - xlogx(a) - qf.ln()
}

/// The unique root of `g_a` on `(a, inf)`, by bisection to `1e-12`.
pub fn b_of_a(q: u64, a: f64) -> f64 {
    assert!(a > 0.0 && a <= 1.0, "need 0 < a <= 1");
    assert!(g_a(q, a, a) < 0.0);
    let mut lo = a;
    let mut hi = (2.0 * a).max(1.0);
    while g_a(q, a, hi) <= 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    // relative tolerance: b(a) grows like exp(ln(q) / a) as a -> 0
    for _ in 0..200 {
        if hi - lo <= 1e-12 * hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if g_a(q, a, mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `b'(a)` from implicit differentiation of `g_a(b(a)) = 0`:
/// `b' (log b - log(b-a)) = log a - log(q-1) - log(b-a)`.
pub fn b_prime(q: u64, a: f64) -> f64 {
    let b = b_of_a(q, a);
    let qf = q as f64;
    (a.ln() - (qf - 1.0).ln() - (b - a).ln()) / -(-a / b).ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mu_values() {
        assert!((mu_k(4, 2, 2, 3) - 0.75).abs() < 1e-12);
        for m in 1..8 {
            let expect = 2f64.powi(m as i32) * 3f64.powi(-5);
            assert!((mu_k(m, m, 3, 5) - expect).abs() < 1e-12 * expect.max(1.0));
        }
    }

    #[test]
    fn exact_two_circuit_expectation() {
        assert!((expected_k_circuits_exact(4, 2, 2, 3) - 0.65625).abs() < 1e-12);
        assert!((expected_k_circuits_exact(5, 1, 3, 2) - 5.0 / 9.0).abs() < 1e-12);
    }

    #[test]
    fn approximation_limits() {
        assert!((no_kcircuit_prob_approx(2, 1, 2, 60) - 1.0).abs() < 1e-15);
        assert!((no_kcircuit_prob_approx(1024, 1, 2, 10) - (-1f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn g_continuity_and_sign() {
        for q in [2u64, 3, 5, 16] {
            for i in 1..=100 {
                let a = i as f64 / 100.0;
                assert!(g_a(q, a, a) < 0.0);
                assert!((g_a(q, a, a + 1e-12) - g_a(q, a, a)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn b_at_special_points() {
        assert!((b_of_a(2, 0.5) - 1.0).abs() < 1e-9);
        assert!((b_of_a(3, 2.0 / 3.0) - 1.0).abs() < 1e-9);
        let b1 = b_of_a(2, 1.0);
        assert!(b1 > 1.29 && b1 < 1.3, "{b1}");
        let small = b_of_a(2, 0.01);
        assert!(small > 1e20 && g_a(2, 0.01, small).abs() < 1e-10, "{small}");
        for a in [0.1, 0.37, 0.9] {
            assert!(g_a(2, a, b_of_a(2, a)).abs() < 1e-10);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for a in [0.3, 0.7] {
            let h = 1e-5;
            let fd = (b_of_a(2, a + h) - b_of_a(2, a - h)) / (2.0 * h);
            let bp = b_prime(2, a);
            assert!((fd - bp).abs() <= 1e-4 * bp.abs(), "a={a}: {fd} vs {bp}");
        }
        assert!(b_prime(2, 0.5).abs() < 1e-6);
    }
}
