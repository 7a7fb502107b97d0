//! Gaussian binomial coefficients and subspace intersection counts.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

fn pow_big(q: u64, e: u64) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

/// Number of k-dimensional subspaces of F_q^n; zero when `k > n`.
pub fn gaussian_binomial(n: u64, k: u64, q: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= pow_big(q, n - i) - 1u32;
        den *= pow_big(q, k - i) - 1u32;
    }
    num / den
}

/// `[n]_q = (q^n - 1) / (q - 1)`, the number of points of PG(n-1, q).
pub fn q_integer(n: u64, q: u64) -> BigUint {
    gaussian_binomial(n, 1, q)
}

/// Floating-point Gaussian binomial via logarithms of the product terms.
pub fn gaussian_binomial_f64(n: u64, k: u64, q: u64) -> f64 {
    ln_gaussian_binomial(n, k, q).exp()
}

pub fn ln_gaussian_binomial(n: u64, k: u64, q: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    let lq = (q as f64).ln();
    let k = k.min(n - k);
    // log((q^a - 1)) = a log q + log1p(-q^-a)
    let term = |a: u64| a as f64 * lq + (-(q as f64).powi(-(a as i32))).ln_1p();
    (0..k).map(|i| term(n - i) - term(k - i)).sum()
}

/// N(n,k,j,l): given a fixed k-dim subspace S of F_q^n, the number of j-dim
/// subspaces meeting S in exactly an l-dim subspace. Zero when infeasible.
pub fn subspace_count(n: u64, k: u64, j: u64, ell: u64, q: u64) -> BigUint {
    if k > n || j > n || ell > k || ell > j || j - ell > n - k {
        return BigUint::zero();
    }
    pow_big(q, (k - ell) * (j - ell))
        * gaussian_binomial(k, ell, q)
        * gaussian_binomial(n - k, j - ell, q)
}

/// `|gbinom(N,k) / (q^{(N-M)k} gbinom(M,k)) - 1|`, evaluated exactly and
/// converted at the end.
pub fn gbinom_asymptotic_check(big_n: u64, big_m: u64, k: u64, q: u64) -> f64 {
    assert!(big_n >= big_m && big_m >= k, "need N >= M >= k");
    let num = gaussian_binomial(big_n, k, q);
    let den = pow_big(q, (big_n - big_m) * k) * gaussian_binomial(big_m, k, q);
    // num >= den always; compute (num - den) / den
    let diff = &num - &den;
    ratio_f64(&diff, &den)
}

pub(crate) fn ratio_f64(a: &BigUint, b: &BigUint) -> f64 {
    let shift = b.bits().saturating_sub(60).max(a.bits().saturating_sub(60));
    let a = (a >> shift).to_f64().unwrap();
    let b = (b >> shift).to_f64().unwrap();
    a / b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(gaussian_binomial(4, 2, 2), BigUint::from(35u32));
        assert_eq!(gaussian_binomial(7, 0, 5), BigUint::one());
        assert_eq!(gaussian_binomial(3, 1, 2), BigUint::from(7u32));
        assert_eq!(gaussian_binomial(2, 3, 2), BigUint::zero());
        assert_eq!(q_integer(3, 3), BigUint::from(13u32));
    }

    #[test]
    fn symmetric() {
        for q in [2, 3, 4] {
            for n in 0..9 {
                for k in 0..=n {
                    assert_eq!(gaussian_binomial(n, k, q), gaussian_binomial(n, n - k, q));
                }
            }
        }
    }

    #[test]
    fn float_path_agrees() {
        for q in [2u64, 3, 7] {
            for n in 0..20 {
                for k in 0..=n {
                    let exact = gaussian_binomial(n, k, q).to_f64().unwrap();
                    let approx = gaussian_binomial_f64(n, k, q);
                    assert!((exact - approx).abs() <= 1e-12 * exact, "{n} {k} {q}");
                }
            }
        }
    }

    #[test]
    fn intersection_counts() {
        assert_eq!(subspace_count(4, 2, 2, 1, 2), BigUint::from(18u32));
        assert_eq!(subspace_count(4, 2, 2, 2, 2), BigUint::one());
        assert_eq!(subspace_count(4, 2, 2, 3, 2), BigUint::zero());
        for q in [2, 3] {
            for n in 0..=5 {
                for k in 0..=n {
                    for j in 0..=n {
                        let total: BigUint =
                            (0..=j.min(k)).map(|l| subspace_count(n, k, j, l, q)).sum();
                        assert_eq!(total, gaussian_binomial(n, j, q));
                    }
                }
            }
        }
    }

    #[test]
    fn asymptotic_error() {
        assert_eq!(gbinom_asymptotic_check(9, 9, 3, 2), 0.0);
        let e = gbinom_asymptotic_check(12, 8, 3, 2);
        assert!(e <= 4.0 * 2f64.powi(-5), "{e}");
        let mut last = f64::INFINITY;
        for m in 4..14 {
            let e = gbinom_asymptotic_check(m + 3, m, 3, 2);
            assert!(e <= 4.0 * 2f64.powi(3 - m as i32));
            assert!(e < last);
            last = e;
        }
    }
}
