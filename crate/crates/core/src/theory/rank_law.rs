//! Exact rank and corank laws of a uniformly random n x m matrix.
//!
//! Column by column, the rank moves from j to j+1 unless the new column falls
//! in the current span, which happens with probability q^{j-n}.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::Pmf;

fn q_pow_neg(q: u64, e: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(q).pow(e as u32))
}

/// P(rank(A) = m) for a uniform n x m matrix, m <= n, exactly.
pub fn rank_full_prob_exact(n: u64, m: u64, q: u64) -> BigRational {
    assert!(m <= n, "need m <= n");
    (0..m).fold(BigRational::one(), |acc, i| {
        acc * (BigRational::one() - q_pow_neg(q, n - i))
    })
}

/// `prod_{i<m} (1 - q^{i-n})`.
pub fn rank_full_prob(n: u64, m: u64, q: u64) -> f64 {
    assert!(m <= n, "need m <= n");
    let lq = (q as f64).ln();
    (0..m)
        .map(|i| (-((i as f64 - n as f64) * lq).exp()).ln_1p())
        .sum::<f64>()
        .exp()
}

/// Exact distribution of corank(A_m): entry c is P(corank = c), c = 0..=m.
pub fn corank_pmf_exact(n: u64, q: u64, m: u64) -> Vec<BigRational> {
    // dist[r] = P(rank = r)
    let mut dist = vec![BigRational::one()];
    for _ in 0..m {
        let mut next = vec![BigRational::zero(); dist.len() + 1];
        for (r, p) in dist.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let stay = if r as u64 >= n {
                BigRational::one()
            } else {
                q_pow_neg(q, n - r as u64)
            };
            next[r + 1] += p * (BigRational::one() - &stay);
            next[r] += p * stay;
        }
        dist = next;
    }
    (0..=m as usize).map(|c| dist[m as usize - c].clone()).collect()
}

/// Floating-point version of [`corank_pmf_exact`].
pub fn corank_pmf(n: u64, q: u64, m: u64) -> Vec<f64> {
    let mut dist = vec![1.0f64];
    for _ in 0..m {
        let mut next = vec![0.0; dist.len() + 1];
        for (r, &p) in dist.iter().enumerate() {
            let stay = dep_prob(n, q, r as u64);
            next[r + 1] += p * (1.0 - stay);
            next[r] += p * stay;
        }
        dist = next;
    }
    (0..=m as usize).map(|c| dist[m as usize - c]).collect()
}

fn dep_prob(n: u64, q: u64, r: u64) -> f64 {
    if r >= n {
        1.0
    } else {
        (q as f64).powf(r as f64 - n as f64)
    }
}

/// Law of the first step at which the corank reaches `c`, truncated once
/// the remaining mass drops below `1e-12`.
pub fn tau_crk_exact_pmf(n: u64, q: u64, c: u64) -> Pmf {
    assert!(c >= 1, "need c >= 1");
    // alive[r]: P(rank = r and corank < c) after the current step
    let mut alive = vec![1.0f64];
    let mut probs = Vec::new();
    let mut m = 0u64;
    loop {
        m += 1;
        let mut next = vec![0.0; alive.len() + 1];
        let mut hit = 0.0;
        for (r, &p) in alive.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            let stay = dep_prob(n, q, r as u64);
            let crk_before = m - 1 - r as u64;
            if crk_before + 1 == c {
                hit += p * stay;
            } else {
                next[r] += p * stay;
            }
            next[r + 1] += p * (1.0 - stay);
        }
        probs.push(hit);
        alive = next;
        let remaining: f64 = alive.iter().sum();
        if m >= c && remaining < 1e-12 {
            break;
        }
    }
    Pmf::new(1, probs)
}

/// Exact version of [`tau_crk_exact_pmf`] over steps `1..=max_m`.
pub fn tau_crk_pmf_rational(n: u64, q: u64, c: u64, max_m: u64) -> Vec<BigRational> {
    assert!(c >= 1);
    let mut alive = vec![BigRational::one()];
    let mut out = Vec::new();
    for m in 1..=max_m {
        let mut next = vec![BigRational::zero(); alive.len() + 1];
        let mut hit = BigRational::zero();
        for (r, p) in alive.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let stay = if r as u64 >= n {
                BigRational::one()
            } else {
                q_pow_neg(q, n - r as u64)
            };
            if m - 1 - r as u64 + 1 == c {
                hit += p * &stay;
            } else {
                next[r] += p * &stay;
            }
            next[r + 1] += p * (BigRational::one() - stay);
        }
        out.push(hit);
        alive = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::matrix::FqMatrix;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn full_rank_two_by_two() {
        assert_eq!(rank_full_prob_exact(2, 2, 2), rat(3, 8));
        assert!((rank_full_prob(2, 2, 2) - 0.375).abs() < 1e-15);
        assert_eq!(rank_full_prob_exact(5, 0, 3), rat(1, 1));
        assert_eq!(rank_full_prob_exact(3, 1, 2), rat(7, 8));
    }

    /// Enumerates all matrices of the given shape over F_2.
    fn all_binary(n: usize, m: usize) -> impl Iterator<Item = FqMatrix> {
        let f = Field::new(2).unwrap();
        (0u32..1 << (n * m)).map(move |bits| {
            let mut a = FqMatrix::zeros(&f, n, m);
            for i in 0..n {
                for j in 0..m {
                    a.set(i, j, ((bits >> (i * m + j)) & 1) as u16);
                }
            }
            a
        })
    }

    #[test]
    fn exhaustive_enumeration_oracle() {
        let full = all_binary(2, 2).filter(|a| a.rank() == 2).count();
        assert_eq!(full, 6);
        let mut counts = [0i64; 4];
        for a in all_binary(2, 3) {
            counts[3 - a.rank()] += 1;
        }
        let pmf = corank_pmf_exact(2, 2, 3);
        for c in 0..=3 {
            assert_eq!(pmf[c], rat(counts[c], 64), "corank {c}");
        }
    }

    #[test]
    fn corank_pmf_consistency() {
        for q in [2u64, 3] {
            for n in 0..=12 {
                for m in 0..=n {
                    let pmf = corank_pmf_exact(n, q, m);
                    assert_eq!(pmf[0], rank_full_prob_exact(n, m, q));
                    let total: BigRational = pmf.iter().cloned().sum();
                    assert!(total.is_one());
                }
            }
        }
        let f = corank_pmf(20, 2, 30);
        assert!((f.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tau_pmf_basics() {
        let exact = tau_crk_pmf_rational(2, 2, 1, 5);
        assert_eq!(exact[0], rat(1, 4));
        let pmf = tau_crk_exact_pmf(2, 2, 1);
        assert!((pmf.get(1) - 0.25).abs() < 1e-15);
        for (i, p) in exact.iter().enumerate() {
            let e = num_traits::ToPrimitive::to_f64(p).unwrap();
            assert!((pmf.get(i as i64 + 1) - e).abs() < 1e-15);
        }
        for c in 1..4 {
            let pmf = tau_crk_exact_pmf(10, 3, c);
            assert!((pmf.total() - 1.0).abs() < 1e-9);
            for m in 1..c as i64 {
                assert_eq!(pmf.get(m), 0.0);
            }
            assert!(pmf.get(c as i64) > 0.0);
        }
    }
}
