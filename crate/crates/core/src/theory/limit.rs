//! Limiting law of the corank hitting time, shifted by n.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `prod_{j >= j0} (1 - q^{-j})` for `j0 >= 1`, stopped once `q^{-j} < 1e-16`.
pub fn tail_product(q: u64, j0: i64) -> f64 {
    assert!(j0 >= 1, "product from j0 < 1 contains a zero or negative factor");
    let qf = q as f64;
    let mut acc = 1.0f64;
    let mut j = j0;
    loop {
        let t = qf.powi(-(j as i32));
        if t < 1e-16 {
            return acc;
        }
        acc *= 1.0 - t;
        j += 1;
    }
}

/// `gamma_{q,c} = prod_{j >= c} (1 - q^{-j})`.
pub fn gamma_qc(q: u64, c: u64) -> f64 {
    assert!(c >= 1);
    tail_product(q, c as i64)
}

fn q_pow_neg(q: u64, j: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(q).pow(j as u32))
}

/// Coefficients (constant term first) of `prod_{j=0}^{d-1} (1 - z q^{-j})`,
/// computed by exact convolution.
pub fn alpha_polynomial(q: u64, d: u64) -> Vec<BigRational> {
    let mut poly = vec![BigRational::one()];
    for j in 0..d {
        let r = q_pow_neg(q, j);
        let mut next = vec![BigRational::zero(); poly.len() + 1];
        for (i, a) in poly.iter().enumerate() {
            next[i] += a;
            next[i + 1] -= a * &r;
        }
        poly = next;
    }
    poly
}

/// `alpha_{c,k,i}` by the signed sum over index sets
/// `0 <= j_1 < ... < j_{c-1-i} <= c-k-1`. Exponential; kept as a cross-check.
pub fn alpha_signed_sum(q: u64, c: i64, k: i64, i: i64) -> BigRational {
    let size = c - 1 - i;
    let top = c - k - 1;
    if size < 0 {
        return BigRational::zero();
    }
    let size = size as usize;
    let mut total = BigRational::zero();
    let universe: Vec<u64> = (0..=top.max(-1)).map(|x| x as u64).collect();
    let mut idx: Vec<usize> = (0..size).collect();
    if size > universe.len() {
        return total;
    }
    loop {
        let s: u64 = idx.iter().map(|&t| universe[t]).sum();
        total += q_pow_neg(q, s);
        // next combination
        let mut p = size;
        let mut advanced = false;
        while p > 0 {
            p -= 1;
            if idx[p] < universe.len() - size + p {
                idx[p] += 1;
                for t in p + 1..size {
                    idx[t] = idx[t - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    if size % 2 == 1 {
        -total
    } else {
        total
    }
}

/// `alpha_{c,k,i} = [z^{c-1-i}] prod_{j=0}^{c-k-1} (1 - z q^{-j})`.
pub fn alpha(q: u64, c: i64, k: i64, i: i64) -> BigRational {
    let poly = alpha_polynomial(q, (c - k).max(0) as u64);
    let deg = c - 1 - i;
    if deg < 0 {
        return BigRational::zero();
    }
    poly.get(deg as usize).cloned().unwrap_or_else(BigRational::zero)
}

/// Limit of `P(tau - n = k)` for the corank-c hitting time; zero for `k > c`.
///
/// `C_{c,k} = beta q^{k-c} (alpha_0 + sum_{i=1}^{c-1} alpha_i / prod_{j=1}^{i} (1 - q^{-j}))`
/// with `beta = prod_{j >= c+1-k} (1 - q^{-j})`.
pub fn limit_cck(q: u64, c: u64, k: i64) -> f64 {
    assert!(c >= 1);
    let c = c as i64;
    if k > c {
        return 0.0;
    }
    let poly = alpha_polynomial(q, (c - k) as u64);
    let coeff = |i: i64| -> f64 {
        let deg = c - 1 - i;
        poly.get(deg as usize)
            .map(|r| r.to_f64().unwrap())
            .unwrap_or(0.0)
    };
    let qf = q as f64;
    let mut inner = coeff(0);
    let mut denom = 1.0;
    for i in 1..c {
        denom *= 1.0 - qf.powi(-(i as i32));
        inner += coeff(i) / denom;
    }
    tail_product(q, c + 1 - k) * qf.powi((k - c) as i32) * inner
}

/// Whether the exact alpha coefficients match the signed-sum form.
pub fn alpha_forms_agree(q: u64, c: i64, k: i64) -> bool {
    (0..c).all(|i| {
        let a = alpha(q, c, k, i);
        let b = alpha_signed_sum(q, c, k, i);
        (a - b).abs().is_zero()
    })
}
