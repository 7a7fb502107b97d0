//! Brute-force oracle suites. Each suite compares a fast path against an
//! independent slow computation on small inputs.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::field::{prime_power, Elem, Field};
use crate::matrix::{random_uniform_matrix, FqMatrix};
use crate::matroid::{dual_rank, Budget, Extended, RepMatroid};
use crate::rref::RrefState;
use crate::subspace::{enumerate_subspaces, SubspaceHandle};
use crate::theory::{
    corank_pmf_exact, gamma_qc, gaussian_binomial, limit_cck, rank_full_prob_exact,
    subspace_count, tau_crk_exact_pmf, Pmf,
};

/// Keeps at most this many failure messages per suite.
const MAX_MESSAGES: usize = 5;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub cases: u64,
    pub failed: u64,
    pub messages: Vec<String>,
}

impl SuiteResult {
    fn new(name: &'static str) -> SuiteResult {
        SuiteResult {
            name,
            cases: 0,
            failed: 0,
            messages: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.messages.len() < MAX_MESSAGES {
                self.messages.push(msg());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone)]
pub struct SelfcheckOptions {
    /// Largest n for the subspace-count suites.
    pub max_n: usize,
    pub seed: u64,
    /// Test hook: run the field suite on tables with two entries swapped.
    pub corrupt_field_table: bool,
}

impl Default for SelfcheckOptions {
    fn default() -> SelfcheckOptions {
        SelfcheckOptions {
            max_n: 5,
            seed: 1,
            corrupt_field_table: false,
        }
    }
}

pub fn run_all(opts: &SelfcheckOptions) -> Vec<SuiteResult> {
    vec![
        field_axioms(opts),
        rank_identities(opts),
        subspace_enumeration(),
        subspace_counts(opts),
        rank_law(),
        connectivity_identities(opts),
        limit_law(),
    ]
}

/// Field axioms for every q <= 64.
pub fn field_axioms(opts: &SelfcheckOptions) -> SuiteResult {
    let mut s = SuiteResult::new("field-axioms");
    for q in 2..=64u32 {
        if prime_power(q).is_none() {
            continue;
        }
        let mut f = Field::new(q).expect("prime power");
        if opts.corrupt_field_table {
            f = f.corrupted_copy();
        }
        let res = f.check_axioms();
        s.check(res.is_ok(), || format!("q={q}: {}", res.unwrap_err()));
    }
    s
}

/// Every vector `A x` over all `x`, as a set; its size is `q^rank`.
fn span_size(a: &FqMatrix) -> (u64, u64) {
    let f = a.field();
    let q = f.q() as u64;
    let m = a.m();
    let mut seen = std::collections::HashSet::new();
    let mut kernel = 0u64;
    let mut x = vec![0 as Elem; m];
    for idx in 0..q.pow(m as u32) {
        let mut t = idx;
        for xi in x.iter_mut() {
            *xi = (t % q) as Elem;
            t /= q;
        }
        let y = a.mul_vec(&x);
        if y.iter().all(|&v| v == 0) {
            kernel += 1;
        }
        seen.insert(y);
    }
    (seen.len() as u64, kernel)
}

fn check_matrix(s: &mut SuiteResult, a: &FqMatrix) {
    let q = a.field().q() as u64;
    let m = a.m();
    let r = a.rank();
    let (span, kernel) = span_size(a);
    s.check(span == q.pow(r as u32), || {
        format!("rank {r} but span size {span}:\n{}", a.to_text())
    });
    s.check(kernel == q.pow((m - r) as u32), || {
        format!("kernel size {kernel} with rank {r}:\n{}", a.to_text())
    });
    let mut rref = RrefState::new(a.field(), a.n(), true);
    for c in a.columns() {
        rref.insert(c);
    }
    s.check(rref.rank() == r, || format!("incremental rank {} vs {r}", rref.rank()));
    let kb = a.kernel_basis();
    let ok = kb.len() == m - r
        && kb.iter().all(|x| a.mul_vec(x).iter().all(|&v| v == 0))
        && FqMatrix::from_columns(a.field(), m, &kb).map_or(m == r, |k| k.rank() == m - r);
    s.check(ok, || format!("bad kernel basis:\n{}", a.to_text()));
    let inc = rref.kernel_basis();
    let ok = inc.len() == m - r && inc.iter().all(|x| a.mul_vec(x).iter().all(|&v| v == 0));
    s.check(ok, || format!("bad incremental kernel:\n{}", a.to_text()));
    if m == 0 {
        return;
    }
    // r_{M/X}(S) = r(S u X) - r(X) and r_{M\X}(S) = r(S) with X = {0}
    let mat = RepMatroid::new(a.clone());
    let con = mat.contract(&[0]);
    let del = mat.delete(&[0]);
    let rx = mat.rank_of_subset(&[0]);
    for mask in 0u64..(1 << (m - 1)) {
        let sub: Vec<usize> = (0..m - 1).filter(|i| mask >> i & 1 == 1).collect();
        let orig: Vec<usize> = sub.iter().map(|i| i + 1).collect();
        let mut with_x = orig.clone();
        with_x.push(0);
        let rc = con.rank_of_subset(&sub);
        let want = mat.rank_of_subset(&with_x) - rx;
        s.check(rc == want, || {
            format!("contraction rank {rc} vs {want} on {orig:?}:\n{}", a.to_text())
        });
        let rd = del.rank_of_subset(&sub);
        let want = mat.rank_of_subset(&orig);
        s.check(rd == want, || format!("deletion rank {rd} vs {want}"));
    }
}

/// Rank, kernel, contraction and deletion against span enumeration: every
/// F_2 matrix with n <= 3, m <= 5, plus random F_3 matrices.
pub fn rank_identities(opts: &SelfcheckOptions) -> SuiteResult {
    let mut s = SuiteResult::new("rank-kernel-minor");
    let f2 = Field::new(2).unwrap();
    for n in 1..=3usize {
        for m in 0..=5usize {
            for bits in 0u64..(1 << (n * m)) {
                let mut a = FqMatrix::zeros(&f2, n, m);
                for i in 0..n {
                    for j in 0..m {
                        a.set(i, j, (bits >> (j * n + i) & 1) as Elem);
                    }
                }
                check_matrix(&mut s, &a);
            }
        }
    }
    let f3 = Field::new(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for t in 0..300usize {
        let n = 1 + t % 4;
        let m = t % 6;
        check_matrix(&mut s, &random_uniform_matrix(n, m, &f3, &mut rng));
    }
    s
}

/// Number of enumerated k-subspaces equals the Gaussian binomial.
pub fn subspace_enumeration() -> SuiteResult {
    let mut s = SuiteResult::new("subspace-enumeration");
    for q in [2u32, 3] {
        let f = Field::new(q).unwrap();
        for n in 1..=4usize {
            for k in 0..=n {
                let count = enumerate_subspaces(n, k, &f, u128::MAX)
                    .map(|it| it.count() as u64)
                    .unwrap_or(0);
                let want = gaussian_binomial(n as u64, k as u64, q as u64);
                s.check(BigUint::from(count) == want, || {
                    format!("q={q} n={n} k={k}: enumerated {count}, formula {want}")
                });
            }
        }
    }
    s
}

/// N(n,k,j,l) by brute force against a coordinate subspace, and the
/// identity `sum_l N(n,k,j,l) = gbinom(n,j)`.
pub fn subspace_counts(opts: &SelfcheckOptions) -> SuiteResult {
    let mut s = SuiteResult::new("subspace-count");
    for q in [2u32, 3] {
        let f = Field::new(q).unwrap();
        let qq = q as u64;
        let max_n = if q == 2 { opts.max_n } else { opts.max_n.min(4) };
        for n in 1..=max_n {
            let nu = n as u64;
            for k in 0..=n {
                // S = span of the first k unit vectors
                let unit: Vec<Vec<Elem>> = (0..k)
                    .map(|i| {
                        let mut v = vec![0 as Elem; n];
                        v[i] = 1;
                        v
                    })
                    .collect();
                for j in 0..=n {
                    let mut hist = vec![0u64; j.min(k) + 1];
                    for sub in enumerate_subspaces(n, j, &f, u128::MAX).expect("k <= n") {
                        let mut all = unit.clone();
                        all.extend(sub.rows().iter().cloned());
                        let sum_dim = SubspaceHandle::span(&f, n, &all).dim();
                        hist[k + j - sum_dim] += 1;
                    }
                    let mut total = BigUint::zero();
                    for (l, &c) in hist.iter().enumerate() {
                        let want = subspace_count(nu, k as u64, j as u64, l as u64, qq);
                        s.check(BigUint::from(c) == want, || {
                            format!("q={q} n={n} k={k} j={j} l={l}: brute {c}, formula {want}")
                        });
                        total += want;
                    }
                    let g = gaussian_binomial(nu, j as u64, qq);
                    s.check(total == g, || {
                        format!("q={q} n={n} k={k} j={j}: partition sum {total} vs {g}")
                    });
                }
            }
        }
    }
    s
}

/// Exact corank law against enumeration of all small matrices.
pub fn rank_law() -> SuiteResult {
    let mut s = SuiteResult::new("rank-law");
    s.check(
        rank_full_prob_exact(2, 2, 2) == BigRational::new(3.into(), 8.into()),
        || "P(full rank) at (2,2,2) is not 3/8".into(),
    );
    for (n, m, q) in [(2usize, 2usize, 2u32), (2, 3, 2), (3, 3, 2), (3, 2, 3), (2, 3, 3), (2, 2, 4)] {
        let f = Field::new(q).unwrap();
        let cells = n * m;
        let total = (q as u64).pow(cells as u32);
        let mut counts = vec![0u64; m + 1];
        for idx in 0..total {
            let mut a = FqMatrix::zeros(&f, n, m);
            let mut t = idx;
            for c in 0..cells {
                a.set(c % n, c / n, (t % q as u64) as Elem);
                t /= q as u64;
            }
            counts[m - a.rank()] += 1;
        }
        let exact = corank_pmf_exact(n as u64, q as u64, m as u64);
        for (c, &cnt) in counts.iter().enumerate() {
            let want = exact.get(c).cloned().unwrap_or_else(BigRational::zero);
            let got = BigRational::new((cnt as i64).into(), (total as i64).into());
            s.check(got == want, || {
                format!("(n,m,q)=({n},{m},{q}) corank {c}: enumerated {got}, exact {want}")
            });
        }
        let sum: BigRational = exact.iter().cloned().fold(BigRational::zero(), |a, b| a + b);
        s.check(sum.is_one(), || format!("corank law at ({n},{m},{q}) sums to {sum}"));
    }
    s
}

/// Connectivity identities: `lambda` agrees with its dual form on every
/// bipartition, and a few closed-form values.
pub fn connectivity_identities(opts: &SelfcheckOptions) -> SuiteResult {
    let mut s = SuiteResult::new("connectivity");
    let b = Budget::default();
    let f2 = Field::new(2).unwrap();
    let pg = RepMatroid::projective_geometry(&f2, 2);
    let kappa = pg.vertical_connectivity(&b).map(|c| c.value);
    s.check(matches!(kappa, Ok(Extended::Infinite)), || {
        format!("kappa(PG(1,2)) = {kappa:?}, expected infinite")
    });
    let free = RepMatroid::free(&f2, 3);
    let t = free.tutte_connectivity(&b).map(|c| c.value);
    s.check(matches!(t, Ok(Extended::Finite(1))), || {
        format!("Tutte connectivity of a free matroid = {t:?}")
    });
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5eed);
    for i in 0..200usize {
        let q = [2u32, 3][i % 2];
        let f = Field::new(q).unwrap();
        let (n, m) = (1 + i % 4, 2 + i % 7);
        let mat = RepMatroid::new(random_uniform_matrix(n, m, &f, &mut rng));
        let table = match mat.rank_table(&b) {
            Ok(t) => t,
            Err(e) => {
                s.check(false, || e.to_string());
                continue;
            }
        };
        let full = table.full();
        let rstar = dual_rank(&table, full);
        for x in 0..=full {
            let y = full ^ x;
            let lam = table.rank(x) + table.rank(y) - table.rank(full);
            let lam_dual = dual_rank(&table, x) + dual_rank(&table, y) - rstar;
            s.check(lam == lam_dual, || {
                format!("lambda {lam} vs dual {lam_dual} at {x:#b}")
            });
        }
        s.check(rstar + table.rank(full) == m, || "r + r* != |E|".into());
        // a vertical k-separation is also a Tutte k-separation
        let t = mat.tutte_connectivity(&b).map(|c| c.value);
        let k = mat.vertical_connectivity(&b).map(|c| c.value);
        if let (Ok(t), Ok(k)) = (t, k) {
            s.check(t <= k, || format!("t = {t} exceeds kappa = {k}"));
        }
    }
    s
}

/// Exact corank DP at n = 60 against the limit law, and `C_{c,c} = gamma_{q,c}`.
pub fn limit_law() -> SuiteResult {
    let mut s = SuiteResult::new("dp-vs-limit");
    for c in [1u64, 2] {
        let d = dp_limit_distance(60, 2, c);
        s.check(d <= 0.01, || format!("c={c}: sup distance {d}"));
    }
    for q in [2u64, 3, 4] {
        for c in 1..=3u64 {
            let (a, g) = (limit_cck(q, c, c as i64), gamma_qc(q, c));
            s.check((a - g).abs() <= 1e-12, || {
                format!("C_(c,c) = {a} vs gamma = {g} at q={q} c={c}")
            });
        }
    }
    s
}

/// The limit law `k -> C_{c,k}` tabulated where it has mass above `1e-15`.
pub fn limit_pmf(q: u64, c: u64) -> Pmf {
    let hi = c as i64;
    let mut lo = hi;
    while limit_cck(q, c, lo - 1) > 1e-15 && lo > hi - 200 {
        lo -= 1;
    }
    Pmf::from_fn(lo, hi, |k| limit_cck(q, c, k))
}

/// Sup-distance between the exact law of `tau_crk=c - n` and the limit law.
pub fn dp_limit_distance(n: u64, q: u64, c: u64) -> f64 {
    let dp = tau_crk_exact_pmf(n, q, c).shifted(-(n as i64));
    dp.sup_distance(&limit_pmf(q, c))
}

/// True if every suite passed.
pub fn all_passed(results: &[SuiteResult]) -> bool {
    results.iter().all(SuiteResult::passed)
}
