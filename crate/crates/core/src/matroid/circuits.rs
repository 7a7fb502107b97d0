use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::{FqMatrix, FqVector};

use super::{indices_of, Budget, Extended, RankTable, RepMatroid};

/// Rank oracle for column subsets given as bitmasks (m <= 64).
pub(crate) struct ColumnRanker {
    field: Field,
    packed: Option<Vec<u64>>,
    cols: Vec<FqVector>,
}

impl ColumnRanker {
    pub(crate) fn new(a: &FqMatrix) -> ColumnRanker {
        let packed = (a.field().is_binary() && a.n() <= 64).then(|| {
            a.columns()
                .map(|c| {
                    c.iter()
                        .enumerate()
                        .fold(0u64, |acc, (i, &x)| acc | ((x as u64) << i))
                })
                .collect()
        });
        ColumnRanker {
            field: a.field().clone(),
            packed,
            cols: a.columns().map(|c| c.to_vec()).collect(),
        }
    }

    pub(crate) fn rank(&self, mask: u64) -> usize {
        match &self.packed {
            Some(p) => {
                let mut basis: Vec<u64> = Vec::new();
                for j in indices_of(mask) {
                    let mut v = p[j];
                    for &b in &basis {
                        if v & (b & b.wrapping_neg()) != 0 {
                            v ^= b;
                        }
                    }
                    if v != 0 {
                        basis.push(v);
                    }
                }
                basis.len()
            }
            None => {
                let f = &self.field;
                let mut basis: Vec<(usize, Vec<Elem>)> = Vec::new();
                for j in indices_of(mask) {
                    let mut v = self.cols[j].clone();
                    for (p, b) in &basis {
                        let a = v[*p];
                        if a != 0 {
                            f.axpy(&mut v, f.neg(a), b);
                        }
                    }
                    if let Some(p) = v.iter().position(|&x| x != 0) {
                        let inv = f.inv(v[p]).unwrap();
                        f.scale(&mut v, inv);
                        basis.push((p, v));
                    }
                }
                basis.len()
            }
        }
    }

    /// A dependent support is a circuit iff its rank is one less than its size.
    pub(crate) fn is_circuit_support(&self, mask: u64) -> bool {
        self.rank(mask) + 1 == mask.count_ones() as usize
    }
}

fn support_mask(v: &[Elem]) -> u64 {
    v.iter()
        .enumerate()
        .filter(|(_, &x)| x != 0)
        .fold(0u64, |acc, (i, _)| acc | (1 << i))
}

/// Calls `visit` with the support of one representative of every
/// one-dimensional subspace of the span of `kernel` (vectors of length <= 64).
/// `visit` returns false to stop early.
pub(crate) fn sweep_kernel_supports(
    field: &Field,
    kernel: &[FqVector],
    mut visit: impl FnMut(u64) -> bool,
) {
    let d = kernel.len();
    if d == 0 {
        return;
    }
    if field.is_binary() {
        let masks: Vec<u64> = kernel.iter().map(|k| support_mask(k)).collect();
        // Gray code walk over all nonzero combinations
        let mut cur = 0u64;
        for i in 1u64..(1 << d) {
            cur ^= masks[i.trailing_zeros() as usize];
            if !visit(cur) {
                return;
            }
        }
        return;
    }
    let q = field.q() as u64;
    let len = kernel[0].len();
    // coefficient tuples whose first nonzero entry is 1
    for lead in 0..d {
        let tail = d - lead - 1;
        let mut coeffs = vec![0 as Elem; tail];
        let mut base = kernel[lead].clone();
        base.resize(len, 0);
        loop {
            let mut v = base.clone();
            for (t, &c) in coeffs.iter().enumerate() {
                field.axpy(&mut v, c, &kernel[lead + 1 + t]);
            }
            if !visit(support_mask(&v)) {
                return;
            }
            let mut i = 0;
            loop {
                if i == tail {
                    break;
                }
                coeffs[i] += 1;
                if (coeffs[i] as u64) < q {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
            if i == tail {
                break;
            }
        }
    }
}

fn sweep_fits(m: &RepMatroid, budget: &Budget) -> bool {
    let d = m.corank() as u32;
    let q = m.field().q() as u128;
    m.size() <= 64 && q.checked_pow(d).is_some_and(|s| s <= budget.kernel_sweep)
}

impl RepMatroid {
    /// Length of a shortest circuit; `Infinite` for a free matroid.
    pub fn girth(&self, budget: &Budget) -> Result<Extended> {
        if self.corank() == 0 {
            return Ok(Extended::Infinite);
        }
        if self.has_loop() {
            return Ok(Extended::Finite(1));
        }
        if sweep_fits(self, budget) {
            let kernel = self.matrix().kernel_basis();
            let mut best = usize::MAX;
            sweep_kernel_supports(self.field(), &kernel, |s| {
                best = best.min(s.count_ones() as usize);
                true
            });
            return Ok(Extended::Finite(best));
        }
        if self.size() <= budget.subset_max_m {
            let t = RankTable::build(self, budget)?;
            let best = (1u64..=t.full())
                .filter(|&s| t.rank(s) < s.count_ones() as usize)
                .map(|s| s.count_ones() as usize)
                .min()
                .unwrap();
            return Ok(Extended::Finite(best));
        }
        Err(Error::budget(
            "girth",
            (self.field().q() as u128).saturating_pow(self.corank() as u32),
            budget.kernel_sweep,
        ))
    }

    /// Number of circuits of each length, by kernel sweep when
    /// `q^{corank}` fits the budget, else by subset search.
    pub fn circuit_spectrum(&self, budget: &Budget) -> Result<BTreeMap<usize, u64>> {
        if sweep_fits(self, budget) {
            Ok(self.circuit_spectrum_sweep())
        } else if self.size() <= budget.subset_max_m {
            self.circuit_spectrum_subsets(budget)
        } else {
            Err(Error::budget(
                "circuit spectrum",
                (self.field().q() as u128).saturating_pow(self.corank() as u32),
                budget.kernel_sweep,
            ))
        }
    }

    /// Circuit spectrum from supports of projective kernel vectors.
    pub fn circuit_spectrum_sweep(&self) -> BTreeMap<usize, u64> {
        assert!(self.size() <= 64);
        let ranker = ColumnRanker::new(self.matrix());
        let kernel = self.matrix().kernel_basis();
        let mut out = BTreeMap::new();
        sweep_kernel_supports(self.field(), &kernel, |s| {
            if ranker.is_circuit_support(s) {
                *out.entry(s.count_ones() as usize).or_insert(0) += 1;
            }
            true
        });
        out
    }

    /// Circuit spectrum by checking every subset against the rank table.
    pub fn circuit_spectrum_subsets(&self, budget: &Budget) -> Result<BTreeMap<usize, u64>> {
        let t = RankTable::build(self, budget)?;
        let mut out = BTreeMap::new();
        for s in 1u64..=t.full() {
            let k = s.count_ones() as usize;
            if t.rank(s) + 1 != k {
                continue;
            }
            if indices_of(s).iter().all(|&e| t.rank(s & !(1 << e)) + 1 == k) {
                *out.entry(k).or_insert(0) += 1;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::random_uniform_matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn girth_examples() {
        let f = Field::new(2).unwrap();
        let b = Budget::default();
        let lp = RepMatroid::from_columns(&f, 2, &[vec![1, 0], vec![0, 0]]).unwrap();
        assert_eq!(lp.girth(&b).unwrap(), Extended::Finite(1));
        let par = RepMatroid::from_columns(&f, 2, &[vec![1, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(par.girth(&b).unwrap(), Extended::Finite(2));
        let tri = RepMatroid::from_columns(&f, 2, &[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(tri.girth(&b).unwrap(), Extended::Finite(3));
        assert_eq!(RepMatroid::free(&f, 4).girth(&b).unwrap(), Extended::Infinite);
        assert_eq!(tri.circuit_spectrum(&b).unwrap(), BTreeMap::from([(3, 1)]));
        assert!(RepMatroid::free(&f, 4).circuit_spectrum(&b).unwrap().is_empty());
    }

    #[test]
    fn sweep_and_subset_search_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let b = Budget::default();
        for q in [2u32, 3, 4] {
            let f = Field::new(q).unwrap();
            for _ in 0..60 {
                let n = rng.gen_range(1..5);
                let m = rng.gen_range(1..10);
                let a = random_uniform_matrix(n, m, &f, &mut rng);
                let mat = RepMatroid::new(a);
                let sweep = mat.circuit_spectrum_sweep();
                let subsets = mat.circuit_spectrum_subsets(&b).unwrap();
                assert_eq!(sweep, subsets, "{mat:?}");
                let no_sweep = Budget {
                    kernel_sweep: 0,
                    ..b
                };
                assert_eq!(mat.girth(&b).unwrap(), mat.girth(&no_sweep).unwrap());
            }
        }
    }
}
