use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::subspace::{BinaryCursor, SubspaceCursor};
use crate::theory::gbinom::gaussian_binomial;

use super::{Budget, RepMatroid};

/// Whether the k x n matrix `rows` maps every column to a nonzero vector,
/// i.e. its kernel (an (n-k)-dim subspace) misses all columns.
pub fn rows_avoid(field: &Field, rows: &[Vec<Elem>], cols: &[Vec<Elem>]) -> bool {
    cols.iter()
        .all(|w| rows.iter().any(|r| field.dot(r, w) != 0))
}

/// GF(2) version of [`rows_avoid`] on bitmasks.
#[inline]
pub fn binary_rows_avoid(rows: &[u64], cols: &[u64]) -> bool {
    cols.iter()
        .all(|&w| rows.iter().any(|&r| (r & w).count_ones() & 1 == 1))
}

pub(crate) fn pack_binary(col: &[Elem]) -> u64 {
    col.iter()
        .enumerate()
        .fold(0u64, |acc, (i, &x)| acc | ((x as u64) << i))
}

pub(crate) fn check_subspace_budget(n: usize, k: usize, q: u32, budget: &Budget) -> Result<()> {
    let count = gaussian_binomial(n as u64, k as u64, q as u64);
    let need = count.to_u128().unwrap_or(u128::MAX);
    if need > budget.subspaces {
        return Err(Error::budget("critical number search", need, budget.subspaces));
    }
    Ok(())
}

impl RepMatroid {
    /// chi_q(M): least k such that some (n-k)-dim subspace of F_q^n misses
    /// every column. Zero for the empty matroid.
    pub fn critical_number(&self, budget: &Budget) -> Result<usize> {
        if self.has_loop() {
            return Err(Error::LoopPresent);
        }
        let a = self.matrix();
        let n = a.n();
        if a.m() == 0 {
            return Ok(0);
        }
        let f = a.field();
        for k in 1..n {
            check_subspace_budget(n, k, f.q(), budget)?;
            let found = if f.is_binary() && n <= 64 {
                let cols: Vec<u64> = a.columns().map(pack_binary).collect();
                let mut cur = BinaryCursor::new(n, k);
                let mut hit = false;
                while let Some(rows) = cur.advance() {
                    if binary_rows_avoid(rows, &cols) {
                        hit = true;
                        break;
                    }
                }
                hit
            } else {
                let cols: Vec<Vec<Elem>> = a.columns().map(|c| c.to_vec()).collect();
                let mut cur = SubspaceCursor::new(f, n, k);
                let mut hit = false;
                while let Some(rows) = cur.advance() {
                    if rows_avoid(f, rows, &cols) {
                        hit = true;
                        break;
                    }
                }
                hit
            };
            if found {
                return Ok(k);
            }
        }
        // k = n: the zero subspace misses every nonzero column
        Ok(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::random_uniform_matrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_examples() {
        let f = Field::new(2).unwrap();
        let b = Budget::default();
        let e1 = RepMatroid::from_columns(&f, 2, &[vec![1, 0]]).unwrap();
        assert_eq!(e1.critical_number(&b).unwrap(), 1);
        let pg = RepMatroid::projective_geometry(&f, 2);
        assert_eq!(pg.critical_number(&b).unwrap(), 2);
        let lp = RepMatroid::from_columns(&f, 2, &[vec![0, 0]]).unwrap();
        assert!(matches!(lp.critical_number(&b), Err(Error::LoopPresent)));
    }

    #[test]
    fn projective_geometries() {
        let b = Budget::default();
        for q in [2u32, 3] {
            let f = Field::new(q).unwrap();
            for n in 1..=4 {
                let pg = RepMatroid::projective_geometry(&f, n);
                assert_eq!(pg.critical_number(&b).unwrap(), n, "PG({}, {q})", n - 1);
            }
        }
    }

    #[test]
    fn never_skips_when_adding_a_column() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let b = Budget::default();
        for q in [2u32, 3] {
            let f = Field::new(q).unwrap();
            for _ in 0..150 {
                let n = rng.gen_range(1..5);
                let m = rng.gen_range(1..8);
                let a = random_uniform_matrix(n, m, &f, &mut rng);
                let Ok(before) = RepMatroid::new(a.clone()).critical_number(&b) else {
                    continue;
                };
                let mut bigger = a.clone();
                let mut v = crate::matrix::random_vector(&f, n, &mut rng);
                if v.iter().all(|&x| x == 0) {
                    v[0] = 1;
                }
                bigger.push_column(&v);
                let after = RepMatroid::new(bigger).critical_number(&b).unwrap();
                assert!(after == before || after == before + 1);
            }
        }
    }
}
