use crate::error::{Error, Result};
use crate::field::{Elem, Field};

use super::{Budget, RepMatroid};

/// Ranks of all `2^m` subsets of a ground set with `m <= 22` elements,
/// indexed by bitmask.
#[derive(Clone)]
pub struct RankTable {
    m: usize,
    ranks: Vec<u8>,
}

impl RankTable {
    pub fn build(matroid: &RepMatroid, budget: &Budget) -> Result<RankTable> {
        let m = matroid.size();
        if m > budget.partition_max_m {
            return Err(Error::budget(
                "rank table",
                m as u128,
                budget.partition_max_m as u128,
            ));
        }
        let mut ranks = vec![0u8; 1 << m];
        let a = matroid.matrix();
        if a.field().is_binary() && a.n() <= 64 {
            let cols: Vec<u64> = a
                .columns()
                .map(|c| {
                    c.iter()
                        .enumerate()
                        .fold(0u64, |acc, (i, &x)| acc | ((x as u64) << i))
                })
                .collect();
            let mut basis = Vec::with_capacity(a.n());
            fill_binary(&cols, 0, 0, &mut basis, &mut ranks);
        } else {
            let cols: Vec<Vec<Elem>> = a.columns().map(|c| c.to_vec()).collect();
            let mut basis = Vec::new();
            fill_general(a.field(), &cols, 0, 0, &mut basis, &mut ranks);
        }
        Ok(RankTable { m, ranks })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn rank(&self, mask: u64) -> usize {
        self.ranks[mask as usize] as usize
    }

    /// Mask of the whole ground set.
    pub fn full(&self) -> u64 {
        if self.m == 64 {
            u64::MAX
        } else {
            (1u64 << self.m) - 1
        }
    }
}

// Depth-first over include/exclude decisions with a stack of reduced basis vectors.
fn fill_binary(cols: &[u64], i: usize, mask: u64, basis: &mut Vec<u64>, out: &mut [u8]) {
    if i == cols.len() {
        out[mask as usize] = basis.len() as u8;
        return;
    }
    fill_binary(cols, i + 1, mask, basis, out);
    let mut v = cols[i];
    for &b in basis.iter() {
        let low = b & b.wrapping_neg();
        if v & low != 0 {
            v ^= b;
        }
    }
    if v != 0 {
        basis.push(v);
        fill_binary(cols, i + 1, mask | (1 << i), basis, out);
        basis.pop();
    } else {
        fill_binary(cols, i + 1, mask | (1 << i), basis, out);
    }
}

fn fill_general(
    f: &Field,
    cols: &[Vec<Elem>],
    i: usize,
    mask: u64,
    basis: &mut Vec<(usize, Vec<Elem>)>,
    out: &mut [u8],
) {
    if i == cols.len() {
        out[mask as usize] = basis.len() as u8;
        return;
    }
    fill_general(f, cols, i + 1, mask, basis, out);
    let mut v = cols[i].clone();
    for (p, b) in basis.iter() {
        let a = v[*p];
        if a != 0 {
            f.axpy(&mut v, f.neg(a), b);
        }
    }
    if let Some(p) = v.iter().position(|&x| x != 0) {
        let inv = f.inv(v[p]).unwrap();
        f.scale(&mut v, inv);
        basis.push((p, v));
        fill_general(f, cols, i + 1, mask | (1 << i), basis, out);
        basis.pop();
    } else {
        fill_general(f, cols, i + 1, mask | (1 << i), basis, out);
    }
}
