//! Subspaces of F_q^n in canonical form, and their enumeration.
//!
//! A k-dimensional subspace is represented by the unique k x n matrix in
//! reduced row echelon form whose rows span it. Enumeration walks pivot
//! patterns in lexicographic order and, within a pattern, the free entries
//! (listed row by row, left to right) in lexicographic order.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::{row_rref, FqVector};
use crate::theory::gbinom::gaussian_binomial;

/// Default cap on the number of subspaces a single enumeration may visit.
pub const DEFAULT_SUBSPACE_BUDGET: u128 = 10_000_000;

/// A subspace of F_q^n held as its canonical RREF basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubspaceHandle {
    q: u32,
    n: usize,
    rows: Vec<FqVector>,
}

impl std::fmt::Debug for SubspaceHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(GF({}), n={}, {:?})", self.q, self.n, self.rows)
    }
}

impl SubspaceHandle {
    /// The span of `vectors` (each of length `n`).
    pub fn span(field: &Field, n: usize, vectors: &[FqVector]) -> SubspaceHandle {
        let mut rows: Vec<FqVector> = vectors.to_vec();
        for r in &rows {
            assert_eq!(r.len(), n);
        }
        let rank = row_rref(field, &mut rows, n).len();
        rows.truncate(rank);
        SubspaceHandle {
            q: field.q(),
            n,
            rows,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Canonical RREF basis.
    pub fn rows(&self) -> &[FqVector] {
        &self.rows
    }

    /// Whether every basis row is orthogonal to `w`, i.e. `w` lies in the
    /// annihilator of this subspace.
    pub fn annihilates(&self, field: &Field, w: &[Elem]) -> bool {
        self.rows.iter().all(|r| field.dot(r, w) == 0)
    }

    pub fn contains(&self, field: &Field, v: &[Elem]) -> bool {
        let mut rows = self.rows.clone();
        rows.push(v.to_vec());
        row_rref(field, &mut rows, self.n).len() == self.dim()
    }
}

fn check_budget(n: usize, k: usize, q: u32, budget: u128) -> Result<u128> {
    let count = gaussian_binomial(n as u64, k as u64, q as u64);
    let limit = BigUint::from(budget);
    if count > limit {
        return Err(Error::budget(
            "subspace enumeration",
            count.to_u128().unwrap_or(u128::MAX),
            budget,
        ));
    }
    Ok(count.to_u128().unwrap())
}

/// Iterates over all k-dimensional subspaces of F_q^n in canonical order.
pub fn enumerate_subspaces(
    n: usize,
    k: usize,
    field: &Field,
    budget: u128,
) -> Result<SubspaceIter> {
    if k > n {
        return Err(Error::InvalidParam(format!("k={k} exceeds n={n}")));
    }
    check_budget(n, k, field.q(), budget)?;
    Ok(SubspaceIter {
        cursor: SubspaceCursor::new(field, n, k),
    })
}

pub struct SubspaceIter {
    cursor: SubspaceCursor,
}

impl Iterator for SubspaceIter {
    type Item = SubspaceHandle;

    fn next(&mut self) -> Option<SubspaceHandle> {
        let q = self.cursor.field.q();
        let n = self.cursor.n;
        self.cursor.advance().map(|rows| SubspaceHandle {
            q,
            n,
            rows: rows.to_vec(),
        })
    }
}

/// Next k-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn free_positions(pivots: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &p) in pivots.iter().enumerate() {
        for j in p + 1..n {
            if !pivots.contains(&j) {
                out.push((i, j));
            }
        }
    }
    out
}

/// A resumable walk over canonical bases of k-dim subspaces.
pub struct SubspaceCursor {
    field: Field,
    n: usize,
    k: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    digits: Vec<Elem>,
    rows: Vec<FqVector>,
    started: bool,
    done: bool,
}

impl SubspaceCursor {
    pub fn new(field: &Field, n: usize, k: usize) -> SubspaceCursor {
        assert!(k <= n);
        let pivots: Vec<usize> = (0..k).collect();
        let free = free_positions(&pivots, n);
        SubspaceCursor {
            field: field.clone(),
            n,
            k,
            digits: vec![0; free.len()],
            pivots,
            free,
            rows: Vec::new(),
            started: false,
            done: false,
        }
    }

    fn build_rows(&mut self) {
        self.rows = vec![vec![0; self.n]; self.k];
        for (i, &p) in self.pivots.iter().enumerate() {
            self.rows[i][p] = 1;
        }
        for (&(i, j), &d) in self.free.iter().zip(&self.digits) {
            self.rows[i][j] = d;
        }
    }

    /// Moves to the next subspace and returns its basis.
    pub fn advance(&mut self) -> Option<&[FqVector]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.build_rows();
            return Some(&self.rows);
        }
        let q = self.field.q() as Elem as u32;
        let mut i = self.digits.len();
        loop {
            if i == 0 {
                if self.k == 0 || !next_combination(&mut self.pivots, self.n) {
                    self.done = true;
                    return None;
                }
                self.free = free_positions(&self.pivots, self.n);
                self.digits = vec![0; self.free.len()];
                break;
            }
            i -= 1;
            if (self.digits[i] as u32) + 1 < q {
                self.digits[i] += 1;
                break;
            }
            self.digits[i] = 0;
        }
        self.build_rows();
        Some(&self.rows)
    }
}

/// Same walk as [`SubspaceCursor`] over F_2 with rows as bitmasks
/// (bit j is coordinate j). Requires n <= 64.
pub struct BinaryCursor {
    n: usize,
    k: usize,
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
    counter: u128,
    rows: Vec<u64>,
    started: bool,
    done: bool,
}

impl BinaryCursor {
    pub fn new(n: usize, k: usize) -> BinaryCursor {
        assert!(k <= n && n <= 64);
        let pivots: Vec<usize> = (0..k).collect();
        let free = free_positions(&pivots, n);
        BinaryCursor {
            n,
            k,
            pivots,
            free,
            counter: 0,
            rows: Vec::new(),
            started: false,
            done: false,
        }
    }

    fn build_rows(&mut self) {
        self.rows = self.pivots.iter().map(|&p| 1u64 << p).collect();
        let f = self.free.len();
        for (t, &(i, j)) in self.free.iter().enumerate() {
            // first free position is the most significant digit
            if (self.counter >> (f - 1 - t)) & 1 == 1 {
                self.rows[i] |= 1 << j;
            }
        }
    }

    pub fn advance(&mut self) -> Option<&[u64]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
        } else {
            self.counter += 1;
            if self.counter >> self.free.len() != 0 {
                if self.k == 0 || !next_combination(&mut self.pivots, self.n) {
                    self.done = true;
                    return None;
                }
                self.free = free_positions(&self.pivots, self.n);
                self.counter = 0;
            }
        }
        self.build_rows();
        Some(&self.rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn counts_match_gaussian_binomials() {
        for q in [2u32, 3] {
            let f = Field::new(q).unwrap();
            for n in 0..=4 {
                for k in 0..=n {
                    let all: Vec<_> = enumerate_subspaces(n, k, &f, DEFAULT_SUBSPACE_BUDGET)
                        .unwrap()
                        .collect();
                    let expect = gaussian_binomial(n as u64, k as u64, q as u64);
                    assert_eq!(BigUint::from(all.len()), expect, "n={n} k={k} q={q}");
                    let distinct: HashSet<_> = all.iter().cloned().collect();
                    assert_eq!(distinct.len(), all.len());
                    for s in &all {
                        assert_eq!(&SubspaceHandle::span(&f, n, s.rows()), s);
                    }
                }
            }
        }
    }

    #[test]
    fn four_two_two_has_35() {
        let f = Field::new(2).unwrap();
        assert_eq!(enumerate_subspaces(4, 2, &f, 100).unwrap().count(), 35);
    }

    #[test]
    fn binary_cursor_matches_general_order() {
        let f = Field::new(2).unwrap();
        for n in 0..=5 {
            for k in 0..=n {
                let mut g = SubspaceCursor::new(&f, n, k);
                let mut b = BinaryCursor::new(n, k);
                loop {
                    match (g.advance(), b.advance()) {
                        (None, None) => break,
                        (Some(gr), Some(br)) => {
                            for (row, &mask) in gr.iter().zip(br) {
                                for j in 0..n {
                                    assert_eq!(row[j] as u64, (mask >> j) & 1);
                                }
                            }
                        }
                        _ => panic!("length mismatch at n={n} k={k}"),
                    }
                }
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let f = Field::new(2).unwrap();
        assert!(matches!(
            enumerate_subspaces(10, 5, &f, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}
