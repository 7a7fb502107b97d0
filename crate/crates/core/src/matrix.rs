//! Column-indexed matrices over F_q.

use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// A vector of field elements.
pub type FqVector = Vec<Elem>;

/// An `n x m` matrix stored column by column.
#[derive(Clone, PartialEq, Eq)]
pub struct FqMatrix {
    field: Field,
    n: usize,
    m: usize,
    data: Vec<Elem>,
}

impl std::fmt::Debug for FqMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FqMatrix {
    /// The `n x 0` matrix.
    pub fn empty(field: &Field, n: usize) -> FqMatrix {
        FqMatrix {
            field: field.clone(),
            n,
            m: 0,
            data: Vec::new(),
        }
    }

    pub fn zeros(field: &Field, n: usize, m: usize) -> FqMatrix {
        FqMatrix {
            field: field.clone(),
            n,
            m,
            data: vec![0; n * m],
        }
    }

    pub fn identity(field: &Field, n: usize) -> FqMatrix {
        let mut a = FqMatrix::zeros(field, n, n);
        for i in 0..n {
            a.set(i, i, 1);
        }
        a
    }

    pub fn from_columns(field: &Field, n: usize, columns: &[FqVector]) -> Result<FqMatrix> {
        let mut a = FqMatrix::empty(field, n);
        for c in columns {
            a.try_push_column(c)?;
        }
        Ok(a)
    }

    /// Builds a matrix from row vectors, which must share one length.
    pub fn from_rows(field: &Field, rows: &[Vec<Elem>]) -> Result<FqMatrix> {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        let mut a = FqMatrix::zeros(field, n, m);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != m {
                return Err(Error::InvalidParam("ragged rows".into()));
            }
            for (j, &x) in r.iter().enumerate() {
                check_elem(field, x)?;
                a.set(i, j, x);
            }
        }
        Ok(a)
    }

    #[inline]
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Number of rows.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of columns.
    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[Elem] {
        &self.data[j * self.n..(j + 1) * self.n]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[Elem]> + '_ {
        (0..self.m).map(move |j| self.col(j))
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[j * self.n + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: Elem) {
        self.data[j * self.n + i] = x;
    }

    pub fn row(&self, i: usize) -> FqVector {
        (0..self.m).map(|j| self.get(i, j)).collect()
    }

    pub fn rows(&self) -> Vec<FqVector> {
        (0..self.n).map(|i| self.row(i)).collect()
    }

    pub fn push_column(&mut self, v: &[Elem]) {
        assert_eq!(v.len(), self.n, "column has wrong dimension");
        self.data.extend_from_slice(v);
        self.m += 1;
    }

    pub fn try_push_column(&mut self, v: &[Elem]) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::InvalidParam(format!(
                "column of length {} in a matrix with {} rows",
                v.len(),
                self.n
            )));
        }
        for &x in v {
            check_elem(&self.field, x)?;
        }
        self.push_column(v);
        Ok(())
    }

    /// Columns listed in `idx`, in that order.
    pub fn select(&self, idx: &[usize]) -> FqMatrix {
        let mut out = FqMatrix::empty(&self.field, self.n);
        for &j in idx {
            out.push_column(self.col(j));
        }
        out
    }

    /// Rank of the column span.
    pub fn rank(&self) -> usize {
        if self.field.is_binary() {
            binary_rank(self.packed_rows())
        } else {
            let mut rows = self.rows();
            row_rref(&self.field, &mut rows, self.m).len()
        }
    }

    /// Rank of the columns listed in `idx`.
    pub fn rank_of(&self, idx: &[usize]) -> usize {
        self.select(idx).rank()
    }

    /// A basis of `{x : Ax = 0}`, one vector per non-pivot column of the RREF.
    pub fn kernel_basis(&self) -> Vec<FqVector> {
        let f = &self.field;
        let mut rows = self.rows();
        let pivots = row_rref(f, &mut rows, self.m);
        let mut is_pivot = vec![false; self.m];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.m)
            .filter(|&j| !is_pivot[j])
            .map(|free| {
                let mut x = vec![0; self.m];
                x[free] = 1;
                for (r, &p) in pivots.iter().enumerate() {
                    x[p] = f.neg(rows[r][free]);
                }
                x
            })
            .collect()
    }

    /// `A x`.
    pub fn mul_vec(&self, x: &[Elem]) -> FqVector {
        assert_eq!(x.len(), self.m);
        let mut out = vec![0; self.n];
        for (j, &c) in x.iter().enumerate() {
            self.field.axpy(&mut out, c, self.col(j));
        }
        out
    }

    /// Removes the columns in `x`.
    pub fn delete(&self, x: &[usize]) -> FqMatrix {
        let keep: Vec<usize> = (0..self.m).filter(|j| !x.contains(j)).collect();
        self.select(&keep)
    }

    /// A representation of the contraction by the columns in `x`: pivot on
    /// those columns, then drop the pivot rows and the columns themselves.
    /// The result has `n - rank(A_x)` rows.
    pub fn contract(&self, x: &[usize]) -> FqMatrix {
        let f = &self.field;
        let mut rows = self.rows();
        let mut used = vec![false; self.n];
        for &c in x {
            let Some(r) = (0..self.n).find(|&r| !used[r] && rows[r][c] != 0) else {
                continue;
            };
            used[r] = true;
            let inv = f.inv(rows[r][c]).unwrap();
            f.scale(&mut rows[r], inv);
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && row[c] != 0 {
                    let factor = f.neg(row[c]);
                    f.axpy(row, factor, &pivot_row);
                }
            }
        }
        let keep_cols: Vec<usize> = (0..self.m).filter(|j| !x.contains(j)).collect();
        let kept_rows: Vec<Vec<Elem>> = rows
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(_, r)| keep_cols.iter().map(|&j| r[j]).collect())
            .collect();
        let mut out = FqMatrix::zeros(f, kept_rows.len(), keep_cols.len());
        for (i, r) in kept_rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                out.set(i, j, v);
            }
        }
        out
    }

    /// Rows packed into 64-bit words; only meaningful over F_2.
    pub(crate) fn packed_rows(&self) -> Vec<Vec<u64>> {
        let words = self.m.div_ceil(64);
        let mut rows = vec![vec![0u64; words]; self.n];
        for j in 0..self.m {
            for (i, &x) in self.col(j).iter().enumerate() {
                if x != 0 {
                    rows[i][j / 64] |= 1 << (j % 64);
                }
            }
        }
        rows
    }

    /// Text form: `q n m` followed by `n` rows of `m` integers.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.field.q(), self.n, self.m);
        for i in 0..self.n {
            let row: Vec<String> = (0..self.m).map(|j| self.get(i, j).to_string()).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<FqMatrix> {
        let mut tokens = text.split_whitespace().map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::Parse(format!("not an integer: {t:?}")))
        });
        let mut next = |what: &str| {
            tokens
                .next()
                .unwrap_or_else(|| Err(Error::Parse(format!("missing {what}"))))
        };
        let q = next("q")?;
        let n = next("n")? as usize;
        let m = next("m")? as usize;
        let q = u32::try_from(q).map_err(|_| Error::TooLarge(u32::MAX))?;
        let field = Field::new(q)?;
        let mut a = FqMatrix::zeros(&field, n, m);
        for i in 0..n {
            for j in 0..m {
                let x = next("entry")?;
                if x >= q as u64 {
                    return Err(Error::Parse(format!("entry {x} out of range for q={q}")));
                }
                a.set(i, j, x as Elem);
            }
        }
        if tokens.next().is_some() {
            return Err(Error::Parse("trailing data".into()));
        }
        Ok(a)
    }
}

fn check_elem(field: &Field, x: Elem) -> Result<()> {
    if (x as u32) < field.q() {
        Ok(())
    } else {
        Err(Error::InvalidParam(format!(
            "{x} is not an element of GF({})",
            field.q()
        )))
    }
}

/// In-place reduced row echelon form over the first `ncols` columns.
/// Returns the pivot column of each nonzero row, in row order.
pub(crate) fn row_rref(f: &Field, rows: &mut [Vec<Elem>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]).unwrap();
        f.scale(&mut rows[r], inv);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let factor = f.neg(row[c]);
                f.axpy(row, factor, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a GF(2) matrix given as packed rows.
pub(crate) fn binary_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let words = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for w in 0..words {
        for bit in 0..64 {
            let mask = 1u64 << bit;
            let Some(p) = (rank..rows.len()).find(|&i| rows[i][w] & mask != 0) else {
                continue;
            };
            rows.swap(rank, p);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let pivot = &head[rank];
            for row in tail.iter_mut() {
                if row[w] & mask != 0 {
                    for k in w..words {
                        row[k] ^= pivot[k];
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                return rank;
            }
        }
    }
    rank
}

/// A uniformly random vector of length `n`.
pub fn random_vector<R: Rng + ?Sized>(field: &Field, n: usize, rng: &mut R) -> FqVector {
    if field.is_binary() {
        let mut v = Vec::with_capacity(n);
        while v.len() < n {
            let word: u64 = rng.gen();
            let take = (n - v.len()).min(64);
            v.extend((0..take).map(|b| ((word >> b) & 1) as Elem));
        }
        v
    } else {
        let q = field.q();
        (0..n).map(|_| rng.gen_range(0..q) as Elem).collect()
    }
}

/// An `n x m` matrix with i.i.d. uniform entries, filled column by column.
pub fn random_uniform_matrix<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    field: &Field,
    rng: &mut R,
) -> FqMatrix {
    let mut a = FqMatrix::empty(field, n);
    for _ in 0..m {
        a.push_column(&random_vector(field, n, rng));
    }
    a
}
