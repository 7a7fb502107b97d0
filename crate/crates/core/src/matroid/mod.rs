//! Matroids represented by matrices over F_q.
//!
//! Ground-set elements are column indices `0..m`. Exhaustive queries work on
//! bitmask subsets and are gated by a [`Budget`].

mod circuits;
mod connectivity;
mod critical;
mod minor;
mod ranktable;

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{FqMatrix, FqVector};

pub use connectivity::{dual_rank, Connectivity, Separation, SeparationKind};
pub use critical::{binary_rows_avoid, rows_avoid};
pub use minor::MinorWitness;
pub use ranktable::RankTable;

pub(crate) use circuits::ColumnRanker;
pub(crate) use critical::{check_subspace_budget, pack_binary};

/// An integer or infinity; `Finite` values order below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Extended {
    Finite(usize),
    Infinite,
}

impl Extended {
    pub fn finite(self) -> Option<usize> {
        match self {
            Extended::Finite(k) => Some(k),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Extended::Infinite
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(k) => write!(f, "{k}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

/// Limits on exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest ground set for bipartition and rank-table searches.
    pub partition_max_m: usize,
    /// Largest `q^{corank}` for kernel sweeps.
    pub kernel_sweep: u128,
    /// Largest ground set for subset enumeration fallbacks.
    pub subset_max_m: usize,
    /// Largest number of subspaces visited per dimension by the critical-number search.
    pub subspaces: u128,
    /// Largest ground set for general minor search.
    pub minor_max_m: usize,
}

impl Default for Budget {
    fn default() -> Budget {
        Budget {
            partition_max_m: 22,
            kernel_sweep: 1 << 24,
            subset_max_m: 20,
            subspaces: crate::subspace::DEFAULT_SUBSPACE_BUDGET,
            minor_max_m: 12,
        }
    }
}

/// A matroid given by the columns of a matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct RepMatroid {
    a: FqMatrix,
    rank: usize,
}

impl fmt::Debug for RepMatroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RepMatroid(rank {}, {:?})", self.rank, self.a)
    }
}

/// Turns an index list into a bitmask; indices must be below 64.
pub fn mask_of(idx: &[usize]) -> u64 {
    idx.iter().fold(0u64, |acc, &i| acc | (1 << i))
}

/// Index list of a bitmask, ascending.
pub fn indices_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| (mask >> i) & 1 == 1).collect()
}

impl RepMatroid {
    pub fn new(a: FqMatrix) -> RepMatroid {
        let rank = a.rank();
        RepMatroid { a, rank }
    }

    pub fn from_columns(field: &Field, n: usize, columns: &[FqVector]) -> Result<RepMatroid> {
        Ok(RepMatroid::new(FqMatrix::from_columns(field, n, columns)?))
    }

    /// All `[n]_q` points of PG(n-1, q), one canonical vector each.
    pub fn projective_geometry(field: &Field, n: usize) -> RepMatroid {
        RepMatroid::new(FqMatrix::from_columns(field, n, &projective_points(field, n)).unwrap())
    }

    /// The uniform matroid U_{r,m} represented over `field`, if the field is
    /// large enough for the Vandermonde-style construction used here.
    pub fn uniform(field: &Field, r: usize, m: usize) -> Result<RepMatroid> {
        if r == 0 {
            return Ok(RepMatroid::new(FqMatrix::zeros(field, 0, m)));
        }
        let q = field.q() as usize;
        if m > q + 1 && r >= 2 && r < m {
            return Err(Error::InvalidParam(format!(
                "U_{{{r},{m}}} is not built over GF({q}) here"
            )));
        }
        if r >= m {
            return Ok(RepMatroid::new(FqMatrix::identity(field, m)));
        }
        if r == 1 {
            return Ok(RepMatroid::new(FqMatrix::from_rows(field, &[vec![1; m]])?));
        }
        // columns (1, x, x^2, ..., x^{r-1}) for distinct x, plus e_r at infinity
        let mut cols: Vec<FqVector> = Vec::new();
        let p = field.primitive_element();
        let mut xs: Vec<u16> = vec![0];
        let mut x = 1u16;
        for _ in 0..q - 1 {
            xs.push(x);
            x = field.mul(x, p);
        }
        for &x in xs.iter().take(m.min(q)) {
            let mut v = vec![1u16; r];
            for i in 1..r {
                v[i] = field.mul(v[i - 1], x);
            }
            cols.push(v);
        }
        if m == q + 1 {
            let mut v = vec![0; r];
            v[r - 1] = 1;
            cols.push(v);
        }
        RepMatroid::from_columns(field, r, &cols)
    }

    /// The free matroid on `m` elements.
    pub fn free(field: &Field, m: usize) -> RepMatroid {
        RepMatroid::new(FqMatrix::identity(field, m))
    }

    pub fn matrix(&self) -> &FqMatrix {
        &self.a
    }

    pub fn field(&self) -> &Field {
        self.a.field()
    }

    /// Size of the ground set.
    pub fn size(&self) -> usize {
        self.a.m()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn corank(&self) -> usize {
        self.size() - self.rank
    }

    pub fn rank_of_subset(&self, s: &[usize]) -> usize {
        self.a.rank_of(s)
    }

    pub fn delete(&self, x: &[usize]) -> RepMatroid {
        RepMatroid::new(self.a.delete(x))
    }

    pub fn contract(&self, x: &[usize]) -> RepMatroid {
        RepMatroid::new(self.a.contract(x))
    }

    /// True iff `s` is dependent and every one-smaller subset is independent.
    pub fn is_circuit(&self, s: &[usize]) -> bool {
        if s.is_empty() {
            return false;
        }
        let r = self.rank_of_subset(s);
        if r + 1 != s.len() {
            return false;
        }
        (0..s.len()).all(|i| {
            let mut t = s.to_vec();
            t.remove(i);
            self.rank_of_subset(&t) == t.len()
        })
    }

    pub fn has_loop(&self) -> bool {
        self.a.columns().any(|c| c.iter().all(|&x| x == 0))
    }

    /// No loops and no parallel pairs.
    pub fn is_simple(&self) -> bool {
        let f = self.field();
        let mut seen = HashSet::new();
        for c in self.a.columns() {
            let mut v = c.to_vec();
            if !f.normalize(&mut v) || !seen.insert(v) {
                return false;
            }
        }
        true
    }

    /// `Some((r, m))` iff the matroid is U_{r,m}. Requires `m <= 20`.
    pub fn is_uniform(&self) -> Option<(usize, usize)> {
        let m = self.size();
        assert!(m <= 20, "is_uniform needs m <= 20");
        let r = self.rank;
        let table = RankTable::build(self, &Budget::default()).ok()?;
        let all_independent = (0u64..1 << m)
            .filter(|s| s.count_ones() as usize == r)
            .all(|s| table.rank(s) == r);
        all_independent.then_some((r, m))
    }

    pub fn rank_table(&self, budget: &Budget) -> Result<RankTable> {
        RankTable::build(self, budget)
    }

    /// Whether the columns include a representative of every point of
    /// PG(r-1, q) in their span, given that span has dimension `r`.
    fn covers_span_points(&self, r: usize) -> bool {
        let f = self.field();
        let mut pts = HashSet::new();
        for c in self.a.columns() {
            let mut v = c.to_vec();
            if f.normalize(&mut v) {
                pts.insert(v);
            }
        }
        let zeta = crate::theory::q_integer(r as u64, f.q() as u64);
        num_bigint::BigUint::from(pts.len()) == zeta
    }

    /// Whether PG(r-1, q) is a minor. When the rank equals `r` this is the
    /// coverage check on projective points; above that it falls back to the
    /// general minor search.
    pub fn contains_pg(&self, r: usize, budget: &Budget) -> Result<bool> {
        use std::cmp::Ordering;
        match self.rank.cmp(&r) {
            Ordering::Less => Ok(false),
            Ordering::Equal => Ok(self.covers_span_points(r)),
            Ordering::Greater => {
                let pg = RepMatroid::projective_geometry(self.field(), r);
                Ok(self.has_minor(&pg, budget)?.is_some())
            }
        }
    }
}

/// Whether the nonzero columns of `a` (with `r` rows) meet all `[r]_q` points.
pub fn covers_all_points(a: &FqMatrix) -> bool {
    let m = RepMatroid {
        rank: a.n(),
        a: a.clone(),
    };
    m.covers_span_points(a.n())
}

/// Canonical representatives (first nonzero entry 1) of the points of
/// PG(n-1, q), ordered by leading position and then by the trailing
/// entries read as a base-q number with the last coordinate most significant.
pub fn projective_points(field: &Field, n: usize) -> Vec<FqVector> {
    let q = field.q() as u64;
    let mut out = Vec::new();
    for lead in 0..n {
        let tail = n - lead - 1;
        for code in 0..q.pow(tail as u32) {
            let mut v = vec![0u16; n];
            v[lead] = 1;
            let mut c = code;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = (c % q) as u16;
                c /= q;
            }
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    fn pg12() -> RepMatroid {
        RepMatroid::from_columns(&gf(2), 2, &[vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap()
    }

    #[test]
    fn rank_queries() {
        let m = pg12();
        assert_eq!(m.rank_of_subset(&[]), 0);
        assert_eq!(m.rank_of_subset(&[0, 1, 2]), 2);
        assert_eq!(m.rank_of_subset(&[2]), 1);
    }

    #[test]
    fn circuit_predicate() {
        let f = gf(2);
        let m = pg12();
        assert!(m.is_circuit(&[0, 1, 2]));
        assert!(!m.is_circuit(&[0, 1]));
        let vvw = RepMatroid::from_columns(&f, 2, &[vec![1, 0], vec![1, 0], vec![0, 1]]).unwrap();
        assert!(!vvw.is_circuit(&[0, 1, 2]));
        assert!(vvw.is_circuit(&[0, 1]));
    }

    #[test]
    fn simplicity() {
        let f = gf(3);
        assert!(RepMatroid::free(&f, 3).is_simple());
        let z = RepMatroid::from_columns(&f, 2, &[vec![1, 0], vec![0, 0]]).unwrap();
        assert!(!z.is_simple());
        let par = RepMatroid::from_columns(&f, 2, &[vec![1, 2], vec![2, 1]]).unwrap();
        assert!(!par.is_simple());
    }

    #[test]
    fn uniform_detection() {
        let f = gf(2);
        assert_eq!(RepMatroid::free(&f, 4).is_uniform(), Some((4, 4)));
        assert_eq!(pg12().is_uniform(), Some((2, 3)));
        let lc = RepMatroid::from_columns(&f, 2, &[vec![0, 0], vec![1, 0]]).unwrap();
        assert_eq!(lc.is_uniform(), None);
        for (q, r, m) in [(3u32, 2usize, 4usize), (4, 2, 5), (5, 3, 6), (7, 3, 8)] {
            let u = RepMatroid::uniform(&gf(q), r, m).unwrap();
            assert_eq!(u.is_uniform(), Some((r, m)), "U_{r},{m} over GF({q})");
        }
    }

    #[test]
    fn pg_points() {
        for (q, n) in [(2u32, 3usize), (3, 3), (4, 2)] {
            let f = gf(q);
            let pts = projective_points(&f, n);
            let m = RepMatroid::projective_geometry(&f, n);
            assert!(m.is_simple());
            assert_eq!(pts.len() as u32, (q.pow(n as u32) - 1) / (q - 1));
        }
    }

    #[test]
    fn pg_containment_structured() {
        let f = gf(2);
        let pts = projective_points(&f, 3);
        let all = RepMatroid::from_columns(&f, 3, &pts).unwrap();
        assert!(all.contains_pg(3, &Budget::default()).unwrap());
        let basis = RepMatroid::free(&f, 2);
        assert!(!basis.contains_pg(2, &Budget::default()).unwrap());
        let mut cols = pts.clone();
        cols.extend(pts.iter().cloned());
        cols.push(vec![0, 0, 0]);
        assert!(covers_all_points(&FqMatrix::from_columns(&f, 3, &cols).unwrap()));
    }
}
