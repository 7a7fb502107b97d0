//! Incremental reduced row echelon form of a growing column set.
//!
//! Each accepted column becomes a basis vector of the span, kept fully
//! reduced: basis vector `i` has a 1 at its pivot coordinate and every other
//! basis vector has a 0 there. With dependency tracking enabled, every basis
//! vector also carries its expression as a combination of the columns fed so
//! far, so a dependent column immediately yields its kernel vector.

use crate::field::{Elem, Field};
use crate::matrix::FqVector;

/// Outcome of feeding one column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Insert {
    /// The column enlarged the span; `pivot` is its pivot coordinate.
    Independent { pivot: usize },
    /// The column lies in the span of the earlier ones. With tracking enabled
    /// this holds the kernel vector over all columns so far, with a 1 in the
    /// new column's coordinate.
    Dependent(Option<FqVector>),
}

impl Insert {
    pub fn is_dependent(&self) -> bool {
        matches!(self, Insert::Dependent(_))
    }
}

#[derive(Clone)]
struct GenRow {
    v: Vec<Elem>,
    pivot: usize,
    combo: Vec<Elem>,
}

#[derive(Clone)]
struct BinRow {
    v: Vec<u64>,
    pivot: usize,
    combo: Vec<u64>,
}

#[derive(Clone)]
enum Engine {
    General(Vec<GenRow>),
    Binary(Vec<BinRow>),
}

/// Incremental RREF over F_q with an optional column-combination record.
#[derive(Clone)]
pub struct RrefState {
    field: Field,
    n: usize,
    m: usize,
    track: bool,
    engine: Engine,
    kernel: Vec<FqVector>,
}

#[inline]
fn bit(words: &[u64], i: usize) -> bool {
    words.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
}

#[inline]
fn xor_into(dst: &mut Vec<u64>, src: &[u64]) {
    if dst.len() < src.len() {
        dst.resize(src.len(), 0);
    }
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

fn pack(v: &[Elem]) -> Vec<u64> {
    let mut w = vec![0u64; v.len().div_ceil(64)];
    for (i, &x) in v.iter().enumerate() {
        if x != 0 {
            w[i / 64] |= 1 << (i % 64);
        }
    }
    w
}

fn unpack(w: &[u64], len: usize) -> FqVector {
    (0..len).map(|i| bit(w, i) as Elem).collect()
}

impl RrefState {
    /// Starts an empty state for columns of length `n`. `track_dependencies`
    /// enables kernel extraction at the cost of `O(rank * m)` extra work per column.
    pub fn new(field: &Field, n: usize, track_dependencies: bool) -> RrefState {
        let engine = if field.is_binary() {
            Engine::Binary(Vec::new())
        } else {
            Engine::General(Vec::new())
        };
        RrefState {
            field: field.clone(),
            n,
            m: 0,
            track: track_dependencies,
            engine,
            kernel: Vec::new(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of columns fed so far.
    pub fn processed(&self) -> usize {
        self.m
    }

    pub fn rank(&self) -> usize {
        match &self.engine {
            Engine::General(rows) => rows.len(),
            Engine::Binary(rows) => rows.len(),
        }
    }

    pub fn corank(&self) -> usize {
        self.m - self.rank()
    }

    pub fn tracks_dependencies(&self) -> bool {
        self.track
    }

    /// Pivot coordinates of the basis vectors, in insertion order.
    pub fn pivots(&self) -> Vec<usize> {
        match &self.engine {
            Engine::General(rows) => rows.iter().map(|r| r.pivot).collect(),
            Engine::Binary(rows) => rows.iter().map(|r| r.pivot).collect(),
        }
    }

    /// The reduced basis vectors of the span, in insertion order.
    pub fn basis(&self) -> Vec<FqVector> {
        match &self.engine {
            Engine::General(rows) => rows.iter().map(|r| r.v.clone()).collect(),
            Engine::Binary(rows) => rows.iter().map(|r| unpack(&r.v, self.n)).collect(),
        }
    }

    /// Kernel vectors collected at each dependent column, padded to the
    /// current column count. They form a basis of the kernel of the matrix
    /// fed so far. Empty when tracking is off.
    pub fn kernel_basis(&self) -> Vec<FqVector> {
        self.kernel
            .iter()
            .map(|k| {
                let mut k = k.clone();
                k.resize(self.m, 0);
                k
            })
            .collect()
    }

    /// Kernel vectors without padding; vector `i` has length equal to the
    /// index of its dependent column plus one.
    pub fn kernel_raw(&self) -> &[FqVector] {
        &self.kernel
    }

    /// Whether `v` lies in the current span.
    pub fn contains(&self, v: &[Elem]) -> bool {
        assert_eq!(v.len(), self.n);
        match &self.engine {
            Engine::General(rows) => {
                let f = &self.field;
                let mut w = v.to_vec();
                for r in rows {
                    let a = w[r.pivot];
                    if a != 0 {
                        f.axpy(&mut w, f.neg(a), &r.v);
                    }
                }
                w.iter().all(|&x| x == 0)
            }
            Engine::Binary(rows) => {
                let mut w = pack(v);
                for r in rows {
                    if bit(&w, r.pivot) {
                        xor_into(&mut w, &r.v);
                    }
                }
                w.iter().all(|&x| x == 0)
            }
        }
    }

    /// Feeds one column.
    pub fn insert(&mut self, v: &[Elem]) -> Insert {
        assert_eq!(v.len(), self.n, "column has wrong dimension");
        let idx = self.m;
        self.m += 1;
        let track = self.track;
        match &mut self.engine {
            Engine::General(rows) => {
                let f = &self.field;
                let mut w = v.to_vec();
                let mut combo: Vec<Elem> = if track { vec![0; idx + 1] } else { Vec::new() };
                for r in rows.iter() {
                    let a = w[r.pivot];
                    if a != 0 {
                        f.axpy(&mut w, f.neg(a), &r.v);
                        if track {
                            f.axpy(&mut combo[..r.combo.len()], a, &r.combo);
                        }
                    }
                }
                match w.iter().position(|&x| x != 0) {
                    None => {
                        if !track {
                            return Insert::Dependent(None);
                        }
                        // v = sum combo_j col_j, so (-combo, 1) is in the kernel.
                        let mut k: FqVector = combo.iter().map(|&c| f.neg(c)).collect();
                        k[idx] = 1;
                        self.kernel.push(k.clone());
                        Insert::Dependent(Some(k))
                    }
                    Some(p) => {
                        let inv = f.inv(w[p]).unwrap();
                        f.scale(&mut w, inv);
                        if track {
                            // new basis vector = (col_idx - combo) / lead
                            for c in combo.iter_mut() {
                                *c = f.neg(*c);
                            }
                            combo[idx] = 1;
                            f.scale(&mut combo, inv);
                        }
                        for r in rows.iter_mut() {
                            let b = r.v[p];
                            if b != 0 {
                                let nb = f.neg(b);
                                f.axpy(&mut r.v, nb, &w);
                                if track {
                                    r.combo.resize(idx + 1, 0);
                                    f.axpy(&mut r.combo, nb, &combo);
                                }
                            }
                        }
                        rows.push(GenRow {
                            v: w,
                            pivot: p,
                            combo,
                        });
                        Insert::Independent { pivot: p }
                    }
                }
            }
            Engine::Binary(rows) => {
                let mut w = pack(v);
                let mut combo: Vec<u64> = Vec::new();
                for r in rows.iter() {
                    if bit(&w, r.pivot) {
                        xor_into(&mut w, &r.v);
                        if track {
                            xor_into(&mut combo, &r.combo);
                        }
                    }
                }
                let lead = w
                    .iter()
                    .enumerate()
                    .find(|(_, &x)| x != 0)
                    .map(|(i, x)| i * 64 + x.trailing_zeros() as usize);
                if track {
                    combo.resize((idx + 1).div_ceil(64), 0);
                    combo[idx / 64] |= 1 << (idx % 64);
                }
                match lead {
                    None => {
                        if !track {
                            return Insert::Dependent(None);
                        }
                        let k = unpack(&combo, idx + 1);
                        self.kernel.push(k.clone());
                        Insert::Dependent(Some(k))
                    }
                    Some(p) => {
                        for r in rows.iter_mut() {
                            if bit(&r.v, p) {
                                xor_into(&mut r.v, &w);
                                if track {
                                    xor_into(&mut r.combo, &combo);
                                }
                            }
                        }
                        rows.push(BinRow {
                            v: w,
                            pivot: p,
                            combo,
                        });
                        Insert::Independent { pivot: p }
                    }
                }
            }
        }
    }
}
