//! The three random models: M1 (uniform columns), M2 (a uniform m-subset of
//! PG(n-1, q)) and M3 (each projective point kept independently).

use num_traits::ToPrimitive;
use rand::seq::index;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::{random_uniform_matrix, FqMatrix, FqVector};
use crate::matroid::RepMatroid;
use crate::theory::q_integer;

/// Largest `[n]_q` for which M3 is sampled point by point.
const M3_MAX_POINTS: u64 = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Model {
    M1 { m: usize },
    M2 { m: usize },
    M3 { p: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelSample {
    pub model: Model,
    pub n: usize,
    pub q: u32,
    /// Columns of the sample. For M2 and M3 these are canonical point
    /// representatives (first nonzero coordinate 1).
    #[serde(skip)]
    pub matrix: FqMatrix,
    /// Point indices in [`projective_point`] order, for M2 and M3.
    pub points: Option<Vec<u64>>,
}

impl ModelSample {
    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }
}

fn point_count(n: usize, q: u32) -> Result<u64> {
    q_integer(n as u64, q as u64)
        .to_u64()
        .ok_or_else(|| Error::InvalidParam(format!("[{n}]_{q} does not fit in 64 bits")))
}

/// Point `idx` of PG(n-1, q), in the order of
/// [`projective_points`](crate::matroid::projective_points).
pub fn projective_point(field: &Field, n: usize, mut idx: u64) -> FqVector {
    let q = field.q() as u64;
    for lead in 0..n {
        let block = q.pow((n - lead - 1) as u32);
        if idx < block {
            let mut v = vec![0 as Elem; n];
            v[lead] = 1;
            for slot in v.iter_mut().skip(lead + 1) {
                *slot = (idx % q) as Elem;
                idx /= q;
            }
            return v;
        }
        idx -= block;
    }
    panic!("point index out of range");
}

pub fn sample_m1<R: Rng + ?Sized>(n: usize, field: &Field, m: usize, rng: &mut R) -> ModelSample {
    ModelSample {
        model: Model::M1 { m },
        n,
        q: field.q(),
        matrix: random_uniform_matrix(n, m, field, rng),
        points: None,
    }
}

/// M1 conditioned on being simple, by rejection. Fails after `max_tries`.
pub fn sample_m1_simple<R: Rng + ?Sized>(
    n: usize,
    field: &Field,
    m: usize,
    rng: &mut R,
    max_tries: usize,
) -> Result<ModelSample> {
    for _ in 0..max_tries {
        let s = sample_m1(n, field, m, rng);
        if RepMatroid::new(s.matrix.clone()).is_simple() {
            return Ok(s);
        }
    }
    Err(Error::InvalidParam(format!(
        "no simple sample in {max_tries} tries"
    )))
}

fn from_points(n: usize, field: &Field, model: Model, mut pts: Vec<u64>) -> ModelSample {
    pts.sort_unstable();
    let cols: Vec<FqVector> = pts.iter().map(|&i| projective_point(field, n, i)).collect();
    ModelSample {
        model,
        n,
        q: field.q(),
        matrix: FqMatrix::from_columns(field, n, &cols).expect("points have length n"),
        points: Some(pts),
    }
}

/// A uniform m-subset of the projective points.
pub fn sample_m2<R: Rng + ?Sized>(
    n: usize,
    field: &Field,
    m: usize,
    rng: &mut R,
) -> Result<ModelSample> {
    let total = point_count(n, field.q())?;
    if m as u64 > total {
        return Err(Error::InvalidParam(format!(
            "m = {m} exceeds the {total} points of PG({}, {})",
            n.saturating_sub(1),
            field.q()
        )));
    }
    let total = usize::try_from(total)
        .map_err(|_| Error::InvalidParam("too many points".into()))?;
    let pts: Vec<u64> = index::sample(rng, total, m)
        .into_iter()
        .map(|i| i as u64)
        .collect();
    Ok(from_points(n, field, Model::M2 { m }, pts))
}

/// Each projective point independently with probability `p`.
pub fn sample_m3<R: Rng + ?Sized>(
    n: usize,
    field: &Field,
    p: f64,
    rng: &mut R,
) -> Result<ModelSample> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParam(format!("p = {p} is not a probability")));
    }
    let total = point_count(n, field.q())?;
    if total > M3_MAX_POINTS {
        return Err(Error::InvalidParam(format!(
            "M3 over {total} points is beyond the sampler's limit"
        )));
    }
    let pts: Vec<u64> = (0..total).filter(|_| rng.gen_bool(p)).collect();
    Ok(from_points(n, field, Model::M3 { p }, pts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::projective_points;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn point_order_matches_enumeration() {
        for (q, n) in [(2u32, 4usize), (3, 3), (4, 2)] {
            let f = Field::new(q).unwrap();
            let all = projective_points(&f, n);
            for (i, v) in all.iter().enumerate() {
                assert_eq!(&projective_point(&f, n, i as u64), v);
            }
        }
    }

    #[test]
    fn edge_cases() {
        let f = Field::new(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let all = sample_m2(3, &f, 7, &mut rng).unwrap();
        assert_eq!(all.points.as_ref().unwrap(), &(0..7).collect::<Vec<u64>>());
        assert!(RepMatroid::new(all.matrix.clone()).is_simple());
        assert!(sample_m2(3, &f, 8, &mut rng).is_err());
        let empty = sample_m3(3, &f, 0.0, &mut rng).unwrap();
        assert_eq!(empty.matrix.m(), 0);
        let full = sample_m3(3, &f, 1.0, &mut rng).unwrap();
        assert_eq!(full.matrix.m(), 7);
        assert!(sample_m3(3, &f, 1.5, &mut rng).is_err());
    }

    #[test]
    fn m2_samples_are_distinct_points() {
        let f = Field::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let s = sample_m2(3, &f, 5, &mut rng).unwrap();
            assert_eq!(s.matrix.m(), 5);
            assert!(RepMatroid::new(s.matrix).is_simple());
        }
    }
}
