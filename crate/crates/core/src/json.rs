//! Wire representations: complex numbers as `[re, im]`, vectors as arrays of
//! pairs, matrices as nested row arrays of pairs.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Pair = [f64; 2];

pub fn to_pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

pub fn from_pair(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

pub fn vector_to_pairs(v: &DVector<Complex64>) -> Vec<Pair> {
    v.iter().copied().map(to_pair).collect()
}

pub fn vector_from_pairs(pairs: &[Pair]) -> DVector<Complex64> {
    DVector::from_iterator(pairs.len(), pairs.iter().copied().map(from_pair))
}

pub fn matrix_to_rows(m: &DMatrix<Complex64>) -> Vec<Vec<Pair>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| to_pair(m[(i, j)])).collect())
        .collect()
}

pub fn matrix_from_rows(rows: &[Vec<Pair>]) -> Result<DMatrix<Complex64>> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::Descriptor("empty matrix".into()));
    }
    let m = rows[0].len();
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::Descriptor("ragged matrix rows".into()));
    }
    Ok(DMatrix::from_fn(n, m, |i, j| from_pair(rows[i][j])))
}

/// `serde(with = "complex_pair")` adapter.
pub mod complex_pair {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        to_pair(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        Pair::deserialize(d).map(from_pair)
    }
}

/// Same as [`complex_pair`] for optional fields.
pub mod opt_complex_pair {
    use super::*;

    pub fn serialize<S: Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
        z.map(to_pair).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Complex64>, D::Error> {
        Option::<Pair>::deserialize(d).map(|p| p.map(from_pair))
    }
}
