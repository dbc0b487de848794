use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense integer matrix with arbitrary-size entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixZ {
    rows: usize,
    cols: usize,
    data: Vec<Vec<BigInt>>,
}

impl MatrixZ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixZ { rows, cols, data: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(cols: usize, rows: &[Vec<T>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Mismatch(format!("every row must have {cols} entries")));
        }
        let data: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().cloned().map(Into::into).collect()).collect();
        Ok(MatrixZ { rows: data.len(), cols, data })
    }

    pub(crate) fn from_big_rows(cols: usize, data: Vec<Vec<BigInt>>) -> Self {
        debug_assert!(data.iter().all(|r| r.len() == cols));
        MatrixZ { rows: data.len(), cols, data }
    }

    pub fn diagonal<T: Into<BigInt> + Clone>(entries: &[T]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i][i] = e.clone().into();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[Vec<BigInt>] {
        &self.data
    }

    pub(crate) fn into_row_vecs(self) -> Vec<Vec<BigInt>> {
        self.data
    }

    pub fn transpose(&self) -> MatrixZ {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &MatrixZ) -> Result<MatrixZ> {
        if self.cols != other.rows {
            return Err(Error::Mismatch(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k][j];
                    if !b.is_zero() {
                        out.data[i][j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.cols];
        for (a, row) in v.iter().zip(&self.data) {
            if a.is_zero() {
                continue;
            }
            for (o, b) in out.iter_mut().zip(row) {
                *o += a * b;
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &MatrixZ) -> Result<MatrixZ> {
        if self.cols != other.cols {
            return Err(Error::Mismatch("column counts differ".into()));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(MatrixZ { rows: data.len(), cols: self.cols, data })
    }

    pub fn scaled(&self, k: &BigInt) -> MatrixZ {
        let data = self.data.iter().map(|r| r.iter().map(|x| x * k).collect()).collect();
        MatrixZ { rows: self.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.iter().all(Zero::is_zero))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::Mismatch("determinant of a non-square matrix".into()));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v.div_floor(&prev);
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        self.data.iter().map(|r| r.iter().map(|x| x.to_i64()).collect()).collect()
    }
}

impl fmt::Display for MatrixZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.data {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Entries serialize as JSON numbers when they fit in `i64`, else as decimal strings.
struct Entry<'a>(&'a BigInt);

impl Serialize for Entry<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct Row<'a>(&'a [BigInt]);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for x in self.0 {
            seq.serialize_element(&Entry(x))?;
        }
        seq.end()
    }
}

impl Serialize for MatrixZ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for row in &self.data {
            seq.serialize_element(&Row(row))?;
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Int(i64),
    Text(String),
}

impl<'de> Deserialize<'de> for MatrixZ {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: Vec<Vec<RawEntry>> = Vec::deserialize(d)?;
        let cols = raw.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(raw.len());
        for row in raw {
            if row.len() != cols {
                return Err(de::Error::custom("ragged matrix"));
            }
            let parsed: std::result::Result<Vec<BigInt>, D::Error> = row
                .into_iter()
                .map(|e| match e {
                    RawEntry::Int(v) => Ok(BigInt::from(v)),
                    RawEntry::Text(t) => t.parse().map_err(de::Error::custom),
                })
                .collect();
            data.push(parsed?);
        }
        Ok(MatrixZ { rows: data.len(), cols, data })
    }
}
