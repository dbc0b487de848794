//! Dense matrices over 𝔽_p and incremental echelon bases.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[inline]
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and small
    let mut base = a % p;
    let mut e = p - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

#[inline]
pub(crate) fn reduce_i64(c: i64, p: u64) -> u64 {
    c.rem_euclid(p as i64) as u64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixModP {
    p: u64,
    rows: usize,
    cols: usize,
    #[serde(rename = "entries")]
    data: Vec<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: MatrixModP,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl MatrixModP {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        MatrixModP { p, rows, cols, data: vec![vec![0; cols]; rows] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i][i] = 1 % p;
        }
        m
    }

    pub fn from_rows(p: u64, cols: usize, rows: Vec<Vec<i64>>) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Mismatch(format!("every row must have {cols} entries")));
        }
        let data: Vec<Vec<u64>> =
            rows.into_iter().map(|r| r.into_iter().map(|c| reduce_i64(c, p)).collect()).collect();
        Ok(MatrixModP { p, rows: data.len(), cols, data })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i][j]
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i]
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        self.data
            .iter()
            .map(|row| row.iter().zip(v).fold(0u64, |acc, (a, b)| (acc + a * b) % self.p))
            .collect()
    }

    pub fn rref(&self) -> Rref {
        let mut basis = EchelonBasis::new(self.p, self.cols, PivotOrder::First);
        for row in &self.data {
            basis.insert(row.clone());
        }
        let mut rows = basis.into_rows();
        rows.sort_by_key(|(pivot, _)| *pivot);
        let pivots: Vec<usize> = rows.iter().map(|(c, _)| *c).collect();
        let rank = pivots.len();
        let mut data: Vec<Vec<u64>> = rows.into_iter().map(|(_, r)| r).collect();
        data.resize(self.rows.max(rank), vec![0; self.cols]);
        Rref { matrix: MatrixModP { p: self.p, rows: data.len(), cols: self.cols, data }, rank, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of the right kernel `{v : Mv = 0}`.
    pub fn kernel_basis(&self) -> Vec<Vec<u64>> {
        let Rref { matrix, pivots, .. } = self.rref();
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![0u64; self.cols];
                v[f] = 1 % p;
                for (k, &c) in pivots.iter().enumerate() {
                    v[c] = (p - matrix.data[k][f]) % p;
                }
                v
            })
            .collect()
    }
}

/// Which nonzero column becomes the pivot of an inserted row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotOrder {
    First,
    Last,
}

/// Fully reduced echelon basis of a subspace of 𝔽_p^n, grown one vector at a time.
///
/// Every stored row has pivot entry 1 and zeros at all other pivot columns, so
/// [`EchelonBasis::reduce`] yields a canonical representative of `v` modulo the span.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    p: u64,
    dim: usize,
    order: PivotOrder,
    rows: Vec<(usize, Vec<u64>)>,
    pivot_of_col: Vec<Option<usize>>,
}

impl EchelonBasis {
    pub fn new(p: u64, dim: usize, order: PivotOrder) -> Self {
        EchelonBasis { p, dim, order, rows: Vec::new(), pivot_of_col: vec![None; dim] }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        self.rows.iter().map(|(_, r)| r.as_slice())
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|(c, _)| *c)
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of_col[col].is_some()
    }

    /// Columns without a pivot, ascending; unit vectors there span a complement.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.dim).filter(|&c| self.pivot_of_col[c].is_none()).collect()
    }

    fn into_rows(self) -> Vec<(usize, Vec<u64>)> {
        self.rows
    }

    pub fn reduce_in_place(&self, v: &mut [u64]) {
        let p = self.p;
        for (c, row) in &self.rows {
            let f = v[*c];
            if f == 0 {
                continue;
            }
            let m = p - f;
            for (x, &r) in v.iter_mut().zip(row) {
                if r != 0 {
                    *x = (*x + m * r) % p;
                }
            }
        }
    }

    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        let mut w = v.to_vec();
        self.reduce_in_place(&mut w);
        w
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce(v).iter().all(|&c| c == 0)
    }

    /// Coordinates of `v` against the stored rows, or `None` if `v` is outside the span.
    pub fn coords(&self, v: &[u64]) -> Option<Vec<u64>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.rows.iter().map(|(c, _)| v[*c]).collect())
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        debug_assert_eq!(v.len(), self.dim);
        let p = self.p;
        self.reduce_in_place(&mut v);
        let pivot = match self.order {
            PivotOrder::First => v.iter().position(|&c| c != 0),
            PivotOrder::Last => v.iter().rposition(|&c| c != 0),
        };
        let Some(c) = pivot else { return false };
        let inv = inv_mod(v[c], p);
        for x in v.iter_mut() {
            *x = *x * inv % p;
        }
        for (_, row) in self.rows.iter_mut() {
            let f = row[c];
            if f == 0 {
                continue;
            }
            let m = p - f;
            for (x, &r) in row.iter_mut().zip(&v) {
                if r != 0 {
                    *x = (*x + m * r) % p;
                }
            }
        }
        self.pivot_of_col[c] = Some(self.rows.len());
        self.rows.push((c, v));
        true
    }

    /// Rank as of all vectors inserted so far equals `ambient_dim`.
    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_ranks() {
        assert_eq!(MatrixModP::identity(2, 3).rank(), 3);
        assert_eq!(MatrixModP::zeros(2, 3, 3).rank(), 0);
        let m = MatrixModP::from_rows(2, 2, vec![vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn kernels() {
        assert!(MatrixModP::identity(2, 3).kernel_basis().is_empty());
        assert_eq!(MatrixModP::zeros(2, 2, 2).kernel_basis().len(), 2);
        let m = MatrixModP::from_rows(2, 2, vec![vec![1, 1]]).unwrap();
        assert_eq!(m.kernel_basis(), vec![vec![1, 1]]);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let m = MatrixModP::from_rows(5, 4, vec![vec![1, 2, 3, 4], vec![2, 4, 1, 0], vec![3, 1, 4, 4]])
            .unwrap();
        let ker = m.kernel_basis();
        assert_eq!(ker.len(), 4 - m.rank());
        for v in ker {
            assert!(m.mul_vec(&v).iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn rref_is_idempotent() {
        let m = MatrixModP::from_rows(3, 3, vec![vec![2, 1, 0], vec![1, 2, 1], vec![0, 0, 2]]).unwrap();
        let once = m.rref();
        let twice = once.matrix.rref();
        assert_eq!(once.matrix, twice.matrix);
        assert_eq!(once.rank, twice.rank);
    }

    #[test]
    fn last_pivot_keeps_first_column_free() {
        let mut b = EchelonBasis::new(2, 4, PivotOrder::Last);
        b.insert(vec![1, 1, 1, 1]);
        assert_eq!(b.free_columns(), vec![0, 1, 2]);
        assert_eq!(b.reduce(&[0, 0, 0, 1]), vec![1, 1, 1, 0]);
    }
}
