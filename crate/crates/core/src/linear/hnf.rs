//! Row-style Hermite normal form over ℤ.
//!
//! Convention: nonzero rows first, upper triangular (each pivot strictly right
//! of the previous one), positive pivots, entries above a pivot reduced into
//! `[0, pivot)`. The Hermite basis of a lattice is unique.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::zmat::MatrixZ;
use crate::error::{Error, Result};

fn sub_multiple(target: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(src) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

fn negate(row: &mut [BigInt]) {
    for x in row.iter_mut() {
        *x = -std::mem::take(x);
    }
}

/// Hermite form `H` and unimodular `U` with `U · M = H`; also returns the rank.
///
/// Rows of `U` from index `rank` on form a basis of the integer left kernel of `M`.
pub fn hnf_with_transform(m: &MatrixZ) -> (MatrixZ, MatrixZ, usize) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<BigInt>> = m.row_vecs().to_vec();
    let mut u: Vec<Vec<BigInt>> = MatrixZ::identity(rows).into_row_vecs();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(best) = best else { break };
            a.swap(r, best);
            u.swap(r, best);
            let mut clean = true;
            for i in r + 1..rows {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                let (top, bottom) = a.split_at_mut(i);
                sub_multiple(&mut bottom[0], &q, &top[r]);
                let (top, bottom) = u.split_at_mut(i);
                sub_multiple(&mut bottom[0], &q, &top[r]);
                if !a[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            negate(&mut a[r]);
            negate(&mut u[r]);
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            let (top, bottom) = a.split_at_mut(r);
            sub_multiple(&mut top[i], &q, &bottom[0]);
            let (top, bottom) = u.split_at_mut(r);
            sub_multiple(&mut top[i], &q, &bottom[0]);
        }
        r += 1;
    }
    (MatrixZ::from_big_rows(cols, a), MatrixZ::from_big_rows(rows, u), r)
}

/// Hermite basis of the row lattice: only the nonzero rows.
pub fn hnf(m: &MatrixZ) -> MatrixZ {
    let (h, _, rank) = hnf_with_transform(m);
    MatrixZ::from_big_rows(m.cols(), h.into_row_vecs().into_iter().take(rank).collect())
}

/// Integer left kernel `{x : x·M = 0}` as a row basis.
pub fn left_kernel(m: &MatrixZ) -> MatrixZ {
    let (_, u, rank) = hnf_with_transform(m);
    MatrixZ::from_big_rows(m.rows(), u.into_row_vecs().into_iter().skip(rank).collect())
}

/// Builds a Hermite basis from a stream of generators while keeping at most
/// one row per pivot column; suited to long relation lists over few columns.
#[derive(Clone, Debug)]
pub struct HnfAccumulator {
    cols: usize,
    pivots: Vec<Option<Vec<BigInt>>>,
}

impl HnfAccumulator {
    pub fn new(cols: usize) -> Self {
        HnfAccumulator { cols, pivots: vec![None; cols] }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivots.iter().filter(|p| p.is_some()).count()
    }

    pub fn insert_i64(&mut self, row: &[i64]) {
        self.insert(row.iter().map(|&x| BigInt::from(x)).collect());
    }

    pub fn insert(&mut self, mut row: Vec<BigInt>) {
        debug_assert_eq!(row.len(), self.cols);
        let mut c = 0;
        while c < self.cols {
            if row[c].is_zero() {
                c += 1;
                continue;
            }
            match self.pivots[c].take() {
                None => {
                    if row[c].is_negative() {
                        negate(&mut row);
                    }
                    self.reduce_tail(&mut row, c);
                    self.pivots[c] = Some(row);
                    return;
                }
                Some(mut piv) => {
                    let (a, b) = (piv[c].clone(), row[c].clone());
                    if b.is_multiple_of(&a) {
                        sub_multiple(&mut row, &(&b / &a), &piv);
                        self.pivots[c] = Some(piv);
                    } else {
                        let e = a.extended_gcd(&b);
                        let (g, s, t) = (e.gcd, e.x, e.y);
                        let mut new_piv: Vec<BigInt> =
                            piv.iter().zip(&row).map(|(x, y)| &s * x + &t * y).collect();
                        let (ag, bg) = (&a / &g, &b / &g);
                        let rest: Vec<BigInt> =
                            row.iter().zip(&piv).map(|(y, x)| &ag * y - &bg * x).collect();
                        if new_piv[c].is_negative() {
                            negate(&mut new_piv);
                        }
                        self.reduce_tail(&mut new_piv, c);
                        piv = new_piv;
                        self.pivots[c] = Some(piv);
                        row = rest;
                    }
                    c += 1;
                }
            }
        }
    }

    /// Reduces entries right of `c` against existing pivots to curb growth.
    fn reduce_tail(&self, row: &mut [BigInt], c: usize) {
        for d in c + 1..self.cols {
            if let Some(piv) = &self.pivots[d] {
                if !row[d].is_zero() {
                    let q = row[d].div_floor(&piv[d]);
                    sub_multiple(row, &q, piv);
                }
            }
        }
    }

    /// Final Hermite basis.
    pub fn finish(&self) -> MatrixZ {
        let mut rows: Vec<Vec<BigInt>> = self.pivots.iter().flatten().cloned().collect();
        let pivot_cols: Vec<usize> = (0..self.cols).filter(|&c| self.pivots[c].is_some()).collect();
        for (k, &c) in pivot_cols.iter().enumerate().rev() {
            for i in 0..k {
                let q = rows[i][c].div_floor(&rows[k][c]);
                if !q.is_zero() {
                    let (top, bottom) = rows.split_at_mut(k);
                    sub_multiple(&mut top[i], &q, &bottom[0]);
                }
            }
        }
        MatrixZ::from_big_rows(self.cols, rows)
    }
}

/// Whether `v` lies in the lattice with Hermite basis `h`.
pub fn hnf_contains(h: &MatrixZ, v: &[BigInt]) -> bool {
    hnf_solve(h, v).is_some()
}

/// Coefficients `x` with `x · h = v`, if `v` is in the lattice of the Hermite basis `h`.
pub fn hnf_solve(h: &MatrixZ, v: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest = v.to_vec();
    let mut coeffs = Vec::with_capacity(h.rows());
    let mut col = 0;
    for row in h.row_vecs() {
        let c = row.iter().position(|x| !x.is_zero())?;
        if rest[col..c].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let (q, r) = rest[c].div_mod_floor(&row[c]);
        if !r.is_zero() {
            return None;
        }
        sub_multiple(&mut rest, &q, row);
        coeffs.push(q);
        col = c + 1;
    }
    rest.iter().all(Zero::is_zero).then_some(coeffs)
}

fn check_full_rank(m: &MatrixZ) -> Result<MatrixZ> {
    let h = hnf(m);
    if h.rows() != m.cols() {
        return Err(Error::RankDeficient { rank: h.rows(), dim: m.cols() });
    }
    Ok(h)
}

/// Hermite basis of the intersection of two full-rank lattices in ℤⁿ (rows are generators).
///
/// Pairs `(x, y)` with `x·A = y·B` come from the integer left kernel of `[A; B]`;
/// the intersection is generated by the corresponding `x·A`.
pub fn lattice_intersect(a: &MatrixZ, b: &MatrixZ) -> Result<MatrixZ> {
    if a.cols() != b.cols() {
        return Err(Error::Mismatch("lattices live in different ambient spaces".into()));
    }
    let ha = check_full_rank(a)?;
    let hb = check_full_rank(b)?;
    let stacked = ha.vstack(&hb)?;
    let kernel = left_kernel(&stacked);
    let n = ha.rows();
    let gens: Vec<Vec<BigInt>> = kernel.row_vecs().iter().map(|k| ha.vec_mul(&k[..n])).collect();
    Ok(hnf(&MatrixZ::from_big_rows(a.cols(), gens)))
}

/// `|det|` of a full-rank Hermite basis, i.e. the lattice index in ℤⁿ.
pub fn lattice_index(h: &MatrixZ) -> BigInt {
    (0..h.rows()).fold(BigInt::one(), |acc, i| {
        let c = h.row(i).iter().find(|x| !x.is_zero()).cloned().unwrap_or_default();
        acc * c
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: &[Vec<i64>]) -> MatrixZ {
        MatrixZ::from_rows(rows[0].len(), rows).unwrap()
    }

    #[test]
    fn hermite_convention() {
        let h = hnf(&z(&[vec![2, 3], vec![4, 1]]));
        // lattice index |2·1 − 3·4| = 10
        assert_eq!(h, z(&[vec![2, 3], vec![0, 5]]));
    }

    #[test]
    fn transform_reconstructs() {
        let m = z(&[vec![3, 1, 4], vec![1, 5, 9], vec![2, 6, 5], vec![3, 5, 8]]);
        let (h, u, rank) = hnf_with_transform(&m);
        assert_eq!(u.mul(&m).unwrap(), h);
        assert_eq!(u.det().unwrap().abs(), BigInt::one());
        assert_eq!(rank, 3);
        assert_eq!(left_kernel(&m).mul(&m).unwrap(), MatrixZ::zeros(1, 3));
    }

    #[test]
    fn accumulator_matches_batch() {
        let rows = vec![vec![4, 6, 2], vec![2, 2, 8], vec![6, 0, 4], vec![0, 3, 9], vec![1, 1, 1]];
        let mut acc = HnfAccumulator::new(3);
        for r in &rows {
            acc.insert_i64(r);
        }
        assert_eq!(acc.finish(), hnf(&z(&rows)));
    }

    #[test]
    fn intersections() {
        let two = z(&[vec![2, 0], vec![0, 2]]);
        let three = z(&[vec![3, 0], vec![0, 3]]);
        assert_eq!(lattice_intersect(&two, &three).unwrap(), z(&[vec![6, 0], vec![0, 6]]));
        let l = z(&[vec![2, 0], vec![1, 1]]);
        assert_eq!(lattice_intersect(&l, &l).unwrap(), hnf(&l));
        assert_eq!(lattice_intersect(&l, &two).unwrap(), z(&[vec![2, 0], vec![0, 2]]));
        assert!(matches!(
            lattice_intersect(&z(&[vec![1, 1]]), &two),
            Err(Error::RankDeficient { rank: 1, dim: 2 })
        ));
    }

    #[test]
    fn membership() {
        let h = hnf(&z(&[vec![2, 0], vec![1, 1]]));
        assert!(hnf_contains(&h, &[BigInt::from(3), BigInt::from(1)]));
        assert!(!hnf_contains(&h, &[BigInt::from(1), BigInt::from(0)]));
    }
}
