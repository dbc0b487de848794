//! Smith normal form with transforms, and cokernels of integer relation matrices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::hnf::HnfAccumulator;
use super::zmat::MatrixZ;
use super::AbelianGroupStructure;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    /// Diagonal `D = U·M·V` with `d_1 | d_2 | …`, nonnegative.
    pub d: MatrixZ,
    pub u: MatrixZ,
    pub v: MatrixZ,
    pub rank: usize,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn row_axpy(&mut self, target: usize, q: &BigInt, src: usize) {
        if q.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.u] {
            let s = m[src].clone();
            for (t, x) in m[target].iter_mut().zip(&s) {
                if !x.is_zero() {
                    *t -= q * x;
                }
            }
        }
    }

    fn col_axpy(&mut self, target: usize, q: &BigInt, src: usize) {
        if q.is_zero() {
            return;
        }
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                if !row[src].is_zero() {
                    let delta = q * &row[src];
                    row[target] -= delta;
                }
            }
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for m in [&mut self.a, &mut self.v] {
            for row in m.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
    }
}

/// Smith normal form by least-absolute-value pivoting.
pub fn snf(m: &MatrixZ) -> Snf {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.row_vecs().to_vec(),
        u: MatrixZ::identity(rows).into_row_vecs(),
        v: MatrixZ::identity(cols).into_row_vecs(),
    };
    let mut rank = 0;
    for t in 0..rows.min(cols) {
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                let x = &w.a[i][j];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < w.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let q = w.a[i][t].div_floor(&w.a[t][t]);
                    w.row_axpy(i, &q, t);
                    clean &= w.a[i][t].is_zero();
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let q = w.a[t][j].div_floor(&w.a[t][t]);
                    w.col_axpy(j, &q, t);
                    clean &= w.a[t][j].is_zero();
                }
            }
            if !clean {
                // move the smallest leftover in row/column t onto the pivot
                let mut pick: Option<(usize, usize)> = None;
                let cand = (t + 1..rows)
                    .map(|i| (i, t))
                    .chain((t + 1..cols).map(|j| (t, j)))
                    .filter(|&(i, j)| !w.a[i][j].is_zero());
                for (i, j) in cand {
                    if pick.is_none_or(|(pi, pj)| w.a[i][j].abs() < w.a[pi][pj].abs()) {
                        pick = Some((i, j));
                    }
                }
                if let Some((i, j)) = pick {
                    if j == t {
                        w.swap_rows(t, i);
                    } else {
                        w.swap_cols(t, j);
                    }
                }
                continue;
            }
            let bad = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&w.a[t][t]))
            });
            match bad {
                Some(i) => w.row_axpy(t, &BigInt::from(-1), i),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
        rank = t + 1;
    }
    Snf {
        d: MatrixZ::from_big_rows(cols, w.a),
        u: MatrixZ::from_big_rows(rows, w.u),
        v: MatrixZ::from_big_rows(cols, w.v),
        rank,
    }
}

/// Isomorphism `ℤⁿ / rowspan(relations) ≅ ⊕ ℤ/d_i ⊕ ℤ^f`, kept for coordinates.
#[derive(Clone, Debug)]
pub struct Cokernel {
    generators: usize,
    /// Generators eliminated by unit-pivot relations, applied before `v`.
    elimination: Option<UnitElimination>,
    /// Column transform: coordinates of `v` are `v·V` (then reduced).
    v: MatrixZ,
    /// Full SNF diagonal, units included.
    diagonal: Vec<BigInt>,
    structure: AbelianGroupStructure,
}

impl Cokernel {
    /// Accepts any number of relation rows; rows are first folded into a Hermite basis.
    pub fn from_rows<I>(generators: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<BigInt>>,
    {
        let mut acc = HnfAccumulator::new(generators);
        for r in rows {
            acc.insert(r);
        }
        Self::from_accumulator(&acc)
    }

    /// Relations with pivot 1 only express one generator through the others, so
    /// they are substituted away before the Smith form of what remains.
    pub fn from_accumulator(acc: &HnfAccumulator) -> Result<Self> {
        let h = acc.finish();
        let n = acc.cols();
        let mut unit_rows = Vec::new();
        let mut other_rows = Vec::new();
        for row in h.row_vecs() {
            let c = row.iter().position(|x| !x.is_zero()).expect("Hermite rows are nonzero");
            if row[c].is_one() {
                unit_rows.push((c, row));
            } else {
                other_rows.push(row);
            }
        }
        let mut is_unit = vec![false; n];
        for (c, _) in &unit_rows {
            is_unit[*c] = true;
        }
        let keep: Vec<usize> = (0..n).filter(|&c| !is_unit[c]).collect();
        let reduced: Vec<Vec<BigInt>> =
            other_rows.iter().map(|r| keep.iter().map(|&c| r[c].clone()).collect()).collect();
        let substitutions = unit_rows
            .iter()
            .map(|(c, r)| {
                let sparse = keep
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| !r[k].is_zero())
                    .map(|(pos, &k)| (pos, -r[k].clone()))
                    .collect();
                (*c, sparse)
            })
            .collect();
        let s = snf(&MatrixZ::from_big_rows(keep.len(), reduced));
        let diagonal = s.diagonal();
        let structure = AbelianGroupStructure::from_diagonal(&diagonal, keep.len())?;
        Ok(Cokernel {
            generators: n,
            elimination: Some(UnitElimination { keep, substitutions }),
            v: s.v,
            diagonal,
            structure,
        })
    }

    pub fn from_matrix(generators: usize, relations: &MatrixZ) -> Result<Self> {
        let s = snf(relations);
        let diagonal = s.diagonal();
        let structure = AbelianGroupStructure::from_diagonal(&diagonal, generators)?;
        Ok(Cokernel { generators, elimination: None, v: s.v, diagonal, structure })
    }

    pub fn structure(&self) -> &AbelianGroupStructure {
        &self.structure
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    /// Coordinates of a generator-space vector in `⊕ ℤ/d_i ⊕ ℤ^f`; unit factors are dropped.
    /// The class of `v` is trivial iff every coordinate is zero.
    pub fn coordinates(&self, v: &[BigInt]) -> Vec<BigInt> {
        let w = match &self.elimination {
            None => self.v.vec_mul(v),
            Some(e) => self.v.vec_mul(&e.apply(v)),
        };
        let mut out = Vec::new();
        for (i, x) in w.into_iter().enumerate() {
            match self.diagonal.get(i) {
                Some(d) if d.is_one() => {}
                Some(d) => out.push(x.mod_floor(d)),
                None => out.push(x),
            }
        }
        out
    }

    pub fn is_trivial_class(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug)]
struct UnitElimination {
    keep: Vec<usize>,
    /// `x_c = Σ coeff · x_{keep[pos]}` for each eliminated column `c`.
    substitutions: Vec<(usize, Vec<(usize, BigInt)>)>,
}

impl UnitElimination {
    fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut w: Vec<BigInt> = self.keep.iter().map(|&k| v[k].clone()).collect();
        for (c, sparse) in &self.substitutions {
            if v[*c].is_zero() {
                continue;
            }
            for (pos, coeff) in sparse {
                w[*pos] += &v[*c] * coeff;
            }
        }
        w
    }
}

/// Structure of `ℤ^generators / rowspan(relations)`.
pub fn cokernel_structure(relations: &MatrixZ, generators: usize) -> Result<AbelianGroupStructure> {
    let c = Cokernel::from_rows(generators, relations.row_vecs().iter().cloned())?;
    Ok(c.structure().clone())
}
