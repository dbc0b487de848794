//! Exact linear algebra: 𝔽_p row reduction, Hermite and Smith forms over ℤ,
//! lattice intersection, and classification of finitely generated abelian groups.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub mod hnf;
pub mod modp;
pub mod snf;
pub mod zmat;

pub use hnf::{hnf, hnf_contains, hnf_solve, hnf_with_transform, lattice_index, lattice_intersect, left_kernel, HnfAccumulator};
pub use modp::{EchelonBasis, MatrixModP, PivotOrder, Rref};
pub use snf::{cokernel_structure, snf, Cokernel, Snf};
pub use zmat::MatrixZ;

/// `ℤ/d_1 × … × ℤ/d_k × ℤ^f` with `1 < d_1 | d_2 | … | d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroupStructure {
    invariant_factors: Vec<u64>,
    free_rank: usize,
}

impl AbelianGroupStructure {
    pub fn new(invariant_factors: Vec<u64>, free_rank: usize) -> Result<Self> {
        if invariant_factors.iter().any(|&d| d <= 1) {
            return Err(Error::Mismatch("invariant factors must exceed 1".into()));
        }
        if invariant_factors.windows(2).any(|w| w[1] % w[0] != 0) {
            return Err(Error::Mismatch("invariant factors must form a divisibility chain".into()));
        }
        Ok(AbelianGroupStructure { invariant_factors, free_rank })
    }

    pub fn trivial() -> Self {
        AbelianGroupStructure { invariant_factors: Vec::new(), free_rank: 0 }
    }

    /// `(ℤ/p)^r`.
    pub fn elementary(p: u64, r: usize) -> Self {
        AbelianGroupStructure { invariant_factors: vec![p; r], free_rank: 0 }
    }

    /// From an SNF diagonal of a relation matrix on `generators` generators.
    pub fn from_diagonal(diagonal: &[BigInt], generators: usize) -> Result<Self> {
        let mut factors = Vec::new();
        for d in diagonal {
            if d.is_one() || d.is_zero() {
                continue;
            }
            factors.push(d.to_u64().ok_or_else(|| Error::Overflow(format!("invariant factor {d}")))?);
        }
        let nonzero = diagonal.iter().filter(|d| !d.is_zero()).count();
        Self::new(factors, generators - nonzero)
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Group order, `None` when infinite or beyond `u64`.
    pub fn order(&self) -> Option<u64> {
        if !self.is_finite() {
            return None;
        }
        self.invariant_factors.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d))
    }

    /// Number of cyclic factors.
    pub fn rank(&self) -> usize {
        self.invariant_factors.len() + self.free_rank
    }

    pub fn is_elementary_abelian(&self, p: u64) -> bool {
        self.is_finite() && self.invariant_factors.iter().all(|&d| d == p)
    }

    pub fn to_text(&self) -> String {
        if self.is_trivial() {
            return "trivial".to_string();
        }
        let mut parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("ℤ/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "ℤ".into() } else { format!("ℤ^{}", self.free_rank) });
        }
        parts.join(" × ")
    }
}

impl fmt::Display for AbelianGroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_validation() {
        assert!(AbelianGroupStructure::new(vec![2, 3], 0).is_err());
        assert!(AbelianGroupStructure::new(vec![1], 0).is_err());
        let s = AbelianGroupStructure::new(vec![2, 4], 1).unwrap();
        assert_eq!(s.to_text(), "ℤ/2 × ℤ/4 × ℤ");
        assert_eq!(s.order(), None);
        assert_eq!(AbelianGroupStructure::elementary(3, 2).order(), Some(9));
        assert_eq!(AbelianGroupStructure::trivial().to_text(), "trivial");
    }
}
