use super::{new_echelon, ScalarModule};
use crate::error::{Error, Result};
use crate::linear::{AbelianGroupStructure, EchelonBasis};

/// `M ⊗_A N` realized as a quotient of `M ⊗_{𝔽_p} N`.
///
/// The pair `(e_i, f_j)` occupies coordinate `i·dim(N) + j` of the free scalar space.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    left_dim: usize,
    right_dim: usize,
    relations: EchelonBasis,
    keep: Vec<usize>,
    labels: Vec<String>,
    p: u64,
}

impl TensorProduct {
    pub fn dim(&self) -> usize {
        self.keep.len()
    }

    pub fn structure(&self) -> AbelianGroupStructure {
        AbelianGroupStructure::elementary(self.p, self.dim())
    }

    /// Basis of the quotient as pairs `(i, j)` meaning `e_i ⊗ f_j`.
    pub fn basis_pairs(&self) -> Vec<(usize, usize)> {
        self.keep.iter().map(|&c| (c / self.right_dim, c % self.right_dim)).collect()
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.labels
    }

    /// Quotient coordinates of a vector in the free scalar space.
    pub fn class_of_flat(&self, w: &[u64]) -> Vec<u64> {
        let r = self.relations.reduce(w);
        self.keep.iter().map(|&c| r[c]).collect()
    }

    /// Quotient coordinates of the pure tensor `u ⊗ v`.
    pub fn class_of(&self, u: &[u64], v: &[u64]) -> Vec<u64> {
        let p = self.p;
        let mut w = vec![0u64; self.left_dim * self.right_dim];
        for (i, &a) in u.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in v.iter().enumerate() {
                w[i * self.right_dim + j] = a * b % p;
            }
        }
        self.class_of_flat(&w)
    }

    pub fn p(&self) -> u64 {
        self.p
    }
}

/// `M ⊗_A N`: the scalar tensor product modulo `(a·m)⊗n − m⊗(a·n)` for every
/// algebra generator `a` and basis vectors `m`, `n`. Balancing against a
/// generating set suffices, since products of generators reach every element.
pub fn tensor_over_algebra(m: &ScalarModule, n: &ScalarModule) -> Result<TensorProduct> {
    if m.algebra_tag() != n.algebra_tag() || m.p() != n.p() {
        return Err(Error::Mismatch("modules are over different algebras".into()));
    }
    if m.generator_count() != n.generator_count() {
        return Err(Error::Mismatch("modules disagree on the algebra generators".into()));
    }
    let p = m.p();
    let (dm, dn) = (m.dim(), n.dim());
    let mut relations = new_echelon(p, dm * dn);
    for g in 0..m.generator_count() {
        for i in 0..dm {
            for j in 0..dn {
                let mut row = vec![0u64; dm * dn];
                for &(k, c) in m.action_of_basis(g, i) {
                    let idx = k as usize * dn + j;
                    row[idx] = (row[idx] + c) % p;
                }
                for &(k, c) in n.action_of_basis(g, j) {
                    let idx = i * dn + k as usize;
                    row[idx] = (row[idx] + p - c) % p;
                }
                relations.insert(row);
            }
        }
    }
    let keep = relations.free_columns();
    let labels = keep
        .iter()
        .map(|&c| format!("{} ⊗ {}", m.labels()[c / dn], n.labels()[c % dn]))
        .collect();
    Ok(TensorProduct { left_dim: dm, right_dim: dn, relations, keep, labels, p })
}

/// Whether a bilinear map vanishes, checked on all pairs of basis vectors.
pub fn bilinear_map_trivial<L, R, F>(left: &[L], right: &[R], map: F) -> bool
where
    F: Fn(&L, &R) -> Vec<u64>,
{
    left.iter().all(|a| right.iter().all(|b| map(a, b).iter().all(|&c| c == 0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraIdeal, AlgebraModule, FiniteAlgebra};
    use crate::group_ring::GroupSpec;

    fn f(p: u64, e: &[u32]) -> FiniteAlgebra {
        FiniteAlgebra::group_ring(&GroupSpec::new(p, e.to_vec()).unwrap(), p).unwrap()
    }

    #[test]
    fn gtilde_tensor_free_rank_two() {
        let a = f(2, &[1, 1]);
        let ideal = AlgebraIdeal::closure(&a, &[vec![1; 4]]).unwrap();
        let m = ScalarModule::from_ideal(&ideal).unwrap();
        let omega = AlgebraModule::free(&a, vec!["dg1".into(), "dg2".into()]).unwrap().to_scalar_module();
        let t = tensor_over_algebra(&m, &omega).unwrap();
        assert_eq!(t.structure(), AbelianGroupStructure::elementary(2, 2));
        assert_eq!(t.basis_labels(), &["1 + g2 + g1 + g1*g2 ⊗ dg1", "1 + g2 + g1 + g1*g2 ⊗ dg2"]);
    }

    #[test]
    fn tensor_with_zero_module_is_trivial() {
        let a = f(2, &[1]);
        let m = AlgebraModule::free(&a, vec!["e".into()]).unwrap().to_scalar_module();
        let zero = AlgebraModule::free(&a, vec![]).unwrap().to_scalar_module();
        assert!(tensor_over_algebra(&m, &zero).unwrap().structure().is_trivial());
    }

    #[test]
    fn a_tensor_a_is_a() {
        let a = f(2, &[1]);
        let m = AlgebraModule::free(&a, vec!["e".into()]).unwrap().to_scalar_module();
        assert_eq!(tensor_over_algebra(&m, &m).unwrap().structure(), AbelianGroupStructure::elementary(2, 2));
    }

    #[test]
    fn algebra_mismatch() {
        let m = AlgebraModule::free(&f(2, &[1]), vec!["e".into()]).unwrap().to_scalar_module();
        let n = AlgebraModule::free(&f(2, &[1, 1]), vec!["e".into()]).unwrap().to_scalar_module();
        assert!(matches!(tensor_over_algebra(&m, &n), Err(Error::Mismatch(_))));
    }

    #[test]
    fn multiplication_on_gtilde_is_trivial() {
        let a = f(2, &[1, 1]);
        let ideal = AlgebraIdeal::closure(&a, &[vec![1; 4]]).unwrap();
        let basis = ideal.additive_basis().to_vec();
        assert!(bilinear_map_trivial(&basis, &basis, |x, y| a.mul(x, y)));
        assert!(bilinear_map_trivial(&basis, &basis, |_, _| vec![0]));
    }
}
