use std::sync::Arc;

use super::{new_echelon, AlgebraIdeal, Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::linear::{AbelianGroupStructure, EchelonBasis, MatrixModP};

/// `A^k / (relations)` over an 𝔽_p-algebra `A`.
///
/// Vectors of `A^k` are flattened copy-major: coordinate `c·dim(A) + i` is the
/// `i`-th basis coefficient of the `c`-th component.
#[derive(Clone, Debug)]
pub struct AlgebraModule {
    alg: Arc<FiniteAlgebra>,
    gen_names: Vec<String>,
    relations: Vec<Vec<Elem>>,
    expansion: EchelonBasis,
}

impl AlgebraModule {
    pub fn new(alg: &FiniteAlgebra, gen_names: Vec<String>, relations: Vec<Vec<Elem>>) -> Result<Self> {
        let p = alg.require_prime()?;
        let (n, k) = (alg.dim(), gen_names.len());
        if relations.iter().any(|r| r.len() != k || r.iter().any(|e| e.len() != n)) {
            return Err(Error::Mismatch("relation rows must have one algebra element per generator".into()));
        }
        let mut expansion = new_echelon(p, n * k);
        for rel in &relations {
            for b in 0..n {
                let basis = alg.basis_element(b);
                let row: Vec<u64> = rel.iter().flat_map(|e| alg.mul(&basis, e)).collect();
                expansion.insert(row);
            }
        }
        Ok(AlgebraModule { alg: Arc::new(alg.clone()), gen_names, relations, expansion })
    }

    pub fn free(alg: &FiniteAlgebra, gen_names: Vec<String>) -> Result<Self> {
        Self::new(alg, gen_names, Vec::new())
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.alg
    }

    pub fn generator_count(&self) -> usize {
        self.gen_names.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn relations(&self) -> &[Vec<Elem>] {
        &self.relations
    }

    /// One row per (relation, algebra basis element): the relation multiplied by that element.
    pub fn scalar_expansion(&self) -> MatrixModP {
        let alg = &self.alg;
        let p = alg.prime().expect("field algebra");
        let n = alg.dim();
        let mut rows = Vec::with_capacity(self.relations.len() * n);
        for rel in &self.relations {
            for b in 0..n {
                let basis = alg.basis_element(b);
                rows.push(rel.iter().flat_map(|e| alg.mul(&basis, e)).map(|x| x as i64).collect());
            }
        }
        MatrixModP::from_rows(p, n * self.gen_names.len(), rows).expect("consistent widths")
    }

    /// 𝔽_p-dimension of the module.
    pub fn scalar_dim(&self) -> usize {
        self.expansion.ambient_dim() - self.expansion.rank()
    }

    pub fn structure(&self) -> AbelianGroupStructure {
        AbelianGroupStructure::elementary(self.alg.prime().expect("field algebra"), self.scalar_dim())
    }

    /// Whether no relation survives, i.e. the module is free on its generators.
    pub fn is_free(&self) -> bool {
        self.expansion.rank() == 0
    }

    /// Normal form of a flattened vector modulo the relations.
    pub fn reduce(&self, v: &[u64]) -> Vec<u64> {
        self.expansion.reduce(v)
    }

    /// Flattened vector with `coeff` in component `gen`.
    pub fn component(&self, gen: usize, coeff: &[u64]) -> Vec<u64> {
        let n = self.alg.dim();
        let mut v = vec![0u64; n * self.gen_names.len()];
        v[gen * n..(gen + 1) * n].copy_from_slice(coeff);
        v
    }

    pub fn to_scalar_module(&self) -> ScalarModule {
        let alg = self.alg.clone();
        let n = alg.dim();
        let keep = self.expansion.free_columns();
        let labels = keep
            .iter()
            .map(|&c| {
                let (g, b) = (c / n, c % n);
                match alg.labels()[b].as_str() {
                    "1" => self.gen_names[g].clone(),
                    l => format!("{l}*{}", self.gen_names[g]),
                }
            })
            .collect();
        let coords = {
            let keep = keep.clone();
            move |v: &[u64]| keep.iter().map(|&c| v[c]).collect::<Vec<u64>>()
        };
        let actions = alg
            .generators()
            .iter()
            .map(|g| {
                keep.iter()
                    .map(|&c| {
                        let (gi, b) = (c / n, c % n);
                        let image = alg.mul(g, &alg.basis_element(b));
                        let v = self.reduce(&self.component(gi, &image));
                        sparse(&coords(&v))
                    })
                    .collect()
            })
            .collect();
        ScalarModule {
            p: alg.prime().expect("field algebra"),
            tag: alg.fingerprint(),
            labels,
            actions,
            source: Source::Presented { module: Box::new(self.clone()), keep },
        }
    }

    /// Flattened positions that survive as the scalar basis.
    pub fn basis_columns(&self) -> Vec<usize> {
        self.expansion.free_columns()
    }

    /// Coordinates of a flattened vector in the basis of [`Self::to_scalar_module`].
    pub fn coords(&self, v: &[u64]) -> Vec<u64> {
        let r = self.reduce(v);
        self.expansion.free_columns().iter().map(|&c| r[c]).collect()
    }
}

fn sparse(v: &[u64]) -> Vec<(u32, u64)> {
    v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i as u32, c)).collect()
}

#[derive(Clone, Debug)]
enum Source {
    Ideal(AlgebraIdeal),
    Presented { module: Box<AlgebraModule>, keep: Vec<usize> },
    /// Built from another module; only generator actions are known.
    Derived,
}

/// A finite module over an 𝔽_p-algebra as an explicit 𝔽_p-vector space with the
/// action of each algebra generator.
#[derive(Clone, Debug)]
pub struct ScalarModule {
    p: u64,
    /// Fingerprint of the algebra the module is regarded over.
    tag: u64,
    labels: Vec<String>,
    /// `actions[g][i]` is the image of basis vector `i` under generator `g`, sparse.
    actions: Vec<Vec<Vec<(u32, u64)>>>,
    source: Source,
}

impl ScalarModule {
    /// An ideal regarded as a module over its algebra; basis = the ideal's echelon basis.
    pub fn from_ideal(ideal: &AlgebraIdeal) -> Result<Self> {
        let alg = ideal.algebra();
        let p = alg.require_prime()?;
        let basis = ideal.additive_basis();
        let actions = alg
            .generators()
            .iter()
            .map(|g| {
                basis
                    .iter()
                    .map(|b| {
                        let image = alg.mul(g, b);
                        let c = ideal.express(&image).expect("ideal is closed");
                        c.into_iter()
                            .enumerate()
                            .filter(|(_, x)| *x != 0)
                            .map(|(i, x)| (i as u32, x as u64))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Ok(ScalarModule {
            p,
            tag: alg.fingerprint(),
            labels: basis.iter().map(|b| alg.element_text(b)).collect(),
            actions,
            source: Source::Ideal(ideal.clone()),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn algebra_tag(&self) -> u64 {
        self.tag
    }

    pub fn generator_count(&self) -> usize {
        self.actions.len()
    }

    pub fn structure(&self) -> AbelianGroupStructure {
        AbelianGroupStructure::elementary(self.p, self.dim())
    }

    /// Image of a coordinate vector under generator `g`.
    pub fn act(&self, g: usize, v: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; self.dim()];
        for (i, &c) in v.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(k, x) in &self.actions[g][i] {
                let k = k as usize;
                out[k] = (out[k] + c * x) % self.p;
            }
        }
        out
    }

    pub(crate) fn action_of_basis(&self, g: usize, i: usize) -> &[(u32, u64)] {
        &self.actions[g][i]
    }

    /// Image of a coordinate vector under an arbitrary element of the source algebra.
    pub fn act_element(&self, a: &[u64], v: &[u64]) -> Result<Vec<u64>> {
        Ok(match &self.source {
            Source::Ideal(ideal) => {
                let alg = ideal.algebra();
                let elem = self.to_algebra_element(v).expect("ideal module");
                let image = alg.mul(a, &elem);
                ideal
                    .express(&image)
                    .expect("ideal is closed")
                    .into_iter()
                    .map(|x| x as u64)
                    .collect()
            }
            Source::Presented { module, keep, .. } => {
                let alg = module.algebra();
                let n = alg.dim();
                let mut flat = vec![0u64; module.expansion.ambient_dim()];
                for (&c, &x) in keep.iter().zip(v) {
                    flat[c] = x;
                }
                let mut out = Vec::with_capacity(flat.len());
                for chunk in flat.chunks(n) {
                    out.extend(alg.mul(a, chunk));
                }
                module.coords(&out)
            }
            Source::Derived => {
                return Err(Error::Unsupported("derived module only knows generator actions".into()))
            }
        })
    }

    /// For ideal modules: the algebra element with the given coordinates.
    pub fn to_algebra_element(&self, v: &[u64]) -> Option<Elem> {
        let Source::Ideal(ideal) = &self.source else { return None };
        let alg = ideal.algebra();
        Some(ideal.additive_basis().iter().zip(v).fold(alg.zero(), |acc, (b, &c)| {
            alg.add(&acc, &alg.scale(c as i64, b))
        }))
    }

    /// For ideal modules: coordinates of an algebra element of the ideal.
    pub fn ideal_coords(&self, e: &[u64]) -> Result<Vec<u64>> {
        let Source::Ideal(ideal) = &self.source else {
            return Err(Error::Unsupported("module is not an ideal".into()));
        };
        ideal
            .express(e)
            .map(|c| c.into_iter().map(|x| x as u64).collect())
            .ok_or_else(|| Error::NotInIdeal(ideal.algebra().element_text(e)))
    }

    /// For presented modules: coordinates of a flattened vector of `A^k`.
    pub fn presented_coords(&self, flat: &[u64]) -> Result<Vec<u64>> {
        let Source::Presented { module, .. } = &self.source else {
            return Err(Error::Unsupported("module is not presented".into()));
        };
        Ok(module.coords(flat))
    }

    /// Regards the module over `quotient = A / kernel` after checking that
    /// `kernel` acts by zero; the quotient's generators must be the images of `A`'s.
    pub fn descend(&self, quotient: &FiniteAlgebra, kernel: &AlgebraIdeal) -> Result<Self> {
        if quotient.generators().len() != self.generator_count() {
            return Err(Error::Mismatch("quotient generators do not match".into()));
        }
        for k in kernel.additive_basis() {
            for i in 0..self.dim() {
                let mut e = vec![0u64; self.dim()];
                e[i] = 1;
                if self.act_element(k, &e)?.iter().any(|&c| c != 0) {
                    return Err(Error::Hypothesis(format!(
                        "{} does not act by zero on the module",
                        kernel.algebra().element_text(k)
                    )));
                }
            }
        }
        let mut out = self.clone();
        out.tag = quotient.fingerprint();
        Ok(out)
    }

    /// Quotient by the submodule `span{x·m : x ∈ elements, m ∈ module}`.
    pub fn quotient_by_action(&self, elements: &[Elem]) -> Result<ScalarModule> {
        let mut ech = new_echelon(self.p, self.dim());
        for a in elements {
            for i in 0..self.dim() {
                let mut e = vec![0u64; self.dim()];
                e[i] = 1;
                ech.insert(self.act_element(a, &e)?);
            }
        }
        let keep = ech.free_columns();
        let coords = |v: Vec<u64>| -> Vec<(u32, u64)> {
            let r = ech.reduce(&v);
            sparse(&keep.iter().map(|&c| r[c]).collect::<Vec<_>>())
        };
        let actions = (0..self.generator_count())
            .map(|g| {
                keep.iter()
                    .map(|&c| {
                        let mut e = vec![0u64; self.dim()];
                        e[c] = 1;
                        coords(self.act(g, &e))
                    })
                    .collect()
            })
            .collect();
        Ok(ScalarModule {
            p: self.p,
            tag: self.tag,
            labels: keep.iter().map(|&c| self.labels[c].clone()).collect(),
            actions,
            source: Source::Derived,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group_ring::GroupSpec;

    fn f(p: u64, e: &[u32]) -> FiniteAlgebra {
        FiniteAlgebra::group_ring(&GroupSpec::new(p, e.to_vec()).unwrap(), p).unwrap()
    }

    #[test]
    fn free_module_dimension() {
        let a = f(2, &[1, 1]);
        let m = AlgebraModule::free(&a, vec!["dg1".into(), "dg2".into()]).unwrap();
        assert!(m.is_free());
        assert_eq!(m.scalar_dim(), 8);
        assert_eq!(m.to_scalar_module().dim(), 8);
    }

    #[test]
    fn expansion_has_row_per_relation_and_basis_element() {
        let a = f(3, &[1]);
        let x = vec![2, 1, 0];
        let m = AlgebraModule::new(&a, vec!["e".into()], vec![vec![x]]).unwrap();
        let exp = m.scalar_expansion();
        assert_eq!(exp.rows(), 3);
        // A/(x) ≅ 𝔽_3
        assert_eq!(exp.rank(), 2);
        assert_eq!(m.scalar_dim(), 1);
    }

    #[test]
    fn ideal_module_actions() {
        let a = f(2, &[1, 1]);
        let ideal = AlgebraIdeal::closure(&a, &[vec![1; 4]]).unwrap();
        let m = ScalarModule::from_ideal(&ideal).unwrap();
        assert_eq!(m.dim(), 1);
        // g·G̃ = G̃
        assert_eq!(m.act(0, &[1]), vec![1]);
        assert_eq!(m.act(1, &[1]), vec![1]);
    }
}
