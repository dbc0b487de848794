use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{new_echelon, Elem, FiniteAlgebra, MAX_ENUMERATED};
use crate::error::{Error, Result};
use crate::linear::{left_kernel, EchelonBasis, MatrixZ};

/// An ideal of a [`FiniteAlgebra`] together with an additive generating set.
///
/// Over 𝔽_p the generating set is a reduced echelon basis. Otherwise the ideal
/// is enumerated and the generating set comes with its integer relations.
#[derive(Clone, Debug)]
pub struct AlgebraIdeal {
    alg: Arc<FiniteAlgebra>,
    gens: Vec<Elem>,
    inner: Inner,
}

#[derive(Clone, Debug)]
enum Inner {
    Field(EchelonBasis),
    General { members: HashMap<Elem, Vec<i64>>, relations: MatrixZ },
}

impl AlgebraIdeal {
    /// Smallest ideal containing `gens`, closed by a deterministic worklist over
    /// products with the algebra generators.
    pub fn closure(alg: &FiniteAlgebra, gens: &[Elem]) -> Result<Self> {
        let alg = Arc::new(alg.clone());
        if gens.iter().any(|g| g.len() != alg.dim()) {
            return Err(Error::Mismatch("ideal generator has the wrong length".into()));
        }
        match alg.prime() {
            Some(p) => Ok(Self::field_closure(alg, p, gens)),
            None => Self::general_closure(alg, gens),
        }
    }

    fn field_closure(alg: Arc<FiniteAlgebra>, p: u64, gens: &[Elem]) -> Self {
        let mut ech = new_echelon(p, alg.dim());
        let mut queue: VecDeque<Elem> = gens.iter().map(|g| alg.reduce(g.clone())).collect();
        while let Some(v) = queue.pop_front() {
            if ech.insert(v.clone()) {
                for g in alg.generators() {
                    queue.push_back(alg.mul(g, &v));
                }
            }
        }
        let basis = ech.rows().map(<[u64]>::to_vec).collect();
        AlgebraIdeal { alg, gens: basis, inner: Inner::Field(ech) }
    }

    fn general_closure(alg: Arc<FiniteAlgebra>, gens: &[Elem]) -> Result<Self> {
        let mut add_gens: Vec<Elem> = Vec::new();
        let mut members: HashMap<Elem, Vec<i64>> = HashMap::new();
        members.insert(alg.zero(), Vec::new());
        let mut queue: VecDeque<Elem> = gens.iter().map(|g| alg.reduce(g.clone())).collect();
        while let Some(v) = queue.pop_front() {
            if members.contains_key(&v) {
                continue;
            }
            // extend the subgroup by multiples of v
            let k = add_gens.len();
            add_gens.push(v.clone());
            let old: Vec<(Elem, Vec<i64>)> = members.iter().map(|(e, c)| (e.clone(), c.clone())).collect();
            let mut mult = v.clone();
            let mut t = 1i64;
            while !alg.is_zero(&mult) && !old.iter().any(|(e, _)| *e == mult) {
                for (e, c) in &old {
                    let sum = alg.add(e, &mult);
                    members.entry(sum).or_insert_with(|| {
                        let mut cc = c.clone();
                        cc.resize(k + 1, 0);
                        cc[k] = t;
                        cc
                    });
                }
                if members.len() as u64 > MAX_ENUMERATED {
                    return Err(Error::Size("ideal too large to enumerate".into()));
                }
                mult = alg.add(&mult, &v);
                t += 1;
            }
            for g in alg.generators() {
                queue.push_back(alg.mul(g, &v));
            }
        }
        let n = add_gens.len();
        for c in members.values_mut() {
            c.resize(n, 0);
        }
        // relations among the additive generators: kernel of ℤ^n → ⊕ ℤ/m_i
        let mut rows: Vec<Vec<BigInt>> =
            add_gens.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect();
        for (i, &m) in alg.orders().iter().enumerate() {
            let mut r = vec![BigInt::from(0); alg.dim()];
            r[i] = BigInt::from(m);
            rows.push(r);
        }
        let kernel = left_kernel(&MatrixZ::from_rows(alg.dim(), &rows)?);
        let relations: Vec<Vec<BigInt>> =
            kernel.row_vecs().iter().map(|k| k[..n].to_vec()).collect();
        let relations = MatrixZ::from_rows(n, &relations)?;
        Ok(AlgebraIdeal { alg, gens: add_gens, inner: Inner::General { members, relations } })
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.alg
    }

    /// Additive generators (an 𝔽_p-basis for field algebras).
    pub fn additive_basis(&self) -> &[Elem] {
        &self.gens
    }

    /// Integer relations among [`Self::additive_basis`].
    pub fn basis_relations(&self) -> MatrixZ {
        match &self.inner {
            Inner::Field(ech) => {
                let p = ech.p() as i64;
                let n = self.gens.len();
                let rows: Vec<Vec<i64>> = (0..n)
                    .map(|i| {
                        let mut r = vec![0; n];
                        r[i] = p;
                        r
                    })
                    .collect();
                MatrixZ::from_rows(n, &rows).expect("square")
            }
            Inner::General { relations, .. } => relations.clone(),
        }
    }

    pub(crate) fn echelon(&self) -> Result<&EchelonBasis> {
        match &self.inner {
            Inner::Field(ech) => Ok(ech),
            Inner::General { .. } => Err(Error::Unsupported("ideal is not over a prime field".into())),
        }
    }

    /// 𝔽_p-dimension; for general ideals the number of additive generators.
    pub fn dim(&self) -> usize {
        self.gens.len()
    }

    /// Number of elements of the ideal.
    pub fn size(&self) -> Option<u64> {
        match &self.inner {
            Inner::Field(ech) => ech.p().checked_pow(self.gens.len() as u32),
            Inner::General { members, .. } => Some(members.len() as u64),
        }
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn contains(&self, e: &[u64]) -> bool {
        match &self.inner {
            Inner::Field(ech) => ech.contains(e),
            Inner::General { members, .. } => members.contains_key(e),
        }
    }

    /// Integer coordinates of `e` against the additive generators.
    pub fn express(&self, e: &[u64]) -> Option<Vec<i64>> {
        match &self.inner {
            Inner::Field(ech) => ech.coords(e).map(|c| c.into_iter().map(|x| x as i64).collect()),
            Inner::General { members, .. } => members.get(e).cloned(),
        }
    }

    /// Every element of the ideal.
    pub fn elements(&self) -> Result<Vec<Elem>> {
        match &self.inner {
            Inner::General { members, .. } => {
                let mut all: Vec<Elem> = members.keys().cloned().collect();
                all.sort_by_key(|e| self.alg.index_of(e));
                Ok(all)
            }
            Inner::Field(ech) => {
                let size = self
                    .size()
                    .filter(|&s| s <= MAX_ENUMERATED)
                    .ok_or_else(|| Error::Size("ideal too large to enumerate".into()))?;
                let p = ech.p();
                let k = self.gens.len();
                let mut out = Vec::with_capacity(size as usize);
                for idx in 0..size {
                    let mut rest = idx;
                    let mut e = self.alg.zero();
                    for g in &self.gens[..k] {
                        let c = rest % p;
                        rest /= p;
                        if c != 0 {
                            e = self.alg.add(&e, &self.alg.scale(c as i64, g));
                        }
                    }
                    out.push(e);
                }
                out.sort_by_key(|e| self.alg.index_of(e));
                Ok(out)
            }
        }
    }

    /// Whether every product of two additive generators vanishes.
    pub fn is_square_zero(&self) -> bool {
        self.gens.iter().all(|a| self.gens.iter().all(|b| self.alg.is_zero(&self.alg.mul(a, b))))
    }

    /// Whether `a · self = 0`.
    pub fn annihilated_by(&self, a: &[u64]) -> bool {
        self.gens.iter().all(|g| self.alg.is_zero(&self.alg.mul(a, g)))
    }

    pub fn describe(&self) -> String {
        match self.gens.len() {
            0 => "0".into(),
            1 => self.alg.element_text(&self.gens[0]),
            k => format!("ideal of rank {k}"),
        }
    }

    /// Integer relation rows of the generating set as `i64`, if they fit.
    pub fn relation_rows_i64(&self) -> Result<Vec<Vec<i64>>> {
        self.basis_relations()
            .row_vecs()
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().ok_or_else(|| Error::Overflow(x.to_string()))).collect())
            .collect()
    }
}
