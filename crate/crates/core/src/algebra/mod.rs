//! Finite commutative algebras given by structure constants, their ideals,
//! finitely presented modules, and tensor products over the algebra.
//!
//! The additive group of an algebra is `⊕ ℤ/m_i` over its basis; when every
//! `m_i` equals one prime `p` the algebra is an 𝔽_p-algebra and the module
//! machinery (quotients, tensor products) is available.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::group_ring::{is_prime, GroupSpec, RingElement};
use crate::linear::{EchelonBasis, PivotOrder};

mod ideal;
mod module;
mod tensor;

pub use ideal::AlgebraIdeal;
pub use module::{AlgebraModule, ScalarModule};
pub use tensor::{bilinear_map_trivial, tensor_over_algebra, TensorProduct};

/// Coordinates against an algebra basis.
pub type Elem = Vec<u64>;

/// Largest basis accepted; the structure-constant table is quadratic in it.
pub const MAX_BASIS: usize = 256;

/// Largest algebra (as a set) whose elements may be enumerated.
pub const MAX_ENUMERATED: u64 = 1 << 20;

#[derive(Clone, Debug)]
pub struct FiniteAlgebra {
    name: String,
    orders: Vec<u64>,
    labels: Vec<String>,
    one: Elem,
    /// `table[i * n + j]` holds the nonzero coordinates of `e_i · e_j`.
    table: Vec<Vec<(u32, u64)>>,
    generators: Vec<Elem>,
    prime: Option<u64>,
    fingerprint: u64,
}

impl PartialEq for FiniteAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.fingerprint == other.fingerprint
            && self.orders == other.orders
            && self.table == other.table
            && self.one == other.one
    }
}

impl FiniteAlgebra {
    /// Builds an algebra from dense structure constants `products[i][j] = e_i·e_j`.
    ///
    /// `generators` must generate the algebra as a unital ring; they drive ideal
    /// closure and the balancing relations of tensor products.
    pub fn from_products(
        name: impl Into<String>,
        orders: Vec<u64>,
        labels: Vec<String>,
        one: Elem,
        products: &[Vec<Elem>],
        generators: Vec<Elem>,
    ) -> Result<Self> {
        let n = orders.len();
        if n > MAX_BASIS {
            return Err(Error::Size(format!("basis of size {n} exceeds {MAX_BASIS}")));
        }
        if labels.len() != n || one.len() != n || products.len() != n {
            return Err(Error::Mismatch("basis data lengths disagree".into()));
        }
        if orders.iter().any(|&m| m < 2) {
            return Err(Error::Mismatch("basis element orders must exceed 1".into()));
        }
        let mut table = Vec::with_capacity(n * n);
        for row in products {
            if row.len() != n {
                return Err(Error::Mismatch("product table must be square".into()));
            }
            for prod in row {
                if prod.len() != n {
                    return Err(Error::Mismatch("product has wrong length".into()));
                }
                table.push(
                    prod.iter()
                        .enumerate()
                        .filter(|(k, &c)| c % orders[*k] != 0)
                        .map(|(k, &c)| (k as u32, c % orders[k]))
                        .collect(),
                );
            }
        }
        let prime = match orders.first() {
            Some(&p) if is_prime(p) && orders.iter().all(|&m| m == p) => Some(p),
            _ => None,
        };
        let mut alg = FiniteAlgebra {
            name: name.into(),
            orders,
            labels,
            one,
            table,
            generators,
            prime,
            fingerprint: 0,
        };
        alg.one = alg.reduce(alg.one.clone());
        alg.generators = alg.generators.iter().map(|g| alg.reduce(g.clone())).collect();
        let mut h = DefaultHasher::new();
        alg.orders.hash(&mut h);
        alg.table.hash(&mut h);
        alg.one.hash(&mut h);
        alg.generators.hash(&mut h);
        alg.fingerprint = h.finish();
        Ok(alg)
    }

    /// `ℤ/m[G]` over the monomial basis, generated by `g_1, …, g_r`.
    pub fn group_ring(spec: &GroupSpec, modulus: u64) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::Unsupported("finite algebras need a modulus ≥ 2".into()));
        }
        let n = spec.order();
        if n > MAX_BASIS {
            return Err(Error::Size(format!("|G| = {n} exceeds the algebra basis limit {MAX_BASIS}")));
        }
        let idx = spec.product_table();
        let unit = |k: usize| {
            let mut e = vec![0u64; n];
            e[k] = 1;
            e
        };
        let products: Vec<Vec<Elem>> =
            idx.iter().map(|row| row.iter().map(|&k| unit(k)).collect()).collect();
        let labels: Vec<String> =
            (0..n).map(|i| RingElement::monomial_at(spec, modulus, i).to_text()).collect();
        let generators = (1..=spec.rank())
            .map(|i| RingElement::generator(spec, modulus, i).map(|g| g.coeffs_u64()))
            .collect::<Result<Vec<_>>>()?;
        let name = if modulus == spec.p() {
            format!("F{}[{}]", modulus, spec)
        } else {
            format!("Z/{}[{}]", modulus, spec)
        };
        Self::from_products(name, vec![modulus; n], labels, unit(0), &products, generators)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `Some(p)` when the algebra is an 𝔽_p-algebra on its basis.
    pub fn prime(&self) -> Option<u64> {
        self.prime
    }

    pub fn require_prime(&self) -> Result<u64> {
        self.prime.ok_or_else(|| {
            Error::Unsupported(format!("{} is not an algebra over a prime field", self.name))
        })
    }

    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn one(&self) -> Elem {
        self.one.clone()
    }

    pub fn zero(&self) -> Elem {
        vec![0; self.dim()]
    }

    pub fn basis_element(&self, i: usize) -> Elem {
        let mut e = self.zero();
        e[i] = 1 % self.orders[i];
        e
    }

    /// Number of elements, if it fits in `u64`.
    pub fn size(&self) -> Option<u64> {
        self.orders.iter().try_fold(1u64, |acc, &m| acc.checked_mul(m))
    }

    pub fn reduce(&self, mut e: Elem) -> Elem {
        for (x, &m) in e.iter_mut().zip(&self.orders) {
            *x %= m;
        }
        e
    }

    pub fn from_i64(&self, coeffs: &[i64]) -> Elem {
        coeffs.iter().zip(&self.orders).map(|(&c, &m)| c.rem_euclid(m as i64) as u64).collect()
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Elem {
        a.iter().zip(b).zip(&self.orders).map(|((x, y), m)| (x + y) % m).collect()
    }

    pub fn neg(&self, a: &[u64]) -> Elem {
        a.iter().zip(&self.orders).map(|(x, m)| (m - x % m) % m).collect()
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, k: i64, a: &[u64]) -> Elem {
        a.iter()
            .zip(&self.orders)
            .map(|(&x, &m)| ((k.rem_euclid(m as i64) as u64) * x) % m)
            .collect()
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Elem {
        let n = self.dim();
        let mut out = vec![0u64; n];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                for &(k, c) in &self.table[i * n + j] {
                    let k = k as usize;
                    let m = self.orders[k];
                    out[k] = (out[k] + (x * y % m) * c) % m;
                }
            }
        }
        out
    }

    pub fn product(&self, factors: &[Elem]) -> Elem {
        factors.iter().fold(self.one(), |acc, f| self.mul(&acc, f))
    }

    pub fn pow(&self, a: &[u64], e: u64) -> Elem {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    pub fn is_zero(&self, a: &[u64]) -> bool {
        a.iter().all(|&x| x == 0)
    }

    /// Mixed-radix index of an element, first coordinate most significant.
    pub fn index_of(&self, a: &[u64]) -> u64 {
        a.iter().zip(&self.orders).fold(0u64, |acc, (&x, &m)| acc * m + x)
    }

    pub fn element_at(&self, mut index: u64) -> Elem {
        let mut e = vec![0u64; self.dim()];
        for (slot, &m) in e.iter_mut().zip(&self.orders).rev() {
            *slot = index % m;
            index /= m;
        }
        e
    }

    /// All elements in index order; refuses algebras larger than [`MAX_ENUMERATED`].
    pub fn elements(&self) -> Result<Vec<Elem>> {
        let size = self.size().filter(|&s| s <= MAX_ENUMERATED).ok_or_else(|| {
            Error::Size(format!("{} is too large to enumerate", self.name))
        })?;
        Ok((0..size).map(|i| self.element_at(i)).collect())
    }

    pub fn element_text(&self, a: &[u64]) -> String {
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (c, self.labels[i].as_str()) {
                (1, l) => l.to_string(),
                (c, "1") => c.to_string(),
                (c, l) => format!("{c}*{l}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }

    /// Converts a group-ring element into coordinates of this algebra when it is that group ring.
    pub fn from_ring_element(&self, e: &RingElement) -> Result<Elem> {
        let coeffs = e.coeffs_u64();
        if coeffs.len() != self.dim() || e.modulus() != self.orders[0] {
            return Err(Error::Mismatch(format!("element of {} is not in {}", e.spec(), self.name)));
        }
        Ok(self.reduce(coeffs))
    }

    /// Exhaustive check of commutativity, associativity, distributivity on basis
    /// elements and unitality. Cubic in the basis size.
    pub fn verify_axioms(&self) -> bool {
        let n = self.dim();
        let basis: Vec<Elem> = (0..n).map(|i| self.basis_element(i)).collect();
        for a in &basis {
            if self.mul(&self.one, a) != *a {
                return false;
            }
            for b in &basis {
                let ab = self.mul(a, b);
                if ab != self.mul(b, a) {
                    return false;
                }
                for c in &basis {
                    if self.mul(&ab, c) != self.mul(a, &self.mul(b, c)) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `self / ideal` for an 𝔽_p-algebra, with basis the complement of the
    /// ideal's last-column pivots (so `1` keeps index 0), and the projection map.
    pub fn quotient(&self, ideal: &AlgebraIdeal) -> Result<(FiniteAlgebra, Projection)> {
        let p = self.require_prime()?;
        let ech = ideal.echelon()?;
        if ech.is_full() {
            return Err(Error::Hypothesis("cannot form the quotient by the whole algebra".into()));
        }
        let keep = ech.free_columns();
        let proj = Projection { echelon: ech.clone(), keep: keep.clone() };
        let lift = |i: usize| {
            let mut e = self.zero();
            e[keep[i]] = 1;
            e
        };
        let m = keep.len();
        let products: Vec<Vec<Elem>> = (0..m)
            .map(|i| (0..m).map(|j| proj.apply(&self.mul(&lift(i), &lift(j)))).collect())
            .collect();
        let labels = keep.iter().map(|&k| self.labels[k].clone()).collect();
        let one = proj.apply(&self.one);
        let generators = self.generators.iter().map(|g| proj.apply(g)).collect();
        let name = format!("{}/({})", self.name, ideal.describe());
        let q = FiniteAlgebra::from_products(name, vec![p; m], labels, one, &products, generators)?;
        Ok((q, proj))
    }
}

/// Projection of an 𝔽_p-algebra onto a quotient by an ideal.
#[derive(Clone, Debug)]
pub struct Projection {
    echelon: EchelonBasis,
    keep: Vec<usize>,
}

impl Projection {
    pub fn apply(&self, a: &[u64]) -> Elem {
        let r = self.echelon.reduce(a);
        self.keep.iter().map(|&k| r[k]).collect()
    }

    /// Canonical lift: the representative supported on the kept columns.
    pub fn lift(&self, q: &[u64]) -> Elem {
        let mut e = vec![0u64; self.echelon.ambient_dim()];
        for (&k, &c) in self.keep.iter().zip(q) {
            e[k] = c;
        }
        e
    }
}

pub(crate) fn new_echelon(p: u64, dim: usize) -> EchelonBasis {
    EchelonBasis::new(p, dim, PivotOrder::Last)
}
