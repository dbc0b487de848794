//! Integral lattices of an elementary abelian 2-group `G` of rank `r ≤ 4`.
//!
//! All characters of `G` are `±1`-valued, so the maximal order of `ℚ[G]` is
//! `Γ = ℤ^{2^r}` in character coordinates. This module builds `ℤ[G] ⊆ Γ`,
//! `J = |G|·Γ`, `I = J ∩ 2ℤ[G]`, and the finite rings `ℤ[G]/I`, `ℤ[G]/J`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{AlgebraIdeal, Elem, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::group_ring::{GroupSpec, RingElement};
use crate::linear::{hnf, hnf_contains, hnf_with_transform, lattice_index, lattice_intersect, snf, AbelianGroupStructure, MatrixZ};

pub const MAX_LATTICE_RANK: usize = 4;

/// `Γ ⊇ ℤ[G] ⊇ J ⊇ I` in character coordinates, each as a Hermite basis.
#[derive(Clone, Debug, Serialize)]
pub struct CharacterLattice {
    #[serde(skip)]
    spec: GroupSpec,
    /// `χ_S(g_T) = (−1)^{|S∩T|}`; rows are characters, columns group elements.
    char_matrix: MatrixZ,
    zg_lattice: MatrixZ,
    gamma_lattice: MatrixZ,
    j_lattice: MatrixZ,
    i_lattice: MatrixZ,
}

fn bits(spec: &GroupSpec, index: usize) -> u32 {
    spec.monomial(index).exps.iter().enumerate().fold(0, |acc, (i, &e)| acc | ((e as u32) << i))
}

pub fn build_lattices(spec: &GroupSpec) -> Result<CharacterLattice> {
    if spec.p() != 2 || !spec.is_elementary() || spec.rank() > MAX_LATTICE_RANK {
        return Err(Error::Unsupported(format!(
            "integral lattices need an elementary abelian 2-group of rank at most {MAX_LATTICE_RANK}, got {spec}"
        )));
    }
    let n = spec.order();
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|s| (0..n).map(|t| if (bits(spec, s) & bits(spec, t)).count_ones() % 2 == 0 { 1 } else { -1 }).collect())
        .collect();
    let char_matrix = MatrixZ::from_rows(n, &rows)?;
    let zg_lattice = hnf(&char_matrix.transpose());
    let gamma_lattice = MatrixZ::identity(n);
    let j_lattice = hnf(&gamma_lattice.scaled(&BigInt::from(n)));
    let i_lattice = lattice_intersect(&j_lattice, &zg_lattice.scaled(&BigInt::from(2)))?;
    let lat = CharacterLattice { spec: spec.clone(), char_matrix, zg_lattice, gamma_lattice, j_lattice, i_lattice };
    if !lat.contains_all(&lat.zg_lattice, &lat.j_lattice) || !lat.contains_all(&lat.gamma_lattice, &lat.zg_lattice) {
        return Err(Error::Hypothesis("J ⊆ ℤ[G] ⊆ Γ fails".into()));
    }
    Ok(lat)
}

impl CharacterLattice {
    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn char_matrix(&self) -> &MatrixZ {
        &self.char_matrix
    }

    pub fn zg_lattice(&self) -> &MatrixZ {
        &self.zg_lattice
    }

    pub fn gamma_lattice(&self) -> &MatrixZ {
        &self.gamma_lattice
    }

    pub fn j_lattice(&self) -> &MatrixZ {
        &self.j_lattice
    }

    pub fn i_lattice(&self) -> &MatrixZ {
        &self.i_lattice
    }

    /// The same lattices with `I` replaced, for negative controls.
    pub fn with_i_lattice(&self, i: MatrixZ) -> Self {
        CharacterLattice { i_lattice: hnf(&i), ..self.clone() }
    }

    /// `[Γ : ℤ[G]]`.
    pub fn zg_index(&self) -> BigInt {
        lattice_index(&self.zg_lattice)
    }

    /// Character vector of a `ℤ[G]` element.
    pub fn embed(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        self.char_matrix.transpose().vec_mul(coeffs)
    }

    pub fn gtilde(&self) -> Vec<BigInt> {
        self.embed(&vec![BigInt::one(); self.spec.order()])
    }

    fn contains_all(&self, big: &MatrixZ, small: &MatrixZ) -> bool {
        small.row_vecs().iter().all(|v| hnf_contains(big, v))
    }

    /// `ℤ[G]` coordinates of a lattice given in character coordinates.
    fn to_group_coords(&self, m: &MatrixZ) -> Result<MatrixZ> {
        let n = BigInt::from(self.spec.order());
        let prod = m.mul(&self.char_matrix)?;
        let mut rows = Vec::with_capacity(prod.rows());
        for r in prod.row_vecs() {
            let mut out = Vec::with_capacity(r.len());
            for x in r {
                let (q, rem) = x.div_rem(&n);
                if !rem.is_zero() {
                    return Err(Error::Hypothesis("lattice is not contained in ℤ[G]".into()));
                }
                out.push(q);
            }
            rows.push(out);
        }
        MatrixZ::from_rows(self.spec.order(), &rows)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Which {
    I,
    J,
}

/// `ℤ[G]/X` as a [`FiniteAlgebra`], with the coordinate change from `ℤ[G]`.
#[derive(Clone, Debug)]
pub struct FiniteQuotientRing {
    which: Which,
    spec: GroupSpec,
    algebra: FiniteAlgebra,
    /// Columns of the Smith transform kept (those with a nontrivial factor).
    v: MatrixZ,
    kept: Vec<(usize, BigInt)>,
    lifts: Vec<Vec<BigInt>>,
}

impl FiniteQuotientRing {
    pub fn which(&self) -> Which {
        self.which
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn structure(&self) -> AbelianGroupStructure {
        let orders: Vec<BigInt> = self.kept.iter().map(|(_, d)| d.clone()).collect();
        AbelianGroupStructure::from_diagonal(&orders, orders.len()).expect("finite quotient")
    }

    pub fn size(&self) -> Option<u64> {
        self.algebra.size()
    }

    /// Class of a `ℤ[G]` element.
    pub fn project(&self, coeffs: &[BigInt]) -> Elem {
        let w = self.v.vec_mul(coeffs);
        self.kept.iter().map(|(i, d)| w[*i].mod_floor(d).to_u64().expect("small modulus")).collect()
    }

    pub fn project_element(&self, e: &RingElement) -> Elem {
        self.project(e.coeffs())
    }

    /// A `ℤ[G]` representative of a class.
    pub fn lift(&self, e: &[u64]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.spec.order()];
        for (&c, l) in e.iter().zip(&self.lifts) {
            for (o, x) in out.iter_mut().zip(l) {
                *o += x * c;
            }
        }
        out
    }

    /// Class of `G̃`.
    pub fn gtilde(&self) -> Elem {
        self.project(&vec![BigInt::one(); self.spec.order()])
    }
}

pub fn quotient_ring(lat: &CharacterLattice, which: Which) -> Result<FiniteQuotientRing> {
    let spec = &lat.spec;
    let n = spec.order();
    let ideal = match which {
        Which::I => &lat.i_lattice,
        Which::J => &lat.j_lattice,
    };
    let x = lat.to_group_coords(ideal)?;
    let s = snf(&x);
    if s.rank != n {
        return Err(Error::RankDeficient { rank: s.rank, dim: n });
    }
    let diag = s.diagonal();
    let kept: Vec<(usize, BigInt)> =
        diag.iter().enumerate().filter(|(_, d)| !d.is_one()).map(|(i, d)| (i, d.clone())).collect();
    let (_, v_inv, _) = hnf_with_transform(&s.v);
    let lifts: Vec<Vec<BigInt>> = kept.iter().map(|(i, _)| v_inv.row(*i).to_vec()).collect();
    let orders: Vec<u64> = kept
        .iter()
        .map(|(_, d)| d.to_u64().ok_or_else(|| Error::Overflow(d.to_string())))
        .collect::<Result<_>>()?;
    let mut q = FiniteQuotientRing {
        which,
        spec: spec.clone(),
        algebra: FiniteAlgebra::group_ring(spec, 2)?,
        v: s.v,
        kept,
        lifts,
    };
    let as_ring = |c: &[BigInt]| RingElement::from_coeffs(spec, 0, c.to_vec());
    let ring_lifts: Vec<RingElement> = q.lifts.iter().map(|l| as_ring(l)).collect::<Result<_>>()?;
    let products: Vec<Vec<Elem>> = ring_lifts
        .iter()
        .map(|a| ring_lifts.iter().map(|b| Ok(q.project_element(&a.mul(b)?))).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let labels = ring_lifts.iter().map(RingElement::to_text).collect();
    let one = q.project_element(&RingElement::one(spec, 0));
    let generators = (1..=spec.rank())
        .map(|i| Ok(q.project_element(&RingElement::generator(spec, 0, i)?)))
        .collect::<Result<Vec<_>>>()?;
    let name = format!("Z[{spec}]/{}", if which == Which::I { "I" } else { "J" });
    q.algebra = FiniteAlgebra::from_products(name, orders, labels, one, &products, generators)?;
    Ok(q)
}

/// Outcome of the lattice identities and the square-zero property of `J/I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    /// `J = I + ℤ·χ(G̃)`.
    pub j_is_i_plus_gtilde: bool,
    /// `2·χ(G̃) ∈ I`.
    pub p_gtilde_in_i: bool,
    /// `I = J ∩ 2ℤ[G]`, by double inclusion.
    pub i_is_intersection: bool,
    /// `(J/I)² = 0` in `ℤ[G]/I`.
    pub quotient_square_zero: bool,
}

impl RelationReport {
    pub fn all(&self) -> bool {
        self.j_is_i_plus_gtilde && self.p_gtilde_in_i && self.i_is_intersection && self.quotient_square_zero
    }
}

pub fn relation_checks(lat: &CharacterLattice) -> Result<RelationReport> {
    let gt = lat.gtilde();
    let plus = lat.i_lattice.vstack(&MatrixZ::from_rows(gt.len(), &[gt.clone()])?)?;
    let j_is_i_plus_gtilde = hnf(&plus) == lat.j_lattice;
    let two_gt: Vec<BigInt> = gt.iter().map(|x| x * 2).collect();
    let p_gtilde_in_i = hnf_contains(&lat.i_lattice, &two_gt);
    let two_zg = lat.zg_lattice.scaled(&BigInt::from(2));
    let i_is_intersection = match lattice_intersect(&lat.j_lattice, &two_zg) {
        Ok(meet) => lat.contains_all(&meet, &lat.i_lattice) && lat.contains_all(&lat.i_lattice, &meet),
        Err(_) => false,
    };
    let quotient_square_zero = match quotient_ring(lat, Which::I) {
        Ok(q) => AlgebraIdeal::closure(q.algebra(), &[q.gtilde()])?.is_square_zero(),
        Err(_) => false,
    };
    Ok(RelationReport { j_is_i_plus_gtilde, p_gtilde_in_i, i_is_intersection, quotient_square_zero })
}
