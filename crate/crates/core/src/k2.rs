//! `K₂(𝔽_p[G], (G̃))` by the tensor model and by the symbol presentation,
//! the tensor isomorphism for `(A, I, J, b_1..b_r)` on concrete instances,
//! excision between `ℤ[G]/I` and `𝔽_2[G]`, and the square of quotient rings.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::{bilinear_map_trivial, tensor_over_algebra, AlgebraIdeal, AlgebraModule, Elem, FiniteAlgebra, ScalarModule, TensorProduct};
use crate::dennis_stein::{
    budget_from_env, build_presentation, psi_triviality_check, Mode, RhoMap, SquareZeroContext, SymbolExpr, SymbolPresentation,
};
use crate::error::{Error, Result};
use crate::group_ring::{GroupSpec, RingElement};
use crate::kahler::{omega_group_ring, omega_of_quotient, PresentedAlgebra};
use crate::lattice::{build_lattices, quotient_ring, relation_checks, RelationReport, Which};
use crate::linear::{cokernel_structure, AbelianGroupStructure, MatrixModP, MatrixZ};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Tensor,
    Oracle,
    Both,
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Route::Tensor => "tensor",
            Route::Oracle => "oracle",
            Route::Both => "both",
        })
    }
}

/// How the symbol presentation is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    pub mode: Mode,
    pub budget_pairs: u64,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { mode: Mode::Full, budget_pairs: budget_from_env() }
    }
}

/// Builds the presentation; with `fallback`, full mode over budget drops to reduced mode.
fn run_oracle(
    ctx: &SquareZeroContext,
    opts: OracleOptions,
    fallback: bool,
    warnings: &mut Vec<String>,
) -> Result<SymbolPresentation> {
    match build_presentation(ctx, opts.mode, opts.budget_pairs) {
        Err(Error::Budget { needed, budget, .. }) if fallback => {
            warnings.push(format!("full enumeration needs {needed} pairs over budget {budget}; reduced mode used"));
            build_presentation(ctx, Mode::Reduced, opts.budget_pairs)
        }
        other => other,
    }
}

/// Result of a `K₂(𝔽_p[G], (G̃))` computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K2Report {
    pub p: u64,
    pub exponents: Vec<u32>,
    pub invariant_factors: Vec<u64>,
    pub basis: Vec<String>,
    pub route: Route,
    pub agreement: Option<bool>,
    pub warnings: Vec<String>,
    pub ms: u64,
}

impl K2Report {
    pub fn structure(&self) -> AbelianGroupStructure {
        AbelianGroupStructure::new(self.invariant_factors.clone(), 0).expect("finite")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "K2(F{}[{}], (G~)) = {}\nroute: {}\n",
            self.p,
            self.exponents.iter().map(|e| format!("C{}", self.p.pow(*e))).collect::<Vec<_>>().join("×"),
            self.structure().to_text(),
            self.route
        );
        if !self.basis.is_empty() {
            out += &format!("basis: {}\n", self.basis.join(", "));
        }
        if let Some(a) = self.agreement {
            out += &format!("agreement: {a}\n");
        }
        for w in &self.warnings {
            out += &format!("warning: {w}\n");
        }
        out
    }
}

/// `⟨x_i, ∏_j x_j^{p^{n_j}−1}⟩` as text.
pub fn basis_symbol_text(spec: &GroupSpec, i: usize) -> String {
    let product: Vec<String> = spec
        .orders()
        .iter()
        .enumerate()
        .map(|(j, &o)| if o == 2 { format!("x{}", j + 1) } else { format!("x{}^{}", j + 1, o - 1) })
        .collect();
    format!("<x{}|{}>", i + 1, product.join("*"))
}

/// The pieces of `(G̃) ⊗ Ω` for `𝔽_p[G]`, with `ρ` into it.
pub struct GroupRingTensor {
    pub spec: GroupSpec,
    pub presented: PresentedAlgebra,
    pub ctx: SquareZeroContext,
    pub ideal_module: ScalarModule,
    pub omega: AlgebraModule,
    pub tensor: TensorProduct,
}

impl GroupRingTensor {
    pub fn new(spec: &GroupSpec) -> Result<Self> {
        let om = omega_group_ring(spec)?;
        let presented = om.presented().clone();
        let alg = presented.algebra();
        let gt = alg.from_ring_element(&RingElement::gtilde(spec, spec.p()))?;
        let ideal = AlgebraIdeal::closure(alg, &[gt])?;
        let ctx = SquareZeroContext::new(ideal)?;
        let ideal_module = ScalarModule::from_ideal(ctx.ideal())?;
        let omega = om.module().clone();
        let tensor = tensor_over_algebra(&ideal_module, &omega.to_scalar_module())?;
        Ok(GroupRingTensor { spec: spec.clone(), presented, ctx, ideal_module, omega, tensor })
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        self.presented.algebra()
    }

    pub fn rho(&self) -> RhoMap<'_> {
        RhoMap::new(&self.ctx, &self.ideal_module, &self.tensor, move |x| self.omega.coords(&self.presented.d(x)))
    }

    /// The claimed basis symbols `⟨x_i, G̃⟩` as element pairs.
    pub fn basis_symbols(&self) -> Result<Vec<(Elem, Elem)>> {
        let p = self.spec.p();
        let alg = self.algebra();
        let gt = alg.from_ring_element(&RingElement::gtilde(&self.spec, p))?;
        (1..=self.spec.rank())
            .map(|i| Ok((alg.from_ring_element(&RingElement::x_element(&self.spec, p, i)?)?, gt.clone())))
            .collect()
    }

    /// Whether `ρ` sends the claimed basis symbols to a basis of the tensor product.
    pub fn rho_basis_bijective(&self) -> Result<bool> {
        let rho = self.rho();
        let rows: Vec<Vec<i64>> = self
            .basis_symbols()?
            .iter()
            .map(|(a, b)| Ok(rho.apply(a, b)?.into_iter().map(|x| x as i64).collect()))
            .collect::<Result<_>>()?;
        let dim = self.tensor.dim();
        if rows.len() != dim {
            return Ok(false);
        }
        Ok(dim == 0 || MatrixModP::from_rows(self.spec.p(), dim, rows)?.rank() == dim)
    }
}

fn oracle_basis(
    pres: &SymbolPresentation,
    claimed: &[(Elem, Elem)],
    spec: &GroupSpec,
    warnings: &mut Vec<String>,
) -> Result<Vec<String>> {
    let s = pres.structure();
    if s.is_trivial() {
        return Ok(Vec::new());
    }
    let p = spec.p();
    let coords: Vec<Vec<i64>> = claimed
        .iter()
        .map(|(a, b)| {
            let v = pres.normalize(&SymbolExpr::symbol(a.clone(), b.clone()))?;
            v.iter().map(|x| x.to_i64().ok_or_else(|| Error::Overflow(x.to_string()))).collect()
        })
        .collect::<Result<_>>()?;
    let independent = s.is_elementary_abelian(p)
        && s.rank() == claimed.len()
        && MatrixModP::from_rows(p, s.rank(), coords)?.rank() == s.rank();
    if independent {
        Ok((0..claimed.len()).map(|i| basis_symbol_text(spec, i)).collect())
    } else {
        warnings.push("the symbols <x_i|G~> do not form a basis of the computed group".into());
        Ok(Vec::new())
    }
}

/// `K₂(𝔽_p[G], (G̃))` by the chosen route.
pub fn k2_relative_structure(spec: &GroupSpec, route: Route, opts: OracleOptions) -> Result<K2Report> {
    let start = Instant::now();
    let mut warnings = Vec::new();
    if route != Route::Oracle && spec.order() <= 2 {
        return Err(Error::Hypothesis(format!(
            "the tensor route needs the hypothesis |G| > 2, but |G| = {}",
            spec.order()
        )));
    }
    let model = GroupRingTensor::new(spec)?;
    let mut tensor_structure = None;
    let mut basis = Vec::new();
    if route != Route::Oracle {
        if !model.rho_basis_bijective()? {
            return Err(Error::Mismatch("ρ does not match the claimed basis with the tensor basis".into()));
        }
        tensor_structure = Some(model.tensor.structure());
        basis = (0..spec.rank()).map(|i| basis_symbol_text(spec, i)).collect();
    }
    let mut oracle_structure = None;
    if route != Route::Tensor {
        let pres = run_oracle(&model.ctx, opts, false, &mut warnings)?;
        if route == Route::Oracle {
            basis = oracle_basis(&pres, &model.basis_symbols()?, spec, &mut warnings)?;
        }
        oracle_structure = Some(pres.structure().clone());
    }
    let agreement = match (&tensor_structure, &oracle_structure) {
        (Some(t), Some(o)) => Some(t == o),
        _ => None,
    };
    let structure = tensor_structure.or(oracle_structure).expect("a route ran");
    if structure.free_rank() > 0 {
        return Err(Error::Mismatch("relative K2 came out infinite".into()));
    }
    Ok(K2Report {
        p: spec.p(),
        exponents: spec.exponents().to_vec(),
        invariant_factors: structure.invariant_factors().to_vec(),
        basis,
        route,
        agreement,
        warnings,
        ms: start.elapsed().as_millis() as u64,
    })
}

/// The decomposition of `K₂(ℤ[G]/I)` as a statement, with the computed summand filled in.
pub fn decomposition_statement(report: &K2Report) -> String {
    let r = report.exponents.len();
    let group = format!(
        "C{}",
        report.exponents.iter().map(|e| report.p.pow(*e).to_string()).collect::<Vec<_>>().join("×C")
    );
    let mut s = format!(
        "K2(Z[{group}]/I) ≅ K2(Z[{group}]/J) ⊕ K2(F{}[{group}], (G~)), where K2(F{}[{group}], (G~)) = {}",
        report.p,
        report.p,
        report.structure().to_text()
    );
    if r <= 1 {
        s += "; the splitting is only asserted for rank r > 1";
    }
    s + " (statement; absolute K2 is not computed)"
}

/// An instance `(A, I, J, b)` of the tensor isomorphism, with `A` presented.
#[derive(Clone, Debug)]
pub struct TensorIsoInput {
    pub presented: PresentedAlgebra,
    pub i_gens: Vec<Elem>,
    pub j_gens: Vec<Elem>,
    pub factors: Vec<Elem>,
}

impl TensorIsoInput {
    /// `A = 𝔽_p[G]`, `I = 0`, `J = (G̃)`, `b_j = x_j^{p^{n_j}−1}`.
    pub fn group_ring_gtilde(spec: &GroupSpec) -> Result<Self> {
        let presented = PresentedAlgebra::group_ring(spec)?;
        let alg = presented.algebra();
        let p = spec.p();
        let gt = alg.from_ring_element(&RingElement::gtilde(spec, p))?;
        let factors = spec
            .orders()
            .iter()
            .enumerate()
            .map(|(j, &o)| alg.from_ring_element(&RingElement::x_element(spec, p, j + 1)?.pow(o - 1)))
            .collect::<Result<_>>()?;
        Ok(TensorIsoInput { presented, i_gens: Vec::new(), j_gens: vec![gt], factors })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorIsoReport {
    pub r: usize,
    pub oracle_mode: Option<Mode>,
    pub oracle: Option<AbelianGroupStructure>,
    pub tensor_over_a_mod_i: AbelianGroupStructure,
    pub tensor_over_a_mod_j: AbelianGroupStructure,
    pub structures_agree: bool,
    pub psi_trivial: Option<bool>,
    pub delta_trivial: bool,
    pub rho_violations: Option<usize>,
    pub warnings: Vec<String>,
}

impl TensorIsoReport {
    pub fn holds(&self) -> bool {
        self.structures_agree
            && self.psi_trivial.unwrap_or(true)
            && self.delta_trivial
            && self.rho_violations.unwrap_or(0) == 0
    }
}

fn same_ideal(a: &AlgebraIdeal, b: &AlgebraIdeal) -> bool {
    a.dim() == b.dim() && a.additive_basis().iter().all(|x| b.contains(x))
}

/// Checks `K₂(A/I, J/I) ≅ J/I ⊗_{A/I} Ω_{A/I} ≅ J/I ⊗_{A/J} Ω_{A/J}` on one instance.
pub fn tensor_iso_check(input: &TensorIsoInput, opts: OracleOptions) -> Result<TensorIsoReport> {
    let r = input.factors.len();
    if r <= 1 {
        return Err(Error::Hypothesis(format!("need r > 1 factors b_i, got {r}")));
    }
    let presented = &input.presented;
    let a = presented.algebra();
    let i = AlgebraIdeal::closure(a, &input.i_gens)?;
    let j = AlgebraIdeal::closure(a, &input.j_gens)?;
    let big_b = a.product(&input.factors);
    let mut gens = input.i_gens.clone();
    gens.push(big_b);
    if !same_ideal(&j, &AlgebraIdeal::closure(a, &gens)?) {
        return Err(Error::Hypothesis("J is not (b_1⋯b_r)A + I".into()));
    }
    for (k, b) in input.factors.iter().enumerate() {
        if !j.additive_basis().iter().all(|x| i.contains(&a.mul(b, x))) {
            return Err(Error::Hypothesis(format!("b{} J is not contained in I", k + 1)));
        }
    }
    let (r_alg, pi) = a.quotient(&i)?;
    let ji_gens: Vec<Elem> = j.additive_basis().iter().map(|x| pi.apply(x)).collect();
    let ji = AlgebraIdeal::closure(&r_alg, &ji_gens)?;
    let factors: Vec<Elem> = input.factors.iter().map(|b| pi.apply(b)).collect();
    let ctx = SquareZeroContext::new(ji.clone())?.with_factors(factors)?;

    let mut warnings = Vec::new();
    let pres = match run_oracle(&ctx, opts, true, &mut warnings) {
        Ok(p) => Some(p),
        Err(Error::Budget { .. } | Error::Size(_)) => {
            warnings.push("oracle skipped; tensor sides only".into());
            None
        }
        Err(e) => return Err(e),
    };

    let omega_r = omega_of_quotient(presented, &i, &r_alg, &pi)?;
    let m1 = ScalarModule::from_ideal(&ji)?;
    let t1 = tensor_over_algebra(&m1, &omega_r.to_scalar_module())?;

    let (q_alg, pj) = a.quotient(&j)?;
    let omega_q = omega_of_quotient(presented, &j, &q_alg, &pj)?;
    let m2 = m1.descend(&q_alg, &ji)?;
    let t2 = tensor_over_algebra(&m2, &omega_q.to_scalar_module())?;

    let d_r = |x: &[u64]| -> Vec<u64> {
        let n = a.dim();
        let flat: Vec<u64> = presented.d(&pi.lift(x)).chunks(n).flat_map(|c| pi.apply(c)).collect();
        omega_r.coords(&flat)
    };
    let big_b = r_alg.product(ctx.factors().expect("attached"));
    let basis: Vec<Elem> = (0..r_alg.dim()).map(|s| r_alg.mul(&big_b, &r_alg.basis_element(s))).collect();
    let delta_trivial = bilinear_map_trivial(&basis, &basis, |bs, bt| {
        t1.class_of(&m1.ideal_coords(bt).expect("in J/I"), &d_r(bs))
    });

    let (oracle_mode, oracle, psi_trivial, rho_violations) = match &pres {
        Some(pres) => {
            let rho = RhoMap::new(&ctx, &m1, &t1, d_r);
            (
                Some(pres.mode()),
                Some(pres.structure().clone()),
                Some(psi_triviality_check(pres)?),
                Some(rho.violations(pres)?),
            )
        }
        None => (None, None, None, None),
    };
    let (s1, s2) = (t1.structure(), t2.structure());
    let structures_agree = s1 == s2 && oracle.as_ref().is_none_or(|o| *o == s1);
    Ok(TensorIsoReport {
        r,
        oracle_mode,
        oracle,
        tensor_over_a_mod_i: s1,
        tensor_over_a_mod_j: s2,
        structures_agree,
        psi_trivial,
        delta_trivial,
        rho_violations,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExcisionReport {
    pub p: u64,
    pub exponents: Vec<u32>,
    pub integral_ring_size: Option<u64>,
    pub integral: AbelianGroupStructure,
    pub integral_mode: Mode,
    pub modular: AbelianGroupStructure,
    pub modular_mode: Mode,
    pub structures_equal: bool,
    /// Whether reduction mod 2 on symbols is well defined and bijective.
    pub natural_map_isomorphism: bool,
    pub relations: RelationReport,
    pub warnings: Vec<String>,
}

impl ExcisionReport {
    pub fn holds(&self) -> bool {
        self.structures_equal && self.natural_map_isomorphism && self.relations.all()
    }
}

/// Compares `D(ℤ[G]/I, J/I)` with `D(𝔽_2[G], (G̃))` for an elementary abelian 2-group.
pub fn excision_check(spec: &GroupSpec, opts: OracleOptions) -> Result<ExcisionReport> {
    if spec.p() != 2 || !spec.is_elementary() || spec.rank() > crate::lattice::MAX_LATTICE_RANK {
        return Err(Error::Unsupported(format!("excision is checked for elementary abelian 2-groups of rank ≤ 4, not {spec}")));
    }
    let mut warnings = Vec::new();
    let lat = build_lattices(spec)?;
    let relations = relation_checks(&lat)?;
    let q = quotient_ring(&lat, Which::I)?;
    let int_ideal = AlgebraIdeal::closure(q.algebra(), &[q.gtilde()])?;
    let int_ctx = SquareZeroContext::new(int_ideal)?;
    let int_pres = run_oracle(&int_ctx, opts, true, &mut warnings)?;

    let model = GroupRingTensor::new(spec)?;
    let mod_pres = run_oracle(&model.ctx, opts, true, &mut warnings)?;
    let to_fp = |x: &[u64]| -> Elem {
        q.lift(x).iter().map(|c| c.mod_floor_u64(2)).collect()
    };
    let images: Vec<Vec<BigInt>> = (0..int_pres.generator_count())
        .map(|k| {
            let (a, b) = int_pres.generator(k);
            mod_pres.normalize(&SymbolExpr::symbol(to_fp(a), to_fp(b)))
        })
        .collect::<Result<_>>()?;
    let natural_map_isomorphism = map_is_isomorphism(&int_pres, &mod_pres, &images)?;
    let (integral, modular) = (int_pres.structure().clone(), mod_pres.structure().clone());
    Ok(ExcisionReport {
        p: 2,
        exponents: spec.exponents().to_vec(),
        integral_ring_size: q.size(),
        structures_equal: integral == modular,
        integral,
        integral_mode: int_pres.mode(),
        modular,
        modular_mode: mod_pres.mode(),
        natural_map_isomorphism,
        relations,
        warnings,
    })
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, m: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, m: u64) -> u64 {
        use num_integer::Integer;
        self.mod_floor(&BigInt::from(m)).to_u64().expect("reduced")
    }
}

/// A map of finite groups given on generators: well defined if every source relation
/// maps to zero; an isomorphism if it is also onto and the orders agree.
fn map_is_isomorphism(source: &SymbolPresentation, target: &SymbolPresentation, images: &[Vec<BigInt>]) -> Result<bool> {
    let factors: Vec<u64> = target.structure().invariant_factors().to_vec();
    if target.structure().free_rank() > 0 || source.structure().free_rank() > 0 {
        return Ok(false);
    }
    let k = factors.len();
    let reduce = |v: Vec<BigInt>| -> Vec<BigInt> {
        use num_integer::Integer;
        v.into_iter().zip(&factors).map(|(x, &d)| x.mod_floor(&BigInt::from(d))).collect()
    };
    for row in source.rows() {
        let mut acc = vec![BigInt::zero(); k];
        for &(c, x) in row {
            for (slot, y) in acc.iter_mut().zip(&images[c]) {
                *slot += y * x;
            }
        }
        if reduce(acc).iter().any(|x| !x.is_zero()) {
            return Ok(false);
        }
    }
    let mut rows: Vec<Vec<BigInt>> = images.to_vec();
    for (i, &d) in factors.iter().enumerate() {
        let mut r = vec![BigInt::zero(); k];
        r[i] = BigInt::from(d);
        rows.push(r);
    }
    let onto = k == 0 || cokernel_structure(&MatrixZ::from_rows(k, &rows)?, k)?.is_trivial();
    Ok(onto && source.structure().order() == target.structure().order())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Corner {
    pub name: String,
    pub size: Option<u64>,
    pub dim: Option<usize>,
    pub concrete: bool,
}

/// `ℤ[G]/I → ℤ[G]/J`, `ℤ[G]/I → 𝔽_p[G]`, `ℤ[G]/J → 𝔽_p[G]/(G̃)`, `𝔽_p[G] → 𝔽_p[G]/(G̃)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquareReport {
    pub p: u64,
    pub exponents: Vec<u32>,
    pub corners: Vec<Corner>,
    pub commutes: Option<bool>,
    pub pullback: Option<bool>,
}

pub fn cartesian_square(spec: &GroupSpec) -> Result<SquareReport> {
    let p = spec.p();
    let fp = FiniteAlgebra::group_ring(spec, p)?;
    let gt = fp.from_ring_element(&RingElement::gtilde(spec, p))?;
    let gt_ideal = AlgebraIdeal::closure(&fp, &[gt])?;
    let (fq, proj) = fp.quotient(&gt_ideal)?;
    let fp_corner = Corner { name: format!("F{p}[G]"), size: fp.size(), dim: Some(fp.dim()), concrete: true };
    let fq_corner = Corner { name: format!("F{p}[G]/(G~)"), size: fq.size(), dim: Some(fq.dim()), concrete: true };
    let symbolic = |name: &str| Corner { name: name.into(), size: None, dim: None, concrete: false };
    let lat = match build_lattices(spec) {
        Ok(l) => l,
        Err(Error::Unsupported(_)) => {
            return Ok(SquareReport {
                p,
                exponents: spec.exponents().to_vec(),
                corners: vec![symbolic("Z[G]/I"), symbolic("Z[G]/J"), fp_corner, fq_corner],
                commutes: None,
                pullback: None,
            })
        }
        Err(e) => return Err(e),
    };
    let qi = quotient_ring(&lat, Which::I)?;
    let qj = quotient_ring(&lat, Which::J)?;
    let corner = |name: &str, alg: &FiniteAlgebra| Corner {
        name: name.into(),
        size: alg.size(),
        dim: Some(alg.dim()),
        concrete: true,
    };
    let corners = vec![corner("Z[G]/I", qi.algebra()), corner("Z[G]/J", qj.algebra()), fp_corner, fq_corner];
    let mod_p = |v: Vec<BigInt>| -> Elem { v.iter().map(|c| c.mod_floor_u64(p)).collect() };

    let (commutes, pullback) = match (qi.algebra().elements(), qj.algebra().elements(), fp.elements()) {
        (Ok(top), Ok(right), Ok(left)) => {
            let to_j = |x: &Elem| qj.project(&qi.lift(x));
            let to_fp = |x: &Elem| mod_p(qi.lift(x));
            let j_down = |y: &Elem| proj.apply(&mod_p(qj.lift(y)));
            let commutes = top.iter().all(|x| j_down(&to_j(x)) == proj.apply(&to_fp(x)));
            let mut pairs = std::collections::HashSet::new();
            let injective = top.iter().all(|x| pairs.insert((to_j(x), to_fp(x))));
            let mut right_counts: HashMap<Elem, u64> = HashMap::new();
            for y in &right {
                *right_counts.entry(j_down(y)).or_default() += 1;
            }
            let mut fiber = 0u64;
            for z in &left {
                fiber += right_counts.get(&proj.apply(z)).copied().unwrap_or(0);
            }
            (Some(commutes), Some(injective && fiber == top.len() as u64))
        }
        _ => (None, None),
    };
    Ok(SquareReport { p, exponents: spec.exponents().to_vec(), corners, commutes, pullback })
}
