//! Dennis–Stein symbols `⟨a, b⟩` for a square-zero ideal `I` of a finite ring `R`,
//! and the abelian group `D(R, I)` presented by the relations
//!
//! * DS1: `⟨a,b⟩⟨b,a⟩ = 1`
//! * DS2: `⟨a,b⟩⟨a,c⟩ = ⟨a, b + c + abc⟩`
//! * DS3: `⟨a,bc⟩ = ⟨ab,c⟩⟨ac,b⟩`
//!
//! written additively. Stored generators are oriented with the second entry in `I`;
//! a symbol whose ideal entry comes first is recorded as the negative of its swap.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraIdeal, Elem, FiniteAlgebra, ScalarModule, TensorProduct};
use crate::error::{Error, Result};
use crate::linear::{AbelianGroupStructure, Cokernel, HnfAccumulator, MatrixZ};

/// Default limit on `|R|·|I|` for full enumeration.
pub const DEFAULT_BUDGET_PAIRS: u64 = 4096;

/// Environment variable overriding [`DEFAULT_BUDGET_PAIRS`].
pub const BUDGET_ENV: &str = "RELK2_BUDGET_PAIRS";

/// The pair budget, read from [`BUDGET_ENV`] when set to a positive integer.
pub fn budget_from_env() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .filter(|&b| b > 0)
        .unwrap_or(DEFAULT_BUDGET_PAIRS)
}

/// Sparse integer row over the generator columns.
pub type SparseRow = Vec<(usize, i64)>;

pub fn check_square_zero(ideal: &AlgebraIdeal) -> bool {
    ideal.is_square_zero()
}

/// A ring with a square-zero ideal, optionally with factors `b_1, …, b_r`
/// that each annihilate the ideal.
#[derive(Clone, Debug)]
pub struct SquareZeroContext {
    ideal: AlgebraIdeal,
    factors: Option<Vec<Elem>>,
}

impl SquareZeroContext {
    pub fn new(ideal: AlgebraIdeal) -> Result<Self> {
        if !check_square_zero(&ideal) {
            return Err(Error::Hypothesis(format!("ideal {} does not square to zero", ideal.describe())));
        }
        Ok(SquareZeroContext { ideal, factors: None })
    }

    /// Attaches factors with `b_i · ideal = 0`.
    pub fn with_factors(mut self, factors: Vec<Elem>) -> Result<Self> {
        let alg = self.ideal.algebra();
        for (i, b) in factors.iter().enumerate() {
            if b.len() != alg.dim() {
                return Err(Error::Mismatch("factor has the wrong length".into()));
            }
            if !self.ideal.annihilated_by(b) {
                return Err(Error::Hypothesis(format!(
                    "factor b{} = {} does not map the ideal into zero",
                    i + 1,
                    alg.element_text(b)
                )));
            }
        }
        self.factors = Some(factors);
        Ok(self)
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        self.ideal.algebra()
    }

    pub fn ideal(&self) -> &AlgebraIdeal {
        &self.ideal
    }

    pub fn factors(&self) -> Option<&[Elem]> {
        self.factors.as_deref()
    }

    /// `|R|·|I|`, the number of generators in full mode.
    pub fn pair_count(&self) -> Option<u64> {
        self.algebra().size()?.checked_mul(self.ideal.size()?)
    }
}

/// One factor `⟨a, b⟩^sign`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolFactor {
    pub a: Elem,
    pub b: Elem,
    pub sign: i64,
}

/// A word `∏ ⟨a_i, b_i⟩^{±1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolExpr {
    factors: Vec<SymbolFactor>,
}

impl SymbolExpr {
    pub fn identity() -> Self {
        SymbolExpr::default()
    }

    pub fn symbol(a: Elem, b: Elem) -> Self {
        SymbolExpr { factors: vec![SymbolFactor { a, b, sign: 1 }] }
    }

    pub fn factors(&self) -> &[SymbolFactor] {
        &self.factors
    }

    pub fn push(&mut self, a: Elem, b: Elem, sign: i64) {
        self.factors.push(SymbolFactor { a, b, sign });
    }

    pub fn times(mut self, other: &SymbolExpr) -> Self {
        self.factors.extend(other.factors.iter().cloned());
        self
    }

    pub fn inverse(&self) -> Self {
        let factors = self
            .factors
            .iter()
            .rev()
            .map(|f| SymbolFactor { a: f.a.clone(), b: f.b.clone(), sign: -f.sign })
            .collect();
        SymbolExpr { factors }
    }

    /// Parses `<a|b><c|d>^-1 …`; `element` parses the entries.
    pub fn parse_with<F>(text: &str, element: F) -> Result<Self>
    where
        F: Fn(&str) -> Result<Elem>,
    {
        let mut expr = SymbolExpr::identity();
        let mut rest = text.trim();
        while !rest.is_empty() {
            rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == '*' || c == '·');
            if rest.is_empty() {
                break;
            }
            let body = rest
                .strip_prefix('<')
                .ok_or_else(|| Error::Parse(format!("expected '<' at {rest:?}")))?;
            let close = body.find('>').ok_or_else(|| Error::Parse("unclosed symbol".into()))?;
            let (inside, after) = (&body[..close], &body[close + 1..]);
            let (a, b) = inside
                .split_once('|')
                .ok_or_else(|| Error::Parse(format!("symbol {inside:?} lacks '|'")))?;
            let (sign, after) = match after.strip_prefix("^-1") {
                Some(r) => (-1, r),
                None => (1, after),
            };
            expr.push(element(a.trim())?, element(b.trim())?, sign);
            rest = after;
        }
        Ok(expr)
    }

    pub fn to_text(&self, alg: &FiniteAlgebra) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        self.factors
            .iter()
            .map(|f| {
                let s = format!("<{}|{}>", alg.element_text(&f.a), alg.element_text(&f.b));
                if f.sign == 1 {
                    s
                } else {
                    format!("{s}^{}", f.sign)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// `∏_i ⟨α_i, α̂_i⟩`, where `α̂_i` is the product of the other entries.
pub fn scholium_expand(alg: &FiniteAlgebra, alphas: &[Elem]) -> Result<SymbolExpr> {
    if alphas.is_empty() {
        return Err(Error::InvalidSpec("need at least one entry".into()));
    }
    if alg.prime().is_none() && !is_unit_by_nilpotence(alg, &alg.product(alphas)) {
        return Err(Error::NotInvertible("1 - product of the entries".into()));
    }
    let mut expr = SymbolExpr::identity();
    for i in 0..alphas.len() {
        let others: Vec<Elem> =
            alphas.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, a)| a.clone()).collect();
        expr.push(alphas[i].clone(), alg.product(&others), 1);
    }
    Ok(expr)
}

fn is_unit_by_nilpotence(alg: &FiniteAlgebra, x: &[u64]) -> bool {
    // 1 - x is a unit when x is nilpotent
    let mut power = x.to_vec();
    for _ in 0..=alg.dim() * 64 {
        if alg.is_zero(&power) {
            return true;
        }
        power = alg.mul(&power, x);
    }
    false
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Every symbol is a generator; every relation instance is a row.
    Full,
    /// Generators on basis pairs, symbols expanded bilinearly; relation instances on basis triples.
    Reduced,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Full => "full",
            Mode::Reduced => "reduced",
        })
    }
}

#[derive(Clone, Debug)]
enum Columns {
    Full { ideal_pos: HashMap<Elem, usize>, ideal_size: usize },
    Reduced { ideal_gens: usize },
}

/// The presented group `D(R, I)`.
#[derive(Clone, Debug)]
pub struct SymbolPresentation {
    ctx: SquareZeroContext,
    mode: Mode,
    columns: Columns,
    generators: Vec<(Elem, Elem)>,
    rows: Vec<SparseRow>,
    hermite: MatrixZ,
    cokernel: Cokernel,
}

impl SymbolPresentation {
    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn context(&self) -> &SquareZeroContext {
        &self.ctx
    }

    pub fn structure(&self) -> &AbelianGroupStructure {
        self.cokernel.structure()
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    /// Generator `k` as the pair `(a, b)` of the symbol `⟨a, b⟩`.
    pub fn generator(&self, k: usize) -> (&Elem, &Elem) {
        let (a, b) = &self.generators[k];
        (a, b)
    }

    pub fn generator_labels(&self) -> Vec<String> {
        let alg = self.ctx.algebra();
        self.generators
            .iter()
            .map(|(a, b)| format!("<{}|{}>", alg.element_text(a), alg.element_text(b)))
            .collect()
    }

    /// Deduplicated relation rows as enumerated.
    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    /// Hermite basis of the relation lattice.
    pub fn relation_matrix(&self) -> &MatrixZ {
        &self.hermite
    }

    /// Column vector of a single symbol.
    pub fn encode(&self, a: &[u64], b: &[u64]) -> Result<SparseRow> {
        encode_symbol(&self.ctx, &self.columns, a, b)
    }

    pub fn encode_expr(&self, expr: &SymbolExpr) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::zero(); self.generators.len()];
        for f in expr.factors() {
            for (c, x) in self.encode(&f.a, &f.b)? {
                v[c] += x * f.sign;
            }
        }
        Ok(v)
    }

    /// Coordinates of the class of `expr` in the invariant-factor decomposition;
    /// the zero vector exactly for the identity.
    pub fn normalize(&self, expr: &SymbolExpr) -> Result<Vec<BigInt>> {
        Ok(self.cokernel.coordinates(&self.encode_expr(expr)?))
    }

    pub fn is_identity(&self, expr: &SymbolExpr) -> Result<bool> {
        Ok(self.normalize(expr)?.iter().all(Zero::is_zero))
    }

    /// Class coordinates of a raw column vector.
    pub fn coordinates(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.cokernel.coordinates(v)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "mode": self.mode,
            "generators": self.generator_labels(),
            "relations": self.hermite,
            "invariant_factors": self.structure().invariant_factors(),
            "free_rank": self.structure().free_rank(),
        })
    }
}

fn encode_symbol(ctx: &SquareZeroContext, columns: &Columns, a: &[u64], b: &[u64]) -> Result<SparseRow> {
    let alg = ctx.algebra();
    let ideal = ctx.ideal();
    if a.len() != alg.dim() || b.len() != alg.dim() {
        return Err(Error::Mismatch("symbol entry has the wrong length".into()));
    }
    let (r, i, sign) = if ideal.contains(b) {
        (a, b, 1)
    } else if ideal.contains(a) {
        (b, a, -1)
    } else {
        return Err(Error::NotInIdeal(format!(
            "<{}|{}> has no entry in the ideal",
            alg.element_text(a),
            alg.element_text(b)
        )));
    };
    let r = alg.reduce(r.to_vec());
    match columns {
        Columns::Full { ideal_pos, ideal_size } => {
            let col = alg.index_of(&r) as usize * ideal_size + ideal_pos[i];
            Ok(vec![(col, sign)])
        }
        Columns::Reduced { ideal_gens } => {
            let beta = ideal.express(i).expect("member of the ideal");
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for (k, &rk) in r.iter().enumerate() {
                if rk == 0 {
                    continue;
                }
                for (l, &bl) in beta.iter().enumerate() {
                    if bl != 0 {
                        *acc.entry(k * ideal_gens + l).or_default() += sign * rk as i64 * bl;
                    }
                }
            }
            Ok(acc.into_iter().filter(|&(_, x)| x != 0).collect())
        }
    }
}

/// Sums signed rows, dropping zeros, with the first entry made positive.
fn combine(parts: &[(i64, &SparseRow)]) -> SparseRow {
    let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
    for (s, row) in parts {
        for &(c, x) in row.iter() {
            *acc.entry(c).or_default() += s * x;
        }
    }
    let mut row: SparseRow = acc.into_iter().filter(|&(_, x)| x != 0).collect();
    if row.first().is_some_and(|&(_, x)| x < 0) {
        for e in row.iter_mut() {
            e.1 = -e.1;
        }
    }
    row
}

/// Builds `D(R, I)`. Full mode fails with a budget error when `|R|·|I|`
/// exceeds `budget_pairs`.
pub fn build_presentation(ctx: &SquareZeroContext, mode: Mode, budget_pairs: u64) -> Result<SymbolPresentation> {
    match mode {
        Mode::Full => build_full(ctx, budget_pairs),
        Mode::Reduced => build_reduced(ctx),
    }
}

fn finish(
    ctx: &SquareZeroContext,
    mode: Mode,
    columns: Columns,
    generators: Vec<(Elem, Elem)>,
    mut rows: Vec<SparseRow>,
) -> Result<SymbolPresentation> {
    rows.retain(|r| !r.is_empty());
    rows.par_sort_unstable();
    rows.dedup();
    let n = generators.len();
    let mut acc = HnfAccumulator::new(n);
    for row in &rows {
        let mut dense = vec![BigInt::zero(); n];
        for &(c, x) in row {
            dense[c] = BigInt::from(x);
        }
        acc.insert(dense);
    }
    let cokernel = Cokernel::from_accumulator(&acc)?;
    Ok(SymbolPresentation { ctx: ctx.clone(), mode, columns, generators, rows, hermite: acc.finish(), cokernel })
}

fn build_full(ctx: &SquareZeroContext, budget: u64) -> Result<SymbolPresentation> {
    let alg = ctx.algebra();
    let ideal = ctx.ideal();
    let needed = ctx.pair_count().unwrap_or(u64::MAX);
    if needed > budget {
        return Err(Error::Budget { what: "full-mode generator pairs |R|·|I|".into(), needed, budget });
    }
    let ring = alg.elements()?;
    let members = ideal.elements()?;
    let ideal_pos: HashMap<Elem, usize> = members.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let in_ideal: Vec<bool> = ring.iter().map(|e| ideal_pos.contains_key(e)).collect();
    let columns = Columns::Full { ideal_pos, ideal_size: members.len() };
    let generators: Vec<(Elem, Elem)> =
        ring.iter().flat_map(|a| members.iter().map(move |b| (a.clone(), b.clone()))).collect();
    let sym = |a: &[u64], b: &[u64]| encode_symbol(ctx, &columns, a, b).expect("valid symbol");

    let ideal_idx: Vec<usize> = (0..ring.len()).filter(|&i| in_ideal[i]).collect();
    let all_idx: Vec<usize> = (0..ring.len()).collect();
    let rows: Vec<SparseRow> = (0..ring.len())
        .into_par_iter()
        .flat_map_iter(|ai| {
            let a = &ring[ai];
            let mut out = Vec::new();
            // DS1
            if in_ideal[ai] {
                for &bi in &ideal_idx {
                    let b = &ring[bi];
                    out.push(combine(&[(1, &sym(a, b)), (1, &sym(b, a))]));
                }
            }
            // DS2
            let pool = if in_ideal[ai] { &all_idx } else { &ideal_idx };
            for (x, &bi) in pool.iter().enumerate() {
                for &ci in &pool[x..] {
                    let (b, c) = (&ring[bi], &ring[ci]);
                    let abc = alg.mul(a, &alg.mul(b, c));
                    let sum = alg.add(&alg.add(b, c), &abc);
                    out.push(combine(&[(1, &sym(a, b)), (1, &sym(a, c)), (-1, &sym(a, &sum))]));
                }
            }
            // DS3, symmetric in (b, c)
            for bi in 0..ring.len() {
                let tail: &[usize] = if in_ideal[ai] || in_ideal[bi] { &all_idx[bi..] } else { &ideal_idx };
                for &ci in tail {
                    if ci < bi {
                        continue;
                    }
                    let (b, c) = (&ring[bi], &ring[ci]);
                    let row = combine(&[
                        (1, &sym(a, &alg.mul(b, c))),
                        (-1, &sym(&alg.mul(a, b), c)),
                        (-1, &sym(&alg.mul(a, c), b)),
                    ]);
                    out.push(row);
                }
            }
            out.sort_unstable();
            out.dedup();
            out
        })
        .collect();
    finish(ctx, Mode::Full, columns, generators, rows)
}

fn build_reduced(ctx: &SquareZeroContext) -> Result<SymbolPresentation> {
    let alg = ctx.algebra();
    let ideal = ctx.ideal();
    let n = alg.dim();
    let gens = ideal.additive_basis().to_vec();
    let m = gens.len();
    let columns = Columns::Reduced { ideal_gens: m };
    let generators: Vec<(Elem, Elem)> =
        (0..n).flat_map(|k| gens.iter().map(move |g| (alg.basis_element(k), g.clone()))).collect();
    let sym = |a: &[u64], b: &[u64]| encode_symbol(ctx, &columns, a, b).expect("valid symbol");

    let mut rows: Vec<SparseRow> = Vec::new();
    // additive orders of the basis and relations among the ideal generators
    for (k, &order) in alg.orders().iter().enumerate() {
        for l in 0..m {
            rows.push(vec![(k * m + l, order as i64)]);
        }
    }
    for rel in ideal.relation_rows_i64()? {
        for k in 0..n {
            rows.push(rel.iter().enumerate().filter(|(_, &x)| x != 0).map(|(l, &x)| (k * m + l, x)).collect());
        }
    }

    let mut pool: Vec<Elem> = (0..n).map(|k| alg.basis_element(k)).collect();
    pool.push(alg.one());
    pool.extend(alg.generators().iter().cloned());
    pool.extend(gens.iter().cloned());
    let mut seen = std::collections::HashSet::new();
    pool.retain(|e| !alg.is_zero(e) && seen.insert(e.clone()));
    let in_ideal: Vec<bool> = pool.iter().map(|e| ideal.contains(e)).collect();
    let size = pool.len();

    let instance_rows: Vec<SparseRow> = (0..size)
        .into_par_iter()
        .flat_map_iter(|ai| {
            let a = &pool[ai];
            let mut out = Vec::new();
            for bi in 0..size {
                let b = &pool[bi];
                if in_ideal[ai] && in_ideal[bi] {
                    out.push(combine(&[(1, &sym(a, b)), (1, &sym(b, a))]));
                }
                for ci in bi..size {
                    let c = &pool[ci];
                    if in_ideal[ai] || (in_ideal[bi] && in_ideal[ci]) {
                        let abc = alg.mul(a, &alg.mul(b, c));
                        let sum = alg.add(&alg.add(b, c), &abc);
                        out.push(combine(&[(1, &sym(a, b)), (1, &sym(a, c)), (-1, &sym(a, &sum))]));
                    }
                    if in_ideal[ai] || in_ideal[bi] || in_ideal[ci] {
                        out.push(combine(&[
                            (1, &sym(a, &alg.mul(b, c))),
                            (-1, &sym(&alg.mul(a, b), c)),
                            (-1, &sym(&alg.mul(a, c), b)),
                        ]));
                    }
                }
            }
            out
        })
        .collect();
    rows.extend(instance_rows);
    finish(ctx, Mode::Reduced, columns, generators, rows)
}

/// Whether `⟨B s, B t⟩` is trivial for all basis elements `s, t`, where `B = b_1⋯b_r`.
pub fn psi_triviality_check(pres: &SymbolPresentation) -> Result<bool> {
    let ctx = pres.context();
    let factors = ctx
        .factors()
        .ok_or_else(|| Error::Hypothesis("no factors b_i attached to the context".into()))?;
    if factors.len() < 2 {
        return Err(Error::Hypothesis(format!("need r > 1 factors, got {}", factors.len())));
    }
    let alg = ctx.algebra();
    let big_b = alg.product(factors);
    let images: Vec<Elem> = (0..alg.dim()).map(|s| alg.mul(&big_b, &alg.basis_element(s))).collect();
    for x in &images {
        if !ctx.ideal().contains(x) {
            return Err(Error::Hypothesis("b_1⋯b_r does not lie in the ideal".into()));
        }
    }
    for x in &images {
        for y in &images {
            if !pres.is_identity(&SymbolExpr::symbol(x.clone(), y.clone()))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `ρ⟨a,b⟩ = a ⊗ db` if `a` lies in the ideal, `−b ⊗ da` if `b` does, with values
/// in `ideal ⊗_R Ω_R`.
pub struct RhoMap<'a> {
    ideal_module: &'a ScalarModule,
    tensor: &'a TensorProduct,
    /// Coordinates of `d(x)` in the scalar basis of `Ω_R`.
    differential: Box<dyn Fn(&[u64]) -> Vec<u64> + Sync + 'a>,
    ctx: &'a SquareZeroContext,
}

impl<'a> RhoMap<'a> {
    pub fn new<F>(
        ctx: &'a SquareZeroContext,
        ideal_module: &'a ScalarModule,
        tensor: &'a TensorProduct,
        differential: F,
    ) -> Self
    where
        F: Fn(&[u64]) -> Vec<u64> + Sync + 'a,
    {
        RhoMap { ideal_module, tensor, differential: Box::new(differential), ctx }
    }

    pub fn apply(&self, a: &[u64], b: &[u64]) -> Result<Vec<u64>> {
        let ideal = self.ctx.ideal();
        let p = self.tensor.p();
        if ideal.contains(a) {
            let u = self.ideal_module.ideal_coords(a)?;
            Ok(self.tensor.class_of(&u, &(self.differential)(b)))
        } else if ideal.contains(b) {
            let u = self.ideal_module.ideal_coords(b)?;
            let v = self.tensor.class_of(&u, &(self.differential)(a));
            Ok(v.into_iter().map(|x| (p - x) % p).collect())
        } else {
            Err(Error::NotInIdeal("neither entry of the symbol lies in the ideal".into()))
        }
    }

    pub fn apply_expr(&self, expr: &SymbolExpr) -> Result<Vec<u64>> {
        let p = self.tensor.p();
        let mut acc = vec![0u64; self.tensor.dim()];
        for f in expr.factors() {
            let img = self.apply(&f.a, &f.b)?;
            let s = f.sign.rem_euclid(p as i64) as u64;
            for (x, y) in acc.iter_mut().zip(img) {
                *x = (*x + s * y) % p;
            }
        }
        Ok(acc)
    }

    /// Image of generator column `k` of a presentation built on the same context.
    pub fn on_generator(&self, pres: &SymbolPresentation, k: usize) -> Result<Vec<u64>> {
        let (a, b) = pres.generator(k);
        self.apply(a, b)
    }

    /// Number of relation rows of `pres` whose image under `ρ` is nonzero.
    pub fn violations(&self, pres: &SymbolPresentation) -> Result<usize> {
        let p = self.tensor.p() as i64;
        let images: Vec<Vec<u64>> =
            (0..pres.generator_count()).into_par_iter().map(|k| self.on_generator(pres, k)).collect::<Result<_>>()?;
        let bad = pres
            .rows()
            .par_iter()
            .filter(|row| {
                let mut acc = vec![0i64; self.tensor.dim()];
                for &(c, x) in row.iter() {
                    for (slot, &y) in acc.iter_mut().zip(&images[c]) {
                        *slot = (*slot + x.rem_euclid(p) * y as i64) % p;
                    }
                }
                acc.iter().any(|&x| x != 0)
            })
            .count();
        Ok(bad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{tensor_over_algebra, AlgebraModule};
    use crate::group_ring::{GroupSpec, RingElement};
    use crate::kahler::PresentedAlgebra;
    use crate::linear::AbelianGroupStructure;

    fn setup(p: u64, e: &[u32]) -> (GroupSpec, FiniteAlgebra, SquareZeroContext) {
        let spec = GroupSpec::new(p, e.to_vec()).unwrap();
        let alg = FiniteAlgebra::group_ring(&spec, p).unwrap();
        let gt = alg.from_ring_element(&RingElement::gtilde(&spec, p)).unwrap();
        let ideal = AlgebraIdeal::closure(&alg, &[gt]).unwrap();
        (spec, alg, SquareZeroContext::new(ideal).unwrap())
    }

    fn elem(spec: &GroupSpec, alg: &FiniteAlgebra, text: &str) -> Elem {
        alg.from_ring_element(&RingElement::parse(spec, spec.p(), text).unwrap()).unwrap()
    }

    #[test]
    fn square_zero_examples() {
        let (_, alg, ctx) = setup(2, &[1, 1]);
        assert!(check_square_zero(ctx.ideal()));
        assert!(check_square_zero(&AlgebraIdeal::closure(&alg, &[]).unwrap()));
        let (_, c2, _) = setup(2, &[1]);
        let whole = AlgebraIdeal::closure(&c2, &[c2.one()]).unwrap();
        assert!(!check_square_zero(&whole));
        assert!(matches!(SquareZeroContext::new(whole), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn full_mode_examples() {
        let (_, _, ctx) = setup(2, &[1, 1]);
        let pres = build_presentation(&ctx, Mode::Full, DEFAULT_BUDGET_PAIRS).unwrap();
        assert_eq!(pres.structure(), &AbelianGroupStructure::elementary(2, 2));
        let (_, _, ctx) = setup(2, &[1]);
        assert!(build_presentation(&ctx, Mode::Full, DEFAULT_BUDGET_PAIRS).unwrap().structure().is_trivial());
        let (_, alg, _) = setup(2, &[1]);
        let zero = SquareZeroContext::new(AlgebraIdeal::closure(&alg, &[]).unwrap()).unwrap();
        for mode in [Mode::Full, Mode::Reduced] {
            assert!(build_presentation(&zero, mode, DEFAULT_BUDGET_PAIRS).unwrap().structure().is_trivial());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let (_, _, ctx) = setup(2, &[1, 1]);
        let err = build_presentation(&ctx, Mode::Full, 31).unwrap_err();
        assert!(matches!(err, Error::Budget { needed: 32, budget: 31, .. }));
    }

    #[test]
    fn reduced_agrees_with_full() {
        for (p, e) in [(2, vec![1]), (2, vec![1, 1]), (3, vec![1]), (2, vec![2])] {
            let (_, _, ctx) = setup(p, &e);
            let full = build_presentation(&ctx, Mode::Full, DEFAULT_BUDGET_PAIRS).unwrap();
            let reduced = build_presentation(&ctx, Mode::Reduced, DEFAULT_BUDGET_PAIRS).unwrap();
            assert_eq!(full.structure(), reduced.structure(), "p={p} e={e:?}");
        }
    }

    #[test]
    fn normalize_examples() {
        let (spec, alg, ctx) = setup(2, &[1, 1]);
        let pres = build_presentation(&ctx, Mode::Full, DEFAULT_BUDGET_PAIRS).unwrap();
        let gt = elem(&spec, &alg, "G~");
        let x1 = elem(&spec, &alg, "x1");
        assert!(pres.is_identity(&SymbolExpr::symbol(x1.clone(), alg.zero())).unwrap());
        let pair = SymbolExpr::symbol(x1.clone(), gt.clone()).times(&SymbolExpr::symbol(gt.clone(), x1.clone()));
        assert!(pres.is_identity(&pair).unwrap());
        assert!(!pres.is_identity(&SymbolExpr::symbol(x1, gt)).unwrap());
        let g = elem(&spec, &alg, "g1");
        let h = elem(&spec, &alg, "g2");
        assert!(matches!(pres.normalize(&SymbolExpr::symbol(g, h)), Err(Error::NotInIdeal(_))));
    }

    #[test]
    fn parse_symbols() {
        let (spec, alg, _) = setup(2, &[1, 1]);
        let parse = |s: &str| alg.from_ring_element(&RingElement::parse(&spec, 2, s)?);
        let expr = SymbolExpr::parse_with("<x1|G~> <g1*g2|G~>^-1", parse).unwrap();
        assert_eq!(expr.factors().len(), 2);
        assert_eq!(expr.factors()[1].sign, -1);
        assert_eq!(expr.to_text(&alg), "<1 + g1|1 + g2 + g1 + g1*g2> <g1*g2|1 + g2 + g1 + g1*g2>^-1");
        assert!(SymbolExpr::parse_with("<x1 G~>", parse).is_err());
        assert!(SymbolExpr::parse_with("x1", parse).is_err());
    }

    #[test]
    fn scholium_and_psi() {
        let (spec, alg, ctx) = setup(2, &[1, 1]);
        let pres = build_presentation(&ctx, Mode::Full, DEFAULT_BUDGET_PAIRS).unwrap();
        let gt = elem(&spec, &alg, "G~");
        let s = elem(&spec, &alg, "g1");
        let b1 = elem(&spec, &alg, "x1");
        let b2 = elem(&spec, &alg, "x2");
        let expr = scholium_expand(&alg, &[s, b1.clone(), gt.clone()]).unwrap();
        assert!(pres.is_identity(&expr).unwrap());
        assert!(pres.is_identity(&scholium_expand(&alg, &[gt]).unwrap()).unwrap());
        let with = ctx.clone().with_factors(vec![b1.clone(), b2]).unwrap();
        let pres = build_presentation(&with, Mode::Full, DEFAULT_BUDGET_PAIRS).unwrap();
        assert!(psi_triviality_check(&pres).unwrap());
        let single = ctx.with_factors(vec![b1]).unwrap();
        let pres = build_presentation(&single, Mode::Reduced, DEFAULT_BUDGET_PAIRS).unwrap();
        assert!(matches!(psi_triviality_check(&pres), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn rho_examples_and_well_definedness() {
        let (spec, alg, ctx) = setup(2, &[1, 1]);
        let presented = PresentedAlgebra::group_ring(&spec).unwrap();
        let ideal_module = ScalarModule::from_ideal(ctx.ideal()).unwrap();
        let omega = AlgebraModule::free(&alg, vec!["dg1".into(), "dg2".into()]).unwrap();
        let tensor = tensor_over_algebra(&ideal_module, &omega.to_scalar_module()).unwrap();
        let rho = RhoMap::new(&ctx, &ideal_module, &tensor, |x| omega.coords(&presented.d(x)));
        let gt = elem(&spec, &alg, "G~");
        let x1 = elem(&spec, &alg, "x1");
        let g1 = elem(&spec, &alg, "g1");
        // over 𝔽_2 the sign is invisible: both give the class of G~ ⊗ dg1
        assert_eq!(rho.apply(&x1, &gt).unwrap(), vec![1, 0]);
        assert_eq!(rho.apply(&gt, &g1).unwrap(), vec![1, 0]);
        assert_eq!(rho.apply(&alg.zero(), &gt).unwrap(), vec![0, 0]);
        assert!(rho.apply(&g1, &x1).is_err());
        let pres = build_presentation(&ctx, Mode::Full, DEFAULT_BUDGET_PAIRS).unwrap();
        assert_eq!(rho.violations(&pres).unwrap(), 0);
    }

    #[test]
    fn rho_sign_over_f3() {
        let (spec, alg, ctx) = setup(3, &[1]);
        let presented = PresentedAlgebra::group_ring(&spec).unwrap();
        let ideal_module = ScalarModule::from_ideal(ctx.ideal()).unwrap();
        let omega = AlgebraModule::free(&alg, vec!["dg1".into()]).unwrap();
        let tensor = tensor_over_algebra(&ideal_module, &omega.to_scalar_module()).unwrap();
        let rho = RhoMap::new(&ctx, &ideal_module, &tensor, |x| omega.coords(&presented.d(x)));
        let gt = elem(&spec, &alg, "G~");
        let x1 = elem(&spec, &alg, "x1");
        let g1 = elem(&spec, &alg, "g1");
        let minus = rho.apply(&x1, &gt).unwrap();
        let plus = rho.apply(&gt, &g1).unwrap();
        assert!(plus.iter().any(|&c| c != 0));
        assert_eq!(minus.iter().zip(&plus).map(|(a, b)| (a + b) % 3).collect::<Vec<_>>(), vec![0; plus.len()]);
        let pres = build_presentation(&ctx, Mode::Full, DEFAULT_BUDGET_PAIRS).unwrap();
        assert_eq!(rho.violations(&pres).unwrap(), 0);
    }

    #[test]
    fn exponent_p_and_additivity() {
        let (spec, alg, ctx) = setup(3, &[1]);
        let pres = build_presentation(&ctx, Mode::Full, DEFAULT_BUDGET_PAIRS).unwrap();
        assert!(pres.structure().invariant_factors().iter().all(|&d| d == 3));
        let gt = elem(&spec, &alg, "G~");
        let g1 = elem(&spec, &alg, "g1");
        let two_gt = alg.scale(2, &gt);
        let lhs = SymbolExpr::symbol(g1.clone(), alg.add(&gt, &two_gt));
        let rhs = SymbolExpr::symbol(g1.clone(), gt.clone()).times(&SymbolExpr::symbol(g1, two_gt));
        assert_eq!(pres.normalize(&lhs).unwrap(), pres.normalize(&rhs).unwrap());
    }
}
