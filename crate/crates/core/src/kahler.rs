//! Kähler differentials of finite 𝔽_p-algebras.
//!
//! `Ω` of a presented algebra `𝔽_p[x_1..x_v]/(f_1..f_v)` is the cokernel of its
//! Jacobian; for finite algebras without a presentation the universal module
//! (free on `d(e_k)` modulo Leibniz and `d(1) = 0`) serves as an independent
//! construction. The conormal sequence ties the two together.

use std::collections::BTreeMap;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::algebra::{AlgebraIdeal, AlgebraModule, Elem, FiniteAlgebra, Projection, MAX_BASIS};
use crate::error::{Error, Result};
use crate::group_ring::{is_prime, GroupSpec, RingElement};
use crate::linear::modp::{inv_mod, reduce_i64};
use crate::linear::{AbelianGroupStructure, EchelonBasis, MatrixModP, PivotOrder};

/// Univariate polynomial over 𝔽_p, ascending coefficients.
pub type UniPoly = Vec<u64>;

fn trim(mut f: UniPoly) -> UniPoly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> UniPoly {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    let mut r = trim(a.to_vec());
    while r.len() > db {
        let top = r.len() - 1;
        let q = r[top] * inv % p;
        for (i, &c) in b.iter().enumerate() {
            let idx = top - db + i;
            r[idx] = (r[idx] + (p - q) * c) % p;
        }
        r = trim(r);
    }
    r
}

fn make_monic(f: UniPoly, p: u64) -> UniPoly {
    let f = trim(f);
    match f.last() {
        Some(&lead) => {
            let inv = inv_mod(lead, p);
            f.into_iter().map(|c| c * inv % p).collect()
        }
        None => f,
    }
}

fn poly_gcd(a: UniPoly, b: UniPoly, p: u64) -> UniPoly {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    make_monic(a, p)
}

fn derivative(f: &[u64], p: u64) -> UniPoly {
    f.iter().enumerate().skip(1).map(|(k, &c)| (k as u64 % p) * c % p).collect()
}

/// `𝔽_p[x_1, …, x_v] / (f_1(x_1), …, f_v(x_v))` with each `f_j` monic in its own variable.
///
/// Such relations already form a Gröbner basis, so reducing each variable's
/// degree below `deg f_j` is a normal form.
#[derive(Clone, Debug)]
pub struct PresentedAlgebra {
    p: u64,
    names: Vec<String>,
    relations: Vec<UniPoly>,
    realized: FiniteAlgebra,
}

impl PresentedAlgebra {
    pub fn new(p: u64, names: Vec<String>, relations: Vec<Vec<i64>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidSpec(format!("{p} is not prime")));
        }
        if names.len() != relations.len() || names.is_empty() {
            return Err(Error::Mismatch("need exactly one relation per variable".into()));
        }
        let relations: Vec<UniPoly> = relations
            .into_iter()
            .map(|f| make_monic(f.into_iter().map(|c| reduce_i64(c, p)).collect(), p))
            .collect();
        if relations.iter().any(|f| f.len() < 2) {
            return Err(Error::Unsupported("relations must have positive degree".into()));
        }
        let realized = realize(p, &names, &relations)?;
        Ok(PresentedAlgebra { p, names, relations, realized })
    }

    /// `𝔽_p[G]` as `𝔽_p[g_1..g_r]/(g_j^{p^{n_j}} − 1)`.
    pub fn group_ring(spec: &GroupSpec) -> Result<Self> {
        let names = (1..=spec.rank()).map(|i| format!("g{i}")).collect();
        let relations = spec
            .orders()
            .into_iter()
            .map(|o| {
                let mut f = vec![0i64; o as usize + 1];
                f[0] = -1;
                f[o as usize] = 1;
                f
            })
            .collect();
        Self::new(spec.p(), names, relations)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relations(&self) -> &[UniPoly] {
        &self.relations
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.relations.iter().map(|f| f.len() - 1).collect()
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.realized
    }

    fn var_power(&self, var: usize, e: u64) -> UniPoly {
        let f = &self.relations[var];
        let mut acc: UniPoly = vec![1];
        for _ in 0..e {
            let mut shifted = vec![0u64];
            shifted.extend(&acc);
            acc = poly_rem(&shifted, f, self.p);
        }
        acc
    }

    /// Normal form of a monomial `∏ x_j^{e_j}`.
    pub fn monomial(&self, exps: &[u64]) -> Elem {
        let parts: Vec<UniPoly> =
            exps.iter().enumerate().map(|(j, &e)| self.var_power(j, e)).collect();
        combine(self.p, &self.degrees(), &parts)
    }

    /// Normal form of a polynomial given as `exponents → coefficient`.
    pub fn normal_form(&self, poly: &BTreeMap<Vec<u64>, i64>) -> Elem {
        let alg = &self.realized;
        poly.iter().fold(alg.zero(), |acc, (exps, &c)| {
            alg.add(&acc, &alg.scale(c, &self.monomial(exps)))
        })
    }

    /// A univariate polynomial in `x_var`, evaluated in the quotient.
    pub fn eval_univariate(&self, var: usize, f: &[u64]) -> Elem {
        let alg = &self.realized;
        let v = self.names.len();
        f.iter().enumerate().fold(alg.zero(), |acc, (k, &c)| {
            let mut exps = vec![0u64; v];
            exps[var] = k as u64;
            alg.add(&acc, &alg.scale(c as i64, &self.monomial(&exps)))
        })
    }

    /// Exponent tuple of basis element `index`.
    pub fn basis_exponents(&self, index: usize) -> Vec<u64> {
        let degs = self.degrees();
        let mut exps = vec![0u64; degs.len()];
        let mut rest = index;
        for (slot, &d) in exps.iter_mut().zip(&degs).rev() {
            *slot = (rest % d) as u64;
            rest /= d;
        }
        exps
    }

    /// `d(a)` as a flattened vector of `A^v` (component `i` is the `dx_i` coefficient).
    pub fn d(&self, a: &[u64]) -> Vec<u64> {
        let alg = &self.realized;
        let (n, v, p) = (alg.dim(), self.names.len(), self.p);
        let mut out = vec![0u64; n * v];
        for (idx, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let exps = self.basis_exponents(idx);
            for i in 0..v {
                if exps[i] == 0 {
                    continue;
                }
                let mut lower = exps.clone();
                lower[i] -= 1;
                let k = c * (exps[i] % p) % p;
                let term = self.monomial(&lower);
                for (slot, t) in out[i * n..(i + 1) * n].iter_mut().zip(term) {
                    *slot = (*slot + k * t) % p;
                }
            }
        }
        out
    }

    /// Row `j`: `(∂f_j/∂x_1, …, ∂f_j/∂x_v)` reduced in the quotient.
    pub fn jacobian(&self) -> Vec<Vec<Elem>> {
        let v = self.names.len();
        (0..v)
            .map(|j| {
                (0..v)
                    .map(|i| {
                        if i == j {
                            self.eval_univariate(j, &derivative(&self.relations[j], self.p))
                        } else {
                            self.realized.zero()
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

fn combine(p: u64, degs: &[usize], parts: &[UniPoly]) -> Elem {
    let size: usize = degs.iter().product();
    let mut out = vec![0u64; size];
    // iterate over all index tuples with nonzero coefficients
    let mut stack: Vec<(usize, usize, u64)> = vec![(0, 0, 1)];
    while let Some((var, idx, coeff)) = stack.pop() {
        if var == degs.len() {
            out[idx] = (out[idx] + coeff) % p;
            continue;
        }
        for (e, &c) in parts[var].iter().enumerate() {
            if c != 0 {
                stack.push((var + 1, idx * degs[var] + e, coeff * c % p));
            }
        }
    }
    out
}

fn realize(p: u64, names: &[String], relations: &[UniPoly]) -> Result<FiniteAlgebra> {
    let degs: Vec<usize> = relations.iter().map(|f| f.len() - 1).collect();
    let size = degs.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
    let size = size.filter(|&s| s <= MAX_BASIS).ok_or_else(|| {
        Error::Size(format!("presented algebra exceeds the basis limit {MAX_BASIS}"))
    })?;
    // remainders of x_j^e for e < 2 deg
    let powers: Vec<Vec<UniPoly>> = relations
        .iter()
        .map(|f| {
            let d = f.len() - 1;
            let mut out = Vec::with_capacity(2 * d);
            let mut acc: UniPoly = vec![1];
            for _ in 0..(2 * d).max(2) {
                let mut padded = acc.clone();
                padded.resize(d, 0);
                out.push(padded);
                let mut shifted = vec![0u64];
                shifted.extend(&acc);
                acc = poly_rem(&shifted, f, p);
            }
            out
        })
        .collect();
    let exps_of = |mut idx: usize| {
        let mut e = vec![0usize; degs.len()];
        for (slot, &d) in e.iter_mut().zip(&degs).rev() {
            *slot = idx % d;
            idx /= d;
        }
        e
    };
    let all_exps: Vec<Vec<usize>> = (0..size).map(exps_of).collect();
    let products: Vec<Vec<Elem>> = all_exps
        .iter()
        .map(|a| {
            all_exps
                .iter()
                .map(|b| {
                    let parts: Vec<UniPoly> = (0..degs.len()).map(|j| powers[j][a[j] + b[j]].clone()).collect();
                    combine(p, &degs, &parts)
                })
                .collect()
        })
        .collect();
    let labels = all_exps
        .iter()
        .map(|e| {
            let factors: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(&k, _)| k > 0)
                .map(|(&k, n)| if k == 1 { n.clone() } else { format!("{n}^{k}") })
                .collect();
            if factors.is_empty() {
                "1".to_string()
            } else {
                factors.join("*")
            }
        })
        .collect();
    let generators = (0..degs.len())
        .map(|j| {
            let parts: Vec<UniPoly> =
                (0..degs.len()).map(|i| powers[i][usize::from(i == j)].clone()).collect();
            combine(p, &degs, &parts)
        })
        .collect();
    let mut one = vec![0u64; size];
    one[0] = 1;
    let name = format!("F{p}[{}]/(…)", names.join(","));
    FiniteAlgebra::from_products(name, vec![p; size], labels, one, &products, generators)
}

/// `Ω` of a presented algebra: generators `dx_i`, one Jacobian row per relation.
#[derive(Clone, Debug)]
pub struct DifferentialModule {
    presented: PresentedAlgebra,
    jacobian: Vec<Vec<Elem>>,
    module: AlgebraModule,
}

impl DifferentialModule {
    pub fn presented(&self) -> &PresentedAlgebra {
        &self.presented
    }

    pub fn module(&self) -> &AlgebraModule {
        &self.module
    }

    pub fn jacobian(&self) -> &[Vec<Elem>] {
        &self.jacobian
    }

    pub fn jacobian_is_zero(&self) -> bool {
        self.jacobian.iter().all(|row| row.iter().all(|e| e.iter().all(|&c| c == 0)))
    }

    pub fn structure(&self) -> AbelianGroupStructure {
        self.module.structure()
    }

    /// Free rank over the algebra when the module is free.
    pub fn free_rank(&self) -> Option<usize> {
        self.module.is_free().then(|| self.module.generator_count())
    }
}

pub fn omega(alg: &PresentedAlgebra) -> Result<DifferentialModule> {
    let jacobian = alg.jacobian();
    let names = alg.names().iter().map(|n| format!("d{n}")).collect();
    let module = AlgebraModule::new(alg.algebra(), names, jacobian.clone())?;
    Ok(DifferentialModule { presented: alg.clone(), jacobian, module })
}

/// `Ω_{𝔽_p[G]}` from the Jacobian presentation, after asserting every row vanishes.
pub fn omega_group_ring(spec: &GroupSpec) -> Result<DifferentialModule> {
    let presented = PresentedAlgebra::group_ring(spec)?;
    let om = omega(&presented)?;
    if !om.jacobian_is_zero() {
        return Err(Error::Hypothesis(format!(
            "Jacobian of the group-ring presentation of {spec} has a nonzero row; arithmetic bug"
        )));
    }
    Ok(om)
}

/// `Ω_{A/I}` from the conormal sequence: `(A/I)^v` modulo the images of the
/// Jacobian rows of `A` and of `d(i)` for `i` in an additive basis of `I`.
pub fn omega_of_quotient(
    presented: &PresentedAlgebra,
    ideal: &AlgebraIdeal,
    quotient: &FiniteAlgebra,
    projection: &Projection,
) -> Result<AlgebraModule> {
    let n = presented.algebra().dim();
    let project_row = |flat: &[u64]| -> Vec<Elem> { flat.chunks(n).map(|c| projection.apply(c)).collect() };
    let mut rows: Vec<Vec<Elem>> = presented
        .jacobian()
        .iter()
        .map(|row| row.iter().map(|e| projection.apply(e)).collect())
        .collect();
    for i in ideal.additive_basis() {
        rows.push(project_row(&presented.d(i)));
    }
    let names = presented.names().iter().map(|n| format!("d{n}")).collect();
    AlgebraModule::new(quotient, names, rows)
}

/// The universal module of differentials of a finite 𝔽_p-algebra: free on
/// `d(e_k)`, modulo `d(1) = 0` and `d(g·e_j) = g·d(e_j) + e_j·d(g)` for the
/// algebra generators `g`. Leibniz for generators propagates to all products.
pub fn universal_omega(alg: &FiniteAlgebra) -> Result<AlgebraModule> {
    alg.require_prime()?;
    let n = alg.dim();
    let scalar = |c: u64| alg.scale(c as i64, &alg.one());
    let mut rows: Vec<Vec<Elem>> = Vec::new();
    rows.push(alg.one().iter().map(|&c| scalar(c)).collect());
    for g in alg.generators() {
        for j in 0..n {
            let ej = alg.basis_element(j);
            let prod = alg.mul(g, &ej);
            let row = (0..n)
                .map(|k| {
                    let mut entry = scalar(prod[k]);
                    if k == j {
                        entry = alg.sub(&entry, g);
                    }
                    alg.sub(&entry, &alg.scale(g[k] as i64, &ej))
                })
                .collect();
            rows.push(row);
        }
    }
    let names = alg.labels().iter().map(|l| format!("d({l})")).collect();
    AlgebraModule::new(alg, names, rows)
}

/// An element of `Ω_{𝔽_p[G]}` (or `Ω_{ℤ[G]}`): one coefficient per `dg_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffForm {
    coeffs: Vec<RingElement>,
}

impl DiffForm {
    pub fn zero(spec: &GroupSpec, modulus: u64) -> Self {
        DiffForm { coeffs: vec![RingElement::zero(spec, modulus); spec.rank()] }
    }

    pub fn coeffs(&self) -> &[RingElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RingElement::is_zero)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(DiffForm { coeffs })
    }

    pub fn scale_by(&self, a: &RingElement) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|c| a.mul(c)).collect::<Result<_>>()?;
        Ok(DiffForm { coeffs })
    }

    /// `(generator name, element text)` pairs.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        self.coeffs.iter().enumerate().map(|(i, c)| (format!("dg{}", i + 1), c.to_text())).collect()
    }

    /// Concatenated coefficient vectors, matching the flattened free module `A^r`.
    pub fn to_flat(&self) -> Vec<u64> {
        self.coeffs.iter().flat_map(RingElement::coeffs_u64).collect()
    }
}

impl Serialize for DiffForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs = self.to_pairs();
        let mut seq = s.serialize_seq(Some(pairs.len()))?;
        for pair in &pairs {
            seq.serialize_element(pair)?;
        }
        seq.end()
    }
}

/// `d` on group-ring elements: the `dg_i` coefficient of `∏ g_j^{e_j}` is
/// `e_i · ∏ g_j^{e_j − δ_ij}`, with `g_i^{-1} = g_i^{p^{n_i} − 1}`.
pub fn d(a: &RingElement) -> DiffForm {
    let spec = a.spec();
    let m = a.modulus();
    let orders = spec.orders();
    let mut form = DiffForm::zero(spec, m);
    for (idx, c) in a.coeffs().iter().enumerate() {
        if c.is_zero_coeff() {
            continue;
        }
        let exps = spec.monomial(idx).exps;
        for i in 0..spec.rank() {
            if exps[i] == 0 {
                continue;
            }
            let mut lower = exps.clone();
            lower[i] = (exps[i] + orders[i] - 1) % orders[i];
            let mono = RingElement::monomial_at(spec, m, spec.index_of(&lower));
            let k = c * num_bigint::BigInt::from(exps[i]);
            form.coeffs[i] = form.coeffs[i].add(&mono.scale(&k)).expect("same ring");
        }
    }
    form
}

trait ZeroCoeff {
    fn is_zero_coeff(&self) -> bool;
}

impl ZeroCoeff for num_bigint::BigInt {
    fn is_zero_coeff(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
}

/// Outcome of checking `I/I² → T ⊗_S Ω_S → Ω_T → 0` by linear algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConormalReport {
    pub t_dim: usize,
    pub middle_dim: usize,
    pub omega_t_dim: usize,
    pub image_dim: usize,
    pub kernel_dim: usize,
    pub well_defined: bool,
    pub surjective: bool,
    pub exact_middle: bool,
}

impl ConormalReport {
    pub fn holds(&self) -> bool {
        self.well_defined && self.surjective && self.exact_middle
    }
}

/// Conormal sequence for `S = 𝔽_p[x_1..x_v]/(ambient relations)` and
/// `T = S/(ideal generators)`; all polynomials are univariate in the variable they
/// are attached to. `None` means the variable is free in `S`.
pub fn conormal_check(
    p: u64,
    names: &[&str],
    ambient: &[Option<Vec<i64>>],
    ideal: &[(usize, Vec<i64>)],
) -> Result<ConormalReport> {
    if !is_prime(p) {
        return Err(Error::InvalidSpec(format!("{p} is not prime")));
    }
    let v = names.len();
    if ambient.len() != v || ideal.iter().any(|(j, _)| *j >= v) {
        return Err(Error::Mismatch("variables and relations disagree".into()));
    }
    let red = |f: &[i64]| -> UniPoly { trim(f.iter().map(|&c| reduce_i64(c, p)).collect()) };
    let mut t_rel: Vec<Vec<i64>> = Vec::with_capacity(v);
    for j in 0..v {
        let mut g: Option<UniPoly> = ambient[j].as_ref().map(|f| red(f));
        for (_, f) in ideal.iter().filter(|(k, _)| *k == j) {
            g = Some(match g {
                Some(g) => poly_gcd(g, red(f), p),
                None => make_monic(red(f), p),
            });
        }
        match g {
            None => return Err(Error::Unsupported(format!("T is infinite in {}", names[j]))),
            Some(g) if g.is_empty() => {
                return Err(Error::Unsupported(format!("T is infinite in {}", names[j])))
            }
            Some(g) if g.len() == 1 => return Err(Error::Unsupported("T is the zero ring".into())),
            Some(g) => t_rel.push(g.into_iter().map(|c| c as i64).collect()),
        }
    }
    let t = PresentedAlgebra::new(p, names.iter().map(|s| s.to_string()).collect(), t_rel)?;
    let talg = t.algebra();
    let n = talg.dim();
    let dnames: Vec<String> = names.iter().map(|s| format!("d{s}")).collect();

    let jac_row = |j: usize, f: &[u64]| -> Vec<Elem> {
        (0..v)
            .map(|i| if i == j { t.eval_univariate(j, &derivative(f, p)) } else { talg.zero() })
            .collect()
    };
    let ambient_rows: Vec<Vec<Elem>> = ambient
        .iter()
        .enumerate()
        .filter_map(|(j, f)| f.as_ref().map(|f| jac_row(j, &red(f))))
        .collect();
    let middle = AlgebraModule::new(talg, dnames, ambient_rows.clone())?;
    let middle_keep = middle.basis_columns();
    let q1 = middle.scalar_dim();
    debug_assert_eq!(middle_keep.len(), q1);

    // image of d: T-span of the Jacobian rows of the ideal generators
    let mut image = EchelonBasis::new(p, q1, PivotOrder::First);
    for (j, f) in ideal {
        let row = jac_row(*j, &red(f));
        for b in 0..n {
            let basis = talg.basis_element(b);
            let flat: Vec<u64> = row.iter().flat_map(|e| talg.mul(&basis, e)).collect();
            image.insert(middle.coords(&flat));
        }
    }

    let universal = universal_omega(talg)?;
    let q2 = universal.scalar_dim();
    let gens: Vec<Elem> = (0..v)
        .map(|i| {
            let mut e = vec![0u64; v];
            e[i] = 1;
            t.monomial(&e)
        })
        .collect();
    // Dπ on a flattened vector of T^v
    let d_pi = |flat: &[u64]| -> Vec<u64> {
        let mut out = vec![0u64; n * n];
        for (i, chunk) in flat.chunks(n).enumerate() {
            for (k, &xk) in gens[i].iter().enumerate() {
                if xk == 0 {
                    continue;
                }
                for (slot, &c) in out[k * n..(k + 1) * n].iter_mut().zip(chunk) {
                    *slot = (*slot + xk * c) % p;
                }
            }
        }
        universal.coords(&out)
    };
    let well_defined = ambient_rows.iter().all(|row| {
        (0..n).all(|b| {
            let basis = talg.basis_element(b);
            let flat: Vec<u64> = row.iter().flat_map(|e| talg.mul(&basis, e)).collect();
            d_pi(&flat).iter().all(|&c| c == 0)
        })
    });
    let columns: Vec<Vec<u64>> = middle_keep.iter().map(|&c| d_pi(&unit(n * v, c))).collect();
    let matrix = MatrixModP::from_rows(
        p,
        q1,
        (0..q2).map(|r| columns.iter().map(|col| col[r] as i64).collect()).collect(),
    )?;
    let rank = matrix.rank();
    let kernel = matrix.kernel_basis();
    let kernel_in_image = kernel.iter().all(|k| image.contains(k));
    let image_in_kernel = image.rows().all(|r| matrix.mul_vec(r).iter().all(|&c| c == 0));
    Ok(ConormalReport {
        t_dim: n,
        middle_dim: q1,
        omega_t_dim: q2,
        image_dim: image.rank(),
        kernel_dim: kernel.len(),
        well_defined,
        surjective: rank == q2,
        exact_middle: kernel_in_image && image_in_kernel,
    })
}

fn unit(len: usize, at: usize) -> Vec<u64> {
    let mut v = vec![0u64; len];
    v[at] = 1;
    v
}
