//! Verification suites run by `relk2 verify`.

use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use relk2::algebra::{AlgebraIdeal, FiniteAlgebra};
use relk2::dennis_stein::{build_presentation, psi_triviality_check, scholium_expand, Mode, SquareZeroContext};
use relk2::group_ring::{gtilde_factorization_check, sweep_specs};
use relk2::k2::{excision_check, k2_relative_structure, GroupRingTensor, OracleOptions, Route, TensorIsoInput};
use relk2::kahler::{omega, omega_group_ring, PresentedAlgebra};
use relk2::linear::{hnf, snf};
use relk2::{AbelianGroupStructure, GroupSpec, MatrixZ, Result, RingElement};

pub const SUITES: &[&str] = &["factorization", "omega", "tensor", "oracle", "scholium", "rho", "excision", "linear"];

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub primes: Vec<u64>,
    pub seed: u64,
    pub budget_pairs: u64,
    pub inject_fault: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
    pub ms: u64,
}

/// Tally of checks and the descriptions of the failing ones.
#[derive(Default)]
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checks += other.checks;
        self.failures.extend(other.failures);
        self
    }
}

pub fn run(name: &str, cfg: &VerifyConfig) -> SuiteResult {
    let start = Instant::now();
    // a fault shifts every expected rank by one, so a working suite must report failure
    let fault = usize::from(cfg.inject_fault.as_deref() == Some(name));
    let outcome = match name {
        "factorization" => factorization(cfg, fault),
        "omega" => omega_sweep(cfg, fault),
        "tensor" => tensor_sweep(cfg, fault),
        "oracle" => oracle_set(cfg, fault),
        "scholium" => scholium_psi(cfg, fault),
        "rho" => rho_set(cfg, fault),
        "excision" => excision_set(cfg, fault),
        "linear" => linear_kernels(cfg, fault),
        other => Ok(Tally { checks: 1, failures: vec![format!("unknown suite {other}")] }),
    };
    let tally = outcome.unwrap_or_else(|e| Tally { checks: 1, failures: vec![format!("error: {e}")] });
    SuiteResult {
        name: name.to_string(),
        passed: tally.failures.is_empty(),
        checks: tally.checks,
        failures: tally.failures,
        ms: start.elapsed().as_millis() as u64,
    }
}

fn sweep(cfg: &VerifyConfig) -> Vec<GroupSpec> {
    sweep_specs(&cfg.primes, 3, 125)
}

fn factorization(cfg: &VerifyConfig, fault: usize) -> Result<Tally> {
    Ok(sweep(cfg)
        .par_iter()
        .map(|s| {
            let mut t = Tally::default();
            let ok = gtilde_factorization_check(s);
            t.check(ok != (fault == 1), || format!("G~ factorization fails for {s}"));
            t
        })
        .reduce(Tally::default, Tally::merge))
}

fn omega_sweep(cfg: &VerifyConfig, fault: usize) -> Result<Tally> {
    let mut tally = sweep(cfg)
        .par_iter()
        .map(|s| -> Result<Tally> {
            let mut t = Tally::default();
            let om = omega_group_ring(s)?;
            let rank = om.free_rank();
            t.check(om.jacobian_is_zero() && rank == Some(s.rank() + fault), || {
                format!("Ω of F{}[{s}] has free rank {rank:?}", s.p())
            });
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(Tally::default(), Tally::merge);
    let contrast = PresentedAlgebra::new(2, vec!["x".into()], vec![vec![-1, 0, 0, 1]])?;
    let trivial = omega(&contrast)?.structure().is_trivial();
    tally.check(trivial, || "Ω of F2[x]/(x^3 - 1) is not trivial".into());
    Ok(tally)
}

fn tensor_sweep(cfg: &VerifyConfig, fault: usize) -> Result<Tally> {
    let opts = OracleOptions { mode: Mode::Full, budget_pairs: cfg.budget_pairs };
    let mut tally = sweep(cfg)
        .par_iter()
        .filter(|s| s.order() > 2)
        .map(|s| -> Result<Tally> {
            let mut t = Tally::default();
            let report = k2_relative_structure(s, Route::Tensor, opts)?;
            let expected = AbelianGroupStructure::elementary(s.p(), s.rank() + fault);
            t.check(report.structure() == expected, || {
                format!("tensor route for F{}[{s}] gives {}", s.p(), report.structure().to_text())
            });
            Ok(t)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(Tally::default(), Tally::merge);
    if cfg.primes.contains(&2) {
        let c2 = k2_relative_structure(&GroupSpec::new(2, vec![1])?, Route::Oracle, opts)?;
        tally.check(c2.structure().rank() == fault, || "oracle for C2 is not trivial".into());
    }
    Ok(tally)
}

fn gtilde_context(spec: &GroupSpec) -> Result<(FiniteAlgebra, SquareZeroContext)> {
    let alg = FiniteAlgebra::group_ring(spec, spec.p())?;
    let gt = alg.from_ring_element(&RingElement::gtilde(spec, spec.p()))?;
    let ctx = SquareZeroContext::new(AlgebraIdeal::closure(&alg, &[gt])?)?;
    Ok((alg, ctx))
}

fn oracle_set(cfg: &VerifyConfig, fault: usize) -> Result<Tally> {
    let mut t = Tally::default();
    let opts = OracleOptions { mode: Mode::Full, budget_pairs: cfg.budget_pairs };
    let both = k2_relative_structure(&GroupSpec::new(2, vec![1, 1])?, Route::Both, opts)?;
    t.check(both.agreement == Some(true) && both.structure().rank() == 2 + fault, || {
        format!("full oracle for C2×C2 gives {} (agreement {:?})", both.structure().to_text(), both.agreement)
    });
    for (p, e) in [(2, vec![1]), (2, vec![1, 1]), (3, vec![1])] {
        let spec = GroupSpec::new(p, e)?;
        let (_, ctx) = gtilde_context(&spec)?;
        let full = build_presentation(&ctx, Mode::Full, cfg.budget_pairs)?;
        let reduced = build_presentation(&ctx, Mode::Reduced, cfg.budget_pairs)?;
        t.check(full.structure() == reduced.structure() && fault == 0, || {
            format!("reduced mode disagrees with full mode for F{p}[{spec}]")
        });
    }
    Ok(t)
}

fn scholium_psi(cfg: &VerifyConfig, fault: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for (p, e) in [(2, vec![1]), (2, vec![1, 1]), (3, vec![1]), (2, vec![2])] {
        let spec = GroupSpec::new(p, e)?;
        let (alg, ctx) = gtilde_context(&spec)?;
        let pres = build_presentation(&ctx, Mode::Full, cfg.budget_pairs)?;
        let members = ctx.ideal().elements()?;
        let size = alg.size().expect("small algebra");
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ (p << 8) ^ spec.order() as u64);
        for _ in 0..100 {
            let len = rng.gen_range(1..=4);
            let mut alphas: Vec<Vec<u64>> = (0..len).map(|_| alg.element_at(rng.gen_range(0..size))).collect();
            let slot = rng.gen_range(0..len);
            alphas[slot] = members[rng.gen_range(0..members.len())].clone();
            let mut expr = scholium_expand(&alg, &alphas)?;
            if fault == 1 {
                let x1 = alg.from_ring_element(&RingElement::x_element(&spec, p, 1)?)?;
                let gt = alg.from_ring_element(&RingElement::gtilde(&spec, p))?;
                if spec.order() > 2 {
                    expr.push(x1, gt, 1);
                }
            }
            let ok = pres.is_identity(&expr)?;
            t.check(ok, || format!("scholium word {} is not trivial", expr.to_text(&alg)));
        }
    }
    for (e, mode) in [(vec![1, 1], Mode::Full), (vec![1, 2], Mode::Reduced)] {
        let input = TensorIsoInput::group_ring_gtilde(&GroupSpec::new(2, e.clone())?)?;
        let alg = input.presented.algebra();
        let ctx = SquareZeroContext::new(AlgebraIdeal::closure(alg, &input.j_gens)?)?;
        let mut factors = input.factors.clone();
        if fault == 1 {
            factors.truncate(1);
            factors.push(alg.one());
        }
        let ctx = ctx.with_factors(factors);
        let ok = match ctx {
            Ok(ctx) => psi_triviality_check(&build_presentation(&ctx, mode, cfg.budget_pairs)?)?,
            Err(_) => false,
        };
        t.check(ok, || format!("ψ is not trivial for F2[exponents {e:?}]"));
    }
    Ok(t)
}

fn rho_set(cfg: &VerifyConfig, fault: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for (p, e) in [(2, vec![1, 1]), (3, vec![1]), (2, vec![2]), (2, vec![1, 1, 1])] {
        let spec = GroupSpec::new(p, e)?;
        let model = GroupRingTensor::new(&spec)?;
        let pres = build_presentation(&model.ctx, Mode::Full, cfg.budget_pairs)?;
        let bad = model.rho().violations(&pres)?;
        t.check(bad == fault, || format!("{bad} relation rows of F{p}[{spec}] survive ρ"));
        t.check(model.rho_basis_bijective()?, || format!("ρ misses the tensor basis for F{p}[{spec}]"));
    }
    Ok(t)
}

fn excision_set(cfg: &VerifyConfig, fault: usize) -> Result<Tally> {
    let mut t = Tally::default();
    let opts = OracleOptions { mode: Mode::Full, budget_pairs: cfg.budget_pairs };
    for r in 1..=2usize {
        let report = excision_check(&GroupSpec::new(2, vec![1; r])?, opts)?;
        let expected = if r == 1 { 0 } else { r } + fault;
        t.check(report.holds() && report.integral.rank() == expected, || {
            format!(
                "excision at rank {r}: integral {}, modular {}",
                report.integral.to_text(),
                report.modular.to_text()
            )
        });
    }
    Ok(t)
}

fn random_matrix(rng: &mut ChaCha8Rng) -> MatrixZ {
    let (rows, cols) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
    let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-20..=20)).collect()).collect();
    MatrixZ::from_rows(cols, &data).expect("rectangular")
}

fn linear_kernels(cfg: &VerifyConfig, fault: usize) -> Result<Tally> {
    let mut t = Tally::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let one = BigInt::from(1);
    for k in 0..200 {
        let m = random_matrix(&mut rng);
        let s = snf(&m);
        let rebuilt = s.u.mul(&m)?.mul(&s.v)?;
        let unimodular = s.u.det()?.magnitude() == one.magnitude() && s.v.det()?.magnitude() == one.magnitude();
        t.check(rebuilt == s.d && unimodular && fault == 0, || format!("Smith form reconstruction fails for matrix {k}"));
        // a second generating set of the same lattice: add a row combination and shuffle
        let rows = m.row_vecs();
        let mut other: Vec<Vec<BigInt>> = rows.to_vec();
        let extra: Vec<BigInt> = rows[0].iter().zip(&rows[rows.len() - 1]).map(|(a, b)| a * 3 - b * 2).collect();
        other.push(extra);
        other.reverse();
        let other = MatrixZ::from_rows(m.cols(), &other)?;
        t.check(hnf(&m) == hnf(&other), || format!("Hermite forms differ for matrix {k}"));
    }
    Ok(t)
}
