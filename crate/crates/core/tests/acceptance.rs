//! Acceptance criteria. Each criterion prints one PASS or FAIL line with its
//! elapsed time, and fails if it errors, disagrees or exceeds its time limit.
//! Criteria run sequentially inside one test so the timings are not skewed
//! by other tests competing for cores.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use relk2::algebra::{AlgebraIdeal, FiniteAlgebra};
use relk2::dennis_stein::{build_presentation, psi_triviality_check, scholium_expand, Mode, SquareZeroContext, DEFAULT_BUDGET_PAIRS};
use relk2::group_ring::{gtilde_factorization_check, sweep_specs};
use relk2::k2::{excision_check, k2_relative_structure, GroupRingTensor, OracleOptions, Route, TensorIsoInput};
use relk2::kahler::{omega, omega_group_ring, PresentedAlgebra};
use relk2::linear::{hnf, snf};
use relk2::{AbelianGroupStructure, GroupSpec, MatrixZ, Result, RingElement};

const SEED: u64 = 0x5eed_2024;

fn full() -> OracleOptions {
    OracleOptions { mode: Mode::Full, budget_pairs: DEFAULT_BUDGET_PAIRS }
}

fn spec(p: u64, e: &[u32]) -> GroupSpec {
    GroupSpec::new(p, e.to_vec()).expect("valid spec")
}

fn sweep() -> Vec<GroupSpec> {
    sweep_specs(&[2, 3, 5], 3, 125)
}

fn gtilde_context(s: &GroupSpec) -> Result<(FiniteAlgebra, SquareZeroContext)> {
    let alg = FiniteAlgebra::group_ring(s, s.p())?;
    let gt = alg.from_ring_element(&RingElement::gtilde(s, s.p()))?;
    let ctx = SquareZeroContext::new(AlgebraIdeal::closure(&alg, &[gt])?)?;
    Ok((alg, ctx))
}

/// `∏ (g_j − 1)^{|g_j|−1}` by binomial expansion and convolution over the group table.
fn gtilde_by_expansion(s: &GroupSpec) -> Vec<u64> {
    let p = s.p();
    let table = s.product_table();
    let mut acc = vec![0u64; s.order()];
    acc[0] = 1;
    for (j, order) in s.orders().into_iter().enumerate() {
        let m = (order - 1) as usize;
        // row m of Pascal's triangle mod p
        let mut binom = vec![1u64];
        for _ in 0..m {
            let mut next = vec![1u64; binom.len() + 1];
            for k in 1..binom.len() {
                next[k] = (binom[k - 1] + binom[k]) % p;
            }
            binom = next;
        }
        let mut factor = vec![0u64; s.order()];
        for (k, c) in binom.iter().enumerate() {
            let mut exps = vec![0u64; s.rank()];
            exps[j] = k as u64;
            let sign_negative = (m - k) % 2 == 1;
            factor[s.index_of(&exps)] = if sign_negative { (p - c) % p } else { *c };
        }
        let mut next = vec![0u64; s.order()];
        for (a, &ca) in acc.iter().enumerate().filter(|(_, c)| **c != 0) {
            for (b, &cb) in factor.iter().enumerate().filter(|(_, c)| **c != 0) {
                let t = &mut next[table[a][b]];
                *t = (*t + ca * cb) % p;
            }
        }
        acc = next;
    }
    acc
}

fn criterion_factorization() -> Result<()> {
    for s in sweep() {
        let expanded = gtilde_by_expansion(&s);
        let built = RingElement::gtilde(&s, s.p()).coeffs_u64();
        // over 𝔽_p the product is the norm element Σ_g g
        let norm = vec![1u64; s.order()];
        assert!(gtilde_factorization_check(&s), "factorization check fails for {s}");
        assert_eq!(built, expanded, "G~ differs from the expanded product for {s}");
        assert_eq!(built, norm, "G~ is not the norm element for {s}");
    }
    Ok(())
}

fn criterion_omega() -> Result<()> {
    for s in sweep() {
        let om = omega_group_ring(&s)?;
        assert!(om.jacobian_is_zero(), "nonzero Jacobian for {s}");
        assert_eq!(om.free_rank(), Some(s.rank()), "Ω of F{}[{s}] is not free of rank r", s.p());
        // free of rank r over an algebra of dimension |G|
        assert_eq!(om.structure(), AbelianGroupStructure::elementary(s.p(), s.rank() * s.order()), "{s}");
    }
    let contrast = PresentedAlgebra::new(2, vec!["x".into()], vec![vec![-1, 0, 0, 1]])?;
    assert!(omega(&contrast)?.structure().is_trivial(), "Ω of F2[x]/(x^3 - 1) is not trivial");
    Ok(())
}

fn criterion_tensor() -> Result<()> {
    for s in sweep().into_iter().filter(|s| s.order() > 2) {
        let report = k2_relative_structure(&s, Route::Tensor, full())?;
        assert_eq!(report.structure(), AbelianGroupStructure::elementary(s.p(), s.rank()), "tensor route for F{}[{s}]", s.p());
        assert_eq!(report.basis.len(), s.rank());
    }
    assert!(k2_relative_structure(&spec(2, &[1]), Route::Tensor, full()).is_err());
    let c2 = k2_relative_structure(&spec(2, &[1]), Route::Oracle, full())?;
    assert!(c2.structure().is_trivial(), "oracle for C2 gives {}", c2.structure().to_text());
    Ok(())
}

fn criterion_oracle() -> Result<()> {
    let klein = spec(2, &[1, 1]);
    let (_, ctx) = gtilde_context(&klein)?;
    let d = build_presentation(&ctx, Mode::Full, DEFAULT_BUDGET_PAIRS)?;
    assert_eq!(d.structure(), &AbelianGroupStructure::elementary(2, 2));
    let tensor = k2_relative_structure(&klein, Route::Tensor, full())?;
    assert_eq!(&tensor.structure(), d.structure());
    let both = k2_relative_structure(&klein, Route::Both, full())?;
    assert_eq!(both.agreement, Some(true));
    for s in [spec(2, &[1]), spec(2, &[1, 1]), spec(3, &[1])] {
        let (_, ctx) = gtilde_context(&s)?;
        let f = build_presentation(&ctx, Mode::Full, DEFAULT_BUDGET_PAIRS)?;
        let r = build_presentation(&ctx, Mode::Reduced, DEFAULT_BUDGET_PAIRS)?;
        assert_eq!(f.structure(), r.structure(), "reduced and full disagree for F{}[{s}]", s.p());
    }
    Ok(())
}

fn criterion_scholium_psi() -> Result<()> {
    for s in [spec(2, &[1]), spec(2, &[1, 1]), spec(3, &[1]), spec(2, &[2])] {
        let (alg, ctx) = gtilde_context(&s)?;
        let pres = build_presentation(&ctx, Mode::Full, DEFAULT_BUDGET_PAIRS)?;
        let members = ctx.ideal().elements()?;
        let size = alg.size().expect("finite");
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ s.order() as u64 ^ (s.p() << 16));
        for _ in 0..100 {
            let len = rng.gen_range(1..=4);
            let mut alphas: Vec<Vec<u64>> = (0..len).map(|_| alg.element_at(rng.gen_range(0..size))).collect();
            let slot = rng.gen_range(0..len);
            alphas[slot] = members[rng.gen_range(0..members.len())].clone();
            let word = scholium_expand(&alg, &alphas)?;
            assert!(pres.is_identity(&word)?, "word {} is nontrivial in F{}[{s}]", word.to_text(&alg), s.p());
        }
    }
    for e in [&[1u32, 1][..], &[1, 2]] {
        let input = TensorIsoInput::group_ring_gtilde(&spec(2, e))?;
        let alg = input.presented.algebra();
        let ctx = SquareZeroContext::new(AlgebraIdeal::closure(alg, &input.j_gens)?)?.with_factors(input.factors.clone())?;
        let pres = build_presentation(&ctx, Mode::Full, DEFAULT_BUDGET_PAIRS)?;
        assert!(psi_triviality_check(&pres)?, "ψ is nontrivial for exponents {e:?}");
    }
    Ok(())
}

fn criterion_rho() -> Result<()> {
    for s in [spec(2, &[1, 1]), spec(3, &[1]), spec(2, &[2]), spec(2, &[1, 1, 1])] {
        let model = GroupRingTensor::new(&s)?;
        let pres = build_presentation(&model.ctx, Mode::Full, DEFAULT_BUDGET_PAIRS)?;
        assert_eq!(model.rho().violations(&pres)?, 0, "relations survive ρ for F{}[{s}]", s.p());
    }
    Ok(())
}

fn criterion_excision() -> Result<()> {
    for r in 1..=2usize {
        let s = GroupSpec::new(2, vec![1; r])?;
        let report = excision_check(&s, full())?;
        assert!(report.relations.all(), "lattice relations fail at rank {r}");
        assert!(report.structures_equal && report.natural_map_isomorphism, "excision fails at rank {r}");
        let expected = if r == 1 { AbelianGroupStructure::trivial() } else { AbelianGroupStructure::elementary(2, r) };
        assert_eq!(report.integral, expected);
        assert_eq!(report.modular, expected);
        if r > 1 {
            let tensor = k2_relative_structure(&s, Route::Tensor, full())?;
            assert_eq!(tensor.structure(), report.integral);
        }
    }
    Ok(())
}

fn random_matrix(rng: &mut ChaCha8Rng) -> MatrixZ {
    let (rows, cols) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
    let data: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-20..=20)).collect()).collect();
    MatrixZ::from_rows(cols, &data).expect("rectangular")
}

/// Same row lattice, different generators: elementary row operations plus redundant combinations.
fn regenerate(m: &MatrixZ, rng: &mut ChaCha8Rng) -> MatrixZ {
    let mut rows: Vec<Vec<BigInt>> = m.row_vecs().to_vec();
    let n = rows.len();
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i != j {
            let k = BigInt::from(rng.gen_range(-3..=3));
            let add: Vec<BigInt> = rows[j].iter().map(|x| x * &k).collect();
            rows[i].iter_mut().zip(add).for_each(|(a, b)| *a += b);
        } else {
            rows[i].iter_mut().for_each(|a| *a = -a.clone());
        }
    }
    for _ in 0..2 {
        let coeffs: Vec<BigInt> = (0..n).map(|_| BigInt::from(rng.gen_range(-2..=2))).collect();
        let combo: Vec<BigInt> = (0..m.cols()).map(|c| (0..n).map(|r| m.get(r, c) * &coeffs[r]).sum()).collect();
        rows.push(combo);
    }
    rows.reverse();
    MatrixZ::from_rows(m.cols(), &rows).expect("rectangular")
}

fn criterion_linear() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for k in 0..200 {
        let m = random_matrix(&mut rng);
        let s = snf(&m);
        assert_eq!(s.u.mul(&m)?.mul(&s.v)?, s.d, "U·M·V ≠ D for matrix {k}");
        assert_eq!(s.u.det()?.magnitude(), BigInt::from(1).magnitude(), "U not unimodular for matrix {k}");
        assert_eq!(s.v.det()?.magnitude(), BigInt::from(1).magnitude(), "V not unimodular for matrix {k}");
        let diag = s.diagonal();
        for i in 0..diag.len() {
            for j in 0..diag.len() {
                if i != j {
                    assert_eq!(*s.d.get(i, j), BigInt::from(0));
                }
            }
        }
        for w in diag.windows(2) {
            assert!(w[0] >= BigInt::from(0));
            if w[0] != BigInt::from(0) {
                assert_eq!(&w[1] % &w[0], BigInt::from(0), "divisibility fails for matrix {k}");
            }
        }
        assert_eq!(hnf(&m), hnf(&regenerate(&m, &mut rng)), "HNF depends on generators for matrix {k}");
    }
    Ok(())
}

type Criterion = (&'static str, Duration, fn() -> Result<()>);

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("1 G~ factorization over the sweep", Duration::from_secs(10), criterion_factorization),
        ("2 Ω sweep and contrast case", Duration::from_secs(5), criterion_omega),
        ("3 tensor route over the sweep", Duration::from_secs(30), criterion_tensor),
        ("4 oracle agreement", Duration::from_secs(60), criterion_oracle),
        ("5 scholium words and ψ", Duration::from_secs(30), criterion_scholium_psi),
        ("6 ρ well defined", Duration::from_secs(30), criterion_rho),
        ("7 excision", Duration::from_secs(120), criterion_excision),
        ("8 Smith and Hermite forms", Duration::from_secs(20), criterion_linear),
    ];
    let mut failed = Vec::new();
    for (name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run);
        let elapsed = start.elapsed();
        let verdict = match outcome {
            Ok(Ok(())) if elapsed <= limit => Ok(()),
            Ok(Ok(())) => Err(format!("took {elapsed:?}, limit {limit:?}")),
            Ok(Err(e)) => Err(format!("error: {e}")),
            Err(_) => Err("assertion failed".to_string()),
        };
        match &verdict {
            Ok(()) => println!("PASS criterion {name} ({} ms, limit {} s)", elapsed.as_millis(), limit.as_secs()),
            Err(why) => {
                println!("FAIL criterion {name} ({} ms, limit {} s): {why}", elapsed.as_millis(), limit.as_secs());
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
