//! Property tests for ring arithmetic, differentials, symbols and integer normal forms.

use std::sync::OnceLock;

use num_bigint::BigInt;
use proptest::prelude::*;

use relk2::algebra::FiniteAlgebra;
use relk2::dennis_stein::{build_presentation, Mode, SymbolExpr, SymbolPresentation, DEFAULT_BUDGET_PAIRS};
use relk2::k2::GroupRingTensor;
use relk2::kahler::d;
use relk2::linear::{hnf, snf};
use relk2::{GroupSpec, MatrixZ, RingElement};

const SPECS: &[(u64, &[u32])] = &[(2, &[1, 1]), (3, &[1]), (2, &[2]), (3, &[1, 1]), (5, &[1]), (2, &[1, 2])];

fn spec(k: usize) -> GroupSpec {
    let (p, e) = SPECS[k];
    GroupSpec::new(p, e.to_vec()).unwrap()
}

/// A spec index together with three random elements of its group ring over 𝔽_p.
fn ring_triple() -> impl Strategy<Value = (GroupSpec, [RingElement; 3])> {
    (0..SPECS.len()).prop_flat_map(|k| {
        let s = spec(k);
        let n = s.order();
        let p = s.p();
        proptest::collection::vec(proptest::collection::vec(0..p, n), 3).prop_map(move |v| {
            let e = |i: usize| RingElement::from_coeffs(&s, p, v[i].clone()).unwrap();
            (s.clone(), [e(0), e(1), e(2)])
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_ring_is_a_commutative_ring((_s, [a, b, c]) in ring_triple()) {
        prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.mul(&b.add(&c).unwrap()).unwrap(), a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap());
        prop_assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn augmentation_is_a_ring_map((s, [a, b, _c]) in ring_triple()) {
        let p = BigInt::from(s.p());
        let m = |x: BigInt| ((x % &p) + &p) % &p;
        prop_assert_eq!(m(a.mul(&b).unwrap().augmentation()), m(a.augmentation() * b.augmentation()));
        prop_assert_eq!(m(a.add(&b).unwrap().augmentation()), m(a.augmentation() + b.augmentation()));
        prop_assert_eq!(m(RingElement::one(&s, s.p()).augmentation()), BigInt::from(1));
    }

    #[test]
    fn gtilde_absorbs_the_augmentation_ideal((s, [a, _b, _c]) in ring_triple()) {
        // a·G~ = ε(a)·G~
        let gt = RingElement::gtilde(&s, s.p());
        prop_assert_eq!(a.mul(&gt).unwrap(), gt.scale(&a.augmentation()));
    }

    #[test]
    fn differential_satisfies_leibniz((_s, [a, b, c]) in ring_triple()) {
        let lhs = d(&a.mul(&b).unwrap());
        let rhs = d(&b).scale_by(&a).unwrap().add(&d(&a).scale_by(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs.to_flat(), rhs.to_flat());
        let sum = d(&a.add(&c).unwrap());
        prop_assert_eq!(sum.to_flat(), d(&a).add(&d(&c)).unwrap().to_flat());
    }

    #[test]
    fn differential_kills_p_th_powers((s, [a, _b, _c]) in ring_triple()) {
        prop_assert!(d(&a.pow(s.p())).is_zero());
    }
}

fn small_matrix() -> impl Strategy<Value = MatrixZ> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-20i64..=20, c), r)
            .prop_map(move |rows| MatrixZ::from_rows(c, &rows).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn smith_form_reconstructs(m in small_matrix()) {
        let s = snf(&m);
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d.clone());
        let unit = |x: BigInt| x == BigInt::from(1) || x == BigInt::from(-1);
        prop_assert!(unit(s.u.det().unwrap()));
        prop_assert!(unit(s.v.det().unwrap()));
    }

    #[test]
    fn hermite_form_ignores_row_order_and_repeats(m in small_matrix(), k in -5i64..=5) {
        let mut rows = m.row_vecs().to_vec();
        rows.reverse();
        let extra: Vec<BigInt> = rows[0].iter().zip(rows.last().unwrap()).map(|(a, b)| a * k + b).collect();
        rows.push(extra);
        let other = MatrixZ::from_rows(m.cols(), &rows).unwrap();
        prop_assert_eq!(hnf(&m), hnf(&other));
    }

    #[test]
    fn hermite_form_is_idempotent(m in small_matrix()) {
        let h = hnf(&m);
        prop_assert_eq!(hnf(&h), h);
    }
}

struct Fixture {
    alg: FiniteAlgebra,
    members: Vec<Vec<u64>>,
    pres: SymbolPresentation,
}

/// Full symbol presentation of `(𝔽_2[C_2×C_2], (G̃))`, built once.
fn klein() -> &'static Fixture {
    static CELL: OnceLock<Fixture> = OnceLock::new();
    CELL.get_or_init(|| {
        let model = GroupRingTensor::new(&GroupSpec::new(2, vec![1, 1]).unwrap()).unwrap();
        let pres = build_presentation(&model.ctx, Mode::Full, DEFAULT_BUDGET_PAIRS).unwrap();
        Fixture { alg: model.algebra().clone(), members: model.ctx.ideal().elements().unwrap(), pres }
    })
}

fn symbol_inputs() -> impl Strategy<Value = (Vec<u64>, Vec<u64>, Vec<u64>, usize)> {
    let f = klein();
    let size = f.alg.size().unwrap();
    let count = f.members.len();
    (0..size, 0..size, 0..size, 0..count).prop_map(move |(a, b, c, i)| {
        let alg = &klein().alg;
        (alg.element_at(a), alg.element_at(b), alg.element_at(c), i)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symbols_have_exponent_two((a, _b, _c, i) in symbol_inputs()) {
        let f = klein();
        let x = f.members[i].clone();
        let s = SymbolExpr::symbol(a.clone(), x.clone()).times(&SymbolExpr::symbol(a, x));
        prop_assert!(f.pres.is_identity(&s).unwrap());
    }

    #[test]
    fn symbols_are_additive_in_the_ideal_slot((a, _b, _c, i) in symbol_inputs(), j in 0usize..4) {
        // <a,x><a,y> = <a, x + y + axy>
        let f = klein();
        let (x, y) = (f.members[i].clone(), f.members[j % f.members.len()].clone());
        let alg = &f.alg;
        let merged = alg.add(&alg.add(&x, &y), &alg.product(&[a.clone(), x.clone(), y.clone()]));
        let lhs = SymbolExpr::symbol(a.clone(), x).times(&SymbolExpr::symbol(a.clone(), y));
        let rhs = SymbolExpr::symbol(a, merged);
        prop_assert!(f.pres.is_identity(&lhs.times(&rhs.inverse())).unwrap());
    }

    #[test]
    fn symbols_satisfy_the_product_rule((_a, b, c, i) in symbol_inputs()) {
        // <x, bc> = <xb, c><xc, b> for x in the ideal
        let f = klein();
        let alg = &f.alg;
        let x = f.members[i].clone();
        let lhs = SymbolExpr::symbol(x.clone(), alg.mul(&b, &c));
        let rhs = SymbolExpr::symbol(alg.mul(&x, &b), c.clone()).times(&SymbolExpr::symbol(alg.mul(&x, &c), b));
        prop_assert!(f.pres.is_identity(&lhs.times(&rhs.inverse())).unwrap());
    }
}
