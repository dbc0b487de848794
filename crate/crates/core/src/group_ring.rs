//! Group rings `ℤ/m[G]` of finite abelian p-groups over the monomial basis.
//!
//! `G = C_{p^{n_1}} × … × C_{p^{n_r}}` with generators `g_1, …, g_r`. Elements
//! are dense coefficient vectors indexed by monomials `g_1^{e_1}⋯g_r^{e_r}` in
//! lexicographic order of the exponent tuple, so index `0` is the identity.
//! Modulus `0` means integer coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest group order accepted; dense convolution is quadratic in `|G|`.
pub const MAX_GROUP_ORDER: u64 = 4096;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    p: u64,
    exponents: Vec<u32>,
}

impl GroupSpec {
    pub fn new(p: u64, exponents: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidSpec(format!("{p} is not prime")));
        }
        if exponents.is_empty() {
            return Err(Error::InvalidSpec("rank must be at least 1".into()));
        }
        if exponents.iter().any(|&n| n == 0) {
            return Err(Error::InvalidSpec("cyclic factor exponents must be positive".into()));
        }
        let total: u32 = exponents.iter().sum();
        let order = p.checked_pow(total).filter(|&o| o <= MAX_GROUP_ORDER);
        if order.is_none() {
            return Err(Error::InvalidSpec(format!(
                "|G| = {p}^{total} exceeds the supported order {MAX_GROUP_ORDER}"
            )));
        }
        Ok(GroupSpec { p, exponents })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    /// Order `p^{n_i}` of each generator.
    pub fn orders(&self) -> Vec<u64> {
        self.exponents.iter().map(|&n| self.p.pow(n)).collect()
    }

    pub fn order(&self) -> usize {
        self.orders().iter().product::<u64>() as usize
    }

    pub fn is_elementary(&self) -> bool {
        self.exponents.iter().all(|&n| n == 1)
    }

    pub fn index_of(&self, exps: &[u64]) -> usize {
        let orders = self.orders();
        exps.iter()
            .zip(&orders)
            .fold(0usize, |acc, (&e, &o)| acc * o as usize + (e % o) as usize)
    }

    pub fn monomial(&self, index: usize) -> Monomial {
        let orders = self.orders();
        let mut exps = vec![0u64; orders.len()];
        let mut rest = index;
        for (slot, &o) in exps.iter_mut().zip(&orders).rev() {
            *slot = (rest % o as usize) as u64;
            rest /= o as usize;
        }
        Monomial { exps }
    }

    /// Index of the product of the monomials at indices `a` and `b`.
    pub fn mul_index(&self, a: usize, b: usize) -> usize {
        let (ma, mb) = (self.monomial(a), self.monomial(b));
        let sum: Vec<u64> = ma.exps.iter().zip(&mb.exps).map(|(x, y)| x + y).collect();
        self.index_of(&sum)
    }

    /// All monomial products as an `|G| × |G|` index table.
    pub fn product_table(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mons: Vec<Monomial> = (0..n).map(|i| self.monomial(i)).collect();
        mons.iter()
            .map(|a| {
                mons.iter()
                    .map(|b| {
                        let sum: Vec<u64> = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
                        self.index_of(&sum)
                    })
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders().iter().map(|o| format!("C{o}")).collect();
        write!(f, "{}", parts.join("×"))
    }
}

/// Exponent tuple of a group element; ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub exps: Vec<u64>,
}

impl Monomial {
    fn write_factors(&self, out: &mut Vec<String>) {
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => out.push(format!("g{}", i + 1)),
                _ => out.push(format!("g{}^{}", i + 1, e)),
            }
        }
    }
}

fn reduce(c: BigInt, modulus: u64) -> BigInt {
    if modulus == 0 {
        c
    } else {
        c.mod_floor(&BigInt::from(modulus))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElement {
    spec: GroupSpec,
    modulus: u64,
    coeffs: Vec<BigInt>,
}

impl RingElement {
    pub fn zero(spec: &GroupSpec, modulus: u64) -> Self {
        RingElement { spec: spec.clone(), modulus, coeffs: vec![BigInt::zero(); spec.order()] }
    }

    pub fn one(spec: &GroupSpec, modulus: u64) -> Self {
        Self::monomial_at(spec, modulus, 0)
    }

    pub fn monomial_at(spec: &GroupSpec, modulus: u64, index: usize) -> Self {
        let mut e = Self::zero(spec, modulus);
        e.coeffs[index] = reduce(BigInt::one(), modulus);
        e
    }

    /// Builds an element from raw coefficients; negatives are normalized into `[0, m)`.
    pub fn from_coeffs<T: Into<BigInt>>(spec: &GroupSpec, modulus: u64, coeffs: Vec<T>) -> Result<Self> {
        if coeffs.len() != spec.order() {
            return Err(Error::Mismatch(format!(
                "expected {} coefficients, got {}",
                spec.order(),
                coeffs.len()
            )));
        }
        let coeffs = coeffs.into_iter().map(|c| reduce(c.into(), modulus)).collect();
        Ok(RingElement { spec: spec.clone(), modulus, coeffs })
    }

    /// `g_i`, 1-based.
    pub fn generator(spec: &GroupSpec, modulus: u64, i: usize) -> Result<Self> {
        if i == 0 || i > spec.rank() {
            return Err(Error::IndexOutOfRange { index: i, max: spec.rank() });
        }
        let mut exps = vec![0u64; spec.rank()];
        exps[i - 1] = 1;
        Ok(Self::monomial_at(spec, modulus, spec.index_of(&exps)))
    }

    /// `G̃`, the sum of all group elements.
    pub fn gtilde(spec: &GroupSpec, modulus: u64) -> Self {
        let coeffs = vec![reduce(BigInt::one(), modulus); spec.order()];
        RingElement { spec: spec.clone(), modulus, coeffs }
    }

    /// `x_i = g_i − 1`, 1-based.
    pub fn x_element(spec: &GroupSpec, modulus: u64, i: usize) -> Result<Self> {
        let g = Self::generator(spec, modulus, i)?;
        g.sub(&Self::one(spec, modulus))
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficients as `u64`, only meaningful for a positive modulus.
    pub fn coeffs_u64(&self) -> Vec<u64> {
        self.coeffs.iter().map(|c| c.to_u64().unwrap_or(0)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::Mismatch(format!("group {} vs {}", self.spec, other.spec)));
        }
        if self.modulus != other.modulus {
            return Err(Error::Mismatch(format!("modulus {} vs {}", self.modulus, other.modulus)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| reduce(a + b, self.modulus))
            .collect();
        Ok(RingElement { spec: self.spec.clone(), modulus: self.modulus, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| reduce(-c, self.modulus)).collect();
        RingElement { spec: self.spec.clone(), modulus: self.modulus, coeffs }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let coeffs = self.coeffs.iter().map(|c| reduce(c * k, self.modulus)).collect();
        RingElement { spec: self.spec.clone(), modulus: self.modulus, coeffs }
    }

    /// Group-ring convolution; exponents wrap modulo `p^{n_i}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.coeffs.len();
        let orders = self.spec.orders();
        let mons: Vec<Monomial> = (0..n).map(|i| self.spec.monomial(i)).collect();
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = mons[i]
                    .exps
                    .iter()
                    .zip(&mons[j].exps)
                    .zip(&orders)
                    .fold(0usize, |acc, ((x, y), o)| acc * *o as usize + ((x + y) % o) as usize);
                out[k] += a * b;
            }
        }
        let coeffs = out.into_iter().map(|c| reduce(c, self.modulus)).collect();
        Ok(RingElement { spec: self.spec.clone(), modulus: self.modulus, coeffs })
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.spec, self.modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    /// Sum of coefficients, reduced mod `m`.
    pub fn augmentation(&self) -> BigInt {
        let s: BigInt = self.coeffs.iter().sum();
        reduce(s, self.modulus)
    }

    /// Reinterprets the coefficients modulo a different modulus.
    pub fn reduce_mod(&self, modulus: u64) -> Self {
        let coeffs = self.coeffs.iter().map(|c| reduce(c.clone(), modulus)).collect();
        RingElement { spec: self.spec.clone(), modulus, coeffs }
    }

    /// Canonical text: `c*g1^e1*…*gr^er` terms in monomial order joined by ` + `.
    pub fn to_text(&self) -> String {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut factors = Vec::new();
            self.spec.monomial(i).write_factors(&mut factors);
            let mag = c.abs();
            let body = if factors.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                factors.join("*")
            } else {
                format!("{}*{}", mag, factors.join("*"))
            };
            if c.is_negative() {
                terms.push(format!("-{body}"));
            } else {
                terms.push(body);
            }
        }
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    /// Parses the canonical text form. Besides `gI^E` factors, `xI^E` stands for
    /// `(g_I − 1)^E` and `G~` for `G̃`.
    pub fn parse(spec: &GroupSpec, modulus: u64, text: &str) -> Result<Self> {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty element".into()));
        }
        let mut total = Self::zero(spec, modulus);
        let mut term = String::new();
        let mut negative = false;
        let mut prev: Option<char> = None;
        let mut flush = |term: &mut String, negative: bool| -> Result<()> {
            if term.is_empty() {
                return Ok(());
            }
            let mut value = parse_term(spec, modulus, term)?;
            if negative {
                value = value.neg();
            }
            total = total.add(&value)?;
            term.clear();
            Ok(())
        };
        for ch in compact.chars() {
            // a sign directly after `^` or `*` belongs to the factor
            let binary = matches!(ch, '+' | '-') && !matches!(prev, Some('^') | Some('*'));
            if binary {
                flush(&mut term, negative)?;
                negative = ch == '-';
            } else {
                term.push(ch);
            }
            prev = Some(ch);
        }
        flush(&mut term, negative)?;
        Ok(total)
    }
}

fn parse_term(spec: &GroupSpec, modulus: u64, term: &str) -> Result<RingElement> {
    let mut acc = RingElement::one(spec, modulus);
    for factor in term.split('*') {
        let value = parse_factor(spec, modulus, factor)?;
        acc = acc.mul(&value)?;
    }
    Ok(acc)
}

fn parse_factor(spec: &GroupSpec, modulus: u64, factor: &str) -> Result<RingElement> {
    let bad = || Error::Parse(format!("bad factor `{factor}`"));
    if factor == "G~" {
        return Ok(RingElement::gtilde(spec, modulus));
    }
    if let Ok(k) = factor.parse::<BigInt>() {
        return Ok(RingElement::one(spec, modulus).scale(&k));
    }
    let (base, exp) = match factor.split_once('^') {
        Some((b, e)) => (b, e.parse::<u64>().map_err(|_| bad())?),
        None => (factor, 1),
    };
    let kind = base.chars().next().ok_or_else(bad)?;
    let idx: usize = base[1..].parse().map_err(|_| bad())?;
    let elem = match kind {
        'g' => RingElement::generator(spec, modulus, idx)?,
        'x' => RingElement::x_element(spec, modulus, idx)?,
        _ => return Err(bad()),
    };
    Ok(elem.pow(exp))
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Whether `G̃ = ∏_j (g_j − 1)^{p^{n_j} − 1}` holds exactly in `𝔽_p[G]`.
/// Every spec with prime `p` from `primes`, rank at most `max_rank` and
/// `|G| ≤ max_order`, exponent tuples in lexicographic order.
pub fn sweep_specs(primes: &[u64], max_rank: usize, max_order: u64) -> Vec<GroupSpec> {
    let mut out = Vec::new();
    for &p in primes {
        let mut stack: Vec<Vec<u32>> = vec![vec![]];
        let mut found = Vec::new();
        while let Some(e) = stack.pop() {
            let order = p.checked_pow(e.iter().sum());
            if !e.is_empty() {
                found.push(e.clone());
            }
            if e.len() == max_rank {
                continue;
            }
            for n in 1u32.. {
                match order.and_then(|o| o.checked_mul(p.checked_pow(n)?)) {
                    Some(o) if o <= max_order => {
                        let mut next = e.clone();
                        next.push(n);
                        stack.push(next);
                    }
                    _ => break,
                }
            }
        }
        found.sort();
        out.extend(found.into_iter().filter_map(|e| GroupSpec::new(p, e).ok()));
    }
    out
}

pub fn gtilde_factorization_check(spec: &GroupSpec) -> bool {
    let p = spec.p();
    let mut product = RingElement::one(spec, p);
    for (j, order) in spec.orders().into_iter().enumerate() {
        let x = RingElement::x_element(spec, p, j + 1).expect("index in range");
        product = product.mul(&x.pow(order - 1)).expect("same ring");
    }
    product == RingElement::gtilde(spec, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p: u64, e: &[u32]) -> GroupSpec {
        GroupSpec::new(p, e.to_vec()).unwrap()
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(GroupSpec::new(4, vec![1]).is_err());
        assert!(GroupSpec::new(2, vec![]).is_err());
        assert!(GroupSpec::new(2, vec![1, 0]).is_err());
        assert!(GroupSpec::new(2, vec![13]).is_err());
    }

    #[test]
    fn one_plus_g_squared_vanishes_mod_two() {
        let s = spec(2, &[1]);
        let a = RingElement::one(&s, 2).add(&RingElement::generator(&s, 2, 1).unwrap()).unwrap();
        assert!(a.mul(&a).unwrap().is_zero());
    }

    #[test]
    fn x_times_gtilde_is_zero() {
        let s = spec(2, &[1, 1]);
        let x1 = RingElement::x_element(&s, 2, 1).unwrap();
        assert!(x1.mul(&RingElement::gtilde(&s, 2)).unwrap().is_zero());
    }

    #[test]
    fn gtilde_texts() {
        assert_eq!(RingElement::gtilde(&spec(2, &[1]), 2).to_text(), "1 + g1");
        assert_eq!(RingElement::gtilde(&spec(2, &[1, 1]), 2).to_text(), "1 + g2 + g1 + g1*g2");
        assert_eq!(RingElement::gtilde(&spec(3, &[1]), 3).to_text(), "1 + g1 + g1^2");
    }

    #[test]
    fn x_element_reduction() {
        let s = spec(2, &[1, 1]);
        assert_eq!(RingElement::x_element(&s, 2, 1).unwrap().to_text(), "1 + g1");
        let s3 = spec(3, &[1]);
        assert_eq!(RingElement::x_element(&s3, 3, 1).unwrap().to_text(), "2 + g1");
        let s4 = spec(2, &[2]);
        assert_eq!(RingElement::x_element(&s4, 0, 1).unwrap().to_text(), "-1 + g1");
        assert_eq!(
            RingElement::x_element(&s, 2, 3),
            Err(Error::IndexOutOfRange { index: 3, max: 2 })
        );
    }

    #[test]
    fn augmentation_values() {
        let s = spec(3, &[1, 1]);
        assert!(RingElement::gtilde(&s, 3).augmentation().is_zero());
        assert!(RingElement::x_element(&s, 3, 2).unwrap().augmentation().is_zero());
        assert!(RingElement::one(&s, 3).augmentation().is_one());
    }

    #[test]
    fn mismatched_operands_are_errors() {
        let s = spec(2, &[1]);
        let a = RingElement::one(&s, 2);
        let b = RingElement::one(&s, 0);
        assert!(matches!(a.mul(&b), Err(Error::Mismatch(_))));
        let c = RingElement::one(&spec(2, &[1, 1]), 2);
        assert!(matches!(a.add(&c), Err(Error::Mismatch(_))));
    }

    #[test]
    fn factorization_small_cases() {
        assert!(gtilde_factorization_check(&spec(2, &[1, 1])));
        assert!(gtilde_factorization_check(&spec(2, &[1])));
        assert!(gtilde_factorization_check(&spec(3, &[1])));
        // (g − 1)² = g² − 2g + 1 ≡ g² + g + 1 mod 3
        let s = spec(3, &[1]);
        let x = RingElement::x_element(&s, 3, 1).unwrap();
        assert_eq!(x.pow(2).coeffs_u64(), vec![1, 1, 1]);
    }

    #[test]
    fn parse_round_trip_and_aliases() {
        let s = spec(3, &[1, 1]);
        let e = RingElement::parse(&s, 3, "2 + g1*g2^2 - g2").unwrap();
        assert_eq!(RingElement::parse(&s, 3, &e.to_text()).unwrap(), e);
        let gt = RingElement::parse(&s, 3, "x1^2*x2^2").unwrap();
        assert_eq!(gt, RingElement::gtilde(&s, 3));
        assert_eq!(RingElement::parse(&s, 3, "G~").unwrap(), gt);
        assert!(RingElement::parse(&s, 3, "h1").is_err());
        assert!(RingElement::parse(&s, 3, "g3").is_err());
    }

    #[test]
    fn negative_inputs_normalize() {
        let s = spec(5, &[1]);
        let e = RingElement::from_coeffs(&s, 5, vec![-1, -6, 7, 0, 0]).unwrap();
        assert_eq!(e.coeffs_u64(), vec![4, 4, 2, 0, 0]);
    }

    #[test]
    fn sweep_enumeration() {
        let specs = sweep_specs(&[5], 3, 125);
        let shapes: Vec<Vec<u32>> = specs.iter().map(|s| s.exponents().to_vec()).collect();
        assert_eq!(shapes, vec![vec![1], vec![1, 1], vec![1, 1, 1], vec![1, 2], vec![2], vec![2, 1], vec![3]]);
        assert!(sweep_specs(&[2, 3], 3, 125).iter().all(|s| s.rank() <= 3 && s.order() <= 125));
        assert_eq!(sweep_specs(&[2], 1, 125).len(), 6);
    }
}
