//! Exact arithmetic in the cyclotomic field `ℚ(ξ)`, `ξ` a primitive `N`-th
//! root of unity.
//!
//! Elements are rational polynomials in `ξ` of degree below `φ(N)`, reduced
//! modulo the cyclotomic polynomial `Φ_N`, so equality is coefficientwise.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

type Poly = Vec<BigRational>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Poly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(&mut out);
    out
}

/// Quotient and remainder; `d` must be nonzero and trimmed.
fn poly_divrem(a: &[BigRational], d: &[BigRational]) -> (Poly, Poly) {
    let mut r: Poly = a.to_vec();
    trim(&mut r);
    if r.len() < d.len() {
        return (Vec::new(), r);
    }
    let lead = d.last().expect("nonzero divisor");
    let mut q = vec![BigRational::zero(); r.len() - d.len() + 1];
    while r.len() >= d.len() {
        let shift = r.len() - d.len();
        let c = r.last().expect("nonempty") / lead;
        for (i, y) in d.iter().enumerate() {
            r[shift + i] -= &c * y;
        }
        q[shift] = c;
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

/// Coefficients of `Φ_n`, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic polynomials are indexed from 1");
    let mut p: Poly = vec![BigRational::zero(); n as usize + 1];
    p[0] = -BigRational::one();
    p[n as usize] = BigRational::one();
    for d in (1..n).filter(|d| n % d == 0) {
        let phi_d: Poly = cyclotomic_polynomial(d).into_iter().map(BigRational::from_integer).collect();
        let (q, r) = poly_divrem(&p, &phi_d);
        debug_assert!(r.is_empty());
        p = q;
    }
    p.into_iter().map(|c| c.to_integer()).collect()
}

/// Euler's totient, the degree of `Φ_n`.
pub fn totient(n: u32) -> usize {
    (1..=n).filter(|&a| gcd(a, n) == 1).count()
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloNumber {
    order: u32,
    /// Exactly `φ(order)` coefficients, lowest degree first.
    coeffs: Vec<BigRational>,
}

impl CycloNumber {
    fn modulus(order: u32) -> Arc<Poly> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Poly>>>> = OnceLock::new();
        let mut cache = CACHE.get_or_init(Default::default).lock().expect("cache poisoned");
        Arc::clone(cache.entry(order).or_insert_with(|| {
            Arc::new(cyclotomic_polynomial(order).into_iter().map(BigRational::from_integer).collect())
        }))
    }

    fn from_poly(order: u32, p: &[BigRational]) -> Self {
        let m = Self::modulus(order);
        let (_, mut r) = poly_divrem(p, &m);
        r.resize(m.len() - 1, BigRational::zero());
        Self { order, coeffs: r }
    }

    pub fn zero(order: u32) -> Self {
        Self::from_integer(order, 0)
    }

    pub fn one(order: u32) -> Self {
        Self::from_integer(order, 1)
    }

    pub fn from_integer(order: u32, v: i64) -> Self {
        Self::from_rational(order, BigRational::from_integer(v.into()))
    }

    pub fn from_rational(order: u32, v: BigRational) -> Self {
        Self::from_poly(order, &[v])
    }

    /// `ξ^e`, any integer exponent.
    pub fn xi_pow(order: u32, e: i64) -> Self {
        let e = e.rem_euclid(order as i64) as usize;
        let mut p = vec![BigRational::zero(); e + 1];
        p[e] = BigRational::one();
        Self::from_poly(order, &p)
    }

    pub fn xi(order: u32) -> Self {
        Self::xi_pow(order, 1)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn poly(&self) -> Poly {
        let mut p = self.coeffs.clone();
        trim(&mut p);
        p
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.order, other.order, "mixing elements of different cyclotomic fields");
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// `Φ_N`; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // invariant: s_i · self ≡ r_i (mod Φ)
        let (mut r0, mut r1) = (Self::modulus(self.order).to_vec(), self.poly());
        let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = poly_divrem(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
        }
        // Φ irreducible, so the last nonzero remainder is a constant
        assert_eq!(r0.len(), 1, "cyclotomic modulus must be irreducible");
        let c = r0[0].clone();
        let scaled: Poly = s0.into_iter().map(|x| x / &c).collect();
        Some(Self::from_poly(self.order, &scaled))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl Add for &CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: &CycloNumber) -> CycloNumber {
        self.check(rhs);
        CycloNumber {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: &CycloNumber) -> CycloNumber {
        self.check(rhs);
        CycloNumber {
            order: self.order,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: &CycloNumber) -> CycloNumber {
        self.check(rhs);
        CycloNumber::from_poly(self.order, &poly_mul(&self.poly(), &rhs.poly()))
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber {
            order: self.order,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "ξ".to_string(),
                _ => format!("ξ^{i}"),
            };
            let body = if mono.is_empty() {
                c.abs().to_string()
            } else if c.abs().is_one() {
                mono
            } else {
                format!("{}{}", c.abs(), mono)
            };
            terms.push((c.is_negative(), body));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (neg, body)) in terms.iter().enumerate() {
            match (idx, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn known_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn roots_are_primitive_roots_numerically() {
        // independent floating-point oracle: Φ_N(e^{2πi/N}) ≈ 0
        for n in 1..=12u32 {
            let (mut re, mut im) = (0.0f64, 0.0f64);
            let theta = 2.0 * std::f64::consts::PI / n as f64;
            for (i, c) in cyclotomic_polynomial(n).iter().enumerate() {
                let c: f64 = c.to_string().parse().unwrap();
                re += c * (theta * i as f64).cos();
                im += c * (theta * i as f64).sin();
            }
            assert!(re.abs() < 1e-9 && im.abs() < 1e-9, "Φ_{n}");
            assert_eq!(cyclotomic_polynomial(n).len() - 1, totient(n));
        }
    }

    #[test]
    fn xi_has_exact_order() {
        for k in 1..=3u32 {
            let n = 2 * k;
            let xi = CycloNumber::xi(n);
            assert_eq!(xi.pow(n), CycloNumber::one(n));
            for e in 1..n {
                assert_ne!(xi.pow(e), CycloNumber::one(n));
            }
            // ξ^k = -1
            assert_eq!(xi.pow(k), CycloNumber::from_integer(n, -1));
            // Φ_N(ξ) = 0
            let mut acc = CycloNumber::zero(n);
            for (i, c) in cyclotomic_polynomial(n).into_iter().enumerate() {
                let term = &CycloNumber::from_rational(n, BigRational::from_integer(c)) * &xi.pow(i as u32);
                acc = &acc + &term;
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn display() {
        assert_eq!(CycloNumber::xi_pow(6, 2).to_string(), "-1 + ξ");
        assert_eq!(CycloNumber::zero(4).to_string(), "0");
        assert_eq!(CycloNumber::xi_pow(4, 3).to_string(), "-ξ");
    }

    fn element(order: u32) -> impl Strategy<Value = CycloNumber> {
        let deg = totient(order);
        prop::collection::vec((-6i64..=6, 1i64..=4), deg).prop_map(move |cs| {
            let p: Vec<BigRational> = cs
                .into_iter()
                .map(|(a, b)| BigRational::new(a.into(), b.into()))
                .collect();
            CycloNumber::from_poly(order, &p)
        })
    }

    fn triple() -> impl Strategy<Value = (CycloNumber, CycloNumber, CycloNumber)> {
        prop::sample::select(vec![2u32, 4, 6, 8, 12])
            .prop_flat_map(|n| (element(n), element(n), element(n)))
    }

    proptest! {
        #[test]
        fn field_axioms((a, b, c) in triple()) {
            let n = a.order();
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(&a + &(-&a), CycloNumber::zero(n));
            match a.inv() {
                None => prop_assert!(a.is_zero()),
                Some(ai) => prop_assert_eq!(&a * &ai, CycloNumber::one(n)),
            }
        }
    }
}
