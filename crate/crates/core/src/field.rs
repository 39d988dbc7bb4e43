//! Exact coefficient fields: the rationals and word-sized prime fields.
//!
//! Elements are self-contained values. A [`Field`] descriptor produces
//! constants and random draws, and is what a polynomial ring carries as its
//! coefficient tag.

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Default modulus for counting runs.
pub const DEFAULT_PRIME: u32 = 2_147_483_629;

/// Range used when drawing generic integers over the rationals.
pub const RATIONAL_SAMPLE_BOUND: i64 = 10_000;

pub trait FieldElement: Clone + PartialEq + Eq + Hash + Debug + Display + Send + Sync + 'static {
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inv(&self) -> Option<Self>;

    fn div_ref(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul_ref(&i))
    }

    /// Whether the printed form needs a leading minus sign.
    fn is_negative_display(&self) -> bool {
        false
    }
}

/// Coefficient field descriptor.
pub trait Field: Clone + Debug + PartialEq + Eq + Send + Sync + 'static {
    type Elem: FieldElement;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, value: i64) -> Self::Elem;
    /// Image of a rational number; fails when the denominator vanishes.
    fn from_rational(&self, q: &Rational) -> Result<Self::Elem>;
    /// Draw a "generic" element: uniform mod p, or an integer in
    /// `[-RATIONAL_SAMPLE_BOUND, RATIONAL_SAMPLE_BOUND]` over the rationals.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    /// `Some(p)` for a prime field, `None` for the rationals.
    fn modulus(&self) -> Option<u32>;
    fn name(&self) -> String;
}

// ---------------------------------------------------------------------------
// Rationals

/// Arbitrary-precision rational in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Rational(v)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Syntax {
            pos: 0,
            message: format!("invalid rational literal `{s}`"),
        };
        let s = s.trim();
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Rational::new(n, d))
            }
            None => Ok(Rational::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Display::fmt(self, f)
    }
}

impl FieldElement for Rational {
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn is_one(&self) -> bool {
        self.0.is_one()
    }
    fn add_ref(&self, other: &Self) -> Self {
        Rational(&self.0 + &other.0)
    }
    fn sub_ref(&self, other: &Self) -> Self {
        Rational(&self.0 - &other.0)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        Rational(&self.0 * &other.0)
    }
    fn neg_ref(&self) -> Self {
        Rational(-&self.0)
    }
    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }
    fn is_negative_display(&self) -> bool {
        self.0.is_negative()
    }
}

macro_rules! forward_ops {
    ($t:ty) => {
        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                self.add_ref(&rhs)
            }
        }
        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                self.sub_ref(&rhs)
            }
        }
        impl Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                self.mul_ref(&rhs)
            }
        }
        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                self.neg_ref()
            }
        }
    };
}

forward_ops!(Rational);
forward_ops!(Fp);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = Rational;

    fn zero(&self) -> Rational {
        Rational::zero()
    }
    fn one(&self) -> Rational {
        Rational::one()
    }
    fn from_i64(&self, value: i64) -> Rational {
        Rational::from(value)
    }
    fn from_rational(&self, q: &Rational) -> Result<Rational> {
        Ok(q.clone())
    }
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Rational {
        Rational::from(rng.gen_range(-RATIONAL_SAMPLE_BOUND..=RATIONAL_SAMPLE_BOUND))
    }
    fn modulus(&self) -> Option<u32> {
        None
    }
    fn name(&self) -> String {
        "QQ".to_string()
    }
}

// ---------------------------------------------------------------------------
// Prime fields

/// Element of Z/pZ for an odd prime p < 2^32.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u32,
    modulus: u32,
}

impl Fp {
    pub fn new(value: u64, modulus: u32) -> Self {
        Fp {
            value: (value % modulus as u64) as u32,
            modulus,
        }
    }

    pub fn from_i64(value: i64, modulus: u32) -> Self {
        let m = modulus as i64;
        Fp {
            value: value.rem_euclid(m) as u32,
            modulus,
        }
    }

    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Reduce a rational number; fails when p divides the denominator.
    pub fn from_rational(q: &Rational, modulus: u32) -> Result<Self> {
        let p = BigInt::from(modulus);
        let d = q.denom().mod_floor(&p);
        if d.is_zero() {
            return Err(Error::BadReduction(q.to_string(), modulus));
        }
        let n = q.numer().mod_floor(&p);
        let n = Fp::new(n.to_u64().unwrap_or(0), modulus);
        let d = Fp::new(d.to_u64().unwrap_or(0), modulus);
        Ok(n.mul_ref(&d.inv().expect("nonzero denominator")))
    }

    fn check(&self, other: &Self) {
        debug_assert_eq!(self.modulus, other.modulus, "mixed moduli");
    }
}

impl Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}

impl FieldElement for Fp {
    #[inline]
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    #[inline]
    fn is_one(&self) -> bool {
        self.value == 1
    }
    #[inline]
    fn add_ref(&self, other: &Self) -> Self {
        self.check(other);
        let s = self.value as u64 + other.value as u64;
        let m = self.modulus as u64;
        Fp {
            value: if s >= m { (s - m) as u32 } else { s as u32 },
            modulus: self.modulus,
        }
    }
    #[inline]
    fn sub_ref(&self, other: &Self) -> Self {
        self.check(other);
        let value = if self.value >= other.value {
            self.value - other.value
        } else {
            ((self.value as u64 + self.modulus as u64) - other.value as u64) as u32
        };
        Fp {
            value,
            modulus: self.modulus,
        }
    }
    #[inline]
    fn mul_ref(&self, other: &Self) -> Self {
        self.check(other);
        Fp {
            value: ((self.value as u64 * other.value as u64) % self.modulus as u64) as u32,
            modulus: self.modulus,
        }
    }
    #[inline]
    fn neg_ref(&self) -> Self {
        Fp {
            value: if self.value == 0 { 0 } else { self.modulus - self.value },
            modulus: self.modulus,
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        // extended Euclid on (value, modulus)
        let (mut r0, mut r1) = (self.modulus as i64, self.value as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Some(Fp::from_i64(s0, self.modulus))
    }
}

/// Z/pZ descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::InvalidModulus(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

impl Field for PrimeField {
    type Elem = Fp;

    fn zero(&self) -> Fp {
        Fp::new(0, self.p)
    }
    fn one(&self) -> Fp {
        Fp::new(1, self.p)
    }
    fn from_i64(&self, value: i64) -> Fp {
        Fp::from_i64(value, self.p)
    }
    fn from_rational(&self, q: &Rational) -> Result<Fp> {
        Fp::from_rational(q, self.p)
    }
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Fp {
        Fp::new(rng.gen_range(0..self.p as u64), self.p)
    }
    fn modulus(&self) -> Option<u32> {
        Some(self.p)
    }
    fn name(&self) -> String {
        format!("GF({})", self.p)
    }
}

/// Deterministic trial division; adequate for word-sized moduli.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Largest odd prime strictly below `n`.
pub fn prev_prime(n: u64) -> Option<u64> {
    (3..n).rev().find(|&k| is_prime(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_lowest_terms() {
        let q = Rational::new(6, -4);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(q.to_string(), "-3/2");
        assert_eq!(Rational::new(0, 5), Rational::zero());
        assert_eq!(Rational::zero().denom(), &BigInt::from(1));
    }

    #[test]
    fn rational_parse() {
        assert_eq!("9/2".parse::<Rational>().unwrap(), Rational::new(9, 2));
        assert_eq!("-12".parse::<Rational>().unwrap(), Rational::from(-12));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        let a = f.from_i64(5);
        let b = f.from_i64(4);
        assert_eq!((a + b).value(), 2);
        assert_eq!((a - b).value(), 1);
        assert_eq!((b - a).value(), 6);
        assert_eq!((a * b).value(), 6);
        assert_eq!((-a).value(), 2);
        for v in 1..7 {
            let x = f.from_i64(v);
            assert!((x * x.inv().unwrap()).is_one());
        }
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn default_prime_is_prime() {
        assert!(is_prime(DEFAULT_PRIME as u64));
        assert_eq!(prev_prime(DEFAULT_PRIME as u64), Some(2_147_483_587));
        assert!(PrimeField::new(15).is_err());
        assert!(PrimeField::new(2).is_err());
        assert!(PrimeField::new(1 << 33).is_err());
    }

    #[test]
    fn rational_reduction() {
        let q = Rational::new(3, 5);
        let x = Fp::from_rational(&q, 7).unwrap();
        assert_eq!((x * Fp::new(5, 7)).value(), 3);
        assert!(Fp::from_rational(&Rational::new(1, 14), 7).is_err());
        let neg = Fp::from_rational(&Rational::from(-1), 7).unwrap();
        assert_eq!(neg.value(), 6);
    }
}
