//! Chow ring of P^3 blown up at `n` points, truncated total Chern classes.
//!
//! A class is `c_0 + sum_k h_k H^k + sum_i sum_k e_{i,k} E_i^k` for
//! `k = 1..3`, with `H E_i = 0`, `E_i E_j = 0` for `i != j`, and degree map
//! `H^3 -> 1`, `E_i^3 -> 1`. Coefficients are polynomials in the symbol `n`.
//! For a concrete `n` every exceptional divisor has its own slot; in
//! symbolic mode a single slot stands for every `E_i` at once and the degree
//! map multiplies it by `n`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::{Rational, RationalField};
use crate::monomial::MonomialOrder;
use crate::poly::{Polynomial, Ring};

pub type Scalar = Polynomial<RationalField>;

/// `QQ[n]`.
pub fn symbol_ring() -> Arc<Ring<RationalField>> {
    static RING: OnceLock<Arc<Ring<RationalField>>> = OnceLock::new();
    RING.get_or_init(|| Ring::new(&["n"], RationalField, MonomialOrder::DegRevLex))
        .clone()
}

pub fn scalar(v: i64) -> Scalar {
    Polynomial::from_i64(&symbol_ring(), v)
}

pub fn rational_scalar(q: Rational) -> Scalar {
    Polynomial::constant(&symbol_ring(), q)
}

pub fn symbol_n() -> Scalar {
    Polynomial::var_at(&symbol_ring(), 0)
}

/// Value of a constant scalar as an integer.
pub fn scalar_to_i64(s: &Scalar) -> Result<i64> {
    if !s.is_constant() {
        return Err(Error::NotInteger(s.to_string()));
    }
    s.constant_coeff().to_i64().ok_or_else(|| Error::NotInteger(s.to_string()))
}

/// Number of blown-up points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointCount {
    Concrete(u64),
    Symbolic,
}

impl PointCount {
    /// `n` as a scalar.
    pub fn value(&self) -> Scalar {
        match self {
            PointCount::Concrete(n) => scalar(*n as i64),
            PointCount::Symbolic => symbol_n(),
        }
    }

    /// `C(n, k)` as a scalar.
    pub fn binomial(&self, k: u64) -> Scalar {
        match self {
            PointCount::Concrete(n) => {
                let v = if k > *n {
                    0
                } else {
                    (0..k).fold(1u128, |acc, i| acc * (*n - i) as u128 / (i + 1) as u128)
                };
                scalar(v as i64)
            }
            PointCount::Symbolic => {
                let n = symbol_n();
                let mut acc = scalar(1);
                for i in 0..k {
                    acc = &acc * &(&n - &scalar(i as i64));
                }
                let fact: i64 = (1..=k as i64).product();
                acc.scale(&Rational::new(1, fact))
            }
        }
    }
}

impl fmt::Display for PointCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointCount::Concrete(n) => write!(f, "{n}"),
            PointCount::Symbolic => f.write_str("n"),
        }
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct ChowRing {
    points: PointCount,
    slots: usize,
    weight: Scalar,
}

impl ChowRing {
    pub fn new(points: PointCount) -> Arc<Self> {
        let (slots, weight) = match points {
            PointCount::Concrete(n) => (n as usize, scalar(1)),
            PointCount::Symbolic => (1, symbol_n()),
        };
        Arc::new(ChowRing { points, slots, weight })
    }

    pub fn points(&self) -> PointCount {
        self.points
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn is_symbolic(&self) -> bool {
        self.points == PointCount::Symbolic
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowClass {
    ring: Arc<ChowRing>,
    deg0: Scalar,
    h: [Scalar; 3],
    e: Vec<[Scalar; 3]>,
}

fn zeros3() -> [Scalar; 3] {
    [scalar(0), scalar(0), scalar(0)]
}

impl ChowClass {
    pub fn zero(ring: &Arc<ChowRing>) -> Self {
        ChowClass {
            ring: ring.clone(),
            deg0: scalar(0),
            h: zeros3(),
            e: vec![zeros3(); ring.slots],
        }
    }

    pub fn constant(ring: &Arc<ChowRing>, c: Scalar) -> Self {
        let mut out = Self::zero(ring);
        out.deg0 = c;
        out
    }

    pub fn one(ring: &Arc<ChowRing>) -> Self {
        Self::constant(ring, scalar(1))
    }

    /// Pullback of a general plane.
    pub fn hyperplane(ring: &Arc<ChowRing>) -> Self {
        let mut out = Self::zero(ring);
        out.h[0] = scalar(1);
        out
    }

    /// Exceptional divisor over the `i`-th point; concrete mode only.
    pub fn exceptional(ring: &Arc<ChowRing>, i: usize) -> Result<Self> {
        if ring.is_symbolic() || i >= ring.slots {
            return Err(Error::InvalidArgument(format!(
                "no individual exceptional divisor E_{} for {} points",
                i + 1,
                ring.points
            )));
        }
        let mut out = Self::zero(ring);
        out.e[i][0] = scalar(1);
        Ok(out)
    }

    /// Exceptional divisor of one slot, as seen by [`ChowClass::sum_over_points`].
    fn slot(ring: &Arc<ChowRing>, s: usize) -> Self {
        let mut out = Self::zero(ring);
        out.e[s][0] = scalar(1);
        out
    }

    /// `E_1 + ... + E_n`.
    pub fn exceptional_sum(ring: &Arc<ChowRing>) -> Self {
        Self::sum_over_points(ring, |e| e.clone())
    }

    /// `sum_i f(E_i)` for a polynomial expression `f`, which must treat every
    /// point the same way.
    pub fn sum_over_points(ring: &Arc<ChowRing>, f: impl Fn(&ChowClass) -> ChowClass) -> Self {
        let mut acc = Self::zero(ring);
        for s in 0..ring.slots {
            let mut term = f(&Self::slot(ring, s));
            if ring.is_symbolic() {
                // constant parts are not aggregated by the slot
                term.deg0 = &term.deg0 * &ring.weight;
            }
            acc = acc.add(&term);
        }
        acc
    }

    pub fn ring(&self) -> &Arc<ChowRing> {
        &self.ring
    }

    pub fn degree0(&self) -> &Scalar {
        &self.deg0
    }

    /// Coefficient of `H^k`, `k >= 1`.
    pub fn h_coeff(&self, k: usize) -> &Scalar {
        &self.h[k - 1]
    }

    /// Coefficient of `E_slot^k`, `k >= 1`.
    pub fn e_coeff(&self, slot: usize, k: usize) -> &Scalar {
        &self.e[slot][k - 1]
    }

    fn check(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring,
            "Chow classes from different rings"
        );
    }

    fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        ChowClass {
            ring: self.ring.clone(),
            deg0: f(&self.deg0),
            h: [f(&self.h[0]), f(&self.h[1]), f(&self.h[2])],
            e: self.e.iter().map(|v| [f(&v[0]), f(&v[1]), f(&v[2])]).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Self {
        self.check(other);
        let z3 = |a: &[Scalar; 3], b: &[Scalar; 3]| [f(&a[0], &b[0]), f(&a[1], &b[1]), f(&a[2], &b[2])];
        ChowClass {
            ring: self.ring.clone(),
            deg0: f(&self.deg0, &other.deg0),
            h: z3(&self.h, &other.h),
            e: self.e.iter().zip(&other.e).map(|(a, b)| z3(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.map(|a| -a)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        self.map(|a| a * c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let graded = |a: &[Scalar; 3], b: &[Scalar; 3]| {
            let fa = [&self.deg0, &a[0], &a[1], &a[2]];
            let fb = [&other.deg0, &b[0], &b[1], &b[2]];
            let mut out = zeros3();
            for k in 1..=3 {
                for i in 0..=k {
                    out[k - 1] = &out[k - 1] + &(fa[i] * fb[k - i]);
                }
            }
            out
        };
        ChowClass {
            ring: self.ring.clone(),
            deg0: &self.deg0 * &other.deg0,
            h: graded(&self.h, &other.h),
            e: self.e.iter().zip(&other.e).map(|(a, b)| graded(a, b)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(&self.ring), |acc, _| acc.mul(self))
    }

    /// Graded piece of degree `k`.
    pub fn part(&self, k: usize) -> Self {
        let mut out = Self::zero(&self.ring);
        if k == 0 {
            out.deg0 = self.deg0.clone();
        } else if k <= 3 {
            out.h[k - 1] = self.h[k - 1].clone();
            for (o, s) in out.e.iter_mut().zip(&self.e) {
                o[k - 1] = s[k - 1].clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.deg0.is_zero() && self.h.iter().all(Scalar::is_zero) && self.e.iter().flatten().all(Scalar::is_zero)
    }

    /// Degree of a class concentrated in degree 3.
    pub fn integrate(&self) -> Result<Scalar> {
        let lower = !self.deg0.is_zero()
            || self.h[..2].iter().any(|c| !c.is_zero())
            || self.e.iter().any(|v| v[..2].iter().any(|c| !c.is_zero()));
        if lower {
            return Err(Error::NotTopDegree);
        }
        let e_total = self.e.iter().fold(scalar(0), |acc, v| &acc + &v[2]);
        Ok(&self.h[2] + &(&e_total * &self.ring.weight))
    }
}

/// Degree map on the top graded piece.
pub fn chow_integrate(c: &ChowClass) -> Result<Scalar> {
    c.integrate()
}

impl fmt::Display for ChowClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<(String, &Scalar)> = Vec::new();
        let power = |base: String, k: usize| if k == 1 { base } else { format!("{base}^{k}") };
        parts.push((String::new(), &self.deg0));
        for k in 1..=3 {
            parts.push((power("H".into(), k), &self.h[k - 1]));
        }
        for k in 1..=3 {
            for (s, v) in self.e.iter().enumerate() {
                let base = if self.ring.is_symbolic() {
                    "sum(E_i".to_string()
                } else {
                    format!("E{}", s + 1)
                };
                let mut name = power(base, k);
                if self.ring.is_symbolic() {
                    name.push(')');
                }
                parts.push((name, &v[k - 1]));
            }
        }
        let mut first = true;
        for (name, c) in parts.into_iter().filter(|(_, c)| !c.is_zero()) {
            let text = if c.is_constant() {
                c.to_string()
            } else {
                format!("({c})")
            };
            let (neg, text) = match text.strip_prefix('-') {
                Some(rest) if c.is_constant() => (true, rest.to_string()),
                _ => (false, text),
            };
            let body = match (name.is_empty(), text.as_str()) {
                (true, _) => text.clone(),
                (false, "1") => name.clone(),
                (false, _) => format!("{text}*{name}"),
            };
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Truncated total Chern class `1 + c_1 + c_2 + c_3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernSeries {
    total: ChowClass,
}

impl ChernSeries {
    pub fn new(total: ChowClass) -> Result<Self> {
        if total.deg0 != scalar(1) {
            return Err(Error::InvalidArgument(format!(
                "total Chern class must start with 1, got {}",
                total.deg0
            )));
        }
        Ok(ChernSeries { total })
    }

    pub fn one(ring: &Arc<ChowRing>) -> Self {
        ChernSeries {
            total: ChowClass::one(ring),
        }
    }

    /// `1 + D` for a divisor class `D`.
    pub fn of_line_bundle(divisor: &ChowClass) -> Self {
        ChernSeries {
            total: ChowClass::one(divisor.ring()).add(&divisor.part(1)),
        }
    }

    pub fn total(&self) -> &ChowClass {
        &self.total
    }

    /// `c_k`.
    pub fn c(&self, k: usize) -> ChowClass {
        self.total.part(k)
    }

    pub fn mul(&self, other: &Self) -> Self {
        ChernSeries {
            total: self.total.mul(&other.total),
        }
    }

    /// `1 - a + a^2 - a^3` for `self = 1 + a`.
    pub fn inverse(&self) -> Self {
        let ring = self.total.ring();
        let a = self.total.sub(&ChowClass::one(ring));
        let a2 = a.mul(&a);
        let a3 = a2.mul(&a);
        ChernSeries {
            total: ChowClass::one(ring).sub(&a).add(&a2).sub(&a3),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inverse())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn intersection_numbers() {
        let r = ChowRing::new(PointCount::Concrete(3));
        let h = ChowClass::hyperplane(&r);
        let e1 = ChowClass::exceptional(&r, 0).unwrap();
        let e2 = ChowClass::exceptional(&r, 1).unwrap();
        assert_eq!(h.pow(3).integrate().unwrap(), scalar(1));
        assert_eq!(h.pow(2).mul(&e1).integrate().unwrap(), scalar(0));
        assert_eq!(e1.pow(3).integrate().unwrap(), scalar(1));
        assert!(e1.mul(&e2).is_zero());
        assert!(h.mul(&e1).is_zero());
        assert!(matches!(h.pow(2).integrate(), Err(Error::NotTopDegree)));
        assert!(matches!(ChowClass::one(&r).integrate(), Err(Error::NotTopDegree)));
    }

    #[test]
    fn symbolic_sum_integrates_with_weight() {
        let r = ChowRing::new(PointCount::Symbolic);
        let e = ChowClass::exceptional_sum(&r);
        assert_eq!(e.pow(3).integrate().unwrap(), symbol_n());
        assert!(ChowClass::exceptional(&r, 0).is_err());
        let ones = ChowClass::sum_over_points(&r, |_| ChowClass::one(&r));
        assert_eq!(ones.degree0(), &symbol_n());
    }

    #[test]
    fn binomials() {
        assert_eq!(PointCount::Concrete(5).binomial(3), scalar(10));
        assert_eq!(PointCount::Concrete(2).binomial(3), scalar(0));
        let c3 = PointCount::Symbolic.binomial(3);
        assert_eq!(c3.evaluate(&[Rational::from(7)]), Rational::from(35));
    }

    #[test]
    fn display() {
        let r = ChowRing::new(PointCount::Concrete(2));
        let d = ChowClass::hyperplane(&r)
            .scale(&scalar(4))
            .sub(&ChowClass::exceptional_sum(&r).scale(&scalar(2)));
        assert_eq!(d.to_string(), "4*H - 2*E1 - 2*E2");
        let s = ChowRing::new(PointCount::Symbolic);
        let d = ChowClass::hyperplane(&s).scale(&symbol_n().scale(&Rational::from(2)));
        assert_eq!(d.to_string(), "(2*n)*H");
    }

    fn arb_divisor() -> impl Strategy<Value = (i64, Vec<i64>)> {
        (-6i64..7, proptest::collection::vec(-6i64..7, 3))
    }

    proptest! {
        #[test]
        fn inverse_is_inverse((a, bs) in arb_divisor(), (c, ds) in arb_divisor()) {
            let r = ChowRing::new(PointCount::Concrete(3));
            let h = ChowClass::hyperplane(&r);
            let mut d1 = h.scale(&scalar(a));
            let mut d2 = h.scale(&scalar(c));
            for i in 0..3 {
                let e = ChowClass::exceptional(&r, i).unwrap();
                d1 = d1.add(&e.scale(&scalar(bs[i])));
                d2 = d2.add(&e.scale(&scalar(ds[i])));
            }
            let series = ChernSeries::of_line_bundle(&d1).mul(&ChernSeries::of_line_bundle(&d2));
            prop_assert_eq!(series.mul(&series.inverse()), ChernSeries::one(&r));
        }

        #[test]
        fn product_is_commutative_and_associative((a, bs) in arb_divisor(), (c, ds) in arb_divisor()) {
            let r = ChowRing::new(PointCount::Concrete(3));
            let h = ChowClass::hyperplane(&r);
            let mut x = ChowClass::one(&r).add(&h.scale(&scalar(a)));
            let mut y = h.scale(&scalar(c));
            for i in 0..3 {
                let e = ChowClass::exceptional(&r, i).unwrap();
                x = x.add(&e.scale(&scalar(bs[i])));
                y = y.add(&e.pow(2).scale(&scalar(ds[i])));
            }
            prop_assert_eq!(x.mul(&y), y.mul(&x));
            prop_assert_eq!(x.mul(&y).mul(&x), x.mul(&y.mul(&x)));
        }
    }
}
