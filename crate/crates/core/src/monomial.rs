use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

/// Exponent vector with cached total degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: SmallVec<[u16; 8]>,
    degree: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, nvars),
            degree: 0,
        }
    }

    pub fn var(nvars: usize, index: usize, power: u16) -> Self {
        let mut m = Monomial::one(nvars);
        m.exps[index] = power;
        m.degree = power as u32;
        m
    }

    pub fn from_exponents(exps: &[u16]) -> Self {
        Monomial {
            exps: SmallVec::from_slice(exps),
            degree: exps.iter().map(|&e| e as u32).sum(),
        }
    }

    #[inline]
    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    #[inline]
    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
            degree: self.degree + other.degree,
        }
    }

    #[inline]
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        if !self.divides(other) {
            return None;
        }
        Some(Monomial {
            exps: other.exps.iter().zip(&self.exps).map(|(a, b)| a - b).collect(),
            degree: other.degree - self.degree,
        })
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: SmallVec<[u16; 8]> = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| *a.max(b))
            .collect();
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, degree }
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Bit `i mod 64` set iff variable `i` occurs. A necessary condition for
    /// `a | b` is `mask(a) & !mask(b) == 0`.
    pub fn divmask(&self) -> u64 {
        self.exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .fold(0u64, |m, (i, _)| m | (1u64 << (i % 64)))
    }

    /// Index of the single variable when the monomial is a pure power.
    pub fn pure_power_var(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    /// Monomial in a ring with extra variables appended after the existing ones.
    pub fn extended(&self, extra: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps.extend(std::iter::repeat(0).take(extra));
        Monomial {
            exps,
            degree: self.degree,
        }
    }

    /// Degree restricted to the variables in `range`.
    pub fn partial_degree(&self, range: std::ops::Range<usize>) -> u32 {
        self.exps[range].iter().map(|&e| e as u32).sum()
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum MonomialOrder {
    #[default]
    DegRevLex,
    Lex,
    /// Elimination order: the first `k` variables, ranked by degrevlex, are
    /// compared before the remaining block.
    Block(usize),
}

impl MonomialOrder {
    #[inline]
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::DegRevLex => a
                .degree
                .cmp(&b.degree)
                .then_with(|| revlex(&a.exps, &b.exps)),
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::Block(k) => {
                let k = k.min(a.nvars());
                let n = a.nvars();
                a.partial_degree(0..k)
                    .cmp(&b.partial_degree(0..k))
                    .then_with(|| revlex(&a.exps[..k], &b.exps[..k]))
                    .then_with(|| a.partial_degree(k..n).cmp(&b.partial_degree(k..n)))
                    .then_with(|| revlex(&a.exps[k..], &b.exps[k..]))
            }
        }
    }
}

/// Reverse lexicographic tie-break: the monomial with the smaller exponent in
/// the last differing variable is larger.
#[inline]
fn revlex(a: &[u16], b: &[u16]) -> Ordering {
    for (x, y) in a.iter().zip(b).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

impl std::str::FromStr for MonomialOrder {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "degrevlex" | "grevlex" => Ok(MonomialOrder::DegRevLex),
            "lex" => Ok(MonomialOrder::Lex),
            other => other
                .strip_prefix("block")
                .and_then(|rest| rest.trim_matches(|c| c == '(' || c == ')' || c == ':').parse().ok())
                .map(MonomialOrder::Block)
                .ok_or_else(|| crate::error::Error::InvalidArgument(format!("unknown order `{s}`"))),
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::DegRevLex => write!(f, "degrevlex"),
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::Block(k) => write!(f, "block({k})"),
        }
    }
}
