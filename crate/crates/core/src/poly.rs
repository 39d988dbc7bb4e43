//! Sparse distributed multivariate polynomials.
//!
//! Every polynomial carries a shared [`Ring`] (variable names, coefficient
//! field, monomial order). Terms are kept sorted in descending order for the
//! ring's order, with no zero coefficients. Arithmetic operators panic when
//! the operands live in different rings; API entry points that accept
//! polynomials from callers check this and return [`Error::RingMismatch`].

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement, Rational, RationalField};
use crate::monomial::{Monomial, MonomialOrder};

#[derive(Debug, PartialEq, Eq)]
pub struct Ring<F: Field> {
    vars: Vec<String>,
    field: F,
    order: MonomialOrder,
}

impl<F: Field> Ring<F> {
    pub fn new<S: AsRef<str>>(vars: &[S], field: F, order: MonomialOrder) -> Arc<Self> {
        Arc::new(Ring {
            vars: vars.iter().map(|v| v.as_ref().to_string()).collect(),
            field,
            order,
        })
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn with_order(&self, order: MonomialOrder) -> Arc<Self> {
        Arc::new(Ring {
            vars: self.vars.clone(),
            field: self.field.clone(),
            order,
        })
    }

    pub fn with_field<G: Field>(&self, field: G) -> Arc<Ring<G>> {
        Arc::new(Ring {
            vars: self.vars.clone(),
            field,
            order: self.order,
        })
    }

    /// Ring with `extra` variables appended; names that collide with existing
    /// ones get underscores appended until they are unique.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Arc<Self> {
        let mut vars = self.vars.clone();
        for name in extra {
            let mut name = name.as_ref().to_string();
            while vars.contains(&name) {
                name.push('_');
            }
            vars.push(name);
        }
        Arc::new(Ring {
            vars,
            field: self.field.clone(),
            order: self.order,
        })
    }

    pub fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term<C> {
    pub mono: Monomial,
    pub coeff: C,
}

#[derive(Clone)]
pub struct Polynomial<F: Field> {
    ring: Arc<Ring<F>>,
    terms: Vec<Term<F::Elem>>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        Ring::same(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl<F: Field> Eq for Polynomial<F> {}

impl<F: Field> Polynomial<F> {
    pub fn zero(ring: &Arc<Ring<F>>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Arc<Ring<F>>, c: F::Elem) -> Self {
        let terms = if c.is_zero() {
            Vec::new()
        } else {
            vec![Term {
                mono: Monomial::one(ring.nvars()),
                coeff: c,
            }]
        };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_i64(ring: &Arc<Ring<F>>, c: i64) -> Self {
        Self::constant(ring, ring.field().from_i64(c))
    }

    pub fn one(ring: &Arc<Ring<F>>) -> Self {
        Self::constant(ring, ring.field().one())
    }

    pub fn var(ring: &Arc<Ring<F>>, name: &str) -> Result<Self> {
        Ok(Self::var_at(ring, ring.var_index(name)?))
    }

    pub fn var_at(ring: &Arc<Ring<F>>, index: usize) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: vec![Term {
                mono: Monomial::var(ring.nvars(), index, 1),
                coeff: ring.field().one(),
            }],
        }
    }

    pub fn monomial(ring: &Arc<Ring<F>>, mono: Monomial, coeff: F::Elem) -> Self {
        Self::from_terms(ring, vec![(mono, coeff)])
    }

    /// Canonicalize arbitrary (monomial, coefficient) pairs.
    pub fn from_terms(ring: &Arc<Ring<F>>, mut raw: Vec<(Monomial, F::Elem)>) -> Self {
        let order = ring.order();
        raw.sort_by(|a, b| order.cmp(&b.0, &a.0));
        let mut terms: Vec<Term<F::Elem>> = Vec::with_capacity(raw.len());
        for (mono, coeff) in raw {
            assert_eq!(mono.nvars(), ring.nvars(), "monomial arity does not match ring");
            match terms.last_mut() {
                Some(last) if last.mono == mono => last.coeff = last.coeff.add_ref(&coeff),
                _ => terms.push(Term { mono, coeff }),
            }
        }
        terms.retain(|t| !t.coeff.is_zero());
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Trusted constructor: terms must already be sorted, distinct and nonzero.
    pub(crate) fn from_sorted_terms(ring: &Arc<Ring<F>>, terms: Vec<Term<F::Elem>>) -> Self {
        debug_assert!(terms.iter().all(|t| !t.coeff.is_zero()));
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.order().cmp(&w[0].mono, &w[1].mono) == Ordering::Greater));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }

    pub fn terms(&self) -> &[Term<F::Elem>] {
        &self.terms
    }

    pub(crate) fn into_terms(self) -> Vec<Term<F::Elem>> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.mono.is_one())
    }

    pub fn leading_term(&self) -> Option<&Term<F::Elem>> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.mono)
    }

    pub fn leading_coeff(&self) -> Option<&F::Elem> {
        self.terms.first().map(|t| &t.coeff)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.mono.degree()).max()
    }

    pub fn coefficient(&self, mono: &Monomial) -> F::Elem {
        self.terms
            .iter()
            .find(|t| &t.mono == mono)
            .map(|t| t.coeff.clone())
            .unwrap_or_else(|| self.ring.field().zero())
    }

    /// Constant term.
    pub fn constant_coeff(&self) -> F::Elem {
        match self.terms.last() {
            Some(t) if t.mono.is_one() => t.coeff.clone(),
            _ => self.ring.field().zero(),
        }
    }

    fn assert_same_ring(&self, other: &Self) {
        assert!(
            Ring::same(&self.ring, &other.ring),
            "polynomial arithmetic across different rings"
        );
    }

    pub fn check_ring(&self, ring: &Arc<Ring<F>>) -> Result<()> {
        if Ring::same(&self.ring, ring) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    mono: t.mono.clone(),
                    coeff: t.coeff.mul_ref(c),
                })
                .collect(),
        }
    }

    /// Multiply by `c * mono`.
    pub fn mul_term(&self, mono: &Monomial, c: &F::Elem) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    mono: t.mono.mul(mono),
                    coeff: t.coeff.mul_ref(c),
                })
                .collect(),
        }
    }

    /// Divide through by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => self.scale(&lc.inv().expect("nonzero leading coefficient")),
            _ => self.clone(),
        }
    }

    /// `self + c * other`, merged in one pass.
    pub fn add_scaled(&self, other: &Self, c: &F::Elem) -> Self {
        self.assert_same_ring(other);
        let order = self.ring.order();
        let terms = merge_terms(&self.terms, &other.terms, |x| x.mul_ref(c), order);
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to the named variable.
    pub fn diff(&self, var: &str) -> Result<Self> {
        Ok(self.diff_at(self.ring.var_index(var)?))
    }

    pub fn diff_at(&self, index: usize) -> Self {
        let field = self.ring.field();
        let raw = self
            .terms
            .iter()
            .filter(|t| t.mono.exponents()[index] > 0)
            .map(|t| {
                let e = t.mono.exponents()[index];
                let mut exps = t.mono.exponents().to_vec();
                exps[index] -= 1;
                (
                    Monomial::from_exponents(&exps),
                    t.coeff.mul_ref(&field.from_i64(e as i64)),
                )
            })
            .collect();
        Self::from_terms(&self.ring, raw)
    }

    /// Ring homomorphism image. Variables absent from `assignment` are sent to
    /// the variable of the same name in the target ring.
    pub fn substitute(&self, assignment: &HashMap<String, Polynomial<F>>) -> Result<Self> {
        let target = match assignment.values().next() {
            Some(p) => p.ring.clone(),
            None => return Ok(self.clone()),
        };
        if assignment.values().any(|p| !Ring::same(&p.ring, &target)) {
            return Err(Error::RingMismatch);
        }
        let mut images = Vec::with_capacity(self.ring.nvars());
        for name in self.ring.vars() {
            match assignment.get(name) {
                Some(p) => images.push(p.clone()),
                None => images.push(Polynomial::var(&target, name).map_err(|_| Error::RingMismatch)?),
            }
        }
        for name in assignment.keys() {
            self.ring.var_index(name)?;
        }
        Ok(self.substitute_images(&target, &images))
    }

    /// Image under `x_i -> images[i]`, all images in `target`.
    pub fn substitute_images(&self, target: &Arc<Ring<F>>, images: &[Polynomial<F>]) -> Self {
        assert_eq!(images.len(), self.ring.nvars());
        let mut powers: Vec<Vec<Polynomial<F>>> = images.iter().map(|p| vec![Polynomial::one(target), p.clone()]).collect();
        let mut out = Polynomial::zero(target);
        for t in &self.terms {
            let mut prod = Polynomial::constant(target, t.coeff.clone());
            for (i, &e) in t.mono.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                prod = &prod * &powers[i][e as usize];
            }
            out = &out + &prod;
        }
        out
    }

    pub fn evaluate(&self, point: &[F::Elem]) -> F::Elem {
        assert_eq!(point.len(), self.ring.nvars());
        let field = self.ring.field();
        let mut acc = field.zero();
        for t in &self.terms {
            let mut v = t.coeff.clone();
            for (x, &e) in point.iter().zip(t.mono.exponents()) {
                for _ in 0..e {
                    v = v.mul_ref(x);
                }
            }
            acc = acc.add_ref(&v);
        }
        acc
    }

    /// Same polynomial, re-sorted for another order.
    pub fn with_order(&self, ring: &Arc<Ring<F>>) -> Result<Self> {
        if ring.vars() != self.ring.vars() || ring.field() != self.ring.field() {
            return Err(Error::RingMismatch);
        }
        let raw = self.terms.iter().map(|t| (t.mono.clone(), t.coeff.clone())).collect();
        Ok(Self::from_terms(ring, raw))
    }

    /// Embed into `target`, sending variable `i` to `target` variable
    /// `positions[i]`.
    pub fn embed(&self, target: &Arc<Ring<F>>, positions: &[usize]) -> Self {
        assert_eq!(positions.len(), self.ring.nvars());
        let raw = self
            .terms
            .iter()
            .map(|t| {
                let mut exps = vec![0u16; target.nvars()];
                for (i, &e) in t.mono.exponents().iter().enumerate() {
                    exps[positions[i]] += e;
                }
                (Monomial::from_exponents(&exps), t.coeff.clone())
            })
            .collect();
        Self::from_terms(target, raw)
    }

    /// Embed into a ring whose variable list starts with this ring's
    /// variables (same order), e.g. one built by [`Ring::extended`].
    pub fn extend_to(&self, target: &Arc<Ring<F>>) -> Self {
        let positions: Vec<usize> = (0..self.ring.nvars()).collect();
        self.embed(target, &positions)
    }

    /// Embed by matching variable names.
    pub fn embed_by_name(&self, target: &Arc<Ring<F>>) -> Result<Self> {
        let positions = self
            .ring
            .vars()
            .iter()
            .map(|v| target.var_index(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.embed(target, &positions))
    }

    /// Variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&i| self.terms.iter().any(|t| t.mono.exponents()[i] > 0))
            .collect()
    }

    fn write_term(&self, f: &mut fmt::Formatter<'_>, t: &Term<F::Elem>, first: bool) -> fmt::Result {
        let negative = t.coeff.is_negative_display();
        let abs = if negative { t.coeff.neg_ref() } else { t.coeff.clone() };
        match (first, negative) {
            (true, true) => write!(f, "-")?,
            (true, false) => {}
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
        }
        let mono_str = self.format_monomial(&t.mono);
        if mono_str.is_empty() {
            write!(f, "{abs}")
        } else if abs.is_one() {
            write!(f, "{mono_str}")
        } else {
            write!(f, "{abs}*{mono_str}")
        }
    }

    fn format_monomial(&self, mono: &Monomial) -> String {
        mono.exponents()
            .iter()
            .zip(self.ring.vars())
            .filter(|(&e, _)| e > 0)
            .map(|(&e, v)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl Polynomial<RationalField> {
    /// Image of a rational polynomial in a ring with the same variables over
    /// another field.
    pub fn to_field<G: Field>(&self, target: &Arc<Ring<G>>) -> Result<Polynomial<G>> {
        if target.vars() != self.ring.vars() {
            return Err(Error::RingMismatch);
        }
        let raw = self
            .terms
            .iter()
            .map(|t| Ok((t.mono.clone(), target.field().from_rational(&t.coeff)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Polynomial::from_terms(target, raw))
    }

    /// Multiply by the least common multiple of the denominators so that
    /// all coefficients are integers.
    pub fn clear_denominators(&self) -> Self {
        use num_integer::Integer;
        let mut l = num_bigint::BigInt::from(1);
        for t in &self.terms {
            l = l.lcm(t.coeff.denom());
        }
        self.scale(&Rational::from_integer(l))
    }
}

/// Merge two descending term lists as `a + map(b)`.
fn merge_terms<C: FieldElement>(
    a: &[Term<C>],
    b: &[Term<C>],
    map: impl Fn(&C) -> C,
    order: MonomialOrder,
) -> Vec<Term<C>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match order.cmp(&a[i].mono, &b[j].mono) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let c = map(&b[j].coeff);
                if !c.is_zero() {
                    out.push(Term {
                        mono: b[j].mono.clone(),
                        coeff: c,
                    });
                }
                j += 1;
            }
            Ordering::Equal => {
                let c = a[i].coeff.add_ref(&map(&b[j].coeff));
                if !c.is_zero() {
                    out.push(Term {
                        mono: a[i].mono.clone(),
                        coeff: c,
                    });
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for t in &b[j..] {
        let c = map(&t.coeff);
        if !c.is_zero() {
            out.push(Term {
                mono: t.mono.clone(),
                coeff: c,
            });
        }
    }
    out
}

impl<'a, F: Field> Add<&'a Polynomial<F>> for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        self.assert_same_ring(rhs);
        let terms = merge_terms(&self.terms, &rhs.terms, |c| c.clone(), self.ring.order());
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }
}

impl<'a, F: Field> Sub<&'a Polynomial<F>> for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        self.assert_same_ring(rhs);
        let terms = merge_terms(&self.terms, &rhs.terms, |c| c.neg_ref(), self.ring.order());
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }
}

impl<'a, F: Field> Mul<&'a Polynomial<F>> for &'a Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: &'a Polynomial<F>) -> Polynomial<F> {
        self.assert_same_ring(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        let (small, large) = if self.len() <= rhs.len() { (self, rhs) } else { (rhs, self) };
        if small.len() == 1 {
            let t = &small.terms[0];
            return large.mul_term(&t.mono, &t.coeff);
        }
        let mut acc: HashMap<Monomial, F::Elem> = HashMap::with_capacity(self.len() * rhs.len());
        for a in &self.terms {
            for b in &rhs.terms {
                let m = a.mono.mul(&b.mono);
                let c = a.coeff.mul_ref(&b.coeff);
                acc.entry(m)
                    .and_modify(|e| *e = e.add_ref(&c))
                    .or_insert(c);
            }
        }
        Polynomial::from_terms(&self.ring, acc.into_iter().collect())
    }
}

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    mono: t.mono.clone(),
                    coeff: t.coeff.neg_ref(),
                })
                .collect(),
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for Polynomial<F> {
            type Output = Polynomial<F>;
            fn $m(self, rhs: Polynomial<F>) -> Polynomial<F> {
                (&self).$m(&rhs)
            }
        }
    };
}

owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            self.write_term(f, t, k == 0)?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} in {}[{}]", self.ring.field().name(), self.ring.vars().join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rational, RationalField};
    use crate::parse::parse_poly;
    use proptest::prelude::*;

    fn qring(vars: &[&str]) -> Arc<Ring<RationalField>> {
        Ring::new(vars, RationalField, MonomialOrder::DegRevLex)
    }

    #[test]
    fn diff_examples() {
        let r = qring(&["x", "y"]);
        let f = parse_poly("y - x^2", &r).unwrap();
        assert_eq!(f.diff("x").unwrap(), parse_poly("-2*x", &r).unwrap());
        let x = parse_poly("x", &r).unwrap();
        assert!(x.diff("y").unwrap().is_zero());
        let g = parse_poly("x^2*y + x*y - 1", &r).unwrap();
        assert_eq!(g.diff("x").unwrap(), parse_poly("2*x*y + y", &r).unwrap());
        assert!(matches!(g.diff("w"), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn substitute_examples() {
        let r = qring(&["x", "y"]);
        let rt = qring(&["t"]);
        let f = parse_poly("y - x^2", &r).unwrap();
        let t = Polynomial::var(&rt, "t").unwrap();
        let map = HashMap::from([("x".to_string(), t.clone()), ("y".to_string(), &t * &t)]);
        assert!(f.substitute(&map).unwrap().is_zero());

        let g = parse_poly("x + y", &r).unwrap();
        let map = HashMap::from([
            ("x".to_string(), Polynomial::from_i64(&rt, 1)),
            ("y".to_string(), Polynomial::from_i64(&rt, 2)),
        ]);
        assert_eq!(g.substitute(&map).unwrap(), Polynomial::from_i64(&rt, 3));
    }

    #[test]
    fn substitute_ring_mismatch() {
        let r = qring(&["x", "y"]);
        let r1 = qring(&["s"]);
        let r2 = qring(&["t"]);
        let f = parse_poly("x + y", &r).unwrap();
        let map = HashMap::from([
            ("x".to_string(), Polynomial::var(&r1, "s").unwrap()),
            ("y".to_string(), Polynomial::var(&r2, "t").unwrap()),
        ]);
        assert!(matches!(f.substitute(&map), Err(Error::RingMismatch)));
    }

    #[test]
    fn affine_quadric_at_center_is_constant_term() {
        // sum (z_i - b_i)^2 + b_0 evaluated at z = b leaves b_0
        let r = qring(&["z1", "z2", "z3"]);
        let betas = [3, -7, 11];
        let beta0 = Rational::new(5, 2);
        let mut q = Polynomial::constant(&r, beta0.clone());
        for (i, b) in betas.iter().enumerate() {
            let d = &Polynomial::var_at(&r, i) - &Polynomial::from_i64(&r, *b);
            q = &q + &(&d * &d);
        }
        let map: HashMap<String, Polynomial<RationalField>> = r
            .vars()
            .iter()
            .zip(betas)
            .map(|(v, b)| (v.clone(), Polynomial::from_i64(&r, b)))
            .collect();
        assert_eq!(q.substitute(&map).unwrap(), Polynomial::constant(&r, beta0));
    }

    #[test]
    fn display_signs() {
        let r = qring(&["n"]);
        let f = parse_poly("9/2*n^3 - 21/2*n^2 + 8*n - 4", &r).unwrap();
        assert_eq!(f.to_string(), "9/2*n^3 - 21/2*n^2 + 8*n - 4");
        let g = parse_poly("-n^2 + 1", &r).unwrap();
        assert_eq!(g.to_string(), "-n^2 + 1");
        assert_eq!(Polynomial::zero(&r).to_string(), "0");
    }

    #[test]
    fn pow_and_monic() {
        let r = qring(&["x"]);
        let f = parse_poly("2*x + 2", &r).unwrap();
        assert_eq!(f.pow(2), parse_poly("4*x^2 + 8*x + 4", &r).unwrap());
        assert_eq!(f.monic(), parse_poly("x + 1", &r).unwrap());
        assert_eq!(f.pow(0), Polynomial::one(&r));
    }

    #[test]
    fn reduction_to_prime_field() {
        let r = qring(&["x"]);
        let f = parse_poly("1/3*x + 1", &r).unwrap();
        let rp = r.with_field(PrimeField::new(7).unwrap());
        let g = f.to_field(&rp).unwrap();
        // 1/3 = 5 mod 7
        assert_eq!(g.to_string(), "5*x + 1");
        let bad = parse_poly("1/7*x", &r).unwrap();
        assert!(bad.to_field(&rp).is_err());
    }

    fn arb_poly(r: Arc<Ring<RationalField>>) -> impl Strategy<Value = Polynomial<RationalField>> {
        proptest::collection::vec(((0u16..3, 0u16..3, 0u16..3), -5i64..6), 0..6).prop_map(move |ts| {
            let raw = ts
                .into_iter()
                .map(|((a, b, c), k)| (Monomial::from_exponents(&[a, b, c]), Rational::from(k)))
                .collect();
            Polynomial::from_terms(&r, raw)
        })
    }

    fn ring3() -> Arc<Ring<RationalField>> {
        qring(&["x", "y", "z"])
    }

    proptest! {
        #[test]
        fn ring_axioms(f in arb_poly(ring3()), g in arb_poly(ring3()), h in arb_poly(ring3())) {
            prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
            prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
            prop_assert_eq!(&f * &g, &g * &f);
            prop_assert_eq!(&f + &g, &g + &f);
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            prop_assert!((&f - &f).is_zero());
        }

        #[test]
        fn leibniz_rule(f in arb_poly(ring3()), g in arb_poly(ring3()), v in 0usize..3) {
            let lhs = (&f * &g).diff_at(v);
            let rhs = &(&f * &g.diff_at(v)) + &(&g * &f.diff_at(v));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn substitution_is_homomorphism(f in arb_poly(ring3()), g in arb_poly(ring3()),
                                        imgs in proptest::collection::vec(-4i64..5, 6)) {
            let target = qring(&["s", "t"]);
            let s = Polynomial::var(&target, "s").unwrap();
            let t = Polynomial::var(&target, "t").unwrap();
            let images: Vec<_> = (0..3).map(|i| {
                &(&s.scale(&Rational::from(imgs[2 * i])) + &t.scale(&Rational::from(imgs[2 * i + 1]))) + &Polynomial::one(&target)
            }).collect();
            let lhs = (&f * &g).substitute_images(&target, &images);
            let rhs = &f.substitute_images(&target, &images) * &g.substitute_images(&target, &images);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn reduction_commutes_with_arithmetic(f in arb_poly(ring3()), g in arb_poly(ring3())) {
            let rp = ring3().with_field(PrimeField::new(101).unwrap());
            let fp = f.to_field(&rp).unwrap();
            let gp = g.to_field(&rp).unwrap();
            prop_assert_eq!((&f * &g).to_field(&rp).unwrap(), &fp * &gp);
            prop_assert_eq!((&f + &g).to_field(&rp).unwrap(), &fp + &gp);
        }
    }
}
