//! Buchberger's algorithm with normal pair selection and the Gebauer–Möller
//! pair update, plus the counting tools built on a reduced basis: normal
//! forms, standard-monomial counts, Krull dimension, and counting off a
//! hypersurface by the Rabinowitsch trick.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{Polynomial, Ring, Term};

/// Dimension of `k[x]/I` as a vector space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuotientDimension {
    Finite(u64),
    Infinite,
}

impl QuotientDimension {
    pub fn finite(self) -> Option<u64> {
        match self {
            QuotientDimension::Finite(n) => Some(n),
            QuotientDimension::Infinite => None,
        }
    }
}

impl fmt::Display for QuotientDimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientDimension::Finite(n) => write!(f, "{n}"),
            QuotientDimension::Infinite => write!(f, "INFINITE"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Selection {
    /// Smallest lcm degree first, ties broken by the monomial order.
    Normal,
    /// Smallest sugar degree first, then as `Normal`.
    Sugar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroebnerConfig {
    /// Largest total degree allowed for an S-pair lcm.
    pub max_degree: u32,
    /// Largest number of live basis elements.
    pub max_basis_size: usize,
    /// Largest number of queued critical pairs.
    pub max_pairs: usize,
    /// Gebauer–Möller chain criterion in addition to the coprime criterion.
    pub chain_criterion: bool,
    pub selection: Selection,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig {
            max_degree: 120,
            max_basis_size: 20_000,
            max_pairs: 5_000_000,
            chain_criterion: true,
            selection: Selection::Normal,
        }
    }
}

/// Generators of an ideal in a common ring.
#[derive(Clone, Debug)]
pub struct IdealPresentation<F: Field> {
    ring: Arc<Ring<F>>,
    generators: Vec<Polynomial<F>>,
}

impl<F: Field> IdealPresentation<F> {
    /// Zero generators are dropped; at least one nonzero generator is required.
    pub fn new(ring: &Arc<Ring<F>>, generators: Vec<Polynomial<F>>) -> Result<Self> {
        for g in &generators {
            g.check_ring(ring)?;
        }
        let generators: Vec<_> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        if generators.is_empty() {
            return Err(Error::EmptyIdeal);
        }
        Ok(IdealPresentation {
            ring: ring.clone(),
            generators,
        })
    }

    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.generators
    }

    pub fn with_generator(&self, g: Polynomial<F>) -> Result<Self> {
        let mut gens = self.generators.clone();
        gens.push(g);
        Self::new(&self.ring, gens)
    }
}

/// Reduced, monic Gröbner basis sorted by increasing leading monomial.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<F: Field> {
    ring: Arc<Ring<F>>,
    elements: Vec<Polynomial<F>>,
}

impl<F: Field> GroebnerBasis<F> {
    pub fn ring(&self) -> &Arc<Ring<F>> {
        &self.ring
    }

    pub fn order(&self) -> MonomialOrder {
        self.ring.order()
    }

    pub fn elements(&self) -> &[Polynomial<F>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.elements.iter().any(|g| g.is_constant())
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements
            .iter()
            .map(|g| g.leading_monomial().expect("nonzero basis element").clone())
            .collect()
    }

    pub fn normal_form(&self, f: &Polynomial<F>) -> Result<Polynomial<F>> {
        normal_form(f, self)
    }

    pub fn contains(&self, f: &Polynomial<F>) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }
}

// ---------------------------------------------------------------------------
// Reduction machinery

struct Reducer<C> {
    lm: Monomial,
    mask: u64,
    terms: Vec<Term<C>>,
}

impl<C: FieldElement> Reducer<C> {
    fn new(terms: Vec<Term<C>>) -> Self {
        let lm = terms[0].mono.clone();
        Reducer {
            mask: lm.divmask(),
            lm,
            terms,
        }
    }
}

fn find_reducer<'a, C>(reducers: &'a [&Reducer<C>], mono: &Monomial) -> Option<&'a Reducer<C>> {
    let mask = mono.divmask();
    reducers
        .iter()
        .find(|r| r.mask & !mask == 0 && r.lm.divides(mono))
        .copied()
}

/// `a + c * mono * b`, both descending.
fn merge_scaled<C: FieldElement>(
    a: &[Term<C>],
    b: &[Term<C>],
    mono: &Monomial,
    c: &C,
    order: MonomialOrder,
) -> Vec<Term<C>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut bj = b.iter().map(|t| (t.mono.mul(mono), &t.coeff)).peekable();
    while i < a.len() {
        let Some((bm, _)) = bj.peek() else { break };
        match order.cmp(&a[i].mono, bm) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let (bm, bc) = bj.next().unwrap();
                out.push(Term {
                    mono: bm,
                    coeff: bc.mul_ref(c),
                });
            }
            Ordering::Equal => {
                let (_, bc) = bj.next().unwrap();
                let s = a[i].coeff.add_ref(&bc.mul_ref(c));
                if !s.is_zero() {
                    out.push(Term {
                        mono: a[i].mono.clone(),
                        coeff: s,
                    });
                }
                i += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for (bm, bc) in bj {
        out.push(Term {
            mono: bm,
            coeff: bc.mul_ref(c),
        });
    }
    out
}

/// Reduce `p` by monic reducers. With `full`, every term is reduced; otherwise
/// only the leading term.
fn reduce_terms<C: FieldElement>(
    mut cur: Vec<Term<C>>,
    reducers: &[&Reducer<C>],
    order: MonomialOrder,
    full: bool,
) -> Vec<Term<C>> {
    let mut rem: Vec<Term<C>> = Vec::new();
    let mut start = 0;
    while start < cur.len() {
        let lead = &cur[start];
        match find_reducer(reducers, &lead.mono) {
            Some(r) => {
                let q = r.lm.quotient_of(&lead.mono).expect("divisible");
                let c = lead.coeff.neg_ref();
                cur = merge_scaled(&cur[start + 1..], &r.terms[1..], &q, &c, order);
                start = 0;
            }
            None => {
                if !full {
                    break;
                }
                rem.push(cur[start].clone());
                start += 1;
            }
        }
    }
    rem.extend(cur.drain(start..));
    rem
}

fn make_monic<C: FieldElement>(mut terms: Vec<Term<C>>) -> Vec<Term<C>> {
    if let Some(first) = terms.first() {
        if !first.coeff.is_one() {
            let inv = first.coeff.inv().expect("nonzero leading coefficient");
            for t in &mut terms {
                t.coeff = t.coeff.mul_ref(&inv);
            }
        }
    }
    terms
}

/// S-polynomial of two nonzero polynomials.
pub fn s_polynomial<F: Field>(f: &Polynomial<F>, g: &Polynomial<F>) -> Polynomial<F> {
    let (lf, lg) = (f.leading_term().expect("nonzero"), g.leading_term().expect("nonzero"));
    let l = lf.mono.lcm(&lg.mono);
    let qf = lf.mono.quotient_of(&l).unwrap();
    let qg = lg.mono.quotient_of(&l).unwrap();
    let a = f.mul_term(&qf, &lf.coeff.inv().unwrap());
    let b = g.mul_term(&qg, &lg.coeff.inv().unwrap());
    &a - &b
}

fn s_poly_terms<C: FieldElement>(
    f: &Reducer<C>,
    g: &Reducer<C>,
    order: MonomialOrder,
) -> Vec<Term<C>> {
    // both monic
    let l = f.lm.lcm(&g.lm);
    let qf = f.lm.quotient_of(&l).unwrap();
    let qg = g.lm.quotient_of(&l).unwrap();
    let one = f.terms[0].coeff.clone();
    let a: Vec<Term<C>> = f.terms[1..]
        .iter()
        .map(|t| Term {
            mono: t.mono.mul(&qf),
            coeff: t.coeff.clone(),
        })
        .collect();
    merge_scaled(&a, &g.terms[1..], &qg, &one.neg_ref(), order)
}

// ---------------------------------------------------------------------------
// Buchberger

#[derive(Debug, Clone, PartialEq, Eq)]
struct Pair {
    key: u32,
    lcm: Monomial,
    i: usize,
    j: usize,
    order: MonomialOrder,
}

impl Ord for Pair {
    fn cmp(&self, other: &Self) -> Ordering {
        // BinaryHeap is a max-heap: reverse so the smallest pair pops first
        other
            .key
            .cmp(&self.key)
            .then_with(|| other.lcm.degree().cmp(&self.lcm.degree()))
            .then_with(|| self.order.cmp(&other.lcm, &self.lcm))
            .then_with(|| other.j.cmp(&self.j))
            .then_with(|| other.i.cmp(&self.i))
    }
}

impl PartialOrd for Pair {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct Engine<C: FieldElement> {
    order: MonomialOrder,
    config: GroebnerConfig,
    polys: Vec<Reducer<C>>,
    sugar: Vec<u32>,
    active: Vec<bool>,
    pairs: BinaryHeap<Pair>,
}

impl<C: FieldElement> Engine<C> {
    fn active_reducers(&self) -> Vec<&Reducer<C>> {
        self.polys
            .iter()
            .zip(&self.active)
            .filter(|(_, &a)| a)
            .map(|(r, _)| r)
            .collect()
    }

    fn pair_key(&self, i: usize, j: usize, lcm: &Monomial) -> u32 {
        match self.config.selection {
            Selection::Normal => lcm.degree(),
            Selection::Sugar => {
                let si = self.sugar[i] + lcm.degree() - self.polys[i].lm.degree();
                let sj = self.sugar[j] + lcm.degree() - self.polys[j].lm.degree();
                si.max(sj)
            }
        }
    }

    /// Insert a new monic, reduced polynomial and update the pair set.
    fn insert(&mut self, terms: Vec<Term<C>>, sugar: u32) -> Result<()> {
        let h = self.polys.len();
        let hr = Reducer::new(terms);
        let hlm = hr.lm.clone();
        self.polys.push(hr);
        self.sugar.push(sugar);
        self.active.push(true);

        let candidates: Vec<usize> = (0..h).filter(|&g| self.active[g]).collect();
        let lcms: Vec<Monomial> = candidates.iter().map(|&g| hlm.lcm(&self.polys[g].lm)).collect();

        let mut keep = vec![true; candidates.len()];
        if self.config.chain_criterion {
            let coprime: Vec<bool> = candidates
                .iter()
                .map(|&g| hlm.is_coprime(&self.polys[g].lm))
                .collect();
            // a strictly smaller lcm among the new pairs makes (h, g) redundant
            for a in 0..candidates.len() {
                if coprime[a] {
                    continue;
                }
                keep[a] = !(0..candidates.len())
                    .any(|b| lcms[b] != lcms[a] && lcms[b].divides(&lcms[a]));
            }
            // equal lcms: one representative, none if any of them is coprime
            for a in 0..candidates.len() {
                if !keep[a] || coprime[a] {
                    continue;
                }
                let same: Vec<usize> = (0..candidates.len()).filter(|&b| lcms[b] == lcms[a]).collect();
                if same.iter().any(|&b| coprime[b]) || same.iter().any(|&b| b < a && keep[b]) {
                    keep[a] = false;
                }
            }
            // old pairs (g1, g2) made redundant by h
            let polys = &self.polys;
            self.pairs.retain(|p| {
                !(hlm.divides(&p.lcm)
                    && hlm.lcm(&polys[p.i].lm) != p.lcm
                    && hlm.lcm(&polys[p.j].lm) != p.lcm)
            });
        }
        for (k, &g) in candidates.iter().enumerate() {
            if !keep[k] || hlm.is_coprime(&self.polys[g].lm) {
                continue;
            }
            let key = self.pair_key(g, h, &lcms[k]);
            self.pairs.push(Pair {
                key,
                lcm: lcms[k].clone(),
                i: g,
                j: h,
                order: self.order,
            });
        }
        for &g in &candidates {
            if hlm.divides(&self.polys[g].lm) {
                self.active[g] = false;
            }
        }
        let live = self.active.iter().filter(|&&a| a).count();
        if live > self.config.max_basis_size {
            return Err(Error::ResourceLimit(format!(
                "basis size {live} exceeds {}",
                self.config.max_basis_size
            )));
        }
        if self.pairs.len() > self.config.max_pairs {
            return Err(Error::ResourceLimit(format!(
                "pair count {} exceeds {}",
                self.pairs.len(),
                self.config.max_pairs
            )));
        }
        Ok(())
    }

    fn run(&mut self) -> Result<bool> {
        while let Some(pair) = self.pairs.pop() {
            if pair.lcm.degree() > self.config.max_degree {
                return Err(Error::ResourceLimit(format!(
                    "S-pair degree {} exceeds {}",
                    pair.lcm.degree(),
                    self.config.max_degree
                )));
            }
            let sugar = match self.config.selection {
                Selection::Sugar => pair.key,
                Selection::Normal => self.pair_key_sugar(&pair),
            };
            let s = s_poly_terms(&self.polys[pair.i], &self.polys[pair.j], self.order);
            let reducers = self.active_reducers();
            let r = reduce_terms(s, &reducers, self.order, true);
            if r.is_empty() {
                continue;
            }
            let r = make_monic(r);
            if r[0].mono.is_one() {
                return Ok(true);
            }
            self.insert(r, sugar)?;
        }
        Ok(false)
    }

    fn pair_key_sugar(&self, p: &Pair) -> u32 {
        let si = self.sugar[p.i] + p.lcm.degree() - self.polys[p.i].lm.degree();
        let sj = self.sugar[p.j] + p.lcm.degree() - self.polys[p.j].lm.degree();
        si.max(sj)
    }
}

/// Reduced Gröbner basis of `ideal` for `order`.
pub fn groebner_basis<F: Field>(
    ideal: &IdealPresentation<F>,
    order: MonomialOrder,
    config: &GroebnerConfig,
) -> Result<GroebnerBasis<F>> {
    let ring = if ideal.ring().order() == order {
        ideal.ring().clone()
    } else {
        ideal.ring().with_order(order)
    };
    let mut gens: Vec<Polynomial<F>> = ideal
        .generators()
        .iter()
        .map(|g| g.with_order(&ring))
        .collect::<Result<_>>()?;
    // smaller generators first makes early reductions cheaper
    gens.sort_by(|a, b| {
        let (la, lb) = (a.leading_monomial().unwrap(), b.leading_monomial().unwrap());
        order.cmp(la, lb).then(a.len().cmp(&b.len()))
    });

    let unit = || GroebnerBasis {
        ring: ring.clone(),
        elements: vec![Polynomial::one(&ring)],
    };

    let mut engine = Engine {
        order,
        config: config.clone(),
        polys: Vec::new(),
        sugar: Vec::new(),
        active: Vec::new(),
        pairs: BinaryHeap::new(),
    };
    for g in gens {
        let sugar = g.total_degree().unwrap_or(0);
        if sugar > config.max_degree {
            return Err(Error::ResourceLimit(format!(
                "generator degree {sugar} exceeds {}",
                config.max_degree
            )));
        }
        let reducers = engine.active_reducers();
        let r = reduce_terms(g.into_terms(), &reducers, order, true);
        if r.is_empty() {
            continue;
        }
        let r = make_monic(r);
        if r[0].mono.is_one() {
            return Ok(unit());
        }
        engine.insert(r, sugar)?;
    }
    if engine.run()? {
        return Ok(unit());
    }

    // the active set is a minimal basis; interreduce tails
    let minimal: Vec<&Reducer<F::Elem>> = engine.active_reducers();
    let mut elements = Vec::with_capacity(minimal.len());
    for (k, r) in minimal.iter().enumerate() {
        let others: Vec<&Reducer<F::Elem>> = minimal
            .iter()
            .enumerate()
            .filter(|(l, _)| *l != k)
            .map(|(_, r)| *r)
            .collect();
        let mut terms = vec![r.terms[0].clone()];
        terms.extend(reduce_terms(r.terms[1..].to_vec(), &others, order, true));
        elements.push(Polynomial::from_sorted_terms(&ring, terms));
    }
    elements.sort_by(|a, b| order.cmp(a.leading_monomial().unwrap(), b.leading_monomial().unwrap()));
    Ok(GroebnerBasis { ring, elements })
}

/// Remainder of `f` on division by `basis`.
pub fn normal_form<F: Field>(f: &Polynomial<F>, basis: &GroebnerBasis<F>) -> Result<Polynomial<F>> {
    if f.ring().vars() != basis.ring.vars() || f.ring().field() != basis.ring.field() {
        return Err(Error::RingMismatch);
    }
    let f = f.with_order(&basis.ring)?;
    let reducers: Vec<Reducer<F::Elem>> = basis
        .elements
        .iter()
        .map(|g| Reducer::new(g.terms().to_vec()))
        .collect();
    let refs: Vec<&Reducer<F::Elem>> = reducers.iter().collect();
    let terms = reduce_terms(f.into_terms(), &refs, basis.order(), true);
    Ok(Polynomial::from_sorted_terms(&basis.ring, terms))
}

/// Walk the monomials outside the leading-term ideal. The callback returns
/// `false` to stop early. Returns `None` when some variable has no pure
/// power among the leading monomials (infinitely many standard monomials).
fn for_each_standard_monomial(
    lms: &[Monomial],
    nvars: usize,
    mut visit: impl FnMut(&[u16]) -> bool,
) -> Option<()> {
    let mut bounds = vec![u16::MAX; nvars];
    for m in lms {
        if m.is_one() {
            return Some(());
        }
        if let Some(v) = m.pure_power_var() {
            bounds[v] = bounds[v].min(m.exponents()[v]);
        }
    }
    if bounds.contains(&u16::MAX) {
        return None;
    }
    let mut exps = vec![0u16; nvars];
    fn divisible(lms: &[Monomial], exps: &[u16]) -> bool {
        lms.iter()
            .any(|m| m.exponents().iter().zip(exps).all(|(a, b)| a <= b))
    }
    fn rec(
        k: usize,
        exps: &mut Vec<u16>,
        bounds: &[u16],
        lms: &[Monomial],
        visit: &mut dyn FnMut(&[u16]) -> bool,
    ) -> bool {
        if k == exps.len() {
            return visit(exps);
        }
        for e in 0..bounds[k] {
            exps[k] = e;
            // raising later exponents preserves divisibility, so prune here
            if divisible(lms, exps) {
                break;
            }
            if !rec(k + 1, exps, bounds, lms, visit) {
                exps[k] = 0;
                return false;
            }
        }
        exps[k] = 0;
        true
    }
    rec(0, &mut exps, &bounds, lms, &mut visit);
    Some(())
}

/// Number of standard monomials of a reduced basis.
pub fn quotient_dimension<F: Field>(basis: &GroebnerBasis<F>) -> QuotientDimension {
    let lms = basis.leading_monomials();
    let mut count = 0u64;
    match for_each_standard_monomial(&lms, basis.ring.nvars(), |_| {
        count += 1;
        true
    }) {
        Some(()) => QuotientDimension::Finite(count),
        None => QuotientDimension::Infinite,
    }
}

/// Explicit list of standard monomials, `None` when infinite.
pub fn standard_monomials<F: Field>(basis: &GroebnerBasis<F>) -> Option<Vec<Monomial>> {
    let lms = basis.leading_monomials();
    let mut out = Vec::new();
    for_each_standard_monomial(&lms, basis.ring.nvars(), |e| {
        out.push(Monomial::from_exponents(e));
        true
    })?;
    Some(out)
}

/// Krull dimension: the largest set of variables containing the support of
/// no leading monomial.
pub fn ideal_dimension<F: Field>(basis: &GroebnerBasis<F>) -> Result<usize> {
    if basis.is_unit() {
        return Err(Error::UnitIdeal);
    }
    let n = basis.ring.nvars();
    let supports: Vec<Vec<usize>> = basis
        .leading_monomials()
        .iter()
        .map(|m| (0..n).filter(|&i| m.exponents()[i] > 0).collect())
        .collect();
    let mut chosen = vec![false; n];
    let mut best = 0;
    fn search(k: usize, size: usize, chosen: &mut [bool], supports: &[Vec<usize>], best: &mut usize) {
        let n = chosen.len();
        if size + (n - k) <= *best {
            return;
        }
        if k == n {
            *best = size;
            return;
        }
        chosen[k] = true;
        let ok = supports
            .iter()
            .all(|s| !s.contains(&k) || !s.iter().all(|&v| chosen[v] && v <= k));
        if ok {
            search(k + 1, size + 1, chosen, supports, best);
        }
        chosen[k] = false;
        search(k + 1, size, chosen, supports, best);
    }
    search(0, 0, &mut chosen, &supports, &mut best);
    Ok(best)
}

/// Name of the auxiliary variable adjoined by [`count_with_inequation`].
pub const SATURATION_VAR: &str = "_sat";

/// Number of solutions of `ideal` off the hypersurface `g = 0`, counted with
/// multiplicity: the quotient dimension of `I + <t g - 1>` with `t` fresh.
pub fn count_with_inequation<F: Field>(
    ideal: &IdealPresentation<F>,
    g: &Polynomial<F>,
    config: &GroebnerConfig,
) -> Result<QuotientDimension> {
    g.check_ring(ideal.ring())?;
    if g.is_zero() {
        return Ok(QuotientDimension::Finite(0));
    }
    let order = MonomialOrder::DegRevLex;
    if g.is_constant() {
        let basis = groebner_basis(ideal, order, config)?;
        return Ok(quotient_dimension(&basis));
    }
    let ext = ideal.ring().with_order(order).extended(&[SATURATION_VAR]);
    let t = Polynomial::var_at(&ext, ext.nvars() - 1);
    let mut gens: Vec<Polynomial<F>> = ideal.generators().iter().map(|f| f.extend_to(&ext)).collect();
    gens.push(&(&t * &g.extend_to(&ext)) - &Polynomial::one(&ext));
    let basis = groebner_basis(&IdealPresentation::new(&ext, gens)?, order, config)?;
    Ok(quotient_dimension(&basis))
}
