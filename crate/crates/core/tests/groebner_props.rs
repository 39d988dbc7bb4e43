//! Randomized invariants of the Gröbner engine.

use std::sync::Arc;

use eddeg_core::groebner::{s_polynomial, standard_monomials};
use eddeg_core::linalg::Matrix;
use eddeg_core::{
    groebner_basis, quotient_dimension, Field, GroebnerConfig, IdealPresentation, Monomial,
    MonomialOrder, Polynomial, PrimeField, QuotientDimension, Ring,
};
use proptest::prelude::*;

const P: u64 = 32003;

fn ring(order: MonomialOrder) -> Arc<Ring<PrimeField>> {
    Ring::new(&["x", "y", "z"], PrimeField::new(P).unwrap(), order)
}

fn build(r: &Arc<Ring<PrimeField>>, terms: &[((u16, u16, u16), i64)]) -> Polynomial<PrimeField> {
    let raw = terms
        .iter()
        .map(|&((a, b, c), k)| (Monomial::from_exponents(&[a, b, c]), r.field().from_i64(k)))
        .collect();
    Polynomial::from_terms(r, raw)
}

fn arb_terms(max_deg: u16) -> impl Strategy<Value = Vec<((u16, u16, u16), i64)>> {
    let mono = (0..=max_deg, 0..=max_deg, 0..=max_deg).prop_filter("total degree", move |&(a, b, c)| a + b + c <= max_deg);
    proptest::collection::vec((mono, -50i64..50), 1..5)
}

fn arb_ideal() -> impl Strategy<Value = Vec<Vec<((u16, u16, u16), i64)>>> {
    proptest::collection::vec(arb_terms(2), 1..4)
}

fn arb_order() -> impl Strategy<Value = MonomialOrder> {
    prop_oneof![
        Just(MonomialOrder::DegRevLex),
        Just(MonomialOrder::Lex),
        Just(MonomialOrder::Block(1)),
        Just(MonomialOrder::Block(2)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn basis_is_closed_under_s_polynomials(gens in arb_ideal(), order in arb_order()) {
        let r = ring(order);
        let polys: Vec<_> = gens.iter().map(|g| build(&r, g)).collect();
        prop_assume!(polys.iter().any(|p| !p.is_zero()));
        let ideal = IdealPresentation::new(&r, polys.clone()).unwrap();
        let basis = groebner_basis(&ideal, order, &GroebnerConfig::default()).unwrap();
        for (i, f) in basis.elements().iter().enumerate() {
            for g in &basis.elements()[i + 1..] {
                prop_assert!(basis.normal_form(&s_polynomial(f, g)).unwrap().is_zero());
            }
        }
        for p in &polys {
            prop_assert!(basis.normal_form(p).unwrap().is_zero());
        }
    }

    #[test]
    fn normal_form_is_idempotent_and_reduced(gens in arb_ideal(), f in arb_terms(3)) {
        let r = ring(MonomialOrder::DegRevLex);
        let polys: Vec<_> = gens.iter().map(|g| build(&r, g)).collect();
        prop_assume!(polys.iter().any(|p| !p.is_zero()));
        let basis = groebner_basis(&IdealPresentation::new(&r, polys).unwrap(), MonomialOrder::DegRevLex, &GroebnerConfig::default()).unwrap();
        let f = build(&r, &f);
        let nf = basis.normal_form(&f).unwrap();
        prop_assert_eq!(&basis.normal_form(&nf).unwrap(), &nf);
        // no term of the remainder is divisible by a leading monomial
        let lms = basis.leading_monomials();
        for t in nf.terms() {
            prop_assert!(lms.iter().all(|m| !m.divides(&t.mono)));
        }
        // f - nf lies in the ideal
        prop_assert!(basis.normal_form(&(&f - &nf)).unwrap().is_zero());
    }

    #[test]
    fn multiples_reduce_to_zero(gens in arb_ideal(), m in arb_terms(2)) {
        let r = ring(MonomialOrder::DegRevLex);
        let polys: Vec<_> = gens.iter().map(|g| build(&r, g)).collect();
        prop_assume!(polys.iter().any(|p| !p.is_zero()));
        let basis = groebner_basis(&IdealPresentation::new(&r, polys.clone()).unwrap(), MonomialOrder::DegRevLex, &GroebnerConfig::default()).unwrap();
        let m = build(&r, &m);
        let combo = polys.iter().fold(Polynomial::zero(&r), |acc, p| &acc + &(&m * p));
        prop_assert!(basis.normal_form(&combo).unwrap().is_zero());
    }

    #[test]
    fn quotient_dimension_is_order_independent(roots in proptest::collection::vec((-20i64..20, -20i64..20, -20i64..20), 1..4), noise in arb_terms(1)) {
        // ideal of finitely many points, perturbed by a random element of it
        let r0 = ring(MonomialOrder::DegRevLex);
        let x = |i| Polynomial::var_at(&r0, i);
        let c = |k: i64| Polynomial::from_i64(&r0, k);
        let mut gens = vec![Polynomial::one(&r0); 3];
        for &(a, b, cc) in &roots {
            gens[0] = &gens[0] * &(&x(0) - &c(a));
            gens[1] = &gens[1] * &(&x(1) - &c(b));
            gens[2] = &gens[2] * &(&x(2) - &c(cc));
        }
        let extra = &build(&r0, &noise) * &gens[0];
        gens.push(&gens[1] + &extra);
        let mut dims = Vec::new();
        for order in [MonomialOrder::DegRevLex, MonomialOrder::Lex, MonomialOrder::Block(1), MonomialOrder::Block(2)] {
            let r = ring(order);
            let moved: Vec<_> = gens.iter().map(|g| g.with_order(&r).unwrap()).collect();
            let basis = groebner_basis(&IdealPresentation::new(&r, moved).unwrap(), order, &GroebnerConfig::default()).unwrap();
            let dim = quotient_dimension(&basis);
            if let QuotientDimension::Finite(d) = dim {
                prop_assert_eq!(standard_monomials(&basis).unwrap().len() as u64, d);
            }
            dims.push(dim);
        }
        prop_assert!(dims.windows(2).all(|w| w[0] == w[1]));
        // (f(x), g(y), h(z)) has dimension deg f * deg g * deg h
        let k = roots.len() as u64;
        prop_assert_eq!(dims[0], QuotientDimension::Finite(k * k * k));
    }

    #[test]
    fn linear_systems_follow_rank(rows in proptest::collection::vec(proptest::collection::vec(-5i64..6, 4), 1..5)) {
        let f = PrimeField::new(P).unwrap();
        let r = ring(MonomialOrder::DegRevLex);
        let polys: Vec<_> = rows
            .iter()
            .map(|row| {
                (0..3).fold(Polynomial::from_i64(&r, row[3]), |acc, j| {
                    acc.add_scaled(&Polynomial::var_at(&r, j), &f.from_i64(row[j]))
                })
            })
            .filter(|p| !p.is_zero())
            .collect();
        prop_assume!(!polys.is_empty());
        let coeffs = Matrix::from_rows(&f, rows.iter().map(|row| row[..3].iter().map(|&v| f.from_i64(v)).collect()).collect());
        let augmented = Matrix::from_rows(&f, rows.iter().map(|row| row.iter().map(|&v| f.from_i64(v)).collect()).collect());
        let basis = groebner_basis(&IdealPresentation::new(&r, polys).unwrap(), MonomialOrder::DegRevLex, &GroebnerConfig::default()).unwrap();
        let expected = if augmented.rank() > coeffs.rank() {
            QuotientDimension::Finite(0)
        } else if coeffs.rank() == 3 {
            QuotientDimension::Finite(1)
        } else {
            QuotientDimension::Infinite
        };
        prop_assert_eq!(quotient_dimension(&basis), expected);
        prop_assert_eq!(basis.is_unit(), augmented.rank() > coeffs.rank());
    }
}
