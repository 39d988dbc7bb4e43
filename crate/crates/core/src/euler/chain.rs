//! Euler characteristics along the chain `Y_n`, `D'`, `D_Q`, `D_inf`,
//! `D_Q ∩ D_inf`, and the ED degree they add up to.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::combinations;

use super::chow::{chow_integrate, scalar, ChernSeries, ChowClass, ChowRing, PointCount, Scalar};
use super::milnor::{model_fiber_chi, MilnorModel, MilnorTag};

/// Sign in front of the exceptional divisors in the class of `D_Q`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExceptionalSign {
    /// `2n H - 2 sum E_i`, the pullback of lines through the centers.
    #[default]
    Minus,
    /// `2n H + 2 sum E_i`.
    Plus,
}

/// `(1 + H)^4 + sum_i [(1 + E_i)(1 - E_i)^3 - 1]`.
pub fn chern_total_yn(points: PointCount) -> ChernSeries {
    let ring = ChowRing::new(points);
    let one = ChowClass::one(&ring);
    let h = ChowClass::hyperplane(&ring);
    let blowups = ChowClass::sum_over_points(&ring, |e| one.add(e).mul(&one.sub(e).pow(3)).sub(&one));
    ChernSeries::new(one.add(&h).pow(4).add(&blowups)).expect("starts with 1")
}

fn chern_ring(c: &ChernSeries) -> Arc<ChowRing> {
    c.total().ring().clone()
}

/// Gauss-Bonnet on `Y_n`.
pub fn chi_yn(points: PointCount) -> Result<Scalar> {
    chow_integrate(&chern_total_yn(points).c(3))
}

pub fn class_of_dq_in(ring: &Arc<ChowRing>, sign: ExceptionalSign) -> ChowClass {
    let two_n = &ring.points().value() * &scalar(2);
    let e = ChowClass::exceptional_sum(ring).scale(&scalar(2));
    let h = ChowClass::hyperplane(ring).scale(&two_n);
    match sign {
        ExceptionalSign::Minus => h.sub(&e),
        ExceptionalSign::Plus => h.add(&e),
    }
}

/// Class of `D_Q` (and of a general member `D'` of its linear system).
pub fn class_of_dq(points: PointCount) -> ChowClass {
    class_of_dq_in(&ChowRing::new(points), ExceptionalSign::Minus)
}

/// `[c(T_Y) / (1 + D')]_2`, the class pushed forward from `c_2(T_{D'})`
/// before multiplying by `[D']`.
pub fn second_chern_of_member(points: PointCount, sign: ExceptionalSign) -> ChowClass {
    let c = chern_total_yn(points);
    let d = class_of_dq_in(&chern_ring(&c), sign);
    c.div(&ChernSeries::of_line_bundle(&d)).c(2)
}

/// `chi(D') = int [c(T_Y) / (1 + D')]_2 . [D']` with the given sign
/// convention for `[D']`.
pub fn chi_smooth_member_with(points: PointCount, sign: ExceptionalSign) -> Result<Scalar> {
    let c2 = second_chern_of_member(points, sign);
    let d = class_of_dq_in(c2.ring(), sign);
    chow_integrate(&c2.mul(&d))
}

pub fn chi_smooth_member(points: PointCount) -> Result<Scalar> {
    chi_smooth_member_with(points, ExceptionalSign::Minus)
}

/// One family of Whitney strata of `D_Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumRow {
    pub name: &'static str,
    pub model: MilnorTag,
    /// Number of strata of this kind.
    pub count: Scalar,
    /// Reduced Euler characteristic of the Milnor fiber.
    pub mu: i64,
    /// `chi(S \ D')`; unused for the open stratum.
    pub chi_off_member: Option<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratumTable {
    pub points: PointCount,
    pub rows: Vec<StratumRow>,
}

impl StratumTable {
    pub fn new(points: PointCount) -> Result<Self> {
        let n = points.value();
        let ring = ChowRing::new(points);
        let line = ChowClass::hyperplane(&ring).pow(2);
        // a general member meets the line D_inf,i ∩ D_inf,j transversally
        let hits = chow_integrate(&class_of_dq_in(&ring, ExceptionalSign::Minus).mul(&line))?;
        // P^1 minus 4 umbrella points, n - 2 triple points and the hits
        let chi_node_line = &(&(&scalar(2) - &scalar(4)) - &(&n - &scalar(2))) - &hits;
        let mu = |tag| model_fiber_chi(&MilnorModel::new(tag));
        let pairs = points.binomial(2);
        Ok(StratumTable {
            points,
            rows: vec![
                StratumRow {
                    name: "S_0",
                    model: MilnorTag::Smooth,
                    count: scalar(1),
                    mu: mu(MilnorTag::Smooth)?,
                    chi_off_member: None,
                },
                StratumRow {
                    name: "S_ij^0",
                    model: MilnorTag::Node,
                    count: pairs.clone(),
                    mu: mu(MilnorTag::Node)?,
                    chi_off_member: Some(chi_node_line),
                },
                StratumRow {
                    name: "S_ij^1",
                    model: MilnorTag::Umbrella,
                    count: pairs,
                    mu: mu(MilnorTag::Umbrella)?,
                    chi_off_member: Some(scalar(4)),
                },
                StratumRow {
                    name: "S_ijk",
                    model: MilnorTag::Triple,
                    count: points.binomial(3),
                    mu: mu(MilnorTag::Triple)?,
                    chi_off_member: Some(scalar(1)),
                },
            ],
        })
    }

    /// `chi(D') - chi(D_Q) = sum_S mu_S chi(S \ D')`.
    pub fn correction(&self) -> Scalar {
        self.rows.iter().fold(scalar(0), |acc, row| match &row.chi_off_member {
            Some(chi) => &acc + &(&(&row.count * chi) * &scalar(row.mu)),
            None => acc,
        })
    }
}

pub fn chi_dq(points: PointCount) -> Result<Scalar> {
    Ok(&chi_smooth_member(points)? - &StratumTable::new(points)?.correction())
}

/// Euler characteristics of `D_inf,i`, of a pairwise and of a triple
/// intersection; higher intersections are empty.
const DINF_CHI: [i64; 3] = [4, 2, 1];

/// Inclusion-exclusion over the components `D_inf,i`.
pub fn chi_dinfty(points: PointCount) -> Scalar {
    match points {
        PointCount::Concrete(n) => {
            let mut total = 0i64;
            for k in 1..=3usize {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                total += sign * DINF_CHI[k - 1] * combinations(n as usize, k).len() as i64;
            }
            scalar(total)
        }
        PointCount::Symbolic => (1..=3u64).fold(scalar(0), |acc, k| {
            let sign = if k % 2 == 1 { 1 } else { -1 };
            &acc + &(&points.binomial(k) * &scalar(sign * DINF_CHI[k as usize - 1]))
        }),
    }
}

/// A rational curve in `D_Q ∩ D_inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InfinityCurve {
    /// `K_i^+` or `K_i^-`.
    K(usize, bool),
    /// `L_ij`, `i < j`.
    L(usize, usize),
}

/// Curves of `D_Q ∩ D_inf` and the points where two or more of them meet,
/// each point listed with the curves through it.
pub fn infinity_census(n: usize) -> (Vec<InfinityCurve>, Vec<Vec<InfinityCurve>>) {
    let mut curves = Vec::new();
    for i in 0..n {
        curves.push(InfinityCurve::K(i, true));
        curves.push(InfinityCurve::K(i, false));
    }
    for pair in combinations(n, 2) {
        curves.push(InfinityCurve::L(pair[0], pair[1]));
    }
    let line = |i: usize, j: usize| InfinityCurve::L(i.min(j), i.max(j));
    let mut points = Vec::new();
    // K_i^± meets L_ij in one point, and K_i^± misses every other curve
    for i in 0..n {
        for sign in [true, false] {
            for j in (0..n).filter(|&j| j != i) {
                points.push(vec![InfinityCurve::K(i, sign), line(i, j)]);
            }
        }
    }
    // L_ij, L_ik, L_jk pass through one common point
    for t in combinations(n, 3) {
        points.push(vec![line(t[0], t[1]), line(t[0], t[2]), line(t[1], t[2])]);
    }
    (curves, points)
}

/// `chi(D_Q ∩ D_inf)`: a union of `P^1`s glued at finitely many points.
pub fn chi_dq_cap_dinfty(points: PointCount) -> Scalar {
    match points {
        PointCount::Concrete(n) => {
            let (curves, meets) = infinity_census(n as usize);
            let mut through: HashMap<&[InfinityCurve], usize> = HashMap::new();
            for p in &meets {
                *through.entry(p.as_slice()).or_default() += 1;
            }
            debug_assert!(through.values().all(|&c| c == 1), "meeting points are distinct");
            let chi = 2 * curves.len() as i64 - meets.iter().map(|p| p.len() as i64 - 1).sum::<i64>();
            scalar(chi)
        }
        PointCount::Symbolic => {
            let n = points.value();
            let k_curves = &n * &scalar(4);
            let l_curves = &points.binomial(2) * &scalar(2);
            let k_l_points = &(&n * &(&n - &scalar(1))) * &scalar(2);
            let triple_points = &points.binomial(3) * &scalar(2);
            &(&(&k_curves + &l_curves) - &k_l_points) - &triple_points
        }
    }
}

/// `-[chi(Y_n) - chi(D_Q) - chi(D_inf) + chi(D_Q ∩ D_inf)]`.
pub fn ed_degree_via_euler(points: PointCount) -> Result<Scalar> {
    let affine = &(&(&chi_yn(points)? - &chi_dq(points)?) - &chi_dinfty(points)) + &chi_dq_cap_dinfty(points);
    Ok(-&affine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::chow::{scalar_to_i64, symbol_ring};
    use crate::parse::parse_poly;

    fn sym(text: &str) -> Scalar {
        parse_poly(text, &symbol_ring()).unwrap()
    }

    fn at(n: u64, f: impl Fn(PointCount) -> Result<Scalar>) -> i64 {
        scalar_to_i64(&f(PointCount::Concrete(n)).unwrap()).unwrap()
    }

    #[test]
    fn chern_classes_of_blowup() {
        let c = chern_total_yn(PointCount::Symbolic);
        let r = chern_ring(&c);
        let expected_c1 = ChowClass::hyperplane(&r)
            .scale(&scalar(4))
            .sub(&ChowClass::exceptional_sum(&r).scale(&scalar(2)));
        assert_eq!(c.c(1), expected_c1);
        assert_eq!(c.c(2), ChowClass::hyperplane(&r).pow(2).scale(&scalar(6)));
        assert_eq!(chi_yn(PointCount::Symbolic).unwrap(), sym("2*n + 4"));
        assert_eq!(at(1, chi_yn), 6);
        assert_eq!(at(2, chi_yn), 8);
        assert_eq!(at(3, chi_yn), 10);
    }

    #[test]
    fn todd_genus_is_one() {
        // int c_1 c_2 = 24 chi(O) = 24 for a rational threefold
        for points in [PointCount::Concrete(4), PointCount::Symbolic] {
            let c = chern_total_yn(points);
            assert_eq!(chow_integrate(&c.c(1).mul(&c.c(2))).unwrap(), scalar(24));
        }
    }

    #[test]
    fn dq_class() {
        assert_eq!(class_of_dq(PointCount::Concrete(2)).to_string(), "4*H - 2*E1 - 2*E2");
        let r = ChowRing::new(PointCount::Concrete(3));
        let d = class_of_dq_in(&r, ExceptionalSign::Minus);
        let h = ChowClass::hyperplane(&r);
        assert_eq!(chow_integrate(&d.mul(&h.pow(2))).unwrap(), scalar(6));
        // D restricted to E_1 = P^2 is 2h while E_1 restricts to -h
        let e1 = ChowClass::exceptional(&r, 0).unwrap();
        assert_eq!(chow_integrate(&d.mul(&e1.pow(2))).unwrap(), scalar(-2));
        let plus = class_of_dq_in(&r, ExceptionalSign::Plus);
        assert_eq!(chow_integrate(&plus.mul(&e1.pow(2))).unwrap(), scalar(2));
    }

    #[test]
    fn smooth_member() {
        let c2 = second_chern_of_member(PointCount::Symbolic, ExceptionalSign::Minus);
        let r = c2.ring().clone();
        assert_eq!(c2, ChowClass::hyperplane(&r).pow(2).scale(&sym("4*n^2 - 8*n + 6")));
        assert_eq!(chi_smooth_member(PointCount::Symbolic).unwrap(), sym("8*n^3 - 16*n^2 + 12*n"));
        assert_eq!(at(2, chi_smooth_member), 24);
        assert_eq!(at(3, chi_smooth_member), 108);
    }

    #[test]
    fn printed_sign_breaks_cancellation() {
        let c2 = second_chern_of_member(PointCount::Symbolic, ExceptionalSign::Plus);
        assert_eq!(c2.e_coeff(0, 2), &scalar(8));
        assert_eq!(
            chi_smooth_member_with(PointCount::Symbolic, ExceptionalSign::Plus).unwrap(),
            sym("8*n^3 - 16*n^2 + 28*n")
        );
    }

    #[test]
    fn strata() {
        let t = StratumTable::new(PointCount::Symbolic).unwrap();
        let mus: Vec<i64> = t.rows.iter().map(|r| r.mu).collect();
        assert_eq!(mus, vec![0, -1, 1, 15]);
        assert_eq!(t.rows[1].chi_off_member, Some(sym("-3*n")));
        assert_eq!(t.correction(), sym("4*n^3 - 7*n^2 + 3*n"));
        assert_eq!(chi_dq(PointCount::Symbolic).unwrap(), sym("4*n^3 - 9*n^2 + 9*n"));
        assert_eq!(at(2, chi_dq), 14);
        assert_eq!(at(3, chi_dq), 54);
    }

    #[test]
    fn infinity() {
        assert_eq!(chi_dinfty(PointCount::Symbolic), sym("1/6*n^3 - 3/2*n^2 + 16/3*n"));
        assert_eq!(chi_dinfty(PointCount::Concrete(2)), scalar(6));
        assert_eq!(chi_dinfty(PointCount::Concrete(3)), scalar(7));
        assert_eq!(chi_dq_cap_dinfty(PointCount::Symbolic), sym("-1/3*n^3 + 13/3*n"));
        assert_eq!(chi_dq_cap_dinfty(PointCount::Concrete(2)), scalar(6));
        assert_eq!(chi_dq_cap_dinfty(PointCount::Concrete(3)), scalar(4));
    }

    #[test]
    fn concrete_matches_symbolic() {
        for n in 2..=20u64 {
            let q = crate::field::Rational::from(n as i64);
            let p = PointCount::Concrete(n);
            assert_eq!(chi_dinfty(p).constant_coeff(), chi_dinfty(PointCount::Symbolic).evaluate(&[q.clone()]));
            assert_eq!(
                chi_dq_cap_dinfty(p).constant_coeff(),
                chi_dq_cap_dinfty(PointCount::Symbolic).evaluate(&[q])
            );
        }
    }

    #[test]
    fn ed_degree_chain() {
        assert_eq!(
            ed_degree_via_euler(PointCount::Symbolic).unwrap(),
            sym("9/2*n^3 - 21/2*n^2 + 8*n - 4")
        );
        assert_eq!(at(2, ed_degree_via_euler), 6);
        assert_eq!(at(3, ed_degree_via_euler), 47);
    }
}
