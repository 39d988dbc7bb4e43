//! Local Milnor numbers and reduced Euler characteristics of the Milnor
//! fibers of the singularity types met along the strata of `D_Q`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, RationalField};
use crate::groebner::{groebner_basis, quotient_dimension, GroebnerConfig, IdealPresentation, QuotientDimension};
use crate::monomial::{Monomial, MonomialOrder};
use crate::parse::parse_poly;
use crate::poly::{Polynomial, Ring};

/// Largest power of the maximal ideal tried before giving up.
pub const MILNOR_CAP: u32 = 30;

fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, left: u32, prefix: &mut Vec<u16>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == nvars {
            prefix.push(left as u16);
            out.push(Monomial::from_exponents(prefix));
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e as u16);
            rec(nvars, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars > 0 {
        rec(nvars, degree, &mut Vec::new(), &mut out);
    }
    out
}

/// `dim O / (J(f) + m^N)` for the Jacobian ideal at the origin.
fn truncated_quotient<F: Field>(grads: &[Polynomial<F>], degree: u32, config: &GroebnerConfig) -> Result<u64> {
    let ring = grads[0].ring();
    let one = ring.field().one();
    let mut gens = grads.to_vec();
    gens.extend(
        monomials_of_degree(ring.nvars(), degree)
            .into_iter()
            .map(|m| Polynomial::monomial(ring, m, one.clone())),
    );
    let basis = groebner_basis(&IdealPresentation::new(ring, gens)?, MonomialOrder::DegRevLex, config)?;
    match quotient_dimension(&basis) {
        QuotientDimension::Finite(d) => Ok(d),
        QuotientDimension::Infinite => Err(Error::Internal("m-primary ideal with infinite quotient".into())),
    }
}

/// Milnor number of `f` at `point`: the stable value of
/// `dim O / (J(f) + m^N)` as `N` grows, once two consecutive values agree.
pub fn milnor_number<F: Field>(f: &Polynomial<F>, point: &[F::Elem], config: &GroebnerConfig) -> Result<u64> {
    let ring = f.ring();
    if point.len() != ring.nvars() {
        return Err(Error::InvalidArgument(format!(
            "point has {} coordinates, expected {}",
            point.len(),
            ring.nvars()
        )));
    }
    let shift: Vec<Polynomial<F>> = (0..ring.nvars())
        .map(|i| &Polynomial::var_at(ring, i) + &Polynomial::constant(ring, point[i].clone()))
        .collect();
    let local = f.substitute_images(ring, &shift);
    let grads: Vec<Polynomial<F>> = (0..ring.nvars()).map(|i| local.diff_at(i)).collect();
    let mut previous = truncated_quotient(&grads, 1, config)?;
    for degree in 2..=MILNOR_CAP {
        let current = truncated_quotient(&grads, degree, config)?;
        if current == previous {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::NotIsolated(MILNOR_CAP))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MilnorTag {
    Smooth,
    Node,
    Umbrella,
    Triple,
}

impl MilnorTag {
    pub const ALL: [MilnorTag; 4] = [MilnorTag::Smooth, MilnorTag::Node, MilnorTag::Umbrella, MilnorTag::Triple];
}

impl fmt::Display for MilnorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MilnorTag::Smooth => "smooth",
            MilnorTag::Node => "node",
            MilnorTag::Umbrella => "umbrella",
            MilnorTag::Triple => "triple",
        })
    }
}

impl FromStr for MilnorTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MilnorTag::ALL
            .into_iter()
            .find(|t| t.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown singularity model `{s}`")))
    }
}

/// Local model of a hypersurface germ in `C^3`.
#[derive(Clone, Debug)]
pub struct MilnorModel {
    pub tag: MilnorTag,
    pub equation: Polynomial<RationalField>,
}

fn model_ring() -> Arc<Ring<RationalField>> {
    Ring::new(&["x", "y", "z"], RationalField, MonomialOrder::DegRevLex)
}

impl MilnorModel {
    pub fn new(tag: MilnorTag) -> Self {
        let text = match tag {
            MilnorTag::Smooth => "x",
            MilnorTag::Node => "x*y",
            MilnorTag::Umbrella => "x*y^2 - z^2",
            MilnorTag::Triple => "x^2*y^2 + x^2*z^2 + y^2*z^2 - x^2*y^2*z^2",
        };
        MilnorModel {
            tag,
            equation: parse_poly(text, &model_ring()).expect("fixed model equation"),
        }
    }
}

/// The same polynomial in the ring of the variables it actually uses.
fn restrict_to_support(f: &Polynomial<RationalField>) -> Polynomial<RationalField> {
    let support = f.support();
    let names: Vec<&str> = support.iter().map(|&i| f.ring().vars()[i].as_str()).collect();
    let ring = Ring::new(&names, RationalField, MonomialOrder::DegRevLex);
    let raw = f
        .terms()
        .iter()
        .map(|t| {
            let exps: Vec<u16> = support.iter().map(|&i| t.mono.exponents()[i]).collect();
            (Monomial::from_exponents(&exps), t.coeff.clone())
        })
        .collect();
    Polynomial::from_terms(&ring, raw)
}

/// Reduced Euler characteristic of the Milnor fiber of a germ that has an
/// isolated singularity in the `k` variables it depends on (a product of
/// that fiber with a disc otherwise): `(-1)^(k-1) mu`.
fn isolated_reduced_chi(f: &Polynomial<RationalField>, config: &GroebnerConfig) -> Result<i64> {
    let g = restrict_to_support(f);
    let k = g.ring().nvars();
    let origin = vec![RationalField.zero(); k];
    let mu = milnor_number(&g, &origin, config)? as i64;
    Ok(if k % 2 == 1 { mu } else { -mu })
}

/// Reduced Euler characteristic of the local Milnor fiber at the origin.
pub fn model_fiber_chi(model: &MilnorModel) -> Result<i64> {
    let config = GroebnerConfig::default();
    match model.tag {
        MilnorTag::Smooth | MilnorTag::Node => isolated_reduced_chi(&model.equation, &config),
        MilnorTag::Umbrella => {
            // (x, y, z) -> (x, y) is a double cover of C^2 branched along
            // xy^2 = t, a copy of C*
            let chi_plane = 1;
            let chi_branch = 0;
            Ok(2 * chi_plane - chi_branch - 1)
        }
        MilnorTag::Triple => {
            // squaring the coordinates is 8:1 onto the fiber of
            // xy + xz + yz - xyz, branched over punctured discs
            let ring = model_ring();
            let base = parse_poly("x*y + x*z + y*z - x*y*z", &ring)?;
            let chi_base = 1 + isolated_reduced_chi(&base, &config)?;
            Ok(8 * chi_base - 1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    fn mu(text: &str) -> u64 {
        let r = model_ring();
        let f = parse_poly(text, &r).unwrap();
        milnor_number(&f, &[Rational::from(0), Rational::from(0), Rational::from(0)], &GroebnerConfig::default())
            .unwrap()
    }

    #[test]
    fn milnor_numbers() {
        assert_eq!(mu("x*y + x*z + y*z - x*y*z"), 1);
        assert_eq!(mu("x^2 + y^2 + z^2"), 1);
        assert_eq!(mu("x^3 + y^3 + z^3"), 8);
        assert_eq!(mu("x^2 + y^3 + z^4"), 6);
        assert_eq!(mu("x + y^2"), 0);
    }

    #[test]
    fn milnor_at_shifted_point() {
        let r = model_ring();
        let f = parse_poly("(x - 1)^3 + (y + 2)^2 + z^2", &r).unwrap();
        let p = [Rational::from(1), Rational::from(-2), Rational::from(0)];
        assert_eq!(milnor_number(&f, &p, &GroebnerConfig::default()).unwrap(), 2);
    }

    #[test]
    fn non_isolated_is_reported() {
        let r = model_ring();
        let f = parse_poly("x*y", &r).unwrap();
        let origin = [Rational::from(0), Rational::from(0), Rational::from(0)];
        assert!(matches!(
            milnor_number(&f, &origin, &GroebnerConfig::default()),
            Err(Error::NotIsolated(MILNOR_CAP))
        ));
    }

    #[test]
    fn fiber_characteristics() {
        assert_eq!(model_fiber_chi(&MilnorModel::new(MilnorTag::Smooth)).unwrap(), 0);
        assert_eq!(model_fiber_chi(&MilnorModel::new(MilnorTag::Node)).unwrap(), -1);
        assert_eq!(model_fiber_chi(&MilnorModel::new(MilnorTag::Umbrella)).unwrap(), 1);
        assert_eq!(model_fiber_chi(&MilnorModel::new(MilnorTag::Triple)).unwrap(), 15);
    }

    #[test]
    fn tags_parse() {
        assert_eq!("TRIPLE".parse::<MilnorTag>().unwrap(), MilnorTag::Triple);
        assert!("cusp".parse::<MilnorTag>().is_err());
    }
}
