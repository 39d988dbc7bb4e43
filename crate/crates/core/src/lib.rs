//! Exact computation of Euclidean distance degrees.
//!
//! Two independent routes are provided. The symbolic route builds critical
//! ideals (conormal minors for implicit varieties, cleared gradient equations
//! for parametrized ones) and counts their solutions with a Buchberger-based
//! Gröbner engine over a prime field or the rationals. The topological route
//! evaluates the Euler characteristic chain for the affine multiview variety
//! in the Chow ring of the blowup of projective 3-space at the camera centers.

pub mod critical;
pub mod error;
pub mod euler;
pub mod field;
pub mod groebner;
pub mod linalg;
pub mod monomial;
pub mod multiview;
pub mod parse;
pub mod poly;

pub use critical::{
    conormal_ideal, ed_critical_ideal, ed_degree, linear_critical_count, parametric_critical_system, parse_variety,
    CountField, CountProtocol, EdCertificate, ImplicitVariety, LinearChoice, LinearFunctional, ParametricVariety,
    VarietyPresentation,
};
pub use error::{Error, Result};
pub use field::{Field, FieldElement, Fp, PrimeField, Rational, RationalField, DEFAULT_PRIME};
pub use groebner::{
    count_with_inequation, groebner_basis, ideal_dimension, normal_form, quotient_dimension, GroebnerBasis,
    GroebnerConfig, IdealPresentation, QuotientDimension,
};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::{parse_poly, parse_poly_file};
pub use poly::{Polynomial, Ring};
