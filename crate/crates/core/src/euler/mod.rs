//! Topological route: Euler characteristics of the compactified multiview
//! variety `Y_n` (P^3 blown up at the `n` camera centers), of its boundary
//! pieces, and the ED degree as the signed Euler characteristic of the
//! affine part off a general quadric.

pub mod chain;
pub mod chow;
pub mod milnor;
pub mod report;

pub use chain::{
    chern_total_yn, chi_dinfty, chi_dq, chi_dq_cap_dinfty, chi_smooth_member, chi_smooth_member_with, chi_yn,
    class_of_dq, class_of_dq_in, ed_degree_via_euler, infinity_census, second_chern_of_member, ExceptionalSign,
    InfinityCurve, StratumRow, StratumTable,
};
pub use chow::{
    chow_integrate, scalar, scalar_to_i64, symbol_n, symbol_ring, ChernSeries, ChowClass, ChowRing, PointCount,
    Scalar,
};
pub use milnor::{milnor_number, model_fiber_chi, MilnorModel, MilnorTag, MILNOR_CAP};
pub use report::{euler_row, to_tsv, EulerRow, COLUMNS};
