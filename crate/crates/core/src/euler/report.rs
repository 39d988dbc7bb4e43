//! Rows of the Euler characteristic table.

use serde::Serialize;

use crate::error::Result;

use super::chain::{chi_dinfty, chi_dq, chi_dq_cap_dinfty, chi_smooth_member, chi_yn, ed_degree_via_euler};
use super::chow::{scalar_to_i64, PointCount, Scalar};

pub const COLUMNS: [&str; 7] = ["n", "chi_Y", "chi_Dprime", "chi_DQ", "chi_Dinf", "chi_DQ_cap_Dinf", "EDdeg"];

/// One row; values are integers for a concrete `n` and polynomials in `n`
/// otherwise, rendered as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum EulerRow {
    Concrete {
        n: u64,
        chi_y: i64,
        chi_dprime: i64,
        chi_dq: i64,
        chi_dinf: i64,
        chi_dq_cap_dinf: i64,
        ed_degree: i64,
    },
    Symbolic {
        n: String,
        chi_y: String,
        chi_dprime: String,
        chi_dq: String,
        chi_dinf: String,
        chi_dq_cap_dinf: String,
        ed_degree: String,
    },
}

fn values(points: PointCount) -> Result<[Scalar; 6]> {
    Ok([
        chi_yn(points)?,
        chi_smooth_member(points)?,
        chi_dq(points)?,
        chi_dinfty(points),
        chi_dq_cap_dinfty(points),
        ed_degree_via_euler(points)?,
    ])
}

pub fn euler_row(points: PointCount) -> Result<EulerRow> {
    let v = values(points)?;
    Ok(match points {
        PointCount::Concrete(n) => EulerRow::Concrete {
            n,
            chi_y: scalar_to_i64(&v[0])?,
            chi_dprime: scalar_to_i64(&v[1])?,
            chi_dq: scalar_to_i64(&v[2])?,
            chi_dinf: scalar_to_i64(&v[3])?,
            chi_dq_cap_dinf: scalar_to_i64(&v[4])?,
            ed_degree: scalar_to_i64(&v[5])?,
        },
        PointCount::Symbolic => EulerRow::Symbolic {
            n: "n".into(),
            chi_y: v[0].to_string(),
            chi_dprime: v[1].to_string(),
            chi_dq: v[2].to_string(),
            chi_dinf: v[3].to_string(),
            chi_dq_cap_dinf: v[4].to_string(),
            ed_degree: v[5].to_string(),
        },
    })
}

impl EulerRow {
    pub fn cells(&self) -> Vec<String> {
        match self {
            EulerRow::Concrete {
                n,
                chi_y,
                chi_dprime,
                chi_dq,
                chi_dinf,
                chi_dq_cap_dinf,
                ed_degree,
            } => vec![
                n.to_string(),
                chi_y.to_string(),
                chi_dprime.to_string(),
                chi_dq.to_string(),
                chi_dinf.to_string(),
                chi_dq_cap_dinf.to_string(),
                ed_degree.to_string(),
            ],
            EulerRow::Symbolic {
                n,
                chi_y,
                chi_dprime,
                chi_dq,
                chi_dinf,
                chi_dq_cap_dinf,
                ed_degree,
            } => vec![
                n.clone(),
                chi_y.clone(),
                chi_dprime.clone(),
                chi_dq.clone(),
                chi_dinf.clone(),
                chi_dq_cap_dinf.clone(),
                ed_degree.clone(),
            ],
        }
    }
}

/// Header plus one tab-separated line per row.
pub fn to_tsv(rows: &[EulerRow]) -> String {
    let mut out = COLUMNS.join("\t");
    out.push('\n');
    for row in rows {
        out.push_str(&row.cells().join("\t"));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_rows() {
        let rows: Vec<EulerRow> = (2..=3).map(|n| euler_row(PointCount::Concrete(n)).unwrap()).collect();
        let tsv = to_tsv(&rows);
        let lines: Vec<&str> = tsv.lines().collect();
        assert_eq!(lines[0], "n\tchi_Y\tchi_Dprime\tchi_DQ\tchi_Dinf\tchi_DQ_cap_Dinf\tEDdeg");
        assert_eq!(lines[1], "2\t8\t24\t14\t6\t6\t6");
        assert_eq!(lines[2], "3\t10\t108\t54\t7\t4\t47");
        let sym = euler_row(PointCount::Symbolic).unwrap();
        assert_eq!(sym.cells()[6], "9/2*n^3 - 21/2*n^2 + 8*n - 4");
    }
}
