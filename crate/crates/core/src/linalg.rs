//! Small dense linear algebra over a field, and minors of polynomial matrices.

use std::fmt;

use crate::field::{Field, FieldElement};
use crate::poly::Polynomial;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix {
            field: field.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.field.zero();
                for k in 0..self.cols {
                    acc = acc.add_ref(&self.get(i, k).mul_ref(other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a.add_ref(b)).collect(),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a.mul_ref(c)).collect(),
        }
    }

    pub fn apply(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(self.field.zero(), |acc, (a, b)| acc.add_ref(&a.mul_ref(b)))
            })
            .collect()
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in 0..m.cols {
                let v = m.get(r, j).mul_ref(&inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in 0..m.cols {
                    let v = m.get(i, j).sub_ref(&f.mul_ref(m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn determinant(&self) -> F::Elem {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut m = self.clone();
        let n = self.rows;
        let mut det = self.field.one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return self.field.zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = det.neg_ref();
            }
            let pivot = m.get(c, c).clone();
            det = det.mul_ref(&pivot);
            let inv = pivot.inv().unwrap();
            for i in c + 1..n {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).mul_ref(&inv);
                for j in c..n {
                    let v = m.get(i, j).sub_ref(&f.mul_ref(m.get(c, j)));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, self.field.one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    /// Basis of the right null space.
    pub fn kernel(&self) -> Vec<Vec<F::Elem>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = r.get(row, f).neg_ref();
                }
                v
            })
            .collect()
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries((0..self.rows).map(|i| self.row(i))).finish()
    }
}

/// Whether two vectors are proportional (both assumed nonzero).
pub fn proportional<C: FieldElement>(a: &[C], b: &[C]) -> bool {
    let Some(k) = a.iter().position(|x| !x.is_zero()) else {
        return b.iter().all(|x| x.is_zero());
    };
    if b[k].is_zero() {
        return false;
    }
    let ratio = b[k].div_ref(&a[k]).unwrap();
    a.iter().zip(b).all(|(x, y)| x.mul_ref(&ratio) == *y)
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Determinant of a square polynomial matrix by cofactor expansion along the
/// first row.
pub fn poly_determinant<F: Field>(m: &[Vec<Polynomial<F>>]) -> Polynomial<F> {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n), "square matrix expected");
    if n == 1 {
        return m[0][0].clone();
    }
    if n == 2 {
        return &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
    }
    let mut acc = Polynomial::zero(m[0][0].ring());
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let sub: Vec<Vec<Polynomial<F>>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * &poly_determinant(&sub);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// All `k x k` minors of a polynomial matrix, rows and columns in
/// lexicographic order.
pub fn poly_minors<F: Field>(m: &[Vec<Polynomial<F>>], k: usize) -> Vec<Polynomial<F>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for rs in combinations(rows, k) {
        for cs in combinations(cols, k) {
            let sub: Vec<Vec<Polynomial<F>>> = rs
                .iter()
                .map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect())
                .collect();
            out.push(poly_determinant(&sub));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Rational, RationalField};
    use crate::monomial::MonomialOrder;
    use crate::parse::parse_poly;
    use crate::poly::Ring;

    fn q(v: i64) -> Rational {
        Rational::from(v)
    }

    fn mat(rows: &[&[i64]]) -> Matrix<RationalField> {
        Matrix::from_rows(&RationalField, rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect())
    }

    #[test]
    fn determinant_and_inverse() {
        let m = mat(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(m.determinant(), q(18));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(&RationalField, 3));
        let singular = mat(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.determinant(), q(0));
        assert!(singular.inverse().is_none());
        assert_eq!(singular.rank(), 1);
    }

    #[test]
    fn kernel_of_camera() {
        let cam = mat(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0]]);
        let k = cam.kernel();
        assert_eq!(k, vec![vec![q(0), q(0), q(0), q(1)]]);
        assert!(cam.apply(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn proportionality() {
        assert!(proportional(&[q(1), q(2)], &[q(3), q(6)]));
        assert!(!proportional(&[q(1), q(2)], &[q(3), q(5)]));
        assert!(!proportional(&[q(0), q(2)], &[q(1), q(2)]));
    }

    #[test]
    fn combination_counts() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(2, 3).len(), 0);
    }

    #[test]
    fn polynomial_minors() {
        let r = Ring::new(&["x", "y"], RationalField, MonomialOrder::DegRevLex);
        let p = |s: &str| parse_poly(s, &r).unwrap();
        let m = vec![vec![p("x"), p("y"), p("1")], vec![p("1"), p("x"), p("y")], vec![p("y"), p("1"), p("x")]];
        let det = poly_determinant(&m);
        assert_eq!(det, p("x^3 + y^3 + 1 - 3*x*y"));
        assert_eq!(poly_minors(&m, 2).len(), 9);
        assert_eq!(poly_minors(&m, 3), vec![det]);
    }
}
