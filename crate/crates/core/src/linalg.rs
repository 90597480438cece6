//! Dense matrices over a [`Scalar`] field.
//!
//! Rank uses fraction-free (Bareiss) elimination; rational rows are first
//! scaled to integers so every intermediate stays integral. Kernels come from
//! exact Gauss-Jordan reduction. Neither routine is available for `float64`.

use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::scalars::{FieldConfig, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    field: FieldConfig,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: FieldConfig, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![Scalar::zero(field); rows * cols],
        }
    }

    pub fn identity(field: FieldConfig, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one(field);
        }
        m
    }

    pub fn from_rows(field: FieldConfig, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data: Vec<Scalar> = rows.into_iter().flatten().collect();
        if let Some(bad) = data.iter().find(|s| s.field() != field) {
            return Err(Error::FieldMismatch(field.to_string(), bad.field().to_string()));
        }
        Ok(Matrix {
            field,
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn field(&self) -> FieldConfig {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(Scalar::to_f64).collect())
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, row: &[Scalar]) -> Result<Vec<Scalar>> {
        if row.len() != self.rows {
            return Err(Error::Dimension(format!("row of length {} against {} rows", row.len(), self.rows)));
        }
        let mut out = vec![Scalar::zero(self.field); self.cols];
        for (r, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = &*o + &(x * &self[(r, c)]);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// First entry (row-major) where the two matrices differ beyond `tol`.
    /// `tol` is ignored for exact fields.
    pub fn first_mismatch(&self, other: &Matrix, tol: f64) -> Result<Option<(usize, usize)>> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("shape mismatch".into()));
        }
        for r in 0..self.rows {
            for c in 0..self.cols {
                if !self[(r, c)].approx_eq(&other[(r, c)], tol)? {
                    return Ok(Some((r, c)));
                }
            }
        }
        Ok(None)
    }

    fn require_exact(&self) -> Result<()> {
        if self.field.is_exact() {
            Ok(())
        } else {
            Err(Error::InexactComparison)
        }
    }

    /// Rows rescaled so rational entries become integers (row space unchanged).
    fn integral_rows(&self) -> Vec<Vec<Scalar>> {
        let mut rows = self.to_rows();
        if self.field == FieldConfig::Rational {
            for row in &mut rows {
                let lcm = row
                    .iter()
                    .filter_map(Scalar::as_rational)
                    .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
                let scale = Scalar::Rational(BigRational::from_integer(lcm));
                for x in row.iter_mut() {
                    *x = &*x * &scale;
                }
            }
        }
        rows
    }

    /// Fraction-free (Bareiss) row echelon form: the nonzero rows and their
    /// pivot columns. Row operations only, so the kernel is unchanged.
    fn echelon(&self) -> Result<(Vec<Vec<Scalar>>, Vec<usize>)> {
        self.require_exact()?;
        let mut m = self.integral_rows();
        let (rows, cols) = (self.rows, self.cols);
        let mut prev = Scalar::one(self.field);
        let mut pivots = Vec::new();
        for c in 0..cols {
            let r = pivots.len();
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, piv);
            for i in r + 1..rows {
                for j in c + 1..cols {
                    let v = &(&m[r][c] * &m[i][j]) - &(&m[i][c] * &m[r][j]);
                    m[i][j] = v.checked_div(&prev)?;
                }
                m[i][c] = Scalar::zero(self.field);
            }
            prev = m[r][c].clone();
            pivots.push(c);
        }
        m.truncate(pivots.len());
        Ok((m, pivots))
    }

    /// Exact rank by Bareiss elimination.
    pub fn rank(&self) -> Result<usize> {
        Ok(self.echelon()?.1.len())
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> Result<(Matrix, Vec<usize>)> {
        self.require_exact()?;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, piv);
            let inv = m[(r, c)].inv()?;
            for j in c..self.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..self.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let factor = m[(i, c)].clone();
                    for j in c..self.cols {
                        let v = &m[(i, j)] - &(&factor * &m[(r, j)]);
                        m[(i, j)] = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok((m, pivots))
    }

    /// Basis of `{x : M x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Result<Vec<Vec<Scalar>>> {
        Ok(self.rank_and_nullspace()?.1)
    }

    /// Rank and kernel basis from a single elimination.
    pub fn rank_and_nullspace(&self) -> Result<(usize, Vec<Vec<Scalar>>)> {
        let (e, pivots) = self.echelon()?;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![Scalar::zero(self.field); self.cols];
                v[fc] = Scalar::one(self.field);
                for (k, &pc) in pivots.iter().enumerate().rev() {
                    let mut acc = Scalar::zero(self.field);
                    for j in pc + 1..self.cols {
                        if !v[j].is_zero() && !e[k][j].is_zero() {
                            acc = &acc + &(&e[k][j] * &v[j]);
                        }
                    }
                    v[pc] = (-acc).checked_div(&e[k][pc])?;
                }
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()
            .map(|basis| (pivots.len(), basis))
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Result<Option<Matrix>> {
        if self.rows != self.cols {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Scalar::one(self.field);
        }
        let (red, pivots) = aug.rref()?;
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = red[(i, n + j)].clone();
            }
        }
        Ok(Some(inv))
    }

    /// Determinant by cofactor expansion along the first row; small matrices only.
    pub fn determinant(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::Dimension("determinant of a non-square matrix".into()));
        }
        Ok(cofactor_det(&self.to_rows(), self.field))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

fn cofactor_det(rows: &[Vec<Scalar>], field: FieldConfig) -> Scalar {
    match rows.len() {
        0 => Scalar::one(field),
        1 => rows[0][0].clone(),
        n => {
            let mut acc = Scalar::zero(field);
            for c in 0..n {
                let minor: Vec<Vec<Scalar>> = rows[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &rows[0][c] * &cofactor_det(&minor, field);
                acc = if c % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        Scalar::from_i64(FieldConfig::Rational, v)
    }

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            FieldConfig::Rational,
            rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(Matrix::identity(FieldConfig::Rational, 5).rank().unwrap(), 5);
        assert_eq!(mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]).rank().unwrap(), 2);
        assert_eq!(mat(&[&[0, 0], &[0, 0]]).rank().unwrap(), 0);
        // zero first column forces a skipped pivot column
        assert_eq!(mat(&[&[0, 1, 2], &[0, 2, 5], &[0, 3, 7]]).rank().unwrap(), 2);
    }

    #[test]
    fn rank_with_fractions_and_prime() {
        let half = Scalar::from_fraction(FieldConfig::Rational, 1, 2).unwrap();
        let m = Matrix::from_rows(
            FieldConfig::Rational,
            vec![vec![half.clone(), q(1)], vec![q(1), q(2)]],
        )
        .unwrap();
        assert_eq!(m.rank().unwrap(), 1);
        let f = FieldConfig::prime(101).unwrap();
        let s = |v| Scalar::from_i64(f, v);
        // det = 1*103 - 2*1 = 101 = 0 mod 101
        let m = Matrix::from_rows(f, vec![vec![s(1), s(2)], vec![s(1), s(103)]]).unwrap();
        assert_eq!(m.rank().unwrap(), 1);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = mat(&[&[1, 2, 3, 4], &[2, 4, 7, 9]]);
        let ns = m.nullspace().unwrap();
        assert_eq!(ns.len(), 2);
        for v in ns {
            let col = Matrix::from_rows(FieldConfig::Rational, v.into_iter().map(|x| vec![x]).collect()).unwrap();
            assert!(m.mul(&col).unwrap().is_zero());
        }
    }

    #[test]
    fn inverse_and_determinant() {
        let m = mat(&[&[2, 1], &[7, 4]]);
        let inv = m.inverse().unwrap().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(FieldConfig::Rational, 2));
        assert_eq!(m.determinant().unwrap(), q(1));
        assert!(mat(&[&[1, 2], &[2, 4]]).inverse().unwrap().is_none());
    }

    #[test]
    fn float_rank_refused() {
        let m = Matrix::identity(FieldConfig::Float64, 2);
        assert_eq!(m.rank(), Err(Error::InexactComparison));
    }
}
