//! Dense matrices over [`Scalar`] with Gaussian elimination.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{Kind, Scalar};

#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    kind: Kind,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix<{}>({} x {})", self.kind, self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(kind: Kind, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, kind, data: vec![kind.zero(); rows * cols] }
    }

    pub fn identity(kind: Kind, n: usize) -> Self {
        let mut m = Self::zeros(kind, n, n);
        for i in 0..n {
            m[(i, i)] = kind.one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries of `kind`.
    pub fn from_rows(kind: Kind, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
            }
            if row.iter().any(|s| s.kind() != kind) {
                return Err(Error::KindMismatch);
            }
            data.extend(row);
        }
        Ok(Matrix { rows: nrows, cols, kind, data })
    }

    pub fn from_i64(kind: Kind, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows.iter().map(|r| r.iter().map(|&x| kind.from_i64(x)).collect()).collect();
        Self::from_rows(kind, cols, rows).expect("rectangular integer matrix")
    }

    pub fn from_fn(kind: Kind, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, kind, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Scalar]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn set_column(&mut self, c: usize, values: &[Scalar]) {
        for (r, v) in values.iter().enumerate() {
            self[(r, c)] = v.clone();
        }
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.kind, self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        if self.kind != rhs.kind {
            return Err(Error::KindMismatch);
        }
        let mut out = Matrix::zeros(self.kind, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() && self.kind.is_exact() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let t = a * &rhs[(k, j)];
                    let cell = &mut out[(i, j)];
                    *cell = &*cell + &t;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = self.kind.zero();
                for (a, x) in self.row(r).iter().zip(v) {
                    acc = acc + a * x;
                }
                acc
            })
            .collect())
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { data: self.data.iter().map(|x| x * s).collect(), ..self.clone() }
    }

    pub fn add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.zip_with(rhs, |a, b| a - b)
    }

    fn zip_with(&self, rhs: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, found: rhs.rows * rhs.cols });
        }
        if self.kind != rhs.kind {
            return Err(Error::KindMismatch);
        }
        Ok(Matrix { data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(), ..self.clone() })
    }

    /// All entries zero (within `FLOAT_TOL` for floats).
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn approx_eq(&self, other: &Matrix) -> bool {
        self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// Block-diagonal matrix built from square or rectangular blocks.
    pub fn block_diag(kind: Kind, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(kind, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out[(r0 + r, c0 + c)] = b[(r, c)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, kind: self.kind, data })
    }

    /// Reduced row-echelon form with the pivot column of each nonzero row.
    /// Zero rows are dropped. Floats use partial pivoting.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..m.cols {
            if lead == m.rows {
                break;
            }
            let pick = if m.kind.is_exact() {
                (lead..m.rows).find(|&r| !m[(r, c)].is_zero())
            } else {
                (lead..m.rows)
                    .filter(|&r| !m[(r, c)].is_zero())
                    .max_by(|&a, &b| m[(a, c)].magnitude().total_cmp(&m[(b, c)].magnitude()))
            };
            let Some(p) = pick else { continue };
            m.swap_rows(lead, p);
            let inv = m[(lead, c)].inv().expect("nonzero pivot");
            for j in 0..m.cols {
                m[(lead, j)] = &m[(lead, j)] * &inv;
            }
            for r in 0..m.rows {
                if r == lead || m[(r, c)].is_zero() {
                    continue;
                }
                let factor = m[(r, c)].clone();
                for j in 0..m.cols {
                    let t = &factor * &m[(lead, j)];
                    m[(r, j)] = &m[(r, j)] - &t;
                }
            }
            // pin eliminated entries so float noise cannot resurrect them
            for r in 0..m.rows {
                m[(r, c)] = if r == lead { m.kind.one() } else { m.kind.zero() };
            }
            pivots.push(c);
            lead += 1;
        }
        m.data.truncate(lead * m.cols);
        m.rows = lead;
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{x : A x = 0}`, one vector per row.
    pub fn kernel(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(self.kind, free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            out[(k, f)] = self.kind.one();
            for (i, &p) in pivots.iter().enumerate() {
                out[(k, p)] = -&r[(i, f)];
            }
        }
        out
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.kind, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug[(r, c)] = self[(r, c)].clone();
            }
            aug[(r, n + r)] = self.kind.one();
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Matrix::from_fn(self.kind, n, n, |r, c| red[(r, n + c)].clone()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(|r| r.iter().map(Scalar::to_f64).collect()).collect()
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
    use crate::scalar::Prime;

    #[test]
    fn rref_and_kernel_over_q() {
        let k = Kind::Rational;
        let m = Matrix::from_i64(k, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let (r, piv) = m.rref();
        assert_eq!(piv, vec![0, 1]);
        assert_eq!(r.nrows(), 2);
        let ker = m.kernel();
        assert_eq!(ker.nrows(), 1);
        let prod = m.mul(&ker.transpose()).unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn inverse_over_zd() {
        let k = Kind::Zd(Prime::new(7).unwrap());
        let m = Matrix::from_i64(k, &[&[2, 1], &[5, 3]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(k, 2));
        let singular = Matrix::from_i64(k, &[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn float_rank_tolerates_noise() {
        let k = Kind::Float;
        let m = Matrix::from_rows(
            k,
            2,
            vec![
                vec![Scalar::Float(1.0), Scalar::Float(2.0)],
                vec![Scalar::Float(0.5), Scalar::Float(1.0 + 1e-15)],
            ],
        )
        .unwrap();
        assert_eq!(m.rank(), 1);
    }
}
