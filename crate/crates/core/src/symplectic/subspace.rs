use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Kind, Scalar};

use super::SymplecticForm;

/// A linear subspace stored by its reduced row-echelon basis, so equal
/// subspaces have identical representations (exactly for Q and Z_d).
#[derive(Clone, PartialEq)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) {:?}", self.dim(), self.ambient_dim(), self.basis)
    }
}

impl Subspace {
    /// Span of the rows of `generators`.
    pub fn from_matrix(generators: &Matrix) -> Self {
        let (basis, pivots) = generators.rref();
        Subspace { basis, pivots }
    }

    pub fn span(kind: Kind, ambient_dim: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        Ok(Self::from_matrix(&Matrix::from_rows(kind, ambient_dim, vectors)?))
    }

    pub fn zero(kind: Kind, ambient_dim: usize) -> Self {
        Self::from_matrix(&Matrix::zeros(kind, 0, ambient_dim))
    }

    pub fn full(kind: Kind, ambient_dim: usize) -> Self {
        Self::from_matrix(&Matrix::identity(kind, ambient_dim))
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn kind(&self) -> Kind {
        self.basis.kind()
    }

    /// Coordinates of `v` in the canonical basis if `v` lies in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if v.len() != self.ambient_dim() {
            return None;
        }
        let coords: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (c, row) in coords.iter().zip(self.basis.rows()) {
            for (r, b) in residual.iter_mut().zip(row) {
                *r = &*r - &(c * b);
            }
        }
        residual.iter().all(Scalar::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.rows().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        Ok(Self::from_matrix(&self.basis.vstack(&other.basis)?))
    }

    /// Euclidean annihilator `{x : b . x = 0 for every basis row b}`.
    pub fn annihilator(&self) -> Subspace {
        Self::from_matrix(&self.basis.kernel())
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    /// Image of the subspace under the linear map `m` (acting on columns).
    pub fn image(&self, m: &Matrix) -> Result<Subspace> {
        Ok(Self::from_matrix(&m.mul(&self.basis.transpose())?.transpose()))
    }

    /// `{x : x^T F y = 0 for all y in W}` for an arbitrary bilinear form `F`.
    pub fn orthogonal_wrt(&self, form: &Matrix) -> Result<Subspace> {
        // y^T F x = 0 for each basis row y  <=>  (B F) x = 0
        Ok(Self::from_matrix(&self.basis.mul(form)?.kernel()))
    }

    pub fn is_isotropic_wrt(&self, form: &Matrix) -> Result<bool> {
        let gram = self.basis.mul(form)?.mul(&self.basis.transpose())?;
        Ok(gram.is_zero())
    }

    /// Isotropic and of half the ambient dimension; `form` must be
    /// nondegenerate.
    pub fn is_lagrangian_wrt(&self, form: &Matrix) -> Result<bool> {
        Ok(2 * self.dim() == self.ambient_dim() && self.is_isotropic_wrt(form)?)
    }

    fn form(&self) -> Matrix {
        SymplecticForm::new(self.ambient_dim() / 2, self.kind()).matrix()
    }

    /// The omega-orthogonal complement `{x : <x, y> = 0 for all y in W}`.
    pub fn omega_complement(&self) -> Subspace {
        self.orthogonal_wrt(&self.form()).expect("square form of matching size")
    }

    pub fn is_isotropic(&self) -> bool {
        self.basis.rows().enumerate().all(|(i, a)| {
            self.basis.rows().skip(i + 1).all(|b| SymplecticForm::eval(a, b).is_zero())
        })
    }

    pub fn is_lagrangian(&self) -> bool {
        2 * self.dim() == self.ambient_dim() && self.is_isotropic()
    }

    /// Approximate equality for float subspaces; exact for other kinds.
    pub fn approx_eq(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.pivots == other.pivots && self.basis.approx_eq(&other.basis)
    }

    pub(crate) fn check_ambient(&self, dim: usize) -> Result<()> {
        if self.ambient_dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: self.ambient_dim() });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Prime;

    fn span_i64(kind: Kind, dim: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::span(kind, dim, rows.iter().map(|r| r.iter().map(|&x| kind.from_i64(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn line_in_plane_is_self_orthogonal() {
        let w = span_i64(Kind::Rational, 2, &[&[1, 0]]);
        assert_eq!(w.omega_complement(), w);
        assert!(w.is_lagrangian());
    }

    #[test]
    fn full_space_complement_is_zero() {
        let w = Subspace::full(Kind::Rational, 4);
        assert_eq!(w.omega_complement().dim(), 0);
        assert!(!w.is_isotropic());
    }

    #[test]
    fn positions_are_lagrangian() {
        let w = span_i64(Kind::Rational, 4, &[&[1, 0, 0, 0], &[0, 0, 1, 0]]);
        assert!(w.is_lagrangian());
        let qp = span_i64(Kind::Rational, 2, &[&[1, 0], &[0, 1]]);
        assert!(!qp.is_isotropic());
    }

    #[test]
    fn canonical_form_identifies_equal_spans() {
        let k = Kind::Zd(Prime::new(5).unwrap());
        let a = span_i64(k, 4, &[&[1, 2, 0, 0], &[0, 0, 1, 3]]);
        let b = span_i64(k, 4, &[&[1, 2, 1, 3], &[2, 4, 3, 4]]);
        assert_eq!(a, b);
    }

    #[test]
    fn intersection_and_sum() {
        let k = Kind::Rational;
        let a = span_i64(k, 4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let b = span_i64(k, 4, &[&[0, 1, 0, 0], &[0, 0, 1, 0]]);
        assert_eq!(a.intersection(&b).unwrap(), span_i64(k, 4, &[&[0, 1, 0, 0]]));
        assert_eq!(a.sum(&b).unwrap().dim(), 3);
    }

    #[test]
    fn coordinates_in_canonical_basis() {
        let k = Kind::Rational;
        let a = span_i64(k, 4, &[&[1, 0, 2, 0], &[0, 1, 0, 3]]);
        let v: Vec<Scalar> = [2, 5, 4, 15].iter().map(|&x| k.from_i64(x)).collect();
        assert_eq!(a.coordinates(&v).unwrap(), vec![k.from_i64(2), k.from_i64(5)]);
        let w: Vec<Scalar> = [1, 0, 0, 0].iter().map(|&x| k.from_i64(x)).collect();
        assert!(a.coordinates(&w).is_none());
    }
}
