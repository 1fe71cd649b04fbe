//! Symplectic linear algebra over Q, R (as `f64`) and Z_d.
//!
//! Coordinates are ordered mode by mode, `(q1, p1, q2, p2, ...)`, for both
//! phase-space points and the coefficient vectors of quadrature functionals,
//! so a functional evaluates as `coeffs . m + constant`. The form is
//! block-diagonal with block `[[0, 1], [-1, 0]]` per mode, giving
//! `<q_i, p_i> = {q_i, p_i} = 1`.

mod affine;
mod enumerate;
mod generators;
mod serde_impl;
mod subspace;

pub use affine::{is_symplectic, AffineSymplecticMap};
pub use enumerate::{enumerate_lagrangian, lagrangian_count, ENUMERATION_LIMIT};
pub use generators::{decompose_symplectic, random_symplectic, symplectic_completion, SymplecticGenerator};
pub use subspace::Subspace;

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Kind, Scalar};

/// A point `(q1, p1, ..., qn, pn)` of phase space.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpacePoint {
    coords: Vec<Scalar>,
}

impl PhaseSpacePoint {
    pub fn new(coords: Vec<Scalar>) -> Result<Self> {
        if coords.is_empty() || !coords.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch { expected: coords.len() + coords.len() % 2, found: coords.len() });
        }
        Kind::of_all(&coords)?;
        Ok(PhaseSpacePoint { coords })
    }

    pub fn from_i64(kind: Kind, coords: &[i64]) -> Result<Self> {
        Self::new(coords.iter().map(|&x| kind.from_i64(x)).collect())
    }

    pub fn origin(kind: Kind, n: usize) -> Self {
        PhaseSpacePoint { coords: vec![kind.zero(); 2 * n] }
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    pub fn modes(&self) -> usize {
        self.coords.len() / 2
    }

    pub fn kind(&self) -> Kind {
        self.coords[0].kind()
    }

    pub fn add(&self, other: &PhaseSpacePoint) -> Result<PhaseSpacePoint> {
        self.check(other)?;
        Ok(PhaseSpacePoint { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &PhaseSpacePoint) -> Result<PhaseSpacePoint> {
        self.check(other)?;
        Ok(PhaseSpacePoint { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect() })
    }

    pub fn scale(&self, s: &Scalar) -> PhaseSpacePoint {
        PhaseSpacePoint { coords: self.coords.iter().map(|x| x * s).collect() }
    }

    fn check(&self, other: &PhaseSpacePoint) -> Result<()> {
        if self.coords.len() != other.coords.len() {
            return Err(Error::DimensionMismatch { expected: self.coords.len(), found: other.coords.len() });
        }
        if self.kind() != other.kind() {
            return Err(Error::KindMismatch);
        }
        Ok(())
    }
}

impl fmt::Display for PhaseSpacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `f = sum_i a_i q_i + b_i p_i + c`, stored as `coeffs = (a1, b1, ...)` and
/// `constant = c`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureFunctional {
    coeffs: Vec<Scalar>,
    constant: Scalar,
}

impl QuadratureFunctional {
    pub fn new(coeffs: Vec<Scalar>, constant: Scalar) -> Result<Self> {
        if coeffs.is_empty() || !coeffs.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch { expected: coeffs.len() + coeffs.len() % 2, found: coeffs.len() });
        }
        if Kind::of_all(coeffs.iter().chain(std::iter::once(&constant)))?.is_none() {
            return Err(Error::KindMismatch);
        }
        Ok(QuadratureFunctional { coeffs, constant })
    }

    pub fn linear(coeffs: Vec<Scalar>) -> Result<Self> {
        let kind = coeffs.first().map(Scalar::kind).ok_or(Error::DimensionMismatch { expected: 2, found: 0 })?;
        Self::new(coeffs, kind.zero())
    }

    pub fn from_i64(kind: Kind, coeffs: &[i64], constant: i64) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| kind.from_i64(x)).collect(), kind.from_i64(constant))
    }

    /// The position quadrature `q_mode` on `n` modes.
    pub fn q(kind: Kind, n: usize, mode: usize) -> Self {
        let mut coeffs = vec![kind.zero(); 2 * n];
        coeffs[2 * mode] = kind.one();
        QuadratureFunctional { coeffs, constant: kind.zero() }
    }

    /// The momentum quadrature `p_mode` on `n` modes.
    pub fn p(kind: Kind, n: usize, mode: usize) -> Self {
        let mut coeffs = vec![kind.zero(); 2 * n];
        coeffs[2 * mode + 1] = kind.one();
        QuadratureFunctional { coeffs, constant: kind.zero() }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn constant(&self) -> &Scalar {
        &self.constant
    }

    pub fn modes(&self) -> usize {
        self.coeffs.len() / 2
    }

    pub fn kind(&self) -> Kind {
        self.constant.kind()
    }

    pub fn is_linear_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    /// `f(m) = coeffs . m + constant`.
    pub fn evaluate(&self, m: &PhaseSpacePoint) -> Result<Scalar> {
        if m.coords().len() != self.coeffs.len() {
            return Err(Error::DimensionMismatch { expected: self.coeffs.len(), found: m.coords().len() });
        }
        if m.kind() != self.kind() {
            return Err(Error::KindMismatch);
        }
        Ok(crate::scalar::dot(&self.coeffs, m.coords()) + &self.constant)
    }
}

/// The standard symplectic form on `n` modes over a given field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SymplecticForm {
    pub n: usize,
    pub kind: Kind,
}

impl SymplecticForm {
    pub fn new(n: usize, kind: Kind) -> Self {
        SymplecticForm { n, kind }
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// The `2n x 2n` matrix `J`, block-diagonal with `[[0, 1], [-1, 0]]`.
    pub fn matrix(&self) -> Matrix {
        let k = self.kind;
        Matrix::from_fn(k, 2 * self.n, 2 * self.n, |r, c| {
            if r / 2 != c / 2 {
                k.zero()
            } else if r % 2 == 0 && c % 2 == 1 {
                k.one()
            } else if r % 2 == 1 && c % 2 == 0 {
                -k.one()
            } else {
                k.zero()
            }
        })
    }

    /// `x^T J y` evaluated mode by mode. Callers guarantee matching lengths.
    pub fn eval(x: &[Scalar], y: &[Scalar]) -> Scalar {
        debug_assert_eq!(x.len(), y.len());
        let mut acc = x[0].kind().zero();
        for i in 0..x.len() / 2 {
            acc = acc + &x[2 * i] * &y[2 * i + 1] - &x[2 * i + 1] * &y[2 * i];
        }
        acc
    }
}

fn check_pair(f: &QuadratureFunctional, g: &QuadratureFunctional) -> Result<()> {
    if f.coeffs.len() != g.coeffs.len() {
        return Err(Error::DimensionMismatch { expected: f.coeffs.len(), found: g.coeffs.len() });
    }
    if f.kind() != g.kind() {
        return Err(Error::KindMismatch);
    }
    Ok(())
}

/// `<f, g> = f^T J g`, computed with the explicit form matrix. Constants are
/// ignored.
pub fn symplectic_product(f: &QuadratureFunctional, g: &QuadratureFunctional) -> Result<Scalar> {
    check_pair(f, g)?;
    let j = SymplecticForm::new(f.modes(), f.kind()).matrix();
    let jg = j.mul_vec(&g.coeffs)?;
    Ok(crate::scalar::dot(&f.coeffs, &jg))
}

/// The Poisson bracket `sum_i df/dq_i dg/dp_i - df/dp_i dg/dq_i` of two
/// affine functionals, read off from their partial derivatives. It is
/// constant over phase space.
pub fn poisson_bracket_oracle(f: &QuadratureFunctional, g: &QuadratureFunctional) -> Result<Scalar> {
    check_pair(f, g)?;
    let d_dq = |h: &QuadratureFunctional, i: usize| h.coeffs[2 * i].clone();
    let d_dp = |h: &QuadratureFunctional, i: usize| h.coeffs[2 * i + 1].clone();
    let mut acc = f.kind().zero();
    for i in 0..f.modes() {
        acc = acc + d_dq(f, i) * d_dp(g, i) - d_dq(g, i) * d_dp(f, i);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Prime;

    #[test]
    fn canonical_bracket() {
        let k = Kind::Rational;
        let q = QuadratureFunctional::q(k, 1, 0);
        let p = QuadratureFunctional::p(k, 1, 0);
        assert!(symplectic_product(&q, &p).unwrap().is_one());
        assert!(symplectic_product(&q, &q).unwrap().is_zero());
        assert!(poisson_bracket_oracle(&q, &p).unwrap().is_one());
        assert!(poisson_bracket_oracle(&q, &q).unwrap().is_zero());
    }

    #[test]
    fn two_mode_hand_expansion() {
        // f = q1 + p2, g = p1 + q2: 1*1 - 1*1 = 0
        let k = Kind::Rational;
        let f = QuadratureFunctional::from_i64(k, &[1, 0, 0, 1], 0).unwrap();
        let g = QuadratureFunctional::from_i64(k, &[0, 1, 1, 0], 0).unwrap();
        assert!(poisson_bracket_oracle(&f, &g).unwrap().is_zero());
        assert!(symplectic_product(&f, &g).unwrap().is_zero());
    }

    #[test]
    fn errors() {
        let k = Kind::Rational;
        let f1 = QuadratureFunctional::q(k, 1, 0);
        let f2 = QuadratureFunctional::q(k, 2, 0);
        assert!(matches!(symplectic_product(&f1, &f2), Err(Error::DimensionMismatch { .. })));
        let z = QuadratureFunctional::q(Kind::Zd(Prime::new(3).unwrap()), 1, 0);
        assert_eq!(symplectic_product(&f1, &z), Err(Error::KindMismatch));
        assert!(QuadratureFunctional::new(vec![k.one(), Kind::Float.one()], k.zero()).is_err());
    }

    #[test]
    fn form_matrix_properties() {
        let form = SymplecticForm::new(3, Kind::Rational);
        let j = form.matrix();
        assert_eq!(j.transpose(), j.scale(&-Kind::Rational.one()));
        let jj = j.mul(&j).unwrap();
        assert_eq!(jj, Matrix::identity(Kind::Rational, 6).scale(&-Kind::Rational.one()));
    }

    #[test]
    fn evaluation_uses_plain_dot_product() {
        let k = Kind::Rational;
        let f = QuadratureFunctional::from_i64(k, &[2, 3], 5).unwrap();
        let m = PhaseSpacePoint::from_i64(k, &[1, -1]).unwrap();
        assert_eq!(f.evaluate(&m).unwrap(), k.from_i64(4));
    }
}
