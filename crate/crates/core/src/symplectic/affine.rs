use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Kind, Scalar};

use super::{PhaseSpacePoint, SymplecticForm};

/// `S^T J S == J`, exactly for Q and Z_d and within `FLOAT_TOL` for floats.
pub fn is_symplectic(s: &Matrix) -> bool {
    if s.nrows() != s.ncols() || !s.nrows().is_multiple_of(2) {
        return false;
    }
    let j = SymplecticForm::new(s.nrows() / 2, s.kind()).matrix();
    match s.transpose().mul(&j).and_then(|t| t.mul(s)) {
        Ok(sjs) => sjs.approx_eq(&j),
        Err(_) => false,
    }
}

/// The affine symplectic map `m -> S m + a`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineSymplecticMap {
    linear: Matrix,
    shift: PhaseSpacePoint,
}

impl AffineSymplecticMap {
    pub fn new(linear: Matrix, shift: PhaseSpacePoint) -> Result<Self> {
        if linear.nrows() != shift.coords().len() {
            return Err(Error::DimensionMismatch { expected: linear.nrows(), found: shift.coords().len() });
        }
        if linear.kind() != shift.kind() {
            return Err(Error::KindMismatch);
        }
        if !is_symplectic(&linear) {
            return Err(Error::NonSymplectic);
        }
        Ok(AffineSymplecticMap { linear, shift })
    }

    pub fn linear(linear: Matrix) -> Result<Self> {
        let n = linear.nrows() / 2;
        let kind = linear.kind();
        Self::new(linear, PhaseSpacePoint::origin(kind, n.max(1)))
    }

    pub fn identity(kind: Kind, n: usize) -> Self {
        AffineSymplecticMap { linear: Matrix::identity(kind, 2 * n), shift: PhaseSpacePoint::origin(kind, n) }
    }

    pub fn displacement(shift: PhaseSpacePoint) -> Self {
        let kind = shift.kind();
        AffineSymplecticMap { linear: Matrix::identity(kind, shift.coords().len()), shift }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.linear
    }

    pub fn shift(&self) -> &PhaseSpacePoint {
        &self.shift
    }

    pub fn modes(&self) -> usize {
        self.shift.modes()
    }

    pub fn kind(&self) -> Kind {
        self.linear.kind()
    }

    pub fn apply(&self, m: &PhaseSpacePoint) -> Result<PhaseSpacePoint> {
        if m.kind() != self.kind() {
            return Err(Error::KindMismatch);
        }
        let sm = PhaseSpacePoint::new(self.linear.mul_vec(m.coords())?)?;
        sm.add(&self.shift)
    }

    /// `next . self`, i.e. `(S2 S1, S2 a1 + a2)`.
    pub fn then(&self, next: &AffineSymplecticMap) -> Result<AffineSymplecticMap> {
        let linear = next.linear.mul(&self.linear)?;
        let shift = PhaseSpacePoint::new(next.linear.mul_vec(self.shift.coords())?)?.add(&next.shift)?;
        Ok(AffineSymplecticMap { linear, shift })
    }

    pub fn inverse(&self) -> AffineSymplecticMap {
        let inv = self.linear.inverse().expect("symplectic matrices are invertible");
        let minus: Vec<Scalar> = inv.mul_vec(self.shift.coords()).expect("square").iter().map(|x| -x).collect();
        AffineSymplecticMap { linear: inv, shift: PhaseSpacePoint { coords: minus } }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourier_on_q_unit_vector() {
        let k = Kind::Rational;
        let t = AffineSymplecticMap::linear(SymplecticForm::new(1, k).matrix()).unwrap();
        let m = PhaseSpacePoint::from_i64(k, &[1, 0]).unwrap();
        assert_eq!(t.apply(&m).unwrap(), PhaseSpacePoint::from_i64(k, &[0, -1]).unwrap());
    }

    #[test]
    fn identity_fixes_points() {
        let k = Kind::Rational;
        let m = PhaseSpacePoint::from_i64(k, &[3, -2, 7, 1]).unwrap();
        assert_eq!(AffineSymplecticMap::identity(k, 2).apply(&m).unwrap(), m);
    }

    #[test]
    fn non_symplectic_rejected() {
        let k = Kind::Rational;
        let s = Matrix::from_i64(k, &[&[2, 0], &[0, 1]]);
        assert_eq!(AffineSymplecticMap::linear(s), Err(Error::NonSymplectic));
    }

    #[test]
    fn composition_rule() {
        let k = Kind::Rational;
        let shear = Matrix::from_i64(k, &[&[1, 0], &[2, 1]]);
        let t1 = AffineSymplecticMap::new(shear, PhaseSpacePoint::from_i64(k, &[1, 1]).unwrap()).unwrap();
        let t2 = AffineSymplecticMap::new(
            SymplecticForm::new(1, k).matrix(),
            PhaseSpacePoint::from_i64(k, &[0, 5]).unwrap(),
        )
        .unwrap();
        let m = PhaseSpacePoint::from_i64(k, &[4, -3]).unwrap();
        let seq = t2.apply(&t1.apply(&m).unwrap()).unwrap();
        assert_eq!(t1.then(&t2).unwrap().apply(&m).unwrap(), seq);
        let back = t1.inverse().apply(&t1.apply(&m).unwrap()).unwrap();
        assert_eq!(back, m);
    }
}
