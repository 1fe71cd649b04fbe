use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Entrywise tolerance for operator identities.
pub const OPERATOR_TOL: f64 = 1e-10;

/// A dense complex square matrix with cached structural flags.
#[derive(Clone, Debug)]
pub struct DenseOperator {
    entries: Array2<C64>,
    unitary: bool,
    projector: bool,
}

impl DenseOperator {
    pub fn new(entries: Array2<C64>) -> Result<Self> {
        let (r, c) = entries.dim();
        if r != c {
            return Err(Error::DimensionMismatch { expected: r, found: c });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(DenseOperator { entries, unitary: false, projector: false })
    }

    pub(crate) fn new_unchecked(entries: Array2<C64>, unitary: bool, projector: bool) -> Self {
        DenseOperator { entries, unitary, projector }
    }

    pub fn identity(dim: usize) -> Self {
        DenseOperator { entries: Array2::eye(dim), unitary: true, projector: true }
    }

    pub fn zeros(dim: usize) -> Self {
        DenseOperator { entries: Array2::zeros((dim, dim)), unitary: false, projector: true }
    }

    /// `|ψ⟩⟨ψ|` for a normalized `ψ`.
    pub fn pure(psi: &[C64]) -> Self {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let dim = psi.len();
        let entries = Array2::from_shape_fn((dim, dim), |(r, c)| psi[r] * psi[c].conj() / (norm * norm));
        DenseOperator { entries, unitary: false, projector: true }
    }

    /// A Hermitian matrix with entries uniform in the unit square.
    pub fn random_hermitian(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = Array2::<C64>::zeros((dim, dim));
        for r in 0..dim {
            m[(r, r)] = C64::new(rng.random_range(-1.0..1.0), 0.0);
            for c in r + 1..dim {
                let z = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(r, c)] = z;
                m[(c, r)] = z.conj();
            }
        }
        DenseOperator::new_unchecked(m, false, false)
    }

    /// A random density operator `G G† / Tr(G G†)`.
    pub fn random_density(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Array2::from_shape_fn((dim, dim), |_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let m = g.dot(&g.t().mapv(|z| z.conj()));
        let tr: C64 = m.diag().sum();
        DenseOperator::new_unchecked(m / tr, false, false)
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> Array2<C64> {
        self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn unitary_flag(&self) -> bool {
        self.unitary
    }

    pub fn projector_flag(&self) -> bool {
        self.projector
    }

    /// Sets the unitary flag after checking `‖U†U − I‖_max`.
    pub fn mark_unitary(mut self) -> Result<Self> {
        if !self.is_unitary(OPERATOR_TOL) {
            return Err(Error::NotUnitary);
        }
        self.unitary = true;
        Ok(self)
    }

    /// Sets the projector flag after checking idempotence and hermiticity.
    pub fn mark_projector(mut self) -> Result<Self> {
        if !self.is_projector(OPERATOR_TOL) {
            return Err(Error::NotProjector);
        }
        self.projector = true;
        Ok(self)
    }

    pub fn adjoint(&self) -> Self {
        DenseOperator {
            entries: self.entries.t().mapv(|z| z.conj()),
            unitary: self.unitary,
            projector: self.projector,
        }
    }

    pub fn matmul(&self, rhs: &DenseOperator) -> Self {
        DenseOperator::new_unchecked(self.entries.dot(&rhs.entries), self.unitary && rhs.unitary, false)
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &DenseOperator) -> Self {
        let out = u.entries.dot(&self.entries).dot(&u.entries.t().mapv(|z| z.conj()));
        DenseOperator::new_unchecked(out, false, self.projector && u.unitary)
    }

    pub fn add(&self, rhs: &DenseOperator) -> Self {
        DenseOperator::new_unchecked(&self.entries + &rhs.entries, false, false)
    }

    pub fn sub(&self, rhs: &DenseOperator) -> Self {
        DenseOperator::new_unchecked(&self.entries - &rhs.entries, false, false)
    }

    pub fn scale(&self, s: C64) -> Self {
        let unitary = self.unitary && (s.norm() - 1.0).abs() < 1e-14;
        DenseOperator::new_unchecked(&self.entries * s, unitary, false)
    }

    pub fn trace(&self) -> C64 {
        self.entries.diag().sum()
    }

    /// `max |a_ij|`.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &DenseOperator) -> f64 {
        self.entries.iter().zip(other.entries.iter()).fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn approx_eq(&self, other: &DenseOperator, tol: f64) -> bool {
        self.dim() == other.dim() && self.max_abs_diff(other) < tol
    }

    /// `min_φ ‖self − e^{iφ} other‖_max`, with `φ` fixed by the largest
    /// entry of `other`.
    pub fn phase_distance(&self, other: &DenseOperator) -> f64 {
        if self.dim() != other.dim() {
            return f64::INFINITY;
        }
        let (idx, pivot) = other
            .entries
            .indexed_iter()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .map(|(i, z)| (i, *z))
            .expect("non-empty");
        if pivot.norm() == 0.0 {
            return self.max_abs();
        }
        let ratio = self.entries[idx] / pivot;
        if ratio.norm() == 0.0 {
            return self.max_abs_diff(other);
        }
        let phase = ratio / ratio.norm();
        self.max_abs_diff(&other.scale(phase))
    }

    pub fn eq_up_to_phase(&self, other: &DenseOperator, tol: f64) -> bool {
        self.phase_distance(other) < tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|r| (r..n).all(|c| (self.entries[(r, c)] - self.entries[(c, r)].conj()).norm() < tol))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint().matmul(self).approx_eq(&DenseOperator::identity(self.dim()), tol)
    }

    pub fn is_projector(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && self.matmul(self).approx_eq(self, tol)
    }

    pub fn commutes_with(&self, other: &DenseOperator, tol: f64) -> bool {
        self.matmul(other).approx_eq(&other.matmul(self), tol)
    }

    /// Numerical rank by Gaussian elimination with partial pivoting.
    pub fn rank(&self, tol: f64) -> usize {
        let mut m = self.entries.clone();
        let (rows, cols) = m.dim();
        let mut rank = 0;
        for c in 0..cols {
            if rank == rows {
                break;
            }
            let (pivot, best) = (rank..rows)
                .map(|r| (r, m[(r, c)].norm()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .expect("non-empty range");
            if best < tol {
                continue;
            }
            for k in 0..cols {
                m.swap((rank, k), (pivot, k));
            }
            let inv = C64::new(1.0, 0.0) / m[(rank, c)];
            for r in rank + 1..rows {
                let factor = m[(r, c)] * inv;
                if factor.norm() == 0.0 {
                    continue;
                }
                for k in c..cols {
                    let sub = factor * m[(rank, k)];
                    m[(r, k)] -= sub;
                }
            }
            rank += 1;
        }
        rank
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_are_checked() {
        let h = DenseOperator::random_hermitian(4, 1);
        assert!(h.is_hermitian(1e-14));
        assert!(h.clone().mark_unitary().is_err());
        assert!(h.mark_projector().is_err());
        let psi = [C64::new(1.0, 0.0), C64::new(0.0, 1.0)];
        let p = DenseOperator::pure(&psi);
        assert!(p.is_projector(1e-14));
        assert_eq!(p.rank(1e-9), 1);
        assert!((p.trace().re - 1.0).abs() < 1e-14);
    }

    #[test]
    fn phase_comparison() {
        let u = DenseOperator::random_hermitian(3, 2);
        let phase = C64::from_polar(1.0, 0.7);
        assert!(u.scale(phase).eq_up_to_phase(&u, 1e-12));
        assert!(!u.scale(C64::new(2.0, 0.0)).eq_up_to_phase(&u, 1e-3));
    }

    #[test]
    fn random_density_is_state() {
        let rho = DenseOperator::random_density(5, 3);
        assert!(rho.is_hermitian(1e-12));
        assert!((rho.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert_eq!(rho.rank(1e-9), 5);
    }
}
