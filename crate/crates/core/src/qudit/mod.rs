//! Quantum quadrature subtheory of `n` qudits of odd prime dimension `d`.
//!
//! Basis states `|x_1 … x_n⟩` are indexed with mode 0 as the most
//! significant digit. With `ω = e^{2πi/d}` and `h = 2⁻¹ mod d`,
//!
//! ```text
//! W(q, p)|x⟩ = ω^{−h q p − p x} |x + q⟩
//! ```
//!
//! per mode, which is `τ^{−qp} X^q Z^p` for `X|x⟩ = |x+1⟩`,
//! `Z|x⟩ = ω^{−x}|x⟩` and `τ = ω^h`. Then `W(a)W(b) = τ^{⟨a,b⟩} W(a+b)`.

mod clifford;
mod operator;
mod pvm;

pub use clifford::{affine_clifford, apply_generator, clifford_unitary, generator_unitary};
pub use operator::{DenseOperator, C64, OPERATOR_TOL};
pub use pvm::{joint_pvm, position_pvm, pvms_commute, quadrature_pvm, JointPvm, QuadraturePvm};

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::scalar::{Kind, Prime, Scalar};
use crate::symplectic::PhaseSpacePoint;

/// `n` qudits of dimension `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuditSpace {
    d: Prime,
    n: usize,
}

impl QuditSpace {
    pub fn new(d: u64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        Ok(QuditSpace { d: Prime::new(d)?, n })
    }

    pub fn from_prime(d: Prime, n: usize) -> Self {
        QuditSpace { d, n }
    }

    pub fn prime(&self) -> Prime {
        self.d
    }

    pub fn d(&self) -> u64 {
        self.d.get()
    }

    pub fn modes(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> Kind {
        Kind::Zd(self.d)
    }

    /// Hilbert-space dimension `d^n`.
    pub fn dim(&self) -> usize {
        (self.d() as usize).pow(self.n as u32)
    }

    /// Number of phase-space points `d^{2n}`.
    pub fn phase_space_size(&self) -> usize {
        self.dim() * self.dim()
    }

    /// `ω^k` for `k = 0..d`.
    pub fn omega_powers(&self) -> Vec<C64> {
        let d = self.d() as f64;
        (0..self.d()).map(|k| C64::from_polar(1.0, 2.0 * PI * k as f64 / d)).collect()
    }

    /// Stride of `mode` in the flat basis index.
    pub fn stride(&self, mode: usize) -> usize {
        (self.d() as usize).pow((self.n - 1 - mode) as u32)
    }

    pub fn digits(&self, mut index: usize) -> Vec<u64> {
        let d = self.d() as usize;
        let mut out = vec![0; self.n];
        for slot in out.iter_mut().rev() {
            *slot = (index % d) as u64;
            index /= d;
        }
        out
    }

    pub fn index(&self, digits: &[u64]) -> usize {
        digits.iter().fold(0, |acc, &x| acc * self.d() as usize + x as usize)
    }

    /// Phase-space point number `i` in lexicographic order of
    /// `(q_1, p_1, …, q_n, p_n)`.
    pub fn point(&self, mut i: usize) -> Vec<u64> {
        let d = self.d() as usize;
        let mut out = vec![0; 2 * self.n];
        for slot in out.iter_mut().rev() {
            *slot = (i % d) as u64;
            i /= d;
        }
        out
    }

    pub fn point_index(&self, m: &[u64]) -> usize {
        m.iter().fold(0, |acc, &x| acc * self.d() as usize + x as usize)
    }

    /// `⟨a, b⟩ mod d` on residue vectors.
    pub fn symplectic_product(&self, a: &[u64], b: &[u64]) -> u64 {
        let d = self.d();
        a.chunks(2).zip(b.chunks(2)).fold(0, |acc, (x, y)| (acc + x[0] * y[1] % d + (d - x[1] * y[0] % d)) % d)
    }

    pub(crate) fn check_kind(&self, kind: Kind) -> Result<()> {
        if kind == self.kind() {
            Ok(())
        } else {
            Err(Error::KindMismatch)
        }
    }

    pub(crate) fn check_dim(&self, found: usize) -> Result<()> {
        if found == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), found })
        }
    }
}

/// A phase-space label `a ∈ Z_d^{2n}`, entries reduced.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylLabel(Vec<u64>);

impl WeylLabel {
    pub fn new(space: &QuditSpace, a: &[i64]) -> Result<Self> {
        if a.len() != 2 * space.modes() {
            return Err(Error::DimensionMismatch { expected: 2 * space.modes(), found: a.len() });
        }
        Ok(WeylLabel(a.iter().map(|&x| space.prime().reduce(x)).collect()))
    }

    pub fn from_residues(space: &QuditSpace, a: Vec<u64>) -> Result<Self> {
        let v: Vec<i64> = a.iter().map(|&x| (x % space.d()) as i64).collect();
        Self::new(space, &v)
    }

    pub fn from_point(space: &QuditSpace, m: &PhaseSpacePoint) -> Result<Self> {
        space.check_kind(m.kind())?;
        Self::from_scalars(space, m.coords())
    }

    pub fn from_scalars(space: &QuditSpace, v: &[Scalar]) -> Result<Self> {
        let residues = v.iter().map(|x| x.residue().ok_or(Error::KindMismatch)).collect::<Result<Vec<_>>>()?;
        Self::from_residues(space, residues)
    }

    pub fn residues(&self) -> &[u64] {
        &self.0
    }
}

/// `W(a)` as a phased permutation: `W(a)|x⟩ = ω^{e(x)} |x + q⟩`.
#[derive(Clone, Debug)]
pub struct WeylOperator {
    space: QuditSpace,
    label: WeylLabel,
}

impl WeylOperator {
    pub fn new(space: QuditSpace, label: WeylLabel) -> Self {
        WeylOperator { space, label }
    }

    pub fn label(&self) -> &WeylLabel {
        &self.label
    }

    /// Image index and phase exponent of basis state `x`.
    pub fn act_on_basis(&self, x: usize) -> (usize, u64) {
        let d = self.space.d();
        let h = self.space.prime().half();
        let digits = self.space.digits(x);
        let mut exp = 0u64;
        let mut target = Vec::with_capacity(digits.len());
        for (xi, qp) in digits.iter().zip(self.label.0.chunks(2)) {
            let (q, p) = (qp[0], qp[1]);
            exp = (exp + h * (q * p % d) % d + p * xi % d) % d;
            target.push((xi + q) % d);
        }
        (self.space.index(&target), (d - exp) % d)
    }

    pub fn to_dense(&self) -> DenseOperator {
        let omega = self.space.omega_powers();
        let dim = self.space.dim();
        let mut m = ndarray::Array2::zeros((dim, dim));
        for x in 0..dim {
            let (y, e) = self.act_on_basis(x);
            m[(y, x)] = omega[e as usize];
        }
        DenseOperator::new_unchecked(m, true, false)
    }

    /// `Tr(ρ W(a))` in `O(d^n)`.
    pub fn trace_with(&self, rho: &DenseOperator) -> C64 {
        let omega = self.space.omega_powers();
        let m = rho.entries();
        (0..self.space.dim())
            .map(|x| {
                let (y, e) = self.act_on_basis(x);
                m[(x, y)] * omega[e as usize]
            })
            .sum()
    }
}

/// Dense matrix of `W(a)`.
pub fn weyl(space: &QuditSpace, a: &WeylLabel) -> DenseOperator {
    WeylOperator::new(*space, a.clone()).to_dense()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_labels(space: &QuditSpace) -> Vec<WeylLabel> {
        (0..space.phase_space_size()).map(|i| WeylLabel::from_residues(space, space.point(i)).unwrap()).collect()
    }

    #[test]
    fn rejects_bad_dimension() {
        assert!(QuditSpace::new(4, 1).is_err());
        assert!(QuditSpace::new(2, 1).is_err());
        assert!(QuditSpace::new(9, 1).is_err());
    }

    #[test]
    fn shift_and_clock() {
        let s = QuditSpace::new(3, 1).unwrap();
        assert!(weyl(&s, &WeylLabel::new(&s, &[0, 0]).unwrap()).approx_eq(&DenseOperator::identity(3), 1e-14));
        let x = weyl(&s, &WeylLabel::new(&s, &[1, 0]).unwrap());
        for c in 0..3 {
            for r in 0..3 {
                let expected = if r == (c + 1) % 3 { 1.0 } else { 0.0 };
                assert!((x.entries()[(r, c)] - C64::new(expected, 0.0)).norm() < 1e-14);
            }
        }
        let z = weyl(&s, &WeylLabel::new(&s, &[0, 1]).unwrap());
        let w = s.omega_powers();
        for k in 0..3 {
            assert!((z.entries()[(k, k)] - w[(3 - k) % 3]).norm() < 1e-14);
        }
    }

    #[test]
    fn symmetric_phase_and_adjoint() {
        let s = QuditSpace::new(5, 1).unwrap();
        let omega = s.omega_powers();
        let x = weyl(&s, &WeylLabel::new(&s, &[1, 0]).unwrap());
        let z = weyl(&s, &WeylLabel::new(&s, &[0, 1]).unwrap());
        let tau_inv = omega[(5 - s.prime().half() as usize) % 5];
        for (q, p) in [(2u32, 3u32), (1, 4), (4, 4)] {
            let mut expected = DenseOperator::identity(5);
            for _ in 0..q {
                expected = expected.matmul(&x);
            }
            for _ in 0..p {
                expected = expected.matmul(&z);
            }
            let phase = (0..q * p).fold(C64::new(1.0, 0.0), |acc, _| acc * tau_inv);
            let w = weyl(&s, &WeylLabel::new(&s, &[q as i64, p as i64]).unwrap());
            assert!(w.approx_eq(&expected.scale(phase), 1e-12));
            let minus = weyl(&s, &WeylLabel::new(&s, &[-(q as i64), -(p as i64)]).unwrap());
            assert!(w.adjoint().approx_eq(&minus, 1e-12));
        }
    }

    #[test]
    fn commutator_and_composition_exhaustive_d3() {
        let s = QuditSpace::new(3, 1).unwrap();
        let omega = s.omega_powers();
        let h = s.prime().half();
        for a in all_labels(&s) {
            for b in all_labels(&s) {
                let (wa, wb) = (weyl(&s, &a), weyl(&s, &b));
                let k = s.symplectic_product(a.residues(), b.residues());
                let comm = wa.matmul(&wb).matmul(&wa.adjoint()).matmul(&wb.adjoint());
                assert!(comm.approx_eq(&DenseOperator::identity(3).scale(omega[k as usize]), 1e-12));
                let sum: Vec<u64> = a.residues().iter().zip(b.residues()).map(|(x, y)| (x + y) % 3).collect();
                let wab = weyl(&s, &WeylLabel::from_residues(&s, sum).unwrap());
                assert!(wa.matmul(&wb).approx_eq(&wab.scale(omega[(h * k % 3) as usize]), 1e-12));
            }
        }
    }

    #[test]
    fn trace_with_matches_dense() {
        let s = QuditSpace::new(3, 2).unwrap();
        let rho = DenseOperator::random_hermitian(s.dim(), 7);
        for a in all_labels(&s).into_iter().step_by(7) {
            let dense = rho.matmul(&weyl(&s, &a)).trace();
            assert!((dense - WeylOperator::new(s, a).trace_with(&rho)).norm() < 1e-12);
        }
    }
}
