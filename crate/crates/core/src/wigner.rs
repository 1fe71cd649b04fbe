//! Discrete Wigner representation for odd prime `d`.
//!
//! `A(m) = d^{−n} Σ_a ω^{⟨m,a⟩} W(a)` and `W_ρ(m) = d^{−n} Tr(ρ A(m))`.
//! Tables are indexed lexicographically by `(q_1, p_1, …, q_n, p_n)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qudit::{DenseOperator, QuditSpace, WeylLabel, WeylOperator, C64};

/// Largest imaginary part accepted when reading off a real table.
pub const IMAGINARY_TOL: f64 = 1e-9;

/// Real values on all `d^{2n}` phase-space points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WignerTable {
    #[serde(skip)]
    space: QuditSpace,
    values: Vec<f64>,
}

impl WignerTable {
    pub fn new(space: QuditSpace, values: Vec<f64>) -> Result<Self> {
        if values.len() != space.phase_space_size() {
            return Err(Error::DimensionMismatch { expected: space.phase_space_size(), found: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(WignerTable { space, values })
    }

    pub fn space(&self) -> &QuditSpace {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, m: &[u64]) -> f64 {
        self.values[self.space.point_index(m)]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `(point, value)` pairs in table order.
    pub fn entries(&self) -> impl Iterator<Item = (Vec<u64>, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &v)| (self.space.point(i), v))
    }

    pub fn max_abs_diff(&self, other: &WignerTable) -> f64 {
        self.values.iter().zip(&other.values).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

fn phase_sum(space: &QuditSpace, m: &[u64], coeff: impl Fn(&[u64]) -> C64) -> C64 {
    let omega = space.omega_powers();
    (0..space.phase_space_size())
        .map(|i| {
            let a = space.point(i);
            coeff(&a) * omega[space.symplectic_product(m, &a) as usize]
        })
        .sum()
}

/// `A(m)` as a dense matrix.
pub fn phase_point_operator(space: &QuditSpace, m: &[u64]) -> Result<DenseOperator> {
    if m.len() != 2 * space.modes() {
        return Err(Error::DimensionMismatch { expected: 2 * space.modes(), found: m.len() });
    }
    let m: Vec<u64> = m.iter().map(|x| x % space.d()).collect();
    let omega = space.omega_powers();
    let dim = space.dim();
    let mut out = ndarray::Array2::<C64>::zeros((dim, dim));
    for i in 0..space.phase_space_size() {
        let a = space.point(i);
        let phase = omega[space.symplectic_product(&m, &a) as usize];
        let w = WeylOperator::new(*space, WeylLabel::from_residues(space, a)?);
        for x in 0..dim {
            let (y, e) = w.act_on_basis(x);
            out[(y, x)] += phase * omega[e as usize];
        }
    }
    DenseOperator::new(out / dim as f64)
}

/// Characteristic function `χ(a) = Tr(ρ W(a))` in table order.
pub fn characteristic_function(space: &QuditSpace, rho: &DenseOperator) -> Result<Vec<C64>> {
    space.check_dim(rho.dim())?;
    Ok((0..space.phase_space_size())
        .into_par_iter()
        .map(|i| {
            let label = WeylLabel::from_residues(space, space.point(i)).expect("in range");
            WeylOperator::new(*space, label).trace_with(rho)
        })
        .collect())
}

/// `W_ρ(m) = d^{−2n} Σ_a ω^{⟨m,a⟩} Tr(ρ W(a))`.
pub fn wigner(space: &QuditSpace, rho: &DenseOperator) -> Result<WignerTable> {
    let chi = characteristic_function(space, rho)?;
    let norm = 1.0 / space.phase_space_size() as f64;
    let complex: Vec<C64> = (0..space.phase_space_size())
        .into_par_iter()
        .map(|i| phase_sum(space, &space.point(i), |a| chi[space.point_index(a)]) * norm)
        .collect();
    if complex.iter().any(|z| z.im.abs() > IMAGINARY_TOL) {
        return Err(Error::NotHermitian);
    }
    WignerTable::new(*space, complex.iter().map(|z| z.re).collect())
}

/// `ρ = Σ_m T(m) A(m)`, expanded in the Weyl basis.
pub fn inverse_wigner(table: &WignerTable) -> DenseOperator {
    let space = *table.space();
    let omega = space.omega_powers();
    let dim = space.dim();
    let norm = 1.0 / dim as f64;
    // coefficient of W(a): d^{−n} Σ_m T(m) ω^{⟨m,a⟩}
    let coeffs: Vec<C64> = (0..space.phase_space_size())
        .into_par_iter()
        .map(|i| {
            let a = space.point(i);
            table
                .entries()
                .map(|(m, t)| omega[space.symplectic_product(&m, &a) as usize] * t)
                .sum::<C64>()
                * norm
        })
        .collect();
    let mut out = ndarray::Array2::<C64>::zeros((dim, dim));
    for (i, c) in coeffs.iter().enumerate() {
        if c.norm() == 0.0 {
            continue;
        }
        let w = WeylOperator::new(space, WeylLabel::from_residues(&space, space.point(i)).expect("in range"));
        for x in 0..dim {
            let (y, e) = w.act_on_basis(x);
            out[(y, x)] += c * omega[e as usize];
        }
    }
    DenseOperator::new(out).expect("finite entries")
}

/// `d^n Σ_m W_ρ(m) W_σ(m)`, which equals `Tr(ρσ)`.
pub fn wigner_overlap(space: &QuditSpace, rho: &DenseOperator, sigma: &DenseOperator) -> Result<f64> {
    let (a, b) = (wigner(space, rho)?, wigner(space, sigma)?);
    Ok(space.dim() as f64 * a.values().iter().zip(b.values()).map(|(x, y)| x * y).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qudit::{clifford_unitary, weyl};
    use crate::scalar::Scalar;
    use crate::symplectic::random_symplectic;

    fn trace_oracle(space: &QuditSpace, rho: &DenseOperator, m: &[u64]) -> f64 {
        let a = phase_point_operator(space, m).unwrap();
        rho.matmul(&a).trace().re / space.dim() as f64
    }

    #[test]
    fn phase_point_operators() {
        let space = QuditSpace::new(3, 1).unwrap();
        let ops: Vec<DenseOperator> = (0..9).map(|i| phase_point_operator(&space, &space.point(i)).unwrap()).collect();
        for (i, a) in ops.iter().enumerate() {
            assert!(a.is_hermitian(1e-12));
            assert!((a.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
            for (j, b) in ops.iter().enumerate() {
                let expected = if i == j { 3.0 } else { 0.0 };
                assert!((a.matmul(b).trace() - C64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
        // A(0) is the parity |x⟩ ↦ |−x⟩
        for x in 0..3 {
            for y in 0..3 {
                let expected = if (x + y) % 3 == 0 { 1.0 } else { 0.0 };
                assert!((ops[0].entries()[(y, x)] - C64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
        for b in 0..9 {
            let bl = space.point(b);
            let wb = weyl(&space, &WeylLabel::from_residues(&space, bl.clone()).unwrap());
            for m in 0..9 {
                let ml = space.point(m);
                let shifted: Vec<u64> = ml.iter().zip(&bl).map(|(x, y)| (x + y) % 3).collect();
                assert!(ops[m].conjugate_by(&wb).approx_eq(&ops[space.point_index(&shifted)], 1e-12));
            }
        }
    }

    #[test]
    fn wigner_matches_trace_definition() {
        for (d, n) in [(3, 1), (5, 1), (3, 2)] {
            let space = QuditSpace::new(d, n).unwrap();
            let rho = DenseOperator::random_density(space.dim(), d + n as u64);
            let table = wigner(&space, &rho).unwrap();
            assert!((table.sum() - 1.0).abs() < 1e-12);
            for i in (0..space.phase_space_size()).step_by(5) {
                let m = space.point(i);
                assert!((table.value(&m) - trace_oracle(&space, &rho, &m)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn maximally_mixed_is_flat() {
        let space = QuditSpace::new(3, 2).unwrap();
        let rho = DenseOperator::identity(9).scale(C64::new(1.0 / 9.0, 0.0));
        let table = wigner(&space, &rho).unwrap();
        assert!(table.values().iter().all(|v| (v - 1.0 / 81.0).abs() < 1e-14));
        let back = inverse_wigner(&WignerTable::new(space, vec![1.0 / 81.0; 81]).unwrap());
        assert!(back.approx_eq(&rho, 1e-14));
    }

    #[test]
    fn round_trip() {
        let space = QuditSpace::new(3, 1).unwrap();
        for seed in 0..50 {
            let h = DenseOperator::random_hermitian(3, seed);
            let table = wigner(&space, &h).unwrap();
            assert!(inverse_wigner(&table).approx_eq(&h, 1e-10));
            let values: Vec<f64> = (0..9).map(|i| (i as f64 * 0.37 + seed as f64).sin()).collect();
            let t = WignerTable::new(space, values).unwrap();
            assert!(wigner(&space, &inverse_wigner(&t)).unwrap().max_abs_diff(&t) < 1e-10);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let space = QuditSpace::new(3, 1).unwrap();
        let w = weyl(&space, &WeylLabel::new(&space, &[1, 0]).unwrap());
        assert_eq!(wigner(&space, &w).unwrap_err(), Error::NotHermitian);
        assert!(wigner(&space, &DenseOperator::identity(4)).is_err());
    }

    #[test]
    fn overlap_is_trace() {
        let space = QuditSpace::new(5, 1).unwrap();
        let rho = DenseOperator::random_density(5, 1);
        let sigma = DenseOperator::random_density(5, 2);
        let expected = rho.matmul(&sigma).trace().re;
        assert!((wigner_overlap(&space, &rho, &sigma).unwrap() - expected).abs() < 1e-10);
    }

    #[test]
    fn clifford_covariance() {
        let space = QuditSpace::new(5, 1).unwrap();
        let rho = DenseOperator::random_density(5, 3);
        let before = wigner(&space, &rho).unwrap();
        for seed in 0..5 {
            let s = random_symplectic(1, space.kind(), seed);
            let v = clifford_unitary(&space, s.matrix()).unwrap();
            let after = wigner(&space, &rho.conjugate_by(&v)).unwrap();
            let s_inv = s.matrix().inverse().unwrap();
            for (m, value) in after.entries() {
                let ms: Vec<Scalar> = m.iter().map(|&x| space.kind().from_i64(x as i64)).collect();
                let pre: Vec<u64> = s_inv.mul_vec(&ms).unwrap().iter().map(|x| x.residue().unwrap()).collect();
                assert!((value - before.value(&pre)).abs() < 1e-10);
            }
        }
    }
}
