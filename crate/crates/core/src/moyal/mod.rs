//! Weyl quantization of one continuous mode on a periodic phase-space grid.
//!
//! Grid points are `q_j = (j − N/2) Δq`, `p_m = (m − N/2) Δp` with
//! `Δq Δp N = 2πħ`. Symbols are `N × N` arrays indexed `[j, m]`; operator
//! kernels are `N × N` matrices acting on position samples.

mod semiclassical;
mod twisted;
mod weyl;

pub use semiclassical::{
    commutator_convergence, convergence_grid, gaussian_test_set, ground_state_symbol, poisson_bracket, run_moyal_suite,
    semiclassical_commutator_check, CommutatorCheck, ConvergenceRow, Gaussian, MoyalConfig, MoyalReport, PairMetrics,
    PRODUCT_TOL, RATIO_RANGE,
};
pub use twisted::{cocycle, fourier, inverse_fourier, moyal_star_fourier, twisted_convolution, DualFunction};
pub use weyl::{moyal_star, weyl_kernel, weyl_symbol};

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// `N` points per axis over periods `L_q`, `L_p` with `L_q L_p = 2πħN`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    n: usize,
    l_q: f64,
    l_p: f64,
    hbar: f64,
}

impl PhaseGrid {
    /// Square grid, `L_q = L_p = sqrt(2πħN)`.
    pub fn symmetric(n: usize, hbar: f64) -> Result<Self> {
        Self::new(n, hbar, (2.0 * PI * hbar * n as f64).sqrt())
    }

    /// Grid with position period `l_q`; the momentum period follows.
    pub fn new(n: usize, hbar: f64, l_q: f64) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("N = {n} must be a power of two and at least 16")));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidGrid(format!("hbar = {hbar} must be positive")));
        }
        if !(l_q.is_finite() && l_q > 0.0) {
            return Err(Error::InvalidGrid(format!("L_q = {l_q} must be positive")));
        }
        Ok(PhaseGrid { n, l_q, l_p: 2.0 * PI * hbar * n as f64 / l_q, hbar })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn l_q(&self) -> f64 {
        self.l_q
    }

    pub fn l_p(&self) -> f64 {
        self.l_p
    }

    pub fn dq(&self) -> f64 {
        self.l_q / self.n as f64
    }

    pub fn dp(&self) -> f64 {
        self.l_p / self.n as f64
    }

    pub fn q(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.dq()
    }

    pub fn p(&self, m: usize) -> f64 {
        (m as f64 - (self.n / 2) as f64) * self.dp()
    }

    /// Index range of the central half along either axis.
    pub fn central(&self) -> std::ops::Range<usize> {
        self.n / 4..3 * self.n / 4
    }

    /// Representative of `k mod N` in `[−N/2, N/2)`.
    pub(crate) fn rep(&self, k: isize) -> isize {
        let n = self.n as isize;
        let r = k.rem_euclid(n);
        if r >= n / 2 {
            r - n
        } else {
            r
        }
    }

    pub(crate) fn check_same(&self, other: &PhaseGrid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// Complex samples of a phase-space function on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grid: PhaseGrid,
    samples: Array2<C64>,
}

impl GridFunction {
    pub fn new(grid: PhaseGrid, samples: Array2<C64>) -> Result<Self> {
        if samples.dim() != (grid.n, grid.n) {
            return Err(Error::GridMismatch);
        }
        if samples.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(GridFunction { grid, samples })
    }

    pub fn from_fn(grid: PhaseGrid, f: impl Fn(f64, f64) -> C64) -> Self {
        let samples = Array2::from_shape_fn((grid.n, grid.n), |(j, m)| f(grid.q(j), grid.p(m)));
        GridFunction { grid, samples }
    }

    pub fn constant(grid: PhaseGrid, c: C64) -> Self {
        GridFunction { grid, samples: Array2::from_elem((grid.n, grid.n), c) }
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn samples(&self) -> &Array2<C64> {
        &self.samples
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &GridFunction) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        Ok(self.samples.iter().zip(other.samples.iter()).fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }

    /// `max |f − g|` over the central half of the grid.
    pub fn central_max_abs_diff(&self, other: &GridFunction) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        let mut out: f64 = 0.0;
        for j in self.grid.central() {
            for m in self.grid.central() {
                out = out.max((self.samples[(j, m)] - other.samples[(j, m)]).norm());
            }
        }
        Ok(out)
    }

    pub fn max_imag(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    pub fn conj(&self) -> GridFunction {
        GridFunction { grid: self.grid, samples: self.samples.mapv(|z| z.conj()) }
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        self.grid.check_same(&other.grid)?;
        Ok(GridFunction { grid: self.grid, samples: &self.samples - &other.samples })
    }

    pub fn scale(&self, s: C64) -> GridFunction {
        GridFunction { grid: self.grid, samples: &self.samples * s }
    }
}

/// `K(x_a, x_b) Δq` as a matrix on position samples.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorKernel {
    grid: PhaseGrid,
    matrix: Array2<C64>,
}

impl OperatorKernel {
    pub fn new(grid: PhaseGrid, matrix: Array2<C64>) -> Result<Self> {
        if matrix.dim() != (grid.n, grid.n) {
            return Err(Error::GridMismatch);
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(OperatorKernel { grid, matrix })
    }

    pub fn identity(grid: PhaseGrid) -> Self {
        OperatorKernel { grid, matrix: Array2::eye(grid.n) }
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    /// Operator composition.
    pub fn compose(&self, other: &OperatorKernel) -> Result<OperatorKernel> {
        self.grid.check_same(&other.grid)?;
        Ok(OperatorKernel { grid: self.grid, matrix: self.matrix.dot(&other.matrix) })
    }

    pub fn trace(&self) -> C64 {
        self.matrix.diag().sum()
    }

    pub fn adjoint(&self) -> OperatorKernel {
        OperatorKernel { grid: self.grid, matrix: self.matrix.t().mapv(|z| z.conj()) }
    }

    pub fn max_abs_diff(&self, other: &OperatorKernel) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        Ok(self.matrix.iter().zip(other.matrix.iter()).fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_invariants() {
        let g = PhaseGrid::symmetric(64, 0.1).unwrap();
        assert!((g.dq() * g.dp() * 64.0 - 2.0 * PI * 0.1).abs() < 1e-12);
        assert!(PhaseGrid::symmetric(8, 0.1).is_err());
        assert!(PhaseGrid::symmetric(48, 0.1).is_err());
        assert!(PhaseGrid::symmetric(64, 0.0).is_err());
        let a = PhaseGrid::new(32, 0.5, 4.0).unwrap();
        assert!((a.l_q() * a.l_p() - 2.0 * PI * 0.5 * 32.0).abs() < 1e-9);
        assert_eq!(g.q(32), 0.0);
        assert_eq!(g.rep(-1), -1);
        assert_eq!(g.rep(32), -32);
        assert_eq!(g.rep(31), 31);
    }

    #[test]
    fn mismatched_grids() {
        let a = GridFunction::constant(PhaseGrid::symmetric(16, 0.1).unwrap(), C64::new(1.0, 0.0));
        let b = GridFunction::constant(PhaseGrid::symmetric(16, 0.2).unwrap(), C64::new(1.0, 0.0));
        assert_eq!(a.max_abs_diff(&b), Err(Error::GridMismatch));
    }
}
