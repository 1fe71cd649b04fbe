//! The symbol ↔ kernel pair
//!
//! ```text
//! K(x, y) = (1/2πħ) ∫ f((x + y)/2, ζ) e^{iζ(x − y)/ħ} dζ
//! ```
//!
//! on the grid. With `r = a − b`, the matrix entry is
//! `ĝ(c, r) = (1/N) Σ_m f(c, m) ω^{(m − N/2) r}` at the center `c = b + r/2`.
//! Odd `r` puts the center between grid points; those columns are
//! evaluated by a spectral half-step shift along `q`, so the map stays an
//! exact bijection.

use std::f64::consts::PI;

use ndarray::{Array2, Axis};
use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use super::{GridFunction, OperatorKernel, PhaseGrid};
use crate::error::Result;

#[derive(Clone, Copy)]
pub(super) enum Direction {
    Forward,
    Inverse,
}

/// Unnormalized DFT of every lane along `axis`.
pub(super) fn fft_axis(a: &mut Array2<C64>, axis: usize, dir: Direction) {
    let n = a.len_of(Axis(axis));
    let mut planner = FftPlanner::<f64>::new();
    let fft = match dir {
        Direction::Forward => planner.plan_fft_forward(n),
        Direction::Inverse => planner.plan_fft_inverse(n),
    };
    let mut buf = vec![C64::new(0.0, 0.0); n];
    for mut lane in a.lanes_mut(Axis(axis)) {
        for (slot, v) in buf.iter_mut().zip(lane.iter()) {
            *slot = *v;
        }
        fft.process(&mut buf);
        for (v, slot) in lane.iter_mut().zip(&buf) {
            *v = *slot;
        }
    }
}

/// Shifts every odd-`r` column of `g` by `±1/2` grid step along axis 0.
fn half_shift_odd_columns(grid: &PhaseGrid, g: &mut Array2<C64>, sign: f64) {
    let n = grid.n();
    let odd: Vec<usize> = (0..n).filter(|&k| grid.rep(k as isize) % 2 != 0).collect();
    let mut cols = Array2::<C64>::zeros((n, odd.len()));
    for (t, &k) in odd.iter().enumerate() {
        cols.column_mut(t).assign(&g.column(k));
    }
    fft_axis(&mut cols, 0, Direction::Forward);
    for (kappa, mut row) in cols.axis_iter_mut(Axis(0)).enumerate() {
        let phase = C64::from_polar(1.0 / n as f64, sign * PI * grid.rep(kappa as isize) as f64 / n as f64);
        row.mapv_inplace(|z| z * phase);
    }
    fft_axis(&mut cols, 0, Direction::Inverse);
    for (t, &k) in odd.iter().enumerate() {
        g.column_mut(k).assign(&cols.column(t));
    }
}

/// Slot `(center row, r column)` holding the matrix entry `(a, b)`.
fn slot(grid: &PhaseGrid, a: usize, b: usize) -> (usize, usize) {
    let n = grid.n() as isize;
    let r = grid.rep(a as isize - b as isize);
    let center = if r % 2 == 0 { b as isize + r / 2 } else { b as isize + (r - 1) / 2 };
    (center.rem_euclid(n) as usize, r.rem_euclid(n) as usize)
}

fn sign(grid: &PhaseGrid, k: usize) -> f64 {
    if grid.rep(k as isize) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Weyl quantization of a grid symbol.
pub fn weyl_kernel(f: &GridFunction) -> OperatorKernel {
    let grid = *f.grid();
    let n = grid.n();
    let mut g = f.samples().clone();
    // ĝ(j, r) = (1/N) (−1)^r Σ_m f(j, m) e^{2πi m r / N}
    fft_axis(&mut g, 1, Direction::Inverse);
    for ((_, k), z) in g.indexed_iter_mut() {
        *z *= sign(&grid, k) / n as f64;
    }
    half_shift_odd_columns(&grid, &mut g, 1.0);
    let matrix = Array2::from_shape_fn((n, n), |(a, b)| g[slot(&grid, a, b)]);
    OperatorKernel { grid, matrix }
}

/// Inverse of [`weyl_kernel`].
pub fn weyl_symbol(k: &OperatorKernel) -> GridFunction {
    let grid = *k.grid();
    let n = grid.n();
    let mut g = Array2::<C64>::zeros((n, n));
    for ((a, b), z) in k.matrix().indexed_iter() {
        g[slot(&grid, a, b)] = *z;
    }
    half_shift_odd_columns(&grid, &mut g, -1.0);
    for ((_, k), z) in g.indexed_iter_mut() {
        *z *= sign(&grid, k);
    }
    fft_axis(&mut g, 1, Direction::Forward);
    GridFunction { grid, samples: g }
}

/// `f ⋆ g` as the symbol of the composed kernels.
pub fn moyal_star(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.grid().check_same(g.grid())?;
    Ok(weyl_symbol(&weyl_kernel(f).compose(&weyl_kernel(g))?))
}
