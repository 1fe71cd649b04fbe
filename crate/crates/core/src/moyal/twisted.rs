//! The star product on the Fourier side: twisted convolution of
//! plane-wave coefficients.
//!
//! A symbol is expanded as `f(q_j, p_m) = Σ_{κ,λ} f̂(κ, λ) e^{2πi(κj + λm)/N}`
//! with `κ, λ ∈ [−N/2, N/2)`, i.e. wave vectors `k = (2πκ/L_q, 2πλ/L_p)`.
//! Plane waves multiply as `e_v ⋆ e_w = σ(v, w) e_{v+w}` with
//! `σ(v, w) = exp(iħ (v_p w_q − v_q w_p) / 2)`.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64 as C64;

use super::weyl::{fft_axis, Direction};
use super::{GridFunction, PhaseGrid};
use crate::error::{Error, Result};

/// Coefficients below this fraction of the largest one are skipped in the
/// twisted sum.
const SKIP_RELATIVE: f64 = 1e-17;

/// Plane-wave coefficients, stored at `[κ + N/2, λ + N/2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualFunction {
    grid: PhaseGrid,
    coeffs: Array2<C64>,
}

impl DualFunction {
    pub fn new(grid: PhaseGrid, coeffs: Array2<C64>) -> Result<Self> {
        if coeffs.dim() != (grid.n(), grid.n()) {
            return Err(Error::GridMismatch);
        }
        Ok(DualFunction { grid, coeffs })
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn coeffs(&self) -> &Array2<C64> {
        &self.coeffs
    }

    /// Coefficient of wave numbers `(κ, λ)`; zero outside the band.
    pub fn get(&self, kappa: isize, lambda: isize) -> C64 {
        let h = (self.grid.n() / 2) as isize;
        if (-h..h).contains(&kappa) && (-h..h).contains(&lambda) {
            self.coeffs[((kappa + h) as usize, (lambda + h) as usize)]
        } else {
            C64::new(0.0, 0.0)
        }
    }
}

/// `σ(v, w) = exp(iħ (v_p w_q − v_q w_p) / 2)` for wave vectors
/// `v = (v_q, v_p)`, `w = (w_q, w_p)`.
pub fn cocycle(v: (f64, f64), w: (f64, f64), hbar: f64) -> C64 {
    C64::from_polar(1.0, 0.5 * hbar * (v.1 * w.0 - v.0 * w.1))
}

pub fn fourier(f: &GridFunction) -> DualFunction {
    let grid = *f.grid();
    let n = grid.n();
    let mut a = f.samples().clone();
    fft_axis(&mut a, 0, Direction::Forward);
    fft_axis(&mut a, 1, Direction::Forward);
    let h = n / 2;
    let norm = 1.0 / (n * n) as f64;
    let coeffs = Array2::from_shape_fn((n, n), |(i, j)| a[((i + h) % n, (j + h) % n)] * norm);
    DualFunction { grid, coeffs }
}

pub fn inverse_fourier(fhat: &DualFunction) -> GridFunction {
    let grid = fhat.grid;
    let n = grid.n();
    let h = n / 2;
    let mut a = Array2::from_shape_fn((n, n), |(i, j)| fhat.coeffs[((i + h) % n, (j + h) % n)]);
    fft_axis(&mut a, 0, Direction::Inverse);
    fft_axis(&mut a, 1, Direction::Inverse);
    GridFunction::new(grid, a).expect("finite coefficients")
}

/// `(f̂ ⋆̂ ĝ)(u) = Σ_v f̂(v) ĝ(u − v) σ(v, u − v)`, a linear (non-cyclic)
/// convolution truncated to the band.
pub fn twisted_convolution(fhat: &DualFunction, ghat: &DualFunction, hbar: f64) -> Result<DualFunction> {
    fhat.grid.check_same(&ghat.grid)?;
    if !(hbar.is_finite() && hbar >= 0.0) {
        return Err(Error::InvalidGrid(format!("hbar = {hbar} must be non-negative")));
    }
    let grid = fhat.grid;
    let n = grid.n() as isize;
    let h = n / 2;
    // σ exponent is α (λ_v κ_w − κ_v λ_w)
    let alpha = hbar * 2.0 * PI * PI / (grid.l_q() * grid.l_p());
    let span = 2 * h * h;
    let table: Vec<C64> = (-span..=span).map(|t| C64::from_polar(1.0, alpha * t as f64)).collect();
    let support = |d: &DualFunction| -> Vec<(isize, isize, C64)> {
        let max = d.coeffs.iter().fold(0.0f64, |m, z| m.max(z.norm_sqr()));
        d.coeffs
            .indexed_iter()
            .filter(|(_, z)| z.norm_sqr() > SKIP_RELATIVE * SKIP_RELATIVE * max)
            .map(|((i, j), z)| (i as isize - h, j as isize - h, *z))
            .collect()
    };
    let (fs, gs) = (support(fhat), support(ghat));
    let mut coeffs = Array2::<C64>::zeros((n as usize, n as usize));
    for &(kv, lv, fv) in &fs {
        for &(kw, lw, gw) in &gs {
            let (ku, lu) = (kv + kw, lv + lw);
            if ku < -h || ku >= h || lu < -h || lu >= h {
                continue;
            }
            coeffs[((ku + h) as usize, (lu + h) as usize)] += fv * gw * table[(lv * kw - kv * lw + span) as usize];
        }
    }
    Ok(DualFunction { grid, coeffs })
}

/// `f ⋆ g` through the twisted convolution at the grid's `ħ`.
pub fn moyal_star_fourier(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.grid().check_same(g.grid())?;
    Ok(inverse_fourier(&twisted_convolution(&fourier(f), &fourier(g), f.grid().hbar())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cocycle_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut draw = || (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        for _ in 0..1000 {
            let (a, b, c) = (draw(), draw(), draw());
            let hbar = 0.37;
            let ab = (a.0 + b.0, a.1 + b.1);
            let bc = (b.0 + c.0, b.1 + c.1);
            let lhs = cocycle(a, b, hbar) * cocycle(ab, c, hbar);
            let rhs = cocycle(b, c, hbar) * cocycle(a, bc, hbar);
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn fourier_round_trip() {
        let grid = PhaseGrid::symmetric(32, 0.4).unwrap();
        let f = GridFunction::from_fn(grid, |q, p| C64::new((-(q * q) - p * p).exp(), q * 0.1));
        let back = inverse_fourier(&fourier(&f));
        assert!(back.max_abs_diff(&f).unwrap() < 1e-13);
    }

    #[test]
    fn plane_wave_commutator_recovers_bracket() {
        // e_v ⋆ e_w − e_w ⋆ e_v = (σ(v, w) − σ(w, v)) e_{v+w};
        // {e_v, e_w} = (v_p w_q − v_q w_p) e_{v+w}
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let v = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let w = (rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let bracket = v.1 * w.0 - v.0 * w.1;
            let hbar = 1e-4;
            let comm = (cocycle(v, w, hbar) - cocycle(w, v, hbar)) / C64::new(0.0, hbar);
            assert!((comm - C64::new(bracket, 0.0)).norm() < 1e-6);
        }
    }
}
