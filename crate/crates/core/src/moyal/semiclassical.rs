//! Gaussian test symbols and the numerical checks run on them.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::twisted::{fourier, inverse_fourier, moyal_star_fourier, twisted_convolution};
use super::weyl::{fft_axis, moyal_star, weyl_kernel, Direction};
use super::{GridFunction, PhaseGrid};
use crate::error::{Error, Result};

/// `A exp(−(a x² + 2b x y + c y²))` with `x = q − q0`, `y = p − p0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gaussian {
    pub amplitude: f64,
    pub q0: f64,
    pub p0: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Gaussian {
    /// Checks the quadratic form is positive semidefinite with `a > 0`.
    pub fn validate(&self) -> Result<()> {
        let finite = [self.amplitude, self.q0, self.p0, self.a, self.b, self.c].iter().all(|x| x.is_finite());
        if !finite {
            return Err(Error::NonFinite);
        }
        if self.a <= 0.0 || self.c < 0.0 || self.a * self.c < self.b * self.b {
            return Err(Error::InvalidGrid(format!(
                "gaussian form (a={}, b={}, c={}) is not positive semidefinite",
                self.a, self.b, self.c
            )));
        }
        Ok(())
    }

    pub fn eval(&self, q: f64, p: f64) -> f64 {
        let (x, y) = (q - self.q0, p - self.p0);
        self.amplitude * (-(self.a * x * x + 2.0 * self.b * x * y + self.c * y * y)).exp()
    }

    /// `(∂_q, ∂_p)` at `(q, p)`.
    pub fn gradient(&self, q: f64, p: f64) -> (f64, f64) {
        let (x, y) = (q - self.q0, p - self.p0);
        let v = self.eval(q, p);
        (-2.0 * (self.a * x + self.b * y) * v, -2.0 * (self.b * x + self.c * y) * v)
    }

    pub fn sample(&self, grid: PhaseGrid) -> GridFunction {
        GridFunction::from_fn(grid, |q, p| C64::new(self.eval(q, p), 0.0))
    }
}

/// Three well-separated, mutually non-commuting Gaussians.
pub fn gaussian_test_set() -> Vec<Gaussian> {
    vec![
        Gaussian { amplitude: 1.0, q0: 0.3, p0: -0.2, a: 0.8, b: 0.2, c: 0.5 },
        Gaussian { amplitude: 0.7, q0: -0.4, p0: 0.5, a: 0.6, b: -0.25, c: 1.1 },
        Gaussian { amplitude: 1.2, q0: 0.1, p0: 0.35, a: 1.3, b: 0.4, c: 0.7 },
    ]
}

/// `2 exp(−(q² + p²)/ħ)`, the symbol of the oscillator ground-state projector.
pub fn ground_state_symbol(grid: PhaseGrid) -> GridFunction {
    let hbar = grid.hbar();
    GridFunction::from_fn(grid, |q, p| C64::new(2.0 * (-(q * q + p * p) / hbar).exp(), 0.0))
}

/// Spectral `(∂_q f, ∂_p f)`.
fn spectral_gradient(f: &GridFunction) -> (GridFunction, GridFunction) {
    let grid = *f.grid();
    let n = grid.n();
    let mut coeffs = f.samples().clone();
    fft_axis(&mut coeffs, 0, Direction::Forward);
    fft_axis(&mut coeffs, 1, Direction::Forward);
    let derive = |axis: usize, period: f64| {
        let mut d = coeffs.clone();
        for ((i, j), z) in d.indexed_iter_mut() {
            let k = grid.rep([i, j][axis] as isize);
            // the Nyquist mode has no odd derivative
            let wave = if k == -((n / 2) as isize) { 0.0 } else { 2.0 * PI * k as f64 / period };
            *z *= C64::new(0.0, wave / (n * n) as f64);
        }
        fft_axis(&mut d, 0, Direction::Inverse);
        fft_axis(&mut d, 1, Direction::Inverse);
        GridFunction { grid, samples: d }
    };
    (derive(0, grid.l_q()), derive(1, grid.l_p()))
}

/// `{f, g} = ∂_q f ∂_p g − ∂_p f ∂_q g`, by spectral differentiation.
pub fn poisson_bracket(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    f.grid().check_same(g.grid())?;
    let (fq, fp) = spectral_gradient(f);
    let (gq, gp) = spectral_gradient(g);
    let samples = &fq.samples * &gp.samples - &fp.samples * &gq.samples;
    Ok(GridFunction { grid: *f.grid(), samples })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CommutatorCheck {
    pub hbar: f64,
    pub error: f64,
}

/// `sup |(f ⋆ g − g ⋆ f)/(iħ) − {f, g}|` over the central half of the grid.
pub fn semiclassical_commutator_check(f: &GridFunction, g: &GridFunction) -> Result<CommutatorCheck> {
    let grid = *f.grid();
    let hbar = grid.hbar();
    let comm = moyal_star(f, g)?.sub(&moyal_star(g, f)?)?.scale(C64::new(0.0, -1.0 / hbar));
    let error = comm.central_max_abs_diff(&poisson_bracket(f, g)?)?;
    Ok(CommutatorCheck { hbar, error })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub f: usize,
    pub g: usize,
    pub hbar: f64,
    pub n: usize,
    pub error: f64,
    /// `error(2ħ) / error(ħ)` against the previous row of the same pair.
    pub ratio: Option<f64>,
}

/// Smallest power-of-two grid with both periods at least `l`.
pub fn convergence_grid(hbar: f64, l: f64) -> Result<PhaseGrid> {
    if !(l.is_finite() && l > 0.0) {
        return Err(Error::InvalidGrid(format!("box length {l} must be positive")));
    }
    let needed = l * l / (2.0 * PI * hbar);
    let n = (needed.ceil() as usize).max(16).next_power_of_two();
    PhaseGrid::new(n, hbar, l)
}

/// Commutator error of the pair `(f, g)` over decreasing `ħ`, each on a grid
/// with position period `l`.
pub fn commutator_convergence(f: &Gaussian, g: &Gaussian, ids: (usize, usize), l: f64, hbars: &[f64]) -> Result<Vec<ConvergenceRow>> {
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(hbars.len());
    for &hbar in hbars {
        let grid = convergence_grid(hbar, l)?;
        let check = semiclassical_commutator_check(&f.sample(grid), &g.sample(grid))?;
        let ratio = rows.last().map(|prev| prev.error / check.error);
        rows.push(ConvergenceRow { f: ids.0, g: ids.1, hbar, n: grid.n(), error: check.error, ratio });
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MoyalConfig {
    /// Points per axis of the square grid used for the product checks.
    pub n: usize,
    pub hbar: f64,
    /// Position period of the grids in the convergence study.
    pub convergence_box: f64,
    pub hbars: Vec<f64>,
    /// `ħ` for the commutative-limit comparison.
    pub limit_hbar: f64,
    pub functions: Vec<Gaussian>,
}

impl Default for MoyalConfig {
    fn default() -> Self {
        MoyalConfig {
            n: 128,
            hbar: 0.5,
            convergence_box: 12.0,
            hbars: vec![0.2, 0.1, 0.05],
            limit_hbar: 1e-3,
            functions: gaussian_test_set(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairMetrics {
    pub f: usize,
    pub g: usize,
    /// `max |kernel path − Fourier path| / max |kernel path|`.
    pub two_path_relative: f64,
    /// `max |conj(f ⋆ g) − ḡ ⋆ f̄|`.
    pub hermitian: f64,
    /// `max |f ⋆ g − f g|` at `ħ = limit_hbar`.
    pub limit_error: f64,
    /// `max |f ⋆ g − f g − (iħ/2) {f, g}|` at `ħ = limit_hbar`.
    pub limit_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MoyalReport {
    pub grid: PhaseGrid,
    pub limit_hbar: f64,
    pub pairs: Vec<PairMetrics>,
    pub max_two_path_relative: f64,
    pub unit_error: f64,
    pub associativity_error: f64,
    pub associativity_error_fourier: f64,
    pub hermitian_error: f64,
    pub ground_state_idempotence: f64,
    pub ground_state_trace_error: f64,
    pub q_only_commutator: f64,
    pub convergence: Vec<ConvergenceRow>,
    pub two_path_pass: bool,
    pub unit_pass: bool,
    pub associativity_pass: bool,
    pub limit_pass: bool,
    pub convergence_pass: bool,
    pub pass: bool,
}

pub const PRODUCT_TOL: f64 = 1e-8;
pub const RATIO_RANGE: (f64, f64) = (3.5, 4.5);

/// Runs every continuum check on the configured test set.
pub fn run_moyal_suite(config: &MoyalConfig) -> Result<MoyalReport> {
    if config.functions.is_empty() {
        return Err(Error::InvalidGrid("empty test set".into()));
    }
    for g in &config.functions {
        g.validate()?;
    }
    let grid = PhaseGrid::symmetric(config.n, config.hbar)?;
    let fs: Vec<GridFunction> = config.functions.iter().map(|g| g.sample(grid)).collect();
    let k = fs.len();

    let mut pairs = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let kernel = moyal_star(&fs[i], &fs[j])?;
            let spectral = moyal_star_fourier(&fs[i], &fs[j])?;
            let two_path_relative = kernel.max_abs_diff(&spectral)? / kernel.max_abs();
            let hermitian = kernel.conj().max_abs_diff(&moyal_star(&fs[j].conj(), &fs[i].conj())?)?;
            let limit = inverse_fourier(&twisted_convolution(&fourier(&fs[i]), &fourier(&fs[j]), config.limit_hbar)?);
            let pointwise = GridFunction { grid, samples: fs[i].samples() * fs[j].samples() };
            let limit_error = limit.max_abs_diff(&pointwise)?;
            let first_order = poisson_bracket(&fs[i], &fs[j])?.scale(C64::new(0.0, 0.5 * config.limit_hbar));
            let limit_residual = limit.sub(&pointwise)?.max_abs_diff(&first_order)?;
            pairs.push(PairMetrics { f: i, g: j, two_path_relative, hermitian, limit_error, limit_residual });
        }
    }
    let max_of = |it: &mut dyn Iterator<Item = f64>| it.fold(0.0f64, f64::max);
    let max_two_path_relative = max_of(&mut pairs.iter().map(|m| m.two_path_relative));
    let hermitian_error = max_of(&mut pairs.iter().map(|m| m.hermitian));

    let one = GridFunction::constant(grid, C64::new(1.0, 0.0));
    let mut unit_error: f64 = 0.0;
    for f in &fs {
        for prod in [moyal_star(f, &one)?, moyal_star(&one, f)?, moyal_star_fourier(f, &one)?, moyal_star_fourier(&one, f)?] {
            unit_error = unit_error.max(prod.max_abs_diff(f)?);
        }
    }

    let mut associativity_error: f64 = 0.0;
    let mut associativity_error_fourier: f64 = 0.0;
    let triples = [(0, 1, 2), (2, 1, 0), (1, 1, 0)];
    for &(a, b, c) in triples.iter().filter(|t| t.0 < k && t.1 < k && t.2 < k) {
        let (f, g, h) = (&fs[a], &fs[b], &fs[c]);
        let left = moyal_star(&moyal_star(f, g)?, h)?;
        let right = moyal_star(f, &moyal_star(g, h)?)?;
        associativity_error = associativity_error.max(left.max_abs_diff(&right)?);
        let left = moyal_star_fourier(&moyal_star_fourier(f, g)?, h)?;
        let right = moyal_star_fourier(f, &moyal_star_fourier(g, h)?)?;
        associativity_error_fourier = associativity_error_fourier.max(left.max_abs_diff(&right)?);
    }

    let ground = ground_state_symbol(grid);
    let ground_state_idempotence = moyal_star(&ground, &ground)?.max_abs_diff(&ground)?;
    let ground_state_trace_error = (weyl_kernel(&ground).trace() - C64::new(1.0, 0.0)).norm();

    let q_only: Vec<GridFunction> = config
        .functions
        .iter()
        .take(2)
        .map(|g| Gaussian { b: 0.0, c: 0.0, ..*g }.sample(grid))
        .collect();
    let q_only_commutator = match q_only.as_slice() {
        [f, g] => moyal_star(f, g)?.max_abs_diff(&moyal_star(g, f)?)?,
        _ => 0.0,
    };

    let mut convergence = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            convergence.extend(commutator_convergence(
                &config.functions[i],
                &config.functions[j],
                (i, j),
                config.convergence_box,
                &config.hbars,
            )?);
        }
    }

    let two_path_pass = max_two_path_relative < PRODUCT_TOL;
    let unit_pass = unit_error < PRODUCT_TOL;
    let associativity_pass = associativity_error < PRODUCT_TOL && associativity_error_fourier < PRODUCT_TOL;
    let limit_pass = pairs.iter().all(|m| m.limit_residual < config.limit_hbar);
    let convergence_pass = convergence
        .iter()
        .filter_map(|r| r.ratio)
        .all(|r| (RATIO_RANGE.0..=RATIO_RANGE.1).contains(&r));
    let pass = two_path_pass && unit_pass && associativity_pass && limit_pass && convergence_pass;
    Ok(MoyalReport {
        grid,
        limit_hbar: config.limit_hbar,
        pairs,
        max_two_path_relative,
        unit_error,
        associativity_error,
        associativity_error_fourier,
        hermitian_error,
        ground_state_idempotence,
        ground_state_trace_error,
        q_only_commutator,
        convergence,
        two_path_pass,
        unit_pass,
        associativity_pass,
        limit_pass,
        convergence_pass,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_bracket_matches_analytic() {
        let grid = PhaseGrid::symmetric(128, 0.5).unwrap();
        let set = gaussian_test_set();
        let pb = poisson_bracket(&set[0].sample(grid), &set[1].sample(grid)).unwrap();
        let oracle = GridFunction::from_fn(grid, |q, p| {
            let (fq, fp) = set[0].gradient(q, p);
            let (gq, gp) = set[1].gradient(q, p);
            C64::new(fq * gp - fp * gq, 0.0)
        });
        assert!(pb.max_abs_diff(&oracle).unwrap() < 1e-10);
    }

    #[test]
    fn plane_wave_commutator_on_the_grid() {
        // e^{ikq} ⋆ e^{ilp} − e^{ilp} ⋆ e^{ikq} = −2i sin(ħkl/2) e^{i(kq + lp)},
        // whose ħ → 0 limit is iħ {e^{ikq}, e^{ilp}}
        let grid = PhaseGrid::symmetric(64, 0.5).unwrap();
        for (kappa, lambda) in [(1.0, 2.0), (3.0, -1.0)] {
            let k = 2.0 * PI * kappa / grid.l_q();
            let l = 2.0 * PI * lambda / grid.l_p();
            let f = GridFunction::from_fn(grid, |q, _| C64::from_polar(1.0, k * q));
            let g = GridFunction::from_fn(grid, |_, p| C64::from_polar(1.0, l * p));
            let comm = moyal_star(&f, &g).unwrap().sub(&moyal_star(&g, &f).unwrap()).unwrap();
            let s = -2.0 * (grid.hbar() * k * l / 2.0).sin();
            let oracle = GridFunction::from_fn(grid, |q, p| C64::new(0.0, s) * C64::from_polar(1.0, k * q + l * p));
            assert!(comm.max_abs_diff(&oracle).unwrap() < 1e-10);
            let fourier = moyal_star_fourier(&f, &g).unwrap().sub(&moyal_star_fourier(&g, &f).unwrap()).unwrap();
            assert!(fourier.max_abs_diff(&oracle).unwrap() < 1e-10);
        }
    }

    #[test]
    fn equal_functions_commute() {
        let grid = PhaseGrid::symmetric(64, 0.3).unwrap();
        let f = gaussian_test_set()[0].sample(grid);
        let check = semiclassical_commutator_check(&f, &f).unwrap();
        assert!(check.error < 1e-12);
    }

    #[test]
    fn gaussian_validation() {
        assert!(Gaussian { amplitude: 1.0, q0: 0.0, p0: 0.0, a: 1.0, b: 2.0, c: 1.0 }.validate().is_err());
        for g in gaussian_test_set() {
            g.validate().unwrap();
        }
    }

    #[test]
    fn suite_passes() {
        let report = run_moyal_suite(&MoyalConfig::default()).unwrap();
        eprintln!("{}", serde_json::to_string_pretty(&report).unwrap());
        assert!(report.pass);
        assert!(report.ground_state_idempotence < 1e-6);
        assert!(report.ground_state_trace_error < 1e-6);
        assert!(report.q_only_commutator < 1e-9);
        assert!(report.hermitian_error < 1e-10);
    }
}
