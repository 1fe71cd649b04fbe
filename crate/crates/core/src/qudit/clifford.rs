//! Unitaries of the symplectic generators and the Clifford representation
//! `V(S) = V(G_1) ⋯ V(G_k)` for `S = G_1 ⋯ G_k`.

use ndarray::Array2;

use super::{DenseOperator, QuditSpace, WeylLabel, WeylOperator, C64};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::symplectic::{decompose_symplectic, is_symplectic, AffineSymplecticMap, SymplecticGenerator};

fn residue(space: &QuditSpace, s: &Scalar) -> Result<u64> {
    space.check_kind(s.kind())?;
    Ok(s.residue().expect("finite-field scalar"))
}

fn check_mode(space: &QuditSpace, mode: usize) -> Result<()> {
    if mode < space.modes() {
        Ok(())
    } else {
        Err(Error::ModeOutOfRange { mode, modes: space.modes() })
    }
}

/// Runs `f` on every fiber of `mode`: the `d` entries that differ only in
/// that digit, in digit order.
fn for_each_fiber(space: &QuditSpace, mode: usize, psi: &mut [C64], mut f: impl FnMut(&mut [C64])) {
    let d = space.d() as usize;
    let stride = space.stride(mode);
    let block = stride * d;
    let mut buf = vec![C64::new(0.0, 0.0); d];
    for base in (0..psi.len()).step_by(block) {
        for off in 0..stride {
            for (x, slot) in buf.iter_mut().enumerate() {
                *slot = psi[base + off + x * stride];
            }
            f(&mut buf);
            for (x, value) in buf.iter().enumerate() {
                psi[base + off + x * stride] = *value;
            }
        }
    }
}

fn fourier_fiber(omega: &[C64], fiber: &mut [C64], sign: u64) {
    let d = fiber.len();
    let norm = 1.0 / (d as f64).sqrt();
    let old = fiber.to_vec();
    for (y, out) in fiber.iter_mut().enumerate() {
        *out = old
            .iter()
            .enumerate()
            .map(|(x, v)| v * omega[(sign as usize * x * y) % d])
            .sum::<C64>()
            * norm;
    }
}

fn shear_fiber(omega: &[C64], fiber: &mut [C64], exponent_per_x2: u64) {
    let d = fiber.len() as u64;
    for (x, v) in fiber.iter_mut().enumerate() {
        let x = x as u64;
        *v *= omega[(exponent_per_x2 * (x * x % d) % d) as usize];
    }
}

/// Applies `V(g)` to a state vector in place.
pub fn apply_generator(space: &QuditSpace, g: &SymplecticGenerator, psi: &mut [C64]) -> Result<()> {
    use SymplecticGenerator::*;
    space.check_dim(psi.len())?;
    let d = space.d();
    let omega = space.omega_powers();
    let h = space.prime().half();
    match g {
        Fourier { mode } => {
            check_mode(space, *mode)?;
            for_each_fiber(space, *mode, psi, |f| fourier_fiber(&omega, f, 1));
        }
        InverseFourier { mode } => {
            check_mode(space, *mode)?;
            for_each_fiber(space, *mode, psi, |f| fourier_fiber(&omega, f, d - 1));
        }
        ShearP { mode, s } => {
            check_mode(space, *mode)?;
            // diag(ω^{−h s x²})
            let e = (d - h * residue(space, s)? % d) % d;
            for_each_fiber(space, *mode, psi, |f| shear_fiber(&omega, f, e));
        }
        ShearQ { mode, s } => {
            check_mode(space, *mode)?;
            // F · diag(ω^{h s x²}) · F†
            let e = h * residue(space, s)? % d;
            for_each_fiber(space, *mode, psi, |f| {
                fourier_fiber(&omega, f, d - 1);
                shear_fiber(&omega, f, e);
                fourier_fiber(&omega, f, 1);
            });
        }
        Scale { mode, k } => {
            check_mode(space, *mode)?;
            let k = residue(space, k)?;
            if k == 0 {
                return Err(Error::NonSymplectic);
            }
            for_each_fiber(space, *mode, psi, |f| {
                let old = f.to_vec();
                for (x, v) in old.into_iter().enumerate() {
                    f[(k as usize * x) % d as usize] = v;
                }
            });
        }
        Sum { control, target, c } => {
            check_mode(space, *control)?;
            check_mode(space, *target)?;
            if control == target {
                return Err(Error::NonSymplectic);
            }
            let c = residue(space, c)?;
            permute(space, psi, |digits| digits[*target] = (digits[*target] + c * digits[*control]) % d);
        }
        Swap { a, b } => {
            check_mode(space, *a)?;
            check_mode(space, *b)?;
            permute(space, psi, |digits| digits.swap(*a, *b));
        }
    }
    Ok(())
}

/// `|x⟩ ↦ |π(x)⟩` for a digit map `π`.
fn permute(space: &QuditSpace, psi: &mut [C64], map: impl Fn(&mut Vec<u64>)) {
    let old = psi.to_vec();
    for (x, v) in old.into_iter().enumerate() {
        let mut digits = space.digits(x);
        map(&mut digits);
        psi[space.index(&digits)] = v;
    }
}

fn apply_to_columns(space: &QuditSpace, g: &SymplecticGenerator, m: &mut Array2<C64>) -> Result<()> {
    let mut col = vec![C64::new(0.0, 0.0); m.nrows()];
    for c in 0..m.ncols() {
        for (r, slot) in col.iter_mut().enumerate() {
            *slot = m[(r, c)];
        }
        apply_generator(space, g, &mut col)?;
        for (r, v) in col.iter().enumerate() {
            m[(r, c)] = *v;
        }
    }
    Ok(())
}

/// Dense matrix of `V(g)`.
pub fn generator_unitary(space: &QuditSpace, g: &SymplecticGenerator) -> Result<DenseOperator> {
    let mut m = Array2::eye(space.dim());
    apply_to_columns(space, g, &mut m)?;
    Ok(DenseOperator::new_unchecked(m, true, false))
}

/// `V(S)` with `V(S) W(a) V(S)† = W(S a)`.
pub fn clifford_unitary(space: &QuditSpace, s: &Matrix) -> Result<DenseOperator> {
    space.check_kind(s.kind())?;
    if s.nrows() != 2 * space.modes() {
        return Err(Error::DimensionMismatch { expected: 2 * space.modes(), found: s.nrows() });
    }
    if !is_symplectic(s) {
        return Err(Error::NonSymplectic);
    }
    let gens = decompose_symplectic(s)?;
    let mut m = Array2::eye(space.dim());
    for g in gens.iter().rev() {
        apply_to_columns(space, g, &mut m)?;
    }
    Ok(DenseOperator::new_unchecked(m, true, false))
}

/// `W(a) V(S)` for the affine map `m ↦ S m + a`.
pub fn affine_clifford(space: &QuditSpace, t: &AffineSymplecticMap) -> Result<DenseOperator> {
    let v = clifford_unitary(space, t.matrix())?;
    let w = WeylOperator::new(*space, WeylLabel::from_point(space, t.shift())?).to_dense();
    Ok(w.matmul(&v))
}
