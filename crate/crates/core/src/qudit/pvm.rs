use ndarray::Array2;

use super::{clifford_unitary, DenseOperator, QuditSpace, C64, OPERATOR_TOL};
use crate::error::{Error, Result};
use crate::symplectic::{symplectic_completion, QuadratureFunctional, Subspace};

/// Projectors `Π_f(k)`, `k = 0..d`, onto the eigenspaces of `f = k`.
#[derive(Clone, Debug)]
pub struct QuadraturePvm {
    pub functional: QuadratureFunctional,
    pub projectors: Vec<DenseOperator>,
}

impl QuadraturePvm {
    pub fn projector(&self, k: u64) -> &DenseOperator {
        &self.projectors[k as usize]
    }

    pub fn is_complete(&self, tol: f64) -> bool {
        let dim = self.projectors[0].dim();
        let sum = self.projectors.iter().fold(DenseOperator::zeros(dim), |acc, p| acc.add(p));
        sum.approx_eq(&DenseOperator::identity(dim), tol)
    }

    pub fn is_idempotent(&self, tol: f64) -> bool {
        self.projectors.iter().all(|p| p.is_projector(tol))
    }
}

/// `Π_q(k) = |k⟩⟨k|` on `mode`.
pub fn position_pvm(space: &QuditSpace, mode: usize) -> Result<QuadraturePvm> {
    if mode >= space.modes() {
        return Err(Error::ModeOutOfRange { mode, modes: space.modes() });
    }
    let projectors = (0..space.d())
        .map(|k| {
            let diag = Array2::from_shape_fn((space.dim(), space.dim()), |(r, c)| {
                if r == c && space.digits(r)[mode] == k {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            });
            DenseOperator::new_unchecked(diag, false, true)
        })
        .collect();
    Ok(QuadraturePvm { functional: QuadratureFunctional::q(space.kind(), space.modes(), mode), projectors })
}

/// `Π_f(k) = V(S) Π_{q_1}(k − c) V(S)†` where `S` maps the `q_1`
/// functional to the linear part of `f`.
pub fn quadrature_pvm(space: &QuditSpace, f: &QuadratureFunctional) -> Result<QuadraturePvm> {
    space.check_kind(f.kind())?;
    if f.modes() != space.modes() {
        return Err(Error::DimensionMismatch { expected: space.modes(), found: f.modes() });
    }
    if f.is_linear_zero() {
        return Err(Error::ZeroFunctional);
    }
    // M e_{q_1} = f; functionals transform by S^{-T}, so S = M^{-T}
    let m = symplectic_completion(f.coeffs())?;
    let s = m.inverse().ok_or(Error::NonSymplectic)?.transpose();
    let v = clifford_unitary(space, &s)?;
    let base = position_pvm(space, 0)?;
    let d = space.d();
    let c = f.constant().residue().expect("finite-field scalar");
    let projectors = (0..d)
        .map(|k| {
            let p = base.projector((k + d - c) % d).conjugate_by(&v);
            DenseOperator::new_unchecked(p.into_entries(), false, true)
        })
        .collect();
    Ok(QuadraturePvm { functional: f.clone(), projectors })
}

/// Whether every pair of projectors from the listed PVMs commutes.
pub fn pvms_commute(space: &QuditSpace, fs: &[QuadratureFunctional]) -> Result<bool> {
    let pvms = fs.iter().map(|f| quadrature_pvm(space, f)).collect::<Result<Vec<_>>>()?;
    for (i, a) in pvms.iter().enumerate() {
        for b in &pvms[i + 1..] {
            for pa in &a.projectors {
                for pb in &b.projectors {
                    if !pa.commutes_with(pb, OPERATOR_TOL) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// `Π_V(v) = ∏_i Π_{f_i}(v_i)` over the canonical basis `f_i` of `V`;
/// outcomes in lexicographic order of `v`.
#[derive(Clone, Debug)]
pub struct JointPvm {
    pub observable: Subspace,
    pub outcomes: Vec<(Vec<u64>, DenseOperator)>,
}

impl JointPvm {
    pub fn projector(&self, v: &[u64]) -> Option<&DenseOperator> {
        self.outcomes.iter().find(|(o, _)| o.as_slice() == v).map(|(_, p)| p)
    }

    pub fn is_complete(&self, tol: f64) -> bool {
        let dim = self.outcomes[0].1.dim();
        let sum = self.outcomes.iter().fold(DenseOperator::zeros(dim), |acc, (_, p)| acc.add(p));
        sum.approx_eq(&DenseOperator::identity(dim), tol)
    }
}

pub fn joint_pvm(space: &QuditSpace, observable: &Subspace) -> Result<JointPvm> {
    space.check_kind(observable.kind())?;
    if observable.ambient_dim() != 2 * space.modes() {
        return Err(Error::DimensionMismatch { expected: 2 * space.modes(), found: observable.ambient_dim() });
    }
    if !observable.is_isotropic() {
        return Err(Error::NonIsotropicKnownSet);
    }
    let pvms = observable
        .basis()
        .rows()
        .map(|row| quadrature_pvm(space, &QuadratureFunctional::linear(row.to_vec())?))
        .collect::<Result<Vec<_>>>()?;
    let d = space.d();
    let k = pvms.len();
    let total = d.pow(k as u32);
    let mut outcomes = Vec::with_capacity(total as usize);
    for idx in 0..total {
        let mut v = vec![0u64; k];
        let mut rest = idx;
        for slot in v.iter_mut().rev() {
            *slot = rest % d;
            rest /= d;
        }
        let p = pvms
            .iter()
            .zip(&v)
            .fold(DenseOperator::identity(space.dim()), |acc, (pvm, &vi)| acc.matmul(pvm.projector(vi)));
        outcomes.push((v, DenseOperator::new_unchecked(p.into_entries(), false, true)));
    }
    Ok(JointPvm { observable: observable.clone(), outcomes })
}
