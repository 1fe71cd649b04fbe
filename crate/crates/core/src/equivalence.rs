//! Operational equivalence between the epistricted theory over `Z_d` and
//! the quantum stabilizer subtheory, checked case by case.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::epistricted::{enumerate_pure_states, random_epistemic_state, EpistemicState};
use crate::error::{Error, Result};
use crate::qudit::{affine_clifford, joint_pvm, DenseOperator, QuditSpace, C64};
use crate::scalar::{Kind, Prime};
use crate::symplectic::{enumerate_lagrangian, random_symplectic, AffineSymplecticMap, Subspace};
use crate::wigner::{wigner, WignerTable};

/// Float tolerance for every equivalence check.
pub const EQUIVALENCE_TOL: f64 = 1e-10;

/// One compared case. `epistricted` and `quantum` hold the two
/// distributions being compared, in the same outcome order.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub case_id: String,
    pub check: &'static str,
    pub epistricted: Vec<f64>,
    pub quantum: Vec<f64>,
    pub max_deviation: f64,
    /// Largest deviation between epistricted post-states and Lüders
    /// post-states, over possible outcomes; measurement checks only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub luders_deviation: Option<f64>,
    pub pass: bool,
}

fn space_of(state: &EpistemicState) -> Result<QuditSpace> {
    match state.kind() {
        Kind::Zd(p) => Ok(QuditSpace::from_prime(p, state.modes())),
        _ => Err(Error::UnsupportedKind("a finite-field state")),
    }
}

fn residues(values: &[crate::scalar::Scalar]) -> Vec<u64> {
    values.iter().map(|v| v.residue().expect("finite-field scalar")).collect()
}

/// `Π_V(v) / Tr Π_V(v)`.
pub fn epistemic_to_quantum(state: &EpistemicState) -> Result<DenseOperator> {
    let space = space_of(state)?;
    let pvm = joint_pvm(&space, state.known())?;
    let p = pvm.projector(&residues(state.values())).expect("every valuation is an outcome");
    let tr = p.trace().re;
    Ok(p.scale(C64::new(1.0 / tr, 0.0)))
}

/// Uniform distribution on the ontic support, as a table.
pub fn support_table(state: &EpistemicState) -> Result<WignerTable> {
    let space = space_of(state)?;
    let points = state.ontic_support().points()?;
    let weight = 1.0 / points.len() as f64;
    let mut values = vec![0.0; space.phase_space_size()];
    for m in &points {
        values[space.point_index(&residues(m.coords()))] = weight;
    }
    WignerTable::new(space, values)
}

fn finish(case_id: String, check: &'static str, epi: Vec<f64>, qu: Vec<f64>, extra: f64, luders: Option<f64>) -> EquivalenceReport {
    let dev = epi.iter().zip(&qu).fold(extra, |m, (a, b)| m.max((a - b).abs()));
    EquivalenceReport {
        case_id,
        check,
        epistricted: epi,
        quantum: qu,
        max_deviation: dev,
        luders_deviation: luders,
        pass: dev < EQUIVALENCE_TOL,
    }
}

/// The Wigner table of the quantized state against the uniform
/// distribution on the ontic support.
pub fn check_wigner_support(case_id: &str, state: &EpistemicState) -> Result<EquivalenceReport> {
    let rho = epistemic_to_quantum(state)?;
    let table = wigner(&space_of(state)?, &rho)?;
    let expected = support_table(state)?;
    Ok(finish(case_id.into(), "wigner_support", expected.values().to_vec(), table.values().to_vec(), 0.0, None))
}

/// Epistricted outcome probabilities against Born probabilities for every
/// valuation of `observable`, plus the post-state comparison.
pub fn check_measurement_statistics(case_id: &str, state: &EpistemicState, observable: &Subspace) -> Result<EquivalenceReport> {
    let space = space_of(state)?;
    let rho = epistemic_to_quantum(state)?;
    let measurement = state.measure(observable)?;
    let dist = measurement.distribution()?;
    let pvm = joint_pvm(&space, observable)?;
    let kind = state.kind();
    let mut epi = Vec::with_capacity(pvm.outcomes.len());
    let mut qu = Vec::with_capacity(pvm.outcomes.len());
    let mut luders: f64 = 0.0;
    for (v, proj) in &pvm.outcomes {
        let outcome: Vec<_> = v.iter().map(|&x| kind.from_i64(x as i64)).collect();
        let p_epi = dist.probability(&outcome).to_f64().expect("finite probability");
        let p_qu = rho.matmul(proj).trace().re;
        if p_epi > 0.0 {
            let classical = epistemic_to_quantum(&measurement.post_state(&outcome)?)?;
            let post = rho.conjugate_by(proj).scale(C64::new(1.0 / p_qu, 0.0));
            luders = luders.max(classical.max_abs_diff(&post));
        }
        epi.push(p_epi);
        qu.push(p_qu);
    }
    Ok(finish(case_id.into(), "measurement_statistics", epi, qu, 0.0, Some(luders)))
}

/// Quantize-after-transform against conjugation by `W(a) V(S)`. The
/// reported distributions are the Wigner tables of both sides.
pub fn check_transformation_covariance(case_id: &str, state: &EpistemicState, t: &AffineSymplecticMap) -> Result<EquivalenceReport> {
    let space = space_of(state)?;
    let moved = epistemic_to_quantum(&state.transform(t)?)?;
    let conjugated = epistemic_to_quantum(state)?.conjugate_by(&affine_clifford(&space, t)?);
    let op_dev = moved.max_abs_diff(&conjugated);
    let (a, b) = (wigner(&space, &moved)?, wigner(&space, &conjugated)?);
    Ok(finish(case_id.into(), "transformation_covariance", a.values().to_vec(), b.values().to_vec(), op_dev, None))
}

/// Every pure state's Wigner check and every (pure state, Lagrangian
/// measurement) pair, sorted by case id.
pub fn exhaustive_sweep(n: usize, d: Prime) -> Result<Vec<EquivalenceReport>> {
    let states = enumerate_pure_states(n, d)?;
    let lagrangians = enumerate_lagrangian(n, d)?;
    let width = states.len().to_string().len();
    let mwidth = lagrangians.len().to_string().len();
    let mut jobs: Vec<(String, usize, Option<usize>)> = Vec::new();
    for i in 0..states.len() {
        jobs.push((format!("wigner/s{i:0width$}"), i, None));
        for j in 0..lagrangians.len() {
            jobs.push((format!("measure/s{i:0width$}/m{j:0mwidth$}"), i, Some(j)));
        }
    }
    let mut reports = jobs
        .par_iter()
        .map(|(id, i, j)| match j {
            None => check_wigner_support(id, &states[*i]),
            Some(j) => check_measurement_statistics(id, &states[*i], &lagrangians[*j]),
        })
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| a.case_id.cmp(&b.case_id));
    Ok(reports)
}

/// Covariance checks on `cases` random states (every known-set dimension)
/// and random affine maps.
pub fn covariance_sweep(n: usize, d: Prime, cases: usize, seed: u64) -> Result<Vec<EquivalenceReport>> {
    let kind = Kind::Zd(d);
    let width = cases.to_string().len();
    let mut reports = (0..cases)
        .into_par_iter()
        .map(|i| {
            let s = seed.wrapping_mul(1_000_003).wrapping_add(i as u64);
            let state = random_epistemic_state(n, kind, i % (n + 1), s)?;
            let t = random_symplectic(n, kind, s ^ 0x5eed);
            check_transformation_covariance(&format!("covariance/{i:0width$}"), &state, &t)
        })
        .collect::<Result<Vec<_>>>()?;
    reports.sort_by(|a, b| a.case_id.cmp(&b.case_id));
    Ok(reports)
}

/// Smallest pairwise `‖ρ_i − ρ_j‖_max` over the quantized pure states, and
/// whether each is a rank-one projector.
pub fn pure_state_injectivity(n: usize, d: Prime) -> Result<(usize, f64, bool)> {
    let states = enumerate_pure_states(n, d)?;
    let ops = states.iter().map(epistemic_to_quantum).collect::<Result<Vec<_>>>()?;
    let rank_one = ops.iter().all(|p| p.rank(1e-9) == 1 && p.is_projector(EQUIVALENCE_TOL));
    let mut min = f64::INFINITY;
    for (i, a) in ops.iter().enumerate() {
        for b in &ops[i + 1..] {
            min = min.min(a.max_abs_diff(b));
        }
    }
    Ok((ops.len(), min, rank_one))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::SymplecticForm;

    fn z(d: u64) -> Kind {
        Kind::Zd(Prime::new(d).unwrap())
    }

    fn state(kind: Kind, n: usize, rows: &[&[i64]], vals: &[i64]) -> EpistemicState {
        EpistemicState::from_constraints(
            kind,
            n,
            rows.iter().map(|r| r.iter().map(|&x| kind.from_i64(x)).collect()).collect(),
            vals.iter().map(|&x| kind.from_i64(x)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn q_known_is_position_eigenstate() {
        let rho = epistemic_to_quantum(&state(z(3), 1, &[&[1, 0]], &[0])).unwrap();
        let mut expected = DenseOperator::zeros(3).into_entries();
        expected[(0, 0)] = C64::new(1.0, 0.0);
        assert!(rho.approx_eq(&DenseOperator::new(expected).unwrap(), 1e-12));
        let mixed = epistemic_to_quantum(&EpistemicState::maximally_ignorant(z(3), 1)).unwrap();
        assert!(mixed.approx_eq(&DenseOperator::identity(3).scale(C64::new(1.0 / 3.0, 0.0)), 1e-12));
    }

    #[test]
    fn injective_on_pure_states() {
        let (count, min, rank_one) = pure_state_injectivity(1, Prime::new(3).unwrap()).unwrap();
        assert_eq!(count, 12);
        assert!(rank_one);
        assert!(min > 0.1);
    }

    #[test]
    fn momentum_measurement_of_q_state() {
        let s = state(z(3), 1, &[&[1, 0]], &[0]);
        let p = Subspace::span(z(3), 2, vec![vec![z(3).zero(), z(3).one()]]).unwrap();
        let r = check_measurement_statistics("p", &s, &p).unwrap();
        assert!(r.pass);
        for x in r.epistricted.iter().chain(&r.quantum) {
            assert!((x - 1.0 / 3.0).abs() < 1e-12);
        }
        assert!(r.luders_deviation.unwrap() < 1e-10);
        let own = check_measurement_statistics("q", &s, s.known()).unwrap();
        assert_eq!(own.quantum.iter().filter(|&&x| x > 0.5).count(), 1);
    }

    #[test]
    fn exhaustive_d3() {
        let reports = exhaustive_sweep(1, Prime::new(3).unwrap()).unwrap();
        assert_eq!(reports.iter().filter(|r| r.check == "measurement_statistics").count(), 48);
        assert_eq!(reports.iter().filter(|r| r.check == "wigner_support").count(), 12);
        assert!(reports.iter().all(|r| r.pass && r.luders_deviation.unwrap_or(0.0) < 1e-10));
        assert!(reports.windows(2).all(|w| w[0].case_id < w[1].case_id));
    }

    #[test]
    fn mixed_states_and_partial_measurements() {
        let k = z(3);
        let ignorant = EpistemicState::maximally_ignorant(k, 2);
        let r = check_wigner_support("ignorant", &ignorant).unwrap();
        assert!(r.pass);
        for seed in 0..10 {
            let s = random_epistemic_state(2, k, seed as usize % 3, seed).unwrap();
            assert!(check_wigner_support("w", &s).unwrap().pass);
            let w = random_epistemic_state(2, k, 1 + seed as usize % 2, seed + 100).unwrap();
            let r = check_measurement_statistics("m", &s, w.known()).unwrap();
            assert!(r.pass, "{r:?}");
            assert!(r.luders_deviation.unwrap() < 1e-10);
        }
    }

    #[test]
    fn fourier_covariance() {
        let s = state(z(3), 1, &[&[1, 0]], &[1]);
        let t = AffineSymplecticMap::linear(SymplecticForm::new(1, z(3)).matrix()).unwrap();
        let r = check_transformation_covariance("fourier", &s, &t).unwrap();
        assert!(r.pass, "{r:?}");
        let id = AffineSymplecticMap::identity(z(3), 1);
        assert!(check_transformation_covariance("id", &s, &id).unwrap().pass);
    }

    #[test]
    fn covariance_random_d5() {
        let reports = covariance_sweep(2, Prime::new(5).unwrap(), 12, 3).unwrap();
        assert!(reports.iter().all(|r| r.max_deviation < 1e-9), "{:?}", reports.iter().map(|r| r.max_deviation).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_rational_states() {
        let s = state(Kind::Rational, 1, &[&[1, 0]], &[0]);
        assert!(epistemic_to_quantum(&s).is_err());
    }
}
