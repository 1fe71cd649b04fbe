//! Classical statistical theory of quadratures under the epistemic
//! restriction: an agent knows the values of a Poisson-commuting (isotropic)
//! set of linear functionals and nothing else.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{dot, Kind, Scalar};
use crate::symplectic::{AffineSymplecticMap, PhaseSpacePoint, QuadratureFunctional, Subspace};

/// Known set `V` (isotropic) and the value of each canonical basis row of `V`.
///
/// The known linear constraints are `b_i . m = values[i]` for the rows `b_i`
/// of `V`'s echelon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct EpistemicState {
    known: Subspace,
    values: Vec<Scalar>,
}

impl EpistemicState {
    /// Validates classical complementarity and the valuation length.
    pub fn new(known: Subspace, values: Vec<Scalar>) -> Result<Self> {
        if !known.ambient_dim().is_multiple_of(2) {
            return Err(Error::DimensionMismatch { expected: known.ambient_dim() + 1, found: known.ambient_dim() });
        }
        if values.len() != known.dim() {
            return Err(Error::DimensionMismatch { expected: known.dim(), found: values.len() });
        }
        if values.iter().any(|v| v.kind() != known.kind()) {
            return Err(Error::KindMismatch);
        }
        if !known.is_isotropic() {
            return Err(Error::NonIsotropicKnownSet);
        }
        Ok(EpistemicState { known, values })
    }

    /// State from arbitrary known functionals `rows[i] . m = values[i]`.
    /// Redundant rows are allowed if their values agree.
    pub fn from_constraints(kind: Kind, n: usize, rows: Vec<Vec<Scalar>>, values: Vec<Scalar>) -> Result<Self> {
        if rows.len() != values.len() {
            return Err(Error::DimensionMismatch { expected: rows.len(), found: values.len() });
        }
        let dim = 2 * n;
        let augmented: Vec<Vec<Scalar>> = rows
            .into_iter()
            .zip(values)
            .map(|(mut r, v)| {
                r.push(v);
                r
            })
            .collect();
        if let Some(bad) = augmented.iter().find(|r| r.len() != dim + 1) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.len() - 1 });
        }
        let (red, pivots) = Matrix::from_rows(kind, dim + 1, augmented)?.rref();
        if pivots.last() == Some(&dim) {
            return Err(Error::InconsistentValuation);
        }
        let linear = Matrix::from_fn(kind, red.nrows(), dim, |r, c| red[(r, c)].clone());
        let values = red.column(dim);
        Self::new(Subspace::from_matrix(&linear), values)
    }

    pub fn maximally_ignorant(kind: Kind, n: usize) -> Self {
        EpistemicState { known: Subspace::zero(kind, 2 * n), values: Vec::new() }
    }

    pub fn known(&self) -> &Subspace {
        &self.known
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn modes(&self) -> usize {
        self.known.ambient_dim() / 2
    }

    pub fn kind(&self) -> Kind {
        self.known.kind()
    }

    pub fn is_pure(&self) -> bool {
        self.known.is_lagrangian()
    }

    /// The value of `f` if its linear part lies in the known set.
    pub fn evaluate(&self, f: &QuadratureFunctional) -> Result<Option<Scalar>> {
        self.known.check_ambient(f.coeffs().len())?;
        if f.kind() != self.kind() {
            return Err(Error::KindMismatch);
        }
        Ok(self.known.coordinates(f.coeffs()).map(|c| {
            let mut acc = f.constant().clone();
            for (ci, vi) in c.iter().zip(&self.values) {
                acc = acc + ci * vi;
            }
            acc
        }))
    }

    /// Affine solution set of the valuation constraints.
    pub fn ontic_support(&self) -> OnticSupport {
        let kind = self.kind();
        let mut particular = vec![kind.zero(); self.known.ambient_dim()];
        for (&p, v) in self.known.pivots().iter().zip(&self.values) {
            particular[p] = v.clone();
        }
        OnticSupport {
            particular: PhaseSpacePoint::new(particular).expect("even ambient dimension"),
            directions: self.known.annihilator(),
        }
    }

    /// Pushes the state forward along `m -> S m + a`: constraints transform
    /// with `S^{-T}` and pick up `f' . a`.
    pub fn transform(&self, t: &AffineSymplecticMap) -> Result<EpistemicState> {
        self.known.check_ambient(t.matrix().nrows())?;
        if t.kind() != self.kind() {
            return Err(Error::KindMismatch);
        }
        let s_inv_t = t.matrix().inverse().ok_or(Error::NonSymplectic)?.transpose();
        let mut rows = Vec::with_capacity(self.known.dim());
        let mut values = Vec::with_capacity(self.known.dim());
        for (row, v) in self.known.basis().rows().zip(&self.values) {
            let f = s_inv_t.mul_vec(row)?;
            values.push(v + &dot(&f, t.shift().coords()));
            rows.push(f);
        }
        Self::from_constraints(self.kind(), self.modes(), rows, values)
    }

    /// Sharp measurement of the isotropic set `observable`.
    pub fn measure(&self, observable: &Subspace) -> Result<Measurement> {
        self.known.check_ambient(observable.ambient_dim())?;
        if observable.kind() != self.kind() {
            return Err(Error::KindMismatch);
        }
        if !observable.is_isotropic() {
            return Err(Error::NonIsotropicKnownSet);
        }
        let support = self.ontic_support();
        let w = observable.basis();
        let offset = w.mul_vec(support.particular.coords())?;
        // outcome = W m ranges over offset + W K as m ranges over the support
        let spread = Subspace::from_matrix(&w.mul(&support.directions.basis().transpose())?.transpose());
        Ok(Measurement { state: self.clone(), observable: observable.clone(), offset, spread })
    }
}

/// Solution set `particular + span(directions)` of a state's constraints.
#[derive(Clone, Debug, PartialEq)]
pub struct OnticSupport {
    pub particular: PhaseSpacePoint,
    pub directions: Subspace,
}

impl OnticSupport {
    pub fn dim(&self) -> usize {
        self.directions.dim()
    }

    pub fn contains(&self, m: &PhaseSpacePoint) -> bool {
        m.sub(&self.particular).map(|d| self.directions.contains(d.coords())).unwrap_or(false)
    }

    /// All points of the support; finite fields only.
    pub fn points(&self) -> Result<Vec<PhaseSpacePoint>> {
        let kind = self.particular.kind();
        let Kind::Zd(p) = kind else {
            return Err(Error::InfiniteOutcomeSet);
        };
        Ok(affine_points(p.get(), kind, self.particular.coords(), self.directions.basis())
            .into_iter()
            .map(|c| PhaseSpacePoint::new(c).expect("even length"))
            .collect())
    }
}

fn affine_points(d: u64, kind: Kind, offset: &[Scalar], basis: &Matrix) -> Vec<Vec<Scalar>> {
    let k = basis.nrows();
    let total = d.pow(k as u32);
    let mut out = Vec::with_capacity(total as usize);
    let mut digits = vec![0u64; k];
    for _ in 0..total {
        let mut v = offset.to_vec();
        for (c, row) in digits.iter().zip(basis.rows()) {
            let c = kind.from_i64(*c as i64);
            for (x, b) in v.iter_mut().zip(row) {
                *x = &*x + &(&c * b);
            }
        }
        out.push(v);
        for x in digits.iter_mut().rev() {
            *x += 1;
            if *x < d {
                break;
            }
            *x = 0;
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("same kind"));
    out
}

/// The result of measuring an isotropic set on a state: outcomes are
/// valuations of the observable's canonical basis rows.
#[derive(Clone, Debug)]
pub struct Measurement {
    state: EpistemicState,
    observable: Subspace,
    offset: Vec<Scalar>,
    spread: Subspace,
}

/// Outcome valuations with exact probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementOutcomeDistribution {
    pub entries: Vec<(Vec<Scalar>, BigRational)>,
}

impl MeasurementOutcomeDistribution {
    pub fn total(&self) -> BigRational {
        self.entries.iter().fold(BigRational::zero(), |acc, (_, p)| acc + p)
    }

    pub fn probability(&self, outcome: &[Scalar]) -> BigRational {
        self.entries.iter().find(|(o, _)| o.as_slice() == outcome).map(|(_, p)| p.clone()).unwrap_or_else(BigRational::zero)
    }
}

impl Measurement {
    pub fn observable(&self) -> &Subspace {
        &self.observable
    }

    /// Whether the outcome is determined by the state.
    pub fn is_certain(&self) -> bool {
        self.spread.dim() == 0
    }

    /// The certain outcome, if any.
    pub fn certain_outcome(&self) -> Option<&[Scalar]> {
        self.is_certain().then_some(self.offset.as_slice())
    }

    /// Consistent outcomes form `offset + spread`.
    pub fn consistent_set(&self) -> (&[Scalar], &Subspace) {
        (&self.offset, &self.spread)
    }

    pub fn is_possible(&self, outcome: &[Scalar]) -> bool {
        outcome.len() == self.offset.len()
            && outcome.iter().all(|x| x.kind() == self.state.kind())
            && self.spread.contains(&outcome.iter().zip(&self.offset).map(|(a, b)| a - b).collect::<Vec<_>>())
    }

    /// Consistent outcomes in lexicographic order; infinite over Q/R unless
    /// the measurement is certain.
    pub fn outcomes(&self) -> Result<Vec<Vec<Scalar>>> {
        match self.state.kind() {
            Kind::Zd(p) => Ok(affine_points(p.get(), self.state.kind(), &self.offset, self.spread.basis())),
            _ if self.is_certain() => Ok(vec![self.offset.clone()]),
            _ => Err(Error::InfiniteOutcomeSet),
        }
    }

    /// Uniform over the consistent outcomes.
    pub fn distribution(&self) -> Result<MeasurementOutcomeDistribution> {
        let outcomes = self.outcomes()?;
        let p = BigRational::new(BigInt::one(), BigInt::from(outcomes.len()));
        Ok(MeasurementOutcomeDistribution { entries: outcomes.into_iter().map(|o| (o, p.clone())).collect() })
    }

    /// Post-measurement state: known set `W + (V ∩ W^⊥)`, with the observed
    /// outcome on `W` and the retained values on `V ∩ W^⊥`.
    pub fn post_state(&self, outcome: &[Scalar]) -> Result<EpistemicState> {
        if !self.is_possible(outcome) {
            return Err(Error::ImpossibleOutcome);
        }
        let retained = self.state.known.intersection(&self.observable.omega_complement())?;
        let mut rows: Vec<Vec<Scalar>> = self.observable.basis().rows().map(|r| r.to_vec()).collect();
        let mut values = outcome.to_vec();
        for row in retained.basis().rows() {
            let f = QuadratureFunctional::linear(row.to_vec())?;
            values.push(self.state.evaluate(&f)?.expect("retained functionals are known"));
            rows.push(row.to_vec());
        }
        EpistemicState::from_constraints(self.state.kind(), self.state.modes(), rows, values)
    }
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    kind: Kind,
    #[serde(rename = "V")]
    known: Vec<Vec<String>>,
    #[serde(rename = "v")]
    values: Vec<String>,
    modes: usize,
}

impl Serialize for EpistemicState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StateRepr {
            kind: self.kind(),
            known: self.known.basis().rows().map(|r| r.iter().map(Scalar::to_string).collect()).collect(),
            values: self.values.iter().map(Scalar::to_string).collect(),
            modes: self.modes(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EpistemicState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = StateRepr::deserialize(d)?;
        let parse = |x: &String| repr.kind.parse(x).map_err(D::Error::custom);
        let rows = repr.known.iter().map(|r| r.iter().map(parse).collect()).collect::<std::result::Result<_, _>>()?;
        let values = repr.values.iter().map(parse).collect::<std::result::Result<_, _>>()?;
        EpistemicState::from_constraints(repr.kind, repr.modes, rows, values).map_err(D::Error::custom)
    }
}

/// Every pure state of `n` modes over `Z_d`: each Lagrangian subspace with
/// each of its `d^n` valuations.
pub fn enumerate_pure_states(n: usize, d: crate::scalar::Prime) -> Result<Vec<EpistemicState>> {
    let kind = Kind::Zd(d);
    let mut out = Vec::new();
    for v in crate::symplectic::enumerate_lagrangian(n, d)? {
        let zero = vec![kind.zero(); n];
        let unit = Matrix::identity(kind, n);
        for vals in affine_points(d.get(), kind, &zero, &unit) {
            out.push(EpistemicState::new(v.clone(), vals)?);
        }
    }
    Ok(out)
}

/// A random state on `n` modes with a known set of dimension `known_dim`:
/// `q_1 … q_k` with random values, pushed through a random affine map.
pub fn random_epistemic_state(n: usize, kind: Kind, known_dim: usize, seed: u64) -> Result<EpistemicState> {
    use rand::{Rng, SeedableRng};
    if known_dim > n {
        return Err(Error::NonIsotropicKnownSet);
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..known_dim)
        .map(|i| {
            let mut r = vec![kind.zero(); 2 * n];
            r[2 * i] = kind.one();
            r
        })
        .collect();
    let values = (0..known_dim)
        .map(|_| match kind {
            Kind::Zd(p) => Scalar::Zd(rng.random_range(0..p.get()), p),
            Kind::Rational => kind.from_i64(rng.random_range(-9..=9)),
            Kind::Float => Scalar::Float(rng.random_range(-5.0..5.0)),
        })
        .collect();
    let base = EpistemicState::from_constraints(kind, n, rows, values)?;
    base.transform(&crate::symplectic::random_symplectic(n, kind, rng.random()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Prime;
    use crate::symplectic::SymplecticForm;

    fn z3() -> Kind {
        Kind::Zd(Prime::new(3).unwrap())
    }

    fn state(kind: Kind, n: usize, rows: &[&[i64]], vals: &[i64]) -> Result<EpistemicState> {
        EpistemicState::from_constraints(
            kind,
            n,
            rows.iter().map(|r| r.iter().map(|&x| kind.from_i64(x)).collect()).collect(),
            vals.iter().map(|&x| kind.from_i64(x)).collect(),
        )
    }

    #[test]
    fn make_state_examples() {
        let s = state(Kind::Rational, 1, &[&[1, 0]], &[0]).unwrap();
        assert!(s.is_pure());
        assert_eq!(state(Kind::Rational, 1, &[&[1, 0], &[0, 1]], &[0, 0]), Err(Error::NonIsotropicKnownSet));
        let s2 = state(z3(), 2, &[&[1, 0, 0, 0], &[0, 0, 1, 0]], &[1, 2]).unwrap();
        assert!(s2.is_pure());
        assert_eq!(
            state(Kind::Rational, 1, &[&[1, 0], &[2, 0]], &[1, 1]),
            Err(Error::InconsistentValuation)
        );
    }

    #[test]
    fn evaluate_examples() {
        let k = Kind::Rational;
        let s = state(k, 1, &[&[1, 0]], &[2]).unwrap();
        let q_plus_5 = QuadratureFunctional::from_i64(k, &[1, 0], 5).unwrap();
        assert_eq!(s.evaluate(&q_plus_5).unwrap(), Some(k.from_i64(7)));
        assert_eq!(s.evaluate(&QuadratureFunctional::p(k, 1, 0)).unwrap(), None);
        let s3 = state(z3(), 1, &[&[1, 0]], &[1]).unwrap();
        let two_q = QuadratureFunctional::from_i64(z3(), &[2, 0], 0).unwrap();
        assert_eq!(s3.evaluate(&two_q).unwrap(), Some(z3().from_i64(2)));
    }

    #[test]
    fn support_of_q_known_state() {
        let s = state(z3(), 1, &[&[1, 0]], &[0]).unwrap();
        let pts = s.ontic_support().points().unwrap();
        let expect: Vec<_> = (0..3).map(|p| PhaseSpacePoint::from_i64(z3(), &[0, p]).unwrap()).collect();
        assert_eq!(pts, expect);
        let ignorant = EpistemicState::maximally_ignorant(z3(), 1);
        assert_eq!(ignorant.ontic_support().points().unwrap().len(), 9);
    }

    #[test]
    fn displacement_shifts_values() {
        let k = Kind::Rational;
        let s = state(k, 1, &[&[1, 0]], &[2]).unwrap();
        let a = PhaseSpacePoint::from_i64(k, &[3, 4]).unwrap();
        let t = AffineSymplecticMap::displacement(a);
        let moved = s.transform(&t).unwrap();
        assert_eq!(moved.known(), s.known());
        assert_eq!(moved.values(), &[k.from_i64(5)]);
    }

    #[test]
    fn fourier_maps_q_known_to_p_known() {
        let t = AffineSymplecticMap::linear(SymplecticForm::new(1, z3()).matrix()).unwrap();
        let s = state(z3(), 1, &[&[1, 0]], &[1]).unwrap();
        let moved = s.transform(&t).unwrap();
        // support {(1, p)} maps to {(p, -1)}: p-known with value -1 = 2
        assert_eq!(moved, state(z3(), 1, &[&[0, 1]], &[2]).unwrap());
    }

    #[test]
    fn measurement_examples() {
        let s = state(z3(), 1, &[&[1, 0]], &[0]).unwrap();
        let q = s.known().clone();
        let m = s.measure(&q).unwrap();
        assert!(m.is_certain());
        assert_eq!(m.post_state(&[z3().zero()]).unwrap(), s);

        let p = Subspace::span(z3(), 2, vec![vec![z3().zero(), z3().one()]]).unwrap();
        let m = s.measure(&p).unwrap();
        let dist = m.distribution().unwrap();
        assert_eq!(dist.entries.len(), 3);
        assert!(dist.entries.iter().all(|(_, pr)| *pr == BigRational::new(1.into(), 3.into())));
        let post = m.post_state(&[z3().from_i64(2)]).unwrap();
        assert_eq!(post, state(z3(), 1, &[&[0, 1]], &[2]).unwrap());

        let s2 = state(z3(), 2, &[&[1, 0, 0, 0], &[0, 0, 1, 0]], &[1, 2]).unwrap();
        let q1 = Subspace::span(z3(), 4, vec![[1, 0, 0, 0].iter().map(|&x| z3().from_i64(x)).collect()]).unwrap();
        let m = s2.measure(&q1).unwrap();
        assert_eq!(m.certain_outcome().unwrap(), &[z3().one()]);
        assert_eq!(m.post_state(&[z3().one()]).unwrap(), s2);
    }

    #[test]
    fn measuring_non_isotropic_rejected() {
        let s = EpistemicState::maximally_ignorant(z3(), 1);
        assert_eq!(s.measure(&Subspace::full(z3(), 2)).unwrap_err(), Error::NonIsotropicKnownSet);
    }

    #[test]
    fn real_backend_reports_sets_not_densities() {
        let k = Kind::Rational;
        let s = state(k, 1, &[&[1, 0]], &[2]).unwrap();
        let p = Subspace::span(k, 2, vec![vec![k.zero(), k.one()]]).unwrap();
        let m = s.measure(&p).unwrap();
        assert!(!m.is_certain());
        assert_eq!(m.distribution().unwrap_err(), Error::InfiniteOutcomeSet);
        assert!(m.is_possible(&[k.ratio(7, 3)]));
        let q = s.known().clone();
        let m = s.measure(&q).unwrap();
        assert_eq!(m.distribution().unwrap().entries, vec![(vec![k.from_i64(2)], BigRational::one())]);
    }

    #[test]
    fn pure_state_counts() {
        assert_eq!(enumerate_pure_states(1, Prime::new(3).unwrap()).unwrap().len(), 12);
        assert_eq!(enumerate_pure_states(1, Prime::new(5).unwrap()).unwrap().len(), 30);
    }

    #[test]
    fn json_round_trip() {
        let s = state(z3(), 2, &[&[1, 2, 0, 0], &[0, 0, 1, 0]], &[1, 2]).unwrap();
        let back: EpistemicState = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        assert_eq!(back, s);
    }
}
