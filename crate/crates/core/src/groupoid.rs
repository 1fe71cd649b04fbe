//! The pair groupoid `Ω × Ω` of a linear phase space as a symplectic
//! groupoid, its identification with the cotangent bundle `T*Ω`, and the
//! vertical polarization.
//!
//! Everything is linear, so submanifold statements reduce to exact subspace
//! computations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Kind, Scalar};
use crate::symplectic::{PhaseSpacePoint, Subspace, SymplecticForm};

/// An arrow `source -> target` of the pair groupoid, written `(target, source)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PairGroupoidElement {
    target: PhaseSpacePoint,
    source: PhaseSpacePoint,
}

impl PairGroupoidElement {
    /// The arrow `(x, y)`, from `y` to `x`.
    pub fn new(x: PhaseSpacePoint, y: PhaseSpacePoint) -> Result<Self> {
        if x.coords().len() != y.coords().len() {
            return Err(Error::DimensionMismatch { expected: x.coords().len(), found: y.coords().len() });
        }
        if x.kind() != y.kind() {
            return Err(Error::KindMismatch);
        }
        Ok(PairGroupoidElement { target: x, source: y })
    }

    pub fn unit(x: PhaseSpacePoint) -> Self {
        PairGroupoidElement { target: x.clone(), source: x }
    }

    pub fn source(&self) -> &PhaseSpacePoint {
        &self.source
    }

    pub fn target(&self) -> &PhaseSpacePoint {
        &self.target
    }

    pub fn inverse(&self) -> Self {
        PairGroupoidElement { target: self.source.clone(), source: self.target.clone() }
    }

    /// `(a, b) . (b, c) = (a, c)`; defined when `self.source == h.target`.
    pub fn compose(&self, h: &PairGroupoidElement) -> Result<Self> {
        let matches = self.source.sub(&h.target)?.coords().iter().all(Scalar::is_zero);
        if !matches {
            return Err(Error::NotComposable);
        }
        Ok(PairGroupoidElement { target: self.target.clone(), source: h.source.clone() })
    }

    /// `(x, y)` as one vector of length `4n`.
    pub fn coords(&self) -> Vec<Scalar> {
        self.target.coords().iter().chain(self.source.coords()).cloned().collect()
    }
}

/// All five structure maps evaluated on a pair of arrows.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureMaps {
    pub source: PhaseSpacePoint,
    pub target: PhaseSpacePoint,
    pub compose: Result<PairGroupoidElement>,
    pub unit: PairGroupoidElement,
    pub inverse: PairGroupoidElement,
}

pub fn groupoid_structure_maps(g: &PairGroupoidElement, h: &PairGroupoidElement) -> StructureMaps {
    StructureMaps {
        source: g.source().clone(),
        target: g.target().clone(),
        compose: g.compose(h),
        unit: PairGroupoidElement::unit(g.source().clone()),
        inverse: g.inverse(),
    }
}

/// `σ((x, y), (z, w)) = ω(x, z) − ω(y, w)`: block-diag(J, −J).
pub fn groupoid_form(n: usize, kind: Kind) -> Matrix {
    let j = SymplecticForm::new(n, kind).matrix();
    Matrix::block_diag(kind, &[&j, &j.scale(&-kind.one())])
}

/// The form on three copies of the arrow space, each copy scaled by
/// `signs[i]`. The symplectic-groupoid condition uses `[1, -1, -1]`.
pub fn triple_form(n: usize, kind: Kind, signs: [i64; 3]) -> Matrix {
    let sigma = groupoid_form(n, kind);
    let blocks: Vec<Matrix> = signs.iter().map(|&s| sigma.scale(&kind.from_i64(s))).collect();
    Matrix::block_diag(kind, &[&blocks[0], &blocks[1], &blocks[2]])
}

/// Graph of multiplication `{((a, c), (a, b), (b, c))}` as a subspace of
/// dimension `6n` inside `(Ω ⊕ Ω̄)^3`.
pub fn multiplication_graph(n: usize, kind: Kind) -> Subspace {
    let d = 2 * n;
    // parameters (a, b, c); coordinate blocks [a c | a b | b c]
    let placement: [usize; 6] = [0, 2, 0, 1, 1, 2];
    let rows = (0..3 * d)
        .map(|param| {
            let (which, idx) = (param / d, param % d);
            let mut row = vec![kind.zero(); 6 * d];
            for (block, &src) in placement.iter().enumerate() {
                if src == which {
                    row[block * d + idx] = kind.one();
                }
            }
            row
        })
        .collect();
    Subspace::span(kind, 6 * d, rows).expect("well-formed rows")
}

pub fn multiplication_graph_is_lagrangian_with(n: usize, kind: Kind, signs: [i64; 3]) -> bool {
    multiplication_graph(n, kind).is_lagrangian_wrt(&triple_form(n, kind, signs)).expect("matching dimensions")
}

pub fn multiplication_graph_is_lagrangian(n: usize, kind: Kind) -> bool {
    multiplication_graph_is_lagrangian_with(n, kind, [1, -1, -1])
}

/// A point `(u, ξ)` of the linear cotangent chart; `ξ` pairs with vectors by
/// the plain dot product.
#[derive(Clone, Debug, PartialEq)]
pub struct CotangentPoint {
    pub base: Vec<Scalar>,
    pub fiber: Vec<Scalar>,
}

impl CotangentPoint {
    pub fn coords(&self) -> Vec<Scalar> {
        self.base.iter().chain(&self.fiber).cloned().collect()
    }
}

/// `Φ(x, y) = ((x + y) / 2, J (x − y))`.
pub fn phi_map(g: &PairGroupoidElement) -> CotangentPoint {
    let kind = g.target.kind();
    let half = kind.one() / kind.from_i64(2);
    let j = SymplecticForm::new(g.target.modes(), kind).matrix();
    let sum = g.target.add(&g.source).expect("same space");
    let diff = g.target.sub(&g.source).expect("same space");
    CotangentPoint {
        base: sum.coords().iter().map(|x| x * &half).collect(),
        fiber: j.mul_vec(diff.coords()).expect("square"),
    }
}

/// `Φ⁻¹(u, ξ) = (u − Jξ/2, u + Jξ/2)`, using `J⁻¹ = −J`.
pub fn phi_inverse(p: &CotangentPoint) -> Result<PairGroupoidElement> {
    if p.base.len() != p.fiber.len() || p.base.is_empty() {
        return Err(Error::DimensionMismatch { expected: p.base.len(), found: p.fiber.len() });
    }
    let kind = Kind::of_all(p.base.iter().chain(&p.fiber))?.expect("non-empty");
    let half = kind.one() / kind.from_i64(2);
    let j = SymplecticForm::new(p.base.len() / 2, kind).matrix();
    let jxi: Vec<Scalar> = j.mul_vec(&p.fiber)?.iter().map(|x| x * &half).collect();
    let x = p.base.iter().zip(&jxi).map(|(u, v)| u - v).collect();
    let y = p.base.iter().zip(&jxi).map(|(u, v)| u + v).collect();
    PairGroupoidElement::new(PhaseSpacePoint::new(x)?, PhaseSpacePoint::new(y)?)
}

/// Matrix of `Φ` on `(x, y)` coordinates: `[[I/2, I/2], [J, −J]]`.
pub fn phi_matrix(n: usize, kind: Kind) -> Matrix {
    let d = 2 * n;
    let half = kind.one() / kind.from_i64(2);
    let j = SymplecticForm::new(n, kind).matrix();
    Matrix::from_fn(kind, 2 * d, 2 * d, |r, c| match (r < d, c < d) {
        (true, _) if r == c % d => half.clone(),
        (true, _) => kind.zero(),
        (false, true) => j[(r - d, c)].clone(),
        (false, false) => -&j[(r - d, c - d)],
    })
}

/// Canonical form on the cotangent chart,
/// `σ*((u, ξ), (v, η)) = η·u − ξ·v`, matrix `[[0, I], [−I, 0]]`.
pub fn cotangent_form(n: usize, kind: Kind) -> Matrix {
    let d = 2 * n;
    Matrix::from_fn(kind, 2 * d, 2 * d, |r, c| {
        if r < d && c == r + d {
            kind.one()
        } else if r >= d && c + d == r {
            -kind.one()
        } else {
            kind.zero()
        }
    })
}

/// `M^T target M == source`: `M` pulls `target` back to `source`.
pub fn pulls_back(m: &Matrix, target: &Matrix, source: &Matrix) -> bool {
    m.transpose().mul(target).and_then(|t| t.mul(m)).map(|p| p.approx_eq(source)).unwrap_or(false)
}

/// `Φ*σ* = σ` as an exact matrix identity.
pub fn phi_is_symplectomorphism(n: usize, kind: Kind) -> bool {
    pulls_back(&phi_matrix(n, kind), &cotangent_form(n, kind), &groupoid_form(n, kind))
}

/// Fiber (momentum) directions `span{∂/∂ξ}` of the cotangent chart.
pub fn vertical_polarization(n: usize, kind: Kind) -> Subspace {
    let d = 2 * n;
    let rows = (0..d)
        .map(|i| {
            let mut r = vec![kind.zero(); 2 * d];
            r[d + i] = kind.one();
            r
        })
        .collect();
    Subspace::span(kind, 2 * d, rows).expect("well-formed")
}

/// Base directions `span{∂/∂u}` of the cotangent chart.
pub fn base_directions(n: usize, kind: Kind) -> Subspace {
    let d = 2 * n;
    let rows = (0..d)
        .map(|i| {
            let mut r = vec![kind.zero(); 2 * d];
            r[i] = kind.one();
            r
        })
        .collect();
    Subspace::span(kind, 2 * d, rows).expect("well-formed")
}

/// Coefficient table `Θ` of the potential `θ = −ξ du`: at the point `z`,
/// `θ_z(X) = z^T Θ X`.
pub fn potential_table(n: usize, kind: Kind) -> Matrix {
    let d = 2 * n;
    Matrix::from_fn(kind, 2 * d, 2 * d, |r, c| if r >= d && c + d == r { -kind.one() } else { kind.zero() })
}

/// `θ_P` at `point` contracted with `tangent`.
pub fn symplectic_potential(point: &CotangentPoint, tangent: &[Scalar]) -> Scalar {
    let theta = potential_table(point.base.len() / 2, point.base[0].kind());
    crate::scalar::dot(&point.coords(), &theta.mul_vec(tangent).expect("matching length"))
}

/// `dθ` for a linear one-form with table `Θ` is the constant form `Θ − Θ^T`.
pub fn potential_differential(n: usize, kind: Kind) -> Matrix {
    let theta = potential_table(n, kind);
    theta.sub(&theta.transpose()).expect("square")
}

/// One line of the `groupoid-check` report.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct AxiomCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn random_point(rng: &mut ChaCha8Rng, kind: Kind, n: usize) -> PhaseSpacePoint {
    let coords = (0..2 * n)
        .map(|_| match kind {
            Kind::Zd(p) => Scalar::Zd(rng.random_range(0..p.get()), p),
            Kind::Rational => kind.ratio(rng.random_range(-20..=20), rng.random_range(1..=6)),
            Kind::Float => Scalar::Float(rng.random_range(-10.0..10.0)),
        })
        .collect();
    PhaseSpacePoint::new(coords).expect("even length")
}

/// Runs every structural check on `samples` random composable triples.
pub fn groupoid_report(n: usize, kind: Kind, samples: usize, seed: u64) -> Vec<AxiomCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut assoc, mut unit, mut inverse, mut st, mut phi_rt, mut noncomp) = (0, 0, 0, 0, 0, 0);
    for _ in 0..samples {
        let pts: Vec<PhaseSpacePoint> = (0..4).map(|_| random_point(&mut rng, kind, n)).collect();
        let g = PairGroupoidElement::new(pts[0].clone(), pts[1].clone()).expect("same space");
        let h = PairGroupoidElement::new(pts[1].clone(), pts[2].clone()).expect("same space");
        let k = PairGroupoidElement::new(pts[2].clone(), pts[3].clone()).expect("same space");
        let lhs = g.compose(&h).and_then(|gh| gh.compose(&k));
        let rhs = h.compose(&k).and_then(|hk| g.compose(&hk));
        if lhs.is_ok() && lhs == rhs {
            assoc += 1;
        }
        let left = PairGroupoidElement::unit(g.target().clone()).compose(&g);
        let right = g.compose(&PairGroupoidElement::unit(g.source().clone()));
        if left.as_ref() == Ok(&g) && right.as_ref() == Ok(&g) {
            unit += 1;
        }
        let gi = g.inverse();
        if g.compose(&gi) == Ok(PairGroupoidElement::unit(g.target().clone()))
            && gi.compose(&g) == Ok(PairGroupoidElement::unit(g.source().clone()))
        {
            inverse += 1;
        }
        let gh = g.compose(&h).expect("composable by construction");
        if gh.source() == h.source() && gh.target() == g.target() {
            st += 1;
        }
        let back = phi_inverse(&phi_map(&g));
        if back.is_ok_and(|b| b.coords().iter().zip(g.coords().iter()).all(|(x, y)| x.approx_eq(y))) {
            phi_rt += 1;
        }
        let stray = PairGroupoidElement::new(pts[3].clone(), pts[0].clone()).expect("same space");
        let distinct = pts[1].sub(&pts[3]).map(|d| !d.coords().iter().all(Scalar::is_zero)).unwrap_or(false);
        if !distinct || g.compose(&stray) == Err(Error::NotComposable) {
            noncomp += 1;
        }
    }
    let count = |name: &str, ok: usize| AxiomCheck {
        name: name.to_string(),
        pass: ok == samples,
        detail: format!("{ok}/{samples}"),
    };
    let pol = vertical_polarization(n, kind);
    let sigma_star = cotangent_form(n, kind);
    let theta_vanishes = pol.basis().rows().all(|x| {
        // θ at a generic point contracted with each fiber direction
        let z = random_point(&mut rng, kind, 2 * n);
        let p = CotangentPoint { base: z.coords()[..2 * n].to_vec(), fiber: z.coords()[2 * n..].to_vec() };
        symplectic_potential(&p, x).is_zero()
    });
    let flag = |name: &str, pass: bool| AxiomCheck { name: name.to_string(), pass, detail: String::new() };
    vec![
        count("associativity", assoc),
        count("unit", unit),
        count("inverse", inverse),
        count("source_target", st),
        count("non_composable_rejected", noncomp),
        flag("multiplication_graph_lagrangian", multiplication_graph_is_lagrangian(n, kind)),
        flag("phi_symplectomorphism", phi_is_symplectomorphism(n, kind)),
        count("phi_round_trip", phi_rt),
        flag("polarization_lagrangian", pol.is_lagrangian_wrt(&sigma_star).unwrap_or(false)),
        flag("potential_vanishes_on_polarization", theta_vanishes),
        flag("potential_differential_is_cotangent_form", potential_differential(n, kind).approx_eq(&sigma_star)),
        flag(
            "polarization_transverse_to_base",
            pol.intersection(&base_directions(n, kind)).map(|s| s.dim() == 0).unwrap_or(false),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[i64]) -> PhaseSpacePoint {
        PhaseSpacePoint::from_i64(Kind::Rational, v).unwrap()
    }

    #[test]
    fn pair_composition() {
        let (a, b, c, d) = (pt(&[1, 2]), pt(&[3, 4]), pt(&[5, 6]), pt(&[7, 8]));
        let g = PairGroupoidElement::new(a.clone(), b.clone()).unwrap();
        let h = PairGroupoidElement::new(b.clone(), c.clone()).unwrap();
        assert_eq!(g.compose(&h).unwrap(), PairGroupoidElement::new(a.clone(), c.clone()).unwrap());
        assert_eq!(g.compose(&PairGroupoidElement::unit(b.clone())).unwrap(), g);
        let k = PairGroupoidElement::new(c, d).unwrap();
        assert_eq!(g.compose(&k), Err(Error::NotComposable));
        let maps = groupoid_structure_maps(&g, &h);
        assert_eq!(maps.source, b);
        assert_eq!(maps.target, a);
        assert_eq!(maps.inverse, PairGroupoidElement::new(pt(&[3, 4]), pt(&[1, 2])).unwrap());
    }

    #[test]
    fn graph_is_lagrangian() {
        for n in 1..=2 {
            let m = multiplication_graph(n, Kind::Rational);
            assert_eq!(m.dim(), 6 * n);
            assert_eq!(m.ambient_dim(), 12 * n);
            assert!(multiplication_graph_is_lagrangian(n, Kind::Rational));
        }
        assert!(!multiplication_graph_is_lagrangian_with(1, Kind::Rational, [1, 1, -1]));
        assert!(!multiplication_graph_is_lagrangian_with(1, Kind::Rational, [1, -1, 1]));
    }

    #[test]
    fn phi_examples() {
        let k = Kind::Rational;
        let m = pt(&[3, -1]);
        let unit = phi_map(&PairGroupoidElement::unit(m.clone()));
        assert_eq!(unit.base, m.coords());
        assert!(unit.fiber.iter().all(Scalar::is_zero));

        let g = PairGroupoidElement::new(pt(&[1, 0]), pt(&[0, 0])).unwrap();
        let p = phi_map(&g);
        assert_eq!(p.base, vec![k.ratio(1, 2), k.zero()]);
        assert_eq!(p.fiber, vec![k.zero(), k.from_i64(-1)]);
        assert_eq!(phi_inverse(&p).unwrap(), g);

        let coords = phi_matrix(1, k).mul_vec(&g.coords()).unwrap();
        assert_eq!(coords, p.coords());
    }

    #[test]
    fn phi_is_exact_symplectomorphism() {
        for n in 1..=3 {
            assert!(phi_is_symplectomorphism(n, Kind::Rational));
        }
        let doubled = phi_matrix(1, Kind::Rational).scale(&Kind::Rational.from_i64(2));
        assert!(!pulls_back(&doubled, &cotangent_form(1, Kind::Rational), &groupoid_form(1, Kind::Rational)));
    }

    #[test]
    fn polarization() {
        let k = Kind::Rational;
        let p = vertical_polarization(1, k);
        assert!(p.is_lagrangian_wrt(&cotangent_form(1, k)).unwrap());
        assert_eq!(p.intersection(&base_directions(1, k)).unwrap().dim(), 0);
        let point = CotangentPoint { base: vec![k.from_i64(2), k.from_i64(3)], fiber: vec![k.from_i64(5), k.from_i64(7)] };
        for x in p.basis().rows() {
            assert!(symplectic_potential(&point, x).is_zero());
        }
        // and it does not vanish on base directions at a point with ξ ≠ 0
        let e_u = vec![k.one(), k.zero(), k.zero(), k.zero()];
        assert_eq!(symplectic_potential(&point, &e_u), k.from_i64(-5));
        assert_eq!(potential_differential(1, k), cotangent_form(1, k));
    }

    #[test]
    fn report_passes() {
        let report = groupoid_report(2, Kind::Rational, 50, 1);
        assert!(report.iter().all(|c| c.pass), "{report:?}");
    }
}
