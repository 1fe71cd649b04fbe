//! Elementary symplectic maps, random sampling, and the elimination that
//! factors any symplectic matrix into elementary maps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Kind, Scalar};

use super::{is_symplectic, AffineSymplecticMap, PhaseSpacePoint, SymplecticForm};

/// An elementary symplectic map on phase space (acting on column vectors).
#[derive(Clone, Debug, PartialEq)]
pub enum SymplecticGenerator {
    /// `(q, p) -> (p, -q)` on one mode.
    Fourier { mode: usize },
    /// `(q, p) -> (-p, q)` on one mode.
    InverseFourier { mode: usize },
    /// `(q, p) -> (q, p + s q)`.
    ShearP { mode: usize, s: Scalar },
    /// `(q, p) -> (q + s p, p)`.
    ShearQ { mode: usize, s: Scalar },
    /// `(q, p) -> (k q, p / k)`.
    Scale { mode: usize, k: Scalar },
    /// `q_target += c q_control`, `p_control -= c p_target`.
    Sum { control: usize, target: usize, c: Scalar },
    Swap { a: usize, b: usize },
}

impl SymplecticGenerator {
    /// Applies the map in place to a phase-space vector.
    pub fn act(&self, v: &mut [Scalar]) {
        use SymplecticGenerator::*;
        match self {
            Fourier { mode } => {
                let (q, p) = (v[2 * mode].clone(), v[2 * mode + 1].clone());
                v[2 * mode] = p;
                v[2 * mode + 1] = -q;
            }
            InverseFourier { mode } => {
                let (q, p) = (v[2 * mode].clone(), v[2 * mode + 1].clone());
                v[2 * mode] = -p;
                v[2 * mode + 1] = q;
            }
            ShearP { mode, s } => {
                v[2 * mode + 1] = &v[2 * mode + 1] + &(s * &v[2 * mode]);
            }
            ShearQ { mode, s } => {
                v[2 * mode] = &v[2 * mode] + &(s * &v[2 * mode + 1]);
            }
            Scale { mode, k } => {
                v[2 * mode] = &v[2 * mode] * k;
                v[2 * mode + 1] = &v[2 * mode + 1] / k;
            }
            Sum { control, target, c } => {
                let qt = &v[2 * target] + &(c * &v[2 * control]);
                let pc = &v[2 * control + 1] - &(c * &v[2 * target + 1]);
                v[2 * target] = qt;
                v[2 * control + 1] = pc;
            }
            Swap { a, b } => {
                v.swap(2 * a, 2 * b);
                v.swap(2 * a + 1, 2 * b + 1);
            }
        }
    }

    pub fn inverse(&self) -> SymplecticGenerator {
        use SymplecticGenerator::*;
        match self {
            Fourier { mode } => InverseFourier { mode: *mode },
            InverseFourier { mode } => Fourier { mode: *mode },
            ShearP { mode, s } => ShearP { mode: *mode, s: -s },
            ShearQ { mode, s } => ShearQ { mode: *mode, s: -s },
            Scale { mode, k } => Scale { mode: *mode, k: k.inv().expect("nonzero scale") },
            Sum { control, target, c } => Sum { control: *control, target: *target, c: -c },
            Swap { a, b } => Swap { a: *a, b: *b },
        }
    }

    pub fn matrix(&self, n: usize, kind: Kind) -> Matrix {
        let mut m = Matrix::identity(kind, 2 * n);
        for c in 0..2 * n {
            let mut col = m.column(c);
            self.act(&mut col);
            m.set_column(c, &col);
        }
        m
    }
}

/// Factors a symplectic `S` as `S = G_1 G_2 ... G_k` (leftmost applied last).
///
/// Works over any field: mode by mode, elementary maps send `S e_q` to
/// `e_q` and then `S e_p` to `e_p` while fixing `e_q`; symplecticity forces
/// the remaining columns into the other modes.
pub fn decompose_symplectic(s: &Matrix) -> Result<Vec<SymplecticGenerator>> {
    if !is_symplectic(s) {
        return Err(Error::NonSymplectic);
    }
    let n = s.nrows() / 2;
    let kind = s.kind();
    let mut cols: Vec<Vec<Scalar>> = (0..2 * n).map(|c| s.column(c)).collect();
    let mut applied: Vec<SymplecticGenerator> = Vec::new();
    let mut apply = |g: SymplecticGenerator, cols: &mut Vec<Vec<Scalar>>| {
        for col in cols.iter_mut() {
            g.act(col);
        }
        applied.push(g);
    };

    for m in 0..n {
        // column image of q_m -> e_{q_m}
        let qm = 2 * m;
        let j = (m..n)
            .find(|&j| !cols[qm][2 * j].is_zero() || !cols[qm][2 * j + 1].is_zero())
            .ok_or(Error::NonSymplectic)?;
        if j != m {
            apply(SymplecticGenerator::Swap { a: m, b: j }, &mut cols);
        }
        if cols[qm][2 * m].is_zero() {
            apply(SymplecticGenerator::Fourier { mode: m }, &mut cols);
        }
        if !cols[qm][2 * m + 1].is_zero() {
            let s = -(&cols[qm][2 * m + 1] / &cols[qm][2 * m]);
            apply(SymplecticGenerator::ShearP { mode: m, s }, &mut cols);
        }
        if !cols[qm][2 * m].is_one() {
            let k = cols[qm][2 * m].inv().expect("nonzero");
            apply(SymplecticGenerator::Scale { mode: m, k }, &mut cols);
        }
        for k in m + 1..n {
            let a = cols[qm][2 * k].clone();
            if !a.is_zero() {
                apply(SymplecticGenerator::Sum { control: m, target: k, c: -a }, &mut cols);
            }
            let b = cols[qm][2 * k + 1].clone();
            if !b.is_zero() {
                apply(SymplecticGenerator::Fourier { mode: k }, &mut cols);
                apply(SymplecticGenerator::Sum { control: m, target: k, c: -b }, &mut cols);
            }
        }
        if !cols[qm][2 * m + 1].is_zero() {
            let s = -cols[qm][2 * m + 1].clone();
            apply(SymplecticGenerator::ShearP { mode: m, s }, &mut cols);
        }

        // column image of p_m -> e_{p_m}, keeping e_{q_m} fixed
        let pm = 2 * m + 1;
        for k in m + 1..n {
            let b = cols[pm][2 * k + 1].clone();
            if !b.is_zero() {
                apply(SymplecticGenerator::Sum { control: k, target: m, c: b }, &mut cols);
            }
            let a = cols[pm][2 * k].clone();
            if !a.is_zero() {
                apply(SymplecticGenerator::Fourier { mode: k }, &mut cols);
                apply(SymplecticGenerator::Sum { control: k, target: m, c: -a }, &mut cols);
            }
        }
        if !cols[pm][2 * m].is_zero() {
            let s = -cols[pm][2 * m].clone();
            apply(SymplecticGenerator::ShearQ { mode: m, s }, &mut cols);
        }
    }

    let id = Matrix::identity(kind, 2 * n);
    debug_assert!((0..2 * n).all(|c| cols[c].iter().zip(id.column(c)).all(|(a, b)| a.approx_eq(&b))));
    Ok(applied.iter().map(SymplecticGenerator::inverse).collect())
}

/// A symplectic matrix whose first column is `f` (nonzero), obtained by
/// symplectic Gram-Schmidt. Columns come in pairs `(e_i, f_i)` with
/// `<e_i, f_i> = 1` and all other pairings zero.
pub fn symplectic_completion(f: &[Scalar]) -> Result<Matrix> {
    let kind = Kind::of_all(f)?.ok_or(Error::ZeroFunctional)?;
    if !f.len().is_multiple_of(2) {
        return Err(Error::DimensionMismatch { expected: f.len() + 1, found: f.len() });
    }
    if f.iter().all(Scalar::is_zero) {
        return Err(Error::ZeroFunctional);
    }
    let dim = f.len();
    let mut pool: Vec<Vec<Scalar>> = Vec::with_capacity(dim + 1);
    pool.push(f.to_vec());
    pool.extend(Matrix::identity(kind, dim).rows().map(|r| r.to_vec()));

    let mut out = Matrix::zeros(kind, dim, dim);
    for pair in 0..dim / 2 {
        let e_idx = pool.iter().position(|v| !v.iter().all(Scalar::is_zero)).ok_or(Error::ZeroFunctional)?;
        let e = pool.remove(e_idx);
        let f_idx = pool
            .iter()
            .position(|v| !SymplecticForm::eval(&e, v).is_zero())
            .ok_or(Error::NonSymplectic)?;
        let raw = pool.remove(f_idx);
        let w = SymplecticForm::eval(&e, &raw).inv().expect("nonzero pairing");
        let g: Vec<Scalar> = raw.iter().map(|x| x * &w).collect();
        for v in pool.iter_mut() {
            // v <- v - <v, g> e + <v, e> g
            let vg = SymplecticForm::eval(v, &g);
            let ve = SymplecticForm::eval(v, &e);
            for i in 0..dim {
                v[i] = &v[i] - &(&vg * &e[i]) + &ve * &g[i];
            }
        }
        out.set_column(2 * pair, &e);
        out.set_column(2 * pair + 1, &g);
    }
    debug_assert!(is_symplectic(&out));
    Ok(out)
}

fn random_scalar(rng: &mut ChaCha8Rng, kind: Kind) -> Scalar {
    match kind {
        Kind::Zd(p) => Scalar::Zd(rng.random_range(0..p.get()), p),
        Kind::Rational => kind.from_i64(rng.random_range(-3..=3)),
        Kind::Float => Scalar::Float(rng.random_range(-1.0..1.0)),
    }
}

fn random_unit(rng: &mut ChaCha8Rng, kind: Kind) -> Scalar {
    match kind {
        Kind::Zd(p) => Scalar::Zd(rng.random_range(1..p.get()), p),
        Kind::Rational => {
            let num = [1, 2, 3][rng.random_range(0..3)];
            let den = [1, 2][rng.random_range(0..2)];
            let sign = if rng.random_bool(0.5) { 1 } else { -1 };
            kind.ratio(sign * num, den)
        }
        Kind::Float => {
            let mag = rng.random_range(0.5..2.0);
            Scalar::Float(if rng.random_bool(0.5) { mag } else { -mag })
        }
    }
}

/// Draws a random generator on `n` modes.
pub fn random_generator(rng: &mut ChaCha8Rng, n: usize, kind: Kind) -> SymplecticGenerator {
    let mode = rng.random_range(0..n);
    let pick = if n > 1 { rng.random_range(0..6) } else { rng.random_range(0..4) };
    match pick {
        0 => SymplecticGenerator::Fourier { mode },
        1 => SymplecticGenerator::ShearP { mode, s: random_scalar(rng, kind) },
        2 => SymplecticGenerator::ShearQ { mode, s: random_scalar(rng, kind) },
        3 => SymplecticGenerator::Scale { mode, k: random_unit(rng, kind) },
        4 | 5 => {
            let other = (mode + 1 + rng.random_range(0..n - 1)) % n;
            if pick == 4 {
                SymplecticGenerator::Sum { control: mode, target: other, c: random_scalar(rng, kind) }
            } else {
                SymplecticGenerator::Swap { a: mode, b: other }
            }
        }
        _ => unreachable!(),
    }
}

/// Deterministic random affine symplectic map: a product of `8n` random
/// elementary maps and a random displacement.
pub fn random_symplectic(n: usize, kind: Kind, seed: u64) -> AffineSymplecticMap {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = Matrix::identity(kind, 2 * n);
    for _ in 0..8 * n {
        let g = random_generator(&mut rng, n, kind);
        for c in 0..2 * n {
            let mut col = s.column(c);
            g.act(&mut col);
            s.set_column(c, &col);
        }
    }
    let shift = PhaseSpacePoint::new((0..2 * n).map(|_| random_scalar(&mut rng, kind)).collect())
        .expect("even length");
    AffineSymplecticMap::new(s, shift).expect("products of generators are symplectic")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Prime;

    fn z(d: u64) -> Kind {
        Kind::Zd(Prime::new(d).unwrap())
    }

    #[test]
    fn every_generator_is_symplectic() {
        let k = Kind::Rational;
        let gens = [
            SymplecticGenerator::Fourier { mode: 1 },
            SymplecticGenerator::InverseFourier { mode: 0 },
            SymplecticGenerator::ShearP { mode: 0, s: k.from_i64(3) },
            SymplecticGenerator::ShearQ { mode: 1, s: k.from_i64(-2) },
            SymplecticGenerator::Scale { mode: 0, k: k.ratio(2, 3) },
            SymplecticGenerator::Sum { control: 0, target: 1, c: k.from_i64(5) },
            SymplecticGenerator::Swap { a: 0, b: 1 },
        ];
        for g in gens {
            let m = g.matrix(2, k);
            assert!(is_symplectic(&m), "{g:?}");
            let back = g.inverse().matrix(2, k);
            assert_eq!(m.mul(&back).unwrap(), Matrix::identity(k, 4), "{g:?}");
        }
    }

    #[test]
    fn random_is_deterministic() {
        let a = random_symplectic(2, z(5), 17);
        let b = random_symplectic(2, z(5), 17);
        assert_eq!(a, b);
        assert_ne!(a, random_symplectic(2, z(5), 18));
    }

    #[test]
    fn hundred_samples_are_symplectic() {
        for seed in 0..100 {
            assert!(is_symplectic(random_symplectic(2, z(5), seed).matrix()));
        }
    }

    #[test]
    fn products_are_symplectic() {
        let a = random_symplectic(2, Kind::Rational, 1);
        let b = random_symplectic(2, Kind::Rational, 2);
        assert!(is_symplectic(&a.matrix().mul(b.matrix()).unwrap()));
        let f = random_symplectic(3, Kind::Float, 9);
        assert!(is_symplectic(f.matrix()));
    }

    #[test]
    fn decomposition_reproduces_matrix() {
        for (kind, n) in [(z(3), 1), (z(5), 2), (z(7), 3), (Kind::Rational, 2), (Kind::Float, 2)] {
            for seed in 0..20 {
                let s = random_symplectic(n, kind, seed).matrix().clone();
                let gens = decompose_symplectic(&s).unwrap();
                let mut prod = Matrix::identity(kind, 2 * n);
                for g in &gens {
                    prod = prod.mul(&g.matrix(n, kind)).unwrap();
                }
                assert!(prod.approx_eq(&s), "{kind} n={n} seed={seed}");
            }
        }
    }

    #[test]
    fn completion_has_requested_first_column() {
        let k = z(5);
        let f: Vec<Scalar> = [0, 3, 2, 4].iter().map(|&x| k.from_i64(x)).collect();
        let m = symplectic_completion(&f).unwrap();
        assert!(is_symplectic(&m));
        assert_eq!(m.column(0), f);
        assert_eq!(symplectic_completion(&vec![k.zero(); 4]), Err(Error::ZeroFunctional));
    }
}
