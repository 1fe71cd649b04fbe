//! Field elements: exact rationals, `f64`, and residues modulo an odd prime.
//!
//! A [`Scalar`] carries its own [`Kind`]. Arithmetic between scalars of
//! different kinds (including residues with different moduli) is a logic
//! error and panics; public entry points that accept caller data check kinds
//! up front with [`Kind::of_all`] and report [`Error::KindMismatch`] instead.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Magnitude below which a float is treated as zero during elimination and
/// symplectic validation.
pub const FLOAT_TOL: f64 = 1e-12;

/// An odd prime modulus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prime(u64);

impl Prime {
    pub fn new(d: u64) -> Result<Self> {
        if d < 3 || d.is_multiple_of(2) || !is_prime(d) || d > u32::MAX as u64 {
            return Err(Error::InvalidModulus(d));
        }
        Ok(Prime(d))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// The multiplicative inverse of 2, i.e. `(d + 1) / 2`.
    pub fn half(self) -> u64 {
        self.0.div_ceil(2)
    }

    pub fn reduce(self, x: i64) -> u64 {
        x.rem_euclid(self.0 as i64) as u64
    }

    pub fn inv(self, x: u64) -> Option<u64> {
        let x = x % self.0;
        if x == 0 {
            return None;
        }
        Some(pow_mod(x, self.0 - 2, self.0))
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= d {
        if d.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Which field a scalar lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Rational,
    Float,
    Zd(Prime),
}

impl Kind {
    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, x: i64) -> Scalar {
        match self {
            Kind::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(x))),
            Kind::Float => Scalar::Float(x as f64),
            Kind::Zd(p) => Scalar::Zd(p.reduce(x), p),
        }
    }

    /// `num / den` in this field. Panics if `den` is zero in the field.
    pub fn ratio(self, num: i64, den: i64) -> Scalar {
        self.from_i64(num) / self.from_i64(den)
    }

    pub fn is_exact(self) -> bool {
        !matches!(self, Kind::Float)
    }

    pub fn modulus(self) -> Option<Prime> {
        match self {
            Kind::Zd(p) => Some(p),
            _ => None,
        }
    }

    /// The common kind of a non-empty collection, or `KindMismatch`.
    pub fn of_all<'a, I>(items: I) -> Result<Option<Kind>>
    where
        I: IntoIterator<Item = &'a Scalar>,
    {
        let mut kind = None;
        for s in items {
            match kind {
                None => kind = Some(s.kind()),
                Some(k) if k != s.kind() => return Err(Error::KindMismatch),
                Some(_) => {}
            }
        }
        Ok(kind)
    }

    /// Parse a scalar literal in this field: an integer, `p/q`, or (floats
    /// only) a decimal.
    pub fn parse(self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let bad = || Error::Parse(format!("invalid scalar `{text}`"));
        match self {
            Kind::Float => text.parse::<f64>().map(Scalar::Float).or_else(|_| {
                let (n, d) = split_fraction(text).ok_or_else(bad)?;
                Ok(Scalar::Float(n.to_f64().ok_or_else(bad)? / d.to_f64().ok_or_else(bad)?))
            }),
            Kind::Rational => {
                let (n, d) = split_fraction(text).ok_or_else(bad)?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Scalar::Rational(BigRational::new(n, d)))
            }
            Kind::Zd(p) => {
                let (n, d) = split_fraction(text).ok_or_else(bad)?;
                let m = BigInt::from(p.get());
                let red = |x: &BigInt| -> u64 {
                    let r = ((x % &m) + &m) % &m;
                    r.to_u64().expect("residue fits in u64")
                };
                let den = p.inv(red(&d)).ok_or_else(bad)?;
                Ok(Scalar::Zd(red(&n) * den % p.get(), p))
            }
        }
    }
}

fn split_fraction(text: &str) -> Option<(BigInt, BigInt)> {
    match text.split_once('/') {
        Some((n, d)) => Some((BigInt::from_str(n.trim()).ok()?, BigInt::from_str(d.trim()).ok()?)),
        None => Some((BigInt::from_str(text).ok()?, BigInt::one())),
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Rational => f.write_str("rational"),
            Kind::Float => f.write_str("float"),
            Kind::Zd(p) => write!(f, "Z{p}"),
        }
    }
}

/// A field element tagged with its kind.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Rational(BigRational),
    Float(f64),
    /// Residue in `0..d` together with its modulus.
    Zd(u64, Prime),
}

impl Scalar {
    pub fn kind(&self) -> Kind {
        match self {
            Scalar::Rational(_) => Kind::Rational,
            Scalar::Float(_) => Kind::Float,
            Scalar::Zd(_, p) => Kind::Zd(*p),
        }
    }

    /// Exact zero test for exact kinds, `|x| < FLOAT_TOL` for floats.
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Float(x) => x.abs() < FLOAT_TOL,
            Scalar::Zd(r, _) => *r == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        (self - &self.kind().one()).is_zero()
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) if !r.is_zero() => Some(Scalar::Rational(r.recip())),
            Scalar::Float(x) if *x != 0.0 => Some(Scalar::Float(1.0 / x)),
            Scalar::Zd(r, p) => p.inv(*r).map(|i| Scalar::Zd(i, *p)),
            _ => None,
        }
    }

    /// Comparable magnitude used for pivot selection with floats.
    pub fn magnitude(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.abs().to_f64().unwrap_or(f64::INFINITY),
            Scalar::Float(x) => x.abs(),
            Scalar::Zd(r, _) => *r as f64,
        }
    }

    /// Residue of a `Zd` scalar.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Zd(r, _) => Some(*r),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(x) => *x,
            Scalar::Zd(r, _) => *r as f64,
        }
    }

    /// Equality with the float tolerance for floats, exact otherwise.
    pub fn approx_eq(&self, other: &Scalar) -> bool {
        (self - other).is_zero()
    }

    /// Explicit conversion into another field. Rationals convert into `Zd`
    /// when the denominator is invertible; everything converts to `Float`.
    pub fn convert(&self, kind: Kind) -> Result<Scalar> {
        match (self, kind) {
            (_, k) if k == self.kind() => Ok(self.clone()),
            (_, Kind::Float) => Ok(Scalar::Float(self.to_f64())),
            (Scalar::Rational(r), Kind::Zd(_)) => kind.parse(&r.to_string()),
            (Scalar::Zd(r, _), Kind::Rational) => Ok(Kind::Rational.from_i64(*r as i64)),
            _ => Err(Error::KindMismatch),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{r}"),
            Scalar::Float(x) => write!(f, "{x}"),
            Scalar::Zd(r, _) => write!(f, "{r}"),
        }
    }
}

impl PartialOrd for Scalar {
    /// Orders residues and rationals numerically; used only for stable
    /// output ordering.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.partial_cmp(b),
            (Scalar::Float(a), Scalar::Float(b)) => a.partial_cmp(b),
            (Scalar::Zd(a, p), Scalar::Zd(b, q)) if p == q => a.partial_cmp(b),
            _ => None,
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar kinds do not mix: {} vs {}", a.kind(), b.kind())
}

macro_rules! binop {
    ($trait:ident, $method:ident, $rat:expr, $float:expr, $zd:expr) => {
        impl<'a> $trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            #[allow(clippy::suspicious_arithmetic_impl)]
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational($rat(a, b)),
                    (Scalar::Float(a), Scalar::Float(b)) => Scalar::Float($float(*a, *b)),
                    (Scalar::Zd(a, p), Scalar::Zd(b, q)) if p == q => Scalar::Zd($zd(*a, *b, *p), *p),
                    _ => mismatch(self, rhs),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(
    Add,
    add,
    |a: &BigRational, b: &BigRational| a + b,
    |a: f64, b: f64| a + b,
    |a: u64, b: u64, p: Prime| (a + b) % p.get()
);
binop!(
    Sub,
    sub,
    |a: &BigRational, b: &BigRational| a - b,
    |a: f64, b: f64| a - b,
    |a: u64, b: u64, p: Prime| (a + p.get() - b) % p.get()
);
binop!(
    Mul,
    mul,
    |a: &BigRational, b: &BigRational| a * b,
    |a: f64, b: f64| a * b,
    |a: u64, b: u64, p: Prime| a * b % p.get()
);
binop!(
    Div,
    div,
    |a: &BigRational, b: &BigRational| {
        assert!(!b.is_zero(), "division by zero");
        a / b
    },
    |a: f64, b: f64| a / b,
    |a: u64, b: u64, p: Prime| a * p.inv(b).expect("division by zero in Z_d") % p.get()
);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Float(a) => Scalar::Float(-a),
            Scalar::Zd(a, p) => Scalar::Zd((p.get() - a) % p.get(), *p),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// Dot product of two equal-length scalar slices. Panics on an empty slice
/// pair, since the kind of the result would be unknown.
pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    assert_eq!(a.len(), b.len());
    let mut acc = a[0].kind().zero();
    for (x, y) in a.iter().zip(b) {
        acc = acc + x * y;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_validation() {
        assert!(Prime::new(3).is_ok());
        assert!(Prime::new(7).is_ok());
        assert!(matches!(Prime::new(2), Err(Error::InvalidModulus(2))));
        assert!(Prime::new(9).is_err());
        assert!(Prime::new(1).is_err());
    }

    #[test]
    fn zd_arithmetic() {
        let k = Kind::Zd(Prime::new(5).unwrap());
        let a = k.from_i64(3);
        let b = k.from_i64(4);
        assert_eq!((&a + &b).residue(), Some(2));
        assert_eq!((&a - &b).residue(), Some(4));
        assert_eq!((&a * &b).residue(), Some(2));
        assert_eq!((&a / &b).residue(), Some(2)); // 3 * 4^{-1} = 3 * 4 = 12 = 2
        assert_eq!((-&a).residue(), Some(2));
        assert_eq!(k.from_i64(-1).residue(), Some(4));
    }

    #[test]
    fn rationals_stay_reduced() {
        let k = Kind::Rational;
        let x = k.ratio(6, 4);
        assert_eq!(x.to_string(), "3/2");
        assert_eq!((x.clone() * k.from_i64(2)).to_string(), "3");
    }

    #[test]
    fn parsing() {
        let z3 = Kind::Zd(Prime::new(3).unwrap());
        assert_eq!(z3.parse("-1").unwrap().residue(), Some(2));
        assert_eq!(z3.parse("1/2").unwrap().residue(), Some(2));
        assert_eq!(Kind::Rational.parse("-3/9").unwrap().to_string(), "-1/3");
        assert_eq!(Kind::Float.parse("0.25").unwrap(), Scalar::Float(0.25));
        assert!(Kind::Rational.parse("abc").is_err());
    }

    #[test]
    fn of_all_rejects_mixture() {
        let v = [Kind::Rational.one(), Kind::Float.one()];
        assert!(matches!(Kind::of_all(&v), Err(Error::KindMismatch)));
        let p3 = Kind::Zd(Prime::new(3).unwrap());
        let p5 = Kind::Zd(Prime::new(5).unwrap());
        assert!(Kind::of_all(&[p3.one(), p5.one()]).is_err());
    }

    #[test]
    #[should_panic(expected = "do not mix")]
    fn mixed_arithmetic_panics() {
        let _ = Kind::Rational.one() + Kind::Float.one();
    }

    #[test]
    fn conversion_is_explicit() {
        let z5 = Kind::Zd(Prime::new(5).unwrap());
        assert_eq!(Kind::Rational.ratio(1, 2).convert(z5).unwrap().residue(), Some(3));
        assert!(Kind::Float.one().convert(z5).is_err());
    }
}
