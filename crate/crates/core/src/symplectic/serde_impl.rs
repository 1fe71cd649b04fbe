//! JSON shapes: kinds are strings (`"rational"`, `"float"`, `"Z<d>"`),
//! scalars are strings (`"3"`, `"-1/2"`, `"0.25"`), matrices are row-major
//! arrays of scalar strings.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::Matrix;
use crate::scalar::{Kind, Prime, Scalar};

use super::{AffineSymplecticMap, PhaseSpacePoint, Subspace};

impl Serialize for Kind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Kind {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

impl std::str::FromStr for Kind {
    type Err = crate::error::Error;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        match text {
            "rational" => Ok(Kind::Rational),
            "float" => Ok(Kind::Float),
            _ => {
                let digits = text.strip_prefix('Z').or_else(|| text.strip_prefix("prime_field:")).unwrap_or(text);
                let d: u64 = digits
                    .parse()
                    .map_err(|_| crate::error::Error::Parse(format!("unknown scalar kind `{text}`")))?;
                Ok(Kind::Zd(Prime::new(d)?))
            }
        }
    }
}

fn rows_to_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.rows().map(|r| r.iter().map(Scalar::to_string).collect()).collect()
}

fn parse_rows<E: serde::de::Error>(kind: Kind, cols: usize, rows: &[Vec<String>]) -> Result<Matrix, E> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(|x| kind.parse(x)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(E::custom)?;
    Matrix::from_rows(kind, cols, parsed).map_err(E::custom)
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    kind: Kind,
    ambient_dim: usize,
    rows: Vec<Vec<String>>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubspaceRepr { kind: self.kind(), ambient_dim: self.ambient_dim(), rows: rows_to_strings(self.basis()) }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = SubspaceRepr::deserialize(d)?;
        Ok(Subspace::from_matrix(&parse_rows::<D::Error>(repr.kind, repr.ambient_dim, &repr.rows)?))
    }
}

#[derive(Serialize, Deserialize)]
struct AffineRepr {
    kind: Kind,
    matrix: Vec<Vec<String>>,
    shift: Vec<String>,
}

impl Serialize for AffineSymplecticMap {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        AffineRepr {
            kind: self.kind(),
            matrix: rows_to_strings(self.matrix()),
            shift: self.shift().coords().iter().map(Scalar::to_string).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AffineSymplecticMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = AffineRepr::deserialize(d)?;
        let m = parse_rows::<D::Error>(repr.kind, repr.shift.len(), &repr.matrix)?;
        let shift = repr.shift.iter().map(|x| repr.kind.parse(x)).collect::<Result<Vec<_>, _>>();
        let shift = PhaseSpacePoint::new(shift.map_err(D::Error::custom)?).map_err(D::Error::custom)?;
        AffineSymplecticMap::new(m, shift).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::random_symplectic;

    #[test]
    fn subspace_json_round_trip() {
        let k = Kind::Rational;
        let w = Subspace::span(k, 4, vec![vec![k.one(), k.ratio(1, 2), k.zero(), k.from_i64(-3)]]).unwrap();
        let text = serde_json::to_string(&w).unwrap();
        assert!(text.contains("\"1/2\""));
        let back: Subspace = serde_json::from_str(&text).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn affine_json_round_trip() {
        let t = random_symplectic(2, Kind::Zd(Prime::new(5).unwrap()), 3);
        let back: AffineSymplecticMap = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn rejects_non_symplectic_json() {
        let text = r#"{"kind":"rational","matrix":[["2","0"],["0","1"]],"shift":["0","0"]}"#;
        assert!(serde_json::from_str::<AffineSymplecticMap>(text).is_err());
    }
}
