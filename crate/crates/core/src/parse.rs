//! Text forms for functionals, subspaces and states.
//!
//! A functional is a sum of terms `c·x` where `x` is `q` or `p` with an
//! optional 1-based mode index (`q2`), and `c` is an optional coefficient
//! (`3`, `-1/2`, `0.5`) optionally followed by `*`. A bare number is the
//! constant term. Examples: `q`, `q+2p`, `q1 - 3*p2 + 1`.

use serde_json::Value;

use crate::epistricted::EpistemicState;
use crate::error::{Error, Result};
use crate::scalar::{Kind, Scalar};
use crate::symplectic::{QuadratureFunctional, Subspace};

fn err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Parses a functional on `n` modes.
pub fn parse_functional(text: &str, kind: Kind, n: usize) -> Result<QuadratureFunctional> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty functional"));
    }
    let mut coeffs = vec![kind.zero(); 2 * n];
    let mut constant = kind.zero();
    let chars: Vec<char> = compact.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let mut negative = false;
        if chars[i] == '+' || chars[i] == '-' {
            negative = chars[i] == '-';
            i += 1;
        } else if i != 0 {
            return Err(err(format!("expected `+` or `-` at position {i} in `{text}`")));
        }
        let start = i;
        while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/' || chars[i] == '.') {
            i += 1;
        }
        let number: String = chars[start..i].iter().collect();
        let mut coeff = if number.is_empty() { kind.one() } else { kind.parse(&number)? };
        if negative {
            coeff = -coeff;
        }
        if i < chars.len() && chars[i] == '*' {
            if number.is_empty() {
                return Err(err(format!("`*` without a coefficient in `{text}`")));
            }
            i += 1;
        }
        match chars.get(i) {
            Some(&v @ ('q' | 'p')) => {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let index: String = chars[start..i].iter().collect();
                let mode = if index.is_empty() {
                    1
                } else {
                    index.parse::<usize>().map_err(|_| err(format!("bad mode index `{index}`")))?
                };
                if mode == 0 || mode > n {
                    return Err(Error::ModeOutOfRange { mode, modes: n });
                }
                let slot = 2 * (mode - 1) + usize::from(v == 'p');
                coeffs[slot] = &coeffs[slot] + &coeff;
            }
            _ if number.is_empty() => return Err(err(format!("expected a term at position {i} in `{text}`"))),
            _ => constant = constant + coeff,
        }
    }
    QuadratureFunctional::new(coeffs, constant)
}

/// A subspace spanned by the linear parts of the given functionals.
pub fn parse_subspace(exprs: &[String], kind: Kind, n: usize) -> Result<Subspace> {
    let rows = exprs
        .iter()
        .map(|e| parse_functional(e, kind, n).map(|f| f.coeffs().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Subspace::span(kind, 2 * n, rows)
}

fn scalar_from_json(v: &Value, kind: Kind) -> Result<Scalar> {
    match v {
        Value::Number(num) => kind.parse(&num.to_string()),
        Value::String(s) => kind.parse(s),
        other => Err(err(format!("expected a number, found {other}"))),
    }
}

fn row_from_json(v: &Value, kind: Kind, n: usize) -> Result<Vec<Scalar>> {
    match v {
        Value::String(s) => parse_functional(s, kind, n).map(|f| f.coeffs().to_vec()),
        Value::Array(items) => {
            let row = items.iter().map(|x| scalar_from_json(x, kind)).collect::<Result<Vec<_>>>()?;
            if row.len() != 2 * n {
                return Err(Error::DimensionMismatch { expected: 2 * n, found: row.len() });
            }
            Ok(row)
        }
        other => Err(err(format!("expected a functional, found {other}"))),
    }
}

fn as_list(v: Option<&Value>) -> Vec<Value> {
    match v {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(items)) => items.clone(),
        Some(other) => vec![other.clone()],
    }
}

/// Parses `{"V": …, "v": …}`. `V` is one functional or a list; each
/// functional is an expression string or a coefficient array. `v` is one
/// value or a list matching `V`. Constant terms in `V` are moved to the
/// value side.
pub fn parse_state(text: &str, kind: Kind, n: usize) -> Result<EpistemicState> {
    let json: Value = serde_json::from_str(text).map_err(|e| err(e.to_string()))?;
    let obj = json.as_object().ok_or_else(|| err("state must be a JSON object"))?;
    let known = match obj.get("V") {
        None | Some(Value::Null) => Vec::new(),
        Some(Value::Array(items)) if !items.is_empty() && items.iter().all(Value::is_number) => vec![Value::Array(items.clone())],
        Some(Value::Array(items)) => items.clone(),
        Some(other) => vec![other.clone()],
    };
    let values = as_list(obj.get("v"));
    if values.len() != known.len() {
        return Err(err(format!("state has {} functional(s) in `V` but {} value(s) in `v`", known.len(), values.len())));
    }
    let mut rows = Vec::with_capacity(known.len());
    let mut vals = Vec::with_capacity(known.len());
    for (f, v) in known.iter().zip(&values) {
        let value = scalar_from_json(v, kind)?;
        match f {
            Value::String(s) => {
                let parsed = parse_functional(s, kind, n)?;
                vals.push(value - parsed.constant().clone());
                rows.push(parsed.coeffs().to_vec());
            }
            other => {
                rows.push(row_from_json(other, kind, n)?);
                vals.push(value);
            }
        }
    }
    EpistemicState::from_constraints(kind, n, rows, vals)
}
