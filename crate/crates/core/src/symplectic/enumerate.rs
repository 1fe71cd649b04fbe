use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Kind, Prime};

use super::Subspace;

/// Upper bound on `d^(n^2)`, the order of the number of echelon candidates.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

/// Every Lagrangian subspace of `Z_d^{2n}`, in canonical echelon form.
///
/// Walks all reduced echelon `n x 2n` matrices (pivot sets times free
/// entries) and keeps the isotropic ones, so the output has no duplicates.
pub fn enumerate_lagrangian(n: usize, d: Prime) -> Result<Vec<Subspace>> {
    let size = (d.get() as u128).checked_pow((n * n) as u32).unwrap_or(u128::MAX);
    if n == 0 || size > ENUMERATION_LIMIT {
        return Err(Error::EnumerationTooLarge { size });
    }
    let kind = Kind::Zd(d);
    let dim = 2 * n;
    let mut out = Vec::new();
    for pivots in combinations(dim, n) {
        // free cells: right of the row's pivot, not in a pivot column
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| ((p + 1)..dim).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let mut digits = vec![0u64; free.len()];
        loop {
            let mut m = Matrix::zeros(kind, n, dim);
            for (r, &p) in pivots.iter().enumerate() {
                m[(r, p)] = kind.one();
            }
            for (&(r, c), &x) in free.iter().zip(&digits) {
                m[(r, c)] = kind.from_i64(x as i64);
            }
            let w = Subspace::from_matrix(&m);
            if w.is_lagrangian() {
                out.push(w);
            }
            if !increment(&mut digits, d.get()) {
                break;
            }
        }
    }
    Ok(out)
}

/// `prod_{k=1..n} (d^k + 1)`, the number of Lagrangian subspaces of
/// `Z_d^{2n}`.
pub fn lagrangian_count(n: usize, d: Prime) -> u128 {
    (1..=n as u32).map(|k| (d.get() as u128).pow(k) + 1).product()
}

fn increment(digits: &mut [u64], base: u64) -> bool {
    for x in digits.iter_mut() {
        *x += 1;
        if *x < base {
            return true;
        }
        *x = 0;
    }
    false
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
