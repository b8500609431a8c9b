//! Exact hafnians by memoized recursion over perfect matchings.
//!
//! The first unmatched index is paired with every other remaining index and
//! the rest of the matching is solved recursively. Repeated rows and columns
//! are handled by recursing on multiplicity vectors rather than expanding the
//! matrix, so a pattern with counts `c` costs `prod(c_i + 1)` memo states.

use std::collections::HashMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::ComplexMatrix;

/// Largest memo table the recursion will build.
const MAX_STATES: u128 = 1 << 26;

fn check_symmetric(a: &ComplexMatrix) -> Result<()> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Shape {
            expected: n,
            rows: n,
            cols: a.ncols(),
        });
    }
    let scale = a.iter().fold(1.0_f64, |m, z| m.max(z.norm()));
    let mut asym = 0.0_f64;
    for i in 0..n {
        for j in 0..i {
            asym = asym.max((a[(i, j)] - a[(j, i)]).norm());
        }
    }
    if asym > 1e-10 * scale {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(())
}

/// Hafnian of a symmetric matrix of even dimension. The empty matrix has hafnian 1.
pub fn hafnian(a: &ComplexMatrix) -> Result<Complex64> {
    let n = a.nrows();
    if n % 2 != 0 {
        return Err(Error::OddDimension(n));
    }
    hafnian_repeated(a, &vec![1; n])
}

/// Hafnian of the matrix obtained by repeating row and column `i` of `a`
/// `reps[i]` times. Odd total multiplicity gives zero.
pub fn hafnian_repeated(a: &ComplexMatrix, reps: &[u32]) -> Result<Complex64> {
    check_symmetric(a)?;
    let n = a.nrows();
    if reps.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{} repetition counts for a {n}x{n} matrix",
            reps.len()
        )));
    }
    let total: u64 = reps.iter().map(|&r| r as u64).sum();
    if total % 2 != 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if total == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    // Drop indices that never appear.
    let live: Vec<usize> = (0..n).filter(|&i| reps[i] > 0).collect();
    let counts: Vec<u32> = live.iter().map(|&i| reps[i]).collect();
    let states: u128 = counts.iter().map(|&c| c as u128 + 1).product();
    if states > MAX_STATES {
        return Err(Error::InvalidArgument(format!(
            "hafnian pattern needs {states} memo states (limit {MAX_STATES})"
        )));
    }
    let sub = ComplexMatrix::from_fn(live.len(), live.len(), |i, j| a[(live[i], live[j])]);
    let mut strides = vec![1u64; counts.len()];
    for k in 1..counts.len() {
        strides[k] = strides[k - 1] * (counts[k - 1] as u64 + 1);
    }
    let mut solver = Solver {
        a: &sub,
        strides,
        memo: HashMap::new(),
    };
    let mut c = counts;
    Ok(solver.solve(&mut c))
}

struct Solver<'a> {
    a: &'a ComplexMatrix,
    strides: Vec<u64>,
    memo: HashMap<u64, Complex64>,
}

impl Solver<'_> {
    fn key(&self, counts: &[u32]) -> u64 {
        counts.iter().zip(&self.strides).map(|(&c, &s)| c as u64 * s).sum()
    }

    fn solve(&mut self, counts: &mut [u32]) -> Complex64 {
        let Some(i) = counts.iter().position(|&c| c > 0) else {
            return Complex64::new(1.0, 0.0);
        };
        let key = self.key(counts);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        counts[i] -= 1;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in i..counts.len() {
            let ways = counts[j];
            if ways == 0 {
                continue;
            }
            let w = self.a[(i, j)];
            if w == Complex64::new(0.0, 0.0) {
                continue;
            }
            counts[j] -= 1;
            acc += w * ways as f64 * self.solve(counts);
            counts[j] += 1;
        }
        counts[i] += 1;
        self.memo.insert(key, acc);
        acc
    }
}
