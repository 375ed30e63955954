//! Direct linear solvers: Cholesky, LU with partial pivoting, Levinson
//! recursion for symmetric Toeplitz systems, and matrix inversion.

use super::Matrix;
use crate::error::{ForecastError, Result};

/// Solve `A x = b` for symmetric positive-definite `A` via Cholesky.
pub fn solve_spd(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return Err(ForecastError::InvalidInput(
            "solve_spd requires a square system".into(),
        ));
    }
    // Lower-triangular factor L with A = L Lᵀ.
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            if i == j {
                if s <= 0.0 {
                    return Err(ForecastError::Singular(format!(
                        "non-positive pivot {s} at row {i} in Cholesky factorization"
                    )));
                }
                l[(i, j)] = s.sqrt();
            } else {
                l[(i, j)] = s / l[(j, j)];
            }
        }
    }
    // Forward then backward substitution.
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[(i, k)] * y[k];
        }
        y[i] = s / l[(i, i)];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[(k, i)] * x[k];
        }
        x[i] = s / l[(i, i)];
    }
    Ok(x)
}

/// LU factorization with partial pivoting. Returns the packed factors and the
/// row permutation applied to `A`.
fn lu_factor(a: &Matrix) -> Result<(Matrix, Vec<usize>)> {
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_val = lu[(col, col)].abs();
        for r in col + 1..n {
            let v = lu[(r, col)].abs();
            if v > pivot_val {
                pivot_val = v;
                pivot_row = r;
            }
        }
        if pivot_val == 0.0 {
            return Err(ForecastError::Singular(format!(
                "zero pivot in column {col}"
            )));
        }
        lu.swap_rows(col, pivot_row);
        perm.swap(col, pivot_row);
        let inv_pivot = 1.0 / lu[(col, col)];
        for r in col + 1..n {
            let factor = lu[(r, col)] * inv_pivot;
            lu[(r, col)] = factor;
            if factor == 0.0 {
                continue;
            }
            for c in col + 1..n {
                let sub = factor * lu[(col, c)];
                lu[(r, c)] -= sub;
            }
        }
    }
    Ok((lu, perm))
}

/// Solve with precomputed LU factors.
fn lu_solve(lu: &Matrix, perm: &[usize], b: &[f64]) -> Vec<f64> {
    let n = lu.rows();
    let mut x: Vec<f64> = perm.iter().map(|&p| b[p]).collect();
    for i in 1..n {
        let mut s = x[i];
        for k in 0..i {
            s -= lu[(i, k)] * x[k];
        }
        x[i] = s;
    }
    for i in (0..n).rev() {
        let mut s = x[i];
        for k in i + 1..n {
            s -= lu[(i, k)] * x[k];
        }
        x[i] = s / lu[(i, i)];
    }
    x
}

/// Solve `A x = b` for a general square `A` using LU with partial pivoting,
/// followed by one step of iterative refinement to tighten the residual on
/// ill-conditioned systems.
pub fn solve_general(a: &Matrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return Err(ForecastError::InvalidInput(
            "solve_general requires a square system".into(),
        ));
    }
    let (lu, perm) = lu_factor(a)?;
    let mut x = lu_solve(&lu, &perm, b);
    // One refinement pass: solve A d = b - A x and correct.
    let ax = a.matvec(&x);
    let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, axi)| bi - axi).collect();
    let d = lu_solve(&lu, &perm, &r);
    for (xi, di) in x.iter_mut().zip(&d) {
        *xi += di;
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(ForecastError::Singular(
            "non-finite solution (system numerically singular)".into(),
        ));
    }
    Ok(x)
}

/// Inverse of a general square matrix via one LU factorization and `n`
/// column solves (each with one refinement pass).
pub fn invert(a: &Matrix) -> Result<Matrix> {
    let n = a.rows();
    if a.cols() != n {
        return Err(ForecastError::InvalidInput(
            "invert requires a square matrix".into(),
        ));
    }
    let (lu, perm) = lu_factor(a)?;
    let mut out = Matrix::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        let mut x = lu_solve(&lu, &perm, &e);
        let ax = a.matvec(&x);
        let r: Vec<f64> = e.iter().zip(&ax).map(|(bi, axi)| bi - axi).collect();
        let d = lu_solve(&lu, &perm, &r);
        for (xi, di) in x.iter_mut().zip(&d) {
            *xi += di;
        }
        for i in 0..n {
            if !x[i].is_finite() {
                return Err(ForecastError::Singular(
                    "non-finite inverse column (matrix numerically singular)".into(),
                ));
            }
            out[(i, j)] = x[i];
        }
        e[j] = 0.0;
    }
    Ok(out)
}

/// Relative infinity-norm residual of a candidate solution:
/// `‖A x − b‖∞ / (1 + ‖b‖∞)`. The crate-wide solver contract is that this
/// quantity is at most 1e-8 for every system a fit accepts.
pub fn relative_residual(a: &Matrix, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.matvec(x);
    let num = ax
        .iter()
        .zip(b)
        .map(|(axi, bi)| (axi - bi).abs())
        .fold(0.0_f64, f64::max);
    let denom = 1.0 + b.iter().map(|v| v.abs()).fold(0.0_f64, f64::max);
    num / denom
}

/// Solve the symmetric Toeplitz system `T x = y` where `T[i][j] = r[|i-j|]`,
/// via the Levinson recursion in O(n²).
pub fn levinson_toeplitz(r: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let n = y.len();
    if r.len() < n {
        return Err(ForecastError::InvalidInput(
            "levinson_toeplitz needs r[0..n-1] for an n-dimensional system".into(),
        ));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if r[0] == 0.0 {
        return Err(ForecastError::Singular(
            "Toeplitz system has zero diagonal".into(),
        ));
    }
    // Forward/backward vectors for the leading k×k subsystem and the running
    // solution. For a symmetric Toeplitz matrix the backward vector is the
    // reverse of the forward one, but both are kept explicit for clarity.
    let mut f = vec![1.0 / r[0]];
    let mut b = vec![1.0 / r[0]];
    let mut x = vec![y[0] / r[0]];
    for k in 1..n {
        let ef: f64 = (0..k).map(|i| r[k - i] * f[i]).sum();
        let eb: f64 = (0..k).map(|i| r[i + 1] * b[i]).sum();
        let denom = 1.0 - ef * eb;
        if denom == 0.0 || !denom.is_finite() {
            return Err(ForecastError::Singular(format!(
                "Levinson recursion broke down at order {k}"
            )));
        }
        let mut f_next = vec![0.0; k + 1];
        let mut b_next = vec![0.0; k + 1];
        for i in 0..k {
            f_next[i] += f[i] / denom;
            b_next[i + 1] += b[i] / denom;
        }
        for i in 0..k {
            f_next[i + 1] -= ef * b[i] / denom;
            b_next[i] -= eb * f[i] / denom;
        }
        let ex: f64 = (0..k).map(|i| r[k - i] * x[i]).sum();
        let mut x_next = vec![0.0; k + 1];
        x_next[..k].copy_from_slice(&x);
        let coeff = y[k] - ex;
        for i in 0..=k {
            x_next[i] += coeff * b_next[i];
        }
        f = f_next;
        b = b_next;
        x = x_next;
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(ForecastError::Singular(
            "Levinson recursion produced non-finite solution".into(),
        ));
    }
    Ok(x)
}
