//! Tridiagonal solvers with constant off-diagonals.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Smallest acceptable pivot, relative to the diagonal scale.
const PIVOT_FLOOR: f64 = 1e-300;

/// Solves `lower·x[i-1] + diag[i]·x[i] + upper·x[i+1] = rhs[i]` in place
/// (Thomas algorithm; `x[-1] = x[n] = 0`).
#[cfg(test)]
pub(crate) fn solve(lower: Complex64, diag: &[Complex64], upper: Complex64, rhs: &mut [Complex64]) -> Result<()> {
    let mut scratch = vec![Complex64::new(0.0, 0.0); diag.len()];
    solve_with(lower, diag, upper, rhs, &mut scratch)
}

/// As [`solve`], reusing `scratch` (length `n`) for the modified upper diagonal.
pub(crate) fn solve_with(
    lower: Complex64,
    diag: &[Complex64],
    upper: Complex64,
    rhs: &mut [Complex64],
    scratch: &mut [Complex64],
) -> Result<()> {
    let n = diag.len();
    debug_assert_eq!(rhs.len(), n);
    let mut pivot = diag[0];
    check_pivot(pivot, 0)?;
    scratch[0] = upper / pivot;
    rhs[0] /= pivot;
    for i in 1..n {
        pivot = diag[i] - lower * scratch[i - 1];
        check_pivot(pivot, i)?;
        scratch[i] = upper / pivot;
        rhs[i] = (rhs[i] - lower * rhs[i - 1]) / pivot;
    }
    for i in (0..n - 1).rev() {
        let next = rhs[i + 1];
        rhs[i] -= scratch[i] * next;
    }
    Ok(())
}

fn check_pivot(pivot: Complex64, row: usize) -> Result<()> {
    if pivot.norm() <= PIVOT_FLOOR || !pivot.is_finite() {
        return Err(Error::SingularPivot { row });
    }
    Ok(())
}

/// Cyclic system: as [`solve`] but with `x[-1] = x[n-1]` and `x[n] = x[0]`.
/// Sherman–Morrison on top of two Thomas solves.
pub(crate) fn solve_cyclic(lower: Complex64, diag: &[Complex64], upper: Complex64, rhs: &mut [Complex64]) -> Result<()> {
    let n = diag.len();
    // A = T + u vᵀ with u = (γ, 0, …, 0, upper), v = (1, 0, …, 0, lower/γ)
    let gamma = -diag[0];
    let mut modified = diag.to_vec();
    modified[0] -= gamma;
    modified[n - 1] -= upper * lower / gamma;
    let mut u = vec![Complex64::new(0.0, 0.0); n];
    u[0] = gamma;
    u[n - 1] = upper;
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    solve_with(lower, &modified, upper, rhs, &mut scratch)?;
    solve_with(lower, &modified, upper, &mut u, &mut scratch)?;
    let factor = lower / gamma;
    let vy = rhs[0] + factor * rhs[n - 1];
    let vz = u[0] + factor * u[n - 1];
    let denom = Complex64::new(1.0, 0.0) + vz;
    check_pivot(denom, n - 1)?;
    let scale = vy / denom;
    for (x, z) in rhs.iter_mut().zip(&u) {
        *x -= scale * z;
    }
    Ok(())
}
