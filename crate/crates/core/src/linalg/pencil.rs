use super::{check_finite, check_square, Matrix};
use crate::{Error, Result};
use nalgebra::DVector;

/// Largest dimension accepted by [`solve_pencil`]; the Kronecker system has
/// `d^2` unknowns.
pub const PENCIL_MAX_DIM: usize = 30;

/// Solves `A S + S A^T = Q` for `S`.
///
/// Uses the vectorized form `(I (x) A + A (x) I) vec(S) = vec(Q)` with a dense
/// LU factorization. Fails when `A` has eigenvalues with `l_i + l_j` near zero,
/// detected as a pivot smaller than `1e-12` times the largest one.
pub fn solve_pencil(a: &Matrix, q: &Matrix) -> Result<Matrix> {
    let d = check_square(a)?;
    if q.nrows() != d || q.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "pencil right-hand side is {}x{}, expected {d}x{d}",
            q.nrows(),
            q.ncols()
        )));
    }
    if d > PENCIL_MAX_DIM {
        return Err(Error::InvalidConfig(format!(
            "pencil solver supports d <= {PENCIL_MAX_DIM}, got {d}"
        )));
    }
    check_finite(a, "pencil matrix")?;
    check_finite(q, "pencil right-hand side")?;
    if d == 0 {
        return Ok(Matrix::zeros(0, 0));
    }

    let eye = Matrix::identity(d, d);
    let k = eye.kronecker(a) + a.kronecker(&eye);
    let lu = k.lu();
    let u = lu.u();
    let pivots = u.diagonal().map(f64::abs);
    let (lo, hi) = (pivots.min(), pivots.max());
    if !(hi > 0.0) || lo <= 1e-12 * hi {
        return Err(Error::PencilNotUnique);
    }
    let rhs = DVector::from_column_slice(q.as_slice());
    let x = lu.solve(&rhs).ok_or(Error::PencilNotUnique)?;
    let s = Matrix::from_column_slice(d, d, x.as_slice());
    Ok((&s + s.transpose()) * 0.5)
}
