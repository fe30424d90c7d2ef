//! Dense kernels for small matrices.
//!
//! All functions are pure and allocate their outputs; they can be called
//! from any number of threads.

mod krylov;
mod pade;
mod pencil;
mod sqrt;

pub use krylov::{krylov_expmv, KrylovConfig};
pub use pade::{pade_expm, PadeConfig};
pub use pencil::{solve_pencil, PENCIL_MAX_DIM};
pub use sqrt::psd_sqrt;

use crate::{Error, Result};
use nalgebra::{DMatrix, DVector};

pub type Matrix = DMatrix<f64>;
pub type Vector = DVector<f64>;

/// Induced 1-norm: maximum absolute column sum.
pub fn norm1(a: &Matrix) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Induced infinity-norm: maximum absolute row sum.
pub fn norm_inf(a: &Matrix) -> f64 {
    a.row_iter()
        .map(|r| r.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Spectral norm, computed from the singular values.
pub fn norm2(a: &Matrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

pub(crate) fn check_square(a: &Matrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(a.nrows())
}

pub(crate) fn check_finite(a: &Matrix, what: &str) -> Result<()> {
    if a.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::dmatrix;

    #[test]
    fn norms_of_small_matrix() {
        let a = dmatrix![1.0, -2.0; 3.0, 4.0];
        assert_eq!(norm1(&a), 6.0);
        assert_eq!(norm_inf(&a), 7.0);
        // largest singular value of [[1,-2],[3,4]] is sqrt(15 + sqrt(125))
        let expected = (15.0 + 125f64.sqrt()).sqrt();
        assert!((norm2(&a) - expected).abs() < 1e-12);
        assert!(norm2(&a) <= (norm1(&a) * norm_inf(&a)).sqrt() + 1e-12);
    }
}
