use super::{check_finite, check_square, Matrix};
use crate::{Error, Result};
use nalgebra::SymmetricEigen;

const CLAMP_REL: f64 = 1e-10;

/// Symmetric square root of a positive semidefinite matrix.
///
/// The input is symmetrized first. Eigenvalues in `[-1e-10 ||S||, 0)` are
/// treated as zero; anything more negative is an error. The result is
/// symmetric to the last bit.
pub fn psd_sqrt(s: &Matrix) -> Result<Matrix> {
    let n = check_square(s)?;
    check_finite(s, "covariance")?;
    if n == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    let sym = (s + s.transpose()) * 0.5;
    let tol = CLAMP_REL * sym.norm();

    if n == 1 {
        let x = sym[(0, 0)];
        if x < -tol {
            return Err(Error::NotPositiveSemidefinite {
                eigenvalue: x,
                tolerance: tol,
            });
        }
        return Ok(Matrix::from_element(1, 1, x.max(0.0).sqrt()));
    }

    let eig = SymmetricEigen::new(sym);
    let mut roots = eig.eigenvalues.clone();
    for lambda in roots.iter_mut() {
        if *lambda < -tol {
            return Err(Error::NotPositiveSemidefinite {
                eigenvalue: *lambda,
                tolerance: tol,
            });
        }
        *lambda = lambda.max(0.0).sqrt();
    }
    let q = &eig.eigenvectors;
    let r = q * Matrix::from_diagonal(&roots) * q.transpose();
    Ok((&r + r.transpose()) * 0.5)
}
