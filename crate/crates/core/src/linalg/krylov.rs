use super::{check_finite, check_square, norm1, pade_expm, Matrix, PadeConfig, Vector};
use crate::{Error, Result};

/// Krylov subspace settings for [`krylov_expmv`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovConfig {
    /// Subspace dimension; clamped to the operator dimension.
    pub m: usize,
    pub pade: PadeConfig,
    /// Arnoldi stops when the new residual is below `breakdown_tol * ||A||_1`.
    pub breakdown_tol: f64,
}

impl Default for KrylovConfig {
    fn default() -> Self {
        Self {
            m: 30,
            pade: PadeConfig::default(),
            breakdown_tol: 1e-12,
        }
    }
}

impl KrylovConfig {
    pub fn with_m(m: usize) -> Self {
        Self {
            m,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::InvalidConfig("Krylov dimension must be at least 1".into()));
        }
        if !(self.breakdown_tol > 0.0) {
            return Err(Error::InvalidConfig("breakdown tolerance must be positive".into()));
        }
        self.pade.validate()
    }
}

/// `e^A v` via an Arnoldi basis of `span{v, Av, ..., A^(m-1) v}`.
///
/// Returns `||v|| V_m e^(H_m) e_1` with `e^(H_m)` from [`pade_expm`]. On a
/// happy breakdown at step `j < m` the invariant subspace result is returned.
/// A zero `v` gives the zero vector.
pub fn krylov_expmv(a: &Matrix, v: &Vector, cfg: &KrylovConfig) -> Result<Vector> {
    let n = check_square(a)?;
    if v.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for a {n}x{n} operator",
            v.len()
        )));
    }
    check_finite(a, "Krylov operator")?;
    cfg.validate()?;

    let beta = v.norm();
    if beta == 0.0 || n == 0 {
        return Ok(Vector::zeros(n));
    }

    let m = cfg.m.min(n);
    let scale = norm1(a);
    let mut basis: Vec<Vector> = Vec::with_capacity(m + 1);
    basis.push(v / beta);
    let mut h = Matrix::zeros(m + 1, m);
    let mut dim = m;

    for j in 0..m {
        let mut w = a * &basis[j];
        // Modified Gram-Schmidt, repeated once to keep the basis orthonormal.
        for _ in 0..2 {
            for (i, q) in basis.iter().enumerate() {
                let c = q.dot(&w);
                h[(i, j)] += c;
                w.axpy(-c, q, 1.0);
            }
        }
        let resid = w.norm();
        h[(j + 1, j)] = resid;
        if resid <= cfg.breakdown_tol * scale {
            dim = j + 1;
            break;
        }
        if j + 1 < m {
            basis.push(w / resid);
        }
    }

    let hm = h.view((0, 0), (dim, dim)).into_owned();
    let e = pade_expm(&hm, &cfg.pade)?;
    let mut out = Vector::zeros(n);
    for (i, q) in basis.iter().take(dim).enumerate() {
        out.axpy(beta * e[(i, 0)], q, 1.0);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dmatrix, dvector};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_operator_is_identity() {
        let v = dvector![1.0, -2.0, 3.0];
        let r = krylov_expmv(&Matrix::zeros(3, 3), &v, &KrylovConfig::with_m(3)).unwrap();
        assert!((r - v).amax() < 1e-15);
    }

    #[test]
    fn zero_vector_gives_zero() {
        let a = dmatrix![1.0, 2.0; 3.0, 4.0];
        let r = krylov_expmv(&a, &Vector::zeros(2), &KrylovConfig::default()).unwrap();
        assert_eq!(r, Vector::zeros(2));
    }

    #[test]
    fn diagonal_breaks_down_at_first_step() {
        let a = Matrix::from_diagonal(&dvector![-0.7, 1.3, 2.0]);
        let v = dvector![1.0, 0.0, 0.0];
        let r = krylov_expmv(&a, &v, &KrylovConfig::with_m(3)).unwrap();
        assert!((r[0] - (-0.7f64).exp()).abs() < 1e-12);
        assert!(r[1].abs() < 1e-12 && r[2].abs() < 1e-12);
    }

    #[test]
    fn full_space_matches_dense_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let n = 6;
            let a = Matrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
            let v = Vector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
            let dense = pade_expm(&a, &PadeConfig::default()).unwrap() * &v;
            let kry = krylov_expmv(&a, &v, &KrylovConfig::with_m(n)).unwrap();
            assert!((&kry - &dense).norm() <= 1e-10 * dense.norm());
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Matrix::identity(3, 3);
        assert!(matches!(
            krylov_expmv(&a, &dvector![1.0], &KrylovConfig::default()),
            Err(Error::DimensionMismatch(_))
        ));
    }
}
