use crate::linalg::{Matrix, Vector};
use crate::model::{hess_term, SdeModel};
use crate::{Error, Result};

/// Linearization data at `(t_n, y_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinePieces {
    pub beta: u8,
    /// Jacobian `A = f_x(t_n, y_n)`.
    pub jac: Matrix,
    /// Affine remainder `f - A y_n`.
    pub b_beta: Vector,
    pub f_val: Vector,
    /// `f_t`, plus `hessterm / 2` when `beta = 2`: the coefficient of
    /// `(u - t_n)` in the linearized drift.
    pub time_slope: Vector,
    /// `sum_j g_j^T f_xx g_j`, zero when `beta = 1`.
    pub hessterm: Vector,
    /// `H_0 .. H_{2 beta - 2}` of the Taylor-expanded `G G^T`.
    pub h_blocks: Vec<Matrix>,
}

impl AffinePieces {
    pub fn dim(&self) -> usize {
        self.jac.nrows()
    }
}

fn finite(v: impl IntoIterator<Item = f64>, what: &str) -> Result<()> {
    if v.into_iter().all(f64::is_finite) {
        Ok(())
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

pub fn affine_pieces(model: &dyn SdeModel, t: f64, y: &Vector, beta: u8) -> Result<AffinePieces> {
    let d = model.dim();
    if y.len() != d {
        return Err(Error::DimensionMismatch(format!("state of length {} for d = {d}", y.len())));
    }
    let jac = model.jacobian(t, y);
    let f_val = model.drift(t, y);
    let g = model.diffusion(t);
    if jac.shape() != (d, d) || f_val.len() != d || g.nrows() != d {
        return Err(Error::DimensionMismatch("model callbacks disagree with dim()".into()));
    }
    finite(jac.iter().copied(), "Jacobian")?;
    finite(f_val.iter().copied(), "drift")?;
    finite(g.iter().copied(), "diffusion")?;

    let mut time_slope = if model.is_autonomous() {
        Vector::zeros(d)
    } else {
        model.drift_t(t, y)
    };
    finite(time_slope.iter().copied(), "drift time derivative")?;

    let ggt = &g * g.transpose();
    let (hessterm, h_blocks) = if beta == 2 {
        let hs = hess_term(model, t, y, &g);
        finite(hs.iter().copied(), "Hessian contraction")?;
        time_slope.axpy(0.5, &hs, 1.0);
        let (h1, h2) = if model.has_constant_diffusion() {
            (Matrix::zeros(d, d), Matrix::zeros(d, d))
        } else {
            let gp = model.diffusion_deriv(t, 1);
            finite(gp.iter().copied(), "diffusion derivative")?;
            let cross = &gp * g.transpose();
            (&cross + cross.transpose(), &gp * gp.transpose())
        };
        (hs, vec![ggt, h1, h2])
    } else {
        (Vector::zeros(d), vec![ggt])
    };

    let mut b_beta = f_val.clone();
    b_beta.gemv(-1.0, &jac, y, 1.0);

    Ok(AffinePieces {
        beta,
        jac,
        b_beta,
        f_val,
        time_slope,
        hessterm,
        h_blocks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AugmentedKind {
    CBeta,
    ABeta,
}

/// Block matrix whose exponential holds `phi` and the covariance factors.
///
/// Row block 0 reads `[A, Q_1, .., Q_k, c, f]` where `Q_k` is the covariance
/// generator and `c` the time slope. Rows `1..=k` form the chain of `-A^T`
/// blocks, and the trailing `2x2` block is `[[0, 1], [0, 0]]`. After
/// exponentiation with step `h`:
///
/// * `phi = E[0, last column]`
/// * `Sigma = E[0, block k] E[0, block 0]^T`
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedMatrix {
    pub kind: AugmentedKind,
    pub d: usize,
    /// Index of the `d`-block column that holds the covariance factor.
    pub cov_block: usize,
    pub entries: Matrix,
}

impl AugmentedMatrix {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    /// `(phi, Sigma)` from the first `d` rows of `exp(h M)`.
    pub fn extract(&self, top: &Matrix) -> (Vector, Matrix) {
        let d = self.d;
        let n = self.size();
        let phi = top.view((0, n - 1), (d, 1)).column(0).into_owned();
        let e11 = top.view((0, 0), (d, d));
        let e1k = top.view((0, self.cov_block * d), (d, d));
        let sigma = e1k * e11.transpose();
        (phi, (&sigma + sigma.transpose()) * 0.5)
    }
}

/// The `(2d+2)` Van Loan matrix for constant `G`.
pub fn build_c_beta(pieces: &AffinePieces, ggt: &Matrix) -> Result<AugmentedMatrix> {
    let d = pieces.dim();
    if ggt.shape() != (d, d) {
        return Err(Error::DimensionMismatch(format!(
            "GG^T is {}x{}, expected {d}x{d}",
            ggt.nrows(),
            ggt.ncols()
        )));
    }
    let n = 2 * d + 2;
    let mut c = Matrix::zeros(n, n);
    c.view_mut((0, 0), (d, d)).copy_from(&pieces.jac);
    c.view_mut((0, d), (d, d)).copy_from(ggt);
    c.view_mut((d, d), (d, d)).copy_from(&(-pieces.jac.transpose()));
    c.view_mut((0, 2 * d), (d, 1)).copy_from(&pieces.time_slope);
    c.view_mut((0, 2 * d + 1), (d, 1)).copy_from(&pieces.f_val);
    c[(2 * d, 2 * d + 1)] = 1.0;
    Ok(AugmentedMatrix {
        kind: AugmentedKind::CBeta,
        d,
        cov_block: 1,
        entries: c,
    })
}

/// The `(2 beta d + 2)` chained matrix for time-dependent `G`.
///
/// `H_i` sits in block column `2 beta - 1 - i`, scaled by `i!`: the chain of
/// identity blocks integrates to `s^i / i!`, and the scaling restores the
/// Taylor coefficient `H_i s^i` of `G_beta G_beta^T`.
pub fn build_a_beta(pieces: &AffinePieces) -> Result<AugmentedMatrix> {
    let d = pieces.dim();
    let beta = pieces.beta as usize;
    let blocks = 2 * beta;
    if pieces.h_blocks.len() != blocks - 1 {
        return Err(Error::DimensionMismatch(format!(
            "beta = {beta} needs {} H blocks, got {}",
            blocks - 1,
            pieces.h_blocks.len()
        )));
    }
    let n = blocks * d + 2;
    let mut a = Matrix::zeros(n, n);
    a.view_mut((0, 0), (d, d)).copy_from(&pieces.jac);
    let mut factorial = 1.0;
    for (i, hb) in pieces.h_blocks.iter().enumerate() {
        if i > 0 {
            factorial *= i as f64;
        }
        let col = blocks - 1 - i;
        a.view_mut((0, col * d), (d, d)).copy_from(&(hb * factorial));
    }
    let minus_at = -pieces.jac.transpose();
    for r in 1..blocks {
        a.view_mut((r * d, r * d), (d, d)).copy_from(&minus_at);
        if r + 1 < blocks {
            a.view_mut((r * d, (r + 1) * d), (d, d)).fill_with_identity();
        }
    }
    a.view_mut((0, blocks * d), (d, 1)).copy_from(&pieces.time_slope);
    a.view_mut((0, blocks * d + 1), (d, 1)).copy_from(&pieces.f_val);
    a[(blocks * d, blocks * d + 1)] = 1.0;
    Ok(AugmentedMatrix {
        kind: AugmentedKind::ABeta,
        d,
        cov_block: blocks - 1,
        entries: a,
    })
}
