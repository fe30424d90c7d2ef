use super::pieces::{affine_pieces, build_a_beta, build_c_beta, AugmentedMatrix};
use super::{LocalIncrement, SchemeConfig};
use crate::linalg::{
    krylov_expmv, norm1, norm2, norm_inf, pade_expm, psd_sqrt, solve_pencil, Matrix, Vector,
};
use crate::model::SdeModel;
use crate::{Error, Result};
use std::sync::atomic::{AtomicBool, Ordering};

fn finish(phi: Vector, sigma: Matrix) -> Result<LocalIncrement> {
    let sigma_sqrt = psd_sqrt(&sigma)?;
    Ok(LocalIncrement {
        phi,
        sigma,
        sigma_sqrt,
    })
}

fn zero_step(d: usize) -> LocalIncrement {
    LocalIncrement {
        phi: Vector::zeros(d),
        sigma: Matrix::zeros(d, d),
        sigma_sqrt: Matrix::zeros(d, d),
    }
}

fn check_h(h: f64) -> Result<()> {
    if h >= 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("step size must be non-negative, got {h}")))
    }
}

fn dense_route(aug: &AugmentedMatrix, h: f64, cfg: &SchemeConfig) -> Result<LocalIncrement> {
    let e = pade_expm(&(&aug.entries * h), &cfg.pade)?;
    let top = e.rows(0, aug.d).into_owned();
    let (phi, sigma) = aug.extract(&top);
    finish(phi, sigma)
}

/// Chained block matrix `A_beta`, valid for time-dependent `G`.
pub fn increment_pade_general(
    model: &dyn SdeModel,
    t: f64,
    y: &Vector,
    h: f64,
    cfg: &SchemeConfig,
) -> Result<LocalIncrement> {
    check_h(h)?;
    if h == 0.0 {
        return Ok(zero_step(model.dim()));
    }
    let pieces = affine_pieces(model, t, y, cfg.beta)?;
    let aug = build_a_beta(&pieces)?;
    dense_route(&aug, h, cfg)
}

/// Van Loan matrix `C_beta`; requires constant `G`.
pub fn increment_pade_const_g(
    model: &dyn SdeModel,
    t: f64,
    y: &Vector,
    h: f64,
    cfg: &SchemeConfig,
) -> Result<LocalIncrement> {
    check_h(h)?;
    if !model.has_constant_diffusion() {
        return Err(Error::Precondition {
            variant: "pade-const-g",
            requirement: "a constant diffusion matrix",
        });
    }
    if h == 0.0 {
        return Ok(zero_step(model.dim()));
    }
    let pieces = affine_pieces(model, t, y, cfg.beta)?;
    let aug = build_c_beta(&pieces, &pieces.h_blocks[0])?;
    dense_route(&aug, h, cfg)
}

static KRYLOV_WARNED: AtomicBool = AtomicBool::new(false);

/// True when `m >= 2 h ||M||_2`, the sufficient condition for the Krylov
/// error bound. The cheap bound `sqrt(||M||_1 ||M||_inf)` is tried first.
pub(crate) fn krylov_dimension_ok(m: usize, h: f64, mat: &Matrix) -> bool {
    let m = m as f64;
    let cheap = (norm1(mat) * norm_inf(mat)).sqrt();
    m >= 2.0 * h * cheap || m >= 2.0 * h * norm2(mat)
}

/// Krylov-Padé route: `P = exp(M^T h) [I_d 0]^T` column by column.
///
/// Uses `C_beta` for constant `G` and `A_beta` otherwise. The subspace
/// dimension is clamped to the size of the block matrix. A dimension below
/// `2 h ||M||_2` is reported once through `log::warn!` and the step proceeds.
pub fn increment_krylov(
    model: &dyn SdeModel,
    t: f64,
    y: &Vector,
    h: f64,
    cfg: &SchemeConfig,
) -> Result<LocalIncrement> {
    check_h(h)?;
    let d = model.dim();
    if h == 0.0 {
        return Ok(zero_step(d));
    }
    let pieces = affine_pieces(model, t, y, cfg.beta)?;
    let aug = if model.has_constant_diffusion() {
        build_c_beta(&pieces, &pieces.h_blocks[0])?
    } else {
        build_a_beta(&pieces)?
    };
    let n = aug.size();
    let mut kcfg = cfg.krylov;
    kcfg.m = kcfg.m.min(n);
    if !krylov_dimension_ok(kcfg.m, h, &aug.entries) && !KRYLOV_WARNED.swap(true, Ordering::Relaxed) {
        log::warn!(
            "Krylov dimension m = {} is below 2h||M||_2 at h = {h}; the error bound does not apply",
            kcfg.m
        );
    }
    let op = aug.entries.transpose() * h;
    let mut top = Matrix::zeros(d, n);
    let mut e = Vector::zeros(n);
    for i in 0..d {
        e.fill(0.0);
        e[i] = 1.0;
        let col = krylov_expmv(&op, &e, &kcfg)?;
        top.set_row(i, &col.transpose());
    }
    let (phi, sigma) = aug.extract(&top);
    finish(phi, sigma)
}

/// Reciprocal 1-norm condition number, or `None` if `a` is singular.
fn rcond1(a: &Matrix) -> Option<(f64, Matrix)> {
    let inv = a.clone().try_inverse()?;
    let r = 1.0 / (norm1(a) * norm1(&inv));
    Some((r, inv))
}

/// Closed-form route for autonomous models with constant `G`:
///
/// ```text
/// phi   = A^-1 (e^{Ah} - I) f + delta A^-2 (e^{Ah} - I - Ah) hessterm / 2
/// Sigma : A Sigma + Sigma A^T = e^{Ah} G G^T e^{A^T h} - G G^T
/// ```
///
/// with `delta = 1` for `beta = 2` and `0` otherwise. For `d = 1` the variance
/// is `sum_j g_j^2 (e^{2ah} - 1) / (2a)`. The time argument only feeds the
/// model callbacks.
pub fn increment_ozaki_shoji(
    model: &dyn SdeModel,
    t: f64,
    y: &Vector,
    h: f64,
    cfg: &SchemeConfig,
) -> Result<LocalIncrement> {
    check_h(h)?;
    if !model.is_autonomous() {
        return Err(Error::Precondition {
            variant: "ozaki-shoji",
            requirement: "an autonomous model",
        });
    }
    if !model.has_constant_diffusion() {
        return Err(Error::Precondition {
            variant: "ozaki-shoji",
            requirement: "a constant diffusion matrix",
        });
    }
    let d = model.dim();
    if h == 0.0 {
        return Ok(zero_step(d));
    }
    let pieces = affine_pieces(model, t, y, cfg.beta)?;
    let a = &pieces.jac;
    let (rcond, inv) = rcond1(a).ok_or(Error::SingularJacobian { rcond: 0.0 })?;
    if !(rcond >= 1e-12) {
        return Err(Error::SingularJacobian { rcond });
    }
    let e = pade_expm(&(a * h), &cfg.pade)?;
    let eye = Matrix::identity(d, d);
    let em1 = &e - &eye;
    let mut phi = &inv * (&em1 * &pieces.f_val);
    if cfg.beta == 2 {
        let em2 = &em1 - a * h;
        phi += &inv * (&inv * (em2 * (&pieces.hessterm * 0.5)));
    }
    let ggt = &pieces.h_blocks[0];
    let sigma = if d == 1 {
        let a = a[(0, 0)];
        Matrix::from_element(1, 1, ggt[(0, 0)] * (2.0 * a * h).exp_m1() / (2.0 * a))
    } else {
        let q = &e * ggt * e.transpose() - ggt;
        solve_pencil(a, &q)?
    };
    finish(phi, sigma)
}

/// Midpoint exponential quadrature for `beta = 2`:
///
/// ```text
/// phi   = e^{Ah} y - y + h e^{Ah/2} (f - A y + (h/2) f_t + (h/4) hessterm)
/// Sigma = h e^{Ah/2} G(t + h/2) G(t + h/2)^T e^{A^T h/2}
/// ```
pub fn increment_midpoint(
    model: &dyn SdeModel,
    t: f64,
    y: &Vector,
    h: f64,
    cfg: &SchemeConfig,
) -> Result<LocalIncrement> {
    check_h(h)?;
    if cfg.beta != 2 {
        return Err(Error::Precondition {
            variant: "midpoint",
            requirement: "beta = 2",
        });
    }
    let d = model.dim();
    if h == 0.0 {
        return Ok(zero_step(d));
    }
    let pieces = affine_pieces(model, t, y, 2)?;
    let a = &pieces.jac;
    let e_half = pade_expm(&(a * (0.5 * h)), &cfg.pade)?;
    let e_full = &e_half * &e_half;
    let f_t = if model.is_autonomous() {
        Vector::zeros(d)
    } else {
        model.drift_t(t, y)
    };
    let inner = &pieces.b_beta + f_t * (0.5 * h) + &pieces.hessterm * (0.25 * h);
    let phi = &e_full * y - y + (&e_half * inner) * h;
    let g_mid = model.diffusion(t + 0.5 * h);
    let eg = &e_half * g_mid;
    let sigma = (&eg * eg.transpose()) * h;
    finish(phi, sigma)
}

#[cfg(test)]
pub(crate) fn krylov_dimension_ok_for_test(m: usize, h: f64, mat: &Matrix) -> bool {
    krylov_dimension_ok(m, h, mat)
}
