use super::SdeModel;
use crate::linalg::{Matrix, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    Jacobian,
    TimeDerivative,
    HessQuad,
    DiffusionDerivative,
    NonFinite,
}

/// A derivative callback that disagrees with finite differences.
#[derive(Debug, Clone)]
pub struct Violation {
    pub kind: ViolationKind,
    pub t: f64,
    pub x: Vector,
    /// Largest scaled discrepancy `|fd - analytic| / max(1, |analytic|)`.
    pub discrepancy: f64,
}

fn scaled_gap(fd: f64, analytic: f64) -> f64 {
    (fd - analytic).abs() / analytic.abs().max(1.0)
}

/// Largest scaled gap between two equally shaped arrays.
fn worst<'a>(fd: impl Iterator<Item = &'a f64>, an: impl Iterator<Item = &'a f64>) -> f64 {
    fd.zip(an)
        .map(|(a, b)| {
            if a.is_finite() && b.is_finite() {
                scaled_gap(*a, *b)
            } else {
                f64::INFINITY
            }
        })
        .fold(0.0, f64::max)
}

/// Central second difference of `f` along `g`, used to check `hess_quad`.
pub(crate) fn second_difference(model: &dyn SdeModel, t: f64, x: &Vector, g: &Vector, eps: f64) -> Vector {
    let fp = model.drift(t, &(x + g * eps));
    let f0 = model.drift(t, x);
    let fm = model.drift(t, &(x - g * eps));
    (fp - f0 * 2.0 + fm) / (eps * eps)
}

/// Checks `f_x`, `f_t`, `hess_quad` and `dG/dt` against finite differences.
///
/// A quantity is flagged when `|fd - analytic| > fd_tol * max(1, |analytic|)`
/// for any entry. Second differences run along unit directions and are
/// rescaled, so large diffusion columns do not inflate truncation error.
pub fn validate_model(model: &dyn SdeModel, probes: &[(f64, Vector)], fd_tol: f64) -> Vec<Violation> {
    let d = model.dim();
    let mut out = Vec::new();
    let mut flag = |kind, t: f64, x: &Vector, discrepancy: f64| {
        if !(discrepancy <= fd_tol) {
            out.push(Violation {
                kind,
                t,
                x: x.clone(),
                discrepancy,
            });
        }
    };

    for (t, x) in probes {
        let (t, x) = (*t, x);
        let f = model.drift(t, x);
        if f.len() != d || f.iter().any(|v| !v.is_finite()) {
            flag(ViolationKind::NonFinite, t, x, f64::INFINITY);
            continue;
        }

        let jac = model.jacobian(t, x);
        let mut fd_jac = Matrix::zeros(d, d);
        for j in 0..d {
            let eps = 1e-6 * x[j].abs().max(1.0);
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += eps;
            xm[j] -= eps;
            let col = (model.drift(t, &xp) - model.drift(t, &xm)) / (2.0 * eps);
            fd_jac.set_column(j, &col);
        }
        let shape_ok = jac.shape() == (d, d);
        let gap = if shape_ok { worst(fd_jac.iter(), jac.iter()) } else { f64::INFINITY };
        flag(ViolationKind::Jacobian, t, x, gap);

        let et = 1e-6 * t.abs().max(1.0);
        let fd_t = (model.drift(t + et, x) - model.drift(t - et, x)) / (2.0 * et);
        let ft = model.drift_t(t, x);
        flag(ViolationKind::TimeDerivative, t, x, worst(fd_t.iter(), ft.iter()));

        let g = model.diffusion(t);
        let mut hess_gap: f64 = 0.0;
        for col in g.column_iter() {
            let col = col.into_owned();
            let n = col.norm();
            if n == 0.0 {
                continue;
            }
            let u = &col / n;
            let fd = second_difference(model, t, x, &u, 1e-4) * (n * n);
            let an = model.hess_quad(t, x, &col);
            hess_gap = hess_gap.max(worst(fd.iter(), an.iter()));
        }
        flag(ViolationKind::HessQuad, t, x, hess_gap);

        let eg = 1e-6 * t.abs().max(1.0);
        let fd_g = (model.diffusion(t + eg) - model.diffusion(t - eg)) / (2.0 * eg);
        let dg = model.diffusion_deriv(t, 1);
        let g0 = model.diffusion_deriv(t, 0);
        let mut gap = worst(fd_g.iter(), dg.iter());
        gap = gap.max(worst(g0.iter(), g.iter()));
        flag(ViolationKind::DiffusionDerivative, t, x, gap);
    }
    out
}
