use super::{FunctionalKind, InitialLaw, SdeModel, TestFunctional};
use crate::jumps::JumpSpec;
use crate::linalg::{pade_expm, Matrix, PadeConfig, Vector};
use crate::{Error, Result};
use nalgebra::{dmatrix, dvector};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// `dx = B x dt + G dw` with constant `B` and `G`.
#[derive(Debug, Clone)]
pub struct LinearSde {
    pub b: Matrix,
    pub g: Matrix,
}

impl LinearSde {
    pub fn new(b: Matrix, g: Matrix) -> Result<Self> {
        if b.nrows() != b.ncols() || g.nrows() != b.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "drift {}x{} with diffusion {}x{}",
                b.nrows(),
                b.ncols(),
                g.nrows(),
                g.ncols()
            )));
        }
        Ok(Self { b, g })
    }

    pub fn scalar(a: f64, sigma: f64) -> Self {
        Self {
            b: dmatrix![a],
            g: dmatrix![sigma],
        }
    }

    /// Mean and covariance of `x(t)` given `x(0) = x0`.
    pub fn moments(&self, t: f64, x0: &Vector) -> (Vector, Matrix) {
        let d = self.b.nrows();
        if d == 1 {
            let a = self.b[(0, 0)];
            let s2 = self.g.row(0).norm_squared();
            let var = if a == 0.0 {
                s2 * t
            } else {
                s2 * (2.0 * a * t).exp_m1() / (2.0 * a)
            };
            return (dvector![x0[0] * (a * t).exp()], dmatrix![var]);
        }
        // Block exponential of [[B, GG^T], [0, -B^T]] t.
        let mut c = Matrix::zeros(2 * d, 2 * d);
        c.view_mut((0, 0), (d, d)).copy_from(&self.b);
        c.view_mut((0, d), (d, d)).copy_from(&(&self.g * self.g.transpose()));
        c.view_mut((d, d), (d, d)).copy_from(&(-self.b.transpose()));
        let e = pade_expm(&(c * t), &PadeConfig::new(13, 13)).expect("finite linear model");
        let e11 = e.view((0, 0), (d, d)).into_owned();
        let e12 = e.view((0, d), (d, d)).into_owned();
        let cov = &e12 * e11.transpose();
        let cov = (&cov + cov.transpose()) * 0.5;
        (&e11 * x0, cov)
    }
}

impl SdeModel for LinearSde {
    fn dim(&self) -> usize {
        self.b.nrows()
    }
    fn noise_dim(&self) -> usize {
        self.g.ncols()
    }
    fn drift(&self, _t: f64, x: &Vector) -> Vector {
        &self.b * x
    }
    fn jacobian(&self, _t: f64, _x: &Vector) -> Matrix {
        self.b.clone()
    }
    fn hess_quad(&self, _t: f64, _x: &Vector, _g: &Vector) -> Vector {
        Vector::zeros(self.dim())
    }
    fn diffusion(&self, _t: f64) -> Matrix {
        self.g.clone()
    }
    fn is_autonomous(&self) -> bool {
        true
    }
    fn has_constant_diffusion(&self) -> bool {
        true
    }
}

/// `dx = (-lambda x + sin x) dt + sigma dw`.
#[derive(Debug, Clone, Copy)]
pub struct PendulumSin {
    pub lambda: f64,
    pub sigma: f64,
}

impl SdeModel for PendulumSin {
    fn dim(&self) -> usize {
        1
    }
    fn noise_dim(&self) -> usize {
        1
    }
    fn drift(&self, _t: f64, x: &Vector) -> Vector {
        dvector![-self.lambda * x[0] + x[0].sin()]
    }
    fn jacobian(&self, _t: f64, x: &Vector) -> Matrix {
        dmatrix![-self.lambda + x[0].cos()]
    }
    fn hess_quad(&self, _t: f64, x: &Vector, g: &Vector) -> Vector {
        dvector![-x[0].sin() * g[0] * g[0]]
    }
    fn diffusion(&self, _t: f64) -> Matrix {
        dmatrix![self.sigma]
    }
    fn is_autonomous(&self) -> bool {
        true
    }
    fn has_constant_diffusion(&self) -> bool {
        true
    }
}

/// Two-dimensional nonautonomous model with time-dependent noise:
///
/// ```text
/// f(t, x) = [-x1 + x2/2 + 0.3 sin t, -x1/2 - x2 + 0.4 sin x1]
/// G(t)    = [[1 + t/2, 0], [0.3 sin t, 0.8]]
/// ```
#[derive(Debug, Clone, Copy, Default)]
pub struct TimeDependentNoise;

impl SdeModel for TimeDependentNoise {
    fn dim(&self) -> usize {
        2
    }
    fn noise_dim(&self) -> usize {
        2
    }
    fn drift(&self, t: f64, x: &Vector) -> Vector {
        dvector![
            -x[0] + 0.5 * x[1] + 0.3 * t.sin(),
            -0.5 * x[0] - x[1] + 0.4 * x[0].sin()
        ]
    }
    fn jacobian(&self, _t: f64, x: &Vector) -> Matrix {
        dmatrix![-1.0, 0.5; -0.5 + 0.4 * x[0].cos(), -1.0]
    }
    fn drift_t(&self, t: f64, _x: &Vector) -> Vector {
        dvector![0.3 * t.cos(), 0.0]
    }
    fn hess_quad(&self, _t: f64, x: &Vector, g: &Vector) -> Vector {
        dvector![0.0, -0.4 * x[0].sin() * g[0] * g[0]]
    }
    fn diffusion(&self, t: f64) -> Matrix {
        dmatrix![1.0 + 0.5 * t, 0.0; 0.3 * t.sin(), 0.8]
    }
    fn diffusion_deriv(&self, t: f64, order: usize) -> Matrix {
        match order {
            0 => self.diffusion(t),
            1 => dmatrix![0.5, 0.0; 0.3 * t.cos(), 0.0],
            _ => Matrix::zeros(2, 2),
        }
    }
}

/// A precomputed estimate of `E g(x(T))`.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredReference {
    pub functional: String,
    pub mean: f64,
    pub stderr: f64,
    pub method: String,
}

/// Known statistics of the exact terminal law.
#[derive(Debug, Clone)]
pub enum Reference {
    /// Exact terminal mean and covariance.
    Moments { mean: Vector, cov: Matrix },
    Stored(Vec<StoredReference>),
    None,
}

impl Reference {
    /// `(value, standard error)` of `E g(x(T))` if known.
    pub fn value_for(&self, g: &TestFunctional) -> Option<(f64, f64)> {
        match self {
            Reference::Moments { mean, cov } => match g.kind {
                FunctionalKind::Component(i) if i < mean.len() => Some((mean[i], 0.0)),
                FunctionalKind::ComponentSquared(i) if i < mean.len() => {
                    Some((cov[(i, i)] + mean[i] * mean[i], 0.0))
                }
                _ => None,
            },
            Reference::Stored(values) => values
                .iter()
                .find(|v| v.functional == g.label)
                .map(|v| (v.mean, v.stderr)),
            Reference::None => None,
        }
    }
}

/// A fully wired test problem.
#[derive(Clone)]
pub struct Problem {
    pub name: String,
    pub model: Arc<dyn SdeModel>,
    pub initial: InitialLaw,
    pub t0: f64,
    pub t_end: f64,
    pub jumps: Option<JumpSpec>,
    pub reference: Reference,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("name", &self.name)
            .field("dim", &self.model.dim())
            .field("initial", &self.initial)
            .field("t0", &self.t0)
            .field("t_end", &self.t_end)
            .field("jumps", &self.jumps)
            .field("reference", &self.reference)
            .finish()
    }
}

/// Numeric overrides for catalog parameters, keyed by name.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProblemParams(pub BTreeMap<String, f64>);

impl ProblemParams {
    pub fn set(mut self, key: &str, value: f64) -> Self {
        self.0.insert(key.to_string(), value);
        self
    }
}

struct Resolved {
    values: BTreeMap<&'static str, f64>,
    overridden: bool,
}

impl Resolved {
    fn new(problem: &str, defaults: &[(&'static str, f64)], p: &ProblemParams) -> Result<Self> {
        let mut values: BTreeMap<&'static str, f64> = defaults.iter().copied().collect();
        let mut overridden = false;
        for (k, v) in &p.0 {
            let slot = defaults
                .iter()
                .find(|(name, _)| name == k)
                .map(|(name, _)| *name)
                .ok_or_else(|| {
                    Error::InvalidConfig(format!("problem `{problem}` has no parameter `{k}`"))
                })?;
            if !v.is_finite() {
                return Err(Error::InvalidConfig(format!("parameter `{k}` must be finite")));
            }
            if values[slot] != *v {
                overridden = true;
            }
            values.insert(slot, *v);
        }
        Ok(Self { values, overridden })
    }

    fn get(&self, k: &str) -> f64 {
        self.values[k]
    }
}

const OU_1D: &[(&str, f64)] = &[("a", -1.0), ("sigma", 1.0), ("x0", 1.0), ("T", 1.0)];
const OU_ND: &[(&str, f64)] = &[("d", 3.0), ("x0", 1.0), ("T", 1.0)];
const PENDULUM: &[(&str, f64)] = &[("lambda", 0.25), ("sigma", 12.0), ("x0", 2.0), ("T", 0.5)];
const TIME_DEP_G: &[(&str, f64)] = &[("x1", 1.0), ("x2", 0.0), ("T", 1.0)];
const JUMP_OU: &[(&str, f64)] = &[
    ("a", -1.0),
    ("sigma", 0.5),
    ("c", 0.5),
    ("mu", 2.0),
    ("x0", 1.0),
    ("T", 1.0),
];
const PENDULUM_JUMP: &[(&str, f64)] = &[
    ("lambda", 0.25),
    ("sigma", 12.0),
    ("c", 1.0),
    ("mu", 2.0),
    ("x0", 2.0),
    ("T", 0.5),
];

/// Fine-grid estimates for the default pendulum problems, produced by the
/// `compute_reference` example.
const PENDULUM_REFERENCE: &[(&str, f64, f64)] = &[("x1", 1.782_396_595_410_569_4, 3.987_675_152_712_024e-3)];
const PENDULUM_JUMP_REFERENCE: &[(&str, f64, f64)] = &[("x1", 2.721_821_981_153_799_8, 4.015_014_705_575_214e-3)];
const REFERENCE_METHOD: &str = "pade-const-g beta=2 (6,6), h=2^-10, n=4000000, seed 20240611, gaussian noise";

/// Names accepted by [`builtin_problem`].
pub fn catalog_names() -> &'static [&'static str] {
    &[
        "ou-1d",
        "ou-nd",
        "pendulum-sin",
        "time-dep-g",
        "jump-ou",
        "pendulum-sin-jump",
    ]
}

/// A catalog problem with its default parameters.
pub fn builtin_problem(name: &str) -> Result<Problem> {
    builtin_problem_with(name, &ProblemParams::default())
}

/// A catalog problem with parameter overrides.
///
/// Stored references only apply at the default parameters; overriding any
/// parameter of a problem without closed-form statistics leaves it without a
/// reference, so a fine-grid reference has to be computed.
pub fn builtin_problem_with(name: &str, params: &ProblemParams) -> Result<Problem> {
    let defaults = match name {
        "ou-1d" => OU_1D,
        "ou-nd" => OU_ND,
        "pendulum-sin" => PENDULUM,
        "time-dep-g" => TIME_DEP_G,
        "jump-ou" => JUMP_OU,
        "pendulum-sin-jump" => PENDULUM_JUMP,
        _ => return Err(Error::UnknownProblem(name.to_string())),
    };
    let p = Resolved::new(name, defaults, params)?;
    let t_end = p.get("T");
    if !(t_end > 0.0) {
        return Err(Error::InvalidConfig(format!("`T` must be positive, got {t_end}")));
    }
    let stored = |table: &[(&str, f64, f64)]| {
        if p.overridden || table.iter().any(|r| r.2 <= 0.0) {
            Reference::None
        } else {
            Reference::Stored(
                table
                    .iter()
                    .map(|&(f, mean, stderr)| StoredReference {
                        functional: f.to_string(),
                        mean,
                        stderr,
                        method: REFERENCE_METHOD.to_string(),
                    })
                    .collect(),
            )
        }
    };

    let problem = match name {
        "ou-1d" => {
            let model = LinearSde::scalar(p.get("a"), p.get("sigma"));
            let x0 = dvector![p.get("x0")];
            let (mean, cov) = model.moments(t_end, &x0);
            Problem {
                name: name.into(),
                model: Arc::new(model),
                initial: InitialLaw::Point(x0),
                t0: 0.0,
                t_end,
                jumps: None,
                reference: Reference::Moments { mean, cov },
            }
        }
        "ou-nd" => {
            let d = p.get("d");
            if d < 1.0 || d.fract() != 0.0 || d > 200.0 {
                return Err(Error::InvalidConfig(format!("`d` must be an integer in 1..=200, got {d}")));
            }
            let model = ou_nd_model(d as usize);
            let x0 = Vector::from_element(d as usize, p.get("x0"));
            let (mean, cov) = model.moments(t_end, &x0);
            Problem {
                name: name.into(),
                model: Arc::new(model),
                initial: InitialLaw::Point(x0),
                t0: 0.0,
                t_end,
                jumps: None,
                reference: Reference::Moments { mean, cov },
            }
        }
        "pendulum-sin" => Problem {
            name: name.into(),
            model: Arc::new(PendulumSin {
                lambda: p.get("lambda"),
                sigma: p.get("sigma"),
            }),
            initial: InitialLaw::Point(dvector![p.get("x0")]),
            t0: 0.0,
            t_end,
            jumps: None,
            reference: stored(PENDULUM_REFERENCE),
        },
        "time-dep-g" => Problem {
            name: name.into(),
            model: Arc::new(TimeDependentNoise),
            initial: InitialLaw::Point(dvector![p.get("x1"), p.get("x2")]),
            t0: 0.0,
            t_end,
            jumps: None,
            reference: Reference::None,
        },
        "jump-ou" => {
            let (a, sigma, c, mu, x0) = (p.get("a"), p.get("sigma"), p.get("c"), p.get("mu"), p.get("x0"));
            let jumps = JumpSpec::new().constant(mu, dvector![c])?;
            // Compound Poisson with constant size c adds c*mu*int e^{a s} ds to
            // the mean and c^2*mu*int e^{2 a s} ds to the variance.
            let int1 = if a == 0.0 { t_end } else { (a * t_end).exp_m1() / a };
            let int2 = if a == 0.0 { t_end } else { (2.0 * a * t_end).exp_m1() / (2.0 * a) };
            let mean = dvector![x0 * (a * t_end).exp() + c * mu * int1];
            let cov = dmatrix![(sigma * sigma + c * c * mu) * int2];
            Problem {
                name: name.into(),
                model: Arc::new(LinearSde::scalar(a, sigma)),
                initial: InitialLaw::Point(dvector![x0]),
                t0: 0.0,
                t_end,
                jumps: Some(jumps),
                reference: Reference::Moments { mean, cov },
            }
        }
        "pendulum-sin-jump" => Problem {
            name: name.into(),
            model: Arc::new(PendulumSin {
                lambda: p.get("lambda"),
                sigma: p.get("sigma"),
            }),
            initial: InitialLaw::Point(dvector![p.get("x0")]),
            t0: 0.0,
            t_end,
            jumps: Some(JumpSpec::new().constant(p.get("mu"), dvector![p.get("c")])?),
            reference: stored(PENDULUM_JUMP_REFERENCE),
        },
        _ => unreachable!(),
    };
    Ok(problem)
}

/// Stable `d`-dimensional linear test system: diagonal decay `-(1 + i/(2d))`,
/// skew nearest-neighbour coupling of size 1/2 and bidiagonal noise.
fn ou_nd_model(d: usize) -> LinearSde {
    let mut b = Matrix::zeros(d, d);
    let mut g = Matrix::zeros(d, d);
    for i in 0..d {
        b[(i, i)] = -(1.0 + 0.5 * i as f64 / d as f64);
        g[(i, i)] = 1.0;
        if i + 1 < d {
            b[(i, i + 1)] = 0.5;
            b[(i + 1, i)] = -0.5;
            g[(i + 1, i)] = 0.3;
        }
    }
    LinearSde { b, g }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ou_1d_closed_form() {
        let p = builtin_problem("ou-1d").unwrap();
        let Reference::Moments { mean, cov } = &p.reference else {
            panic!("expected moments")
        };
        assert!((mean[0] - 0.367_879_441_171_442_3).abs() < 1e-15);
        assert!((cov[(0, 0)] - 0.432_332_358_381_693_6).abs() < 1e-15);
    }

    #[test]
    fn pendulum_reference_matches_kolmogorov_solution() {
        // Crank-Nicolson solution of the backward equation on [-40, 40]
        // with 8001 nodes and 4000 time steps.
        let pde = 1.776_297_733_611_783_6;
        let p = builtin_problem("pendulum-sin").unwrap();
        let (mean, se) = p.reference.value_for(&TestFunctional::component(0)).unwrap();
        assert!(se > 0.0 && (mean - pde).abs() < 3.0 * se, "{mean} +- {se}");
    }

    #[test]
    fn pendulum_jump_reference_matches_kolmogorov_solution() {
        // Same solver with the jump term mu (u(x + c) - u(x)); c is a whole
        // number of grid cells.
        let pde = 2.715_989_964_380_189_5;
        let p = builtin_problem("pendulum-sin-jump").unwrap();
        let (mean, se) = p.reference.value_for(&TestFunctional::component(0)).unwrap();
        assert!(se > 0.0 && (mean - pde).abs() < 3.0 * se, "{mean} +- {se}");
    }

    #[test]
    fn ou_1d_brownian_limit() {
        let params = ProblemParams::default().set("a", 0.0).set("sigma", 2.0).set("T", 3.0);
        let p = builtin_problem_with("ou-1d", &params).unwrap();
        let Reference::Moments { cov, .. } = &p.reference else {
            panic!()
        };
        assert_eq!(cov[(0, 0)], 12.0);
    }

    /// RK4 on the moment equations m' = B m, P' = B P + P B^T + G G^T.
    fn moment_ode(model: &LinearSde, x0: &Vector, t: f64) -> (Vector, Matrix) {
        let n = 4000;
        let h = t / n as f64;
        let q = &model.g * model.g.transpose();
        let rhs_p = |p: &Matrix| &model.b * p + p * model.b.transpose() + &q;
        let mut m = x0.clone();
        let mut p = Matrix::zeros(x0.len(), x0.len());
        for _ in 0..n {
            let k1 = &model.b * &m;
            let k2 = &model.b * (&m + &k1 * (h / 2.0));
            let k3 = &model.b * (&m + &k2 * (h / 2.0));
            let k4 = &model.b * (&m + &k3 * h);
            m += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
            let l1 = rhs_p(&p);
            let l2 = rhs_p(&(&p + &l1 * (h / 2.0)));
            let l3 = rhs_p(&(&p + &l2 * (h / 2.0)));
            let l4 = rhs_p(&(&p + &l3 * h));
            p += (l1 + l2 * 2.0 + l3 * 2.0 + l4) * (h / 6.0);
        }
        (m, p)
    }

    #[test]
    fn ou_nd_moments_match_ode() {
        for d in [2, 3, 5] {
            let model = ou_nd_model(d);
            let x0 = Vector::from_element(d, 1.0);
            let (m, p) = model.moments(1.0, &x0);
            let (m2, p2) = moment_ode(&model, &x0, 1.0);
            assert!((&m - m2).amax() < 1e-11, "d={d}");
            assert!((&p - p2).amax() < 1e-11, "d={d}");
        }
    }

    #[test]
    fn ou_nd_is_stable() {
        let model = ou_nd_model(20);
        let sym = (&model.b + model.b.transpose()) * 0.5;
        assert!(sym.symmetric_eigenvalues().max() < 0.0);
    }

    #[test]
    fn jump_ou_mean_formula() {
        let p = builtin_problem("jump-ou").unwrap();
        let g = TestFunctional::component(0);
        let (v, se) = p.reference.value_for(&g).unwrap();
        let e = (-1.0f64).exp();
        assert!((v - (e + 0.5 * 2.0 * (e - 1.0) / -1.0)).abs() < 1e-15);
        assert_eq!(se, 0.0);
        assert_eq!(p.jumps.as_ref().unwrap().intensities(), vec![2.0]);
    }

    #[test]
    fn reference_lookup() {
        let r = Reference::Moments {
            mean: dvector![1.0, 2.0],
            cov: dmatrix![0.5, 0.1; 0.1, 0.25],
        };
        assert_eq!(r.value_for(&TestFunctional::component(1)), Some((2.0, 0.0)));
        assert_eq!(r.value_for(&TestFunctional::component_squared(1)), Some((4.25, 0.0)));
        assert_eq!(r.value_for(&TestFunctional::component(2)), None);
        assert_eq!(r.value_for(&TestFunctional::custom("c", |_| 0.0)), None);
    }

    #[test]
    fn catalog_and_params() {
        for name in catalog_names() {
            let p = builtin_problem(name).unwrap();
            assert_eq!(p.initial.dim(), p.model.dim(), "{name}");
            assert!(p.t_end > p.t0);
        }
        assert!(matches!(builtin_problem("nope"), Err(Error::UnknownProblem(_))));
        let bad = ProblemParams::default().set("zeta", 1.0);
        assert!(builtin_problem_with("ou-1d", &bad).is_err());
        let d5 = ProblemParams::default().set("d", 5.0);
        assert_eq!(builtin_problem_with("ou-nd", &d5).unwrap().model.dim(), 5);
        assert!(builtin_problem_with("ou-nd", &ProblemParams::default().set("d", 2.5)).is_err());
    }

    #[test]
    fn overridden_pendulum_has_no_stored_reference() {
        let p = builtin_problem_with("pendulum-sin", &ProblemParams::default().set("x0", 1.0)).unwrap();
        assert!(matches!(p.reference, Reference::None));
    }
}
