//! SDE models `dx = f(t, x) dt + G(t) dw`, initial laws, test functionals and
//! the built-in problem catalog.

mod callback;
mod catalog;
mod validate;

pub use callback::CallbackModel;
pub use catalog::{
    builtin_problem, builtin_problem_with, catalog_names, LinearSde, PendulumSin, Problem,
    ProblemParams, Reference, StoredReference, TimeDependentNoise,
};
pub use validate::{validate_model, Violation, ViolationKind};

use crate::linalg::{Matrix, Vector};
use crate::{Error, Result};
use rand::RngCore;
use std::fmt;
use std::sync::Arc;

/// Coefficients of an SDE with additive noise and their derivatives.
///
/// Implementations must be pure: the Monte Carlo harness calls them from
/// several threads at once.
pub trait SdeModel: Send + Sync {
    /// State dimension `d`.
    fn dim(&self) -> usize;

    /// Number of Wiener processes `m`.
    fn noise_dim(&self) -> usize;

    fn drift(&self, t: f64, x: &Vector) -> Vector;

    /// `d x d` Jacobian `f_x`.
    fn jacobian(&self, t: f64, x: &Vector) -> Matrix;

    /// Partial derivative `f_t`.
    fn drift_t(&self, t: f64, x: &Vector) -> Vector {
        let _ = (t, x);
        Vector::zeros(self.dim())
    }

    /// Component `k` is `g^T (d^2 f_k / dx^2) g`.
    fn hess_quad(&self, t: f64, x: &Vector, g: &Vector) -> Vector;

    /// `d x m` diffusion matrix `G(t)`.
    fn diffusion(&self, t: f64) -> Matrix;

    /// `order`-th time derivative of `G`. Only orders 0 and 1 are required.
    fn diffusion_deriv(&self, t: f64, order: usize) -> Matrix {
        if order == 0 {
            self.diffusion(t)
        } else {
            Matrix::zeros(self.dim(), self.noise_dim())
        }
    }

    /// True when `f` does not depend on `t`.
    fn is_autonomous(&self) -> bool {
        false
    }

    /// True when `G` does not depend on `t`.
    fn has_constant_diffusion(&self) -> bool {
        false
    }
}

/// `sum_j hess_quad(t, x, g_j)` over the columns of `G(t)`.
pub fn hess_term(model: &dyn SdeModel, t: f64, x: &Vector, g: &Matrix) -> Vector {
    let mut acc = Vector::zeros(model.dim());
    for col in g.column_iter() {
        acc += model.hess_quad(t, x, &col.into_owned());
    }
    acc
}

type Sampler = dyn Fn(&mut dyn RngCore) -> Vector + Send + Sync;

/// Law of the initial state.
#[derive(Clone)]
pub enum InitialLaw {
    Point(Vector),
    Sampler { dim: usize, sample: Arc<Sampler> },
}

impl InitialLaw {
    pub fn sampler<F>(dim: usize, f: F) -> Self
    where
        F: Fn(&mut dyn RngCore) -> Vector + Send + Sync + 'static,
    {
        InitialLaw::Sampler {
            dim,
            sample: Arc::new(f),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            InitialLaw::Point(x) => x.len(),
            InitialLaw::Sampler { dim, .. } => *dim,
        }
    }

    pub fn draw(&self, rng: &mut dyn RngCore) -> Vector {
        match self {
            InitialLaw::Point(x) => x.clone(),
            InitialLaw::Sampler { sample, .. } => sample(rng),
        }
    }
}

impl fmt::Debug for InitialLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialLaw::Point(x) => f.debug_tuple("Point").field(&x.as_slice()).finish(),
            InitialLaw::Sampler { dim, .. } => f.debug_struct("Sampler").field("dim", dim).finish(),
        }
    }
}

/// What a functional computes, when that is known in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionalKind {
    /// `x_i` (zero-based index).
    Component(usize),
    /// `x_i^2` (zero-based index).
    ComponentSquared(usize),
    Custom,
}

/// A test function `g(x)` applied to terminal states.
#[derive(Clone)]
pub struct TestFunctional {
    pub label: String,
    pub kind: FunctionalKind,
    eval: Arc<dyn Fn(&Vector) -> f64 + Send + Sync>,
}

impl TestFunctional {
    pub fn component(i: usize) -> Self {
        Self {
            label: format!("x{}", i + 1),
            kind: FunctionalKind::Component(i),
            eval: Arc::new(move |x| x[i]),
        }
    }

    pub fn component_squared(i: usize) -> Self {
        Self {
            label: format!("x{}^2", i + 1),
            kind: FunctionalKind::ComponentSquared(i),
            eval: Arc::new(move |x| x[i] * x[i]),
        }
    }

    pub fn custom<F>(label: impl Into<String>, f: F) -> Self
    where
        F: Fn(&Vector) -> f64 + Send + Sync + 'static,
    {
        Self {
            label: label.into(),
            kind: FunctionalKind::Custom,
            eval: Arc::new(f),
        }
    }

    /// Parses `x1`, `x2^2`, ...; `x` and `x^2` mean the first component.
    pub fn parse(label: &str) -> Result<Self> {
        let s = label.trim();
        let (body, squared) = match s.strip_suffix("^2") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let idx = match body.strip_prefix('x') {
            Some("") => Some(0),
            Some(n) => n.parse::<usize>().ok().filter(|&k| k >= 1).map(|k| k - 1),
            None => None,
        }
        .ok_or_else(|| Error::UnknownFunctional(label.to_string()))?;
        Ok(if squared {
            Self::component_squared(idx)
        } else {
            Self::component(idx)
        })
    }

    pub fn eval(&self, x: &Vector) -> f64 {
        (self.eval)(x)
    }

    /// Largest state index the functional reads, if known.
    pub fn max_index(&self) -> Option<usize> {
        match self.kind {
            FunctionalKind::Component(i) | FunctionalKind::ComponentSquared(i) => Some(i),
            FunctionalKind::Custom => None,
        }
    }
}

impl fmt::Debug for TestFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunctional")
            .field("label", &self.label)
            .field("kind", &self.kind)
            .finish()
    }
}
