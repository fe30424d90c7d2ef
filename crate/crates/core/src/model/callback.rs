use super::SdeModel;
use crate::linalg::{Matrix, Vector};

type VecFn = Box<dyn Fn(f64, &Vector) -> Vector + Send + Sync>;
type MatFn = Box<dyn Fn(f64, &Vector) -> Matrix + Send + Sync>;
type HessFn = Box<dyn Fn(f64, &Vector, &Vector) -> Vector + Send + Sync>;
type TimeMatFn = Box<dyn Fn(f64) -> Matrix + Send + Sync>;

/// A model assembled from closures.
///
/// Unset derivatives default to zero, so a drift that is not affine needs an
/// explicit Jacobian and Hessian contraction. Run
/// [`validate_model`](super::validate_model) on anything hand-written.
///
/// ```
/// use weak_ll::model::{CallbackModel, SdeModel};
/// use nalgebra::{dmatrix, dvector};
///
/// let m = CallbackModel::new(1, 1)
///     .with_drift(|_, x| -x * 2.0)
///     .with_jacobian(|_, _| dmatrix![-2.0])
///     .with_diffusion(|_| dmatrix![0.5])
///     .autonomous()
///     .constant_diffusion();
/// assert_eq!(m.drift(0.0, &dvector![1.0])[0], -2.0);
/// ```
pub struct CallbackModel {
    d: usize,
    m: usize,
    drift: VecFn,
    jacobian: MatFn,
    drift_t: VecFn,
    hess_quad: HessFn,
    diffusion: TimeMatFn,
    diffusion_dt: TimeMatFn,
    autonomous: bool,
    constant_diffusion: bool,
}

impl CallbackModel {
    pub fn new(d: usize, m: usize) -> Self {
        Self {
            d,
            m,
            drift: Box::new(move |_, _| Vector::zeros(d)),
            jacobian: Box::new(move |_, _| Matrix::zeros(d, d)),
            drift_t: Box::new(move |_, _| Vector::zeros(d)),
            hess_quad: Box::new(move |_, _, _| Vector::zeros(d)),
            diffusion: Box::new(move |_| Matrix::zeros(d, m)),
            diffusion_dt: Box::new(move |_| Matrix::zeros(d, m)),
            autonomous: false,
            constant_diffusion: false,
        }
    }

    pub fn with_drift(mut self, f: impl Fn(f64, &Vector) -> Vector + Send + Sync + 'static) -> Self {
        self.drift = Box::new(f);
        self
    }

    pub fn with_jacobian(mut self, f: impl Fn(f64, &Vector) -> Matrix + Send + Sync + 'static) -> Self {
        self.jacobian = Box::new(f);
        self
    }

    pub fn with_drift_t(mut self, f: impl Fn(f64, &Vector) -> Vector + Send + Sync + 'static) -> Self {
        self.drift_t = Box::new(f);
        self
    }

    pub fn with_hess_quad(
        mut self,
        f: impl Fn(f64, &Vector, &Vector) -> Vector + Send + Sync + 'static,
    ) -> Self {
        self.hess_quad = Box::new(f);
        self
    }

    pub fn with_diffusion(mut self, f: impl Fn(f64) -> Matrix + Send + Sync + 'static) -> Self {
        self.diffusion = Box::new(f);
        self
    }

    pub fn with_diffusion_dt(mut self, f: impl Fn(f64) -> Matrix + Send + Sync + 'static) -> Self {
        self.diffusion_dt = Box::new(f);
        self
    }

    pub fn autonomous(mut self) -> Self {
        self.autonomous = true;
        self
    }

    pub fn constant_diffusion(mut self) -> Self {
        self.constant_diffusion = true;
        self
    }
}

impl SdeModel for CallbackModel {
    fn dim(&self) -> usize {
        self.d
    }
    fn noise_dim(&self) -> usize {
        self.m
    }
    fn drift(&self, t: f64, x: &Vector) -> Vector {
        (self.drift)(t, x)
    }
    fn jacobian(&self, t: f64, x: &Vector) -> Matrix {
        (self.jacobian)(t, x)
    }
    fn drift_t(&self, t: f64, x: &Vector) -> Vector {
        (self.drift_t)(t, x)
    }
    fn hess_quad(&self, t: f64, x: &Vector, g: &Vector) -> Vector {
        (self.hess_quad)(t, x, g)
    }
    fn diffusion(&self, t: f64) -> Matrix {
        (self.diffusion)(t)
    }
    fn diffusion_deriv(&self, t: f64, order: usize) -> Matrix {
        match order {
            0 => (self.diffusion)(t),
            1 => (self.diffusion_dt)(t),
            _ => Matrix::zeros(self.d, self.m),
        }
    }
    fn is_autonomous(&self) -> bool {
        self.autonomous
    }
    fn has_constant_diffusion(&self) -> bool {
        self.constant_diffusion
    }
}
