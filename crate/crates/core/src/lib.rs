//! Weak Local Linearization (LL) integrators for stochastic differential
//! equations with additive noise, optionally driven by Poisson jumps.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: Padé matrix exponential with scaling and squaring,
//!   Krylov-Padé `exp(A)v`, symmetric PSD square root and the
//!   Lyapunov-type pencil solver.
//! - [`model`]: the [`SdeModel`](model::SdeModel) trait, derivative
//!   checking and the built-in problem catalog.
//! - [`llcore`]: the deterministic increment `phi` and step covariance
//!   `Sigma` computed by five different routes, and the single LL step.
//! - [`jumps`]: Poisson jump times, grid merging and the jump-adjusted step.
//! - [`weakmc`]: Monte Carlo weak-error estimation and order fitting.
//! - [`experiment`]: config-driven convergence studies and trajectory dumps
//!   used by the `weak-ll` binary.
//!
//! ```
//! use weak_ll::llcore::{increment, SchemeConfig, Variant};
//! use weak_ll::model::builtin_problem;
//! use nalgebra::dvector;
//!
//! let problem = builtin_problem("ou-1d").unwrap();
//! let cfg = SchemeConfig::new(Variant::PadeGeneral, 2);
//! let inc = increment(&cfg, problem.model.as_ref(), 0.0, &dvector![1.0], 0.5).unwrap();
//! assert!((inc.phi[0] - ((-0.5f64).exp() - 1.0)).abs() < 1e-12);
//! ```

pub mod error;
pub mod experiment;
pub mod grid;
pub mod jumps;
pub mod linalg;
pub mod llcore;
pub mod model;
pub mod weakmc;

pub use error::{Error, Result};
pub use grid::TimeGrid;
