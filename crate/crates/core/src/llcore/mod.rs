//! Local linearization increments and the single LL step
//! `y_{n+1} = y_n + phi + Sigma^{1/2} xi`.
//!
//! Five routes compute the pair `(phi, Sigma)`:
//!
//! | variant        | construction                                   | requires                   |
//! |----------------|------------------------------------------------|----------------------------|
//! | `pade-general` | exponential of the chained block matrix `A_b`   | nothing                    |
//! | `pade-const-g` | exponential of the Van Loan matrix `C_b`        | constant `G`               |
//! | `krylov`       | Arnoldi `exp(M^T h) e_i`, one column at a time  | nothing                    |
//! | `ozaki-shoji`  | closed form with `A^{-1}` and a pencil solve    | autonomous, constant `G`   |
//! | `midpoint`     | midpoint exponential quadrature                 | `beta = 2`                 |

mod pieces;
mod routes;

pub use pieces::{affine_pieces, build_a_beta, build_c_beta, AffinePieces, AugmentedKind, AugmentedMatrix};
pub use routes::{
    increment_krylov, increment_midpoint, increment_ozaki_shoji, increment_pade_const_g,
    increment_pade_general,
};

use crate::linalg::{KrylovConfig, Matrix, PadeConfig, Vector};
use crate::model::SdeModel;
use crate::weakmc::{draw_noise, NoiseKind};
use crate::{Error, Result};
use rand::RngCore;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    PadeGeneral,
    PadeConstG,
    Krylov,
    OzakiShoji,
    Midpoint,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::PadeGeneral,
        Variant::PadeConstG,
        Variant::Krylov,
        Variant::OzakiShoji,
        Variant::Midpoint,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::PadeGeneral => "pade-general",
            Variant::PadeConstG => "pade-const-g",
            Variant::Krylov => "krylov",
            Variant::OzakiShoji => "ozaki-shoji",
            Variant::Midpoint => "midpoint",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::UnknownScheme(s.to_string()))
    }
}

/// Everything needed to take an LL step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub variant: Variant,
    /// Weak order of the discretization, 1 or 2.
    pub beta: u8,
    pub pade: PadeConfig,
    /// Used by the `krylov` variant only.
    pub krylov: KrylovConfig,
    pub noise: NoiseKind,
    /// Adds `c h^2` to every component of `phi`. Zero in normal use; a
    /// nonzero value turns the drift increment into a first-order one.
    pub phi_defect: f64,
}

impl SchemeConfig {
    pub fn new(variant: Variant, beta: u8) -> Self {
        Self {
            variant,
            beta,
            pade: PadeConfig::default(),
            krylov: KrylovConfig::default(),
            noise: NoiseKind::Gaussian,
            phi_defect: 0.0,
        }
    }

    pub fn with_pade(mut self, p: usize, q: usize) -> Self {
        self.pade = PadeConfig::new(p, q);
        self.krylov.pade = self.pade;
        self
    }

    pub fn with_krylov_dim(mut self, m: usize) -> Self {
        self.krylov.m = m;
        self
    }

    pub fn with_noise(mut self, noise: NoiseKind) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_phi_defect(mut self, c: f64) -> Self {
        self.phi_defect = c;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.beta != 1 && self.beta != 2 {
            return Err(Error::InvalidConfig(format!("beta must be 1 or 2, got {}", self.beta)));
        }
        if self.variant == Variant::Midpoint && self.beta != 2 {
            return Err(Error::Precondition {
                variant: "midpoint",
                requirement: "beta = 2",
            });
        }
        if !self.phi_defect.is_finite() {
            return Err(Error::InvalidConfig("phi defect must be finite".into()));
        }
        self.pade.validate()?;
        if self.variant == Variant::Krylov {
            self.krylov.validate()?;
        }
        Ok(())
    }

    /// Checks the model-dependent preconditions of the variant.
    pub fn check_model(&self, model: &dyn SdeModel) -> Result<()> {
        self.validate()?;
        match self.variant {
            Variant::PadeConstG if !model.has_constant_diffusion() => Err(Error::Precondition {
                variant: "pade-const-g",
                requirement: "a constant diffusion matrix",
            }),
            Variant::OzakiShoji if !model.is_autonomous() => Err(Error::Precondition {
                variant: "ozaki-shoji",
                requirement: "an autonomous model",
            }),
            Variant::OzakiShoji if !model.has_constant_diffusion() => Err(Error::Precondition {
                variant: "ozaki-shoji",
                requirement: "a constant diffusion matrix",
            }),
            _ => Ok(()),
        }
    }

    /// Short label such as `pade-general-b2-p6q6`.
    pub fn label(&self) -> String {
        let mut s = format!("{}-b{}", self.variant, self.beta);
        if self.variant != Variant::OzakiShoji && self.variant != Variant::Midpoint {
            s.push_str(&format!("-p{}q{}", self.pade.p, self.pade.q));
        }
        if self.variant == Variant::Krylov {
            s.push_str(&format!("-m{}", self.krylov.m));
        }
        if self.noise == NoiseKind::TwoPoint {
            s.push_str("-2pt");
        }
        if self.phi_defect != 0.0 {
            s.push_str(&format!("-defect{}", self.phi_defect));
        }
        s
    }
}

/// Deterministic increment, step covariance and its symmetric square root.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalIncrement {
    pub phi: Vector,
    pub sigma: Matrix,
    pub sigma_sqrt: Matrix,
}

/// `(phi, Sigma)` by the route selected in `cfg`.
pub fn increment(
    cfg: &SchemeConfig,
    model: &dyn SdeModel,
    t: f64,
    y: &Vector,
    h: f64,
) -> Result<LocalIncrement> {
    let mut inc = match cfg.variant {
        Variant::PadeGeneral => increment_pade_general(model, t, y, h, cfg),
        Variant::PadeConstG => increment_pade_const_g(model, t, y, h, cfg),
        Variant::Krylov => increment_krylov(model, t, y, h, cfg),
        Variant::OzakiShoji => increment_ozaki_shoji(model, t, y, h, cfg),
        Variant::Midpoint => increment_midpoint(model, t, y, h, cfg),
    }?;
    if cfg.phi_defect != 0.0 {
        inc.phi.add_scalar_mut(cfg.phi_defect * h * h);
    }
    Ok(inc)
}

/// One LL step of size `h` from `(t, y)`.
///
/// Always draws `d` variates, Gaussian or two-point per `cfg.noise`, even
/// when the covariance vanishes.
pub fn step(
    cfg: &SchemeConfig,
    model: &dyn SdeModel,
    t: f64,
    y: &Vector,
    h: f64,
    rng: &mut dyn RngCore,
) -> Result<Vector> {
    if !(h > 0.0) {
        return Err(Error::InvalidConfig(format!("step size must be positive, got {h}")));
    }
    let inc = increment(cfg, model, t, y, h)?;
    let xi = draw_noise(cfg.noise, y.len(), rng);
    let mut out = y + &inc.phi;
    out.gemv(1.0, &inc.sigma_sqrt, &xi, 1.0);
    Ok(out)
}

#[cfg(test)]
mod tests;
