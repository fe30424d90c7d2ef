use crate::linalg::Vector;
use crate::{Error, Result};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

/// Level index reserved for fine-grid reference runs.
pub const REFERENCE_LEVEL: u32 = (1 << 24) - 1;

/// Stream number of trajectory `k` at level `level`.
///
/// The low 40 bits carry the trajectory index and the high 24 bits the level.
pub fn stream_id(level: u32, k: u64) -> u64 {
    debug_assert!(k < 1 << 40 && level < 1 << 24);
    ((level as u64) << 40) | k
}

/// Generator for one trajectory: ChaCha8 keyed by `seed`, on stream `stream`.
pub fn trajectory_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform on the open interval `(0, 1)` with 53 random bits.
pub fn uniform_open(rng: &mut dyn RngCore) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

fn unit_normal() -> &'static Normal {
    static N: OnceLock<Normal> = OnceLock::new();
    N.get_or_init(Normal::standard)
}

/// Standard normal by inversion of the CDF, one uniform per variate.
pub fn standard_normal(rng: &mut dyn RngCore) -> f64 {
    unit_normal().inverse_cdf(uniform_open(rng))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum NoiseKind {
    #[default]
    Gaussian,
    /// Components are `+1` or `-1` with probability 1/2.
    TwoPoint,
}

impl NoiseKind {
    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::Gaussian => "gaussian",
            NoiseKind::TwoPoint => "two-point",
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NoiseKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gaussian" => Ok(NoiseKind::Gaussian),
            "two-point" => Ok(NoiseKind::TwoPoint),
            _ => Err(Error::InvalidConfig(format!("unknown noise kind `{s}`"))),
        }
    }
}

/// `n` independent variates of the given kind.
pub fn draw_noise(kind: NoiseKind, n: usize, rng: &mut dyn RngCore) -> Vector {
    match kind {
        NoiseKind::Gaussian => Vector::from_fn(n, |_, _| standard_normal(rng)),
        NoiseKind::TwoPoint => Vector::from_fn(n, |_, _| {
            if rng.next_u64() >> 63 == 0 {
                1.0
            } else {
                -1.0
            }
        }),
    }
}
