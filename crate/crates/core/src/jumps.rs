//! Poisson-driven jumps: `dz = f dt + G dw + sum_i h_i(t, z) dq_i`.
//!
//! Jump times are drawn before a trajectory is integrated and merged into its
//! time grid, so every jump lands on a grid point. The jump is applied after
//! the diffusion step into that point.

use crate::linalg::Vector;
use crate::llcore::{step, SchemeConfig};
use crate::model::SdeModel;
use crate::weakmc::uniform_open;
use crate::{Error, Result, TimeGrid};
use rand::RngCore;
use std::fmt;
use std::sync::Arc;

/// Relative tolerance under which two times are the same grid point.
pub const TIME_TOL: f64 = 1e-14;

type Coefficient = dyn Fn(f64, &Vector) -> Vector + Send + Sync;

/// One Poisson channel with intensity `mu` and jump coefficient `h(t, z)`.
#[derive(Clone)]
pub struct JumpChannel {
    pub intensity: f64,
    pub label: String,
    coeff: Arc<Coefficient>,
}

impl JumpChannel {
    pub fn coefficient(&self, t: f64, z: &Vector) -> Vector {
        (self.coeff)(t, z)
    }
}

impl fmt::Debug for JumpChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JumpChannel")
            .field("intensity", &self.intensity)
            .field("label", &self.label)
            .finish()
    }
}

#[derive(Debug, Clone, Default)]
pub struct JumpSpec {
    channels: Vec<JumpChannel>,
}

impl JumpSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn channel<F>(mut self, intensity: f64, label: impl Into<String>, h: F) -> Result<Self>
    where
        F: Fn(f64, &Vector) -> Vector + Send + Sync + 'static,
    {
        if !(intensity >= 0.0) || !intensity.is_finite() {
            return Err(Error::NegativeIntensity(intensity));
        }
        self.channels.push(JumpChannel {
            intensity,
            label: label.into(),
            coeff: Arc::new(h),
        });
        Ok(self)
    }

    /// Channel with a state-independent jump of size `c`.
    pub fn constant(self, intensity: f64, c: Vector) -> Result<Self> {
        let label = format!("constant{:?}", c.as_slice());
        self.channel(intensity, label, move |_, _| c.clone())
    }

    /// Channel with jump `c * z`.
    pub fn proportional(self, intensity: f64, c: f64) -> Result<Self> {
        self.channel(intensity, format!("proportional({c})"), move |_, z| z * c)
    }

    pub fn channels(&self) -> &[JumpChannel] {
        &self.channels
    }

    pub fn intensities(&self) -> Vec<f64> {
        self.channels.iter().map(|c| c.intensity).collect()
    }
}

/// Sorted jump times per channel, all in `(t0, T]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct JumpSchedule {
    pub times: Vec<Vec<f64>>,
}

impl JumpSchedule {
    pub fn is_empty(&self) -> bool {
        self.times.iter().all(Vec::is_empty)
    }

    pub fn total(&self) -> usize {
        self.times.iter().map(Vec::len).sum()
    }

    /// Channels that jump at `t`.
    pub fn channels_at(&self, t: f64) -> Vec<usize> {
        self.times
            .iter()
            .enumerate()
            .filter(|(_, ts)| contains_time(ts, t))
            .map(|(i, _)| i)
            .collect()
    }
}

pub(crate) fn same_time(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIME_TOL * a.abs().max(b.abs()).max(1.0)
}

fn contains_time(sorted: &[f64], t: f64) -> bool {
    let i = sorted.partition_point(|&s| s < t);
    (i < sorted.len() && same_time(sorted[i], t)) || (i > 0 && same_time(sorted[i - 1], t))
}

/// Draws exponential inter-arrival times for each channel.
///
/// Gaps below `1e-14` and times that coincide with another channel's times
/// are redrawn. A zero intensity gives an empty channel and consumes no
/// random numbers.
pub fn sample_jump_times(mu: &[f64], t0: f64, t_end: f64, rng: &mut dyn RngCore) -> Result<JumpSchedule> {
    if !(t_end > t0) {
        return Err(Error::InvalidConfig(format!("empty time span [{t0}, {t_end}]")));
    }
    if let Some(&bad) = mu.iter().find(|m| !(**m >= 0.0) || !m.is_finite()) {
        return Err(Error::NegativeIntensity(bad));
    }
    let mut times: Vec<Vec<f64>> = Vec::with_capacity(mu.len());
    for &rate in mu {
        let mut channel = Vec::new();
        if rate > 0.0 {
            let mut t = t0;
            loop {
                let gap = -uniform_open(rng).ln() / rate;
                if gap < 1e-14 {
                    continue;
                }
                let next = t + gap;
                if next > t_end {
                    break;
                }
                if times.iter().any(|other| contains_time(other, next)) || same_time(next, t) {
                    continue;
                }
                channel.push(next);
                t = next;
            }
        }
        times.push(channel);
    }
    Ok(JumpSchedule { times })
}

/// Union of the base grid and every jump time, deduplicated.
pub fn merged_grid(base: &TimeGrid, sched: &JumpSchedule) -> TimeGrid {
    if sched.is_empty() {
        return base.clone();
    }
    let mut jumps: Vec<f64> = sched.times.iter().flatten().copied().collect();
    jumps.sort_by(f64::total_cmp);
    let base = base.times();
    let mut out = Vec::with_capacity(base.len() + jumps.len());
    let (mut i, mut j) = (0, 0);
    while i < base.len() || j < jumps.len() {
        let next = if j >= jumps.len() || (i < base.len() && base[i] <= jumps[j]) {
            i += 1;
            base[i - 1]
        } else {
            j += 1;
            jumps[j - 1]
        };
        match out.last() {
            Some(&last) if same_time(last, next) => {}
            _ => out.push(next),
        }
    }
    TimeGrid::from_sorted_unchecked(out)
}

/// One LL step from `t_prev` to `t`, followed by the jumps scheduled at `t`.
///
/// All jump coefficients are evaluated at the pre-jump state.
#[allow(clippy::too_many_arguments)]
pub fn jump_step(
    scheme: &SchemeConfig,
    model: &dyn SdeModel,
    jumps: &JumpSpec,
    sched: &JumpSchedule,
    t_prev: f64,
    t: f64,
    z_prev: &Vector,
    rng: &mut dyn RngCore,
) -> Result<Vector> {
    let z_minus = step(scheme, model, t_prev, z_prev, t - t_prev, rng)?;
    let active = sched.channels_at(t);
    Ok(apply_jumps(jumps, &active, t, z_minus))
}

pub(crate) fn apply_jumps(jumps: &JumpSpec, active: &[usize], t: f64, z_minus: Vector) -> Vector {
    if active.is_empty() {
        return z_minus;
    }
    let mut z = z_minus.clone();
    for &i in active {
        z += jumps.channels[i].coefficient(t, &z_minus);
    }
    z
}
